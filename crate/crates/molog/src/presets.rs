//! Ready-made connective sets for the case-study logics, their model
//! preparation hooks, derived condition renderings, and independently coded
//! reference bisimulation checkers used as test oracles.

use std::collections::BTreeSet;

use crate::connective::ConnectiveSet;
use crate::error::ModelError;
use crate::intuit::{derive_intuitionistic, derive_modal_intuitionistic, SOURCE_PREORDER};
use crate::logicfile::parse_logic;
use crate::model::CModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    Modal,
    Lambek,
    Intuitionistic,
    ModalIntuitionistic,
}

pub const MODAL_LOGIC: &str = "\
# modal logic
letter p  : sign +, quant E, type 1
letter np : sign -, quant A, type 1
conn dia : perm (2,1), sign +, quant E, types (1;1), tonicity (+)
conn box : perm (2,1), sign -, quant A, types (1;1), tonicity (+)
bool 1
share p np
share r dia box
";

pub const LAMBEK_LOGIC: &str = "\
# Lambek calculus
letter p : sign +, quant E, type 1
conn comp  : perm (1,2,3), sign +, quant E, types (1;1;1), tonicity (+,+)
conn under : perm (2,3,1), sign -, quant A, types (1;1;1), tonicity (-,+)
conn over  : perm (3,1,2), sign -, quant A, types (1;1;1), tonicity (+,-)
share r comp under over
";

pub const INTUITIONISTIC_LOGIC: &str = "\
# intuitionistic logic over derived implication models
letter p   : sign +, quant E, type 1
letter top : sign +, quant E, type 1
letter bot : sign -, quant A, type 1
conn imp : perm (2,3,1), sign -, quant A, types (1;1;1), tonicity (-,+)
bool 1
share top bot
";

pub const MODAL_INTUITIONISTIC_LOGIC: &str = "\
# modal intuitionistic logic: box and negated diamond as compositions
letter p   : sign +, quant E, type 1
letter top : sign +, quant E, type 1
letter bot : sign -, quant A, type 1
conn imp : perm (2,3,1), sign -, quant A, types (1;1;1), tonicity (-,+)
skel c1 : perm (2,1), sign -, quant A, types (1;1), tonicity (+)
skel c2 : perm (2,1), sign -, quant A, types (1;1), tonicity (+)
skel c3 : perm (2,1), sign +, quant E, types (1;1), tonicity (+)
molecular c  := c1(c2)
molecular nc := -c1(c3)
bool 1
share top bot
share r c1
share rd c2 c3
";

#[derive(Debug, Clone)]
pub struct Preset {
    pub kind: PresetKind,
    pub name: &'static str,
    pub set: ConnectiveSet,
}

/// Looks up a preset by name: `modal`, `lambek`, `intuitionistic` or
/// `modal-intuitionistic`.
pub fn preset(name: &str) -> Option<Preset> {
    let (kind, name) = match name {
        "modal" => (PresetKind::Modal, "modal"),
        "lambek" => (PresetKind::Lambek, "lambek"),
        "intuitionistic" => (PresetKind::Intuitionistic, "intuitionistic"),
        "modal-intuitionistic" => (PresetKind::ModalIntuitionistic, "modal-intuitionistic"),
        _ => return None,
    };
    let set = parse_logic(logic_text(kind)).expect("preset declarations parse");
    Some(Preset { kind, name, set })
}

pub fn logic_text(kind: PresetKind) -> &'static str {
    match kind {
        PresetKind::Modal => MODAL_LOGIC,
        PresetKind::Lambek => LAMBEK_LOGIC,
        PresetKind::Intuitionistic => INTUITIONISTIC_LOGIC,
        PresetKind::ModalIntuitionistic => MODAL_INTUITIONISTIC_LOGIC,
    }
}

/// A preset's connective set over a custom stock of letters. The modal kind
/// pairs every letter with its Boolean negation on a shared relation; the
/// implication kinds keep their truth-constant letters.
pub fn preset_with_letters(kind: PresetKind, letters: &[&str]) -> ConnectiveSet {
    let mut text = String::new();
    for l in letters {
        text.push_str(&format!("letter {l} : sign +, quant E, type 1\n"));
        if kind == PresetKind::Modal {
            text.push_str(&format!("letter n{l} : sign -, quant A, type 1\n"));
        }
    }
    match kind {
        PresetKind::Modal => {
            text.push_str(
                "conn dia : perm (2,1), sign +, quant E, types (1;1), tonicity (+)\n\
                 conn box : perm (2,1), sign -, quant A, types (1;1), tonicity (+)\n\
                 bool 1\n",
            );
            for l in letters {
                text.push_str(&format!("share {l} n{l}\n"));
            }
            text.push_str("share r dia box\n");
        }
        PresetKind::Lambek => {
            text.push_str(
                "conn comp  : perm (1,2,3), sign +, quant E, types (1;1;1), tonicity (+,+)\n\
                 conn under : perm (2,3,1), sign -, quant A, types (1;1;1), tonicity (-,+)\n\
                 conn over  : perm (3,1,2), sign -, quant A, types (1;1;1), tonicity (+,-)\n\
                 share r comp under over\n",
            );
        }
        PresetKind::Intuitionistic | PresetKind::ModalIntuitionistic => {
            text.push_str(
                "letter top : sign +, quant E, type 1\n\
                 letter bot : sign -, quant A, type 1\n\
                 conn imp : perm (2,3,1), sign -, quant A, types (1;1;1), tonicity (-,+)\n",
            );
            if kind == PresetKind::ModalIntuitionistic {
                text.push_str(
                    "skel c1 : perm (2,1), sign -, quant A, types (1;1), tonicity (+)\n\
                     skel c2 : perm (2,1), sign -, quant A, types (1;1), tonicity (+)\n\
                     skel c3 : perm (2,1), sign +, quant E, types (1;1), tonicity (+)\n\
                     molecular c  := c1(c2)\n\
                     molecular nc := -c1(c3)\n",
                );
            }
            text.push_str("bool 1\nshare top bot\n");
            if kind == PresetKind::ModalIntuitionistic {
                text.push_str("share r c1\nshare rd c2 c3\n");
            }
        }
    }
    parse_logic(&text).expect("generated preset text parses")
}

impl Preset {
    /// Prepares a parsed model for this preset: the implication presets
    /// derive the ternary relation from a raw preorder model (when the model
    /// supplies `R`), the others check that every relation group is present
    /// with its declared arity.
    pub fn prepare_model(&self, raw: &CModel) -> Result<CModel, ModelError> {
        match self.kind {
            PresetKind::Modal | PresetKind::Lambek => {
                let m = raw.clone();
                self.check_groups(&m)?;
                Ok(m)
            }
            PresetKind::Intuitionistic => {
                if raw.relation_opt(SOURCE_PREORDER).is_some() {
                    derive_intuitionistic(raw, &self.set)
                } else {
                    self.check_groups(raw)?;
                    Ok(raw.clone())
                }
            }
            PresetKind::ModalIntuitionistic => {
                if raw.relation_opt(SOURCE_PREORDER).is_some() {
                    derive_modal_intuitionistic(raw, &self.set)
                } else {
                    self.check_groups(raw)?;
                    Ok(raw.clone())
                }
            }
        }
    }

    fn check_groups(&self, model: &CModel) -> Result<(), ModelError> {
        for (group, _) in self.set.relation_groups() {
            let rel = model.relation(&group)?;
            let expected = self
                .set
                .group_blocks(&group)
                .map(|b| b.iter().sum::<u32>() as usize)
                .unwrap_or(rel.arity);
            if rel.arity != expected && !rel.tuples.is_empty() {
                return Err(ModelError::TupleArity {
                    group,
                    tuple: vec![],
                    got: rel.arity,
                    expected,
                });
            }
        }
        Ok(())
    }

    /// Additional condition renderings tied to this preset's model class:
    /// the implication clause unfolded over the underlying preorder, and for
    /// the composed diamond the direction-swapped form of its negation's
    /// conditions.
    pub fn derived_conditions(&self) -> Vec<String> {
        match self.kind {
            PresetKind::Modal | PresetKind::Lambek => vec![],
            PresetKind::Intuitionistic => vec![implication_unfolded()],
            PresetKind::ModalIntuitionistic => {
                let mut lines = vec![implication_unfolded()];
                lines.extend(diamond_conditions_by_direction_swap(&self.set));
                lines
            }
        }
    }

    /// The clause rendering followed by the preset's derived conditions.
    pub fn conditions_text(&self) -> String {
        let clauses = crate::bisim::generate_clauses(&self.set)
            .expect("preset clauses generate")
            .render();
        let derived = self.derived_conditions();
        if derived.is_empty() {
            clauses
        } else {
            let mut out = clauses;
            out.push_str("\n# derived conditions\n");
            for line in derived {
                out.push_str(&line);
                out.push('\n');
            }
            out
        }
    }
}

/// The implication clause restated over the underlying preorder, using the
/// defining equivalence of the derived ternary relation
/// (`R_imp a b c` iff `R a c` and `R b c`).
fn implication_unfolded() -> String {
    "[imp/**] if x Z x' and R' x' x2' and R' x1' x2' \
     then exists x1 x2: x1' Z x1 and x2 Z x2' and R x x2 and R x1 x2"
        .to_string()
}

/// Conditions for the non-uniform composed diamond, obtained from the
/// conditions of its Boolean negation by swapping the direction of the
/// trigger pair in the root clause.
fn diamond_conditions_by_direction_swap(set: &ConnectiveSet) -> Vec<String> {
    let clauses = crate::bisim::generate_clauses(set).expect("preset clauses generate");
    let mut out = Vec::new();
    for clause in &clauses.clauses {
        if clause.id == "nc" {
            let rendered = crate::bisim::render_clause(clause);
            out.push(
                rendered
                    .replacen("[nc] if x Z x'", "[nc/*] if x' Z x", 1)
                    .to_string(),
            );
        } else if clause.id == "nc/1" {
            let rendered = crate::bisim::render_clause(clause);
            out.push(rendered.replacen("[nc/1]", "[nc/1/*]", 1).to_string());
        }
    }
    out
}

/// Maximal standard modal bisimulation between two Kripke-style models,
/// computed by refinement directly from the textbook clauses: letter harmony
/// in both directions, forth along the relation, back along it. Shares
/// nothing with the clause-driven solver.
pub fn reference_modal_bisim(
    m1: &CModel,
    m2: &CModel,
    letter_groups: &[&str],
    rel_group: &str,
) -> Result<BTreeSet<(u32, u32)>, ModelError> {
    let r1 = &m1.relation(rel_group)?.tuples;
    let r2 = &m2.relation(rel_group)?.tuples;
    let holds = |m: &CModel, g: &str, w: u32| -> Result<bool, ModelError> {
        Ok(m.relation(g)?.tuples.contains(&vec![w]))
    };
    let mut z: BTreeSet<(u32, u32)> = BTreeSet::new();
    for w in 0..m1.n_worlds() as u32 {
        'pair: for v in 0..m2.n_worlds() as u32 {
            for g in letter_groups {
                if holds(m1, g, w)? != holds(m2, g, v)? {
                    continue 'pair;
                }
            }
            z.insert((w, v));
        }
    }
    loop {
        let mut removed = false;
        let current = z.clone();
        for &(w, v) in &current {
            let forth_ok = r1.iter().filter(|t| t[0] == w).all(|t| {
                r2.iter()
                    .any(|u| u[0] == v && current.contains(&(t[1], u[1])))
            });
            let back_ok = r2.iter().filter(|t| t[0] == v).all(|t| {
                r1.iter()
                    .any(|u| u[0] == w && current.contains(&(u[1], t[1])))
            });
            if !forth_ok || !back_ok {
                z.remove(&(w, v));
                removed = true;
            }
        }
        if !removed {
            return Ok(z);
        }
    }
}

/// Maximal directed bisimulation for ternary-relation models, computed by
/// refinement of a pair of relations (one per direction) directly from the
/// product/left-division/right-division clauses.
pub fn reference_directed_bisim(
    m1: &CModel,
    m2: &CModel,
    letter_groups: &[&str],
    rel_group: &str,
) -> Result<(BTreeSet<(u32, u32)>, BTreeSet<(u32, u32)>), ModelError> {
    let r1 = &m1.relation(rel_group)?.tuples;
    let r2 = &m2.relation(rel_group)?.tuples;
    let full = |a: &CModel, b: &CModel| -> BTreeSet<(u32, u32)> {
        let mut s = BTreeSet::new();
        for w in 0..a.n_worlds() as u32 {
            for v in 0..b.n_worlds() as u32 {
                s.insert((w, v));
            }
        }
        s
    };
    let mut zf = full(m1, m2);
    let mut zb = full(m2, m1);

    loop {
        let mut removed = false;
        // One orientation at a time: (m, m', r, r', u = pairs m->m', v = opposite).
        for flip in [false, true] {
            let (ma, mb, ra, rb) = if !flip {
                (m1, m2, r1, r2)
            } else {
                (m2, m1, r2, r1)
            };
            let (u, v) = if !flip {
                (zf.clone(), zb.clone())
            } else {
                (zb.clone(), zf.clone())
            };
            let mut dead: Vec<(u32, u32)> = Vec::new();
            'pairs: for &(x, xp) in &u {
                for g in letter_groups {
                    let at = ma.relation(g)?.tuples.contains(&vec![x]);
                    let at_p = mb.relation(g)?.tuples.contains(&vec![xp]);
                    if at && !at_p {
                        dead.push((x, xp));
                        continue 'pairs;
                    }
                }
                // product: R y z x in the source needs a matching image.
                for t in ra.iter().filter(|t| t[2] == x) {
                    let ok = rb.iter().any(|s| {
                        s[2] == xp && u.contains(&(t[0], s[0])) && u.contains(&(t[1], s[1]))
                    });
                    if !ok {
                        dead.push((x, xp));
                        continue 'pairs;
                    }
                }
                // left division: R' x' z' u' in the target pulls back.
                for t in rb.iter().filter(|t| t[0] == xp) {
                    let ok = ra.iter().any(|s| {
                        s[0] == x && v.contains(&(t[1], s[1])) && u.contains(&(s[2], t[2]))
                    });
                    if !ok {
                        dead.push((x, xp));
                        continue 'pairs;
                    }
                }
                // right division: R' y' x' u' in the target pulls back.
                for t in rb.iter().filter(|t| t[1] == xp) {
                    let ok = ra.iter().any(|s| {
                        s[1] == x && v.contains(&(t[0], s[0])) && u.contains(&(s[2], t[2]))
                    });
                    if !ok {
                        dead.push((x, xp));
                        continue 'pairs;
                    }
                }
            }
            if !dead.is_empty() {
                removed = true;
                for pair in dead {
                    if !flip {
                        zf.remove(&pair);
                    } else {
                        zb.remove(&pair);
                    }
                }
            }
        }
        if !removed {
            return Ok((zf, zb));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::{maximal_bisimulation, Side};
    use crate::connective::is_uniform;
    use crate::model::parse_model;

    #[test]
    fn presets_validate_and_report_completeness() {
        for name in ["modal", "lambek", "intuitionistic", "modal-intuitionistic"] {
            let p = preset(name).unwrap();
            assert!(p.set.validate().is_ok(), "{name} must validate");
        }
        let modal = preset("modal").unwrap();
        assert!(modal.set.is_complete_for_conj_disj().0);
        let lambek = preset("lambek").unwrap();
        assert!(lambek.set.booleans().is_empty());
        assert!(!lambek.set.is_complete_for_conj_disj().0);
    }

    #[test]
    fn modal_intuitionistic_uniformity_classification() {
        let p = preset("modal-intuitionistic").unwrap();
        assert!(is_uniform(&p.set, p.set.molecular("c").unwrap())
            .unwrap()
            .is_uniform());
        assert!(is_uniform(&p.set, p.set.molecular("nc").unwrap())
            .unwrap()
            .is_uniform());
        // The un-negated composition is not uniform.
        let mut text = MODAL_INTUITIONISTIC_LOGIC.to_string();
        text.push_str("molecular cp := c1(c3)\n");
        let set = parse_logic(&text).unwrap();
        assert!(!is_uniform(&set, set.molecular("cp").unwrap())
            .unwrap()
            .is_uniform());
    }

    #[test]
    fn single_letter_variants_match_the_canonical_presets() {
        for (kind, name) in [
            (PresetKind::Modal, "modal"),
            (PresetKind::Lambek, "lambek"),
            (PresetKind::Intuitionistic, "intuitionistic"),
            (PresetKind::ModalIntuitionistic, "modal-intuitionistic"),
        ] {
            assert_eq!(
                preset_with_letters(kind, &["p"]),
                preset(name).unwrap().set,
                "{name}"
            );
        }
    }

    #[test]
    fn shipped_preset_files_match_the_builtin_declarations() {
        assert_eq!(include_str!("../../../presets/modal.logic"), MODAL_LOGIC);
        assert_eq!(include_str!("../../../presets/lambek.logic"), LAMBEK_LOGIC);
        assert_eq!(
            include_str!("../../../presets/intuitionistic.logic"),
            INTUITIONISTIC_LOGIC
        );
        assert_eq!(
            include_str!("../../../presets/modal-intuitionistic.logic"),
            MODAL_INTUITIONISTIC_LOGIC
        );
    }

    #[test]
    fn preset_serialization_roundtrips() {
        for name in ["modal", "lambek", "intuitionistic", "modal-intuitionistic"] {
            let p = preset(name).unwrap();
            let text = crate::logicfile::logic_to_text(&p.set);
            let reparsed = parse_logic(&text).unwrap();
            assert_eq!(p.set, reparsed, "{name} serialization must roundtrip");
        }
    }

    #[test]
    fn reference_modal_bisim_on_the_known_examples() {
        let set = preset("modal").unwrap().set;
        let m1 = parse_model("domain a\nrel r : (a,a)\nletter p : a\n", &set).unwrap();
        let m2 = parse_model("domain b c\nrel r : (b,c); (c,b)\nletter p : b; c\n", &set).unwrap();
        let z = reference_modal_bisim(&m1, &m2, &["p"], "r").unwrap();
        assert_eq!(z.len(), 2);

        let m3 = parse_model("domain w s\nrel r : (w,s)\nletter p : w; s\n", &set).unwrap();
        let m4 = parse_model("domain w2\nrel r :\nletter p : w2\n", &set).unwrap();
        let z = reference_modal_bisim(&m3, &m4, &["p"], "r").unwrap();
        assert!(!z.contains(&(0, 0)));
        assert!(z.contains(&(1, 0)));
    }

    #[test]
    fn generic_and_reference_modal_bisim_agree_on_a_hand_case() {
        let set = preset("modal").unwrap().set;
        let m1 = parse_model(
            "domain a b\nrel r : (a,b); (b,b)\nletter p : b\n",
            &set,
        )
        .unwrap();
        let m2 = parse_model(
            "domain c d e\nrel r : (c,d); (d,e); (e,e)\nletter p : d; e\n",
            &set,
        )
        .unwrap();
        let fam = maximal_bisimulation(&set, &m1, &m2).unwrap();
        let reference = reference_modal_bisim(&m1, &m2, &["p"], "r").unwrap();
        let forward: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Forward)
            .map(|p| (p.left[0], p.right[0]))
            .collect();
        assert_eq!(forward, reference);
        // The canonical symmetric extension: the backward part is the converse.
        let backward: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Backward)
            .map(|p| (p.right[0], p.left[0]))
            .collect();
        assert_eq!(backward, reference);
    }

    #[test]
    fn reference_directed_bisim_on_singletons_and_copies() {
        let set = preset("lambek").unwrap().set;
        let m1 = parse_model("domain a\nrel r :\nletter p : a\n", &set).unwrap();
        let (zf, zb) = reference_directed_bisim(&m1, &m1, &["p"], "r").unwrap();
        assert!(zf.contains(&(0, 0)));
        assert!(zb.contains(&(0, 0)));

        let m2 = parse_model(
            "domain v u w\nrel r : (v,u,w)\nletter p : v\n",
            &set,
        )
        .unwrap();
        let m3 = parse_model(
            "domain v2 u2 w2\nrel r : (v2,u2,w2)\nletter p : v2\n",
            &set,
        )
        .unwrap();
        let (zf, zb) = reference_directed_bisim(&m2, &m3, &["p"], "r").unwrap();
        // The isomorphism pairs survive in both directions.
        for i in 0..3 {
            assert!(zf.contains(&(i, i)), "forward {i}");
            assert!(zb.contains(&(i, i)), "backward {i}");
        }
    }

    #[test]
    fn prepared_intuitionistic_models_carry_the_derived_groups() {
        let p = preset("modal-intuitionistic").unwrap();
        let raw = parse_model(
            "domain w v\nrel R : (w,w); (v,v); (w,v)\nrel Rdia : (v,w)\nletter p : v\n",
            &p.set,
        )
        .unwrap();
        let m = p.prepare_model(&raw).unwrap();
        assert!(m.relation("imp").is_ok());
        assert!(m.relation("r").is_ok());
        assert!(m.relation("rd").is_ok());
        assert_eq!(m.relation("top").unwrap().tuples.len(), 2);
    }
}
