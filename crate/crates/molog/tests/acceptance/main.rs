//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The depth-3 enumeration sweeps seed the single letter `p`; the bisimulation
//! equality suites run over two-letter models.

mod gen;

use std::collections::BTreeSet;
use std::process::Command;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use molog::bisim::{
    self, maximal_bisimulation, maximal_bisimulation_with_mode, refine_family, verify_family,
    PreservationOracle, ScanMode, Side, VertexOracle,
};
use molog::connective::{is_uniform, ConnectiveSet};
use molog::enumerate::EnumeratedLanguage;
use molog::fol;
use molog::formula::{negate, Formula};
use molog::interpret::Evaluator;
use molog::logicfile::parse_logic;
use molog::model::CModel;
use molog::presets::{
    preset, preset_with_letters, reference_directed_bisim, reference_modal_bisim, PresetKind,
    MODAL_INTUITIONISTIC_LOGIC,
};

const SEED_MODAL: u64 = 11;
const SEED_LAMBEK: u64 = 22;
const SEED_MODAL_INT: u64 = 33;
const SEED_MODELS: u64 = 44;
const SEED_FIXPOINT: u64 = 55;
const SEED_FACT: u64 = 66;
const SEED_POINTS: u64 = 77;

fn modal_pairs(count: usize) -> (ConnectiveSet, Vec<(CModel, CModel)>) {
    let set = preset_with_letters(PresetKind::Modal, &["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_MODAL);
    let pairs = (0..count)
        .map(|_| {
            (
                gen::random_kripke(&mut rng, 6, &["p", "q"]),
                gen::random_kripke(&mut rng, 6, &["p", "q"]),
            )
        })
        .collect();
    (set, pairs)
}

fn lambek_pairs(count: usize) -> (ConnectiveSet, Vec<(CModel, CModel)>) {
    let set = preset_with_letters(PresetKind::Lambek, &["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_LAMBEK);
    let pairs = (0..count)
        .map(|_| {
            (
                gen::random_ternary(&mut rng, 5, &["p", "q"]),
                gen::random_ternary(&mut rng, 5, &["p", "q"]),
            )
        })
        .collect();
    (set, pairs)
}

fn modal_int_pairs(count: usize) -> (ConnectiveSet, Vec<(CModel, CModel)>) {
    let p = preset("modal-intuitionistic").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_MODAL_INT);
    let pairs = (0..count)
        .map(|_| {
            let a = gen::random_preorder(&mut rng, 4, &["p"]);
            let b = gen::random_preorder(&mut rng, 4, &["p"]);
            (
                p.prepare_model(&a).expect("generated preorders derive"),
                p.prepare_model(&b).expect("generated preorders derive"),
            )
        })
        .collect();
    (p.set, pairs)
}

#[test]
fn criterion_01_modal_bisimulation_matches_the_reference() {
    let (set, pairs) = modal_pairs(200);
    for (i, (m1, m2)) in pairs.iter().enumerate() {
        let fam = maximal_bisimulation(&set, m1, m2).unwrap();
        let forward: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Forward)
            .map(|p| (p.left[0], p.right[0]))
            .collect();
        let reference = reference_modal_bisim(m1, m2, &["p", "q"], "r").unwrap();
        assert_eq!(forward, reference, "pair {i}");
        // The maximal relation extends symmetrically: the backward part is
        // the converse of the forward part.
        let backward: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Backward)
            .map(|p| (p.right[0], p.left[0]))
            .collect();
        assert_eq!(backward, reference, "symmetric extension, pair {i}");
    }
    println!("criterion 1 (modal bisimulation vs reference, 200 pairs): pass");
}

#[test]
fn criterion_02_directed_bisimulation_matches_the_reference() {
    let (set, pairs) = lambek_pairs(200);
    for (i, (m1, m2)) in pairs.iter().enumerate() {
        let fam = maximal_bisimulation(&set, m1, m2).unwrap();
        let forward: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Forward)
            .map(|p| (p.left[0], p.right[0]))
            .collect();
        let backward: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Backward)
            .map(|p| (p.left[0], p.right[0]))
            .collect();
        let (zf, zb) = reference_directed_bisim(m1, m2, &["p", "q"], "r").unwrap();
        assert_eq!(forward, zf, "forward, pair {i}");
        assert_eq!(backward, zb, "backward, pair {i}");
    }
    println!("criterion 2 (directed bisimulation vs reference, 200 pairs): pass");
}

#[test]
fn criterion_03_maximal_families_preserve_formulas() {
    let depth = 3;
    let mut checked = 0usize;

    let (set, pairs) = modal_pairs(200);
    for (m1, m2) in &pairs {
        let fam = maximal_bisimulation(&set, m1, m2).unwrap();
        let oracle = PreservationOracle::new(&set, m1, m2, depth, &["p"]).unwrap();
        for pair in fam.z.iter() {
            let out = oracle.check(pair.side, &pair.left, &pair.right);
            assert!(out.holds, "modal {pair:?} fails on {:?}", out.counterexample);
            checked += 1;
        }
    }

    let (set, pairs) = lambek_pairs(200);
    for (m1, m2) in &pairs {
        let fam = maximal_bisimulation(&set, m1, m2).unwrap();
        let oracle = PreservationOracle::new(&set, m1, m2, depth, &["p"]).unwrap();
        for pair in fam.z.iter() {
            let out = oracle.check(pair.side, &pair.left, &pair.right);
            assert!(out.holds, "lambek {pair:?} fails on {:?}", out.counterexample);
            checked += 1;
        }
    }

    let (set, pairs) = modal_int_pairs(100);
    let vertex_keys: Vec<(String, molog::connective::VertexAddr)> = set
        .moleculars()
        .flat_map(|m| m.vertices().into_iter().map(|(a, _)| (m.name.clone(), a)))
        .filter(|(_, a)| !a.is_root())
        .collect();
    for (m1, m2) in &pairs {
        let fam = maximal_bisimulation(&set, m1, m2).unwrap();
        let oracle = PreservationOracle::new(&set, m1, m2, depth, &["p"]).unwrap();
        for pair in fam.z.iter() {
            let out = oracle.check(pair.side, &pair.left, &pair.right);
            assert!(
                out.holds,
                "modal-int {pair:?} fails on {:?}",
                out.counterexample
            );
            checked += 1;
        }
        // Vertex relations preserve their head-fixed languages; the root
        // vertices coincide with Z and are covered by the oracle above.
        for (mol, addr) in &vertex_keys {
            let vo = VertexOracle::new(&set, m1, m2, mol, addr, depth, &["p"]).unwrap();
            let rel = fam
                .per_vertex
                .get(&(mol.clone(), addr.clone()))
                .cloned()
                .unwrap_or_else(|| fam.z.clone()); // id vertices alias Z
            for pair in rel.iter() {
                let (holds, cex) = vo.check(pair.side, &pair.left, &pair.right);
                assert!(holds, "vertex {mol}/{addr} {pair:?} fails on {cex:?}");
                checked += 1;
            }
        }
    }

    println!("criterion 3 (preservation at depth 3, {checked} family pairs): pass");
}

fn suite_models(kind: PresetKind, count: usize, max_worlds: usize) -> (ConnectiveSet, Vec<CModel>) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_MODELS);
    match kind {
        PresetKind::Modal => {
            let set = preset("modal").unwrap().set;
            let models = (0..count)
                .map(|_| gen::random_kripke(&mut rng, max_worlds, &["p"]))
                .collect();
            (set, models)
        }
        PresetKind::Lambek => {
            let set = preset("lambek").unwrap().set;
            let models = (0..count)
                .map(|_| gen::random_ternary(&mut rng, max_worlds, &["p"]))
                .collect();
            (set, models)
        }
        PresetKind::Intuitionistic | PresetKind::ModalIntuitionistic => {
            let p = preset(if kind == PresetKind::Intuitionistic {
                "intuitionistic"
            } else {
                "modal-intuitionistic"
            })
            .unwrap();
            let models = (0..count)
                .map(|_| {
                    let raw = gen::random_preorder(&mut rng, max_worlds, &["p"]);
                    p.prepare_model(&raw).expect("generated preorders derive")
                })
                .collect();
            (p.set, models)
        }
    }
}

#[test]
fn criterion_04_boolean_negation_denotes_the_complement() {
    let kinds = [
        PresetKind::Modal,
        PresetKind::Lambek,
        PresetKind::Intuitionistic,
        PresetKind::ModalIntuitionistic,
    ];
    let mut checked = 0usize;
    for kind in kinds {
        let (set, models) = suite_models(kind, 50, 4);
        let lang = EnumeratedLanguage::build(&set, 3, &["p"]).unwrap();
        for model in &models {
            let mut ev = Evaluator::new(&set, model);
            for i in 0..lang.len() {
                let f = lang.formula(i);
                let Ok(nf) = negate(&f) else {
                    continue; // conjunctions and disjunctions carry no negation
                };
                let pos = ev.eval(&f).unwrap();
                let neg = ev.eval(&nf).unwrap();
                let expected = pos.complement(model.n_worlds()).unwrap();
                assert_eq!(*neg, expected, "{kind:?}: complement fails for {f}");
                checked += 1;
            }
        }
    }
    println!("criterion 4 (Boolean negation denotes the complement, {checked} checks): pass");
}

#[test]
fn criterion_05_standard_translation_agrees_with_satisfaction() {
    let kinds = [
        PresetKind::Modal,
        PresetKind::Lambek,
        PresetKind::Intuitionistic,
        PresetKind::ModalIntuitionistic,
    ];
    let target = vec!["x".to_string()];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_POINTS);
    let mut checked = 0usize;
    for kind in kinds {
        let (set, models) = suite_models(kind, 50, 3);
        let lang = EnumeratedLanguage::build(&set, 3, &["p"]).unwrap();
        let translations: Vec<fol::FOFormula> = (0..lang.len())
            .map(|i| {
                let t = fol::st_translate(&set, &lang.formula(i), &target).unwrap();
                // The translation's free variables are exactly the target tuple.
                assert_eq!(
                    t.free_vars().into_iter().collect::<Vec<_>>(),
                    target,
                    "free variables of the translation of {}",
                    lang.formula(i)
                );
                t
            })
            .collect();
        for model in &models {
            let sets = lang.interpret_all(&set, model).unwrap();
            let structures: Vec<fol::FOStructure> = (0..model.n_worlds() as u32)
                .map(|w| fol::associated_structure(model, &[w], &target).unwrap())
                .collect();
            for i in 0..lang.len() {
                // Shallow formulas are checked at every point, deep ones at a
                // sampled point.
                let points: Vec<u32> = if lang.depth_of(i) <= 2 {
                    (0..model.n_worlds() as u32).collect()
                } else {
                    vec![rng.gen_range(0..model.n_worlds() as u32)]
                };
                for w in points {
                    let direct = sets[i].contains(&[w]);
                    let via_fol =
                        fol::fol_eval(&structures[w as usize], &translations[i]).unwrap();
                    assert_eq!(
                        direct,
                        via_fol,
                        "{kind:?}: disagreement for {} at w{w}",
                        lang.formula(i)
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 5 (standard translation agrees with satisfaction, {checked} checks): pass");
}

#[test]
fn criterion_06_uniformity_classification() {
    let p = preset("modal-intuitionistic").unwrap();
    assert!(is_uniform(&p.set, p.set.molecular("c").unwrap())
        .unwrap()
        .is_uniform());
    assert!(is_uniform(&p.set, p.set.molecular("nc").unwrap())
        .unwrap()
        .is_uniform());
    let mut text = MODAL_INTUITIONISTIC_LOGIC.to_string();
    text.push_str("molecular cp := c1(c3)\n");
    let set = parse_logic(&text).unwrap();
    assert!(!is_uniform(&set, set.molecular("cp").unwrap())
        .unwrap()
        .is_uniform());
    println!("criterion 6 (uniformity: c uniform, nc uniform, cp not): pass");
}

/// The unfolded implication condition over the underlying preorders.
fn condition_star_star(
    z_fwd: &BTreeSet<(u32, u32)>,
    z_bwd: &BTreeSet<(u32, u32)>,
    r_src: &BTreeSet<(u32, u32)>,
    r_tgt: &BTreeSet<(u32, u32)>,
    n_src: u32,
) -> bool {
    z_fwd.iter().all(|&(v, vp)| {
        r_tgt.iter().all(|&(vp2, wp)| {
            if vp2 != vp {
                return true;
            }
            r_tgt.iter().all(|&(up, wp2)| {
                if wp2 != wp {
                    return true;
                }
                (0..n_src).any(|u| {
                    (0..n_src).any(|w| {
                        z_bwd.contains(&(up, u))
                            && z_fwd.contains(&(w, wp))
                            && r_src.contains(&(v, w))
                            && r_src.contains(&(u, w))
                    })
                })
            })
        })
    })
}

/// The two-way step condition: the successor is matched by a single world
/// related in both directions.
fn condition_step(
    z_fwd: &BTreeSet<(u32, u32)>,
    z_bwd: &BTreeSet<(u32, u32)>,
    r_src: &BTreeSet<(u32, u32)>,
    r_tgt: &BTreeSet<(u32, u32)>,
    n_src: u32,
) -> bool {
    z_fwd.iter().all(|&(v, vp)| {
        r_tgt.iter().all(|&(vp2, wp)| {
            if vp2 != vp {
                return true;
            }
            (0..n_src).any(|w| {
                z_fwd.contains(&(w, wp)) && z_bwd.contains(&(wp, w)) && r_src.contains(&(v, w))
            })
        })
    })
}

#[test]
fn criterion_07_step_condition_on_finite_models() {
    // Two-letter variant of the implication preset.
    let set = preset_with_letters(PresetKind::Intuitionistic, &["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_FACT);
    let mut agreements = 0usize;
    for _ in 0..100 {
        let raw1 = gen::random_preorder(&mut rng, 4, &["p", "q"]);
        let raw2 = gen::random_preorder(&mut rng, 4, &["p", "q"]);
        let m1 = molog::intuit::derive_intuitionistic(&raw1, &set).unwrap();
        let m2 = molog::intuit::derive_intuitionistic(&raw2, &set).unwrap();
        let fam = maximal_bisimulation(&set, &m1, &m2).unwrap();
        let zf: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Forward)
            .map(|p| (p.left[0], p.right[0]))
            .collect();
        let zb: BTreeSet<(u32, u32)> = fam
            .z
            .side_pairs(Side::Backward)
            .map(|p| (p.left[0], p.right[0]))
            .collect();
        let r1: BTreeSet<(u32, u32)> = raw1
            .relation("R")
            .unwrap()
            .tuples
            .iter()
            .map(|t| (t[0], t[1]))
            .collect();
        let r2: BTreeSet<(u32, u32)> = raw2
            .relation("R")
            .unwrap()
            .tuples
            .iter()
            .map(|t| (t[0], t[1]))
            .collect();
        for flip in [false, true] {
            let (zf_o, zb_o, rs, rt, ns) = if !flip {
                (&zf, &zb, &r1, &r2, raw1.n_worlds() as u32)
            } else {
                (&zb, &zf, &r2, &r1, raw2.n_worlds() as u32)
            };
            let ss = condition_star_star(zf_o, zb_o, rs, rt, ns);
            let st = condition_step(zf_o, zb_o, rs, rt, ns);
            assert_eq!(
                ss, st,
                "conditions disagree (flip={flip}) on Z with {} forward pairs",
                zf_o.len()
            );
            agreements += 1;
        }
    }
    println!("criterion 7 (implication condition equals the step condition, {agreements} instances): pass");
}

#[test]
fn criterion_08_condition_renderings_match_the_goldens() {
    for (preset, golden) in [
        ("modal", include_str!("../golden/modal.conditions.txt")),
        ("lambek", include_str!("../golden/lambek.conditions.txt")),
        (
            "intuitionistic",
            include_str!("../golden/intuitionistic.conditions.txt"),
        ),
        (
            "modal-intuitionistic",
            include_str!("../golden/modal-intuitionistic.conditions.txt"),
        ),
    ] {
        let out = Command::new(env!("CARGO_BIN_EXE_molog"))
            .args(["conditions", "--logic", preset])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            golden,
            "conditions for {preset}"
        );
    }
    println!("criterion 8 (clause renderings byte-equal to the goldens): pass");
}

#[test]
fn criterion_09_fixpoint_soundness_and_maximality() {
    let set = preset_with_letters(PresetKind::Modal, &["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_FIXPOINT);
    for case in 0..50 {
        let m1 = gen::random_kripke(&mut rng, 4, &["p", "q"]);
        let m2 = gen::random_kripke(&mut rng, 4, &["p", "q"]);
        let (fam, _) = maximal_bisimulation_with_mode(&set, &m1, &m2, ScanMode::Batch).unwrap();
        assert!(
            verify_family(&set, &m1, &m2, &fam).unwrap().is_empty(),
            "case {case}: maximal family must verify"
        );

        // Re-adding any deleted pair breaks some clause.
        let full = bisim::full_family(&set, &m1, &m2).unwrap();
        let deleted: Vec<_> = full
            .z
            .iter()
            .filter(|p| !fam.z.contains(p.side, &p.left, &p.right))
            .cloned()
            .collect();
        if !deleted.is_empty() {
            let pick = &deleted[rng.gen_range(0..deleted.len())];
            let mut readded = fam.clone();
            readded.z.insert(pick.clone());
            let violations = verify_family(&set, &m1, &m2, &readded).unwrap();
            assert!(
                !violations.is_empty(),
                "case {case}: re-adding {pick:?} must violate a clause"
            );
        }

        let (lex, _) =
            maximal_bisimulation_with_mode(&set, &m1, &m2, ScanMode::ImmediateLex).unwrap();
        let (rev, _) =
            maximal_bisimulation_with_mode(&set, &m1, &m2, ScanMode::ImmediateRevLex).unwrap();
        assert_eq!(fam, lex, "case {case}: scan order must not matter");
        assert_eq!(fam, rev, "case {case}: scan order must not matter");
    }
    println!("criterion 9 (fixpoint soundness, maximality, scan-order independence, 50 cases): pass");
}

#[test]
fn criterion_10_exports_reparse_under_their_own_grammars() {
    let kinds = [
        ("modal", PresetKind::Modal),
        ("lambek", PresetKind::Lambek),
        ("intuitionistic", PresetKind::Intuitionistic),
        ("modal-intuitionistic", PresetKind::ModalIntuitionistic),
    ];
    let target = vec!["x".to_string()];
    let mut artifacts = 0usize;
    for (name, _) in kinds {
        let set = preset(name).unwrap().set;
        let lang = EnumeratedLanguage::build(&set, 2, &["p"]).unwrap();
        for i in 0..lang.len() {
            let f = lang.formula(i);
            let t = fol::st_translate(&set, &f, &target).unwrap();

            let tptp = fol::to_tptp(&t, name);
            let unit = fol::parse_tptp(&tptp)
                .unwrap_or_else(|e| panic!("tptp for {f} fails to re-parse: {e}"));
            let mut expected = fol::tptp_normalize(&t);
            for v in t.free_vars().into_iter().rev() {
                expected = fol::FOFormula::Forall(
                    v.to_uppercase(),
                    Box::new(expected),
                );
            }
            assert_eq!(unit.formula, expected, "tptp structure for {f}");

            let smt = fol::to_smtlib(&t, name);
            let script = fol::parse_smtlib(&smt)
                .unwrap_or_else(|e| panic!("smtlib for {f} fails to re-parse: {e}"));
            assert_eq!(script.assertion, t, "smtlib structure for {f}");
            artifacts += 2;
        }
    }

    // The checked-in export goldens re-parse as well.
    fol::parse_tptp(include_str!("../golden/dia_p.tptp")).unwrap();
    fol::parse_tptp(include_str!("../golden/under_comp.tptp")).unwrap();
    fol::parse_smtlib(include_str!("../golden/dia_p.smt2")).unwrap();
    fol::parse_smtlib(include_str!("../golden/c_imp.smt2")).unwrap();

    println!("criterion 10 (exporter round-trips, {artifacts} artifacts plus goldens): pass");
}

/// Greatest-fixpoint property: every family obtained by refining a random
/// seed verifies, and is dominated by the maximal family.
#[test]
fn property_refined_families_verify_and_sit_below_the_maximal() {
    let set = preset_with_letters(PresetKind::Modal, &["p"]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_FIXPOINT ^ 0xFFFF);
    for _ in 0..50 {
        let m1 = gen::random_kripke(&mut rng, 4, &["p"]);
        let m2 = gen::random_kripke(&mut rng, 4, &["p"]);
        let full = bisim::full_family(&set, &m1, &m2).unwrap();
        let mut seed = bisim::BisimFamily::default();
        for pair in full.z.iter() {
            if rng.gen_bool(0.6) {
                seed.z.insert(pair.clone());
            }
        }
        let refined = refine_family(&set, &m1, &m2, seed).unwrap();
        assert!(verify_family(&set, &m1, &m2, &refined).unwrap().is_empty());
        let maximal = maximal_bisimulation(&set, &m1, &m2).unwrap();
        assert!(refined.z.is_subset(&maximal.z));
    }
    println!("property (refined random families verify and are below the maximal): pass");
}
