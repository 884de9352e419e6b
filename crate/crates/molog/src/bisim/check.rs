//! Clause-instance checking shared by the fixpoint solver and the family
//! verifier.

use std::collections::HashMap;

use crate::connective::ConnectiveSet;
use crate::error::{EvalError, ModelError};
use crate::model::{all_tuples, CModel};
use crate::skeleton::{Quant, Sign};

use super::clauses::{generate_clauses, Clause, ClauseSet};
use super::{BisimFamily, DirectedPair, Side};

/// A concrete failed clause instance: the pair that triggered it and the
/// trigger blocks that found no witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause_id: String,
    pub pair: DirectedPair,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub(crate) struct CheckCtx<'a> {
    pub m1: &'a CModel,
    pub m2: &'a CModel,
    pub clause_set: ClauseSet,
    /// (clause index, model is m2) -> out block -> argument block lists
    buckets: HashMap<(usize, bool), HashMap<Vec<u32>, Vec<Vec<Vec<u32>>>>>,
}

impl<'a> CheckCtx<'a> {
    pub fn new(
        set: &'a ConnectiveSet,
        m1: &'a CModel,
        m2: &'a CModel,
    ) -> Result<Self, EvalError> {
        let clause_set = generate_clauses(set).map_err(|e| {
            EvalError::Formula(crate::error::FormulaError::Unknown(e.to_string()))
        })?;
        let mut ctx = CheckCtx {
            m1,
            m2,
            clause_set,
            buckets: HashMap::new(),
        };
        for idx in 0..ctx.clause_set.clauses.len() {
            for is_m2 in [false, true] {
                let clause = &ctx.clause_set.clauses[idx];
                let model = if is_m2 { ctx.m2 } else { ctx.m1 };
                let bucket = build_bucket(model, clause)?;
                ctx.buckets.insert((idx, is_m2), bucket);
            }
        }
        Ok(ctx)
    }

    fn model(&self, is_m2: bool) -> &CModel {
        if is_m2 {
            self.m2
        } else {
            self.m1
        }
    }

    /// Argument-block instances around `out` for which the signed relation
    /// literal has the requested truth value.
    fn literal_instances(
        &self,
        idx: usize,
        is_m2: bool,
        out: &[u32],
        literal_true_means_stored: bool,
    ) -> Result<Vec<Vec<Vec<u32>>>, EvalError> {
        let clause = &self.clause_set.clauses[idx];
        if literal_true_means_stored {
            Ok(self.buckets[&(idx, is_m2)]
                .get(out)
                .cloned()
                .unwrap_or_default())
        } else {
            let model = self.model(is_m2);
            let rel = model.relation(&clause.group)?;
            let skel = &clause.skeleton;
            let mut combos: Vec<Vec<Vec<u32>>> = vec![vec![]];
            for &kj in &skel.type_sig.inputs {
                let candidates = all_tuples(model.n_worlds(), kj)?;
                let mut next = Vec::with_capacity(combos.len() * candidates.len());
                for combo in &combos {
                    for c in &candidates {
                        let mut ext = combo.clone();
                        ext.push(c.clone());
                        next.push(ext);
                    }
                }
                combos = next;
            }
            Ok(combos
                .into_iter()
                .filter(|args| {
                    let base = assemble_base(clause, args, out);
                    !rel.tuples.contains(&base)
                })
                .collect())
        }
    }

    /// Whether some witness instance exists around `out` in the given model
    /// satisfying the membership conjuncts against `trigger_args`.
    #[allow(clippy::too_many_arguments)]
    fn witness_exists(
        &self,
        idx: usize,
        is_m2: bool,
        out: &[u32],
        literal_true_means_stored: bool,
        fam: &BisimFamily,
        side: Side,
        trigger_args: &[Vec<u32>],
        witnesses_are_target: bool,
    ) -> Result<bool, EvalError> {
        let clause = &self.clause_set.clauses[idx];
        if literal_true_means_stored {
            if let Some(cands) = self.buckets[&(idx, is_m2)].get(out) {
                for cand in cands {
                    if self.memberships_hold(clause, fam, side, trigger_args, cand, witnesses_are_target)
                    {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        } else {
            let model = self.model(is_m2);
            let rel = model.relation(&clause.group)?;
            let skel = &clause.skeleton;
            let mut per_arg: Vec<Vec<Vec<u32>>> = Vec::new();
            for &kj in &skel.type_sig.inputs {
                per_arg.push(all_tuples(model.n_worlds(), kj)?);
            }
            let mut cursor = vec![0usize; per_arg.len()];
            if per_arg.iter().any(|c| c.is_empty()) {
                return Ok(false);
            }
            loop {
                let cand: Vec<Vec<u32>> = cursor
                    .iter()
                    .enumerate()
                    .map(|(p, &c)| per_arg[p][c].clone())
                    .collect();
                let base = assemble_base(clause, &cand, out);
                if !rel.tuples.contains(&base)
                    && self.memberships_hold(clause, fam, side, trigger_args, &cand, witnesses_are_target)
                {
                    return Ok(true);
                }
                let mut p = per_arg.len();
                loop {
                    if p == 0 {
                        return Ok(false);
                    }
                    p -= 1;
                    cursor[p] += 1;
                    if cursor[p] < per_arg[p].len() {
                        break;
                    }
                    cursor[p] = 0;
                }
            }
        }
    }

    /// Membership conjuncts: with a positive tonicity sign the source block
    /// relates to the target block in the pair's direction; a negative sign
    /// reverses the direction.
    fn memberships_hold(
        &self,
        clause: &Clause,
        fam: &BisimFamily,
        side: Side,
        trigger_args: &[Vec<u32>],
        witness_args: &[Vec<u32>],
        witnesses_are_target: bool,
    ) -> bool {
        (0..clause.skeleton.arity()).all(|j| {
            let (src_block, tgt_block) = if witnesses_are_target {
                (&trigger_args[j], &witness_args[j])
            } else {
                (&witness_args[j], &trigger_args[j])
            };
            let rel = match fam.relation(&clause.children[j]) {
                Some(r) => r,
                None => return false,
            };
            match clause.skeleton.tonicity[j] {
                Sign::Pos => rel.contains(side, src_block, tgt_block),
                Sign::Neg => rel.contains(side.flip(), tgt_block, src_block),
            }
        })
    }

    /// Returns the first trigger instance without a witness, if any.
    pub fn pair_violation(
        &self,
        idx: usize,
        fam: &BisimFamily,
        pair: &DirectedPair,
    ) -> Result<Option<Vec<Vec<u32>>>, EvalError> {
        let clause = &self.clause_set.clauses[idx];
        let skel = &clause.skeleton;
        if pair.ty() != skel.output_type() {
            return Ok(None);
        }
        let (src_is_m2, tgt_is_m2) = match pair.side {
            Side::Forward => (false, true),
            Side::Backward => (true, false),
        };
        match skel.quant {
            Quant::Ex => {
                // Trigger on true literal instances in the source; witnesses
                // are true literal instances in the target.
                let stored = skel.sign == Sign::Pos;
                let triggers =
                    self.literal_instances(idx, src_is_m2, &pair.left, stored)?;
                for t in triggers {
                    if !self.witness_exists(
                        idx, tgt_is_m2, &pair.right, stored, fam, pair.side, &t, true,
                    )? {
                        return Ok(Some(t));
                    }
                }
                Ok(None)
            }
            Quant::All => {
                // Trigger on false literal instances in the target; witnesses
                // are false literal instances in the source.
                let stored = skel.sign == Sign::Neg;
                let triggers =
                    self.literal_instances(idx, tgt_is_m2, &pair.right, stored)?;
                for t in triggers {
                    if !self.witness_exists(
                        idx, src_is_m2, &pair.left, stored, fam, pair.side, &t, false,
                    )? {
                        return Ok(Some(t));
                    }
                }
                Ok(None)
            }
        }
    }

    pub fn render_violation(
        &self,
        idx: usize,
        pair: &DirectedPair,
        trigger: &[Vec<u32>],
    ) -> Violation {
        let clause = &self.clause_set.clauses[idx];
        let (src, tgt) = match pair.side {
            Side::Forward => (self.m1, self.m2),
            Side::Backward => (self.m2, self.m1),
        };
        let trigger_model = match clause.skeleton.quant {
            Quant::Ex => src,
            Quant::All => tgt,
        };
        let blocks: Vec<String> = trigger
            .iter()
            .map(|b| trigger_model.format_tuple(b))
            .collect();
        let message = format!(
            "[{}] {} pair ({}, {}): trigger blocks ({}) have no witness",
            clause.id,
            pair.side,
            src.format_tuple(&pair.left),
            tgt.format_tuple(&pair.right),
            blocks.join(", ")
        );
        Violation {
            clause_id: clause.id.clone(),
            pair: pair.clone(),
            message,
        }
    }
}

fn build_bucket(
    model: &CModel,
    clause: &Clause,
) -> Result<HashMap<Vec<u32>, Vec<Vec<Vec<u32>>>>, EvalError> {
    let skel = &clause.skeleton;
    let rel = model.relation(&clause.group)?;
    let lens = skel.base_block_lens();
    let expected: usize = lens.iter().sum::<u32>() as usize;
    if rel.arity != expected && !rel.tuples.is_empty() {
        return Err(ModelError::TupleArity {
            group: clause.group.clone(),
            tuple: vec![],
            got: rel.arity,
            expected,
        }
        .into());
    }
    let mut bucket: HashMap<Vec<u32>, Vec<Vec<Vec<u32>>>> = HashMap::new();
    for tuple in &rel.tuples {
        let mut blocks = Vec::with_capacity(lens.len());
        let mut start = 0usize;
        for &len in &lens {
            blocks.push(tuple[start..start + len as usize].to_vec());
            start += len as usize;
        }
        let out = blocks[skel.output_base_position() - 1].clone();
        let args: Vec<Vec<u32>> = (1..=skel.arity())
            .map(|j| blocks[skel.perm.apply(j) - 1].clone())
            .collect();
        bucket.entry(out).or_default().push(args);
    }
    Ok(bucket)
}

fn assemble_base(clause: &Clause, args: &[Vec<u32>], out: &[u32]) -> Vec<u32> {
    let skel = &clause.skeleton;
    let n = skel.arity();
    let inv = skel.perm.inverse();
    let mut base = Vec::new();
    for i in 1..=n + 1 {
        let j = inv.apply(i);
        if j == n + 1 {
            base.extend_from_slice(out);
        } else {
            base.extend_from_slice(&args[j - 1]);
        }
    }
    base
}

/// Checks every generated clause against every pair of a family, and the
/// family's structural invariants: pairs well-typed, every required vertex
/// relation present, and `Z` contained in each vertex relation at its type.
pub fn verify_family(
    set: &ConnectiveSet,
    m1: &CModel,
    m2: &CModel,
    fam: &BisimFamily,
) -> Result<Vec<Violation>, EvalError> {
    let ctx = CheckCtx::new(set, m1, m2)?;
    let mut violations = Vec::new();

    for (key, rel) in fam
        .per_vertex
        .iter()
        .map(|(k, v)| (k.clone(), v))
        .chain(std::iter::once((
            ("Z".to_string(), crate::connective::VertexAddr::root()),
            &fam.z,
        )))
    {
        for pair in rel.iter() {
            if pair.left.len() != pair.right.len() {
                violations.push(Violation {
                    clause_id: "structure".into(),
                    pair: pair.clone(),
                    message: format!(
                        "ill-typed pair in {}: sides have lengths {} and {}",
                        key.0,
                        pair.left.len(),
                        pair.right.len()
                    ),
                });
            }
        }
    }

    for key in super::required_vertex_keys(set) {
        match fam.per_vertex.get(&key) {
            None => violations.push(Violation {
                clause_id: "structure".into(),
                pair: DirectedPair::new(Side::Forward, vec![], vec![]),
                message: format!("family lacks the vertex relation Z{{{}/{}}}", key.0, key.1),
            }),
            Some(rel) => {
                let m = set.molecular(&key.0).unwrap();
                let node = m.vertex(&key.1).unwrap();
                let ty = set
                    .node_type_sig(&key.0, node)
                    .map_err(|e| {
                        EvalError::Formula(crate::error::FormulaError::Unknown(e.to_string()))
                    })?
                    .output;
                for pair in fam.z.iter() {
                    if pair.ty() == ty && !rel.contains(pair.side, &pair.left, &pair.right) {
                        violations.push(Violation {
                            clause_id: "structure".into(),
                            pair: pair.clone(),
                            message: format!(
                                "Z is not contained in Z{{{}/{}}}: missing {:?}",
                                key.0, key.1, pair
                            ),
                        });
                    }
                }
            }
        }
    }

    for idx in 0..ctx.clause_set.clauses.len() {
        let trigger_rel = match fam.relation(&ctx.clause_set.clauses[idx].trigger) {
            Some(r) => r.clone(),
            None => continue, // reported as missing above
        };
        for pair in trigger_rel.iter() {
            if let Some(t) = ctx.pair_violation(idx, fam, pair)? {
                violations.push(ctx.render_violation(idx, pair, &t));
            }
        }
    }
    Ok(violations)
}

