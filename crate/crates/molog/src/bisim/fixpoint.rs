//! Greatest-fixpoint computation of the maximal bisimulation family by
//! iterated deletion of unsupported pairs.
//!
//! Every relation starts from the full set of type-matching directed pairs;
//! each round deletes the pairs whose clause instance has no witness and
//! re-establishes the containment of `Z` in the vertex relations. Deletions
//! are applied as a batch between rounds by default; the immediate modes
//! delete during the scan, in either scan direction, and reach the same
//! fixpoint.

use crate::connective::ConnectiveSet;
use crate::error::EvalError;
use crate::model::{all_tuples, CModel};

use super::check::CheckCtx;
use super::{BisimFamily, DirectedPair, PairSet, RelRef, Side};

/// How the deletion scan is ordered. The fixpoint is the same in every mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// Scan everything, then delete between rounds.
    #[default]
    Batch,
    /// Delete as soon as a violation is found, scanning pairs in order
    /// (forward side first, then lexicographic).
    ImmediateLex,
    /// As `ImmediateLex` but scanning pairs in reverse order.
    ImmediateRevLex,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RefineStats {
    pub rounds: usize,
    pub deletions: usize,
    pub initial_pairs: usize,
}

/// The family in which every relation holds all type-matching directed
/// pairs: `Z` over every occurring type, each vertex relation over its
/// subtree's output type.
pub fn full_family(
    set: &ConnectiveSet,
    m1: &CModel,
    m2: &CModel,
) -> Result<BisimFamily, EvalError> {
    let mut fam = BisimFamily::default();
    for &ty in &set.types_occurring() {
        for p in all_pairs(m1, m2, ty)? {
            fam.z.insert(p);
        }
    }
    for key in super::required_vertex_keys(set) {
        let m = set.molecular(&key.0).unwrap();
        let node = m.vertex(&key.1).unwrap();
        let ty = set
            .node_type_sig(&key.0, node)
            .map_err(|e| EvalError::Formula(crate::error::FormulaError::Unknown(e.to_string())))?
            .output;
        let pairs: PairSet = all_pairs(m1, m2, ty)?.into_iter().collect();
        fam.per_vertex.insert(key, pairs);
    }
    Ok(fam)
}

fn all_pairs(m1: &CModel, m2: &CModel, ty: u32) -> Result<Vec<DirectedPair>, EvalError> {
    let t1 = all_tuples(m1.n_worlds(), ty)?;
    let t2 = all_tuples(m2.n_worlds(), ty)?;
    let mut out = Vec::with_capacity(2 * t1.len() * t2.len());
    for a in &t1 {
        for b in &t2 {
            out.push(DirectedPair::new(Side::Forward, a.clone(), b.clone()));
        }
    }
    for b in &t2 {
        for a in &t1 {
            out.push(DirectedPair::new(Side::Backward, b.clone(), a.clone()));
        }
    }
    Ok(out)
}

/// Greatest fixpoint below a seed family: deletes unsupported pairs from the
/// seed until every clause holds. The result is the largest sub-family of
/// the seed satisfying all clauses and the containment invariant.
pub fn refine_family(
    set: &ConnectiveSet,
    m1: &CModel,
    m2: &CModel,
    seed: BisimFamily,
) -> Result<BisimFamily, EvalError> {
    refine_family_with_mode(set, m1, m2, seed, ScanMode::Batch).map(|(f, _)| f)
}

pub fn refine_family_with_mode(
    set: &ConnectiveSet,
    m1: &CModel,
    m2: &CModel,
    seed: BisimFamily,
    mode: ScanMode,
) -> Result<(BisimFamily, RefineStats), EvalError> {
    let ctx = CheckCtx::new(set, m1, m2)?;
    let mut fam = seed;
    let mut stats = RefineStats {
        rounds: 0,
        deletions: 0,
        initial_pairs: fam.total_pairs(),
    };

    // Containment must hold before the first scan as well.
    stats.deletions += enforce_containment(set, &mut fam)?;

    loop {
        stats.rounds += 1;
        let mut deleted_this_round = 0usize;
        match mode {
            ScanMode::Batch => {
                let mut pending: Vec<(RelRef, DirectedPair)> = Vec::new();
                for idx in 0..ctx.clause_set.clauses.len() {
                    let trigger = ctx.clause_set.clauses[idx].trigger.clone();
                    let rel = match fam.relation(&trigger) {
                        Some(r) => r,
                        None => continue,
                    };
                    for pair in rel.iter() {
                        if ctx.pair_violation(idx, &fam, pair)?.is_some() {
                            pending.push((trigger.clone(), pair.clone()));
                        }
                    }
                }
                for (rel, pair) in pending {
                    if remove_from(&mut fam, &rel, &pair) {
                        deleted_this_round += 1;
                    }
                }
            }
            ScanMode::ImmediateLex | ScanMode::ImmediateRevLex => {
                for idx in 0..ctx.clause_set.clauses.len() {
                    let trigger = ctx.clause_set.clauses[idx].trigger.clone();
                    let mut pairs: Vec<DirectedPair> = match fam.relation(&trigger) {
                        Some(r) => r.iter().cloned().collect(),
                        None => continue,
                    };
                    if mode == ScanMode::ImmediateRevLex {
                        pairs.reverse();
                    }
                    for pair in pairs {
                        if ctx.pair_violation(idx, &fam, &pair)?.is_some()
                            && remove_from(&mut fam, &trigger, &pair)
                        {
                            deleted_this_round += 1;
                        }
                    }
                }
            }
        }
        deleted_this_round += enforce_containment(set, &mut fam)?;
        stats.deletions += deleted_this_round;
        if deleted_this_round == 0 {
            return Ok((fam, stats));
        }
    }
}

fn remove_from(fam: &mut BisimFamily, rel: &RelRef, pair: &DirectedPair) -> bool {
    match rel {
        RelRef::Z => fam.z.remove(pair),
        RelRef::Vertex { mol, addr } => fam
            .per_vertex
            .get_mut(&(mol.clone(), addr.clone()))
            .map(|r| r.remove(pair))
            .unwrap_or(false),
    }
}

/// Deletes from `Z` every pair missing from some vertex relation at the
/// vertex's type. Returns the number of deletions.
fn enforce_containment(set: &ConnectiveSet, fam: &mut BisimFamily) -> Result<usize, EvalError> {
    let mut to_delete: Vec<DirectedPair> = Vec::new();
    for (key, rel) in &fam.per_vertex {
        let m = set.molecular(&key.0).unwrap();
        let node = m.vertex(&key.1).unwrap();
        let ty = set
            .node_type_sig(&key.0, node)
            .map_err(|e| EvalError::Formula(crate::error::FormulaError::Unknown(e.to_string())))?
            .output;
        for pair in fam.z.iter() {
            if pair.ty() == ty && !rel.contains(pair.side, &pair.left, &pair.right) {
                to_delete.push(pair.clone());
            }
        }
    }
    let mut n = 0;
    for pair in to_delete {
        if fam.z.remove(&pair) {
            n += 1;
        }
    }
    Ok(n)
}

/// The maximal bisimulation family between two models: the greatest fixpoint
/// of clause-driven deletion from the full family.
pub fn maximal_bisimulation(
    set: &ConnectiveSet,
    m1: &CModel,
    m2: &CModel,
) -> Result<BisimFamily, EvalError> {
    let seed = full_family(set, m1, m2)?;
    refine_family(set, m1, m2, seed)
}

pub fn maximal_bisimulation_with_mode(
    set: &ConnectiveSet,
    m1: &CModel,
    m2: &CModel,
    mode: ScanMode,
) -> Result<(BisimFamily, RefineStats), EvalError> {
    let seed = full_family(set, m1, m2)?;
    refine_family_with_mode(set, m1, m2, seed, mode)
}

/// Whether two pointed models are related by the maximal bisimulation, i.e.
/// the forward pair of the points survives refinement.
pub fn bisimilar(
    set: &ConnectiveSet,
    m1: &CModel,
    point1: &[u32],
    m2: &CModel,
    point2: &[u32],
) -> Result<bool, EvalError> {
    if point1.len() != point2.len() {
        return Err(EvalError::TypeMismatch {
            expected: point1.len() as u32,
            got: point2.len() as u32,
        });
    }
    let fam = maximal_bisimulation(set, m1, m2)?;
    Ok(fam.z.contains(Side::Forward, point1, point2))
}
