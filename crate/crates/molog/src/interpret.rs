//! The interpretation function over finite models.
//!
//! A letter denotes its group relation, complemented under a negative sign.
//! Conjunction and disjunction are intersection and union. An atomic
//! connective application is evaluated by scanning relation instances: for an
//! existential skeleton an output tuple is included when some instance
//! satisfies the membership conditions and the signed relation literal; for a
//! universal skeleton it is excluded when some instance falsifies all
//! membership disjuncts together with the literal. The signed literal reads
//! the base relation in inverse-permutation block order; complements are
//! enumerated lazily, never materialized as relations.

use std::collections::HashMap;
use std::rc::Rc;

use crate::connective::{ConnectiveSet, TreeNode};
use crate::error::{EvalError, FormulaError, ModelError};
use crate::formula::{negate, BoolOp, Formula};
use crate::model::{all_tuples, CModel, TupleSet};
use crate::skeleton::{AtomicSkeleton, Quant, Sign};

/// Evaluates formulas against one model, caching interpretations per formula
/// so enumerated sweeps stay linear in the number of distinct subformulas.
pub struct Evaluator<'a> {
    pub set: &'a ConnectiveSet,
    pub model: &'a CModel,
    cache: HashMap<Formula, Rc<TupleSet>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(set: &'a ConnectiveSet, model: &'a CModel) -> Self {
        Evaluator {
            set,
            model,
            cache: HashMap::new(),
        }
    }

    pub fn eval(&mut self, formula: &Formula) -> Result<Rc<TupleSet>, EvalError> {
        if let Some(hit) = self.cache.get(formula) {
            return Ok(hit.clone());
        }
        let result = Rc::new(self.eval_uncached(formula)?);
        self.cache.insert(formula.clone(), result.clone());
        Ok(result)
    }

    fn eval_uncached(&mut self, formula: &Formula) -> Result<TupleSet, EvalError> {
        match formula {
            Formula::Letter { name, neg } => {
                let base = self
                    .set
                    .skeleton_of(name)
                    .filter(|s| s.is_letter())
                    .ok_or_else(|| FormulaError::Unknown(name.clone()))?;
                let skel = if *neg { base.negated() } else { base.clone() };
                let group = self.set.group_of(name).unwrap();
                let rel = self.model.relation(group)?;
                let set = TupleSet::from_tuples(skel.output_type(), rel.tuples.iter().cloned());
                if skel.sign.is_pos() {
                    Ok(set)
                } else {
                    set.complement(self.model.n_worlds())
                }
            }
            Formula::Bool { op, args, .. } => {
                let left = self.eval(&args.0)?;
                let right = self.eval(&args.1)?;
                Ok(match op {
                    BoolOp::And => left.intersection(&right),
                    BoolOp::Or => left.union(&right),
                })
            }
            Formula::Apply { name, neg, args } => {
                if let Some(base) = self.set.skeleton_of(name).filter(|s| !s.is_letter()) {
                    let skel = if *neg { base.negated() } else { base.clone() };
                    let group = self.set.group_of(name).unwrap().to_string();
                    let mut sets = Vec::with_capacity(args.len());
                    for a in args {
                        sets.push(self.eval(a)?);
                    }
                    apply_skeleton(self.model, &skel, &group, &sets)
                } else if let Some(m) = self.set.molecular(name) {
                    let tree = m.tree.clone();
                    let name = m.name.clone();
                    let mut pos = 0usize;
                    self.eval_tree(&name, &tree, *neg, args, &mut pos)
                } else {
                    Err(FormulaError::Unknown(name.clone()).into())
                }
            }
        }
    }

    /// Truth condition of a decomposition tree: `id` leaves consume argument
    /// formulas in order, letter leaves denote themselves, internal vertices
    /// compose through their label's truth condition. `negate_root` applies
    /// outermost Boolean negation to the root label.
    fn eval_tree(
        &mut self,
        owner: &str,
        node: &TreeNode,
        negate_root: bool,
        args: &[Formula],
        pos: &mut usize,
    ) -> Result<TupleSet, EvalError> {
        match node {
            TreeNode::Id { .. } => {
                let arg = &args[*pos];
                *pos += 1;
                Ok((*self.eval(arg)?).clone())
            }
            TreeNode::Letter { name } => {
                let f = Formula::Letter {
                    name: name.clone(),
                    neg: false,
                };
                Ok((*self.eval(&f)?).clone())
            }
            TreeNode::Apply {
                label,
                negated,
                children,
            } => {
                let skel = self
                    .set
                    .label_skeleton(owner, label, *negated != negate_root)
                    .map_err(|_| FormulaError::Unknown(label.clone()))?;
                let group = self.set.group_of(label).unwrap().to_string();
                let mut sets = Vec::with_capacity(children.len());
                for child in children {
                    sets.push(Rc::new(self.eval_tree(owner, child, false, args, pos)?));
                }
                apply_skeleton(self.model, &skel, &group, &sets)
            }
        }
    }

    /// Interpretation of a subtree applied to already-evaluated argument
    /// sets, one per `id` leaf in order.
    pub fn eval_subtree(
        &mut self,
        owner: &str,
        node: &TreeNode,
        arg_sets: &[Rc<TupleSet>],
    ) -> Result<TupleSet, EvalError> {
        let mut pos = 0usize;
        let r = self.eval_subtree_inner(owner, node, arg_sets, &mut pos);
        debug_assert!(r.is_err() || pos == arg_sets.len());
        r
    }

    fn eval_subtree_inner(
        &mut self,
        owner: &str,
        node: &TreeNode,
        arg_sets: &[Rc<TupleSet>],
        pos: &mut usize,
    ) -> Result<TupleSet, EvalError> {
        match node {
            TreeNode::Id { .. } => {
                let s = (*arg_sets[*pos]).clone();
                *pos += 1;
                Ok(s)
            }
            TreeNode::Letter { name } => {
                let f = Formula::Letter {
                    name: name.clone(),
                    neg: false,
                };
                Ok((*self.eval(&f)?).clone())
            }
            TreeNode::Apply {
                label,
                negated,
                children,
            } => {
                let skel = self
                    .set
                    .label_skeleton(owner, label, *negated)
                    .map_err(|_| FormulaError::Unknown(label.clone()))?;
                let group = self.set.group_of(label).unwrap().to_string();
                let mut sets = Vec::with_capacity(children.len());
                for child in children {
                    sets.push(Rc::new(self.eval_subtree_inner(owner, child, arg_sets, pos)?));
                }
                apply_skeleton(self.model, &skel, &group, &sets)
            }
        }
    }
}

/// One application of an atomic truth condition to argument interpretations.
pub fn apply_skeleton(
    model: &CModel,
    skel: &AtomicSkeleton,
    group: &str,
    arg_sets: &[Rc<TupleSet>],
) -> Result<TupleSet, EvalError> {
    let rel = model.relation(group)?;
    let base_lens = skel.base_block_lens();
    let rel_arity: usize = base_lens.iter().sum::<u32>() as usize;
    if rel.arity != rel_arity && !rel.tuples.is_empty() {
        return Err(ModelError::TupleArity {
            group: group.to_string(),
            tuple: vec![],
            got: rel.arity,
            expected: rel_arity,
        }
        .into());
    }
    let k = skel.output_type();
    let n = skel.arity();
    // The literal instances to scan are the true ones for an existential
    // skeleton and the false ones for a universal one; with a negative sign
    // both flip, so stored tuples are scanned exactly when sign and
    // quantifier disagree in the universal case and agree in the existential.
    let scan_stored = matches!(
        (skel.quant, skel.sign),
        (Quant::Ex, Sign::Pos) | (Quant::All, Sign::Neg)
    );

    let mut hits = TupleSet::empty(k);
    let mut scan = |tuple: &Vec<u32>| {
        let blocks = split_blocks(tuple, &base_lens);
        let out = blocks[skel.output_base_position() - 1];
        let matched = (0..n).all(|j| {
            let x = blocks[skel.perm.apply(j + 1) - 1];
            let member = arg_sets[j].contains(x);
            match (skel.quant, skel.tonicity[j]) {
                // Existential: every membership conjunct must hold.
                (Quant::Ex, Sign::Pos) => member,
                (Quant::Ex, Sign::Neg) => !member,
                // Universal: collecting falsifying instances, so every
                // membership disjunct must fail.
                (Quant::All, Sign::Pos) => !member,
                (Quant::All, Sign::Neg) => member,
            }
        });
        if matched {
            hits.insert(out.to_vec());
        }
    };

    if scan_stored {
        for tuple in &rel.tuples {
            scan(tuple);
        }
    } else {
        for tuple in all_tuples(model.n_worlds(), rel_arity as u32)? {
            if !rel.tuples.contains(&tuple) {
                scan(&tuple);
            }
        }
    }
    drop(scan);

    match skel.quant {
        Quant::Ex => Ok(hits),
        Quant::All => hits.complement(model.n_worlds()),
    }
}

fn split_blocks<'t>(tuple: &'t [u32], lens: &[u32]) -> Vec<&'t [u32]> {
    let mut out = Vec::with_capacity(lens.len());
    let mut start = 0usize;
    for &len in lens {
        out.push(&tuple[start..start + len as usize]);
        start += len as usize;
    }
    out
}

/// Computes the interpretation of a formula in a model.
pub fn interpret(
    set: &ConnectiveSet,
    model: &CModel,
    formula: &Formula,
) -> Result<TupleSet, EvalError> {
    formula.check(set)?;
    Ok((*Evaluator::new(set, model).eval(formula)?).clone())
}

/// Pointed satisfaction: membership of the point in the interpretation.
pub fn satisfies(
    set: &ConnectiveSet,
    model: &CModel,
    point: &[u32],
    formula: &Formula,
) -> Result<bool, EvalError> {
    let ty = formula.check(set)?;
    if point.len() != ty as usize {
        return Err(EvalError::TypeMismatch {
            expected: ty,
            got: point.len() as u32,
        });
    }
    Ok(Evaluator::new(set, model).eval(formula)?.contains(point))
}

/// Checks that the Boolean negation of a formula denotes the set complement
/// of the formula's interpretation.
pub fn complement_check(
    set: &ConnectiveSet,
    model: &CModel,
    formula: &Formula,
) -> Result<bool, EvalError> {
    let negated = negate(formula)?;
    let mut ev = Evaluator::new(set, model);
    let pos = ev.eval(formula)?;
    let neg = ev.eval(&negated)?;
    let expected = pos.complement(model.n_worlds())?;
    Ok(*neg == expected)
}
