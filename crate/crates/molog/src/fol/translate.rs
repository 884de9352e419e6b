//! The standard translation of typed formulas into first-order logic with
//! designated free variables.
//!
//! A letter becomes its group predicate applied to the target variables,
//! negated under a negative sign. Conjunction and disjunction distribute. An
//! atomic application quantifies one fresh variable block per argument,
//! combines the argument translations (negated where the tonicity sign is
//! negative) with the signed relation literal in inverse-permutation block
//! order, conjunctively for an existential skeleton and disjunctively for a
//! universal one. Molecular connectives translate through their
//! decomposition trees. Fresh variables are `x1, x2, ..` from a counter
//! threaded through the translation, skipping the target names.

use std::collections::HashSet;

use crate::connective::{ConnectiveSet, TreeNode};
use crate::error::{EvalError, FormulaError};
use crate::formula::{BoolOp, Formula};
use crate::skeleton::{AtomicSkeleton, Quant, Sign};

use super::FOFormula;

struct Fresh {
    counter: usize,
    reserved: HashSet<String>,
}

impl Fresh {
    fn next(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("x{}", self.counter);
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }

    fn block(&mut self, len: u32) -> Vec<String> {
        (0..len).map(|_| self.next()).collect()
    }
}

/// Translates a formula of type `k` with a target tuple of `k` variables.
/// The free variables of the result are exactly the target variables.
pub fn st_translate(
    set: &ConnectiveSet,
    formula: &Formula,
    target: &[String],
) -> Result<FOFormula, EvalError> {
    let ty = formula.check(set)?;
    if target.len() != ty as usize {
        return Err(EvalError::TypeMismatch {
            expected: ty,
            got: target.len() as u32,
        });
    }
    let mut fresh = Fresh {
        counter: 0,
        reserved: target.iter().cloned().collect(),
    };
    st(set, formula, target, &mut fresh)
}

fn st(
    set: &ConnectiveSet,
    formula: &Formula,
    target: &[String],
    fresh: &mut Fresh,
) -> Result<FOFormula, EvalError> {
    match formula {
        Formula::Letter { name, neg } => {
            let base = set
                .skeleton_of(name)
                .ok_or_else(|| FormulaError::Unknown(name.clone()))?;
            let skel = if *neg { base.negated() } else { base.clone() };
            Ok(letter_atom(set, name, &skel, target))
        }
        Formula::Bool { op, args, .. } => {
            let left = st(set, &args.0, target, fresh)?;
            let right = st(set, &args.1, target, fresh)?;
            Ok(match op {
                BoolOp::And => left.and(right),
                BoolOp::Or => left.or(right),
            })
        }
        Formula::Apply { name, neg, args } => {
            if let Some(base) = set.skeleton_of(name).filter(|s| !s.is_letter()) {
                let skel = if *neg { base.negated() } else { base.clone() };
                let group = set.group_of(name).unwrap().to_string();
                let subterms: Vec<Subterm> = args.iter().map(Subterm::Formula).collect();
                st_apply(set, &skel, &group, &subterms, target, fresh)
            } else if let Some(m) = set.molecular(name) {
                let mol = m.clone();
                let mut pos = 0usize;
                st_node(set, &mol.name, &mol.tree, *neg, args, &mut pos, target, fresh)
            } else {
                Err(FormulaError::Unknown(name.clone()).into())
            }
        }
    }
}

fn letter_atom(
    set: &ConnectiveSet,
    name: &str,
    skel: &AtomicSkeleton,
    target: &[String],
) -> FOFormula {
    let group = set.group_of(name).unwrap();
    let atom = FOFormula::atom(group, target);
    if skel.sign.is_pos() {
        atom
    } else {
        atom.not()
    }
}

enum Subterm<'a> {
    Formula(&'a Formula),
    /// A subtree together with the argument formulas it consumes.
    Tree {
        owner: &'a str,
        node: &'a TreeNode,
        args: &'a [Formula],
        consumed: std::ops::Range<usize>,
    },
}

#[allow(clippy::too_many_arguments)]
fn st_node(
    set: &ConnectiveSet,
    owner: &str,
    node: &TreeNode,
    negate_root: bool,
    args: &[Formula],
    pos: &mut usize,
    target: &[String],
    fresh: &mut Fresh,
) -> Result<FOFormula, EvalError> {
    match node {
        TreeNode::Id { .. } => {
            let arg = &args[*pos];
            *pos += 1;
            st(set, arg, target, fresh)
        }
        TreeNode::Letter { name } => {
            let skel = set
                .skeleton_of(name)
                .ok_or_else(|| FormulaError::Unknown(name.clone()))?
                .clone();
            Ok(letter_atom(set, name, &skel, target))
        }
        TreeNode::Apply {
            label,
            negated,
            children,
        } => {
            let skel = set
                .label_skeleton(owner, label, *negated != negate_root)
                .map_err(|e| FormulaError::Unknown(e.to_string()))?;
            let group = set.group_of(label).unwrap().to_string();
            let mut subterms = Vec::with_capacity(children.len());
            for child in children {
                let start = *pos;
                *pos += leaf_count(child);
                subterms.push(Subterm::Tree {
                    owner,
                    node: child,
                    args,
                    consumed: start..*pos,
                });
            }
            st_apply(set, &skel, &group, &subterms, target, fresh)
        }
    }
}

fn leaf_count(node: &TreeNode) -> usize {
    match node {
        TreeNode::Id { .. } => 1,
        TreeNode::Letter { .. } => 0,
        TreeNode::Apply { children, .. } => children.iter().map(leaf_count).sum(),
    }
}

fn st_apply(
    set: &ConnectiveSet,
    skel: &AtomicSkeleton,
    group: &str,
    subterms: &[Subterm],
    target: &[String],
    fresh: &mut Fresh,
) -> Result<FOFormula, EvalError> {
    let n = skel.arity();
    let blocks: Vec<Vec<String>> = skel
        .type_sig
        .inputs
        .iter()
        .map(|&kj| fresh.block(kj))
        .collect();

    let mut parts = Vec::with_capacity(n + 1);
    for (j, sub) in subterms.iter().enumerate() {
        let translated = match sub {
            Subterm::Formula(f) => st(set, f, &blocks[j], fresh)?,
            Subterm::Tree {
                owner,
                node,
                args,
                consumed,
            } => {
                let mut pos = consumed.start;
                let r = st_node(set, owner, node, false, args, &mut pos, &blocks[j], fresh)?;
                debug_assert_eq!(pos, consumed.end);
                r
            }
        };
        parts.push(match skel.tonicity[j] {
            Sign::Pos => translated,
            Sign::Neg => translated.not(),
        });
    }

    // The relation literal in base argument order.
    let inv = skel.perm.inverse();
    let mut atom_args: Vec<String> = Vec::new();
    for i in 1..=n + 1 {
        let j = inv.apply(i);
        if j == n + 1 {
            atom_args.extend(target.iter().cloned());
        } else {
            atom_args.extend(blocks[j - 1].iter().cloned());
        }
    }
    let lit = FOFormula::atom(group, &atom_args);
    parts.push(if skel.sign.is_pos() { lit } else { lit.not() });

    let mut body = parts.remove(0);
    for p in parts {
        body = match skel.quant {
            Quant::Ex => body.and(p),
            Quant::All => body.or(p),
        };
    }
    for var in blocks.into_iter().flatten().rev() {
        body = match skel.quant {
            Quant::Ex => FOFormula::Exists(var, Box::new(body)),
            Quant::All => FOFormula::Forall(var, Box::new(body)),
        };
    }
    Ok(body)
}
