//! Bounded formula-preservation oracles: whether every enumerated formula
//! true at a source point is true at a target point, either over the whole
//! language or with the head fixed to one decomposition-tree vertex.

use std::rc::Rc;

use crate::connective::{ConnectiveSet, TreeNode, VertexAddr};
use crate::enumerate::EnumeratedLanguage;
use crate::error::{EvalError, FormulaError};
use crate::formula::Formula;
use crate::interpret::Evaluator;
use crate::model::{CModel, TupleSet};

use super::Side;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreserveOutcome {
    pub holds: bool,
    /// First failing formula in enumeration order.
    pub counterexample: Option<Formula>,
}

/// Interpretations of the whole enumerated language in both models, shared
/// across many pair queries.
pub struct PreservationOracle {
    lang: EnumeratedLanguage,
    sets1: Vec<Rc<TupleSet>>,
    sets2: Vec<Rc<TupleSet>>,
}

impl PreservationOracle {
    pub fn new(
        set: &ConnectiveSet,
        m1: &CModel,
        m2: &CModel,
        depth: usize,
        letters: &[&str],
    ) -> Result<Self, EvalError> {
        let lang = EnumeratedLanguage::build(set, depth, letters)?;
        let sets1 = lang.interpret_all(set, m1)?;
        let sets2 = lang.interpret_all(set, m2)?;
        Ok(PreservationOracle { lang, sets1, sets2 })
    }

    /// Truth transfer from the side's source point to its target point.
    pub fn check(&self, side: Side, p_src: &[u32], p_tgt: &[u32]) -> PreserveOutcome {
        let (src, tgt) = match side {
            Side::Forward => (&self.sets1, &self.sets2),
            Side::Backward => (&self.sets2, &self.sets1),
        };
        let ty = p_src.len() as u32;
        for i in 0..self.lang.len() {
            if self.lang.type_of(i) == ty && src[i].contains(p_src) && !tgt[i].contains(p_tgt) {
                return PreserveOutcome {
                    holds: false,
                    counterexample: Some(self.lang.formula(i)),
                };
            }
        }
        PreserveOutcome {
            holds: true,
            counterexample: None,
        }
    }

    pub fn language_len(&self) -> usize {
        self.lang.len()
    }
}

/// One-off preservation query between two pointed models.
pub fn preserves(
    set: &ConnectiveSet,
    m1: &CModel,
    point1: &[u32],
    m2: &CModel,
    point2: &[u32],
    depth: usize,
    letters: &[&str],
) -> Result<PreserveOutcome, EvalError> {
    if point1.len() != point2.len() {
        return Err(EvalError::TypeMismatch {
            expected: point1.len() as u32,
            got: point2.len() as u32,
        });
    }
    let oracle = PreservationOracle::new(set, m1, m2, depth, letters)?;
    Ok(oracle.check(Side::Forward, point1, point2))
}

enum VertexKind {
    /// `id` vertices preserve the full language.
    Id(Box<PreservationOracle>),
    /// Letter vertices preserve exactly their own membership.
    Letter {
        name: String,
        in1: Rc<TupleSet>,
        in2: Rc<TupleSet>,
    },
    /// Internal vertices preserve head-fixed applications of the subtree.
    Head {
        items: Vec<(String, TupleSet, TupleSet)>,
    },
}

/// Preservation oracle for the language with its head fixed to one
/// decomposition-tree vertex: all applications of the vertex's subtree to
/// enumerated arguments (one nesting level for the head, so arguments are
/// enumerated to `depth - 1`).
pub struct VertexOracle {
    kind: VertexKind,
}

impl VertexOracle {
    pub fn new(
        set: &ConnectiveSet,
        m1: &CModel,
        m2: &CModel,
        mol: &str,
        addr: &VertexAddr,
        depth: usize,
        letters: &[&str],
    ) -> Result<Self, EvalError> {
        let m = set
            .molecular(mol)
            .ok_or_else(|| FormulaError::Unknown(mol.to_string()))?;
        let node = m
            .vertex(addr)
            .ok_or_else(|| FormulaError::Unknown(format!("{mol}/{addr}")))?
            .clone();
        let kind = match &node {
            TreeNode::Id { .. } => VertexKind::Id(Box::new(PreservationOracle::new(
                set, m1, m2, depth, letters,
            )?)),
            TreeNode::Letter { name } => {
                let f = Formula::letter(name);
                let in1 = Evaluator::new(set, m1).eval(&f)?;
                let in2 = Evaluator::new(set, m2).eval(&f)?;
                VertexKind::Letter {
                    name: name.clone(),
                    in1,
                    in2,
                }
            }
            TreeNode::Apply { .. } => {
                let sig = set
                    .node_type_sig(mol, &node)
                    .map_err(|e| FormulaError::Unknown(e.to_string()))?;
                let arg_depth = depth.saturating_sub(1);
                let lang = EnumeratedLanguage::build(set, arg_depth, letters)?;
                let sets1 = lang.interpret_all(set, m1)?;
                let sets2 = lang.interpret_all(set, m2)?;
                let mut ev1 = Evaluator::new(set, m1);
                let mut ev2 = Evaluator::new(set, m2);
                let per_arg: Vec<Vec<usize>> = sig
                    .inputs
                    .iter()
                    .map(|&t| (0..lang.len()).filter(|&i| lang.type_of(i) == t).collect())
                    .collect();
                let mut items = Vec::new();
                if per_arg.iter().all(|c| !c.is_empty()) {
                    let mut cursor = vec![0usize; per_arg.len()];
                    'combos: loop {
                        let idxs: Vec<usize> =
                            cursor.iter().enumerate().map(|(p, &c)| per_arg[p][c]).collect();
                        let args1: Vec<Rc<TupleSet>> =
                            idxs.iter().map(|&i| sets1[i].clone()).collect();
                        let args2: Vec<Rc<TupleSet>> =
                            idxs.iter().map(|&i| sets2[i].clone()).collect();
                        let head1 = ev1.eval_subtree(mol, &node, &args1)?;
                        let head2 = ev2.eval_subtree(mol, &node, &args2)?;
                        let desc: Vec<String> =
                            idxs.iter().map(|&i| lang.formula(i).to_string()).collect();
                        items.push((
                            format!("{mol}/{addr}({})", desc.join(", ")),
                            head1,
                            head2,
                        ));
                        let mut p = per_arg.len();
                        loop {
                            if p == 0 {
                                break 'combos;
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
                VertexKind::Head { items }
            }
        };
        Ok(VertexOracle { kind })
    }

    /// Truth transfer for the head-fixed language; the counterexample names
    /// the vertex and its argument formulas.
    pub fn check(&self, side: Side, p_src: &[u32], p_tgt: &[u32]) -> (bool, Option<String>) {
        match &self.kind {
            VertexKind::Id(oracle) => {
                let out = oracle.check(side, p_src, p_tgt);
                (out.holds, out.counterexample.map(|f| f.to_string()))
            }
            VertexKind::Letter { name, in1, in2 } => {
                let (src, tgt) = match side {
                    Side::Forward => (in1, in2),
                    Side::Backward => (in2, in1),
                };
                if src.contains(p_src) && !tgt.contains(p_tgt) {
                    (false, Some(name.clone()))
                } else {
                    (true, None)
                }
            }
            VertexKind::Head { items } => {
                for (desc, s1, s2) in items {
                    let (src, tgt) = match side {
                        Side::Forward => (s1, s2),
                        Side::Backward => (s2, s1),
                    };
                    if src.k() == p_src.len() as u32
                        && src.contains(p_src)
                        && !tgt.contains(p_tgt)
                    {
                        return (false, Some(desc.clone()));
                    }
                }
                (true, None)
            }
        }
    }
}
