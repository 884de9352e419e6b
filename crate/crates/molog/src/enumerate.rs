//! Bounded, duplicate-free enumeration of well-typed formulas, in a
//! deterministic order: seed letters first, then per depth stratum the
//! Boolean combinations (types ascending, `&` before `|`), then connective
//! applications in declaration order, arguments in index order.
//!
//! The enumeration is kept as a flat node list indexing earlier formulas, so
//! sweeps can interpret every formula against a model in one linear pass.

use std::collections::HashMap;
use std::rc::Rc;

use crate::connective::{ConnKind, ConnectiveSet};
use crate::error::{EvalError, FormulaError};
use crate::formula::{BoolOp, Formula};
use crate::interpret::{apply_skeleton, Evaluator};
use crate::model::{CModel, TupleSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ENode {
    Letter(String),
    Bool(BoolOp, u32, usize, usize),
    Apply(String, Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct EnumeratedLanguage {
    pub nodes: Vec<ENode>,
    depths: Vec<u8>,
    types: Vec<u32>,
}

impl EnumeratedLanguage {
    /// Enumerates every formula of nesting depth at most `depth` over the
    /// given seed letters.
    pub fn build(
        set: &ConnectiveSet,
        depth: usize,
        letters: &[&str],
    ) -> Result<EnumeratedLanguage, FormulaError> {
        let mut lang = EnumeratedLanguage {
            nodes: Vec::new(),
            depths: Vec::new(),
            types: Vec::new(),
        };
        for &l in letters {
            let skel = set
                .skeleton_of(l)
                .filter(|s| s.is_letter())
                .ok_or_else(|| FormulaError::Unknown(l.to_string()))?;
            lang.nodes.push(ENode::Letter(l.to_string()));
            lang.depths.push(0);
            lang.types.push(skel.output_type());
        }

        // indices by type, ordered; refreshed per stratum
        let mut by_type: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, &t) in lang.types.iter().enumerate() {
            by_type.entry(t).or_default().push(i);
        }

        let conns: Vec<(String, Vec<u32>, u32)> = set
            .names()
            .filter_map(|name| match set.kind_of(name) {
                Some(ConnKind::Atomic) => {
                    let s = set.skeleton_of(name).unwrap();
                    (s.arity() > 0).then(|| {
                        (
                            name.to_string(),
                            s.type_sig.inputs.clone(),
                            s.output_type(),
                        )
                    })
                }
                Some(ConnKind::Molecular) => {
                    let sig = set.molecular(name).unwrap().type_sig();
                    (sig.arity() > 0).then(|| {
                        (name.to_string(), sig.inputs.clone(), sig.output)
                    })
                }
                _ => None,
            })
            .collect();

        for d in 1..=depth {
            let prev_len = lang.nodes.len();
            let fresh = |i: usize, lang: &EnumeratedLanguage| lang.depths[i] as usize == d - 1;

            for &ty in set.booleans().iter() {
                let candidates: Vec<usize> =
                    by_type.get(&ty).cloned().unwrap_or_default();
                for op in [BoolOp::And, BoolOp::Or] {
                    for &i in &candidates {
                        for &j in &candidates {
                            if fresh(i, &lang) || fresh(j, &lang) {
                                lang.nodes.push(ENode::Bool(op, ty, i, j));
                                lang.depths.push(d as u8);
                                lang.types.push(ty);
                            }
                        }
                    }
                }
            }

            for (name, inputs, output) in &conns {
                let per_arg: Vec<Vec<usize>> = inputs
                    .iter()
                    .map(|t| by_type.get(t).cloned().unwrap_or_default())
                    .collect();
                if per_arg.iter().any(|c| c.is_empty()) {
                    continue;
                }
                let mut cursor = vec![0usize; per_arg.len()];
                'combos: loop {
                    let args: Vec<usize> =
                        cursor.iter().enumerate().map(|(p, &c)| per_arg[p][c]).collect();
                    if args.iter().any(|&i| fresh(i, &lang)) {
                        lang.nodes.push(ENode::Apply(name.clone(), args));
                        lang.depths.push(d as u8);
                        lang.types.push(*output);
                    }
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

            for i in prev_len..lang.nodes.len() {
                by_type.entry(lang.types[i]).or_default().push(i);
            }
        }
        Ok(lang)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn type_of(&self, i: usize) -> u32 {
        self.types[i]
    }

    pub fn depth_of(&self, i: usize) -> usize {
        self.depths[i] as usize
    }

    /// Reconstructs the AST of the `i`-th formula.
    pub fn formula(&self, i: usize) -> Formula {
        match &self.nodes[i] {
            ENode::Letter(name) => Formula::letter(name),
            ENode::Bool(op, ty, l, r) => Formula::Bool {
                op: *op,
                ty: *ty,
                args: Box::new((self.formula(*l), self.formula(*r))),
            },
            ENode::Apply(name, args) => Formula::Apply {
                name: name.clone(),
                neg: false,
                args: args.iter().map(|&a| self.formula(a)).collect(),
            },
        }
    }

    /// Interprets every enumerated formula in one pass over the node list.
    pub fn interpret_all(
        &self,
        set: &ConnectiveSet,
        model: &CModel,
    ) -> Result<Vec<Rc<TupleSet>>, EvalError> {
        let mut ev = Evaluator::new(set, model);
        let mut out: Vec<Rc<TupleSet>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match node {
                ENode::Letter(name) => ev.eval(&Formula::letter(name))?,
                ENode::Bool(op, _, l, r) => {
                    let left = &out[*l];
                    let right = &out[*r];
                    Rc::new(match op {
                        BoolOp::And => left.intersection(right),
                        BoolOp::Or => left.union(right),
                    })
                }
                ENode::Apply(name, args) => {
                    let sets: Vec<Rc<TupleSet>> =
                        args.iter().map(|&a| out[a].clone()).collect();
                    match set.kind_of(name) {
                        Some(ConnKind::Atomic) => {
                            let skel = set.skeleton_of(name).unwrap();
                            let group = set.group_of(name).unwrap();
                            Rc::new(apply_skeleton(model, skel, group, &sets)?)
                        }
                        Some(ConnKind::Molecular) => {
                            let m = set.molecular(name).unwrap();
                            Rc::new(ev.eval_subtree(&m.name.clone(), &m.tree.clone(), &sets)?)
                        }
                        _ => return Err(FormulaError::Unknown(name.clone()).into()),
                    }
                }
            };
            out.push(s);
        }
        Ok(out)
    }
}

/// Streams every well-typed formula of depth at most `depth` over the given
/// seed letters, each exactly once, in the deterministic enumeration order.
pub fn enumerate(
    set: &ConnectiveSet,
    depth: usize,
    letters: &[&str],
) -> Result<impl Iterator<Item = Formula>, FormulaError> {
    let lang = EnumeratedLanguage::build(set, depth, letters)?;
    Ok((0..lang.len()).map(move |i| lang.formula(i)))
}
