//! Mechanical generation of bisimulation clauses from a connective set, and
//! their stable text rendering.
//!
//! Every letter and atomic connective contributes one clause on `Z`; every
//! internal vertex of a decomposition tree contributes one clause whose
//! trigger relation is the vertex's own (the root uses `Z`), with membership
//! conjuncts referring to the child vertices' relations; letter leaves
//! contribute the membership clause on their vertex relation. `id` leaves are
//! identified with `Z` and impose nothing of their own.

use std::fmt;

use crate::connective::{ConnKind, ConnectiveSet, TreeNode, VertexAddr};
use crate::error::SetError;
use crate::skeleton::{AtomicSkeleton, Quant, Sign};

/// Which relation of a family a clause reads or writes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelRef {
    Z,
    Vertex { mol: String, addr: VertexAddr },
}

impl fmt::Display for RelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelRef::Z => f.write_str("Z"),
            RelRef::Vertex { mol, addr } => write!(f, "Z{{{mol}/{addr}}}"),
        }
    }
}

/// One back-and-forth clause: the trigger relation, the effective skeleton
/// of the connective or vertex label, its relation group, and the relation
/// used by each argument's membership conjunct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: String,
    pub trigger: RelRef,
    pub skeleton: AtomicSkeleton,
    pub group: String,
    pub children: Vec<RelRef>,
}

#[derive(Debug, Clone, Default)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            out.push_str(&render_clause(c));
            out.push('\n');
        }
        out
    }
}

/// Generates the clause set induced by the connective declarations, in
/// declaration order; molecular vertices are emitted in preorder.
pub fn generate_clauses(set: &ConnectiveSet) -> Result<ClauseSet, SetError> {
    let mut clauses = Vec::new();
    for name in set.names() {
        match set.kind_of(name).unwrap() {
            ConnKind::Letter | ConnKind::Atomic => {
                let skel = set.skeleton_of(name).unwrap().clone();
                let children = vec![RelRef::Z; skel.arity()];
                clauses.push(Clause {
                    id: name.to_string(),
                    trigger: RelRef::Z,
                    skeleton: skel,
                    group: set.group_of(name).unwrap().to_string(),
                    children,
                });
            }
            ConnKind::Hidden => {}
            ConnKind::Molecular => {
                let m = set.molecular(name).unwrap();
                for (addr, node) in m.vertices() {
                    let rel_of = |a: &VertexAddr, n: &TreeNode| match n {
                        TreeNode::Id { .. } => RelRef::Z,
                        _ if a.is_root() => RelRef::Z,
                        _ => RelRef::Vertex {
                            mol: m.name.clone(),
                            addr: a.clone(),
                        },
                    };
                    let id = if addr.is_root() {
                        m.name.clone()
                    } else {
                        format!("{}/{}", m.name, addr)
                    };
                    match node {
                        TreeNode::Apply {
                            label,
                            negated,
                            children,
                        } => {
                            let skel = set.label_skeleton(&m.name, label, *negated)?;
                            let child_rels = children
                                .iter()
                                .enumerate()
                                .map(|(j, ch)| rel_of(&addr.child(j + 1), ch))
                                .collect();
                            clauses.push(Clause {
                                id,
                                trigger: rel_of(&addr, node),
                                skeleton: skel,
                                group: set.group_of(label).unwrap().to_string(),
                                children: child_rels,
                            });
                        }
                        TreeNode::Letter { name: letter } => {
                            let skel = set.skeleton_of(letter).unwrap().clone();
                            clauses.push(Clause {
                                id,
                                trigger: rel_of(&addr, node),
                                skeleton: skel,
                                group: set.group_of(letter).unwrap().to_string(),
                                children: vec![],
                            });
                        }
                        TreeNode::Id { .. } => {}
                    }
                }
            }
        }
    }
    Ok(ClauseSet { clauses })
}

fn block_name(j: usize, n: usize, primed: bool) -> String {
    let base = if j == n + 1 {
        "x".to_string()
    } else {
        format!("x{j}")
    };
    if primed {
        format!("{base}'")
    } else {
        base
    }
}

/// The signed relation literal in base argument order: position `i` shows
/// the block `sigma^-(i)`, with a `not` prefix when the net polarity is
/// negative and a prime on the relation symbol for the target model.
fn literal(clause: &Clause, positive: bool, target_model: bool, primed_args: bool) -> String {
    let skel = &clause.skeleton;
    let n = skel.arity();
    let inv = skel.perm.inverse();
    let args: Vec<String> = (1..=n + 1)
        .map(|i| block_name(inv.apply(i), n, primed_args))
        .collect();
    format!(
        "{}R_{}{} {}",
        if positive { "" } else { "not " },
        clause.group,
        if target_model { "'" } else { "" },
        args.join(" ")
    )
}

fn membership(clause: &Clause, j: usize) -> String {
    let n = clause.skeleton.arity();
    let unprimed = block_name(j + 1, n, false);
    let primed = block_name(j + 1, n, true);
    match clause.skeleton.tonicity[j] {
        Sign::Pos => format!("{unprimed} {} {primed}", clause.children[j]),
        Sign::Neg => format!("{primed} {} {unprimed}", clause.children[j]),
    }
}

/// Renders one clause:
///
/// ```text
/// [dia] if x Z x' and R_r x x1 then exists x1': x1 Z x1' and R_r' x' x1'
/// [box] if x Z x' and R_r' x' x1' then exists x1: x1 Z x1' and R_r x x1
/// ```
pub fn render_clause(clause: &Clause) -> String {
    let skel = &clause.skeleton;
    let n = skel.arity();
    let trigger_pair = format!("x {} x'", clause.trigger);
    // Existential clauses trigger on the signed literal in the source model;
    // universal clauses on its complement in the target model (so the net
    // polarity flips), and witnesses swap accordingly.
    let (trigger_lit, witness_lit, witness_primed) = match skel.quant {
        Quant::Ex => (
            literal(clause, skel.sign.is_pos(), false, false),
            literal(clause, skel.sign.is_pos(), true, true),
            true,
        ),
        Quant::All => (
            literal(clause, !skel.sign.is_pos(), true, true),
            literal(clause, !skel.sign.is_pos(), false, false),
            false,
        ),
    };
    if n == 0 {
        return format!(
            "[{}] if {trigger_pair} and {trigger_lit} then {witness_lit}",
            clause.id
        );
    }
    let witness_vars: Vec<String> = (1..=n).map(|j| block_name(j, n, witness_primed)).collect();
    let mut conjuncts: Vec<String> = (0..n).map(|j| membership(clause, j)).collect();
    conjuncts.push(witness_lit);
    format!(
        "[{}] if {trigger_pair} and {trigger_lit} then exists {}: {}",
        clause.id,
        witness_vars.join(" "),
        conjuncts.join(" and ")
    )
}
