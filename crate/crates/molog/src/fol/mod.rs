//! First-order syntax over the primitive basis `false`, implication and the
//! universal quantifier, with negation, conjunction, disjunction and the
//! existential quantifier carried as derived nodes that expand losslessly
//! into the basis.

mod eval;
mod export;
mod translate;

pub use eval::{associated_structure, fol_eval, FOStructure};
pub use export::{
    parse_smtlib, parse_tptp, to_smtlib, to_tptp, tptp_normalize, SmtScript, TptpUnit,
};
pub use translate::st_translate;

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FOFormula {
    False,
    Atom { pred: String, args: Vec<Term> },
    Implies(Box<FOFormula>, Box<FOFormula>),
    Forall(String, Box<FOFormula>),
    Not(Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
}

impl FOFormula {
    pub fn atom(pred: &str, vars: &[String]) -> FOFormula {
        FOFormula::Atom {
            pred: pred.to_string(),
            args: vars.iter().map(|v| Term::Var(v.clone())).collect(),
        }
    }

    pub fn not(self) -> FOFormula {
        FOFormula::Not(Box::new(self))
    }

    pub fn and(self, other: FOFormula) -> FOFormula {
        FOFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: FOFormula) -> FOFormula {
        FOFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: FOFormula) -> FOFormula {
        FOFormula::Implies(Box::new(self), Box::new(other))
    }

    /// Free variables (constants are collected by [`FOFormula::constants`]).
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            FOFormula::False => {}
            FOFormula::Atom { args, .. } => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            FOFormula::Implies(a, b) | FOFormula::And(a, b) | FOFormula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FOFormula::Not(a) => a.collect_free(bound, out),
            FOFormula::Forall(x, a) | FOFormula::Exists(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk_atoms(&mut |atom_args| {
            for t in atom_args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        });
        out
    }

    /// Predicate symbols with arities, sorted by name.
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let FOFormula::Atom { pred, args } = f {
                out.insert((pred.clone(), args.len()));
            }
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&FOFormula)) {
        visit(self);
        match self {
            FOFormula::False | FOFormula::Atom { .. } => {}
            FOFormula::Implies(a, b) | FOFormula::And(a, b) | FOFormula::Or(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            FOFormula::Not(a) | FOFormula::Forall(_, a) | FOFormula::Exists(_, a) => a.walk(visit),
        }
    }

    fn walk_atoms(&self, visit: &mut impl FnMut(&[Term])) {
        self.walk(&mut |f| {
            if let FOFormula::Atom { args, .. } = f {
                visit(args);
            }
        });
    }

    /// Expands the derived connectives to the primitive basis:
    /// `~a = (a -> false)`, `(a | b) = (~a -> b)`, `(a & b) = ~(~a | ~b)`,
    /// `exists x a = ~forall x ~a`.
    pub fn expand_derived(&self) -> FOFormula {
        fn neg(f: FOFormula) -> FOFormula {
            FOFormula::Implies(Box::new(f), Box::new(FOFormula::False))
        }
        match self {
            FOFormula::False => FOFormula::False,
            FOFormula::Atom { .. } => self.clone(),
            FOFormula::Implies(a, b) => FOFormula::Implies(
                Box::new(a.expand_derived()),
                Box::new(b.expand_derived()),
            ),
            FOFormula::Forall(x, a) => {
                FOFormula::Forall(x.clone(), Box::new(a.expand_derived()))
            }
            FOFormula::Not(a) => neg(a.expand_derived()),
            FOFormula::Or(a, b) => FOFormula::Implies(
                Box::new(neg(a.expand_derived())),
                Box::new(b.expand_derived()),
            ),
            FOFormula::And(a, b) => {
                let or = FOFormula::Implies(
                    Box::new(neg(neg(a.expand_derived()))),
                    Box::new(neg(b.expand_derived())),
                );
                neg(or)
            }
            FOFormula::Exists(x, a) => neg(FOFormula::Forall(
                x.clone(),
                Box::new(neg(a.expand_derived())),
            )),
        }
    }

    fn is_unit(&self) -> bool {
        matches!(
            self,
            FOFormula::False | FOFormula::Atom { .. } | FOFormula::Not(_)
        )
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOFormula::False => f.write_str("false"),
            FOFormula::Atom { pred, args } => {
                write!(f, "{pred}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            FOFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            FOFormula::And(a, b) => write!(f, "({a} & {b})"),
            FOFormula::Or(a, b) => write!(f, "({a} | {b})"),
            FOFormula::Not(a) if a.is_unit() => write!(f, "~{a}"),
            FOFormula::Not(a) => write!(f, "~{a}"),
            FOFormula::Forall(x, a) => write!(f, "forall {x} {a}"),
            FOFormula::Exists(x, a) => write!(f, "exists {x} {a}"),
        }
    }
}
