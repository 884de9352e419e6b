//! Finite first-order structures and the satisfaction relation.

use std::collections::{HashMap, HashSet};

use crate::error::FolError;
use crate::model::CModel;

use super::FOFormula;

/// A finite structure with named predicates and an assignment covering free
/// variables and constants alike.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FOStructure {
    pub worlds: Vec<String>,
    pub predicates: HashMap<String, (usize, HashSet<Vec<u32>>)>,
    pub assignment: HashMap<String, u32>,
}

impl FOStructure {
    pub fn new(worlds: Vec<String>) -> Self {
        FOStructure {
            worlds,
            predicates: HashMap::new(),
            assignment: HashMap::new(),
        }
    }

    pub fn set_predicate(&mut self, name: &str, arity: usize, tuples: HashSet<Vec<u32>>) {
        self.predicates.insert(name.to_string(), (arity, tuples));
    }

    pub fn assign(&mut self, name: &str, world: u32) {
        self.assignment.insert(name.to_string(), world);
    }
}

/// Evaluates a formula in a structure: `false` never holds, an atom holds
/// when the assigned tuple is in the predicate, implication is material, the
/// universal quantifier ranges over the whole domain, and the derived
/// connectives are evaluated by their defining equivalences.
pub fn fol_eval(structure: &FOStructure, formula: &FOFormula) -> Result<bool, FolError> {
    let mut env = structure.assignment.clone();
    eval(structure, formula, &mut env)
}

fn eval(
    s: &FOStructure,
    formula: &FOFormula,
    env: &mut HashMap<String, u32>,
) -> Result<bool, FolError> {
    match formula {
        FOFormula::False => Ok(false),
        FOFormula::Atom { pred, args } => {
            let (arity, tuples) = s
                .predicates
                .get(pred)
                .ok_or_else(|| FolError::UnknownPredicate(pred.clone()))?;
            if args.len() != *arity {
                return Err(FolError::PredicateArity {
                    name: pred.clone(),
                    expected: *arity,
                    got: args.len(),
                });
            }
            let mut tuple = Vec::with_capacity(args.len());
            for t in args {
                let w = env
                    .get(t.name())
                    .copied()
                    .ok_or_else(|| FolError::Unassigned(t.name().to_string()))?;
                tuple.push(w);
            }
            Ok(tuples.contains(&tuple))
        }
        FOFormula::Implies(a, b) => Ok(!eval(s, a, env)? || eval(s, b, env)?),
        FOFormula::Not(a) => Ok(!eval(s, a, env)?),
        FOFormula::And(a, b) => Ok(eval(s, a, env)? && eval(s, b, env)?),
        FOFormula::Or(a, b) => Ok(eval(s, a, env)? || eval(s, b, env)?),
        FOFormula::Forall(x, a) => {
            let saved = env.get(x).copied();
            for w in 0..s.worlds.len() as u32 {
                env.insert(x.clone(), w);
                if !eval(s, a, env)? {
                    restore(env, x, saved);
                    return Ok(false);
                }
            }
            restore(env, x, saved);
            Ok(true)
        }
        FOFormula::Exists(x, a) => {
            let saved = env.get(x).copied();
            for w in 0..s.worlds.len() as u32 {
                env.insert(x.clone(), w);
                if eval(s, a, env)? {
                    restore(env, x, saved);
                    return Ok(true);
                }
            }
            restore(env, x, saved);
            Ok(false)
        }
    }
}

fn restore(env: &mut HashMap<String, u32>, x: &str, saved: Option<u32>) {
    match saved {
        Some(w) => {
            env.insert(x.to_string(), w);
        }
        None => {
            env.remove(x);
        }
    }
}

/// The structure associated to a pointed model and a variable tuple: the
/// model's relations become predicates and the variables are assigned the
/// point's components.
pub fn associated_structure(
    model: &CModel,
    point: &[u32],
    vars: &[String],
) -> Result<FOStructure, FolError> {
    if point.len() != vars.len() {
        return Err(FolError::PointLength {
            expected: vars.len(),
            got: point.len(),
        });
    }
    let mut s = FOStructure::new(model.world_names().to_vec());
    for (group, rel) in model.relations() {
        s.set_predicate(group, rel.arity, rel.tuples.clone());
    }
    for (x, &w) in vars.iter().zip(point) {
        s.assign(x, w);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_world_structure() -> FOStructure {
        let mut s = FOStructure::new(vec!["w".into(), "v".into()]);
        s.set_predicate("p", 1, [vec![1]].into_iter().collect());
        s.set_predicate("eq", 2, [vec![0, 0], vec![1, 1]].into_iter().collect());
        s
    }

    #[test]
    fn false_never_holds() {
        let s = two_world_structure();
        assert!(!fol_eval(&s, &FOFormula::False).unwrap());
    }

    #[test]
    fn reflexivity_sentence_holds_with_identity_predicate() {
        let s = two_world_structure();
        let f = FOFormula::Forall(
            "x".into(),
            Box::new(FOFormula::atom("eq", &["x".into(), "x".into()])),
        );
        assert!(fol_eval(&s, &f).unwrap());
    }

    #[test]
    fn unassigned_variables_and_unknown_predicates_error() {
        let s = two_world_structure();
        assert!(matches!(
            fol_eval(&s, &FOFormula::atom("p", &["z".into()])),
            Err(FolError::Unassigned(_))
        ));
        assert!(matches!(
            fol_eval(&s, &FOFormula::atom("zap", &["z".into()])),
            Err(FolError::UnknownPredicate(_))
        ));
    }

    #[test]
    fn expansion_preserves_truth() {
        let mut s = two_world_structure();
        s.assign("x", 1);
        let cases = [
            FOFormula::atom("p", &["x".into()]).not(),
            FOFormula::atom("p", &["x".into()]).and(FOFormula::atom("p", &["x".into()])),
            FOFormula::atom("p", &["x".into()]).or(FOFormula::False),
            FOFormula::Exists(
                "y".into(),
                Box::new(FOFormula::atom("eq", &["x".into(), "y".into()])),
            ),
        ];
        for f in cases {
            assert_eq!(
                fol_eval(&s, &f).unwrap(),
                fol_eval(&s, &f.expand_derived()).unwrap(),
                "expansion changed {f}"
            );
        }
    }
}
