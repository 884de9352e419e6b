//! Derivation of implication-ready models from preorder models.
//!
//! A raw input model carries a binary relation `R` (reflexive, transitive),
//! optionally a binary `Rdia`, and persistent letter relations. The derived
//! model replaces `R` by the ternary implication relation
//! `imp = {(u,v,w) | R u w and R v w}` and interprets the truth-constant
//! group `top` by the whole domain; the modal variant additionally keeps `R`
//! under group `r` and `Rdia` under group `rd`.

use std::collections::HashSet;

use crate::connective::ConnectiveSet;
use crate::error::ModelError;
use crate::model::CModel;

pub const SOURCE_PREORDER: &str = "R";
pub const SOURCE_DIAMOND: &str = "Rdia";
pub const GROUP_IMPLICATION: &str = "imp";
pub const GROUP_TRUTH: &str = "top";
pub const GROUP_PREORDER: &str = "r";
pub const GROUP_DIAMOND: &str = "rd";

/// Checks reflexivity and transitivity of a binary relation.
pub fn preorder_violations(model: &CModel, tuples: &HashSet<Vec<u32>>) -> Vec<ModelError> {
    let mut errors = Vec::new();
    let n = model.n_worlds() as u32;
    for w in 0..n {
        if !tuples.contains(&vec![w, w]) {
            errors.push(ModelError::NotReflexive(
                model.world_names()[w as usize].clone(),
            ));
        }
    }
    for a in tuples {
        for b in tuples {
            if a[1] == b[0] && !tuples.contains(&vec![a[0], b[1]]) {
                errors.push(ModelError::NotTransitive(
                    model.world_names()[a[0] as usize].clone(),
                    model.world_names()[a[1] as usize].clone(),
                    model.world_names()[b[1] as usize].clone(),
                ));
            }
        }
    }
    errors
}

/// Checks upward persistence of a unary relation along the preorder.
pub fn persistence_violations(
    model: &CModel,
    letter: &str,
    letter_tuples: &HashSet<Vec<u32>>,
    preorder: &HashSet<Vec<u32>>,
) -> Vec<ModelError> {
    let mut errors = Vec::new();
    for pair in preorder {
        if letter_tuples.contains(&vec![pair[0]]) && !letter_tuples.contains(&vec![pair[1]]) {
            errors.push(ModelError::NotPersistent {
                letter: letter.to_string(),
                at: model.world_names()[pair[0] as usize].clone(),
                successor: model.world_names()[pair[1] as usize].clone(),
            });
        }
    }
    errors
}

/// The ternary implication relation induced by a preorder.
pub fn implication_relation(preorder: &HashSet<Vec<u32>>) -> HashSet<Vec<u32>> {
    let mut out = HashSet::new();
    for a in preorder {
        for b in preorder {
            if a[1] == b[1] {
                out.insert(vec![a[0], b[0], a[1]]);
            }
        }
    }
    out
}

fn letter_groups(set: &ConnectiveSet) -> Vec<(String, String)> {
    set.letters()
        .map(|(name, _)| (name.to_string(), set.group_of(name).unwrap().to_string()))
        .filter(|(_, g)| g != GROUP_TRUTH)
        .collect()
}

fn derive(raw: &CModel, set: &ConnectiveSet, modal: bool) -> Result<CModel, ModelError> {
    let r = raw.relation(SOURCE_PREORDER)?;
    if r.tuples.iter().any(|t| t.len() != 2) {
        return Err(ModelError::NotBinary(SOURCE_PREORDER.to_string()));
    }
    if let Some(e) = preorder_violations(raw, &r.tuples).into_iter().next() {
        return Err(e);
    }

    let mut out = CModel::new(raw.world_names().to_vec())?;
    out.name = raw.name.clone();
    out.point = raw.point.clone();

    for (letter, group) in letter_groups(set) {
        let tuples = raw
            .relation_opt(&group)
            .map(|rel| rel.tuples.clone())
            .unwrap_or_default();
        if let Some(e) = persistence_violations(raw, &letter, &tuples, &r.tuples)
            .into_iter()
            .next()
        {
            return Err(e);
        }
        out.set_relation(&group, 1, tuples);
    }

    out.set_relation(GROUP_IMPLICATION, 3, implication_relation(&r.tuples));
    out.set_relation(
        GROUP_TRUTH,
        1,
        (0..raw.n_worlds() as u32).map(|w| vec![w]).collect(),
    );

    if modal {
        out.set_relation(GROUP_PREORDER, 2, r.tuples.clone());
        let rd = raw
            .relation_opt(SOURCE_DIAMOND)
            .map(|rel| rel.tuples.clone())
            .unwrap_or_default();
        if rd.iter().any(|t| t.len() != 2) {
            return Err(ModelError::NotBinary(SOURCE_DIAMOND.to_string()));
        }
        out.set_relation(GROUP_DIAMOND, 2, rd);
    }
    Ok(out)
}

/// Derives an implication model from a preorder model, validating the
/// preorder and letter persistence.
pub fn derive_intuitionistic(raw: &CModel, set: &ConnectiveSet) -> Result<CModel, ModelError> {
    derive(raw, set, false)
}

/// As [`derive_intuitionistic`], additionally carrying the preorder and
/// diamond relations for the composed modalities.
pub fn derive_modal_intuitionistic(
    raw: &CModel,
    set: &ConnectiveSet,
) -> Result<CModel, ModelError> {
    derive(raw, set, true)
}
