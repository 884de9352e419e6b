//! Finite models: an interned world domain plus one tuple relation per
//! relation-symbol group, and the model text format.
//!
//! ```text
//! model m1
//! domain w v u
//! rel r : (w,v); (v,u)
//! letter p : w; v
//! point (w)
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::connective::{ConnKind, ConnectiveSet};
use crate::error::{EvalError, FileError, ModelError};

/// Hard bound on enumerated tuple spaces (complements, universal sweeps).
const SPACE_CAP: u128 = 1 << 24;

/// A set of equal-length world tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSet {
    k: u32,
    tuples: HashSet<Vec<u32>>,
}

impl TupleSet {
    pub fn empty(k: u32) -> Self {
        TupleSet {
            k,
            tuples: HashSet::new(),
        }
    }

    pub fn from_tuples(k: u32, tuples: impl IntoIterator<Item = Vec<u32>>) -> Self {
        TupleSet {
            k,
            tuples: tuples.into_iter().collect(),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn insert(&mut self, tuple: Vec<u32>) {
        self.tuples.insert(tuple);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.tuples.iter()
    }

    pub fn sorted(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.tuples.iter().cloned().collect();
        v.sort();
        v
    }

    pub fn union(&self, other: &TupleSet) -> TupleSet {
        TupleSet {
            k: self.k,
            tuples: self.tuples.union(&other.tuples).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &TupleSet) -> TupleSet {
        TupleSet {
            k: self.k,
            tuples: self.tuples.intersection(&other.tuples).cloned().collect(),
        }
    }

    pub fn complement(&self, n_worlds: usize) -> Result<TupleSet, EvalError> {
        let mut out = TupleSet::empty(self.k);
        for t in all_tuples(n_worlds, self.k)? {
            if !self.tuples.contains(&t) {
                out.insert(t);
            }
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &TupleSet) -> bool {
        self.tuples.is_subset(&other.tuples)
    }
}

/// All tuples of length `len` over `n_worlds` worlds, in lexicographic order.
pub fn all_tuples(n_worlds: usize, len: u32) -> Result<Vec<Vec<u32>>, EvalError> {
    let size = (n_worlds as u128).checked_pow(len).unwrap_or(u128::MAX);
    if size > SPACE_CAP {
        return Err(EvalError::SpaceTooLarge(n_worlds, len));
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut current = vec![0u32; len as usize];
    loop {
        out.push(current.clone());
        let mut i = len as usize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            current[i] += 1;
            if (current[i] as usize) < n_worlds {
                break;
            }
            current[i] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: HashSet<Vec<u32>>,
}

/// A finite model: named worlds and one relation per relation-symbol group.
/// Letters are stored under their group like every other relation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CModel {
    pub name: Option<String>,
    worlds: Vec<String>,
    index: HashMap<String, u32>,
    relations: HashMap<String, Relation>,
    pub point: Option<Vec<u32>>,
}

impl CModel {
    pub fn new(worlds: Vec<String>) -> Result<Self, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        let index = worlds
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Ok(CModel {
            name: None,
            worlds,
            index,
            relations: HashMap::new(),
            point: None,
        })
    }

    /// A model over worlds named `w0..w{n-1}`.
    pub fn with_size(n: usize) -> Self {
        CModel::new((0..n).map(|i| format!("w{i}")).collect()).expect("n > 0")
    }

    pub fn n_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_names(&self) -> &[String] {
        &self.worlds
    }

    pub fn world(&self, name: &str) -> Result<u32, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    pub fn set_relation(&mut self, group: &str, arity: usize, tuples: HashSet<Vec<u32>>) {
        debug_assert!(tuples.iter().all(|t| t.len() == arity));
        self.relations.insert(group.to_string(), Relation { arity, tuples });
    }

    pub fn add_tuple(&mut self, group: &str, tuple: Vec<u32>) {
        let arity = tuple.len();
        self.relations
            .entry(group.to_string())
            .or_insert_with(|| Relation {
                arity,
                tuples: HashSet::new(),
            })
            .tuples
            .insert(tuple);
    }

    pub fn relation(&self, group: &str) -> Result<&Relation, ModelError> {
        self.relations
            .get(group)
            .ok_or_else(|| ModelError::MissingRelation(group.to_string()))
    }

    pub fn relation_opt(&self, group: &str) -> Option<&Relation> {
        self.relations.get(group)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(g, r)| (g.as_str(), r))
    }

    pub fn tuple_names(&self, tuple: &[u32]) -> Vec<String> {
        tuple.iter().map(|&w| self.worlds[w as usize].clone()).collect()
    }

    /// Renders a tuple set in domain order: 1-tuples as bare world names,
    /// longer tuples parenthesized.
    pub fn format_tuples(&self, set: &TupleSet) -> String {
        let mut items = set.sorted();
        items.sort();
        let mut out = String::from("{");
        for (i, t) in items.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&self.format_tuple(t));
        }
        out.push('}');
        out
    }

    pub fn format_tuple(&self, tuple: &[u32]) -> String {
        if tuple.len() == 1 {
            return self.worlds[tuple[0] as usize].clone();
        }
        let mut out = String::from("(");
        for (i, &w) in tuple.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&self.worlds[w as usize]);
        }
        out.push(')');
        out
    }
}

/// Parses the model text format. Relation lines may name a group, a declared
/// connective (stored under its group), or a raw name used by the model
/// derivations. Letter lines name a declared letter.
pub fn parse_model(text: &str, set: &ConnectiveSet) -> Result<CModel, FileError> {
    let mut name = None;
    let mut worlds: Option<Vec<String>> = None;
    let mut pending: Vec<(usize, String, Vec<Vec<String>>)> = Vec::new();
    let mut point: Option<(usize, Vec<String>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "model" => name = Some(rest.to_string()),
            "domain" => {
                let ws: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if ws.is_empty() {
                    return Err(FileError::new(lineno, "domain must not be empty"));
                }
                worlds = Some(ws);
            }
            "rel" | "letter" => {
                let (rel_name, tuples_text) = rest
                    .split_once(':')
                    .ok_or_else(|| FileError::new(lineno, "expected `<name> : tuples`"))?;
                let rel_name = rel_name.trim();
                let group = match (keyword, set.kind_of(rel_name)) {
                    ("letter", Some(ConnKind::Letter)) | ("rel", Some(_)) => {
                        set.group_of(rel_name).unwrap().to_string()
                    }
                    ("letter", _) => {
                        return Err(FileError::new(
                            lineno,
                            format!("`{rel_name}` is not a declared letter"),
                        ))
                    }
                    // Group labels and raw derivation inputs pass through.
                    ("rel", None) => rel_name.to_string(),
                    _ => unreachable!(),
                };
                let tuples = parse_tuples(tuples_text)
                    .map_err(|m| FileError::new(lineno, m))?;
                pending.push((lineno, group, tuples));
            }
            "point" => {
                let items = parse_tuples(rest).map_err(|m| FileError::new(lineno, m))?;
                if items.len() != 1 {
                    return Err(FileError::new(lineno, "point expects exactly one tuple"));
                }
                point = Some((lineno, items.into_iter().next().unwrap()));
            }
            other => {
                return Err(FileError::new(lineno, format!("unknown directive `{other}`")));
            }
        }
    }

    let worlds = worlds.ok_or_else(|| FileError::new(0, "missing `domain` line"))?;
    let mut model =
        CModel::new(worlds).map_err(|e| FileError::new(0, e.to_string()))?;
    model.name = name;

    for (lineno, group, tuples) in pending {
        let expected = set
            .group_blocks(&group)
            .map(|blocks| blocks.iter().sum::<u32>() as usize);
        for tuple in tuples {
            if let Some(exp) = expected {
                if tuple.len() != exp {
                    let got = tuple.len();
                    return Err(FileError::new(
                        lineno,
                        ModelError::TupleArity {
                            group: group.clone(),
                            tuple,
                            got,
                            expected: exp,
                        }
                        .to_string(),
                    ));
                }
            }
            let resolved: Result<Vec<u32>, ModelError> =
                tuple.iter().map(|w| model.world(w)).collect();
            let resolved = resolved.map_err(|e| FileError::new(lineno, e.to_string()))?;
            model.add_tuple(&group, resolved);
        }
        // Relations mentioned with no tuples still exist, as empty.
        model
            .relations
            .entry(group.clone())
            .or_insert_with(|| Relation {
                arity: expected.unwrap_or(0),
                tuples: HashSet::new(),
            });
    }

    if let Some((lineno, p)) = point {
        let resolved: Result<Vec<u32>, ModelError> = p.iter().map(|w| model.world(w)).collect();
        model.point = Some(resolved.map_err(|e| FileError::new(lineno, e.to_string()))?);
    }
    Ok(model)
}

/// `(a,b); (c,d)` or bare names for 1-tuples: `w; v`.
fn parse_tuples(text: &str) -> Result<Vec<Vec<String>>, String> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some(inner) = part.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| format!("unbalanced parentheses in `{part}`"))?;
            let items: Vec<String> = inner
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if items.is_empty() {
                return Err(format!("empty tuple in `{part}`"));
            }
            out.push(items);
        } else {
            if part.contains(',') {
                return Err(format!("tuple `{part}` needs parentheses"));
            }
            out.push(vec![part.to_string()]);
        }
    }
    Ok(out)
}

/// Serializes a model in the text format, tuples sorted for stability.
pub fn model_to_text(model: &CModel) -> String {
    let mut out = String::new();
    if let Some(name) = &model.name {
        let _ = writeln!(out, "model {name}");
    }
    let _ = writeln!(out, "domain {}", model.worlds.join(" "));
    let mut groups: Vec<&str> = model.relations.keys().map(String::as_str).collect();
    groups.sort();
    for g in groups {
        let rel = &model.relations[g];
        let mut tuples: Vec<&Vec<u32>> = rel.tuples.iter().collect();
        tuples.sort();
        let rendered: Vec<String> = tuples
            .iter()
            .map(|t| {
                let names = model.tuple_names(t);
                format!("({})", names.join(","))
            })
            .collect();
        let _ = writeln!(out, "rel {g} : {}", rendered.join("; "));
    }
    if let Some(p) = &model.point {
        let _ = writeln!(out, "point ({})", model.tuple_names(p).join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logicfile::parse_logic;

    fn modal() -> ConnectiveSet {
        parse_logic(
            "letter p : sign +, quant E, type 1\n\
             conn dia : perm (2,1), sign +, quant E, types (1;1), tonicity (+)\n\
             conn box : perm (2,1), sign -, quant A, types (1;1), tonicity (+)\n\
             bool 1\nshare r dia box\n",
        )
        .unwrap()
    }

    #[test]
    fn parses_a_model_file() {
        let set = modal();
        let m = parse_model(
            "model m1\ndomain w v\nrel r : (w,v)\nletter p : v\npoint (w)\n",
            &set,
        )
        .unwrap();
        assert_eq!(m.n_worlds(), 2);
        assert_eq!(m.relation("r").unwrap().tuples.len(), 1);
        assert!(m.relation("p").unwrap().tuples.contains(&vec![1]));
        assert_eq!(m.point, Some(vec![0]));
    }

    #[test]
    fn rejects_unknown_worlds_and_bad_arities() {
        let set = modal();
        let err = parse_model("domain w\nrel r : (w,x)\n", &set).unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_model("domain w\nrel r : (w,w,w)\n", &set).unwrap_err();
        assert!(err.message.contains("expected"));
        let err = parse_model("domain w\nletter zap : w\n", &set).unwrap_err();
        assert!(err.message.contains("not a declared letter"));
    }

    #[test]
    fn model_text_roundtrip() {
        let set = modal();
        let m = parse_model(
            "model m1\ndomain w v\nrel r : (w,v); (v,v)\nletter p : v\npoint (w)\n",
            &set,
        )
        .unwrap();
        let text = model_to_text(&m);
        let m2 = parse_model(&text, &set).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn tuple_enumeration_is_lexicographic() {
        let ts = all_tuples(2, 2).unwrap();
        assert_eq!(
            ts,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn complement_respects_the_domain() {
        let s = TupleSet::from_tuples(1, vec![vec![0]]);
        let c = s.complement(3).unwrap();
        assert_eq!(c.sorted(), vec![vec![1], vec![2]]);
    }
}
