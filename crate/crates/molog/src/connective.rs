//! Connective sets: named letters, atomic connectives, molecular connectives
//! built as decomposition trees, Boolean conjunction/disjunction per type, and
//! the partition of names into shared relation-symbol groups.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::SetError;
use crate::skeleton::{AtomicSkeleton, Quant, Sign, TypeSig};

/// A vertex of a decomposition tree. Internal vertices carry (possibly
/// Boolean-negated) atomic labels; leaves are `id_k` placeholders or
/// propositional letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Apply {
        label: String,
        negated: bool,
        children: Vec<TreeNode>,
    },
    Id {
        ty: u32,
    },
    Letter {
        name: String,
    },
}

impl TreeNode {
    pub fn apply(label: &str, children: Vec<TreeNode>) -> TreeNode {
        TreeNode::Apply {
            label: label.to_string(),
            negated: false,
            children,
        }
    }

    pub fn neg_apply(label: &str, children: Vec<TreeNode>) -> TreeNode {
        TreeNode::Apply {
            label: label.to_string(),
            negated: true,
            children,
        }
    }
}

/// A named molecular connective with its computed composite type signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolecularConnective {
    pub name: String,
    pub tree: TreeNode,
    type_sig: TypeSig,
}

impl MolecularConnective {
    pub fn type_sig(&self) -> &TypeSig {
        &self.type_sig
    }

    pub fn arity(&self) -> usize {
        self.type_sig.arity()
    }

    /// Preorder listing of the decomposition tree with path addresses. The
    /// root has the empty address; the children of a vertex at `a` are
    /// `a.1, a.2, ..` in argument order.
    pub fn vertices(&self) -> Vec<(VertexAddr, &TreeNode)> {
        let mut out = Vec::new();
        collect_vertices(&self.tree, VertexAddr::root(), &mut out);
        out
    }

    pub fn vertex(&self, addr: &VertexAddr) -> Option<&TreeNode> {
        let mut node = &self.tree;
        for &step in &addr.0 {
            match node {
                TreeNode::Apply { children, .. } => {
                    node = children.get(step as usize - 1)?;
                }
                _ => return None,
            }
        }
        Some(node)
    }
}

fn collect_vertices<'a>(
    node: &'a TreeNode,
    addr: VertexAddr,
    out: &mut Vec<(VertexAddr, &'a TreeNode)>,
) {
    out.push((addr.clone(), node));
    if let TreeNode::Apply { children, .. } = node {
        for (i, child) in children.iter().enumerate() {
            collect_vertices(child, addr.child(i + 1), out);
        }
    }
}

/// Path address of a vertex: empty for the root, `1.2` for the second child
/// of the first child.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddr(pub Vec<u8>);

impl VertexAddr {
    pub fn root() -> Self {
        VertexAddr(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i as u8);
        VertexAddr(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

/// What a name resolves to inside a connective set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnKind {
    Letter,
    Atomic,
    /// Label-only skeleton, usable in decomposition trees but not in formulas.
    Hidden,
    Molecular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Decl {
    Letter(AtomicSkeleton),
    Atomic(AtomicSkeleton),
    Hidden(AtomicSkeleton),
    Molecular(MolecularConnective),
}

/// A declared connective vocabulary. Declaration order is preserved; it fixes
/// enumeration order, rendering order and serialization order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectiveSet {
    order: Vec<String>,
    decls: HashMap<String, Decl>,
    booleans: BTreeSet<u32>,
    /// Explicit share directives: `(group label, member names)`.
    shares: Vec<(String, Vec<String>)>,
    group_of: HashMap<String, String>,
}

impl ConnectiveSet {
    pub fn new() -> Self {
        ConnectiveSet::default()
    }

    fn insert(&mut self, name: &str, decl: Decl) -> Result<(), SetError> {
        if self.decls.contains_key(name) {
            return Err(SetError::DuplicateName(name.to_string()));
        }
        self.order.push(name.to_string());
        self.decls.insert(name.to_string(), decl);
        self.group_of.insert(name.to_string(), name.to_string());
        Ok(())
    }

    fn checked(name: &str, skel: AtomicSkeleton) -> Result<AtomicSkeleton, SetError> {
        skel.validate().map_err(|mut errs| SetError::Skeleton {
            name: name.to_string(),
            source: errs.remove(0),
        })?;
        Ok(skel)
    }

    pub fn add_letter(&mut self, name: &str, skel: AtomicSkeleton) -> Result<(), SetError> {
        let skel = Self::checked(name, skel)?;
        if !skel.is_letter() {
            return Err(SetError::Skeleton {
                name: name.to_string(),
                source: crate::error::SkeletonError::ArityMismatch {
                    inputs: skel.type_sig.arity(),
                    tonicity: skel.arity(),
                },
            });
        }
        self.insert(name, Decl::Letter(skel))
    }

    pub fn add_atomic(&mut self, name: &str, skel: AtomicSkeleton) -> Result<(), SetError> {
        let skel = Self::checked(name, skel)?;
        self.insert(name, Decl::Atomic(skel))
    }

    /// Declares a label-only skeleton: usable inside decomposition trees but
    /// not part of the formula language.
    pub fn add_hidden(&mut self, name: &str, skel: AtomicSkeleton) -> Result<(), SetError> {
        let skel = Self::checked(name, skel)?;
        self.insert(name, Decl::Hidden(skel))
    }

    pub fn add_molecular(&mut self, name: &str, tree: TreeNode) -> Result<(), SetError> {
        if !matches!(tree, TreeNode::Apply { .. }) {
            return Err(SetError::BadLabel {
                name: name.to_string(),
                label: "<root>".to_string(),
            });
        }
        let type_sig = self.node_type_sig(name, &tree)?;
        self.insert(
            name,
            Decl::Molecular(MolecularConnective {
                name: name.to_string(),
                tree,
                type_sig,
            }),
        )
    }

    pub fn add_boolean(&mut self, ty: u32) {
        self.booleans.insert(ty);
    }

    /// Merges names into one relation-symbol group. If the first token is not
    /// a declared name it is taken as the group label; otherwise it is both
    /// the label and a member.
    pub fn share(&mut self, names: &[&str]) -> Result<(), SetError> {
        let (label, members) = match names.split_first() {
            Some((first, rest)) if !self.decls.contains_key(*first) => {
                (first.to_string(), rest.to_vec())
            }
            Some(_) => (names[0].to_string(), names.to_vec()),
            None => return Ok(()),
        };
        let mut blocks: Option<Vec<u32>> = None;
        for m in &members {
            let skel = self
                .skeleton_of(m)
                .ok_or_else(|| SetError::UnknownName(m.to_string()))?;
            let b = skel.base_block_lens();
            match &blocks {
                None => blocks = Some(b),
                Some(expected) if *expected != b => {
                    return Err(SetError::ShareBlockMismatch {
                        group: label.clone(),
                        name: m.to_string(),
                        expected: expected.clone(),
                        got: b,
                    });
                }
                _ => {}
            }
        }
        for m in &members {
            let current = self.group_of.get(*m).cloned().unwrap_or_default();
            if current != *m {
                return Err(SetError::ShareTwice { name: m.to_string() });
            }
            self.group_of.insert(m.to_string(), label.clone());
        }
        self.shares.push((label, members.iter().map(|s| s.to_string()).collect()));
        Ok(())
    }

    pub fn kind_of(&self, name: &str) -> Option<ConnKind> {
        Some(match self.decls.get(name)? {
            Decl::Letter(_) => ConnKind::Letter,
            Decl::Atomic(_) => ConnKind::Atomic,
            Decl::Hidden(_) => ConnKind::Hidden,
            Decl::Molecular(_) => ConnKind::Molecular,
        })
    }

    /// Skeleton of a letter, atomic or hidden declaration.
    pub fn skeleton_of(&self, name: &str) -> Option<&AtomicSkeleton> {
        match self.decls.get(name)? {
            Decl::Letter(s) | Decl::Atomic(s) | Decl::Hidden(s) => Some(s),
            Decl::Molecular(_) => None,
        }
    }

    pub fn molecular(&self, name: &str) -> Option<&MolecularConnective> {
        match self.decls.get(name)? {
            Decl::Molecular(m) => Some(m),
            _ => None,
        }
    }

    /// Relation-symbol group a declared name belongs to.
    pub fn group_of(&self, name: &str) -> Option<&str> {
        self.group_of.get(name).map(|s| s.as_str())
    }

    pub fn booleans(&self) -> &BTreeSet<u32> {
        &self.booleans
    }

    pub fn has_boolean(&self, ty: u32) -> bool {
        self.booleans.contains(&ty)
    }

    pub fn shares(&self) -> &[(String, Vec<String>)] {
        &self.shares
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(|s| s.as_str())
    }

    pub fn letters(&self) -> impl Iterator<Item = (&str, &AtomicSkeleton)> {
        self.order.iter().filter_map(|n| match &self.decls[n] {
            Decl::Letter(s) => Some((n.as_str(), s)),
            _ => None,
        })
    }

    pub fn atomics(&self) -> impl Iterator<Item = (&str, &AtomicSkeleton)> {
        self.order.iter().filter_map(|n| match &self.decls[n] {
            Decl::Atomic(s) => Some((n.as_str(), s)),
            _ => None,
        })
    }

    pub fn hidden(&self) -> impl Iterator<Item = (&str, &AtomicSkeleton)> {
        self.order.iter().filter_map(|n| match &self.decls[n] {
            Decl::Hidden(s) => Some((n.as_str(), s)),
            _ => None,
        })
    }

    pub fn moleculars(&self) -> impl Iterator<Item = &MolecularConnective> {
        self.order.iter().filter_map(|n| match &self.decls[n] {
            Decl::Molecular(m) => Some(m),
            _ => None,
        })
    }

    /// Effective skeleton of a tree label, with Boolean negation applied.
    pub fn label_skeleton(
        &self,
        owner: &str,
        label: &str,
        negated: bool,
    ) -> Result<AtomicSkeleton, SetError> {
        let base = match self.decls.get(label) {
            Some(Decl::Atomic(s)) | Some(Decl::Hidden(s)) if !s.is_letter() => s,
            _ => {
                return Err(SetError::BadLabel {
                    name: owner.to_string(),
                    label: label.to_string(),
                })
            }
        };
        Ok(if negated { base.negated() } else { base.clone() })
    }

    /// Composite type signature of a tree node, validating child counts and
    /// child output types against the label's input types along the way.
    pub fn node_type_sig(&self, owner: &str, node: &TreeNode) -> Result<TypeSig, SetError> {
        match node {
            TreeNode::Id { ty } => Ok(TypeSig::new(*ty, vec![*ty])),
            TreeNode::Letter { name } => match self.decls.get(name) {
                Some(Decl::Letter(s)) => Ok(TypeSig::new(s.output_type(), vec![])),
                _ => Err(SetError::BadLabel {
                    name: owner.to_string(),
                    label: name.clone(),
                }),
            },
            TreeNode::Apply {
                label,
                negated,
                children,
            } => {
                let skel = self.label_skeleton(owner, label, *negated)?;
                if children.len() != skel.arity() {
                    return Err(SetError::ChildCountMismatch {
                        name: owner.to_string(),
                        label: label.clone(),
                        expected: skel.arity(),
                        got: children.len(),
                    });
                }
                let mut inputs = Vec::new();
                for (j, child) in children.iter().enumerate() {
                    let sig = self.node_type_sig(owner, child)?;
                    if sig.output != skel.type_sig.inputs[j] {
                        return Err(SetError::ChildTypeMismatch {
                            name: owner.to_string(),
                            label: label.clone(),
                            position: j + 1,
                            expected: skel.type_sig.inputs[j],
                            got: sig.output,
                        });
                    }
                    inputs.extend(sig.inputs);
                }
                Ok(TypeSig::new(skel.output_type(), inputs))
            }
        }
    }

    /// Quantification signature of a subtree: the root label's quantifier for
    /// an application, the letter's own quantifier for a letter, and none for
    /// an `id` placeholder.
    pub fn node_quant(&self, owner: &str, node: &TreeNode) -> Result<Option<Quant>, SetError> {
        match node {
            TreeNode::Id { .. } => Ok(None),
            TreeNode::Letter { name } => Ok(Some(
                self.skeleton_of(name)
                    .ok_or_else(|| SetError::BadLabel {
                        name: owner.to_string(),
                        label: name.clone(),
                    })?
                    .quant,
            )),
            TreeNode::Apply { label, negated, .. } => {
                Ok(Some(self.label_skeleton(owner, label, *negated)?.quant))
            }
        }
    }

    /// Whole-set validation: at least one letter, all skeletons valid, share
    /// groups consistent (checked again so hand-built sets cannot bypass it).
    pub fn validate(&self) -> Result<(), Vec<SetError>> {
        let mut errors = Vec::new();
        if self.letters().next().is_none() {
            errors.push(SetError::NoLetter);
        }
        for name in &self.order {
            match &self.decls[name] {
                Decl::Letter(s) | Decl::Atomic(s) | Decl::Hidden(s) => {
                    if let Err(errs) = s.validate() {
                        for e in errs {
                            errors.push(SetError::Skeleton {
                                name: name.clone(),
                                source: e,
                            });
                        }
                    }
                }
                Decl::Molecular(m) => {
                    if let Err(e) = self.node_type_sig(name, &m.tree) {
                        errors.push(e);
                    }
                }
            }
        }
        for (label, members) in &self.shares {
            let mut expected: Option<Vec<u32>> = None;
            for m in members {
                if let Some(skel) = self.skeleton_of(m) {
                    let b = skel.base_block_lens();
                    match &expected {
                        None => expected = Some(b),
                        Some(e) if *e != b => errors.push(SetError::ShareBlockMismatch {
                            group: label.clone(),
                            name: m.clone(),
                            expected: e.clone(),
                            got: b,
                        }),
                        _ => {}
                    }
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// The atomic connectives associated to the set: every non-`id` label of
    /// every decomposition tree plus the declared letters and atomics.
    /// Negated labels appear under a `-`-prefixed name with the transformed
    /// skeleton.
    pub fn associated_atomics(&self) -> Vec<(String, AtomicSkeleton)> {
        let mut seen = BTreeMap::new();
        for (n, s) in self.letters() {
            seen.insert(n.to_string(), s.clone());
        }
        for (n, s) in self.atomics() {
            seen.insert(n.to_string(), s.clone());
        }
        for m in self.moleculars() {
            for (_, node) in m.vertices() {
                match node {
                    TreeNode::Apply { label, negated, .. } => {
                        let skel = self
                            .label_skeleton(&m.name, label, *negated)
                            .expect("validated tree");
                        let name = if *negated {
                            format!("-{label}")
                        } else {
                            label.clone()
                        };
                        seen.insert(name, skel);
                    }
                    TreeNode::Letter { name } => {
                        if let Some(s) = self.skeleton_of(name) {
                            seen.insert(name.clone(), s.clone());
                        }
                    }
                    TreeNode::Id { .. } => {}
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All types occurring as input or output types of the associated atomic
    /// connectives (letters included).
    pub fn types_occurring(&self) -> BTreeSet<u32> {
        let mut tys = BTreeSet::new();
        for (_, s) in self.associated_atomics() {
            tys.insert(s.type_sig.output);
            tys.extend(s.type_sig.inputs.iter().copied());
        }
        tys
    }

    /// True iff for every occurring type `k` both the conjunction and the
    /// disjunction of type `k` are present. Returns the missing types.
    pub fn is_complete_for_conj_disj(&self) -> (bool, Vec<u32>) {
        let missing: Vec<u32> = self
            .types_occurring()
            .into_iter()
            .filter(|k| !self.booleans.contains(k))
            .collect();
        (missing.is_empty(), missing)
    }

    /// Groups that own a relation, with their members, in first-declaration
    /// order. Every letter, atomic and hidden skeleton belongs to exactly one.
    pub fn relation_groups(&self) -> Vec<(String, Vec<String>)> {
        let mut groups: Vec<(String, Vec<String>)> = Vec::new();
        for name in &self.order {
            if self.skeleton_of(name).is_none() {
                continue;
            }
            let g = self.group_of[name].clone();
            match groups.iter_mut().find(|(label, _)| *label == g) {
                Some((_, members)) => members.push(name.clone()),
                None => groups.push((g, vec![name.clone()])),
            }
        }
        groups
    }

    /// Declared relation block lengths of a group, in base argument order.
    pub fn group_blocks(&self, group: &str) -> Option<Vec<u32>> {
        self.relation_groups()
            .iter()
            .find(|(g, _)| g == group)
            .and_then(|(_, members)| self.skeleton_of(&members[0]))
            .map(|s| s.base_block_lens())
    }
}

/// Classification returned by [`is_uniform`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Uniformity {
    Uniform,
    NotUniform { clause: u8, reason: String },
}

impl Uniformity {
    pub fn is_uniform(&self) -> bool {
        matches!(self, Uniformity::Uniform)
    }
}

/// Decides whether a molecular connective is uniform, reporting the first
/// violated clause:
///
/// 1. every direct child subtree has arity 1;
/// 2. a non-`id` direct child in a positive argument position must be
///    universal, in a negative one existential;
/// 3. below the root, the quantifier of each child subtree must equal its
///    parent's quantifier under a positive tonicity sign and the dual under a
///    negative one (`id` leaves carry no quantifier and are skipped).
pub fn is_uniform(set: &ConnectiveSet, mol: &MolecularConnective) -> Result<Uniformity, SetError> {
    let TreeNode::Apply {
        label,
        negated,
        children,
    } = &mol.tree
    else {
        return Err(SetError::BadLabel {
            name: mol.name.clone(),
            label: "<root>".to_string(),
        });
    };
    let root = set.label_skeleton(&mol.name, label, *negated)?;
    for (j, child) in children.iter().enumerate() {
        let arity = set.node_type_sig(&mol.name, child)?.arity();
        if arity != 1 {
            return Ok(Uniformity::NotUniform {
                clause: 1,
                reason: format!("argument {} has arity {arity}, need 1", j + 1),
            });
        }
    }
    for (j, child) in children.iter().enumerate() {
        if let Some(q) = set.node_quant(&mol.name, child)? {
            let required = match root.tonicity[j] {
                Sign::Pos => Quant::All,
                Sign::Neg => Quant::Ex,
            };
            if q != required {
                return Ok(Uniformity::NotUniform {
                    clause: 2,
                    reason: format!(
                        "argument {} is {q} but tonicity {} requires {required}",
                        j + 1,
                        root.tonicity[j]
                    ),
                });
            }
        }
    }
    for child in children {
        if let Some(v) = alternation_violation(set, &mol.name, child)? {
            return Ok(v);
        }
    }
    Ok(Uniformity::Uniform)
}

fn alternation_violation(
    set: &ConnectiveSet,
    owner: &str,
    node: &TreeNode,
) -> Result<Option<Uniformity>, SetError> {
    let TreeNode::Apply {
        label,
        negated,
        children,
    } = node
    else {
        return Ok(None);
    };
    let skel = set.label_skeleton(owner, label, *negated)?;
    for (i, child) in children.iter().enumerate() {
        if let Some(q) = set.node_quant(owner, child)? {
            let required = match skel.tonicity[i] {
                Sign::Pos => skel.quant,
                Sign::Neg => skel.quant.negate(),
            };
            if q != required {
                return Ok(Some(Uniformity::NotUniform {
                    clause: 3,
                    reason: format!(
                        "below `{label}`: argument {} is {q}, alternation requires {required}",
                        i + 1
                    ),
                }));
            }
        }
        if let Some(v) = alternation_violation(set, owner, child)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
