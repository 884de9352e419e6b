//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("invalid permutation {mapping:?}: {reason}")]
    BadPermutation { mapping: Vec<u8>, reason: String },
    #[error("permutation degree {degree} does not match arity {arity} (need degree {})", arity + 1)]
    DegreeMismatch { degree: usize, arity: usize },
    #[error("type signature and tonicity disagree: {inputs} input types vs {tonicity} tonicity signs")]
    ArityMismatch { inputs: usize, tonicity: usize },
    #[error("types must be positive")]
    NonPositiveType,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("duplicate connective name `{0}`")]
    DuplicateName(String),
    #[error("unknown connective name `{0}`")]
    UnknownName(String),
    #[error("`{name}`: {source}")]
    Skeleton {
        name: String,
        #[source]
        source: SkeletonError,
    },
    #[error("a connective set must contain at least one propositional letter")]
    NoLetter,
    #[error("share group `{group}`: `{name}` has relation blocks {got:?}, expected {expected:?}")]
    ShareBlockMismatch {
        group: String,
        name: String,
        expected: Vec<u32>,
        got: Vec<u32>,
    },
    #[error("`{name}` is declared `share`d more than once")]
    ShareTwice { name: String },
    #[error("molecular `{name}`: label `{label}` expects {expected} children, got {got}")]
    ChildCountMismatch {
        name: String,
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("molecular `{name}`: child {position} of `{label}` has output type {got}, expected {expected}")]
    ChildTypeMismatch {
        name: String,
        label: String,
        position: usize,
        expected: u32,
        got: u32,
    },
    #[error("molecular `{name}`: `{label}` is not usable as a tree label")]
    BadLabel { name: String, label: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

impl FileError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        FileError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("unknown connective or letter `{0}`")]
    Unknown(String),
    #[error("`{name}` expects {expected} arguments, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("argument {position} of `{name}` has type {got}, expected {expected}")]
    ArgType {
        name: String,
        position: usize,
        expected: u32,
        got: u32,
    },
    #[error("boolean arguments must share one type: left has type {left}, right has type {right}")]
    BoolType { left: u32, right: u32 },
    #[error("Boolean negation is undefined for conjunctions and disjunctions")]
    NegateBoolean,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model domain is empty")]
    EmptyDomain,
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("relation `{group}`: tuple {tuple:?} has length {got}, expected {expected}")]
    TupleArity {
        group: String,
        tuple: Vec<String>,
        got: usize,
        expected: usize,
    },
    #[error("model provides no relation for group `{0}`")]
    MissingRelation(String),
    #[error("point {point:?} has length {got}, expected type {expected}")]
    PointType {
        point: Vec<String>,
        got: usize,
        expected: usize,
    },
    #[error("relation `{0}` is not binary")]
    NotBinary(String),
    #[error("relation R is not reflexive: missing ({0},{0})")]
    NotReflexive(String),
    #[error("relation R is not transitive: ({0},{1}) and ({1},{2}) but not ({0},{2})")]
    NotTransitive(String, String, String),
    #[error("letter `{letter}` is not persistent: holds at {at} but not at its successor {successor}")]
    NotPersistent {
        letter: String,
        at: String,
        successor: String,
    },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("point has type {got}, formula has type {expected}")]
    TypeMismatch { expected: u32, got: u32 },
    #[error("tuple space {0}^{1} is too large to evaluate")]
    SpaceTooLarge(usize, u32),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FolError {
    #[error("free variable or constant `{0}` is not assigned")]
    Unassigned(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` applied to {got} terms, declared with arity {expected}")]
    PredicateArity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("point length {got} does not match variable tuple length {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("{format} parse error at byte {at}: {message}")]
    Parse {
        format: &'static str,
        at: usize,
        message: String,
    },
}
