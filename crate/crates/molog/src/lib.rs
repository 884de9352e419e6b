//! molog is a workbench for non-classical logics given declaratively by the
//! skeletons of their connectives. From one declaration it derives a typed
//! formula language with a model checker over finite models, the bisimulation
//! notion induced by the connectives together with a maximal-bisimulation
//! solver and a formula-preservation oracle, the Boolean-negation transform,
//! a uniformity classifier for composed connectives, and a translation into
//! first-order logic with TPTP/SMT-LIB exporters and a finite-structure
//! evaluator for cross-checking.

pub mod bisim;
pub mod cli;
pub mod connective;
pub mod enumerate;
pub mod error;
pub mod fol;
pub mod formula;
pub mod interpret;
pub mod intuit;
pub mod logicfile;
pub mod model;
pub mod perm;
pub mod presets;
pub mod skeleton;

pub use connective::{ConnectiveSet, MolecularConnective, TreeNode, Uniformity, VertexAddr};
pub use formula::{negate, parse, BoolOp, Formula};
pub use perm::Permutation;
pub use skeleton::{AtomicSkeleton, Quant, Sign, TypeSig};
