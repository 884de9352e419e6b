//! Atomic connective skeletons: the parameter tuple that fully determines a
//! connective's truth condition.
//!
//! A skeleton `(sigma, sign, quant, types, tonicity)` describes the clause
//!
//! ```text
//! quant x1..xn ( x1 <>1 W1  op  ..  op  xn <>n Wn  op  R^{sign,sigma} x1..xn x )
//! ```
//!
//! where `op` is a conjunction for an existential skeleton and a disjunction
//! for a universal one, `<>j` is membership or non-membership depending on the
//! tonicity sign, and the relation literal applies the base relation to the
//! blocks reordered by the inverse permutation, complemented when `sign` is
//! negative. Propositional letters are the arity-0 case.

use std::fmt;

use crate::error::SkeletonError;
use crate::perm::Permutation;

/// Polarity sign `+` / `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn is_pos(self) -> bool {
        matches!(self, Sign::Pos)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_pos() { "+" } else { "-" })
    }
}

/// Quantification signature: whether the truth condition is universal
/// (disjunction shape) or existential (conjunction shape).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    All,
    Ex,
}

impl Quant {
    pub fn negate(self) -> Quant {
        match self {
            Quant::All => Quant::Ex,
            Quant::Ex => Quant::All,
        }
    }
}

impl fmt::Display for Quant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quant::All => "A",
            Quant::Ex => "E",
        })
    }
}

/// Output type followed by one input type per argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeSig {
    pub output: u32,
    pub inputs: Vec<u32>,
}

impl TypeSig {
    pub fn new(output: u32, inputs: Vec<u32>) -> Self {
        TypeSig { output, inputs }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Arity of the associated relation: `k1 + .. + kn + k`.
    pub fn relation_arity(&self) -> u32 {
        self.inputs.iter().sum::<u32>() + self.output
    }
}

/// An atomic skeleton. Letters are the `n = 0` instances.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomicSkeleton {
    pub perm: Permutation,
    pub sign: Sign,
    pub quant: Quant,
    pub type_sig: TypeSig,
    pub tonicity: Vec<Sign>,
}

impl AtomicSkeleton {
    pub fn new(
        perm: Permutation,
        sign: Sign,
        quant: Quant,
        type_sig: TypeSig,
        tonicity: Vec<Sign>,
    ) -> Result<Self, SkeletonError> {
        let s = AtomicSkeleton {
            perm,
            sign,
            quant,
            type_sig,
            tonicity,
        };
        s.validate().map_err(|mut errs| errs.remove(0))?;
        Ok(s)
    }

    /// A propositional letter skeleton `(Id, sign, quant, k)`.
    pub fn letter(sign: Sign, quant: Quant, ty: u32) -> Self {
        AtomicSkeleton {
            perm: Permutation::identity(1),
            sign,
            quant,
            type_sig: TypeSig::new(ty, vec![]),
            tonicity: vec![],
        }
    }

    pub fn arity(&self) -> usize {
        self.tonicity.len()
    }

    pub fn is_letter(&self) -> bool {
        self.arity() == 0
    }

    pub fn output_type(&self) -> u32 {
        self.type_sig.output
    }

    /// Checks the structural invariants, reporting every violation.
    pub fn validate(&self) -> Result<(), Vec<SkeletonError>> {
        let mut errors = Vec::new();
        let n = self.tonicity.len();
        if self.type_sig.arity() != n {
            errors.push(SkeletonError::ArityMismatch {
                inputs: self.type_sig.arity(),
                tonicity: n,
            });
        }
        if self.perm.degree() != n + 1 {
            errors.push(SkeletonError::DegreeMismatch {
                degree: self.perm.degree(),
                arity: n,
            });
        }
        if self.type_sig.output == 0 || self.type_sig.inputs.iter().any(|&k| k == 0) {
            errors.push(SkeletonError::NonPositiveType);
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// The Boolean negation transform: flip the sign, the quantifier and every
    /// tonicity sign, keeping the permutation, types and relation.
    pub fn negated(&self) -> AtomicSkeleton {
        AtomicSkeleton {
            perm: self.perm.clone(),
            sign: self.sign.negate(),
            quant: self.quant.negate(),
            type_sig: self.type_sig.clone(),
            tonicity: self.tonicity.iter().map(|t| t.negate()).collect(),
        }
    }

    /// Block lengths of the base relation in its own argument order: position
    /// `i` of the relation holds the block `x_{sigma^-(i)}`, so its length is
    /// the type of that block (`n+1` denotes the output block).
    pub fn base_block_lens(&self) -> Vec<u32> {
        let inv = self.perm.inverse();
        (1..=self.arity() + 1)
            .map(|i| {
                let j = inv.apply(i);
                if j == self.arity() + 1 {
                    self.type_sig.output
                } else {
                    self.type_sig.inputs[j - 1]
                }
            })
            .collect()
    }

    /// Base-relation position of the output block.
    pub fn output_base_position(&self) -> usize {
        self.perm.apply(self.arity() + 1)
    }
}

impl fmt::Display for AtomicSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_letter() {
            return write!(
                f,
                "({}, {}, {})",
                self.sign,
                self.quant,
                self.type_sig.output
            );
        }
        write!(
            f,
            "({}, {}, {}, ({}",
            self.perm, self.sign, self.quant, self.type_sig.output
        )?;
        for k in &self.type_sig.inputs {
            write!(f, ";{k}")?;
        }
        write!(f, "), (")?;
        for (i, t) in self.tonicity.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "))")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tau2() -> Permutation {
        Permutation::new(vec![2, 1]).unwrap()
    }

    #[test]
    fn diamond_shape_validates() {
        let s = AtomicSkeleton::new(
            tau2(),
            Sign::Pos,
            Quant::Ex,
            TypeSig::new(1, vec![1]),
            vec![Sign::Pos],
        );
        assert!(s.is_ok());
    }

    #[test]
    fn letter_validates() {
        assert!(AtomicSkeleton::letter(Sign::Pos, Quant::Ex, 1).validate().is_ok());
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let s = AtomicSkeleton {
            perm: tau2(),
            sign: Sign::Pos,
            quant: Quant::Ex,
            type_sig: TypeSig::new(1, vec![1, 1]),
            tonicity: vec![Sign::Pos, Sign::Pos],
        };
        let errs = s.validate().unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, SkeletonError::DegreeMismatch { degree: 2, arity: 2 })));
    }

    #[test]
    fn negation_of_diamond_is_the_dual_shape() {
        let dia = AtomicSkeleton::new(
            tau2(),
            Sign::Pos,
            Quant::Ex,
            TypeSig::new(1, vec![1]),
            vec![Sign::Pos],
        )
        .unwrap();
        let neg = dia.negated();
        assert_eq!(neg.sign, Sign::Neg);
        assert_eq!(neg.quant, Quant::All);
        assert_eq!(neg.tonicity, vec![Sign::Neg]);
        assert_eq!(neg.perm, dia.perm);
        assert_eq!(neg.type_sig, dia.type_sig);
    }

    #[test]
    fn negation_of_binary_existential() {
        let comp = AtomicSkeleton::new(
            Permutation::identity(3),
            Sign::Pos,
            Quant::Ex,
            TypeSig::new(1, vec![1, 1]),
            vec![Sign::Pos, Sign::Pos],
        )
        .unwrap();
        let neg = comp.negated();
        assert_eq!(neg.sign, Sign::Neg);
        assert_eq!(neg.quant, Quant::All);
        assert_eq!(neg.tonicity, vec![Sign::Neg, Sign::Neg]);
    }

    #[test]
    fn base_blocks_follow_the_inverse_permutation() {
        // sigma5 = (2,3,1), types (1;1;1): base order is (out, x1, x2).
        let under = AtomicSkeleton::new(
            Permutation::new(vec![2, 3, 1]).unwrap(),
            Sign::Neg,
            Quant::All,
            TypeSig::new(1, vec![1, 1]),
            vec![Sign::Neg, Sign::Pos],
        )
        .unwrap();
        assert_eq!(under.output_base_position(), 1);
        assert_eq!(under.base_block_lens(), vec![1, 1, 1]);
    }

    pub(crate) fn arb_skeleton() -> impl Strategy<Value = AtomicSkeleton> {
        (0usize..=3).prop_flat_map(|n| {
            let perm = Just((1..=(n + 1) as u8).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|m| Permutation::new(m).unwrap());
            let types = proptest::collection::vec(1u32..=3, n);
            let out = 1u32..=3;
            let ton = proptest::collection::vec(
                prop_oneof![Just(Sign::Pos), Just(Sign::Neg)],
                n,
            );
            let sign = prop_oneof![Just(Sign::Pos), Just(Sign::Neg)];
            let quant = prop_oneof![Just(Quant::All), Just(Quant::Ex)];
            (perm, sign, quant, out, types, ton).prop_map(|(p, s, q, o, i, t)| {
                AtomicSkeleton::new(p, s, q, TypeSig::new(o, i), t).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn boolean_negation_is_an_involution(s in arb_skeleton()) {
            prop_assert_eq!(s.negated().negated(), s);
        }

        #[test]
        fn negation_preserves_relation_blocks(s in arb_skeleton()) {
            prop_assert_eq!(s.negated().base_block_lens(), s.base_block_lens());
        }
    }
}
