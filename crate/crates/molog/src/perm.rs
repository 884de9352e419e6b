//! Permutations over `{1, .., n}`, used to reorder relation argument blocks.

use std::fmt;

use crate::error::SkeletonError;

/// A permutation of `{1, .., n}` stored as its image list: `mapping[i-1]` is
/// the image of `i`. `(3,1,2)` maps 1 to 3, 2 to 1 and 3 to 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    mapping: Vec<u8>,
}

impl Permutation {
    pub fn new(mapping: Vec<u8>) -> Result<Self, SkeletonError> {
        let n = mapping.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(SkeletonError::BadPermutation {
                mapping,
                reason: "degree must be between 1 and 255".into(),
            });
        }
        let mut seen = vec![false; n];
        for &img in &mapping {
            if img == 0 || img as usize > n || seen[img as usize - 1] {
                return Err(SkeletonError::BadPermutation {
                    mapping: mapping.clone(),
                    reason: format!("images must enumerate 1..={n} exactly once"),
                });
            }
            seen[img as usize - 1] = true;
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            mapping: (1..=degree as u8).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.mapping.len()
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i - 1] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.mapping.len()];
        for (i, &img) in self.mapping.iter().enumerate() {
            inv[img as usize - 1] = (i + 1) as u8;
        }
        Permutation { mapping: inv }
    }

    /// `self` after `other`: `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, SkeletonError> {
        if self.degree() != other.degree() {
            return Err(SkeletonError::BadPermutation {
                mapping: other.mapping.clone(),
                reason: "composition requires equal degrees".into(),
            });
        }
        Ok(Permutation {
            mapping: (1..=self.degree())
                .map(|i| self.apply(other.apply(i)) as u8)
                .collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &img)| img as usize == i + 1)
    }

    pub fn images(&self) -> &[u8] {
        &self.mapping
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, img) in self.mapping.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{img}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!(Permutation::new(vec![]).is_err());
    }

    #[test]
    fn inverse_of_known_permutation() {
        let sigma = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(sigma.inverse(), Permutation::new(vec![2, 3, 1]).unwrap());
        assert_eq!(sigma.apply(1), 3);
    }

    fn arb_permutation(max_degree: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_degree).prop_flat_map(|n| {
            Just((1..=n as u8).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|m| Permutation::new(m).unwrap())
        })
    }

    proptest! {
        #[test]
        fn inverse_is_involutive(sigma in arb_permutation(6)) {
            prop_assert_eq!(sigma.inverse().inverse(), sigma);
        }

        #[test]
        fn compose_with_inverse_is_identity(sigma in arb_permutation(6)) {
            prop_assert!(sigma.compose(&sigma.inverse()).unwrap().is_identity());
            prop_assert!(sigma.inverse().compose(&sigma).unwrap().is_identity());
        }
    }
}
