//! Seeded random model generators for the acceptance suites.

use std::collections::HashSet;

use molog::model::CModel;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A Kripke-style model: binary relation under `r`, unary letter groups.
pub fn random_kripke(rng: &mut ChaCha8Rng, max_worlds: usize, letters: &[&str]) -> CModel {
    let n = rng.gen_range(1..=max_worlds);
    let mut m = CModel::with_size(n);
    let mut r = HashSet::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if rng.gen_bool(0.35) {
                r.insert(vec![a, b]);
            }
        }
    }
    m.set_relation("r", 2, r);
    for l in letters {
        let tuples: HashSet<Vec<u32>> = (0..n as u32)
            .filter(|_| rng.gen_bool(0.5))
            .map(|w| vec![w])
            .collect();
        m.set_relation(l, 1, tuples);
    }
    m
}

/// A ternary-relation model under `r`, with unary letter groups.
pub fn random_ternary(rng: &mut ChaCha8Rng, max_worlds: usize, letters: &[&str]) -> CModel {
    let n = rng.gen_range(1..=max_worlds);
    let mut m = CModel::with_size(n);
    let mut r = HashSet::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            for c in 0..n as u32 {
                if rng.gen_bool(0.18) {
                    r.insert(vec![a, b, c]);
                }
            }
        }
    }
    m.set_relation("r", 3, r);
    for l in letters {
        let tuples: HashSet<Vec<u32>> = (0..n as u32)
            .filter(|_| rng.gen_bool(0.5))
            .map(|w| vec![w])
            .collect();
        m.set_relation(l, 1, tuples);
    }
    m
}

/// A raw preorder model: `R` is the reflexive-transitive closure of random
/// edges, letters are seeded randomly and closed upward, and `Rdia` is an
/// arbitrary binary relation (used by the modal implication preset).
pub fn random_preorder(rng: &mut ChaCha8Rng, max_worlds: usize, letters: &[&str]) -> CModel {
    let n = rng.gen_range(1..=max_worlds);
    let mut m = CModel::with_size(n);

    let mut reach = vec![vec![false; n]; n];
    for (a, row) in reach.iter_mut().enumerate() {
        row[a] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(0.3) {
                reach[a][b] = true;
            }
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if reach[a][k] && reach[k][b] {
                    reach[a][b] = true;
                }
            }
        }
    }
    let mut r = HashSet::new();
    for a in 0..n {
        for b in 0..n {
            if reach[a][b] {
                r.insert(vec![a as u32, b as u32]);
            }
        }
    }
    m.set_relation("R", 2, r);

    for l in letters {
        let mut holds = vec![false; n];
        for (w, h) in holds.iter_mut().enumerate() {
            let _ = w;
            *h = rng.gen_bool(0.4);
        }
        // Upward persistence along the preorder.
        for a in 0..n {
            for b in 0..n {
                if reach[a][b] && holds[a] {
                    holds[b] = true;
                }
            }
        }
        let tuples: HashSet<Vec<u32>> = holds
            .iter()
            .enumerate()
            .filter(|(_, h)| **h)
            .map(|(w, _)| vec![w as u32])
            .collect();
        m.set_relation(l, 1, tuples);
    }

    let mut rd = HashSet::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if rng.gen_bool(0.3) {
                rd.insert(vec![a, b]);
            }
        }
    }
    m.set_relation("Rdia", 2, rd);
    m
}
