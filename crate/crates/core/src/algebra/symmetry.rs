use serde::{Deserialize, Serialize};

use super::MultiPoly;
use crate::combinatorics::{binomial, factorial, for_each_combination, permutations};
use crate::rng::rng_from_seed;

/// Exhaustive checking is used while `C(|V|, r) * r!` stays at or below this.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "mode")]
pub enum SymmetryMode {
    Exhaustive,
    Sampled { k: usize, seed: u64 },
}

impl SymmetryMode {
    /// Exhaustive when affordable, otherwise 4096 sampled subsets.
    pub fn auto(n_vertices: usize, r: usize) -> Self {
        let work =
            binomial(n_vertices as u64, r as u64).and_then(|c| factorial(r as u64).and_then(|f| c.checked_mul(f)));
        match work {
            Some(w) if w <= EXHAUSTIVE_LIMIT => SymmetryMode::Exhaustive,
            _ => SymmetryMode::Sampled { k: 4096, seed: 0 },
        }
    }
}

/// True iff `pred` takes the same value on every ordering of each tested
/// `r`-subset of `0..n_vertices`.
pub fn symmetry_check(n_vertices: usize, r: usize, mode: SymmetryMode, pred: impl Fn(&[usize]) -> bool) -> bool {
    if r > n_vertices || r < 2 {
        return true;
    }
    let perms = permutations(r);
    let mut buf = vec![0usize; r];
    let mut agrees = |set: &[usize]| {
        let first = pred(set);
        perms.iter().skip(1).all(|perm| {
            for (slot, &j) in buf.iter_mut().zip(perm) {
                *slot = set[j];
            }
            pred(&buf) == first
        })
    };
    match mode {
        SymmetryMode::Exhaustive => {
            let mut ok = true;
            for_each_combination(n_vertices, r, |set| {
                if ok && !agrees(set) {
                    ok = false;
                }
            });
            ok
        }
        SymmetryMode::Sampled { k, seed } => {
            let mut rng = rng_from_seed(seed);
            (0..k).all(|_| {
                let mut set = rand::seq::index::sample(&mut rng, n_vertices, r).into_vec();
                set.sort_unstable();
                agrees(&set)
            })
        }
    }
}

/// Symmetry of the zero-pattern of a single polynomial on `vertices`.
pub fn poly_symmetry_check(f: &MultiPoly, vertices: &[Vec<u32>], mode: SymmetryMode) -> bool {
    let r = f.blocks();
    symmetry_check(vertices.len(), r, mode, |t| {
        let blocks: Vec<&[u32]> = t.iter().map(|&i| vertices[i].as_slice()).collect();
        f.eval_blocks(&blocks) == 0
    })
}
