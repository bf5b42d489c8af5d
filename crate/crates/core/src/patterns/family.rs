use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::combinatorics::{binomial, for_each_combination};
use crate::error::{Error, Result};
use crate::exact::Q;
use crate::hypergraph::{AlgebraicInstance, EdgeStore};

/// Default cap on `C(base, z) * |F|` trace evaluations.
pub const DEFAULT_SHATTER_BUDGET: u64 = 200_000_000;
/// Default largest `z` tabulated by [`weak_vc_report`].
pub const DEFAULT_Z_MAX: usize = 4;

/// A family of subsets of `0..base_size`, stored as bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    base_size: usize,
    members: Vec<Vec<u64>>,
}

impl SetFamily {
    pub fn new(base_size: usize) -> Self {
        SetFamily { base_size, members: Vec::new() }
    }

    pub fn from_sets(base_size: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut f = SetFamily::new(base_size);
        for s in sets {
            f.push_indices(s)?;
        }
        Ok(f)
    }

    pub fn push_indices(&mut self, set: &[usize]) -> Result<()> {
        if let Some(&bad) = set.iter().find(|&&x| x >= self.base_size) {
            return Err(Error::IndexOutOfRange { index: bad, n: self.base_size });
        }
        self.members.push(bits::from_indices(self.base_size, set.iter().copied()));
        Ok(())
    }

    pub fn push_bits(&mut self, words: Vec<u64>) {
        assert_eq!(words.len(), bits::words_for(self.base_size));
        self.members.push(words);
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn member(&self, i: usize) -> &[u64] {
        &self.members[i]
    }

    /// Number of distinct traces `F|_U`.
    pub fn trace_count(&self, u: &[usize]) -> usize {
        assert!(u.len() <= 64);
        let traces: HashSet<u64> = self
            .members
            .iter()
            .map(|m| u.iter().enumerate().fold(0u64, |acc, (j, &x)| acc | (bits::get(m, x) as u64) << j))
            .collect();
        traces.len()
    }
}

/// `pi_F(z)`: the largest number of traces on a `z`-subset of the base.
pub fn shatter_function(f: &SetFamily, z: usize, budget: u64) -> Result<u64> {
    if z > f.base_size() || z > 64 {
        return Err(Error::BadParameters(format!("z = {z} exceeds the base size {}", f.base_size())));
    }
    let work =
        binomial(f.base_size() as u64, z as u64).and_then(|c| c.checked_mul(f.len().max(1) as u64)).unwrap_or(u64::MAX);
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }
    let mut best = 0usize;
    for_each_combination(f.base_size(), z, |u| {
        best = best.max(f.trace_count(u));
    });
    Ok(best as u64)
}

/// `{N(v) : v in V}` over the base of unordered `(r-1)`-subsets (the vertex
/// set itself when `r = 2`), subsets indexed in lexicographic order.
pub fn neighborhood_family(h: &EdgeStore, budget: u64) -> Result<SetFamily> {
    if h.is_directed() || h.r() < 2 {
        return Err(Error::Unsupported("an undirected store with r >= 2".into()));
    }
    let (n, r) = (h.n(), h.r());
    let base = binomial(n as u64, r as u64 - 1).unwrap_or(u64::MAX);
    let work = base.saturating_mul(n as u64);
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }
    let mut fam = SetFamily::new(base as usize);
    let mut t = vec![0usize; r];
    for v in 0..n {
        let mut words = vec![0u64; bits::words_for(base as usize)];
        let mut j = 0;
        for_each_combination(n, r - 1, |s| {
            if !s.contains(&v) {
                t[0] = v;
                t[1..].copy_from_slice(s);
                if h.contains(&t) {
                    bits::set(&mut words, j);
                }
            }
            j += 1;
        });
        fam.push_bits(words);
    }
    Ok(fam)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeakVcRow {
    pub z: usize,
    pub pi: u64,
    /// `C(z m d + n, n)`
    pub bound: u64,
    pub holds: bool,
}

/// Shatter function of the neighbourhood family for `z = 1..=z_max`, next
/// to the polynomial ceiling.
pub fn weak_vc_report(inst: &AlgebraicInstance, h: &EdgeStore, z_max: usize, budget: u64) -> Result<Vec<WeakVcRow>> {
    let fam = neighborhood_family(h, budget)?;
    let (m, d, n) = (inst.m() as u64, inst.d() as u64, inst.n() as u64);
    (1..=z_max.min(fam.base_size()))
        .map(|z| {
            let pi = shatter_function(&fam, z, budget)?;
            let bound = binomial(z as u64 * m * d + n, n).unwrap_or(u64::MAX);
            Ok(WeakVcRow { z, pi, bound, holds: pi <= bound })
        })
        .collect()
}

/// Greedy maximal `delta`-separated subfamily, scanning in index order.
/// Returns the indices of the chosen members.
pub fn separated_packing(f: &SetFamily, delta: Q) -> Result<Vec<usize>> {
    if *delta.numer() == 0 || delta > Q::from_integer(1) {
        return Err(Error::BadParameters("need 0 < delta <= 1".into()));
    }
    let (num, den) = (*delta.numer() as u128, *delta.denom() as u128);
    let threshold = num * f.base_size() as u128;
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..f.len() {
        let far = chosen.iter().all(|&j| bits::xor_count(f.member(i), f.member(j)) as u128 * den >= threshold);
        if far {
            chosen.push(i);
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::par::Exec;
    use proptest::prelude::*;

    fn cycle(n: usize) -> EdgeStore {
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        EdgeStore::from_edges(n, 2, false, &edges).unwrap()
    }

    #[test]
    fn shatter_examples() {
        let singletons = SetFamily::from_sets(4, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(shatter_function(&singletons, 1, u64::MAX).unwrap(), 2);
        let mut power = SetFamily::new(3);
        for mask in 0..8usize {
            power.push_indices(&(0..3).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>()).unwrap();
        }
        assert_eq!(shatter_function(&power, 3, u64::MAX).unwrap(), 8);
        // C_4 open neighbourhoods: every pair of vertices sees exactly two traces
        let c4 = neighborhood_family(&cycle(4), u64::MAX).unwrap();
        assert_eq!(shatter_function(&c4, 2, u64::MAX).unwrap(), 2);
    }

    #[test]
    fn complete_and_empty_graphs() {
        let k = EdgeStore::from_fn(6, 2, false, Exec::Sequential, u64::MAX, |_| true).unwrap();
        let fk = neighborhood_family(&k, u64::MAX).unwrap();
        for z in 1..=4 {
            assert_eq!(shatter_function(&fk, z, u64::MAX).unwrap(), z as u64 + 1);
        }
        let e = neighborhood_family(&EdgeStore::empty(6, 2, false), u64::MAX).unwrap();
        assert_eq!(shatter_function(&e, 3, u64::MAX).unwrap(), 1);
    }

    #[test]
    fn paley_weak_vc() {
        let inst = crate::constructions::paley(13).unwrap();
        let h = inst.materialize(u64::MAX, Exec::Sequential).unwrap();
        let rows = weak_vc_report(&inst, &h, 3, u64::MAX).unwrap();
        assert_eq!((rows[0].pi, rows[0].bound), (2, 7));
        assert!(rows.iter().all(|r| r.holds));
        assert!(rows.windows(2).all(|w| w[0].pi <= w[1].pi));
    }

    #[test]
    fn packing_examples() {
        let twins = SetFamily::from_sets(10, &[vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(separated_packing(&twins, q(1, 10)).unwrap(), vec![0]);
        let mut power = SetFamily::new(4);
        for mask in 0..16usize {
            power.push_indices(&(0..4).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>()).unwrap();
        }
        assert_eq!(separated_packing(&power, q(1, 4)).unwrap().len(), 16);
        assert!(separated_packing(&power, q(0, 1)).is_err());
    }

    proptest! {
        #[test]
        fn packing_is_separated_and_maximal(sets in prop::collection::vec(prop::collection::btree_set(0usize..20, 0..12), 1..30),
                                            num in 1u64..10) {
            let sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            let fam = SetFamily::from_sets(20, &sets).unwrap();
            let delta = q(num, 10);
            let chosen = separated_packing(&fam, delta).unwrap();
            let dist = |a: usize, b: usize| bits::xor_count(fam.member(a), fam.member(b)) as u64;
            for (x, &a) in chosen.iter().enumerate() {
                for &b in &chosen[x + 1..] {
                    prop_assert!(dist(a, b) * 10 >= num * 20);
                }
            }
            for i in 0..fam.len() {
                if !chosen.contains(&i) {
                    prop_assert!(chosen.iter().any(|&j| dist(i, j) * 10 < num * 20));
                }
            }
        }
    }
}
