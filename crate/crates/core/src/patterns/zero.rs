use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::MultiPoly;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::par::{map_slice, Exec};

pub const MAX_ZERO_PATTERN_DOMAIN: usize = 10_000_000;

/// Realized zero-patterns of `f_1..f_m` over a domain of points.
///
/// A pattern is a bitmask: bit `i` is set when `f_{i+1}` is nonzero (`*`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZeroPatternReport {
    pub m: usize,
    pub n: usize,
    pub d: u32,
    pub patterns: Vec<u64>,
    pub count: u64,
    /// `C(md + n, n)`
    pub bound: u64,
    pub holds: bool,
}

impl ZeroPatternReport {
    /// Text form of a pattern, e.g. `0**`.
    pub fn render(&self, pattern: u64) -> String {
        (0..self.m).map(|i| if pattern >> i & 1 == 1 { '*' } else { '0' }).collect()
    }
}

/// Enumerate the zero-patterns of single-block polynomials over `domain`.
pub fn zero_patterns(polys: &[MultiPoly], domain: &[Vec<u32>], exec: Exec) -> Result<ZeroPatternReport> {
    let m = polys.len();
    if m == 0 || m > 64 {
        return Err(Error::BadParameters("need 1 <= m <= 64 polynomials".into()));
    }
    let n = polys[0].block_len();
    if polys.iter().any(|f| f.blocks() != 1 || f.block_len() != n) {
        return Err(Error::BadParameters("zero patterns need one-block polynomials in n variables".into()));
    }
    if domain.len() > MAX_ZERO_PATTERN_DOMAIN {
        return Err(Error::BudgetExceeded { needed: domain.len() as u64, budget: MAX_ZERO_PATTERN_DOMAIN as u64 });
    }
    let d = polys.iter().map(|f| f.degree_cap()).max().unwrap_or(0);
    let masks = map_slice(exec, domain, |x| {
        polys.iter().enumerate().fold(0u64, |acc, (i, f)| if f.eval_unchecked(x) != 0 { acc | 1 << i } else { acc })
    });
    let set: BTreeSet<u64> = masks.into_iter().collect();
    let bound = binomial(m as u64 * d as u64 + n as u64, n as u64).unwrap_or(u64::MAX);
    let count = set.len() as u64;
    Ok(ZeroPatternReport { m, n, d, patterns: set.into_iter().collect(), count, bound, holds: count <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldPrime;
    use crate::constructions::all_points;

    #[test]
    fn three_linear_forms() {
        let f3 = FieldPrime::new(3).unwrap();
        let x = MultiPoly::new(f3, 1, 2, 1, [(1, vec![1, 0])]).unwrap();
        let y = MultiPoly::new(f3, 1, 2, 1, [(1, vec![0, 1])]).unwrap();
        let s = x.add(&y).unwrap();
        let dom = all_points(f3, 2).unwrap();
        let rep = zero_patterns(&[x, y, s], &dom, Exec::Sequential).unwrap();
        // oracle: evaluate each point by hand
        let mut expect = BTreeSet::new();
        for a in 0..3u64 {
            for b in 0..3u64 {
                let bits = [a, b, (a + b) % 3].iter().enumerate().fold(0u64, |m, (i, &v)| m | ((v != 0) as u64) << i);
                expect.insert(bits);
            }
        }
        assert_eq!(rep.count, expect.len() as u64);
        assert_eq!(rep.count, 5);
        assert_eq!(rep.bound, 10);
        assert!(rep.holds);
    }

    #[test]
    fn constants_and_copies() {
        let f5 = FieldPrime::new(5).unwrap();
        let c = MultiPoly::constant(f5, 1, 1, 0, 2);
        let dom = all_points(f5, 1).unwrap();
        let rep = zero_patterns(&[c], &dom, Exec::Parallel).unwrap();
        assert_eq!((rep.count, rep.render(rep.patterns[0]).as_str()), (1, "*"));
        let x = MultiPoly::new(f5, 1, 1, 1, [(1, vec![1])]).unwrap();
        let one = zero_patterns(std::slice::from_ref(&x), &dom, Exec::Sequential).unwrap();
        let three = zero_patterns(&[x.clone(), x.clone(), x], &dom, Exec::Sequential).unwrap();
        assert_eq!(one.count, three.count);
        assert_eq!(three.patterns, vec![0, 0b111]);
    }
}
