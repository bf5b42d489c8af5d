use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, FieldPrime};
use crate::combinatorics::permutations;

/// One term of a [`MultiPoly`]: a nonzero coefficient and an exponent vector
/// over all `r * n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: u32,
    pub exps: Vec<u32>,
    // nonzero (variable, exponent) pairs; kept alongside `exps` for evaluation
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    fn new(coeff: u32, exps: Vec<u32>) -> Self {
        let factors = exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, &e)| (v as u32, e)).collect();
        Monomial { coeff, exps, factors }
    }
}

/// Textual monomial record used inside instance files: `{"c": 3, "e": [1, 0]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub c: i64,
    pub e: Vec<u32>,
}

/// Sparse polynomial over `F_p` in `r` blocks of `n` variables each.
///
/// Every monomial has per-block degree at most `degree_cap`; monomials are
/// kept sorted by exponent vector with no duplicates and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldPrime,
    blocks: usize,
    block_len: usize,
    degree_cap: u32,
    monomials: Vec<Monomial>,
}

impl MultiPoly {
    /// Build from `(coefficient, exponents)` pairs. Coefficients are reduced
    /// mod `p`, duplicate exponent vectors are merged and zero terms dropped.
    pub fn new<I>(
        field: FieldPrime,
        blocks: usize,
        block_len: usize,
        degree_cap: u32,
        terms: I,
    ) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (i64, Vec<u32>)>,
    {
        let vars = blocks * block_len;
        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for (c, exps) in terms {
            if exps.len() != vars {
                return Err(AlgebraError::ArityMismatch { expected: vars, got: exps.len() });
            }
            for b in 0..blocks {
                let deg: u32 = exps[b * block_len..(b + 1) * block_len].iter().sum();
                if deg > degree_cap {
                    return Err(AlgebraError::DegreeCapViolated { block: b, degree: deg, cap: degree_cap });
                }
            }
            let c = field.reduce(c);
            let slot = acc.entry(exps).or_insert(0);
            *slot = field.add(*slot, c);
        }
        let monomials = acc.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| Monomial::new(c, e)).collect();
        Ok(MultiPoly { field, blocks, block_len, degree_cap, monomials })
    }

    pub fn zero(field: FieldPrime, blocks: usize, block_len: usize, degree_cap: u32) -> Self {
        MultiPoly { field, blocks, block_len, degree_cap, monomials: Vec::new() }
    }

    pub fn constant(field: FieldPrime, blocks: usize, block_len: usize, degree_cap: u32, c: i64) -> Self {
        let vars = blocks * block_len;
        MultiPoly::new(field, blocks, block_len, degree_cap, [(c, vec![0; vars])])
            .expect("constant term always respects the cap")
    }

    pub fn from_records(
        field: FieldPrime,
        blocks: usize,
        block_len: usize,
        degree_cap: u32,
        records: &[MonomialRecord],
    ) -> Result<Self, AlgebraError> {
        Self::new(field, blocks, block_len, degree_cap, records.iter().map(|m| (m.c, m.e.clone())))
    }

    pub fn to_records(&self) -> Vec<MonomialRecord> {
        self.monomials.iter().map(|m| MonomialRecord { c: m.coeff as i64, e: m.exps.clone() }).collect()
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }
    pub fn blocks(&self) -> usize {
        self.blocks
    }
    pub fn block_len(&self) -> usize {
        self.block_len
    }
    pub fn num_vars(&self) -> usize {
        self.blocks * self.block_len
    }
    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Largest per-block degree actually used by a monomial.
    pub fn max_block_degree(&self) -> u32 {
        self.monomials
            .iter()
            .flat_map(|m| m.exps.chunks(self.block_len.max(1)).map(|c| c.iter().sum::<u32>()))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.monomials.iter().map(|m| m.exps.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Checked evaluation at a point of `r * n` canonical residues.
    pub fn eval(&self, point: &[u32]) -> Result<u32, AlgebraError> {
        if point.len() != self.num_vars() {
            return Err(AlgebraError::ArityMismatch { expected: self.num_vars(), got: point.len() });
        }
        for &x in point {
            self.field.check(x)?;
        }
        Ok(self.eval_unchecked(point))
    }

    /// Evaluation without range checks. `point` must have `r * n` entries.
    pub fn eval_unchecked(&self, point: &[u32]) -> u32 {
        self.eval_with(|v| point[v])
    }

    /// Evaluate with the `r` blocks supplied separately (one vertex vector per
    /// block), avoiding concatenation in hot loops.
    pub fn eval_blocks(&self, blocks: &[&[u32]]) -> u32 {
        debug_assert_eq!(blocks.len(), self.blocks);
        let n = self.block_len;
        self.eval_with(|v| blocks[v / n][v % n])
    }

    #[inline]
    fn eval_with(&self, var: impl Fn(usize) -> u32) -> u32 {
        let p = self.field;
        let mut acc = 0u32;
        for m in &self.monomials {
            let mut term = m.coeff;
            for &(v, e) in &m.factors {
                let x = var(v as usize);
                if x == 0 {
                    term = 0;
                    break;
                }
                term = p.mul(term, p.pow(x, e as u64));
            }
            acc = p.add(acc, term);
        }
        acc
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.same_shape(other)?;
        let terms = self.monomials.iter().chain(&other.monomials).map(|m| (m.coeff as i64, m.exps.clone()));
        MultiPoly::new(self.field, self.blocks, self.block_len, self.degree_cap.max(other.degree_cap), terms)
    }

    /// Product; the degree cap of the result is the sum of the caps.
    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.same_shape(other)?;
        let p = self.field;
        let mut terms = Vec::with_capacity(self.monomials.len() * other.monomials.len());
        for a in &self.monomials {
            for b in &other.monomials {
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                terms.push((p.mul(a.coeff, b.coeff) as i64, exps));
            }
        }
        MultiPoly::new(p, self.blocks, self.block_len, self.degree_cap + other.degree_cap, terms)
    }

    /// Relabel blocks: block `j` of the result is block `perm[j]` of `self`,
    /// i.e. `g(x_0, .., x_{r-1}) = f(y)` where `y_{perm[j]} = x_j`.
    pub fn permute_blocks(&self, perm: &[usize]) -> MultiPoly {
        assert_eq!(perm.len(), self.blocks);
        let n = self.block_len;
        let terms = self.monomials.iter().map(|m| {
            let mut exps = vec![0u32; m.exps.len()];
            for (j, &src) in perm.iter().enumerate() {
                exps[j * n..(j + 1) * n].copy_from_slice(&m.exps[src * n..(src + 1) * n]);
            }
            (m.coeff as i64, exps)
        });
        MultiPoly::new(self.field, self.blocks, n, self.degree_cap, terms).expect("permutation preserves shape")
    }

    /// Sum of `f` over all `r!` block permutations.
    pub fn symmetrize(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.field, self.blocks, self.block_len, self.degree_cap);
        for perm in permutations(self.blocks) {
            acc = acc.add(&self.permute_blocks(&perm)).expect("same shape");
        }
        acc
    }

    /// Substitute fixed values for every block except `free_block`, leaving a
    /// single-block polynomial in `n` variables.
    pub fn restrict_to_block(&self, free_block: usize, fixed: &[&[u32]]) -> MultiPoly {
        assert!(free_block < self.blocks);
        assert_eq!(fixed.len(), self.blocks - 1);
        let p = self.field;
        let n = self.block_len;
        let mut terms = Vec::with_capacity(self.monomials.len());
        for m in &self.monomials {
            let mut coeff = m.coeff;
            let mut k = 0;
            for b in 0..self.blocks {
                if b == free_block {
                    continue;
                }
                for (&x, &e) in fixed[k].iter().zip(&m.exps[b * n..(b + 1) * n]) {
                    if e > 0 {
                        coeff = p.mul(coeff, p.pow(x, e as u64));
                    }
                }
                k += 1;
            }
            terms.push((coeff as i64, m.exps[free_block * n..(free_block + 1) * n].to_vec()));
        }
        MultiPoly::new(p, 1, n, self.degree_cap, terms).expect("restriction preserves per-block cap")
    }

    fn same_shape(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if self.field != other.field || self.blocks != other.blocks || self.block_len != other.block_len {
            return Err(AlgebraError::ShapeMismatch);
        }
        Ok(())
    }
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", m.coeff)?;
            for &(v, e) in &m.factors {
                let (b, j) = (v as usize / self.block_len, v as usize % self.block_len);
                write!(f, "*x{b}_{j}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    /// (x + y)^k + c in two single-variable blocks, by binomial expansion.
    fn binomial_power(p: u64, k: u32, c: i64) -> MultiPoly {
        let mut terms = vec![(c, vec![0, 0])];
        let mut coeff: i64 = 1;
        for i in 0..=k {
            terms.push((coeff, vec![i, k - i]));
            coeff = coeff * (k - i) as i64 / (i + 1) as i64;
        }
        MultiPoly::new(fp(p), 2, 1, k, terms).unwrap()
    }

    #[test]
    fn eval_examples() {
        let xy = MultiPoly::new(fp(5), 2, 1, 1, [(1, vec![1, 1])]).unwrap();
        assert_eq!(xy.eval(&[2, 3]).unwrap(), 1);
        let zero = MultiPoly::zero(fp(5), 2, 1, 1);
        assert_eq!(zero.eval(&[4, 4]).unwrap(), 0);
        let f = binomial_power(13, 6, 1);
        assert_eq!(f.eval(&[0, 1]).unwrap(), 2);
    }

    #[test]
    fn eval_rejects_bad_points() {
        let xy = MultiPoly::new(fp(5), 2, 1, 1, [(1, vec![1, 1])]).unwrap();
        assert_eq!(xy.eval(&[1]), Err(AlgebraError::ArityMismatch { expected: 2, got: 1 }));
        assert!(matches!(xy.eval(&[1, 5]), Err(AlgebraError::NonResidueInput { .. })));
    }

    #[test]
    fn construction_normalizes_and_checks_caps() {
        let f = MultiPoly::new(fp(7), 2, 1, 2, [(3, vec![1, 0]), (4, vec![1, 0]), (2, vec![0, 1])]).unwrap();
        // 3 + 4 = 7 = 0 mod 7, so only the y term survives
        assert_eq!(f.monomials().len(), 1);
        assert_eq!(f.monomials()[0].exps, vec![0, 1]);
        let err = MultiPoly::new(fp(7), 2, 1, 2, [(1, vec![3, 0])]).unwrap_err();
        assert_eq!(err, AlgebraError::DegreeCapViolated { block: 0, degree: 3, cap: 2 });
        // per-block, not total: x^2 y^2 is fine under cap 2
        assert!(MultiPoly::new(fp(7), 2, 1, 2, [(1, vec![2, 2])]).is_ok());
    }

    #[test]
    fn symmetrize_and_permute() {
        let x = MultiPoly::new(fp(5), 2, 1, 1, [(1, vec![1, 0])]).unwrap();
        let s = x.symmetrize();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(s.eval(&[a, b]).unwrap(), (a + b) % 5);
            }
        }
        let swapped = x.permute_blocks(&[1, 0]);
        assert_eq!(swapped.eval(&[2, 3]).unwrap(), 3);
    }

    #[test]
    fn product_squares_orientation() {
        // f(x,y) = x - 2y, f(x,y) f(y,x) vanishes iff either orientation does
        let f = MultiPoly::new(fp(13), 2, 1, 1, [(1, vec![1, 0]), (-2, vec![0, 1])]).unwrap();
        let g = f.mul(&f.permute_blocks(&[1, 0])).unwrap();
        assert_eq!(g.degree_cap(), 2);
        for a in 0..13 {
            for b in 0..13 {
                let both = f.eval(&[a, b]).unwrap() != 0 && f.eval(&[b, a]).unwrap() != 0;
                assert_eq!(g.eval(&[a, b]).unwrap() != 0, both);
            }
        }
    }

    #[test]
    fn restriction_matches_full_evaluation() {
        let f = MultiPoly::new(
            fp(7),
            3,
            2,
            2,
            [(1, vec![1, 1, 0, 1, 2, 0]), (3, vec![0, 0, 2, 0, 0, 1]), (5, vec![0, 0, 0, 0, 0, 0])],
        )
        .unwrap();
        let a = [3u32, 4];
        let b = [6u32, 1];
        let g = f.restrict_to_block(2, &[&a, &b]);
        for x in 0..7 {
            for y in 0..7 {
                assert_eq!(g.eval(&[x, y]).unwrap(), f.eval(&[3, 4, 6, 1, x, y]).unwrap());
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((0i64..13, prop::collection::vec(0u32..=2, 4)), 0..8).prop_map(|terms| {
            let terms: Vec<_> = terms.into_iter().filter(|(_, e)| e[0] + e[1] <= 2 && e[2] + e[3] <= 2).collect();
            MultiPoly::new(FieldPrime::new(13).unwrap(), 2, 2, 2, terms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn evaluation_is_linear(f in arb_poly(), g in arb_poly(), pt in prop::collection::vec(0u32..13, 4)) {
            let p = fp(13);
            let sum = f.add(&g).unwrap();
            prop_assert_eq!(sum.eval(&pt).unwrap(), p.add(f.eval(&pt).unwrap(), g.eval(&pt).unwrap()));
        }

        #[test]
        fn records_roundtrip(f in arb_poly()) {
            let back = MultiPoly::from_records(f.field(), 2, 2, 2, &f.to_records()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
