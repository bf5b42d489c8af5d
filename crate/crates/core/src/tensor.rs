//! Dense tensors over `F_p`, flattening ranks and the semi-diagonal floor.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::algebra::{FieldPrime, MultiPoly};
use crate::error::{Error, Result};
use crate::exact::{q, Q};
use crate::par::{map_range, Exec};
use crate::rng::Rng;

pub const MAX_TENSOR_ENTRIES: u64 = 10_000_000;

/// Dense row-major `r`-dimensional array of residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    field: FieldPrime,
    dims: Vec<usize>,
    data: Vec<u32>,
}

fn checked_len(dims: &[usize]) -> Result<usize> {
    let len = dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64)).unwrap_or(u64::MAX);
    if len > MAX_TENSOR_ENTRIES {
        return Err(Error::BudgetExceeded { needed: len, budget: MAX_TENSOR_ENTRIES });
    }
    Ok(len as usize)
}

impl Tensor {
    pub fn new(field: FieldPrime, dims: Vec<usize>, data: Vec<u32>) -> Result<Self> {
        if checked_len(&dims)? != data.len() {
            return Err(Error::Malformed(format!("tensor data has {} entries", data.len())));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Tensor { field, dims, data })
    }

    pub fn zeros(field: FieldPrime, dims: Vec<usize>) -> Result<Self> {
        let len = checked_len(&dims)?;
        Ok(Tensor { field, dims, data: vec![0; len] })
    }

    /// Entries from `f(index)`; `f` must return canonical residues.
    pub fn from_fn(field: FieldPrime, dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> u32) -> Result<Self> {
        let len = checked_len(&dims)?;
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..len {
            data.push(f(&idx));
            for (i, d) in idx.iter_mut().zip(&dims).rev() {
                *i += 1;
                if *i < *d {
                    break;
                }
                *i = 0;
            }
        }
        Ok(Tensor { field, dims, data })
    }

    /// `T(X) = f(X)` over all of `V^r`, repeated vertices included.
    pub fn from_poly(f: &MultiPoly, vertices: &[Vec<u32>], exec: Exec) -> Result<Self> {
        let r = f.blocks();
        let n = vertices.len();
        let dims = vec![n; r];
        let len = checked_len(&dims)?;
        if n == 0 {
            return Ok(Tensor { field: f.field(), dims, data: Vec::new() });
        }
        let slab = len / n;
        // one slab per first index, row-major order is preserved
        let slabs: Vec<Vec<u32>> = map_range(exec, n, |first| {
            let mut out = Vec::with_capacity(slab);
            let mut idx = vec![0usize; r - 1];
            let mut blocks: Vec<&[u32]> = vec![&vertices[first]; r];
            for _ in 0..slab {
                for (b, &i) in blocks[1..].iter_mut().zip(&idx) {
                    *b = &vertices[i];
                }
                out.push(f.eval_blocks(&blocks));
                for i in idx.iter_mut().rev() {
                    *i += 1;
                    if *i < n {
                        break;
                    }
                    *i = 0;
                }
            }
            out
        });
        Ok(Tensor { field: f.field(), dims, data: slabs.concat() })
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn order(&self) -> usize {
        self.dims.len()
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> u32 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: u32) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.dims != other.dims || self.field != other.field {
            return Err(Error::AxisMismatch);
        }
        let p = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| p.add(a, b)).collect();
        Ok(Tensor { field: p, dims: self.dims.clone(), data })
    }

    /// Subtensor on the index lists `keep[i]` of each axis.
    pub fn subtensor(&self, keep: &[Vec<usize>]) -> Result<Tensor> {
        if keep.len() != self.order() {
            return Err(Error::AxisMismatch);
        }
        let dims = keep.iter().map(|k| k.len()).collect();
        let mut src = vec![0usize; self.order()];
        Tensor::from_fn(self.field, dims, |idx| {
            for ((s, &i), k) in src.iter_mut().zip(idx).zip(keep) {
                *s = k[i];
            }
            self.get(&src)
        })
    }

    /// Axis-`axis` matricization: rows indexed by that axis, columns by the
    /// remaining axes in lexicographic order.
    pub fn matricize(&self, axis: usize) -> Vec<Vec<u32>> {
        let rows = self.dims[axis];
        let cols = self.data.len().checked_div(rows).unwrap_or(0);
        let mut m = vec![Vec::with_capacity(cols); rows];
        let mut idx = vec![0usize; self.order()];
        for &x in &self.data {
            m[idx[axis]].push(x);
            for (i, d) in idx.iter_mut().zip(&self.dims).rev() {
                *i += 1;
                if *i < *d {
                    break;
                }
                *i = 0;
            }
        }
        m
    }

    /// `frank_{axis+1}`: rank over `F_p` of the axis matricization.
    pub fn flattening_rank(&self, axis: usize) -> usize {
        rank_mod_p(self.field, self.matricize(axis))
    }

    pub fn rank_report(&self, exec: Exec) -> RankReport {
        let per_axis = map_range(exec, self.order(), |a| self.flattening_rank(a));
        let max = per_axis.iter().copied().max().unwrap_or(0);
        RankReport { per_axis, max }
    }

    /// Zero on pairwise-distinct tuples and nonzero on constant tuples.
    pub fn semidiagonal_check(&self) -> Result<bool> {
        let a = *self.dims.first().ok_or(Error::AxisMismatch)?;
        if self.dims.iter().any(|&d| d != a) {
            return Err(Error::AxisMismatch);
        }
        let mut idx = vec![0usize; self.order()];
        for &x in &self.data {
            let all_equal = idx.iter().all(|&i| i == idx[0]);
            let distinct = (0..idx.len()).all(|i| !idx[i + 1..].contains(&idx[i]));
            if (all_equal && x == 0) || (distinct && !all_equal && x != 0) {
                return Ok(false);
            }
            if idx.len() == 1 && x == 0 {
                return Ok(false);
            }
            for (i, d) in idx.iter_mut().zip(&self.dims).rev() {
                *i += 1;
                if *i < *d {
                    break;
                }
                *i = 0;
            }
        }
        Ok(true)
    }

    /// Compare `mfrank` with `|A| / (r - 1)`.
    pub fn verify_semidiag_bound(&self, exec: Exec) -> Result<SemidiagReport> {
        if self.order() < 2 {
            return Err(Error::Unsupported("order at least 2".into()));
        }
        if !self.semidiagonal_check()? {
            return Err(Error::NotSemidiagonal);
        }
        let a = self.dims[0] as u64;
        let r = self.order() as u64;
        let report = self.rank_report(exec);
        let floor = q(a, r - 1);
        Ok(SemidiagReport {
            holds: q(report.max as u64, 1) >= floor,
            mfrank: report.max,
            floor,
            ceil_floor: a.div_ceil(r - 1),
        })
    }
}

/// Per-axis flattening ranks and their maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankReport {
    pub per_axis: Vec<usize>,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SemidiagReport {
    pub holds: bool,
    pub mfrank: usize,
    #[serde(with = "crate::exact::serde_q")]
    pub floor: Q,
    /// `ceil(|A| / (r - 1))`, the integer form of the floor.
    pub ceil_floor: u64,
}

/// Row-echelon elimination mod `p`, pivoting on the first nonzero entry of
/// each column in row order.
pub fn rank_mod_p(field: FieldPrime, mut m: Vec<Vec<u32>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = field.inv(m[rank][c]).expect("pivot is nonzero");
        for x in m[rank][c..].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let (top, bottom) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let k = row[c];
            if k == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = field.sub(*x, field.mul(k, y));
            }
        }
        rank += 1;
    }
    rank
}

/// A random semi-diagonal tensor on `[a]^r`: uniform nonzero on the diagonal,
/// zero on distinct tuples, uniform elsewhere.
pub fn random_semidiagonal(field: FieldPrime, r: usize, a: usize, rng: &mut Rng) -> Result<Tensor> {
    let p = field.modulus();
    Tensor::from_fn(field, vec![a; r], |idx| {
        let all_equal = idx.iter().all(|&i| i == idx[0]);
        let distinct = (0..idx.len()).all(|i| !idx[i + 1..].contains(&idx[i]));
        if all_equal {
            rng.gen_range(1..p) as u32
        } else if distinct {
            0
        } else {
            rng.gen_range(0..p) as u32
        }
    })
}

/// Uniformly random tensor.
pub fn random_tensor(field: FieldPrime, dims: Vec<usize>, rng: &mut Rng) -> Result<Tensor> {
    let p = field.modulus();
    Tensor::from_fn(field, dims, |_| rng.gen_range(0..p) as u32)
}
