//! Canonical instances (Paley, Frankl-Wilson, Erdős-Rényi polarity) and
//! seeded random algebraic instances.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_prime, FieldPrime, MultiPoly};
use crate::combinatorics::{binomial, combinations_of};
use crate::error::{Error, Result};
use crate::hypergraph::{AlgebraicInstance, BoolFormula, ErSide, InstanceKind};
use crate::rng::{child_seed, rng_from_seed, Rng};

/// Largest vertex set a generator will produce.
pub const MAX_GENERATED_VERTICES: u64 = 10_000_000;

/// Every point of `F_p^n` in lexicographic order.
pub fn all_points(field: FieldPrime, n: usize) -> Result<Vec<Vec<u32>>> {
    let p = field.modulus();
    let total = p.checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > MAX_GENERATED_VERTICES {
        return Err(Error::BudgetExceeded { needed: total, budget: MAX_GENERATED_VERTICES });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u32; n];
    for _ in 0..total {
        out.push(cur.clone());
        for x in cur.iter_mut().rev() {
            *x += 1;
            if (*x as u64) < p {
                break;
            }
            *x = 0;
        }
    }
    Ok(out)
}

/// `count` distinct uniform points of `F_p^n`, in draw order.
pub fn random_points(field: FieldPrime, n: usize, count: usize, rng: &mut Rng) -> Result<Vec<Vec<u32>>> {
    let p = field.modulus();
    let space = p.checked_pow(n as u32).unwrap_or(u64::MAX);
    if count as u64 > space {
        return Err(Error::BudgetExceeded { needed: count as u64, budget: space });
    }
    if count as u64 > MAX_GENERATED_VERTICES {
        return Err(Error::BudgetExceeded { needed: count as u64, budget: MAX_GENERATED_VERTICES });
    }
    let mut seen = std::collections::HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p) as u32).collect();
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Paley instance on `F_p`: `f(x, y) = (x + y)^((p-1)/2) + 1`, edge iff `f != 0`,
/// so `x ~ y` iff `x + y` is zero or a nonzero quadratic residue.
pub fn paley(p: u64) -> Result<AlgebraicInstance> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::BadPrime(p));
    }
    let field = FieldPrime::new(p)?;
    let e = (p - 1) / 2;
    // C(e, k) mod p by the row recurrence; k <= e < p keeps k invertible
    let mut c = 1u32;
    let mut terms: Vec<(i64, Vec<u32>)> = Vec::with_capacity(e as usize + 2);
    for k in 0..=e {
        if k > 0 {
            c = field.mul(field.mul(c, (e - k + 1) as u32), field.inv(k as u32)?);
        }
        terms.push((c as i64, vec![k as u32, (e - k) as u32]));
    }
    terms.push((1, vec![0, 0]));
    let f = MultiPoly::new(field, 2, 1, e as u32, terms)?;
    let vertices = (0..p as u32).map(|x| vec![x]).collect();
    AlgebraicInstance::strongly_algebraic(f, e as u32, vertices)
}

/// Frankl-Wilson instance: characteristic vectors of the `(p^2 - 1)`-subsets
/// of `[n]`, `f(u, v) = <u, v> + 1`. Edge iff `f != 0`, or iff `f = 0` with
/// `complement`.
pub fn frankl_wilson(n: usize, p: u64, complement: bool) -> Result<AlgebraicInstance> {
    if !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let k = (p * p - 1) as usize;
    if k > n {
        return Err(Error::BadParameters(format!("need p^2 - 1 = {k} <= n = {n}")));
    }
    let count = binomial(n as u64, k as u64).unwrap_or(u64::MAX);
    if count > MAX_GENERATED_VERTICES {
        return Err(Error::BudgetExceeded { needed: count, budget: MAX_GENERATED_VERTICES });
    }
    let field = FieldPrime::new(p)?;
    let f = inner_product_plus(field, n, 1)?;
    let items: Vec<usize> = (0..n).collect();
    let vertices = combinations_of(&items, k)
        .into_iter()
        .map(|set| {
            let mut v = vec![0u32; n];
            for i in set {
                v[i] = 1;
            }
            v
        })
        .collect();
    if complement {
        AlgebraicInstance::new(field, 2, n, 1, InstanceKind::General, vec![f], BoolFormula::Atom(1), vertices)
    } else {
        AlgebraicInstance::strongly_algebraic(f, 1, vertices)
    }
}

/// `<x, y> + c` in two blocks of `n` variables.
fn inner_product_plus(field: FieldPrime, n: usize, c: i64) -> Result<MultiPoly> {
    let mut terms: Vec<(i64, Vec<u32>)> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; 2 * n];
            e[i] = 1;
            e[n + i] = 1;
            (1, e)
        })
        .collect();
    terms.push((c, vec![0; 2 * n]));
    Ok(MultiPoly::new(field, 2, n, 1, terms)?)
}

/// Canonical projective representatives of `PG(2, q)`: first nonzero coordinate 1.
pub fn projective_points(q: u32) -> Vec<Vec<u32>> {
    let mut pts = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            pts.push(vec![1, a, b]);
        }
    }
    for b in 0..q {
        pts.push(vec![0, 1, b]);
    }
    pts.push(vec![0, 0, 1]);
    pts
}

/// Erdős-Rényi polarity graph `ER_q` over a prime `q`. The default side is
/// the complement (edge iff `x_0 y_0 + x_1 y_1 + x_2 y_2 != 0`); the polarity
/// side has edge iff the form vanishes. Self-orthogonal points carry no loop.
pub fn er_polarity(q: u64, side: ErSide) -> Result<AlgebraicInstance> {
    if !is_prime(q) {
        return Err(Error::BadPrime(q));
    }
    let field = FieldPrime::new(q)?;
    let f = inner_product_plus(field, 3, 0)?;
    let vertices = projective_points(q as u32);
    match side {
        ErSide::Complement => AlgebraicInstance::strongly_algebraic(f, 1, vertices),
        ErSide::Polarity => {
            AlgebraicInstance::new(field, 2, 3, 1, InstanceKind::General, vec![f], BoolFormula::Atom(1), vertices)
        }
    }
}

/// The ceiling `N sqrt(q) / (q + 1)` on balanced bi-cliques in `ER_q` and its complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MixingBound {
    pub q: u64,
    pub n: u64,
    /// Symbolic form, e.g. `13*sqrt(3)/4`.
    pub exact: String,
    pub approx: f64,
    /// Largest integer not above the bound, computed exactly.
    pub floor: u64,
}

pub fn mixing_biclique_bound(q: u64) -> Result<MixingBound> {
    if !is_prime(q) {
        return Err(Error::BadPrime(q));
    }
    let n = q * q + q + 1;
    // t <= N sqrt(q)/(q+1)  iff  t^2 (q+1)^2 <= N^2 q
    let (nn, qq) = (n as u128, q as u128);
    let fits = |t: u128| t * t * (qq + 1) * (qq + 1) <= nn * nn * qq;
    let mut t = ((n as f64) * (q as f64).sqrt() / (q + 1) as f64) as u128 + 1;
    while !fits(t) {
        t -= 1;
    }
    while fits(t + 1) {
        t += 1;
    }
    Ok(MixingBound {
        q,
        n,
        exact: format!("{n}*sqrt({q})/{}", q + 1),
        approx: n as f64 * (q as f64).sqrt() / (q + 1) as f64,
        floor: t as u64,
    })
}

/// Edge-rule shapes for random instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "shape")]
pub enum FormulaShape {
    /// Strongly algebraic: `m = 1`, edge iff `f_1 != 0`.
    Nonvanishing,
    /// Edge iff some `f_i` does not vanish.
    AnyNonvanishing,
    /// Edge iff every `f_i` vanishes.
    AllVanishing,
    Custom {
        formula: BoolFormula,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomParams {
    pub p: u64,
    pub n: usize,
    pub d: u32,
    pub m: usize,
    pub r: usize,
    pub num_vertices: usize,
    pub shape: FormulaShape,
    pub seed: u64,
}

/// Exponent vectors of `n` variables with total degree at most `d`.
fn block_exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// Uniform coefficients on every monomial under the per-block cap.
pub fn random_poly(field: FieldPrime, r: usize, n: usize, d: u32, rng: &mut Rng) -> Result<MultiPoly> {
    let block = block_exponents(n, d);
    let total = (block.len() as u64).checked_pow(r as u32).unwrap_or(u64::MAX);
    if total > 1_000_000 {
        return Err(Error::BudgetExceeded { needed: total, budget: 1_000_000 });
    }
    let mut terms = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; r];
    'outer: loop {
        let exps: Vec<u32> = idx.iter().flat_map(|&i| block[i].iter().copied()).collect();
        terms.push((rng.gen_range(0..field.modulus()) as i64, exps));
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < block.len() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(MultiPoly::new(field, r, n, d, terms)?)
}

/// Seeded random algebraic instance with symmetrized polynomials.
pub fn random_algebraic(params: &RandomParams) -> Result<AlgebraicInstance> {
    let RandomParams { p, n, d, m, r, num_vertices, ref shape, seed } = *params;
    let field = FieldPrime::new(p)?;
    if r == 0 || n == 0 || m == 0 {
        return Err(Error::BadParameters("r, n and m must be positive".into()));
    }
    let vertices = random_points(field, n, num_vertices, &mut rng_from_seed(child_seed(seed, 0)))?;
    let mut prng = rng_from_seed(child_seed(seed, 1));
    let probe = probe_tuples(num_vertices, r, &mut rng_from_seed(child_seed(seed, 2)));
    let mut polys = Vec::with_capacity(m);
    for _ in 0..m {
        let mut accepted = None;
        for _ in 0..16 {
            let f = random_poly(field, r, n, d, &mut prng)?.symmetrize();
            let alive = probe.iter().any(|t| {
                let b: Vec<&[u32]> = t.iter().map(|&i| vertices[i].as_slice()).collect();
                f.eval_blocks(&b) != 0
            });
            if !f.is_zero() && (alive || probe.is_empty()) {
                accepted = Some(f);
                break;
            }
        }
        polys.push(accepted.ok_or(Error::DegenerateInstance)?);
    }
    let (kind, formula) = match shape {
        FormulaShape::Nonvanishing => {
            if m != 1 {
                return Err(Error::BadParameters("the nonvanishing shape needs m = 1".into()));
            }
            (InstanceKind::StronglyAlgebraic, BoolFormula::nonvanishing())
        }
        FormulaShape::AnyNonvanishing => (
            InstanceKind::General,
            BoolFormula::Or((1..=m).map(|i| BoolFormula::Not(Box::new(BoolFormula::Atom(i)))).collect()),
        ),
        FormulaShape::AllVanishing => {
            (InstanceKind::General, BoolFormula::And((1..=m).map(BoolFormula::Atom).collect()))
        }
        FormulaShape::Custom { formula } => (InstanceKind::General, formula.clone()),
    };
    AlgebraicInstance::new(field, r, n, d, kind, polys, formula, vertices)
}

/// Up to 64 random tuples of distinct vertex indices.
fn probe_tuples(n: usize, r: usize, rng: &mut Rng) -> Vec<Vec<usize>> {
    if r > n {
        return Vec::new();
    }
    (0..64).map(|_| rand::seq::index::sample(rng, n, r).into_vec()).collect()
}
