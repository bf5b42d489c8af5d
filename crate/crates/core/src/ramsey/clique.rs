use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::combinatorics::{factorial, for_each_combination, for_each_distinct_tuple, permutations};
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::hypergraph::EdgeStore;
use crate::par::Exec;
use crate::rng::rng_from_seed;

/// Sampling rounds before `dense_clique` falls back to greedy deletion.
pub const MAX_CLIQUE_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DenseClique {
    pub clique: Vec<usize>,
    /// `ceil((1/4) (1/alpha)^(1/(r-1)))`
    pub bound: u64,
    pub attempts: usize,
    pub greedy_fallback: bool,
    pub below_bound: bool,
}

pub fn clique_bound(alpha: f64, r: usize) -> u64 {
    ((0.25 * (1.0 / alpha).powf(1.0 / (r as f64 - 1.0))).ceil() as u64).max(1)
}

fn undirected_arity(h: &EdgeStore, min_r: usize) -> Result<()> {
    if h.is_directed() || h.r() < min_r {
        return Err(Error::Unsupported(format!("an undirected store with r >= {min_r}")));
    }
    Ok(())
}

/// A clique of a dense `r`-uniform hypergraph by random sampling and deletion.
pub fn dense_clique(h: &EdgeStore, alpha: f64, seed: u64) -> Result<DenseClique> {
    undirected_arity(h, 2)?;
    let lower = (h.n() as f64).powi(1 - h.r() as i32);
    if !(alpha > lower && alpha < 0.5) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let density = to_f64(&h.density());
    if density < 1.0 - alpha {
        return Err(Error::DensityTooLow { density, required: 1.0 - alpha });
    }
    Ok(dense_clique_unchecked(h, alpha, seed))
}

pub(crate) fn dense_clique_unchecked(h: &EdgeStore, alpha: f64, seed: u64) -> DenseClique {
    let (n, r) = (h.n(), h.r());
    let bound = clique_bound(alpha, r);
    let p = (1.0 / (2.0 * n as f64 * alpha.powf(1.0 / (r as f64 - 1.0)))).min(1.0);
    let mut rng = rng_from_seed(seed);
    let mut best: Vec<usize> = Vec::new();
    let mut attempts = 0;
    while attempts < MAX_CLIQUE_RETRIES {
        attempts += 1;
        let sample: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < p).collect();
        let c = delete_non_edges(h, &sample);
        if c.len() > best.len() {
            best = c;
        }
        if best.len() as u64 >= bound {
            break;
        }
    }
    let mut greedy_fallback = false;
    if (best.len() as u64) < bound {
        greedy_fallback = true;
        let g = greedy_clique(h, &(0..n).collect::<Vec<_>>());
        if g.len() > best.len() {
            best = g;
        }
    }
    best.sort_unstable();
    DenseClique { below_bound: (best.len() as u64) < bound, clique: best, bound, attempts, greedy_fallback }
}

/// Drop the lowest vertex of every non-edge still fully present.
fn delete_non_edges(h: &EdgeStore, sample: &[usize]) -> Vec<usize> {
    let mut alive = vec![true; sample.len()];
    let mut t = vec![0usize; h.r()];
    for_each_combination(sample.len(), h.r(), |idx| {
        if idx.iter().all(|&i| alive[i]) {
            for (slot, &i) in t.iter_mut().zip(idx) {
                *slot = sample[i];
            }
            if !h.contains(&t) {
                alive[idx[0]] = false;
            }
        }
    });
    sample.iter().zip(&alive).filter(|(_, &a)| a).map(|(&v, _)| v).collect()
}

/// Repeatedly delete the vertex in the most non-edges until a clique remains.
fn greedy_clique(h: &EdgeStore, vs: &[usize]) -> Vec<usize> {
    let r = h.r();
    let mut cur = vs.to_vec();
    let mut t = vec![0usize; r];
    loop {
        let mut nondeg = vec![0u64; cur.len()];
        for_each_combination(cur.len(), r, |idx| {
            for (slot, &i) in t.iter_mut().zip(idx) {
                *slot = cur[i];
            }
            if !h.contains(&t) {
                for &i in idx {
                    nondeg[i] += 1;
                }
            }
        });
        let worst = (0..cur.len()).max_by(|&a, &b| nondeg[a].cmp(&nondeg[b]).then(b.cmp(&a)));
        match worst {
            Some(w) if nondeg[w] > 0 => {
                cur.remove(w);
            }
            _ => return cur,
        }
    }
}

/// Whether `v` joins the clique `clique` (every `(r-1)`-subset plus `v` is an edge).
fn fits(h: &EdgeStore, clique: &[usize], v: usize) -> bool {
    let r = h.r();
    if clique.contains(&v) {
        return false;
    }
    if clique.len() + 1 < r {
        return true;
    }
    let mut t = vec![0usize; r];
    let mut ok = true;
    for_each_combination(clique.len(), r - 1, |idx| {
        if ok {
            for (slot, &i) in t.iter_mut().zip(idx) {
                *slot = clique[i];
            }
            t[r - 1] = v;
            ok = h.contains(&t);
        }
    });
    ok
}

/// Grow `clique` to a maximal clique inside `pool`, each time adding the
/// candidate compatible with the most other candidates (lowest index on ties).
pub fn extend_clique(h: &EdgeStore, clique: &[usize], pool: &[usize]) -> Vec<usize> {
    let mut cur = clique.to_vec();
    let mut pool = pool.to_vec();
    pool.sort_unstable();
    let mut cand: Vec<usize> = pool.into_iter().filter(|&v| fits(h, &cur, v)).collect();
    while !cand.is_empty() {
        let mut best = (0usize, cand[0]);
        for &v in &cand {
            cur.push(v);
            let score = cand.iter().filter(|&&w| w != v && fits(h, &cur, w)).count();
            cur.pop();
            if score > best.0 {
                best = (score, v);
            }
        }
        let v = best.1;
        cur.push(v);
        cand.retain(|&w| w != v && fits(h, &cur, w));
    }
    cur.sort_unstable();
    cur
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MedDegree {
    pub x: Vec<usize>,
    pub neighbors: Vec<usize>,
}

/// An `(r-1)`-set `X` with `1 <= |N(X)| <= (1 - alpha/2r) M`, following the
/// induction on `r` through minimum-degree links.
pub fn med_degree_set(g: &EdgeStore, alpha: f64) -> Result<MedDegree> {
    undirected_arity(g, 1)?;
    if g.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let density = to_f64(&g.density());
    if density > 1.0 - alpha {
        return Err(Error::TooDense { density, limit: 1.0 - alpha });
    }
    let (x, neighbors) = med_degree_rec(g);
    let limit = (1.0 - alpha / (2.0 * g.r() as f64)) * g.n() as f64;
    if neighbors.is_empty() || neighbors.len() as f64 > limit {
        return Err(Error::PostconditionFailed(format!("|N(X)| = {} outside [1, {limit:.3}]", neighbors.len())));
    }
    Ok(MedDegree { x, neighbors })
}

fn med_degree_rec(g: &EdgeStore) -> (Vec<usize>, Vec<usize>) {
    let (n, r) = (g.n(), g.r());
    if r == 1 {
        return (Vec::new(), (0..n).filter(|&v| g.contains(&[v])).collect());
    }
    let u = (0..n)
        .filter_map(|v| {
            let d = g.degree(v);
            (d > 0).then_some((d, v))
        })
        .min()
        .expect("nonempty hypergraph")
        .1;
    let link = EdgeStore::from_fn(n, r - 1, false, Exec::Sequential, u64::MAX, |s| {
        if s.contains(&u) {
            return false;
        }
        let mut t = s.to_vec();
        t.push(u);
        g.contains(&t)
    })
    .expect("unbounded budget");
    let (mut x, nb) = med_degree_rec(&link);
    x.push(u);
    x.sort_unstable();
    (x, nb)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectedMedDegree {
    /// The free coordinate (0-based).
    pub coord: usize,
    pub y: Vec<usize>,
    pub neighbors: Vec<usize>,
    /// The `[G]`-empty branch was taken.
    pub escalation: bool,
}

fn insert_at(y: &[usize], pos: usize, v: usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(y.len() + 1);
    t.extend_from_slice(&y[..pos]);
    t.push(v);
    t.extend_from_slice(&y[pos..]);
    t
}

fn hat(w: &[usize], pos: usize) -> Vec<usize> {
    w.iter().enumerate().filter(|&(j, _)| j != pos).map(|(_, &v)| v).collect()
}

/// A coordinate `l` and tuple `Y` with `1 <= |N_{[r]\{l}}(Y)| <= (1 - alpha/(2r r!)) M`.
pub fn med_degree_dir(g: &EdgeStore, alpha: f64) -> Result<DirectedMedDegree> {
    if !g.is_directed() || g.r() < 2 {
        return Err(Error::Unsupported("a directed store with r >= 2".into()));
    }
    if g.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let complete = g.complete_part();
    let density = to_f64(&complete.density());
    if density > 1.0 - alpha {
        return Err(Error::TooDense { density, limit: 1.0 - alpha });
    }
    let (m, r) = (g.n(), g.r());
    let out = if complete.is_empty() {
        let beta = 1.0 / factorial(r as u64).unwrap() as f64;
        escalate(g, beta)?
    } else {
        let (x, nb) = med_degree_rec(&complete);
        let outside: Vec<usize> = (0..m).filter(|v| !x.contains(v) && nb.binary_search(v).is_err()).collect();
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for coord in 0..r {
            for perm in permutations(r - 1) {
                let y: Vec<usize> = perm.iter().map(|&j| x[j]).collect();
                let missing = outside.iter().filter(|&&u| !g.contains(&insert_at(&y, coord, u))).count();
                if best.as_ref().is_none_or(|b| missing > b.0) {
                    best = Some((missing, coord, y));
                }
            }
        }
        let (_, coord, y) = best.expect("r >= 2");
        let neighbors = g.completions_at(&y, coord);
        DirectedMedDegree { coord, y, neighbors, escalation: false }
    };
    let limit = (1.0 - alpha / (2.0 * r as f64 * factorial(r as u64).unwrap() as f64)) * m as f64;
    if out.neighbors.is_empty() || out.neighbors.len() as f64 > limit {
        return Err(Error::PostconditionFailed(format!("|N| = {} outside [1, {limit:.3}]", out.neighbors.len())));
    }
    Ok(out)
}

/// The `F_0, .., F_r` construction for dihypergraphs with empty `[G]`: it
/// stops at the first neighbourhood of size at most `(1 - beta) M`.
fn escalate(g: &EdgeStore, beta: f64) -> Result<DirectedMedDegree> {
    let (m, r) = (g.n(), g.r());
    let limit = (1.0 - beta) * m as f64;
    let w0 = g.edges().into_iter().next().ok_or(Error::EmptyHypergraph)?;
    let mut f = vec![w0.clone()];
    let mut used = w0.clone();
    for _ in 0..r {
        let mut common = vec![!0u64; bits::words_for(m)];
        let mut slots = Vec::new();
        for w in &f {
            for coord in (0..r).rev() {
                if w[coord] != w0[coord] {
                    continue;
                }
                let y = hat(w, coord);
                let neighbors = g.completions_at(&y, coord);
                if neighbors.len() as f64 <= limit {
                    return Ok(DirectedMedDegree { coord, y, neighbors, escalation: true });
                }
                bits::and_assign(&mut common, &bits::from_indices(m, neighbors));
                slots.push((w.clone(), coord));
            }
        }
        let x = bits::ones(&common)
            .take_while(|&v| v < m)
            .find(|v| !used.contains(v))
            .ok_or_else(|| Error::InternalInconsistency("no fresh common completion".into()))?;
        used.push(x);
        f = slots
            .into_iter()
            .map(|(mut w, coord)| {
                w[coord] = x;
                w
            })
            .collect();
        f.sort_unstable();
        f.dedup();
    }
    Err(Error::InternalInconsistency("all orientations of an r-set are edges while [G] is empty".into()))
}

/// The `(l, Y)` with the smallest nonempty neighbourhood, lowest first.
pub(crate) fn smallest_directed_neighborhood(g: &EdgeStore) -> Option<DirectedMedDegree> {
    let r = g.r();
    let mut best: Option<DirectedMedDegree> = None;
    for coord in 0..r {
        for_each_distinct_tuple(g.n(), r - 1, |y| {
            let neighbors = g.completions_at(y, coord);
            if !neighbors.is_empty() && best.as_ref().is_none_or(|b| neighbors.len() < b.neighbors.len()) {
                best = Some(DirectedMedDegree { coord, y: y.to_vec(), neighbors, escalation: false });
            }
        });
    }
    best
}

/// `med_degree_dir` when its hypotheses hold, else the exhaustive minimum.
pub(crate) fn med_degree_dir_relaxed(g: &EdgeStore, alpha: f64) -> (DirectedMedDegree, bool) {
    if g.n() >= 100 * g.r() {
        if let Ok(d) = med_degree_dir(g, alpha) {
            return (d, true);
        }
    }
    (smallest_directed_neighborhood(g).expect("nonempty dihypergraph"), false)
}
