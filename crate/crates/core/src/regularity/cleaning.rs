use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::hypergraph::EdgeStore;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SparseMedDegree {
    /// Class (0-based) whose vertices complete `x`.
    pub ell: usize,
    /// One vertex from each other class, in class order.
    pub x: Vec<usize>,
    pub neighbors: Vec<usize>,
}

/// Edges of `g` with exactly one vertex in each class, listed class by class.
fn cross_edges(g: &EdgeStore, classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let r = classes.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; r];
    if classes.iter().any(|c| c.is_empty()) {
        return out;
    }
    let mut t = vec![0usize; r];
    loop {
        for (slot, (c, &i)) in t.iter_mut().zip(classes.iter().zip(&idx)) {
            *slot = c[i];
        }
        let mut s = t.clone();
        s.sort_unstable();
        if s.windows(2).all(|w| w[0] != w[1]) && g.contains(&s) {
            out.push(t.clone());
        }
        let mut a = r;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < classes[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// `(ell, X)` with `1 <= |N(X)| <= eps^{1/r} |W_ell|` for a nonempty
/// `r`-partite hypergraph of density at most `eps`, by the induction that
/// fixes a minimum-degree vertex of a well-populated class and recurses on
/// its link.
pub fn med_degree_sparse(g: &EdgeStore, classes: &[Vec<usize>], eps: f64) -> Result<SparseMedDegree> {
    let r = g.r();
    if classes.len() != r || g.is_directed() {
        return Err(Error::PartCountMismatch { expected: r, got: classes.len() });
    }
    let edges = cross_edges(g, classes);
    if edges.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let total: f64 = classes.iter().map(|c| c.len() as f64).product();
    let density = edges.len() as f64 / total;
    if density > eps {
        return Err(Error::TooDense { density, limit: eps });
    }
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    // live class positions, and the edges restricted to them
    let mut live: Vec<usize> = (0..r).collect();
    let mut cur: Vec<Vec<usize>> = edges;
    let mut x: Vec<(usize, usize)> = Vec::new();
    while live.len() > 1 {
        let k = live.len();
        let pos = (0..k)
            .max_by(|&a, &b| {
                let frac = |j: usize| {
                    let used: BTreeSet<usize> = cur.iter().map(|t| t[j]).collect();
                    used.len() as f64 / sizes[live[j]] as f64
                };
                frac(a).total_cmp(&frac(b)).then(b.cmp(&a))
            })
            .expect("at least two live classes");
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for t in &cur {
            *degree.entry(t[pos]).or_default() += 1;
        }
        let (&v, _) = degree.iter().min_by_key(|(&v, &d)| (d, v)).expect("edges remain");
        x.push((live[pos], v));
        cur = cur
            .into_iter()
            .filter(|t| t[pos] == v)
            .map(|mut t| {
                t.remove(pos);
                t
            })
            .collect();
        live.remove(pos);
    }
    let ell = live[0];
    let mut neighbors: Vec<usize> = cur.into_iter().map(|t| t[0]).collect();
    neighbors.sort_unstable();
    let limit = eps.powf(1.0 / r as f64) * sizes[ell] as f64;
    if neighbors.is_empty() || neighbors.len() as f64 > limit * (1.0 + 1e-9) {
        return Err(Error::PostconditionFailed(format!("|N(X)| = {} outside [1, {limit:.3}]", neighbors.len())));
    }
    x.sort_unstable();
    Ok(SparseMedDegree { ell, x: x.into_iter().map(|(_, v)| v).collect(), neighbors })
}

/// `c(r, s)` of the cleaning recursion: `c(1, s) = 1`, `c(2, s) = 2s`, and
/// `c(r, s) = c(r-1, s) (6rs)^{1/(r-1)!} + s`.
pub fn cleaning_constant(r: usize, s: u64) -> f64 {
    match r {
        0 | 1 => 1.0,
        2 => 2.0 * s as f64,
        _ => {
            let fact = factorial(r as u64 - 1).unwrap_or(u64::MAX) as f64;
            cleaning_constant(r - 1, s) * (6.0 * r as f64 * s as f64).powf(1.0 / fact) + s as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cleaned {
    pub parts: Vec<Vec<usize>>,
    pub removed: usize,
    /// `1 - c(r, s) eps0^{1/r!}`: the fraction of each part the argument keeps.
    pub target_fraction: f64,
    /// Parts that kept less than `target_fraction` of their vertices.
    pub shortfall: Vec<usize>,
}

struct Level<'a> {
    h: &'a EdgeStore,
    part_of: Vec<Option<usize>>,
}

impl Level<'_> {
    fn part_tuple(&self, e: &[usize]) -> Option<Vec<usize>> {
        let mut ps = Vec::with_capacity(e.len());
        for &v in e {
            ps.push(self.part_of[v]?);
        }
        let mut sorted = ps.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1]).then_some(ps)
    }

    /// `z` with `Z + z` an edge, among `pool`.
    fn completions(&self, z: &[usize], pool: &[usize]) -> Vec<usize> {
        pool.iter()
            .copied()
            .filter(|&w| {
                let mut s = z.to_vec();
                s.push(w);
                s.sort_unstable();
                self.h.contains(&s)
            })
            .collect()
    }
}

fn clean_rec(
    h: &EdgeStore,
    parts: &[Vec<usize>],
    sparse: Option<&BTreeSet<Vec<usize>>>,
    eps0: f64,
    s: u64,
) -> Vec<Vec<usize>> {
    let r = h.r();
    let n = h.n();
    let mut part_of = vec![None; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            part_of[v] = Some(i);
        }
    }
    let lv = Level { h, part_of };
    let relevant: Vec<Vec<usize>> = h
        .edges()
        .into_iter()
        .filter(|e| match lv.part_tuple(e) {
            None => false,
            Some(mut ps) => {
                ps.sort_unstable();
                sparse.is_none_or(|set| set.contains(&ps))
            }
        })
        .collect();
    if r == 1 {
        let hit: BTreeSet<usize> = relevant.iter().map(|e| e[0]).collect();
        return parts.iter().map(|p| p.iter().copied().filter(|v| !hit.contains(v)).collect()).collect();
    }
    let eps1 = eps0.powf(1.0 / r as f64);
    // (Z', k) pairs: an edge across a sparse tuple minus its vertex in part k
    let mut pairs: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    for e in &relevant {
        for j in 0..r {
            let mut z = e.clone();
            let v = z.remove(j);
            pairs.insert((z, lv.part_of[v].expect("relevant edges lie in parts")));
        }
    }
    let mut t_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); parts.len()];
    let mut heavy: Vec<(Vec<usize>, usize, Vec<usize>)> = Vec::new();
    for (z, k) in pairs {
        let nbr = lv.completions(&z, &parts[k]);
        if nbr.len() as f64 <= eps1 * parts[k].len() as f64 {
            t_sets[k].extend(nbr);
        } else {
            heavy.push((z, k, nbr));
        }
    }
    let trimmed: Vec<Vec<usize>> =
        parts.iter().zip(&t_sets).map(|(p, t)| p.iter().copied().filter(|v| !t.contains(v)).collect()).collect();
    // F_{X,k}: heavy Z that keep a neighbour in U'_k
    let f: Vec<Vec<usize>> = heavy
        .into_iter()
        .filter(|(_, k, nbr)| nbr.iter().any(|v| !t_sets[*k].contains(v)))
        .map(|(z, _, _)| z)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if r == 2 {
        let fx: BTreeSet<usize> = f.iter().map(|z| z[0]).collect();
        return trimmed.into_iter().map(|p| p.into_iter().filter(|v| !fx.contains(v)).collect()).collect();
    }
    let h_next = EdgeStore::from_edges(n, r - 1, false, &f).expect("F lists sorted cross-part tuples");
    let eps_next = 6.0 * r as f64 * s as f64 * eps1;
    clean_rec(&h_next, &trimmed, None, eps_next, s)
}

/// Trim `parts` so that every tuple of part indices in `sparse` spans no
/// edge. The zero-edge property is rechecked on the trimmed parts and is a
/// hard postcondition; keeping `1 - c(r, s) eps0^{1/r!}` of each part is the
/// target when `h` has no focused staircase of length `s`, and misses are
/// reported.
pub fn cleaning(h: &EdgeStore, parts: &[Vec<usize>], sparse: &[Vec<usize>], eps0: f64, s: u64) -> Result<Cleaned> {
    let r = h.r();
    if h.is_directed() {
        return Err(Error::Unsupported("an undirected store".into()));
    }
    let mut seen = vec![false; h.n()];
    for p in parts {
        for &v in p {
            if v >= h.n() {
                return Err(Error::IndexOutOfRange { index: v, n: h.n() });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::OverlappingParts);
            }
        }
    }
    let mut set = BTreeSet::new();
    for t in sparse {
        let mut t = t.clone();
        t.sort_unstable();
        if t.len() != r || t.windows(2).any(|w| w[0] == w[1]) || t.iter().any(|&i| i >= parts.len()) {
            return Err(Error::BadParameters(format!("sparse tuple {t:?} is not an r-set of part indices")));
        }
        set.insert(t);
    }
    let out = clean_rec(h, parts, Some(&set), eps0, s);
    for t in &set {
        let chosen: Vec<Vec<usize>> = t.iter().map(|&i| out[i].clone()).collect();
        if chosen.iter().all(|p| !p.is_empty()) && h.cross_count(&chosen) != 0 {
            return Err(Error::PostconditionFailed(format!("tuple {t:?} still spans edges after cleaning")));
        }
    }
    let fact = factorial(r as u64).unwrap_or(u64::MAX) as f64;
    let target_fraction = 1.0 - cleaning_constant(r, s) * eps0.powf(1.0 / fact);
    let removed = parts.iter().zip(&out).map(|(a, b)| a.len() - b.len()).sum();
    let shortfall = parts
        .iter()
        .zip(&out)
        .enumerate()
        .filter(|(_, (a, b))| (b.len() as f64) < target_fraction * a.len() as f64)
        .map(|(i, _)| i)
        .collect();
    Ok(Cleaned { parts: out, removed, target_fraction, shortfall })
}

/// Tuples of parts whose density is below `eps0`.
pub(crate) fn sparse_tuples(classes: &[super::ClassifiedTuple], eps0: f64) -> Vec<Vec<usize>> {
    classes
        .iter()
        .filter(|c| c.size_product > 0 && (c.edges as f64) < eps0 * c.size_product as f64)
        .map(|c| c.parts.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::paley;
    use crate::exact::q;
    use crate::par::Exec;
    use crate::patterns::find_focused_m;
    use crate::regularity::tuple_classes;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn equitable(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); k];
        for v in 0..n {
            parts[v * k / n].push(v);
        }
        parts
    }

    // recount straight from the store, one tuple at a time
    fn recount(h: &EdgeStore, parts: &[Vec<usize>], t: &[usize]) -> u64 {
        let mut c = 0;
        if t.len() == 2 {
            for &a in &parts[t[0]] {
                for &b in &parts[t[1]] {
                    c += h.contains(&[a.min(b), a.max(b)]) as u64;
                }
            }
        } else {
            for &a in &parts[t[0]] {
                for &b in &parts[t[1]] {
                    for &d in &parts[t[2]] {
                        let mut s = [a, b, d];
                        s.sort_unstable();
                        c += h.contains(&s) as u64;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn med_degree_single_edge() {
        let g = EdgeStore::from_edges(20, 2, false, &[vec![0, 10]]).unwrap();
        let w: Vec<Vec<usize>> = vec![(0..10).collect(), (10..20).collect()];
        let m = med_degree_sparse(&g, &w, 0.01).unwrap();
        assert_eq!(m.neighbors.len(), 1);
        assert!(m.x == vec![0] || m.x == vec![10]);
        assert!(matches!(med_degree_sparse(&EdgeStore::empty(20, 2, false), &w, 0.01), Err(Error::EmptyHypergraph)));
        assert!(matches!(med_degree_sparse(&g, &w, 0.001), Err(Error::TooDense { .. })));
    }

    #[test]
    fn med_degree_r1_base() {
        let g = EdgeStore::from_edges(10, 1, false, &[vec![2]]).unwrap();
        let m = med_degree_sparse(&g, &[(0..10).collect()], 0.1).unwrap();
        assert_eq!((m.ell, m.x.clone(), m.neighbors.clone()), (0, vec![], vec![2]));
    }

    #[test]
    fn med_degree_random_tripartite() {
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let mut edges = Vec::new();
            for a in 0..12 {
                for b in 12..24 {
                    for c in 24..36 {
                        if rng.gen_bool(0.04) {
                            edges.push(vec![a, b, c]);
                        }
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = EdgeStore::from_edges(36, 3, false, &edges).unwrap();
            let w: Vec<Vec<usize>> = vec![(0..12).collect(), (12..24).collect(), (24..36).collect()];
            let density = edges.len() as f64 / 1728.0;
            let eps = density.max(0.01);
            let m = med_degree_sparse(&g, &w, eps).unwrap();
            assert!(!m.neighbors.is_empty());
            assert!(m.neighbors.len() as f64 <= eps.powf(1.0 / 3.0) * 12.0 + 1e-9);
            for &z in &m.neighbors {
                let mut t = m.x.clone();
                t.push(z);
                t.sort_unstable();
                assert!(g.contains(&t));
                assert!(w[m.ell].contains(&z));
            }
        }
    }

    #[test]
    fn constants() {
        assert_eq!(cleaning_constant(2, 5), 10.0);
        let c3 = cleaning_constant(3, 5);
        assert!((c3 - (10.0 * 90f64.sqrt() + 5.0)).abs() < 1e-9);
    }

    #[test]
    fn nothing_sparse_leaves_parts() {
        let h = paley(13).unwrap().materialize(u64::MAX, Exec::Sequential).unwrap();
        let parts = equitable(13, 3);
        let c = cleaning(&h, &parts, &[], 0.1, 3).unwrap();
        assert_eq!(c.parts, parts);
        assert_eq!(c.removed, 0);
    }

    #[test]
    fn single_cross_edge_is_removed() {
        let h = EdgeStore::from_edges(20, 2, false, &[vec![3, 15]]).unwrap();
        let parts: Vec<Vec<usize>> = vec![(0..10).collect(), (10..20).collect()];
        let c = cleaning(&h, &parts, &[vec![0, 1]], 0.01, 2).unwrap();
        // both sides see a light link, so both endpoints go
        assert_eq!(c.removed, 2);
        assert!(!c.parts[0].contains(&3) && !c.parts[1].contains(&15));
        assert_eq!(h.cross_count(&c.parts), 0);
    }

    #[test]
    fn paley29_cleaning_recounts_to_zero() {
        let inst = paley(29).unwrap();
        let h = inst.materialize(u64::MAX, Exec::Sequential).unwrap();
        let parts = equitable(29, 10);
        let classes = tuple_classes(&h, &parts, &q(1, 10), false, Exec::Sequential);
        let sparse = sparse_tuples(&classes, 0.1);
        let s = 16;
        let c = cleaning(&h, &parts, &sparse, 0.1, s).unwrap();
        for t in &sparse {
            assert_eq!(recount(&h, &c.parts, t), 0);
        }
        for (a, b) in parts.iter().zip(&c.parts) {
            assert!(b.iter().all(|v| a.contains(v)));
        }
        assert!(find_focused_m(&h, &parts, s as usize, 5_000_000).is_exhausted());
    }

    #[test]
    fn dense_threshold_cleans_many_tuples() {
        let h = paley(29).unwrap().materialize(u64::MAX, Exec::Sequential).unwrap();
        let parts = equitable(29, 6);
        let all: Vec<Vec<usize>> = (0..6).flat_map(|a| (a + 1..6).map(move |b| vec![a, b])).collect();
        let c = cleaning(&h, &parts, &all, 0.6, 16).unwrap();
        for t in &all {
            assert_eq!(recount(&h, &c.parts, t), 0);
        }
        assert!(c.removed > 0);
        assert!(c.target_fraction < 0.0);
        assert!(c.shortfall.is_empty());
    }

    #[test]
    fn three_uniform_cleaning() {
        let mut rng = rng_from_seed(11);
        let mut edges = Vec::new();
        for a in 0..8 {
            for b in 8..16 {
                for d in 16..24 {
                    if rng.gen_bool(0.05) {
                        edges.push(vec![a, b, d]);
                    }
                }
            }
        }
        let h = EdgeStore::from_edges(24, 3, false, &edges).unwrap();
        let parts: Vec<Vec<usize>> = vec![(0..8).collect(), (8..16).collect(), (16..24).collect()];
        let c = cleaning(&h, &parts, &[vec![0, 1, 2]], 0.05, 4).unwrap();
        assert_eq!(recount(&h, &c.parts, &[0, 1, 2]), 0);
    }
}
