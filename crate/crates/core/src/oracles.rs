//! Exact brute-force ground truth and witness verification.
//!
//! The searches are single-threaded and count nodes against a budget, so a
//! run either finishes with the exact optimum or fails the same way every
//! time.

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::combinatorics::{binomial, for_each_combination};
use crate::error::{Error, Result};
use crate::exact::q;
use crate::hypergraph::{AlgebraicInstance, EdgeStore};
use crate::patterns::{MWitness, NWitness};
use crate::ramsey::{Direction, RamseyResult, ResultKind};
use crate::regularity::{HomogeneityReport, Partition};

pub const ORACLE_BUDGET: u64 = 50_000_000;
pub const MAX_BITSET_CLIQUE_N: usize = 64;
pub const MAX_GENERIC_CLIQUE_N: usize = 30;
pub const MAX_BICLIQUE_N: usize = 36;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Optimum {
    pub size: usize,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Biclique {
    pub t: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

struct Nodes {
    spent: u64,
    budget: u64,
}

impl Nodes {
    fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.budget {
            return Err(Error::BudgetExceeded { needed: self.spent, budget: self.budget });
        }
        Ok(())
    }
}

fn too_large(n: usize, limit: usize) -> Error {
    Error::BudgetExceeded { needed: n as u64, budget: limit as u64 }
}

/// Greedy colouring of `p`; the number of colours bounds any clique inside it.
fn colour_bound(rows: &[Vec<u64>], p: &[u64]) -> usize {
    let mut left = p.to_vec();
    let mut colours = 0;
    while !bits::is_empty(&left) {
        colours += 1;
        let mut avail = left.clone();
        while let Some(v) = bits::first_one(&avail) {
            bits::clear(&mut left, v);
            bits::clear(&mut avail, v);
            bits::and_not_assign(&mut avail, &rows[v]);
        }
    }
    colours
}

struct BitClique<'a> {
    rows: &'a [Vec<u64>],
    best: Vec<usize>,
    nodes: Nodes,
}

impl BitClique<'_> {
    fn expand(&mut self, c: &mut Vec<usize>, mut p: Vec<u64>) -> Result<()> {
        self.nodes.tick()?;
        if bits::is_empty(&p) {
            if c.len() > self.best.len() {
                self.best = c.clone();
            }
            return Ok(());
        }
        if c.len() + colour_bound(self.rows, &p) <= self.best.len() {
            return Ok(());
        }
        while let Some(v) = bits::first_one(&p) {
            if c.len() + bits::count(&p) <= self.best.len() {
                return Ok(());
            }
            let mut next = p.clone();
            bits::and_assign(&mut next, &self.rows[v]);
            c.push(v);
            self.expand(c, next)?;
            c.pop();
            bits::clear(&mut p, v);
        }
        Ok(())
    }
}

fn graph_rows(h: &EdgeStore) -> Vec<Vec<u64>> {
    (0..h.n()).map(|v| h.row(&[v]).expect("graphs keep bitsets").to_vec()).collect()
}

/// Include-first search over vertices in the given order. Works for any `r`.
fn ordered_clique(h: &EdgeStore, order: &[usize], budget: u64) -> Result<Vec<usize>> {
    let r = h.r();
    let mut nodes = Nodes { spent: 0, budget };
    let mut best: Vec<usize> = Vec::new();
    // whether `c + w` keeps every r-subset an edge, given `c` already does
    let fits = |c: &[usize], w: usize| -> bool {
        if c.len() + 1 < r {
            return true;
        }
        let mut ok = true;
        let mut t = vec![0usize; r];
        for_each_combination(c.len(), r - 1, |idx| {
            if ok {
                for (slot, &i) in t.iter_mut().zip(idx) {
                    *slot = c[i];
                }
                t[r - 1] = w;
                let mut s = t.clone();
                s.sort_unstable();
                ok = h.contains(&s);
            }
        });
        ok
    };
    fn rec(
        c: &mut Vec<usize>,
        cand: &[usize],
        best: &mut Vec<usize>,
        nodes: &mut Nodes,
        fits: &dyn Fn(&[usize], usize) -> bool,
    ) -> Result<()> {
        nodes.tick()?;
        if c.len() > best.len() {
            *best = c.clone();
        }
        for (i, &v) in cand.iter().enumerate() {
            if c.len() + cand.len() - i <= best.len() {
                return Ok(());
            }
            c.push(v);
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| fits(c, w)).collect();
            rec(c, &next, best, nodes, fits)?;
            c.pop();
        }
        Ok(())
    }
    let mut c = Vec::new();
    rec(&mut c, order, &mut best, &mut nodes, &fits)?;
    best.sort_unstable();
    Ok(best)
}

/// Maximum clique; the witness is the lexicographically first optimum.
pub fn max_clique_exact(h: &EdgeStore, budget: u64) -> Result<Optimum> {
    if h.is_directed() {
        return Err(Error::Unsupported("an undirected store".into()));
    }
    let n = h.n();
    if h.r() == 1 {
        let witness: Vec<usize> = (0..n).filter(|&v| h.contains(&[v])).collect();
        return Ok(Optimum { size: witness.len(), witness });
    }
    if h.r() == 2 {
        if n > MAX_BITSET_CLIQUE_N {
            return Err(too_large(n, MAX_BITSET_CLIQUE_N));
        }
        let rows = graph_rows(h);
        let mut s = BitClique { rows: &rows, best: Vec::new(), nodes: Nodes { spent: 0, budget } };
        s.expand(&mut Vec::new(), bits::from_indices(n, 0..n))?;
        return Ok(Optimum { size: s.best.len(), witness: s.best });
    }
    if n > MAX_GENERIC_CLIQUE_N {
        return Err(too_large(n, MAX_GENERIC_CLIQUE_N));
    }
    let order: Vec<usize> = (0..n).collect();
    let witness = ordered_clique(h, &order, budget)?;
    Ok(Optimum { size: witness.len(), witness })
}

/// [`max_clique_exact`] confirmed by a second search that visits vertices in
/// descending order without the colouring bound.
pub fn max_clique_checked(h: &EdgeStore, budget: u64) -> Result<Optimum> {
    let first = max_clique_exact(h, budget)?;
    if h.r() == 1 {
        return Ok(first);
    }
    let order: Vec<usize> = (0..h.n()).rev().collect();
    let second = ordered_clique(h, &order, budget)?;
    if second.len() != first.size {
        return Err(Error::InternalInconsistency(format!(
            "clique searches disagree: {} vs {}",
            first.size,
            second.len()
        )));
    }
    Ok(first)
}

/// Maximum independent set, as a maximum clique of the complement.
pub fn max_independent_exact(h: &EdgeStore, budget: u64) -> Result<Optimum> {
    if h.is_directed() {
        return Err(Error::Unsupported("an undirected store".into()));
    }
    if h.r() >= 3 && h.n() > MAX_GENERIC_CLIQUE_N {
        return Err(too_large(h.n(), MAX_GENERIC_CLIQUE_N));
    }
    max_clique_exact(&h.complement(), budget)
}

/// [`max_independent_exact`] with the dual-order cross-check.
pub fn max_independent_checked(h: &EdgeStore, budget: u64) -> Result<Optimum> {
    if h.r() >= 3 && h.n() > MAX_GENERIC_CLIQUE_N {
        return Err(too_large(h.n(), MAX_GENERIC_CLIQUE_N));
    }
    max_clique_checked(&h.complement(), budget)
}

/// Largest `t` with disjoint `A`, `B` of size `t` and every pair across joined.
pub fn max_balanced_biclique_exact(g: &EdgeStore, budget: u64) -> Result<Biclique> {
    if g.r() != 2 || g.is_directed() {
        return Err(Error::Unsupported("an undirected graph".into()));
    }
    let n = g.n();
    if n > MAX_BICLIQUE_N {
        return Err(too_large(n, MAX_BICLIQUE_N));
    }
    let rows = graph_rows(g);
    let mut best = Biclique { t: 0, a: Vec::new(), b: Vec::new() };
    let mut nodes = Nodes { spent: 0, budget };
    // `a` ascending; `cn` is the common neighbourhood of `a`
    fn rec(
        rows: &[Vec<u64>],
        a: &mut Vec<usize>,
        cn: &[u64],
        start: usize,
        best: &mut Biclique,
        nodes: &mut Nodes,
    ) -> Result<()> {
        nodes.tick()?;
        let t = a.len().min(bits::count(cn));
        if t > best.t {
            *best = Biclique { t, a: a[..t].to_vec(), b: bits::ones(cn).take(t).collect() };
        }
        for v in start..rows.len() {
            let mut next = cn.to_vec();
            bits::and_assign(&mut next, &rows[v]);
            if bits::count(&next) <= best.t {
                continue;
            }
            a.push(v);
            rec(rows, a, &next, v + 1, best, nodes)?;
            a.pop();
        }
        Ok(())
    }
    rec(&rows, &mut Vec::new(), &bits::from_indices(n, 0..n), 0, &mut best, &mut nodes)?;
    Ok(best)
}

/// A claim about an instance that [`verify_witness`] can re-derive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum Witness {
    Clique {
        vertices: Vec<usize>,
    },
    IndependentSet {
        vertices: Vec<usize>,
    },
    Biclique {
        a: Vec<usize>,
        b: Vec<usize>,
    },
    /// No arc of `H_poly` (0-based) runs against `direction` between `a` and `b`.
    WellDirected {
        poly: usize,
        a: Vec<usize>,
        b: Vec<usize>,
        direction: Direction,
    },
    PartitionReport {
        partition: Partition,
        report: HomogeneityReport,
    },
    /// A staircase in the instance (`poly: None`) or in the directed `H_poly`.
    MPattern {
        poly: Option<usize>,
        witness: MWitness,
    },
    NPattern {
        witness: NWitness,
    },
}

impl Witness {
    /// The clique or independent-set claim of a graph/hypergraph extraction.
    pub fn from_result(res: &RamseyResult) -> Option<Witness> {
        let vertices = res.vertices.clone();
        match res.kind {
            ResultKind::Clique => Some(Witness::Clique { vertices }),
            ResultKind::IndependentSet => Some(Witness::IndependentSet { vertices }),
            ResultKind::MonochromaticClique => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Vec<usize>>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { ok: true, detail: None, counterexample: None }
    }
    fn fail(detail: impl Into<String>, t: Option<Vec<usize>>) -> Self {
        Verdict { ok: false, detail: Some(detail.into()), counterexample: t }
    }
}

fn edge(inst: &AlgebraicInstance, t: &[usize]) -> bool {
    inst.edge_query(t).unwrap_or(false)
}

fn index_problem(inst: &AlgebraicInstance, vs: &[usize]) -> Option<Verdict> {
    let n = inst.num_vertices();
    if let Some(&v) = vs.iter().find(|&&v| v >= n) {
        return Some(Verdict::fail(format!("vertex {v} out of range"), Some(vec![v])));
    }
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Some(Verdict::fail(format!("vertex {} repeated", w[0]), Some(vec![w[0]])));
    }
    None
}

fn uniform(inst: &AlgebraicInstance, vs: &[usize], want: bool) -> Verdict {
    if let Some(v) = index_problem(inst, vs) {
        return v;
    }
    let r = inst.r();
    let mut bad = None;
    let mut t = vec![0usize; r];
    for_each_combination(vs.len(), r, |idx| {
        if bad.is_none() {
            for (slot, &i) in t.iter_mut().zip(idx) {
                *slot = vs[i];
            }
            if edge(inst, &t) != want {
                bad = Some(t.clone());
            }
        }
    });
    match bad {
        None => Verdict::pass(),
        Some(t) => Verdict::fail(
            if want { "non-edge inside claimed clique" } else { "edge inside claimed independent set" },
            Some(t),
        ),
    }
}

fn check_partition(inst: &AlgebraicInstance, partition: &Partition, report: &HomogeneityReport) -> Verdict {
    let n = inst.num_vertices();
    let r = inst.r();
    if partition.assignment.len() != n || partition.assignment.iter().any(|&i| i >= partition.k) {
        return Verdict::fail("assignment does not cover the vertices with K parts", None);
    }
    let parts = partition.parts();
    if parts.iter().any(|p| p.is_empty()) {
        return Verdict::fail("empty part", None);
    }
    let (lo, hi) = (parts.iter().map(Vec::len).min().unwrap_or(0), parts.iter().map(Vec::len).max().unwrap_or(0));
    if partition.equitable != (hi - lo <= 1) {
        return Verdict::fail(format!("equitable flag wrong: sizes range {lo}..={hi}"), None);
    }
    if report.k != partition.k {
        return Verdict::fail("report and partition disagree on K", None);
    }
    let eps = report.epsilon;
    let one = q(1, 1);
    let (mut empty, mut sparse, mut dense, mut bad, mut total) = (0u64, 0u64, 0u64, 0u64, 0u64);
    let mut t = vec![0usize; r];
    for_each_combination(partition.k, r, |pick| {
        total += 1;
        let chosen: Vec<&Vec<usize>> = pick.iter().map(|&i| &parts[i]).collect();
        let mut count = 0u64;
        let mut idx = vec![0usize; r];
        'outer: loop {
            for (slot, (p, &i)) in t.iter_mut().zip(chosen.iter().zip(&idx)) {
                *slot = p[i];
            }
            if edge(inst, &t) {
                count += 1;
            }
            let mut a = r;
            loop {
                if a == 0 {
                    break 'outer;
                }
                a -= 1;
                idx[a] += 1;
                if idx[a] < chosen[a].len() {
                    break;
                }
                idx[a] = 0;
            }
        }
        let prod: u64 = chosen.iter().map(|p| p.len() as u64).product();
        if count == 0 {
            empty += 1;
        } else if q(count, prod) >= one - eps {
            dense += 1;
        } else if report.weak && q(count, prod) <= eps {
            sparse += 1;
        } else {
            bad += 1;
        }
    });
    if binomial(partition.k as u64, r as u64) != Some(total) || report.tuples_total != total {
        return Verdict::fail(format!("tuple total {} but recount {total}", report.tuples_total), None);
    }
    if (report.tuples_empty, report.tuples_sparse, report.tuples_dense, report.tuples_bad)
        != (empty, sparse, dense, bad)
    {
        return Verdict::fail(
            format!(
                "report says {}/{}/{}/{} empty/sparse/dense/bad, recount {empty}/{sparse}/{dense}/{bad}",
                report.tuples_empty, report.tuples_sparse, report.tuples_dense, report.tuples_bad
            ),
            None,
        );
    }
    if total > 0 && report.bad_fraction != q(bad, total) {
        return Verdict::fail("bad fraction does not match the counts", None);
    }
    let k_ok = (8 * *eps.denom() as u128) < partition.k as u128 * *eps.numer() as u128;
    if report.k_bounds_ok != k_ok {
        return Verdict::fail("K bound flag is wrong", None);
    }
    Verdict::pass()
}

/// Re-derive a witness from raw `edge_query` calls; never consults a store.
pub fn verify_witness(inst: &AlgebraicInstance, w: &Witness) -> Verdict {
    match w {
        Witness::Clique { vertices } => uniform(inst, vertices, true),
        Witness::IndependentSet { vertices } => uniform(inst, vertices, false),
        Witness::Biclique { a, b } => {
            if inst.r() != 2 {
                return Verdict::fail("bi-cliques need a graph", None);
            }
            let all: Vec<usize> = a.iter().chain(b).copied().collect();
            if let Some(v) = index_problem(inst, &all) {
                return v;
            }
            if a.len() != b.len() {
                return Verdict::fail("sides differ in size", None);
            }
            for &x in a {
                for &y in b {
                    if !edge(inst, &[x, y]) {
                        return Verdict::fail("missing edge across the bi-clique", Some(vec![x, y]));
                    }
                }
            }
            Verdict::pass()
        }
        Witness::WellDirected { poly, a, b, direction } => {
            if inst.r() != 2 || *poly >= inst.m() {
                return Verdict::fail("well-directed pairs need a graph and a valid polynomial index", None);
            }
            let all: Vec<usize> = a.iter().chain(b).copied().collect();
            if let Some(v) = index_problem(inst, &all) {
                return v;
            }
            if a.is_empty() || b.is_empty() {
                return Verdict::fail("empty side", None);
            }
            for &x in a {
                for &y in b {
                    let t = match direction {
                        Direction::AToB => [y, x],
                        Direction::BToA => [x, y],
                    };
                    if inst.di_edge(*poly, &t) {
                        return Verdict::fail("arc against the claimed direction", Some(t.to_vec()));
                    }
                }
            }
            Verdict::pass()
        }
        Witness::PartitionReport { partition, report } => check_partition(inst, partition, report),
        Witness::MPattern { poly, witness } => {
            let all: Vec<usize> = witness.rows.iter().flat_map(|row| row.u.iter().copied().chain([row.z])).collect();
            if let Some(&v) = all.iter().find(|&&v| v >= inst.num_vertices()) {
                return Verdict::fail(format!("vertex {v} out of range"), Some(vec![v]));
            }
            if witness.rows.iter().any(|row| row.u.len() + 1 != inst.r()) || witness.k >= inst.r() {
                return Verdict::fail("rows do not match the arity", None);
            }
            let res = match poly {
                None => witness.check(|t| edge(inst, t)),
                Some(i) if *i < inst.m() => witness.check(|t| inst.di_edge(*i, t)),
                Some(_) => return Verdict::fail("polynomial index out of range", None),
            };
            match res {
                Ok(()) => Verdict::pass(),
                Err(t) => Verdict::fail("staircase tuple has the wrong edge status", Some(t)),
            }
        }
        Witness::NPattern { witness } => {
            let all: Vec<usize> = witness.rows.iter().flatten().copied().collect();
            if let Some(&v) = all.iter().find(|&&v| v >= inst.num_vertices()) {
                return Verdict::fail(format!("vertex {v} out of range"), Some(vec![v]));
            }
            if witness.rows.iter().any(|row| row.len() != inst.r()) {
                return Verdict::fail("rows do not match the arity", None);
            }
            match witness.check(|t| edge(inst, t)) {
                Ok(()) => Verdict::pass(),
                Err(t) => Verdict::fail("transversal tuple has the wrong edge status", Some(t)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::paley;
    use crate::par::Exec;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> EdgeStore {
        let list: Vec<Vec<usize>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
        EdgeStore::from_edges(n, 2, false, &list).unwrap()
    }

    fn random_graph(n: usize, p: f64, seed: u64) -> EdgeStore {
        let mut rng = rng_from_seed(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        graph(n, &edges)
    }

    // all subsets, largest first; independent of both searches above
    fn naive_clique(h: &EdgeStore) -> usize {
        let n = h.n();
        (0u32..1 << n)
            .filter(|&mask| {
                let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let mut ok = true;
                for_each_combination(vs.len(), h.r(), |idx| {
                    let t: Vec<usize> = idx.iter().map(|&i| vs[i]).collect();
                    ok &= h.contains(&t);
                });
                ok
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_fixtures() {
        let k5 = EdgeStore::from_fn(5, 2, false, Exec::Sequential, u64::MAX, |_| true).unwrap();
        assert_eq!(max_clique_exact(&k5, ORACLE_BUDGET).unwrap(), Optimum { size: 5, witness: vec![0, 1, 2, 3, 4] });
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let best = max_clique_checked(&c5, ORACLE_BUDGET).unwrap();
        assert_eq!(best, Optimum { size: 2, witness: vec![0, 1] });
        assert_eq!(max_independent_exact(&c5, ORACLE_BUDGET).unwrap().size, 2);
        let empty7 = EdgeStore::empty(7, 2, false);
        assert_eq!(max_independent_exact(&empty7, ORACLE_BUDGET).unwrap().size, 7);
        let k7 = EdgeStore::from_fn(7, 2, false, Exec::Sequential, u64::MAX, |_| true).unwrap();
        assert_eq!(max_independent_exact(&k7, ORACLE_BUDGET).unwrap().size, 1);
    }

    #[test]
    fn paley13_clique_agrees_with_naive() {
        let h = paley(13).unwrap().materialize(u64::MAX, Exec::Sequential).unwrap();
        let best = max_clique_checked(&h, ORACLE_BUDGET).unwrap();
        assert_eq!(best.size, naive_clique(&h));
        let mut t = best.witness.clone();
        t.truncate(2);
        assert!(h.contains(&t));
    }

    #[test]
    fn three_uniform_agrees_with_naive() {
        let mut rng = rng_from_seed(3);
        for _ in 0..5 {
            let mut edges = Vec::new();
            for_each_combination(11, 3, |t| {
                if rng.gen_bool(0.7) {
                    edges.push(t.to_vec());
                }
            });
            let h = EdgeStore::from_edges(11, 3, false, &edges).unwrap();
            assert_eq!(max_clique_checked(&h, ORACLE_BUDGET).unwrap().size, naive_clique(&h));
            assert_eq!(max_independent_checked(&h, ORACLE_BUDGET).unwrap().size, naive_clique(&h.complement()));
        }
    }

    #[test]
    fn independence_is_complement_clique() {
        for seed in 0..50 {
            let n = 8 + (seed as usize % 13);
            let g = random_graph(n, 0.5, seed);
            let a = max_independent_exact(&g, ORACLE_BUDGET).unwrap().size;
            assert_eq!(a, max_clique_exact(&g.complement(), ORACLE_BUDGET).unwrap().size);
            if n <= 16 {
                assert_eq!(a, naive_clique(&g.complement()));
            }
        }
    }

    #[test]
    fn budget_and_size_limits() {
        let g = random_graph(40, 0.5, 1);
        assert!(matches!(max_clique_exact(&g, 3), Err(Error::BudgetExceeded { .. })));
        let big = EdgeStore::empty(65, 2, false);
        assert!(matches!(max_clique_exact(&big, ORACLE_BUDGET), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn biclique_fixtures() {
        let k33 = EdgeStore::from_fn(6, 2, false, Exec::Sequential, u64::MAX, |t| (t[0] < 3) != (t[1] < 3)).unwrap();
        let b = max_balanced_biclique_exact(&k33, ORACLE_BUDGET).unwrap();
        assert_eq!(b.t, 3);
        assert_eq!(max_balanced_biclique_exact(&EdgeStore::empty(9, 2, false), ORACLE_BUDGET).unwrap().t, 0);
    }

    fn naive_biclique(g: &EdgeStore) -> usize {
        let n = g.n();
        let mut best = 0;
        for amask in 1u32..1 << n {
            let a: Vec<usize> = (0..n).filter(|i| amask >> i & 1 == 1).collect();
            let common = (0..n).filter(|&y| a.iter().all(|&x| x != y && g.contains(&[x.min(y), x.max(y)]))).count();
            best = best.max(a.len().min(common));
        }
        best
    }

    #[test]
    fn biclique_agrees_with_naive() {
        for seed in 0..10 {
            let g = random_graph(11, 0.6, 100 + seed);
            let b = max_balanced_biclique_exact(&g, ORACLE_BUDGET).unwrap();
            assert_eq!(b.t, naive_biclique(&g));
            for &x in &b.a {
                assert!(!b.b.contains(&x));
                for &y in &b.b {
                    assert!(g.contains(&[x.min(y), x.max(y)]));
                }
            }
        }
    }

    #[test]
    fn verify_clique_and_swapped_vertex() {
        let inst = paley(13).unwrap();
        let h = inst.materialize(u64::MAX, Exec::Sequential).unwrap();
        let best = max_clique_exact(&h, ORACLE_BUDGET).unwrap();
        assert!(verify_witness(&inst, &Witness::Clique { vertices: best.witness.clone() }).ok);
        let mut broken = best.witness.clone();
        let last = broken.len() - 1;
        broken[last] =
            (0..13).find(|&v| !broken.contains(&v) && !h.contains(&[v.min(broken[0]), v.max(broken[0])])).unwrap();
        let v = verify_witness(&inst, &Witness::Clique { vertices: broken.clone() });
        assert!(!v.ok);
        let t = v.counterexample.unwrap();
        assert_eq!(t.len(), 2);
        assert!(!inst.edge_query(&t).unwrap());
    }

    #[test]
    fn verify_rejects_repeats_and_range() {
        let inst = paley(13).unwrap();
        assert!(!verify_witness(&inst, &Witness::Clique { vertices: vec![1, 1] }).ok);
        assert!(!verify_witness(&inst, &Witness::IndependentSet { vertices: vec![40] }).ok);
    }

    proptest! {
        #[test]
        fn clique_mutations_are_rejected(pos in 0usize..8, shift in 1usize..13) {
            let inst = paley(13).unwrap();
            let h = inst.materialize(u64::MAX, Exec::Sequential).unwrap();
            let best = max_clique_exact(&h, ORACLE_BUDGET).unwrap();
            let mut w = best.witness.clone();
            let i = pos % w.len();
            w[i] = (w[i] + shift) % 13;
            let good = {
                let mut s = w.clone();
                s.sort_unstable();
                s.dedup();
                s.len() == w.len() && (0..w.len()).all(|a| (a + 1..w.len()).all(|b| h.contains(&[w[a].min(w[b]), w[a].max(w[b])])))
            };
            prop_assert_eq!(verify_witness(&inst, &Witness::Clique { vertices: w }).ok, good);
        }
    }
}
