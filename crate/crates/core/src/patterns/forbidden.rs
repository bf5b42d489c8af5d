//! Exhaustive searches for the staircase family `M(r, s, k)`, its focused
//! variant, and the transversal family `N_{r,s}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::combinatorics::{for_each_combination, for_each_distinct_tuple, permutations};
use crate::hypergraph::EdgeStore;

/// Three-valued search result: a witness, a proof of absence, or a budget stop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "outcome", content = "witness")]
pub enum SearchOutcome<W> {
    Found(W),
    Exhausted,
    Budget,
}

impl<W> SearchOutcome<W> {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::Exhausted)
    }
    pub fn found(&self) -> Option<&W> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MRow {
    /// Vertices at the positions other than `k`, in position order.
    pub u: Vec<usize>,
    /// Vertex at position `k`.
    pub z: usize,
}

/// A member of `M(r, s, k)`; `k` is a 0-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MWitness {
    pub k: usize,
    pub rows: Vec<MRow>,
}

impl MWitness {
    /// `X_{i,i'}`: row `i`'s vertices with row `i'`'s apex at position `k`.
    pub fn tuple(&self, i: usize, j: usize) -> Vec<usize> {
        let mut t = self.rows[i].u.clone();
        t.insert(self.k, self.rows[j].z);
        t
    }

    /// Check the staircase with `edge`; on failure returns the offending tuple.
    /// Non-edges `X_{i,i'}` must consist of distinct vertices.
    pub fn check(&self, mut edge: impl FnMut(&[usize]) -> bool) -> Result<(), Vec<usize>> {
        let s = self.rows.len();
        for i in 0..s {
            let t = self.tuple(i, i);
            if has_repeat(&t) || !edge(&t) {
                return Err(t);
            }
        }
        for i in 0..s {
            for j in i + 1..s {
                let t = self.tuple(i, j);
                if has_repeat(&t) || edge(&t) {
                    return Err(t);
                }
            }
        }
        Ok(())
    }
}

/// A focused member of `M(r, s)` for disjoint parts: all apexes in `parts[part]`
/// and every `Z_i + z_i` meets `r` distinct parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FocusedWitness {
    pub part: usize,
    pub witness: MWitness,
}

impl FocusedWitness {
    pub fn check(&self, parts: &[Vec<usize>], edge: impl FnMut(&[usize]) -> bool) -> Result<(), Vec<usize>> {
        let part_of = |v: usize| parts.iter().position(|p| p.contains(&v));
        for (i, row) in self.witness.rows.iter().enumerate() {
            if part_of(row.z) != Some(self.part) {
                return Err(self.witness.tuple(i, i));
            }
            let mut seen: Vec<Option<usize>> = row.u.iter().map(|&v| part_of(v)).collect();
            seen.push(Some(self.part));
            let distinct =
                seen.iter().all(|x| x.is_some()) && (0..seen.len()).all(|a| !seen[a + 1..].contains(&seen[a]));
            if !distinct {
                return Err(self.witness.tuple(i, i));
            }
        }
        self.witness.check(edge)
    }
}

/// A member of `N_{r,s}`: rows are disjoint labelled edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NWitness {
    pub rows: Vec<Vec<usize>>,
}

impl NWitness {
    pub fn check(&self, mut edge: impl FnMut(&[usize]) -> bool) -> Result<(), Vec<usize>> {
        let s = self.rows.len();
        let r = self.rows.first().map_or(0, |x| x.len());
        let all: Vec<usize> = self.rows.iter().flatten().copied().collect();
        if has_repeat(&all) || self.rows.iter().any(|x| x.len() != r) {
            return Err(all);
        }
        for row in &self.rows {
            if !edge(row) {
                return Err(row.clone());
            }
        }
        let mut bad = None;
        for_each_distinct_tuple(s, r, |idx| {
            if bad.is_none() {
                let t: Vec<usize> = idx.iter().enumerate().map(|(pos, &i)| self.rows[i][pos]).collect();
                if edge(&t) {
                    bad = Some(t);
                }
            }
        });
        bad.map_or(Ok(()), Err)
    }
}

fn has_repeat(t: &[usize]) -> bool {
    (0..t.len()).any(|i| t[i + 1..].contains(&t[i]))
}

/// A column of the staircase: the vertices outside position `k`, the apexes
/// completing them to an edge, and the distinct apexes that do not.
struct Column {
    u: Vec<usize>,
    edge: Vec<u64>,
    non_edge: Vec<u64>,
}

/// Longest chain `(U_1, z_1), (U_2, z_2), ..` with `z_i` completing `U_i` and
/// every later apex a non-completion of every earlier `U_i`. The state is
/// the set of apexes still allowed for later rows.
struct Staircase<'a> {
    cols: &'a [Column],
    target: usize,
    memo: HashMap<Vec<u64>, usize>,
    steps: u64,
    budget: u64,
}

impl Staircase<'_> {
    /// Longest chain from `cand`, capped at `target`; `None` on budget stop.
    fn longest(&mut self, cand: &[u64]) -> Option<usize> {
        if let Some(&v) = self.memo.get(cand) {
            return Some(v);
        }
        let room = bits::count(cand).min(self.target);
        let mut best = 0;
        for c in self.cols {
            if best >= room {
                break;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return None;
            }
            if bits::and_count(&c.edge, cand) == 0 {
                continue;
            }
            let mut next = cand.to_vec();
            bits::and_assign(&mut next, &c.non_edge);
            let v = 1 + self.longest(&next)?;
            best = best.max(v.min(self.target));
        }
        self.memo.insert(cand.to_vec(), best);
        Some(best)
    }

    fn run(cols: &[Column], start: Vec<u64>, s: usize, budget: u64) -> SearchOutcome<Vec<MRow>> {
        if s == 0 {
            return SearchOutcome::Found(Vec::new());
        }
        let mut st = Staircase { cols, target: s, memo: HashMap::new(), steps: 0, budget };
        match st.longest(&start) {
            None => return SearchOutcome::Budget,
            Some(v) if v < s => return SearchOutcome::Exhausted,
            Some(_) => {}
        }
        // walk the memo table back to a chain of length s
        st.budget = u64::MAX;
        let mut rows = Vec::with_capacity(s);
        let mut cand = start;
        while rows.len() < s {
            let need = s - rows.len() - 1;
            let mut advanced = false;
            for c in cols {
                let Some(z) = first_common(&c.edge, &cand) else { continue };
                let mut next = cand.clone();
                bits::and_assign(&mut next, &c.non_edge);
                let reach = if need == 0 { 0 } else { st.longest(&next).unwrap_or(0) };
                if reach >= need {
                    rows.push(MRow { u: c.u.clone(), z });
                    cand = next;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "memoized chain length must be realizable");
        }
        SearchOutcome::Found(rows)
    }
}

fn first_common(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .find(|(_, (x, y))| *x & *y != 0)
        .map(|(i, (x, y))| i * 64 + (x & y).trailing_zeros() as usize)
}

fn column(h: &EdgeStore, u: &[usize], k: usize, allowed: &[u64]) -> Column {
    let n = h.n();
    let mut edge = vec![0u64; bits::words_for(n)];
    for z in h.completions_at(u, k) {
        bits::set(&mut edge, z);
    }
    bits::and_assign(&mut edge, allowed);
    let mut non_edge = allowed.to_vec();
    bits::and_not_assign(&mut non_edge, &edge);
    for &x in u {
        bits::clear(&mut non_edge, x);
    }
    Column { u: u.to_vec(), edge, non_edge }
}

/// Search `h` (directed or not) for a member of `M(r, s, k)`, `k` 0-based.
/// `budget` caps column evaluations.
pub fn find_m_member(h: &EdgeStore, s: usize, k: usize, budget: u64) -> SearchOutcome<MWitness> {
    assert!(k < h.r());
    let n = h.n();
    let all = bits::from_indices(n, 0..n);
    let mut cols = Vec::new();
    for_each_distinct_tuple(n, h.r() - 1, |u| {
        let c = column(h, u, k, &all);
        if !bits::is_empty(&c.edge) {
            cols.push(c);
        }
    });
    match Staircase::run(&cols, all, s, budget) {
        SearchOutcome::Found(rows) => SearchOutcome::Found(MWitness { k, rows }),
        SearchOutcome::Exhausted => SearchOutcome::Exhausted,
        SearchOutcome::Budget => SearchOutcome::Budget,
    }
}

/// Search every position `k` in turn; the first witness found is returned.
pub fn find_m_member_any(h: &EdgeStore, s: usize, budget: u64) -> SearchOutcome<MWitness> {
    let mut exhausted = true;
    for k in 0..h.r() {
        match find_m_member(h, s, k, budget) {
            SearchOutcome::Found(w) => return SearchOutcome::Found(w),
            SearchOutcome::Budget => exhausted = false,
            SearchOutcome::Exhausted => {}
        }
        // undirected stores are symmetric in positions
        if !h.is_directed() {
            break;
        }
    }
    if exhausted {
        SearchOutcome::Exhausted
    } else {
        SearchOutcome::Budget
    }
}

/// Search an undirected `h` for a focused member of `M(r, s)` relative to
/// the disjoint `parts`.
pub fn find_focused_m(h: &EdgeStore, parts: &[Vec<usize>], s: usize, budget: u64) -> SearchOutcome<FocusedWitness> {
    let r = h.r();
    let n = h.n();
    let mut spent = 0u64;
    let mut exhausted = true;
    for (j, home) in parts.iter().enumerate() {
        let allowed = bits::from_indices(n, home.iter().copied());
        let others: Vec<usize> = (0..parts.len()).filter(|&i| i != j).collect();
        let mut cols = Vec::new();
        // Z: one vertex from each of r-1 distinct other parts, kept ascending
        for_each_combination(others.len(), r - 1, |pick| {
            let chosen: Vec<&Vec<usize>> = pick.iter().map(|&i| &parts[others[i]]).collect();
            let mut z = vec![0usize; r - 1];
            let mut idx = vec![0usize; r - 1];
            if chosen.iter().any(|p| p.is_empty()) {
                return;
            }
            loop {
                for (slot, (p, &i)) in z.iter_mut().zip(chosen.iter().zip(&idx)) {
                    *slot = p[i];
                }
                let mut sorted = z.clone();
                sorted.sort_unstable();
                let c = column(h, &sorted, r - 1, &allowed);
                if !bits::is_empty(&c.edge) {
                    cols.push(c);
                }
                let mut a = r - 1;
                loop {
                    if a == 0 {
                        return;
                    }
                    a -= 1;
                    idx[a] += 1;
                    if idx[a] < chosen[a].len() {
                        break;
                    }
                    idx[a] = 0;
                }
            }
        });
        cols.sort_by(|a, b| a.u.cmp(&b.u));
        match Staircase::run(&cols, allowed, s, budget.saturating_sub(spent)) {
            SearchOutcome::Found(rows) => {
                return SearchOutcome::Found(FocusedWitness { part: j, witness: MWitness { k: r - 1, rows } })
            }
            SearchOutcome::Budget => exhausted = false,
            SearchOutcome::Exhausted => {}
        }
        spent = spent.saturating_add(cols.len() as u64);
    }
    if exhausted {
        SearchOutcome::Exhausted
    } else {
        SearchOutcome::Budget
    }
}

/// Search an undirected `h` for a member of `N_{r,s}`. `budget` caps search nodes.
pub fn find_n_member(h: &EdgeStore, s: usize, budget: u64) -> SearchOutcome<NWitness> {
    let r = h.r();
    if s == 0 {
        return SearchOutcome::Found(NWitness { rows: Vec::new() });
    }
    if s * r > h.n() {
        return SearchOutcome::Exhausted;
    }
    let edges = h.edges();
    let perms = permutations(r);
    let mut search =
        NSearch { h, s, r, edges: &edges, perms: &perms, rows: Vec::new(), used: vec![false; h.n()], nodes: 0, budget };
    match search.extend(0) {
        Some(true) => SearchOutcome::Found(NWitness { rows: search.rows }),
        Some(false) => SearchOutcome::Exhausted,
        None => SearchOutcome::Budget,
    }
}

struct NSearch<'a> {
    h: &'a EdgeStore,
    s: usize,
    r: usize,
    edges: &'a [Vec<usize>],
    perms: &'a [Vec<usize>],
    rows: Vec<Vec<usize>>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl NSearch<'_> {
    /// Rows are added in increasing order of their least vertex; the first
    /// row keeps ascending labels since relabelling all rows at once by the
    /// same permutation preserves membership.
    fn extend(&mut self, from: usize) -> Option<bool> {
        if self.rows.len() == self.s {
            return Some(true);
        }
        let free = self.used.iter().filter(|&&u| !u).count();
        if free < self.r * (self.s - self.rows.len()) {
            return Some(false);
        }
        for e in from..self.edges.len() {
            let edge = &self.edges[e];
            if edge.iter().any(|&v| self.used[v]) {
                continue;
            }
            let labels: &[Vec<usize>] = if self.rows.is_empty() { &self.perms[..1] } else { self.perms };
            for perm in labels {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return None;
                }
                let row: Vec<usize> = perm.iter().map(|&j| edge[j]).collect();
                if !self.compatible(&row) {
                    continue;
                }
                for &v in &row {
                    self.used[v] = true;
                }
                self.rows.push(row);
                if self.extend(e + 1)? {
                    return Some(true);
                }
                let row = self.rows.pop().expect("pushed above");
                for &v in &row {
                    self.used[v] = false;
                }
            }
        }
        Some(false)
    }

    /// Every transversal using the new row and distinct earlier rows is a non-edge.
    fn compatible(&self, row: &[usize]) -> bool {
        let t = self.rows.len();
        if t + 1 < self.r {
            return true;
        }
        let mut ok = true;
        let mut tuple = vec![0usize; self.r];
        // choose the position held by the new row, fill the rest from distinct old rows
        for pos in 0..self.r {
            for_each_distinct_tuple(t, self.r - 1, |idx| {
                if !ok {
                    return;
                }
                let mut it = idx.iter();
                for (p, slot) in tuple.iter_mut().enumerate() {
                    *slot = if p == pos { row[p] } else { self.rows[*it.next().unwrap()][p] };
                }
                if self.h.contains(&tuple) {
                    ok = false;
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Exec;

    fn brute_force_m(h: &EdgeStore, s: usize, k: usize) -> bool {
        // all sequences of s (U, z) rows, tiny inputs only
        let mut cols = Vec::new();
        for_each_distinct_tuple(h.n(), h.r() - 1, |u| {
            for z in 0..h.n() {
                cols.push(MRow { u: u.to_vec(), z });
            }
        });
        fn rec(h: &EdgeStore, cols: &[MRow], s: usize, k: usize, rows: &mut Vec<MRow>) -> bool {
            if rows.len() == s {
                return MWitness { k, rows: rows.clone() }.check(|t| h.contains(t)).is_ok();
            }
            for c in cols {
                rows.push(c.clone());
                let partial_ok = MWitness { k, rows: rows.clone() }.check(|t| h.contains(t)).is_ok();
                if partial_ok && rec(h, cols, s, k, rows) {
                    return true;
                }
                rows.pop();
            }
            false
        }
        rec(h, &cols, s, k, &mut Vec::new())
    }

    #[test]
    fn complete_digraph_has_no_staircase() {
        let k = EdgeStore::from_fn(5, 2, true, Exec::Sequential, u64::MAX, |_| true).unwrap();
        assert!(find_m_member(&k, 2, 1, 1 << 20).is_exhausted());
        assert!(matches!(find_m_member(&k, 1, 1, 1 << 20), SearchOutcome::Found(_)));
    }

    #[test]
    fn two_edge_staircase() {
        // edges (a,b), (c,d); (a,d) absent
        let h = EdgeStore::from_edges(4, 2, true, &[vec![0, 1], vec![2, 3]]).unwrap();
        let SearchOutcome::Found(w) = find_m_member(&h, 2, 1, 1 << 20) else { panic!() };
        assert!(w.check(|t| h.contains(t)).is_ok());
        assert_eq!(w.rows, vec![MRow { u: vec![0], z: 1 }, MRow { u: vec![2], z: 3 }]);
    }

    #[test]
    fn staircase_agrees_with_brute_force() {
        let preds: [fn(&[usize]) -> bool; 3] =
            [|t| (t[0] * 3 + t[1]) % 4 != 0, |t| t[0] < t[1], |t| (t[0] + 2 * t[1]) % 5 < 2];
        for pred in preds {
            let h = EdgeStore::from_fn(5, 2, true, Exec::Sequential, u64::MAX, pred).unwrap();
            for s in 1..=4 {
                for k in 0..2 {
                    let got = find_m_member(&h, s, k, u64::MAX);
                    assert_eq!(matches!(got, SearchOutcome::Found(_)), brute_force_m(&h, s, k), "s={s} k={k}");
                    if let SearchOutcome::Found(w) = got {
                        assert!(w.check(|t| h.contains(t)).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_three_valued() {
        let h = EdgeStore::from_fn(9, 2, true, Exec::Sequential, u64::MAX, |t| t[0] < t[1]).unwrap();
        assert_eq!(find_m_member(&h, 3, 1, 2), SearchOutcome::Budget);
    }

    #[test]
    fn n_family_examples() {
        let k6 = EdgeStore::from_fn(6, 2, false, Exec::Sequential, u64::MAX, |_| true).unwrap();
        assert!(find_n_member(&k6, 2, 1 << 20).is_exhausted());
        let matching = EdgeStore::from_edges(6, 2, false, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let SearchOutcome::Found(w) = find_n_member(&matching, 3, 1 << 20) else { panic!() };
        assert_eq!(w.rows.len(), 3);
        assert!(w.check(|t| matching.contains(t)).is_ok());
        assert!(find_n_member(&matching, 4, 1 << 20).is_exhausted());
    }

    #[test]
    fn n_witness_rejects_mutations() {
        let matching = EdgeStore::from_edges(6, 2, false, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let bad = NWitness { rows: vec![vec![0, 1], vec![1, 3]] };
        assert!(bad.check(|t| matching.contains(t)).is_err());
        let k6 = EdgeStore::from_fn(6, 2, false, Exec::Sequential, u64::MAX, |_| true).unwrap();
        let w = NWitness { rows: vec![vec![0, 1], vec![2, 3]] };
        assert_eq!(w.check(|t| k6.contains(t)), Err(vec![0, 3]));
    }

    #[test]
    fn focused_examples() {
        let k = EdgeStore::from_fn(6, 2, false, Exec::Sequential, u64::MAX, |_| true).unwrap();
        assert!(find_focused_m(&k, &[vec![0, 1, 2, 3, 4, 5]], 1, 1 << 20).is_exhausted());
        let biclique =
            EdgeStore::from_fn(6, 2, false, Exec::Sequential, u64::MAX, |t| (t[0] < 3) != (t[1] < 3)).unwrap();
        let parts = vec![vec![0, 1, 2], vec![3, 4, 5]];
        assert!(find_focused_m(&biclique, &parts, 2, 1 << 20).is_exhausted());
        // star forest: centers 0, 1 in part 0, leaves 2, 3 in part 1
        let stars = EdgeStore::from_edges(4, 2, false, &[vec![0, 2], vec![1, 3]]).unwrap();
        let parts = vec![vec![0, 1], vec![2, 3]];
        let SearchOutcome::Found(w) = find_focused_m(&stars, &parts, 2, 1 << 20) else { panic!() };
        assert!(w.check(&parts, |t| stars.contains(t)).is_ok());
    }
}
