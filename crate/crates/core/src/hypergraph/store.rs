use crate::bits;
use crate::combinatorics::{binomial, falling_factorial, for_each_combination, for_each_distinct_tuple, permutations};
use crate::error::{Error, Result};
use crate::exact::{q, Q};
use crate::par::{map_range, Exec};

/// Stores up to this arity keep ordered-tuple bitsets; larger arities keep a
/// sorted tuple list.
pub const MAX_BITSET_ARITY: usize = 3;

/// Default cap on predicate evaluations during materialization.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// One row of `n` bits per ordered prefix of length `r - 1`.
    Bits(Vec<u64>),
    /// Sorted ordered tuples (directed) or sorted ascending sets (undirected).
    List(Vec<Vec<u32>>),
}

/// A materialized `r`-uniform (di)hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStore {
    r: usize,
    n: usize,
    directed: bool,
    wpr: usize,
    repr: Repr,
}

fn has_repeat(t: &[usize]) -> bool {
    (0..t.len()).any(|i| (i + 1..t.len()).any(|j| t[i] == t[j]))
}

impl EdgeStore {
    pub fn empty(n: usize, r: usize, directed: bool) -> Self {
        assert!(r >= 1, "arity must be positive");
        let wpr = bits::words_for(n);
        let repr =
            if r <= MAX_BITSET_ARITY { Repr::Bits(vec![0; n.pow(r as u32 - 1) * wpr]) } else { Repr::List(Vec::new()) };
        EdgeStore { r, n, directed, wpr, repr }
    }

    /// Number of predicate evaluations `from_fn` performs.
    pub fn evaluation_count(n: usize, r: usize, directed: bool) -> u64 {
        let c = if directed { falling_factorial(n as u64, r as u64) } else { binomial(n as u64, r as u64) };
        c.unwrap_or(u64::MAX)
    }

    /// Materialize from an edge predicate. For undirected stores `pred` is
    /// called once per `r`-subset (ascending order); for directed stores once
    /// per ordered tuple of distinct vertices. The result does not depend on
    /// `exec`.
    pub fn from_fn<F>(n: usize, r: usize, directed: bool, exec: Exec, budget: u64, pred: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> bool + Sync + Send,
    {
        let needed = Self::evaluation_count(n, r, directed);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut store = Self::empty(n, r, directed);
        if r > n {
            return Ok(store);
        }
        // one task per first vertex; each returns its edges flattened
        let chunks: Vec<Vec<u32>> = map_range(exec, n, |u| {
            let mut out = Vec::new();
            let mut t = vec![0usize; r];
            t[0] = u;
            if directed {
                let rest: Vec<usize> = (0..n).filter(|&v| v != u).collect();
                for_each_distinct_tuple(rest.len(), r - 1, |idx| {
                    for (slot, &i) in t[1..].iter_mut().zip(idx) {
                        *slot = rest[i];
                    }
                    if pred(&t) {
                        out.extend(t.iter().map(|&x| x as u32));
                    }
                });
            } else {
                for_each_combination(n - u - 1, r - 1, |idx| {
                    for (slot, &i) in t[1..].iter_mut().zip(idx) {
                        *slot = u + 1 + i;
                    }
                    if pred(&t) {
                        out.extend(t.iter().map(|&x| x as u32));
                    }
                });
            }
            out
        });
        let mut t = vec![0usize; r];
        for chunk in &chunks {
            for e in chunk.chunks(r) {
                for (slot, &x) in t.iter_mut().zip(e) {
                    *slot = x as usize;
                }
                store.insert(&t);
            }
        }
        store.finish();
        Ok(store)
    }

    /// Build from explicit edges (ordered tuples if directed, any order otherwise).
    pub fn from_edges(n: usize, r: usize, directed: bool, edges: &[Vec<usize>]) -> Result<Self> {
        let mut store = Self::empty(n, r, directed);
        for e in edges {
            if e.len() != r || has_repeat(e) {
                return Err(Error::RepeatedVertexInTuple(e.clone()));
            }
            if let Some(&bad) = e.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            store.insert(e);
        }
        store.finish();
        Ok(store)
    }

    fn row_index(&self, prefix: &[usize]) -> usize {
        prefix.iter().fold(0, |acc, &v| acc * self.n + v)
    }

    fn insert(&mut self, t: &[usize]) {
        let directed = self.directed;
        let (n, wpr) = (self.n, self.wpr);
        match &mut self.repr {
            Repr::Bits(words) => {
                let mut put = |tt: &[usize]| {
                    let row = tt[..tt.len() - 1].iter().fold(0, |acc, &v| acc * n + v);
                    bits::set(&mut words[row * wpr..(row + 1) * wpr], tt[tt.len() - 1]);
                };
                if directed {
                    put(t);
                } else {
                    let mut buf = t.to_vec();
                    for perm in permutations(t.len()) {
                        for (slot, &j) in buf.iter_mut().zip(&perm) {
                            *slot = t[j];
                        }
                        put(&buf);
                    }
                }
            }
            Repr::List(list) => {
                let mut e: Vec<u32> = t.iter().map(|&x| x as u32).collect();
                if !directed {
                    e.sort_unstable();
                }
                list.push(e);
            }
        }
    }

    fn finish(&mut self) {
        if let Repr::List(list) = &mut self.repr {
            list.sort_unstable();
            list.dedup();
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn is_directed(&self) -> bool {
        self.directed
    }
    pub fn words_per_row(&self) -> usize {
        self.wpr
    }

    /// Membership of an ordered tuple; tuples with repeated vertices are never edges.
    pub fn contains(&self, t: &[usize]) -> bool {
        debug_assert_eq!(t.len(), self.r);
        if has_repeat(t) {
            return false;
        }
        match &self.repr {
            Repr::Bits(words) => {
                let row = self.row_index(&t[..self.r - 1]);
                bits::get(&words[row * self.wpr..(row + 1) * self.wpr], t[self.r - 1])
            }
            Repr::List(list) => {
                let mut e: Vec<u32> = t.iter().map(|&x| x as u32).collect();
                if !self.directed {
                    e.sort_unstable();
                }
                list.binary_search(&e).is_ok()
            }
        }
    }

    /// Bit row of last coordinates completing `prefix` (length `r - 1`), when
    /// the store keeps bitsets.
    pub fn row(&self, prefix: &[usize]) -> Option<&[u64]> {
        match &self.repr {
            Repr::Bits(words) => {
                debug_assert_eq!(prefix.len(), self.r - 1);
                let row = self.row_index(prefix);
                Some(&words[row * self.wpr..(row + 1) * self.wpr])
            }
            Repr::List(_) => None,
        }
    }

    /// Vertices `v` such that the tuple with `y` in the positions other than
    /// `pos` (in order) and `v` at `pos` is an edge.
    pub fn completions_at(&self, y: &[usize], pos: usize) -> Vec<usize> {
        debug_assert_eq!(y.len(), self.r - 1);
        if pos == self.r - 1 {
            if let Some(row) = self.row(y) {
                return bits::ones(row).filter(|v| !y.contains(v)).collect();
            }
        }
        let mut t = Vec::with_capacity(self.r);
        t.extend_from_slice(&y[..pos]);
        t.push(0);
        t.extend_from_slice(&y[pos..]);
        (0..self.n)
            .filter(|&v| {
                t[pos] = v;
                self.contains(&t)
            })
            .collect()
    }

    /// All edges: ascending sets in lexicographic order (undirected) or
    /// ordered tuples in lexicographic order (directed).
    pub fn edges(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        match &self.repr {
            Repr::List(list) => out.extend(list.iter().map(|e| e.iter().map(|&x| x as usize).collect())),
            Repr::Bits(_) => {
                if self.directed {
                    if self.r == 1 {
                        out.extend(bits::ones(self.row(&[]).unwrap()).map(|v| vec![v]));
                    } else {
                        for_each_distinct_tuple(self.n, self.r - 1, |prefix| {
                            for v in bits::ones(self.row(prefix).unwrap()) {
                                if !prefix.contains(&v) {
                                    let mut e = prefix.to_vec();
                                    e.push(v);
                                    out.push(e);
                                }
                            }
                        });
                    }
                } else if self.r == 1 {
                    out.extend(bits::ones(self.row(&[]).unwrap()).map(|v| vec![v]));
                } else {
                    for_each_combination(self.n, self.r - 1, |prefix| {
                        let last = prefix[prefix.len() - 1];
                        for v in bits::ones(self.row(prefix).unwrap()) {
                            if v > last {
                                let mut e = prefix.to_vec();
                                e.push(v);
                                out.push(e);
                            }
                        }
                    });
                }
            }
        }
        out
    }

    /// Number of edges (unordered sets if undirected, ordered tuples if directed).
    pub fn edge_count(&self) -> u64 {
        match &self.repr {
            Repr::List(list) => list.len() as u64,
            Repr::Bits(words) => {
                let total = bits::count(words) as u64;
                if self.directed {
                    total
                } else {
                    total / crate::combinatorics::factorial(self.r as u64).unwrap()
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::List(list) => list.is_empty(),
            Repr::Bits(words) => bits::is_empty(words),
        }
    }

    /// `|E| / C(N, r)` for undirected stores, `|E| / (N)_r` for directed ones.
    pub fn density(&self) -> Q {
        let total = Self::evaluation_count(self.n, self.r, self.directed);
        if total == 0 {
            return q(0, 1);
        }
        q(self.edge_count(), total)
    }

    /// Sub-store induced on `vs`; local vertex `i` is `vs[i]`.
    pub fn induced(&self, vs: &[usize]) -> EdgeStore {
        let mut g = vec![0usize; self.r];
        let mut out = Self::empty(vs.len(), self.r, self.directed);
        let mut edges = Vec::new();
        let mut test = |t: &[usize]| {
            for (slot, &i) in g.iter_mut().zip(t) {
                *slot = vs[i];
            }
            if self.contains(&g) {
                edges.push(t.to_vec());
            }
        };
        if self.directed {
            for_each_distinct_tuple(vs.len(), self.r, |t| test(t));
        } else {
            for_each_combination(vs.len(), self.r, |t| test(t));
        }
        for e in &edges {
            out.insert(e);
        }
        out.finish();
        out
    }

    /// Non-edges among tuples of distinct vertices.
    pub fn complement(&self) -> EdgeStore {
        Self::from_fn(self.n, self.r, self.directed, Exec::Sequential, u64::MAX, |t| !self.contains(t))
            .expect("unbounded budget")
    }

    /// `[H]`: the undirected hypergraph of sets all of whose orientations are edges.
    pub fn complete_part(&self) -> EdgeStore {
        if !self.directed {
            return self.clone();
        }
        let perms = permutations(self.r);
        Self::from_fn(self.n, self.r, false, Exec::Sequential, u64::MAX, |t| {
            let mut buf = t.to_vec();
            perms.iter().all(|p| {
                for (slot, &j) in buf.iter_mut().zip(p) {
                    *slot = t[j];
                }
                self.contains(&buf)
            })
        })
        .expect("unbounded budget")
    }

    /// Same edges viewed as an undirected store (requires a symmetric directed store).
    pub fn as_undirected(&self) -> EdgeStore {
        let mut s = self.clone();
        s.directed = false;
        if let Repr::List(list) = &mut s.repr {
            for e in list.iter_mut() {
                e.sort_unstable();
            }
            list.sort_unstable();
            list.dedup();
        }
        s
    }

    /// Number of (ordered, for directed stores) edges with the `i`-th vertex in `parts[i]`.
    pub fn cross_count(&self, parts: &[Vec<usize>]) -> u64 {
        assert_eq!(parts.len(), self.r);
        if self.r >= 2 {
            if let Repr::Bits(_) = &self.repr {
                let mask = bits::from_indices(self.n, parts[self.r - 1].iter().copied());
                let mut total = 0u64;
                let mut prefix = vec![0usize; self.r - 1];
                fn rec(
                    s: &EdgeStore,
                    parts: &[Vec<usize>],
                    depth: usize,
                    prefix: &mut Vec<usize>,
                    mask: &[u64],
                    total: &mut u64,
                ) {
                    if depth == s.r - 1 {
                        let row = s.row(prefix).unwrap();
                        // mask is disjoint from prefix vertices when parts are disjoint
                        *total += bits::and_count(row, mask) as u64;
                        return;
                    }
                    for &v in &parts[depth] {
                        prefix[depth] = v;
                        rec(s, parts, depth + 1, prefix, mask, total);
                    }
                }
                rec(self, parts, 0, &mut prefix, &mask, &mut total);
                return total;
            }
        }
        let mut total = 0u64;
        let mut t = vec![0usize; self.r];
        fn rec2(s: &EdgeStore, parts: &[Vec<usize>], depth: usize, t: &mut Vec<usize>, total: &mut u64) {
            if depth == s.r {
                if s.contains(t) {
                    *total += 1;
                }
                return;
            }
            for &v in &parts[depth] {
                t[depth] = v;
                rec2(s, parts, depth + 1, t, total);
            }
        }
        rec2(self, parts, 0, &mut t, &mut total);
        total
    }

    /// Exact density `|E(V_1..V_r)| / prod |V_i|`.
    pub fn part_density(&self, parts: &[Vec<usize>]) -> Result<Q> {
        check_parts(self.n, self.r, parts)?;
        let denom: u64 = parts.iter().map(|p| p.len() as u64).product();
        Ok(q(self.cross_count(parts), denom))
    }

    /// `N_I(X)`: for positions `positions` (0-based, increasing) filled by `x`,
    /// the tuples of the remaining positions (in order) completing an edge.
    /// For undirected stores, `x` is a set and the result lists ascending
    /// `(r - |x|)`-sets avoiding `x`.
    pub fn neighborhood(&self, positions: &[usize], x: &[usize]) -> Vec<Vec<usize>> {
        assert_eq!(positions.len(), x.len());
        let k = self.r - x.len();
        let mut out = Vec::new();
        if !self.directed {
            let rest: Vec<usize> = (0..self.n).filter(|v| !x.contains(v)).collect();
            let mut t: Vec<usize> = x.to_vec();
            t.resize(self.r, 0);
            for_each_combination(rest.len(), k, |idx| {
                for (j, &i) in idx.iter().enumerate() {
                    t[x.len() + j] = rest[i];
                }
                if self.contains(&t) {
                    out.push(idx.iter().map(|&i| rest[i]).collect());
                }
            });
            return out;
        }
        let free: Vec<usize> = (0..self.r).filter(|p| !positions.contains(p)).collect();
        let mut t = vec![0usize; self.r];
        for (&p, &v) in positions.iter().zip(x) {
            t[p] = v;
        }
        for_each_distinct_tuple(self.n, k, |y| {
            for (&p, &v) in free.iter().zip(y) {
                t[p] = v;
            }
            if self.contains(&t) {
                out.push(y.to_vec());
            }
        });
        out
    }

    /// Undirected `N(v)` for graphs; out-neighbourhood for digraphs.
    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        assert_eq!(self.r, 2);
        self.completions_at(&[v], 1)
    }

    /// In-neighbourhood `N^-(v)` of a digraph.
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        assert_eq!(self.r, 2);
        self.completions_at(&[v], 0)
    }

    /// Number of edges containing `v` (undirected stores).
    pub fn degree(&self, v: usize) -> u64 {
        if self.r == 1 {
            return self.contains(&[v]) as u64;
        }
        if self.r == 2 {
            if let Some(row) = self.row(&[v]) {
                return bits::count(row) as u64;
            }
        }
        let rest: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        let mut t = vec![v; self.r];
        let mut c = 0;
        for_each_combination(rest.len(), self.r - 1, |idx| {
            for (j, &i) in idx.iter().enumerate() {
                t[j + 1] = rest[i];
            }
            if self.contains(&t) {
                c += 1;
            }
        });
        c
    }
}

/// Parts must be nonempty, pairwise disjoint and in range.
pub fn check_parts(n: usize, r: usize, parts: &[Vec<usize>]) -> Result<()> {
    if parts.len() != r {
        return Err(Error::PartCountMismatch { expected: r, got: parts.len() });
    }
    let mut seen = vec![false; n];
    for p in parts {
        if p.is_empty() {
            return Err(Error::EmptyPart);
        }
        for &v in p {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::OverlappingParts);
            }
        }
    }
    Ok(())
}
