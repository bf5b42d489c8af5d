use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{check_epsilon, report_from_classes, tuple_classes, HomogeneityReport, Partition};
use crate::bits;
use crate::combinatorics::next_combination;
use crate::error::{Error, Result};
use crate::exact::{q, to_f64, Q};
use crate::hypergraph::EdgeStore;
use crate::par::{map_range, Exec};
use crate::rng::rng_from_seed;

/// Rounds of halving the net radius before giving up.
pub const WEAK_ROUNDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeakPartition {
    pub partition: Partition,
    pub report: HomogeneityReport,
    /// Net radius (as a fraction of the link universe) of the returned round.
    pub delta: f64,
    pub clusters: usize,
    pub rounds: usize,
}

/// Rank of an ascending `k`-subset of `0..n` in lexicographic order.
fn subset_rank(set: &[usize], n: usize) -> usize {
    let k = set.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (i, &v) in set.iter().enumerate() {
        for skipped in prev..v {
            rank += crate::combinatorics::binomial((n - skipped - 1) as u64, (k - i - 1) as u64).unwrap_or(0) as usize;
        }
        prev = v + 1;
    }
    rank
}

/// Link of every vertex as a bitset over the `(r-1)`-subsets of the vertex set.
fn links(h: &EdgeStore, exec: Exec) -> (Vec<Vec<u64>>, usize) {
    let (n, r) = (h.n(), h.r());
    if r == 2 {
        return ((0..n).map(|v| h.row(&[v]).expect("graphs keep bitsets").to_vec()).collect(), n);
    }
    let universe = crate::combinatorics::binomial(n as u64, (r - 1) as u64).unwrap_or(0) as usize;
    let rows = map_range(exec, n, |v| {
        let mut row = vec![0u64; bits::words_for(universe)];
        let mut c: Vec<usize> = (0..r - 1).collect();
        let mut t = vec![0usize; r];
        if r - 1 <= n {
            loop {
                if !c.contains(&v) {
                    t[..r - 1].copy_from_slice(&c);
                    t[r - 1] = v;
                    t.sort_unstable();
                    if h.contains(&t) {
                        bits::set(&mut row, subset_rank(&c, n));
                    }
                }
                if !next_combination(&mut c, n) {
                    break;
                }
            }
        }
        row
    });
    (rows, universe)
}

/// Split clusters into exactly equitable parts that refine them, using the
/// fewest parts `K >= k_min`. `K = n` (singletons) always works.
pub fn refine_clusters(clusters: &[Vec<usize>], k_min: usize) -> Vec<Vec<usize>> {
    let n: usize = clusters.iter().map(Vec::len).sum();
    for k in k_min.max(1)..=n {
        let qsz = n / k;
        let lo: Vec<usize> = clusters.iter().map(|c| c.len().div_ceil(qsz + 1)).collect();
        let hi: Vec<usize> = clusters.iter().map(|c| c.len() / qsz).collect();
        if lo.iter().sum::<usize>() > k || hi.iter().sum::<usize>() < k {
            continue;
        }
        let mut counts = lo.clone();
        let mut extra = k - lo.iter().sum::<usize>();
        for (c, &h) in counts.iter_mut().zip(&hi) {
            let add = extra.min(h - *c);
            *c += add;
            extra -= add;
        }
        let mut parts = Vec::with_capacity(k);
        for (cluster, &kc) in clusters.iter().zip(&counts) {
            let mut vs = cluster.clone();
            vs.sort_unstable();
            let big = vs.len() - kc * qsz;
            let mut at = 0;
            for j in 0..kc {
                let size = if j < big { qsz + 1 } else { qsz };
                parts.push(vs[at..at + size].to_vec());
                at += size;
            }
        }
        parts.sort();
        return parts;
    }
    unreachable!("singletons always refine")
}

/// `min(floor(8 / eps) + 1, n)`.
pub(crate) fn k_floor(eps: &Q, n: usize) -> usize {
    let k = 8 * *eps.denom() as u128 / *eps.numer() as u128 + 1;
    k.min(n as u128) as usize
}

/// One clustering pass: greedy net in `order`, nearest-centre assignment.
fn cluster(rows: &[Vec<u64>], order: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut centres: Vec<usize> = Vec::new();
    for &v in order {
        if centres.iter().all(|&c| bits::xor_count(&rows[v], &rows[c]) as f64 > radius) {
            centres.push(v);
        }
    }
    let mut groups = vec![Vec::new(); centres.len()];
    for v in 0..rows.len() {
        let best = (0..centres.len())
            .min_by_key(|&j| (bits::xor_count(&rows[v], &rows[centres[j]]), j))
            .expect("nonempty net");
        groups[best].push(v);
    }
    groups.sort();
    groups
}

/// Best partition over the halving rounds at homogeneity threshold `eps`,
/// with at least `k_min` parts, whether or not it passes.
pub(crate) fn weak_vc_best(h: &EdgeStore, eps: Q, k_min: usize, seed: u64, exec: Exec) -> WeakPartition {
    let n = h.n();
    let (rows, universe) = links(h, exec);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut delta = to_f64(&eps) / 4.0;
    let mut best: Option<WeakPartition> = None;
    let mut last_clusters = usize::MAX;
    for round in 1..=WEAK_ROUNDS {
        let clusters = cluster(&rows, &order, delta * universe as f64);
        if clusters.len() != last_clusters {
            last_clusters = clusters.len();
            let parts = refine_clusters(&clusters, k_min);
            let partition = Partition::from_parts(n, &parts).expect("refinement covers every vertex once");
            let classes = tuple_classes(h, &parts, &eps, true, exec);
            let report = report_from_classes(&classes, partition.k, eps, true);
            let cand = WeakPartition { partition, report, delta, clusters: clusters.len(), rounds: round };
            let better = match &best {
                None => true,
                Some(b) => {
                    (cand.report.passes(), std::cmp::Reverse(cand.report.bad_fraction))
                        > (b.report.passes(), std::cmp::Reverse(b.report.bad_fraction))
                }
            };
            if better {
                best = Some(cand);
            }
            if best.as_ref().is_some_and(|b| b.report.passes()) {
                break;
            }
        }
        delta /= 2.0;
    }
    best.expect("at least one round runs")
}

/// An equitable partition with `8/eps < K` in which all but an
/// `eps`-fraction of the `r`-tuples of parts are `eps`-homogeneous.
///
/// Vertices are clustered around a greedy net of their links (radius
/// `delta`, starting at `eps/4` and halving), clusters are split into
/// equitable parts, and the result is verified tuple by tuple.
pub fn weak_vc_partition(h: &EdgeStore, eps: Q, seed: u64, exec: Exec) -> Result<WeakPartition> {
    check_epsilon(&eps, q(1, 4))?;
    if h.is_directed() || h.r() < 2 {
        return Err(Error::Unsupported("an undirected store with r >= 2".into()));
    }
    if h.n() == 0 {
        return Err(Error::EmptyHypergraph);
    }
    let best = weak_vc_best(h, eps, k_floor(&eps, h.n()), seed, exec);
    if !best.report.passes() {
        return Err(Error::VerificationFailed(Box::new(best.report)));
    }
    Ok(best)
}
