//! Polynomial regularity for strongly-algebraic hypergraphs: a clustering
//! partition verified tuple by tuple, the cleaning step that empties sparse
//! tuples of parts, the full pipeline, and hereditary amplification of a
//! Ramsey bound.

mod cleaning;
mod pipeline;
mod weak;

pub use cleaning::{cleaning, cleaning_constant, med_degree_sparse, Cleaned, SparseMedDegree};
pub use pipeline::{
    algebraic_regularity, equitable_refinement, hereditary_amplify, Amplified, AmplifyRoute, Regularity,
    MAX_REGULARITY_ATTEMPTS, MAX_RESAMPLES,
};
pub use weak::{refine_clusters, weak_vc_partition, WeakPartition, WEAK_ROUNDS};

use serde::{Deserialize, Serialize};

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};
use crate::exact::{q, Q};
use crate::hypergraph::EdgeStore;
use crate::par::{map_slice, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Partition {
    #[serde(rename = "K")]
    pub k: usize,
    pub assignment: Vec<usize>,
    pub equitable: bool,
}

impl Partition {
    /// Parts must be nonempty and cover `0..n` exactly once.
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::EmptyPart);
            }
            for &v in p {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::OverlappingParts);
                }
                assignment[v] = i;
            }
        }
        if let Some(v) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::Malformed(format!("vertex {v} is in no part")));
        }
        let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        let equitable = sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0) <= 1;
        Ok(Partition { k: parts.len(), assignment, equitable })
    }

    /// Vertices of each part, ascending.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &i) in self.assignment.iter().enumerate() {
            out[i].push(v);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TupleClass {
    Empty,
    /// Nonempty with density at most `epsilon`; only in weak classifications.
    Sparse,
    Dense,
    Bad,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifiedTuple {
    pub parts: Vec<usize>,
    pub edges: u64,
    pub size_product: u64,
    pub class: TupleClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomogeneityReport {
    #[serde(with = "crate::exact::serde_q")]
    pub epsilon: Q,
    /// Sparse tuples count as good (plain epsilon-homogeneity) instead of bad.
    pub weak: bool,
    #[serde(rename = "K")]
    pub k: usize,
    pub tuples_total: u64,
    pub tuples_empty: u64,
    pub tuples_sparse: u64,
    pub tuples_dense: u64,
    pub tuples_bad: u64,
    #[serde(with = "crate::exact::serde_q")]
    pub bad_fraction: Q,
    #[serde(rename = "KBoundsOK")]
    pub k_bounds_ok: bool,
}

impl HomogeneityReport {
    pub fn passes(&self) -> bool {
        self.bad_fraction <= self.epsilon && self.k_bounds_ok
    }
}

pub(crate) fn check_epsilon(eps: &Q, upper: Q) -> Result<()> {
    if *eps.numer() == 0 || *eps > upper {
        return Err(Error::EpsilonOutOfRange(format!(
            "need 0 < epsilon <= {}, got {}",
            crate::exact::to_text(&upper),
            crate::exact::to_text(eps)
        )));
    }
    Ok(())
}

/// `8 / epsilon < K`, compared exactly.
pub fn k_bounds_ok(k: usize, eps: &Q) -> bool {
    (8 * *eps.denom() as u128) < k as u128 * *eps.numer() as u128
}

/// Classify one tuple of parts: `weak` admits sparse tuples as good.
pub fn classify(edges: u64, size_product: u64, eps: &Q, weak: bool) -> TupleClass {
    let density = q(edges, size_product.max(1));
    if edges == 0 {
        TupleClass::Empty
    } else if density >= q(1, 1) - *eps {
        TupleClass::Dense
    } else if weak && density <= *eps {
        TupleClass::Sparse
    } else {
        TupleClass::Bad
    }
}

/// Every `r`-set of distinct parts with its crossing-edge count and class,
/// in lexicographic order of part indices.
pub fn tuple_classes(h: &EdgeStore, parts: &[Vec<usize>], eps: &Q, weak: bool, exec: Exec) -> Vec<ClassifiedTuple> {
    let r = h.r();
    let mut picks = Vec::new();
    for_each_combination(parts.len(), r, |t| picks.push(t.to_vec()));
    map_slice(exec, &picks, |pick| {
        let chosen: Vec<Vec<usize>> = pick.iter().map(|&i| parts[i].clone()).collect();
        let size_product = chosen.iter().map(|p| p.len() as u64).product();
        let edges = if size_product == 0 { 0 } else { h.cross_count(&chosen) };
        ClassifiedTuple { parts: pick.clone(), edges, size_product, class: classify(edges, size_product, eps, weak) }
    })
}

pub fn report_from_classes(classes: &[ClassifiedTuple], k: usize, eps: Q, weak: bool) -> HomogeneityReport {
    let count = |c: TupleClass| classes.iter().filter(|t| t.class == c).count() as u64;
    let total = classes.len() as u64;
    let bad = count(TupleClass::Bad);
    HomogeneityReport {
        epsilon: eps,
        weak,
        k,
        tuples_total: total,
        tuples_empty: count(TupleClass::Empty),
        tuples_sparse: count(TupleClass::Sparse),
        tuples_dense: count(TupleClass::Dense),
        tuples_bad: bad,
        bad_fraction: if total == 0 { q(0, 1) } else { q(bad, total) },
        k_bounds_ok: k_bounds_ok(k, &eps),
    }
}

/// Classify all tuples of parts of `partition` and summarize.
pub fn homogeneity_report(
    h: &EdgeStore,
    partition: &Partition,
    eps: Q,
    weak: bool,
    exec: Exec,
) -> Result<HomogeneityReport> {
    check_epsilon(&eps, q(1, 2))?;
    if h.is_directed() {
        return Err(Error::Unsupported("an undirected store".into()));
    }
    if partition.assignment.len() != h.n() {
        return Err(Error::PartCountMismatch { expected: h.n(), got: partition.assignment.len() });
    }
    let classes = tuple_classes(h, &partition.parts(), &eps, weak, exec);
    Ok(report_from_classes(&classes, partition.k, eps, weak))
}
