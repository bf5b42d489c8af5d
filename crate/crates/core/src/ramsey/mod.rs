//! Extraction of large homogeneous sets: dense cliques, homogeneous subsets of
//! algebraic dihypergraphs, sparse and well-directed pairs, and the
//! small-jump/big-jump procedure for algebraic graphs.
//!
//! Every result carries its trace and is re-verified against the raw edge
//! oracle of the instance before it is returned.

mod clique;
mod graph;
mod homogeneous;
mod pairs;

pub(crate) use clique::dense_clique_unchecked;
pub use clique::{
    clique_bound, dense_clique, extend_clique, med_degree_dir, med_degree_set, DenseClique, DirectedMedDegree,
    MedDegree, MAX_CLIQUE_RETRIES,
};
pub use graph::{gamma_prime, graph_ramsey, jump_ceilings, multicolor_ramsey, ColorMap, GraphRamseyConfig};
pub(crate) use homogeneous::clamp_clique_alpha;
pub use homogeneous::{
    homogeneous_alpha, homogeneous_subset, hypergraph_gamma, hypergraph_ramsey, Homogeneous, HomogeneousConfig,
};
pub use pairs::{sparse_pair, well_directed_pair, Direction, SparsePair, WellDirected};

use serde::{Deserialize, Serialize};

use crate::combinatorics::for_each_combination;
use crate::error::Result;
use crate::hypergraph::{AlgebraicInstance, InstanceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ResultKind {
    Clique,
    IndependentSet,
    MonochromaticClique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum JumpKind {
    Small,
    Big,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub level: usize,
    pub case: u8,
    pub size: usize,
    /// `s_{l,i,k}` flattened row-major over `(i, k)`, or `s_{l,i}` for graphs.
    pub bookkeeping: Vec<u64>,
    pub jump: JumpKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractionTrace {
    pub rng_seed: u64,
    pub steps: Vec<TraceStep>,
    pub notes: Vec<String>,
}

impl ExtractionTrace {
    pub fn new(rng_seed: u64) -> Self {
        ExtractionTrace { rng_seed, steps: Vec::new(), notes: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundContext {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma_prime: Option<f64>,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<String>,
    /// The size the matching guarantee promises, up to its existential constant.
    pub target_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RamseyResult {
    pub kind: ResultKind,
    pub vertices: Vec<usize>,
    /// Indices `i` (0-based) with `f_i` nonzero on every pair of the set.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pattern: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub color: Option<u32>,
    pub achieved_size: usize,
    pub bound_context: BoundContext,
    pub trace: ExtractionTrace,
    pub verified: bool,
    #[serde(default)]
    pub below_bound: bool,
    #[serde(default)]
    pub budget_exhausted: bool,
}

impl RamseyResult {
    /// Recheck the claim against the instance's edge rule (and, for
    /// monochromatic claims, the colour map).
    pub fn verify(&self, inst: &AlgebraicInstance, colors: Option<&ColorMap>) -> Result<bool> {
        if let Some(pattern) = &self.pattern {
            let mask = pattern.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if !all_pairs_have_pattern(inst, &self.vertices, mask) {
                return Ok(false);
            }
        }
        match self.kind {
            ResultKind::Clique => all_tuples_are(inst, &self.vertices, true),
            ResultKind::IndependentSet => all_tuples_are(inst, &self.vertices, false),
            ResultKind::MonochromaticClique => {
                let Some(colors) = colors else { return Ok(false) };
                let want = self.color;
                let mut ok = true;
                for_each_combination(self.vertices.len(), 2, |ij| {
                    if ok {
                        let (x, y) = (self.vertices[ij[0]], self.vertices[ij[1]]);
                        ok = colors.color_of(pair_mask(inst, x, y)) == want;
                    }
                });
                Ok(ok)
            }
        }
    }
}

/// Every `r`-subset of `vs` is an edge (`want`) or every one is a non-edge.
pub fn all_tuples_are(inst: &AlgebraicInstance, vs: &[usize], want: bool) -> Result<bool> {
    let r = inst.r();
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    let mut t = vec![0usize; r];
    let mut out = Ok(true);
    for_each_combination(sorted.len(), r, |idx| {
        if matches!(out, Ok(true)) {
            for (slot, &i) in t.iter_mut().zip(idx) {
                *slot = sorted[i];
            }
            out = inst.edge_query(&t).map(|e| e == want);
        }
    });
    out
}

/// Bit `i` set iff `f_i(x, y) != 0`.
pub fn pair_mask(inst: &AlgebraicInstance, x: usize, y: usize) -> u64 {
    (0..inst.m()).fold(0u64, |acc, i| if inst.poly_value(i, &[x, y]) != 0 { acc | 1 << i } else { acc })
}

/// Both orientations of every pair in `vs` realize `mask`.
pub fn all_pairs_have_pattern(inst: &AlgebraicInstance, vs: &[usize], mask: u64) -> bool {
    vs.iter()
        .enumerate()
        .all(|(j, &x)| vs[j + 1..].iter().all(|&y| pair_mask(inst, x, y) == mask && pair_mask(inst, y, x) == mask))
}

/// Edge status of a tuple whose nonvanishing pattern is `mask`.
pub fn mask_is_edge(inst: &AlgebraicInstance, mask: u64) -> bool {
    if inst.kind() == InstanceKind::StronglyAlgebraic {
        return mask & 1 == 1;
    }
    let vanish: Vec<bool> = (0..inst.m()).map(|i| mask >> i & 1 == 0).collect();
    inst.formula().eval(&vanish)
}

pub(crate) fn mask_indices(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|i| mask >> i & 1 == 1).collect()
}
