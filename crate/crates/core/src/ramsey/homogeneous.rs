use serde::{Deserialize, Serialize};

use super::clique::{dense_clique_unchecked, extend_clique, med_degree_dir_relaxed};
use super::{all_tuples_are, BoundContext, ExtractionTrace, JumpKind, RamseyResult, ResultKind, TraceStep};
use crate::algebra::monomial_count;
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::hypergraph::{AlgebraicInstance, EdgeStore, DEFAULT_BUDGET};
use crate::par::Exec;
use crate::rng::child_seed;

/// Largest clique parameter accepted by the sampling step.
const ALPHA_CEILING: f64 = 0.5 - 1.0 / 1048576.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomogeneousConfig {
    /// Replaces `2r r! N^(-1/(2rms))` when set.
    pub alpha: Option<f64>,
    pub exec: Exec,
    pub budget: u64,
}

impl Default for HomogeneousConfig {
    fn default() -> Self {
        HomogeneousConfig { alpha: None, exec: Exec::default(), budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Homogeneous {
    pub vertices: Vec<usize>,
    /// Entry `i` is true when `H_i[U]` is a clique, false when it is independent.
    pub clique_in: Vec<bool>,
    pub alpha: f64,
    pub below_bound: bool,
    pub trace: ExtractionTrace,
}

/// `2r r! N^(-1/(2rms))`
pub fn homogeneous_alpha(n: usize, r: usize, m: usize, s: u64) -> f64 {
    let rf = factorial(r as u64).unwrap_or(u64::MAX) as f64;
    2.0 * r as f64 * rf * (n as f64).powf(-1.0 / (2.0 * r as f64 * m as f64 * s as f64))
}

/// `2 r^2 m (C(n+d, d) + 1)`
pub fn hypergraph_gamma(r: usize, n: usize, d: u32, m: usize) -> Result<u64> {
    let c = monomial_count(n as u64, d as u64)?;
    Ok(2 * (r * r * m) as u64 * (c + 1))
}

/// Clamp the clique parameter into the range the sampling argument accepts.
pub(crate) fn clamp_clique_alpha(alpha: f64, n: usize, r: usize, notes: &mut Vec<String>) -> f64 {
    let lower = (n.max(1) as f64).powi(1 - r as i32);
    if alpha >= ALPHA_CEILING {
        notes.push(format!("clique alpha {alpha:.6} clamped to {ALPHA_CEILING:.6}"));
        ALPHA_CEILING
    } else if alpha <= lower {
        let a = lower * (1.0 + 1e-9);
        notes.push(format!("clique alpha {alpha:.3e} raised to {a:.3e}"));
        a
    } else {
        alpha
    }
}

/// A set on which every `H_i` is a clique or independent, by the
/// three-case shrinking loop over `m` directed hypergraphs.
///
/// `s_init[i][k]` bounds the staircase length in coordinate `k` that `H_i`
/// avoids.
pub fn homogeneous_subset(
    his: &[EdgeStore],
    s_init: &[Vec<u64>],
    alpha: Option<f64>,
    seed: u64,
) -> Result<Homogeneous> {
    let m = his.len();
    if m == 0 {
        return Err(Error::BadParameters("need at least one dihypergraph".into()));
    }
    let (n, r) = (his[0].n(), his[0].r());
    if his.iter().any(|h| !h.is_directed() || h.n() != n || h.r() != r) || r < 2 {
        return Err(Error::BadParameters("dihypergraphs must be directed, r >= 2, on one vertex set".into()));
    }
    if s_init.len() != m || s_init.iter().any(|row| row.len() != r || row.contains(&0)) {
        return Err(Error::BadParameters("s_init must be an m x r table of positive integers".into()));
    }
    let s_max = s_init.iter().flatten().copied().max().unwrap();
    let alpha = alpha.unwrap_or_else(|| homogeneous_alpha(n, r, m, s_max));
    let cap = 2 * r * m * s_max as usize;
    let mut bk: Vec<Vec<u64>> = s_init.to_vec();
    let mut u: Vec<usize> = (0..n).collect();
    let mut trace = ExtractionTrace::new(seed);
    trace.notes.push(format!("alpha = {alpha:.6}"));
    for level in 0.. {
        if level > cap {
            return Err(Error::StepBudgetExceeded(level));
        }
        let snapshot: Vec<u64> = bk.iter().flatten().copied().collect();
        let local: Vec<EdgeStore> = his.iter().map(|h| h.induced(&u)).collect();
        let active: Vec<usize> = (0..m).filter(|&i| !local[i].is_empty()).collect();
        if let Some(&i) = active.iter().find(|&&i| bk[i].iter().any(|&s| s <= 1)) {
            return Err(Error::InternalInconsistency(format!(
                "H_{i} keeps an edge after its staircase allowance ran out"
            )));
        }
        let step = |case: u8, size: usize| TraceStep {
            level,
            case,
            size,
            bookkeeping: snapshot.clone(),
            jump: JumpKind::NotApplicable,
        };
        if active.is_empty() {
            trace.steps.push(step(1, u.len()));
            return Ok(Homogeneous { vertices: u, clique_in: vec![false; m], alpha, below_bound: false, trace });
        }
        let complete: Vec<EdgeStore> = active.iter().map(|&i| local[i].complete_part()).collect();
        let sparse = complete.iter().position(|c| to_f64(&c.density()) < 1.0 - alpha);
        match sparse {
            None => {
                let hi = EdgeStore::from_fn(u.len(), r, false, Exec::Sequential, u64::MAX, |t| {
                    complete.iter().all(|c| c.contains(t))
                })?;
                let a = clamp_clique_alpha(alpha * m as f64, u.len(), r, &mut trace.notes);
                let dc = dense_clique_unchecked(&hi, a, child_seed(seed, level as u64));
                let all: Vec<usize> = (0..u.len()).collect();
                let ext = extend_clique(&hi, &dc.clique, &all);
                if ext.len() > dc.clique.len() {
                    trace.notes.push(format!("clique of {} extended to {}", dc.clique.len(), ext.len()));
                }
                trace.steps.push(step(2, u.len()));
                let vertices = ext.iter().map(|&j| u[j]).collect();
                let clique_in = (0..m).map(|i| active.contains(&i)).collect();
                return Ok(Homogeneous { vertices, clique_in, alpha, below_bound: dc.below_bound, trace });
            }
            Some(pos) => {
                let i = active[pos];
                let (dm, by_claim) = med_degree_dir_relaxed(&local[i], alpha);
                if !by_claim {
                    trace.notes.push(format!("level {level}: neighbourhood chosen by exhaustive search"));
                }
                bk[i][dm.coord] -= 1;
                trace.steps.push(step(3, u.len()));
                u = u
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| dm.neighbors.binary_search(j).is_err())
                    .map(|(_, &v)| v)
                    .collect();
            }
        }
    }
    unreachable!()
}

/// Homogeneous set of an algebraic hypergraph, classified through the
/// defining formula and re-verified on every `r`-subset.
pub fn hypergraph_ramsey(inst: &AlgebraicInstance, seed: u64, cfg: &HomogeneousConfig) -> Result<RamseyResult> {
    let (r, m) = (inst.r(), inst.m());
    if r < 2 {
        return Err(Error::Unsupported("r >= 2".into()));
    }
    let his = inst.di_hypergraphs_of(cfg.budget, cfg.exec)?;
    let s = monomial_count(inst.n() as u64, inst.d() as u64)? + 1;
    let hs = homogeneous_subset(&his, &vec![vec![s; r]; m], cfg.alpha, seed)?;
    let kind = if hs.vertices.len() >= r && inst.edge_query(&hs.vertices[..r])? {
        ResultKind::Clique
    } else {
        ResultKind::IndependentSet
    };
    let verified = all_tuples_are(inst, &hs.vertices, kind == ResultKind::Clique)?;
    let n = inst.num_vertices();
    let gamma = hypergraph_gamma(r, inst.n(), inst.d(), m)?;
    Ok(RamseyResult {
        kind,
        achieved_size: hs.vertices.len(),
        vertices: hs.vertices,
        pattern: None,
        color: None,
        bound_context: BoundContext {
            n,
            gamma: Some(gamma),
            gamma_prime: None,
            alpha: hs.alpha,
            beta: None,
            target_size: (n as f64).powf(1.0 / gamma as f64),
        },
        trace: hs.trace,
        verified,
        below_bound: hs.below_bound,
        budget_exhausted: false,
    })
}
