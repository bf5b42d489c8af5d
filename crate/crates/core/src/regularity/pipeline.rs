use std::collections::HashMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::cleaning::{cleaning, cleaning_constant, sparse_tuples};
use super::weak::{k_floor, weak_vc_best};
use super::{check_epsilon, report_from_classes, tuple_classes, HomogeneityReport, Partition, TupleClass};
use crate::algebra::monomial_count;
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::exact::{from_f64_floor, q, to_f64, to_text, Q};
use crate::hypergraph::{AlgebraicInstance, EdgeStore, InstanceKind, DEFAULT_BUDGET};
use crate::oracles::{verify_witness, Witness};
use crate::par::Exec;
use crate::ramsey::{clamp_clique_alpha, dense_clique_unchecked, extend_clique};
use crate::rng::{child_seed, rng_from_seed};

/// Fresh-seed retries of the whole pipeline before reporting failure.
pub const MAX_REGULARITY_ATTEMPTS: usize = 5;
/// Redraws of the sampled transversal in amplification.
pub const MAX_RESAMPLES: usize = 32;
/// `eps0 = 2^-j` is capped at this exponent so it stays an exact `u64` rational.
const MAX_EPS0_EXPONENT: u32 = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Regularity {
    pub partition: Partition,
    pub report: HomogeneityReport,
    /// `eps0 = 2^-eps0_exponent`.
    pub eps0_exponent: u32,
    /// Parts of the first (weak) partition.
    pub l: usize,
    pub s: u64,
    pub cleaning_constant: f64,
    pub bad_constant: f64,
    pub removed: usize,
    pub shortfall_parts: usize,
    pub attempts: usize,
    pub notes: Vec<String>,
}

/// Equitable partition `V_1..V_K` with `V_i` inside `vprime[i]` for every
/// nonempty `vprime[i]`, leftovers split into the remaining parts, and `K`
/// the least count with `ceil(N/K) <= min |V'_i|`.
pub fn equitable_refinement(n: usize, vprime: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let kept: Vec<Vec<usize>> = vprime
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p
        })
        .collect();
    if kept.is_empty() {
        return (0..n).map(|v| vec![v]).collect();
    }
    let l = kept.len();
    let m = kept.iter().map(Vec::len).min().expect("nonempty");
    for k in n.div_ceil(m).max(l)..=n {
        let qsz = n / k;
        let big = n - k * qsz;
        let eligible = kept.iter().filter(|p| p.len() > qsz).count();
        let g = big.min(eligible);
        if big - g > k - l {
            continue;
        }
        let mut used = vec![false; n];
        let mut parts = Vec::with_capacity(k);
        let mut given = 0;
        for p in &kept {
            let size = if p.len() > qsz && given < g {
                given += 1;
                qsz + 1
            } else {
                qsz
            };
            for &v in &p[..size] {
                used[v] = true;
            }
            parts.push(p[..size].to_vec());
        }
        let rest: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
        let mut at = 0;
        for j in 0..k - l {
            let size = if j < big - g { qsz + 1 } else { qsz };
            parts.push(rest[at..at + size].to_vec());
            at += size;
        }
        debug_assert_eq!(at, rest.len());
        return parts;
    }
    (0..n).map(|v| vec![v]).collect()
}

fn require_strong(inst: &AlgebraicInstance) -> Result<()> {
    if inst.kind() != InstanceKind::StronglyAlgebraic {
        return Err(Error::InvalidKind("operation requires a stronglyAlgebraic instance".into()));
    }
    Ok(())
}

/// `(j, c0, c1)`: the least `j` with `c1 2^{-j/r!} <= eps` and
/// `2^r 2^{-j} <= eps`, where `c1 = 1 + 2 r^r c0`.
fn choose_eps0(r: usize, s: u64, eps: f64, notes: &mut Vec<String>) -> (u32, f64, f64) {
    let c0 = cleaning_constant(r, s);
    let c1 = 1.0 + 2.0 * (r as f64).powi(r as i32) * c0;
    let fact = factorial(r as u64).unwrap_or(u64::MAX) as f64;
    let need = (fact * (c1 / eps).log2()).max(r as f64 + (1.0 / eps).log2());
    let mut j = need.ceil().max(1.0) as u32;
    if j > MAX_EPS0_EXPONENT {
        notes.push(format!("eps0 exponent {j} capped at {MAX_EPS0_EXPONENT}"));
        j = MAX_EPS0_EXPONENT;
    }
    (j, c0, c1)
}

fn regularity_attempt(inst: &AlgebraicInstance, h: &EdgeStore, eps: Q, seed: u64, exec: Exec) -> Result<Regularity> {
    let n = h.n();
    let r = inst.r();
    let s = monomial_count(inst.n() as u64, inst.d() as u64)? + 1;
    let mut notes = Vec::new();
    let (j, c0, c1) = choose_eps0(r, s, to_f64(&eps), &mut notes);
    let eps0 = q(1, 1u64 << j);
    let k_min = k_floor(&eps0, n);
    if k_min == n {
        notes.push(format!("8/eps0 = 2^{} is at least N = {n}; the first partition uses K = N", j + 3));
    }
    let weak = weak_vc_best(h, eps0, k_min, seed, exec);
    let parts = weak.partition.parts();
    let l = parts.len();
    let classes = tuple_classes(h, &parts, &eps0, true, exec);
    let sparse = sparse_tuples(&classes, to_f64(&eps0));
    let cleaned = cleaning(h, &parts, &sparse, to_f64(&eps0), s)?;
    let final_parts = equitable_refinement(n, &cleaned.parts);
    let partition = Partition::from_parts(n, &final_parts)?;
    if !partition.equitable {
        return Err(Error::InternalInconsistency("refinement is not equitable".into()));
    }
    let final_classes = tuple_classes(h, &final_parts, &eps, false, exec);
    let report = report_from_classes(&final_classes, partition.k, eps, false);
    Ok(Regularity {
        partition,
        report,
        eps0_exponent: j,
        l,
        s,
        cleaning_constant: c0,
        bad_constant: c1,
        removed: cleaned.removed,
        shortfall_parts: cleaned.shortfall.len(),
        attempts: 1,
        notes,
    })
}

/// Best result over the attempts, passing or not.
pub(crate) fn regularity_best(inst: &AlgebraicInstance, eps: Q, seed: u64, exec: Exec) -> Result<Regularity> {
    let h = inst.materialize(DEFAULT_BUDGET, exec)?;
    let mut best: Option<Regularity> = None;
    for attempt in 0..MAX_REGULARITY_ATTEMPTS {
        let sub = if attempt == 0 { seed } else { child_seed(seed, attempt as u64) };
        let mut res = regularity_attempt(inst, &h, eps, sub, exec)?;
        res.attempts = attempt + 1;
        let passes = res.report.passes();
        let better = best.as_ref().is_none_or(|b| {
            (passes, std::cmp::Reverse(res.report.bad_fraction))
                > (b.report.passes(), std::cmp::Reverse(b.report.bad_fraction))
        });
        if better {
            best = Some(res);
        }
        if passes {
            break;
        }
    }
    Ok(best.expect("at least one attempt"))
}

/// An equitable partition of a strongly-algebraic hypergraph into `K > 8/eps`
/// parts in which all but an `eps`-fraction of the `r`-tuples of parts are
/// empty or have density at least `1 - eps`.
///
/// Runs the weak partition at `eps0`, cleans the tuples sparser than `eps0`,
/// re-equitablizes inside the cleaned parts, and classifies every tuple.
pub fn algebraic_regularity(inst: &AlgebraicInstance, eps: Q, seed: u64, exec: Exec) -> Result<Regularity> {
    require_strong(inst)?;
    check_epsilon(&eps, q(1, 4))?;
    let best = regularity_best(inst, eps, seed, exec)?;
    if !best.report.passes() {
        return Err(Error::VerificationFailed(Box::new(best.report)));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AmplifyRoute {
    /// The base finder returned a clique on the sampled transversal.
    BaseClique,
    /// The base finder returned a large independent set; one of its parts is independent.
    IndependentPart,
    /// The base finder's independent set was too small to scan parts; returned as is.
    BaseIndependent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Amplified {
    pub witness: Witness,
    pub route: AmplifyRoute,
    pub epsilon: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub clique_parts: usize,
    pub resamples: usize,
    /// The regularity partition met its contract.
    pub contract_met: bool,
    pub notes: Vec<String>,
}

/// Turn a finder of cliques or size-`s` independent sets on small induced
/// subinstances into a finder of large independent sets, by sampling one
/// vertex per regular part.
///
/// `base` receives the instance induced on the sampled vertices of a clique
/// of the auxiliary part graph and returns a clique or an independent set in
/// that subinstance's indices.
pub fn hereditary_amplify(
    inst: &AlgebraicInstance,
    base: &dyn Fn(&AlgebraicInstance) -> Result<Witness>,
    beta: f64,
    seed: u64,
    exec: Exec,
) -> Result<Amplified> {
    require_strong(inst)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::BadParameters(format!("need 0 < beta < 1, got {beta}")));
    }
    let n_vertices = inst.num_vertices();
    let r = inst.r();
    let fact = factorial(r as u64).unwrap_or(u64::MAX) as f64;
    let raw = (n_vertices as f64).powf(-beta / (fact * (2 * inst.n() + 1) as f64));
    let mut notes = Vec::new();
    let eps = if raw < 0.2 {
        from_f64_floor(raw).max(q(1, 1 << 20))
    } else {
        notes.push(format!("epsilon {raw:.4} lowered to 1/5"));
        q(1, 5)
    };
    let reg = regularity_best(inst, eps, seed, exec)?;
    let contract_met = reg.report.passes();
    if !contract_met {
        notes.push(format!(
            "regularity contract not met (bad fraction {}, K = {})",
            to_text(&reg.report.bad_fraction),
            reg.partition.k
        ));
    }
    let parts = reg.partition.parts();
    let k = parts.len();
    let h = inst.materialize(DEFAULT_BUDGET, exec)?;
    let classes: HashMap<Vec<usize>, TupleClass> =
        tuple_classes(&h, &parts, &eps, false, exec).into_iter().map(|c| (c.parts, c.class)).collect();
    let mut rng = rng_from_seed(child_seed(seed, 0x5A));
    let target = 1.0 - 2.0 * to_f64(&eps);
    let mut sampled = None;
    for attempt in 1..=MAX_RESAMPLES {
        let v: Vec<usize> = parts.iter().map(|p| p[rng.gen_range(0..p.len())]).collect();
        let g = EdgeStore::from_fn(k, r, false, Exec::Sequential, u64::MAX, |t| {
            let tuple: Vec<usize> = t.iter().map(|&i| v[i]).collect();
            let edge = h.contains(&{
                let mut s = tuple.clone();
                s.sort_unstable();
                s
            });
            match classes.get(t) {
                Some(TupleClass::Dense) => edge,
                Some(TupleClass::Empty) => !edge,
                _ => false,
            }
        })?;
        if to_f64(&g.density()) >= target {
            sampled = Some((v, g, attempt));
            break;
        }
    }
    let Some((v, g, resamples)) = sampled else {
        return Err(Error::ResampleBudgetExceeded);
    };
    let alpha = clamp_clique_alpha(2.0 * to_f64(&eps), k, r, &mut notes);
    let dc = dense_clique_unchecked(&g, alpha, child_seed(seed, 0xC1));
    let all: Vec<usize> = (0..k).collect();
    let mut jset = extend_clique(&g, &dc.clique, &all);
    jset.sort_unstable();
    let verts: Vec<usize> = jset.iter().map(|&j| v[j]).collect();
    let sub = inst.restrict(&verts);
    let s = (r as u64 - 1) * monomial_count(inst.n() as u64, inst.d() as u64)? + 1;
    let done = |witness: Witness, route: AmplifyRoute, notes: Vec<String>| -> Result<Amplified> {
        let verdict = verify_witness(inst, &witness);
        if !verdict.ok {
            return Err(Error::PostconditionFailed(format!(
                "amplified witness fails: {}",
                verdict.detail.unwrap_or_default()
            )));
        }
        Ok(Amplified {
            witness,
            route,
            epsilon: to_text(&eps),
            k,
            clique_parts: jset.len(),
            resamples,
            contract_met,
            notes,
        })
    };
    match base(&sub)? {
        Witness::Clique { vertices } => {
            let mapped = vertices.iter().map(|&i| verts[i]).collect();
            done(Witness::Clique { vertices: mapped }, AmplifyRoute::BaseClique, notes)
        }
        Witness::IndependentSet { mut vertices } => {
            vertices.sort_unstable();
            if (vertices.len() as u64) < s {
                notes.push(format!("base independent set of size {} is below s = {s}", vertices.len()));
                let mapped = vertices.iter().map(|&i| verts[i]).collect();
                return done(Witness::IndependentSet { vertices: mapped }, AmplifyRoute::BaseIndependent, notes);
            }
            for &i in &vertices[..s as usize] {
                let part = &parts[jset[i]];
                if verify_witness(inst, &Witness::IndependentSet { vertices: part.clone() }).ok {
                    return done(
                        Witness::IndependentSet { vertices: part.clone() },
                        AmplifyRoute::IndependentPart,
                        notes,
                    );
                }
            }
            Err(Error::InternalInconsistency(format!("none of {s} parts is independent")))
        }
        _ => Err(Error::BadParameters("base finder must return a clique or an independent set".into())),
    }
}
