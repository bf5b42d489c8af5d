use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::hypergraph::EdgeStore;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SparsePair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub z0: usize,
    pub net_size: usize,
}

fn check_graph(g: &EdgeStore, directed: bool) -> Result<()> {
    if g.r() != 2 || g.is_directed() != directed {
        let what = if directed { "a directed graph" } else { "an undirected graph" };
        return Err(Error::Unsupported(what.into()));
    }
    Ok(())
}

/// Disjoint `A`, `B` with `|A| >= (alpha/4) N` and every vertex of `B`
/// adjacent to at most `beta |A|` vertices of `A`, for a graph of density at
/// most `1 - alpha`.
pub fn sparse_pair(g: &EdgeStore, alpha: f64, beta: f64) -> Result<SparsePair> {
    check_graph(g, false)?;
    if !(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0) {
        return Err(Error::BadParameters(format!("need alpha, beta in (0, 1], got {alpha}, {beta}")));
    }
    let n = g.n();
    let density = to_f64(&g.density());
    if density > 1.0 - alpha {
        return Err(Error::TooDense { density, limit: 1.0 - alpha });
    }
    let nf = n as f64;
    let rows: Vec<&[u64]> = (0..n).map(|v| g.row(&[v]).expect("graphs keep bitsets")).collect();
    let low: Vec<usize> = (0..n).filter(|&v| bits::count(rows[v]) as f64 <= (1.0 - alpha / 2.0) * nf).collect();
    let radius = alpha * beta / 4.0 * nf;
    let mut net: Vec<usize> = Vec::new();
    for &v in &low {
        if net.iter().all(|&z| bits::xor_count(rows[v], rows[z]) as f64 >= radius) {
            net.push(v);
        }
    }
    let ball = |z: usize| -> Vec<usize> {
        low.iter().copied().filter(|&v| bits::xor_count(rows[v], rows[z]) as f64 <= radius).collect()
    };
    let (z0, mut b) = net
        .iter()
        .map(|&z| (z, ball(z)))
        .fold(None::<(usize, Vec<usize>)>, |acc, (z, bz)| match acc {
            // larger ball first, then smaller neighbourhood, then lower index
            Some((bz0, ref best))
                if best.len() > bz.len()
                    || (best.len() == bz.len() && bits::count(rows[bz0]) <= bits::count(rows[z])) =>
            {
                acc
            }
            _ => Some((z, bz)),
        })
        .ok_or_else(|| Error::PostconditionFailed("no vertex of low degree".into()))?;
    b.truncate(((alpha * nf / 4.0).floor() as usize).max(1));
    let a: Vec<usize> = (0..n).filter(|v| b.binary_search(v).is_err() && !bits::get(rows[z0], *v)).collect();
    if (a.len() as f64) < alpha * nf / 4.0 || a.is_empty() {
        return Err(Error::PostconditionFailed(format!("|A| = {} below alpha N / 4", a.len())));
    }
    let amask = bits::from_indices(n, a.iter().copied());
    if let Some(&bad) = b.iter().find(|&&v| bits::and_count(rows[v], &amask) as f64 > beta * a.len() as f64) {
        return Err(Error::PostconditionFailed(format!("vertex {bad} of B sees too much of A")));
    }
    Ok(SparsePair { a, b, z0, net_size: net.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "AtoB")]
    AToB,
    #[serde(rename = "BtoA")]
    BToA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WellDirected {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub direction: Direction,
    pub beta: f64,
    /// `1/(4N)` replaced the smaller staircase constant.
    pub beta_substituted: bool,
    pub rounds: usize,
    /// Some round had to cut the larger one-sided neighbourhood.
    pub overlap_fallback: bool,
}

/// A well-directed pair of a digraph whose complete part has density at most
/// `1 - alpha`. `s` is the staircase length the digraph avoids in both
/// orientations; elimination runs for at most `2s` rounds.
pub fn well_directed_pair(g: &EdgeStore, alpha: f64, s: u64) -> Result<WellDirected> {
    check_graph(g, true)?;
    let n = g.n();
    let complete = g.complete_part();
    let density = to_f64(&complete.density());
    if density > 1.0 - alpha {
        return Err(Error::TooDense { density, limit: 1.0 - alpha });
    }
    let nominal_beta = 1.0 / (6.0 * 3f64.powf(2.0 * s as f64));
    let floor_beta = 1.0 / (4.0 * n as f64);
    let (beta, beta_substituted) = if nominal_beta >= floor_beta { (nominal_beta, false) } else { (floor_beta, true) };
    let sp = sparse_pair(&complete, alpha, beta)?;
    let b0 = sp.b;
    let mut a = sp.a;
    let mut overlap_fallback = false;
    let rounds = 2 * s as usize;
    for round in 0..rounds {
        let out_in: Vec<(Vec<usize>, Vec<usize>)> = b0
            .iter()
            .map(|&b| {
                let outs = a.iter().copied().filter(|&x| g.contains(&[b, x])).collect();
                let ins = a.iter().copied().filter(|&x| g.contains(&[x, b])).collect();
                (outs, ins)
            })
            .collect();
        match out_in.iter().position(|(o, i)| !o.is_empty() && !i.is_empty()) {
            None => {
                let no_out: Vec<usize> =
                    b0.iter().zip(&out_in).filter(|(_, (o, _))| o.is_empty()).map(|(&b, _)| b).collect();
                let no_in: Vec<usize> =
                    b0.iter().zip(&out_in).filter(|(_, (_, i))| i.is_empty()).map(|(&b, _)| b).collect();
                let (b, direction) =
                    if no_out.len() >= no_in.len() { (no_out, Direction::AToB) } else { (no_in, Direction::BToA) };
                let respects = a.iter().all(|&x| {
                    b.iter().all(|&y| match direction {
                        Direction::AToB => !g.contains(&[y, x]),
                        Direction::BToA => !g.contains(&[x, y]),
                    })
                });
                if !respects || b.is_empty() {
                    return Err(Error::PostconditionFailed("pair is not well-directed".into()));
                }
                return Ok(WellDirected { a, b, direction, beta, beta_substituted, rounds: round, overlap_fallback });
            }
            Some(j) => {
                let (outs, ins) = &out_in[j];
                let cut = if 3 * outs.len() <= 2 * a.len() {
                    outs
                } else if 3 * ins.len() <= 2 * a.len() {
                    ins
                } else {
                    overlap_fallback = true;
                    if outs.len() <= ins.len() {
                        outs
                    } else {
                        ins
                    }
                };
                a.retain(|x| !cut.contains(x));
                if a.is_empty() {
                    return Err(Error::PostconditionFailed("elimination emptied A".into()));
                }
            }
        }
    }
    Err(Error::StepBudgetExceeded(rounds))
}
