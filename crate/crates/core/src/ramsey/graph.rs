use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::clique::{dense_clique_unchecked, extend_clique};
use super::homogeneous::clamp_clique_alpha;
use super::pairs::well_directed_pair;
use super::{
    all_pairs_have_pattern, mask_indices, mask_is_edge, pair_mask, BoundContext, ExtractionTrace, JumpKind,
    RamseyResult, ResultKind, TraceStep,
};
use crate::algebra::monomial_count;
use crate::error::{Error, Result};
use crate::exact::{to_f64, to_text, Q};
use crate::hypergraph::{AlgebraicInstance, EdgeStore, DEFAULT_BUDGET};
use crate::par::Exec;
use crate::rng::child_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphRamseyConfig {
    pub exec: Exec,
    pub budget: u64,
    /// Overrides the default `4 (a_max + b_max)` cap on Case-3 steps.
    pub case3_budget: Option<usize>,
}

impl Default for GraphRamseyConfig {
    fn default() -> Self {
        GraphRamseyConfig { exec: Exec::default(), budget: DEFAULT_BUDGET, case3_budget: None }
    }
}

fn min_term(n: usize, d: u32) -> f64 {
    let (nf, df) = (n as f64, d as f64);
    if n == 1 {
        df
    } else if d <= 1 {
        0.0
    } else {
        df.min(nf * df.ln() / nf.ln())
    }
}

/// `16 m n min{d, n ln d / ln n}`, at least 1.
pub fn gamma_prime(n: usize, d: u32, m: usize) -> f64 {
    (16.0 * m as f64 * n as f64 * min_term(n, d)).max(1.0)
}

/// Ceilings on the number of big and small jumps:
/// `a <= 2m min{d, n ln d / ln n}` and `b <= 4 sqrt(n) ln s_0`.
pub fn jump_ceilings(n: usize, d: u32, m: usize) -> Result<(usize, usize)> {
    let c = monomial_count(n as u64, d as u64)?;
    let ln_s0 = m as f64 * ((c + 1) as f64).ln();
    let a = (2.0 * m as f64 * min_term(n, d)).ceil() as usize;
    let b = (4.0 * (n as f64).sqrt() * ln_s0).ceil() as usize;
    Ok((a, b))
}

struct Leaf {
    vertices: Vec<usize>,
    mask: u64,
    steps: Vec<TraceStep>,
    case: u8,
    below_bound: bool,
}

struct Search<'a> {
    inst: &'a AlgebraicInstance,
    gs: &'a [EdgeStore],
    alpha: f64,
    s_wd: u64,
    seed: u64,
    case3_left: usize,
    nodes: u64,
    path: Vec<TraceStep>,
    best: Option<Leaf>,
    notes: Vec<String>,
    done: bool,
    exhausted: bool,
}

impl Search<'_> {
    fn explore(&mut self, u: Vec<usize>, s: Vec<u64>, level: usize) {
        if self.done {
            return;
        }
        let node = self.nodes;
        self.nodes += 1;
        let m = self.gs.len();
        let mut s = s;
        for (i, si) in s.iter_mut().enumerate() {
            // an edgeless G_i[U] contains no staircase of length 1
            if *si > 1 && !u.iter().any(|&x| u.iter().any(|&y| x != y && self.gs[i].contains(&[x, y]))) {
                *si = 1;
            }
        }
        let active: Vec<usize> = (0..m).filter(|&i| s[i] > 1).collect();
        let step = |case: u8, jump: JumpKind| TraceStep { level, case, size: u.len(), bookkeeping: s.clone(), jump };
        if active.is_empty() {
            self.path.push(step(1, JumpKind::NotApplicable));
            self.leaf(u.clone(), 0, 1, false);
            self.path.pop();
            return;
        }
        let complete: Vec<EdgeStore> = active.iter().map(|&i| self.gs[i].induced(&u).complete_part()).collect();
        let sparse = complete.iter().position(|c| to_f64(&c.density()) < 1.0 - self.alpha);
        let Some(pos) = sparse else {
            let hi = EdgeStore::from_fn(u.len(), 2, false, Exec::Sequential, u64::MAX, |t| {
                complete.iter().all(|c| c.contains(t))
            })
            .expect("unbounded budget");
            let a = clamp_clique_alpha(self.alpha * m as f64, u.len(), 2, &mut self.notes);
            let dc = dense_clique_unchecked(&hi, a, child_seed(self.seed, node));
            let all: Vec<usize> = (0..u.len()).collect();
            let ext = extend_clique(&hi, &dc.clique, &all);
            let vertices = ext.iter().map(|&j| u[j]).collect();
            let mask = active.iter().fold(0u64, |acc, &i| acc | 1 << i);
            self.path.push(step(2, JumpKind::NotApplicable));
            self.leaf(vertices, mask, 2, dc.below_bound);
            self.path.pop();
            return;
        };
        if self.case3_left == 0 {
            self.exhausted = true;
            self.done = true;
            return;
        }
        self.case3_left -= 1;
        let i = active[pos];
        let g = self.gs[i].induced(&u);
        let wd = match well_directed_pair(&g, self.alpha, self.s_wd) {
            Ok(wd) => wd,
            Err(e) => {
                self.notes.push(format!("level {level}: branch abandoned ({e})"));
                return;
            }
        };
        if wd.beta_substituted && !self.notes.iter().any(|n| n.starts_with("beta")) {
            self.notes.push(format!("beta substituted by 1/(4N) = {:.3e}", wd.beta));
        }
        let si = s[i];
        let root = (1..).take_while(|k: &u64| k * k <= self.inst.n() as u64).last().unwrap_or(1);
        let t = (si / root).clamp(1, si - 1);
        let a: Vec<usize> = wd.a.iter().map(|&j| u[j]).collect();
        let b: Vec<usize> = wd.b.iter().map(|&j| u[j]).collect();
        let mut sb = s.clone();
        sb[i] = t;
        self.path.push(step(3, JumpKind::Big));
        self.explore(b, sb, level + 1);
        self.path.pop();
        if self.done {
            return;
        }
        let mut sa = s.clone();
        sa[i] = si - t;
        self.path.push(step(3, JumpKind::Small));
        self.explore(a, sa, level + 1);
        self.path.pop();
    }

    /// Record a leaf; if the bookkeeping was wrong, prune to a verified set.
    fn leaf(&mut self, vertices: Vec<usize>, mask: u64, case: u8, below_bound: bool) {
        let exact = all_pairs_have_pattern(self.inst, &vertices, mask);
        let vertices = if exact {
            vertices
        } else {
            self.notes.push(format!("leaf of size {} failed verification and was pruned", vertices.len()));
            prune_to_pattern(self.inst, vertices, mask)
        };
        if self
            .best
            .as_ref()
            .is_none_or(|b| vertices.len() > b.vertices.len() || (exact && vertices.len() == b.vertices.len()))
        {
            self.best = Some(Leaf { vertices, mask, steps: self.path.clone(), case, below_bound });
        }
        if exact {
            self.done = true;
        }
    }
}

/// Drop the vertex in the most violating pairs (lowest on ties) until every
/// pair realizes `mask` in both orientations.
fn prune_to_pattern(inst: &AlgebraicInstance, mut vs: Vec<usize>, mask: u64) -> Vec<usize> {
    loop {
        let bad: Vec<usize> = vs
            .iter()
            .map(|&x| {
                vs.iter()
                    .filter(|&&y| y != x && (pair_mask(inst, x, y) != mask || pair_mask(inst, y, x) != mask))
                    .count()
            })
            .collect();
        match (0..vs.len()).max_by(|&a, &b| bad[a].cmp(&bad[b]).then(b.cmp(&a))) {
            Some(w) if bad[w] > 0 => {
                vs.remove(w);
            }
            _ => return vs,
        }
    }
}

/// A set on which every pair realizes one zero-pattern, by the small-jump /
/// big-jump procedure with B-first backtracking.
pub fn graph_ramsey(inst: &AlgebraicInstance, beta: Q, seed: u64, cfg: &GraphRamseyConfig) -> Result<RamseyResult> {
    if inst.r() != 2 {
        return Err(Error::Unsupported("graphs (r = 2)".into()));
    }
    if *beta.numer() == 0 || beta >= Q::from_integer(1) {
        return Err(Error::BadParameters("need 0 < beta < 1".into()));
    }
    let (n, d, m, nv) = (inst.n(), inst.d(), inst.m(), inst.num_vertices());
    let gs = inst.di_hypergraphs_of(cfg.budget, cfg.exec)?;
    let gp = gamma_prime(n, d, m);
    let bf = to_f64(&beta);
    let alpha = (nv.max(1) as f64).powf(-bf / gp);
    let s0 = monomial_count(n as u64, d as u64)? + 1;
    let s_wd = monomial_count(n as u64, 2 * d as u64)? + 1;
    let (a_max, b_max) = jump_ceilings(n, d, m)?;
    let case3 = cfg.case3_budget.unwrap_or((4 * (a_max + b_max)).max(1));
    let mut search = Search {
        inst,
        gs: &gs,
        alpha,
        s_wd,
        seed,
        case3_left: case3,
        nodes: 0,
        path: Vec::new(),
        best: None,
        notes: vec![format!("alpha = {alpha:.6}, case-3 budget {case3}")],
        done: false,
        exhausted: false,
    };
    search.explore((0..nv).collect(), vec![s0; m], 0);
    let mut notes = std::mem::take(&mut search.notes);
    notes.push(format!("{} nodes explored", search.nodes));
    let exhausted = search.exhausted;
    let leaf = search.best.unwrap_or_else(|| {
        notes.push("no leaf reached; returning a single vertex".into());
        Leaf { vertices: (0..nv.min(1)).collect(), mask: 0, steps: Vec::new(), case: 1, below_bound: true }
    });
    let kind = if mask_is_edge(inst, leaf.mask) { ResultKind::Clique } else { ResultKind::IndependentSet };
    let target = if leaf.case == 1 { (nv as f64).powf(1.0 - bf) } else { (nv as f64).powf(bf / gp) / (4.0 * m as f64) };
    let mut res = RamseyResult {
        kind,
        achieved_size: leaf.vertices.len(),
        vertices: leaf.vertices,
        pattern: Some(mask_indices(leaf.mask, m)),
        color: None,
        bound_context: BoundContext {
            n: nv,
            gamma: None,
            gamma_prime: Some(gp),
            alpha,
            beta: Some(to_text(&beta)),
            target_size: target,
        },
        trace: ExtractionTrace { rng_seed: seed, steps: leaf.steps, notes },
        verified: false,
        below_bound: leaf.below_bound,
        budget_exhausted: exhausted,
    };
    res.verified = res.verify(inst, None)?;
    Ok(res)
}

/// Colours of zero-patterns: key bit `i` set iff `f_i != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColorMap(pub BTreeMap<u64, u32>);

impl ColorMap {
    pub fn color_of(&self, mask: u64) -> Option<u32> {
        self.0.get(&mask).copied()
    }

    /// The colour map must cover every realized pattern and give both
    /// orientations of a pair the same colour.
    pub fn check(&self, inst: &AlgebraicInstance) -> Result<()> {
        let nv = inst.num_vertices();
        for x in 0..nv {
            for y in x + 1..nv {
                let (f, b) = (pair_mask(inst, x, y), pair_mask(inst, y, x));
                let (cf, cb) = (self.color_of(f), self.color_of(b));
                if cf.is_none() || cb.is_none() {
                    let missing = if cf.is_none() { f } else { b };
                    return Err(Error::BadParameters(format!("colour map misses pattern {missing:#b}")));
                }
                if cf != cb {
                    return Err(Error::BadParameters(format!("pair ({x}, {y}) gets two colours")));
                }
            }
        }
        Ok(())
    }
}

/// Monochromatic clique of an algebraic colouring of `K_N`.
pub fn multicolor_ramsey(
    inst: &AlgebraicInstance,
    colors: &ColorMap,
    seed: u64,
    cfg: &GraphRamseyConfig,
) -> Result<RamseyResult> {
    colors.check(inst)?;
    let beta = Q::new(1, 2);
    let mut res = graph_ramsey(inst, beta, seed, cfg)?;
    let mask = res.pattern.as_ref().map_or(0, |p| p.iter().fold(0u64, |acc, &i| acc | 1 << i));
    res.kind = ResultKind::MonochromaticClique;
    res.color = colors.color_of(mask).or_else(|| colors.0.values().next().copied());
    let gp = res.bound_context.gamma_prime.unwrap_or(1.0);
    res.bound_context.target_size = (res.bound_context.n as f64).powf(1.0 / (2.0 * gp)) / (4.0 * inst.m() as f64);
    res.verified = res.verify(inst, Some(colors))?;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldPrime, MultiPoly};
    use crate::constructions::{frankl_wilson, paley};
    use crate::exact::q;
    use crate::hypergraph::{BoolFormula, InstanceKind};

    fn line(p: u64, f: MultiPoly) -> AlgebraicInstance {
        let fp = FieldPrime::new(p).unwrap();
        AlgebraicInstance::strongly_algebraic(f, 1, (0..fp.get()).map(|x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn gamma_prime_values() {
        // Paley(17): n = 1, d = 8, m = 1
        assert_eq!(gamma_prime(1, 8, 1), 128.0);
        assert_eq!(gamma_prime(5, 1, 1), 1.0);
        let g = gamma_prime(4, 16, 2);
        assert!((g - 16.0 * 2.0 * 4.0 * 8.0).abs() < 1e-9);
        assert_eq!(jump_ceilings(1, 8, 1).unwrap().0, 16);
    }

    #[test]
    fn never_zero_polynomial() {
        let f7 = FieldPrime::new(7).unwrap();
        let inst = line(7, MultiPoly::constant(f7, 2, 1, 1, 3));
        let res = graph_ramsey(&inst, q(1, 2), 0, &GraphRamseyConfig::default()).unwrap();
        assert_eq!(res.pattern, Some(vec![0]));
        assert_eq!(res.vertices, (0..7).collect::<Vec<_>>());
        assert!(res.verified && res.kind == ResultKind::Clique);
    }

    #[test]
    fn zero_polynomial_keeps_everything() {
        let f7 = FieldPrime::new(7).unwrap();
        let zero = MultiPoly::zero(f7, 2, 1, 1);
        let inst = AlgebraicInstance::new(
            f7,
            2,
            1,
            1,
            InstanceKind::General,
            vec![zero],
            BoolFormula::nonvanishing(),
            (0..7).map(|x| vec![x]).collect(),
        )
        .unwrap();
        let res = graph_ramsey(&inst, q(1, 2), 0, &GraphRamseyConfig::default()).unwrap();
        assert_eq!(res.pattern, Some(vec![]));
        assert_eq!(res.vertices.len(), 7);
        assert!(res.verified && res.kind == ResultKind::IndependentSet);
    }

    #[test]
    fn paley17_seeds() {
        let inst = paley(17).unwrap();
        for seed in 0..5 {
            let res = graph_ramsey(&inst, q(1, 2), seed, &GraphRamseyConfig::default()).unwrap();
            assert!(res.verified);
            assert!(res.achieved_size >= 2);
            assert_eq!(res.bound_context.gamma_prime, Some(128.0));
        }
    }

    #[test]
    fn frankl_wilson_uses_case_three() {
        let inst = frankl_wilson(5, 2, false).unwrap();
        for seed in 0..5 {
            let res = graph_ramsey(&inst, q(1, 2), seed, &GraphRamseyConfig::default()).unwrap();
            assert!(res.verified, "{:?}", res.trace);
            let sizes: Vec<usize> = res.trace.steps.iter().map(|s| s.size).collect();
            assert!(sizes.windows(2).all(|w| w[1] < w[0]));
            let again = graph_ramsey(&inst, q(1, 2), seed, &GraphRamseyConfig::default()).unwrap();
            assert_eq!(res, again);
        }
    }

    #[test]
    fn quadratic_residue_two_colouring() {
        let inst = paley(17).unwrap();
        let colors = ColorMap([(1u64, 0u32), (0, 1)].into_iter().collect());
        for seed in 0..5 {
            let res = multicolor_ramsey(&inst, &colors, seed, &GraphRamseyConfig::default()).unwrap();
            assert!(res.verified);
            assert_eq!(res.kind, ResultKind::MonochromaticClique);
            let c = res.color.unwrap();
            for (j, &x) in res.vertices.iter().enumerate() {
                for &y in &res.vertices[j + 1..] {
                    assert_eq!(colors.color_of(pair_mask(&inst, x, y)), Some(c));
                }
            }
        }
    }

    #[test]
    fn three_colours_from_two_polynomials() {
        let f5 = FieldPrime::new(5).unwrap();
        // x + y and x y
        let f = MultiPoly::new(f5, 2, 1, 1, [(1, vec![1, 0]), (1, vec![0, 1])]).unwrap();
        let g = MultiPoly::new(f5, 2, 1, 1, [(1, vec![1, 1])]).unwrap();
        let inst = AlgebraicInstance::new(
            f5,
            2,
            1,
            1,
            InstanceKind::General,
            vec![f, g],
            BoolFormula::Atom(1),
            (0..5).map(|x| vec![x]).collect(),
        )
        .unwrap();
        let colors = ColorMap([(0u64, 0u32), (1, 1), (2, 2), (3, 2)].into_iter().collect());
        let res = multicolor_ramsey(&inst, &colors, 1, &GraphRamseyConfig::default()).unwrap();
        assert!(res.verified);
        assert!(res.color.is_some());
        let partial = ColorMap([(3u64, 0u32)].into_iter().collect());
        assert!(matches!(
            multicolor_ramsey(&inst, &partial, 1, &GraphRamseyConfig::default()),
            Err(Error::BadParameters(_))
        ));
    }

    #[test]
    fn rejects_hypergraphs_and_bad_beta() {
        let inst = paley(13).unwrap();
        assert!(graph_ramsey(&inst, q(0, 1), 0, &GraphRamseyConfig::default()).is_err());
        assert!(graph_ramsey(&inst, q(1, 1), 0, &GraphRamseyConfig::default()).is_err());
    }
}
