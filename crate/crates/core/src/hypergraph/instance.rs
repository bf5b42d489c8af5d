use serde::{Deserialize, Serialize};

use super::formula::BoolFormula;
use super::store::EdgeStore;
use crate::algebra::{symmetry_check, AlgebraError, FieldPrime, MonomialRecord, MultiPoly, SymmetryMode};
use crate::constructions;
use crate::error::{Error, Result};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum InstanceKind {
    General,
    StronglyAlgebraic,
}

/// An algebraic `r`-uniform hypergraph on explicit vertices in `F_p^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicInstance {
    field: FieldPrime,
    r: usize,
    n: usize,
    d: u32,
    kind: InstanceKind,
    polys: Vec<MultiPoly>,
    formula: BoolFormula,
    vertices: Vec<Vec<u32>>,
    symmetry: SymmetryMode,
}

impl AlgebraicInstance {
    /// Validate and build. The symmetry mode is chosen by [`SymmetryMode::auto`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: FieldPrime,
        r: usize,
        n: usize,
        d: u32,
        kind: InstanceKind,
        polys: Vec<MultiPoly>,
        formula: BoolFormula,
        vertices: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let mode = SymmetryMode::auto(vertices.len(), r);
        Self::with_symmetry_mode(field, r, n, d, kind, polys, formula, vertices, mode)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_symmetry_mode(
        field: FieldPrime,
        r: usize,
        n: usize,
        d: u32,
        kind: InstanceKind,
        polys: Vec<MultiPoly>,
        formula: BoolFormula,
        vertices: Vec<Vec<u32>>,
        symmetry: SymmetryMode,
    ) -> Result<Self> {
        if r == 0 || n == 0 || polys.is_empty() {
            return Err(Error::Malformed("r, n and m must be at least 1".into()));
        }
        for f in &polys {
            if f.field() != field || f.blocks() != r || f.block_len() != n {
                return Err(Error::Malformed("polynomial shape does not match (p, r, n)".into()));
            }
            if f.max_block_degree() > d {
                return Err(AlgebraError::DegreeCapViolated { block: 0, degree: f.max_block_degree(), cap: d }.into());
            }
        }
        formula.validate(polys.len())?;
        if kind == InstanceKind::StronglyAlgebraic && (polys.len() != 1 || !formula.is_nonvanishing()) {
            return Err(Error::InvalidKind("stronglyAlgebraic requires m = 1 and formula NOT(A_1)".into()));
        }
        for v in &vertices {
            if v.len() != n {
                return Err(AlgebraError::ArityMismatch { expected: n, got: v.len() }.into());
            }
            for &x in v {
                field.check(x)?;
            }
        }
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]).then(a.cmp(&b)));
        if let Some(w) = order.windows(2).find(|w| vertices[w[0]] == vertices[w[1]]) {
            return Err(Error::DuplicateVertex { first: w[0], second: w[1] });
        }
        let inst = AlgebraicInstance { field, r, n, d, kind, polys, formula, vertices, symmetry };
        if !symmetry_check(inst.vertices.len(), r, symmetry, |t| inst.eval_tuple(t)) {
            return Err(Error::AsymmetricPredicate);
        }
        Ok(inst)
    }

    /// Strongly-algebraic instance: edge iff `f != 0`.
    pub fn strongly_algebraic(f: MultiPoly, d: u32, vertices: Vec<Vec<u32>>) -> Result<Self> {
        let (field, r, n) = (f.field(), f.blocks(), f.block_len());
        Self::new(field, r, n, d, InstanceKind::StronglyAlgebraic, vec![f], BoolFormula::nonvanishing(), vertices)
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }
    pub fn p(&self) -> u64 {
        self.field.modulus()
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn m(&self) -> usize {
        self.polys.len()
    }
    pub fn kind(&self) -> InstanceKind {
        self.kind
    }
    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }
    pub fn formula(&self) -> &BoolFormula {
        &self.formula
    }
    pub fn vertices(&self) -> &[Vec<u32>] {
        &self.vertices
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn symmetry_mode(&self) -> SymmetryMode {
        self.symmetry
    }

    fn blocks<'a>(&'a self, t: &[usize]) -> Vec<&'a [u32]> {
        t.iter().map(|&i| self.vertices[i].as_slice()).collect()
    }

    /// `f_i` evaluated at the concatenated vertex vectors of `t`.
    pub fn poly_value(&self, i: usize, t: &[usize]) -> u32 {
        self.polys[i].eval_blocks(&self.blocks(t))
    }

    /// Zero-pattern of `t`: entry `i` is true iff `f_{i+1}` vanishes.
    pub fn vanishing(&self, t: &[usize]) -> Vec<bool> {
        let b = self.blocks(t);
        self.polys.iter().map(|f| f.eval_blocks(&b) == 0).collect()
    }

    fn eval_tuple(&self, t: &[usize]) -> bool {
        if self.kind == InstanceKind::StronglyAlgebraic {
            return self.poly_value(0, t) != 0;
        }
        self.formula.eval(&self.vanishing(t))
    }

    /// The edge rule on an ordered tuple of distinct vertex indices.
    pub fn edge_query(&self, t: &[usize]) -> Result<bool> {
        if t.len() != self.r {
            return Err(AlgebraError::ArityMismatch { expected: self.r, got: t.len() }.into());
        }
        if let Some(&bad) = t.iter().find(|&&v| v >= self.vertices.len()) {
            return Err(Error::IndexOutOfRange { index: bad, n: self.vertices.len() });
        }
        if (0..t.len()).any(|i| t[i + 1..].contains(&t[i])) {
            return Err(Error::RepeatedVertexInTuple(t.to_vec()));
        }
        Ok(self.eval_tuple(t))
    }

    /// Directed edge rule of `H_i`: `t` is an edge iff `f_i(t) != 0`.
    pub fn di_edge(&self, i: usize, t: &[usize]) -> bool {
        self.poly_value(i, t) != 0
    }

    /// Undirected materialization of the instance hypergraph.
    pub fn materialize(&self, budget: u64, exec: Exec) -> Result<EdgeStore> {
        EdgeStore::from_fn(self.vertices.len(), self.r, false, exec, budget, |t| self.eval_tuple(t))
    }

    /// The directed hypergraphs `H_1..H_m`, one per polynomial.
    pub fn di_hypergraphs_of(&self, budget: u64, exec: Exec) -> Result<Vec<EdgeStore>> {
        (0..self.polys.len())
            .map(|i| EdgeStore::from_fn(self.vertices.len(), self.r, true, exec, budget, |t| self.di_edge(i, t)))
            .collect()
    }

    /// Same instance restricted to the listed vertices (in that order).
    pub fn restrict(&self, keep: &[usize]) -> AlgebraicInstance {
        let mut out = self.clone();
        out.vertices = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        out
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            p: Some(self.p()),
            r: Some(self.r),
            n: Some(self.n),
            d: Some(self.d),
            m: Some(self.polys.len()),
            kind: Some(self.kind),
            polys: Some(self.polys.iter().map(|f| f.to_records()).collect()),
            formula: Some(self.formula.clone()),
            vertices: Some(self.vertices.clone()),
            vertex_generator: None,
        }
    }
}

/// Canonical vertex sets (and, for the named constructions, the whole instance).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum VertexGenerator {
    /// Every point of `F_p^n`, lexicographic.
    All,
    /// `size` distinct uniform points of `F_p^n`.
    RandomSubset {
        size: usize,
        seed: u64,
    },
    Paley {
        p: u64,
    },
    FranklWilson {
        n: usize,
        p: u64,
        #[serde(default)]
        complement: bool,
    },
    ErPolarity {
        q: u64,
        #[serde(default)]
        side: ErSide,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ErSide {
    /// Edge iff `<x, y> != 0`; the strongly-algebraic side.
    #[default]
    Complement,
    /// The polarity graph itself: edge iff `<x, y> = 0`.
    Polarity,
}

/// Instance file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<InstanceKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<Vec<MonomialRecord>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<BoolFormula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_generator: Option<VertexGenerator>,
}

impl InstanceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

fn need<T>(x: Option<T>, key: &str) -> Result<T> {
    x.ok_or_else(|| Error::Malformed(format!("missing key {key:?}")))
}

/// Build and validate an instance from its file description.
pub fn build_instance(spec: &InstanceSpec) -> Result<AlgebraicInstance> {
    match (&spec.vertices, &spec.vertex_generator) {
        (Some(_), Some(_)) => return Err(Error::Malformed("give either vertices or vertexGenerator".into())),
        (None, None) => return Err(Error::Malformed("missing key \"vertices\"".into())),
        _ => {}
    }
    let named = match spec.vertex_generator {
        Some(VertexGenerator::Paley { p }) => Some(constructions::paley(p)?),
        Some(VertexGenerator::FranklWilson { n, p, complement }) => {
            Some(constructions::frankl_wilson(n, p, complement)?)
        }
        Some(VertexGenerator::ErPolarity { q, side }) => Some(constructions::er_polarity(q, side)?),
        _ => None,
    };
    if let Some(inst) = named {
        check_agrees(spec, &inst)?;
        return Ok(inst);
    }

    let field = FieldPrime::new(need(spec.p, "p")?)?;
    let r = need(spec.r, "r")?;
    let n = need(spec.n, "n")?;
    let d = need(spec.d, "d")?;
    let kind = spec.kind.unwrap_or(InstanceKind::General);
    let records = need(spec.polys.as_ref(), "polys")?;
    if let Some(m) = spec.m {
        if m != records.len() {
            return Err(Error::Malformed(format!("m = {m} but {} polynomials given", records.len())));
        }
    }
    let polys = records
        .iter()
        .map(|recs| MultiPoly::from_records(field, r, n, d, recs))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let formula = match (&spec.formula, kind) {
        (Some(f), _) => f.clone(),
        (None, InstanceKind::StronglyAlgebraic) => BoolFormula::nonvanishing(),
        (None, InstanceKind::General) => return Err(Error::Malformed("missing key \"formula\"".into())),
    };
    let vertices = match (&spec.vertices, spec.vertex_generator.clone()) {
        (Some(v), _) => v.clone(),
        (None, Some(VertexGenerator::All)) => constructions::all_points(field, n)?,
        (None, Some(VertexGenerator::RandomSubset { size, seed })) => {
            constructions::random_points(field, n, size, &mut crate::rng::rng_from_seed(seed))?
        }
        _ => unreachable!("named generators handled above"),
    };
    AlgebraicInstance::new(field, r, n, d, kind, polys, formula, vertices)
}

fn check_agrees(spec: &InstanceSpec, inst: &AlgebraicInstance) -> Result<()> {
    let clash = |key: &str| Err(Error::Malformed(format!("key {key:?} disagrees with the generator")));
    if spec.p.is_some_and(|p| p != inst.p()) {
        return clash("p");
    }
    if spec.r.is_some_and(|r| r != inst.r()) {
        return clash("r");
    }
    if spec.n.is_some_and(|n| n != inst.n()) {
        return clash("n");
    }
    if spec.d.is_some_and(|d| d != inst.d()) {
        return clash("d");
    }
    if spec.m.is_some_and(|m| m != inst.m()) {
        return clash("m");
    }
    if spec.kind.is_some_and(|k| k != inst.kind()) {
        return clash("kind");
    }
    if spec.polys.is_some() || spec.formula.is_some() {
        return Err(Error::Malformed("polys and formula are implied by the generator".into()));
    }
    Ok(())
}
