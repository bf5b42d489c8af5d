//! `algramsey`: build algebraic instances, extract homogeneous sets, compute
//! regular partitions, and run bound-verification sweeps.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 verification failure, 4 budget.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algebraic_ramsey::constructions::{random_algebraic, FormulaShape, RandomParams};
use algebraic_ramsey::exact::{parse as parse_q, Q};
use algebraic_ramsey::hypergraph::{
    build_instance, AlgebraicInstance, ErSide, InstanceKind, InstanceSpec, VertexGenerator, DEFAULT_BUDGET,
};
use algebraic_ramsey::oracles::{
    max_balanced_biclique_exact, max_clique_checked, max_independent_checked, verify_witness, Witness, ORACLE_BUDGET,
};
use algebraic_ramsey::par::Exec;
use algebraic_ramsey::ramsey::{
    graph_ramsey, hypergraph_ramsey, multicolor_ramsey, pair_mask, ColorMap, GraphRamseyConfig, HomogeneousConfig,
};
use algebraic_ramsey::regularity::algebraic_regularity;
use algebraic_ramsey::sweeps::{self, CheckRow};
use algebraic_ramsey::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

const USAGE: u8 = 1;
const VALIDATION: u8 = 2;
const VERIFICATION: u8 = 3;
const BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "algramsey", version, about = "Algebraic hypergraphs over prime fields")]
struct Cli {
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance file and print its summary.
    Build {
        instance: PathBuf,
        /// Materialize the edge store and report the edge count.
        #[arg(long)]
        materialize: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Extract a clique or independent set (or monochromatic clique).
    Ramsey {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Hypergraph)]
        mode: Mode,
        /// Exponent for the graph mode, as `num/den` or an integer.
        #[arg(long, default_value = "1/2")]
        beta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Colour map for the multicolor mode: JSON object from pattern mask to colour.
        #[arg(long)]
        colors: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equitable partition whose part tuples are empty or nearly complete.
    Regularity {
        instance: PathBuf,
        #[arg(long, default_value = "1/5")]
        epsilon: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant sweeps and write a CSV of per-case checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum with a witness.
    Oracle {
        instance: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, default_value_t = ORACLE_BUDGET)]
        budget: u64,
    },
    /// Write an instance file for a named construction or a random instance.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Graph,
    Hypergraph,
    Multicolor,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Tensor,
    Zeropattern,
    Patterns,
    Mixing,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Clique,
    Independent,
    Biclique,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Nonvanishing,
    Any,
    All,
}

#[derive(Subcommand)]
enum Family {
    Paley {
        #[arg(long)]
        p: u64,
    },
    FranklWilson {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        complement: bool,
    },
    Er {
        #[arg(long)]
        q: u64,
        /// The polarity graph itself instead of its complement.
        #[arg(long)]
        polarity: bool,
    },
    Random {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        vertices: usize,
        #[arg(long, value_enum, default_value_t = Shape::Nonvanishing)]
        shape: Shape,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded { .. } | Error::StepBudgetExceeded(_) | Error::ResampleBudgetExceeded => BUDGET,
            Error::VerificationFailed(_) | Error::PostconditionFailed(_) | Error::InternalInconsistency(_) => {
                VERIFICATION
            }
            e if e.is_validation() => VALIDATION,
            _ => USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn load(path: &Path) -> Result<AlgebraicInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(USAGE, format!("{}: {e}", path.display())))?;
    Ok(build_instance(&InstanceSpec::from_json(&text)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(USAGE, format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("reports serialize")
}

fn rational(text: &str, name: &str) -> Result<Q, Failure> {
    parse_q(text).ok_or_else(|| Failure::new(USAGE, format!("--{name} must be a rational like 1/5, got {text:?}")))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Summary {
    #[serde(rename = "N")]
    num_vertices: usize,
    r: usize,
    n: usize,
    d: u32,
    m: usize,
    p: u64,
    kind: InstanceKind,
    symmetry_mode: algebraic_ramsey::algebra::SymmetryMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_count: Option<u64>,
}

fn cmd_build(cli: &Cli, instance: &Path, materialize: bool, budget: u64) -> Outcome {
    let inst = load(instance)?;
    let edge_count = if materialize { Some(inst.materialize(budget, exec(cli))?.edge_count()) } else { None };
    let summary = Summary {
        num_vertices: inst.num_vertices(),
        r: inst.r(),
        n: inst.n(),
        d: inst.d(),
        m: inst.m(),
        p: inst.p(),
        kind: inst.kind(),
        symmetry_mode: inst.symmetry_mode(),
        edge_count,
    };
    emit(None, &to_json(&summary))?;
    Ok(0)
}

/// One colour per realized zero-pattern unless a map is given.
fn colour_map(inst: &AlgebraicInstance, path: Option<&Path>) -> Result<ColorMap, Failure> {
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|e| Failure::new(USAGE, format!("{}: {e}", path.display())))?;
        let raw: BTreeMap<String, u32> =
            serde_json::from_str(&text).map_err(|e| Failure::new(VALIDATION, format!("colour map: {e}")))?;
        let mut map = BTreeMap::new();
        for (k, v) in raw {
            let mask = k
                .parse::<u64>()
                .map_err(|_| Failure::new(VALIDATION, format!("colour map key {k:?} is not a mask")))?;
            map.insert(mask, v);
        }
        return Ok(ColorMap(map));
    }
    let mut map = BTreeMap::new();
    let nv = inst.num_vertices();
    for x in 0..nv {
        for y in x + 1..nv {
            let mask = pair_mask(inst, x, y);
            map.insert(mask, mask as u32);
        }
    }
    Ok(ColorMap(map))
}

#[allow(clippy::too_many_arguments)]
fn cmd_ramsey(
    cli: &Cli,
    instance: &Path,
    mode: Mode,
    beta: &str,
    seed: u64,
    colors: Option<&Path>,
    budget: u64,
    out: Option<&Path>,
) -> Outcome {
    let inst = load(instance)?;
    if !matches!(mode, Mode::Hypergraph) && inst.r() != 2 {
        return Err(Failure::new(
            USAGE,
            format!("the graph and multicolor modes need r = 2, the instance has r = {}", inst.r()),
        ));
    }
    let gcfg = GraphRamseyConfig { exec: exec(cli), budget, case3_budget: None };
    let (res, ok) = match mode {
        Mode::Hypergraph => {
            let res = hypergraph_ramsey(&inst, seed, &HomogeneousConfig { alpha: None, exec: exec(cli), budget })?;
            let ok = Witness::from_result(&res).is_some_and(|w| verify_witness(&inst, &w).ok);
            (res, ok)
        }
        Mode::Graph => {
            let res = graph_ramsey(&inst, rational(beta, "beta")?, seed, &gcfg)?;
            let ok = Witness::from_result(&res).is_some_and(|w| verify_witness(&inst, &w).ok);
            (res, ok)
        }
        Mode::Multicolor => {
            let map = colour_map(&inst, colors)?;
            let res = multicolor_ramsey(&inst, &map, seed, &gcfg)?;
            let ok = res.verify(&inst, Some(&map))?;
            (res, ok)
        }
    };
    emit(out, &to_json(&res))?;
    if ok && res.verified {
        Ok(0)
    } else {
        eprintln!("verification failed: the returned set is not homogeneous");
        Ok(VERIFICATION)
    }
}

fn cmd_regularity(cli: &Cli, instance: &Path, epsilon: &str, seed: u64, out: Option<&Path>) -> Outcome {
    let inst = load(instance)?;
    if inst.kind() != InstanceKind::StronglyAlgebraic {
        return Err(Failure::new(USAGE, "regularity needs a stronglyAlgebraic instance"));
    }
    let eps = rational(epsilon, "epsilon")?;
    match algebraic_regularity(&inst, eps, seed, exec(cli)) {
        Ok(reg) => {
            emit(out, &to_json(&reg))?;
            Ok(0)
        }
        Err(Error::VerificationFailed(report)) => {
            emit(out, &to_json(&report))?;
            eprintln!(
                "verification failed: bad fraction {}, K = {}, K within bounds: {}",
                algebraic_ramsey::exact::to_text(&report.bad_fraction),
                report.k,
                report.k_bounds_ok
            );
            Ok(VERIFICATION)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(cli: &Cli, suite: SuiteArg, seed: u64, out: Option<&Path>) -> Outcome {
    let ex = exec(cli);
    let want = |s: SuiteArg| suite == s || suite == SuiteArg::All;
    let mut rows: Vec<CheckRow> = Vec::new();
    if want(SuiteArg::Tensor) {
        rows.extend(sweeps::tensor_sweep(seed, ex));
        rows.extend(sweeps::semidiagonal_sweep(seed, ex));
    }
    if want(SuiteArg::Zeropattern) {
        rows.extend(sweeps::zero_pattern_sweep(seed, ex));
    }
    if want(SuiteArg::Patterns) {
        rows.extend(sweeps::forbidden_m_sweep(seed, ex));
        rows.extend(sweeps::forbidden_n_sweep(seed, ex));
    }
    if want(SuiteArg::Mixing) {
        rows.extend(sweeps::mixing_sweep(ex));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "case", "params", "observed", "bound", "pass", "claim", "detail"])
        .map_err(|e| Failure::new(USAGE, e.to_string()))?;
    for r in &rows {
        w.write_record([
            r.suite.name(),
            &r.case.to_string(),
            &r.params,
            &r.observed.to_string(),
            &r.bound.to_string(),
            if r.pass { "pass" } else { "fail" },
            r.suite.claim(),
            &r.detail,
        ])
        .map_err(|e| Failure::new(USAGE, e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(USAGE, e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    emit(out, text.trim_end())?;
    let failing = rows.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {failing} failing", rows.len());
    Ok(if failing == 0 { 0 } else { VERIFICATION })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OracleReport {
    what: &'static str,
    value: usize,
    witness: Witness,
}

fn cmd_oracle(cli: &Cli, instance: &Path, what: What, budget: u64) -> Outcome {
    let inst = load(instance)?;
    let h = inst.materialize(DEFAULT_BUDGET, exec(cli))?;
    let report = match what {
        What::Clique => {
            let o = max_clique_checked(&h, budget)?;
            OracleReport { what: "clique", value: o.size, witness: Witness::Clique { vertices: o.witness } }
        }
        What::Independent => {
            let o = max_independent_checked(&h, budget)?;
            OracleReport {
                what: "independent",
                value: o.size,
                witness: Witness::IndependentSet { vertices: o.witness },
            }
        }
        What::Biclique => {
            let b = max_balanced_biclique_exact(&h, budget)?;
            OracleReport { what: "biclique", value: b.t, witness: Witness::Biclique { a: b.a, b: b.b } }
        }
    };
    if !verify_witness(&inst, &report.witness).ok {
        return Err(Failure::new(VERIFICATION, "oracle witness failed re-verification"));
    }
    emit(None, &to_json(&report))?;
    Ok(0)
}

fn cmd_generate(family: &Family, out: Option<&Path>) -> Outcome {
    let named = |g: VertexGenerator| InstanceSpec {
        p: None,
        r: None,
        n: None,
        d: None,
        m: None,
        kind: None,
        polys: None,
        formula: None,
        vertices: None,
        vertex_generator: Some(g),
    };
    let spec = match *family {
        Family::Paley { p } => named(VertexGenerator::Paley { p }),
        Family::FranklWilson { n, p, complement } => named(VertexGenerator::FranklWilson { n, p, complement }),
        Family::Er { q, polarity } => {
            named(VertexGenerator::ErPolarity { q, side: if polarity { ErSide::Polarity } else { ErSide::Complement } })
        }
        Family::Random { p, n, d, m, r, vertices, shape, seed } => {
            let shape = match shape {
                Shape::Nonvanishing => FormulaShape::Nonvanishing,
                Shape::Any => FormulaShape::AnyNonvanishing,
                Shape::All => FormulaShape::AllVanishing,
            };
            random_algebraic(&RandomParams { p, n, d, m, r, num_vertices: vertices, shape, seed })?.to_spec()
        }
    };
    // the file must load back
    build_instance(&spec)?;
    emit(out, &spec.to_json())?;
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Build { instance, materialize, budget } => cmd_build(cli, instance, *materialize, *budget),
        Command::Ramsey { instance, mode, beta, seed, colors, budget, out } => {
            cmd_ramsey(cli, instance, *mode, beta, *seed, colors.as_deref(), *budget, out.as_deref())
        }
        Command::Regularity { instance, epsilon, seed, out } => {
            cmd_regularity(cli, instance, epsilon, *seed, out.as_deref())
        }
        Command::Verify { suite, seed, out } => cmd_verify(cli, *suite, *seed, out.as_deref()),
        Command::Oracle { instance, what, budget } => cmd_oracle(cli, instance, *what, *budget),
        Command::Generate { family, out } => cmd_generate(family, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
