//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure or unexpected invariant,
//! 2 bad input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classifier::{classify, structural_violations, ClassificationResult};
use crate::error::{Error, Result};
use crate::galois::{frontier_scan, galois_perm};
use crate::graphs::{block_graph, enumerate_norm_lt2, parse_adjacency, radius_lt2, spectrum_match_graphs, DynkinGraph, GraphKind};
use crate::invariants::{build_series, theorem_list, verify_physical, Family, Invariant};
use crate::modular::ModularData;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ade", version, about = "Exact classification of affine A1 modular invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate every physical invariant at one n.
    Classify {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write one matrix file per invariant into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Classify a range of n in parallel and tabulate.
    Sweep {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a matrix file against the physical axioms.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        file: PathBuf,
    },
    /// Galois permutation data and the frontier scan.
    Galois(GaloisArgs),
    /// Inspect a named invariant.
    Analyze {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        name: Family,
        #[arg(long)]
        exponents: bool,
        #[arg(long)]
        blocks: bool,
        /// With --blocks, print the block graph in DOT.
        #[arg(long, requires = "blocks")]
        dot: bool,
        /// Print the partition function.
        #[arg(long)]
        z: bool,
    },
    /// Classify a symmetric nonnegative integer matrix, or enumerate all with Perron root below 2.
    Nimrep(NimrepArgs),
    /// Catalog graphs whose spectrum matches the exponents of a named invariant.
    SpectrumGraphs {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        name: Family,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "mode")]
pub struct GaloisMode {
    #[arg(long)]
    pub scan: bool,
    #[arg(long, requires = "a")]
    pub ell: Option<i64>,
}

#[derive(Args, Debug)]
pub struct GaloisArgs {
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub mode: GaloisMode,
    #[arg(long, requires = "ell")]
    pub a: Option<u64>,
}

#[derive(Args, Debug)]
pub struct NimrepArgs {
    #[arg(long, conflicts_with = "enumerate", required_unless_present = "enumerate")]
    pub file: Option<PathBuf>,
    #[arg(long, requires = "max_nodes")]
    pub enumerate: bool,
    #[arg(long)]
    pub max_nodes: Option<usize>,
    #[arg(long, requires = "enumerate")]
    pub allow_loops: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::LemmaViolation(_) => EXIT_FAILURE,
                _ => EXIT_BAD_INPUT,
            }
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Classify { n, format, emit } => cmd_classify(n, format, emit.as_deref(), out),
        Command::Sweep { from, to, jobs } => {
            let summary = run_sweep(from, to, jobs)?;
            write!(out, "{}", summary.table())?;
            Ok(if summary.passed { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Verify { n, file } => cmd_verify(n, &file, out),
        Command::Galois(g) => cmd_galois(g, out),
        Command::Analyze {
            n,
            name,
            exponents,
            blocks,
            dot,
            z,
        } => cmd_analyze(n, name, exponents, blocks, dot, z, out),
        Command::Nimrep(a) => cmd_nimrep(a, out),
        Command::SpectrumGraphs { n, name } => {
            let m = named(n, name)?;
            let mass = m.exponents().len();
            let found = spectrum_match_graphs(n, &m, mass)?;
            writeln!(out, "{} at n={n}: exponents {:?}", m.name(), m.exponents())?;
            if found.is_empty() {
                writeln!(out, "no catalog graph on {mass} nodes has this spectrum")?;
            }
            for g in found {
                writeln!(out, "{}", g.kind)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn named(n: u64, family: Family) -> Result<Invariant> {
    ModularData::new(n)?;
    build_series(n, family)
}

/// JSON form of a classification.
pub fn classification_json(r: &ClassificationResult) -> serde_json::Value {
    let inv = |m: &Invariant| {
        json!({
            "label": m.label().map(|l| l.to_string()),
            "name": m.name(),
            "matrix": m.entries(),
            "exponents": m.exponents(),
            "blocks": m.blocks(),
        })
    };
    json!({
        "n": r.n,
        "invariants": r.invariants.iter().map(inv).collect::<Vec<_>>(),
        "commutant_dimension": r.commutant_dimension,
        "unexpected": r.unexpected.iter().map(|m| m.entries()).collect::<Vec<_>>(),
    })
}

/// File name used by `classify --emit`.
pub fn emit_file_name(m: &Invariant) -> String {
    format!("n{}_{}.txt", m.n(), m.name())
}

fn cmd_classify(n: u64, format: Format, emit: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let r = classify(n)?;
    let md = ModularData::new(n)?;
    let mut problems = Vec::new();
    for m in &r.invariants {
        for v in structural_violations(&md, m)? {
            problems.push(format!("{}: {v}", m.name()));
        }
    }
    if let Some(dir) = emit {
        std::fs::create_dir_all(dir)?;
        for m in &r.invariants {
            std::fs::write(dir.join(emit_file_name(m)), m.to_matrix_text())?;
        }
    }
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&classification_json(&r)).expect("serializable"))?,
        Format::Text => {
            writeln!(
                out,
                "n = {n}: {} invariant(s), commutant dimension {}",
                r.invariants.len(),
                r.commutant_dimension
            )?;
            for m in &r.invariants {
                writeln!(out, "{:>8}  Z = {}", m.name(), m.render_partition_function())?;
            }
            for m in &r.unexpected {
                writeln!(out, "UNEXPECTED invariant:\n{}", m.to_matrix_text())?;
            }
        }
    }
    for p in &problems {
        writeln!(out, "VIOLATION {p}")?;
    }
    Ok(if r.unexpected.is_empty() && problems.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub count: usize,
    pub labels: Vec<String>,
    pub commutant_dimension: usize,
    pub unexpected: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub passed: bool,
}

impl SweepSummary {
    pub fn table(&self) -> String {
        let mut s = format!("{:>4} {:>5} {:>4} {:>10} {:>9}  labels\n", "n", "count", "dim", "unexpected", "seconds");
        for r in &self.rows {
            s += &format!(
                "{:>4} {:>5} {:>4} {:>10} {:>9.3}  {}\n",
                r.n,
                r.count,
                r.commutant_dimension,
                r.unexpected,
                r.seconds,
                r.labels.join(" ")
            );
        }
        s += if self.passed { "PASS\n" } else { "FAIL\n" };
        s
    }

    /// Rows without timings, for comparing runs.
    pub fn untimed(&self) -> Vec<SweepRow> {
        self.rows.iter().map(|r| SweepRow { seconds: 0.0, ..r.clone() }).collect()
    }
}

/// Classifies every `n` in `from..=to` on `workers` threads.
pub fn run_sweep(from: u64, to: u64, workers: usize) -> Result<SweepSummary> {
    if from < 3 {
        return Err(Error::LevelTooSmall(from as i64));
    }
    if from > to {
        return Err(Error::Invalid(format!("empty range {from}..={to}")));
    }
    if workers == 0 {
        return Err(Error::Invalid("worker count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let rows: Vec<Result<SweepRow>> = pool.install(|| {
        (from..=to)
            .into_par_iter()
            .map(|n| {
                let start = Instant::now();
                let r = classify(n)?;
                Ok(SweepRow {
                    n,
                    count: r.invariants.len(),
                    labels: r.invariants.iter().map(Invariant::name).collect(),
                    commutant_dimension: r.commutant_dimension,
                    unexpected: r.unexpected.len(),
                    seconds: start.elapsed().as_secs_f64(),
                })
            })
            .collect()
    });
    let rows: Vec<SweepRow> = rows.into_iter().collect::<Result<_>>()?;
    let passed = rows.iter().all(|r| r.unexpected == 0);
    Ok(SweepSummary { rows, passed })
}

fn cmd_verify(n: u64, file: &Path, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(file)?;
    let m = Invariant::from_matrix_text(&text)?;
    if m.n() != n {
        return Err(Error::Invalid(format!("file is for n = {}, expected {n}", m.n())));
    }
    let md = ModularData::new(n)?;
    let report = verify_physical(&md, &m)?;
    if !report.passed() {
        writeln!(out, "FAIL: {}", report.failed_axioms().join(", "))?;
        for (a, b) in &report.s_violations {
            writeln!(out, "  S-commutation fails at ({a},{b})")?;
        }
        for (a, b) in &report.t_violations {
            writeln!(out, "  T-selection fails at ({a},{b})")?;
        }
        return Ok(EXIT_FAILURE);
    }
    let problems = structural_violations(&md, &m)?;
    let known = theorem_list(n)?.into_iter().find(|t| t.same_matrix(&m));
    match &known {
        Some(t) => writeln!(out, "PASS: physical invariant {}", t.name())?,
        None => writeln!(out, "PASS: physical invariant, not in the A-D-E list")?,
    }
    for p in &problems {
        writeln!(out, "VIOLATION {p}")?;
    }
    Ok(if known.is_some() && problems.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

fn format_set(v: &[u64]) -> String {
    format!("{{{}}}", v.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

fn cmd_galois(g: GaloisArgs, out: &mut dyn Write) -> Result<i32> {
    ModularData::new(g.n)?;
    if g.mode.scan {
        writeln!(out, "{}", format_set(&frontier_scan(g.n)))?;
    } else if let (Some(ell), Some(a)) = (g.mode.ell, g.a) {
        let (image, sign) = galois_perm(g.n, ell, a)?;
        writeln!(out, "[{ell}*{a}] = {image}, eps = {sign:+}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_analyze(n: u64, family: Family, exponents: bool, blocks: bool, dot: bool, z: bool, out: &mut dyn Write) -> Result<i32> {
    let m = named(n, family)?;
    let md = ModularData::new(n)?;
    writeln!(out, "{} at n = {n}", m.name())?;
    let mut code = EXIT_OK;
    if !verify_physical(&md, &m)?.passed() {
        writeln!(out, "FAIL: not a physical invariant")?;
        code = EXIT_FAILURE;
    }
    if z {
        writeln!(out, "Z = {}", m.render_partition_function())?;
    }
    if exponents {
        let exps = m.exponents();
        let kind: GraphKind = m.name().parse()?;
        let catalog = kind.exponents().unwrap_or_default();
        let matches = catalog == exps && kind.coxeter() == Some(n);
        writeln!(out, "exponents {exps:?}")?;
        writeln!(
            out,
            "{} exponents {catalog:?}, h = {}: {}",
            kind,
            kind.coxeter().unwrap_or(0),
            if matches { "match" } else { "MISMATCH" }
        )?;
        if !matches {
            code = EXIT_FAILURE;
        }
    }
    if blocks {
        let bg = block_graph(&m)?;
        if dot {
            write!(out, "{}", bg.to_dot())?;
        } else {
            for c in &bg.components {
                writeln!(out, "rows {:?} cols {:?}: {}", c.left, c.right, c.kind)?;
            }
        }
    }
    if !exponents && !blocks && !z {
        write!(out, "{}", m.to_matrix_text())?;
    }
    Ok(code)
}

fn cmd_nimrep(a: NimrepArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(file) = a.file {
        let adj = parse_adjacency(&std::fs::read_to_string(file)?)?;
        let below = radius_lt2(&adj)?;
        let g = DynkinGraph::from_adjacency(adj)?;
        writeln!(out, "kind {}", g.kind)?;
        writeln!(out, "perron root < 2: {below}")?;
        let ev: Vec<String> = g.eigenvalues().iter().map(|x| format!("{x:.9}")).collect();
        writeln!(out, "eigenvalues {}", ev.join(" "))?;
        return Ok(EXIT_OK);
    }
    let k = a.max_nodes.expect("clap enforces --max-nodes");
    for g in enumerate_norm_lt2(k, a.allow_loops)? {
        writeln!(out, "{:>2} nodes  {}", g.len(), g.kind)?;
    }
    Ok(EXIT_OK)
}
