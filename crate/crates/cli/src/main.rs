//! `rigidity`: Yang-Baxter checks, depth filtrations, Bethe spectra and the
//! dichotomy report from the command line.
//!
//! Exit codes: 0 computed and passed, 1 computed and failed, 2 bad input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigidity_core::report::{dichotomy_report, filtration_representative, ReportConfig};
use rigidity_core::{
    bethe_solve, boundary_scan, build_r, check_boundary_free, compare_spectrum, ComplexMatrix, FiltrationMode,
    ModelId, RMatrixSpec, SeedStrategy, Tolerances,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rigidity", version, about = "Numerical checks for Yang-Baxter rigidity of two-body interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rank: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_ybe: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_spec: f64,
    /// Seed for `random_gate` given without one.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ModelArgs {
    /// identity, swap, xxx, xxz_trig[:eta], perturbed_swap:eps, random_gate[:seed]
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    model: Option<String>,
    /// Constant R-matrix as {"dim": n, "entries": [[re, im], ...]}, row-major.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Yang-Baxter defect of a constant matrix or over the spectral sample grid.
    CheckYbe {
        #[command(flatten)]
        model: ModelArgs,
        /// Assert that the three-site algebra is pairwise generated.
        #[arg(long)]
        pairwise: bool,
    },
    /// Depth filtration of nearest-neighbour generators for a range of sizes.
    Filtration {
        #[command(flatten)]
        model: ModelArgs,
        /// Chain lengths, `A..B` (inclusive) or a single `A`.
        #[arg(long, default_value = "2..4", value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[arg(long, default_value = "product")]
        mode: FiltrationMode,
    },
    /// Bethe energies against exact diagonalization of the periodic XXX chain.
    Spectrum {
        #[arg(long, default_value = "xxx")]
        model: String,
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        magnons: usize,
    },
    /// Bethe roots of the periodic XXX chain.
    Bethe {
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        magnons: usize,
    },
    /// Every check for each model, as one table.
    Report {
        /// Comma-separated model list; defaults to the full catalog.
        #[arg(long)]
        models: Option<String>,
        #[arg(long, default_value = "2..4", value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[arg(long, default_value = "product")]
        mode: FiltrationMode,
        /// Largest chain length for transfer-matrix commutators.
        #[arg(long, default_value_t = 6)]
        transfer_max: usize,
        #[arg(long, default_value_t = 6)]
        sites: usize,
        #[arg(long, default_value_t = 2)]
        magnons: usize,
    },
}

/// An error that maps to exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected A..B or A, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}

fn parse_model(token: &str, seed: u64) -> Result<ModelId, Usage> {
    if token.trim() == "random_gate" {
        return Ok(ModelId::RandomGate { seed });
    }
    Ok(token.parse::<ModelId>()?)
}

fn resolve(args: &ModelArgs, common: &Common) -> Result<RMatrixSpec, Usage> {
    if let Some(path) = &args.matrix {
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let m = ComplexMatrix::from_json(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let d = (m.dim() as f64).sqrt().round() as usize;
        if d < 2 || d * d != m.dim() {
            return Err(Usage(format!("matrix dimension {} is not d^2 with d >= 2", m.dim())));
        }
        return Ok(RMatrixSpec::constant(m, d, common.tol_rank)?);
    }
    let token = args.model.as_deref().expect("clap requires --model or --matrix");
    Ok(build_r(&parse_model(token, common.seed)?)?)
}

fn tolerances(common: &Common) -> Result<Tolerances, Usage> {
    let tol = Tolerances {
        tol_rank: common.tol_rank,
        tol_ybe: common.tol_ybe,
        tol_spec: common.tol_spec,
        ..Tolerances::default()
    };
    tol.validate()?;
    Ok(tol)
}

struct Output {
    json: String,
    csv: String,
    passed: bool,
}

fn output(value: &impl Serialize, csv: String, passed: bool) -> Result<Output, Usage> {
    Ok(Output { json: serde_json::to_string_pretty(value)? + "\n", csv, passed })
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn execute(cli: &Cli) -> Result<Output, Usage> {
    let common = &cli.common;
    let tol = tolerances(common)?;
    match &cli.command {
        Command::CheckYbe { model, pairwise } => {
            let r = resolve(model, common)?;
            let mut report = check_boundary_free(&r, tol.tol_ybe)?;
            if *pairwise {
                report = report.with_pairwise_generation(true);
            }
            let mut csv = String::from("u_re,u_im,v_re,v_im,defect_fro,defect_rel\n");
            for s in &report.samples {
                let (u, v) = (s.u.unwrap_or_default(), s.v.unwrap_or_default());
                let _ = writeln!(csv, "{},{},{},{},{},{}", u.re, u.im, v.re, v.im, s.defect_fro, s.defect_rel);
            }
            output(&report, csv, report.passes)
        }
        Command::Filtration { model, n, max_depth, mode } => {
            let r = resolve(model, common)?;
            let (_, constant) = filtration_representative(&r, tol.tol_rank)?;
            let scan = boundary_scan(&constant, n.0, n.1, *max_depth, *mode, tol.tol_rank)?;
            let mut csv = String::from("n,mode,stable_rank,termination_depth,saturated,dims\n");
            for s in &scan.reports {
                let dims: Vec<String> = s.report.dims.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    s.n,
                    s.report.mode,
                    s.report.stable_rank(),
                    opt(s.report.termination_depth),
                    s.report.saturated,
                    dims.join(";")
                );
            }
            output(&scan, csv, true)
        }
        Command::Spectrum { model, sites, magnons } => {
            let model = parse_model(model, common.seed)?;
            if model != ModelId::XxxRational {
                return Err(Usage(format!("spectrum supports the xxx model only, got `{model}`")));
            }
            let cmp = compare_spectrum(*sites, *magnons, true, &tol, &SeedStrategy::default())?;
            let mut csv = String::from("bethe_index,ed_index,bethe_energy,ed_energy,delta\n");
            for &(b, e, delta) in &cmp.matches {
                let _ = writeln!(csv, "{b},{e},{},{},{delta}", cmp.bethe[b].energy, cmp.ed_eigenvalues[e]);
            }
            output(&cmp, csv, cmp.passes())
        }
        Command::Bethe { sites, magnons } => {
            let spec = bethe_solve(*sites, *magnons, &SeedStrategy::default())?;
            let mut csv = String::from("index,energy,residual,roots\n");
            for (k, s) in spec.solutions.iter().enumerate() {
                let roots: Vec<String> = s.roots.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
                let _ = writeln!(csv, "{k},{},{},{}", s.energy, s.residual, roots.join(";"));
            }
            output(&spec, csv, true)
        }
        Command::Report { models, n, max_depth, mode, transfer_max, sites, magnons } => {
            let models = match models {
                None => ModelId::catalog(),
                Some(list) => list
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| parse_model(t, common.seed))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let cfg = ReportConfig {
                models,
                filtration_n: *n,
                max_depth: *max_depth,
                mode: *mode,
                transfer_n: (2, *transfer_max),
                spectrum_sector: (*sites, *magnons),
                tolerances: tol,
                ..ReportConfig::default()
            };
            let report = dichotomy_report(&cfg)?;
            let mut csv = String::from("model,ybe,max_defect,filtration,transfer,max_commutator,spectrum,classification\n");
            for row in &report.rows {
                let worst = row.transfer.max_relative.iter().map(|x| x.1).fold(0.0, f64::max);
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    row.model,
                    row.ybe.passes,
                    row.ybe.max_defect,
                    row.filtration.verdict,
                    row.transfer.passes,
                    worst,
                    opt(row.spectrum.as_ref().map(|s| s.passes)),
                    serde_json::to_value(row.classification)?.as_str().unwrap_or_default()
                );
            }
            output(&report, csv, true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.common.format {
        Format::Json => &out.json,
        Format::Csv => &out.csv,
    };
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if out.passed { 0 } else { 1 })
}
