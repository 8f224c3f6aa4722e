//! Command-line driver behind the `dspectra` binary.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, or a clean scan |
//! | 1 | runtime failure (I/O, solver, checkpoint refusal) |
//! | 2 | usage error |
//! | 3 | scan found eigenvalues outside `PM_n` |
//! | 4 | `refine` found no crossing |

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::permgroup::{
    format_cycles, inequivalent_pairs, naive_pair_count, parse_cycles, PairCensus, Permutation,
    MAX_CENSUS_DEGREE,
};
use crate::region::RegionPM;
use crate::search::{
    hull_spectrum_scan_with, refine_crossing, scan_census_with, scan_tuples_with, BranchHint,
    CrossingReport, HullOptions, Sampling, ScanOptions, Subgroup, TupleSpace, WORKERS_ENV,
};
use crate::spectra::{ScanConfig, Scanner};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;
pub const EXIT_NO_CROSSING: i32 = 4;

/// Largest `n` accepted by `pairs` and `classify` without `--allow-large`.
pub const DEFAULT_CENSUS_CAP: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "dspectra", version, about = "Eigenvalues of convex combinations of permutation matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Degree of the symmetric group.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Mesh size: matrices per pair segment, or weight granularity for tuples.
    #[arg(long, global = true)]
    pub mesh: Option<usize>,
    /// Number of permutations per convex combination.
    #[arg(long = "tuple-order", global = true)]
    pub tuple_order: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Output file for the main result.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Append-only checkpoint for resumable scans.
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for sampled tuple scans.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate inequivalent pairs and compare with p(n)·n!.
    Pairs {
        #[arg(long)]
        allow_large: bool,
    },
    /// Scan the pair census or k-tuples for eigenvalues outside PM_n.
    Scan {
        /// Sample this many random tuples instead of enumerating them.
        #[arg(long)]
        samples: Option<u64>,
        /// Also write every eigenvalue to this file.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        half_plane: bool,
        #[arg(long)]
        drop_real: bool,
    },
    /// Bisect the interval where a pair's eigenpath leaves PM_n.
    Refine {
        sigma: String,
        tau: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Branch index; defaults to the branch reaching farthest out.
        #[arg(long)]
        branch: Option<usize>,
    },
    /// Report the census class of a pair.
    Classify {
        sigma: String,
        tau: String,
        #[arg(long)]
        allow_large: bool,
    },
    /// Compare k-tuple spectra of a group with its pair spectra.
    Hull {
        #[arg(long, default_value = "alternating")]
        group: String,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Write the vertices of every Π_k for k ≤ n.
    Outline,
}

/// The validated settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub command: String,
    pub n: usize,
    pub mesh_size: usize,
    pub tuple_order: usize,
    pub workers: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub checkpoint_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(Error),
    NoCrossing,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidPermutation(_) | Error::DegreeMismatch(..) => {
                Failure::Usage(e.to_string())
            }
            Error::NoSignChange => Failure::NoCrossing,
            e => Failure::Runtime(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn need_n(g: &GlobalArgs, min: usize, max: usize) -> CliResult<usize> {
    match g.n {
        None => usage("--n is required"),
        Some(n) if n < min || n > max => usage(format!("--n must be in {min}..={max}, got {n}")),
        Some(n) => Ok(n),
    }
}

fn parse_perm(s: &str, n: usize) -> CliResult<Permutation> {
    parse_cycles(s, n).map_err(|e| Failure::Usage(e.to_string()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

impl RunConfig {
    fn from_args(command: &str, g: &GlobalArgs, n: usize, mesh: usize, k: usize) -> CliResult<Self> {
        if g.workers == Some(0) {
            return usage("--workers must be >= 1");
        }
        Ok(Self {
            command: command.to_string(),
            n,
            mesh_size: mesh,
            tuple_order: k,
            workers: g.workers,
            output_path: g.out.clone(),
            checkpoint_path: g.checkpoint.clone(),
            seed: g.seed,
            format: match g.format.unwrap_or(Format::Jsonl) {
                Format::Csv => "csv".into(),
                Format::Jsonl => "jsonl".into(),
            },
        })
    }

    fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            workers: self.workers,
            checkpoint: self.checkpoint_path.clone(),
            ..ScanOptions::default()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::NoCrossing) => {
            let _ = writeln!(stdout, "no crossing");
            EXIT_NO_CROSSING
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Pairs { allow_large } => cmd_pairs(g, *allow_large, out),
        Command::Scan {
            samples,
            points,
            half_plane,
            drop_real,
        } => cmd_scan(g, *samples, points.as_deref(), *half_plane, *drop_real, out),
        Command::Refine { sigma, tau, tol, branch } => cmd_refine(g, sigma, tau, *tol, *branch, out),
        Command::Classify { sigma, tau, allow_large } => cmd_classify(g, sigma, tau, *allow_large, out),
        Command::Hull { group, samples, points } => cmd_hull(g, group, *samples, points.as_deref(), out),
        Command::Outline => cmd_outline(g, out),
    }
}

fn census_cap(allow_large: bool) -> usize {
    if allow_large {
        MAX_CENSUS_DEGREE
    } else {
        DEFAULT_CENSUS_CAP
    }
}

fn write_census(census: &PairCensus, format: Format, w: &mut dyn Write) -> Result<()> {
    match format {
        Format::Jsonl => census.write_jsonl(w),
        Format::Csv => {
            writeln!(w, "classIndex,sigma,tau,typeSigma,typeTau,reverseClass")?;
            for c in census.classes() {
                writeln!(
                    w,
                    "{},{},{},\"{}\",\"{}\",{}",
                    c.class_index,
                    format_cycles(&c.sigma),
                    format_cycles(&c.tau),
                    c.type_sigma,
                    c.type_tau,
                    c.reverse_class
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_pairs(g: &GlobalArgs, allow_large: bool, out: &mut dyn Write) -> CliResult<i32> {
    let n = need_n(g, 2, census_cap(allow_large))?;
    let cfg = RunConfig::from_args("pairs", g, n, 0, 2)?;
    let census = inequivalent_pairs(n)?;
    if let Some(path) = &cfg.output_path {
        let mut w = create(path)?;
        write_census(&census, g.format.unwrap_or(Format::Jsonl), &mut w)?;
        w.flush()?;
    }
    writeln!(out, "n={n} pairs={} naive={}", census.count_total(), naive_pair_count(n))?;
    Ok(EXIT_OK)
}

fn write_reports(reports: &[CrossingReport], format: Format, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        Format::Jsonl => {
            for r in reports {
                writeln!(w, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(w, "classIndex,tupleOrder,generators,violatingWeights,maxViolation,witnessRe,witnessIm,witnessWeights")?;
            for r in reports {
                let ws: Vec<String> = r.witness.weights.iter().map(|&x| fmt_f64(x)).collect();
                writeln!(
                    w,
                    "{},{},\"{}\",{},{},{},{},\"{}\"",
                    r.class_index,
                    r.tuple_order,
                    r.generators.join(" "),
                    r.violating_weights.len(),
                    fmt_f64(r.max_violation),
                    fmt_f64(r.witness.value.re),
                    fmt_f64(r.witness.value.im),
                    ws.join(" ")
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `(index, weights…, re, im)` for every point of a scan.
fn write_points<F>(path: &Path, format: Format, k: usize, units: u64, mut f: F) -> Result<()>
where
    F: FnMut(&mut Scanner, u64, &mut dyn FnMut(&[f64], &[num_complex::Complex64]) -> Result<()>) -> Result<()>,
{
    let mut w = BufWriter::new(File::create(path)?);
    if format == Format::Csv {
        let ws: Vec<String> = (1..=k).map(|i| format!("w{i}")).collect();
        writeln!(w, "index,{},re,im", ws.join(","))?;
    }
    let mut scanner = Scanner::new();
    for i in 0..units {
        f(&mut scanner, i, &mut |weights, vals| {
            for z in vals {
                match format {
                    Format::Csv => {
                        let ws: Vec<String> = weights.iter().map(|&x| fmt_f64(x)).collect();
                        writeln!(w, "{i},{},{},{}", ws.join(","), fmt_f64(z.re), fmt_f64(z.im))?;
                    }
                    Format::Jsonl => {
                        let rec = serde_json::json!({
                            "index": i, "weights": weights, "re": z.re, "im": z.im,
                        });
                        writeln!(w, "{rec}")?;
                    }
                }
            }
            Ok(())
        })?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_scan(
    g: &GlobalArgs,
    samples: Option<u64>,
    points: Option<&Path>,
    half_plane: bool,
    drop_real: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let k = g.tuple_order.unwrap_or(2);
    let max_n = if k == 2 { MAX_CENSUS_DEGREE } else { crate::search::MAX_TUPLE_DEGREE };
    let n = need_n(g, 2, max_n)?;
    let mesh = g.mesh.unwrap_or(if k == 2 { 1001 } else { 40 });
    let cfg = RunConfig::from_args("scan", g, n, mesh, k)?;
    let scan = ScanConfig::new(mesh, k)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .half_plane_only(half_plane)
        .drop_real_axis(drop_real);
    let format = g.format.unwrap_or(Format::Jsonl);
    let opts = cfg.scan_options();
    let outcome = if k == 2 {
        if samples.is_some() {
            return usage("--samples only applies to tuple scans");
        }
        let census = inequivalent_pairs(n)?;
        let outcome = scan_census_with(&census, &scan, &opts)?;
        if let Some(path) = points {
            let classes = census.classes();
            write_points(path, format, 2, classes.len() as u64, |s, i, emit| {
                let c = &classes[i as usize];
                s.for_each_pair(&c.sigma, &c.tau, mesh, scan.filter(), |_, t, vals| emit(&[t, 1.0 - t], vals))
            })?;
        }
        outcome
    } else {
        let sampling = match (samples, g.seed) {
            (None, _) => Sampling::Exhaustive,
            (Some(count), Some(seed)) => Sampling::Random { count, seed },
            (Some(_), None) => return usage("--seed is required with --samples"),
        };
        let outcome = scan_tuples_with(Subgroup::Symmetric, n, &scan, sampling, &opts)?;
        if let Some(path) = points {
            let space = TupleSpace::new(Subgroup::Symmetric, n, k, sampling)?;
            write_points(path, format, k, space.len(), |s, i, emit| {
                let perms = space.tuple(i);
                let mut w = vec![0.0; k];
                s.for_each_tuple(&perms, mesh, scan.filter(), |comp, vals| {
                    for (x, &a) in w.iter_mut().zip(comp) {
                        *x = a as f64 / mesh as f64;
                    }
                    emit(&w, vals)
                })
            })?;
        }
        outcome
    };
    if let Some(path) = &cfg.output_path {
        write_reports(&outcome.reports, format, path)?;
    }
    let max = outcome.max_violation().map_or("none".to_string(), fmt_f64);
    writeln!(
        out,
        "n={n} mesh={mesh} k={k} units={} reports={} maxViolation={max}",
        outcome.units_total,
        outcome.reports.len()
    )?;
    for r in &outcome.reports {
        writeln!(
            out,
            "class {} ({}) maxViolation={} at weights {:?}",
            r.class_index,
            r.generators.join(", "),
            fmt_f64(r.max_violation),
            r.witness.weights
        )?;
    }
    Ok(if outcome.reports.is_empty() { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

/// Largest degree for which `refine` attaches a census class index.
const REFINE_CLASSIFY_CAP: usize = 8;

fn cmd_refine(g: &GlobalArgs, sigma: &str, tau: &str, tol: f64, branch: Option<usize>, out: &mut dyn Write) -> CliResult<i32> {
    let n = need_n(g, 2, crate::permgroup::MAX_DEGREE)?;
    let cfg = RunConfig::from_args("refine", g, n, 0, 2)?;
    let s = parse_perm(sigma, n)?;
    let t = parse_perm(tau, n)?;
    if !(tol >= 1e-12) {
        return usage(format!("--tol must be >= 1e-12, got {tol}"));
    }
    let hint = branch.map_or(BranchHint::MaxViolation, BranchHint::Index);
    let mut interval = refine_crossing(&s, &t, hint, tol)?;
    if n <= REFINE_CLASSIFY_CAP {
        interval.class_index = Some(inequivalent_pairs(n)?.classify(&s, &t)?);
    }
    if let Some(path) = &cfg.output_path {
        let mut w = create(path)?;
        writeln!(w, "{}", serde_json::to_string_pretty(&interval).map_err(Error::from)?)?;
        w.flush()?;
    }
    writeln!(out, "{:.7} {:.7}", interval.t_low, interval.t_high)?;
    Ok(EXIT_OK)
}

fn cmd_classify(g: &GlobalArgs, sigma: &str, tau: &str, allow_large: bool, out: &mut dyn Write) -> CliResult<i32> {
    let n = need_n(g, 2, census_cap(allow_large))?;
    let s = parse_perm(sigma, n)?;
    let t = parse_perm(tau, n)?;
    let census = inequivalent_pairs(n)?;
    let idx = census.classify(&s, &t)?;
    let c = census.class(idx).expect("classify returns a valid index");
    writeln!(
        out,
        "class {idx}: ({}, {}) types {} {}",
        format_cycles(&c.sigma),
        format_cycles(&c.tau),
        c.type_sigma,
        c.type_tau
    )?;
    Ok(EXIT_OK)
}

fn cmd_hull(g: &GlobalArgs, group: &str, samples: Option<u64>, points: Option<&Path>, out: &mut dyn Write) -> CliResult<i32> {
    let group: Subgroup = group.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let n = need_n(g, 2, crate::search::MAX_TUPLE_DEGREE)?;
    let k = g.tuple_order.unwrap_or(3);
    let mesh = g.mesh.unwrap_or(40);
    if k < 2 || mesh < 1 {
        return usage("hull needs --tuple-order >= 2 and --mesh >= 1");
    }
    let cfg = RunConfig::from_args("hull", g, n, mesh, k)?;
    let sampling = match (samples, g.seed) {
        (None, _) => Sampling::Exhaustive,
        (Some(count), Some(seed)) => Sampling::Random { count, seed },
        (Some(_), None) => return usage("--seed is required with --samples"),
    };
    let opts = HullOptions {
        scan: cfg.scan_options(),
        collect_points: points.is_some(),
    };
    let scan = hull_spectrum_scan_with(group, n, k, mesh, sampling, &opts)?;
    let report = scan.report.expect("hull scan returns a report");
    if let Some(path) = &cfg.output_path {
        let mut w = create(path)?;
        writeln!(w, "{}", serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
        w.flush()?;
    }
    if let Some(path) = points {
        let mut w = create(path)?;
        writeln!(w, "cloud,index,weights,re,im")?;
        for (name, cloud) in [("pair", &scan.pair_cloud), ("tuple", &scan.tuple_cloud)] {
            for p in cloud {
                let idx = match p.source {
                    crate::spectra::SourceId::Class(i) | crate::spectra::SourceId::Tuple(i) => i,
                    crate::spectra::SourceId::Unspecified => 0,
                };
                let ws: Vec<String> = p.weights.iter().map(|&x| fmt_f64(x)).collect();
                writeln!(w, "{name},{idx},{},{},{}", ws.join(" "), fmt_f64(p.value.re), fmt_f64(p.value.im))?;
            }
        }
        w.flush()?;
    }
    writeln!(
        out,
        "group={group:?} n={n} k={k} mesh={mesh} pairPoints={} tuplePoints={} hullDistance={} envelopeExcess={} pmReports={}",
        report.pair_points,
        report.tuple_points,
        fmt_f64(report.max_hull_distance),
        fmt_f64(report.max_envelope_excess),
        report.reports.len()
    )?;
    Ok(EXIT_OK)
}

fn cmd_outline(g: &GlobalArgs, out: &mut dyn Write) -> CliResult<i32> {
    let n = need_n(g, 2, 64)?;
    let region = RegionPM::new(n)?;
    match &g.out {
        Some(path) => {
            let mut w = create(path)?;
            region.write_outline_csv(&mut w)?;
            w.flush()?;
            writeln!(out, "wrote {} vertices", n * (n + 1) / 2)?;
        }
        None => region.write_outline_csv(out)?,
    }
    Ok(EXIT_OK)
}
