//! Command-line front end. `run` parses arguments, executes one pipeline and
//! returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::primes_in_range;
use crate::conductor::{conductor_degree, geometric_bound, ConductorReport};
use crate::error::{Error, Result};
use crate::fibration::{
    trace_bound_check, write_trace_csv, SurfaceSpec, TraceBoundReport, TraceEngine, TraceSample,
};
use crate::nagao::{
    bound_consistency, nagao_report, BoundConsistency, Estimator, EstimatorConfig, NagaoReport,
    DEFAULT_WINDOW,
};
use crate::towers::orbits::{
    burnside_count, full_group, orbit_count_content, orbit_count_full, DEFAULT_BUDGET,
};
use crate::towers::{
    tower_bounds, verify_cover_identities, write_tower_csv, CoverKind, CoverReport, TowerConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "jrl",
    version,
    about = "Rank bounds and Frobenius-trace statistics for fibered surfaces"
)]
pub struct Cli {
    /// Worker threads for prime-parallel runs (default: available parallelism).
    #[arg(long, global = true, env = "JRL_JOBS")]
    pub jobs: Option<usize>,
    /// Reserved. Outputs do not depend on randomness.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write a JSON run manifest here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Average Frobenius traces over a prime range, as CSV.
    Trace(TraceArgs),
    /// Analytic rank estimate from trace samples, as JSON.
    Nagao(NagaoArgs),
    /// Local Kodaira data and conductor degree, as JSON.
    Conductor(ConductorArgs),
    /// Geometric bound, optionally checked against trace samples.
    Bound(BoundArgs),
    /// Orbit-improved bounds along a tower of covers, as CSV.
    Tower(TowerArgs),
    /// Orbit count of the linear group on `(Z/n)^rank`.
    Orbits(OrbitsArgs),
    /// Brute-force identity checks; exit code 2 on failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TraceArgs {
    #[arg(long)]
    pub surface: PathBuf,
    /// Inclusive range `lo..hi`.
    #[arg(long, value_parser = parse_range)]
    pub primes: (u64, u64),
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct NagaoArgs {
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long)]
    pub pmax: u64,
    #[arg(long, default_value_t = 5)]
    pub pmin: u64,
    #[arg(long, default_value = "dirichlet")]
    pub estimator: String,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConductorArgs {
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    /// Take g_X, g_C, f and dim B from a surface file.
    #[arg(long, conflicts_with_all = ["g_fiber", "g_base", "f", "dim_b"])]
    pub surface: Option<PathBuf>,
    /// Check `|A_p|` against the bound over this range (with --surface).
    #[arg(long, value_parser = parse_range, requires = "surface")]
    pub primes: Option<(u64, u64)>,
    #[arg(long, required_unless_present = "surface")]
    pub g_fiber: Option<i64>,
    #[arg(long, required_unless_present = "surface")]
    pub g_base: Option<i64>,
    #[arg(long, required_unless_present = "surface")]
    pub f: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub dim_b: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    A,
    B,
}

#[derive(Debug, Args, Serialize)]
pub struct TowerArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub f_base: u64,
    #[arg(long, default_value_t = 1)]
    pub g_base: u64,
    #[arg(long, default_value_t = 1)]
    pub g_fiber: u64,
    #[arg(long, default_value_t = 1)]
    pub index: u64,
    #[arg(long)]
    pub n_max: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitMode {
    Full,
    Content,
    Burnside,
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: OrbitMode,
    /// Largest group enumerated by the full and Burnside modes.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cover,
    Orbits,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Cover degrees (cover suite) or the largest modulus (orbits suite).
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub n: Vec<u64>,
    #[arg(long, value_parser = parse_range)]
    pub primes: Option<(u64, u64)>,
    #[arg(long)]
    pub surface: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `lo..hi`, `lo..=hi` (both inclusive) or a single value.
pub fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: Vec<String>,
    pub config: &'a Cli,
    pub version: &'static str,
    pub jobs: usize,
    pub wall_time_ms: u128,
    pub outputs: Vec<PathBuf>,
}

/// Outcome of a pipeline: a summary line, the artifact text, and whether a
/// verification failed.
struct Outcome {
    summary: String,
    artifact: String,
    out: Option<PathBuf>,
    failed: bool,
}

impl Outcome {
    fn new(summary: String, artifact: String, out: &Option<PathBuf>) -> Self {
        Self {
            summary,
            artifact,
            out: out.clone(),
            failed: false,
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, &argv, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(
    cli: &Cli,
    argv: &[OsString],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let start = Instant::now();
    let jobs = match cli.jobs {
        Some(0) => return Err(Error::InvalidConfig("--jobs must be at least 1".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| dispatch(&cli.command))?;
    let mut outputs = Vec::new();
    match &outcome.out {
        Some(path) => {
            std::fs::write(path, &outcome.artifact)?;
            outputs.push(path.clone());
            writeln!(stdout, "{}", outcome.summary)?;
        }
        None => {
            stdout.write_all(outcome.artifact.as_bytes())?;
            writeln!(stderr, "{}", outcome.summary)?;
        }
    }
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: argv
                .iter()
                .map(|a| a.to_string_lossy().into_owned())
                .collect(),
            config: cli,
            version: env!("CARGO_PKG_VERSION"),
            jobs,
            wall_time_ms: start.elapsed().as_millis(),
            outputs,
        };
        std::fs::write(path, to_json(&manifest)?)?;
    }
    Ok(if outcome.failed { EXIT_VERIFY } else { EXIT_OK })
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Trace(a) => trace(a),
        Command::Nagao(a) => nagao(a),
        Command::Conductor(a) => conductor(a),
        Command::Bound(a) => bound(a),
        Command::Tower(a) => tower(a),
        Command::Orbits(a) => orbits(a),
        Command::Verify(a) => verify(a),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn load(path: &Path) -> Result<SurfaceSpec> {
    SurfaceSpec::from_path(path)
}

/// Trace samples for the good primes `p >= 5` in `[lo, hi]`.
fn good_samples(spec: &SurfaceSpec, (lo, hi): (u64, u64)) -> Result<Vec<TraceSample>> {
    let primes = primes_in_range(lo.max(5), hi.max(5))?;
    TraceEngine::new(spec).samples(&primes)
}

fn trace(a: &TraceArgs) -> Result<Outcome> {
    let spec = load(&a.surface)?;
    let samples = good_samples(&spec, a.primes)?;
    let mut buf = Vec::new();
    write_trace_csv(&samples, &mut buf)?;
    let summary = format!(
        "{}: {} good primes in {}..{}",
        spec.name,
        samples.len(),
        a.primes.0,
        a.primes.1
    );
    Ok(Outcome::new(
        summary,
        String::from_utf8_lossy(&buf).into_owned(),
        &a.out,
    ))
}

fn conductor_bound(spec: &SurfaceSpec, report: &ConductorReport) -> Result<i64> {
    geometric_bound(
        i64::from(spec.genus_fiber),
        i64::from(spec.genus_base()),
        report.f as i64,
        i64::from(spec.dim_trace),
    )
}

#[derive(Serialize)]
struct NagaoOutput<'a> {
    surface: &'a str,
    #[serde(flatten)]
    report: NagaoReport,
    /// Present when the conductor could be computed.
    consistency: Option<BoundConsistency>,
}

fn nagao(a: &NagaoArgs) -> Result<Outcome> {
    let spec = load(&a.surface)?;
    let estimator: Estimator = a.estimator.parse()?;
    let cfg = EstimatorConfig::new(a.pmin, a.pmax, estimator, a.window)?;
    let samples = good_samples(&spec, (a.pmin, a.pmax))?;
    let report = nagao_report(&samples, &cfg)?;
    let consistency = match conductor_degree(&spec) {
        Ok(c) => {
            let b = conductor_bound(&spec, &c)?;
            Some(bound_consistency(
                report.headline.raw,
                &BigRational::from_integer(BigInt::from(b)),
            ))
        }
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let summary = format!(
        "{}: raw {:.4}, rounded {} ({} samples up to {})",
        spec.name, report.headline.raw, report.headline.rounded, report.headline.n_samples, a.pmax
    );
    let out = NagaoOutput {
        surface: &spec.name,
        report,
        consistency,
    };
    Ok(Outcome::new(summary, to_json(&out)?, &a.out))
}

#[derive(Serialize)]
struct PlaceRow {
    place: String,
    degree: u32,
    kodaira: Option<String>,
    v_delta: Option<i64>,
    epsilon: u32,
}

#[derive(Serialize)]
struct Totals {
    f: u64,
    s: u64,
    geometric_bound: i64,
}

#[derive(Serialize)]
struct ConductorOutput<'a> {
    surface: &'a str,
    places: Vec<PlaceRow>,
    totals: Totals,
    total_v_delta: Option<i64>,
    uncertified: bool,
}

fn conductor(a: &ConductorArgs) -> Result<Outcome> {
    let spec = load(&a.surface)?;
    let r = conductor_degree(&spec)?;
    let places = r
        .data
        .iter()
        .map(|d| PlaceRow {
            place: d.place.to_string(),
            degree: d.degree,
            kodaira: d.kodaira.map(|k| k.to_string()),
            v_delta: d.v_delta,
            epsilon: d.epsilon,
        })
        .collect();
    let summary = format!(
        "{}: f = {}, s = {}, bound = {}",
        spec.name, r.f, r.s, r.geometric_bound
    );
    let out = ConductorOutput {
        surface: &spec.name,
        places,
        totals: Totals {
            f: r.f,
            s: r.s,
            geometric_bound: r.geometric_bound,
        },
        total_v_delta: r.total_v_delta,
        uncertified: r.uncertified,
    };
    Ok(Outcome::new(summary, to_json(&out)?, &a.out))
}

#[derive(Serialize)]
struct BoundOutput<'a> {
    surface: Option<&'a str>,
    g_fiber: i64,
    g_base: i64,
    f: i64,
    dim_b: i64,
    geometric_bound: i64,
    trace_check: Option<TraceBoundReport>,
}

fn bound(a: &BoundArgs) -> Result<Outcome> {
    let spec = a.surface.as_deref().map(load).transpose()?;
    let (g_fiber, g_base, f, dim_b) = match &spec {
        Some(s) => {
            let r = conductor_degree(s)?;
            (
                i64::from(s.genus_fiber),
                i64::from(s.genus_base()),
                r.f as i64,
                i64::from(s.dim_trace),
            )
        }
        // clap enforces presence without --surface
        None => (
            a.g_fiber.unwrap_or(0),
            a.g_base.unwrap_or(0),
            a.f.unwrap_or(0),
            a.dim_b,
        ),
    };
    let geometric = geometric_bound(g_fiber, g_base, f, dim_b)?;
    let trace_check = match (&spec, a.primes) {
        (Some(s), Some(range)) => Some(trace_bound_check(s, f as u64, &good_samples(s, range)?)),
        _ => None,
    };
    let mut summary = format!("geometric bound {geometric}");
    if let Some(t) = &trace_check {
        summary.push_str(&format!(
            ", max excess {:.6}, stable over top decade: {}",
            t.max_excess, t.stable_over_top_decade
        ));
    }
    let out = BoundOutput {
        surface: spec.as_ref().map(|s| s.name.as_str()),
        g_fiber,
        g_base,
        f,
        dim_b,
        geometric_bound: geometric,
        trace_check,
    };
    Ok(Outcome::new(summary, to_json(&out)?, &a.out))
}

fn tower(a: &TowerArgs) -> Result<Outcome> {
    let cfg = TowerConfig {
        kind: match a.kind {
            KindArg::A => CoverKind::MultiplicationOnEllipticBase,
            KindArg::B => CoverKind::JacobianPullback,
        },
        f_base: a.f_base,
        g_base: a.g_base,
        g_fiber: a.g_fiber,
        index: a.index,
        n_max: a.n_max,
    };
    let rows = tower_bounds(&cfg)?;
    let mut buf = Vec::new();
    write_tower_csv(&rows, &mut buf)?;
    let last = rows.last().map_or(0.0, |r| r.running_avg);
    let summary = format!("{} rows, running average {last:.6}", rows.len());
    Ok(Outcome::new(
        summary,
        String::from_utf8_lossy(&buf).into_owned(),
        &a.out,
    ))
}

fn orbit_count(n: u32, rank: usize, mode: OrbitMode, budget: u128) -> Result<u64> {
    match mode {
        OrbitMode::Full => Ok(orbit_count_full(n, rank, budget)?.count),
        OrbitMode::Content => Ok(orbit_count_content(n, rank)?.count),
        OrbitMode::Burnside => burnside_count(n, rank, &full_group(n, rank, budget)?),
    }
}

fn orbits(a: &OrbitsArgs) -> Result<Outcome> {
    let count = orbit_count(a.n, a.rank, a.mode, a.budget)?;
    let summary = format!("n = {}, rank = {}: {count} orbits", a.n, a.rank);
    Ok(Outcome::new(summary, format!("{count}\n"), &None))
}

#[derive(Serialize)]
struct OrbitCheck {
    n: u32,
    full: Option<u64>,
    content: u64,
    burnside: Option<u64>,
    ok: bool,
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    match a.suite {
        Suite::Cover => verify_cover(a),
        Suite::Orbits => verify_orbits(a),
    }
}

fn verify_cover(a: &VerifyArgs) -> Result<Outcome> {
    let path = a
        .surface
        .as_deref()
        .ok_or_else(|| Error::InvalidConfig("the cover suite needs --surface".into()))?;
    let (lo, hi) = a
        .primes
        .ok_or_else(|| Error::InvalidConfig("the cover suite needs --primes".into()))?;
    let spec = load(path)?;
    let engine = TraceEngine::new(&spec);
    let primes = primes_in_range(lo.max(5), hi.max(5))?;
    let mut reports: Vec<CoverReport> = Vec::new();
    for &n in &a.n {
        for &p in &primes {
            if engine.is_good(p) && p % n != 0 {
                reports.push(verify_cover_identities(&spec, n, p)?);
            }
        }
    }
    let failures = reports.iter().filter(|r| !r.passed()).count();
    let summary = format!(
        "cover identities: {} checks, {failures} failures",
        reports.len()
    );
    let mut o = Outcome::new(summary, to_json(&reports)?, &a.out);
    o.failed = failures > 0;
    Ok(o)
}

fn verify_orbits(a: &VerifyArgs) -> Result<Outcome> {
    let n_max = a.n.iter().copied().max().unwrap_or(1);
    let n_max =
        u32::try_from(n_max).map_err(|_| Error::InvalidConfig(format!("n = {n_max} too large")))?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let content = orbit_count_content(n, a.rank)?.count;
        let (full, burnside) = match full_group(n, a.rank, DEFAULT_BUDGET) {
            Ok(g) => (
                Some(crate::towers::orbits::orbit_count_of(n, a.rank, &g)?),
                Some(burnside_count(n, a.rank, &g)?),
            ),
            Err(Error::BudgetExceeded { .. }) => (None, None),
            Err(e) => return Err(e),
        };
        let ok = full.is_none_or(|f| f == content) && burnside.is_none_or(|b| b == content);
        rows.push(OrbitCheck {
            n,
            full,
            content,
            burnside,
            ok,
        });
    }
    let failures = rows.iter().filter(|r| !r.ok).count();
    let summary = format!("orbit counts: {} moduli, {failures} failures", rows.len());
    let mut o = Outcome::new(summary, to_json(&rows)?, &a.out);
    o.failed = failures > 0;
    Ok(o)
}
