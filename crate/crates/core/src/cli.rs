//! Command-line front end for the `tfreg` binary.
//!
//! [`run`] takes the argument vector plus output sinks and returns the process
//! exit code, so the whole CLI can be driven from tests without spawning a
//! process. Exit codes are listed in [`exit`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::alon::{build_alon, check_lambda, AlonError};
use crate::graph::io::{load, save, write_atomic};
use crate::graph::{Graph, Vertex};
use crate::regularize::{check_override, plan_with, synthesize, PlanError, Profile, SynthError};
use crate::spectral::{lambda, Method, SpectralError, SpectralOptions, SpectralReport, DENSE_MAX_ORDER};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const USAGE: i32 = 3;
}

/// Environment variable capping spectral worker threads.
pub const THREADS_ENV: &str = "TFREG_THREADS";

/// Triangle witnesses listed in a `verify` verdict.
const TRIANGLE_WITNESSES: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "tfreg",
    version,
    about = "Build, synthesize and verify triangle-free regular pseudorandom graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Build the Cayley base graph for a given k and check its contract.
    BuildAlon(BuildAlonArgs),
    /// Synthesize a certified triangle-free regular graph on n vertices.
    Synth(RunConfig),
    /// Check regularity, triangle-freeness and an eigenvalue bound.
    Verify(VerifyArgs),
    /// Report the second adjacency eigenvalue of a graph.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BuildAlonArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the generator vectors, one hex value per line.
    #[arg(long)]
    pub dump_generators: Option<PathBuf>,
}

/// Everything a `synth` run depends on.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunConfig {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub profile: Profile,
    /// Parameter override `key=value`; repeatable, applied in order.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_override)]
    pub overrides: Vec<(String, String)>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_name = "D")]
    pub expect_regular: Option<u32>,
    #[arg(long)]
    pub expect_triangle_free: bool,
    #[arg(long, value_name = "X")]
    pub lambda_bound: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub method: Method,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

fn parse_override(s: &str) -> Result<(String, String), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    let (key, value) = (key.trim(), value.trim());
    check_override(key, value).map_err(|e| e.to_string())?;
    Ok((key.to_string(), value.to_string()))
}

/// Parses `argv` (including the program name). `Err` carries clap's error,
/// which also covers `--help` and `--version`.
pub fn parse_args<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv).map(|cli| cli.command)
}

/// A failed command with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: exit::INFEASIBLE,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        Failure {
            code: exit::VERIFY_FAILED,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("I/O error: {e}"))
    }
}

fn spectral_failure(e: SpectralError) -> Failure {
    match e {
        SpectralError::NoConvergence { .. } => Failure::failed(e.to_string()),
        other => Failure::usage(other.to_string()),
    }
}

fn plan_failure(e: PlanError) -> Failure {
    match e {
        PlanError::UnknownParameter(_) | PlanError::BadValue { .. } => Failure::usage(e.to_string()),
        other => Failure::infeasible(other.to_string()),
    }
}

fn synth_failure(e: SynthError) -> Failure {
    match e {
        SynthError::Plan(p) => plan_failure(p),
        SynthError::Spectral(s) => spectral_failure(s),
        SynthError::Certification(_) => Failure::failed(e.to_string()),
        SynthError::Base(_) | SynthError::Infeasible { .. } => Failure::infeasible(e.to_string()),
    }
}

/// Worker threads from [`THREADS_ENV`]; absent means 1.
pub fn threads_from_env() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(format!("{THREADS_ENV}: {e}")),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {s:?}")),
        },
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("report serialises");
    writeln!(out, "{text}")?;
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    load(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let command = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                exit::USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                exit::SUCCESS
            };
            return code;
        }
    };
    match execute(&command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs a parsed command; `Ok` holds the exit code of a run that produced
/// its report.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let threads = threads_from_env().map_err(Failure::usage)?;
    match command {
        Command::BuildAlon(a) => build_alon_cmd(a, threads, out),
        Command::Synth(c) => synth_cmd(c, threads, out),
        Command::Verify(v) => run_verify(v, threads, out),
        Command::Spectrum(s) => spectrum_cmd(s, threads, out),
    }
}

fn auto_lambda(g: &Graph, tol: f64, threads: usize) -> Result<SpectralReport, SpectralError> {
    // Lanczos needs regularity; small graphs get the exact dense spectrum.
    let method = if g.regular_degree().is_some() && g.n() > 512 {
        Method::Lanczos
    } else {
        Method::Dense
    };
    let opts = SpectralOptions {
        method,
        tol,
        threads,
        ..Default::default()
    };
    lambda(g, &opts)
}

fn build_alon_cmd(a: &BuildAlonArgs, threads: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let (g, spec) = build_alon(a.k).map_err(|e| match e {
        AlonError::DivisibleByThree(_) | AlonError::Unsupported(_) => Failure::usage(e.to_string()),
        AlonError::TooLarge { .. } => Failure::infeasible(e.to_string()),
        AlonError::Field(_) | AlonError::Fidelity(_) => Failure::failed(e.to_string()),
    })?;
    let method = if spec.order <= DENSE_MAX_ORDER {
        Method::Dense
    } else {
        Method::Lanczos
    };
    let report = lambda(
        &g,
        &SpectralOptions {
            method,
            threads,
            ..Default::default()
        },
    )
    .map_err(spectral_failure)?;
    save(&g, &a.out)?;
    if let Some(path) = &a.dump_generators {
        let (gens, _) = crate::alon::alon_generators(a.k).map_err(|e| Failure::failed(e.to_string()))?;
        let mut buf = Vec::new();
        gens.write_dump(&mut buf)?;
        write_atomic(path, &buf)?;
    }
    let regular = g.regular_degree() == Some(spec.degree as u32);
    let triangles = g.triangle_count();
    let lambda_check = check_lambda(&spec, report.lambda, 1e-6);
    let passed = regular && triangles == 0 && lambda_check.is_ok();
    print_json(
        out,
        &json!({
            "k": spec.k,
            "N": spec.order,
            "D": spec.degree,
            "m": g.m(),
            "regular": regular,
            "triangle_count": triangles,
            "lambda": report,
            "lambda_bound": spec.lambda_bound,
            "lambda_floor": spec.lambda_floor(),
            "lambda_check": lambda_check.err().map(|e| e.to_string()),
            "passed": passed,
            "out": a.out,
        }),
    )?;
    Ok(if passed { exit::SUCCESS } else { exit::VERIFY_FAILED })
}

fn synth_cmd(c: &RunConfig, threads: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let plan = plan_with(c.n, c.profile, &c.overrides).map_err(plan_failure)?;
    let syn = synthesize(&plan, c.seed, threads).map_err(synth_failure)?;
    save(&syn.graph, &c.out)?;
    let mut cert = serde_json::to_string_pretty(&syn.certificate).expect("certificate serialises");
    cert.push('\n');
    write_atomic(&c.cert, cert.as_bytes())?;
    let cert = &syn.certificate;
    print_json(
        out,
        &json!({
            "n": cert.n,
            "d_prime": cert.d_prime,
            "k": cert.k,
            "lambda_final": cert.lambda_final.computed,
            "lambda_bound": cert.lambda_final.bound,
            "triangle_count": cert.triangle_count,
            "attempt": cert.seeds.attempt,
            "out": c.out,
            "cert": c.cert,
        }),
    )?;
    Ok(exit::SUCCESS)
}

#[derive(Debug, Serialize)]
struct Check<T: Serialize> {
    expected: T,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Verdict {
    graph: PathBuf,
    n: usize,
    m: usize,
    min_degree: u32,
    max_degree: u32,
    regular_degree: Option<u32>,
    triangle_count: u64,
    triangles: Vec<[Vertex; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<SpectralReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_error: Option<String>,
    checks: Checks,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Checks {
    #[serde(skip_serializing_if = "Option::is_none")]
    regular: Option<Check<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triangle_free: Option<Check<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_bound: Option<Check<f64>>,
}

/// The `verify` subcommand. Exit 0 iff every requested check passes.
fn run_verify(v: &VerifyArgs, threads: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = load_graph(&v.graph)?;
    let stats = g.degree_stats();
    let regular_degree = g.regular_degree();
    let triangle_count = g.triangle_count();
    let regular = v.expect_regular.map(|d| Check {
        expected: d,
        passed: regular_degree == Some(d),
    });
    let triangle_free = v.expect_triangle_free.then_some(Check {
        expected: true,
        passed: triangle_count == 0,
    });
    let (mut report, mut lambda_error) = (None, None);
    let lambda_bound = v.lambda_bound.map(|bound| {
        let passed = match auto_lambda(&g, v.tol, threads) {
            Ok(r) => {
                let ok = r.lambda <= bound + v.tol;
                report = Some(r);
                ok
            }
            Err(e) => {
                lambda_error = Some(e.to_string());
                false
            }
        };
        Check {
            expected: bound,
            passed,
        }
    });
    let passed = regular.as_ref().is_none_or(|c| c.passed)
        && triangle_free.as_ref().is_none_or(|c| c.passed)
        && lambda_bound.as_ref().is_none_or(|c| c.passed);
    let verdict = Verdict {
        graph: v.graph.clone(),
        n: g.n(),
        m: g.m(),
        min_degree: stats.min,
        max_degree: stats.max,
        regular_degree,
        triangle_count,
        triangles: g.triangles(TRIANGLE_WITNESSES),
        lambda: report,
        lambda_error,
        checks: Checks {
            regular,
            triangle_free,
            lambda_bound,
        },
        passed,
    };
    print_json(out, &verdict)?;
    Ok(if passed { exit::SUCCESS } else { exit::VERIFY_FAILED })
}

fn spectrum_cmd(s: &SpectrumArgs, threads: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = load_graph(&s.graph)?;
    let opts = SpectralOptions {
        method: s.method,
        tol: s.tol,
        max_iter: s.max_iter,
        threads,
        ..Default::default()
    };
    let report = lambda(&g, &opts).map_err(spectral_failure)?;
    print_json(out, &report)?;
    Ok(exit::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<&str> {
        std::iter::once("tfreg").chain(s.split_whitespace()).collect()
    }

    #[test]
    fn synth_flags_populate_run_config() {
        let cmd = parse_args(argv(
            "synth --n 3500 --seed 42 --profile desk --out g.el --cert c.json",
        ))
        .unwrap();
        assert_eq!(
            cmd,
            Command::Synth(RunConfig {
                n: 3500,
                seed: 42,
                profile: Profile::Desk,
                overrides: vec![],
                out: "g.el".into(),
                cert: "c.json".into(),
            })
        );
    }

    #[test]
    fn overrides_are_checked_while_parsing() {
        let base = "synth --n 3500 --seed 1 --profile desk --out g --cert c";
        let ok = parse_args(argv(&format!("{base} --set loss_mean=10 --set conc_slack=2.5"))).unwrap();
        let Command::Synth(rc) = ok else { panic!() };
        assert_eq!(
            rc.overrides,
            vec![
                ("loss_mean".to_string(), "10".to_string()),
                ("conc_slack".to_string(), "2.5".to_string())
            ]
        );
        for bad in ["nonsense=1", "loss_mean=-3", "loss_mean=x", "loss_mean"] {
            let e = parse_args(argv(&format!("{base} --set {bad}"))).unwrap_err();
            assert!(e.use_stderr(), "{bad}");
        }
    }

    #[test]
    fn spectrum_flags() {
        let cmd = parse_args(argv("spectrum --graph g.el --method dense --tol 1e-8")).unwrap();
        assert_eq!(
            cmd,
            Command::Spectrum(SpectrumArgs {
                graph: "g.el".into(),
                method: Method::Dense,
                tol: 1e-8,
                max_iter: None,
            })
        );
    }

    #[test]
    fn verify_defaults() {
        let Command::Verify(v) = parse_args(argv("verify --graph x")).unwrap() else {
            panic!()
        };
        assert_eq!(v.tol, 1e-6);
        assert!(!v.expect_triangle_free);
        assert_eq!(v.expect_regular, None);
    }

    #[test]
    fn exit_codes_for_usage_errors() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(argv("verify --bogus"), &mut o, &mut e), exit::USAGE);
        assert_eq!(run(argv("synth --n 10"), &mut o, &mut e), exit::USAGE);
        assert_eq!(run(argv("frobnicate"), &mut o, &mut e), exit::USAGE);
        let mut help = Vec::new();
        assert_eq!(run(argv("--help"), &mut help, &mut e), exit::SUCCESS);
        let help = String::from_utf8(help).unwrap();
        for sub in ["build-alon", "synth", "verify", "spectrum"] {
            assert!(help.contains(sub), "{sub} missing from help");
        }
    }

    #[test]
    fn k_divisible_by_three_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.el");
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            ["tfreg", "build-alon", "--k", "3", "--out", out.to_str().unwrap()],
            &mut o,
            &mut e,
        );
        assert_eq!(code, exit::USAGE);
        assert!(String::from_utf8(e).unwrap().contains("divisible by 3"));
        assert!(!out.exists());
    }

    #[test]
    fn build_alon_k2_writes_graph_and_dump() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.el");
        let gens = dir.path().join("gens.txt");
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            [
                "tfreg",
                "build-alon",
                "--k",
                "2",
                "--out",
                out.to_str().unwrap(),
                "--dump-generators",
                gens.to_str().unwrap(),
            ],
            &mut o,
            &mut e,
        );
        assert_eq!(code, exit::SUCCESS, "{}", String::from_utf8_lossy(&e));
        let g = load(&out).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (64, Some(2)));
        let dump = std::fs::read_to_string(&gens).unwrap();
        let mut lines = dump.lines();
        assert_eq!(lines.next(), Some("2"));
        assert_eq!(lines.count(), 2);
        let report: serde_json::Value = serde_json::from_slice(&o).unwrap();
        assert_eq!(report["passed"], true);
    }
}
