//! `crmap`: verification, degeneracy analysis and normalization of rational
//! CR maps from the command line.
//!
//! Exit codes: 0 pass, 1 semantic failure, 2 parse error or bad arguments,
//! 3 pole or failed precondition.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use crmap_core::{Error, Mode};
use serde::Serialize;

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "crmap", version, about = "Exact toolkit for rational CR maps between Heisenberg hypersurfaces and spheres")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic backend for rank and residual computations.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,

    /// Seed for random points, lines and automorphisms.
    #[arg(long, global = true, env = "CRMAP_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Include wall time in the report. Off by default so that JSON reports
    /// are byte-identical across runs.
    #[arg(long, global = true)]
    timing: bool,

    /// Relative tolerance for float-mode verification.
    #[arg(long, global = true, default_value_t = crmap_core::hypersurface::FLOAT_RESIDUAL_TOL)]
    residual_tol: f64,

    /// Relative singular-value threshold for float-mode ranks.
    #[arg(long, global = true, default_value_t = crmap_core::degeneracy::FLOAT_RANK_TOL)]
    rank_tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the mapping equation.
    Verify { input: PathBuf },
    /// Degeneracy at points of the source.
    Degeneracy {
        input: PathBuf,
        /// `z,w` in the scalar-literal grammar, or `random`. Repeatable.
        #[arg(long)]
        point: Vec<String>,
        /// Grid over the chart of ℍ³, e.g. `t=-2..2:9` or `x=-1..1:3,u=0..1:2`.
        #[arg(long)]
        grid: Option<String>,
        /// Generic ranks along the Segre variety of each point instead.
        #[arg(long)]
        tangential: bool,
    },
    /// Bring a map at 0 into partial normal form.
    Normalize {
        input: PathBuf,
        /// Where to write the normalized map.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a map from one of the built-in families.
    Family {
        /// thm-i, thm-ii, lebl, dangelo, whitney, faran, linear, or an
        /// explicit map (h14, h24, h1n, h2n, f14, f24, f1n, f2n).
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Target dimension.
        #[arg(long = "N", alias = "n")]
        n: Option<usize>,
        /// Which Faran map (1 to 4).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between sphere and Heisenberg models.
    Cayley {
        input: PathBuf,
        /// Defaults to the opposite of the source model.
        #[arg(long, value_enum)]
        to: Option<ModelArg>,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degree as presented and after cancelling common factors.
    Degree { input: PathBuf },
    /// Dimension of the complex-linear span of the image.
    Span { input: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Heisenberg,
    Sphere,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Source,
    Target,
    Both,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    input: Option<String>,
    mode: Mode,
    seed: u64,
    version: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    result: serde_json::Value,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => 2,
        Error::NotVerified(_) | Error::ConstraintViolation { .. } => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, input) = cli.command.describe();
    let outcome = commands::run(&cli);
    let wall = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let (code, status, error, result, text) = match outcome {
        Ok(Outcome { pass, json, text }) => (u8::from(!pass), if pass { "pass" } else { "fail" }, None, json, text),
        Err(e) => (exit_code(&e), "error", Some(e.to_string()), serde_json::Value::Null, format!("error: {e}")),
    };
    match cli.format {
        Format::Json => {
            let report = Report {
                command: name,
                input,
                mode: cli.mode.into(),
                seed: cli.seed,
                version: env!("CARGO_PKG_VERSION"),
                status,
                wall_time_ms: wall,
                error,
                result,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
        }
        Format::Text => {
            if code >= 2 {
                eprintln!("{text}");
            } else {
                println!("{text}");
            }
            if let Some(ms) = wall {
                println!("wall time {ms:.3} ms");
            }
        }
    }
    ExitCode::from(code)
}

impl Command {
    fn describe(&self) -> (&'static str, Option<String>) {
        let p = |p: &PathBuf| Some(p.display().to_string());
        match self {
            Command::Verify { input } => ("verify", p(input)),
            Command::Degeneracy { input, .. } => ("degeneracy", p(input)),
            Command::Normalize { input, .. } => ("normalize", p(input)),
            Command::Family { name, .. } => ("family", Some(name.clone())),
            Command::Cayley { input, .. } => ("cayley", p(input)),
            Command::Degree { input } => ("degree", p(input)),
            Command::Span { input } => ("span", p(input)),
        }
    }
}
