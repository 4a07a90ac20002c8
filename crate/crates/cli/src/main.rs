//! `qbsim`: command-line front end for the qboson library.
//!
//! Every subcommand writes its artifact (CSV, or newline-delimited occupations
//! for `sample`) and prints a one-line JSON summary on stdout. Exit status is
//! 0 on success, 2 when the input is invalid and 1 when a computation fails
//! or, for `validate`, when the engines disagree.

mod args;
mod commands;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use args::{BenchArgs, FockArgs, JobCommand, JobConfig, PermArgs, QnumArgs, SpectraArgs, Theorem1Args, ValidateArgs};
use commands::Outcome;
use output::Sink;

/// Invalid input detected by the front end itself.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

#[derive(Debug, Parser)]
#[command(name = "qbsim", version, about = "q-deformed bosons: spectra, permanents and Fock-state sampling")]
struct Cli {
    /// Directory for artifacts whose path is not given explicitly.
    #[arg(long, global = true, env = "QBSIM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Also write a lossless JSON mirror next to every artifact.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmon, Kerr and q-boson energy levels.
    Spectra(SpectraArgs),
    /// q-numbers, q-factorials and their deviation from n.
    Qnum(QnumArgs),
    /// Second-order admissibility check for a (q; α, β, γ; ν) oscillator.
    Theorem1(Theorem1Args),
    /// Permanent (and optionally q-permanent) of a matrix.
    Perm(PermArgs),
    /// Exact output distribution of an interferometer.
    Dist(FockArgs),
    /// Seeded samples from the exact output distribution.
    Sample(FockArgs),
    /// Cross-check the permanent, mesh-evolution and substitution engines.
    Validate(ValidateArgs),
    /// Time the permanent kernels.
    Bench(BenchArgs),
    /// Run a JSON job file.
    Run {
        config: PathBuf,
    },
}

fn parse_params<T: DeserializeOwned>(params: serde_json::Value) -> Result<T> {
    serde_json::from_value(params).map_err(|e| Invalid(format!("params: {e}")).into())
}

fn run_job(path: &PathBuf, sink: &Sink) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let job: JobConfig = serde_json::from_str(&text).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    let out = job.out.clone();
    let seed = job.seed;
    match job.command {
        JobCommand::Spectra => {
            let mut a: SpectraArgs = parse_params(job.params)?;
            a.out = out;
            commands::spectra(&a, sink)
        }
        JobCommand::Qnum => {
            let mut a: QnumArgs = parse_params(job.params)?;
            a.out = out;
            commands::qnum(&a, sink)
        }
        JobCommand::Theorem1 => {
            let mut a: Theorem1Args = parse_params(job.params)?;
            a.out = out;
            commands::theorem1(&a, sink)
        }
        JobCommand::Perm => {
            let mut a: PermArgs = parse_params(job.params)?;
            a.out = out;
            a.seed = seed.unwrap_or(0);
            commands::perm(&a, sink)
        }
        JobCommand::Dist => {
            let mut a: FockArgs = parse_params(job.params)?;
            a.out = out;
            a.seed = seed;
            commands::dist(&a, sink)
        }
        JobCommand::Sample => {
            let mut a: FockArgs = parse_params(job.params)?;
            a.out = out;
            a.seed = seed;
            commands::sample(&a, sink)
        }
        JobCommand::Validate => {
            let mut a: ValidateArgs = parse_params(job.params)?;
            a.out = out;
            commands::validate(&a, sink)
        }
        JobCommand::Bench => {
            let mut a: BenchArgs = parse_params(job.params)?;
            a.out = out;
            a.seed = seed.unwrap_or(0);
            commands::bench(&a, sink)
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Invalid("`threads` must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let sink = Sink {
        out_dir: cli.out_dir.clone(),
        json: cli.json,
    };
    match &cli.command {
        Command::Spectra(a) => commands::spectra(a, &sink),
        Command::Qnum(a) => commands::qnum(a, &sink),
        Command::Theorem1(a) => commands::theorem1(a, &sink),
        Command::Perm(a) => commands::perm(a, &sink),
        Command::Dist(a) => commands::dist(a, &sink),
        Command::Sample(a) => commands::sample(a, &sink),
        Command::Validate(a) => commands::validate(a, &sink),
        Command::Bench(a) => commands::bench(a, &sink),
        Command::Run { config } => run_job(config, &sink),
    }
}

/// 2 for invalid input, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    use qboson::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<Invalid>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::SizeCap { .. } | E::Overflow(_) | E::IllConditioned(_) => 1,
                _ => 2,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let mut summary = outcome.summary;
            summary["status"] = json!(if outcome.ok { "ok" } else { "fail" });
            println!("{summary}");
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let code = exit_code(&err);
            println!("{}", json!({ "status": "error", "exit_code": code, "message": format!("{err:#}") }));
            eprintln!("qbsim: {err:#}");
            ExitCode::from(code)
        }
    }
}
