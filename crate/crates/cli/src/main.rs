mod io;
mod solve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use kdemode::datasets::{Component, MixtureSpec};
use kdemode::verify::{self, Suite, VerifyOptions};
use kdemode::SolveParams;
use serde::{Deserialize, Serialize};

use solve::{Algorithm, Constants};

#[derive(Parser)]
#[command(
    name = "kdemode",
    version,
    about = "Approximate modes of Gaussian kernel density estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Gaussian mixture to CSV, with the spec and seed in a sidecar JSON.
    Generate(GenerateArgs),
    /// Find an approximate mode of the points in a CSV file.
    Solve(SolveArgs),
    /// Run a property or acceptance suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Mixture spec as JSON: {"components": [{"weight", "mean", "scale"}]}.
    #[arg(long, conflicts_with = "component")]
    spec: Option<PathBuf>,
    /// A component as `weight;m1,m2,...;scale`; repeat for more.
    #[arg(long)]
    component: Vec<String>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; the sidecar goes next to it with extension `.spec.json`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    /// JSON destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `key=value` pairs, comma separated or repeated. Keys: additive,
    /// discrepancy, jl, rect, m_max, s_max, trial_delta, grid_budget,
    /// random_starts, max_iters.
    #[arg(long, num_args = 1..)]
    constant_overrides: Vec<String>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Fewer trials per check.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Contents of the sidecar written by `generate`.
#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    points: String,
    n: usize,
    seed: u64,
    spec: MixtureSpec,
}

/// An error with its exit code: 1 for I/O, 2 for bad parameters or input,
/// 3 for an exceeded oracle budget.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn io(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }

    fn param(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<kdemode::Error> for Failure {
    fn from(e: kdemode::Error) -> Self {
        let code = if matches!(e, kdemode::Error::BudgetExceeded { .. }) {
            3
        } else {
            2
        };
        Self {
            code,
            error: e.into(),
        }
    }
}

fn parse_component(text: &str) -> anyhow::Result<Component> {
    let parts: Vec<&str> = text.split(';').collect();
    let [weight, mean, scale] = parts[..] else {
        bail!("component `{text}` is not `weight;m1,m2,...;scale`");
    };
    let mean = mean
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .with_context(|| format!("component `{text}`: bad mean"))?;
    Ok(Component {
        weight: weight
            .trim()
            .parse()
            .with_context(|| format!("component `{text}`: bad weight"))?,
        mean,
        scale: scale
            .trim()
            .parse()
            .with_context(|| format!("component `{text}`: bad scale"))?,
    })
}

fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("spec.json")
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::io),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(Failure::io)?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(Failure::param)?
        }
        None if args.component.is_empty() => {
            return Err(Failure::param(anyhow::anyhow!(
                "give --spec or at least one --component"
            )))
        }
        None => MixtureSpec {
            components: args
                .component
                .iter()
                .map(|c| parse_component(c))
                .collect::<anyhow::Result<_>>()
                .map_err(Failure::param)?,
        },
    };
    let points = spec.generate(args.n, args.seed)?;
    io::write_points_file(&args.output, &points).map_err(Failure::io)?;
    let sidecar = Sidecar {
        points: args
            .output
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        n: args.n,
        seed: args.seed,
        spec,
    };
    let text = serde_json::to_string_pretty(&sidecar).map_err(Failure::io)?;
    write_text(Some(&sidecar_path(&args.output)), &text)
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let params = SolveParams::new(args.eps, args.rho, args.delta, args.seed)?;
    let constants = Constants::default()
        .with_overrides(&args.constant_overrides)
        .map_err(Failure::param)?;
    if !args.input.exists() {
        return Err(Failure::io(anyhow::anyhow!(
            "{} does not exist",
            args.input.display()
        )));
    }
    let points = io::read_points(&args.input).map_err(Failure::param)?;
    let result = solve::run(args.algorithm, &points, &params, &constants)?;
    let text = serde_json::to_string_pretty(&result.to_record(&points)).map_err(Failure::io)?;
    write_text(args.output.as_deref(), &text)
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let options = VerifyOptions {
        quick: args.quick,
        seed: args.seed,
    };
    let report = verify::run(args.suite, &options)?;
    for check in &report.checks {
        eprintln!(
            "{} {:>2} {} ({} trials, {} failures, {:.1}s)",
            if check.passed { "PASS" } else { "FAIL" },
            check.id,
            check.name,
            check.trials,
            check.failures,
            check.elapsed_s
        );
    }
    let text = serde_json::to_string_pretty(&report).map_err(Failure::io)?;
    write_text(args.output.as_deref(), &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            error: anyhow::anyhow!("suite `{}` has failing checks", report.suite),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
