//! Command-line front end: parse flags, dispatch to the library, and map
//! failures to exit codes (0 success, 1 invalid input, 2 violated model
//! assumption, 3 verification failure).

mod commands;
mod doc;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degen_simplex::QuadConfig;

use commands::{CliError, LiftMode, LiftRequest};
use suites::Suite;

#[derive(Parser)]
#[command(
    name = "degen-simplex",
    version,
    about = "Stresses, invariants, duals, and motions of degenerate simplices in constant-curvature spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Comparison tolerance for report-level flags.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Maximal quadrature subdivision depth.
    #[arg(long, default_value_t = 24)]
    quad_depth: u32,
    /// Omit the timestamp field so reports are byte-stable.
    #[arg(long)]
    no_timestamp: bool,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn quad_config(&self) -> QuadConfig {
        QuadConfig {
            max_depth: self.quad_depth,
            ..QuadConfig::default()
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Stress, Radon partition, invariants, and characteristic polynomial of
    /// a degenerate configuration.
    Analyze {
        /// Input document (JSON).
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Everything `analyze` reports plus the dual configuration block.
    Dual {
        /// Input document (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Dual normalization constant (falls back to the input's `c`, then 1).
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Trace the volume constraint along a motion, or run the seeded random
    /// lift experiment.
    Lift {
        /// Input document (JSON); required for --random and vertex lifts.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Built-in flex family.
        #[arg(long, value_parser = ["rectangle", "trapezoid"])]
        preset: Option<String>,
        /// Rectangle half-width.
        #[arg(long)]
        a: Option<f64>,
        /// Rectangle half-height.
        #[arg(long)]
        b: Option<f64>,
        /// Trapezoid leg length.
        #[arg(long)]
        l: Option<f64>,
        /// Trapezoid diagonal length.
        #[arg(long)]
        d: Option<f64>,
        /// Trapezoid base length.
        #[arg(long)]
        b1: Option<f64>,
        /// Run the random perturbation experiment instead of tracing a path.
        #[arg(long)]
        random: bool,
        /// Comma-separated perturbation heights (default: seven halvings from 1e-2).
        #[arg(long)]
        heights: Option<String>,
        /// Number of random perturbations.
        #[arg(long, default_value_t = 50)]
        perturbations: usize,
        /// Seed for the random experiment (the input's `seed` wins if set).
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// 1-based vertex label to lift (with --direction).
        #[arg(long)]
        apex: Option<usize>,
        /// Comma-separated ambient direction for the vertex lift.
        #[arg(long)]
        direction: Option<String>,
        /// Largest path parameter to trace (defaults to the path's range).
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of grid steps in the trace.
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Trace output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a seeded verification suite; exits 3 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample random configurations against a volume bound.
    Sample {
        /// Bound to sample (only spherical-sum is defined).
        #[arg(long, default_value = "spherical-sum")]
        theorem: String,
        /// Intrinsic simplex dimension (1 or 2).
        #[arg(long)]
        n: usize,
        /// Sphere dimension to sample on (default n+1).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_float_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("{what} has a non-numeric entry: {part:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input, common } => commands::cmd_analyze(
            &input,
            common.tol,
            &common.quad_config(),
            common.no_timestamp,
            common.out.as_deref(),
        ),
        Command::Dual { input, c, common } => commands::cmd_dual(
            &input,
            c,
            common.tol,
            &common.quad_config(),
            common.no_timestamp,
            common.out.as_deref(),
        ),
        Command::Lift {
            input,
            preset,
            a,
            b,
            l,
            d,
            b1,
            random,
            heights,
            perturbations,
            seed,
            apex,
            direction,
            t_max,
            steps,
            format,
            common,
        } => {
            let mode = if let Some(name) = preset {
                let mut params = Vec::new();
                for (key, value) in [("a", a), ("b", b), ("l", l), ("d", d), ("b1", b1)] {
                    if let Some(v) = value {
                        params.push((key.to_string(), v));
                    }
                }
                LiftMode::Preset { name, params }
            } else if random {
                let heights = heights
                    .as_deref()
                    .map(|h| parse_float_list(h, "--heights"))
                    .transpose()?;
                LiftMode::Random {
                    heights,
                    perturbations,
                    seed,
                }
            } else if let (Some(apex), Some(direction)) = (apex, direction.as_deref()) {
                LiftMode::VertexLift {
                    apex,
                    direction: parse_float_list(direction, "--direction")?,
                }
            } else {
                return Err(CliError::Input(
                    "lift needs --preset, --random, or --apex with --direction".into(),
                ));
            };
            let req = LiftRequest {
                input,
                mode,
                t_max,
                steps,
                csv: format == Format::Csv,
                tol: common.tol,
                no_timestamp: common.no_timestamp,
                out: common.out.clone(),
            };
            commands::cmd_lift(&req, &common.quad_config())
        }
        Command::Verify {
            suite,
            seed,
            common,
        } => suites::cmd_verify(suite, seed, &common.quad_config(), common.out.as_deref()),
        Command::Sample {
            theorem,
            n,
            d,
            count,
            seed,
            common,
        } => commands::cmd_sample(
            &theorem,
            n,
            d,
            count,
            seed,
            common.tol,
            &common.quad_config(),
            common.no_timestamp,
            common.out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    // Map clap's own failures to exit 1 (invalid input); keep help and
    // version on exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
