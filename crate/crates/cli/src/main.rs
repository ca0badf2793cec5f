use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wlp_core::field::MERSENNE_61;
use wlp_core::harness::{
    cmd_bounds, cmd_check, cmd_jacobian, cmd_sweep, jacobian_exit_code, CheckOptions,
    ConfigOverrides, ExperimentConfig, FieldChoice, FieldKind, HarnessError, JacobianOptions,
    ShortcutMode, SweepOutputs, EXIT_INPUT, EXIT_OK,
};

#[derive(Parser, Debug)]
#[command(
    name = "wlp",
    version,
    about = "Weak Lefschetz property checks for Artinian complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert function and WLP verdicts for an ideal.
    Check(CheckArgs),
    /// Theorem ranges and splitting bounds for n+1 forms of degree d in P^n.
    Bounds(BoundsArgs),
    /// Smoothness and WLP in degree d for the Jacobian ideal of a hypersurface.
    Jacobian(JacobianArgs),
    /// Random complete intersections over a grid of (n, d), compared with the bounds.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Prime,
    Rational,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Field for the rank computations.
    #[arg(long, value_enum, default_value = "prime")]
    field: FieldArg,
    /// Modulus when --field prime.
    #[arg(long, default_value_t = MERSENNE_61)]
    prime: u64,
}

impl FieldArgs {
    fn choice(&self) -> FieldChoice {
        FieldChoice {
            kind: match self.field {
                FieldArg::Prime => FieldKind::Prime,
                FieldArg::Rational => FieldKind::Rational,
            },
            prime: self.prime,
        }
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Homogeneous generators, e.g. "x0^2 - 3*x1*x2".
    generators: Vec<String>,
    /// n+1 random forms of degree D in n+1 variables.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    random: Option<Vec<u32>>,
    /// Number of variables (default: one past the largest index used).
    #[arg(long)]
    vars: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Linear forms tried per degree; the first is x0 + ... + xn.
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[command(flatten)]
    field: FieldArgs,
    /// Rerun failures over Q when both pieces have at most this dimension.
    #[arg(long, default_value_t = 200)]
    escalation_limit: usize,
    /// Check only the middle maps (requires a complete intersection).
    #[arg(long, conflicts_with = "exhaustive")]
    shortcut: bool,
    /// Check every degree.
    #[arg(long)]
    exhaustive: bool,
    /// Give up on the Artinian probe past this degree.
    #[arg(long)]
    cap: Option<u32>,
    /// Single-line JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    n: i64,
    d: i64,
    /// Known generic splitting-type leading twist, for the b1 range.
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct JacobianArgs {
    polynomial: String,
    #[arg(long)]
    vars: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value_t = 200)]
    escalation_limit: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// TOML file with the keys of the experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Linear forms tried per degree (ell_trials).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    #[arg(long)]
    prime: Option<u64>,
    /// Write the per-instance CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full JSON result here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Base path for both outputs (<path>.csv, <path>.json).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn print_json<T: Serialize>(value: &T, compact: bool) -> Result<(), HarnessError> {
    let text = if compact {
        serde_json::to_string(value)?
    } else {
        serde_json::to_string_pretty(value)?
    };
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(HarnessError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    match cli.command {
        Command::Check(a) => {
            let random = match a.random.as_deref() {
                Some([n, d]) => Some((*n as usize, *d)),
                _ => None,
            };
            let opts = CheckOptions {
                generators: a.generators,
                random,
                num_vars: a.vars,
                seed: a.seed,
                trials: a.trials,
                field: a.field.choice(),
                escalation_limit: a.escalation_limit,
                shortcut: if a.shortcut {
                    ShortcutMode::Always
                } else if a.exhaustive {
                    ShortcutMode::Never
                } else {
                    ShortcutMode::Auto
                },
                cap: a.cap,
            };
            let report = cmd_check(&opts).map_err(|e| with_source(e, &opts.generators))?;
            print_json(&report, a.json)?;
            Ok(report.exit_code())
        }
        Command::Bounds(a) => {
            print_json(&cmd_bounds(a.n, a.d, a.b1)?, a.json)?;
            Ok(EXIT_OK)
        }
        Command::Jacobian(a) => {
            let opts = JacobianOptions {
                polynomial: a.polynomial,
                num_vars: a.vars,
                seed: a.seed,
                trials: a.trials,
                field: a.field.choice(),
                escalation_limit: a.escalation_limit,
            };
            let report = cmd_jacobian(&opts)
                .map_err(|e| with_source(e, std::slice::from_ref(&opts.polynomial)))?;
            print_json(&report, a.json)?;
            Ok(jacobian_exit_code(&report))
        }
        Command::Sweep(a) => {
            let mut cfg = match &a.config {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::default(),
            };
            cfg.apply(&ConfigOverrides {
                seed: a.seed,
                trials: a.trials,
                field: a.field.map(|f| match f {
                    FieldArg::Prime => FieldKind::Prime,
                    FieldArg::Rational => FieldKind::Rational,
                }),
                prime: a.prime,
                output_path: a.output,
            })?;
            let outputs = SweepOutputs::resolve(&cfg, a.csv, a.json);
            let result = cmd_sweep(&cfg, &outputs)?;
            println!("n d instances ci agrees empirical_end bound2_end");
            for c in &result.cells {
                println!(
                    "{} {} {} {} {} {} {}",
                    c.n,
                    c.d,
                    c.instances,
                    c.ci_certified,
                    c.agrees,
                    c.empirical_end.map_or("-".into(), |e| e.to_string()),
                    c.predicted_bound2_end.map_or("-".into(), |e| e.to_string()),
                );
            }
            if result.red_flags > 0 {
                eprintln!(
                    "{} instance(s) disagree with the predicted range",
                    result.red_flags
                );
            }
            Ok(result.exit_code())
        }
    }
}

/// Attaches the offending input line and a caret to parse errors.
fn with_source(err: HarnessError, inputs: &[String]) -> HarnessError {
    let Some(offset) = err.offset() else {
        return err;
    };
    let message = err.to_string();
    let mut out = message.clone();
    // Inference and parsing visit the inputs in order; the first one that
    // fails to parse on its own is the culprit.
    if let Some(text) = inputs
        .iter()
        .find(|t| wlp_core::poly::parse_form(t, 1024, &wlp_core::field::RationalField).is_err())
    {
        out = format!(
            "{message}\n  {text}\n  {}^",
            " ".repeat(offset.min(text.len()))
        );
    }
    HarnessError::Usage(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
