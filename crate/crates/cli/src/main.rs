//! `activeres` command-line interface. Every verb prints one JSON document
//! on standard output.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 unknown
//! convertibility verdict, 4 failing check suite.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use activeres::channels::{apply_activity_breaking, counterexample_channel, passivization};
use activeres::checks::{run_all, run_suite, Suite, SuiteReport};
use activeres::convertibility::{decide_general_with, Verdict};
use activeres::monotones::{ergotropy_upper_bounds, evaluate, ErgotropyBounds, Monotone, MonotoneResult};
use activeres::states::{average_energy, ergotropy};
use activeres::witnesses::{canonical_witness, is_activity_witness, optimal_witness, WitnessKind};
use activeres::{Execution, HermitianMatrix, SolverOptions, ToleranceConfig};

use input::{CliError, Field};

#[derive(Parser)]
#[command(name = "activeres", version, about = "Resource theory of activity: ergotropy, monotones, convertibility")]
struct Cli {
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ergotropy of a state.
    Erg {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
    },
    /// Activity or coherence monotone of a state.
    Monotone {
        #[arg(long)]
        which: MonotoneArg,
        #[arg(long)]
        state: PathBuf,
        /// Also report the ergotropy upper bounds for this Hamiltonian.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
    },
    /// Decide whether an EPCPR channel maps one state to another.
    Convert {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Completion trials when some coherences of the input vanish.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "ACTIVERES_SEED", default_value_t = 0)]
        seed: u64,
        /// Magnitude below which an off-diagonal entry counts as zero.
        #[arg(long, default_value_t = activeres::convertibility::DEFAULT_TOL)]
        tol: f64,
    },
    /// Optimal, canonical, or user-supplied activity witnesses.
    Witness(WitnessArgs),
    /// Apply a channel to a state.
    ChannelApply {
        #[arg(long, value_enum, default_value_t = ChannelKind::Epcpr)]
        kind: ChannelKind,
        /// Channel file; required for `epcpr` and `activity-breaking`.
        #[arg(long)]
        channel: Option<PathBuf>,
        #[arg(long)]
        state: PathBuf,
    },
    /// Run a randomized property suite.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, env = "ACTIVERES_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct WitnessArgs {
    /// Witness attaining 2^{R_max^act} on `--state`.
    #[arg(long, requires = "state", conflicts_with_all = ["check", "canonical"])]
    optimal: bool,
    /// Validate the witness in this file.
    #[arg(long, value_name = "FILE", conflicts_with = "canonical")]
    check: Option<PathBuf>,
    /// `coherent` or `level-K`.
    #[arg(long, value_name = "KIND", requires = "dim")]
    canonical: Option<String>,

    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonotoneArg {
    Weight,
    Robustness,
    RmaxAct,
    InvRmaxAct,
    RelentAct,
    RmaxCoh,
}

impl From<MonotoneArg> for Monotone {
    fn from(m: MonotoneArg) -> Self {
        match m {
            MonotoneArg::Weight => Monotone::Weight,
            MonotoneArg::Robustness => Monotone::Robustness,
            MonotoneArg::RmaxAct => Monotone::RmaxAct,
            MonotoneArg::InvRmaxAct => Monotone::InvRmaxAct,
            MonotoneArg::RelentAct => Monotone::RelentAct,
            MonotoneArg::RmaxCoh => Monotone::RmaxCoh,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelKind {
    Epcpr,
    ActivityBreaking,
    Passivization,
    Counterexample,
}

const EXIT_INVALID: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

struct Output {
    body: Value,
    code: u8,
}

impl Output {
    fn ok(body: impl Serialize) -> Result<Self, CliError> {
        Ok(Output {
            body: serde_json::to_value(body).expect("outputs serialize"),
            code: 0,
        })
    }
}

#[derive(Serialize)]
struct MonotoneOutput {
    #[serde(flatten)]
    result: MonotoneResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    ergotropy_bounds: Option<ErgotropyBounds>,
}

#[derive(Serialize)]
struct CheckOutput {
    passed: bool,
    reports: Vec<SuiteReport>,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let opts = SolverOptions::default();
    match cli.command {
        Command::Erg { state, hamiltonian } => {
            let rho = input::state(&state, "state")?;
            let h = input::hamiltonian(&hamiltonian)?;
            Output::ok(json!({
                "ergotropy": ergotropy(&rho, &h).field("state")?,
                "mean_energy": average_energy(&rho, &h).field("state")?,
            }))
        }
        Command::Monotone {
            which,
            state,
            hamiltonian,
        } => {
            let rho = input::state(&state, "state")?;
            let bounds = match hamiltonian {
                Some(path) => {
                    let h = input::hamiltonian(&path)?;
                    Some(ergotropy_upper_bounds(&rho, &h, &opts).field("hamiltonian")?)
                }
                None => None,
            };
            let result = evaluate(which.into(), &rho, &opts).field("state")?;
            Output::ok(MonotoneOutput {
                result,
                ergotropy_bounds: bounds,
            })
        }
        Command::Convert {
            from,
            to,
            trials,
            seed,
            tol,
        } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::Usage {
                    field: Some("tol"),
                    message: format!("--tol must be a nonnegative number, got {tol}"),
                });
            }
            let rho = input::state(&from, "from")?;
            let target = input::state(&to, "to")?;
            let report = decide_general_with(&rho, &target, trials, seed, tol, exec).field("to")?;
            let code = if report.verdict == Verdict::Unknown { EXIT_UNKNOWN } else { 0 };
            Ok(Output {
                code,
                ..Output::ok(report)?
            })
        }
        Command::Witness(args) => witness(args, &opts),
        Command::ChannelApply { kind, channel, state } => {
            let rho = input::state(&state, "state")?;
            let needs_file = || {
                channel.as_deref().ok_or(CliError::Usage {
                    field: Some("channel"),
                    message: "--channel is required for this channel kind".into(),
                })
            };
            let out = match kind {
                ChannelKind::Epcpr => input::epcpr(needs_file()?)?.apply(&rho).field("state")?,
                ChannelKind::ActivityBreaking => {
                    apply_activity_breaking(&input::povm(needs_file()?)?, &rho).field("state")?
                }
                ChannelKind::Passivization => passivization(&rho),
                ChannelKind::Counterexample => counterexample_channel(&rho).field("state")?,
            };
            Output::ok(json!({ "state": out }))
        }
        Command::Check { suite, n, seed } => {
            let reports = if suite == "all" {
                run_all(n, seed, exec)
            } else {
                let suite: Suite = suite.parse().map_err(|message| CliError::Usage {
                    field: Some("suite"),
                    message,
                })?;
                vec![run_suite(suite, n, seed, exec)]
            };
            let passed = reports.iter().all(SuiteReport::ok);
            Ok(Output {
                code: if passed { 0 } else { EXIT_CHECK_FAILED },
                ..Output::ok(CheckOutput { passed, reports })?
            })
        }
    }
}

fn witness(args: WitnessArgs, opts: &SolverOptions) -> Result<Output, CliError> {
    if args.optimal {
        let state = args.state.expect("clap enforces --state");
        let rho = input::state(&state, "state")?;
        return Output::ok(optimal_witness(&rho, opts).field("state")?);
    }
    if let Some(path) = args.check {
        let w = input::matrix(&path, "witness")?;
        let tol = ToleranceConfig::default();
        let valid = is_activity_witness(&w, tol.eps_cert).field("witness")?;
        let h = HermitianMatrix::new(w, tol.eps_herm).field("witness")?;
        let mut acc = 0.0;
        let partial_sums: Vec<f64> = h
            .matrix()
            .diagonal_real()
            .into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        return Output::ok(json!({
            "valid": valid,
            "min_eigenvalue": h.min_eigenvalue(),
            "partial_sums": partial_sums,
        }));
    }
    let (Some(kind), Some(dim)) = (args.canonical, args.dim) else {
        return Err(CliError::Usage {
            field: None,
            message: "one of --optimal, --check or --canonical is required".into(),
        });
    };
    let kind = parse_witness_kind(&kind)?;
    Output::ok(json!({ "witness": canonical_witness(kind, dim).field("canonical")? }))
}

fn parse_witness_kind(s: &str) -> Result<WitnessKind, CliError> {
    if s == "coherent" {
        return Ok(WitnessKind::Coherent);
    }
    s.strip_prefix("level-")
        .and_then(|k| k.parse().ok())
        .map(WitnessKind::Level)
        .ok_or_else(|| CliError::Usage {
            field: Some("canonical"),
            message: format!("expected `coherent` or `level-K`, got `{s}`"),
        })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let summary = rendered.split("\n\nUsage:").next().unwrap_or_default();
            let err = CliError::Usage {
                field: None,
                message: summary.split_whitespace().collect::<Vec<_>>().join(" ").replacen("error: ", "", 1),
            };
            eprint!("{e}");
            return report_error(&err);
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{}", out.body);
            ExitCode::from(out.code)
        }
        Err(err) => report_error(&err),
    }
}

fn report_error(err: &CliError) -> ExitCode {
    println!(
        "{}",
        json!({ "code": err.code(), "message": err.to_string(), "field": err.field() })
    );
    ExitCode::from(if err.is_solver_failure() { EXIT_SOLVER } else { EXIT_INVALID })
}
