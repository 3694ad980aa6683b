//! `netefficacy` — scenario-driven CLI for the network-value toolkit.
//!
//! Exit codes: 0 success, 2 usage error, 3 invalid input (parse or
//! validation), 4 runtime failure (I/O, or a `verify` run whose routes
//! disagree). Failures print a machine-readable JSON error to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use netefficacy::report::{emit, Format};
use netefficacy::run::{run, verify_passed, CommandKind, RunOptions};
use netefficacy::scenario::parse_scenario;
use netefficacy::Error;

#[derive(Parser)]
#[command(
    name = "netefficacy",
    version,
    about = "Network efficacy, capacity planning, and value-model analysis over scenario files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file to load.
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,

    /// Output format.
    #[arg(long, value_name = "FORMAT", default_value = "human", value_parser = parse_format)]
    format: Format,

    /// Override the scenario's random seed (default 0).
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Override the scenario's total contact attempts.
    #[arg(long, value_name = "N")]
    attempts: Option<u64>,

    /// Override the scenario's trial count.
    #[arg(long, value_name = "N")]
    trials: Option<u32>,

    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form efficacy of the scenario overlay.
    Efficacy(CommonArgs),
    /// Joint capacity of the scenario's default + preferred networks.
    Hetnet(CommonArgs),
    /// Coverage fraction needed to reach a target capacity.
    PlanCoverage {
        #[command(flatten)]
        common: CommonArgs,
        /// Target total capacity, flow units.
        #[arg(long, value_name = "FLOW")]
        target: f64,
    },
    /// Efficacy trajectory over the scenario's growth schedule.
    Grow(CommonArgs),
    /// Monte Carlo contact simulation of the scenario overlay.
    Simulate(CommonArgs),
    /// Link-model versus node-model valuation at the system size.
    CompareModels(CommonArgs),
    /// Check closed form, exact enumeration, and Monte Carlo against
    /// each other; fails (exit 4) when the routes disagree.
    Verify(CommonArgs),
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Usage(_) => "usage",
        Error::Parse(_) => "parse",
        Error::Validation(_) => "validation",
        Error::Precondition(_) => "precondition",
        Error::Io(_) => "io",
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Usage(_) => 2,
        Error::Parse(_) | Error::Validation(_) | Error::Precondition(_) => 3,
        Error::Io(_) => 4,
    }
}

fn print_error(err: &Error) {
    let mut body = json!({
        "kind": error_kind(err),
        "message": err.to_string(),
    });
    if let Error::Validation(violations) = err {
        body["violations"] = json!(violations);
    }
    eprintln!("{}", json!({ "error": body }));
}

fn report_failure(err: &Error) -> ExitCode {
    print_error(err);
    ExitCode::from(exit_code_for(err))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common, target) = match cli.command {
        Command::Efficacy(c) => (CommandKind::Efficacy, c, None),
        Command::Hetnet(c) => (CommandKind::Hetnet, c, None),
        Command::PlanCoverage { common, target } => {
            (CommandKind::PlanCoverage, common, Some(target))
        }
        Command::Grow(c) => (CommandKind::Grow, c, None),
        Command::Simulate(c) => (CommandKind::Simulate, c, None),
        Command::CompareModels(c) => (CommandKind::CompareModels, c, None),
        Command::Verify(c) => (CommandKind::Verify, c, None),
    };

    let scenario = match parse_scenario(&common.scenario) {
        Ok(s) => s,
        Err(e) => return report_failure(&e),
    };
    let options = RunOptions {
        seed: common.seed,
        attempts: common.attempts,
        trials: common.trials,
        target,
    };
    let report = match run(kind, &scenario, &options) {
        Ok(r) => r,
        Err(e) => return report_failure(&e),
    };

    let rendered = emit(&report, common.format);
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            return report_failure(&Error::Io(format!(
                "cannot write {}: {e}",
                path.display()
            )));
        }
    } else {
        print!("{rendered}");
    }

    if kind == CommandKind::Verify && !verify_passed(&report) {
        eprintln!(
            "{}",
            json!({ "error": {
                "kind": "verification",
                "message": "verification failed: the analytic, enumeration and Monte Carlo routes disagree",
            }})
        );
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}
