//! `credence` — frame-indexed probabilities for scenario files.
//!
//! Exit codes: 0 success; 1 scenario/query parse or validation error;
//! 2 illegal query-frame combination (also used by clap for usage errors);
//! 3 the observation measure is undefined for the scenario.

use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use credence::betting::{fair_price, simulate_betting};
use credence::exact::{
    observation_conditional, observation_probability, trial_probability, ExactError, ExactResult,
};
use credence::io::{parse_query, parse_scenario, render_comparison, render_report, ReportFormat};
use credence::mc::{estimate_observation, estimate_trial_in_box, run_trials, SimError};
use credence::model::{Frame, Query, Scenario};
use credence::rational::Rational;

#[derive(Parser)]
#[command(
    name = "credence",
    version,
    about = "Exact and simulated probabilities of a query under the trial and observation frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact probability of a query under a frame
    Exact {
        /// Scenario file (.scn)
        file: PathBuf,
        #[arg(long, value_enum)]
        frame: FrameArg,
        /// Query expression, e.g. "outcome==heads"
        #[arg(long)]
        query: String,
        /// Condition on this query (observation frame only)
        #[arg(long)]
        given: Option<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Monte Carlo estimate of a query under a frame
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum)]
        frame: FrameArg,
        #[arg(long)]
        query: String,
        /// Number of trials
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// RNG seed; required so runs are reproducible by construction
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Simulate unit-payoff bets placed at every observation
    Bet {
        file: PathBuf,
        #[arg(long)]
        query: String,
        /// Stake per question as a rational, e.g. 1/3; defaults to the fair price
        #[arg(long)]
        price: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Exact values of an outcome query under both frames, side by side
    Compare {
        file: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Trial,
    #[value(alias = "observation")]
    Obs,
}

impl From<FrameArg> for Frame {
    fn from(arg: FrameArg) -> Frame {
        match arg {
            FrameArg::Trial => Frame::Trial,
            FrameArg::Obs => Frame::Observation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

impl From<FormatArg> for ReportFormat {
    fn from(arg: FormatArg) -> ReportFormat {
        match arg {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Table => ReportFormat::Table,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<ExactError> for Failure {
    fn from(error: ExactError) -> Self {
        let code = match error {
            ExactError::IllegalTrialQuery => 2,
            ExactError::NoObservations | ExactError::ConditionOnNull => 3,
        };
        Failure::new(code, error.to_string())
    }
}

impl From<SimError> for Failure {
    fn from(error: SimError) -> Self {
        let code = match error {
            SimError::IllegalTrialQuery => 2,
            SimError::EmptyBox => 3,
        };
        Failure::new(code, error.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            let output = colourise(output);
            if output.ends_with('\n') {
                print!("{output}");
            } else {
                println!("{output}");
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Bolds the header line of table output when writing to a colour-capable
/// terminal; `NO_COLOR` turns it off.
fn colourise(output: String) -> String {
    let colour_enabled = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
    if !colour_enabled || output.starts_with(['{', '[']) {
        return output;
    }
    match output.split_once('\n') {
        Some((header, rest)) => format!("\x1b[1m{header}\x1b[0m\n{rest}"),
        None => output,
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Exact {
            file,
            frame,
            query,
            given,
            format,
        } => cmd_exact(&file, frame.into(), &query, given.as_deref(), format.into()),
        Command::Simulate {
            file,
            frame,
            query,
            n,
            seed,
            format,
        } => cmd_simulate(&file, frame.into(), &query, n, seed, format.into()),
        Command::Bet {
            file,
            query,
            price,
            n,
            seed,
            format,
        } => cmd_bet(&file, &query, price.as_deref(), n, seed, format.into()),
        Command::Compare {
            file,
            query,
            format,
        } => cmd_compare(&file, &query, format.into()),
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| Failure::new(1, format!("{}:{e}", path.display())))
}

fn load_query(text: &str) -> Result<Query, Failure> {
    parse_query(text).map_err(|e| Failure::new(1, e.to_string()))
}

fn cmd_exact(
    file: &Path,
    frame: Frame,
    query_text: &str,
    given_text: Option<&str>,
    format: ReportFormat,
) -> Result<String, Failure> {
    let scenario = load_scenario(file)?;
    let query = load_query(query_text)?;
    let result = match (frame, given_text) {
        (Frame::Trial, None) => {
            let value = trial_probability(&scenario, &query)?;
            ExactResult::new(&scenario, frame, &query, value)
        }
        (Frame::Trial, Some(_)) => {
            return Err(Failure::new(
                2,
                "--given requires --frame obs; conditioning is an observation-frame operation",
            ))
        }
        (Frame::Observation, None) => {
            let value = observation_probability(&scenario, &query)?;
            ExactResult::new(&scenario, frame, &query, value)
        }
        (Frame::Observation, Some(given_text)) => {
            let given = load_query(given_text)?;
            let value = observation_conditional(&scenario, &query, &given)?;
            ExactResult {
                scenario: scenario.name.clone(),
                frame,
                query: format!("{query} | {given}"),
                value,
            }
        }
    };
    Ok(render_report(&result.into(), format))
}

fn cmd_simulate(
    file: &Path,
    frame: Frame,
    query_text: &str,
    n: u64,
    seed: u64,
    format: ReportFormat,
) -> Result<String, Failure> {
    let scenario = load_scenario(file)?;
    let query = load_query(query_text)?;
    let tokens = run_trials(&scenario, n, seed);
    let report = match frame {
        Frame::Observation => estimate_observation(&tokens, &query)?,
        Frame::Trial => estimate_trial_in_box(&tokens, &query)?,
    };
    Ok(render_report(&report.into(), format))
}

fn cmd_bet(
    file: &Path,
    query_text: &str,
    price_text: Option<&str>,
    n: u64,
    seed: u64,
    format: ReportFormat,
) -> Result<String, Failure> {
    let scenario = load_scenario(file)?;
    let query = load_query(query_text)?;
    let price = match price_text {
        Some(text) => Rational::from_str(text).map_err(|e| Failure::new(1, e.to_string()))?,
        None => {
            let fair = fair_price(&scenario, &query)?;
            eprintln!("note: no --price given, betting at the fair price {fair}");
            fair
        }
    };
    let report = simulate_betting(&scenario, &query, &price, n, seed);
    Ok(render_report(&report.into(), format))
}

fn cmd_compare(file: &Path, query_text: &str, format: ReportFormat) -> Result<String, Failure> {
    let scenario = load_scenario(file)?;
    let query = load_query(query_text)?;
    let trial = trial_probability(&scenario, &query)?;
    let observation = observation_probability(&scenario, &query)?;
    let rows = [
        ExactResult::new(&scenario, Frame::Trial, &query, trial),
        ExactResult::new(&scenario, Frame::Observation, &query, observation),
    ];
    Ok(render_comparison(&rows, format))
}
