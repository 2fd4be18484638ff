//! `loopacc`: lower bounds and non-termination proofs for integer transition
//! systems by loop acceleration.

mod bench;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use loopacc::{parse, run_strategy, Engine, Mode, Options, Solver, SolverConfig, Strategy};

const USAGE: u8 = 1;
const INPUT: u8 = 2;
const SOLVER: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Core,
    Naive,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Core => Strategy::Core,
            StrategyArg::Naive => Strategy::Naive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Complexity,
    #[value(name = "non_termination")]
    NonTermination,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Complexity => Mode::Complexity,
            ModeArg::NonTermination => Mode::NonTermination,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "loopacc", version, about)]
struct Cli {
    /// ITS file to analyze.
    #[arg(required_unless_present_any = ["bench", "limit_strategy"])]
    input: Option<PathBuf>,

    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 300)]
    timeout: u64,

    /// 0: verdict only, 1: bound or witness, 2: simplified transitions and
    /// processor steps, 3: selections, problem states and query counts.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=3))]
    proof_level: u8,

    /// Omit timing information so that output is stable across runs.
    #[arg(long)]
    plain: bool,

    #[arg(long, value_enum, default_value_t = ModeArg::Complexity)]
    mode: ModeArg,

    #[arg(long, value_enum, default_value_t = StrategyArg::Core)]
    strategy: StrategyArg,

    /// SMT solver executable; defaults to $SMT_SOLVER, then `z3`.
    #[arg(long)]
    solver: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Compare candidate-check counts of both strategies on random loops with
    /// 1..=M_MAX guard atoms instead of analyzing a file.
    #[arg(long, num_args = 2, value_names = ["M_MAX", "TRIALS"], conflicts_with = "input")]
    bench: Option<Vec<usize>>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, hide = true, num_args = 0..=1)]
    limit_strategy: Option<Option<String>>,
}

fn solver_config(cli: &Cli) -> SolverConfig {
    let mut config = SolverConfig {
        seed: cli.seed,
        ..SolverConfig::default()
    };
    if let Some(path) = &cli.solver {
        config = config.with_path(path);
    }
    config
}

fn spawn(cli: &Cli) -> Option<Solver> {
    Solver::new(solver_config(cli))
        .map_err(|e| eprintln!("error: {e}"))
        .ok()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    if cli.limit_strategy.is_some() {
        eprintln!(
            "error: --limit-strategy is not supported; see `asymptotic_hint` \
             (the `hint:` line in text output) for a heuristic degree instead"
        );
        return ExitCode::from(USAGE);
    }

    if let Some(args) = &cli.bench {
        let (m_max, trials) = (args[0], args[1]);
        if !(1..=bench::M_MAX).contains(&m_max) || trials == 0 {
            eprintln!(
                "error: --bench needs 1 <= M_MAX <= {} and TRIALS >= 1",
                bench::M_MAX
            );
            return ExitCode::from(USAGE);
        }
        let Some(solver) = spawn(&cli) else {
            return ExitCode::from(SOLVER);
        };
        return match bench::run(solver, m_max, trials, cli.seed, cli.format) {
            Ok(out) => {
                print!("{out}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(SOLVER)
            }
        };
    }

    let path = cli.input.as_ref().expect("clap requires an input");
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(INPUT);
        }
    };
    let its = match parse(&text) {
        Ok(its) => its,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(INPUT);
        }
    };

    let options = Options {
        mode: cli.mode.into(),
        timeout: Some(Duration::from_secs(cli.timeout)),
        ..Options::default()
    };
    let Some(solver) = spawn(&cli) else {
        return ExitCode::from(SOLVER);
    };
    let mut engine = Engine::new(solver, cli.strategy.into());
    let start = Instant::now();
    let report = match run_strategy(&its, &mut engine, options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(SOLVER);
        }
    };
    let elapsed = (!cli.plain).then(|| start.elapsed());
    if report.incomplete {
        eprintln!("warning: timeout reached; result is partial");
    }
    let out = match cli.format {
        Format::Text => render::text(&report, cli.proof_level, elapsed),
        Format::Json => render::json(&report, elapsed),
    };
    print!("{out}");
    ExitCode::SUCCESS
}
