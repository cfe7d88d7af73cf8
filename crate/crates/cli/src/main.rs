use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antijam::harness::{self, Overrides, RunSummary, ScenarioConfig};
use antijam::Error;
use clap::{Args, Parser, Subcommand};

/// Game-theoretic learning anti-jamming simulator.
#[derive(Parser)]
#[command(name = "antijam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config or a built-in preset.
    Run(RunArgs),
    /// Built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    List,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    slots: Option<u64>,
    /// Results root; each scenario writes into `<out>/<id>/`.
    #[arg(long)]
    out: Option<PathBuf>,
}

const DEFAULT_OUT: &str = "results";

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::Parse { .. } => Failure::Config(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Presets {
            action: PresetsAction::List,
        } => {
            for name in harness::PRESET_NAMES {
                println!("{name}\t{}", harness::describe(name).unwrap_or_default());
            }
            Ok(())
        }
        Command::Validate { config } => read_config(&config).map(|c| {
            println!(
                "{}: ok ({} scenario, id {})",
                config.display(),
                c.scenario.name(),
                c.id()
            );
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_document(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn read_config(path: &Path) -> Result<ScenarioConfig, Failure> {
    Ok(harness::load_config(&read_document(path)?)?)
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let raw = match (&args.config, &args.preset) {
        (Some(path), _) => vec![harness::parse_config(&read_document(path)?)?],
        (None, Some(name)) => harness::preset(name).ok_or_else(|| {
            Failure::Config(format!(
                "unknown preset {name:?}; available: {}",
                harness::PRESET_NAMES.join(", ")
            ))
        })?,
        (None, None) => unreachable!("clap requires --config or --preset"),
    };
    let overrides = Overrides {
        seed: args.seed,
        trials: args.trials,
        slots: args.slots,
    };
    let configs = raw
        .into_iter()
        .map(|mut c| {
            overrides.apply(&mut c);
            c.resolve()
        })
        .collect::<Result<Vec<_>, _>>()?;

    for config in &configs {
        let root = args
            .out
            .clone()
            .or_else(|| config.output.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let dir = root.join(config.id());
        let summary = harness::run_scenario(config, Some(&dir))?;
        print_summary(&summary, &dir);
    }
    Ok(())
}

fn print_summary(summary: &RunSummary, dir: &Path) {
    println!("{} -> {}", summary.scenario, dir.display());
    for r in &summary.rows {
        println!(
            "  {:<16} {:<20} {:>10.4} ± {:.4} (n={})",
            r.algorithm.name(),
            r.metric,
            r.mean,
            r.ci_half_width,
            r.trials
        );
    }
}
