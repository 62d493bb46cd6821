use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaussent::harness::{self, RunOptions, Scenario};
use gaussent::LogBase;

#[derive(Parser)]
#[command(
    name = "gaussent",
    version,
    about = "Entanglement of Gaussian bosonic ground states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scenario and write results.csv, results.json and manifest.json
    Run {
        /// scenario JSON file
        config: Option<PathBuf>,
        /// use a shipped scenario instead of a file
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// output directory [default: the scenario's output, else out/<id>]
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_parser = parse_base)]
        log_base: Option<LogBase>,
        /// memory cap in GiB for concurrently held dense matrices
        #[arg(long, default_value_t = 4.0)]
        memory_cap_gib: f64,
    },
    /// Print invariant residuals of the scenario's ground states
    Verify {
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
    },
    /// List shipped scenarios
    Presets,
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: gaussent::Error| e.to_string())
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> gaussent::Result<(Scenario, String)> {
    let text = match (config, preset) {
        (Some(path), None) => std::fs::read_to_string(&path)?,
        (None, Some(name)) => harness::preset(&name)?.to_string(),
        _ => {
            return Err(gaussent::Error::Config(
                "give a config file or --preset".into(),
            ))
        }
    };
    Ok((Scenario::from_json(&text)?, text))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            preset,
            out,
            threads,
            log_base,
            memory_cap_gib,
        } => load(config, preset).and_then(|(scenario, text)| {
            let opts = RunOptions {
                threads,
                log_base,
                memory_cap: (memory_cap_gib * (1u64 << 30) as f64) as u64,
            };
            let output = harness::run(&scenario, &opts)?;
            let dir = out
                .or_else(|| scenario.output.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(&scenario.id));
            for f in harness::write_all(&output, &text, &dir)? {
                log::info!("wrote {}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }),
        Command::Verify { config, preset } => load(config, preset).map(|(scenario, _)| {
            let report = harness::verify(&scenario);
            for c in &report.checks {
                println!("{c}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }),
        Command::Presets => {
            for (name, _) in harness::PRESETS {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
