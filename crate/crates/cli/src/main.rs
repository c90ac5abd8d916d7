use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use modmax_cli::error::CliError;
use modmax_cli::gen::{cmd_gen, DEFAULT_WARN_MU};
use modmax_cli::report::{cmd_report, ReportOptions};
use modmax_cli::run::cmd_run;
use modmax_cli::solve::{cmd_solve, SolveOptions};

/// Exact and heuristic modularity maximization with an evaluation harness.
#[derive(Parser)]
#[command(name = "modmax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate abcdlite instances from a JSON spec file.
    Gen {
        specs: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Warn for specs whose mixing parameter exceeds this value.
        #[arg(long, default_value_t = DEFAULT_WARN_MU)]
        warn_mu: f64,
    },
    /// Solve one edge list and print the result as JSON.
    Solve {
        edgelist: PathBuf,
        /// cnm, louvain, leiden, combo, exact or bnb:<tolerance>.
        algorithm: String,
        /// Resolution as an integer, fraction or decimal.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative gap at which `exact` may stop.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Evaluate algorithms against exact optima as configured in JSON.
    Run {
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Summarize a records CSV into success rates, scatter data and
    /// distributions.
    Report {
        records: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        success_threshold: Option<f64>,
        /// Comma-separated algorithms for the average success rate.
        #[arg(long, value_delimiter = ',')]
        average_over: Option<Vec<String>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::UnknownAlgorithm(_) => 2,
                _ => 1,
            })
        }
    }
}

fn execute(command: Command) -> modmax_cli::Result<u8> {
    match command {
        Command::Gen { specs, out, warn_mu } => {
            let summary = cmd_gen(&specs, &out, warn_mu)?;
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("wrote {} instances; manifest {}", summary.instances, summary.manifest.display());
            Ok(0)
        }
        Command::Solve {
            edgelist,
            algorithm,
            gamma,
            seed,
            tolerance,
            time_limit,
            node_limit,
        } => {
            let time_limit = match time_limit {
                Some(t) if !(t > 0.0 && t.is_finite()) => {
                    return Err(CliError::Config(format!("--time-limit must be positive, got {t}")))
                }
                t => t.map(Duration::from_secs_f64),
            };
            let opts = SolveOptions {
                gamma,
                seed,
                tolerance,
                time_limit,
                node_limit,
            };
            let out = cmd_solve(&edgelist, &algorithm, &opts)?;
            println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            Ok(out.exit_code as u8)
        }
        Command::Run { config, out } => {
            let output = cmd_run(&config, &out)?;
            let failed = output.networks.iter().filter(|n| n.error.is_some()).count();
            eprintln!(
                "{} records over {} networks ({failed} with errors) in {}",
                output.records.len(),
                output.networks.len(),
                out.display()
            );
            Ok(0)
        }
        Command::Report {
            records,
            out,
            success_threshold,
            average_over,
        } => {
            let summary = cmd_report(
                &records,
                &out,
                &ReportOptions {
                    success_threshold,
                    average_over,
                },
            )?;
            for r in &summary.success_rates {
                println!("{:<12} {:.3} ({}/{})", r.algorithm, r.success_rate, r.successes, r.evaluated);
            }
            if let Some(avg) = summary.average.success_rate {
                println!("average success rate: {avg:.3}");
            }
            Ok(0)
        }
    }
}
