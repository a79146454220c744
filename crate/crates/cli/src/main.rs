use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qstft_cli::{emit_report, parse_config, run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "qstft",
    about = "Verification suites for windowed Fourier analysis on finite abelian groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites and write a canonical JSON report.
    Run {
        /// Path to the JSON configuration.
        #[arg(long)]
        config: PathBuf,
        /// Path the report is written to.
        #[arg(long)]
        out: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured suites (comma-separated names).
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
        /// Override the configured trial count for sampled norms.
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            suites,
            trials,
        } => run(config, out, seed, suites, trials),
    }
}

fn run(
    config_path: PathBuf,
    out_path: PathBuf,
    seed: Option<u64>,
    suites: Option<Vec<String>>,
    trials: Option<usize>,
) -> ExitCode {
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: invalid config: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(trials) = trials {
        if trials == 0 {
            eprintln!("error: --trials must be at least 1");
            return ExitCode::from(2);
        }
        config.trials = trials;
    }
    if let Some(names) = suites {
        let mut parsed = Vec::new();
        for name in &names {
            match Suite::parse(name) {
                Some(s) => {
                    if !parsed.contains(&s) {
                        parsed.push(s);
                    }
                }
                None => {
                    eprintln!("error: unknown suite \"{name}\"");
                    return ExitCode::from(2);
                }
            }
        }
        if parsed.is_empty() {
            eprintln!("error: --suites must name at least one suite");
            return ExitCode::from(2);
        }
        config.suites = parsed;
    }

    let report = run_suite(&config);
    if let Err(e) = emit_report(&report, &out_path) {
        eprintln!("error: cannot write {}: {e}", out_path.display());
        return ExitCode::from(2);
    }

    let s = &report.summary;
    println!(
        "{} checks, {} passed, {} failed -> {}",
        s.total,
        s.passed,
        s.failed,
        if s.pass { "PASS" } else { "FAIL" }
    );
    for check in report.checks.iter().filter(|c| !c.pass) {
        println!(
            "  FAIL {}/{}/{} (residual {:.3e}, tolerance {:.3e})",
            check.suite, check.group, check.check, check.residual, check.tolerance
        );
    }
    if s.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
