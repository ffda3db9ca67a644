use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use paralab::experiments::{self, Kind, RunOptions};

#[derive(Parser)]
#[command(name = "paralab", version, about = "Run lattice, torus-fibration and orbit-closure experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Treat unknown scenario fields as errors.
    #[arg(long)]
    strict: bool,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions { threads: self.threads, seed: self.seed, strict: self.strict }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its outputs and manifest.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run an assertion suite; exits 1 if any assertion fails.
    Verify {
        suite: PathBuf,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print an annotated scenario template (all kinds if none is given).
    Schema { kind: Option<Kind> },
}

fn fail(e: experiments::ExperimentError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, out, common } => match experiments::run(&scenario, &out, &common.options()) {
            Ok(record) => {
                for w in &record.warnings {
                    eprintln!("warning: {w}");
                }
                println!("{}", serde_json::to_string_pretty(&record).expect("json"));
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Verify { suite, out, common } => match experiments::verify(&suite, &common.options()) {
            Ok(report) => {
                for case in &report.cases {
                    if let Some(err) = &case.error {
                        println!("FAIL {}: {err}", case.name);
                    }
                    for a in &case.assertions {
                        let status = if a.pass { "PASS" } else { "FAIL" };
                        println!("{status} {} {}: measured {} expected {}", case.name, a.path, a.measured, a.expected);
                    }
                }
                println!("{} passed, {} failed", report.passed, report.failed);
                if let Some(path) = out {
                    if let Err(e) = std::fs::write(&path, serde_json::to_string_pretty(&report).expect("json")) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                }
                if report.all_passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => fail(e),
        },
        Command::Schema { kind } => {
            print!("{}", experiments::schema(kind));
            ExitCode::SUCCESS
        }
    }
}
