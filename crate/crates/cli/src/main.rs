use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lgk_cli::{parse_spec, run_suites, SUITE_NAMES};
use lgk_core::rootdatum::{BasedRootDatum, Isogeny, TypeLetter};

#[derive(Parser)]
#[command(name = "lgk", version, about = "Batch verification driver for root data, Tits sections, Chevalley involutions and endoscopic Fourier inversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a based root datum as JSON.
    Datum {
        /// Cartan letter: A, B, C, D or G2.
        #[arg(long = "type")]
        letter: String,
        #[arg(long)]
        rank: usize,
        /// Use the adjoint datum instead of the simply-connected one.
        #[arg(long)]
        adjoint: bool,
        /// Print the dual datum.
        #[arg(long)]
        dual: bool,
    },
    /// Run the suites named in a spec file and emit a JSON report.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock runtimes (breaks byte-identical reports).
        #[arg(long)]
        timings: bool,
    },
    /// List the available suite names.
    Suites,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Datum { letter, rank, adjoint, dual } => {
            let parsed: Result<TypeLetter, _> = letter.parse();
            let letter = match parsed {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let iso = if adjoint { Isogeny::Adjoint } else { Isogeny::SimplyConnected };
            match BasedRootDatum::build(letter, rank, iso) {
                Ok(d) => {
                    let d = if dual { d.dual() } else { d };
                    println!("{}", serde_json::to_string_pretty(&d.to_json()).unwrap());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Verify { spec, seed, out, timings } => {
            let text = match std::fs::read_to_string(&spec) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", spec.display());
                    return ExitCode::from(2);
                }
            };
            let (suite_spec, value) = match parse_spec(&text) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let report = match run_suites(&suite_spec, &value, seed, timings) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let rendered = report.to_pretty_json();
            println!("{rendered}");
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, format!("{rendered}\n")) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Suites => {
            for s in SUITE_NAMES {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
    }
}
