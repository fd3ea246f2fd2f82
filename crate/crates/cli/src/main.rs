use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plfso::{Experiment, Overrides};

/// Photonic-lantern FSO receiver experiments. Each subcommand writes one CSV
/// table. Exit status: 0 ok, 1 config error, 2 numeric failure, 3 validation
/// failure.
#[derive(Debug, Parser)]
#[command(name = "plfso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Photon-assignment histograms and pairwise correlation
    PhotonSim(Overrides),
    /// Mean gain factor and average-SNR gains over port counts
    SnrSweep(Overrides),
    /// BER against the single-mode reference SNR
    BerCurve(Overrides),
    /// Average-SNR gain over the fiber receivers on a device grid
    GainMap(Overrides),
    /// Cross-method agreement checks
    Validate(Overrides),
}

impl Command {
    fn split(self) -> (Experiment, Overrides) {
        match self {
            Command::PhotonSim(o) => (Experiment::PhotonSim, o),
            Command::SnrSweep(o) => (Experiment::SnrSweep, o),
            Command::BerCurve(o) => (Experiment::BerCurve, o),
            Command::GainMap(o) => (Experiment::GainMap, o),
            Command::Validate(o) => (Experiment::Validate, o),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (experiment, overrides) = cli.command.split();
    match overrides.resolve(experiment).and_then(|cfg| plfso::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plfso: {e}");
            e.exit_code()
        }
    }
}
