//! Experiment runner behind the `plfso` binary: configuration, the five
//! experiments, and CSV output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{Experiment, ExperimentConfig, Overrides, RawConfig, Receiver};
pub use error::CliError;
pub use output::Table;

use experiments::validate::Status;

/// The table an experiment produces, and how many validation checks failed.
pub fn build(cfg: &ExperimentConfig) -> Result<(Table, usize), CliError> {
    let table = match cfg.experiment {
        Experiment::PhotonSim => experiments::photon_sim::run(cfg)?,
        Experiment::SnrSweep => experiments::snr_sweep::run(cfg)?,
        Experiment::BerCurve => experiments::ber_curve::run(cfg)?,
        Experiment::GainMap => experiments::gain_map::run(cfg)?,
        Experiment::Validate => {
            let checks = experiments::validate::checks(cfg)?;
            let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
            return Ok((experiments::validate::table(&checks), failed));
        }
    };
    Ok((table, 0))
}

/// Builds and writes the experiment's CSV. A failed validation suite still
/// writes its table before reporting the failure.
pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let work = || -> Result<(), CliError> {
        let (table, failed) = build(cfg)?;
        output::emit(cfg, &table)?;
        if failed > 0 {
            return Err(CliError::Validation { failed });
        }
        Ok(())
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::config("threads", e))?
            .install(work),
        None => work(),
    }
}
