//! Photon-assignment simulation: per-port histograms of the power ratio
//! m_i/M and a summary row with the mean, variance and pairwise correlation.
//!
//! Trials are cut into fixed chunks of [`CHUNK`]; chunk `c` of grid entry
//! `g` draws from `worker_rng(seed, g·2³² + c)` and the chunks are merged in
//! order.

use plfso_core::lantern::{theoretical_correlation, PhotonSim};
use plfso_core::rng::worker_rng;

use super::par_points;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{num, Table};

pub const CHUNK: u64 = 10_000;

pub const COLUMNS: [&str; 10] = [
    "n_smf",
    "n_photons",
    "record",
    "port_index",
    "bin_center",
    "frequency",
    "per_port_mean",
    "per_port_variance",
    "pairwise_correlation",
    "theoretical_correlation",
];

/// Runs `trials` trials for N ports and M photons as fixed chunks.
pub fn simulate(n_smf: usize, photons: u64, trials: u64, seed: u64, stream_base: u64) -> Result<PhotonSim, CliError> {
    let err = |e| CliError::numeric(format!("photon simulation for N={n_smf}, M={photons}"), e);
    let chunks = trials.div_ceil(CHUNK);
    let parts = par_points(chunks as usize, |c| {
        let len = CHUNK.min(trials - c as u64 * CHUNK);
        let mut sim = PhotonSim::new(n_smf, photons).map_err(err)?;
        sim.run(len, &mut worker_rng(seed, stream_base + c as u64));
        Ok(sim)
    })?;
    let mut total = PhotonSim::new(n_smf, photons).map_err(err)?;
    for p in &parts {
        total.merge(p).map_err(err)?;
    }
    Ok(total)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&COLUMNS);
    for (g, &n) in cfg.n_smf_grid.iter().enumerate() {
        let m = cfg.photons.unwrap_or(cfg.photons_per_port * n as u64);
        let sim = simulate(n, m, cfg.trials, cfg.seed_or_zero(), (g as u64) << 32)?;
        let (ns, ms) = (n.to_string(), m.to_string());
        for port in 0..n {
            for (center, freq) in sim.histogram(port) {
                t.push(vec![
                    ns.clone(),
                    ms.clone(),
                    "histogram".into(),
                    port.to_string(),
                    num(center),
                    num(freq),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
        }
        let s = sim.stats();
        let rho = theoretical_correlation(n).map_err(|e| CliError::config("n_smf", e))?;
        t.push(vec![
            ns,
            ms,
            "summary".into(),
            String::new(),
            String::new(),
            String::new(),
            num(s.per_port_mean),
            num(s.per_port_variance),
            num(s.pairwise_correlation),
            num(rho),
        ]);
    }
    Ok(t)
}
