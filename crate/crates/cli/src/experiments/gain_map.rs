//! Average-SNR gain of the EGC lantern receiver over the two fiber
//! receivers, on a (ζ_M/ζ_S, η_S/η_M, ξ_PL) grid. The normalized mean gain
//! factor E[g]/N depends only on σ², so it is computed once per tag.

use plfso_core::combining::{gain_factor, mean_gain_factor_closed_form, receiver_gains, split_expectation};
use plfso_core::rng::worker_rng;
use plfso_core::CombinerKind;

use super::{lantern, par_points};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{num, Table};

pub const COLUMNS: [&str; 6] = [
    "zeta_ratio",
    "eta_ratio",
    "xi_pl",
    "sigma2_tag",
    "gain_vs_smf",
    "gain_vs_mmf",
];

/// E[g_EGC]/N for each configured σ², in config order.
pub fn normalized_gains(cfg: &ExperimentConfig) -> Result<Vec<f64>, CliError> {
    let seed = cfg.seed_or_zero();
    par_points(cfg.spreads.len(), |idx| {
        let model = lantern(cfg.n_smf, cfg.spreads[idx], 1.0)?;
        let mean = match mean_gain_factor_closed_form(CombinerKind::Egc, model) {
            Some(g) => g,
            None => {
                let mut rng = worker_rng(seed, idx as u64);
                split_expectation(model, |a| gain_factor(CombinerKind::Egc, a), cfg.mc_samples, &mut rng)
                    .map_err(|e| CliError::numeric(format!("EGC mean gain for sigma2={}", cfg.spreads[idx]), e))?
                    .value
            }
        };
        Ok(mean / cfg.n_smf as f64)
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let gains = normalized_gains(cfg)?;
    let mut t = Table::new(&COLUMNS);
    for (spread, &g) in cfg.spreads.iter().zip(&gains) {
        for &z in &cfg.zeta_grid {
            for &e in &cfg.eta_grid {
                for &xi in &cfg.xi_grid {
                    let r = receiver_gains(g, xi, z, e);
                    t.push(vec![
                        num(z),
                        num(e),
                        num(xi),
                        spread.to_string(),
                        num(r.vs_smf),
                        num(r.vs_mmf),
                    ]);
                }
            }
        }
    }
    Ok(t)
}
