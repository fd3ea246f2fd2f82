//! Mean gain factor E[g] and the resulting average-SNR gains for each
//! combiner and σ² over a range of port counts N.

use plfso_core::combining::{average_snr, mean_gain_factor_closed_form, receiver_gains};
use plfso_core::rng::worker_rng;
use plfso_core::{CombinerKind, SnrScale, Spread};

use super::{lantern, par_points};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{num, Table};

pub const COLUMNS: [&str; 9] = [
    "n_smf",
    "combiner",
    "sigma2_tag",
    "method",
    "mean_gain_factor",
    "std_error",
    "normalized_gain",
    "gain_vs_smf",
    "gain_vs_mmf",
];

pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let seed = cfg.seed_or_zero();
    let unit = SnrScale::new(1.0).expect("unit scale");
    let points = par_points(cfg.n_smf_grid.len(), |idx| {
        let n = cfg.n_smf_grid[idx];
        let mut rows = Vec::new();
        for &spread in &cfg.spreads {
            let model = lantern(n, spread, cfg.xi_pl)?;
            for &kind in &cfg.combiners {
                let method = match (mean_gain_factor_closed_form(kind, model), kind, spread) {
                    (None, ..) => "mc",
                    (Some(_), CombinerKind::Sc, Spread::Uniform) if n > 2 => "fit",
                    _ => "exact",
                };
                let mut rng = worker_rng(seed, idx as u64);
                let est = average_snr(kind, model, unit, cfg.mc_samples, &mut rng)
                    .map_err(|e| CliError::numeric(format!("mean {kind} gain for N={n}, sigma2={spread}"), e))?;
                let normalized = est.value / n as f64;
                let g = receiver_gains(normalized, cfg.xi_pl, cfg.zeta_ratio, cfg.eta_ratio);
                rows.push(vec![
                    n.to_string(),
                    kind.to_string(),
                    spread.to_string(),
                    method.to_string(),
                    num(est.value),
                    num(est.std_error),
                    num(normalized),
                    num(g.vs_smf),
                    num(g.vs_mmf),
                ]);
            }
        }
        Ok(rows)
    })?;
    let mut t = Table::new(&COLUMNS);
    for rows in points {
        t.extend(rows);
    }
    Ok(t)
}
