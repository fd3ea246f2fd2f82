//! BER against the single-mode reference SNR γ̄₀.
//!
//! At γ̄₀ the receivers see:
//!
//! - lantern: K = γ̄₀ ξ_PL (ζ_M/ζ_S)/N per unit gain factor,
//! - single-mode fiber: γ̄₀,
//! - multimode fiber: γ̄₀ (ζ_M/ζ_S)/(η_S/η_M).
//!
//! Monte-Carlo rows are produced for every receiver, combiner and σ². The
//! integral, series and asymptote rows need an SNR of the form γ̄·I, so on
//! the lantern they are produced for MRC only. All Monte-Carlo runs at one
//! grid point restart the same stream, which makes MRC rows identical
//! across σ² and EGC on the degenerate split identical to MRC.

use plfso_core::ber::{ber_asymptotic, ber_integral, ber_mc, ber_series};
use plfso_core::combining::mmf_over_smf;
use plfso_core::rng::worker_rng;
use plfso_core::{BerMethod, BerResult, CombinerKind, LanternModel, SnrScale};

use super::{db_to_linear, lantern, par_points};
use crate::config::{ExperimentConfig, Receiver};
use crate::error::CliError;
use crate::output::{num, opt_num, Table};

pub const COLUMNS: [&str; 7] = [
    "snr_db_ref",
    "receiver",
    "combiner",
    "sigma2_tag",
    "method",
    "ber",
    "error_estimate",
];

pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let points = par_points(cfg.snr_grid_db.len(), |i| point(cfg, i))?;
    let mut t = Table::new(&COLUMNS);
    for rows in points {
        t.extend(rows);
    }
    Ok(t)
}

fn analytic(cfg: &ExperimentConfig, method: BerMethod, gamma_bar: f64) -> plfso_core::Result<BerResult> {
    match method {
        BerMethod::Integral => ber_integral(gamma_bar, cfg.turbulence, cfg.quad_tol),
        BerMethod::Series => ber_series(gamma_bar, cfg.turbulence, cfg.series_terms),
        BerMethod::Asymptotic => ber_asymptotic(gamma_bar, cfg.turbulence),
        BerMethod::MonteCarlo => unreachable!("handled by the caller"),
    }
}

fn point(cfg: &ExperimentConfig, idx: usize) -> Result<Vec<Vec<String>>, CliError> {
    let db = cfg.snr_grid_db[idx];
    let g0 = db_to_linear(db);
    let seed = cfg.seed_or_zero();
    let n = cfg.n_smf as f64;
    let mut rows = Vec::new();
    for &receiver in &cfg.receivers {
        // (combiner, sigma2 tag, model, K) for each configuration of this receiver
        let mut setups = Vec::new();
        match receiver {
            Receiver::Pl => {
                for &spread in &cfg.spreads {
                    let model = lantern(cfg.n_smf, spread, cfg.xi_pl)?;
                    let s = SnrScale::from_reference(g0, cfg.zeta_ratio, model)
                        .map_err(|e| CliError::numeric(format!("SNR scale at snr_db_ref={}", num(db)), e))?;
                    for &kind in &cfg.combiners {
                        setups.push((Some(kind), spread.to_string(), model, s));
                    }
                }
            }
            Receiver::Smf | Receiver::Mmf => {
                let gamma = match receiver {
                    Receiver::Smf => g0,
                    _ => g0 * mmf_over_smf(cfg.zeta_ratio, cfg.eta_ratio),
                };
                // MRC over a degenerate split with K = γ̄/N has SNR exactly γ̄·I
                let model = LanternModel::degenerate(cfg.n_smf).map_err(|e| CliError::config("n_smf", e))?;
                let s = SnrScale::new(gamma / n)
                    .map_err(|e| CliError::numeric(format!("{receiver} SNR at snr_db_ref={}", num(db)), e))?;
                setups.push((None, String::new(), model, s));
            }
        }
        for (kind, tag, model, s) in setups {
            let label = match kind {
                Some(k) => format!("{receiver}-{k} (sigma2={tag})"),
                None => receiver.to_string(),
            };
            for &method in &cfg.methods {
                let result = match method {
                    BerMethod::MonteCarlo => {
                        let mut rng = worker_rng(seed, idx as u64);
                        ber_mc(
                            kind.unwrap_or(CombinerKind::Mrc),
                            model,
                            s,
                            cfg.turbulence,
                            cfg.mc_samples,
                            &mut rng,
                        )
                    }
                    _ if kind.is_none() || kind == Some(CombinerKind::Mrc) => analytic(cfg, method, s.k() * n),
                    _ => continue,
                };
                let r = result
                    .map_err(|e| CliError::numeric(format!("{method} BER for {label} at snr_db_ref={}", num(db)), e))?;
                rows.push(vec![
                    num(db),
                    receiver.to_string(),
                    kind.map(|k| k.to_string()).unwrap_or_default(),
                    tag.clone(),
                    method.to_string(),
                    num(r.value),
                    opt_num(r.error_estimate),
                ]);
            }
        }
    }
    Ok(rows)
}
