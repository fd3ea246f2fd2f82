//! Cross-method agreement suite. Each check compares two independent routes
//! to the same quantity and reports PASS, FAIL, or SKIP when a route is
//! unavailable at that point.

use std::f64::consts::PI;

use plfso_core::ber::{ber_asymptotic, ber_integral, ber_mc, ber_series, truncation_bound};
use plfso_core::combining::{gain_factor, mean_gain_factor_closed_form, split_expectation};
use plfso_core::lantern::{photon_mc, theoretical_correlation, SplitSampler};
use plfso_core::rng::worker_rng;
use plfso_core::stats::{correlation_std_error, CoMoments};
use plfso_core::{CombinerKind, LanternModel, SnrScale, Spread};

use super::db_to_linear;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{num, Table};

pub const COLUMNS: [&str; 5] = ["check", "status", "measured", "reference", "tolerance"];

/// Grid of average SNRs (dB) for the BER comparisons.
pub const BER_GRID_DB: [f64; 4] = [10.0, 20.0, 30.0, 40.0];
pub const SERIES_REL_TOL: f64 = 1e-3;
pub const ASYMPTOTE_REL_TOL: f64 = 0.1;
pub const ASYMPTOTE_GRID_DB: [f64; 2] = [40.0, 50.0];
pub const SLOPE_REL_TOL: f64 = 0.01;
pub const Z_MAX: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: String, ok: bool, measured: f64, reference: f64, tolerance: f64) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self {
            name,
            status,
            measured,
            reference,
            tolerance,
        }
    }

    fn skip(name: String) -> Self {
        Self {
            name,
            status: Status::Skip,
            measured: f64::NAN,
            reference: f64::NAN,
            tolerance: f64::NAN,
        }
    }

    /// |measured − reference| ≤ tolerance.
    fn abs(name: String, measured: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(
            name,
            (measured - reference).abs() <= tolerance,
            measured,
            reference,
            tolerance,
        )
    }
}

fn numeric(what: String) -> impl Fn(plfso_core::Error) -> CliError {
    move |e| CliError::numeric(what.clone(), e)
}

pub fn checks(cfg: &ExperimentConfig) -> Result<Vec<Check>, CliError> {
    let turb = cfg.turbulence;
    let tname = &cfg.turbulence_name;
    let seed = cfg.seed_or_zero();
    let n = cfg.n_smf;
    let mut out = Vec::new();
    let mut stream = 0u64;
    let mut next_rng = || {
        stream += 1;
        worker_rng(seed, stream)
    };

    let uniform = LanternModel::uniform(n).map_err(|e| CliError::config("n_smf", e))?;
    for db in BER_GRID_DB {
        let g = db_to_linear(db);
        let at = format!("{tname} at {db} dB");
        let exact = ber_integral(g, turb, cfg.quad_tol).map_err(numeric(format!("integral BER, {at}")))?;
        let quad_err = exact.error_estimate.unwrap_or(0.0);

        match ber_series(g, turb, cfg.series_terms) {
            Ok(s) => {
                let rel = (s.value - exact.value).abs() / exact.value;
                out.push(Check::new(
                    format!("series_vs_integral J={} {at}", cfg.series_terms),
                    rel <= SERIES_REL_TOL,
                    s.value,
                    exact.value,
                    SERIES_REL_TOL * exact.value,
                ));
            }
            Err(_) => out.push(Check::skip(format!("series_vs_integral J={} {at}", cfg.series_terms))),
        }

        for j in [5, 10, 20, 30] {
            let name = format!("truncation_bound J={j} {at}");
            match (ber_series(g, turb, j), truncation_bound(j, g, turb)) {
                (Ok(s), Ok(bound)) => out.push(Check::abs(name, s.value, exact.value, bound + quad_err)),
                _ => out.push(Check::skip(name)),
            }
        }

        let s = SnrScale::new(g / n as f64).map_err(numeric(format!("SNR scale, {at}")))?;
        let mc = ber_mc(CombinerKind::Mrc, uniform, s, turb, cfg.mc_samples, &mut next_rng())
            .map_err(numeric(format!("mc BER, {at}")))?;
        let se = mc.error_estimate.unwrap_or(0.0);
        out.push(Check::abs(
            format!("mc_mrc_vs_integral {at}"),
            mc.value,
            exact.value,
            Z_MAX * se + quad_err,
        ));
    }

    for db in ASYMPTOTE_GRID_DB {
        let g = db_to_linear(db);
        let at = format!("{tname} at {db} dB");
        let exact = ber_integral(g, turb, cfg.quad_tol).map_err(numeric(format!("integral BER, {at}")))?;
        let name = format!("asymptote_vs_integral {at}");
        match ber_asymptotic(g, turb) {
            Ok(a) => out.push(Check::abs(name, a.value, exact.value, ASYMPTOTE_REL_TOL * exact.value)),
            Err(_) => out.push(Check::skip(name)),
        }
    }

    let (lo, hi) = (60.0, 70.0);
    let a = ber_integral(db_to_linear(lo), turb, cfg.quad_tol)
        .map_err(numeric(format!("integral BER, {tname} at {lo} dB")))?;
    let b = ber_integral(db_to_linear(hi), turb, cfg.quad_tol)
        .map_err(numeric(format!("integral BER, {tname} at {hi} dB")))?;
    let slope = (b.value / a.value).log10() / ((hi - lo) / 10.0);
    out.push(Check::abs(
        format!("high_snr_slope {tname} {lo}-{hi} dB"),
        slope,
        -turb.beta(),
        SLOPE_REL_TOL * turb.beta(),
    ));

    // the closed forms against sampling the uniform split
    let est = split_expectation(
        uniform,
        |a| gain_factor(CombinerKind::Egc, a),
        cfg.mc_samples,
        &mut next_rng(),
    )
    .map_err(numeric("EGC mean gain".into()))?;
    let closed = mean_gain_factor_closed_form(CombinerKind::Egc, uniform).unwrap_or(f64::NAN);
    out.push(Check::abs(
        format!("egc_uniform_mean_gain N={n}"),
        est.value,
        closed,
        Z_MAX * est.std_error,
    ));
    let est = split_expectation(uniform, |a| (a[0] * a[1]).sqrt(), cfg.mc_samples, &mut next_rng())
        .map_err(numeric("E[sqrt(a1 a2)]".into()))?;
    out.push(Check::abs(
        format!("sqrt_pair_mean N={n}"),
        est.value,
        PI / (4.0 * n as f64),
        Z_MAX * est.std_error,
    ));

    // MRC ignores the split model and EGC on the degenerate split is MRC:
    // with a shared stream the estimates are bit-for-bit equal
    let g = db_to_linear(30.0);
    let reference_model = LanternModel::degenerate(n).map_err(|e| CliError::config("n_smf", e))?;
    let s = SnrScale::from_reference(g, cfg.zeta_ratio, reference_model).map_err(numeric("SNR scale".into()))?;
    let run = |kind, model| {
        ber_mc(
            kind,
            model,
            s,
            turb,
            cfg.mc_samples.min(100_000),
            &mut worker_rng(seed, 0),
        )
        .map(|r| r.value)
        .map_err(numeric(format!("mc {kind} BER")))
    };
    let mrc = run(CombinerKind::Mrc, reference_model)?;
    for &spread in &cfg.spreads {
        let model = LanternModel::new(n, spread, 1.0).map_err(|e| CliError::config("sigma2", e))?;
        let v = run(CombinerKind::Mrc, model)?;
        out.push(Check::new(
            format!("mrc_split_invariance sigma2={spread}"),
            v == mrc,
            v,
            mrc,
            0.0,
        ));
    }
    let egc = run(CombinerKind::Egc, reference_model)?;
    out.push(Check::new(
        "egc_degenerate_equals_mrc".into(),
        egc == mrc,
        egc,
        mrc,
        0.0,
    ));

    // pairwise correlation −1/(N − 1), from photons and from the split samplers
    let rho = theoretical_correlation(n).map_err(|e| CliError::config("n_smf", e))?;
    let stats = photon_mc(n, cfg.photons_per_port * n as u64, cfg.trials, &mut next_rng())
        .map_err(numeric("photon simulation".into()))?;
    let se = correlation_std_error(rho, stats.n_trials).max(1e-12);
    out.push(Check::abs(
        format!("photon_correlation N={n}"),
        stats.pairwise_correlation,
        rho,
        Z_MAX * se,
    ));
    for &spread in &cfg.spreads {
        if spread == Spread::Degenerate {
            continue;
        }
        let model = LanternModel::new(n, spread, 1.0).map_err(|e| CliError::config("sigma2", e))?;
        let sampler = SplitSampler::new(model);
        let mut rng = next_rng();
        let mut m = CoMoments::new(n);
        let mut buf = vec![0.0; n];
        for _ in 0..cfg.trials {
            sampler
                .sample_into(&mut rng, &mut buf)
                .map_err(numeric(format!("split sampling sigma2={spread}")))?;
            m.push(&buf);
        }
        let se = correlation_std_error(rho, cfg.trials).max(1e-12);
        out.push(Check::abs(
            format!("split_correlation sigma2={spread} N={n}"),
            m.mean_pairwise_correlation(),
            rho,
            Z_MAX * se,
        ));
    }
    Ok(out)
}

pub fn table(checks: &[Check]) -> Table {
    let mut t = Table::new(&COLUMNS);
    for c in checks {
        let cell = |x: f64| if x.is_nan() { String::new() } else { num(x) };
        t.push(vec![
            c.name.clone(),
            c.status.as_str().into(),
            cell(c.measured),
            cell(c.reference),
            cell(c.tolerance),
        ]);
    }
    t
}
