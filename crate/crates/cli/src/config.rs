//! Experiment configuration.
//!
//! Values resolve in three layers: built-in defaults, a flat TOML file,
//! then command-line flags. The file path comes from `--config` or, failing
//! that, the `PLFSO_CONFIG` environment variable.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::{env, fs};

use clap::Args;
use plfso_core::{BerMethod, CombinerKind, DeviceParams, Error, Spread, TurbulenceParams};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "PLFSO_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    PhotonSim,
    SnrSweep,
    BerCurve,
    GainMap,
    Validate,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::PhotonSim,
        Experiment::SnrSweep,
        Experiment::BerCurve,
        Experiment::GainMap,
        Experiment::Validate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::PhotonSim => "photon-sim",
            Experiment::SnrSweep => "snr-sweep",
            Experiment::BerCurve => "ber-curve",
            Experiment::GainMap => "gain-map",
            Experiment::Validate => "validate",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

/// Receiver architecture compared in the BER curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    Pl,
    Smf,
    Mmf,
}

impl Receiver {
    pub const ALL: [Receiver; 3] = [Receiver::Pl, Receiver::Smf, Receiver::Mmf];

    pub fn as_str(&self) -> &'static str {
        match self {
            Receiver::Pl => "PL",
            Receiver::Smf => "SMF",
            Receiver::Mmf => "MMF",
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Receiver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Receiver::ALL
            .into_iter()
            .find(|r| s.eq_ignore_ascii_case(r.as_str()))
            .ok_or_else(|| format!("unknown receiver {s:?}, expected PL, SMF or MMF"))
    }
}

/// A number or a text form such as `inf` or a grid range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

/// A grid as an explicit list, or as text: comma-separated numbers and
/// inclusive `start:step:stop` ranges.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Text(String),
}

/// Every key of the config file; all optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<String>,
    pub turbulence: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n_smf: Option<usize>,
    pub sigma2: Option<Vec<Scalar>>,
    pub xi_pl: Option<f64>,
    pub zeta_ratio: Option<f64>,
    pub eta_ratio: Option<f64>,
    pub zeta_s: Option<f64>,
    pub zeta_m: Option<f64>,
    pub eta_s: Option<f64>,
    pub eta_m: Option<f64>,
    pub combiners: Option<Vec<String>>,
    pub receivers: Option<Vec<String>>,
    pub methods: Option<Vec<String>>,
    pub snr_grid_db: Option<Grid>,
    pub mc_samples: Option<u64>,
    pub seed: Option<u64>,
    pub output_path: Option<String>,
    pub series_terms: Option<usize>,
    pub quad_tol: Option<f64>,
    pub photons: Option<u64>,
    pub photons_per_port: Option<u64>,
    pub trials: Option<u64>,
    pub n_smf_grid: Option<Grid>,
    pub zeta_grid: Option<Grid>,
    pub eta_grid: Option<Grid>,
    pub xi_grid: Option<Grid>,
    pub threads: Option<usize>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let field = unknown_field(&message).unwrap_or_else(|| "config".into());
            CliError::config(field, message.trim_end())
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RawConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if top.$f.is_some() {
                    self.$f = top.$f;
                })*
            };
        }
        take!(
            experiment,
            turbulence,
            alpha,
            beta,
            n_smf,
            sigma2,
            xi_pl,
            zeta_ratio,
            eta_ratio,
            zeta_s,
            zeta_m,
            eta_s,
            eta_m,
            combiners,
            receivers,
            methods,
            snr_grid_db,
            mc_samples,
            seed,
            output_path,
            series_terms,
            quad_tol,
            photons,
            photons_per_port,
            trials,
            n_smf_grid,
            zeta_grid,
            eta_grid,
            xi_grid,
            threads
        );
        self
    }
}

fn unknown_field(message: &str) -> Option<String> {
    let rest = message.split("unknown field `").nth(1)?;
    Some(rest.split('`').next()?.to_string())
}

/// Command-line overrides, one per config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Config file (TOML); defaults to $PLFSO_CONFIG when unset
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed for all Monte-Carlo streams
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path, `-` for stdout
    #[arg(long, short)]
    pub output: Option<String>,
    /// Turbulence preset: moderate or strong
    #[arg(long)]
    pub turbulence: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of single-mode ports N
    #[arg(long)]
    pub n_smf: Option<usize>,
    /// σ² tags, comma-separated: 0, a positive value, inf
    #[arg(long, value_delimiter = ',')]
    pub sigma2: Option<Vec<String>>,
    /// Lantern loss ξ_PL
    #[arg(long)]
    pub xi_pl: Option<f64>,
    /// ζ_M/ζ_S
    #[arg(long)]
    pub zeta_ratio: Option<f64>,
    /// η_S/η_M
    #[arg(long)]
    pub eta_ratio: Option<f64>,
    #[arg(long)]
    pub zeta_s: Option<f64>,
    #[arg(long)]
    pub zeta_m: Option<f64>,
    #[arg(long)]
    pub eta_s: Option<f64>,
    #[arg(long)]
    pub eta_m: Option<f64>,
    /// Combiners, comma-separated: SC, EGC, MRC
    #[arg(long, value_delimiter = ',')]
    pub combiners: Option<Vec<String>>,
    /// Receivers, comma-separated: PL, SMF, MMF
    #[arg(long, value_delimiter = ',')]
    pub receivers: Option<Vec<String>>,
    /// BER methods, comma-separated: mc, integral, series, asymptotic
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    /// γ̄₀ grid in dB: numbers and start:step:stop ranges
    #[arg(long, allow_hyphen_values = true)]
    pub snr_grid_db: Option<String>,
    #[arg(long)]
    pub mc_samples: Option<u64>,
    /// Series terms J
    #[arg(long)]
    pub series_terms: Option<usize>,
    /// Relative quadrature tolerance
    #[arg(long)]
    pub quad_tol: Option<f64>,
    /// Photons per trial M (default photons_per_port × N)
    #[arg(long)]
    pub photons: Option<u64>,
    #[arg(long)]
    pub photons_per_port: Option<u64>,
    /// Photon-assignment trials L
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub n_smf_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta_grid: Option<String>,
    #[arg(long)]
    pub eta_grid: Option<String>,
    #[arg(long)]
    pub xi_grid: Option<String>,
    /// Worker threads (output does not depend on it)
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn into_raw(self) -> RawConfig {
        RawConfig {
            experiment: None,
            turbulence: self.turbulence,
            alpha: self.alpha,
            beta: self.beta,
            n_smf: self.n_smf,
            sigma2: self.sigma2.map(|v| v.into_iter().map(Scalar::Text).collect()),
            xi_pl: self.xi_pl,
            zeta_ratio: self.zeta_ratio,
            eta_ratio: self.eta_ratio,
            zeta_s: self.zeta_s,
            zeta_m: self.zeta_m,
            eta_s: self.eta_s,
            eta_m: self.eta_m,
            combiners: self.combiners,
            receivers: self.receivers,
            methods: self.methods,
            snr_grid_db: self.snr_grid_db.map(Grid::Text),
            mc_samples: self.mc_samples,
            seed: self.seed,
            output_path: self.output,
            series_terms: self.series_terms,
            quad_tol: self.quad_tol,
            photons: self.photons,
            photons_per_port: self.photons_per_port,
            trials: self.trials,
            n_smf_grid: self.n_smf_grid.map(Grid::Text),
            zeta_grid: self.zeta_grid.map(Grid::Text),
            eta_grid: self.eta_grid.map(Grid::Text),
            xi_grid: self.xi_grid.map(Grid::Text),
            threads: self.threads,
        }
    }

    /// `--config`, else `$PLFSO_CONFIG`, else none.
    pub fn config_path(&self) -> Option<PathBuf> {
        self.config
            .clone()
            .or_else(|| env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    /// Defaults, then the config file, then these flags.
    pub fn resolve(self, experiment: Experiment) -> Result<ExperimentConfig, CliError> {
        let file = match self.config_path() {
            Some(p) => RawConfig::load(&p)?,
            None => RawConfig::default(),
        };
        ExperimentConfig::resolve(experiment, file.overlay(self.into_raw()))
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub turbulence_name: String,
    pub turbulence: TurbulenceParams,
    pub n_smf: usize,
    pub spreads: Vec<Spread>,
    pub xi_pl: f64,
    pub zeta_ratio: f64,
    pub eta_ratio: f64,
    pub device: Option<DeviceParams>,
    pub combiners: Vec<CombinerKind>,
    pub receivers: Vec<Receiver>,
    pub methods: Vec<BerMethod>,
    pub snr_grid_db: Vec<f64>,
    pub mc_samples: u64,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub series_terms: usize,
    pub quad_tol: f64,
    pub photons: Option<u64>,
    pub photons_per_port: u64,
    pub trials: u64,
    pub n_smf_grid: Vec<usize>,
    pub zeta_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub xi_grid: Vec<f64>,
    pub threads: Option<usize>,
}

pub const DEFAULT_N_SMF: usize = 10;
pub const DEFAULT_XI_PL: f64 = 0.8;
pub const DEFAULT_ZETA_RATIO: f64 = 6.0;
pub const DEFAULT_ETA_RATIO: f64 = 5.0;
pub const DEFAULT_SIGMA2: [f64; 3] = [0.0, 0.01, f64::INFINITY];
pub const DEFAULT_SNR_GRID: &str = "0:2:60";
pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;
pub const DEFAULT_PHOTONS_PER_PORT: u64 = 100;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SWEEP_N: &str = "2:1:20";
pub const DEFAULT_ZETA_GRID: &str = "0:1:20";
pub const DEFAULT_ETA_GRID: &str = "4:0.5:8";
pub const DEFAULT_XI_GRID: &str = "0:0.1:1";

fn field_of(err: &Error, fallback: &str) -> String {
    match err {
        Error::InvalidParameter { name, .. } => (*name).to_string(),
        _ => fallback.to_string(),
    }
}

fn parse_number(field: &str, s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::config(field, format!("{s:?} is not a number")))
}

/// Expands comma-separated numbers and inclusive `start:step:stop` ranges.
pub fn expand_grid(field: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_number(field, v)?),
            [a, h, b] => {
                let (a, h, b) = (
                    parse_number(field, a)?,
                    parse_number(field, h)?,
                    parse_number(field, b)?,
                );
                if !(h > 0.0 && a.is_finite() && b.is_finite() && b >= a) {
                    return Err(CliError::config(
                        field,
                        format!("bad range {item:?}: need start <= stop and step > 0"),
                    ));
                }
                let steps = ((b - a) / h + 1e-9).floor();
                if steps > 1e6 {
                    return Err(CliError::config(field, format!("range {item:?} has too many points")));
                }
                for k in 0..=steps as u64 {
                    out.push(a + k as f64 * h);
                }
            }
            _ => return Err(CliError::config(field, format!("bad grid item {item:?}"))),
        }
    }
    Ok(out)
}

fn grid(field: &str, g: Option<Grid>, default: &str) -> Result<Vec<f64>, CliError> {
    let v = match g {
        Some(Grid::List(v)) => v,
        Some(Grid::Text(t)) => expand_grid(field, &t)?,
        None => expand_grid(field, default)?,
    };
    if v.is_empty() {
        return Err(CliError::config(field, "grid is empty"));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(CliError::config(field, format!("grid value {x} is not finite")));
    }
    Ok(v)
}

fn check_grid(field: &str, v: &[f64], lo: f64, hi: f64) -> Result<(), CliError> {
    match v.iter().find(|&&x| !(lo..=hi).contains(&x)) {
        Some(x) => Err(CliError::config(field, format!("value {x} outside [{lo}, {hi}]"))),
        None => Ok(()),
    }
}

fn parse_sigma2(entry: &Scalar) -> Result<Spread, CliError> {
    let v = match entry {
        Scalar::Number(v) => *v,
        Scalar::Text(t) if t.trim().eq_ignore_ascii_case("inf") => f64::INFINITY,
        Scalar::Text(t) => parse_number("sigma2", t)?,
    };
    Spread::from_sigma2(v).map_err(|e| CliError::config("sigma2", e))
}

fn parse_list<T>(field: &str, items: Option<Vec<String>>, all: &[T]) -> Result<Vec<T>, CliError>
where
    T: FromStr + Copy,
    T::Err: fmt::Display,
{
    let Some(items) = items else {
        return Ok(all.to_vec());
    };
    let mut out = Vec::new();
    for s in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        out.push(s.parse::<T>().map_err(|e| CliError::config(field, e))?);
    }
    if out.is_empty() {
        return Err(CliError::config(field, "list is empty"));
    }
    Ok(out)
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("{v} must be positive and finite")))
    }
}

fn at_least<T: PartialOrd + fmt::Display>(field: &str, v: T, min: T) -> Result<T, CliError> {
    if v >= min {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("{v} must be at least {min}")))
    }
}

impl ExperimentConfig {
    pub fn resolve(experiment: Experiment, raw: RawConfig) -> Result<Self, CliError> {
        if let Some(name) = &raw.experiment {
            let named: Experiment = name.parse().map_err(|e| CliError::config("experiment", e))?;
            if named != experiment {
                return Err(CliError::config(
                    "experiment",
                    format!("config file is for {named}, but {experiment} was requested"),
                ));
            }
        }

        let (turbulence_name, turbulence) = match (raw.turbulence, raw.alpha, raw.beta) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::config(
                    "turbulence",
                    "give a preset name or alpha and beta, not both",
                ))
            }
            (Some(name), None, None) => {
                let p = TurbulenceParams::preset(&name.to_ascii_lowercase()).ok_or_else(|| {
                    CliError::config(
                        "turbulence",
                        format!("unknown preset {name:?}, expected moderate or strong"),
                    )
                })?;
                (name.to_ascii_lowercase(), p)
            }
            (None, Some(a), Some(b)) => {
                let p = TurbulenceParams::new(a, b).map_err(|e| CliError::config(field_of(&e, "alpha"), e))?;
                ("custom".to_string(), p)
            }
            (None, Some(_), None) => return Err(CliError::config("beta", "alpha was given without beta")),
            (None, None, Some(_)) => return Err(CliError::config("alpha", "beta was given without alpha")),
            (None, None, None) => ("moderate".to_string(), TurbulenceParams::moderate()),
        };

        let n_smf = at_least("n_smf", raw.n_smf.unwrap_or(DEFAULT_N_SMF), 2)?;

        let spreads = match &raw.sigma2 {
            Some(list) => list.iter().map(parse_sigma2).collect::<Result<Vec<_>, _>>()?,
            None => DEFAULT_SIGMA2
                .iter()
                .map(|&v| Spread::from_sigma2(v).expect("valid default"))
                .collect(),
        };
        if spreads.is_empty() {
            return Err(CliError::config("sigma2", "list is empty"));
        }

        let xi_pl = raw.xi_pl.unwrap_or(DEFAULT_XI_PL);
        if !(xi_pl > 0.0 && xi_pl <= 1.0) {
            return Err(CliError::config("xi_pl", format!("{xi_pl} outside (0, 1]")));
        }

        let explicit = [raw.zeta_s, raw.zeta_m, raw.eta_s, raw.eta_m];
        let (zeta_ratio, eta_ratio, device) = if explicit.iter().any(Option::is_some) {
            if raw.zeta_ratio.is_some() || raw.eta_ratio.is_some() {
                return Err(CliError::config(
                    "zeta_ratio",
                    "give efficiency ratios or explicit efficiencies, not both",
                ));
            }
            let names = ["zeta_s", "zeta_m", "eta_s", "eta_m"];
            if let Some(k) = explicit.iter().position(Option::is_none) {
                return Err(CliError::config(
                    names[k],
                    "explicit efficiencies need all of zeta_s, zeta_m, eta_s, eta_m",
                ));
            }
            let d = DeviceParams {
                zeta_s: explicit[0].unwrap_or_default(),
                zeta_m: explicit[1].unwrap_or_default(),
                eta_s: explicit[2].unwrap_or_default(),
                eta_m: explicit[3].unwrap_or_default(),
                responsivity: 1.0,
                aperture_area: 1.0,
                electron_charge: 1.0,
                bandwidth: 1.0,
            }
            .validate()
            .map_err(|e| CliError::config(field_of(&e, "zeta_s"), e))?;
            (d.zeta_ratio(), d.eta_ratio(), Some(d))
        } else {
            (
                positive("zeta_ratio", raw.zeta_ratio.unwrap_or(DEFAULT_ZETA_RATIO))?,
                positive("eta_ratio", raw.eta_ratio.unwrap_or(DEFAULT_ETA_RATIO))?,
                None,
            )
        };

        let combiners = parse_list("combiners", raw.combiners, &CombinerKind::ALL)?;
        let receivers = parse_list("receivers", raw.receivers, &Receiver::ALL)?;
        let methods = parse_list("methods", raw.methods, &BerMethod::ALL)?;

        let snr_grid_db = grid("snr_grid_db", raw.snr_grid_db, DEFAULT_SNR_GRID)?;
        let mc_samples = at_least("mc_samples", raw.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES), 2)?;
        let series_terms = at_least(
            "series_terms",
            raw.series_terms.unwrap_or(plfso_core::ber::DEFAULT_TERMS),
            1,
        )?;
        let quad_tol = raw.quad_tol.unwrap_or(DEFAULT_QUAD_TOL);
        if !(quad_tol > 0.0 && quad_tol < 1.0) {
            return Err(CliError::config("quad_tol", format!("{quad_tol} outside (0, 1)")));
        }

        let photons = raw.photons.map(|m| at_least("photons", m, 1)).transpose()?;
        let photons_per_port = at_least(
            "photons_per_port",
            raw.photons_per_port.unwrap_or(DEFAULT_PHOTONS_PER_PORT),
            1,
        )?;
        let trials = at_least("trials", raw.trials.unwrap_or(DEFAULT_TRIALS), 2)?;

        let n_smf_grid = match raw.n_smf_grid {
            Some(g) => grid("n_smf_grid", Some(g), "")?,
            None if experiment == Experiment::PhotonSim => vec![n_smf as f64],
            None => expand_grid("n_smf_grid", DEFAULT_SWEEP_N)?,
        };
        let n_smf_grid = n_smf_grid
            .into_iter()
            .map(|v| {
                if v.fract() == 0.0 && (2.0..=1e6).contains(&v) {
                    Ok(v as usize)
                } else {
                    Err(CliError::config("n_smf_grid", format!("{v} is not an integer >= 2")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let zeta_grid = grid("zeta_grid", raw.zeta_grid, DEFAULT_ZETA_GRID)?;
        check_grid("zeta_grid", &zeta_grid, 0.0, f64::MAX)?;
        let eta_grid = grid("eta_grid", raw.eta_grid, DEFAULT_ETA_GRID)?;
        check_grid("eta_grid", &eta_grid, 0.0, f64::MAX)?;
        let xi_grid = grid("xi_grid", raw.xi_grid, DEFAULT_XI_GRID)?;
        check_grid("xi_grid", &xi_grid, 0.0, 1.0)?;

        let threads = raw.threads.map(|t| at_least("threads", t, 1)).transpose()?;
        let output_path = raw.output_path.filter(|p| p != "-").map(PathBuf::from);

        let cfg = Self {
            experiment,
            turbulence_name,
            turbulence,
            n_smf,
            spreads,
            xi_pl,
            zeta_ratio,
            eta_ratio,
            device,
            combiners,
            receivers,
            methods,
            snr_grid_db,
            mc_samples,
            seed: raw.seed,
            output_path,
            series_terms,
            quad_tol,
            photons,
            photons_per_port,
            trials,
            n_smf_grid,
            zeta_grid,
            eta_grid,
            xi_grid,
            threads,
        };
        if cfg.needs_seed() && cfg.seed.is_none() {
            return Err(CliError::config(
                "seed",
                format!("{experiment} draws random numbers; pass --seed or set seed in the config"),
            ));
        }
        Ok(cfg)
    }

    /// Whether this run draws random numbers.
    pub fn needs_seed(&self) -> bool {
        let has_gaussian = self.spreads.iter().any(|s| matches!(s, Spread::TruncGaussian { .. }));
        match self.experiment {
            Experiment::PhotonSim | Experiment::Validate => true,
            Experiment::BerCurve => self.methods.contains(&BerMethod::MonteCarlo),
            Experiment::SnrSweep => has_gaussian && self.combiners.iter().any(|&k| k != CombinerKind::Mrc),
            Experiment::GainMap => has_gaussian,
        }
    }

    /// The seed, for runs that checked [`Self::needs_seed`].
    pub fn seed_or_zero(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Every setting that can change the output, one `key = value` line each.
    pub fn canonical(&self) -> String {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("experiment", self.experiment.to_string());
        line("version", env!("CARGO_PKG_VERSION").to_string());
        line("turbulence", self.turbulence_name.clone());
        line("alpha", format!("{:?}", self.turbulence.alpha()));
        line("beta", format!("{:?}", self.turbulence.beta()));
        line("n_smf", self.n_smf.to_string());
        line("sigma2", join(&self.spreads));
        line("xi_pl", format!("{:?}", self.xi_pl));
        line("zeta_ratio", format!("{:?}", self.zeta_ratio));
        line("eta_ratio", format!("{:?}", self.eta_ratio));
        line("combiners", join(&self.combiners));
        line("receivers", join(&self.receivers));
        line("methods", join(&self.methods));
        line("snr_grid_db", format!("{:?}", self.snr_grid_db));
        line("mc_samples", self.mc_samples.to_string());
        line("seed", self.seed.map_or("none".into(), |s| s.to_string()));
        line("series_terms", self.series_terms.to_string());
        line("quad_tol", format!("{:?}", self.quad_tol));
        line("photons", self.photons.map_or("auto".into(), |m| m.to_string()));
        line("photons_per_port", self.photons_per_port.to_string());
        line("trials", self.trials.to_string());
        line("n_smf_grid", join(&self.n_smf_grid));
        line("zeta_grid", format!("{:?}", self.zeta_grid));
        line("eta_grid", format!("{:?}", self.eta_grid));
        line("xi_grid", format!("{:?}", self.xi_grid));
        s
    }

    /// SHA-256 of [`Self::canonical`], hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .fold(String::with_capacity(64), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(experiment: Experiment, toml: &str) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::resolve(experiment, RawConfig::from_toml(toml)?)
    }

    fn field(err: CliError) -> String {
        match err {
            CliError::Config { field, .. } => field,
            other => panic!("not a config error: {other:?}"),
        }
    }

    #[test]
    fn defaults_encode_the_reference_setup() {
        let c = resolve(Experiment::GainMap, "seed = 1").unwrap();
        assert_eq!(c.n_smf, 10);
        assert_eq!(c.xi_pl, 0.8);
        assert_eq!((c.zeta_ratio, c.eta_ratio), (6.0, 5.0));
        assert_eq!(
            c.spreads,
            vec![
                Spread::Degenerate,
                Spread::TruncGaussian { sigma2: 0.01 },
                Spread::Uniform
            ]
        );
        assert_eq!(c.turbulence, TurbulenceParams::moderate());
        assert_eq!(c.series_terms, 30);
        assert_eq!(c.zeta_grid.len(), 21);
        assert_eq!(c.eta_grid.len(), 9);
        assert_eq!(c.xi_grid.len(), 11);
        assert_eq!(*c.xi_grid.last().unwrap(), 1.0);
    }

    #[test]
    fn grids_expand_ranges_and_lists() {
        assert_eq!(expand_grid("g", "0:2:6").unwrap(), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(expand_grid("g", "1, 3:1:4,10").unwrap(), vec![1.0, 3.0, 4.0, 10.0]);
        assert_eq!(expand_grid("g", "-5:5:5").unwrap(), vec![-5.0, 0.0, 5.0]);
        assert_eq!(field(expand_grid("g", "4:0:8").unwrap_err()), "g");
        assert_eq!(field(expand_grid("g", "a").unwrap_err()), "g");
        let c = resolve(Experiment::BerCurve, "seed = 1\nsnr_grid_db = [10, 20.5]").unwrap();
        assert_eq!(c.snr_grid_db, vec![10.0, 20.5]);
        let c = resolve(Experiment::BerCurve, "seed = 1\nsnr_grid_db = \"30:5:40\"").unwrap();
        assert_eq!(c.snr_grid_db, vec![30.0, 35.0, 40.0]);
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field(resolve(Experiment::GainMap, "n_smf = 1").unwrap_err()), "n_smf");
        assert_eq!(field(resolve(Experiment::GainMap, "bogus = 3").unwrap_err()), "bogus");
        assert_eq!(
            field(resolve(Experiment::GainMap, "sigma2 = [-1]").unwrap_err()),
            "sigma2"
        );
        assert_eq!(field(resolve(Experiment::GainMap, "xi_pl = 1.5").unwrap_err()), "xi_pl");
        assert_eq!(
            field(resolve(Experiment::GainMap, "turbulence = \"calm\"").unwrap_err()),
            "turbulence"
        );
        assert_eq!(field(resolve(Experiment::GainMap, "alpha = 3.0").unwrap_err()), "beta");
        assert_eq!(
            field(resolve(Experiment::GainMap, "combiners = [\"XYZ\"]").unwrap_err()),
            "combiners"
        );
        assert_eq!(
            field(resolve(Experiment::GainMap, "zeta_s = 0.5").unwrap_err()),
            "zeta_m"
        );
        assert_eq!(
            field(resolve(Experiment::GainMap, "experiment = \"validate\"").unwrap_err()),
            "experiment"
        );
        assert_eq!(
            field(resolve(Experiment::BerCurve, "snr_grid_db = []").unwrap_err()),
            "snr_grid_db"
        );
        assert_eq!(
            field(resolve(Experiment::BerCurve, "seed = 1\nmc_samples = 1").unwrap_err()),
            "mc_samples"
        );
    }

    #[test]
    fn seed_required_only_when_sampling() {
        assert_eq!(field(resolve(Experiment::PhotonSim, "").unwrap_err()), "seed");
        assert_eq!(field(resolve(Experiment::BerCurve, "").unwrap_err()), "seed");
        assert!(resolve(Experiment::BerCurve, "methods = [\"integral\", \"series\"]").is_ok());
        assert!(resolve(Experiment::GainMap, "sigma2 = [0, \"inf\"]").is_ok());
        assert_eq!(field(resolve(Experiment::GainMap, "").unwrap_err()), "seed");
    }

    #[test]
    fn sigma2_accepts_numbers_and_inf() {
        let c = resolve(Experiment::GainMap, "seed = 1\nsigma2 = [0, 0.02, inf]").unwrap();
        assert_eq!(c.spreads[2], Spread::Uniform);
        let c = resolve(Experiment::GainMap, "sigma2 = [\"inf\"]").unwrap();
        assert_eq!(c.spreads, vec![Spread::Uniform]);
    }

    #[test]
    fn explicit_efficiencies_give_ratios() {
        let c = resolve(
            Experiment::GainMap,
            "sigma2 = [0]\nzeta_s = 0.1\nzeta_m = 0.6\neta_s = 1.0\neta_m = 0.2",
        )
        .unwrap();
        assert!((c.zeta_ratio - 6.0).abs() < 1e-12);
        assert!((c.eta_ratio - 5.0).abs() < 1e-12);
        assert_eq!(
            field(resolve(Experiment::GainMap, "zeta_ratio = 2\nzeta_s = 0.1").unwrap_err()),
            "zeta_ratio"
        );
    }

    #[test]
    fn flags_override_file() {
        let file = RawConfig::from_toml("n_smf = 4\nseed = 3\nsigma2 = [0]").unwrap();
        let flags = Overrides {
            n_smf: Some(6),
            sigma2: Some(vec!["inf".into()]),
            ..Default::default()
        };
        let c = ExperimentConfig::resolve(Experiment::GainMap, file.overlay(flags.into_raw())).unwrap();
        assert_eq!(c.n_smf, 6);
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.spreads, vec![Spread::Uniform]);
    }

    #[test]
    fn hash_tracks_content_not_destination() {
        let a = resolve(Experiment::GainMap, "seed = 1").unwrap();
        let b = resolve(Experiment::GainMap, "seed = 1\noutput_path = \"x.csv\"\nthreads = 3").unwrap();
        let c = resolve(Experiment::GainMap, "seed = 2").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    proptest::proptest! {
        #[test]
        fn ranges_start_at_start_and_stay_below_stop(a in -1e3f64..1e3, len in 0.0f64..1e3, h in 1e-2f64..1e2) {
            let b = a + len;
            let v = expand_grid("g", &format!("{a}:{h}:{b}")).unwrap();
            proptest::prop_assert_eq!(v[0], a);
            proptest::prop_assert_eq!(v.len() as f64, (len / h + 1e-9).floor() + 1.0);
            proptest::prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
            proptest::prop_assert!(*v.last().unwrap() <= b + 1e-9 * h.max(b.abs()));
        }

        #[test]
        fn lists_keep_order(xs in proptest::collection::vec(-1e6f64..1e6, 1..20)) {
            let text = xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
            proptest::prop_assert_eq!(expand_grid("g", &text).unwrap(), xs);
        }
    }
}
