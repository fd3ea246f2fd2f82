//! Instantaneous and average SNR of the lantern receiver under selection,
//! equal-gain and maximal-ratio combining, and of the single-mode and
//! multimode fiber receivers it is compared against.
//!
//! With K = R·A·ζ_M·ξ_PL·η_S / (N·q·B) the instantaneous SNRs are
//!
//! - EGC: K (Σ√a_i)² I
//! - SC:  K N max_i a_i I
//! - MRC: K N I
//!
//! The factor multiplying K·I is called the gain factor below.

use alloc::vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::channel::Irradiance;
use crate::error::{Error, Result};
use crate::lantern::{max_of, sqrt_sum, LanternModel, PowerSplit, SplitSampler, Spread};
use crate::mci::{mci_estimate, MciEstimate};
use crate::stats::Welford;

/// Slope and offset of the fitted uniform-model E[max a_i] ≈ 4.45/(N + 4.33).
pub const SC_FIT_SCALE: f64 = 4.45;
pub const SC_FIT_OFFSET: f64 = 4.33;

/// Efficiencies and photodetector constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// ζ_S, single-mode fiber coupling efficiency.
    pub zeta_s: f64,
    /// ζ_M, multimode fiber coupling efficiency.
    pub zeta_m: f64,
    /// η_S, single-mode mixing efficiency.
    pub eta_s: f64,
    /// η_M, multimode mixing efficiency.
    pub eta_m: f64,
    /// R in A/W.
    pub responsivity: f64,
    /// A in m².
    pub aperture_area: f64,
    /// q in C.
    pub electron_charge: f64,
    /// B in Hz.
    pub bandwidth: f64,
}

impl DeviceParams {
    pub fn validate(self) -> Result<Self> {
        let efficiencies = [
            ("zeta_s", self.zeta_s),
            ("zeta_m", self.zeta_m),
            ("eta_s", self.eta_s),
            ("eta_m", self.eta_m),
        ];
        for (name, v) in efficiencies {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "efficiency must lie in (0, 1]",
                });
            }
        }
        let constants = [
            ("responsivity", self.responsivity),
            ("aperture_area", self.aperture_area),
            ("electron_charge", self.electron_charge),
            ("bandwidth", self.bandwidth),
        ];
        for (name, v) in constants {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(self)
    }

    /// Device with R·A/(q·B) = 1, ζ_M = η_S = 1, and the other two
    /// efficiencies set from the ratios ζ_M/ζ_S and η_S/η_M (both ≥ 1).
    pub fn from_ratios(zeta_ratio: f64, eta_ratio: f64) -> Result<Self> {
        if !(zeta_ratio >= 1.0 && zeta_ratio.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "zeta_ratio",
                reason: "ratio form needs zeta_m/zeta_s >= 1",
            });
        }
        if !(eta_ratio >= 1.0 && eta_ratio.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eta_ratio",
                reason: "ratio form needs eta_s/eta_m >= 1",
            });
        }
        Self {
            zeta_s: 1.0 / zeta_ratio,
            zeta_m: 1.0,
            eta_s: 1.0,
            eta_m: 1.0 / eta_ratio,
            responsivity: 1.0,
            aperture_area: 1.0,
            electron_charge: 1.0,
            bandwidth: 1.0,
        }
        .validate()
    }

    /// R·A/(q·B).
    pub fn detector_gain(&self) -> f64 {
        self.responsivity * self.aperture_area / (self.electron_charge * self.bandwidth)
    }

    /// ζ_M/ζ_S.
    pub fn zeta_ratio(&self) -> f64 {
        self.zeta_m / self.zeta_s
    }

    /// η_S/η_M.
    pub fn eta_ratio(&self) -> f64 {
        self.eta_s / self.eta_m
    }
}

/// K, the lantern SNR per unit irradiance and unit gain factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrScale {
    k: f64,
}

impl SnrScale {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "SNR scale must be positive and finite",
            });
        }
        Ok(Self { k })
    }

    /// K expressed through the single-mode receiver's average SNR γ̄₀:
    /// K = γ̄₀ · ξ_PL · (ζ_M/ζ_S) / N.
    pub fn from_reference(gamma0: f64, zeta_ratio: f64, model: LanternModel) -> Result<Self> {
        Self::new(gamma0 * model.loss() * zeta_ratio / model.n_smf() as f64)
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

/// K = R·A·ζ_M·ξ_PL·η_S / (N·q·B).
pub fn snr_scale(d: &DeviceParams, model: LanternModel) -> Result<SnrScale> {
    let d = d.validate()?;
    SnrScale::new(d.detector_gain() * d.zeta_m * model.loss() * d.eta_s / model.n_smf() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CombinerKind {
    Sc,
    Egc,
    Mrc,
}

impl CombinerKind {
    pub const ALL: [CombinerKind; 3] = [CombinerKind::Sc, CombinerKind::Egc, CombinerKind::Mrc];

    pub fn as_str(&self) -> &'static str {
        match self {
            CombinerKind::Sc => "SC",
            CombinerKind::Egc => "EGC",
            CombinerKind::Mrc => "MRC",
        }
    }
}

impl fmt::Display for CombinerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Case-insensitive "sc", "egc" or "mrc".
impl FromStr for CombinerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("sc") {
            Ok(CombinerKind::Sc)
        } else if s.eq_ignore_ascii_case("egc") {
            Ok(CombinerKind::Egc)
        } else if s.eq_ignore_ascii_case("mrc") {
            Ok(CombinerKind::Mrc)
        } else {
            Err(Error::InvalidParameter {
                name: "combiner",
                reason: "expected one of SC, EGC, MRC",
            })
        }
    }
}

/// (Σ√a_i)² for EGC, N·max a_i for SC, N for MRC.
pub fn gain_factor(kind: CombinerKind, a: &[f64]) -> f64 {
    let n = a.len() as f64;
    match kind {
        CombinerKind::Egc => {
            let s = sqrt_sum(a);
            s * s
        }
        CombinerKind::Sc => n * max_of(a),
        CombinerKind::Mrc => n,
    }
}

pub fn instantaneous_snr(kind: CombinerKind, a: &PowerSplit, i: Irradiance, s: SnrScale) -> f64 {
    s.k * gain_factor(kind, a.ratios()) * i.value()
}

/// E[gain factor] in closed form, when the model has one.
pub fn mean_gain_factor_closed_form(kind: CombinerKind, model: LanternModel) -> Option<f64> {
    let n = model.n_smf() as f64;
    match (kind, model.spread()) {
        (CombinerKind::Mrc, _) => Some(n),
        (CombinerKind::Egc, Spread::Degenerate) => Some(n),
        (CombinerKind::Sc, Spread::Degenerate) => Some(1.0),
        // 1 + N(N − 1)·E[√(a₁a₂)] with E[√(a₁a₂)] = π/(4N)
        (CombinerKind::Egc, Spread::Uniform) => Some((PI * n + 4.0 - PI) / 4.0),
        (CombinerKind::Sc, Spread::Uniform) if model.n_smf() == 2 => Some(2.0 * 0.75),
        (CombinerKind::Sc, Spread::Uniform) => Some(n * SC_FIT_SCALE / (n + SC_FIT_OFFSET)),
        (_, Spread::TruncGaussian { .. }) => None,
    }
}

/// Adds `n_samples` gain-factor draws under `model` to `acc`.
pub fn accumulate_gain_factor<R: Rng + ?Sized>(
    acc: &mut Welford,
    kind: CombinerKind,
    model: LanternModel,
    n_samples: u64,
    rng: &mut R,
) -> Result<()> {
    let sampler = SplitSampler::new(model);
    let mut buf = vec![0.0; model.n_smf()];
    for _ in 0..n_samples {
        sampler.sample_into(rng, &mut buf)?;
        acc.push(gain_factor(kind, &buf));
    }
    Ok(())
}

/// Monte-Carlo E[g(a)] for any function of the split.
pub fn split_expectation<R, G>(model: LanternModel, mut g: G, n_samples: u64, rng: &mut R) -> Result<MciEstimate>
where
    R: Rng + ?Sized,
    G: FnMut(&[f64]) -> f64,
{
    let sampler = SplitSampler::new(model);
    let mut buf = vec![0.0; model.n_smf()];
    mci_estimate(
        |rng: &mut R| {
            sampler.sample_into(rng, &mut buf)?;
            Ok(g(&buf))
        },
        |&v| v,
        n_samples,
        rng,
    )
}

/// Average SNR K·E[gain factor]; E[I] = 1 is applied analytically. Closed
/// forms are exact (zero standard error); otherwise the expectation over the
/// split is estimated from `mc_samples` draws.
pub fn average_snr<R: Rng + ?Sized>(
    kind: CombinerKind,
    model: LanternModel,
    s: SnrScale,
    mc_samples: u64,
    rng: &mut R,
) -> Result<MciEstimate> {
    if let Some(g) = mean_gain_factor_closed_form(kind, model) {
        return Ok(MciEstimate::exact(s.k * g));
    }
    let est = split_expectation(model, |a| gain_factor(kind, a), mc_samples, rng)?;
    Ok(est.scaled(s.k))
}

/// γ̄(degenerate)/γ̄(uniform) at fixed K: 4N/(πN + 4 − π) for EGC; for SC
/// the exact 2/3 at N = 2 and (N + 4.33)/(4.45N) from the fit above that.
pub fn snr_ratio_deg_over_uni(kind: CombinerKind, n_smf: usize) -> Result<f64> {
    if kind == CombinerKind::Mrc {
        return Err(Error::MrcRatio);
    }
    let deg = LanternModel::degenerate(n_smf)?;
    let uni = LanternModel::uniform(n_smf)?;
    // both closed forms exist for SC and EGC
    let d = mean_gain_factor_closed_form(kind, deg).unwrap_or(f64::NAN);
    let u = mean_gain_factor_closed_form(kind, uni).unwrap_or(f64::NAN);
    Ok(d / u)
}

/// (γ_SMF, γ_MMF) = (ζ_S η_S, ζ_M η_M) · R·A·I/(q·B).
pub fn smf_mmf_snr(d: &DeviceParams, i: Irradiance) -> Result<(f64, f64)> {
    let d = d.validate()?;
    let base = d.detector_gain() * i.value();
    Ok((d.zeta_s * d.eta_s * base, d.zeta_m * d.eta_m * base))
}

/// Average-SNR gains of the lantern receiver over the two fiber receivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverGains {
    pub vs_smf: f64,
    pub vs_mmf: f64,
}

/// Gains from the normalized mean gain factor E[g]/N:
/// γ̄_PL/γ̄_SMF = ξ_PL (ζ_M/ζ_S) E[g]/N and γ̄_PL/γ̄_MMF = ξ_PL (η_S/η_M) E[g]/N.
pub fn receiver_gains(normalized_gain: f64, loss: f64, zeta_ratio: f64, eta_ratio: f64) -> ReceiverGains {
    ReceiverGains {
        vs_smf: loss * zeta_ratio * normalized_gain,
        vs_mmf: loss * eta_ratio * normalized_gain,
    }
}

/// γ̄_MMF/γ̄_SMF = (ζ_M/ζ_S)/(η_S/η_M).
pub fn mmf_over_smf(zeta_ratio: f64, eta_ratio: f64) -> f64 {
    zeta_ratio / eta_ratio
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use alloc::string::ToString;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn unit_device() -> DeviceParams {
        DeviceParams {
            zeta_s: 1.0,
            zeta_m: 1.0,
            eta_s: 1.0,
            eta_m: 1.0,
            responsivity: 1.0,
            aperture_area: 1.0,
            electron_charge: 1.0,
            bandwidth: 1.0,
        }
    }

    fn one() -> Irradiance {
        Irradiance::new(1.0).unwrap()
    }

    #[test]
    fn device_validation() {
        assert!(unit_device().validate().is_ok());
        assert!(DeviceParams {
            zeta_s: 1.2,
            ..unit_device()
        }
        .validate()
        .is_err());
        assert!(DeviceParams {
            eta_m: 0.0,
            ..unit_device()
        }
        .validate()
        .is_err());
        assert!(DeviceParams {
            bandwidth: -1.0,
            ..unit_device()
        }
        .validate()
        .is_err());
        let d = DeviceParams::from_ratios(6.0, 5.0).unwrap();
        assert!((d.zeta_ratio() - 6.0).abs() < 1e-15);
        assert!((d.eta_ratio() - 5.0).abs() < 1e-15);
        assert!(DeviceParams::from_ratios(0.5, 5.0).is_err());
    }

    #[test]
    fn scale_examples() {
        let m2 = LanternModel::degenerate(2).unwrap();
        let m4 = LanternModel::degenerate(4).unwrap();
        let k2 = snr_scale(&unit_device(), m2).unwrap().k();
        let k4 = snr_scale(&unit_device(), m4).unwrap().k();
        assert_eq!(k2, 0.5);
        assert_eq!(k4, 0.25);
        // representative device, checked against a separately written product
        let d = DeviceParams {
            zeta_s: 0.1,
            zeta_m: 0.6,
            eta_s: 0.9,
            eta_m: 0.18,
            responsivity: 0.8,
            aperture_area: PI * 0.05 * 0.05,
            electron_charge: 1.602e-19,
            bandwidth: 1e9,
        };
        let m = LanternModel::degenerate(10).unwrap().with_loss(0.8).unwrap();
        let k = snr_scale(&d, m).unwrap().k();
        let hand = 0.8 * 0.007_853_981_633_974_483 * 0.6 * 0.8 * 0.9 / (10.0 * 1.602e-19 * 1e9);
        assert!((k / hand - 1.0).abs() < 1e-14, "{k} vs {hand}");
        assert!(SnrScale::new(0.0).is_err());
    }

    #[test]
    fn scale_from_reference() {
        // K·N·ξ-free MRC average equals γ̄₀ ξ ζ_M/ζ_S
        let m = LanternModel::degenerate(10).unwrap().with_loss(0.8).unwrap();
        let s = SnrScale::from_reference(100.0, 6.0, m).unwrap();
        assert!((s.k() * 10.0 - 480.0).abs() < 1e-12);
        let d = DeviceParams::from_ratios(6.0, 5.0).unwrap();
        let (smf, _) = smf_mmf_snr(&d, one()).unwrap();
        let k = snr_scale(&d, m).unwrap().k();
        assert!((k / smf - s.k() / 100.0).abs() < 1e-15);
    }

    #[test]
    fn combiner_parse_and_display() {
        assert_eq!("egc".parse::<CombinerKind>().unwrap(), CombinerKind::Egc);
        assert_eq!("SC".parse::<CombinerKind>().unwrap(), CombinerKind::Sc);
        assert!("xyz".parse::<CombinerKind>().is_err());
        assert_eq!(CombinerKind::Mrc.to_string(), "MRC");
    }

    #[test]
    fn instantaneous_examples() {
        let s = SnrScale::new(1.0).unwrap();
        let uni = PowerSplit::new(vec![0.05, 0.15, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]).unwrap();
        assert_eq!(instantaneous_snr(CombinerKind::Mrc, &uni, one(), s), 10.0);
        let deg = PowerSplit::centroid(10).unwrap();
        let egc = instantaneous_snr(CombinerKind::Egc, &deg, one(), s);
        assert!((egc - 10.0).abs() < 1e-12);
        let mut corner = vec![0.0; 10];
        corner[0] = 1.0;
        let corner = PowerSplit::new(corner).unwrap();
        assert_eq!(instantaneous_snr(CombinerKind::Sc, &corner, one(), s), 10.0);
        assert_eq!(instantaneous_snr(CombinerKind::Sc, &deg, one(), s), 1.0);
    }

    #[test]
    fn closed_form_averages() {
        let s = SnrScale::new(1.0).unwrap();
        let mut rng = seeded(1);
        let deg = LanternModel::degenerate(10).unwrap();
        let uni = LanternModel::uniform(10).unwrap();
        let v = average_snr(CombinerKind::Egc, deg, s, 0, &mut rng).unwrap();
        assert_eq!(v.value, 10.0);
        assert_eq!(v.std_error, 0.0);
        let v = average_snr(CombinerKind::Egc, uni, s, 0, &mut rng).unwrap();
        assert!((v.value - (PI * 10.0 + 4.0 - PI) / 4.0).abs() < 1e-15);
        assert!((v.value - 8.068).abs() < 1e-3);
        let v = average_snr(CombinerKind::Sc, LanternModel::uniform(2).unwrap(), s, 0, &mut rng).unwrap();
        assert_eq!(v.value, 1.5);
        let v = average_snr(CombinerKind::Sc, deg, s, 0, &mut rng).unwrap();
        assert_eq!(v.value, 1.0);
        for m in [deg, uni, LanternModel::trunc_gaussian(10, 0.01).unwrap()] {
            assert_eq!(average_snr(CombinerKind::Mrc, m, s, 0, &mut rng).unwrap().value, 10.0);
        }
    }

    #[test]
    fn trunc_gaussian_average_needs_samples() {
        let s = SnrScale::new(1.0).unwrap();
        let tg = LanternModel::trunc_gaussian(10, 0.01).unwrap();
        assert!(average_snr(CombinerKind::Egc, tg, s, 1, &mut seeded(2)).is_err());
    }

    #[test]
    fn ratio_endpoints() {
        let egc2 = snr_ratio_deg_over_uni(CombinerKind::Egc, 2).unwrap();
        assert!((egc2 - 8.0 / (4.0 + PI)).abs() < 1e-15);
        assert!((egc2 - 1.12).abs() < 5e-3);
        let egc_inf = snr_ratio_deg_over_uni(CombinerKind::Egc, 10_000_000).unwrap();
        assert!((egc_inf - 4.0 / PI).abs() < 1e-6);
        let sc2 = snr_ratio_deg_over_uni(CombinerKind::Sc, 2).unwrap();
        assert!((sc2 - 2.0 / 3.0).abs() < 1e-15);
        let sc10 = snr_ratio_deg_over_uni(CombinerKind::Sc, 10).unwrap();
        assert!((sc10 - 14.33 / 44.5).abs() < 1e-12);
        assert_eq!(
            snr_ratio_deg_over_uni(CombinerKind::Mrc, 10).unwrap_err(),
            Error::MrcRatio
        );
    }

    #[test]
    fn fiber_receivers() {
        assert_eq!(smf_mmf_snr(&unit_device(), one()).unwrap(), (1.0, 1.0));
        let d = DeviceParams {
            zeta_s: 0.1,
            zeta_m: 0.6,
            eta_s: 0.9,
            eta_m: 0.3,
            ..unit_device()
        };
        let (smf, mmf) = smf_mmf_snr(&d, one()).unwrap();
        assert!((mmf / smf - 6.0 * (0.3 / 0.9)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_gain_at_default_values() {
        let m = LanternModel::degenerate(10).unwrap();
        let g = mean_gain_factor_closed_form(CombinerKind::Egc, m).unwrap() / 10.0;
        let gains = receiver_gains(g, 0.8, 6.0, 5.0);
        assert!((gains.vs_smf - 4.8).abs() < 1e-12);
        assert!((gains.vs_mmf - 4.0).abs() < 1e-12);
        assert!((mmf_over_smf(6.0, 5.0) - 1.2).abs() < 1e-15);
        assert_eq!(receiver_gains(1.0, 1.0, 1.0, 1.0).vs_smf, 1.0);
    }

    #[test]
    fn root_product_mean_under_uniform_split() {
        for n in [3usize, 5, 10] {
            let m = LanternModel::uniform(n).unwrap();
            let est = split_expectation(m, |a| (a[0] * a[1]).sqrt(), 1_000_000, &mut seeded(n as u64)).unwrap();
            let want = PI / (4.0 * n as f64);
            assert!(
                (est.value - want).abs() < 3.0 * est.std_error,
                "n={n}: {est:?} vs {want}"
            );
        }
    }

    #[test]
    fn uniform_max_matches_harmonic_oracle() {
        // the maximum of a uniform simplex point has mean H_N / N
        for n in [2usize, 5, 10] {
            let m = LanternModel::uniform(n).unwrap();
            let est = split_expectation(m, max_of, 1_000_000, &mut seeded(20 + n as u64)).unwrap();
            let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            assert!((est.value - h / n as f64).abs() < 3.0 * est.std_error, "n={n}");
        }
    }

    #[test]
    fn egc_average_decreases_with_spread() {
        let s = SnrScale::new(1.0).unwrap();
        let mut rng = seeded(3);
        let avg: Vec<MciEstimate> = [
            LanternModel::degenerate(10).unwrap(),
            LanternModel::trunc_gaussian(10, 0.01).unwrap(),
            LanternModel::uniform(10).unwrap(),
        ]
        .iter()
        .map(|&m| average_snr(CombinerKind::Egc, m, s, 200_000, &mut rng).unwrap())
        .collect();
        assert!(avg[0].value >= avg[1].value);
        assert!(avg[1].value >= avg[2].value);
        // and the reverse for SC
        let sc: Vec<f64> = [
            LanternModel::degenerate(10).unwrap(),
            LanternModel::trunc_gaussian(10, 0.01).unwrap(),
        ]
        .iter()
        .map(|&m| average_snr(CombinerKind::Sc, m, s, 200_000, &mut rng).unwrap().value)
        .collect();
        assert!(sc[0] <= sc[1]);
    }

    #[test]
    fn closed_forms_agree_with_sampling() {
        let mut rng = seeded(4);
        for n in [2usize, 4, 10] {
            let m = LanternModel::uniform(n).unwrap();
            let mut acc = Welford::new();
            accumulate_gain_factor(&mut acc, CombinerKind::Egc, m, 400_000, &mut rng).unwrap();
            let want = mean_gain_factor_closed_form(CombinerKind::Egc, m).unwrap();
            assert!((acc.mean() - want).abs() < 3.0 * acc.std_error(), "n={n}");
        }
        let m = LanternModel::uniform(2).unwrap();
        let mut acc = Welford::new();
        accumulate_gain_factor(&mut acc, CombinerKind::Sc, m, 400_000, &mut rng).unwrap();
        assert!((acc.mean() - 1.5).abs() < 3.0 * acc.std_error());
    }

    proptest! {
        #[test]
        fn combiner_ordering(n in 2usize..16, seed in any::<u64>(), i in 0.0f64..50.0, kind in 0u8..2) {
            let model = if kind == 0 {
                LanternModel::uniform(n).unwrap()
            } else {
                LanternModel::trunc_gaussian(n, 0.02).unwrap()
            };
            let a = crate::lantern::sample_split(model, &mut seeded(seed)).unwrap();
            let s = SnrScale::new(1.3).unwrap();
            let i = Irradiance::new(i).unwrap();
            let sc = instantaneous_snr(CombinerKind::Sc, &a, i, s);
            let egc = instantaneous_snr(CombinerKind::Egc, &a, i, s);
            let mrc = instantaneous_snr(CombinerKind::Mrc, &a, i, s);
            let slack = 1e-12 * mrc;
            prop_assert!(sc <= mrc + slack);
            prop_assert!(egc <= mrc + slack);
            prop_assert_eq!(mrc, 1.3 * n as f64 * i.value());
        }

        #[test]
        fn degenerate_ordering(n in 2usize..32, i in 0.0f64..50.0) {
            let a = PowerSplit::centroid(n).unwrap();
            let s = SnrScale::new(0.7).unwrap();
            let i = Irradiance::new(i).unwrap();
            let sc = instantaneous_snr(CombinerKind::Sc, &a, i, s);
            let egc = instantaneous_snr(CombinerKind::Egc, &a, i, s);
            let mrc = instantaneous_snr(CombinerKind::Mrc, &a, i, s);
            prop_assert!(sc <= egc * (1.0 + 1e-12));
            prop_assert!(egc <= mrc * (1.0 + 1e-12));
        }
    }
}
