//! BPSK bit-error rate over the Gamma-Gamma channel.
//!
//! Conditioned on the instantaneous SNR γ the error probability is Q(√γ).
//! The unconditional BER is available four ways:
//!
//! - [`ber_mc`]: average of Q(√γ) over joint draws of irradiance and split,
//!   for any combiner and split model,
//! - [`ber_integral`]: ∫ f(I) Q(√(γ̄I)) dI by adaptive quadrature, for
//!   receivers whose SNR is γ̄·I (MRC, single-mode and multimode fiber),
//! - [`ber_series`]: the same integral expanded term by term,
//!
//!   P_e = (√π/2) Λ Σ_p (1/p!) (2αβ/γ̄)^p [G_p(α,β) − G_p(β,α)],
//!
//!   with Λ = 1/(Γ(α)Γ(β) sin((α−β)π)) and
//!   G_p(x,y) = Γ(p+y+½) / ((p+y) Γ(p−x+y+1)) · (2xy/γ̄)^y,
//! - [`ber_asymptotic`]: the high-SNR power law H(α,β) γ̄^(−β).
//!
//! Because MRC bounds SC and EGC from above in SNR, the last three are lower
//! bounds for the SC and EGC receivers.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;
#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;

use crate::channel::{GammaGammaDensity, GammaGammaSampler, TurbulenceParams};
use crate::combining::{gain_factor, mean_gain_factor_closed_form, CombinerKind, SnrScale};
use crate::error::{Error, Result};
use crate::lantern::{LanternModel, SplitSampler, Spread};
use crate::mci::MciEstimate;
use crate::quad::{integrate, QuadConfig};
use crate::specfun::{ln_gamma, q_function, sin_pi};
use crate::stats::Welford;

/// Default number of series terms.
pub const DEFAULT_TERMS: usize = 30;

/// Window over which the truncation bound maximizes |G_p(α,β) − G_p(β,α)|.
pub const BOUND_WINDOW: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BerMethod {
    MonteCarlo,
    Integral,
    Series,
    Asymptotic,
}

impl BerMethod {
    pub const ALL: [BerMethod; 4] = [
        BerMethod::MonteCarlo,
        BerMethod::Integral,
        BerMethod::Series,
        BerMethod::Asymptotic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BerMethod::MonteCarlo => "mc",
            BerMethod::Integral => "integral",
            BerMethod::Series => "series",
            BerMethod::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for BerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Case-insensitive method name as printed by [`BerMethod::as_str`].
impl FromStr for BerMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BerMethod::ALL
            .into_iter()
            .find(|m| s.eq_ignore_ascii_case(m.as_str()))
            .ok_or(Error::InvalidParameter {
                name: "method",
                reason: "expected one of mc, integral, series, asymptotic",
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerResult {
    pub value: f64,
    pub method: BerMethod,
    /// Standard error (mc), absolute error bound (integral), truncation
    /// bound (series); unset for the asymptote.
    pub error_estimate: Option<f64>,
    /// J, for the series only.
    pub terms_used: Option<usize>,
}

/// Q(√γ).
pub fn ber_conditional(snr: f64) -> f64 {
    debug_assert!(snr >= 0.0);
    q_function(snr.sqrt())
}

/// Adds `n_samples` draws of Q(√γ) to `acc`. The split is only drawn when
/// the gain factor depends on it; MRC and the degenerate model use the
/// exact constant, so they consume the same random stream.
#[allow(clippy::too_many_arguments)]
pub fn accumulate_ber_mc<R: Rng + ?Sized>(
    acc: &mut Welford,
    kind: CombinerKind,
    model: LanternModel,
    s: SnrScale,
    turb: TurbulenceParams,
    n_samples: u64,
    rng: &mut R,
) -> Result<()> {
    let channel = GammaGammaSampler::new(turb);
    let fixed = match (kind, model.spread()) {
        (CombinerKind::Mrc, _) | (_, Spread::Degenerate) => mean_gain_factor_closed_form(kind, model),
        _ => None,
    };
    let sampler = SplitSampler::new(model);
    let mut buf = alloc::vec![0.0; model.n_smf()];
    for index in 0..n_samples {
        let i = channel.sample(rng).value();
        let g = match fixed {
            Some(g) => g,
            None => {
                sampler.sample_into(rng, &mut buf)?;
                gain_factor(kind, &buf)
            }
        };
        let p = ber_conditional(s.k() * g * i);
        if !p.is_finite() {
            return Err(Error::NonFinite { index, value: p });
        }
        acc.push(p);
    }
    Ok(())
}

/// Monte-Carlo BER of the lantern receiver, averaging the conditional BER.
pub fn ber_mc<R: Rng + ?Sized>(
    kind: CombinerKind,
    model: LanternModel,
    s: SnrScale,
    turb: TurbulenceParams,
    n_samples: u64,
    rng: &mut R,
) -> Result<BerResult> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: "Monte-Carlo BER needs at least 2 samples",
        });
    }
    let mut acc = Welford::new();
    accumulate_ber_mc(&mut acc, kind, model, s, turb, n_samples, rng)?;
    Ok(mc_result(&MciEstimate::from_welford(&acc)))
}

/// Wraps a pooled Monte-Carlo estimate as a [`BerResult`].
pub fn mc_result(est: &MciEstimate) -> BerResult {
    BerResult {
        value: est.value,
        method: BerMethod::MonteCarlo,
        error_estimate: Some(est.std_error),
        terms_used: None,
    }
}

fn check_gamma_bar(gamma_bar: f64) -> Result<()> {
    if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
        return Err(Error::Domain {
            what: "average SNR",
            value: gamma_bar,
        });
    }
    Ok(())
}

/// ∫ f(I) Q(√(γ̄I)) dI with relative quadrature tolerance `quad_tol`.
///
/// The integral runs over ln I on [ln L, ln U]. U is chosen so the
/// survival bound is below min(1e−14, 1e−3·quad_tol); since the BER is at
/// least Q(√(γ̄U))·P(I ≤ U), that keeps the upper tail a relative error.
/// L starts where the lower mass bound is 1e−40 and is lowered if the
/// result turns out smaller than that scale.
pub fn ber_integral(gamma_bar: f64, turb: TurbulenceParams, quad_tol: f64) -> Result<BerResult> {
    check_gamma_bar(gamma_bar)?;
    if !(quad_tol > 0.0 && quad_tol < 1.0) {
        return Err(Error::InvalidParameter {
            name: "quad_tol",
            reason: "must lie in (0, 1)",
        });
    }
    let density = GammaGammaDensity::new(turb);
    let upper_target = (1e-3 * quad_tol).min(1e-14);
    let u = density.upper_cutoff(upper_target);
    let mut lower_target = 1e-40;
    loop {
        let l = density.lower_cutoff(lower_target);
        let cfg = QuadConfig {
            abs_tol: 0.0,
            rel_tol: quad_tol,
            max_intervals: 4000,
        };
        let r = integrate(
            |t| {
                let i = t.exp();
                match density.ln_pdf(i) {
                    Ok(lp) => (lp + t).exp() * q_function((gamma_bar * i).sqrt()),
                    Err(_) => f64::NAN,
                }
            },
            l.ln(),
            u.ln(),
            cfg,
        )?;
        let lower_tail = 0.5 * density.lower_mass_bound(l);
        let upper_tail = density.survival_bound(u) * q_function((gamma_bar * u).sqrt());
        if lower_tail > 1e-3 * quad_tol * r.value && r.value > 0.0 && lower_target > 1e-280 {
            lower_target = (1e-3 * quad_tol * r.value).max(1e-290);
            continue;
        }
        return Ok(BerResult {
            value: r.value.clamp(0.0, 0.5),
            method: BerMethod::Integral,
            error_estimate: Some(r.error + lower_tail + upper_tail),
            terms_used: None,
        });
    }
}

fn check_series(turb: TurbulenceParams) -> Result<()> {
    if !turb.supports_series() {
        return Err(Error::IntegerOrder { order: turb.order() });
    }
    Ok(())
}

/// Λ(α, β) = 1/(Γ(α)Γ(β) sin((α−β)π)); negative when sin is.
pub fn lambda(turb: TurbulenceParams) -> Result<f64> {
    check_series(turb)?;
    let (a, b) = (turb.alpha(), turb.beta());
    let (la, _) = ln_gamma(a)?;
    let (lb, _) = ln_gamma(b)?;
    Ok((-la - lb).exp() / sin_pi(a - b))
}

/// (ln |v|, sign v).
#[derive(Debug, Clone, Copy, PartialEq)]
struct SignedLog {
    ln: f64,
    sign: f64,
}

impl SignedLog {
    fn value(self) -> f64 {
        self.sign * self.ln.exp()
    }
}

/// ln G_p(x, y) with sign, at 2xy/γ̄ = `c`.
fn ln_g(p: usize, x: f64, y: f64, c: f64) -> Result<SignedLog> {
    let p = p as f64;
    let (num, _) = ln_gamma(p + y + 0.5)?;
    let (den, sign) = ln_gamma(p - x + y + 1.0)?;
    Ok(SignedLog {
        ln: num - (p + y).ln() - den + y * c.ln(),
        sign,
    })
}

/// G_p(x, y) at average SNR γ̄.
pub fn g_p(p: usize, x: f64, y: f64, gamma_bar: f64) -> Result<f64> {
    check_gamma_bar(gamma_bar)?;
    Ok(ln_g(p, x, y, 2.0 * x * y / gamma_bar)?.value())
}

fn ln_factorial(p: usize) -> f64 {
    ln_gamma(p as f64 + 1.0).map(|g| g.0).unwrap_or(f64::NAN)
}

/// p-th series term (1/p!)(2αβ/γ̄)^p [G_p(α,β) − G_p(β,α)], without the
/// (√π/2)Λ prefactor.
fn series_term(p: usize, a: f64, b: f64, c: f64) -> Result<f64> {
    let scale = p as f64 * c.ln() - ln_factorial(p);
    let first = ln_g(p, a, b, c)?;
    let second = ln_g(p, b, a, c)?;
    Ok(first.sign * (first.ln + scale).exp() - second.sign * (second.ln + scale).exp())
}

/// Finite-J series sum; errors if it leaves [0, 0.5].
pub fn ber_series(gamma_bar: f64, turb: TurbulenceParams, j_terms: usize) -> Result<BerResult> {
    check_gamma_bar(gamma_bar)?;
    check_series(turb)?;
    if j_terms == 0 {
        return Err(Error::InvalidParameter {
            name: "j_terms",
            reason: "must be at least 1",
        });
    }
    let (a, b) = (turb.alpha(), turb.beta());
    let c = 2.0 * a * b / gamma_bar;
    let mut sum = 0.0;
    for p in 0..j_terms {
        sum += series_term(p, a, b, c)?;
    }
    let value = 0.5 * PI.sqrt() * lambda(turb)? * sum;
    if value < 0.0 {
        return Err(Error::NegativeSeries { value, terms: j_terms });
    }
    if !(value <= 0.5) {
        return Err(Error::NonConvergence {
            what: "BER series",
            terms: j_terms,
        });
    }
    Ok(BerResult {
        value,
        method: BerMethod::Series,
        error_estimate: Some(truncation_bound(j_terms, gamma_bar, turb)?),
        terms_used: Some(j_terms),
    })
}

/// (√π/2)|Λ| (1/J!) (2αβ/γ̄)^J e^(2αβ/γ̄) · max_{J ≤ p ≤ J+200} |G_p(α,β) − G_p(β,α)|.
pub fn truncation_bound(j_terms: usize, gamma_bar: f64, turb: TurbulenceParams) -> Result<f64> {
    check_gamma_bar(gamma_bar)?;
    check_series(turb)?;
    let (a, b) = (turb.alpha(), turb.beta());
    let c = 2.0 * a * b / gamma_bar;
    let mut max_diff: f64 = 0.0;
    for p in j_terms..=j_terms + BOUND_WINDOW {
        let d = ln_g(p, a, b, c)?.value() - ln_g(p, b, a, c)?.value();
        max_diff = max_diff.max(d.abs());
    }
    if max_diff == 0.0 {
        return Ok(0.0);
    }
    let ln_bound = (0.5 * PI.sqrt() * lambda(turb)?.abs()).ln() - ln_factorial(j_terms)
        + j_terms as f64 * c.ln()
        + c
        + max_diff.ln();
    Ok(ln_bound.exp())
}

/// Λ and the a_p(x, y) coefficients of the Beta-function form of the series,
///
/// P_e = (Λ/2) Σ_p [a_p(α,β) (γ̄/2)^(−(p+β)) B(½, p+β+½)
///                  − a_p(β,α) (γ̄/2)^(−(p+α)) B(½, p+α+½)],
///
/// a_p(x, y) = (xy)^(p+y) Γ(p+y) / (Γ(p−x+y+1) p!).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    turb: TurbulenceParams,
    lambda: f64,
    a_ab: Vec<SignedLog>,
    a_ba: Vec<SignedLog>,
}

impl SeriesCoefficients {
    pub fn new(turb: TurbulenceParams, j_terms: usize) -> Result<Self> {
        let lambda = lambda(turb)?;
        let (a, b) = (turb.alpha(), turb.beta());
        let table = |x: f64, y: f64| -> Result<Vec<SignedLog>> {
            (0..j_terms)
                .map(|p| {
                    let pf = p as f64;
                    let (num, _) = ln_gamma(pf + y)?;
                    let (den, sign) = ln_gamma(pf - x + y + 1.0)?;
                    Ok(SignedLog {
                        ln: (pf + y) * (x * y).ln() + num - den - ln_factorial(p),
                        sign,
                    })
                })
                .collect()
        };
        Ok(Self {
            turb,
            lambda,
            a_ab: table(a, b)?,
            a_ba: table(b, a)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn terms(&self) -> usize {
        self.a_ab.len()
    }

    /// a_p(α, β), or a_p(β, α) when `swapped`.
    pub fn a_p(&self, p: usize, swapped: bool) -> f64 {
        if swapped {
            self.a_ba[p].value()
        } else {
            self.a_ab[p].value()
        }
    }

    /// The truncated Beta-form sum at average SNR γ̄.
    pub fn ber(&self, gamma_bar: f64) -> Result<f64> {
        check_gamma_bar(gamma_bar)?;
        let (a, b) = (self.turb.alpha(), self.turb.beta());
        let ln_half = (0.5 * gamma_bar).ln();
        let ln_b = |y: f64| -> Result<f64> { Ok(ln_gamma(0.5)?.0 + ln_gamma(y)?.0 - ln_gamma(0.5 + y)?.0) };
        let mut sum = 0.0;
        for p in 0..self.terms() {
            let pf = p as f64;
            let first = self.a_ab[p];
            let second = self.a_ba[p];
            sum += first.sign * (first.ln - (pf + b) * ln_half + ln_b(pf + b + 0.5)?).exp();
            sum -= second.sign * (second.ln - (pf + a) * ln_half + ln_b(pf + a + 0.5)?).exp();
        }
        Ok(0.5 * self.lambda * sum)
    }
}

/// H(α,β) = (√π/2) (2αβ)^β Γ(β+½) / (Γ(α) Γ(β+1) Γ(β−α+1) sin((α−β)π)).
pub fn asymptotic_coefficient(turb: TurbulenceParams) -> Result<f64> {
    let (a, b) = (turb.alpha(), turb.beta());
    if a <= b {
        return Err(Error::ParameterOrder { alpha: a, beta: b });
    }
    check_series(turb)?;
    let (g1, _) = ln_gamma(b + 0.5)?;
    let (g2, _) = ln_gamma(a)?;
    let (g3, _) = ln_gamma(b + 1.0)?;
    let (g4, s4) = ln_gamma(b - a + 1.0)?;
    let ln_mag = (0.5 * PI.sqrt()).ln() + b * (2.0 * a * b).ln() + g1 - g2 - g3 - g4;
    Ok(s4 * ln_mag.exp() / sin_pi(a - b))
}

/// H(α,β) γ̄^(−β); requires α > β.
pub fn ber_asymptotic(gamma_bar: f64, turb: TurbulenceParams) -> Result<BerResult> {
    check_gamma_bar(gamma_bar)?;
    let h = asymptotic_coefficient(turb)?;
    Ok(BerResult {
        value: h * gamma_bar.powf(-turb.beta()),
        method: BerMethod::Asymptotic,
        error_estimate: None,
        terms_used: None,
    })
}

/// G_0(β,α)/G_0(α,β), the relative size of the term the asymptote drops.
pub fn g0_ratio(gamma_bar: f64, turb: TurbulenceParams) -> Result<f64> {
    check_gamma_bar(gamma_bar)?;
    check_series(turb)?;
    let (a, b) = (turb.alpha(), turb.beta());
    let c = 2.0 * a * b / gamma_bar;
    let num = ln_g(0, b, a, c)?;
    let den = ln_g(0, a, b, c)?;
    Ok(num.sign * den.sign * (num.ln - den.ln).exp())
}
