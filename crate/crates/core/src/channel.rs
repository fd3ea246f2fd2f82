//! Gamma-Gamma irradiance channel.
//!
//! The normalized irradiance I (E[I] = 1) has density
//!
//! f(I) = 2 (αβ)^((α+β)/2) / (Γ(α)Γ(β)) · I^((α+β)/2 - 1) · K_{α-β}(2√(αβI)),
//!
//! where α and β count the large- and small-scale scattering cells. The
//! density is evaluated in log space because K underflows for large I.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::specfun::{is_near_integer, ln_bessel_k, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceParams {
    alpha: f64,
    beta: f64,
}

impl TurbulenceParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must be positive and finite",
            });
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: "must be positive and finite",
            });
        }
        Ok(Self { alpha, beta })
    }

    /// α = 2.23, β = 1.54.
    pub fn moderate() -> Self {
        Self {
            alpha: 2.23,
            beta: 1.54,
        }
    }

    /// α = 2.34, β = 1.02.
    pub fn strong() -> Self {
        Self {
            alpha: 2.34,
            beta: 1.02,
        }
    }

    /// Looks up "moderate" or "strong".
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "moderate" => Some(Self::moderate()),
            "strong" => Some(Self::strong()),
            _ => None,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Order α − β of the Bessel function in the density.
    pub fn order(&self) -> f64 {
        self.alpha - self.beta
    }

    /// Whether α − β is far enough from an integer for the series BER.
    pub fn supports_series(&self) -> bool {
        !is_near_integer(self.order())
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Var[I] = 1/α + 1/β + 1/(αβ).
    pub fn scintillation_index(&self) -> f64 {
        1.0 / self.alpha + 1.0 / self.beta + 1.0 / (self.alpha * self.beta)
    }
}

/// Normalized irradiance, unitless and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Irradiance(f64);

impl Irradiance {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::Domain {
                what: "irradiance",
                value,
            });
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Gamma-Gamma density with the constant part of the log precomputed.
#[derive(Debug, Clone, Copy)]
pub struct GammaGammaDensity {
    params: TurbulenceParams,
    ln_norm: f64,
}

impl GammaGammaDensity {
    pub fn new(params: TurbulenceParams) -> Self {
        let (a, b) = (params.alpha, params.beta);
        // Γ at positive arguments never fails
        let lga = ln_gamma(a).map(|g| g.0).unwrap_or(f64::NAN);
        let lgb = ln_gamma(b).map(|g| g.0).unwrap_or(f64::NAN);
        let ln_norm = 2f64.ln() + 0.5 * (a + b) * (a * b).ln() - lga - lgb;
        Self { params, ln_norm }
    }

    pub fn params(&self) -> TurbulenceParams {
        self.params
    }

    pub fn ln_pdf(&self, i: f64) -> Result<f64> {
        if !(i > 0.0) || !i.is_finite() {
            return Err(Error::Domain {
                what: "gg_pdf",
                value: i,
            });
        }
        let (a, b) = (self.params.alpha, self.params.beta);
        let x = 2.0 * (a * b * i).sqrt();
        Ok(self.ln_norm + (0.5 * (a + b) - 1.0) * i.ln() + ln_bessel_k(a - b, x)?)
    }

    pub fn pdf(&self, i: f64) -> Result<f64> {
        Ok(self.ln_pdf(i)?.exp())
    }

    /// Upper bound on P(I < eps), from f(I) ≤ c·I^(e-1) near the origin.
    pub fn lower_mass_bound(&self, eps: f64) -> f64 {
        let (c, e) = self.small_i_envelope();
        c * eps.powf(e) / e
    }

    /// Largest ε with `lower_mass_bound(ε) <= target`.
    pub fn lower_cutoff(&self, target: f64) -> f64 {
        let (c, e) = self.small_i_envelope();
        (target * e / c).powf(1.0 / e)
    }

    // K_ν(x) ≤ Γ(ν)/2 · (2/x)^ν for ν > 0, and K grows with ν, so using
    // ν' = max(|α-β|, 1/2) bounds the density by c·I^(e-1).
    fn small_i_envelope(&self) -> (f64, f64) {
        let (a, b) = (self.params.alpha, self.params.beta);
        let nu = (a - b).abs().max(0.5);
        let e = 0.5 * (a + b - nu);
        let ln_c = 0.5 * (a + b - nu) * (a * b).ln() + lg(nu) - lg(a) - lg(b);
        (ln_c.exp(), e.max(1e-3))
    }

    /// Upper bound on the survival function P(I > u).
    ///
    /// With s = 2√(αβI) the density becomes 2^(2-α-β)/(Γ(α)Γ(β)) s^(α+β-1) K(s) ds,
    /// and K(s) ≤ 2√(π/2s) e^(-s) once s ≥ 8ν², leaving an incomplete Gamma
    /// tail bounded by s^(a-1) e^(-s) / (1 - (a-1)/s), a = α + β − 1/2.
    /// Returns +∞ where the bound does not apply.
    pub fn survival_bound(&self, u: f64) -> f64 {
        let (a, b) = (self.params.alpha, self.params.beta);
        let s = 2.0 * (a * b * u).sqrt();
        let nu = (a - b).abs();
        let shape = a + b - 0.5;
        if s < 8.0 * nu * nu || s < 2.0 * (shape - 1.0).max(0.0) || s < 4.0 {
            return f64::INFINITY;
        }
        let ln_bound =
            2f64.ln() + (2.0 - a - b) * 2f64.ln() - lg(a) - lg(b) + 0.5 * (PI / 2.0).ln() + (shape - 1.0) * s.ln()
                - s
                - (1.0 - (shape - 1.0) / s).ln();
        ln_bound.exp()
    }

    /// Smallest grid point u (in s-steps of 1/4) with `survival_bound(u) < target`.
    pub fn upper_cutoff(&self, target: f64) -> f64 {
        let (a, b) = (self.params.alpha, self.params.beta);
        let mut s: f64 = 4.0;
        loop {
            let u = s * s / (4.0 * a * b);
            if self.survival_bound(u) < target {
                return u;
            }
            s += 0.25;
        }
    }
}

fn lg(x: f64) -> f64 {
    ln_gamma(x).map(|g| g.0).unwrap_or(f64::NAN)
}

/// Gamma-Gamma density f(I) for I > 0.
pub fn gg_pdf(i: Irradiance, p: TurbulenceParams) -> Result<f64> {
    GammaGammaDensity::new(p).pdf(i.value())
}

/// Draws I = X·Y with X ~ Gamma(α, 1/α) and Y ~ Gamma(β, 1/β).
#[derive(Debug, Clone, Copy)]
pub struct GammaGammaSampler {
    large_scale: Gamma<f64>,
    small_scale: Gamma<f64>,
}

impl GammaGammaSampler {
    pub fn new(p: TurbulenceParams) -> Self {
        // shapes and scales are positive and finite by construction
        let large_scale = Gamma::new(p.alpha, 1.0 / p.alpha).expect("valid Gamma shape");
        let small_scale = Gamma::new(p.beta, 1.0 / p.beta).expect("valid Gamma shape");
        Self {
            large_scale,
            small_scale,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Irradiance {
        let x = self.large_scale.sample(rng);
        let y = self.small_scale.sample(rng);
        Irradiance(x * y)
    }
}

pub fn gg_sample<R: Rng + ?Sized>(p: TurbulenceParams, rng: &mut R) -> Irradiance {
    GammaGammaSampler::new(p).sample(rng)
}
