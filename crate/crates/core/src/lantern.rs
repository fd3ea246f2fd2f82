//! Power split of a non-mode-selective photonic lantern.
//!
//! The lantern spreads the received power over N single-mode ports with
//! ratios a = (a₁, …, a_N) on the standard simplex. Three models are
//! offered: the degenerate split a_i = 1/N, the uniform distribution on the
//! simplex, and a Gaussian around the centroid truncated to the simplex.
//!
//! Densities are taken with respect to Lebesgue measure on the first N − 1
//! coordinates a* = (a₁, …, a_{N−1}), so the uniform density is (N − 1)!.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::mci::{mci_estimate, MciEstimate};
use crate::stats::CoMoments;

/// Allowed deviation of Σa_i from one.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Consecutive rejections after which the truncated-Gaussian sampler gives up.
pub const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

/// Ratios a_i ≥ 0 with Σa_i = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSplit {
    ratios: Vec<f64>,
}

impl PowerSplit {
    pub fn new(ratios: Vec<f64>) -> Result<Self> {
        check_simplex(&ratios)?;
        Ok(Self { ratios })
    }

    /// The centroid a_i = 1/N.
    pub fn centroid(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n_smf",
                reason: "must be at least 1",
            });
        }
        Ok(Self {
            ratios: vec![1.0 / n as f64; n],
        })
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn max_ratio(&self) -> f64 {
        max_of(&self.ratios)
    }

    /// Index of the largest ratio; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &a) in self.ratios.iter().enumerate() {
            if a > self.ratios[best] {
                best = i;
            }
        }
        best
    }

    /// Σ√a_i.
    pub fn sqrt_sum(&self) -> f64 {
        sqrt_sum(&self.ratios)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.ratios
    }
}

fn check_simplex(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::InvalidParameter {
            name: "ratios",
            reason: "power split needs at least one port",
        });
    }
    if a.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidParameter {
            name: "ratios",
            reason: "each ratio must lie in [0, 1]",
        });
    }
    let sum: f64 = a.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidParameter {
            name: "ratios",
            reason: "ratios must sum to one",
        });
    }
    Ok(())
}

pub(crate) fn max_of(a: &[f64]) -> f64 {
    a.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn sqrt_sum(a: &[f64]) -> f64 {
    a.iter().map(|x| x.sqrt()).sum()
}

/// Spread of the power split around the centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spread {
    /// σ² = 0: every port gets exactly 1/N.
    Degenerate,
    /// 0 < σ² < ∞: Gaussian around the centroid, truncated to the simplex.
    TruncGaussian { sigma2: f64 },
    /// σ² = ∞: uniform on the simplex.
    Uniform,
}

impl Spread {
    /// Maps 0 to [`Spread::Degenerate`] and +∞ to [`Spread::Uniform`].
    pub fn from_sigma2(sigma2: f64) -> Result<Self> {
        if sigma2 == 0.0 {
            Ok(Spread::Degenerate)
        } else if sigma2 == f64::INFINITY {
            Ok(Spread::Uniform)
        } else if sigma2 > 0.0 && sigma2.is_finite() {
            Ok(Spread::TruncGaussian { sigma2 })
        } else {
            Err(Error::InvalidParameter {
                name: "sigma2",
                reason: "must be 0, a positive number, or inf",
            })
        }
    }

    pub fn sigma2(&self) -> f64 {
        match *self {
            Spread::Degenerate => 0.0,
            Spread::TruncGaussian { sigma2 } => sigma2,
            Spread::Uniform => f64::INFINITY,
        }
    }
}

/// Prints the σ² tag: `0`, the value, or `inf`.
impl fmt::Display for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Spread::Degenerate => f.write_str("0"),
            Spread::TruncGaussian { sigma2 } => write!(f, "{sigma2}"),
            Spread::Uniform => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanternModel {
    n_smf: usize,
    spread: Spread,
    loss: f64,
}

impl LanternModel {
    pub fn new(n_smf: usize, spread: Spread, loss: f64) -> Result<Self> {
        if n_smf < 2 {
            return Err(Error::InvalidParameter {
                name: "n_smf",
                reason: "a lantern needs at least 2 single-mode ports",
            });
        }
        if !(loss > 0.0 && loss <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "loss",
                reason: "must lie in (0, 1]",
            });
        }
        if let Spread::TruncGaussian { sigma2 } = spread {
            Spread::from_sigma2(sigma2)?;
        }
        Ok(Self { n_smf, spread, loss })
    }

    /// Lossless degenerate model.
    pub fn degenerate(n_smf: usize) -> Result<Self> {
        Self::new(n_smf, Spread::Degenerate, 1.0)
    }

    /// Lossless uniform model.
    pub fn uniform(n_smf: usize) -> Result<Self> {
        Self::new(n_smf, Spread::Uniform, 1.0)
    }

    /// Lossless truncated-Gaussian model.
    pub fn trunc_gaussian(n_smf: usize, sigma2: f64) -> Result<Self> {
        Self::new(n_smf, Spread::TruncGaussian { sigma2 }, 1.0)
    }

    pub fn with_loss(self, loss: f64) -> Result<Self> {
        Self::new(self.n_smf, self.spread, loss)
    }

    pub fn n_smf(&self) -> usize {
        self.n_smf
    }

    pub fn spread(&self) -> Spread {
        self.spread
    }

    pub fn sigma2(&self) -> f64 {
        self.spread.sigma2()
    }

    /// ξ_PL.
    pub fn loss(&self) -> f64 {
        self.loss
    }
}

/// ρ = −1/(N − 1), forced by Σa_i = 1 for exchangeable ports.
pub fn theoretical_correlation(n_smf: usize) -> Result<f64> {
    if n_smf < 2 {
        return Err(Error::InvalidParameter {
            name: "n_smf",
            reason: "correlation needs at least 2 ports",
        });
    }
    Ok(-1.0 / (n_smf as f64 - 1.0))
}

/// Draws power splits from a [`LanternModel`].
#[derive(Debug, Clone, Copy)]
pub struct SplitSampler {
    model: LanternModel,
    // per-coordinate std of the isotropic Gaussian that is projected onto
    // the hyperplane Σx = 0
    scale: f64,
}

impl SplitSampler {
    pub fn new(model: LanternModel) -> Self {
        let n = model.n_smf as f64;
        let scale = match model.spread {
            Spread::TruncGaussian { sigma2 } => (sigma2 * n / (n - 1.0)).sqrt(),
            _ => 0.0,
        };
        Self { model, scale }
    }

    pub fn model(&self) -> LanternModel {
        self.model
    }

    /// Writes one draw into `out`, which must have length N.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) -> Result<()> {
        let n = self.model.n_smf;
        debug_assert_eq!(out.len(), n);
        match self.model.spread {
            Spread::Degenerate => out.fill(1.0 / n as f64),
            Spread::Uniform => {
                let mut total = 0.0;
                for x in out.iter_mut() {
                    let e: f64 = Exp1.sample(rng);
                    *x = e;
                    total += e;
                }
                for x in out.iter_mut() {
                    *x /= total;
                }
            }
            Spread::TruncGaussian { .. } => {
                let mut rejected = 0u64;
                loop {
                    hyperplane_gaussian(self.scale, rng, out);
                    if in_box(out) {
                        break;
                    }
                    rejected += 1;
                    if rejected >= MAX_CONSECUTIVE_REJECTIONS {
                        return Err(Error::RejectionStall { proposals: rejected });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PowerSplit> {
        let mut out = vec![0.0; self.model.n_smf];
        self.sample_into(rng, &mut out)?;
        Ok(PowerSplit { ratios: out })
    }
}

pub fn sample_split<R: Rng + ?Sized>(model: LanternModel, rng: &mut R) -> Result<PowerSplit> {
    SplitSampler::new(model).sample(rng)
}

/// Centroid plus an isotropic Gaussian projected onto Σx = 0. The last
/// coordinate closes the sum so Σa = 1 up to rounding.
fn hyperplane_gaussian<R: Rng + ?Sized>(scale: f64, rng: &mut R, out: &mut [f64]) {
    let n = out.len();
    let mut mean = 0.0;
    for x in out.iter_mut() {
        let z: f64 = StandardNormal.sample(rng);
        *x = scale * z;
        mean += *x;
    }
    mean /= n as f64;
    let centre = 1.0 / n as f64;
    let mut head = 0.0;
    for x in out[..n - 1].iter_mut() {
        *x = centre + (*x - mean);
        head += *x;
    }
    out[n - 1] = 1.0 - head;
}

fn in_box(a: &[f64]) -> bool {
    a.iter().all(|&x| (0.0..=1.0).contains(&x))
}

/// Small dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn<F: Fn(usize, usize) -> f64>(dim: usize, f: F) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        debug_assert_eq!(self.dim, other.dim);
        DenseMatrix::from_fn(self.dim, |i, j| {
            (0..self.dim).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// xᵀ M x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut total = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                total += x[i] * self.get(i, j) * x[j];
            }
        }
        total
    }
}

fn check_gaussian_args(n_smf: usize, sigma2: f64) -> Result<()> {
    if n_smf < 2 {
        return Err(Error::InvalidParameter {
            name: "n_smf",
            reason: "must be at least 2",
        });
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma2",
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

/// Σ_{a*}: σ² on the diagonal, ρσ² off it, ρ = −1/(N − 1).
pub fn sigma_star(n_smf: usize, sigma2: f64) -> Result<DenseMatrix> {
    check_gaussian_args(n_smf, sigma2)?;
    let rho = theoretical_correlation(n_smf)?;
    Ok(DenseMatrix::from_fn(n_smf - 1, |i, j| {
        if i == j {
            sigma2
        } else {
            rho * sigma2
        }
    }))
}

/// Σ_{a*}⁻¹ = (N − 1)/(Nσ²) · (I + 11ᵀ).
pub fn sigma_star_inverse(n_smf: usize, sigma2: f64) -> Result<DenseMatrix> {
    check_gaussian_args(n_smf, sigma2)?;
    let n = n_smf as f64;
    let c = (n - 1.0) / (n * sigma2);
    Ok(DenseMatrix::from_fn(n_smf - 1, |i, j| if i == j { 2.0 * c } else { c }))
}

/// (a* − μ)ᵀ Σ_{a*}⁻¹ (a* − μ), written as (N − 1)/(Nσ²) Σ_{i≤N} (a_i − 1/N)².
pub fn gaussian_exponent(a: &[f64], sigma2: f64) -> f64 {
    let n = a.len() as f64;
    let centre = 1.0 / n;
    let ss: f64 = a.iter().map(|&x| (x - centre) * (x - centre)).sum();
    (n - 1.0) / (n * sigma2) * ss
}

/// C₃ = [2πσ²N/(N − 1)]^((N−1)/2) / √N, the integral of exp(−q/2) over the
/// whole hyperplane.
pub fn gaussian_normalizer(n_smf: usize, sigma2: f64) -> Result<f64> {
    check_gaussian_args(n_smf, sigma2)?;
    let n = n_smf as f64;
    Ok((2.0 * PI * sigma2 * n / (n - 1.0)).powf(0.5 * (n - 1.0)) / n.sqrt())
}

/// C₂ = C₃ · Pr[a ∈ [0,1]^N] under the untruncated hyperplane Gaussian.
pub fn normalization_c2<R: Rng + ?Sized>(model: LanternModel, n_samples: u64, rng: &mut R) -> Result<MciEstimate> {
    let sigma2 = match model.spread {
        Spread::TruncGaussian { sigma2 } => sigma2,
        _ => {
            return Err(Error::InvalidParameter {
                name: "model",
                reason: "C2 is defined for the truncated-Gaussian model only",
            })
        }
    };
    let n = model.n_smf;
    let c3 = gaussian_normalizer(n, sigma2)?;
    let scale = SplitSampler::new(model).scale;
    let mut buf = vec![0.0; n];
    let est = mci_estimate(
        |rng: &mut R| {
            hyperplane_gaussian(scale, rng, &mut buf);
            Ok(in_box(&buf))
        },
        |&inside| if inside { c3 } else { 0.0 },
        n_samples,
        rng,
    )?;
    let rel = if est.value == 0.0 {
        f64::INFINITY
    } else {
        est.relative_error()
    };
    if rel > 0.1 {
        return Err(Error::InsufficientSamples { relative_error: rel });
    }
    Ok(est)
}

/// Density of the split at `a`. The truncated-Gaussian model needs its C₂;
/// the uniform model ignores it.
pub fn split_density(a: &PowerSplit, model: LanternModel, c2: Option<f64>) -> Result<f64> {
    if a.len() != model.n_smf {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: "length differs from the number of ports",
        });
    }
    match model.spread {
        Spread::Degenerate => Err(Error::DegenerateModel),
        Spread::Uniform => Ok(factorial(model.n_smf - 1)),
        Spread::TruncGaussian { sigma2 } => {
            let c2 = c2.ok_or(Error::InvalidParameter {
                name: "c2",
                reason: "truncated-Gaussian density needs its normalization constant",
            })?;
            if !(c2 > 0.0 && c2.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "c2",
                    reason: "must be positive and finite",
                });
            }
            Ok((-0.5 * gaussian_exponent(&a.ratios, sigma2)).exp() / c2)
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Summary of the photon-assignment simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonSimStats {
    pub per_port_mean: f64,
    pub per_port_variance: f64,
    pub pairwise_correlation: f64,
    pub n_photons: u64,
    pub n_trials: u64,
}

/// Photon-assignment Monte-Carlo: each trial throws M photons uniformly at
/// random into N ports and records the ratios m_i/M. Accumulators from
/// separate workers merge exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSim {
    n_smf: usize,
    n_photons: u64,
    moments: CoMoments,
    // counts[port * (M + 1) + m]: trials in which the port received m photons
    counts: Vec<u64>,
}

impl PhotonSim {
    pub fn new(n_smf: usize, n_photons: u64) -> Result<Self> {
        if n_smf < 2 {
            return Err(Error::InvalidParameter {
                name: "n_smf",
                reason: "must be at least 2",
            });
        }
        if n_photons == 0 {
            return Err(Error::InvalidParameter {
                name: "n_photons",
                reason: "must be at least 1",
            });
        }
        let bins = usize::try_from(n_photons + 1).map_err(|_| Error::InvalidParameter {
            name: "n_photons",
            reason: "too large for the histogram",
        })?;
        Ok(Self {
            n_smf,
            n_photons,
            moments: CoMoments::new(n_smf),
            counts: vec![0; n_smf * bins],
        })
    }

    pub fn run<R: Rng + ?Sized>(&mut self, n_trials: u64, rng: &mut R) {
        let n = self.n_smf;
        let bins = self.n_photons as usize + 1;
        let inv_m = 1.0 / self.n_photons as f64;
        let mut ratios = vec![0.0; n];
        for _ in 0..n_trials {
            // multinomial draw as a chain of binomials
            let mut remaining = self.n_photons;
            for (i, r) in ratios.iter_mut().enumerate() {
                let m = if i + 1 == n {
                    remaining
                } else {
                    let p = 1.0 / (n - i) as f64;
                    Binomial::new(remaining, p).expect("p in (0, 1]").sample(rng)
                };
                remaining -= m;
                self.counts[i * bins + m as usize] += 1;
                *r = m as f64 * inv_m;
            }
            self.moments.push(&ratios);
        }
    }

    pub fn merge(&mut self, other: &PhotonSim) -> Result<()> {
        if other.n_smf != self.n_smf || other.n_photons != self.n_photons {
            return Err(Error::InvalidParameter {
                name: "other",
                reason: "photon simulations differ in N or M",
            });
        }
        self.moments.merge(&other.moments);
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        Ok(())
    }

    pub fn n_smf(&self) -> usize {
        self.n_smf
    }

    pub fn n_photons(&self) -> u64 {
        self.n_photons
    }

    pub fn n_trials(&self) -> u64 {
        self.moments.count()
    }

    pub fn moments(&self) -> &CoMoments {
        &self.moments
    }

    pub fn stats(&self) -> PhotonSimStats {
        PhotonSimStats {
            per_port_mean: self.moments.mean_of_means(),
            per_port_variance: self.moments.mean_variance(),
            pairwise_correlation: self.moments.mean_pairwise_correlation(),
            n_photons: self.n_photons,
            n_trials: self.moments.count(),
        }
    }

    /// (bin centre m/M, fraction of trials) for each photon count m.
    pub fn histogram(&self, port: usize) -> Vec<(f64, f64)> {
        let bins = self.n_photons as usize + 1;
        let trials = self.n_trials().max(1) as f64;
        let inv_m = 1.0 / self.n_photons as f64;
        self.counts[port * bins..(port + 1) * bins]
            .iter()
            .enumerate()
            .map(|(m, &c)| (m as f64 * inv_m, c as f64 / trials))
            .collect()
    }

    /// Raw trial counts per photon count for one port.
    pub fn counts(&self, port: usize) -> &[u64] {
        let bins = self.n_photons as usize + 1;
        &self.counts[port * bins..(port + 1) * bins]
    }
}

pub fn photon_mc<R: Rng + ?Sized>(n_smf: usize, n_photons: u64, n_trials: u64, rng: &mut R) -> Result<PhotonSimStats> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter {
            name: "n_trials",
            reason: "must be at least 1",
        });
    }
    let mut sim = PhotonSim::new(n_smf, n_photons)?;
    sim.run(n_trials, rng);
    Ok(sim.stats())
}
