//! Monte-Carlo integration.
//!
//! An integral ∫ g(x) dx is rewritten as E_f[g(x)/f(x)] for a sampling
//! density f, then estimated by the sample mean of the objective
//! O = g/f over draws from f. The standard error comes from a Welford
//! accumulator, so independent workers can each run [`mci_accumulate`] on
//! their own stream and the caller merges the partial results.

use crate::error::{Error, Result};
use crate::stats::Welford;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MciEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl MciEstimate {
    /// A value known in closed form: zero standard error, no samples.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            n_samples: 0,
        }
    }

    pub fn from_welford(w: &Welford) -> Self {
        Self {
            value: w.mean(),
            std_error: w.std_error(),
            n_samples: w.count(),
        }
    }

    /// std_error / |value|; infinite for a zero estimate with nonzero error.
    pub fn relative_error(&self) -> f64 {
        if self.std_error == 0.0 {
            0.0
        } else {
            self.std_error / self.value.abs()
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            std_error: self.std_error * factor.abs(),
            n_samples: self.n_samples,
        }
    }

    /// |self - other| in units of the combined standard error.
    pub fn z_score(&self, other: &MciEstimate) -> f64 {
        let se = (self.std_error * self.std_error + other.std_error * other.std_error).sqrt();
        (self.value - other.value).abs() / se
    }
}

/// Feeds `n_samples` draws of `sampler` through `objective` into `acc`.
pub fn mci_accumulate<R, X, S, O>(
    acc: &mut Welford,
    mut sampler: S,
    mut objective: O,
    n_samples: u64,
    rng: &mut R,
) -> Result<()>
where
    R: ?Sized,
    S: FnMut(&mut R) -> Result<X>,
    O: FnMut(&X) -> f64,
{
    for index in 0..n_samples {
        let x = sampler(rng)?;
        let value = objective(&x);
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        acc.push(value);
    }
    Ok(())
}

/// Sample mean of `objective` over `n_samples` draws, with standard error.
pub fn mci_estimate<R, X, S, O>(sampler: S, objective: O, n_samples: u64, rng: &mut R) -> Result<MciEstimate>
where
    R: ?Sized,
    S: FnMut(&mut R) -> Result<X>,
    O: FnMut(&X) -> f64,
{
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: "Monte-Carlo integration needs at least 2 samples",
        });
    }
    let mut acc = Welford::new();
    mci_accumulate(&mut acc, sampler, objective, n_samples, rng)?;
    Ok(MciEstimate::from_welford(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{seeded, worker_rng, SeededRng};
    use rand::Rng;
    use std::vec::Vec;

    fn uniform(rng: &mut SeededRng) -> Result<f64> {
        Ok(rng.random::<f64>())
    }

    #[test]
    fn constant_objective_is_exact() {
        let est = mci_estimate(uniform, |_| 1.0, 1000, &mut seeded(1)).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn mean_of_uniform() {
        let est = mci_estimate(uniform, |&x| x, 1_000_000, &mut seeded(2)).unwrap();
        assert!((est.value - 0.5).abs() < 3.0 * est.std_error, "{est:?}");
        // σ = 1/√12
        assert!((est.std_error - (1.0f64 / 12.0 / 1e6).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn non_finite_objective_is_reported() {
        let err = mci_estimate(uniform, |&x| if x < 2.0 { f64::NAN } else { 0.0 }, 10, &mut seeded(3)).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 0, .. }));
    }

    #[test]
    fn too_few_samples() {
        assert!(mci_estimate(uniform, |&x| x, 1, &mut seeded(3)).is_err());
    }

    #[test]
    fn reproducible_for_fixed_seed_and_partitioning() {
        let run = || {
            let mut total = Welford::new();
            for w in 0..4 {
                let mut acc = Welford::new();
                mci_accumulate(&mut acc, uniform, |&x| x * x, 25_000, &mut worker_rng(99, w)).unwrap();
                total.merge(&acc);
            }
            MciEstimate::from_welford(&total)
        };
        let a = run();
        let b = run();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.n_samples, 100_000);
    }

    #[test]
    fn run_spread_matches_reported_error() {
        // 50 independent runs: the spread of run means should match the
        // mean reported variance within a factor of two
        let k = 50;
        let mut means = Welford::new();
        let mut reported = 0.0;
        for w in 0..k {
            let est = mci_estimate(uniform, |&x| x.sqrt(), 20_000, &mut worker_rng(5, w)).unwrap();
            means.push(est.value);
            reported += est.std_error * est.std_error;
        }
        reported /= k as f64;
        let ratio = means.variance() / reported;
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio}");
        // pooled estimate of E[√U] = 2/3
        assert!((means.mean() - 2.0 / 3.0).abs() < 3.0 * (reported / k as f64).sqrt());
    }

    #[test]
    fn std_error_shrinks_like_inverse_sqrt_n() {
        let se: Vec<f64> = [10_000u64, 40_000, 160_000]
            .iter()
            .map(|&n| mci_estimate(uniform, |&x| x, n, &mut seeded(n)).unwrap().std_error)
            .collect();
        assert!((se[0] / se[1] - 2.0).abs() < 0.1);
        assert!((se[1] / se[2] - 2.0).abs() < 0.1);
    }
}
