//! Streaming, mergeable moment accumulators.
//!
//! Both accumulators use the pairwise update of Chan et al., so partial
//! results from workers can be combined in any fixed order and give the
//! same answer as a single pass up to rounding.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Welford one-pass mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.count as f64 * w;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero with fewer than two points.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Means and co-moments of a fixed-length vector stream.
#[derive(Debug, Clone, PartialEq)]
pub struct CoMoments {
    dim: usize,
    count: u64,
    mean: Vec<f64>,
    // row-major dim x dim co-moment matrix
    comoment: Vec<f64>,
    delta: Vec<f64>,
}

impl CoMoments {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            count: 0,
            mean: vec![0.0; dim],
            comoment: vec![0.0; dim * dim],
            delta: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.dim);
        self.count += 1;
        let inv = 1.0 / self.count as f64;
        for i in 0..self.dim {
            self.delta[i] = x[i] - self.mean[i];
            self.mean[i] += self.delta[i] * inv;
        }
        for i in 0..self.dim {
            let after = x[i] - self.mean[i];
            for j in 0..self.dim {
                self.comoment[i * self.dim + j] += after * self.delta[j];
            }
        }
    }

    pub fn merge(&mut self, other: &CoMoments) {
        debug_assert_eq!(other.dim, self.dim);
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for i in 0..self.dim {
            self.delta[i] = other.mean[i] - self.mean[i];
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.comoment[i * self.dim + j] +=
                    other.comoment[i * self.dim + j] + self.delta[i] * self.delta[j] * na * nb / n;
            }
        }
        for i in 0..self.dim {
            self.mean[i] += self.delta[i] * nb / n;
        }
        self.count += other.count;
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.mean[i]
    }

    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        self.comoment[i * self.dim + j] / (self.count - 1) as f64
    }

    pub fn variance(&self, i: usize) -> f64 {
        self.covariance(i, i)
    }

    /// Pearson correlation; NaN when either coordinate has zero variance.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        let c = self.comoment[i * self.dim + j];
        let vi = self.comoment[i * self.dim + i];
        let vj = self.comoment[j * self.dim + j];
        c / (vi * vj).sqrt()
    }

    /// Average of the correlations over all unordered pairs i < j.
    pub fn mean_pairwise_correlation(&self) -> f64 {
        let mut sum = 0.0;
        let mut pairs = 0usize;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                sum += self.correlation(i, j);
                pairs += 1;
            }
        }
        sum / pairs as f64
    }

    /// Average of the per-coordinate sample variances.
    pub fn mean_variance(&self) -> f64 {
        (0..self.dim).map(|i| self.variance(i)).sum::<f64>() / self.dim as f64
    }

    /// Average of the per-coordinate sample means.
    pub fn mean_of_means(&self) -> f64 {
        self.mean.iter().sum::<f64>() / self.dim as f64
    }
}

/// Large-sample standard error of a Pearson correlation estimate.
pub fn correlation_std_error(rho: f64, n: u64) -> f64 {
    (1.0 - rho * rho) / ((n as f64) - 1.0).max(1.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, 2.5, -3.0, 8.25, 0.5];
        let mut w = Welford::new();
        xs.iter().for_each(|&x| w.push(x));
        let mean = xs.iter().sum::<f64>() / 6.0;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 5.0;
        assert!((w.mean() - mean).abs() < 1e-14);
        assert!((w.variance() - var).abs() < 1e-13);
        assert!((w.std_error() - (var / 6.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn comoments_perfect_anticorrelation() {
        let mut c = CoMoments::new(2);
        for k in 0..50 {
            let a = (k as f64 * 0.37).sin().abs();
            c.push(&[a, 1.0 - a]);
        }
        assert!((c.correlation(0, 1) + 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn welford_merge_equals_single_pass(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
            let cut = cut.min(xs.len());
            let mut whole = Welford::new();
            xs.iter().for_each(|&x| whole.push(x));
            let mut left = Welford::new();
            let mut right = Welford::new();
            xs[..cut].iter().for_each(|&x| left.push(x));
            xs[cut..].iter().for_each(|&x| right.push(x));
            left.merge(&right);
            prop_assert_eq!(left.count(), whole.count());
            prop_assert!((left.mean() - whole.mean()).abs() <= 1e-9 * (1.0 + whole.mean().abs()));
            prop_assert!((left.variance() - whole.variance()).abs() <= 1e-8 * (1.0 + whole.variance()));
        }

        #[test]
        fn comoment_merge_equals_single_pass(rows in prop::collection::vec(prop::array::uniform3(-10f64..10.0), 2..80), cut in 0usize..80) {
            let cut = cut.min(rows.len());
            let mut whole = CoMoments::new(3);
            rows.iter().for_each(|r| whole.push(r));
            let mut left = CoMoments::new(3);
            let mut right = CoMoments::new(3);
            rows[..cut].iter().for_each(|r| left.push(r));
            rows[cut..].iter().for_each(|r| right.push(r));
            left.merge(&right);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((left.covariance(i, j) - whole.covariance(i, j)).abs() < 1e-9);
                }
            }
        }
    }
}
