//! The five experiments. Each builds a [`Table`]; sweep points run on the
//! rayon pool and are reassembled in grid order, and every Monte-Carlo
//! stream is `worker_rng(seed, point_index)`, so the output does not depend
//! on the number of threads.

use plfso_core::{LanternModel, Spread};
use rayon::prelude::*;

use crate::error::CliError;

pub mod ber_curve;
pub mod gain_map;
pub mod photon_sim;
pub mod snr_sweep;
pub mod validate;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Evaluates `f` at every point index in parallel. Results come back in
/// index order; on failure the error of the lowest failing index wins.
pub fn par_points<T, F>(n: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize) -> Result<T, CliError> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

pub fn lantern(n_smf: usize, spread: Spread, loss: f64) -> Result<LanternModel, CliError> {
    LanternModel::new(n_smf, spread, loss).map_err(|e| CliError::config("n_smf", e))
}
