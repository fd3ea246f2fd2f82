//! Performance models for a coherent free-space optical link that uses a
//! non-mode-selective photonic lantern as the receiver front end.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It covers:
//!
//! - [`channel`]: the Gamma-Gamma irradiance density and sampler,
//! - [`lantern`]: power-split models at the single-mode ports,
//! - [`combining`]: instantaneous and average SNR for SC, EGC and MRC, plus
//!   the single-mode and multimode fiber reference receivers,
//! - [`ber`]: BPSK bit-error rate by Monte-Carlo, direct integration, a
//!   series lower bound with its truncation bound, and the high-SNR
//!   asymptote,
//! - [`mci`]: the Monte-Carlo integration engine shared by the above,
//! - [`specfun`] and [`quad`]: the special functions and adaptive quadrature
//!   the closed forms need.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ber;
pub mod channel;
pub mod combining;
pub mod error;
pub mod lantern;
pub mod mci;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod stats;

pub use ber::{BerMethod, BerResult, SeriesCoefficients};
pub use channel::{Irradiance, TurbulenceParams};
pub use combining::{CombinerKind, DeviceParams, SnrScale};
pub use error::{Error, Result};
pub use lantern::{LanternModel, PowerSplit, Spread};
pub use mci::MciEstimate;
