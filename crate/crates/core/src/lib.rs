//! Downlink coverage probability of K-tier heterogeneous Poisson cellular
//! networks under max-SINR, nearest-station, max-instantaneous-power and
//! biased average-power association.
//!
//! [`analytic`] evaluates closed forms and transform inversions, [`mcsim`]
//! simulates the same networks as an independent check, and
//! [`equivalence`] maps networks onto one-dimensional images.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod equivalence;
pub mod error;
pub mod mcsim;
pub mod model;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result, Violation};
