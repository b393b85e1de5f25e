//! Special functions used by the coverage formulas.
//!
//! Complex arguments use [`ComplexVal`]; every power of a complex number is
//! taken on the principal branch, `arg` in `(-pi, pi]`.

mod dd;
mod gamma;
mod hyp1f1;
mod hyp2f1;
mod incgamma;
mod kernels;

pub use num_complex::Complex64 as ComplexVal;

pub use gamma::{gamma_fn, ln_gamma, rgamma};
pub use hyp1f1::hyp1f1;
pub use hyp2f1::hyp2f1_special;
pub(crate) use incgamma::lower_bracket;
pub use incgamma::{gamma_lower_inc, gamma_upper_inc};
pub use kernels::{g_kernel, sinc_fn};
