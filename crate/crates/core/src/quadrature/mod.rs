//! Numerical integration building blocks: adaptive Gauss-Kronrod, fixed
//! Gauss rules, Wynn's epsilon acceleration, and characteristic-function
//! inversion.

mod adaptive;
mod gauss;
mod inversion;
mod wynn;

pub use adaptive::{integrate, integrate_to_infinity, QuadOutcome, QuadValue};
pub use gauss::{gauss_hermite, gauss_laguerre, gauss_legendre, Rule};
pub use inversion::{cdf_from_cf, InversionOptions};
pub use wynn::wynn_epsilon;

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Smallest `x > 0` with `sum_i c_i x^(p_i) >= target`, for nonnegative
/// coefficients and positive exponents (the left side is increasing).
pub fn power_sum_root(terms: &[(f64, f64)], target: f64) -> f64 {
    let f = |x: f64| terms.iter().map(|&(c, p)| c * x.powf(p)).sum::<f64>();
    if terms.iter().all(|&(c, _)| c <= 0.0) {
        return f64::INFINITY;
    }
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while f(lo) > target {
        lo *= 0.5;
        if lo < 1e-300 {
            return lo;
        }
    }
    while f(hi) < target {
        hi *= 2.0;
        if hi > 1e300 {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-13 {
            break;
        }
    }
    hi
}
