//! Classical single-tier results that predate the multi-tier formulas.

use std::f64::consts::PI;

/// Nearest-BS Rayleigh coverage of a single interference-limited tier with
/// path-loss exponent 4: `1/(1 + sqrt(b) (pi/2 - arctan(1/sqrt(b))))`.
pub fn nearest_rayleigh_eps4(beta: f64) -> f64 {
    let r = beta.sqrt();
    1.0 / (1.0 + r * (0.5 * PI - (1.0 / r).atan()))
}

/// Laplace transform of the interference of a homogeneous PPP with Rayleigh
/// fading and path-loss exponent 4 at unit power: `exp(-lambda pi^2 sqrt(s)/2)`.
pub fn rayleigh_eps4_interference_laplace(lambda: f64, s: f64) -> f64 {
    (-lambda * PI * PI * s.sqrt() / 2.0).exp()
}
