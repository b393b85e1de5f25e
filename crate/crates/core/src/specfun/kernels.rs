use num_complex::Complex64;

use super::gamma::gamma_fn;
use crate::error::{Error, Result};

/// `G(j w, a) = int_0^inf (1 - e^(j w t)) a t^(-1-a) dt = Gamma(1-a) (-j w)^a`.
///
/// The real part is nonnegative because `1 - cos` is; the imaginary part has
/// the sign of `-w`.
pub fn g_kernel(omega: f64, a: f64) -> Result<Complex64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("g_kernel", format!("a={a} outside (0, 1)")));
    }
    if omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let half = 0.5 * std::f64::consts::PI * a;
    let m = gamma_fn(1.0 - a)? * omega.abs().powf(a);
    Ok(Complex64::new(m * half.cos(), -omega.signum() * m * half.sin()))
}

/// Unnormalised sinc, `sin(x)/x`.
pub fn sinc_fn(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}
