use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// `2F1(1, a; 1+a; x)` for `a` in `(0, 1)` and real `x < 1`.
///
/// On `[-1, 1)` the Euler integral `a int_0^1 t^(a-1) / (1 - x t) dt` is
/// evaluated after the substitution `t = u^(1/a)`, which removes the
/// endpoint singularity. For `x < -1` the Pfaff transformation
/// `2F1(1, a; 1+a; x) = (1-x)^-1 2F1(1, 1; 1+a; x/(x-1))` maps the argument
/// into `(1/2, 1)`, where the corresponding Euler integral is regular.
pub fn hyp2f1_special(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("hyp2f1_special", format!("a={a} outside (0, 1)")));
    }
    if !(x < 1.0) || x.is_nan() {
        return Err(Error::domain("hyp2f1_special", format!("x={x} must be below 1")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let inv_a = 1.0 / a;
    let (value, scale) = if x >= -1.0 {
        let r = integrate(|u: f64| 1.0 / (1.0 - x * u.powf(inv_a)), 0.0, 1.0, 1e-16, 1e-13, 500);
        (r, 1.0)
    } else {
        let w = x / (x - 1.0);
        let r = integrate(
            |v: f64| 1.0 / (1.0 - w * (1.0 - v.powf(inv_a))),
            0.0,
            1.0,
            1e-16,
            1e-13,
            500,
        );
        (r, 1.0 / (1.0 - x))
    };
    if !value.converged {
        return Err(Error::NonConvergence {
            what: "2F1 Euler integral",
            error: value.error,
            tolerance: 1e-13,
        });
    }
    Ok(value.value * scale)
}
