use num_complex::Complex64;

use super::gamma::gamma_fn;
use crate::error::{Error, Result};

/// Below this modulus the lower-series route is used; above it the Legendre
/// continued fraction.
const SERIES_RADIUS: f64 = 2.5;
const MAX_ITER: usize = 20_000;

fn check_args(func: &'static str, a: f64, z: Complex64) -> Result<()> {
    if !a.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(func, "non-finite argument"));
    }
    if z.re < 0.0 {
        return Err(Error::domain(func, format!("re(z)={} is negative", z.re)));
    }
    Ok(())
}

/// `sum_n (-z)^n / (n! (a+n))`, so that `gamma(a, z) = z^a` times this sum.
fn lower_sum(a: f64, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term / a;
    let zabs = z.norm();
    for n in 1..MAX_ITER {
        term *= -z / n as f64;
        let t = term / (a + n as f64);
        sum += t;
        if (n as f64) > zabs && t.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Lower incomplete gamma `gamma(a, z) = int_0^z t^(a-1) e^-t dt`, continued
/// analytically in `a` (so negative non-integer `a` is allowed).
pub fn gamma_lower_inc(a: f64, z: Complex64) -> Result<Complex64> {
    check_args("gamma_lower_inc", a, z)?;
    if a <= 0.0 && a == a.floor() {
        return Err(Error::domain(
            "gamma_lower_inc",
            format!("a={a} is a nonpositive integer"),
        ));
    }
    if z == Complex64::new(0.0, 0.0) {
        return if a > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::domain("gamma_lower_inc", "z=0 with a<=0 diverges"))
        };
    }
    Ok(z.powf(a) * lower_sum(a, z))
}

/// Upper incomplete gamma `Gamma(a, z) = int_z^inf t^(a-1) e^-t dt` for real
/// `a` and complex `z` with `re(z) >= 0`.
pub fn gamma_upper_inc(a: f64, z: Complex64) -> Result<Complex64> {
    check_args("gamma_upper_inc", a, z)?;
    let zero = Complex64::new(0.0, 0.0);
    if z == zero {
        return if a > 0.0 {
            Ok(Complex64::new(gamma_fn(a)?, 0.0))
        } else {
            Err(Error::domain("gamma_upper_inc", "z=0 with a<=0 diverges"))
        };
    }
    let integer_a = a <= 0.0 && a == a.floor();
    if z.norm() < SERIES_RADIUS && !integer_a {
        return Ok(gamma_fn(a)? - z.powf(a) * lower_sum(a, z));
    }
    if z.re > 745.0 {
        return Ok(zero);
    }
    continued_fraction(a, z)
}

/// Modified Lentz evaluation of Legendre's continued fraction.
fn continued_fraction(a: f64, z: Complex64) -> Result<Complex64> {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = z + 1.0 - a;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..MAX_ITER {
        let nf = n as f64;
        let an = -nf * (nf - a);
        let bn = z + (2.0 * nf + 1.0 - a);
        d = bn + an * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = bn + an / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Ok((-z).exp() * z.powf(a) / f);
        }
    }
    Err(Error::NonConvergence {
        what: "incomplete gamma continued fraction",
        error: f64::NAN,
        tolerance: 1e-16,
    })
}

/// `Gamma(1-a) + a Gamma(-a, z)` for `a` in `(0,1)`, which equals
/// `-a gamma(-a, z)`; near the origin the lower series avoids the
/// cancellation between the two terms.
pub(crate) fn lower_bracket(a: f64, z: Complex64) -> Result<Complex64> {
    if z.norm() < SERIES_RADIUS {
        Ok(-a * z.powf(-a) * lower_sum(-a, z))
    } else {
        Ok(gamma_fn(1.0 - a)? + a * gamma_upper_inc(-a, z)?)
    }
}
