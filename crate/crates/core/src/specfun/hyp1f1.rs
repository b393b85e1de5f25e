use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::gamma::{gamma_fn, rgamma};
use crate::error::{Error, Result};

/// Beyond this modulus the asymptotic expansion is accurate to working
/// precision; below it the series is summed in double-double arithmetic.
const ASYMPTOTIC_RADIUS: f64 = 40.0;
const MAX_TERMS: usize = 4_000;

/// Kummer's confluent hypergeometric function `1F1(a; b; z)`.
pub fn hyp1f1(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    if b <= 0.0 && b == b.floor() {
        return Err(Error::domain("hyp1f1", format!("b={b} is a nonpositive integer")));
    }
    if !(a.is_finite() && b.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("hyp1f1", "non-finite argument"));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z.norm() > ASYMPTOTIC_RADIUS {
        return asymptotic(a, b, z);
    }
    if z.re < 0.0 {
        // Kummer's transformation moves the argument into re(z) > 0, where
        // the series terms do not alternate in sign.
        return Ok(z.exp() * series(b - a, b, -z)?);
    }
    series(a, b, z)
}

fn series(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let zabs = z.norm();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let num = Dd::from_f64(a).add_f64(nf);
        let den = Dd::from_f64(b).add_f64(nf).mul_f64(nf + 1.0);
        term = term.scale(num.div(den)).mul_c64(z);
        sum = sum.add(term);
        let t = term.norm_approx();
        if t == 0.0 || (nf > zabs && t <= 1e-18 * sum.norm_approx()) {
            return Ok(sum.to_c64());
        }
    }
    Err(Error::NonConvergence {
        what: "1F1 power series",
        error: term.norm_approx(),
        tolerance: 1e-18,
    })
}

/// Sums an asymptotic series `sum_s c_s`, with `ratio(s) = c_{s+1}/c_s`,
/// stopping at its smallest term.
fn optimally_truncated(ratio: impl Fn(f64) -> Complex64) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = 1.0;
    for s in 0..MAX_TERMS {
        let next = term * ratio(s as f64);
        let n = next.norm();
        if n >= last {
            break;
        }
        term = next;
        sum += term;
        last = n;
        if n <= 1e-17 * sum.norm() {
            break;
        }
    }
    (sum, last)
}

fn asymptotic(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    let gb = gamma_fn(b)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    let ra = rgamma(a);
    if ra != 0.0 {
        let (s1, e1) = optimally_truncated(|s| (1.0 - a + s) * (b - a + s) / ((s + 1.0) * z));
        let pre = z.exp() * z.powf(a - b) * ra;
        total += pre * s1;
        tail += (pre.norm()) * e1;
    }
    let rba = rgamma(b - a);
    if rba != 0.0 {
        let (s2, e2) = optimally_truncated(|s| (a + s) * (a - b + 1.0 + s) / ((s + 1.0) * -z));
        let pre = (-z).powf(-a) * rba;
        total += pre * s2;
        tail += pre.norm() * e2;
    }
    let value = total * gb;
    if tail * gb.abs() > 1e-10 * value.norm() {
        return Err(Error::NonConvergence {
            what: "1F1 asymptotic expansion",
            error: tail * gb.abs(),
            tolerance: 1e-10 * value.norm(),
        });
    }
    Ok(value)
}
