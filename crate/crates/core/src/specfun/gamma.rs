use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(a: f64) -> bool {
    a <= 0.0 && a == a.floor()
}

/// Lanczos series for `x >= 0.5`; returns `(t, series)` with
/// `Gamma(x) = sqrt(2 pi) t^(x-1/2) e^-t series`.
fn lanczos(x: f64) -> (f64, f64) {
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    (x + LANCZOS_G + 0.5, acc)
}

/// Euler's gamma function.
pub fn gamma_fn(a: f64) -> Result<f64> {
    if a.is_nan() || is_pole(a) {
        return Err(Error::domain("gamma_fn", format!("pole or NaN at a={a}")));
    }
    Ok(gamma_unchecked(a))
}

fn gamma_unchecked(a: f64) -> f64 {
    if a < 0.5 {
        PI / ((PI * a).sin() * gamma_unchecked(1.0 - a))
    } else if a > 171.7 {
        f64::INFINITY
    } else {
        let (t, s) = lanczos(a);
        (2.0 * PI).sqrt() * t.powf(a - 0.5) * (-t).exp() * s
    }
}

/// `ln |Gamma(a)|`.
pub fn ln_gamma(a: f64) -> Result<f64> {
    if a.is_nan() || is_pole(a) {
        return Err(Error::domain("ln_gamma", format!("pole or NaN at a={a}")));
    }
    if a < 0.5 {
        let s = (PI * a).sin().abs();
        return Ok(PI.ln() - s.ln() - ln_gamma(1.0 - a)?);
    }
    let (t, s) = lanczos(a);
    Ok(0.5 * (2.0 * PI).ln() + (a - 0.5) * t.ln() - t + s.ln())
}

/// `1/Gamma(a)`, zero at the poles.
pub fn rgamma(a: f64) -> f64 {
    if is_pole(a) {
        0.0
    } else {
        1.0 / gamma_unchecked(a)
    }
}
