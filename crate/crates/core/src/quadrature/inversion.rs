use std::f64::consts::PI;

use num_complex::Complex64;

use super::adaptive::integrate;
use super::gauss::gauss_legendre;
use super::wynn::wynn_epsilon;
use super::Estimate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// Absolute tolerance on the returned probability.
    pub abs_tol: f64,
    /// Truncation radius of the frequency integral, in units of
    /// `max(scale, pi/t)`.
    pub omega_max: f64,
    /// Gauss-Legendre nodes per half-period panel.
    pub panel_nodes: usize,
    /// Bisection budget of each adaptive segment near the origin.
    pub max_subdivisions: usize,
    /// Integrate over negative frequencies too instead of using conjugate
    /// symmetry; only useful as a self-check.
    pub full_range: bool,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            omega_max: 1e4,
            panel_nodes: 64,
            max_subdivisions: 200,
            full_range: false,
        }
    }
}

impl InversionOptions {
    /// Copy with the absolute tolerance scaled by `mass`.
    pub fn relative_to(&self, mass: f64) -> Self {
        Self {
            abs_tol: (self.abs_tol * mass).max(f64::MIN_POSITIVE),
            ..*self
        }
    }
}

/// Gil-Pelaez inversion for a nonnegative variable `Y` restricted to an
/// event `A`: given `phi(w) = E[exp(j w Y) 1_A]` and `mass = P(A)`, returns
/// `P(Y <= t, A) = mass/2 - (1/pi) int_0^inf Im[exp(-j w t) phi(w)] / w dw`.
///
/// `scale` is a frequency beyond which `|phi|` has decayed appreciably; the
/// first stretch `[0, scale]` (or up to the first half period of the kernel)
/// is integrated adaptively, the remainder in half-period panels whose
/// partial sums are extrapolated with Wynn's epsilon algorithm.
pub fn cdf_from_cf<F>(mut phi: F, mass: f64, t: f64, scale: f64, opts: &InversionOptions) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    if t <= 0.0 || mass == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(
            "cdf_from_cf",
            format!("frequency scale {scale} must be positive"),
        ));
    }
    let tol = opts.abs_tol * PI;
    let pos = one_sided(&mut phi, t, scale, opts, 1.0, tol)?;
    let integral = if opts.full_range {
        let neg = one_sided(&mut phi, t, scale, opts, -1.0, tol)?;
        Estimate {
            value: 0.5 * (pos.value + neg.value),
            error: 0.5 * (pos.error + neg.error),
        }
    } else {
        pos
    };
    Ok(Estimate {
        value: 0.5 * mass - integral.value / PI,
        error: integral.error / PI,
    })
}

fn one_sided<F>(phi: &mut F, t: f64, scale: f64, opts: &InversionOptions, sign: f64, tol: f64) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    let mut g = |x: f64| {
        let w = sign * x;
        (Complex64::from_polar(1.0, -w * t) * phi(w)).im / w
    };
    let h = PI / t;
    let mut acc = 0.0;
    let mut err = 0.0;

    let seg_tol = 0.05 * tol;
    let (mut a, mut b) = (0.0, h.min(scale));
    loop {
        let r = integrate(&mut g, a, b, seg_tol, 0.0, opts.max_subdivisions);
        if !r.converged {
            return Err(Error::NonConvergence {
                what: "inversion integral near the origin",
                error: r.error / PI,
                tolerance: seg_tol / PI,
            });
        }
        acc += r.value;
        err += r.error;
        if b >= h {
            break;
        }
        a = b;
        b = (2.0 * b).min(h);
    }

    let rule = gauss_legendre(opts.panel_nodes);
    let cap = opts.omega_max * scale.max(h);
    let mut sums = vec![acc];
    let mut prev_est = f64::NAN;
    let mut quiet = 0;
    let mut k = 1usize;
    loop {
        let lo = k as f64 * h;
        let mut panel = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            panel += w * g(lo + 0.5 * h * (x + 1.0));
        }
        panel *= 0.5 * h;
        acc += panel;
        sums.push(acc);
        if panel.abs() <= 1e-3 * tol {
            quiet += 1;
            if quiet >= 3 {
                return Ok(Estimate {
                    value: acc,
                    error: err + panel.abs(),
                });
            }
        } else {
            quiet = 0;
        }
        if sums.len() >= 5 {
            let window = &sums[sums.len().saturating_sub(40)..];
            let (est, werr) = wynn_epsilon(window);
            let drift = (est - prev_est).abs();
            if werr < 0.5 * tol && drift < 0.5 * tol {
                return Ok(Estimate {
                    value: est,
                    error: err + werr + drift,
                });
            }
            prev_est = est;
        }
        if lo + h > cap {
            let (est, werr) = wynn_epsilon(&sums[sums.len().saturating_sub(40)..]);
            return Err(Error::NonConvergence {
                what: "inversion integral tail",
                error: (err + werr.min((est - acc).abs().max(panel.abs()))) / PI,
                tolerance: tol / PI,
            });
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> InversionOptions {
        InversionOptions {
            abs_tol: 1e-10,
            ..Default::default()
        }
    }

    #[test]
    fn exponential_cdf() {
        // Y ~ Exp(1): phi(w) = 1/(1 - j w).
        let phi = |w: f64| Complex64::new(1.0, 0.0) / Complex64::new(1.0, -w);
        for &t in &[0.01, 0.3, 1.0, 4.0, 30.0] {
            let r = cdf_from_cf(phi, 1.0, t, 1.0, &opts()).unwrap();
            let exact = 1.0 - (-t).exp();
            assert!((r.value - exact).abs() < 1e-9, "t={t}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn levy_cdf_with_heavy_tail() {
        // Levy(0, c): phi(w) = exp(-sqrt(-2 j c w)), cdf = erfc(sqrt(c/(2t))).
        let c = 1.0;
        let phi = |w: f64| (-(Complex64::new(0.0, -2.0 * c * w)).sqrt()).exp();
        for &t in &[0.1, 1.0, 10.0, 1000.0] {
            let r = cdf_from_cf(phi, 1.0, t, 1.0, &opts()).unwrap();
            let exact = statrs::function::erf::erfc((c / (2.0 * t)).sqrt());
            assert!((r.value - exact).abs() < 1e-8, "t={t}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn full_and_half_range_agree() {
        let phi = |w: f64| (-(Complex64::new(0.0, -2.0 * w)).sqrt()).exp() * 0.7;
        let half = cdf_from_cf(phi, 0.7, 2.0, 1.0, &opts()).unwrap();
        let full = cdf_from_cf(
            phi,
            0.7,
            2.0,
            1.0,
            &InversionOptions {
                full_range: true,
                ..opts()
            },
        )
        .unwrap();
        assert!((half.value - full.value).abs() < 1e-12);
    }
}
