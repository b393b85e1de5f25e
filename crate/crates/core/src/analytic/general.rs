//! Coverage for max-SINR and nearest-BS association with arbitrary tiers.
//!
//! Both rules are decomposed by the value `u` of the largest
//! threshold-weighted signal `gamma_k P_k Psi R^-eps` and the tier `k` that
//! attains it. The mobile is covered exactly when the remaining received
//! power stays below `u/(1+beta_k) - eta`, a distribution function recovered
//! from the joint transform by Gil-Pelaez inversion; an outer adaptive
//! integral in `log u` sums the contributions.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::laplace::{full_plane_exponent, maxsinr_exponent, maxsinr_rate, NearestTier};
use super::{clamp_probability, QuadratureSpec};
use crate::error::{Error, Result};
use crate::model::{ConnectivityModel, CoverageReport, HetNetScenario};
use crate::quadrature::{cdf_from_cf, integrate, power_sum_root};
use crate::specfun::gamma_fn;

/// Coverage under max-SINR or nearest-BS association by transform inversion.
///
/// Works for any fading law, exponents, thresholds and noise, at the cost of
/// one inversion per tier and outer node. The report carries no per-tier
/// breakdown.
pub fn coverage_general(
    sc: &HetNetScenario,
    model: &ConnectivityModel,
    quad: &QuadratureSpec,
) -> Result<CoverageReport> {
    sc.check()?;
    quad.check()?;
    let nearest = match model {
        ConnectivityModel::MaxSinr => false,
        ConnectivityModel::NearestBs => true,
        other => {
            return Err(Error::Unsupported(format!(
                "inversion route covers maxsinr and nearest, not {}",
                other.name()
            )))
        }
    };
    if let Some(r) = super::no_open_stations(sc) {
        return Ok(r);
    }
    let tol = quad.radial_rel_tol;
    let scale = frequency_scale(sc)?;
    // Inversion errors are weighted by the signal-level density, so each
    // one is held relative to the mass it inverts.
    let opts = quad.inversion(0.1 * tol);
    let (v_lo, v_hi) = log_u_range(sc, tol, nearest);

    let tiers: Vec<NearestTier> = if nearest {
        sc.open_tiers.iter().map(NearestTier::new).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let inner = quad.inner_tol();
    let mut failure: Option<Error> = None;

    let integrand = |v: f64| -> Result<f64> {
        let u = v.exp();
        let mut sum = 0.0;
        if nearest {
            for (k, tk) in tiers.iter().enumerate() {
                let t = u / (1.0 + sc.open_tiers[k].sinr_threshold) - sc.noise;
                if t <= 0.0 {
                    continue;
                }
                let phi = |s: Complex64| -> Result<Complex64> {
                    let mut p =
                        tk.dq_unshifted(s, u, inner)? * (-full_plane_exponent(sc.closed_tiers.iter(), s)?).exp();
                    for (l, tl) in tiers.iter().enumerate() {
                        if l != k {
                            p *= tl.q(s, u, inner)?;
                        }
                    }
                    Ok(p)
                };
                let mass = phi(Complex64::new(0.0, 0.0))?.re;
                if !(mass > 1e-300) {
                    continue;
                }
                let f = invert(&phi, mass, t, scale, &opts.relative_to(mass))?;
                sum += u * f;
            }
        } else {
            let phi = |s: Complex64| -> Result<Complex64> { Ok((-maxsinr_exponent(sc, s, u)?).exp()) };
            let mass = phi(Complex64::new(0.0, 0.0))?.re;
            if mass > 1e-300 {
                for t in &sc.open_tiers {
                    let th = u / (1.0 + t.sinr_threshold) - sc.noise;
                    if th <= 0.0 {
                        continue;
                    }
                    let f = invert(&phi, mass, th, scale, &opts.relative_to(mass))?;
                    sum += u * maxsinr_rate(t, u) * f;
                }
            }
        }
        Ok(sum)
    };

    let out = integrate(
        |v| match integrand(v) {
            Ok(x) => x,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        v_lo,
        v_hi,
        0.3 * tol,
        0.0,
        quad.max_subdivisions,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !out.converged {
        return Err(Error::NonConvergence {
            what: "outer signal-level integral",
            error: out.error,
            tolerance: 0.3 * tol,
        });
    }
    let p = clamp_probability(out.value, out.error, tol, "coverage probability outside [0, 1]")?;
    let tag = if nearest {
        "nearest-inversion"
    } else {
        "maxsinr-inversion"
    };
    Ok(CoverageReport::analytic(p, out.error, Vec::new(), tag))
}

fn invert<F>(phi: &F, mass: f64, t: f64, scale: f64, opts: &crate::quadrature::InversionOptions) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut failure = None;
    let est = cdf_from_cf(
        |w| match phi(Complex64::new(0.0, -w)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        mass,
        t,
        scale,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value)
}

/// Frequency at which the whole-plane interference transform has decayed by
/// a factor `e`.
pub(crate) fn frequency_scale(sc: &HetNetScenario) -> Result<f64> {
    let mut terms = Vec::new();
    for t in sc.tiers() {
        let a = t.delta();
        let c = t.density * PI * t.power.powf(a) * t.fading_delta_moment() * gamma_fn(1.0 - a)? * (0.5 * PI * a).cos();
        if c > 0.0 {
            terms.push((c, a));
        }
    }
    let w = power_sum_root(&terms, 1.0);
    if !w.is_finite() {
        return Err(Error::domain("coverage_general", "network has no base stations"));
    }
    Ok(w)
}

/// Range of `log u` outside which the integrand is negligible.
fn log_u_range(sc: &HetNetScenario, tol: f64, nearest: bool) -> (f64, f64) {
    // sum_k c_k u^-a_k is both minus the log of the probability that no
    // signal exceeds u, and the mass of signal levels above u.
    let mut terms = Vec::new();
    for t in &sc.open_tiers {
        let a = t.delta();
        let c = t.density * PI * (t.gamma() * t.power).powf(a) * t.fading_delta_moment();
        if c > 0.0 {
            terms.push((c, a));
        }
    }
    // The tier-nearest maximum has a heavier lower tail.
    let mut u_lo = 1.0 / power_sum_root(&terms, 45.0);
    if nearest {
        u_lo *= 1e-4;
    }
    let u_hi = 1.0 / power_sum_root(&terms, 1e-3 * tol);
    (u_lo.ln(), u_hi.ln())
}
