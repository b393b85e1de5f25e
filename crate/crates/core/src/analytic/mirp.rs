//! Max-instantaneous-received-power association, and the single-winner
//! regime where every threshold is at least 1.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{clamp_probability, QuadratureSpec};
use crate::equivalence::{mirp_1d_densities, same_eps_reduction, MirpEquivalent};
use crate::error::{Error, Result};
use crate::model::{CoverageReport, HetNetScenario};
use crate::quadrature::{cdf_from_cf, integrate, power_sum_root, Estimate};
use crate::specfun::{g_kernel, gamma_fn, hyp1f1, sinc_fn};

type Terms = Vec<(f64, f64)>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(c/a, a)` pairs of a set of one-dimensional images, so that the mean
/// number of points in `[0, x]` is `sum (c/a) x^a`.
pub(crate) fn cumulative_terms(eq: &MirpEquivalent) -> (Terms, Terms) {
    let conv = |d: &crate::equivalence::RadialDensity| {
        d.terms
            .iter()
            .map(|t| (t.coefficient / t.delta(), t.delta()))
            .collect::<Vec<_>>()
    };
    // One entry per open tier, so indices line up even for empty tiers.
    let open = eq
        .open
        .iter()
        .map(|d| conv(d).first().copied().unwrap_or((0.0, 1.0)))
        .collect();
    let closed = conv(&eq.closed);
    (open, closed)
}

fn common_delta(terms: &[(f64, f64)]) -> Option<f64> {
    let mut live = terms.iter().filter(|t| t.0 != 0.0);
    let a = live.next()?.1;
    live.all(|t| t.1 == a).then_some(a)
}

/// Probability that the strongest received signal comes from each open tier.
pub fn tier_pmf_mirp(sc: &HetNetScenario) -> Result<Vec<f64>> {
    sc.check()?;
    let (open, _) = cumulative_terms(&mirp_1d_densities(sc));
    Ok(nearest_point_pmf(&open))
}

/// For independent processes on the half-line with cumulative intensities
/// `c_k x^a_k`, the probability that the point closest to the origin
/// belongs to each.
pub(crate) fn nearest_point_pmf(terms: &[(f64, f64)]) -> Vec<f64> {
    let tol = 1e-12;
    let equal = common_delta(terms);
    let total: f64 = terms.iter().map(|t| t.0).sum();
    terms
        .iter()
        .map(|&(ck, ak)| {
            if ck == 0.0 {
                return 0.0;
            }
            if equal.is_some() {
                return ck / total;
            }
            let y_max = power_sum_root(terms, 46.0).powf(ak);
            let r = integrate(
                |y: f64| {
                    let x = y.powf(1.0 / ak);
                    (-terms.iter().map(|&(c, a)| c * x.powf(a)).sum::<f64>()).exp()
                },
                0.0,
                y_max,
                tol,
                tol,
                200,
            );
            ck * r.value
        })
        .collect()
}

/// Coverage under max-instantaneous-power association for arbitrary
/// exponents: per tier, the transform of `x (I_rest + eta)` jointly with
/// "tier k is strongest" is inverted at `1/beta_k`.
pub fn coverage_mirp(sc: &HetNetScenario, quad: &QuadratureSpec) -> Result<CoverageReport> {
    sc.check()?;
    quad.check()?;
    let eq = mirp_1d_densities(sc);
    let (open, closed) = cumulative_terms(&eq);
    let pmf = tier_pmf_mirp(sc)?;
    let tol = quad.radial_rel_tol;
    let inner = quad.inner_tol();
    let eta = sc.noise;
    let x_typ = power_sum_root(&open, 1.0);
    let scale = 1.0 / (1.0 + eta * x_typ);
    let opts = quad.inversion(0.1 * tol / sc.k() as f64);
    let shortcut = eta == 0.0
        && common_delta(&open).is_some()
        && common_delta(&[open.as_slice(), closed.as_slice()].concat()).is_some();

    let mut tiers = Vec::with_capacity(sc.k());
    let mut total = 0.0;
    let mut err = 0.0;
    for (k, d) in eq.open.iter().enumerate() {
        let Some(t) = d.terms.first() else {
            tiers.push(0.0);
            continue;
        };
        let (ck, ak) = (t.coefficient / t.delta(), t.delta());
        let mut failure = None;
        let mut phi = |w: f64| -> Complex64 {
            match transform_strongest(&open, &closed, ck, ak, eta, w, shortcut, inner) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    ZERO
                }
            }
        };
        let est = cdf_from_cf(&mut phi, pmf[k], 1.0 / sc.open_tiers[k].sinr_threshold, scale, &opts)?;
        if let Some(e) = failure {
            return Err(e);
        }
        tiers.push(est.value);
        total += est.value;
        err += est.error;
    }
    let p = clamp_probability(total, err, tol, "coverage probability outside [0, 1]")?;
    Ok(CoverageReport::analytic(p, err, tiers, "mirp-general"))
}

/// `E[exp(j w x (I_rest + eta)); tier k strongest]`.
#[allow(clippy::too_many_arguments)]
fn transform_strongest(
    open: &[(f64, f64)],
    closed: &[(f64, f64)],
    ck: f64,
    ak: f64,
    eta: f64,
    w: f64,
    shortcut: bool,
    tol: f64,
) -> Result<Complex64> {
    let jw = Complex64::new(0.0, w);
    let mut coef = Vec::with_capacity(open.len() + closed.len());
    for &(c, a) in open {
        coef.push((c * hyp1f1(-a, 1.0 - a, jw)?, a));
    }
    for &(c, a) in closed {
        coef.push((c * g_kernel(w, a)?, a));
    }
    if shortcut {
        let sum: Complex64 = coef.iter().map(|t| t.0).sum();
        return Ok(ck / sum);
    }
    let re: Vec<(f64, f64)> = coef.iter().map(|t| (t.0.re, t.1)).collect();
    let y_max = power_sum_root(&re, 46.0).powf(ak);
    let out = integrate(
        |y: f64| {
            let x = y.powf(1.0 / ak);
            let mut e = jw * eta * x;
            for &(c, a) in &coef {
                e -= c * x.powf(a);
            }
            e.exp()
        },
        0.0,
        y_max,
        tol * 1e-2,
        tol,
        200,
    );
    Ok(ck * out.value)
}

/// Coverage under max-instantaneous-power association when all tiers share
/// one path-loss exponent, via the two-tier normal form. The law of the
/// normalised interference does not depend on the serving tier, so one
/// inversion per distinct threshold suffices.
pub fn coverage_mirp_same_eps(sc: &HetNetScenario, quad: &QuadratureSpec) -> Result<CoverageReport> {
    sc.check()?;
    quad.check()?;
    if let Some(r) = super::no_open_stations(sc) {
        return Ok(r);
    }
    let red = same_eps_reduction(sc)?;
    let eps = sc.common_exponent().unwrap_or(f64::NAN);
    let a = 2.0 / eps;
    let tol = quad.radial_rel_tol;
    let inner = quad.inner_tol();
    let eta = red.noise;
    let lc = red.closed_density;
    let x_typ = PI.powf(-eps / 2.0);
    let scale = 1.0 / (1.0 + eta * x_typ);
    let opts = quad.inversion(0.1 * tol);

    let h = |w: f64| -> Result<Complex64> {
        let d = hyp1f1(-a, 1.0 - a, Complex64::new(0.0, w))? + lc * g_kernel(w, a)?;
        if eta == 0.0 {
            return Ok(1.0 / d);
        }
        let y_max = 46.0 / d.re;
        let jw = Complex64::new(0.0, w);
        let out = integrate(
            |y: f64| (jw * eta * (y / PI).powf(eps / 2.0) - y * d).exp(),
            0.0,
            y_max,
            inner * 1e-2,
            inner,
            200,
        );
        Ok(out.value)
    };

    let weights: Vec<f64> = sc.open_tiers.iter().map(|t| t.weight()).collect();
    let total_w: f64 = weights.iter().sum();
    let mut cache: HashMap<u64, Estimate> = HashMap::new();
    let mut tiers = Vec::with_capacity(sc.k());
    let (mut p, mut err) = (0.0, 0.0);
    for (t, w) in sc.open_tiers.iter().zip(&weights) {
        let key = t.sinr_threshold.to_bits();
        let est = match cache.get(&key) {
            Some(e) => *e,
            None => {
                let mut failure = None;
                let e = cdf_from_cf(
                    |w| match h(w) {
                        Ok(v) => v,
                        Err(e) => {
                            failure.get_or_insert(e);
                            ZERO
                        }
                    },
                    1.0,
                    1.0 / t.sinr_threshold,
                    scale,
                    &opts,
                )?;
                if let Some(e) = failure {
                    return Err(e);
                }
                cache.insert(key, e);
                e
            }
        };
        let share = w / total_w;
        tiers.push(share * est.value);
        p += share * est.value;
        err += share * est.error;
    }
    let p = clamp_probability(p, err, tol, "coverage probability outside [0, 1]")?;
    Ok(CoverageReport::analytic(p, err, tiers, "mirp-equal-exponent"))
}

/// Coverage when every open tier's threshold is at least 1, so that at most
/// one BS can exceed its threshold and max-SINR, max-power and any-BS
/// coverage coincide.
pub fn coverage_beta_ge1(sc: &HetNetScenario, quad: &QuadratureSpec) -> Result<CoverageReport> {
    sc.check()?;
    quad.check()?;
    if let Some(i) = sc.open_tiers.iter().position(|t| t.sinr_threshold < 1.0) {
        return Err(Error::domain(
            "coverage_beta_ge1",
            format!(
                "open_tiers[{i}] has threshold {} below 1",
                sc.open_tiers[i].sinr_threshold
            ),
        ));
    }
    let eq = mirp_1d_densities(sc);
    let (open, closed) = cumulative_terms(&eq);
    let tol = quad.radial_rel_tol;
    let eta = sc.noise;
    let all: Vec<(f64, f64)> = open.iter().chain(&closed).copied().collect();
    let equal = eta == 0.0 && common_delta(&all).is_some();

    let mut tiers = Vec::with_capacity(sc.k());
    let (mut p, mut err) = (0.0, 0.0);
    for (d, tier) in eq.open.iter().zip(&sc.open_tiers) {
        let Some(t) = d.terms.first() else {
            tiers.push(0.0);
            continue;
        };
        let (ck, ak) = (t.coefficient, t.delta());
        let beta = tier.sinr_threshold;
        if equal {
            let sum: f64 = all.iter().map(|t| t.0 * t.1).sum();
            let v = ck * sinc_fn(PI * ak) * beta.powf(-ak) / sum;
            tiers.push(v);
            p += v;
            continue;
        }
        let mut terms = Vec::with_capacity(all.len());
        for &(c, a) in &all {
            terms.push((c * gamma_fn(1.0 - a)? * beta.powf(a), a));
        }
        let y_max = power_sum_root(&terms, 46.0).powf(ak);
        let pref = ck / (ak * gamma_fn(1.0 + ak)?);
        let out = integrate(
            |y: f64| {
                let x = y.powf(1.0 / ak);
                (-eta * beta * x - terms.iter().map(|&(c, a)| c * x.powf(a)).sum::<f64>()).exp()
            },
            0.0,
            y_max,
            0.01 * tol / (pref * sc.k() as f64),
            0.0,
            quad.max_subdivisions,
        );
        if !out.converged {
            return Err(Error::NonConvergence {
                what: "single-winner radial integral",
                error: out.error * pref,
                tolerance: 0.01 * tol,
            });
        }
        tiers.push(pref * out.value);
        p += pref * out.value;
        err += pref * out.error;
    }
    let p = clamp_probability(p, err, tol, "coverage probability outside [0, 1]")?;
    Ok(CoverageReport::analytic(p, err, tiers, "single-winner"))
}
