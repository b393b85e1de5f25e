//! Max-biased-received-power association with exponential fading.

use std::f64::consts::PI;

use super::mirp::nearest_point_pmf;
use super::{clamp_probability, QuadratureSpec};
use crate::equivalence::mbrp_1d_densities;
use crate::error::{Error, Result};
use crate::model::{ConnectivityModel, CoverageReport, FadingDistribution, HetNetScenario};
use crate::quadrature::{integrate, power_sum_root};
use crate::specfun::{gamma_fn, hyp2f1_special, sinc_fn};

/// `1/sinc(2 pi/eps) + q^(-2/eps) [1 - 2F1(1, 2/eps; 1 + 2/eps; -1/q)]`.
///
/// Interference from a Rayleigh-faded tier whose stations are kept out of a
/// disk, relative to the disk's own area; `q` is the ratio of the serving
/// station's biased power to that of the excluded region's boundary, scaled
/// by the threshold.
pub fn f_kernel(q: f64, eps: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain("f_kernel", format!("q={q} must be positive")));
    }
    if !(eps > 2.0) {
        return Err(Error::domain("f_kernel", format!("eps={eps} must exceed 2")));
    }
    let a = 2.0 / eps;
    Ok(1.0 / sinc_fn(PI * a) + q.powf(-a) * (1.0 - hyp2f1_special(a, -1.0 / q)?))
}

fn check_inputs(sc: &HetNetScenario, biases: &[f64]) -> Result<()> {
    sc.check()?;
    ConnectivityModel::Mbrp {
        biases: biases.to_vec(),
    }
    .check(sc)?;
    if let Some(i) = sc.open_tiers.iter().position(|t| !t.fading.is_exponential()) {
        return Err(Error::Unsupported(format!(
            "open_tiers[{i}]: biased-association formula needs exponential fading"
        )));
    }
    Ok(())
}

/// Probability that each open tier serves under biased association.
pub fn tier_pmf_mbrp(sc: &HetNetScenario, biases: &[f64]) -> Result<Vec<f64>> {
    sc.check()?;
    ConnectivityModel::Mbrp {
        biases: biases.to_vec(),
    }
    .check(sc)?;
    let eq = mbrp_1d_densities(sc, biases)?;
    let terms: Vec<(f64, f64)> = eq
        .open
        .iter()
        .map(|d| {
            d.terms
                .first()
                .map(|t| (t.coefficient / t.delta(), t.delta()))
                .unwrap_or((0.0, 1.0))
        })
        .collect();
    Ok(nearest_point_pmf(&terms))
}

/// Density of the serving station's image `x = R^eps / (P E[Psi] B)` and
/// tier `k`: `c_k x^(a_k - 1) exp(-sum_l (c_l/a_l) x^a_l)`.
pub fn serving_joint_density_mbrp(sc: &HetNetScenario, biases: &[f64], k: usize, x: f64) -> Result<f64> {
    sc.check()?;
    ConnectivityModel::Mbrp {
        biases: biases.to_vec(),
    }
    .check(sc)?;
    if k >= sc.k() {
        return Err(Error::domain(
            "serving_joint_density_mbrp",
            format!("tier {k} out of range"),
        ));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("serving_joint_density_mbrp", "x must be nonnegative"));
    }
    let eq = mbrp_1d_densities(sc, biases)?;
    let Some(t) = eq.open[k].terms.first() else {
        return Ok(0.0);
    };
    let void: f64 = eq.open.iter().map(|d| d.cumulative(x)).sum();
    Ok(t.coefficient * x.powf(t.exponent) * (-void).exp())
}

/// Coverage under biased average-power association, exact when every open
/// tier has exponential fading. Closed tiers may have any fading.
pub fn coverage_mbrp_exp(sc: &HetNetScenario, biases: &[f64], quad: &QuadratureSpec) -> Result<CoverageReport> {
    check_inputs(sc, biases)?;
    quad.check()?;
    let tol = quad.radial_rel_tol;
    let mean = |f: &FadingDistribution| f.mean();

    let mut tiers = Vec::with_capacity(sc.k());
    let (mut p, mut err) = (0.0, 0.0);
    for (k, tk) in sc.open_tiers.iter().enumerate() {
        if tk.density == 0.0 {
            tiers.push(0.0);
            continue;
        }
        let sk = tk.sinr_threshold / (tk.power * mean(&tk.fading));
        let ek = tk.pathloss_exp;
        // Exponent as sum_j A_j y^p_j over y = r^2, plus noise.
        let mut terms = Vec::with_capacity(sc.k() + sc.closed_tiers.len());
        for (l, tl) in sc.open_tiers.iter().enumerate() {
            if tl.density == 0.0 {
                continue;
            }
            let a = tl.delta();
            let q = tk.sinr_threshold * biases[k] / biases[l];
            let coef = tl.density * PI * (sk * tl.power * mean(&tl.fading)).powf(a) * f_kernel(q, tl.pathloss_exp)?;
            terms.push((coef, ek / tl.pathloss_exp));
        }
        for tc in &sc.closed_tiers {
            if tc.density == 0.0 {
                continue;
            }
            let a = tc.delta();
            let coef = tc.density * PI * (sk * tc.power).powf(a) * tc.fading_delta_moment() * gamma_fn(1.0 - a)?;
            terms.push((coef, ek / tc.pathloss_exp));
        }
        let noise = sc.noise * sk;
        let pref = PI * tk.density;
        if noise == 0.0 && terms.iter().all(|t| t.1 == 1.0) {
            let v = pref / terms.iter().map(|t| t.0).sum::<f64>();
            tiers.push(v);
            p += v;
            continue;
        }
        let y_max = power_sum_root(&terms, 46.0);
        let out = integrate(
            |y: f64| (-noise * y.powf(0.5 * ek) - terms.iter().map(|&(c, q)| c * y.powf(q)).sum::<f64>()).exp(),
            0.0,
            y_max,
            0.01 * tol / (pref * sc.k() as f64),
            0.0,
            quad.max_subdivisions,
        );
        if !out.converged {
            return Err(Error::NonConvergence {
                what: "biased-association radial integral",
                error: out.error * pref,
                tolerance: 0.01 * tol,
            });
        }
        tiers.push(pref * out.value);
        p += pref * out.value;
        err += pref * out.error;
    }
    let p = clamp_probability(p, err, tol, "coverage probability outside [0, 1]")?;
    Ok(CoverageReport::analytic(p, err, tiers, "mbrp-rayleigh"))
}
