//! Semi-analytic coverage probabilities.
//!
//! Several routes exist and [`coverage`] picks the cheapest exact one for a
//! given scenario and association rule:
//!
//! | route | applies to | work |
//! |---|---|---|
//! | [`coverage_beta_ge1`] | all thresholds at least 1 | one real integral per tier |
//! | [`coverage_mirp_same_eps`] | MIRP, one path-loss exponent | one inversion per distinct threshold |
//! | [`coverage_mirp`] | MIRP, any exponents | one inversion per tier |
//! | [`coverage_mbrp_exp`] | MBRP, exponential fading on open tiers | one real integral per tier |
//! | [`coverage_general`] | max-SINR or nearest-BS, anything | inversion inside an integral |

mod general;
mod laplace;
mod mbrp;
mod mirp;

pub use general::coverage_general;
pub use laplace::{
    dlog_laplace_maxsinr, dlog_laplace_nearest, laplace_closed_interference, laplace_joint_maxsinr,
    laplace_joint_nearest, LaplaceJointVal,
};
pub use mbrp::{coverage_mbrp_exp, f_kernel, serving_joint_density_mbrp, tier_pmf_mbrp};
pub use mirp::{coverage_beta_ge1, coverage_mirp, coverage_mirp_same_eps, tier_pmf_mirp};

use crate::error::{Error, Result};
use crate::model::{ConnectivityModel, CoverageReport, HetNetScenario};
use crate::quadrature::InversionOptions;

/// Numerical controls shared by every analytic route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Truncation radius of frequency integrals, in units of the
    /// characteristic frequency of the integrand.
    pub omega_max: f64,
    /// Gauss-Legendre nodes per half-period panel of a frequency integral.
    pub omega_points: usize,
    /// Tolerance of radial integrals and of the returned probability.
    pub radial_rel_tol: f64,
    /// Bisection budget of each adaptive integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            omega_max: 1e4,
            omega_points: 64,
            radial_rel_tol: 1e-8,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.radial_rel_tol = tol;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.omega_max > 0.0) {
            return Err(Error::domain("QuadratureSpec", "omega_max must be positive"));
        }
        if self.omega_points < 64 {
            return Err(Error::domain("QuadratureSpec", "omega_points must be at least 64"));
        }
        if !(self.radial_rel_tol > 0.0 && self.radial_rel_tol <= 1e-2) {
            return Err(Error::domain("QuadratureSpec", "tolerance must lie in (0, 1e-2]"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("QuadratureSpec", "max_subdivisions must be positive"));
        }
        Ok(())
    }

    pub(crate) fn inversion(&self, abs_tol: f64) -> InversionOptions {
        InversionOptions {
            abs_tol,
            omega_max: self.omega_max,
            panel_nodes: self.omega_points,
            max_subdivisions: self.max_subdivisions,
            full_range: false,
        }
    }

    /// Inner integrals are held an order of magnitude tighter than the
    /// probability they feed.
    pub(crate) fn inner_tol(&self) -> f64 {
        (self.radial_rel_tol * 1e-2).max(1e-14)
    }
}

/// Report for a network without any serving station.
pub(crate) fn no_open_stations(sc: &HetNetScenario) -> Option<CoverageReport> {
    sc.open_tiers
        .iter()
        .all(|t| t.density == 0.0)
        .then(|| CoverageReport::analytic(0.0, 0.0, vec![0.0; sc.k()], "no-open-stations"))
}

/// Clamps a raw probability into `[0, 1]`, failing if it lies outside by
/// more than the error budget.
pub(crate) fn clamp_probability(p: f64, err: f64, tol: f64, what: &'static str) -> Result<f64> {
    let slack = 10.0 * tol.max(err);
    if !p.is_finite() || p < -slack || p > 1.0 + slack {
        return Err(Error::NonConvergence {
            what,
            error: if p.is_finite() {
                (p.min(1.0 - p)).abs()
            } else {
                f64::INFINITY
            },
            tolerance: slack,
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Coverage by the cheapest exact analytic route available for `model`.
pub fn coverage(sc: &HetNetScenario, model: &ConnectivityModel, quad: &QuadratureSpec) -> Result<CoverageReport> {
    sc.check()?;
    model.check(sc)?;
    quad.check()?;
    match model {
        ConnectivityModel::Mirp => mirp_route(sc, quad),
        ConnectivityModel::MaxSinr => {
            if sc.open_tiers.iter().all(|t| t.sinr_threshold >= 1.0) {
                coverage_beta_ge1(sc, quad)
            } else if sc.common_threshold().is_some() {
                mirp_route(sc, quad)
            } else {
                coverage_general(sc, model, quad)
            }
        }
        ConnectivityModel::Mbrp { biases } => {
            if sc.open_tiers.iter().all(|t| t.fading.is_exponential()) {
                coverage_mbrp_exp(sc, biases, quad)
            } else {
                Err(Error::Unsupported(
                    "no closed form for biased association with non-exponential fading; use simulation".into(),
                ))
            }
        }
        ConnectivityModel::NearestBs => {
            if sc.k() == 1 && sc.open_tiers[0].fading.is_exponential() {
                let b = ConnectivityModel::mbrp_nearest_equivalent(sc);
                let ConnectivityModel::Mbrp { biases } = b else {
                    unreachable!()
                };
                coverage_mbrp_exp(sc, &biases, quad)
            } else {
                coverage_general(sc, model, quad)
            }
        }
    }
}

fn mirp_route(sc: &HetNetScenario, quad: &QuadratureSpec) -> Result<CoverageReport> {
    if sc.common_exponent().is_some() {
        coverage_mirp_same_eps(sc, quad)
    } else {
        coverage_mirp(sc, quad)
    }
}

/// Whether [`coverage`] has an analytic route for `model` on `sc`.
pub fn has_route(sc: &HetNetScenario, model: &ConnectivityModel) -> bool {
    match model {
        ConnectivityModel::Mbrp { .. } => sc.open_tiers.iter().all(|t| t.fading.is_exponential()),
        _ => true,
    }
}

/// Whether the analytic route for `model` is one of the inexpensive ones
/// (everything except inversion inside an outer integral).
pub fn has_fast_route(sc: &HetNetScenario, model: &ConnectivityModel) -> bool {
    match model {
        ConnectivityModel::Mirp => true,
        ConnectivityModel::MaxSinr => {
            sc.open_tiers.iter().all(|t| t.sinr_threshold >= 1.0) || sc.common_threshold().is_some()
        }
        ConnectivityModel::Mbrp { .. } => has_route(sc, model),
        ConnectivityModel::NearestBs => sc.k() == 1 && sc.open_tiers[0].fading.is_exponential(),
    }
}
