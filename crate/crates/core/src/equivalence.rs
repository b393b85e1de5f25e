//! Reductions of a hetnet to stochastically equivalent, simpler networks.
//!
//! Mapping every BS at distance `R` with power `P` and path-loss exponent
//! `eps` to the point `x = R^eps / P` on the half-line turns the received
//! power `P Psi R^-eps` into `Psi / x`. A homogeneous planar tier of density
//! `lambda` becomes a Poisson process on `[0, inf)` with power-law density
//! `lambda (2 pi / eps) P^(2/eps) x^(2/eps - 1)`; averaging the fading into
//! the density multiplies it by `E[Psi^(2/eps)]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FadingDistribution, HetNetScenario, TierConfig};
use crate::specfun::gamma_fn;

/// One term `c x^p` of a [`RadialDensity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

impl PowerTerm {
    /// `p + 1`, the exponent of the cumulative intensity.
    pub fn delta(&self) -> f64 {
        self.exponent + 1.0
    }
}

/// Intensity `lambda(x) = sum c x^p` of a Poisson process on `[0, inf)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RadialDensity {
    pub terms: Vec<PowerTerm>,
}

impl RadialDensity {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(coefficient: f64, exponent: f64) -> Self {
        let mut d = Self::zero();
        d.push(coefficient, exponent);
        d
    }

    /// Adds a term, merging it with an existing term of equal exponent.
    pub fn push(&mut self, coefficient: f64, exponent: f64) {
        if coefficient == 0.0 {
            return;
        }
        match self.terms.iter_mut().find(|t| t.exponent == exponent) {
            Some(t) => t.coefficient += coefficient,
            None => self.terms.push(PowerTerm { coefficient, exponent }),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.coefficient * x.powf(t.exponent)).sum()
    }

    /// Mean number of points in `[0, x]`.
    pub fn cumulative(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * x.powf(t.delta()) / t.delta())
            .sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm {
                    coefficient: t.coefficient * k,
                    exponent: t.exponent,
                })
                .collect(),
        }
    }

    /// Laplace transform `E[exp(-s sum_n 1/x_n)]` of the total power received
    /// from unit-power, unfaded points with this density. Requires every term
    /// to have `p + 1` in `(0, 1)`.
    pub fn laplace_inverse_sum(&self, s: Complex64) -> Result<Complex64> {
        if s.re < 0.0 {
            return Err(Error::domain("laplace_inverse_sum", "re(s) must be nonnegative"));
        }
        if s.norm() == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let mut exponent = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let d = t.delta();
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::domain(
                    "laplace_inverse_sum",
                    format!("term exponent {} gives infinite interference", t.exponent),
                ));
            }
            exponent += t.coefficient / d * gamma_fn(1.0 - d)? * s.powf(d);
        }
        Ok((-exponent).exp())
    }
}

/// `lambda (2 pi / eps) (P m)^(2/eps)`: coefficient of the one-dimensional
/// image of a tier whose received powers are scaled by `m`.
fn image_coefficient(t: &TierConfig, power_scale: f64) -> f64 {
    let d = t.delta();
    t.density * d * std::f64::consts::PI * (t.power * power_scale).powf(d)
}

/// Collapses all closed tiers into one unit-power, unfaded, unit-exponent
/// tier whose total received power has the same law as the closed-tier
/// interference.
pub fn collapse_closed_tiers(sc: &HetNetScenario) -> RadialDensity {
    let mut out = RadialDensity::zero();
    for t in &sc.closed_tiers {
        out.push(image_coefficient(t, 1.0) * t.fading_delta_moment(), t.delta() - 1.0);
    }
    out
}

/// Replaces every fading law by unit-mean exponential and rescales each
/// density by `E[Psi^(2/eps)] / Gamma(1 + 2/eps)`, which leaves the law of
/// the received-power process unchanged.
pub fn exponentialize(sc: &HetNetScenario) -> HetNetScenario {
    let conv = |t: &TierConfig| {
        let mut t = t.clone();
        let d = t.delta();
        let scale = t.fading_delta_moment() / gamma_fn(1.0 + d).unwrap_or(f64::NAN);
        t.density *= scale;
        t.fading = FadingDistribution::RAYLEIGH;
        t
    };
    HetNetScenario {
        open_tiers: sc.open_tiers.iter().map(conv).collect(),
        closed_tiers: sc.closed_tiers.iter().map(conv).collect(),
        noise: sc.noise,
    }
}

/// One-dimensional images used by max-instantaneous-power association.
#[derive(Debug, Clone, PartialEq)]
pub struct MirpEquivalent {
    /// Per open tier: density of `x = R^eps / P` points, fading averaged in.
    pub open: Vec<RadialDensity>,
    pub closed: RadialDensity,
}

/// Fading-averaged one-dimensional densities: each open tier becomes
/// `lambda (2 pi/eps) P^(2/eps) E[Psi^(2/eps)] x^(2/eps - 1)`, carrying unit
/// power, unit exponent and no fading.
pub fn mirp_1d_densities(sc: &HetNetScenario) -> MirpEquivalent {
    MirpEquivalent {
        open: sc
            .open_tiers
            .iter()
            .map(|t| RadialDensity::single(image_coefficient(t, 1.0) * t.fading_delta_moment(), t.delta() - 1.0))
            .collect(),
        closed: collapse_closed_tiers(sc),
    }
}

/// One-dimensional images used by max-biased-power association.
#[derive(Debug, Clone, PartialEq)]
pub struct MbrpEquivalent {
    /// Per open tier: density of `x = R^eps / (P E[Psi] B)` points.
    pub open: Vec<RadialDensity>,
    /// Closed tiers collapsed with their fading averaged in (unit marks).
    pub closed: RadialDensity,
    /// Per open tier: equivalent power `1/(E[Psi] B)`; the original fading
    /// laws still apply as marks.
    pub powers: Vec<f64>,
}

/// Densities in which biased-average-power association becomes "nearest
/// point wins".
pub fn mbrp_1d_densities(sc: &HetNetScenario, biases: &[f64]) -> Result<MbrpEquivalent> {
    if biases.len() != sc.k() || biases.iter().any(|b| !(*b > 0.0)) {
        return Err(Error::domain(
            "mbrp_1d_densities",
            "need one positive bias per open tier",
        ));
    }
    let mut open = Vec::with_capacity(sc.k());
    let mut powers = Vec::with_capacity(sc.k());
    for (t, &b) in sc.open_tiers.iter().zip(biases) {
        let m = t.fading.mean() * b;
        open.push(RadialDensity::single(image_coefficient(t, m), t.delta() - 1.0));
        powers.push(1.0 / m);
    }
    Ok(MbrpEquivalent {
        open,
        closed: collapse_closed_tiers(sc),
        powers,
    })
}

/// Two-tier normal form of an equal-exponent network: one open tier of unit
/// density, unit power and no fading, one closed tier of relative density
/// `closed_density`, and rescaled noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentTwoTier {
    pub open_density: f64,
    pub closed_density: f64,
    pub noise: f64,
}

pub fn same_eps_reduction(sc: &HetNetScenario) -> Result<EquivalentTwoTier> {
    let eps = sc.common_exponent().ok_or_else(|| {
        Error::Unsupported("same-exponent reduction needs one path-loss exponent for all tiers".into())
    })?;
    let open: f64 = sc.open_tiers.iter().map(TierConfig::weight).sum();
    if !(open > 0.0) {
        return Err(Error::Unsupported("open tiers have zero total density".into()));
    }
    let closed: f64 = sc.closed_tiers.iter().map(TierConfig::weight).sum();
    Ok(EquivalentTwoTier {
        open_density: 1.0,
        closed_density: closed / open,
        noise: sc.noise * open.powf(-eps / 2.0),
    })
}
