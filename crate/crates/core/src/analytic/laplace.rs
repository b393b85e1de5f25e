//! Laplace transforms of the received interference, alone and jointly with
//! the strongest (or strongest tier-nearest) signal.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FadingDistribution, HetNetScenario, TierConfig};
use crate::quadrature::{gauss_hermite, integrate};
use crate::specfun::{gamma_fn, gamma_upper_inc, lower_bracket};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Value of a joint transform together with its arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceJointVal {
    pub value: Complex64,
    pub s: Complex64,
    pub u: f64,
}

fn check_s(func: &'static str, s: Complex64) -> Result<()> {
    if !(s.re >= 0.0) || !s.im.is_finite() || !s.re.is_finite() {
        return Err(Error::domain(
            func,
            format!("s={s} must have a finite, nonnegative real part"),
        ));
    }
    Ok(())
}

fn check_u(func: &'static str, u: f64) -> Result<()> {
    if !(u > 0.0) || u.is_nan() {
        return Err(Error::domain(func, format!("u={u} must be positive")));
    }
    Ok(())
}

/// `sum over tiers lambda pi (s P)^a E[Psi^a] Gamma(1-a)`: minus the log of
/// the interference transform of whole-plane tiers.
pub(crate) fn full_plane_exponent<'a>(tiers: impl Iterator<Item = &'a TierConfig>, s: Complex64) -> Result<Complex64> {
    if s == ZERO {
        return Ok(ZERO);
    }
    let mut e = ZERO;
    for t in tiers {
        if t.density == 0.0 {
            continue;
        }
        let a = t.delta();
        e += t.density * PI * t.power.powf(a) * t.fading_delta_moment() * gamma_fn(1.0 - a)? * s.powf(a);
    }
    Ok(e)
}

/// `E[exp(-s I_c)]` for the aggregate closed-tier interference `I_c`.
pub fn laplace_closed_interference(sc: &HetNetScenario, s: Complex64) -> Result<Complex64> {
    check_s("laplace_closed_interference", s)?;
    Ok((-full_plane_exponent(sc.closed_tiers.iter(), s)?).exp())
}

/// `E[exp(-s (I + eta)); max_i gamma_i P_i Psi_i R_i^-eps <= u]` where `I`
/// is the total received power and the maximum runs over open BSs.
pub fn laplace_joint_maxsinr(sc: &HetNetScenario, s: Complex64, u: f64) -> Result<LaplaceJointVal> {
    check_s("laplace_joint_maxsinr", s)?;
    check_u("laplace_joint_maxsinr", u)?;
    let e = maxsinr_exponent(sc, s, u)? + s * sc.noise;
    Ok(LaplaceJointVal {
        value: (-e).exp(),
        s,
        u,
    })
}

/// Noise-free exponent of [`laplace_joint_maxsinr`].
pub(crate) fn maxsinr_exponent(sc: &HetNetScenario, s: Complex64, u: f64) -> Result<Complex64> {
    let mut e = full_plane_exponent(sc.closed_tiers.iter(), s)?;
    for t in &sc.open_tiers {
        if t.density == 0.0 {
            continue;
        }
        let a = t.delta();
        let g = t.gamma();
        let k = t.density * PI * t.power.powf(a) * t.fading_delta_moment();
        let b = if s == ZERO {
            Complex64::new((g / u).powf(a), 0.0)
        } else {
            s.powf(a) * lower_bracket(a, s * u / g)?
        };
        e += k * b;
    }
    Ok(e)
}

/// `d/du log` of [`laplace_joint_maxsinr`]: `sum_k lambda_k (2 pi/eps_k)
/// (gamma_k P_k)^a E[Psi^a] u^(-1-a) exp(-s u/gamma_k)`.
pub fn dlog_laplace_maxsinr(sc: &HetNetScenario, s: Complex64, u: f64) -> Result<Complex64> {
    check_s("dlog_laplace_maxsinr", s)?;
    check_u("dlog_laplace_maxsinr", u)?;
    Ok(sc
        .open_tiers
        .iter()
        .map(|t| maxsinr_rate(t, u) * (-s * u / t.gamma()).exp())
        .sum())
}

/// `lambda (2 pi/eps) (gamma P)^a E[Psi^a] u^(-1-a)`: density at `u` of the
/// points `gamma P Psi R^-eps` of one tier.
pub(crate) fn maxsinr_rate(t: &TierConfig, u: f64) -> f64 {
    let a = t.delta();
    t.density * a * PI * (t.gamma() * t.power).powf(a) * t.fading_delta_moment() * u.powf(-1.0 - a)
}

/// `E[exp(-s (I + eta)); gamma_k P_k Psi_k1 R_k1^-eps <= u for every tier]`,
/// where `Psi_k1, R_k1` belong to the nearest BS of open tier `k`.
pub fn laplace_joint_nearest(sc: &HetNetScenario, s: Complex64, u: f64) -> Result<LaplaceJointVal> {
    check_s("laplace_joint_nearest", s)?;
    check_u("laplace_joint_nearest", u)?;
    let tol = 1e-12;
    let mut v = (-full_plane_exponent(sc.closed_tiers.iter(), s)? - s * sc.noise).exp();
    for t in &sc.open_tiers {
        v *= NearestTier::new(t)?.q(s, u, tol)?;
    }
    Ok(LaplaceJointVal { value: v, s, u })
}

/// `d/du log` of [`laplace_joint_nearest`].
pub fn dlog_laplace_nearest(sc: &HetNetScenario, s: Complex64, u: f64) -> Result<Complex64> {
    check_s("dlog_laplace_nearest", s)?;
    check_u("dlog_laplace_nearest", u)?;
    let tol = 1e-12;
    let mut sum = ZERO;
    for t in &sc.open_tiers {
        let nt = NearestTier::new(t)?;
        let q = nt.q(s, u, tol)?;
        sum += nt.dq_unshifted(s, u, tol)? * (-s * u / nt.gamma).exp() / q;
    }
    Ok(sum)
}

/// `int_0^z v^(-a-1) (1 - e^-v) dv` along the ray through `z`.
fn unfaded_tail(a: f64, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ZERO);
    }
    if z.norm() < 2.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = ZERO;
        for n in 1..400 {
            term *= -z / n as f64;
            let t = term / (n as f64 - a);
            sum += t;
            if t.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        Ok(-z.powf(-a) * sum)
    } else {
        let lower = gamma_fn(1.0 - a)? - gamma_upper_inc(1.0 - a, z)?;
        Ok((lower - z.powf(-a) * (1.0 - (-z).exp())) / a)
    }
}

/// `int_0^z t^(-a) / (1 + t) dt` along the ray through `z`, `|arg z| < pi`.
///
/// Near the origin this is `z^(1-a)/(1-a) 2F1(1, 1-a; 2-a; -z)`, summed
/// after a Pfaff transformation to `w = z/(1+z)`; far out, the tail
/// `int_z^inf` is expanded in `1/z`.
fn rational_tail(a: f64, z: Complex64) -> Complex64 {
    if z == ZERO {
        return ZERO;
    }
    if z.norm() < 2.0 {
        let w = z / (1.0 + z);
        let mut t = Complex64::new(1.0, 0.0);
        let mut sum = t;
        for n in 0..2000 {
            t *= w * ((n as f64 + 1.0) / (n as f64 + 2.0 - a));
            sum += t;
            if t.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        z.powf(1.0 - a) / ((1.0 - a) * (1.0 + z)) * sum
    } else {
        let w = -1.0 / z;
        let mut p = Complex64::new(1.0, 0.0);
        let mut sum = ZERO;
        for n in 0..400 {
            let t = p / (a + n as f64);
            sum += t;
            if t.norm() <= 1e-17 * sum.norm() {
                break;
            }
            p *= w;
        }
        PI / (PI * a).sin() - z.powf(-a) * sum
    }
}

/// Per-tier machinery for the transforms built on tier-nearest stations.
///
/// Points of the tier map to `x = R^eps / P` with intensity `c x^(a-1)`,
/// `c = lambda (2 pi/eps) P^a`, each carrying its own fading mark.
pub(crate) struct NearestTier {
    pub c: f64,
    pub a: f64,
    pub gamma: f64,
    fading: FadingDistribution,
    /// `(psi, weight)` nodes of the log-normal law.
    rule: Vec<(f64, f64)>,
}

impl NearestTier {
    pub fn new(t: &TierConfig) -> Result<Self> {
        let a = t.delta();
        let rule = match t.fading {
            FadingDistribution::LogNormalDb { .. } => lognormal_rule(&t.fading),
            _ => Vec::new(),
        };
        Ok(Self {
            c: t.density * a * PI * t.power.powf(a),
            a,
            gamma: t.gamma(),
            fading: t.fading,
            rule,
        })
    }

    /// `Xi(w) = int_0^w q^(-a-1) (1 - E[e^(-q Psi)]) dq`, so that the
    /// points beyond `x` contribute `exp(-c s^a Xi(s/x))`.
    fn xi(&self, w: Complex64) -> Result<Complex64> {
        let a = self.a;
        match self.fading {
            FadingDistribution::Constant { value } => Ok(value.powf(a) * unfaded_tail(a, w * value)?),
            FadingDistribution::Exponential { mean } => Ok(mean.powf(a) * rational_tail(a, w * mean)),
            FadingDistribution::LogNormalDb { .. } => {
                let mut sum = ZERO;
                for &(psi, wt) in &self.rule {
                    sum += wt * psi.powf(a) * unfaded_tail(a, w * psi)?;
                }
                Ok(sum)
            }
        }
    }

    /// `E[exp(-s Psi/x); gamma Psi / x <= u]`.
    fn truncated(&self, s: Complex64, x: f64, u: f64, tol: f64) -> Complex64 {
        let cap = u * x / self.gamma;
        match self.fading {
            FadingDistribution::Constant { value } => {
                if value <= cap {
                    (-s * value / x).exp()
                } else {
                    ZERO
                }
            }
            FadingDistribution::Exponential { mean } => {
                let den = 1.0 + mean * s / x;
                (1.0 - (-s * u / self.gamma - cap / mean).exp()) / den
            }
            FadingDistribution::LogNormalDb { sigma_db } => {
                let sl = crate::model::sigma_ln(sigma_db);
                let hi = (cap.ln() / sl).min(9.0);
                if hi <= -9.0 {
                    return ZERO;
                }
                let f = |z: f64| (-0.5 * z * z).exp() / (2.0 * PI).sqrt() * (-s * (sl * z).exp() / x).exp();
                integrate(f, -9.0, hi, tol * 1e-2, tol, 100).value
            }
        }
    }

    fn y_max(&self) -> f64 {
        46.0 * self.a / self.c
    }

    /// Splits `[lo, y_max]` where the integrands change character: where the
    /// fading cap `gamma Psi/x <= u` starts to bind, and where `|s|/x`
    /// crosses 1.
    fn segments(&self, s: Complex64, u: f64, lo: f64) -> Vec<f64> {
        let hi = self.y_max();
        let mut pts = vec![lo, hi];
        let mut add = |x: f64| {
            let y = x.powf(self.a);
            if y > lo && y < hi {
                pts.push(y);
            }
        };
        for q in [1e-9, 1e-4, 0.1, 0.5, 0.9, 1.0 - 1e-6, 1.0 - 1e-12] {
            add(self.gamma * self.fading.quantile(q) / u);
        }
        if s.norm() > 0.0 {
            add(s.norm());
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn integrate_segments<F: FnMut(f64) -> Complex64>(
        &self,
        mut f: F,
        pts: &[f64],
        abs_tol: f64,
        rel_tol: f64,
    ) -> Complex64 {
        let per = abs_tol / (pts.len() - 1).max(1) as f64;
        pts.windows(2)
            .map(|w| integrate(&mut f, w[0], w[1], per, rel_tol, 200).value)
            .sum()
    }

    fn exponent(&self, s: Complex64, x: f64) -> Result<Complex64> {
        if s == ZERO {
            Ok(ZERO)
        } else {
            Ok(self.c * s.powf(self.a) * self.xi(s / x)?)
        }
    }

    /// Tier factor of [`laplace_joint_nearest`]:
    /// `int c x^(a-1) E[e^(-s Psi/x); gamma Psi/x <= u] exp(-(c/a) x^a - c s^a Xi(s/x)) dx`.
    pub fn q(&self, s: Complex64, u: f64, tol: f64) -> Result<Complex64> {
        if self.c == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let k = self.c / self.a;
        let inv = 1.0 / self.a;
        let lo = match self.fading {
            FadingDistribution::Constant { value } => (self.gamma * value / u).powf(self.a),
            _ => 0.0,
        };
        let hi = self.y_max();
        if lo >= hi {
            return Ok(ZERO);
        }
        let mut err = None;
        let pts = self.segments(s, u, lo);
        let out = self.integrate_segments(
            |y: f64| {
                let x = y.powf(inv);
                if x == 0.0 {
                    return ZERO;
                }
                match self.exponent(s, x) {
                    Ok(e) => self.truncated(s, x, u, tol) * (-k * y - e).exp(),
                    Err(e) => {
                        err.get_or_insert(e);
                        ZERO
                    }
                }
            },
            &pts,
            tol * 1e-2 / k,
            tol,
        );
        if let Some(e) = err {
            return Err(e);
        }
        Ok(k * out)
    }

    /// `e^(s u/gamma) dQ/du`.
    pub fn dq_unshifted(&self, s: Complex64, u: f64, tol: f64) -> Result<Complex64> {
        if self.c == 0.0 {
            return Ok(ZERO);
        }
        let k = self.c / self.a;
        let inv = 1.0 / self.a;
        let g = self.gamma;
        if let FadingDistribution::Constant { value } = self.fading {
            let x = g * value / u;
            let e = self.exponent(s, x)?;
            return Ok(self.c * x.powf(self.a - 1.0) * (g * value / (u * u)) * (-k * x.powf(self.a) - e).exp());
        }
        let density = |x: f64| -> f64 {
            let psi = u * x / g;
            match self.fading {
                FadingDistribution::Exponential { mean } => x / g * (-psi / mean).exp() / mean,
                FadingDistribution::LogNormalDb { sigma_db } => {
                    let sl = crate::model::sigma_ln(sigma_db);
                    let z = psi.ln() / sl;
                    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sl * u)
                }
                FadingDistribution::Constant { .. } => unreachable!(),
            }
        };
        let mut err = None;
        let pts = self.segments(s, u, 0.0);
        let out = self.integrate_segments(
            |y: f64| {
                let x = y.powf(inv);
                if x == 0.0 {
                    return ZERO;
                }
                let d = density(x);
                if d == 0.0 {
                    return ZERO;
                }
                match self.exponent(s, x) {
                    Ok(e) => d * (-k * y - e).exp(),
                    Err(e) => {
                        err.get_or_insert(e);
                        ZERO
                    }
                }
            },
            &pts,
            tol * 1e-2 / (k * u),
            tol,
        );
        if let Some(e) = err {
            return Err(e);
        }
        Ok(k * out)
    }
}

/// Gauss-Hermite nodes for a log-normal law, grown until the `a`-moments it
/// reproduces are accurate.
fn lognormal_rule(f: &FadingDistribution) -> Vec<(f64, f64)> {
    let FadingDistribution::LogNormalDb { sigma_db } = *f else {
        return Vec::new();
    };
    let sl = crate::model::sigma_ln(sigma_db);
    let mut n = 32;
    loop {
        let r = gauss_hermite(n);
        let nodes: Vec<(f64, f64)> = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(&x, &w)| ((sl * std::f64::consts::SQRT_2 * x).exp(), w / PI.sqrt()))
            .collect();
        let m: f64 = nodes.iter().map(|&(p, w)| w * p).sum();
        if (m / f.raw_moment(1.0) - 1.0).abs() < 1e-12 || n >= 128 {
            return nodes;
        }
        n *= 2;
    }
}
