//! Scenario vocabulary shared by the analytic and simulation engines.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result, Violation};
use crate::specfun::gamma_fn;

/// Natural-log standard deviation of a shadowing law given in dB.
pub fn sigma_ln(sigma_db: f64) -> f64 {
    sigma_db * std::f64::consts::LN_10 / 10.0
}

/// Per-link power fading (shadowing) law.
///
/// `LogNormalDb` is parameterised by the standard deviation of the dB-valued
/// gain, which has zero mean: `Psi = 10^(X/10)` with `X ~ N(0, sigma_db^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingDistribution {
    Exponential { mean: f64 },
    LogNormalDb { sigma_db: f64 },
    Constant { value: f64 },
}

impl FadingDistribution {
    pub const RAYLEIGH: FadingDistribution = FadingDistribution::Exponential { mean: 1.0 };

    pub fn validate(&self) -> Option<String> {
        match *self {
            FadingDistribution::Exponential { mean } if !(mean > 0.0 && mean.is_finite()) => {
                Some("exponential mean must be positive and finite".into())
            }
            FadingDistribution::LogNormalDb { sigma_db } if !(sigma_db >= 0.0 && sigma_db.is_finite()) => {
                Some("log-normal sigma_db must be nonnegative and finite".into())
            }
            FadingDistribution::Constant { value } if !(value > 0.0 && value.is_finite()) => {
                Some("constant fading value must be positive and finite".into())
            }
            _ => None,
        }
    }

    /// `E[Psi^s]` for any real `s` at which it is finite; no domain check.
    pub fn raw_moment(&self, s: f64) -> f64 {
        match *self {
            FadingDistribution::Exponential { mean } => mean.powf(s) * gamma_fn(1.0 + s).unwrap_or(f64::INFINITY),
            FadingDistribution::LogNormalDb { sigma_db } => {
                let sl = sigma_ln(sigma_db);
                (0.5 * s * s * sl * sl).exp()
            }
            FadingDistribution::Constant { value } => value.powf(s),
        }
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1.0)
    }

    /// Inverse c.d.f.; `u` must lie in the open unit interval.
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            FadingDistribution::Exponential { mean } => -mean * (-u).ln_1p(),
            FadingDistribution::LogNormalDb { sigma_db } => {
                if sigma_db == 0.0 {
                    return 1.0;
                }
                let z = Normal::standard().inverse_cdf(u);
                (sigma_ln(sigma_db) * z).exp()
            }
            FadingDistribution::Constant { value } => value,
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, FadingDistribution::Exponential { .. })
    }
}

/// Fractional moment `E[Psi^s]` for `s` in `(0, 1]`.
pub fn fading_moment(dist: &FadingDistribution, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain("fading_moment", format!("order s={s} outside (0, 1]")));
    }
    if let Some(msg) = dist.validate() {
        return Err(Error::domain("fading_moment", msg));
    }
    Ok(dist.raw_moment(s))
}

/// `gamma = 1 + 1/beta`, the factor that turns an SINR threshold into a
/// comparison between one received power and the total received power.
pub fn gamma_factor(beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::domain(
            "gamma_factor",
            format!("threshold beta={beta} must be positive"),
        ));
    }
    Ok(1.0 + 1.0 / beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    Open,
    Closed,
}

/// One tier of base stations forming a homogeneous Poisson process.
///
/// `sinr_threshold` and `bias` are linear and only meaningful for open tiers.
#[derive(Debug, Clone, PartialEq)]
pub struct TierConfig {
    pub density: f64,
    pub power: f64,
    pub pathloss_exp: f64,
    pub fading: FadingDistribution,
    pub sinr_threshold: f64,
    pub bias: f64,
    pub access: Access,
}

impl TierConfig {
    pub fn open(density: f64, power: f64, pathloss_exp: f64, fading: FadingDistribution, sinr_threshold: f64) -> Self {
        Self {
            density,
            power,
            pathloss_exp,
            fading,
            sinr_threshold,
            bias: 1.0,
            access: Access::Open,
        }
    }

    pub fn closed(density: f64, power: f64, pathloss_exp: f64, fading: FadingDistribution) -> Self {
        Self {
            density,
            power,
            pathloss_exp,
            fading,
            sinr_threshold: f64::INFINITY,
            bias: 1.0,
            access: Access::Closed,
        }
    }

    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self
    }

    /// `2/epsilon`.
    pub fn delta(&self) -> f64 {
        2.0 / self.pathloss_exp
    }

    pub fn gamma(&self) -> f64 {
        1.0 + 1.0 / self.sinr_threshold
    }

    /// `E[Psi^(2/epsilon)]`.
    pub fn fading_delta_moment(&self) -> f64 {
        self.fading.raw_moment(self.delta())
    }

    /// `lambda P^(2/eps) E[Psi^(2/eps)]`, the weight with which a tier enters
    /// every received-power statistic.
    pub fn weight(&self) -> f64 {
        self.density * self.power.powf(self.delta()) * self.fading_delta_moment()
    }
}

/// A K-tier network: open tiers may serve the mobile, closed tiers only
/// interfere.
#[derive(Debug, Clone, PartialEq)]
pub struct HetNetScenario {
    pub open_tiers: Vec<TierConfig>,
    pub closed_tiers: Vec<TierConfig>,
    pub noise: f64,
}

impl HetNetScenario {
    pub fn new(open_tiers: Vec<TierConfig>, closed_tiers: Vec<TierConfig>, noise: f64) -> Self {
        Self {
            open_tiers,
            closed_tiers,
            noise,
        }
    }

    pub fn validated(self) -> Result<Self> {
        let v = validate_scenario(&self);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidScenario(v))
        }
    }

    pub fn check(&self) -> Result<()> {
        let v = validate_scenario(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidScenario(v))
        }
    }

    pub fn k(&self) -> usize {
        self.open_tiers.len()
    }

    pub fn tiers(&self) -> impl Iterator<Item = &TierConfig> {
        self.open_tiers.iter().chain(self.closed_tiers.iter())
    }

    /// The path-loss exponent shared by every tier, if there is one.
    pub fn common_exponent(&self) -> Option<f64> {
        let first = self.open_tiers.first()?.pathloss_exp;
        self.tiers().all(|t| t.pathloss_exp == first).then_some(first)
    }

    /// The SINR threshold shared by every open tier, if there is one.
    pub fn common_threshold(&self) -> Option<f64> {
        let first = self.open_tiers.first()?.sinr_threshold;
        self.open_tiers
            .iter()
            .all(|t| t.sinr_threshold == first)
            .then_some(first)
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.open_tiers.iter().map(|t| t.sinr_threshold).collect()
    }

    /// Replaces every open tier's threshold by `beta`.
    pub fn with_common_threshold(mut self, beta: f64) -> Self {
        for t in &mut self.open_tiers {
            t.sinr_threshold = beta;
        }
        self
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }
}

/// All violated invariants; empty means valid.
pub fn validate_scenario(sc: &HetNetScenario) -> Vec<Violation> {
    let mut out = Vec::new();
    if sc.open_tiers.is_empty() {
        out.push(Violation::new("open_tiers", "at least one open tier is required"));
    }
    if !(sc.noise >= 0.0 && sc.noise.is_finite()) {
        out.push(Violation::new("noise", "noise must be nonnegative and finite"));
    }
    for (group, tiers, access) in [
        ("open_tiers", &sc.open_tiers, Access::Open),
        ("closed_tiers", &sc.closed_tiers, Access::Closed),
    ] {
        for (i, t) in tiers.iter().enumerate() {
            let p = |field: &str| format!("{group}[{i}].{field}");
            if t.access != access {
                out.push(Violation::new(
                    p("access"),
                    format!("tier listed under {group} has access {:?}", t.access),
                ));
            }
            if !(t.density >= 0.0 && t.density.is_finite()) {
                out.push(Violation::new(p("density"), "density must be nonnegative and finite"));
            }
            if !(t.power > 0.0 && t.power.is_finite()) {
                out.push(Violation::new(p("power"), "power must be positive and finite"));
            }
            if !(t.pathloss_exp > 2.0 && t.pathloss_exp.is_finite()) {
                out.push(Violation::new(p("pathloss_exp"), "pathloss_exp must exceed 2"));
            }
            if let Some(msg) = t.fading.validate() {
                out.push(Violation::new(p("fading"), msg));
            } else if t.pathloss_exp > 2.0 && !t.fading_delta_moment().is_finite() {
                out.push(Violation::new(
                    p("fading"),
                    "fractional moment E[Psi^(2/eps)] is not finite",
                ));
            }
            if access == Access::Open {
                if !(t.sinr_threshold > 0.0) || t.sinr_threshold.is_nan() {
                    out.push(Violation::new(p("sinr_threshold"), "threshold must be positive"));
                }
                if !(t.bias > 0.0 && t.bias.is_finite()) {
                    out.push(Violation::new(p("bias"), "bias must be positive and finite"));
                }
            }
        }
    }
    out
}

/// Rule deciding which base station serves the mobile.
#[derive(Debug, Clone, PartialEq)]
pub enum ConnectivityModel {
    /// Covered if any open BS exceeds its tier's threshold.
    MaxSinr,
    /// Covered if any tier's nearest BS exceeds its tier's threshold.
    NearestBs,
    /// Served by the BS with the largest instantaneous received power.
    Mirp,
    /// Served by the tier-nearest BS maximising `P E[Psi] B r^-eps`.
    Mbrp { biases: Vec<f64> },
}

impl ConnectivityModel {
    /// MBRP with `B_k = 1/(P_k E[Psi_k])`, which ranks tier-nearest stations
    /// purely by distance (path loss).
    pub fn mbrp_nearest_equivalent(sc: &HetNetScenario) -> Self {
        ConnectivityModel::Mbrp {
            biases: sc
                .open_tiers
                .iter()
                .map(|t| 1.0 / (t.power * t.fading.mean()))
                .collect(),
        }
    }

    /// MBRP using each tier's configured bias.
    pub fn mbrp_configured(sc: &HetNetScenario) -> Self {
        ConnectivityModel::Mbrp {
            biases: sc.open_tiers.iter().map(|t| t.bias).collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConnectivityModel::MaxSinr => "maxsinr",
            ConnectivityModel::NearestBs => "nearest",
            ConnectivityModel::Mirp => "mirp",
            ConnectivityModel::Mbrp { .. } => "mbrp",
        }
    }

    pub fn check(&self, sc: &HetNetScenario) -> Result<()> {
        if let ConnectivityModel::Mbrp { biases } = self {
            if biases.len() != sc.k() {
                return Err(Error::InvalidScenario(vec![Violation::new(
                    "biases",
                    format!("{} biases given for {} open tiers", biases.len(), sc.k()),
                )]));
            }
            if let Some(i) = biases.iter().position(|b| !(*b > 0.0 && b.is_finite())) {
                return Err(Error::InvalidScenario(vec![Violation::new(
                    format!("biases[{i}]"),
                    "bias must be positive and finite",
                )]));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateUnit {
    Bits,
    Nats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalRate {
    pub value: f64,
    pub stderr: f64,
    pub unit: RateUnit,
}

/// Result of a coverage computation by either engine.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub probability: f64,
    pub method: Method,
    /// Quadrature error estimate (analytic) or Bernoulli standard error.
    pub stderr: f64,
    /// Probability of being covered and served by each open tier; empty when
    /// the formula does not decompose by tier.
    pub tier_serving_prob: Vec<f64>,
    pub conditional_rate: Option<ConditionalRate>,
    /// Short tag naming the formula or estimator that produced the value.
    pub formula: &'static str,
}

impl CoverageReport {
    pub(crate) fn analytic(probability: f64, error: f64, tiers: Vec<f64>, formula: &'static str) -> Self {
        Self {
            probability,
            method: Method::Analytic,
            stderr: error,
            tier_serving_prob: tiers,
            conditional_rate: None,
            formula,
        }
    }
}
