//! Choosing and running an engine for one scenario and rule.

use std::f64::consts::PI;
use std::str::FromStr;

use hetnet_core::analytic::{self, QuadratureSpec};
use hetnet_core::mcsim::{self, GuardPolicy, SimConfig};
use hetnet_core::model::{ConnectivityModel, HetNetScenario};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Analytic when a fast route exists, simulation otherwise.
    Auto,
    Analytic,
    MonteCarlo,
    Both,
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Engine::Auto),
            "analytic" => Ok(Engine::Analytic),
            "montecarlo" | "mc" => Ok(Engine::MonteCarlo),
            "both" => Ok(Engine::Both),
            _ => Err(format!("unknown engine `{s}` (auto, analytic, montecarlo, both)")),
        }
    }
}

/// Association rule as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelName {
    MaxSinr,
    Nearest,
    Mirp,
    /// Biased association with the file's `bias_db` values.
    Mbrp,
    /// Biased association with unit biases.
    Marp,
    /// Biased association with `B = 1/(P E[Psi])`, i.e. by path loss.
    MbrpNearest,
}

impl ModelName {
    pub const ALL: [ModelName; 6] = [
        ModelName::MaxSinr,
        ModelName::Nearest,
        ModelName::Mirp,
        ModelName::Mbrp,
        ModelName::Marp,
        ModelName::MbrpNearest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::MaxSinr => "maxsinr",
            ModelName::Nearest => "nearest",
            ModelName::Mirp => "mirp",
            ModelName::Mbrp => "mbrp",
            ModelName::Marp => "marp",
            ModelName::MbrpNearest => "mbrp-nearest",
        }
    }

    pub fn model(self, sc: &HetNetScenario) -> ConnectivityModel {
        match self {
            ModelName::MaxSinr => ConnectivityModel::MaxSinr,
            ModelName::Nearest => ConnectivityModel::NearestBs,
            ModelName::Mirp => ConnectivityModel::Mirp,
            ModelName::Mbrp => ConnectivityModel::mbrp_configured(sc),
            ModelName::Marp => ConnectivityModel::Mbrp {
                biases: vec![1.0; sc.k()],
            },
            ModelName::MbrpNearest => ConnectivityModel::mbrp_nearest_equivalent(sc),
        }
    }
}

impl FromStr for ModelName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ModelName::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = ModelName::ALL.iter().map(|m| m.as_str()).collect();
            format!("unknown model `{s}` ({})", names.join(", "))
        })
    }
}

/// Numerical and simulation settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub quad: QuadratureSpec,
    pub trials: u64,
    pub seed: u64,
    /// Fixed simulation radius in metres; automatic when `None`.
    pub disk_radius: Option<f64>,
    pub edge_tolerance: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default().with_tolerance(1e-4),
            trials: 100_000,
            seed: 1,
            disk_radius: None,
            edge_tolerance: 1e-3,
        }
    }
}

impl Settings {
    /// Simulation config for `sc`. The automatic radius starts from the
    /// radius holding one station on average.
    pub fn sim(&self, sc: &HetNetScenario) -> SimConfig {
        let mut s = SimConfig::new(self.trials, self.seed);
        match self.disk_radius {
            Some(r) => {
                s.disk_radius = r;
                s.guard_policy = GuardPolicy::FixedRadius;
            }
            None => {
                let total: f64 = sc.tiers().map(|t| t.density).sum();
                if total > 0.0 {
                    s.disk_radius = (PI * total).sqrt().recip();
                }
                s.guard_policy = GuardPolicy::AutoRadius {
                    edge_tolerance: self.edge_tolerance,
                };
            }
        }
        s
    }
}

/// One evaluated (model, engine) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub model: ModelName,
    pub engine: &'static str,
    pub formula: &'static str,
    pub probability: f64,
    pub stderr: f64,
    pub tier_serving: Vec<f64>,
    /// Probability that each tier serves, covered or not; empty if unknown.
    pub tier_load: Vec<f64>,
    pub rate: Option<(f64, f64)>,
}

pub fn analytic_row(sc: &HetNetScenario, name: ModelName, st: &Settings) -> Result<Row, CliError> {
    let model = name.model(sc);
    let r = analytic::coverage(sc, &model, &st.quad)?;
    let tier_load = match &model {
        ConnectivityModel::Mirp => analytic::tier_pmf_mirp(sc)?,
        ConnectivityModel::Mbrp { biases } => analytic::tier_pmf_mbrp(sc, biases)?,
        _ => Vec::new(),
    };
    Ok(Row {
        model: name,
        engine: "analytic",
        formula: r.formula,
        probability: r.probability,
        stderr: r.stderr,
        tier_serving: r.tier_serving_prob,
        tier_load,
        rate: None,
    })
}

pub fn montecarlo_row(sc: &HetNetScenario, name: ModelName, st: &Settings) -> Result<Row, CliError> {
    let est = mcsim::simulate(sc, &[name.model(sc)], &st.sim(sc))?;
    let e = &est[0];
    Ok(Row {
        model: name,
        engine: "montecarlo",
        formula: "monte-carlo",
        probability: e.coverage.mean,
        stderr: e.coverage.stderr,
        tier_serving: e.tier_covered.iter().map(|x| x.mean).collect(),
        tier_load: e.tier_served.iter().map(|x| x.mean).collect(),
        rate: e.rate.map(|r| (r.mean, r.stderr)),
    })
}

pub fn evaluate(sc: &HetNetScenario, name: ModelName, engine: Engine, st: &Settings) -> Result<Vec<Row>, CliError> {
    match engine {
        Engine::Analytic => Ok(vec![analytic_row(sc, name, st)?]),
        Engine::MonteCarlo => Ok(vec![montecarlo_row(sc, name, st)?]),
        Engine::Both => Ok(vec![analytic_row(sc, name, st)?, montecarlo_row(sc, name, st)?]),
        Engine::Auto => {
            if analytic::has_fast_route(sc, &name.model(sc)) {
                Ok(vec![analytic_row(sc, name, st)?])
            } else {
                Ok(vec![montecarlo_row(sc, name, st)?])
            }
        }
    }
}
