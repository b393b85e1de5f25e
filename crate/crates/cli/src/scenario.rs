//! JSON scenario files.
//!
//! Thresholds and biases are written in dB and densities in the unit named
//! by `density_unit`; parsing converts both to the linear, per-square-metre
//! values the library works with. Distances are therefore in metres, and
//! `noise` is in the same linear units as `power * distance^-pathloss_exp`.

use std::path::Path;

use hetnet_core::model::{FadingDistribution, HetNetScenario, TierConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityUnit {
    PerKm2,
    PerM2,
}

impl DensityUnit {
    /// Factor taking a density in this unit to stations per square metre.
    pub fn to_per_m2(self) -> f64 {
        match self {
            DensityUnit::PerKm2 => 1e-6,
            DensityUnit::PerM2 => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FadingSpec {
    Exponential { mean: f64 },
    LognormalDb { sigma_db: f64 },
    Constant { value: f64 },
}

impl From<FadingSpec> for FadingDistribution {
    fn from(f: FadingSpec) -> Self {
        match f {
            FadingSpec::Exponential { mean } => FadingDistribution::Exponential { mean },
            FadingSpec::LognormalDb { sigma_db } => FadingDistribution::LogNormalDb { sigma_db },
            FadingSpec::Constant { value } => FadingDistribution::Constant { value },
        }
    }
}

impl From<FadingDistribution> for FadingSpec {
    fn from(f: FadingDistribution) -> Self {
        match f {
            FadingDistribution::Exponential { mean } => FadingSpec::Exponential { mean },
            FadingDistribution::LogNormalDb { sigma_db } => FadingSpec::LognormalDb { sigma_db },
            FadingDistribution::Constant { value } => FadingSpec::Constant { value },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenTierSpec {
    pub density: f64,
    pub power: f64,
    pub pathloss_exp: f64,
    pub fading: FadingSpec,
    pub threshold_db: f64,
    #[serde(default)]
    pub bias_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedTierSpec {
    pub density: f64,
    pub power: f64,
    pub pathloss_exp: f64,
    pub fading: FadingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub density_unit: DensityUnit,
    pub open_tiers: Vec<OpenTierSpec>,
    #[serde(default)]
    pub closed_tiers: Vec<ClosedTierSpec>,
    #[serde(default)]
    pub noise: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input(format!("scenario key `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// Converts to library units and validates.
    pub fn to_scenario(&self) -> Result<HetNetScenario, CliError> {
        let k = self.density_unit.to_per_m2();
        let open = self
            .open_tiers
            .iter()
            .map(|t| {
                TierConfig::open(
                    t.density * k,
                    t.power,
                    t.pathloss_exp,
                    t.fading.into(),
                    db_to_linear(t.threshold_db),
                )
                .with_bias(db_to_linear(t.bias_db))
            })
            .collect();
        let closed = self
            .closed_tiers
            .iter()
            .map(|t| TierConfig::closed(t.density * k, t.power, t.pathloss_exp, t.fading.into()))
            .collect();
        HetNetScenario::new(open, closed, self.noise)
            .validated()
            .map_err(|e| CliError::Input(e.to_string()))
    }

    /// Writes a library scenario back in file units.
    pub fn from_scenario(sc: &HetNetScenario, unit: DensityUnit) -> Self {
        let k = unit.to_per_m2();
        Self {
            density_unit: unit,
            open_tiers: sc
                .open_tiers
                .iter()
                .map(|t| OpenTierSpec {
                    density: t.density / k,
                    power: t.power,
                    pathloss_exp: t.pathloss_exp,
                    fading: t.fading.into(),
                    threshold_db: linear_to_db(t.sinr_threshold),
                    bias_db: linear_to_db(t.bias),
                })
                .collect(),
            closed_tiers: sc
                .closed_tiers
                .iter()
                .map(|t| ClosedTierSpec {
                    density: t.density / k,
                    power: t.power,
                    pathloss_exp: t.pathloss_exp,
                    fading: t.fading.into(),
                })
                .collect(),
            noise: sc.noise,
        }
    }

    /// Sets the numeric field addressed by `path`, such as
    /// `open_tiers[0].threshold_db`, `closed_tiers[1].density` or `noise`.
    /// The bare `threshold_db` sets every open tier's threshold.
    pub fn set(&mut self, path: &str, value: f64) -> Result<(), CliError> {
        let bad = || CliError::Input(format!("unknown parameter path `{path}`"));
        if path == "noise" {
            self.noise = value;
            return Ok(());
        }
        if path == "threshold_db" {
            if self.open_tiers.is_empty() {
                return Err(bad());
            }
            for t in &mut self.open_tiers {
                t.threshold_db = value;
            }
            return Ok(());
        }
        let (head, field) = path.split_once('.').ok_or_else(bad)?;
        let (list, index) = head.strip_suffix(']').and_then(|h| h.split_once('[')).ok_or_else(bad)?;
        let i: usize = index.parse().map_err(|_| bad())?;
        match list {
            "open_tiers" => {
                let t = self.open_tiers.get_mut(i).ok_or_else(bad)?;
                match field {
                    "density" => t.density = value,
                    "power" => t.power = value,
                    "pathloss_exp" => t.pathloss_exp = value,
                    "threshold_db" => t.threshold_db = value,
                    "bias_db" => t.bias_db = value,
                    _ => return Err(bad()),
                }
            }
            "closed_tiers" => {
                let t = self.closed_tiers.get_mut(i).ok_or_else(bad)?;
                match field {
                    "density" => t.density = value,
                    "power" => t.power = value,
                    "pathloss_exp" => t.pathloss_exp = value,
                    _ => return Err(bad()),
                }
            }
            _ => return Err(bad()),
        }
        Ok(())
    }
}
