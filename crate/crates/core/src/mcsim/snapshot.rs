//! Association and coverage decisions on one realisation.

use super::points::Snapshot;
use crate::model::{ConnectivityModel, HetNetScenario};

/// Outcome of one association rule on one snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOutcome {
    /// Open tier of the serving station, `None` when no open station exists.
    pub serving_tier: Option<usize>,
    pub serving_sinr: f64,
    pub covered: bool,
}

impl ModelOutcome {
    const NONE: ModelOutcome = ModelOutcome {
        serving_tier: None,
        serving_sinr: 0.0,
        covered: false,
    };
}

/// Outcomes of several rules on a shared snapshot, with the realised
/// interference sums (far-field means included).
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotResult {
    pub outcomes: Vec<ModelOutcome>,
    pub interference_open: f64,
    pub interference_closed: f64,
}

#[derive(Debug, Clone, Copy)]
struct TierStats {
    max_power: f64,
    nearest_distance: f64,
    nearest_power: f64,
}

/// Applies each rule in `models` to the stations of `snap`.
///
/// Received power is `P Psi r^-eps` and the SINR of a station is its power
/// over the rest of the total received power plus noise. A station clears
/// its threshold exactly when `gamma_k M > I + eta`, which is the test used.
pub fn evaluate_snapshot(sc: &HetNetScenario, snap: &Snapshot, models: &[ConnectivityModel]) -> SnapshotResult {
    let mut i_open = snap.far_open;
    let mut stats = Vec::with_capacity(sc.k());
    for (t, pts) in sc.open_tiers.iter().zip(&snap.open) {
        let mut s = TierStats {
            max_power: 0.0,
            nearest_distance: f64::INFINITY,
            nearest_power: 0.0,
        };
        for p in pts {
            let m = t.power * p.fading * p.distance.powf(-t.pathloss_exp);
            i_open += m;
            if m > s.max_power {
                s.max_power = m;
            }
            if p.distance < s.nearest_distance {
                s.nearest_distance = p.distance;
                s.nearest_power = m;
            }
        }
        stats.push(s);
    }
    let mut i_closed = snap.far_closed;
    for (t, pts) in sc.closed_tiers.iter().zip(&snap.closed) {
        for p in pts {
            i_closed += t.power * p.fading * p.distance.powf(-t.pathloss_exp);
        }
    }
    let total = i_open + i_closed + sc.noise;

    let pick = |score: &dyn Fn(usize, &TierStats) -> f64, power: &dyn Fn(&TierStats) -> f64| -> ModelOutcome {
        let mut best: Option<(usize, f64)> = None;
        for (k, s) in stats.iter().enumerate() {
            if s.nearest_distance.is_infinite() {
                continue;
            }
            let v = score(k, s);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((k, v));
            }
        }
        let Some((k, _)) = best else {
            return ModelOutcome::NONE;
        };
        let m = power(&stats[k]);
        let rest = total - m;
        ModelOutcome {
            serving_tier: Some(k),
            serving_sinr: m / rest,
            covered: sc.open_tiers[k].gamma() * m > total,
        }
    };

    let outcomes = models
        .iter()
        .map(|model| match model {
            ConnectivityModel::MaxSinr => pick(&|k, s| sc.open_tiers[k].gamma() * s.max_power, &|s| s.max_power),
            ConnectivityModel::NearestBs => {
                pick(&|k, s| sc.open_tiers[k].gamma() * s.nearest_power, &|s| s.nearest_power)
            }
            ConnectivityModel::Mirp => pick(&|_, s| s.max_power, &|s| s.max_power),
            ConnectivityModel::Mbrp { biases } => pick(
                &|k, s| {
                    let t = &sc.open_tiers[k];
                    t.power * t.fading.mean() * biases[k] * s.nearest_distance.powf(-t.pathloss_exp)
                },
                &|s| s.nearest_power,
            ),
        })
        .collect();
    SnapshotResult {
        outcomes,
        interference_open: i_open,
        interference_closed: i_closed,
    }
}
