//! Monte-Carlo estimation on Poisson layouts in a finite disk.
//!
//! Trials run in fixed batches of [`BATCH`]; batch `b` draws from a ChaCha8
//! stream selected by `b` under the configured seed, and batch tallies are
//! merged in batch order. Results are therefore reproducible bit for bit
//! regardless of the number of worker threads.

mod points;
mod snapshot;

pub use points::{generate_tier_points, BsPoint, Snapshot};
pub use snapshot::{evaluate_snapshot, ModelOutcome, SnapshotResult};

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ConditionalRate, ConnectivityModel, CoverageReport, HetNetScenario, Method, RateUnit};

/// Trials per random stream.
pub const BATCH: u64 = 1024;

/// Largest mean number of stations per snapshot the guard radius may reach.
const MAX_POINTS: f64 = 2e7;

/// How the simulation disk is sized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GuardPolicy {
    /// Use `disk_radius` as given.
    FixedRadius,
    /// Start from `disk_radius` and double it until the power received from
    /// beyond the disk is below `edge_tolerance` times a reference power.
    ///
    /// The reference is `eta` plus the mean power received from beyond the
    /// radius that holds one station on average. Without far-field
    /// compensation the tail's mean is compared, with it the tail's standard
    /// deviation.
    AutoRadius { edge_tolerance: f64 },
}

/// Simulation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub disk_radius: f64,
    pub seed: u64,
    pub guard_policy: GuardPolicy,
    /// Add the mean power of the stations beyond the disk to every
    /// snapshot's interference.
    pub far_field: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            disk_radius: 1.0,
            seed: 1,
            guard_policy: GuardPolicy::AutoRadius { edge_tolerance: 1e-3 },
            far_field: true,
        }
    }
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("SimConfig", "trials must be at least 1"));
        }
        if !(self.disk_radius > 0.0 && self.disk_radius.is_finite()) {
            return Err(Error::domain("SimConfig", "disk_radius must be positive and finite"));
        }
        if let GuardPolicy::AutoRadius { edge_tolerance } = self.guard_policy {
            if !(edge_tolerance > 0.0 && edge_tolerance.is_finite()) {
                return Err(Error::domain("SimConfig", "edge_tolerance must be positive"));
            }
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
    pub trials: u64,
}

/// Everything one rule produced over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelEstimate {
    pub coverage: MonteCarloEstimate,
    /// Probability of being covered and served by each open tier.
    pub tier_covered: Vec<MonteCarloEstimate>,
    /// Probability of being served by each open tier, covered or not.
    pub tier_served: Vec<MonteCarloEstimate>,
    /// `log2(1 + SINR)` over covered snapshots, if any.
    pub rate: Option<MonteCarloEstimate>,
}

impl ModelEstimate {
    pub fn report(&self) -> CoverageReport {
        CoverageReport {
            probability: self.coverage.mean,
            method: Method::MonteCarlo,
            stderr: self.coverage.stderr,
            tier_serving_prob: self.tier_covered.iter().map(|e| e.mean).collect(),
            conditional_rate: self.rate.map(|r| ConditionalRate {
                value: r.mean,
                stderr: r.stderr,
                unit: RateUnit::Bits,
            }),
            formula: "monte-carlo",
        }
    }
}

/// Running mean and sum of squared deviations, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * (self.n as f64 * o.n as f64 / n as f64);
        self.n = n;
    }

    fn estimate(&self) -> MonteCarloEstimate {
        let stderr = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            f64::INFINITY
        };
        MonteCarloEstimate {
            mean: self.mean,
            stderr,
            trials: self.n,
        }
    }
}

/// Estimate of a Bernoulli mean from a success count.
fn bernoulli(hits: u64, n: u64) -> MonteCarloEstimate {
    let p = hits as f64 / n as f64;
    let stderr = if n > 1 {
        (p * (1.0 - p) / (n - 1) as f64).sqrt()
    } else {
        f64::INFINITY
    };
    MonteCarloEstimate {
        mean: p,
        stderr,
        trials: n,
    }
}

/// Disk radius a run will use.
pub fn guard_radius(sc: &HetNetScenario, sim: &SimConfig) -> Result<f64> {
    sc.check()?;
    sim.check()?;
    let mut r = sim.disk_radius;
    let GuardPolicy::AutoRadius { edge_tolerance } = sim.guard_policy else {
        return Ok(r);
    };
    let total_density: f64 = sc.tiers().map(|t| t.density).sum();
    if total_density == 0.0 {
        return Ok(r);
    }
    let rho0 = (PI * total_density).sqrt().recip();
    let reference = sc.noise + sc.tiers().map(|t| points::tail_mean(t, rho0)).sum::<f64>();
    let tail = |r: f64| -> f64 {
        if sim.far_field {
            sc.tiers().map(|t| points::tail_var(t, r)).sum::<f64>().sqrt()
        } else {
            sc.tiers().map(|t| points::tail_mean(t, r)).sum()
        }
    };
    while tail(r) > edge_tolerance * reference {
        r *= 2.0;
        if total_density * PI * r * r > MAX_POINTS {
            return Err(Error::Unsupported(format!(
                "edge tolerance {edge_tolerance} needs a disk holding over {MAX_POINTS:.0e} stations"
            )));
        }
    }
    Ok(r)
}

/// Runs `sim.trials` snapshots, feeding each to `step` with a per-batch
/// accumulator, and merges accumulators in batch order.
fn run<A, I, S, M>(sc: &HetNetScenario, sim: &SimConfig, init: I, step: S, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &Snapshot) + Sync,
    M: Fn(&mut A, A),
{
    let radius = guard_radius(sc, sim)?;
    let batches = sim.trials.div_ceil(BATCH);
    let parts: Vec<A> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
            rng.set_stream(b);
            let n = BATCH.min(sim.trials - b * BATCH);
            let mut acc = init();
            let mut snap = Snapshot::default();
            for _ in 0..n {
                snap.redraw(sc, radius, sim.far_field, &mut rng);
                step(&mut acc, &snap);
            }
            acc
        })
        .collect();
    let mut it = parts.into_iter();
    let mut total = it.next().unwrap_or_else(&init);
    for p in it {
        merge(&mut total, p);
    }
    Ok(total)
}

#[derive(Debug, Clone, Default)]
struct Tally {
    covered: u64,
    covered_by: Vec<u64>,
    served_by: Vec<u64>,
    rate: Moments,
}

fn check_models(sc: &HetNetScenario, models: &[ConnectivityModel]) -> Result<()> {
    sc.check()?;
    for m in models {
        m.check(sc)?;
    }
    Ok(())
}

/// Evaluates every rule in `models` on the same snapshots.
pub fn simulate(sc: &HetNetScenario, models: &[ConnectivityModel], sim: &SimConfig) -> Result<Vec<ModelEstimate>> {
    check_models(sc, models)?;
    let k = sc.k();
    let fresh = || {
        vec![
            Tally {
                covered_by: vec![0; k],
                served_by: vec![0; k],
                ..Tally::default()
            };
            models.len()
        ]
    };
    let tallies = run(
        sc,
        sim,
        fresh,
        |acc: &mut Vec<Tally>, snap| {
            let res = evaluate_snapshot(sc, snap, models);
            for (t, o) in acc.iter_mut().zip(&res.outcomes) {
                if let Some(j) = o.serving_tier {
                    t.served_by[j] += 1;
                    if o.covered {
                        t.covered += 1;
                        t.covered_by[j] += 1;
                        t.rate.push(o.serving_sinr.ln_1p() / std::f64::consts::LN_2);
                    }
                }
            }
        },
        |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.covered += y.covered;
                for j in 0..k {
                    x.covered_by[j] += y.covered_by[j];
                    x.served_by[j] += y.served_by[j];
                }
                x.rate.merge(&y.rate);
            }
        },
    )?;
    let n = sim.trials;
    Ok(tallies
        .into_iter()
        .map(|t| ModelEstimate {
            coverage: bernoulli(t.covered, n),
            tier_covered: t.covered_by.iter().map(|&c| bernoulli(c, n)).collect(),
            tier_served: t.served_by.iter().map(|&c| bernoulli(c, n)).collect(),
            rate: (t.rate.n > 0).then(|| t.rate.estimate()),
        })
        .collect())
}

/// Coverage probability of one rule by simulation.
pub fn estimate_coverage(sc: &HetNetScenario, model: &ConnectivityModel, sim: &SimConfig) -> Result<CoverageReport> {
    let est = simulate(sc, std::slice::from_ref(model), sim)?;
    Ok(est[0].report())
}

/// Mean of `log2(1 + SINR)` of the serving station over covered snapshots.
pub fn estimate_conditional_rate(
    sc: &HetNetScenario,
    model: &ConnectivityModel,
    sim: &SimConfig,
) -> Result<MonteCarloEstimate> {
    let est = simulate(sc, std::slice::from_ref(model), sim)?;
    est[0].rate.ok_or(Error::NoData)
}

/// Sample mean of `exp(-s I_c)` for the closed-tier interference `I_c`.
pub fn estimate_interference_transform(sc: &HetNetScenario, s: f64, sim: &SimConfig) -> Result<MonteCarloEstimate> {
    sc.check()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(
            "estimate_interference_transform",
            format!("s={s} must be positive"),
        ));
    }
    let m = run(
        sc,
        sim,
        Moments::default,
        |acc, snap| {
            let res = evaluate_snapshot(sc, snap, &[]);
            acc.push((-s * res.interference_closed).exp());
        },
        |a, b| a.merge(&b),
    )?;
    Ok(m.estimate())
}

/// Every snapshot's outcomes, in trial order.
pub fn paired_snapshots(
    sc: &HetNetScenario,
    models: &[ConnectivityModel],
    sim: &SimConfig,
) -> Result<Vec<SnapshotResult>> {
    check_models(sc, models)?;
    run(
        sc,
        sim,
        Vec::new,
        |acc, snap| acc.push(evaluate_snapshot(sc, snap, models)),
        |a, b| a.extend(b),
    )
}
