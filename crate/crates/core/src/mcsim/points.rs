//! Poisson base-station layouts in a disk around the mobile.

use std::f64::consts::PI;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Poisson};

use crate::model::{HetNetScenario, TierConfig};

/// One base station: distance to the mobile and its fading draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsPoint {
    pub distance: f64,
    pub fading: f64,
}

/// Uniform draw on the open unit interval.
pub(crate) fn unit_open<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Draws the stations of one tier inside a disk of radius `radius`.
///
/// The count is Poisson with mean `lambda pi R^2`, distances are
/// `R sqrt(U)` and fading is drawn by inverse c.d.f.
pub fn generate_tier_points<R: Rng + ?Sized>(tier: &TierConfig, radius: f64, rng: &mut R) -> Vec<BsPoint> {
    let mut out = Vec::new();
    fill_tier_points(tier, radius, rng, &mut out);
    out
}

pub(crate) fn fill_tier_points<R: Rng + ?Sized>(tier: &TierConfig, radius: f64, rng: &mut R, out: &mut Vec<BsPoint>) {
    out.clear();
    let mean = tier.density * PI * radius * radius;
    if !(mean > 0.0) {
        return;
    }
    let n = match Poisson::new(mean) {
        Ok(p) => p.sample(rng) as usize,
        Err(_) => return,
    };
    out.reserve(n);
    for _ in 0..n {
        let distance = radius * unit_open(rng).sqrt();
        let fading = tier.fading.quantile(unit_open(rng));
        out.push(BsPoint { distance, fading });
    }
}

/// One realisation of every tier, plus the deterministic mean power assumed
/// for stations beyond the disk.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub open: Vec<Vec<BsPoint>>,
    pub closed: Vec<Vec<BsPoint>>,
    pub far_open: f64,
    pub far_closed: f64,
}

impl Snapshot {
    pub fn draw<R: Rng + ?Sized>(sc: &HetNetScenario, radius: f64, far_field: bool, rng: &mut R) -> Self {
        let mut s = Snapshot::default();
        s.redraw(sc, radius, far_field, rng);
        s
    }

    /// Refills the buffers in place. Open tiers are drawn first, then closed
    /// tiers, each in scenario order.
    pub(crate) fn redraw<R: Rng + ?Sized>(&mut self, sc: &HetNetScenario, radius: f64, far_field: bool, rng: &mut R) {
        self.open.resize_with(sc.open_tiers.len(), Vec::new);
        self.closed.resize_with(sc.closed_tiers.len(), Vec::new);
        for (t, buf) in sc.open_tiers.iter().zip(&mut self.open) {
            fill_tier_points(t, radius, rng, buf);
        }
        for (t, buf) in sc.closed_tiers.iter().zip(&mut self.closed) {
            fill_tier_points(t, radius, rng, buf);
        }
        let (fo, fc) = if far_field {
            (
                sc.open_tiers.iter().map(|t| tail_mean(t, radius)).sum(),
                sc.closed_tiers.iter().map(|t| tail_mean(t, radius)).sum(),
            )
        } else {
            (0.0, 0.0)
        };
        self.far_open = fo;
        self.far_closed = fc;
    }
}

/// Mean power received from the tier's stations beyond `radius`.
pub(crate) fn tail_mean(t: &TierConfig, radius: f64) -> f64 {
    let e = t.pathloss_exp;
    t.density * t.power * t.fading.mean() * 2.0 * PI * radius.powf(2.0 - e) / (e - 2.0)
}

/// Variance of the power received from the tier's stations beyond `radius`.
pub(crate) fn tail_var(t: &TierConfig, radius: f64) -> f64 {
    let e = t.pathloss_exp;
    t.density * t.power * t.power * t.fading.raw_moment(2.0) * PI * radius.powf(2.0 - 2.0 * e) / (e - 1.0)
}
