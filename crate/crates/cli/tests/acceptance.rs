//! Acceptance suite: runs each criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hetnet_core::analytic::{
    coverage, coverage_beta_ge1, coverage_general, coverage_mbrp_exp, coverage_mirp, laplace_closed_interference,
    tier_pmf_mbrp, QuadratureSpec,
};
use hetnet_core::equivalence::exponentialize;
use hetnet_core::mcsim::{
    estimate_coverage, estimate_interference_transform, paired_snapshots, simulate, GuardPolicy, SimConfig,
};
use hetnet_core::model::{ConnectivityModel, FadingDistribution, HetNetScenario, TierConfig};
use hetnet_core::specfun::{g_kernel, gamma_fn, gamma_upper_inc, hyp1f1, hyp2f1_special, sinc_fn, ComplexVal};
use hetnet_oracles as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RAY: FadingDistribution = FadingDistribution::Exponential { mean: 1.0 };
const LN6: FadingDistribution = FadingDistribution::LogNormalDb { sigma_db: 6.0 };

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn quad(tol: f64) -> QuadratureSpec {
    QuadratureSpec::default().with_tolerance(tol)
}

fn auto_sim(trials: u64, seed: u64) -> SimConfig {
    let mut s = SimConfig::new(trials, seed);
    s.guard_policy = GuardPolicy::AutoRadius { edge_tolerance: 1e-3 };
    s
}

/// The two-tier network with a sparse high-power tier and a dense tier five
/// times as numerous at a 25th of the power, both at exponent 3.
fn two_tier(beta1: f64, beta2: f64, fading: FadingDistribution) -> HetNetScenario {
    HetNetScenario::new(
        vec![
            TierConfig::open(1.0, 25.0, 3.0, fading, beta1),
            TierConfig::open(5.0, 1.0, 3.0, fading, beta2),
        ],
        vec![],
        0.0,
    )
}

fn closed_transform() -> Outcome {
    let start = Instant::now();
    let sc = HetNetScenario::new(
        vec![TierConfig::open(1.0, 1.0, 4.0, RAY, 1.0)],
        vec![TierConfig::closed(1.0, 1.0, 4.0, RAY)],
        0.0,
    );
    let exact = (-PI * PI / 2.0).exp();
    let a = laplace_closed_interference(&sc, ComplexVal::new(1.0, 0.0)).map_err(|e| e.to_string())?;
    let mc = estimate_interference_transform(&sc, 1.0, &auto_sim(200_000, 1)).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(
        (a.re - exact).abs() < 1e-12
            && a.im.abs() < 1e-12
            && (mc.mean - a.re).abs() <= 3.0 * mc.stderr
            && t < Duration::from_secs(30),
        format!(
            "analytic {:.7} (exact {exact:.7}), simulated {:.7} +- {:.1e}, {:.1}s",
            a.re,
            mc.mean,
            mc.stderr,
            t.as_secs_f64()
        ),
    )
}

fn single_winner_vs_simulation() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (i, beta) in [10f64.powf(0.1), 2.0, 4.0].into_iter().enumerate() {
        let start = Instant::now();
        let sc = two_tier(beta, beta, RAY);
        let a = coverage_beta_ge1(&sc, &quad(1e-10)).map_err(|e| e.to_string())?;
        let m = estimate_coverage(&sc, &ConnectivityModel::MaxSinr, &auto_sim(200_000, 10 + i as u64))
            .map_err(|e| e.to_string())?;
        let t = start.elapsed();
        let tol = (3.0 * m.stderr).max(0.01);
        ok &= (a.probability - m.probability).abs() <= tol && t < Duration::from_secs(120);
        parts.push(format!(
            "beta {beta:.4}: {:.5} vs {:.5} +- {:.1e} ({:.0}s)",
            a.probability,
            m.probability,
            m.stderr,
            t.as_secs_f64()
        ));
    }
    ensure(ok, parts.join("; "))
}

fn biased_single_tier() -> Outcome {
    let sc = HetNetScenario::new(vec![TierConfig::open(1.0, 1.0, 4.0, RAY, 1.0)], vec![], 0.0);
    let exact = 1.0 / (1.0 + PI / 4.0);
    let classical = oracle::closed_form::nearest_rayleigh_eps4(1.0);
    let a = coverage_mbrp_exp(&sc, &[1.0], &quad(1e-10))
        .map_err(|e| e.to_string())?
        .probability;
    let m = estimate_coverage(&sc, &ConnectivityModel::NearestBs, &auto_sim(200_000, 3)).map_err(|e| e.to_string())?;
    ensure(
        (a - exact).abs() < 1e-6 && (classical - exact).abs() < 1e-6 && (m.probability - a).abs() <= 3.0 * m.stderr,
        format!(
            "analytic {a:.7}, 1/(1+pi/4) = {exact:.7}, classical {classical:.7}, simulated {:.5} +- {:.1e}",
            m.probability, m.stderr
        ),
    )
}

fn random_fading(rng: &mut ChaCha8Rng) -> FadingDistribution {
    match rng.random_range(0..3) {
        0 => FadingDistribution::Exponential {
            mean: rng.random_range(0.2..5.0),
        },
        1 => FadingDistribution::LogNormalDb {
            sigma_db: rng.random_range(1.0..8.0),
        },
        _ => FadingDistribution::Constant {
            value: rng.random_range(0.2..5.0),
        },
    }
}

fn random_scenario(rng: &mut ChaCha8Rng) -> HetNetScenario {
    let k = rng.random_range(1..=3);
    let l = rng.random_range(0..=1);
    let tier = |rng: &mut ChaCha8Rng| {
        (
            rng.random_range(0.2..5.0),
            10f64.powf(rng.random_range(-1.0..2.0)),
            rng.random_range(3.0..4.5),
            random_fading(rng),
        )
    };
    let open = (0..k)
        .map(|_| {
            let (d, p, e, f) = tier(rng);
            TierConfig::open(d, p, e, f, rng.random_range(1.0..10.0))
        })
        .collect();
    let closed = (0..l)
        .map(|_| {
            let (d, p, e, f) = tier(rng);
            TierConfig::closed(d, p, e, f)
        })
        .collect();
    let noise = if rng.random_bool(0.5) {
        0.0
    } else {
        rng.random_range(0.0..0.1)
    };
    HetNetScenario::new(open, closed, noise)
}

fn ordering_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    let mut violations = 0usize;
    for i in 0..20 {
        let sc = random_scenario(&mut rng).validated().map_err(|e| e.to_string())?;
        let models = [
            ConnectivityModel::NearestBs,
            ConnectivityModel::MaxSinr,
            ConnectivityModel::Mirp,
            ConnectivityModel::mbrp_nearest_equivalent(&sc),
        ];
        let snaps = paired_snapshots(&sc, &models, &auto_sim(10_000, 100 + i)).map_err(|e| e.to_string())?;
        violations += snaps
            .iter()
            .filter(|s| s.outcomes[0].covered && !s.outcomes[1].covered)
            .count();
        let d: Vec<f64> = snaps
            .iter()
            .map(|s| s.outcomes[2].covered as u8 as f64 - s.outcomes[3].covered as u8 as f64)
            .collect();
        let n = d.len() as f64;
        let mean = d.iter().sum::<f64>() / n;
        let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        // Standardised margin; zero difference with zero spread counts as met.
        let z = if se > 0.0 {
            mean / se
        } else if mean >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        worst = worst.min(z);
    }
    ensure(
        violations == 0 && worst >= -3.0,
        format!("nesting violations {violations} of 200000 snapshots; worst mirp - mbrp margin {worst:.2} stderr"),
    )
}

fn shadowing_invariance() -> Outcome {
    let sc = two_tier(2.0, 10f64.powf(0.1), LN6);
    let ex = exponentialize(&sc);
    let a = coverage_mirp(&sc, &quad(1e-10)).map_err(|e| e.to_string())?.probability;
    let b = coverage_mirp(&ex, &quad(1e-10)).map_err(|e| e.to_string())?.probability;
    let ma = estimate_coverage(&sc, &ConnectivityModel::Mirp, &auto_sim(50_000, 5)).map_err(|e| e.to_string())?;
    let mb = estimate_coverage(&ex, &ConnectivityModel::Mirp, &auto_sim(50_000, 6)).map_err(|e| e.to_string())?;
    let se = (ma.stderr.powi(2) + mb.stderr.powi(2)).sqrt();
    ensure(
        (a - b).abs() <= 1e-6 && (ma.probability - mb.probability).abs() <= 3.0 * se,
        format!(
            "analytic {a:.8} vs {b:.8}; simulated {:.5} vs {:.5} +- {se:.1e}",
            ma.probability, mb.probability
        ),
    )
}

fn power_independence() -> Outcome {
    let fadings = [
        RAY,
        LN6,
        FadingDistribution::Constant { value: 1.0 },
        FadingDistribution::Exponential { mean: 230.0 },
    ];
    let mut worst: f64 = 0.0;
    for beta in [0.5, 10f64.powf(0.1), 2.0, 4.0] {
        let base = coverage(&two_tier(beta, beta, RAY), &ConnectivityModel::MaxSinr, &quad(1e-10))
            .map_err(|e| e.to_string())?
            .probability;
        for (i, scale) in [(0, [1.0, 1.0]), (1, [3.0, 0.01]), (2, [1e3, 7.0]), (3, [0.2, 0.2])] {
            let mut sc = two_tier(beta, beta, fadings[i]);
            sc.open_tiers[0].power *= scale[0];
            sc.open_tiers[1].power *= scale[1];
            sc.open_tiers[1].fading = fadings[(i + 1) % 4];
            let p = coverage(&sc, &ConnectivityModel::MaxSinr, &quad(1e-10))
                .map_err(|e| e.to_string())?
                .probability;
            worst = worst.max((p - base).abs());
        }
    }
    ensure(
        worst <= 1e-9,
        format!("largest difference {worst:.1e} over 16 variants"),
    )
}

fn tier_pmf() -> Outcome {
    let sc = two_tier(2.0, 2.0, RAY);
    let pmf = tier_pmf_mbrp(&sc, &[1.0, 1.0]).map_err(|e| e.to_string())?;
    let c = 25f64.powf(2.0 / 3.0);
    let exact = c / (c + 5.0);
    let sum: f64 = pmf.iter().sum();
    let est = simulate(
        &sc,
        &[ConnectivityModel::Mbrp { biases: vec![1.0, 1.0] }],
        &auto_sim(50_000, 7),
    )
    .map_err(|e| e.to_string())?;
    let served = &est[0].tier_served[0];
    ensure(
        (pmf[0] - exact).abs() < 1e-12
            && (sum - 1.0).abs() < 1e-12
            && (served.mean - pmf[0]).abs() <= 3.0 * served.stderr,
        format!(
            "P(T=1) {:.10} (expression {exact:.10}), sum - 1 = {:.1e}, simulated {:.5} +- {:.1e}",
            pmf[0],
            sum - 1.0,
            served.mean,
            served.stderr
        ),
    )
}

fn general_vs_single_winner() -> Outcome {
    let start = Instant::now();
    let sc = HetNetScenario::new(
        vec![
            TierConfig::open(1.0, 1.0, 3.0, RAY, 2.0),
            TierConfig::open(2.0, 0.5, 3.5, RAY, 1.5),
        ],
        vec![TierConfig::closed(0.5, 1.0, 4.0, RAY)],
        0.1,
    );
    let g = coverage_general(&sc, &ConnectivityModel::MaxSinr, &quad(1e-5)).map_err(|e| e.to_string())?;
    let b = coverage_beta_ge1(&sc, &quad(1e-10)).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let tol = g.stderr.max(1e-3);
    ensure(
        (g.probability - b.probability).abs() <= tol && t < Duration::from_secs(600),
        format!(
            "general {:.7} (error {:.1e}) vs single-winner {:.7}, {:.1}s",
            g.probability,
            g.stderr,
            b.probability,
            t.as_secs_f64()
        ),
    )
}

fn special_functions() -> Outcome {
    let c = ComplexVal::new;
    let rel = |a: ComplexVal, b: ComplexVal| (a - b).norm() / b.norm().max(1e-300);
    let mut worst = [0f64; 5];
    let mut counts = [0usize; 4];
    for &a in &[-0.2, -0.5, -2.0 / 3.0, -0.9] {
        for &z in &[c(0.3, 0.0), c(2.0, 0.0), c(0.0, 2.4), c(1.0, 3.0), c(0.0, 9.0)] {
            let v = gamma_upper_inc(a, z).map_err(|e| e.to_string())?;
            worst[0] = worst[0].max(rel(v, oracle::gamma_upper_inc(a, z)));
            counts[0] += 1;
        }
    }
    for &d in &[0.4, 0.5, 2.0 / 3.0, 0.8] {
        for &w in &[0.5, 7.0, 38.0, 45.0, 600.0] {
            let v = hyp1f1(-d, 1.0 - d, c(0.0, w)).map_err(|e| e.to_string())?;
            worst[1] = worst[1].max(rel(v, oracle::hyp1f1_shifted(d, w)));
            counts[1] += 1;
        }
    }
    for &a in &[0.25, 0.4, 2.0 / 3.0, 0.8] {
        for &x in &[-0.05, -0.3, -0.6, -0.9, -0.99] {
            let v = hyp2f1_special(a, x).map_err(|e| e.to_string())?;
            let o = oracle::hyp2f1_series(a, x);
            worst[2] = worst[2].max((v - o).abs() / o);
            counts[2] += 1;
        }
    }
    for &a in &[0.3, 0.5, 2.0 / 3.0, 0.8] {
        for &w in &[-3.0, 0.1, 1.0, 4.0, 20.0] {
            let v = g_kernel(w, a).map_err(|e| e.to_string())?;
            let o = oracle::g_kernel(w, a);
            worst[3] = worst[3].max((v - o).norm() / o.norm().max(1.0));
            counts[3] += 1;
        }
    }
    for i in 1..=600 {
        let eps = 2.0 + 0.01 * i as f64;
        let a = 2.0 / eps;
        let lhs = 1.0 / (gamma_fn(1.0 + a).map_err(|e| e.to_string())? * sinc_fn(PI * a));
        let rhs = gamma_fn(1.0 - a).map_err(|e| e.to_string())?;
        worst[4] = worst[4].max((lhs - rhs).abs() / rhs);
    }
    let limits = [1e-9, 1e-8, 1e-10, 1e-6, 1e-10];
    ensure(
        counts == [20; 4] && worst.iter().zip(&limits).all(|(w, l)| w <= l),
        format!(
            "incomplete gamma {:.1e}, 1F1 {:.1e}, 2F1 {:.1e}, G kernel {:.1e}, reflection {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("hetnet-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let scenario = dir.join("two_tier.json");
    std::fs::write(
        &scenario,
        r#"{"density_unit": "per_km2", "open_tiers": [
            {"density": 1, "power": 25, "pathloss_exp": 3, "fading": {"kind": "lognormal_db", "sigma_db": 6}, "threshold_db": 3},
            {"density": 5, "power": 1, "pathloss_exp": 3, "fading": {"kind": "exponential", "mean": 1}, "threshold_db": 1}],
            "closed_tiers": [{"density": 2, "power": 1, "pathloss_exp": 3.5, "fading": {"kind": "exponential", "mean": 1}}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let s = scenario.to_str().unwrap_or_default();
    let runs: [&[&str]; 3] = [
        &[
            "coverage", s, "--model", "mirp", "--engine", "both", "--trials", "20000", "--seed", "4",
        ],
        &[
            "sweep",
            s,
            "--param",
            "open_tiers[0].threshold_db",
            "--from",
            "-5",
            "--to",
            "10",
            "--steps",
            "4",
            "--model",
            "maxsinr,nearest",
            "--engine",
            "montecarlo",
            "--trials",
            "3000",
            "--seed",
            "4",
        ],
        &["compare", s, "--trials", "3000", "--seed", "4"],
    ];
    let run = |args: &[&str], threads: &str| -> Result<Vec<u8>, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_hetnet"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned());
        }
        Ok(o.stdout)
    };
    let mut same = true;
    let mut bytes = 0;
    for args in runs {
        let a = run(args, "1")?;
        let b = run(args, "1")?;
        let c = run(args, "3")?;
        same &= a == b && a == c && !a.is_empty();
        bytes += a.len();
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(
        same,
        format!("coverage, sweep and compare outputs ({bytes} bytes) identical across repeated runs and thread counts"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "closed-tier interference transform matches simulation",
            closed_transform,
        ),
        (
            "single-winner closed form matches max-SINR simulation",
            single_winner_vs_simulation,
        ),
        (
            "biased single-tier closed form matches classical and simulated coverage",
            biased_single_tier,
        ),
        ("ordering suite on random scenarios", ordering_suite),
        ("shadowing invariance of max-power coverage", shadowing_invariance),
        (
            "power and fading independence at a common threshold",
            power_independence,
        ),
        ("tier probability mass function", tier_pmf),
        (
            "general inversion agrees with the single-winner form",
            general_vs_single_winner,
        ),
        ("special functions against independent oracles", special_functions),
        ("deterministic CSV output", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
