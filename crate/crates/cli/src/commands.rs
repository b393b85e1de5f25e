//! The `coverage`, `sweep` and `compare` commands.

use std::io::Write;
use std::path::Path;

use hetnet_core::analytic;
use hetnet_core::mcsim;
use hetnet_core::model::{HetNetScenario, TierConfig};
use rayon::prelude::*;

use crate::engine::{evaluate, Engine, ModelName, Row, Settings};
use crate::error::CliError;
use crate::output::{sweep_svg, write_rows, write_sweep, SweepRow};
use crate::scenario::ScenarioFile;

/// Evaluates one rule and writes the header and its rows.
pub fn cmd_coverage<W: Write>(
    file: &ScenarioFile,
    model: ModelName,
    engine: Engine,
    st: &Settings,
    out: W,
) -> Result<(), CliError> {
    let sc = file.to_scenario()?;
    let rows = evaluate(&sc, model, engine, st)?;
    write_rows(out, &rows)
}

/// A one-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub models: Vec<ModelName>,
    pub engine: Engine,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// Rows of a sweep, ordered by point, then model, then engine. Points are
/// evaluated concurrently.
pub fn run_sweep(file: &ScenarioFile, spec: &SweepSpec, st: &Settings) -> Result<Vec<SweepRow>, CliError> {
    if spec.steps < 2 {
        return Err(CliError::Input("sweep needs at least 2 steps".into()));
    }
    if spec.models.is_empty() {
        return Err(CliError::Input("sweep needs at least one model".into()));
    }
    // Resolve the path once up front so a typo fails before any work.
    file.clone().set(&spec.parameter, spec.from)?;
    let points: Vec<Result<Vec<SweepRow>, CliError>> = spec
        .values()
        .into_par_iter()
        .map(|v| {
            let mut f = file.clone();
            f.set(&spec.parameter, v)?;
            let sc = f.to_scenario()?;
            let mut rows = Vec::new();
            for &m in &spec.models {
                for row in evaluate(&sc, m, spec.engine, st)? {
                    rows.push(SweepRow { value: v, row });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for p in points {
        rows.extend(p?);
    }
    Ok(rows)
}

/// Runs a sweep and writes its CSV to `out` (standard output when `None`)
/// and optionally an SVG plot. Files are only created once every point has
/// been computed, and a half-written file is removed.
pub fn cmd_sweep(
    file: &ScenarioFile,
    spec: &SweepSpec,
    st: &Settings,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    let rows = run_sweep(file, spec, st)?;
    match out {
        Some(p) => write_file(p, |f| write_sweep(f, &spec.parameter, &rows))?,
        None => write_sweep(std::io::stdout().lock(), &spec.parameter, &rows)?,
    }
    if let Some(p) = svg {
        let text = sweep_svg(&spec.parameter, &rows);
        write_file(p, |f| Ok(f.write_all(text.as_bytes())?))?;
    }
    Ok(())
}

fn write_file(path: &Path, body: impl FnOnce(&mut std::fs::File) -> Result<(), CliError>) -> Result<(), CliError> {
    let mut f =
        std::fs::File::create(path).map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
    let res = body(&mut f).and_then(|_| Ok(f.sync_all()?));
    if res.is_err() {
        let _ = std::fs::remove_file(path);
    }
    res
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareLine {
    pub model: ModelName,
    pub analytic: Option<Row>,
    pub montecarlo: Row,
}

/// An ordering or agreement property checked on the simulated snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub lines: Vec<CompareLine>,
    pub checks: Vec<Check>,
}

/// Side-by-side analytic and simulated coverage of several rules, plus
/// ordering checks on shared snapshots.
pub fn run_compare(file: &ScenarioFile, models: &[ModelName], st: &Settings) -> Result<Comparison, CliError> {
    let sc = file.to_scenario()?;
    // Rules the checks need ride along on the same snapshots.
    let mut all: Vec<ModelName> = models.to_vec();
    for m in [
        ModelName::MaxSinr,
        ModelName::Nearest,
        ModelName::Mirp,
        ModelName::MbrpNearest,
    ] {
        if !all.contains(&m) {
            all.push(m);
        }
    }
    let rules: Vec<_> = all.iter().map(|m| m.model(&sc)).collect();
    let sim = st.sim(&sc);
    let snaps = mcsim::paired_snapshots(&sc, &rules, &sim)?;
    let n = snaps.len() as f64;
    let covered = |j: usize| -> Vec<bool> { snaps.iter().map(|s| s.outcomes[j].covered).collect() };
    let idx = |m: ModelName| all.iter().position(|&x| x == m).unwrap_or(0);

    let mut lines = Vec::new();
    for (j, &m) in all.iter().enumerate().take(models.len()) {
        let c = covered(j);
        let p = c.iter().filter(|&&x| x).count() as f64 / n;
        let mut tier_serving = vec![0.0; sc.k()];
        let mut tier_load = vec![0.0; sc.k()];
        for s in &snaps {
            if let Some(k) = s.outcomes[j].serving_tier {
                tier_load[k] += 1.0 / n;
                if s.outcomes[j].covered {
                    tier_serving[k] += 1.0 / n;
                }
            }
        }
        let montecarlo = Row {
            model: m,
            engine: "montecarlo",
            formula: "monte-carlo",
            probability: p,
            stderr: (p * (1.0 - p) / (n - 1.0).max(1.0)).sqrt(),
            tier_serving,
            tier_load,
            rate: None,
        };
        let analytic = if analytic::has_fast_route(&sc, &rules[j]) {
            Some(crate::engine::analytic_row(&sc, m, st)?)
        } else {
            None
        };
        lines.push(CompareLine {
            model: m,
            analytic,
            montecarlo,
        });
    }

    let subset = |name: &'static str, inner: ModelName, outer: ModelName| -> Check {
        let (a, b) = (covered(idx(inner)), covered(idx(outer)));
        let bad = a.iter().zip(&b).filter(|(x, y)| **x && !**y).count();
        Check {
            name,
            pass: bad == 0,
            detail: format!("{bad} of {} snapshots violate", snaps.len()),
        }
    };
    let mut checks = vec![
        subset("nearest_within_maxsinr", ModelName::Nearest, ModelName::MaxSinr),
        subset(
            "mbrp_nearest_within_maxsinr",
            ModelName::MbrpNearest,
            ModelName::MaxSinr,
        ),
    ];
    // Mean ordering of max-power over path-loss association, judged on the
    // paired per-snapshot difference.
    let (a, b) = (covered(idx(ModelName::Mirp)), covered(idx(ModelName::MbrpNearest)));
    let d: Vec<f64> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| *x as u8 as f64 - *y as u8 as f64)
        .collect();
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let se = (var / n).sqrt();
    checks.push(Check {
        name: "mirp_ge_mbrp_nearest",
        pass: mean >= -3.0 * se,
        detail: format!("mean difference {mean} (stderr {se})"),
    });
    if sc.common_threshold().is_some() || sc.open_tiers.iter().all(|t| t.sinr_threshold >= 1.0) {
        let (a, b) = (covered(idx(ModelName::MaxSinr)), covered(idx(ModelName::Mirp)));
        let bad = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        checks.push(Check {
            name: "maxsinr_equals_mirp",
            pass: bad == 0,
            detail: format!("{bad} of {} snapshots differ", snaps.len()),
        });
    }
    if sc.open_tiers.iter().all(|t| t.sinr_threshold >= 1.0) {
        checks.push(subset(
            "mbrp_nearest_within_nearest",
            ModelName::MbrpNearest,
            ModelName::Nearest,
        ));
    }
    if !sc.closed_tiers.is_empty() {
        checks.push(open_access_check(&sc, st)?);
    }
    Ok(Comparison { lines, checks })
}

/// Max-SINR coverage with the closed tiers opened up at the strictest open
/// threshold must not fall below closed-access coverage.
fn open_access_check(sc: &HetNetScenario, st: &Settings) -> Result<Check, CliError> {
    let beta = sc.open_tiers.iter().map(|t| t.sinr_threshold).fold(0.0, f64::max);
    let mut opened = sc.clone();
    opened.open_tiers.extend(
        sc.closed_tiers
            .iter()
            .map(|t| TierConfig::open(t.density, t.power, t.pathloss_exp, t.fading, beta)),
    );
    opened.closed_tiers.clear();
    let m = hetnet_core::model::ConnectivityModel::MaxSinr;
    let closed = mcsim::estimate_coverage(sc, &m, &st.sim(sc))?;
    let open = mcsim::estimate_coverage(&opened, &m, &st.sim(&opened))?;
    let se = (closed.stderr.powi(2) + open.stderr.powi(2)).sqrt();
    Ok(Check {
        name: "open_access_beats_closed_access",
        pass: closed.probability <= open.probability + 3.0 * se,
        detail: format!("closed {} vs open {}", closed.probability, open.probability),
    })
}

/// The comparison table, a blank line, then one `check,status,detail` row per
/// check.
pub fn write_comparison<W: Write>(out: W, c: &Comparison) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "model",
        "analytic",
        "analytic_error",
        "formula",
        "montecarlo",
        "montecarlo_stderr",
        "agreement",
    ])?;
    for l in &c.lines {
        let mc = &l.montecarlo;
        let (a, ae, f, agree) = match &l.analytic {
            Some(r) => {
                let ok = (r.probability - mc.probability).abs() <= 3.0 * mc.stderr + r.stderr.max(1e-6);
                (
                    r.probability.to_string(),
                    r.stderr.to_string(),
                    r.formula.to_string(),
                    if ok { "PASS" } else { "FAIL" }.to_string(),
                )
            }
            None => Default::default(),
        };
        w.write_record([
            l.model.as_str().to_string(),
            a,
            ae,
            f,
            mc.probability.to_string(),
            mc.stderr.to_string(),
            agree,
        ])?;
    }
    let mut out = w
        .into_inner()
        .map_err(|e| CliError::Input(format!("i/o: {}", e.error())))?;
    out.write_all(b"\n")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check", "status", "detail"])?;
    for ch in &c.checks {
        w.write_record([ch.name, if ch.pass { "PASS" } else { "FAIL" }, &ch.detail])?;
    }
    w.flush()?;
    Ok(())
}
