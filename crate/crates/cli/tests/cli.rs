use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hetnet_cli::commands::{run_compare, run_sweep, SweepSpec};
use hetnet_cli::engine::{evaluate, Engine, ModelName, Settings};
use hetnet_cli::scenario::{db_to_linear, ClosedTierSpec, DensityUnit, FadingSpec, OpenTierSpec, ScenarioFile};
use proptest::prelude::*;

const TWO_TIER: &str = r#"{
  "density_unit": "per_km2",
  "open_tiers": [
    { "density": 1.0, "power": 25.0, "pathloss_exp": 3.0, "fading": { "kind": "exponential", "mean": 1.0 }, "threshold_db": 3.0 },
    { "density": 5.0, "power": 1.0, "pathloss_exp": 3.0, "fading": { "kind": "exponential", "mean": 1.0 }, "threshold_db": 3.0 }
  ]
}"#;

fn hetnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hetnet")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr_line(o: &Output) -> String {
    let s = String::from_utf8_lossy(&o.stderr).to_string();
    assert_eq!(s.lines().count(), 1, "expected one diagnostic line, got {s:?}");
    s
}

/// Parses CSV text into records, header first.
fn records(text: &[u8]) -> Vec<csv::StringRecord> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text);
    r.records().map(|x| x.unwrap()).collect()
}

fn settings(trials: u64) -> Settings {
    Settings {
        trials,
        ..Settings::default()
    }
}

#[test]
fn scenario_file_round_trips() {
    let f = ScenarioFile::parse(TWO_TIER).unwrap();
    assert_eq!(f.closed_tiers.len(), 0);
    assert_eq!(f.noise, 0.0);
    assert_eq!(f.open_tiers[1].bias_db, 0.0);
    let again = ScenarioFile::parse(&f.to_json()).unwrap();
    assert_eq!(f, again);
    assert_eq!(f.to_scenario().unwrap(), again.to_scenario().unwrap());
}

#[test]
fn units_are_converted() {
    let sc = ScenarioFile::parse(TWO_TIER).unwrap().to_scenario().unwrap();
    assert!((sc.open_tiers[0].density - 1e-6).abs() < 1e-20);
    assert!((sc.open_tiers[1].density - 5e-6).abs() < 1e-20);
    assert!((sc.open_tiers[0].sinr_threshold - 1.995_262_314_968_879_5).abs() < 1e-12);
    assert_eq!(sc.open_tiers[0].bias, 1.0);
    assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    let back = ScenarioFile::from_scenario(&sc, DensityUnit::PerKm2);
    assert!((back.open_tiers[1].density - 5.0).abs() < 1e-12);
    assert!((back.open_tiers[0].threshold_db - 3.0).abs() < 1e-12);
}

#[test]
fn unknown_key_is_rejected_with_its_name() {
    let dir = tempfile::tempdir().unwrap();
    let text = TWO_TIER.replace("\"power\": 1.0", "\"power\": 1.0, \"gain\": 2.0");
    let p = write(dir.path(), "s.json", &text);
    let o = hetnet(&["coverage", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let line = stderr_line(&o);
    assert!(line.starts_with("error[input]:"), "{line}");
    assert!(line.contains("open_tiers[1]") && line.contains("gain"), "{line}");
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "bad.json",
        "{ \"density_unit\": \"per_km2\", \"open_tiers\": [ { \"density\": 1.0, ",
    );
    let o = hetnet(&["coverage", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).starts_with("error[input]:"));

    let wrong = write(
        dir.path(),
        "wrong.json",
        &TWO_TIER.replace("\"threshold_db\": 3.0 },\n", "\"threshold_db\": \"high\" },\n"),
    );
    let o = hetnet(&["coverage", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).contains("open_tiers[0].threshold_db"));

    let invalid = write(
        dir.path(),
        "neg.json",
        &TWO_TIER.replace("\"density\": 5.0", "\"density\": -5.0"),
    );
    let o = hetnet(&["coverage", invalid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    stderr_line(&o);

    let good = write(dir.path(), "good.json", TWO_TIER);
    for args in [
        vec!["coverage", good.to_str().unwrap(), "--model", "fastest"],
        vec!["coverage", good.to_str().unwrap(), "--trials", "many"],
        vec!["coverage", good.to_str().unwrap(), "--edge-tolerance", "0"],
        vec!["frobnicate"],
        vec!["coverage", dir.path().join("missing.json").to_str().unwrap()],
    ] {
        let o = hetnet(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr_line(&o).starts_with("error[input]:"), "{args:?}");
    }
    assert_eq!(hetnet(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failure_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    // Mixed thresholds below one force the general inversion, which cannot
    // meet this tolerance in three bisections.
    let text = TWO_TIER.replacen("\"threshold_db\": 3.0", "\"threshold_db\": -10.0", 1);
    let p = write(dir.path(), "s.json", &text);
    let o = hetnet(&[
        "coverage",
        p.to_str().unwrap(),
        "--engine",
        "analytic",
        "--tolerance",
        "1e-8",
        "--max-subdivisions",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr_line(&o).starts_with("error[numerical]:"));
}

#[test]
fn coverage_row_is_a_probability() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", TWO_TIER);
    let o = hetnet(&[
        "coverage",
        p.to_str().unwrap(),
        "--model",
        "mirp",
        "--engine",
        "analytic",
    ]);
    assert!(o.status.success());
    let rows = records(&o.stdout);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "model");
    assert_eq!(&rows[1][0], "mirp");
    assert_eq!(&rows[1][1], "analytic");
    let prob: f64 = rows[1][3].parse().unwrap();
    assert!((0.0..=1.0).contains(&prob));
    let serving: f64 = rows[1][5].split(';').map(|x| x.parse::<f64>().unwrap()).sum();
    assert!((serving - prob).abs() < 1e-4);
}

#[test]
fn both_engines_agree() {
    let sc = ScenarioFile::parse(TWO_TIER).unwrap().to_scenario().unwrap();
    for m in [ModelName::Mirp, ModelName::Mbrp] {
        let rows = evaluate(&sc, m, Engine::Both, &settings(40_000)).unwrap();
        assert_eq!(rows.len(), 2);
        let (a, b) = (&rows[0], &rows[1]);
        assert_eq!(a.engine, "analytic");
        assert_eq!(b.engine, "montecarlo");
        assert!(
            (a.probability - b.probability).abs() < 3.0 * b.stderr,
            "{m:?}: {} vs {} +- {}",
            a.probability,
            b.probability,
            b.stderr
        );
        assert!(b.rate.is_some());
    }
}

#[test]
fn auto_engine_prefers_closed_forms() {
    let sc = ScenarioFile::parse(TWO_TIER).unwrap().to_scenario().unwrap();
    let r = evaluate(&sc, ModelName::MaxSinr, Engine::Auto, &settings(100)).unwrap();
    assert_eq!(r[0].engine, "analytic");
    let r = evaluate(&sc, ModelName::Nearest, Engine::Auto, &settings(100)).unwrap();
    assert_eq!(r[0].engine, "montecarlo");
}

#[test]
fn threshold_sweep_is_monotone() {
    let f = ScenarioFile::parse(TWO_TIER).unwrap();
    let spec = SweepSpec {
        parameter: "open_tiers[0].threshold_db".into(),
        from: -10.0,
        to: 20.0,
        steps: 31,
        models: vec![ModelName::Mirp],
        engine: Engine::Analytic,
    };
    let rows = run_sweep(&f, &spec, &Settings::default()).unwrap();
    assert_eq!(rows.len(), 31);
    for (i, w) in rows.windows(2).enumerate() {
        assert!((w[1].value - w[0].value - 1.0).abs() < 1e-12);
        assert!(w[1].row.probability <= w[0].row.probability + 1e-9, "step {i}");
    }
    assert_eq!(rows[0].value, -10.0);
    assert_eq!(rows[30].value, 20.0);
}

#[test]
fn degenerate_sweep_has_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", TWO_TIER);
    let out = dir.path().join("sweep.csv");
    let svg = dir.path().join("sweep.svg");
    let o = hetnet(&[
        "sweep",
        p.to_str().unwrap(),
        "--param",
        "threshold_db",
        "--from",
        "-3",
        "--to",
        "6",
        "--steps",
        "2",
        "--model",
        "mirp,mbrp",
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = records(&std::fs::read(&out).unwrap());
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[0][0], "parameter");
    assert_eq!(&rows[1][1], "-3");
    assert_eq!(&rows[1][2], "mirp");
    assert_eq!(&rows[2][2], "mbrp");
    assert_eq!(&rows[4][1], "6");
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.trim_end().ends_with("</svg>"));
    assert_eq!(plot.matches("<polyline").count(), 2);
}

#[test]
fn failed_sweep_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", TWO_TIER);
    let out = dir.path().join("sweep.csv");
    for (param, steps) in [
        ("open_tiers[7].power", "3"),
        ("threshold_db", "1"),
        ("open_tiers[0].density", "3"),
    ] {
        // The last case drives a density negative half way through.
        let o = hetnet(&[
            "sweep",
            p.to_str().unwrap(),
            "--param",
            param,
            "--from",
            "1",
            "--to",
            "-1",
            "--steps",
            steps,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(2), "{param}");
        stderr_line(&o);
        assert!(!out.exists(), "{param}");
    }
}

fn common_beta_sweep(powers: [f64; 2], fading: [FadingSpec; 2]) -> Vec<f64> {
    let mut f = ScenarioFile::parse(TWO_TIER).unwrap();
    for i in 0..2 {
        f.open_tiers[i].power = powers[i];
        f.open_tiers[i].fading = fading[i];
    }
    let spec = SweepSpec {
        parameter: "threshold_db".into(),
        from: -5.0,
        to: 10.0,
        steps: 7,
        models: vec![ModelName::MaxSinr, ModelName::Mirp],
        engine: Engine::Analytic,
    };
    run_sweep(&f, &spec, &Settings::default())
        .unwrap()
        .iter()
        .map(|r| r.row.probability)
        .collect()
}

#[test]
fn common_threshold_sweep_ignores_powers_and_fading() {
    let exp = FadingSpec::Exponential { mean: 1.0 };
    let ln = FadingSpec::LognormalDb { sigma_db: 8.0 };
    let base = common_beta_sweep([25.0, 1.0], [exp, exp]);
    for (p, f) in [
        ([1.0, 1.0], [exp, exp]),
        ([3.0, 400.0], [ln, exp]),
        ([25.0, 1.0], [FadingSpec::Constant { value: 2.0 }, ln]),
    ] {
        let other = common_beta_sweep(p, f);
        for (a, b) in base.iter().zip(&other) {
            assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
        }
    }
}

#[test]
fn comparison_flags_orderings() {
    let f = ScenarioFile::parse(TWO_TIER).unwrap();
    let c = run_compare(&f, &[ModelName::MaxSinr, ModelName::Nearest], &settings(4_000)).unwrap();
    assert_eq!(c.lines.len(), 2);
    assert!(c.lines[0].analytic.is_some());
    assert!(c.lines[1].analytic.is_none());
    assert!(c.lines[0].montecarlo.probability >= c.lines[1].montecarlo.probability);
    let names: Vec<&str> = c.checks.iter().map(|c| c.name).collect();
    assert!(names.contains(&"nearest_within_maxsinr"));
    assert!(names.contains(&"maxsinr_equals_mirp"));
    assert!(names.contains(&"mbrp_nearest_within_nearest"));
    assert!(c.checks.iter().all(|c| c.pass), "{:?}", c.checks);
}

#[test]
fn closed_access_costs_coverage() {
    let mut f = ScenarioFile::parse(TWO_TIER).unwrap();
    let femto = f.open_tiers.pop().unwrap();
    f.closed_tiers.push(ClosedTierSpec {
        density: femto.density,
        power: femto.power,
        pathloss_exp: femto.pathloss_exp,
        fading: femto.fading,
    });
    let c = run_compare(&f, &[ModelName::MaxSinr], &settings(4_000)).unwrap();
    let check = c
        .checks
        .iter()
        .find(|c| c.name == "open_access_beats_closed_access")
        .unwrap();
    assert!(check.pass, "{}", check.detail);
    let open = ScenarioFile::parse(TWO_TIER).unwrap().to_scenario().unwrap();
    let closed = f.to_scenario().unwrap();
    let a = evaluate(&open, ModelName::MaxSinr, Engine::Analytic, &Settings::default()).unwrap();
    let b = evaluate(&closed, ModelName::MaxSinr, Engine::Analytic, &Settings::default()).unwrap();
    assert!(b[0].probability < a[0].probability);
}

#[test]
fn compare_output_layout() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", TWO_TIER);
    let o = hetnet(&[
        "compare",
        p.to_str().unwrap(),
        "--trials",
        "2000",
        "--model",
        "maxsinr,mbrp",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let (table, checks) = text.split_once("\n\n").unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(table.starts_with("model,analytic,"));
    assert!(checks.starts_with("check,status,detail\n"));
    assert!(checks.lines().skip(1).all(|l| l.contains(",PASS,")), "{checks}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", TWO_TIER);
    let args = [
        "coverage",
        p.to_str().unwrap(),
        "--model",
        "mbrp",
        "--engine",
        "both",
        "--trials",
        "3000",
        "--seed",
        "9",
    ];
    let a = hetnet(&args);
    let b = hetnet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = hetnet(&[&args[..8], &["--seed", "10"]].concat());
    assert_ne!(a.stdout, c.stdout);
}

fn fading() -> impl Strategy<Value = FadingSpec> {
    prop_oneof![
        (0.1f64..10.0).prop_map(|mean| FadingSpec::Exponential { mean }),
        (0.5f64..12.0).prop_map(|sigma_db| FadingSpec::LognormalDb { sigma_db }),
        (0.1f64..10.0).prop_map(|value| FadingSpec::Constant { value }),
    ]
}

fn open_tier() -> impl Strategy<Value = OpenTierSpec> {
    (
        0.01f64..100.0,
        0.01f64..100.0,
        2.1f64..6.0,
        fading(),
        -20.0f64..20.0,
        -10.0f64..10.0,
    )
        .prop_map(
            |(density, power, pathloss_exp, fading, threshold_db, bias_db)| OpenTierSpec {
                density,
                power,
                pathloss_exp,
                fading,
                threshold_db,
                bias_db,
            },
        )
}

fn closed_tier() -> impl Strategy<Value = ClosedTierSpec> {
    (0.01f64..100.0, 0.01f64..100.0, 2.1f64..6.0, fading()).prop_map(|(density, power, pathloss_exp, fading)| {
        ClosedTierSpec {
            density,
            power,
            pathloss_exp,
            fading,
        }
    })
}

proptest! {
    #[test]
    fn files_round_trip(
        open in prop::collection::vec(open_tier(), 1..4),
        closed in prop::collection::vec(closed_tier(), 0..3),
        noise in 0.0f64..1.0,
        per_m2 in any::<bool>(),
    ) {
        let f = ScenarioFile {
            density_unit: if per_m2 { DensityUnit::PerM2 } else { DensityUnit::PerKm2 },
            open_tiers: open,
            closed_tiers: closed,
            noise,
        };
        let again = ScenarioFile::parse(&f.to_json()).unwrap();
        prop_assert_eq!(&f, &again);
        prop_assert_eq!(f.to_scenario().unwrap(), again.to_scenario().unwrap());
    }

    #[test]
    fn parameter_paths_set_what_they_name(v in -30.0f64..30.0, i in 0usize..2) {
        let mut f = ScenarioFile::parse(TWO_TIER).unwrap();
        f.set(&format!("open_tiers[{i}].threshold_db"), v).unwrap();
        prop_assert_eq!(f.open_tiers[i].threshold_db, v);
        prop_assert_eq!(f.open_tiers[1 - i].threshold_db, 3.0);
        f.set("threshold_db", v).unwrap();
        prop_assert!(f.open_tiers.iter().all(|t| t.threshold_db == v));
        prop_assert!(f.set("closed_tiers[0].power", v).is_err());
        let field = format!("open_tiers[{i}].fading");
        prop_assert!(f.set(&field, v).is_err());
    }
}
