//! CSV rows and a minimal SVG line plot.

use std::fmt::Write as _;
use std::io::Write;

use crate::engine::Row;
use crate::error::CliError;

/// Columns of every result table, after any leading sweep columns.
pub const COLUMNS: [&str; 9] = [
    "model",
    "engine",
    "formula",
    "probability",
    "stderr",
    "tier_serving_prob",
    "tier_load",
    "conditional_rate_bits",
    "conditional_rate_stderr",
];

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn fields(r: &Row) -> Vec<String> {
    let (rate, rate_err) = match r.rate {
        Some((m, s)) => (m.to_string(), s.to_string()),
        None => (String::new(), String::new()),
    };
    vec![
        r.model.as_str().to_string(),
        r.engine.to_string(),
        r.formula.to_string(),
        r.probability.to_string(),
        r.stderr.to_string(),
        join(&r.tier_serving),
        join(&r.tier_load),
        rate,
        rate_err,
    ]
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(fields(r))?;
    }
    w.flush()?;
    Ok(())
}

/// One sweep point's rows, tagged with the swept parameter and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub row: Row,
}

pub fn write_sweep<W: Write>(out: W, parameter: &str, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["parameter", "value"];
    header.extend(COLUMNS);
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![parameter.to_string(), r.value.to_string()];
        rec.extend(fields(&r.row));
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Coverage against the swept value, one polyline per (model, engine).
pub fn sweep_svg(parameter: &str, rows: &[SweepRow]) -> String {
    let (w, h, m) = (720.0, 440.0, 60.0);
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        let key = format!("{} ({})", r.row.model.as_str(), r.row.engine);
        match series.iter_mut().find(|s| s.0 == key) {
            Some(s) => s.1.push((r.value, r.row.probability)),
            None => series.push((key, vec![(r.value, r.row.probability)])),
        }
    }
    let lo = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = |x: f64| m + (x - lo) / span * (w - 2.0 * m);
    let py = |y: f64| h - m - y * (h - 2.0 * m);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {} V{} H{}" fill="none" stroke="black"/>"#,
        m,
        h - m,
        w - m
    );
    for i in 0..=4 {
        let y = i as f64 / 4.0;
        let (tx, gy, right) = (m - 6.0, py(y), w - m);
        let _ = writeln!(
            s,
            r##"<text x="{tx}" y="{}" text-anchor="end">{y:.2}</text><line x1="{m}" x2="{right}" y1="{gy}" y2="{gy}" stroke="#ddd"/>"##,
            gy + 4.0
        );
    }
    for x in [lo, hi] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{x}</text>"#,
            px(x),
            h - m + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{parameter}</text>"#,
        w / 2.0,
        h - 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" transform="rotate(-90 16 {0})" text-anchor="middle">coverage probability</text>"#,
        h / 2.0
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let c = COLORS[i % COLORS.len()];
        let d: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#,
            d.join(" ")
        );
        let ly = m + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" x2="{}" y1="{ly}" y2="{ly}" stroke="{c}" stroke-width="2"/><text x="{}" y="{}">{name}</text>"#,
            w - m - 150.0,
            w - m - 130.0,
            w - m - 125.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
