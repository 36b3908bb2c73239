//! CSV and SVG emission. Headers and column orders are fixed; all files
//! use UTF-8 with `\n` line endings and are written once, after every
//! worker has finished, so identical runs produce bitwise-identical
//! bytes.

use std::io::Write;
use std::path::Path;

use thetapress_core::classical::ClassicalReport;
use thetapress_core::{PressureProfile, Theta};

pub const ALPHA_LADDER_HEADER: &str =
    "theta,epsilon,N,alpha_N,solver_status,candidates,cover_cardinality";
pub const PROFILES_HEADER: &str = "theta,lower,upper";
pub const CLASSICAL_HEADER: &str = "kind,n,epsilon,value,log_value_over_n,witness_size";
pub const MEASURE_HEADER: &str = "measure,theta,epsilon,N,alpha_N,lower,upper";

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())
}

pub fn csv_document(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(header.len() + rows.iter().map(|r| r.len() + 1).sum::<usize>() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

pub fn alpha_ladder_rows(profiles: &[(f64, PressureProfile)]) -> Vec<String> {
    let mut rows = Vec::new();
    for (epsilon, profile) in profiles {
        for s in &profile.scales {
            rows.push(format!(
                "{},{},{},{},{},{},{}",
                profile.theta,
                epsilon,
                s.scale,
                s.alpha,
                s.status.as_str(),
                s.candidates,
                s.cover_cardinality
            ));
        }
    }
    rows
}

pub fn profile_summary_rows(profiles: &[PressureProfile]) -> Vec<String> {
    profiles
        .iter()
        .map(|p| format!("{},{},{}", p.theta, p.lower(), p.upper()))
        .collect()
}

pub fn classical_rows(report: &ClassicalReport, sup_rows: &[(usize, f64, f64, usize)]) -> Vec<String> {
    let mut rows = Vec::new();
    for cell in &report.cells {
        rows.push(format!(
            "Q,{},{},{},{},{}",
            cell.n,
            cell.epsilon,
            cell.spanning.value,
            cell.spanning.log_over_n(),
            cell.spanning.witness.len()
        ));
        rows.push(format!(
            "P,{},{},{},{},{}",
            cell.n,
            cell.epsilon,
            cell.separated.value,
            cell.separated.log_over_n(),
            cell.separated.witness.len()
        ));
    }
    for (n, epsilon, value, witness) in sup_rows {
        rows.push(format!(
            "sup,{},{},{},{},{}",
            n,
            epsilon,
            value,
            value.ln() / *n as f64,
            witness
        ));
    }
    rows
}

/// Self-contained 800x500 line plot of lower/upper pressures against
/// theta. No external assets, fixed viewport, deterministic text.
pub fn pressure_svg(thetas: &[Theta], lowers: &[f64], uppers: &[f64]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const ML: f64 = 70.0; // margins
    const MR: f64 = 30.0;
    const MT: f64 = 40.0;
    const MB: f64 = 55.0;

    let y_min_raw = lowers.iter().chain(uppers).cloned().fold(f64::INFINITY, f64::min);
    let y_max_raw = lowers.iter().chain(uppers).cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (y_max_raw - y_min_raw).max(1e-6);
    let y_min = y_min_raw - 0.08 * spread;
    let y_max = y_max_raw + 0.08 * spread;

    let x_of = |t: f64| ML + t * (W - ML - MR);
    let y_of = |v: f64| H - MB - (v - y_min) / (y_max - y_min) * (H - MT - MB);

    let polyline = |values: &[f64]| -> String {
        thetas
            .iter()
            .zip(values)
            .map(|(t, v)| format!("{:.2},{:.2}", x_of(t.value()), y_of(*v)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" width=\"{W}\" height=\"{H}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"24\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">pressure vs theta</text>\n",
        W / 2.0
    ));
    // axes
    s.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR,
        H - MB
    ));
    s.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - MB
    ));
    // x ticks at the grid values
    for t in thetas {
        let x = x_of(t.value());
        s.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            H - MB,
            H - MB + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{t}</text>\n",
            H - MB + 18.0
        ));
    }
    // y ticks: five evenly spaced
    for i in 0..=4 {
        let v = y_min + (y_max - y_min) * i as f64 / 4.0;
        let y = y_of(v);
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{ML}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            ML - 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{v:.4}</text>\n",
            ML - 8.0,
            y + 4.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">theta</text>\n",
        (ML + W - MR) / 2.0,
        H - 12.0
    ));
    s.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>\n",
        polyline(lowers)
    ));
    s.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"{}\"/>\n",
        polyline(uppers)
    ));
    for (t, v) in thetas.iter().zip(lowers) {
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#1f77b4\"/>\n",
            x_of(t.value()),
            y_of(*v)
        ));
    }
    for (t, v) in thetas.iter().zip(uppers) {
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#d62728\"/>\n",
            x_of(t.value()),
            y_of(*v)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{MT}\" font-family=\"monospace\" font-size=\"12\" fill=\"#1f77b4\">lower</text>\n",
        W - MR - 110.0
    ));
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{MT}\" font-family=\"monospace\" font-size=\"12\" fill=\"#d62728\">upper</text>\n",
        W - MR - 55.0
    ));
    s.push_str("</svg>\n");
    s
}
