//! Deterministic output: CSV tables with provenance headers, JSON series
//! reports, and a small SVG line plot. No timestamps, no locale, no
//! randomness — identical runs produce identical bytes.

use crate::config::ExperimentConfig;
use crate::dioph::SeriesReport;
use crate::real::{fmt_float, RealInterval};
use std::fmt::Write as _;
use std::path::Path;

/// Decimal digits used when printing interval endpoints.
pub const CSV_DIGITS: usize = 30;

pub fn fmt_interval_lo(v: &RealInterval) -> String {
    fmt_float(v.lo(), CSV_DIGITS)
}

pub fn fmt_interval_hi(v: &RealInterval) -> String {
    fmt_float(v.hi(), CSV_DIGITS)
}

pub fn fmt_interval_mid(v: &RealInterval) -> String {
    format!("{:.17e}", v.midpoint_f64())
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

/// A CSV table: provenance header, column names, rows.
pub fn render_csv(config: &ExperimentConfig, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for line in config.echo() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{}", columns.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_csv(
    path: &Path,
    config: &ExperimentConfig,
    columns: &[&str],
    rows: &[Vec<String>],
) -> crate::error::Result<()> {
    std::fs::write(path, render_csv(config, columns, rows))?;
    Ok(())
}

/// Series rows in the (n, term, partial_sum) layout plus endpoint columns.
pub fn series_rows(report: &SeriesReport) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let columns = vec![
        "n",
        "term",
        "partial_sum",
        "term_lo",
        "term_hi",
        "partial_sum_lo",
        "partial_sum_hi",
    ];
    let rows = report
        .terms
        .iter()
        .zip(&report.partial_sums)
        .enumerate()
        .map(|(i, (t, s))| {
            vec![
                (report.start_index + i as u64).to_string(),
                fmt_interval_mid(t),
                fmt_interval_mid(s),
                fmt_interval_lo(t),
                fmt_interval_hi(t),
                fmt_interval_lo(s),
                fmt_interval_hi(s),
            ]
        })
        .collect();
    (columns, rows)
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// JSON rendering of a series report with its classification and the full
/// run configuration.
pub fn series_json(config: &ExperimentConfig, report: &SeriesReport) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"config\": {");
    let echo = config.echo();
    for (i, line) in echo.iter().enumerate() {
        let (k, v) = line.split_once('=').unwrap();
        let _ = write!(
            out,
            "{}\n    \"{}\": \"{}\"",
            if i > 0 { "," } else { "" },
            json_escape(k),
            json_escape(v)
        );
    }
    out.push_str("\n  },\n");
    let _ = writeln!(out, "  \"label\": \"{}\",", json_escape(&report.label));
    let _ = writeln!(
        out,
        "  \"classification\": \"{}\",",
        report.classification.as_str()
    );
    match report.growth_ratio {
        Some(r) => {
            let _ = writeln!(out, "  \"growth_ratio\": {},", fmt_f64(r));
        }
        None => {
            let _ = writeln!(out, "  \"growth_ratio\": null,");
        }
    }
    if let Some(cert) = &report.certificate {
        let _ = writeln!(
            out,
            "  \"certificate\": {{\"per_term_lower\": {}, \"materialized_terms\": {}, \"rule\": \"{}\"}},",
            cert.per_term_lower,
            cert.materialized_terms,
            json_escape(&cert.rule)
        );
    } else {
        let _ = writeln!(out, "  \"certificate\": null,");
    }
    out.push_str("  \"terms\": [\n");
    for (i, (t, s)) in report.terms.iter().zip(&report.partial_sums).enumerate() {
        let _ = write!(
            out,
            "    {{\"n\": {}, \"term_lo\": \"{}\", \"term_hi\": \"{}\", \"sum_lo\": \"{}\", \"sum_hi\": \"{}\"}}{}\n",
            report.start_index + i as u64,
            fmt_interval_lo(t),
            fmt_interval_hi(t),
            fmt_interval_lo(s),
            fmt_interval_hi(s),
            if i + 1 < report.terms.len() { "," } else { "" }
        );
    }
    out.push_str("  ]\n}\n");
    out
}

/// One named curve for the SVG plot.
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Minimal line plot, optionally log-scaled in x. Deterministic output.
pub fn line_plot_svg(title: &str, series: &[PlotSeries], log_x: bool) -> String {
    let tx = |x: f64| if log_x { x.ln() } else { x };
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            xmin = xmin.min(tx(x));
            xmax = xmax.max(tx(x));
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || xmin == xmax {
        xmax = xmin + 1.0;
    }
    if !ymin.is_finite() || ymin == ymax {
        ymax = ymin + 1.0;
    }
    let px = |x: f64| MARGIN + (tx(x) - xmin) / (xmax - xmin) * (SVG_W - 2.0 * MARGIN);
    let py = |y: f64| SVG_H - MARGIN - (y - ymin) / (ymax - ymin) * (SVG_H - 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"24\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        SVG_W / 2.0,
        title
    );
    // axes
    let _ = writeln!(
        out,
        "<line x1=\"{m}\" y1=\"{b:.1}\" x2=\"{r:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>",
        m = MARGIN,
        b = SVG_H - MARGIN,
        r = SVG_W - MARGIN
    );
    let _ = writeln!(
        out,
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b:.1}\" stroke=\"black\"/>",
        m = MARGIN,
        t = MARGIN,
        b = SVG_H - MARGIN
    );
    // corner labels
    let _ = writeln!(
        out,
        "<text x=\"{m}\" y=\"{y:.1}\" font-family=\"monospace\" font-size=\"11\">{v:.6e}</text>",
        m = 4.0,
        y = SVG_H - MARGIN,
        v = ymin
    );
    let _ = writeln!(
        out,
        "<text x=\"{m}\" y=\"{t}\" font-family=\"monospace\" font-size=\"11\">{v:.6e}</text>",
        m = 4.0,
        t = MARGIN,
        v = ymax
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">{name}</text>",
            x = MARGIN + 8.0,
            y = MARGIN + 16.0 + 16.0 * i as f64,
            name = s.name
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{convergents, PartialQuotients};
    use crate::dioph::{brjuno_partial, ConditionParams};

    fn sample_report() -> SeriesReport {
        let convs = convergents(&PartialQuotients::golden(), 12).unwrap();
        let _ = ConditionParams::brjuno();
        brjuno_partial(&convs, 10, 128).unwrap()
    }

    #[test]
    fn csv_header_roundtrip() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("command", "classify").unwrap();
        cfg.set("number", "golden").unwrap();
        cfg.set("depth", "10").unwrap();
        let report = sample_report();
        let (cols, rows) = series_rows(&report);
        let text = render_csv(&cfg, &cols, &rows);
        let recovered = crate::config::config_from_header(&text).unwrap();
        assert_eq!(recovered, cfg);
        assert!(text.lines().count() > 10);
    }

    #[test]
    fn json_is_parseable_shape() {
        let cfg = ExperimentConfig::default();
        let report = sample_report();
        let js = series_json(&cfg, &report);
        assert!(js.contains("\"classification\": \"CONVERGENT-TREND\""));
        assert!(js.contains("\"terms\": ["));
        // crude balance check
        assert_eq!(js.matches('{').count(), js.matches('}').count());
        assert_eq!(js.matches('[').count(), js.matches(']').count());
    }

    #[test]
    fn svg_deterministic() {
        let s = vec![PlotSeries {
            name: "u".into(),
            points: vec![(10.0, 1.0), (100.0, 2.0), (1000.0, 2.5)],
        }];
        let a = line_plot_svg("scan", &s, true);
        let b = line_plot_svg("scan", &s, true);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
    }
}
