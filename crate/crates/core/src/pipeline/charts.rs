use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{PipelineError, TrendReport};
use crate::format::fixed2;
use crate::topics::TopicLabels;

const W: f64 = 720.0;
const H: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

type Series = (&'static str, &'static str, fn(&super::MonthRate) -> f64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartFiles {
    pub trend_svg: PathBuf,
    pub trend_csv: PathBuf,
    pub weights_svg: PathBuf,
    pub weights_csv: PathBuf,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn y_axis(out: &mut String, max: f64, ticks: usize, fmt: impl Fn(f64) -> String) {
    let plot_h = H - TOP - BOTTOM;
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>"#,
        H - BOTTOM
    );
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{LEFT}" y1="{y}" x2="{x}" y2="{y}" stroke="black"/>"#,
        y = H - BOTTOM,
        x = W - RIGHT
    );
    for i in 0..=ticks {
        let v = max * i as f64 / ticks as f64;
        let y = H - BOTTOM - plot_h * i as f64 / ticks as f64;
        let _ = writeln!(
            out,
            r##"<g class="y-tick"><line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#e0e0e0"/><text x="{}" y="{:.2}" text-anchor="end">{}</text></g>"##,
            LEFT - 4.0,
            W - RIGHT,
            LEFT - 6.0,
            y + 4.0,
            fmt(v)
        );
    }
}

fn x_tick(out: &mut String, x: f64, label: &str) {
    let _ = writeln!(
        out,
        r#"<g class="x-tick"><line x1="{x:.2}" y1="{y}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text></g>"#,
        H - BOTTOM + 4.0,
        H - BOTTOM + 18.0,
        escape(label),
        y = H - BOTTOM,
    );
}

fn trend_svg(trend: &TrendReport) -> String {
    let mut out = String::new();
    header(
        &mut out,
        "Share of negative and non-negative documents by month",
    );
    y_axis(&mut out, 100.0, 5, |v| format!("{v:.0}%"));
    let n = trend.months.len();
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let xs: Vec<f64> = (0..n)
        .map(|i| LEFT + plot_w * (i as f64 + 0.5) / n as f64)
        .collect();
    for (x, m) in xs.iter().zip(&trend.months) {
        x_tick(&mut out, *x, &m.month);
    }
    let series: [Series; 2] = [
        ("NEG", "#c0392b", |m| m.neg_rate_2dp),
        ("NONNEG", "#2471a3", |m| m.nonneg_rate_2dp),
    ];
    for (i, (name, color, value)) in series.iter().enumerate() {
        let points: Vec<String> = xs
            .iter()
            .zip(&trend.months)
            .map(|(x, m)| format!("{x:.2},{:.2}", H - BOTTOM - plot_h * value(m) / 100.0))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="series" data-series="{name}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.join(" ")
        );
        for (x, m) in xs.iter().zip(&trend.months) {
            let y = H - BOTTOM - plot_h * value(m) / 100.0;
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"><title>{} {name}: {}%</title></circle>"#,
                m.month,
                fixed2(value(m))
            );
        }
        let ly = TOP + 20.0 * i as f64;
        let lx = W - RIGHT + 16.0;
        let _ = writeln!(
            out,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{name}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn weights_svg(weights: &[(usize, f64)], labels: &TopicLabels) -> String {
    let mut out = String::new();
    header(&mut out, "Average topic weight per document");
    let max = weights.iter().map(|w| w.1).fold(0.0, f64::max);
    let top = if max > 0.0 {
        (max * 10.0).ceil() / 10.0
    } else {
        1.0
    };
    y_axis(&mut out, top, 5, |v| format!("{v:.2}"));
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let n = weights.len().max(1);
    let slot = plot_w / n as f64;
    for (i, &(k, w)) in weights.iter().enumerate() {
        let h = plot_h * w / top;
        let x = LEFT + slot * i as f64 + slot * 0.15;
        let name = match labels.label(k) {
            "" => format!("topic {k}"),
            l => l.to_string(),
        };
        let _ = writeln!(
            out,
            r##"<rect class="bar" data-topic="{k}" x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="#5d6d7e"><title>{}: {w}</title></rect>"##,
            H - BOTTOM - h,
            slot * 0.7,
            escape(&name)
        );
        x_tick(&mut out, x + slot * 0.35, &k.to_string());
    }
    out.push_str("</svg>\n");
    out
}

fn write(path: &Path, data: &[u8]) -> Result<(), PipelineError> {
    std::fs::write(path, data).map_err(|e| PipelineError::io(path, e))
}

fn trend_csv(trend: &TrendReport) -> Result<Vec<u8>, PipelineError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "month",
        "n_docs",
        "n_neg",
        "n_nonneg",
        "neg_rate",
        "nonneg_rate",
    ])?;
    for m in trend.months.iter().chain([&trend.overall]) {
        w.write_record([
            m.month.clone(),
            m.n_docs.to_string(),
            m.n_neg.to_string(),
            m.n_nonneg.to_string(),
            fixed2(m.neg_rate_2dp),
            fixed2(m.nonneg_rate_2dp),
        ])?;
    }
    w.into_inner()
        .map_err(|e| PipelineError::Data(e.to_string()))
}

fn weights_csv(weights: &[(usize, f64)], labels: &TopicLabels) -> Result<Vec<u8>, PipelineError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["topic", "label", "mean_weight"])?;
    for &(k, v) in weights {
        w.write_record([k.to_string(), labels.label(k).to_string(), v.to_string()])?;
    }
    w.into_inner()
        .map_err(|e| PipelineError::Data(e.to_string()))
}

/// Writes the monthly trend line chart and the topic-weight bar chart as
/// SVG, each next to a CSV holding exactly the plotted values.
///
/// Nothing is written when the trend has no months.
pub fn emit_charts(
    trend: &TrendReport,
    weights: &[(usize, f64)],
    labels: &TopicLabels,
    dir: &Path,
) -> Result<ChartFiles, PipelineError> {
    if trend.months.is_empty() {
        return Err(PipelineError::EmptyMonthRange);
    }
    std::fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
    let files = ChartFiles {
        trend_svg: dir.join("trend.svg"),
        trend_csv: dir.join("trend.csv"),
        weights_svg: dir.join("topic_weights.svg"),
        weights_csv: dir.join("topic_weights.csv"),
    };
    write(&files.trend_csv, &trend_csv(trend)?)?;
    write(&files.trend_svg, trend_svg(trend).as_bytes())?;
    write(&files.weights_csv, &weights_csv(weights, labels)?)?;
    write(&files.weights_svg, weights_svg(weights, labels).as_bytes())?;
    Ok(files)
}
