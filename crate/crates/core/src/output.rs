//! Serialization of sweep results: a fixed-schema CSV, a JSON mirror of the
//! full result, and a small self-contained SVG plot.
//!
//! The CSV is the determinism anchor: identical sweeps must produce
//! byte-identical CSV regardless of worker count, so floats are printed with
//! 17 significant digits (exact f64 round trip) and no timing or environment
//! information is included. The JSON document carries the full result,
//! including wall time, which is the one field allowed to differ between
//! repeated runs.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use thiserror::Error;

use crate::sweep::{Spacing, SweepPoint, SweepResult};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Fixed CSV column set, in order.
pub const CSV_HEADER: &str = "axis1,axis2,mean_n_a,g2,g3,regime,converged,residual";

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn csv_row(point: &SweepPoint) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        fmt_f64(point.axis1),
        fmt_opt(point.axis2),
        fmt_opt(point.mean_n_a),
        fmt_opt(point.g2),
        fmt_opt(point.g3),
        point.regime.as_deref().unwrap_or(""),
        point.converged,
        fmt_opt(point.residual),
    )
}

/// Renders the whole result as CSV text (trailing newline included).
pub fn csv_string(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for point in &result.points {
        out.push_str(&csv_row(point));
        out.push('\n');
    }
    out
}

/// Renders the full result (config echo, points, wall time, version) as
/// pretty-printed JSON.
pub fn json_string(result: &SweepResult) -> Result<String, OutputError> {
    Ok(serde_json::to_string_pretty(result)?)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;

struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    pixel_lo: f64,
    pixel_hi: f64,
}

impl Scale {
    fn new(values: &[f64], log: bool, pixel_lo: f64, pixel_hi: f64) -> Self {
        let transformed: Vec<f64> =
            values.iter().map(|&v| if log { v.log10() } else { v }).collect();
        let mut lo = transformed.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = transformed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        Scale { lo, hi, log, pixel_lo, pixel_hi }
    }

    fn map(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        let frac = (t - self.lo) / (self.hi - self.lo);
        self.pixel_lo + frac * (self.pixel_hi - self.pixel_lo)
    }

    fn label(&self, endpoint_lo: bool) -> String {
        let t = if endpoint_lo { self.lo } else { self.hi };
        let v = if self.log { 10f64.powf(t) } else { t };
        format!("{v:.3e}")
    }
}

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{title}</text>\n",
        WIDTH / 2.0
    )
}

fn svg_axes(xlabel: &str, ylabel: &str, x: &Scale, y: &Scale) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<rect x=\"{m}\" y=\"{m}\" width=\"{w:.1}\" height=\"{h:.1}\" fill=\"none\" \
         stroke=\"black\"/>",
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN,
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">{xlabel}</text>",
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\" transform=\"rotate(-90 16 {:.1})\">{ylabel}</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (scale, lo) in [(x, true), (x, false)] {
        let px = if lo { scale.pixel_lo } else { scale.pixel_hi };
        let _ = writeln!(
            s,
            "<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"10\">{}</text>",
            HEIGHT - MARGIN + 16.0,
            scale.label(lo)
        );
    }
    for (scale, lo) in [(y, true), (y, false)] {
        let py = if lo { scale.pixel_lo } else { scale.pixel_hi };
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{py:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"10\">{}</text>",
            MARGIN - 6.0,
            scale.label(lo)
        );
    }
    s
}

fn svg_line_plot(result: &SweepResult) -> String {
    let xlabel = result.config.axis1.param.name();
    let data: Vec<(f64, f64)> = result
        .points
        .iter()
        .filter_map(|p| p.g2.map(|g2| (p.axis1, g2)))
        .collect();
    let mut svg = svg_header(&format!("g2 vs {xlabel}"));
    if data.is_empty() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"14\">no converged points</text>\n</svg>",
            WIDTH / 2.0,
            HEIGHT / 2.0
        );
        return svg;
    }
    let log_x = result.config.axis1.spacing == Spacing::Log && data.iter().all(|&(x, _)| x > 0.0);
    let log_y = data.iter().all(|&(_, y)| y > 0.0);
    let xs: Vec<f64> = data.iter().map(|&(x, _)| x).collect();
    let ys: Vec<f64> = data.iter().map(|&(_, y)| y).collect();
    let x = Scale::new(&xs, log_x, MARGIN, WIDTH - MARGIN);
    let y = Scale::new(&ys, log_y, HEIGHT - MARGIN, MARGIN);
    svg.push_str(&svg_axes(
        xlabel,
        if log_y { "g2 (log)" } else { "g2" },
        &x,
        &y,
    ));
    let mut path = String::new();
    for (i, &(px, py)) in data.iter().enumerate() {
        let _ = write!(
            path,
            "{}{:.2} {:.2}",
            if i == 0 { "M" } else { " L" },
            x.map(px),
            y.map(py)
        );
    }
    let _ = writeln!(
        svg,
        "<path d=\"{path}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n</svg>"
    );
    svg
}

fn svg_heatmap(result: &SweepResult) -> String {
    let axis1 = &result.config.axis1;
    let axis2 = result.config.axis2.as_ref().expect("heatmap needs two axes");
    let (n1, n2) = (axis1.count, axis2.count);
    let mut svg = svg_header(&format!("g2 over ({}, {})", axis1.param, axis2.param));

    let logs: Vec<Option<f64>> = result
        .points
        .iter()
        .map(|p| p.g2.filter(|&v| v > 0.0).map(f64::log10))
        .collect();
    let finite: Vec<f64> = logs.iter().flatten().copied().collect();
    let (lo, hi) = if finite.is_empty() {
        (0.0, 1.0)
    } else {
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) }
    };

    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let (cell_w, cell_h) = (plot_w / n1 as f64, plot_h / n2 as f64);
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let flat = i1 * n2 + i2;
            let fill = match logs.get(flat).copied().flatten() {
                Some(v) => {
                    let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
                    let shade = (255.0 * (1.0 - t)) as u8;
                    format!("rgb({shade},{shade},255)")
                }
                None => "rgb(200,200,200)".to_string(),
            };
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>",
                MARGIN + i1 as f64 * cell_w,
                // axis2 grows upward from the bottom edge.
                HEIGHT - MARGIN - (i2 + 1) as f64 * cell_h,
                cell_w,
                cell_h,
            );
        }
    }

    let x = Scale::new(&axis1.values(), false, MARGIN + cell_w / 2.0, WIDTH - MARGIN - cell_w / 2.0);
    let y = Scale::new(
        &axis2.values(),
        false,
        HEIGHT - MARGIN - cell_h / 2.0,
        MARGIN + cell_h / 2.0,
    );
    svg.push_str(&svg_axes(axis1.param.name(), axis2.param.name(), &x, &y));
    if let Some(overlay) = &result.config.overlay {
        let mut path = String::new();
        for (i, &(ox, oy)) in overlay.points.iter().enumerate() {
            let _ = write!(
                path,
                "{}{:.2} {:.2}",
                if i == 0 { "M" } else { " L" },
                x.map(ox),
                y.map(oy)
            );
        }
        let _ = writeln!(
            svg,
            "<path d=\"{path}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" \
             stroke-dasharray=\"5 3\"/>"
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Renders a plot of the result: a g2 line plot for one axis, a g2 heatmap
/// (with the overlay curve, if any) for two.
pub fn svg_string(result: &SweepResult) -> String {
    match result.config.axis2 {
        None => svg_line_plot(result),
        Some(_) => svg_heatmap(result),
    }
}

/// Writes every output format configured in the result's own `outputs`
/// section, creating parent directories as needed. Returns the paths written.
pub fn write_outputs(result: &SweepResult) -> Result<Vec<PathBuf>, OutputError> {
    type Render = fn(&SweepResult) -> Result<String, OutputError>;
    let outputs = &result.config.outputs;
    let mut written = Vec::new();
    let targets: [(&Option<PathBuf>, Render); 3] = [
        (&outputs.csv, |r| Ok(csv_string(r))),
        (&outputs.json, json_string),
        (&outputs.svg, |r| Ok(svg_string(r))),
    ];
    for (path, render) in targets {
        if let Some(path) = path {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, render(result)?)?;
            written.push(path.clone());
        }
    }
    Ok(written)
}
