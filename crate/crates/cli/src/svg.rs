//! Deterministic SVG charts: scatter points with fitted lines, and
//! per-indicator time series.
//!
//! The canvas is always 800×600. Axis ranges snap outward to "nice" tick
//! steps (1, 2 or 5 times a power of ten, about six ticks per axis) after
//! 5% padding around the data. Fitted lines are infinite and are clipped to
//! the axis box. Coordinates are printed with two decimals, so identical
//! input gives byte-identical output.

use std::fmt::Write as _;

use tlsfit_core::economy::AXES;
use tlsfit_core::{ComparisonReport, FitError, FittedFlat, IndicatorSeries, PointCloud};

use crate::error::Result;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const TARGET_TICKS: f64 = 6.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<[f64; 2]>,
    pub lines: Vec<PlotLine>,
    pub series: Vec<Series>,
}

/// An infinite line through `anchor` along `direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotLine {
    pub label: String,
    pub anchor: [f64; 2],
    pub direction: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    step: f64,
}

impl Axis {
    fn fit(min: f64, max: f64) -> Self {
        let (mut min, mut max) = (min, max);
        if max - min <= f64::EPSILON * max.abs().max(1.0) {
            min -= 1.0;
            max += 1.0;
        }
        let pad = 0.05 * (max - min);
        min -= pad;
        max += pad;
        let step = nice_step((max - min) / TARGET_TICKS);
        Axis {
            lo: (min / step).floor() * step,
            hi: (max / step).ceil() * step,
            step,
        }
    }

    fn ticks(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step).round() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }

    fn label(&self, v: f64) -> String {
        let decimals = (-self.step.log10().floor()).max(0.0) as usize;
        let s = format!("{v:.decimals$}");
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

struct Frame {
    x: Axis,
    y: Axis,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.lo) / (self.x.hi - self.x.lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.lo) / (self.y.hi - self.y.lo) * (HEIGHT - TOP - BOTTOM)
    }

    /// Clips the infinite line to the axis box (Liang–Barsky).
    fn clip(&self, line: &PlotLine) -> Option<([f64; 2], [f64; 2])> {
        let [ax, ay] = line.anchor;
        let [dx, dy] = line.direction;
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for (a, d, lo, hi) in [
            (ax, dx, self.x.lo, self.x.hi),
            (ay, dy, self.y.lo, self.y.hi),
        ] {
            if d == 0.0 {
                if a < lo || a > hi {
                    return None;
                }
                continue;
            }
            let (ta, tb) = ((lo - a) / d, (hi - a) / d);
            t0 = t0.max(ta.min(tb));
            t1 = t1.min(ta.max(tb));
        }
        if t0 >= t1 {
            return None;
        }
        Some(([ax + t0 * dx, ay + t0 * dy], [ax + t1 * dx, ay + t1 * dy]))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn emit_plot_svg(plot: &Plot) -> Result<String> {
    let all: Vec<[f64; 2]> = plot
        .points
        .iter()
        .chain(plot.series.iter().flat_map(|s| &s.points))
        .copied()
        .collect();
    if all.is_empty() {
        return Err(FitError::InvalidInput("nothing to plot".into()).into());
    }
    if all.iter().flatten().any(|v| !v.is_finite()) {
        return Err(FitError::InvalidInput("plot data must be finite".into()).into());
    }
    let range = |k: usize| {
        all.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[k]), hi.max(p[k]))
            })
    };
    let (x0, x1) = range(0);
    let (y0, y1) = range(1);
    let f = Frame {
        x: Axis::fit(x0, x1),
        y: Axis::fit(y0, y1),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text class="title" x="400" y="30" text-anchor="middle" font-size="18">{}</text>"#,
        escape(&plot.title)
    );
    let (left, right, top, bottom) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for v in f.x.ticks() {
        let x = f.px(v);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text class="tick-label" x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
            bottom + 20.0,
            f.x.label(v)
        );
    }
    for v in f.y.ticks() {
        let y = f.py(v);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text class="tick-label" x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{}</text>"#,
            left - 8.0,
            y + 4.0,
            f.y.label(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        0.5 * (left + right),
        HEIGHT - 20.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="20" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.2})">{}</text>"#,
        0.5 * (top + bottom),
        0.5 * (top + bottom),
        escape(&plot.y_label)
    );

    let mut legend: Vec<(&str, &str)> = Vec::new();
    for (k, series) in plot.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = series
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", f.px(p[0]), f.py(p[1])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for p in &series.points {
            let _ = writeln!(
                s,
                r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                f.px(p[0]),
                f.py(p[1])
            );
        }
        legend.push((&series.label, color));
    }
    for (k, line) in plot.lines.iter().enumerate() {
        let color = PALETTE[(plot.series.len() + k) % PALETTE.len()];
        if let Some((a, b)) = f.clip(line) {
            let _ = writeln!(
                s,
                r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                f.px(a[0]),
                f.py(a[1]),
                f.px(b[0]),
                f.py(b[1])
            );
            legend.push((&line.label, color));
        }
    }
    for p in &plot.points {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            f.px(p[0]),
            f.py(p[1])
        );
    }
    for (k, (label, color)) in legend.iter().enumerate() {
        let y = top + 15.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<rect class="legend-swatch" x="{:.2}" y="{:.2}" width="14" height="4" fill="{color}"/>"#,
            right - 150.0,
            y - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            right - 130.0,
            y + 2.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Scatter of two coordinates of a cloud with the fitted flat's trace.
///
/// A line is drawn along its projected direction. A hyperplane is drawn as
/// its intersection with the plane through the centroid spanned by the two
/// chosen axes. Nothing is drawn when the projection degenerates to a point
/// or fills the view.
pub fn fit_plot(
    cloud: &PointCloud,
    model: &FittedFlat,
    names: &[String],
    projection: (usize, usize),
) -> Result<Plot> {
    let (i, j) = projection;
    let dim = cloud.dim();
    if dim < 2 || i >= dim || j >= dim || i == j {
        return Err(FitError::InvalidInput(format!(
            "cannot project {dim}-dimensional data onto axes ({i}, {j})"
        ))
        .into());
    }
    let (anchor, direction, label) = match model {
        FittedFlat::Line(l) => (
            [l.anchor[i], l.anchor[j]],
            [l.direction[i], l.direction[j]],
            "TLS line",
        ),
        FittedFlat::Hyperplane(h) => (
            [h.centroid[i], h.centroid[j]],
            [-h.normal[j], h.normal[i]],
            "TLS plane trace",
        ),
    };
    let mut lines = Vec::new();
    if direction[0].hypot(direction[1]) > 1e-12 {
        lines.push(PlotLine {
            label: label.into(),
            anchor,
            direction,
        });
    }
    let name = |k: usize| names.get(k).cloned().unwrap_or_else(|| format!("x{k}"));
    Ok(Plot {
        title: format!("{} vs {}", name(j), name(i)),
        x_label: name(i),
        y_label: name(j),
        points: cloud.points().iter().map(|p| [p[i], p[j]]).collect(),
        lines,
        series: Vec::new(),
    })
}

/// The three regression lines over the 2D scatter.
pub fn comparison_plot(
    xs: &[f64],
    ys: &[f64],
    report: &ComparisonReport,
    names: &[String],
) -> Plot {
    let mut lines = Vec::new();
    if let Some(l) = report.ols {
        lines.push(PlotLine {
            label: "OLS (y on x)".into(),
            anchor: report.centroid,
            direction: l.direction(),
        });
    }
    if let Some(l) = report.conjugate {
        lines.push(PlotLine {
            label: "conjugate (x on y)".into(),
            anchor: report.centroid,
            direction: l.direction(),
        });
    }
    lines.push(PlotLine {
        label: "orthogonal (TLS)".into(),
        anchor: report.tls.anchor,
        direction: report.tls.direction,
    });
    let name = |k: usize| {
        names
            .get(k)
            .cloned()
            .unwrap_or_else(|| ["x", "y"][k].into())
    };
    Plot {
        title: "classical versus orthogonal regression".into(),
        x_label: name(0),
        y_label: name(1),
        points: xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect(),
        lines,
        series: Vec::new(),
    }
}

/// One indicator over time, a line per country. `axis` indexes
/// unemployment, GDP change, inflation.
pub fn timeseries_plot(series: &[IndicatorSeries], axis: usize) -> Plot {
    let column = |s: &IndicatorSeries| match axis {
        0 => s.unemployment.clone(),
        1 => s.gdp_change.clone(),
        _ => s.inflation.clone(),
    };
    Plot {
        title: format!("{} by year", AXES[axis.min(2)]),
        x_label: "year".into(),
        y_label: format!("{} [%]", AXES[axis.min(2)]),
        points: Vec::new(),
        lines: Vec::new(),
        series: series
            .iter()
            .map(|s| Series {
                label: s.country.clone(),
                points: s
                    .years
                    .iter()
                    .zip(column(s))
                    .map(|(&y, v)| [f64::from(y), v])
                    .collect(),
            })
            .collect(),
    }
}
