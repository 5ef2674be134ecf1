//! Report types and their JSON, CSV and text renderings.
//!
//! JSON carries every number at full precision (shortest round-trip form).
//! Text output rounds to four decimals. No format contains timestamps, so
//! identical inputs always render identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tlsfit_core::economy::AXES;
use tlsfit_core::{ComparisonReport, EconomyIndicators, ErrorMetric, FittedFlat, PointCloud};

use crate::error::{CliError, Result};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(CliError::Usage(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<String>,
    pub columns: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<ErrorMetric>,
}

impl Metadata {
    pub fn new(input: &str, columns: Vec<String>, metric: Option<ErrorMetric>) -> Self {
        Self {
            tool: "tlsfit".into(),
            version: TOOL_VERSION.into(),
            input: input.into(),
            selection: None,
            columns,
            metric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDistance {
    pub label: String,
    pub distance: f64,
}

/// Outcome of `fit`: the fitted flat (N and P), its error, and the
/// distance of every point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: FittedFlat,
    pub metric: ErrorMetric,
    pub err: f64,
    pub per_point: Vec<LabeledDistance>,
    pub metadata: Metadata,
}

impl FitReport {
    pub fn new(
        model: FittedFlat,
        cloud: &PointCloud,
        metric: ErrorMetric,
        metadata: Metadata,
    ) -> Self {
        let stats = model.error();
        let per_point = stats
            .per_point_distance
            .iter()
            .enumerate()
            .map(|(i, &distance)| LabeledDistance {
                label: cloud.label(i),
                distance,
            })
            .collect();
        Self {
            err: stats.value(metric),
            metric,
            model,
            per_point,
            metadata,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOutput {
    pub comparison: ComparisonReport,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyReport {
    pub axes: Vec<String>,
    pub indicators: EconomyIndicators,
    pub metadata: Metadata,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn f4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn v4(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f4(*x)).collect();
    format!("({})", parts.join(", "))
}

fn csv_row(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

pub fn render_fit(report: &FitReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => Ok(fit_csv(report)),
        OutputFormat::Text => Ok(fit_text(report)),
    }
}

/// Long-format CSV: one `field,index,label,value` row per number.
fn fit_csv(r: &FitReport) -> String {
    let mut out = csv_row(&[
        "field".into(),
        "index".into(),
        "label".into(),
        "value".into(),
    ]);
    let push_vec = |out: &mut String, name: &str, v: &[f64]| {
        for (i, x) in v.iter().enumerate() {
            out.push_str(&csv_row(&[
                name.into(),
                i.to_string(),
                String::new(),
                x.to_string(),
            ]));
        }
    };
    match &r.model {
        FittedFlat::Line(l) => {
            push_vec(&mut out, "anchor", &l.anchor);
            push_vec(&mut out, "direction", &l.direction);
        }
        FittedFlat::Hyperplane(h) => {
            push_vec(&mut out, "normal", &h.normal);
            push_vec(&mut out, "centroid", &h.centroid);
            out.push_str(&csv_row(&[
                "offset".into(),
                String::new(),
                String::new(),
                h.offset.to_string(),
            ]));
        }
    }
    out.push_str(&csv_row(&[
        "err".into(),
        String::new(),
        r.metric.name().into(),
        r.err.to_string(),
    ]));
    for (i, d) in r.per_point.iter().enumerate() {
        out.push_str(&csv_row(&[
            "distance".into(),
            i.to_string(),
            d.label.clone(),
            d.distance.to_string(),
        ]));
    }
    out
}

fn fit_text(r: &FitReport) -> String {
    let mut out = String::new();
    let m = &r.metadata;
    let selection = m
        .selection
        .as_ref()
        .map(|s| format!(" [{s}]"))
        .unwrap_or_default();
    let _ = writeln!(out, "input:    {}{selection}", m.input);
    let _ = writeln!(out, "columns:  {}", m.columns.join(", "));
    match &r.model {
        FittedFlat::Line(l) => {
            let _ = writeln!(out, "geometry: line");
            let _ = writeln!(out, "point:    {}", v4(&l.anchor));
            let _ = writeln!(out, "direction: {}", v4(&l.direction));
        }
        FittedFlat::Hyperplane(h) => {
            let _ = writeln!(out, "geometry: plane");
            let _ = writeln!(out, "normal:   {}", v4(&h.normal));
            let _ = writeln!(out, "centroid: {}", v4(&h.centroid));
            let _ = writeln!(out, "offset:   {}", f4(h.offset));
        }
    }
    let _ = writeln!(out, "error ({}): {}", r.metric, f4(r.err));
    let _ = writeln!(out, "distances:");
    let width = r.per_point.iter().map(|d| d.label.len()).max().unwrap_or(0);
    for d in &r.per_point {
        let _ = writeln!(out, "  {:<width$}  {}", d.label, f4(d.distance));
    }
    out
}

pub fn render_comparison(c: &ComparisonOutput, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(c),
        OutputFormat::Csv => Ok(comparison_csv(&c.comparison)),
        OutputFormat::Text => Ok(comparison_text(c)),
    }
}

fn comparison_csv(c: &ComparisonReport) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = csv_row(&[
        "line".into(),
        "orientation".into(),
        "slope".into(),
        "intercept".into(),
        "inclination_deg".into(),
    ]);
    for (name, line) in [("ols", c.ols), ("conjugate", c.conjugate)] {
        match line {
            Some(l) => out.push_str(&csv_row(&[
                name.into(),
                match l.orientation {
                    tlsfit_core::Orientation::YonX => "y_on_x".into(),
                    tlsfit_core::Orientation::XonY => "x_on_y".into(),
                },
                l.slope.to_string(),
                l.intercept.to_string(),
                l.inclination_deg().to_string(),
            ])),
            None => out.push_str(&csv_row(&[
                name.into(),
                "unavailable".into(),
                String::new(),
                String::new(),
                String::new(),
            ])),
        }
    }
    out.push_str(&csv_row(&[
        "tls".into(),
        "y_on_x".into(),
        opt(c.tls.slope),
        opt(c.tls.intercept),
        c.tls.inclination_deg().to_string(),
    ]));
    out
}

fn comparison_text(c: &ComparisonOutput) -> String {
    let r = &c.comparison;
    let mut out = String::new();
    let _ = writeln!(out, "input:     {}", c.metadata.input);
    let _ = writeln!(out, "columns:   {}", c.metadata.columns.join(", "));
    let _ = writeln!(out, "centroid:  {}", v4(&r.centroid));
    match r.ols {
        Some(l) => {
            let _ = writeln!(
                out,
                "OLS:       y = {} x + {}",
                f4(l.slope),
                f4(l.intercept)
            );
        }
        None => {
            let _ = writeln!(out, "OLS:       unavailable (x is constant)");
        }
    }
    match r.conjugate {
        Some(l) => {
            let _ = writeln!(
                out,
                "conjugate: x = {} y + {}",
                f4(l.slope),
                f4(l.intercept)
            );
        }
        None => {
            let _ = writeln!(out, "conjugate: unavailable (y is constant)");
        }
    }
    match (r.tls.slope, r.tls.intercept) {
        (Some(k), Some(b)) => {
            let _ = writeln!(out, "TLS:       y = {} x + {}", f4(k), f4(b));
        }
        _ => {
            let _ = writeln!(out, "TLS:       x = {} (vertical)", f4(r.tls.anchor[0]));
        }
    }
    let _ = writeln!(out, "TLS direction: {}", v4(&r.tls.direction));
    let angle = |a: Option<f64>| a.map(f4).unwrap_or_else(|| "-".into());
    let _ = writeln!(out, "angle OLS/TLS:       {}", angle(r.angles.ols_tls));
    let _ = writeln!(
        out,
        "angle conjugate/TLS: {}",
        angle(r.angles.conjugate_tls)
    );
    let _ = writeln!(
        out,
        "angle OLS/conjugate: {}",
        angle(r.angles.ols_conjugate)
    );
    let between = match r.tls_between_scissors {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    };
    let _ = writeln!(out, "TLS between OLS lines: {between}");
    out
}

pub fn render_economy(r: &EconomyReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv => Ok(economy_csv(&r.indicators)),
        OutputFormat::Text => Ok(economy_text(r)),
    }
}

fn economy_csv(ind: &EconomyIndicators) -> String {
    let mut header: Vec<String> = vec!["country".into()];
    for prefix in ["normal", "centroid"] {
        header.extend(AXES.iter().map(|a| format!("{prefix}_{a}")));
    }
    header.extend(
        [
            "err",
            "metric",
            "slope_unemployment_gdp_deg",
            "slope_unemployment_inflation_deg",
            "slope_gdp_inflation_deg",
        ]
        .map(String::from),
    );
    let mut out = csv_row(&header);
    for (p, s) in ind.planes.iter().zip(&ind.slopes) {
        let mut row = vec![p.country.clone()];
        row.extend(p.plane.normal.iter().map(f64::to_string));
        row.extend(p.plane.centroid.iter().map(f64::to_string));
        row.push(p.err_reported.to_string());
        row.push(p.metric.name().into());
        row.extend(
            [
                s.unemployment_gdp,
                s.unemployment_inflation,
                s.gdp_inflation,
            ]
            .map(|x| x.to_string()),
        );
        out.push_str(&csv_row(&row));
    }
    out
}

fn economy_text(r: &EconomyReport) -> String {
    let ind = &r.indicators;
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", r.metadata.input);
    let _ = writeln!(out, "axes:  ({})", r.axes.join(", "));
    let metric = ind.planes.first().map(|p| p.metric.name()).unwrap_or("-");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<8} {:<28} {:<28} {:>10}",
        "country",
        "normal",
        "centroid",
        format!("err ({metric})")
    );
    for p in &ind.planes {
        let _ = writeln!(
            out,
            "{:<8} {:<28} {:<28} {:>10}",
            p.country,
            v4(&p.plane.normal),
            v4(&p.plane.centroid),
            f4(p.err_reported)
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "angles between planes (degrees):");
    let _ = write!(out, "{:<8}", "");
    for p in &ind.planes {
        let _ = write!(out, " {:>9}", p.country);
    }
    let _ = writeln!(out);
    for (p, row) in ind.planes.iter().zip(&ind.pairwise_angles_deg) {
        let _ = write!(out, "{:<8}", p.country);
        for a in row {
            let _ = write!(out, " {:>9}", f4(*a));
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "plane slopes against coordinate planes (degrees):");
    let _ = writeln!(
        out,
        "{:<8} {:>18} {:>24} {:>16}",
        "country", "unemployment-gdp", "unemployment-inflation", "gdp-inflation"
    );
    for (p, s) in ind.planes.iter().zip(&ind.slopes) {
        let _ = writeln!(
            out,
            "{:<8} {:>18} {:>24} {:>16}",
            p.country,
            f4(s.unemployment_gdp),
            f4(s.unemployment_inflation),
            f4(s.gdp_inflation)
        );
    }
    out
}
