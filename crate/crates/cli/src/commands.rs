use tlsfit_core::economy::AXES;
use tlsfit_core::{
    compare_ols_tls, economy_indicators, fit_hyperplane, fit_line, generate_line_cloud,
    ErrorMetric, FitError, FittedFlat, LineCloudSpec,
};

use crate::error::{CliError, Result};
use crate::input::{
    indicator_csv, parse_cloud_csv, parse_indicator_csv, read_input, CloudSelection, ColumnRef,
    BUILTIN_V4,
};
use crate::report::{
    render_comparison, render_economy, render_fit, ComparisonOutput, EconomyReport, FitReport,
    Metadata, OutputFormat,
};
use crate::scene::{build_scene, scene_json};
use crate::svg::{comparison_plot, emit_plot_svg, fit_plot, timeseries_plot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Geometry {
    Line,
    #[default]
    Plane,
}

/// A file produced next to standard output, written by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutput {
    pub stdout: String,
    pub artifacts: Vec<Artifact>,
}

#[derive(Debug, Clone)]
pub struct FitRequest {
    pub input: String,
    pub geometry: Geometry,
    pub columns: Vec<String>,
    pub label: Option<String>,
    /// Keep only rows whose `country` cell matches.
    pub country: Option<String>,
    pub format: OutputFormat,
    pub plot: bool,
    /// Coordinate indices shown in the plot.
    pub projection: (usize, usize),
    pub metric: ErrorMetric,
    pub delimiter: u8,
}

impl Default for FitRequest {
    fn default() -> Self {
        Self {
            input: BUILTIN_V4.into(),
            geometry: Geometry::default(),
            columns: Vec::new(),
            label: None,
            country: None,
            format: OutputFormat::default(),
            plot: false,
            projection: (0, 1),
            metric: ErrorMetric::default(),
            delimiter: b',',
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareRequest {
    pub input: String,
    /// Empty, or exactly the x and y columns.
    pub columns: Vec<String>,
    pub label: Option<String>,
    pub format: OutputFormat,
    pub plot: bool,
    pub delimiter: u8,
}

impl Default for CompareRequest {
    fn default() -> Self {
        Self {
            input: String::new(),
            columns: Vec::new(),
            label: None,
            format: OutputFormat::default(),
            plot: false,
            delimiter: b',',
        }
    }
}

#[derive(Debug, Clone)]
pub struct EconomyRequest {
    pub input: String,
    /// Countries to keep, in output order. Empty keeps all.
    pub countries: Vec<String>,
    pub metric: ErrorMetric,
    pub format: OutputFormat,
    pub plot: bool,
    pub scene: bool,
}

impl Default for EconomyRequest {
    fn default() -> Self {
        Self {
            input: BUILTIN_V4.into(),
            countries: Vec::new(),
            metric: ErrorMetric::default(),
            format: OutputFormat::default(),
            plot: false,
            scene: false,
        }
    }
}

fn selection(
    input: &str,
    columns: &[String],
    label: Option<&str>,
    country: Option<&str>,
    delimiter: u8,
) -> CloudSelection {
    let builtin = input == BUILTIN_V4;
    let columns: Vec<ColumnRef> = if columns.is_empty() && builtin {
        AXES.iter().map(|a| ColumnRef::new(*a)).collect()
    } else {
        columns.iter().map(ColumnRef::new).collect()
    };
    let label = label.or(builtin.then_some("year")).map(ColumnRef::new);
    CloudSelection {
        columns,
        label,
        filter: country.map(|c| (ColumnRef::new("country"), c.to_string())),
        delimiter,
    }
}

pub fn run_fit(req: &FitRequest) -> Result<CommandOutput> {
    let text = read_input(&req.input)?;
    let sel = selection(
        &req.input,
        &req.columns,
        req.label.as_deref(),
        req.country.as_deref(),
        req.delimiter,
    );
    let parsed = parse_cloud_csv(text.as_bytes(), &sel)?;
    if parsed.cloud.dim() < 2 {
        return Err(
            FitError::InvalidInput("fitting needs at least 2 coordinate columns".into()).into(),
        );
    }
    let model = match req.geometry {
        Geometry::Line => FittedFlat::Line(fit_line(&parsed.cloud)?),
        Geometry::Plane => FittedFlat::Hyperplane(fit_hyperplane(&parsed.cloud)?),
    };
    let mut metadata = Metadata::new(&req.input, parsed.column_names.clone(), Some(req.metric));
    metadata.selection = req.country.as_ref().map(|c| format!("country={c}"));

    let mut artifacts = Vec::new();
    if req.plot {
        let plot = fit_plot(&parsed.cloud, &model, &parsed.column_names, req.projection)?;
        artifacts.push(Artifact {
            name: "fit.svg".into(),
            contents: emit_plot_svg(&plot)?,
        });
    }
    let report = FitReport::new(model, &parsed.cloud, req.metric, metadata);
    Ok(CommandOutput {
        stdout: render_fit(&report, req.format)?,
        artifacts,
    })
}

pub fn run_compare(req: &CompareRequest) -> Result<CommandOutput> {
    if !(req.columns.is_empty() || req.columns.len() == 2) {
        return Err(CliError::Usage(
            "compare takes exactly two columns (x and y)".into(),
        ));
    }
    let text = read_input(&req.input)?;
    let sel = selection(
        &req.input,
        &req.columns,
        req.label.as_deref(),
        None,
        req.delimiter,
    );
    let parsed = parse_cloud_csv(text.as_bytes(), &sel)?;
    if parsed.cloud.dim() < 2 {
        return Err(
            FitError::InvalidInput("comparison needs two coordinate columns".into()).into(),
        );
    }
    let xs: Vec<f64> = parsed.cloud.points().iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = parsed.cloud.points().iter().map(|p| p[1]).collect();
    let names = parsed.column_names[..2].to_vec();
    let comparison = compare_ols_tls(&xs, &ys)?;

    let mut artifacts = Vec::new();
    if req.plot {
        artifacts.push(Artifact {
            name: "compare.svg".into(),
            contents: emit_plot_svg(&comparison_plot(&xs, &ys, &comparison, &names))?,
        });
    }
    let output = ComparisonOutput {
        comparison,
        metadata: Metadata::new(&req.input, names, None),
    };
    Ok(CommandOutput {
        stdout: render_comparison(&output, req.format)?,
        artifacts,
    })
}

pub fn run_economy(req: &EconomyRequest) -> Result<CommandOutput> {
    let text = read_input(&req.input)?;
    let mut series = parse_indicator_csv(text.as_bytes())?;
    if !req.countries.is_empty() {
        series = req
            .countries
            .iter()
            .map(|c| {
                series
                    .iter()
                    .find(|s| &s.country == c)
                    .cloned()
                    .ok_or_else(|| CliError::Schema(format!("no rows for country `{c}`")))
            })
            .collect::<Result<_>>()?;
    }
    let indicators = economy_indicators(&series, req.metric)?;

    let mut artifacts = Vec::new();
    if req.plot {
        for (axis, name) in AXES.iter().enumerate() {
            artifacts.push(Artifact {
                name: format!("economy_{name}.svg"),
                contents: emit_plot_svg(&timeseries_plot(&series, axis))?,
            });
        }
    }
    if req.scene {
        artifacts.push(Artifact {
            name: "economy_scene.json".into(),
            contents: scene_json(&build_scene(&series, &indicators.planes))?,
        });
    }
    let mut metadata = Metadata::new(
        &req.input,
        AXES.iter().map(|a| a.to_string()).collect(),
        Some(req.metric),
    );
    if !req.countries.is_empty() {
        metadata.selection = Some(format!("country={}", req.countries.join("|")));
    }
    let report = EconomyReport {
        axes: AXES.iter().map(|a| a.to_string()).collect(),
        indicators,
        metadata,
    };
    Ok(CommandOutput {
        stdout: render_economy(&report, req.format)?,
        artifacts,
    })
}

/// Synthetic cloud as CSV with columns `sample,x,y,z`.
pub fn gen_bumblebee(spec: &LineCloudSpec) -> Result<String> {
    let line = generate_line_cloud(spec)?;
    let mut out = String::from("sample,x,y,z\n");
    for (i, p) in line.cloud.points().iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i, p[0], p[1], p[2]));
    }
    Ok(out)
}

/// The CSV text of a builtin dataset.
pub fn dataset_csv(name: &str) -> Result<String> {
    if name != BUILTIN_V4 {
        return Err(CliError::Usage(format!("unknown builtin dataset `{name}`")));
    }
    Ok(indicator_csv(&tlsfit_core::v4_dataset()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sk_plane_from_builtin() {
        let out = run_fit(&FitRequest {
            country: Some("SK".into()),
            format: OutputFormat::Json,
            ..Default::default()
        })
        .unwrap();
        let report: FitReport = serde_json::from_str(&out.stdout).unwrap();
        match &report.model {
            FittedFlat::Hyperplane(h) => {
                assert!((h.centroid[0] - 13.8714).abs() < 1e-4);
                assert!((h.normal[0].abs() - 0.6704).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!((report.err - 4.2633).abs() < 1e-2);
        assert_eq!(report.per_point[0].label, "1994");
        assert_eq!(report.metadata.selection.as_deref(), Some("country=SK"));
    }

    #[test]
    fn err_is_recomputable_from_per_point() {
        let out = run_fit(&FitRequest {
            country: Some("PL".into()),
            format: OutputFormat::Json,
            ..Default::default()
        })
        .unwrap();
        let report: FitReport = serde_json::from_str(&out.stdout).unwrap();
        let d: Vec<f64> = report.per_point.iter().map(|p| p.distance).collect();
        assert!((report.metric.aggregate(&d) - report.err).abs() <= 1e-12);
    }

    #[test]
    fn economy_artifacts() {
        let out = run_economy(&EconomyRequest {
            plot: true,
            scene: true,
            ..Default::default()
        })
        .unwrap();
        let names: Vec<&str> = out.artifacts.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "economy_unemployment.svg",
                "economy_gdp_change.svg",
                "economy_inflation.svg",
                "economy_scene.json"
            ]
        );
    }

    #[test]
    fn unknown_country_is_rejected() {
        let err = run_economy(&EconomyRequest {
            countries: vec!["AT".into()],
            ..Default::default()
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn compare_rejects_three_columns() {
        let err = run_compare(&CompareRequest {
            input: BUILTIN_V4.into(),
            columns: vec!["a".into(), "b".into(), "c".into()],
            ..Default::default()
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn bumblebee_csv_shape() {
        let csv = gen_bumblebee(&LineCloudSpec {
            a: [0.0; 3],
            b: [1.0, 2.0, 3.0],
            n: 4,
            sigma: 0.0,
            seed: 1,
        })
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "sample,x,y,z");
        assert_eq!(lines[4], "3,1,2,3");
    }
}
