//! Delimiter-separated input: point clouds and indicator tables.
//!
//! Every input has a header row and uses `.` as the decimal separator. The
//! pseudo-path `builtin:v4` stands for the embedded V4 indicator table,
//! rendered to CSV and read back through the same parser as a file.

use std::collections::HashMap;
use std::fs;
use std::io::Read;

use tlsfit_core::{v4_dataset, FitError, IndicatorSeries, PointCloud};

use crate::error::{CliError, Result};

pub const BUILTIN_V4: &str = "builtin:v4";

/// Column header used by indicator tables, in order.
pub const INDICATOR_HEADER: [&str; 5] =
    ["country", "year", "unemployment", "gdp_change", "inflation"];

/// A column given by header name or, failing that, by 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnRef(pub String);

impl ColumnRef {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    fn resolve(&self, headers: &[String]) -> Result<usize> {
        if let Some(i) = headers.iter().position(|h| h == &self.0) {
            return Ok(i);
        }
        match self.0.parse::<usize>() {
            Ok(i) if i < headers.len() => Ok(i),
            _ => Err(CliError::Schema(format!(
                "no column `{}` (header: {})",
                self.0,
                headers.join(", ")
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CloudSelection {
    /// Coordinate columns in output order. Empty selects every column that
    /// is neither the label nor a filter column.
    pub columns: Vec<ColumnRef>,
    pub label: Option<ColumnRef>,
    /// Keep only rows whose cell in this column equals the value.
    pub filter: Option<(ColumnRef, String)>,
    pub delimiter: u8,
}

impl Default for CloudSelection {
    fn default() -> Self {
        Self {
            columns: Vec::new(),
            label: None,
            filter: None,
            delimiter: b',',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCloud {
    pub cloud: PointCloud,
    pub column_names: Vec<String>,
}

/// Reads the text behind `input`: a file path or `builtin:v4`.
pub fn read_input(input: &str) -> Result<String> {
    if input == BUILTIN_V4 {
        return Ok(indicator_csv(&v4_dataset()));
    }
    if let Some(rest) = input.strip_prefix("builtin:") {
        return Err(CliError::Usage(format!("unknown builtin dataset `{rest}`")));
    }
    fs::read_to_string(input).map_err(|source| CliError::Input {
        path: input.to_string(),
        source,
    })
}

fn parse_number(cell: &str, line: u64, column: &str) -> Result<f64> {
    match cell.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Parse {
            line,
            column: column.to_string(),
            value: cell.to_string(),
        }),
    }
}

pub fn parse_cloud_csv<R: Read>(reader: R, selection: &CloudSelection) -> Result<ParsedCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(selection.delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();

    let label = selection
        .label
        .as_ref()
        .map(|c| c.resolve(&headers))
        .transpose()?;
    let filter = match &selection.filter {
        Some((col, value)) => Some((col.resolve(&headers)?, value.as_str())),
        None => None,
    };
    let columns: Vec<usize> = if selection.columns.is_empty() {
        (0..headers.len())
            .filter(|&i| Some(i) != label && Some(i) != filter.map(|f| f.0))
            .collect()
    } else {
        selection
            .columns
            .iter()
            .map(|c| c.resolve(&headers))
            .collect::<Result<_>>()?
    };
    if columns.is_empty() {
        return Err(CliError::Schema("no coordinate columns selected".into()));
    }

    let mut points = Vec::new();
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if let Some((col, value)) = filter {
            if record.get(col) != Some(value) {
                continue;
            }
        }
        let point = columns
            .iter()
            .map(|&c| parse_number(record.get(c).unwrap_or(""), line, &headers[c]))
            .collect::<Result<Vec<f64>>>()?;
        points.push(point);
        if let Some(l) = label {
            labels.push(record.get(l).unwrap_or("").to_string());
        }
    }
    if points.is_empty() {
        return Err(FitError::InvalidInput("input has no data rows".into()).into());
    }
    let cloud = match label {
        Some(_) => PointCloud::with_labels(points, labels)?,
        None => PointCloud::new(points)?,
    };
    Ok(ParsedCloud {
        cloud,
        column_names: columns.iter().map(|&c| headers[c].clone()).collect(),
    })
}

/// Reads an indicator table with columns
/// `country,year,unemployment,gdp_change,inflation` (any order). Countries
/// keep the order of their first row.
pub fn parse_indicator_csv<R: Read>(reader: R) -> Result<Vec<IndicatorSeries>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let idx: Vec<usize> = INDICATOR_HEADER
        .iter()
        .map(|name| ColumnRef::new(*name).resolve(&headers))
        .collect::<Result<_>>()?;

    let mut order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<(i32, f64, f64, f64)>> = HashMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |k: usize| record.get(idx[k]).unwrap_or("");
        let country = cell(0).to_string();
        let year = cell(1).parse::<i32>().map_err(|_| CliError::Parse {
            line,
            column: INDICATOR_HEADER[1].into(),
            value: cell(1).into(),
        })?;
        let values = (2..5)
            .map(|k| parse_number(cell(k), line, INDICATOR_HEADER[k]))
            .collect::<Result<Vec<f64>>>()?;
        if !rows.contains_key(&country) {
            order.push(country.clone());
        }
        rows.entry(country)
            .or_default()
            .push((year, values[0], values[1], values[2]));
    }
    if order.is_empty() {
        return Err(FitError::InvalidInput("input has no data rows".into()).into());
    }
    order
        .into_iter()
        .map(|c| {
            let r = rows.remove(&c).unwrap_or_default();
            IndicatorSeries::from_rows(c, r).map_err(CliError::from)
        })
        .collect()
}

/// Renders indicator series as CSV. Numbers use the shortest decimal form
/// that reads back to the same `f64`.
pub fn indicator_csv(series: &[IndicatorSeries]) -> String {
    let mut out = INDICATOR_HEADER.join(",");
    out.push('\n');
    for s in series {
        for i in 0..s.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.country, s.years[i], s.unemployment[i], s.gdp_change[i], s.inflation[i]
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(names: &[&str]) -> Vec<ColumnRef> {
        names.iter().map(|n| ColumnRef::new(*n)).collect()
    }

    #[test]
    fn selects_columns_and_labels() {
        let text = "year,u,g,i\n1994,13.7,4.8,13.4\n1995,13.1,6.7,9.9\n";
        let sel = CloudSelection {
            columns: cols(&["u", "g", "i"]),
            label: Some(ColumnRef::new("year")),
            ..Default::default()
        };
        let parsed = parse_cloud_csv(text.as_bytes(), &sel).unwrap();
        assert_eq!(parsed.cloud.points()[0], vec![13.7, 4.8, 13.4]);
        assert_eq!(parsed.cloud.label(0), "1994");
        assert_eq!(parsed.column_names, ["u", "g", "i"]);
    }

    #[test]
    fn columns_by_index_and_reordered() {
        let text = "a,b,c\n1,2,3\n";
        let sel = CloudSelection {
            columns: cols(&["2", "a"]),
            ..Default::default()
        };
        let parsed = parse_cloud_csv(text.as_bytes(), &sel).unwrap();
        assert_eq!(parsed.cloud.points()[0], vec![3.0, 1.0]);
    }

    #[test]
    fn default_columns_skip_label_and_filter() {
        let text = "country,year,x,y\nA,1,1,2\nB,1,5,6\nA,2,3,4\n";
        let sel = CloudSelection {
            label: Some(ColumnRef::new("year")),
            filter: Some((ColumnRef::new("country"), "A".into())),
            ..Default::default()
        };
        let parsed = parse_cloud_csv(text.as_bytes(), &sel).unwrap();
        assert_eq!(parsed.cloud.points(), &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(parsed.column_names, ["x", "y"]);
    }

    #[test]
    fn header_only_is_invalid_input() {
        let err = parse_cloud_csv("x,y\n".as_bytes(), &CloudSelection::default()).unwrap_err();
        assert!(matches!(err, CliError::Fit(FitError::InvalidInput(_))));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let text = "x,y\n1,2\n3,n/a\n";
        match parse_cloud_csv(text.as_bytes(), &CloudSelection::default()).unwrap_err() {
            CliError::Parse {
                line,
                column,
                value,
            } => {
                assert_eq!(line, 3);
                assert_eq!(column, "y");
                assert_eq!(value, "n/a");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infinite_values_are_rejected() {
        let err =
            parse_cloud_csv("x,y\n1,inf\n".as_bytes(), &CloudSelection::default()).unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
    }

    #[test]
    fn missing_column_is_a_schema_error() {
        let sel = CloudSelection {
            columns: cols(&["x", "z"]),
            ..Default::default()
        };
        let err = parse_cloud_csv("x,y\n1,2\n".as_bytes(), &sel).unwrap_err();
        match &err {
            CliError::Schema(msg) => assert!(msg.contains("`z`")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semicolon_delimiter() {
        let sel = CloudSelection {
            delimiter: b';',
            ..Default::default()
        };
        let parsed = parse_cloud_csv("x;y\n1.5;2\n".as_bytes(), &sel).unwrap();
        assert_eq!(parsed.cloud.points()[0], vec![1.5, 2.0]);
    }

    #[test]
    fn builtin_round_trips() {
        let text = read_input(BUILTIN_V4).unwrap();
        assert!(text.starts_with(
            "country,year,unemployment,gdp_change,inflation\nSK,1994,13.7,4.8,13.4\n"
        ));
        assert_eq!(parse_indicator_csv(text.as_bytes()).unwrap(), v4_dataset());
    }

    #[test]
    fn indicator_rows_in_any_order() {
        let text = "year,country,inflation,gdp_change,unemployment\n2001,X,3,2,1\n2000,X,6,5,4\n";
        let s = parse_indicator_csv(text.as_bytes()).unwrap();
        assert_eq!(s[0].years, vec![2000, 2001]);
        assert_eq!(s[0].unemployment, vec![4.0, 1.0]);
        assert_eq!(s[0].inflation, vec![6.0, 3.0]);
    }

    #[test]
    fn indicator_schema_errors() {
        let err = parse_indicator_csv("country,year,u\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
        let err = parse_indicator_csv(
            "country,year,unemployment,gdp_change,inflation\nX,199x,1,2,3\n".as_bytes(),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
    }

    #[test]
    fn unknown_builtin_and_missing_file() {
        assert!(matches!(read_input("builtin:v5"), Err(CliError::Usage(_))));
        assert!(matches!(
            read_input("/nonexistent/data.csv"),
            Err(CliError::Input { .. })
        ));
    }
}
