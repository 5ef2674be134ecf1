//! National economies as trajectories in a three-dimensional state space.
//!
//! Each year becomes the point (unemployment, GDP change, inflation), all in
//! percent. The TLS plane through a country's trajectory is summarized by
//! its normal vector, centroid and residual error. Further indicators
//! follow from the normals: dihedral angles between the planes of two
//! economies, and the tilt of a plane against each coordinate plane.

use serde::{Deserialize, Serialize};

use crate::error::{FitError, Result};
use crate::subspace_fit::{fit_hyperplane, ErrorMetric, FittedHyperplane, PointCloud};

/// Names of the state-space axes, in coordinate order.
pub const AXES: [&str; 3] = ["unemployment", "gdp_change", "inflation"];

/// Yearly macroeconomic indicators of one country, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSeries {
    pub country: String,
    pub years: Vec<i32>,
    pub unemployment: Vec<f64>,
    pub gdp_change: Vec<f64>,
    pub inflation: Vec<f64>,
}

impl IndicatorSeries {
    /// Builds a series from `(year, unemployment, gdp_change, inflation)`
    /// rows given in any order. Rows are sorted by year; a repeated year is
    /// an error.
    pub fn from_rows(
        country: impl Into<String>,
        mut rows: Vec<(i32, f64, f64, f64)>,
    ) -> Result<Self> {
        rows.sort_by_key(|r| r.0);
        let series = Self {
            country: country.into(),
            years: rows.iter().map(|r| r.0).collect(),
            unemployment: rows.iter().map(|r| r.1).collect(),
            gdp_change: rows.iter().map(|r| r.2).collect(),
            inflation: rows.iter().map(|r| r.3).collect(),
        };
        series.validate()?;
        Ok(series)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.years.len();
        if self.unemployment.len() != n || self.gdp_change.len() != n || self.inflation.len() != n {
            return Err(FitError::invalid(format!(
                "{}: indicator columns have unequal lengths",
                self.country
            )));
        }
        if n == 0 {
            return Err(FitError::invalid(format!(
                "{}: series is empty",
                self.country
            )));
        }
        if let Some(w) = self.years.windows(2).find(|w| w[0] >= w[1]) {
            return Err(FitError::invalid(format!(
                "{}: years must be strictly increasing ({} then {})",
                self.country, w[0], w[1]
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    /// The state-space point for `year`, if present.
    pub fn state(&self, year: i32) -> Option<[f64; 3]> {
        let i = self.years.iter().position(|&y| y == year)?;
        Some([self.unemployment[i], self.gdp_change[i], self.inflation[i]])
    }
}

/// Phase trajectory of a series, labelled by year.
pub fn trajectory(series: &IndicatorSeries) -> Result<PointCloud> {
    series.validate()?;
    let points = (0..series.len())
        .map(|i| {
            vec![
                series.unemployment[i],
                series.gdp_change[i],
                series.inflation[i],
            ]
        })
        .collect();
    let labels = series.years.iter().map(|y| y.to_string()).collect();
    PointCloud::with_labels(points, labels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearDistance {
    pub year: i32,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyPlane {
    pub country: String,
    pub plane: FittedHyperplane,
    pub yearly_distances: Vec<YearDistance>,
    pub metric: ErrorMetric,
    pub err_reported: f64,
}

pub fn economy_plane(series: &IndicatorSeries) -> Result<EconomyPlane> {
    economy_plane_with_metric(series, ErrorMetric::default())
}

pub fn economy_plane_with_metric(
    series: &IndicatorSeries,
    metric: ErrorMetric,
) -> Result<EconomyPlane> {
    let cloud = trajectory(series)?;
    if cloud.len() < 3 {
        return Err(FitError::invalid(format!(
            "{}: an economy plane needs at least 3 years, got {}",
            series.country,
            cloud.len()
        )));
    }
    let plane = fit_hyperplane(&cloud)?;
    let yearly_distances = series
        .years
        .iter()
        .zip(&plane.error.per_point_distance)
        .map(|(&year, &distance)| YearDistance { year, distance })
        .collect();
    Ok(EconomyPlane {
        country: series.country.clone(),
        err_reported: plane.error.value(metric),
        metric,
        plane,
        yearly_distances,
    })
}

/// Angle between two planes given by their normals, in degrees within
/// [0, 90]. Insensitive to the sign of either normal.
pub fn dihedral_angle_deg(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "normals of different dimension");
    crate::vector::undirected_angle_deg(a, b)
}

pub fn plane_angle(a: &EconomyPlane, b: &EconomyPlane) -> f64 {
    dihedral_angle_deg(&a.plane.normal, &b.plane.normal)
}

/// Tilt of an economy plane against the three coordinate planes, degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneSlopes {
    /// Against the unemployment–GDP plane (normal along inflation).
    pub unemployment_gdp: f64,
    /// Against the unemployment–inflation plane (normal along GDP).
    pub unemployment_inflation: f64,
    /// Against the GDP–inflation plane (normal along unemployment).
    pub gdp_inflation: f64,
}

pub fn plane_slopes(p: &EconomyPlane) -> PlaneSlopes {
    slopes_of_normal(&p.plane.normal)
}

pub fn slopes_of_normal(normal: &[f64]) -> PlaneSlopes {
    PlaneSlopes {
        unemployment_gdp: dihedral_angle_deg(normal, &[0.0, 0.0, 1.0]),
        unemployment_inflation: dihedral_angle_deg(normal, &[0.0, 1.0, 0.0]),
        gdp_inflation: dihedral_angle_deg(normal, &[1.0, 0.0, 0.0]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyIndicators {
    pub planes: Vec<EconomyPlane>,
    /// Symmetric, zero diagonal, indexed like `planes`.
    pub pairwise_angles_deg: Vec<Vec<f64>>,
    pub slopes: Vec<PlaneSlopes>,
}

pub fn economy_indicators(
    series: &[IndicatorSeries],
    metric: ErrorMetric,
) -> Result<EconomyIndicators> {
    let planes = series
        .iter()
        .map(|s| economy_plane_with_metric(s, metric))
        .collect::<Result<Vec<_>>>()?;
    let n = planes.len();
    let mut angles = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let a = plane_angle(&planes[i], &planes[j]);
            angles[i][j] = a;
            angles[j][i] = a;
        }
    }
    let slopes = planes.iter().map(plane_slopes).collect();
    Ok(EconomyIndicators {
        planes,
        pairwise_angles_deg: angles,
        slopes,
    })
}

const V4_YEARS: [i32; 7] = [1994, 1995, 1996, 1997, 1998, 1999, 2000];

// (country, unemployment, GDP change, inflation), 1994..=2000
type TableRow = (&'static str, [f64; 7], [f64; 7], [f64; 7]);

const V4_TABLE: [TableRow; 4] = [
    (
        "SK",
        [13.7, 13.1, 11.3, 11.8, 12.5, 16.2, 18.5],
        [4.8, 6.7, 6.2, 6.2, 4.1, 1.9, 2.0],
        [13.4, 9.9, 5.8, 6.1, 6.7, 10.6, 11.5],
    ),
    (
        "PL",
        [16.0, 14.9, 13.5, 10.5, 10.4, 13.0, 13.5],
        [5.2, 7.0, 6.0, 6.8, 4.8, 4.1, 5.0],
        [33.2, 28.0, 19.9, 14.8, 11.6, 7.3, 9.9],
    ),
    (
        "CZ",
        [3.2, 2.9, 3.5, 5.2, 7.5, 9.4, 8.7],
        [2.2, 5.9, 4.8, -0.1, -2.2, -0.2, 2.5],
        [10.0, 9.1, 8.8, 8.5, 10.7, 2.1, 4.1],
    ),
    (
        "HU",
        [11.2, 10.5, 9.2, 7.7, 7.0, 6.5, 6.5],
        [2.9, 1.5, 1.3, 4.4, 5.1, 4.5, 5.6],
        [18.8, 28.2, 23.6, 18.3, 14.3, 10.0, 9.3],
    ),
];

/// Unemployment, GDP change and inflation of the V4 countries, 1994–2000,
/// from the MESA 10 report. Ordered SK, PL, CZ, HU.
///
/// The HU inflation column averages 17.5 over the period, which does not
/// agree with the HU plane centroid published alongside this table
/// (16.0714). The values are shipped as printed.
pub fn v4_dataset() -> Vec<IndicatorSeries> {
    V4_TABLE
        .iter()
        .map(|(country, u, g, i)| IndicatorSeries {
            country: (*country).to_string(),
            years: V4_YEARS.to_vec(),
            unemployment: u.to_vec(),
            gdp_change: g.to_vec(),
            inflation: i.to_vec(),
        })
        .collect()
}

pub fn v4_series(country: &str) -> Option<IndicatorSeries> {
    v4_dataset().into_iter().find(|s| s.country == country)
}
