//! Classical least-squares lines in the plane, and their comparison with the
//! orthogonal (TLS) line.
//!
//! Regressing y on x and x on y gives two different lines, the "scissors".
//! Both pass through the centroid, and the orthogonal line lies between
//! them. The orthogonal line itself does not change when x and y swap
//! roles.

use serde::{Deserialize, Serialize};

use crate::error::{FitError, Result};
use crate::subspace_fit::{fit_line, PointCloud};

/// Which variable was treated as dependent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `y = slope * x + intercept`
    YonX,
    /// `x = slope * y + intercept`
    XonY,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineLine2D {
    pub slope: f64,
    pub intercept: f64,
    pub orientation: Orientation,
}

impl AffineLine2D {
    /// Unit direction with inclination in (-90°, 90°].
    pub fn direction(&self) -> [f64; 2] {
        let raw = match self.orientation {
            Orientation::YonX => [1.0, self.slope],
            Orientation::XonY => [self.slope, 1.0],
        };
        canonical_direction(raw)
    }

    /// Angle from the positive x-axis in degrees, in (-90, 90].
    pub fn inclination_deg(&self) -> f64 {
        inclination_deg(self.direction())
    }

    /// Slope as dy/dx, or `None` for a vertical line.
    pub fn slope_y_on_x(&self) -> Option<f64> {
        match self.orientation {
            Orientation::YonX => Some(self.slope),
            Orientation::XonY if self.slope == 0.0 => None,
            Orientation::XonY => Some(1.0 / self.slope),
        }
    }

    /// Signed offset of `(x, y)` from the line along the dependent axis.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        match self.orientation {
            Orientation::YonX => y - (self.slope * x + self.intercept),
            Orientation::XonY => x - (self.slope * y + self.intercept),
        }
    }
}

/// The orthogonal line of a 2D cloud, restated in slope/intercept form
/// when it is not vertical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TlsLine2D {
    pub anchor: [f64; 2],
    pub direction: [f64; 2],
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub sum_sq: f64,
}

impl TlsLine2D {
    pub fn inclination_deg(&self) -> f64 {
        inclination_deg(self.direction)
    }
}

/// Undirected angles between the three lines, in degrees within [0, 90].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineAngles {
    pub ols_tls: Option<f64>,
    pub conjugate_tls: Option<f64>,
    pub ols_conjugate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub centroid: [f64; 2],
    /// `None` when all x values coincide.
    pub ols: Option<AffineLine2D>,
    /// `None` when all y values coincide.
    pub conjugate: Option<AffineLine2D>,
    pub tls: TlsLine2D,
    pub angles: LineAngles,
    /// Whether the TLS inclination lies between the two OLS inclinations.
    /// `None` when a classical line is unavailable or x and y are
    /// uncorrelated.
    pub tls_between_scissors: Option<bool>,
}

struct Moments {
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(xs: &[f64], ys: &[f64]) -> Result<Moments> {
    if xs.len() != ys.len() {
        return Err(FitError::invalid(format!(
            "{} x values but {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(FitError::invalid("regression needs at least 2 points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(FitError::invalid("regression input has a non-finite value"));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(Moments {
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    })
}

fn all_equal(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Regression of y on x: the minimizer of the squared vertical offsets.
pub fn ols_line(xs: &[f64], ys: &[f64]) -> Result<AffineLine2D> {
    let m = moments(xs, ys)?;
    if all_equal(xs) || m.sxx == 0.0 {
        return Err(FitError::degenerate(
            "all x values are equal; y on x regression is undefined",
            Some(1),
        ));
    }
    let slope = m.sxy / m.sxx;
    Ok(AffineLine2D {
        slope,
        intercept: m.mean_y - slope * m.mean_x,
        orientation: Orientation::YonX,
    })
}

/// Regression of x on y, the conjugate of [`ols_line`].
pub fn conjugate_line(xs: &[f64], ys: &[f64]) -> Result<AffineLine2D> {
    let m = moments(xs, ys)?;
    if all_equal(ys) || m.syy == 0.0 {
        return Err(FitError::degenerate(
            "all y values are equal; x on y regression is undefined",
            Some(1),
        ));
    }
    let slope = m.sxy / m.syy;
    Ok(AffineLine2D {
        slope,
        intercept: m.mean_x - slope * m.mean_y,
        orientation: Orientation::XonY,
    })
}

pub fn compare_ols_tls(xs: &[f64], ys: &[f64]) -> Result<ComparisonReport> {
    let m = moments(xs, ys)?;
    let cloud = PointCloud::new(xs.iter().zip(ys).map(|(&x, &y)| vec![x, y]).collect())?;
    let fit = fit_line(&cloud)?;

    let anchor = [fit.anchor[0], fit.anchor[1]];
    let direction = canonical_direction([fit.direction[0], fit.direction[1]]);
    let (slope, intercept) = if direction[0].abs() <= 1e-12 {
        (None, None)
    } else {
        let k = direction[1] / direction[0];
        (Some(k), Some(anchor[1] - k * anchor[0]))
    };
    let tls = TlsLine2D {
        anchor,
        direction,
        slope,
        intercept,
        sum_sq: fit.error.sum_sq,
    };

    let ols = optional(ols_line(xs, ys))?;
    let conjugate = optional(conjugate_line(xs, ys))?;

    let angles = LineAngles {
        ols_tls: ols.map(|l| line_angle_deg(l.direction(), tls.direction)),
        conjugate_tls: conjugate.map(|l| line_angle_deg(l.direction(), tls.direction)),
        ols_conjugate: ols
            .zip(conjugate)
            .map(|(a, b)| line_angle_deg(a.direction(), b.direction())),
    };

    let tls_between_scissors = match (ols, conjugate) {
        (Some(a), Some(b)) if m.sxy != 0.0 => {
            let (lo, hi) = min_max(a.inclination_deg(), b.inclination_deg());
            let t = tls.inclination_deg();
            Some(t >= lo - BETWEEN_SLACK_DEG && t <= hi + BETWEEN_SLACK_DEG)
        }
        _ => None,
    };

    Ok(ComparisonReport {
        centroid: [m.mean_x, m.mean_y],
        ols,
        conjugate,
        tls,
        angles,
        tls_between_scissors,
    })
}

const BETWEEN_SLACK_DEG: f64 = 1e-9;

fn optional(r: Result<AffineLine2D>) -> Result<Option<AffineLine2D>> {
    match r {
        Ok(l) => Ok(Some(l)),
        Err(FitError::DegenerateGeometry { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn min_max(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn canonical_direction(v: [f64; 2]) -> [f64; 2] {
    let len = v[0].hypot(v[1]);
    let mut u = [v[0] / len, v[1] / len];
    // keep inclination in (-90, 90]
    if u[0] < 0.0 || (u[0] == 0.0 && u[1] < 0.0) {
        u = [-u[0], -u[1]];
    }
    u
}

fn inclination_deg(dir: [f64; 2]) -> f64 {
    let d = canonical_direction(dir);
    d[1].atan2(d[0]).to_degrees()
}

/// Angle between two undirected lines, in [0, 90] degrees.
pub fn line_angle_deg(a: [f64; 2], b: [f64; 2]) -> f64 {
    crate::vector::undirected_angle_deg(&a, &b)
}
