//! Total least squares fitting of lines and hyperplanes.
//!
//! Both fits go through the centroid. The line direction is the principal
//! axis with the largest eigenvalue of the scatter matrix, and the
//! hyperplane normal is the axis with the smallest one. Either choice
//! minimizes the sum of squared orthogonal distances from the points to the
//! fitted flat, which makes the result independent of how the coordinate
//! axes are labelled, rotated or translated.
//!
//! Aggregates over the points (centroid, scatter matrix, residual sums) are
//! accumulated in a canonical order, so permuting the points of a cloud
//! yields bitwise-identical fits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eigen::{eigen_symmetric, EigenDecomposition, SymmetricMatrix};
use crate::error::{FitError, Result};
use crate::vector::{dot, lexicographic, norm, sub};

/// Eigenvalues at or below this fraction of the largest one count as zero
/// when deciding the rank of a scatter matrix.
const RANK_TOLERANCE: f64 = 1e-12;

/// Ordered n-dimensional points with optional labels (years for a phase
/// trajectory, row numbers for CSV input).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.len(),
            None => return Err(FitError::invalid("point cloud is empty")),
        };
        if dim == 0 {
            return Err(FitError::invalid(
                "points must have at least one coordinate",
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(FitError::invalid(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(FitError::invalid(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(Self {
            dim,
            points,
            labels: None,
        })
    }

    pub fn with_labels(points: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(FitError::invalid(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        let mut cloud = Self::new(points)?;
        cloud.labels = Some(labels);
        Ok(cloud)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of point `i`, falling back to its 1-based position.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    fn sorted(&self) -> Vec<&[f64]> {
        let mut refs: Vec<&[f64]> = self.points.iter().map(Vec::as_slice).collect();
        refs.sort_by(|a, b| lexicographic(a, b));
        refs
    }

    fn max_abs_coordinate(&self) -> f64 {
        self.points
            .iter()
            .flatten()
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}

/// Orthogonal residual summary for a fitted flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    /// Distances in the order of the input points.
    pub per_point_distance: Vec<f64>,
    pub sum_sq: f64,
    pub sum_abs: f64,
    pub rms: f64,
    pub root_sum_sq: f64,
}

impl ResidualStats {
    pub fn from_distances(distances: Vec<f64>) -> Self {
        let mut sorted = distances.clone();
        sorted.sort_by(f64::total_cmp);
        let sum_sq: f64 = sorted.iter().map(|d| d * d).sum();
        let sum_abs: f64 = sorted.iter().sum();
        let n = distances.len().max(1) as f64;
        Self {
            per_point_distance: distances,
            sum_sq,
            sum_abs,
            rms: (sum_sq / n).sqrt(),
            root_sum_sq: sum_sq.sqrt(),
        }
    }

    pub fn value(&self, metric: ErrorMetric) -> f64 {
        match metric {
            ErrorMetric::SumSq => self.sum_sq,
            ErrorMetric::RootSumSq => self.root_sum_sq,
            ErrorMetric::Rms => self.rms,
            ErrorMetric::SumAbs => self.sum_abs,
        }
    }
}

/// Aggregate reported as the single "error" of a fit.
///
/// The default, [`ErrorMetric::SumAbs`], is the sum of absolute orthogonal
/// distances. It is the aggregate that reproduces the published V4 plane
/// errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMetric {
    SumSq,
    RootSumSq,
    Rms,
    #[default]
    SumAbs,
}

impl ErrorMetric {
    pub const ALL: [ErrorMetric; 4] = [
        ErrorMetric::SumSq,
        ErrorMetric::RootSumSq,
        ErrorMetric::Rms,
        ErrorMetric::SumAbs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ErrorMetric::SumSq => "sum_sq",
            ErrorMetric::RootSumSq => "root_sum_sq",
            ErrorMetric::Rms => "rms",
            ErrorMetric::SumAbs => "sum_abs",
        }
    }

    /// Recomputes the metric from raw distances.
    pub fn aggregate(self, distances: &[f64]) -> f64 {
        ResidualStats::from_distances(distances.to_vec()).value(self)
    }
}

impl fmt::Display for ErrorMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ErrorMetric {
    type Err = FitError;

    fn from_str(s: &str) -> Result<Self> {
        ErrorMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| FitError::invalid(format!("unknown error metric `{s}`")))
    }
}

/// A line `anchor + t * direction` fitted through a cloud's centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedLine {
    pub anchor: Vec<f64>,
    pub direction: Vec<f64>,
    pub error: ResidualStats,
}

impl FittedLine {
    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn foot_point(&self, p: &[f64]) -> Vec<f64> {
        let t = dot(&sub(p, &self.anchor), &self.direction);
        self.anchor
            .iter()
            .zip(&self.direction)
            .map(|(a, d)| a + t * d)
            .collect()
    }
}

/// A hyperplane `normal · x + offset = 0` through a cloud's centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedHyperplane {
    pub normal: Vec<f64>,
    pub centroid: Vec<f64>,
    pub offset: f64,
    /// Orthonormal in-plane principal axes, largest spread first.
    pub in_plane_axes: Vec<Vec<f64>>,
    pub error: ResidualStats,
}

impl FittedHyperplane {
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Orthogonal projection of `p` onto the hyperplane.
    pub fn foot_point(&self, p: &[f64]) -> Vec<f64> {
        let s = dot(&sub(p, &self.centroid), &self.normal);
        p.iter().zip(&self.normal).map(|(x, n)| x - s * n).collect()
    }
}

/// Anything a point's orthogonal distance can be measured against.
pub trait OrthogonalModel {
    fn dim(&self) -> usize;
    fn distance(&self, p: &[f64]) -> Result<f64>;
}

impl OrthogonalModel for FittedLine {
    fn dim(&self) -> usize {
        FittedLine::dim(self)
    }

    fn distance(&self, p: &[f64]) -> Result<f64> {
        distance_point_to_line(p, self)
    }
}

impl OrthogonalModel for FittedHyperplane {
    fn dim(&self) -> usize {
        FittedHyperplane::dim(self)
    }

    fn distance(&self, p: &[f64]) -> Result<f64> {
        distance_point_to_plane(p, self)
    }
}

/// Either kind of fitted flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedFlat {
    Line(FittedLine),
    Hyperplane(FittedHyperplane),
}

impl FittedFlat {
    pub fn error(&self) -> &ResidualStats {
        match self {
            FittedFlat::Line(l) => &l.error,
            FittedFlat::Hyperplane(h) => &h.error,
        }
    }
}

impl OrthogonalModel for FittedFlat {
    fn dim(&self) -> usize {
        match self {
            FittedFlat::Line(l) => l.dim(),
            FittedFlat::Hyperplane(h) => h.dim(),
        }
    }

    fn distance(&self, p: &[f64]) -> Result<f64> {
        match self {
            FittedFlat::Line(l) => distance_point_to_line(p, l),
            FittedFlat::Hyperplane(h) => distance_point_to_plane(p, h),
        }
    }
}

pub fn centroid(cloud: &PointCloud) -> Vec<f64> {
    let mut sum = vec![0.0; cloud.dim];
    for p in cloud.sorted() {
        for (s, x) in sum.iter_mut().zip(p) {
            *s += x;
        }
    }
    let n = cloud.len() as f64;
    sum.into_iter().map(|s| s / n).collect()
}

/// Unnormalized scatter matrix `Σ (p - c)(p - c)ᵀ` about the centroid.
pub fn scatter_matrix(cloud: &PointCloud) -> SymmetricMatrix {
    let c = centroid(cloud);
    let dim = cloud.dim;
    let mut m = SymmetricMatrix::zeros(dim);
    let centered: Vec<Vec<f64>> = cloud.sorted().into_iter().map(|p| sub(p, &c)).collect();
    for i in 0..dim {
        for j in i..dim {
            let s = centered.iter().map(|q| q[i] * q[j]).sum();
            m.set(i, j, s);
        }
    }
    m
}

fn principal_axes(cloud: &PointCloud) -> Result<EigenDecomposition> {
    let scatter = scatter_matrix(cloud);
    if !scatter.is_finite() {
        return Err(FitError::NumericalFailure(
            "scatter matrix overflowed; rescale the input".into(),
        ));
    }
    eigen_symmetric(&scatter)
}

/// Smallest eigenvalue that still counts as spread, given the cloud's scale.
fn spread_floor(cloud: &PointCloud, largest: f64) -> f64 {
    let coordinate_noise =
        cloud.len() as f64 * (RANK_TOLERANCE * cloud.max_abs_coordinate()).powi(2);
    coordinate_noise.max(RANK_TOLERANCE * largest)
}

pub fn fit_line(cloud: &PointCloud) -> Result<FittedLine> {
    if cloud.len() < 2 {
        return Err(FitError::invalid(format!(
            "line fit needs at least 2 points, got {}",
            cloud.len()
        )));
    }
    if cloud.dim < 2 {
        return Err(FitError::invalid("line fit needs at least 2 dimensions"));
    }
    let axes = principal_axes(cloud)?;
    let largest = axes.eigenvalues[0];
    if largest <= spread_floor(cloud, 0.0) {
        return Err(FitError::degenerate(
            "all points coincide; no line direction is defined",
            Some(0),
        ));
    }
    let mut line = FittedLine {
        anchor: centroid(cloud),
        direction: axes.major_axis().to_vec(),
        error: ResidualStats::from_distances(Vec::new()),
    };
    line.error = total_orthogonal_error(cloud, &line)?;
    Ok(line)
}

pub fn fit_hyperplane(cloud: &PointCloud) -> Result<FittedHyperplane> {
    let dim = cloud.dim;
    if dim < 2 {
        return Err(FitError::invalid(
            "hyperplane fit needs at least 2 dimensions",
        ));
    }
    if cloud.len() < dim {
        return Err(FitError::invalid(format!(
            "hyperplane fit in {dim} dimensions needs at least {dim} points, got {}",
            cloud.len()
        )));
    }
    let axes = principal_axes(cloud)?;
    let floor = spread_floor(cloud, axes.eigenvalues[0]);
    let rank = axes.eigenvalues.iter().filter(|&&l| l > floor).count();
    if rank < dim - 1 {
        return Err(FitError::degenerate(
            format!(
                "points lie on a {rank}-dimensional flat; a hyperplane in {dim} dimensions needs {} independent directions",
                dim - 1
            ),
            Some(rank),
        ));
    }
    let normal = axes.minor_axis().to_vec();
    let c = centroid(cloud);
    let mut plane = FittedHyperplane {
        offset: -dot(&normal, &c),
        normal,
        centroid: c,
        in_plane_axes: axes.eigenvectors[..dim - 1].to_vec(),
        error: ResidualStats::from_distances(Vec::new()),
    };
    plane.error = total_orthogonal_error(cloud, &plane)?;
    Ok(plane)
}

fn check_dim(p: &[f64], dim: usize) -> Result<()> {
    if p.len() != dim {
        return Err(FitError::invalid(format!(
            "point has {} coordinates, model has {dim}",
            p.len()
        )));
    }
    Ok(())
}

pub fn distance_point_to_line(p: &[f64], line: &FittedLine) -> Result<f64> {
    check_dim(p, line.dim())?;
    let rel = sub(p, &line.anchor);
    let t = dot(&rel, &line.direction);
    let residual: Vec<f64> = rel
        .iter()
        .zip(&line.direction)
        .map(|(r, d)| r - t * d)
        .collect();
    Ok(norm(&residual))
}

/// `|normal · p + offset|`, evaluated relative to the centroid.
pub fn distance_point_to_plane(p: &[f64], plane: &FittedHyperplane) -> Result<f64> {
    check_dim(p, plane.dim())?;
    Ok(dot(&sub(p, &plane.centroid), &plane.normal).abs())
}

pub fn total_orthogonal_error<M: OrthogonalModel + ?Sized>(
    cloud: &PointCloud,
    model: &M,
) -> Result<ResidualStats> {
    if cloud.dim() != model.dim() {
        return Err(FitError::invalid(format!(
            "cloud has {} dimensions, model has {}",
            cloud.dim(),
            model.dim()
        )));
    }
    let distances = cloud
        .points()
        .iter()
        .map(|p| model.distance(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualStats::from_distances(distances))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cloud(points: &[&[f64]]) -> PointCloud {
        PointCloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn nievergelt() -> PointCloud {
        cloud(&[
            &[1.0, 4.0],
            &[3.0, 2.0],
            &[4.0, 6.0],
            &[5.0, 8.0],
            &[7.0, 5.0],
        ])
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid(&cloud(&[&[7.0, -2.0]])), vec![7.0, -2.0]);
        assert_eq!(centroid(&nievergelt()), vec![4.0, 5.0]);
    }

    #[test]
    fn scatter_examples() {
        assert_eq!(
            scatter_matrix(&cloud(&[&[7.0, -2.0]])).rows(),
            vec![vec![0.0; 2]; 2]
        );
        assert_eq!(
            scatter_matrix(&nievergelt()).rows(),
            vec![vec![20.0, 9.0], vec![9.0, 20.0]]
        );
        assert_eq!(
            scatter_matrix(&cloud(&[&[0.0, 0.0], &[2.0, 0.0]])).rows(),
            vec![vec![2.0, 0.0], vec![0.0, 0.0]]
        );
    }

    #[test]
    fn collinear_line() {
        let line = fit_line(&cloud(&[&[0.0; 3], &[1.0; 3], &[2.0; 3]])).unwrap();
        let k = 1.0 / 3f64.sqrt();
        for d in &line.direction {
            assert_abs_diff_eq!(*d, k, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(line.error.sum_sq, 0.0, epsilon = 1e-24);
    }

    #[test]
    fn nievergelt_line() {
        let line = fit_line(&nievergelt()).unwrap();
        assert_eq!(line.anchor, vec![4.0, 5.0]);
        let k = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(line.direction[0], k, epsilon = 1e-12);
        assert_abs_diff_eq!(line.direction[1], k, epsilon = 1e-12);
        // closed-form 2D minimum: (Sxx + Syy)/2 - sqrt(((Sxx - Syy)/2)^2 + Sxy^2) = 20 - 9
        assert_abs_diff_eq!(line.error.sum_sq, 11.0, epsilon = 1e-9);
    }

    #[test]
    fn plane_through_z0() {
        let plane = fit_hyperplane(&cloud(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[1.0, 1.0, 0.0],
        ]))
        .unwrap();
        assert_eq!(plane.normal, vec![0.0, 0.0, 1.0]);
        assert_eq!(plane.error.sum_sq, 0.0);
        assert_abs_diff_eq!(
            dot(&plane.normal, &plane.centroid) + plane.offset,
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn line_errors() {
        assert!(matches!(
            fit_line(&cloud(&[&[1.0, 2.0]])),
            Err(FitError::InvalidInput(_))
        ));
        assert!(matches!(
            fit_line(&cloud(&[&[1.0], &[2.0]])),
            Err(FitError::InvalidInput(_))
        ));
        assert!(matches!(
            fit_line(&cloud(&[&[0.1, 0.7], &[0.1, 0.7], &[0.1, 0.7]])),
            Err(FitError::DegenerateGeometry {
                flat_dim: Some(0),
                ..
            })
        ));
    }

    #[test]
    fn hyperplane_errors() {
        assert!(matches!(
            fit_hyperplane(&cloud(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])),
            Err(FitError::InvalidInput(_))
        ));
        let collinear = cloud(&[
            &[0.0; 3],
            &[1.0, 2.0, 3.0],
            &[2.0, 4.0, 6.0],
            &[-1.0, -2.0, -3.0],
        ]);
        match fit_hyperplane(&collinear) {
            Err(FitError::DegenerateGeometry { flat_dim, message }) => {
                assert_eq!(flat_dim, Some(1));
                assert!(message.contains("1-dimensional flat"));
            }
            other => panic!("expected degenerate geometry, got {other:?}"),
        }
        assert!(matches!(
            fit_hyperplane(&cloud(&[&[3.0, 3.0], &[3.0, 3.0]])),
            Err(FitError::DegenerateGeometry {
                flat_dim: Some(0),
                ..
            })
        ));
    }

    #[test]
    fn overflowing_scatter_is_numerical_failure() {
        let c = cloud(&[&[1e200, 0.0], &[-1e200, 1.0], &[0.0, 2.0]]);
        assert!(matches!(fit_line(&c), Err(FitError::NumericalFailure(_))));
    }

    #[test]
    fn point_to_line_distances() {
        let k = std::f64::consts::FRAC_1_SQRT_2;
        let diag = FittedLine {
            anchor: vec![4.0, 5.0],
            direction: vec![k, k],
            error: ResidualStats::from_distances(vec![]),
        };
        assert_abs_diff_eq!(
            distance_point_to_line(&[0.0, 1.0], &diag).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            distance_point_to_line(&[1.0, 4.0], &diag).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-12
        );
        let x_axis = FittedLine {
            anchor: vec![0.0; 3],
            direction: vec![1.0, 0.0, 0.0],
            error: ResidualStats::from_distances(vec![]),
        };
        assert_eq!(
            distance_point_to_line(&[0.0, 0.0, 1.0], &x_axis).unwrap(),
            1.0
        );
        assert!(matches!(
            distance_point_to_line(&[0.0, 0.0], &x_axis),
            Err(FitError::InvalidInput(_))
        ));
    }

    #[test]
    fn point_to_plane_distances() {
        let z0 = FittedHyperplane {
            normal: vec![0.0, 0.0, 1.0],
            centroid: vec![0.0; 3],
            offset: 0.0,
            in_plane_axes: vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
            error: ResidualStats::from_distances(vec![]),
        };
        assert_eq!(
            distance_point_to_plane(&[3.0, -2.0, 0.0], &z0).unwrap(),
            0.0
        );
        assert_eq!(distance_point_to_plane(&[0.0, 0.0, 5.0], &z0).unwrap(), 5.0);
        assert!(distance_point_to_plane(&[0.0, 5.0], &z0).is_err());
    }

    #[test]
    fn residual_stats_aggregates() {
        let s = ResidualStats::from_distances(vec![3.0, 4.0]);
        assert_eq!(s.sum_sq, 25.0);
        assert_eq!(s.root_sum_sq, 5.0);
        assert_eq!(s.sum_abs, 7.0);
        assert_abs_diff_eq!(s.rms, 12.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s.value(ErrorMetric::default()), 7.0);
    }

    #[test]
    fn total_error_dimension_mismatch() {
        let line = fit_line(&nievergelt()).unwrap();
        let c3 = cloud(&[&[0.0; 3], &[1.0; 3]]);
        assert!(matches!(
            total_orthogonal_error(&c3, &line),
            Err(FitError::InvalidInput(_))
        ));
    }

    #[test]
    fn metric_names_round_trip() {
        for m in ErrorMetric::ALL {
            assert_eq!(m.name().parse::<ErrorMetric>().unwrap(), m);
        }
        assert!("sod".parse::<ErrorMetric>().is_err());
    }

    #[test]
    fn cloud_validation() {
        assert!(PointCloud::new(vec![]).is_err());
        assert!(PointCloud::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(PointCloud::new(vec![vec![f64::NAN, 2.0]]).is_err());
        assert!(PointCloud::with_labels(vec![vec![1.0]], vec![]).is_err());
        let c = PointCloud::with_labels(vec![vec![1.0]], vec!["1994".into()]).unwrap();
        assert_eq!(c.label(0), "1994");
        assert_eq!(cloud(&[&[1.0], &[2.0]]).label(1), "2");
    }
}
