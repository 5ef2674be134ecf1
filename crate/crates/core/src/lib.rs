//! Orthogonal distance regression (total least squares) for point clouds.
//!
//! Lines and hyperplanes are fitted through the centroid along the principal
//! axes of the centered scatter matrix: the largest-variance axis gives a
//! line direction, the smallest-variance axis gives a hyperplane normal.
//! Classical least-squares lines are provided for comparison, together with
//! the state-space treatment of national economy indicators and a
//! deterministic generator of noisy line samples.

pub mod classic_regression;
pub mod economy;
pub mod eigen;
mod error;
pub mod subspace_fit;
pub mod synthetic;
pub(crate) mod vector;

pub use classic_regression::{
    compare_ols_tls, conjugate_line, line_angle_deg, ols_line, AffineLine2D, ComparisonReport,
    LineAngles, Orientation, TlsLine2D,
};
pub use economy::{
    dihedral_angle_deg, economy_indicators, economy_plane, economy_plane_with_metric, plane_angle,
    plane_slopes, slopes_of_normal, trajectory, v4_dataset, v4_series, EconomyIndicators,
    EconomyPlane, IndicatorSeries, PlaneSlopes, YearDistance,
};
pub use eigen::{eigen_symmetric, EigenDecomposition, SymmetricMatrix};
pub use error::{FitError, Result};
pub use subspace_fit::{
    centroid, distance_point_to_line, distance_point_to_plane, fit_hyperplane, fit_line,
    scatter_matrix, total_orthogonal_error, ErrorMetric, FittedFlat, FittedHyperplane, FittedLine,
    OrthogonalModel, PointCloud, ResidualStats,
};
pub use synthetic::{generate_line_cloud, LineCloudSpec, SyntheticLine};
