//! Eigendecomposition of real symmetric matrices by cyclic Jacobi rotations.
//!
//! Each rotation annihilates one off-diagonal pair. Sweeps visit every pair
//! in row order until the off-diagonal Frobenius mass falls below
//! `1e-14 * ‖m‖_F`. Rotations are orthogonal similarity transforms, so the
//! working matrix stays exactly symmetric and the accumulated rotation
//! matrix holds the eigenvectors as its columns.
//!
//! Eigenvalues come back sorted descending. Equal eigenvalues keep the order
//! in which the rotations left them; the basis of a repeated eigenspace is
//! not unique, so callers must not rely on which orthonormal basis they get.

use serde::{Deserialize, Serialize};

use crate::error::{FitError, Result};
use crate::vector::canonicalize_sign;

const MAX_SWEEPS: usize = 100;
const CONVERGENCE: f64 = 1e-14;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Dense symmetric matrix stored row-major. Entries `(i, j)` and `(j, i)`
/// are always bitwise equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from rows, checking shape, finiteness and symmetry.
    ///
    /// Entries may differ from their transposes by at most `1e-12` relative
    /// to the largest entry; the stored matrix takes the mean of each pair.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(FitError::invalid("matrix order must be at least 1"));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != order) {
            return Err(FitError::invalid(format!(
                "row {bad} has {} entries, expected {order}",
                rows[bad].len()
            )));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(FitError::invalid("matrix has a non-finite entry"));
        }
        let scale = rows.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            for j in i..order {
                let (upper, lower) = (rows[i][j], rows[j][i]);
                if (upper - lower).abs() > SYMMETRY_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
                    return Err(FitError::invalid(format!(
                        "matrix is not symmetric at ({i}, {j}): {upper} vs {lower}"
                    )));
                }
                let value = if i == j { upper } else { 0.5 * (upper + lower) };
                entries[i * order + j] = value;
                entries[j * order + i] = value;
            }
        }
        Ok(Self { order, entries })
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.entries[i * order + i] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = v;
        }
        m
    }

    pub(crate) fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![0.0; order * order],
        }
    }

    /// Writes `value` at `(i, j)` and `(j, i)`.
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.order + j] = value;
        self.entries[j * self.order + i] = value;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.order)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.order {
            for j in 0..self.order {
                if i != j {
                    sum += self.get(i, j).powi(2);
                }
            }
        }
        sum.sqrt()
    }
}

/// Eigenpairs sorted by descending eigenvalue. Every eigenvector is a unit
/// vector whose first component above `1e-12` in magnitude is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn major_axis(&self) -> &[f64] {
        &self.eigenvectors[0]
    }

    /// Eigenvector of the smallest eigenvalue.
    pub fn minor_axis(&self) -> &[f64] {
        &self.eigenvectors[self.order() - 1]
    }

    /// `V · diag(λ) · Vᵀ`, mostly useful for checking a decomposition.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.order();
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = self
                    .eigenvalues
                    .iter()
                    .zip(&self.eigenvectors)
                    .map(|(l, e)| l * e[i] * e[j])
                    .sum();
                m.set(i, j, v);
            }
        }
        m
    }
}

pub fn eigen_symmetric(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    if m.order == 0 {
        return Err(FitError::invalid("matrix order must be at least 1"));
    }
    if !m.is_finite() {
        return Err(FitError::invalid("matrix has a non-finite entry"));
    }
    let n = m.order;
    let threshold = CONVERGENCE * m.frobenius_norm();
    let mut a = m.clone();
    // rotations accumulate into the columns of `v`
    let mut v = SymmetricMatrix::identity(n).entries;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && a.off_diagonal_norm() > threshold {
        return Err(FitError::NumericalFailure(format!(
            "Jacobi iteration did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<f64> = (0..n).map(|r| v[r * n + k]).collect();
            let len = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            col.iter_mut().for_each(|x| *x /= len);
            canonicalize_sign(&mut col);
            (a.get(k, k), col)
        })
        .collect();
    // stable: equal eigenvalues keep rotation order
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation in the `(p, q)` plane that zeroes `a[p][q]`.
fn rotate(a: &mut SymmetricMatrix, v: &mut [f64], p: usize, q: usize) {
    let n = a.order;
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a.get(r, p);
        let arq = a.get(r, q);
        a.set(r, p, c * arp - s * arq);
        a.set(r, q, s * arp + c * arq);
    }
    a.set(p, p, app - t * apq);
    a.set(q, q, aqq + t * apq);
    a.set(p, q, 0.0);

    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = c * vrp - s * vrq;
        v[r * n + q] = s * vrp + c * vrq;
    }
}
