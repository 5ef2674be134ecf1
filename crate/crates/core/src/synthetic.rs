//! Noisy samples along a known 3D segment, for checking that line fits
//! recover the true direction.
//!
//! Sample `i` of `n` is `a + t_i (b - a) + ε_i` with `t_i = i / (n - 1)`.
//! The noise is isotropic Gaussian, drawn so that another implementation
//! can reproduce a cloud bit for bit:
//!
//! * the generator is ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded through
//!   `SeedableRng::seed_from_u64`;
//! * a uniform variate is `(next_u64() >> 11) * 2^-53`, in `[0, 1)`;
//! * normals come from the Marsaglia polar method: draw `u, v` uniform on
//!   `[-1, 1)` until `0 < s = u² + v² < 1`, then emit `u·f` followed by
//!   `v·f` where `f = sqrt(-2 ln s / s)`;
//! * the normals are consumed in order x, y, z for sample 0, then sample 1,
//!   and so on, each scaled by `sigma`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FitError, Result};
use crate::subspace_fit::PointCloud;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCloudSpec {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub n: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl LineCloudSpec {
    pub fn validate(&self) -> Result<()> {
        if self.a.iter().chain(&self.b).any(|x| !x.is_finite()) {
            return Err(FitError::invalid("segment endpoints must be finite"));
        }
        if self.a == self.b {
            return Err(FitError::invalid("segment endpoints must differ"));
        }
        if self.n < 2 {
            return Err(FitError::invalid(format!(
                "need at least 2 samples, got {}",
                self.n
            )));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(FitError::invalid(format!(
                "noise deviation must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// `(b - a) / ‖b - a‖`
    pub fn true_direction(&self) -> [f64; 3] {
        let d = [
            self.b[0] - self.a[0],
            self.b[1] - self.a[1],
            self.b[2] - self.a[2],
        ];
        let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        [d[0] / len, d[1] / len, d[2] / len]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticLine {
    pub cloud: PointCloud,
    pub true_direction: [f64; 3],
}

/// Standard normal variates by the polar method, two per accepted pair.
struct PolarNormals {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl PolarNormals {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

pub fn generate_line_cloud(spec: &LineCloudSpec) -> Result<SyntheticLine> {
    spec.validate()?;
    let mut normals = PolarNormals::new(spec.seed);
    let last = (spec.n - 1) as f64;
    let points = (0..spec.n)
        .map(|i| {
            let t = i as f64 / last;
            (0..3)
                .map(|k| {
                    let on_segment = spec.a[k] + t * (spec.b[k] - spec.a[k]);
                    on_segment + spec.sigma * normals.next()
                })
                .collect()
        })
        .collect();
    Ok(SyntheticLine {
        cloud: PointCloud::new(points)?,
        true_direction: spec.true_direction(),
    })
}
