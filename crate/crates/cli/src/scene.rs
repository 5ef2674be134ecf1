//! 3D scene description for external viewers: per country, the yearly
//! states, the trajectory through them, and a rectangular patch of the
//! fitted plane covering the projected data.

use serde::{Deserialize, Serialize};
use tlsfit_core::economy::AXES;
use tlsfit_core::EconomyPlane;

use crate::error::Result;
use crate::report::to_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub axes: Vec<String>,
    pub objects: Vec<SceneObject>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub country: String,
    pub years: Vec<i32>,
    pub points: Vec<[f64; 3]>,
    /// Points joined in year order.
    pub trajectory: Vec<[f64; 3]>,
    pub plane: PlanePatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanePatch {
    pub normal: [f64; 3],
    pub centroid: [f64; 3],
    /// Corners in winding order.
    pub corners: [[f64; 3]; 4],
}

fn arr3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The patch spans the extent of the points projected onto the plane's two
/// in-plane axes.
fn patch(plane: &EconomyPlane, points: &[[f64; 3]]) -> PlanePatch {
    let h = &plane.plane;
    let c = &h.centroid;
    let (u, v) = (&h.in_plane_axes[0], &h.in_plane_axes[1]);
    let mut range = [(0.0f64, 0.0f64); 2];
    for p in points {
        let d: Vec<f64> = p.iter().zip(c).map(|(x, y)| x - y).collect();
        for (r, axis) in range.iter_mut().zip([u, v]) {
            let t = dot(&d, axis);
            *r = (r.0.min(t), r.1.max(t));
        }
    }
    let corner = |s: f64, t: f64| [0, 1, 2].map(|k| c[k] + s * u[k] + t * v[k]);
    let ([s0, s1], [t0, t1]) = ([range[0].0, range[0].1], [range[1].0, range[1].1]);
    PlanePatch {
        normal: arr3(&h.normal),
        centroid: arr3(c),
        corners: [
            corner(s0, t0),
            corner(s1, t0),
            corner(s1, t1),
            corner(s0, t1),
        ],
    }
}

pub fn build_scene(series: &[tlsfit_core::IndicatorSeries], planes: &[EconomyPlane]) -> Scene {
    let objects = series
        .iter()
        .zip(planes)
        .map(|(s, plane)| {
            let points: Vec<[f64; 3]> = (0..s.len())
                .map(|i| [s.unemployment[i], s.gdp_change[i], s.inflation[i]])
                .collect();
            SceneObject {
                country: s.country.clone(),
                years: s.years.clone(),
                trajectory: points.clone(),
                plane: patch(plane, &points),
                points,
            }
        })
        .collect();
    Scene {
        axes: AXES.iter().map(|a| a.to_string()).collect(),
        objects,
    }
}

pub fn scene_json(scene: &Scene) -> Result<String> {
    to_json(scene)
}
