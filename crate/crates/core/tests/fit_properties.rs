//! Geometric invariants of the orthogonal line and hyperplane fits.

use proptest::prelude::*;
use tlsfit_core::{eigen_symmetric, fit_hyperplane, fit_line, scatter_matrix, PointCloud};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn same_up_to_sign(a: &[f64], b: &[f64], tol: f64) -> bool {
    let plus = a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol);
    let minus = a.iter().zip(b).all(|(x, y)| (x + y).abs() <= tol);
    plus || minus
}

fn cloud_strategy(min_extra: usize) -> impl Strategy<Value = PointCloud> {
    (2usize..=4).prop_flat_map(move |dim| {
        prop::collection::vec(
            prop::collection::vec(-10.0f64..10.0, dim),
            dim + min_extra..=12,
        )
        .prop_map(|pts| PointCloud::new(pts).unwrap())
    })
}

/// Relative gap between eigenvalue `k` and its neighbours.
fn relative_gap(cloud: &PointCloud, k: usize) -> f64 {
    let e = eigen_symmetric(&scatter_matrix(cloud)).unwrap();
    let l = &e.eigenvalues;
    let top = l[0].max(f64::MIN_POSITIVE);
    let mut gap = f64::INFINITY;
    if k > 0 {
        gap = gap.min(l[k - 1] - l[k]);
    }
    if k + 1 < l.len() {
        gap = gap.min(l[k] - l[k + 1]);
    }
    gap / top
}

fn orthonormal(n: usize, raw: &[f64]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut v: Vec<f64> = raw[i * n..(i + 1) * n].to_vec();
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let len = norm(&v);
        basis.push(v.into_iter().map(|x| x / len).collect());
    }
    basis
}

fn apply(r: &[Vec<f64>], shift: &[f64], p: &[f64]) -> Vec<f64> {
    r.iter()
        .zip(shift)
        .map(|(row, s)| dot(row, p) + s)
        .collect()
}

fn motion_strategy() -> impl Strategy<Value = (PointCloud, Vec<Vec<f64>>, Vec<f64>)> {
    cloud_strategy(1).prop_flat_map(|c| {
        let d = c.dim();
        (
            Just(c),
            prop::collection::vec(-1.0f64..1.0, d * d),
            prop::collection::vec(-50.0f64..50.0, d),
        )
            .prop_filter_map("well-conditioned rotation", move |(c, raw, shift)| {
                let r = orthonormal(d, &raw);
                r.iter()
                    .flatten()
                    .all(|x| x.is_finite())
                    .then_some((c, r, shift))
            })
    })
}

fn moved(cloud: &PointCloud, r: &[Vec<f64>], shift: &[f64]) -> PointCloud {
    PointCloud::new(cloud.points().iter().map(|p| apply(r, shift, p)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn line_fit_is_rigid_motion_invariant((c, r, shift) in motion_strategy()) {
        prop_assume!(relative_gap(&c, 0) > 1e-3);
        let a = fit_line(&c).unwrap();
        let b = fit_line(&moved(&c, &r, &shift)).unwrap();
        let spread = scatter_matrix(&c).trace();
        prop_assert!((a.error.sum_sq - b.error.sum_sq).abs() <= 1e-9 * a.error.sum_sq.max(1e-3 * spread));
        let zero = vec![0.0; c.dim()];
        prop_assert!(same_up_to_sign(&apply(&r, &zero, &a.direction), &b.direction, 1e-9));
        let anchor = apply(&r, &shift, &a.anchor);
        prop_assert!(anchor.iter().zip(&b.anchor).all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs())));
    }

    #[test]
    fn hyperplane_fit_is_rigid_motion_invariant((c, r, shift) in motion_strategy()) {
        let d = c.dim();
        prop_assume!(relative_gap(&c, d - 1) > 1e-3);
        let a = fit_hyperplane(&c).unwrap();
        let b = fit_hyperplane(&moved(&c, &r, &shift)).unwrap();
        let spread = scatter_matrix(&c).trace();
        prop_assert!((a.error.sum_sq - b.error.sum_sq).abs() <= 1e-9 * a.error.sum_sq.max(1e-3 * spread));
        let zero = vec![0.0; d];
        prop_assert!(same_up_to_sign(&apply(&r, &zero, &a.normal), &b.normal, 1e-9));
    }

    #[test]
    fn coordinate_permutation_permutes_the_fit(
        (c, perm) in cloud_strategy(1).prop_flat_map(|c| {
            let d = c.dim();
            (Just(c), Just((0..d).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let d = c.dim();
        let permuted = PointCloud::new(
            c.points().iter().map(|p| perm.iter().map(|&k| p[k]).collect()).collect(),
        ).unwrap();
        if relative_gap(&c, 0) > 1e-2 {
            let a = fit_line(&c).unwrap();
            let b = fit_line(&permuted).unwrap();
            let expected: Vec<f64> = perm.iter().map(|&k| a.direction[k]).collect();
            prop_assert!(same_up_to_sign(&expected, &b.direction, 1e-12));
        }
        if relative_gap(&c, d - 1) > 1e-2 {
            let a = fit_hyperplane(&c).unwrap();
            let b = fit_hyperplane(&permuted).unwrap();
            let expected: Vec<f64> = perm.iter().map(|&k| a.normal[k]).collect();
            prop_assert!(same_up_to_sign(&expected, &b.normal, 1e-12));
        }
    }

    #[test]
    fn residuals_are_orthogonal(c in cloud_strategy(1)) {
        let line = fit_line(&c).unwrap();
        for p in c.points() {
            let foot = line.foot_point(p);
            let residual: Vec<f64> = p.iter().zip(&foot).map(|(x, y)| x - y).collect();
            prop_assert!(dot(&residual, &line.direction).abs() <= 1e-10);
        }
        let plane = fit_hyperplane(&c).unwrap();
        for p in c.points() {
            let foot = plane.foot_point(p);
            let residual: Vec<f64> = p.iter().zip(&foot).map(|(x, y)| x - y).collect();
            let along = dot(&residual, &plane.normal);
            let off: Vec<f64> = residual.iter().zip(&plane.normal).map(|(r, n)| r - along * n).collect();
            prop_assert!(norm(&off) <= 1e-10);
        }
    }

    #[test]
    fn scaling_scales_the_error(c in cloud_strategy(1), s in 0.1f64..10.0) {
        prop_assume!(relative_gap(&c, 0) > 1e-3);
        let scaled = PointCloud::new(
            c.points().iter().map(|p| p.iter().map(|x| s * x).collect()).collect(),
        ).unwrap();
        let a = fit_line(&c).unwrap();
        let b = fit_line(&scaled).unwrap();
        let spread = scatter_matrix(&c).trace();
        prop_assert!((s * s * a.error.sum_sq - b.error.sum_sq).abs() <= 1e-9 * (s * s) * a.error.sum_sq.max(1e-3 * spread));
        prop_assert!(same_up_to_sign(&a.direction, &b.direction, 1e-9));
    }

    #[test]
    fn normal_is_orthogonal_to_in_plane_axes(c in cloud_strategy(1)) {
        let plane = fit_hyperplane(&c).unwrap();
        prop_assert_eq!(plane.in_plane_axes.len(), c.dim() - 1);
        for axis in &plane.in_plane_axes {
            prop_assert!(dot(axis, &plane.normal).abs() <= 1e-10);
        }
        prop_assert!((dot(&plane.normal, &plane.centroid) + plane.offset).abs() <= 1e-12);
        prop_assert!((norm(&plane.normal) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn point_order_does_not_change_the_fit(
        pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 4..10)
    ) {
        let mut sorted = pts.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let a = fit_hyperplane(&PointCloud::new(pts).unwrap()).unwrap();
        let b = fit_hyperplane(&PointCloud::new(sorted).unwrap()).unwrap();
        prop_assert_eq!(a.normal, b.normal);
        prop_assert_eq!(a.centroid, b.centroid);
        prop_assert_eq!(a.error.sum_sq, b.error.sum_sq);
    }
}

/// Sum of squared distances to the line through `anchor` at angle `theta`.
fn candidate_sum_sq(points: &[Vec<f64>], anchor: [f64; 2], theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    points
        .iter()
        .map(|p| {
            let cross = (p[0] - anchor[0]) * s - (p[1] - anchor[1]) * c;
            cross * cross
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn line_fit_beats_random_candidates(
        pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 2..=6),
        seed in any::<u64>(),
    ) {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let cloud = PointCloud::new(pts.clone()).unwrap();
        let fit = fit_line(&cloud).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        for _ in 0..10_000 {
            let anchor = [20.0 * unit() - 10.0, 20.0 * unit() - 10.0];
            let theta = std::f64::consts::PI * unit();
            prop_assert!(fit.error.sum_sq <= candidate_sum_sq(&pts, anchor, theta) + 1e-12);
        }
    }
}
