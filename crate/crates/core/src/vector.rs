//! Small dense-vector helpers shared by the fitting modules.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Angle in degrees between the lines spanned by `a` and `b`, in [0, 90].
///
/// `2 atan2(|â - b̂|, |â + b̂|)` on the unit vectors stays accurate near 0°
/// and 90°, and is bitwise symmetric in its arguments.
pub(crate) fn undirected_angle_deg(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    let flip = if dot(a, b) < 0.0 { -1.0 } else { 1.0 };
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, flip * y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt()).to_degrees()
}

/// Flips `v` so that its first component with magnitude above `1e-12` is
/// positive.
pub(crate) fn canonicalize_sign(v: &mut [f64]) {
    if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-12) {
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Total order on points, used to make sums independent of input order.
pub(crate) fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
