use serde::{Deserialize, Serialize};

use super::TransformedEmpirical;

/// Greatest convex minorant of the node set, evaluated at every abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcmResult {
    pub values: Vec<f64>,
    /// Indices of the hull vertices (0-based, ascending).
    pub contact: Vec<usize>,
}

/// z-component of (b − a) × (c − a).
fn cross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Height at `x` of the line through `a` and `b`.
#[inline]
pub(crate) fn line_at(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

/// Lower convex hull of points with strictly increasing abscissae
/// (monotone chain), interpolated back onto the abscissae.
pub fn lower_hull(points: &[(f64, f64)]) -> GcmResult {
    let mut hull: Vec<usize> = Vec::with_capacity(points.len());
    for (k, &p) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let a = points[hull[hull.len() - 2]];
            let b = points[hull[hull.len() - 1]];
            if cross(a, b, p) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut values = Vec::with_capacity(points.len());
    for w in hull.windows(2) {
        let (a, b) = (points[w[0]], points[w[1]]);
        values.push(a.1);
        for p in &points[w[0] + 1..w[1]] {
            values.push(line_at(a, b, p.0));
        }
    }
    if let Some(&last) = hull.last() {
        values.push(points[last].1);
    }
    GcmResult {
        values,
        contact: hull,
    }
}

/// GCM of the transformed empirical CDF's nodes.
pub fn gcm(te: &TransformedEmpirical) -> GcmResult {
    lower_hull(te.nodes())
}

/// max_{2 ≤ j ≤ n−1} w_j (h_{j−1} − g(x_j)), with w_j = 1/h_{j−1} when the
/// reference quantile is convex and w_j = 1 for the identity.
pub fn ks_statistic(te: &TransformedEmpirical, g: &GcmResult) -> f64 {
    let weighted = te.transform().quantile_is_convex();
    let nodes = te.nodes();
    let n = nodes.len();
    (1..n - 1)
        .map(|j| {
            let h = nodes[j].1;
            let gap = h - g.values[j];
            if weighted {
                gap / h
            } else {
                gap
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_input_is_its_own_minorant() {
        let pts: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, (k as f64).powi(2))).collect();
        let g = lower_hull(&pts);
        assert_eq!(g.values, pts.iter().map(|p| p.1).collect::<Vec<_>>());
        assert_eq!(g.contact.len(), 10);
    }

    #[test]
    fn three_points_with_raised_middle() {
        let g = lower_hull(&[(0.0, 0.0), (1.0, 5.0), (3.0, 3.0)]);
        assert_eq!(g.values, vec![0.0, 1.0, 3.0]);
        assert_eq!(g.contact, vec![0, 2]);
    }

    #[test]
    fn collinear_points_lie_on_the_hull() {
        let g = lower_hull(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 10.0)]);
        assert_eq!(g.values, vec![0.0, 1.0, 2.0, 10.0]);
    }
}
