use super::mesh::wrap;
use super::slice::SliceCurve;
use crate::kernel::{christoffel, metric_at};
use crate::linalg::Vector;
use crate::spaces::Surface2D;
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComponentCurvature {
    pub component: usize,
    /// Discrete geodesic curvature at each polyline vertex (after merging
    /// coincident vertices), oriented so the mean is non-negative.
    pub curvatures: Vec<f64>,
    pub min: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SliceConvexity {
    pub components: Vec<ComponentCurvature>,
    /// Open components, which carry no turning angle at their ends.
    pub skipped_open: Vec<usize>,
}

impl SliceConvexity {
    pub fn min(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.min)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Discrete geodesic curvature of a closed polyline in base coordinates.
///
/// At each vertex the incoming and outgoing chords are turned into geodesic
/// tangents with a second-order Christoffel correction; the turning angle
/// between them, measured in the base metric, is divided by the mean
/// metric length of the two chords.
pub fn polygon_curvature(points: &[Vector<2>], base: &Surface2D) -> Vec<f64> {
    polygon_curvature_stencil(points, base, 1)
}

/// As [`polygon_curvature`], with chords spanning `stencil` polyline
/// segments on each side of the vertex. Wider stencils average out
/// mesh-scale zigzag in slices of coarse triangulations.
pub fn polygon_curvature_stencil(
    points: &[Vector<2>],
    base: &Surface2D,
    stencil: usize,
) -> Vec<f64> {
    let n = points.len();
    let k = stencil.clamp(1, (n.max(3) - 1) / 2);
    let period = base.period();
    let d =
        |a: &Vector<2>, b: &Vector<2>| -> Vector<2> { [b[0] - a[0], wrap(b[1] - a[1], period)] };
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        let p = points[i];
        let din = d(&points[(i + n - k) % n], &p);
        let dout = d(&p, &points[(i + k) % n]);
        let (Ok(g), Ok(gamma)) = (metric_at(base, &p), christoffel(base, &p)) else {
            raw.push(f64::NAN);
            continue;
        };
        let cin = gamma.contract(&din, &din);
        let cout = gamma.contract(&dout, &dout);
        let w = [din[0] - 0.5 * cin[0], din[1] - 0.5 * cin[1]];
        let v = [dout[0] + 0.5 * cout[0], dout[1] + 0.5 * cout[1]];
        let det = g.g[0][0] * g.g[1][1] - g.g[0][1] * g.g[1][0];
        let angle = (det.sqrt() * (w[0] * v[1] - w[1] * v[0])).atan2(g.apply(&w, &v));
        let len = 0.5 * (g.norm(&din) + g.norm(&dout));
        raw.push(angle / len);
    }
    let sum: f64 = raw.iter().sum();
    if sum < 0.0 {
        raw.iter_mut().for_each(|k| *k = -*k);
    }
    raw
}

/// Removes vertices closer than a millionth of the mean chord to their
/// predecessor (a level passing next to a mesh vertex cuts two edges almost
/// at the same point).
fn drop_coincident(points: Vec<Vector<2>>, period: Option<f64>) -> Vec<Vector<2>> {
    let n = points.len();
    let chord = |a: &Vector<2>, b: &Vector<2>| (b[0] - a[0]).hypot(wrap(b[1] - a[1], period));
    let mean = (0..n)
        .map(|i| chord(&points[i], &points[(i + 1) % n]))
        .sum::<f64>()
        / n as f64;
    let mut out: Vec<Vector<2>> = Vec::with_capacity(n);
    for p in points {
        if out.last().map_or(true, |q| chord(q, &p) > 1e-6 * mean) {
            out.push(p);
        }
    }
    while out.len() > 1 && chord(&out[out.len() - 1], &out[0]) <= 1e-6 * mean {
        out.pop();
    }
    out
}

/// Per-component discrete geodesic curvature of a slice of a product
/// space, read in the base surface.
pub fn slice_convexity(slice: &SliceCurve, base: &Surface2D) -> SliceConvexity {
    slice_convexity_with(slice, base, 1)
}

/// [`slice_convexity`] with a wider chord stencil.
pub fn slice_convexity_with(
    slice: &SliceCurve,
    base: &Surface2D,
    stencil: usize,
) -> SliceConvexity {
    let mut out = SliceConvexity::default();
    for (i, c) in slice.components.iter().enumerate() {
        if !c.closed || c.points.len() < 3 {
            out.skipped_open.push(i);
            continue;
        }
        let pts = drop_coincident(
            c.points.iter().map(|p| [p[0], p[1]]).collect(),
            base.period(),
        );
        let curvatures = polygon_curvature_stencil(&pts, base, stencil);
        let min = curvatures.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = curvatures.iter().sum::<f64>() / curvatures.len() as f64;
        out.components.push(ComponentCurvature {
            component: i,
            curvatures,
            min,
            mean,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::RotationalSphere;

    fn circle(r: f64, n: usize) -> Vec<Vector<2>> {
        let rs = RotationalSphere::new(1.0, [1.2, 3.0, 0.0], r).unwrap();
        (0..n)
            .map(|i| {
                let a = core::f64::consts::TAU * i as f64 / n as f64;
                let p = rs.map_direction(&[a.cos(), a.sin(), 0.0]);
                [p[0], p[1]]
            })
            .collect()
    }

    #[test]
    fn geodesic_circle_curvature_is_cot_r() {
        let base = Surface2D::round_sphere(1.0).unwrap();
        let k = polygon_curvature(&circle(0.3, 360), &base);
        let want = 1.0 / 0.3.tan();
        for x in k {
            assert!((x - want).abs() / want < 1e-3, "{x} vs {want}");
        }
    }

    #[test]
    fn great_circle_has_no_curvature() {
        let base = Surface2D::round_sphere(1.0).unwrap();
        // the equator s = π/2 as a chart polyline
        let pts: Vec<Vector<2>> = (0..200)
            .map(|i| {
                [
                    core::f64::consts::FRAC_PI_2,
                    core::f64::consts::TAU * i as f64 / 200.0,
                ]
            })
            .collect();
        let k = polygon_curvature(&pts, &base);
        assert!(k.iter().all(|x| x.abs() < 1e-6));
    }

    #[test]
    fn orientation_does_not_change_the_sign() {
        let base = Surface2D::round_sphere(1.0).unwrap();
        let mut pts = circle(0.5, 120);
        let a = polygon_curvature(&pts, &base);
        pts.reverse();
        let b = polygon_curvature(&pts, &base);
        assert!(a.iter().all(|x| *x > 0.0) && b.iter().all(|x| *x > 0.0));
    }
}
