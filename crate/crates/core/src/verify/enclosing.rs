use crate::error::{GeomError, Result};
use crate::linalg::Vector;
use alloc::vec::Vec;
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Relative shortfall of discrete curvature tolerated by the precondition.
pub const CURVATURE_PRECONDITION_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Vector<2>,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: &Vector<2>) -> bool {
        dist(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-15
    }
}

fn dist(a: &Vector<2>, b: &Vector<2>) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn from_two(a: &Vector<2>, b: &Vector<2>) -> Circle {
    let center = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    Circle {
        center,
        radius: dist(a, b) / 2.0,
    }
}

fn from_three(a: &Vector<2>, b: &Vector<2>, c: &Vector<2>) -> Circle {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        // collinear: the widest pair
        let cands = [from_two(a, b), from_two(a, c), from_two(b, c)];
        return cands
            .into_iter()
            .fold(cands[0], |m, x| if x.radius > m.radius { x } else { m });
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Circle {
        center: [a[0] + ux, a[1] + uy],
        radius: (ux * ux + uy * uy).sqrt(),
    }
}

/// Smallest circle containing all points (randomized incremental, Welzl).
pub fn minimal_enclosing_circle(points: &[Vector<2>]) -> Option<Circle> {
    let mut pts: Vec<Vector<2>> = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let mut c = Circle {
        center: *pts.first()?,
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if c.contains(&pts[i]) {
            continue;
        }
        c = Circle {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(&pts[j]) {
                continue;
            }
            c = from_two(&pts[i], &pts[j]);
            for k in 0..j {
                if !c.contains(&pts[k]) {
                    c = from_three(&pts[i], &pts[j], &pts[k]);
                }
            }
        }
    }
    Some(c)
}

/// Exterior turning angle over mean adjacent edge length at each vertex of
/// a closed polyline, signed positive for counter-clockwise turns.
pub fn discrete_curvatures(polyline: &[Vector<2>]) -> Vec<f64> {
    let n = polyline.len();
    (0..n)
        .map(|i| {
            let prev = polyline[(i + n - 1) % n];
            let cur = polyline[i];
            let next = polyline[(i + 1) % n];
            let a = [cur[0] - prev[0], cur[1] - prev[1]];
            let b = [next[0] - cur[0], next[1] - cur[1]];
            let turn = (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
            turn / (0.5 * (dist(&prev, &cur) + dist(&cur, &next)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadiusCheck {
    pub radius: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub min_curvature: f64,
    pub pass: bool,
}

/// For a closed plane polyline with discrete curvature at least `c`,
/// certifies that its minimal enclosing circle has radius at most `1/c`
/// up to twice the longest segment.
pub fn convex_curve_radius_check(polyline: &[Vector<2>], c: f64) -> Result<RadiusCheck> {
    if !(c > 0.0) {
        return Err(GeomError::InvalidParameter(
            "curvature bound must be positive",
        ));
    }
    if polyline.len() < 3 {
        return Err(GeomError::InvalidParameter("polyline needs three vertices"));
    }
    let mut curv = discrete_curvatures(polyline);
    let total: f64 = curv.iter().sum();
    if total < 0.0 {
        curv.iter_mut().for_each(|k| *k = -*k);
    }
    let required = c * (1.0 - CURVATURE_PRECONDITION_SLACK);
    if let Some((vertex, &found)) = curv.iter().enumerate().find(|(_, k)| !(**k >= required)) {
        return Err(GeomError::CurvaturePrecondition {
            vertex,
            found,
            required: c,
        });
    }
    let seg = (0..polyline.len())
        .map(|i| dist(&polyline[i], &polyline[(i + 1) % polyline.len()]))
        .fold(0.0, f64::max);
    let circle = minimal_enclosing_circle(polyline).expect("non-empty");
    let tolerance = 2.0 * seg;
    let bound = 1.0 / c;
    Ok(RadiusCheck {
        radius: circle.radius,
        bound,
        tolerance,
        min_curvature: curv.iter().copied().fold(f64::INFINITY, f64::min),
        pass: circle.radius <= bound + tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(points: &[Vector<2>]) -> f64 {
        let mut best = f64::INFINITY;
        let n = points.len();
        let covers = |c: &Circle| points.iter().all(|p| c.contains(p));
        for i in 0..n {
            for j in i + 1..n {
                let c = from_two(&points[i], &points[j]);
                if covers(&c) {
                    best = best.min(c.radius);
                }
                for k in j + 1..n {
                    let c = from_three(&points[i], &points[j], &points[k]);
                    if covers(&c) {
                        best = best.min(c.radius);
                    }
                }
            }
        }
        best
    }

    fn circle(r: f64, n: usize) -> Vec<Vector<2>> {
        (0..n)
            .map(|i| {
                let t = 2.0 * core::f64::consts::PI * i as f64 / n as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect()
    }

    proptest! {
        #[test]
        fn welzl_matches_brute_force(pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 2..14)) {
            let pts: Vec<Vector<2>> = pts.into_iter().map(|(a, b)| [a, b]).collect();
            let c = minimal_enclosing_circle(&pts).unwrap();
            prop_assert!(pts.iter().all(|p| c.contains(p)));
            prop_assert!((c.radius - brute_force(&pts)).abs() < 1e-9);
        }
    }

    #[test]
    fn circles_are_certified() {
        for c in [2.2, 2.5, 4.0] {
            let r = convex_curve_radius_check(&circle(1.0 / c, 360), c).unwrap();
            assert!(r.pass);
            assert!((r.radius - 1.0 / c).abs() < 1e-12);
        }
    }

    #[test]
    fn overstated_curvature_is_rejected() {
        let pts = circle(0.6, 360);
        assert!(convex_curve_radius_check(&pts, 1.0 / 0.6).unwrap().pass);
        assert!(matches!(
            convex_curve_radius_check(&pts, 2.5),
            Err(GeomError::CurvaturePrecondition { .. })
        ));
    }

    #[test]
    fn ellipse_with_known_minimum_curvature() {
        let (a, b) = (0.4, 2.2 * 0.16);
        let pts: Vec<Vector<2>> = (0..720)
            .map(|i| {
                let t = 2.0 * core::f64::consts::PI * i as f64 / 720.0;
                [a * t.cos(), b * t.sin()]
            })
            .collect();
        let r = convex_curve_radius_check(&pts, 2.2).unwrap();
        assert!(r.pass);
        assert!(
            (r.radius - brute_force(&pts.iter().step_by(36).copied().collect::<Vec<_>>())).abs()
                < 1e-3
        );
    }

    #[test]
    fn discrete_curvature_of_circle() {
        let k = discrete_curvatures(&circle(0.5, 360));
        assert!(k.iter().all(|v| (v - 2.0).abs() < 1e-4));
    }
}
