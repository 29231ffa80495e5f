use super::mesh::{TriMesh, DEGENERATE_AREA};
use super::slice::{slice_with, SweepAxis};
use crate::error::{GeomError, Result};
use crate::immersion::ParametricSurface;
use crate::kernel::metric_at;
use crate::linalg::{self, Vector};
use crate::spaces::KillingSubmersion;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Float;

/// `|ν|` below this counts as a vertical tangent plane.
pub const VERTICAL_NU: f64 = 1e-8;
/// Relative mismatch allowed between a half's projected area and the slice area.
pub const BIGRAPH_AREA_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GraphWitness {
    /// The Killing field is tangent to triangle `triangle`.
    VerticalTangent { triangle: usize, nu: f64 },
    /// The angle function changes sign between two triangles.
    SignChange { a: usize, b: usize },
    /// Two triangles project onto overlapping base regions at distinct heights.
    ProjectionOverlap { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphCheck {
    pub is_graph: bool,
    pub witness: Option<GraphWitness>,
    pub min_abs_nu: f64,
    pub triangles: usize,
}

/// `⟨N, ξ⟩` for the flat triangle through `tri`, evaluated at its centroid.
fn triangle_nu<S: KillingSubmersion<3> + ?Sized>(space: &S, tri: &[Vector<3>; 3]) -> Result<f64> {
    let c: Vector<3> = core::array::from_fn(|k| (tri[0][k] + tri[1][k] + tri[2][k]) / 3.0);
    let n = linalg::cross3(
        &linalg::sub(&tri[1], &tri[0]),
        &linalg::sub(&tri[2], &tri[0]),
    );
    // n is a covector annihilating the triangle; its g-dual is the normal
    let g = metric_at(space, &c)?;
    let ginv = g.inverse();
    let len = linalg::bilinear(&ginv, &n, &n).sqrt();
    Ok(linalg::dot(&n, &space.xi(&c)) / len)
}

fn point_in_triangle(t: &[[f64; 2]; 3], p: [f64; 2]) -> Option<[f64; 3]> {
    let d = (t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]);
    if d.abs() < DEGENERATE_AREA {
        return None;
    }
    let l1 = ((p[0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (p[1] - t[0][1])) / d;
    let l2 = ((t[1][0] - t[0][0]) * (p[1] - t[0][1]) - (p[0] - t[0][0]) * (t[1][1] - t[0][1])) / d;
    let l0 = 1.0 - l1 - l2;
    const EPS: f64 = 1e-9;
    (l0 > EPS && l1 > EPS && l2 > EPS).then_some([l0, l1, l2])
}

/// Whether the mesh is a Killing graph: the angle function is nonzero with
/// one sign on every triangle, and the projection dropping the fiber
/// coordinate is one-to-one (checked by locating every projected centroid in
/// the other projected triangles through a uniform spatial hash).
pub fn killing_graph_check<S: KillingSubmersion<3> + ?Sized>(
    mesh: &TriMesh,
    space: &S,
) -> Result<GraphCheck> {
    let tris: Vec<usize> = (0..mesh.triangles.len())
        .filter(|&t| mesh.chart_area(t) > DEGENERATE_AREA)
        .collect();
    let mut min_abs_nu = f64::INFINITY;
    let mut first_sign: Option<(usize, f64)> = None;
    let mut witness = None;
    for &t in &tris {
        let nu = triangle_nu(space, &mesh.triangle_points(t))?;
        min_abs_nu = min_abs_nu.min(nu.abs());
        if witness.is_some() {
            continue;
        }
        if nu.abs() < VERTICAL_NU {
            witness = Some(GraphWitness::VerticalTangent { triangle: t, nu });
        } else if let Some((a, s)) = first_sign {
            if s * nu < 0.0 {
                witness = Some(GraphWitness::SignChange { a, b: t });
            }
        } else {
            first_sign = Some((t, nu));
        }
    }
    if witness.is_none() {
        witness =
            projection_overlap(mesh, &tris).map(|(a, b)| GraphWitness::ProjectionOverlap { a, b });
    }
    Ok(GraphCheck {
        is_graph: witness.is_none(),
        witness,
        min_abs_nu,
        triangles: tris.len(),
    })
}

fn projection_overlap(mesh: &TriMesh, tris: &[usize]) -> Option<(usize, usize)> {
    if tris.is_empty() {
        return None;
    }
    let period = mesh.periods[1];
    let canon = |x: f64| period.map_or(x, |p| x - p * (x / p).floor());
    let proj: Vec<([[f64; 2]; 3], [f64; 3])> = tris
        .iter()
        .map(|&t| {
            let pts = mesh.triangle_points(t);
            let shift = canon(pts[0][1]) - pts[0][1];
            (
                core::array::from_fn(|i| [pts[i][0], pts[i][1] + shift]),
                core::array::from_fn(|i| pts[i][2]),
            )
        })
        .collect();
    let mut edge_sum = 0.0;
    for (p, _) in &proj {
        for i in 0..3 {
            let j = (i + 1) % 3;
            edge_sum += (p[j][0] - p[i][0]).hypot(p[j][1] - p[i][1]);
        }
    }
    let cell = (edge_sum / (3 * proj.len()) as f64).max(1e-12);
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);
    let mut grid: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, (p, _)) in proj.iter().enumerate() {
        let lo = key(
            p.iter().map(|q| q[0]).fold(f64::INFINITY, f64::min),
            p.iter().map(|q| q[1]).fold(f64::INFINITY, f64::min),
        );
        let hi = key(
            p.iter().map(|q| q[0]).fold(f64::NEG_INFINITY, f64::max),
            p.iter().map(|q| q[1]).fold(f64::NEG_INFINITY, f64::max),
        );
        for a in lo.0..=hi.0 {
            for b in lo.1..=hi.1 {
                grid.entry((a, b)).or_default().push(i);
            }
        }
    }
    let shifts: &[f64] = match period {
        Some(p) => &[0.0, p, -p],
        None => &[0.0],
    };
    for (i, (p, h)) in proj.iter().enumerate() {
        let c = [
            (p[0][0] + p[1][0] + p[2][0]) / 3.0,
            (p[0][1] + p[1][1] + p[2][1]) / 3.0,
        ];
        let hc = (h[0] + h[1] + h[2]) / 3.0;
        for &s in shifts {
            let q = [c[0], c[1] + s];
            let Some(cands) = grid.get(&key(q[0], q[1])) else {
                continue;
            };
            for &j in cands {
                if j == i {
                    continue;
                }
                let (pj, hj) = &proj[j];
                if let Some(l) = point_in_triangle(pj, q) {
                    let hq = l[0] * hj[0] + l[1] * hj[1] + l[2] * hj[2];
                    if (hq - hc).abs() > 1e-9 * (1.0 + hc.abs()) {
                        return Some((tris[i.min(j)], tris[i.max(j)]));
                    }
                }
            }
        }
    }
    None
}

/// Triangulates the closed parameter rectangle on an `nu × nv` grid.
pub fn grid_mesh<P: ParametricSurface<3> + ?Sized>(surface: &P, nu: usize, nv: usize) -> TriMesh {
    let d = surface.domain();
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let u = d.u.0 + (d.u.1 - d.u.0) * i as f64 / (nu - 1) as f64;
            let v = d.v.0 + (d.v.1 - d.v.0) * j as f64 / (nv - 1) as f64;
            vertices.push(surface.point(u, v));
        }
    }
    let mut triangles = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j;
            let (b, c, e) = (a + nv, a + nv + 1, a + 1);
            triangles.push([a, b, c]);
            triangles.push([a, c, e]);
        }
    }
    TriMesh::new(vertices, triangles)
}

/// [`killing_graph_check`] on a grid triangulation of a parametrized surface.
pub fn killing_graph_check_surface<P, S>(
    surface: &P,
    space: &S,
    nu: usize,
    nv: usize,
) -> Result<GraphCheck>
where
    P: ParametricSurface<3> + ?Sized,
    S: KillingSubmersion<3> + ?Sized,
{
    if nu < 2 || nv < 2 {
        return Err(GeomError::InvalidParameter(
            "grid needs at least 2 x 2 samples",
        ));
    }
    killing_graph_check(&grid_mesh(surface, nu, nv), space)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bigraph {
    pub t0: f64,
    /// `|Σ projected |area| − slice area| / slice area` for the part above `t0`.
    pub upper_error: f64,
    pub lower_error: f64,
}

fn shoelace(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

/// Projected |area| of the part of a triangle with height above (`up`) or below `level`.
fn clipped_area(tri: &[Vector<3>; 3], level: f64, up: bool) -> f64 {
    let inside = |p: &Vector<3>| if up { p[2] > level } else { p[2] <= level };
    let mut poly: Vec<[f64; 2]> = Vec::with_capacity(4);
    for i in 0..3 {
        let (a, b) = (&tri[i], &tri[(i + 1) % 3]);
        if inside(a) {
            poly.push([a[0], a[1]]);
        }
        if inside(a) != inside(b) {
            let s = (level - a[2]) / (b[2] - a[2]);
            poly.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
        }
    }
    if poly.len() < 3 {
        0.0
    } else {
        shoelace(&poly).abs()
    }
}

/// A fiber level `t₀` at which the closed mesh splits into two Killing
/// graphs over the region bounded by the slice: each half's projected area,
/// counted with multiplicity, must match the enclosed slice area within 1%.
/// Among qualifying levels the one with the smallest error is returned.
pub fn alexandrov_bigraph(mesh: &TriMesh, levels: usize) -> Result<Option<Bigraph>> {
    let topo = mesh.topology()?;
    if topo.boundary_edges().next().is_some() || mesh.euler_characteristic(&topo) != 2 {
        return Err(GeomError::InvalidParameter(
            "bi-graph search needs a closed sphere mesh",
        ));
    }
    if levels < 2 {
        return Err(GeomError::InvalidParameter(
            "bi-graph search needs at least 2 levels",
        ));
    }
    let heights: Vec<f64> = mesh
        .vertices
        .iter()
        .map(|p| SweepAxis::Fiber.height(p))
        .collect();
    let (lo, hi) = heights
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &h| {
            (a.min(h), b.max(h))
        });
    let tris: Vec<[Vector<3>; 3]> = (0..mesh.triangles.len())
        .map(|t| mesh.triangle_points(t))
        .collect();
    let mut best: Option<Bigraph> = None;
    for i in 1..levels {
        let t = lo + (hi - lo) * i as f64 / levels as f64;
        let curve = slice_with(mesh, &topo, &heights, t);
        if curve.components.len() != 1 || !curve.components[0].closed {
            continue;
        }
        // unwrap consecutive slice points so periodic crossings do not tear the polygon
        let pts = &curve.components[0].points;
        let mut poly: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
        poly.push([pts[0][0], pts[0][1]]);
        for k in 1..pts.len() {
            let d = mesh.delta(&pts[k - 1], &pts[k]);
            let prev = poly[k - 1];
            poly.push([prev[0] + d[0], prev[1] + d[1]]);
        }
        let area = shoelace(&poly).abs();
        if !(area > 0.0) {
            continue;
        }
        let level = curve.level;
        let up: f64 = tris.iter().map(|tri| clipped_area(tri, level, true)).sum();
        let down: f64 = tris.iter().map(|tri| clipped_area(tri, level, false)).sum();
        let cand = Bigraph {
            t0: level,
            upper_error: (up - area).abs() / area,
            lower_error: (down - area).abs() / area,
        };
        if cand.upper_error < BIGRAPH_AREA_TOL && cand.lower_error < BIGRAPH_AREA_TOL {
            let score = |b: &Bigraph| b.upper_error.max(b.lower_error);
            if best.map_or(true, |b| score(&cand) < score(&b)) {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}
