//! Constructed meshes with known topology, used by the classifier tests and
//! the fixture generator.

use crate::error::Result;
use crate::immersion::RotationalSphere;
use crate::linalg::{self, Vector};
use crate::spaces::{AmbientSpace, Fiber, Heisenberg, ProductSpace, Surface2D};
use crate::sweep::TriMesh;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use num_traits::Float;

/// Centre of the sphere fixtures in `S² × ℝ` chart coordinates.
pub const SPHERE_CENTER: Vector<3> = [FRAC_PI_2, PI, 0.7];
pub const SPHERE_RADIUS: f64 = 0.3;
/// Default icosphere subdivision depth (20 · 4⁵ = 20480 triangles).
pub const SPHERE_SUBDIVISIONS: usize = 5;
pub const GRAPH_TRUNCATION: f64 = 20.0;
pub const REMARK_LENGTH: f64 = 10.0;
pub const REMARK_BLEND: f64 = 1.0;
pub const REMARK_R0: f64 = 4.0;

/// A mesh together with the ambient space it lives in.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub mesh: TriMesh,
    pub space: AmbientSpace,
    /// The same space in the CLI grammar.
    pub space_spec: String,
}

pub const FIXTURE_NAMES: [&str; 8] = [
    "sphere",
    "egg",
    "sphere-pair",
    "graph",
    "remark-tube",
    "torus",
    "figure-eight",
    "heis-paraboloid",
];

/// Builds a fixture by name at the default resolution.
pub fn by_name(name: &str) -> Option<Result<Fixture>> {
    Some(match name {
        "sphere" => geodesic_sphere(SPHERE_SUBDIVISIONS),
        "egg" => egg(SPHERE_SUBDIVISIONS),
        "sphere-pair" => sphere_pair(4),
        "graph" => convex_graph(160, 64),
        "remark-tube" => remark_tube(128, 80),
        "torus" => torus(96, 48),
        "figure-eight" => figure_eight(192, 24),
        "heis-paraboloid" => heisenberg_paraboloid(1.0, 1.0, 0.5, 96, 48),
        _ => return None,
    })
}

pub fn round_product() -> Result<(AmbientSpace, String)> {
    let space = ProductSpace::new(Surface2D::round_sphere(1.0)?, Fiber::Line)?;
    Ok((
        AmbientSpace::Product(space),
        String::from("product base=(sphere r=1) fiber=(line)"),
    ))
}

fn round_mesh(vertices: Vec<Vector<3>>, triangles: Vec<[usize; 3]>) -> TriMesh {
    TriMesh::new(vertices, triangles).with_periods([None, Some(TAU), None])
}

/// Icosahedron subdivided `depth` times, projected to the unit sphere.
pub fn icosphere(depth: usize) -> (Vec<Vector<3>>, Vec<[usize; 3]>) {
    let g = (1.0 + 5.0.sqrt()) / 2.0;
    let mut v: Vec<Vector<3>> = alloc::vec![
        [-1.0, g, 0.0],
        [1.0, g, 0.0],
        [-1.0, -g, 0.0],
        [1.0, -g, 0.0],
        [0.0, -1.0, g],
        [0.0, 1.0, g],
        [0.0, -1.0, -g],
        [0.0, 1.0, -g],
        [g, 0.0, -1.0],
        [g, 0.0, 1.0],
        [-g, 0.0, -1.0],
        [-g, 0.0, 1.0],
    ];
    let mut f: Vec<[usize; 3]> = alloc::vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let unit = |p: Vector<3>| linalg::scale(1.0 / linalg::norm(&p), &p);
    v.iter_mut().for_each(|p| *p = unit(*p));
    for _ in 0..depth {
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(4 * f.len());
        let mut mid = |a: usize, b: usize, v: &mut Vec<Vector<3>>| {
            *mids.entry((a.min(b), a.max(b))).or_insert_with(|| {
                v.push(unit(linalg::scale(0.5, &linalg::add(&v[a], &v[b]))));
                v.len() - 1
            })
        };
        for &[a, b, c] in &f {
            let ab = mid(a, b, &mut v);
            let bc = mid(b, c, &mut v);
            let ca = mid(c, a, &mut v);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        f = next;
    }
    (v, f)
}

/// Geodesic sphere of radius [`SPHERE_RADIUS`] about [`SPHERE_CENTER`] in
/// `S² × ℝ`: the unit icosphere pushed through the exponential map of the
/// base and scaled in the fiber.
pub fn geodesic_sphere(depth: usize) -> Result<Fixture> {
    let (space, space_spec) = round_product()?;
    let rs = RotationalSphere::new(1.0, SPHERE_CENTER, SPHERE_RADIUS)?;
    let (v, f) = icosphere(depth);
    let mesh = round_mesh(v.iter().map(|w| rs.map_direction(w)).collect(), f);
    Ok(Fixture {
        name: "sphere",
        mesh,
        space,
        space_spec,
    })
}

/// Convex, not symmetric about any horizontal level: the upper half is
/// stretched to height 0.45 above the centre, the lower half keeps 0.3.
pub fn egg(depth: usize) -> Result<Fixture> {
    let (space, space_spec) = round_product()?;
    let rs = RotationalSphere::new(1.0, SPHERE_CENTER, SPHERE_RADIUS)?;
    let (v, f) = icosphere(depth);
    let vertices = v
        .iter()
        .map(|w| {
            let mut p = rs.map_direction(w);
            if w[2] > 0.0 {
                p[2] = SPHERE_CENTER[2] + 0.45 * w[2];
            }
            p
        })
        .collect();
    Ok(Fixture {
        name: "egg",
        mesh: round_mesh(vertices, f),
        space,
        space_spec,
    })
}

/// Two disjoint spheres side by side whose height ranges overlap on [0.6, 1.0].
pub fn sphere_pair(depth: usize) -> Result<Fixture> {
    let (space, space_spec) = round_product()?;
    let (v, f) = icosphere(depth);
    let a = RotationalSphere::new(1.0, [FRAC_PI_2, PI - 0.8, 0.7], SPHERE_RADIUS)?;
    let b = RotationalSphere::new(1.0, [FRAC_PI_2, PI + 0.8, 0.9], SPHERE_RADIUS)?;
    let ma = round_mesh(v.iter().map(|w| a.map_direction(w)).collect(), f.clone());
    let mb = round_mesh(v.iter().map(|w| b.map_direction(w)).collect(), f);
    Ok(Fixture {
        name: "sphere-pair",
        mesh: ma.merge(&mb),
        space,
        space_spec,
    })
}

/// Rings of `segments` vertices around a pole vertex; ring `k` (1-based) is
/// produced by `ring(k, angle)`. Returns an open disk oriented consistently.
fn polar_disk(
    rings: usize,
    segments: usize,
    pole: Vector<3>,
    ring: impl Fn(usize, f64) -> Vector<3>,
) -> (Vec<Vector<3>>, Vec<[usize; 3]>) {
    let mut vertices = alloc::vec![pole];
    for k in 1..=rings {
        for j in 0..segments {
            vertices.push(ring(k, TAU * j as f64 / segments as f64));
        }
    }
    let idx = |k: usize, j: usize| 1 + (k - 1) * segments + j % segments;
    let mut triangles = Vec::new();
    for j in 0..segments {
        triangles.push([0, idx(1, j), idx(1, j + 1)]);
    }
    for k in 1..rings {
        for j in 0..segments {
            triangles.push([idx(k, j), idx(k + 1, j), idx(k + 1, j + 1)]);
            triangles.push([idx(k, j), idx(k + 1, j + 1), idx(k, j + 1)]);
        }
    }
    (vertices, triangles)
}

/// Entire graph `t = 1/(0.5 − d)` over the geodesic disk of radius 0.5 in
/// `S²`, `d` the distance to the disk centre, cut at `t = 20`.
pub fn convex_graph(segments: usize, rings: usize) -> Result<Fixture> {
    let (space, space_spec) = round_product()?;
    let rs = RotationalSphere::new(1.0, [FRAC_PI_2, PI, 0.0], 0.5)?;
    let (vertices, triangles) = polar_disk(rings, segments, [FRAC_PI_2, PI, 2.0], |k, a| {
        let t = 2.0 + (GRAPH_TRUNCATION - 2.0) * k as f64 / rings as f64;
        let d = 0.5 - 1.0 / t;
        let mut p = rs.map_direction(&[(d / 0.5) * a.cos(), (d / 0.5) * a.sin(), 0.0]);
        p[2] = t;
        p
    });
    let mesh = round_mesh(vertices, triangles).with_truncation(Some(GRAPH_TRUNCATION));
    Ok(Fixture {
        name: "graph",
        mesh,
        space,
        space_spec,
    })
}

/// Expanding-then-contracting chart circles on a capped cylinder: radius
/// `t` for `t ≤ r₀` and `2r₀ − t` above. Circles wider than half the
/// circumference overlap themselves, so the surface is immersed but not
/// embedded.
pub fn remark_tube(segments: usize, rings: usize) -> Result<Fixture> {
    let space = ProductSpace::new(
        Surface2D::capped_cylinder(REMARK_LENGTH, REMARK_BLEND)?,
        Fiber::Line,
    )?;
    let spec =
        alloc::format!("product base=(capped l={REMARK_LENGTH} blend={REMARK_BLEND}) fiber=(line)");
    let top = 2.0 * REMARK_R0;
    let mut vertices = alloc::vec![[0.0, PI, 0.0]];
    for k in 1..rings {
        let t = top * k as f64 / rings as f64;
        let r = if t <= REMARK_R0 { t } else { top - t };
        for j in 0..segments {
            let a = TAU * j as f64 / segments as f64;
            vertices.push([r * a.cos(), PI + r * a.sin(), t]);
        }
    }
    vertices.push([0.0, PI, top]);
    let apex = vertices.len() - 1;
    let idx = |k: usize, j: usize| 1 + (k - 1) * segments + j % segments;
    let mut triangles = Vec::new();
    for j in 0..segments {
        triangles.push([0, idx(1, j + 1), idx(1, j)]);
        triangles.push([apex, idx(rings - 1, j), idx(rings - 1, j + 1)]);
    }
    for k in 1..rings - 1 {
        for j in 0..segments {
            triangles.push([idx(k, j), idx(k, j + 1), idx(k + 1, j + 1)]);
            triangles.push([idx(k, j), idx(k + 1, j + 1), idx(k + 1, j)]);
        }
    }
    let mesh = TriMesh::new(vertices, triangles).with_periods(space.periods());
    Ok(Fixture {
        name: "remark-tube",
        mesh,
        space: AmbientSpace::Product(space),
        space_spec: spec,
    })
}

/// Closed tube of radius `r` around a closed curve in chart coordinates.
fn tube(
    curve: impl Fn(f64) -> (Vector<3>, Vector<3>, Vector<3>),
    r: f64,
    segments: usize,
    sides: usize,
) -> (Vec<Vector<3>>, Vec<[usize; 3]>) {
    let mut vertices = Vec::with_capacity(segments * sides);
    for i in 0..segments {
        let (c, n, b) = curve(TAU * i as f64 / segments as f64);
        for j in 0..sides {
            let (s, co) = (TAU * j as f64 / sides as f64).sin_cos();
            vertices.push(core::array::from_fn(|k| c[k] + r * (co * n[k] + s * b[k])));
        }
    }
    let idx = |i: usize, j: usize| (i % segments) * sides + j % sides;
    let mut triangles = Vec::with_capacity(2 * segments * sides);
    for i in 0..segments {
        for j in 0..sides {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    (vertices, triangles)
}

/// Torus of revolution standing upright: core circle of radius 0.3 in the
/// `(s, t)` plane, tube radius 0.1.
pub fn torus(segments: usize, sides: usize) -> Result<Fixture> {
    let (space, space_spec) = round_product()?;
    let [s0, p0, t0] = SPHERE_CENTER;
    let (v, f) = tube(
        |u| {
            let (su, cu) = u.sin_cos();
            (
                [s0 + 0.3 * cu, p0, t0 + 0.3 * su],
                [cu, 0.0, su],
                [0.0, 1.0, 0.0],
            )
        },
        0.1,
        segments,
        sides,
    );
    Ok(Fixture {
        name: "torus",
        mesh: round_mesh(v, f),
        space,
        space_spec,
    })
}

/// Thin tube around a horizontal figure-eight; the two lobes cross.
pub fn figure_eight(segments: usize, sides: usize) -> Result<Fixture> {
    let (space, space_spec) = round_product()?;
    let [s0, p0, t0] = SPHERE_CENTER;
    let (v, f) = tube(
        |u| {
            let (su, cu) = u.sin_cos();
            let c = [s0 + 0.3 * su, p0 + 0.3 * su * cu, t0];
            let d = [0.3 * cu, 0.3 * (2.0 * u).cos()];
            let l = d[0].hypot(d[1]);
            (c, [-d[1] / l, d[0] / l, 0.0], [0.0, 0.0, 1.0])
        },
        0.04,
        segments,
        sides,
    );
    Ok(Fixture {
        name: "figure-eight",
        mesh: round_mesh(v, f),
        space,
        space_spec,
    })
}

/// Graph `z = a(x² + y²)` over the disk of radius `radius` in `Nil₃(τ)`,
/// cut at `z = a·radius²`.
pub fn heisenberg_paraboloid(
    tau: f64,
    a: f64,
    radius: f64,
    segments: usize,
    rings: usize,
) -> Result<Fixture> {
    let space = AmbientSpace::Heisenberg(Heisenberg::new(tau)?);
    let (vertices, triangles) = polar_disk(rings, segments, [0.0, 0.0, 0.0], |k, ang| {
        let r = radius * k as f64 / rings as f64;
        [r * ang.cos(), r * ang.sin(), a * r * r]
    });
    let mesh = TriMesh::new(vertices, triangles).with_truncation(Some(a * radius * radius));
    Ok(Fixture {
        name: "heis-paraboloid",
        mesh,
        space,
        space_spec: alloc::format!("heisenberg tau={tau}"),
    })
}

/// `n` points on the geodesic circle of radius `r` about `center` on the
/// unit sphere, in `(s, φ)` chart coordinates.
pub fn geodesic_circle(center: Vector<2>, r: f64, n: usize) -> Result<Vec<Vector<2>>> {
    let rs = RotationalSphere::new(1.0, [center[0], center[1], 0.0], r)?;
    Ok((0..n)
        .map(|i| {
            let (s, c) = (TAU * i as f64 / n as f64).sin_cos();
            let p = rs.map_direction(&[c, s, 0.0]);
            [p[0], p[1]]
        })
        .collect())
}
