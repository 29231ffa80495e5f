use crate::error::{GeomError, Result};
use crate::linalg::{self, Vector};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Float;

/// Chart-space triangles below this area are rejected.
pub const DEGENERATE_AREA: f64 = 1e-12;

/// Triangulated surface in three-dimensional chart coordinates.
///
/// Coordinates with a period are stored unwrapped or wrapped; every edge and
/// triangle is read through the shortest periodic representative.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vector<3>>,
    pub triangles: Vec<[usize; 3]>,
    pub periods: [Option<f64>; 3],
    /// Declared height of the fiber coordinate at which the surface was cut.
    pub truncation: Option<f64>,
}

/// Edge incidence of a validated mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub edges: Vec<[usize; 2]>,
    /// Triangles on each edge; the second slot is `usize::MAX` on the boundary.
    pub edge_triangles: Vec<[usize; 2]>,
    pub triangle_edges: Vec<[usize; 3]>,
}

pub const NO_TRIANGLE: usize = usize::MAX;

impl Topology {
    pub fn is_boundary(&self, e: usize) -> bool {
        self.edge_triangles[e][1] == NO_TRIANGLE
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.is_boundary(e))
    }
}

/// Disjoint-set forest with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub(crate) fn wrap(d: f64, period: Option<f64>) -> f64 {
    match period {
        Some(p) => d - p * (d / p).round(),
        None => d,
    }
}

impl TriMesh {
    pub fn new(vertices: Vec<Vector<3>>, triangles: Vec<[usize; 3]>) -> Self {
        Self {
            vertices,
            triangles,
            periods: [None; 3],
            truncation: None,
        }
    }

    pub fn with_periods(mut self, periods: [Option<f64>; 3]) -> Self {
        self.periods = periods;
        self
    }

    pub fn with_truncation(mut self, t: Option<f64>) -> Self {
        self.truncation = t;
        self
    }

    /// `b − a` through the shortest periodic representative.
    pub fn delta(&self, a: &Vector<3>, b: &Vector<3>) -> Vector<3> {
        core::array::from_fn(|k| wrap(b[k] - a[k], self.periods[k]))
    }

    /// Vertices of triangle `t` unwrapped next to its first vertex.
    pub fn triangle_points(&self, t: usize) -> [Vector<3>; 3] {
        let [a, b, c] = self.triangles[t];
        let p = self.vertices[a];
        [
            p,
            linalg::add(&p, &self.delta(&p, &self.vertices[b])),
            linalg::add(&p, &self.delta(&p, &self.vertices[c])),
        ]
    }

    pub fn chart_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * linalg::norm(&linalg::cross3(&linalg::sub(&b, &a), &linalg::sub(&c, &a)))
    }

    /// Validates indices, edge manifoldness, orientation and triangle areas,
    /// and returns the edge incidence.
    pub fn topology(&self) -> Result<Topology> {
        let mut map: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<[usize; 2]> = Vec::new();
        let mut forward: Vec<bool> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= self.vertices.len()) {
                return Err(GeomError::IndexOutOfRange(t));
            }
            if tri[0] == tri[1]
                || tri[1] == tri[2]
                || tri[0] == tri[2]
                || !(self.chart_area(t) > DEGENERATE_AREA)
            {
                return Err(GeomError::DegenerateTriangle(t));
            }
            let mut te = [0; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let dir = a < b;
                match map.get(&key) {
                    Some(&e) => {
                        if edge_triangles[e][1] != NO_TRIANGLE {
                            return Err(GeomError::NonManifoldEdge(key.0, key.1));
                        }
                        if forward[e] == dir {
                            return Err(GeomError::NonOrientable(key.0, key.1));
                        }
                        edge_triangles[e][1] = t;
                        te[k] = e;
                    }
                    None => {
                        let e = edges.len();
                        map.insert(key, e);
                        edges.push([key.0, key.1]);
                        edge_triangles.push([t, NO_TRIANGLE]);
                        forward.push(dir);
                        te[k] = e;
                    }
                }
            }
            triangle_edges.push(te);
        }
        Ok(Topology {
            edges,
            edge_triangles,
            triangle_edges,
        })
    }

    /// `V − E + F` over vertices used by some triangle.
    pub fn euler_characteristic(&self, topo: &Topology) -> i64 {
        let mut used = alloc::vec![false; self.vertices.len()];
        for tri in &self.triangles {
            for &v in tri {
                used[v] = true;
            }
        }
        let v = used.iter().filter(|&&u| u).count() as i64;
        v - topo.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Number of closed boundary curves.
    pub fn boundary_loops(&self, topo: &Topology) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        let mut seen = alloc::vec![false; self.vertices.len()];
        for e in topo.boundary_edges() {
            let [a, b] = topo.edges[e];
            uf.union(a, b);
            seen[a] = true;
            seen[b] = true;
        }
        let mut roots: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| seen[v])
            .map(|v| uf.find(v))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Splits every triangle into four through its edge midpoints.
    pub fn refine(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vector<3>>| -> usize {
            let key = (a.min(b), a.max(b));
            *mids.entry(key).or_insert_with(|| {
                let p = vertices[key.0];
                let d = self.delta(&p, &vertices[key.1]);
                vertices.push(linalg::axpy(&p, 0.5, &d));
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Self {
            vertices,
            triangles,
            periods: self.periods,
            truncation: self.truncation,
        }
    }

    /// Adds `dz` to the fiber coordinate and to the truncation height.
    pub fn translate_fiber(&self, dz: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vertices {
            v[2] += dz;
        }
        out.truncation = self.truncation.map(|t| t + dz);
        out
    }

    /// Disjoint union.
    pub fn merge(&self, other: &TriMesh) -> Self {
        let off = self.vertices.len();
        let mut out = self.clone();
        out.vertices.extend_from_slice(&other.vertices);
        out.triangles.extend(
            other
                .triangles
                .iter()
                .map(|t| [t[0] + off, t[1] + off, t[2] + off]),
        );
        out
    }
}
