use super::mesh::{Topology, TriMesh, UnionFind, NO_TRIANGLE};
use crate::error::Result;
use crate::linalg::{self, Vector};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Float;

/// Shift applied to a level that coincides with a vertex height.
pub const LEVEL_PERTURBATION: f64 = 1e-9;

/// The scalar function whose level sets foliate the ambient space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SweepAxis {
    /// The fiber coordinate: slices by horizontal leaves `M × {t}`.
    Fiber,
    /// `cos φ · x + sin φ · y`: slices by vertical planes over parallel lines.
    Horizontal { angle: f64 },
}

impl SweepAxis {
    pub fn height(&self, p: &Vector<3>) -> f64 {
        match *self {
            Self::Fiber => p[2],
            Self::Horizontal { angle } => {
                let (s, c) = angle.sin_cos();
                c * p[0] + s * p[1]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceComponent {
    pub points: Vec<Vector<3>>,
    /// Mesh edges crossed, in polyline order.
    pub edges: Vec<usize>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceCurve {
    pub level: f64,
    pub components: Vec<SliceComponent>,
}

pub(crate) fn effective_level(heights: &[f64], t: f64) -> f64 {
    if heights.iter().any(|&h| h == t) {
        t + LEVEL_PERTURBATION
    } else {
        t
    }
}

/// Level set of the sweep function by marching triangles.
pub fn slice(mesh: &TriMesh, axis: SweepAxis, t: f64) -> Result<SliceCurve> {
    let topo = mesh.topology()?;
    let heights: Vec<f64> = mesh.vertices.iter().map(|p| axis.height(p)).collect();
    Ok(slice_with(mesh, &topo, &heights, t))
}

pub(crate) fn slice_with(mesh: &TriMesh, topo: &Topology, heights: &[f64], t: f64) -> SliceCurve {
    let level = effective_level(heights, t);
    let crosses = |e: usize| {
        let [a, b] = topo.edges[e];
        (heights[a] > level) != (heights[b] > level)
    };
    // each triangle meets the level in zero or two edges
    let mut links: BTreeMap<usize, [usize; 2]> = BTreeMap::new();
    for (tri, te) in topo.triangle_edges.iter().enumerate() {
        let mut hit = [0usize; 3];
        let mut k = 0;
        for &e in te {
            if crosses(e) {
                hit[k] = e;
                k += 1;
            }
        }
        if k == 2 {
            for (e, other) in [(hit[0], hit[1]), (hit[1], hit[0])] {
                let slot = links.entry(e).or_insert([NO_TRIANGLE; 2]);
                let k = if topo.edge_triangles[e][0] == tri {
                    0
                } else {
                    1
                };
                slot[k] = other;
            }
        }
    }
    let point = |e: usize| -> Vector<3> {
        let [a, b] = topo.edges[e];
        let pa = mesh.vertices[a];
        let d = mesh.delta(&pa, &mesh.vertices[b]);
        let lambda = (level - heights[a]) / (heights[b] - heights[a]);
        linalg::axpy(&pa, lambda, &d)
    };
    let mut visited: BTreeMap<usize, bool> = links.keys().map(|&e| (e, false)).collect();
    let mut components = Vec::new();
    let degree = |e: usize| links[&e].iter().filter(|&&x| x != NO_TRIANGLE).count();
    let starts: Vec<usize> = links
        .keys()
        .copied()
        .filter(|&e| degree(e) < 2)
        .chain(links.keys().copied().filter(|&e| degree(e) == 2))
        .collect();
    for start in starts {
        if visited[&start] {
            continue;
        }
        let open = degree(start) < 2;
        let mut edges = Vec::new();
        let mut prev = NO_TRIANGLE;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            edges.push(cur);
            let next = links[&cur]
                .iter()
                .copied()
                .find(|&x| x != NO_TRIANGLE && x != prev && !visited[&x]);
            match next {
                Some(n) => {
                    prev = cur;
                    cur = n;
                }
                None => break,
            }
        }
        let points = edges.iter().map(|&e| point(e)).collect();
        components.push(SliceComponent {
            points,
            edges,
            closed: !open,
        });
    }
    SliceCurve { level, components }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EventKind {
    Birth,
    Death,
    Merge,
    Split,
    Ambiguous,
    ConvexityFailure,
    SelfIntersection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepEvent {
    /// Centre of the band in which the event was localized.
    pub t: f64,
    pub kind: EventKind,
    /// Index of the band component (or triangle pair) that produced it.
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tracking {
    pub levels: Vec<f64>,
    pub component_counts: Vec<usize>,
    pub events: Vec<SweepEvent>,
}

impl Tracking {
    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

/// Component lifecycle between consecutive levels `t_min, t_min + dt, …`.
///
/// Slice components at two neighbouring levels are matched through the
/// connected components of the mesh strip lying between them.
pub fn track_components(
    mesh: &TriMesh,
    axis: SweepAxis,
    t_min: f64,
    t_max: f64,
    dt: f64,
) -> Result<Tracking> {
    let topo = mesh.topology()?;
    track_with(mesh, &topo, axis, t_min, t_max, dt)
}

pub(crate) fn track_with(
    mesh: &TriMesh,
    topo: &Topology,
    axis: SweepAxis,
    t_min: f64,
    t_max: f64,
    dt: f64,
) -> Result<Tracking> {
    if !(dt > 0.0) || !(t_max >= t_min) {
        return Err(crate::error::GeomError::InvalidParameter(
            "need dt > 0 and t_max >= t_min",
        ));
    }
    let heights: Vec<f64> = mesh.vertices.iter().map(|p| axis.height(p)).collect();
    // the last level must reach t_max despite rounding in the quotient
    let n = ((t_max - t_min) / dt - 1e-9).ceil().max(0.0) as usize + 1;
    let levels: Vec<f64> = (0..n)
        .map(|i| effective_level(&heights, t_min + dt * i as f64))
        .collect();
    let slices: Vec<SliceCurve> = levels
        .iter()
        .map(|&t| slice_with(mesh, topo, &heights, t))
        .collect();
    let tri_range: Vec<(f64, f64)> = mesh
        .triangles
        .iter()
        .map(|t| {
            let h = [heights[t[0]], heights[t[1]], heights[t[2]]];
            (h[0].min(h[1]).min(h[2]), h[0].max(h[1]).max(h[2]))
        })
        .collect();
    let mut events = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (lo, hi) = (levels[i], levels[i + 1]);
        let in_band = |(a, b): (f64, f64)| b > lo && a <= hi;
        let mut uf = UnionFind::new(mesh.triangles.len());
        let mut member = alloc::vec![false; mesh.triangles.len()];
        for (t, &r) in tri_range.iter().enumerate() {
            member[t] = in_band(r);
        }
        for (e, &[a, b]) in topo.edges.iter().enumerate() {
            let [t0, t1] = topo.edge_triangles[e];
            if t1 == NO_TRIANGLE || !member[t0] || !member[t1] {
                continue;
            }
            let r = (heights[a].min(heights[b]), heights[a].max(heights[b]));
            if in_band(r) {
                uf.union(t0, t1);
            }
        }
        let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for t in 0..mesh.triangles.len() {
            if member[t] {
                counts.entry(uf.find(t)).or_insert((0, 0));
            }
        }
        for (side, slice) in [(0, &slices[i]), (1, &slices[i + 1])] {
            for c in &slice.components {
                let root = uf.find(topo.edge_triangles[c.edges[0]][0]);
                let entry = counts.entry(root).or_insert((0, 0));
                if side == 0 {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        let t = 0.5 * (lo + hi);
        for (&id, &(below, above)) in &counts {
            let mut push = |kind| events.push(SweepEvent { t, kind, id });
            match (below, above) {
                (1, 1) => {}
                (0, 0) => {
                    push(EventKind::Birth);
                    push(EventKind::Death);
                }
                (0, 1) => push(EventKind::Birth),
                (1, 0) => push(EventKind::Death),
                (0, _) => {
                    push(EventKind::Birth);
                    push(EventKind::Split);
                }
                (_, 0) => {
                    push(EventKind::Merge);
                    push(EventKind::Death);
                }
                (_, 1) => push(EventKind::Merge),
                (1, _) => push(EventKind::Split),
                _ => push(EventKind::Ambiguous),
            }
        }
    }
    events.sort_by(|a, b| {
        a.t.total_cmp(&b.t)
            .then(a.kind.cmp(&b.kind))
            .then(a.id.cmp(&b.id))
    });
    Ok(Tracking {
        component_counts: slices.iter().map(|s| s.components.len()).collect(),
        levels,
        events,
    })
}
