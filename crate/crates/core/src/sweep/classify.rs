use super::convexity::slice_convexity_with;
use super::intersect::{self_intersect, IntersectingPair};
use super::mesh::{Topology, TriMesh};
use super::slice::{slice_with, track_with, EventKind, SweepAxis, SweepEvent, Tracking};
use crate::error::{GeomError, Result};
use crate::spaces::AmbientSpace;
use alloc::string::String;
use alloc::vec::Vec;

/// Default number of sweep levels across the height range.
pub const DEFAULT_LEVELS: usize = 256;
/// At most this many self-intersection events are listed.
pub const MAX_INTERSECTION_EVENTS: usize = 64;
/// Chord stencil for the slice-convexity diagnostic; one-segment chords on
/// a polyhedral slice pick up mesh-scale zigzag.
pub const DIAGNOSTIC_STENCIL: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Sphere,
    PlaneTopEnd,
    PlaneBottomEnd,
    NonEmbedded,
    Undetermined,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Sphere => "Sphere",
            Self::PlaneTopEnd => "PlaneTopEnd",
            Self::PlaneBottomEnd => "PlaneBottomEnd",
            Self::NonEmbedded => "NonEmbedded",
            Self::Undetermined => "Undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassifyOptions {
    /// Level spacing; defaults to the swept range over [`DEFAULT_LEVELS`].
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagnostics {
    pub euler_characteristic: i64,
    pub boundary_loops: usize,
    pub height_range: (f64, f64),
    pub sweep_range: (f64, f64),
    pub dt: f64,
    pub intersecting_pairs: usize,
    pub max_components: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepResult {
    pub verdict: Verdict,
    pub events: Vec<SweepEvent>,
    pub diagnostics: Diagnostics,
}

impl SweepResult {
    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

enum End {
    Closed,
    Top,
    Bottom,
}

fn end_kind(mesh: &TriMesh, topo: &Topology, lo: f64, hi: f64) -> Result<End> {
    let boundary: Vec<usize> = topo.boundary_edges().flat_map(|e| topo.edges[e]).collect();
    if boundary.is_empty() {
        return Ok(End::Closed);
    }
    let t = mesh.truncation.ok_or(GeomError::MissingTruncation)?;
    let tol = 1e-6 * (1.0 + t.abs());
    if let Some(&v) = boundary
        .iter()
        .find(|&&v| (mesh.vertices[v][2] - t).abs() > tol)
    {
        return Err(GeomError::InteriorBoundary(mesh.vertices[v][2]));
    }
    if t >= hi - tol {
        Ok(End::Top)
    } else if t <= lo + tol {
        Ok(End::Bottom)
    } else {
        Err(GeomError::InteriorBoundary(t))
    }
}

fn counts(tr: &Tracking) -> [usize; 5] {
    [
        tr.count(EventKind::Birth),
        tr.count(EventKind::Death),
        tr.count(EventKind::Merge),
        tr.count(EventKind::Split),
        tr.count(EventKind::Ambiguous),
    ]
}

/// Topological type of a triangulated surface by a foliation sweep.
///
/// Product spaces are swept by the fiber coordinate; Heisenberg space by
/// vertical planes over the lines `x = const`. Open meshes must be cut along
/// the declared truncation height, at the top or at the bottom.
pub fn classify(
    mesh: &TriMesh,
    space: &AmbientSpace,
    opts: ClassifyOptions,
) -> Result<SweepResult> {
    let axis = match space {
        AmbientSpace::Product(_) => SweepAxis::Fiber,
        AmbientSpace::Heisenberg(_) => SweepAxis::Horizontal { angle: 0.0 },
        AmbientSpace::Berger(_) => {
            return Err(GeomError::UnsupportedSpace(
                "sweep needs a product or Heisenberg chart",
            ))
        }
    };
    let topo = mesh.topology()?;
    if mesh.vertices.iter().flatten().any(|x| !x.is_finite()) {
        return Err(GeomError::InvalidParameter(
            "mesh has non-finite coordinates",
        ));
    }
    let fiber = |f: fn(f64, f64) -> f64, init| mesh.vertices.iter().map(|p| p[2]).fold(init, f);
    let (zlo, zhi) = (
        fiber(f64::min, f64::INFINITY),
        fiber(f64::max, f64::NEG_INFINITY),
    );
    let end = end_kind(mesh, &topo, zlo, zhi)?;
    let chi = mesh.euler_characteristic(&topo);
    let loops = mesh.boundary_loops(&topo);

    let heights: Vec<f64> = mesh.vertices.iter().map(|p| axis.height(p)).collect();
    let (hlo, hhi) = heights
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &h| {
            (a.min(h), b.max(h))
        });
    let dt = opts.dt.unwrap_or((hhi - hlo) / DEFAULT_LEVELS as f64);
    if !(dt > 0.0) {
        return Err(GeomError::InvalidParameter("sweep step must be positive"));
    }
    // a truncated end is swept up to one step short of the cut
    let (t0, t1) = match (&end, axis) {
        (End::Top, SweepAxis::Fiber) => (hlo - 0.5 * dt, hhi - dt),
        (End::Bottom, SweepAxis::Fiber) => (hlo + dt, hhi + 0.5 * dt),
        _ => (hlo - 0.5 * dt, hhi + 0.5 * dt),
    };
    let tracking = track_with(mesh, &topo, axis, t0, t1, dt)?;
    let mut notes = Vec::new();
    let mut events = tracking.events.clone();

    if let (AmbientSpace::Product(p), SweepAxis::Fiber) = (space, axis) {
        let mut failures = 0;
        for (i, &t) in tracking.levels.iter().enumerate() {
            let conv = slice_convexity_with(
                &slice_with(mesh, &topo, &heights, t),
                &p.base,
                DIAGNOSTIC_STENCIL,
            );
            for c in conv.components.iter().filter(|c| !(c.min > 0.0)) {
                failures += 1;
                events.push(SweepEvent {
                    t,
                    kind: EventKind::ConvexityFailure,
                    id: i * 1024 + c.component,
                });
            }
        }
        if failures > 0 {
            notes.push(alloc::format!(
                "{failures} slice components are not strictly convex"
            ));
        }
    }

    let pairs: Vec<IntersectingPair> = self_intersect(mesh);
    for (k, p) in pairs.iter().take(MAX_INTERSECTION_EVENTS).enumerate() {
        let tri = mesh.triangle_points(p.a);
        let t = (tri[0][2] + tri[1][2] + tri[2][2]) / 3.0;
        events.push(SweepEvent {
            t,
            kind: EventKind::SelfIntersection,
            id: k,
        });
    }
    events.sort_by(|a, b| {
        a.t.total_cmp(&b.t)
            .then(a.kind.cmp(&b.kind))
            .then(a.id.cmp(&b.id))
    });

    let [births, deaths, merges, splits, ambiguous] = counts(&tracking);
    let simple = merges == 0 && splits == 0 && ambiguous == 0;
    let verdict = if !pairs.is_empty() {
        Verdict::NonEmbedded
    } else {
        match (end, axis) {
            (End::Closed, _) if simple && births == 1 && deaths == 1 && chi == 2 => Verdict::Sphere,
            (End::Top, SweepAxis::Fiber)
                if simple && births == 1 && deaths == 0 && chi == 1 && loops == 1 =>
            {
                Verdict::PlaneTopEnd
            }
            (End::Bottom, SweepAxis::Fiber)
                if simple && births == 0 && deaths == 1 && chi == 1 && loops == 1 =>
            {
                Verdict::PlaneBottomEnd
            }
            (End::Top, SweepAxis::Horizontal { .. })
                if simple && births == 1 && deaths == 1 && chi == 1 && loops == 1 =>
            {
                Verdict::PlaneTopEnd
            }
            (End::Bottom, SweepAxis::Horizontal { .. })
                if simple && births == 1 && deaths == 1 && chi == 1 && loops == 1 =>
            {
                Verdict::PlaneBottomEnd
            }
            _ => Verdict::Undetermined,
        }
    };
    if ambiguous > 0 {
        notes.push(alloc::format!("{ambiguous} ambiguous component matches"));
    }
    if verdict == Verdict::Undetermined {
        notes.push(alloc::format!(
            "births {births}, deaths {deaths}, merges {merges}, splits {splits}, euler {chi}, boundary loops {loops}"
        ));
    }
    Ok(SweepResult {
        verdict,
        events,
        diagnostics: Diagnostics {
            euler_characteristic: chi,
            boundary_loops: loops,
            height_range: (zlo, zhi),
            sweep_range: (t0, t1),
            dt,
            intersecting_pairs: pairs.len(),
            max_components: tracking.component_counts.iter().copied().max().unwrap_or(0),
            notes,
        },
    })
}
