//! Foliation sweeps over triangulated surfaces: level-set slices, component
//! lifecycles, self-intersection, topology verdicts, Killing-graph and
//! bi-graph checks.

mod classify;
mod convexity;
mod graph;
mod intersect;
mod mesh;
mod slice;

pub use classify::{
    classify, ClassifyOptions, Diagnostics, SweepResult, Verdict, DEFAULT_LEVELS,
    DIAGNOSTIC_STENCIL, MAX_INTERSECTION_EVENTS,
};
pub use convexity::{
    polygon_curvature, polygon_curvature_stencil, slice_convexity, slice_convexity_with,
    ComponentCurvature, SliceConvexity,
};
pub use graph::{
    alexandrov_bigraph, grid_mesh, killing_graph_check, killing_graph_check_surface, Bigraph,
    GraphCheck, GraphWitness, BIGRAPH_AREA_TOL, VERTICAL_NU,
};
pub use intersect::{self_intersect, triangles_intersect, IntersectingPair};
pub use mesh::{Topology, TriMesh, UnionFind, DEGENERATE_AREA, NO_TRIANGLE};
pub use slice::{
    slice, track_components, EventKind, SliceComponent, SliceCurve, SweepAxis, SweepEvent,
    Tracking, LEVEL_PERTURBATION,
};
