use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point is off the unit sphere: |p|^2 - 1 = {0:e}")]
    OffSphere(f64),
    #[error("point lies outside the chart domain: {0}")]
    OutsideChart(&'static str),
    #[error("vector is not tangent to the constraint surface (residual {0:e})")]
    NotTangent(f64),
    #[error("metric is not positive definite at the sample point")]
    MetricNotPositive,
    #[error("metric is not symmetric (residual {0:e})")]
    MetricNotSymmetric(f64),
    #[error("degenerate plane: Gram determinant {0:e}")]
    DegeneratePlane(f64),
    #[error("degenerate immersion: |psi_u ^ psi_v| = {0:e}")]
    DegenerateImmersion(f64),
    #[error("geodesic speed drifted by {0:e}; reduce the step")]
    StepTooLarge(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("non-positive curvature {value} at sample {index}")]
    NonPositiveCurvature { index: usize, value: f64 },
    #[error("criterion is not defined for this ambient space")]
    IncompatibleCriterion,
    #[error("curvature precondition violated: discrete curvature {found} < {required} at vertex {vertex}")]
    CurvaturePrecondition {
        vertex: usize,
        found: f64,
        required: f64,
    },
    #[error("singular linear system")]
    Singular,
    #[error("triangle {0} references a missing vertex")]
    IndexOutOfRange(usize),
    #[error("edge ({0}, {1}) borders more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("edge ({0}, {1}) is traversed in the same direction by both of its triangles")]
    NonOrientable(usize, usize),
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
    #[error("mesh has boundary but no truncation height")]
    MissingTruncation,
    #[error("boundary vertex at height {0} is not on the truncation level")]
    InteriorBoundary(f64),
    #[error("operation is not supported in this ambient space: {0}")]
    UnsupportedSpace(&'static str),
}

pub type Result<T, E = GeomError> = core::result::Result<T, E>;
