use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric: asymmetry {asymmetry:e} exceeds tolerance {tol:e}")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    #[error("matrix is not skew-symmetric: defect {defect:e} exceeds tolerance {tol:e}")]
    NotSkew { defect: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("dimension {0} is outside the supported range")]
    DimUnsupported(usize),

    #[error("vectors span a degenerate plane (wedge norm {0:e})")]
    DegeneratePlane(f64),

    #[error("eigenvalue group {lambda} has odd multiplicity {multiplicity}; tolerance too tight")]
    OddMultiplicity { lambda: f64, multiplicity: usize },

    #[error("operator is not an orthogonal involution (defect {0:e})")]
    BadInvolution(f64),

    #[error("components violate curvature symmetries: {0}")]
    InvalidTensor(String),

    #[error("kernel is not one-dimensional (smallest singular values {smallest:e}, {second:e})")]
    KernelNotOneDim { smallest: f64, second: f64 },

    #[error("vector does not span the kernel at the expected scale (defect {0:e})")]
    KernelMismatch(f64),

    #[error("basis matrices are linearly dependent")]
    DependentBasis,

    #[error("basis matrices share a nontrivial common kernel")]
    CommonKernel,

    #[error("zero element has no valuation")]
    ZeroElement,

    #[error("degree {0} in t exceeds the supported maximum of 3")]
    DegreeTooHigh(usize),

    #[error("polynomial has {got} variables, expected {expected}")]
    VariableMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("point {0:?} is outside the chart domain")]
    OutOfDomain([f64; 3]),

    #[error("warping function is not positive at t = {0}")]
    DegenerateWarp(f64),

    #[error("Ricci tensor does not have rank one (rank {0})")]
    RankNotOne(usize),

    #[error("frame is not adapted to the Ricci tensor: {0}")]
    FrameNotAdapted(String),

    #[error("chart is not in the geodesic-e1 family: {0}")]
    NotGeodesicFrame(String),

    #[error("principal Ricci curvature changes sign or vanishes on the samples")]
    SignChange,

    #[error("unknown metric '{0}'")]
    UnknownMetric(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
