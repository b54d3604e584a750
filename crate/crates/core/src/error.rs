use thiserror::Error;

/// Errors raised by the rod-function, potential, metric, and polytope layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rod function needs at least one kink")]
    NoKinks,
    #[error("non-finite value in {field}")]
    NonFinite { field: &'static str },
    #[error("kink positions must be strictly increasing (kink {index}: {prev} then {next})")]
    NonIncreasingKinks { index: usize, prev: f64, next: f64 },
    #[error("kink weight {index} must be positive, got {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("kink weights must sum to 1, got {sum}")]
    WeightsNotNormalized { sum: f64 },
    #[error("base constant A must be positive, got {base}")]
    NonPositiveA { base: f64 },
    #[error("slopes must increase strictly from -1 to 1: {reason}")]
    SlopeRangeViolation { reason: String },
    #[error("inconsistent lengths: {reason}")]
    InconsistentLengths { reason: String },
    #[error("rescaling factor must be nonzero")]
    ZeroScale,

    #[error("rho must be positive, got {rho}")]
    NonPositiveRho { rho: f64 },
    #[error("z = {z} is a kink of the rod function")]
    KinkPoint { z: f64 },
    #[error("segment containing z = {z} has zero slope; V diverges like rho^-2 there")]
    ZeroSlopeSegment { z: f64 },
    #[error("point (rho={rho}, z={z}) is too close to the axis; use the axis limits")]
    NearAxis { rho: f64, z: f64 },
    #[error("V = {v} is not positive at (rho={rho}, z={z})")]
    NonPositiveV { rho: f64, z: f64, v: f64 },

    #[error("metric is singular at (rho={rho}, z={z})")]
    SingularMetric { rho: f64, z: f64 },
    #[error("finite-difference step {step} too large for rho = {rho} (need rho > 10 h)")]
    StepTooLarge { rho: f64, step: f64 },

    #[error("cone angles: {count} given, rod has {expected} edges")]
    AngleCount { count: usize, expected: usize },
    #[error("cone angle {index} must be positive, got {angle}")]
    NonPositiveAngle { index: usize, angle: f64 },
    #[error("vertex {index} is inconsistent between adjacent edges (residual {residual:e})")]
    InconsistentVertex { index: usize, residual: f64 },
    #[error("lattice basis is degenerate (det = {det:e})")]
    DegenerateBasis { det: f64 },
    #[error("parameter constraint violated: {reason}")]
    ParameterConstraintViolated { reason: String },
    #[error("unknown example family '{name}'")]
    UnknownExample { name: String },

    #[error("vertex index {index} out of range 1..={rank}")]
    VertexOutOfRange { index: usize, rank: usize },
    #[error("blowup needs nonzero flanking slopes at vertex {index}")]
    ZeroFlankingSlope { index: usize },
    #[error("inserted slope would be zero; this outcome is the a = 0 Kerr-Taub-bolt family")]
    ZeroNewSlope,
    #[error("blowup breakpoints out of order: {reason}")]
    OrderingViolation { reason: String },
    #[error("blown-up rod fails its lattice relations (residual {residual:e})")]
    BlowupRelationFailed { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
