use alloc::string::String;

/// Errors produced by the algebra, kinematics and singularity routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("algebra dimension {0} is outside 1..=6")]
    InvalidDimension(usize),
    #[error("mismatched algebra dimensions: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade {grade} is out of range for an algebra of dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },
    #[error("expected a unit bivector of G_3")]
    NotUnitBivector,
    #[error("not a rotor: {0}")]
    NotARotor(&'static str),
    #[error("frame triad is not orthonormal and right-handed")]
    NotOrthonormal,
    #[error("could not recover a rotor between the two frames")]
    DegenerateFrames,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("coefficient slice has length {got}, expected {expected}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("configuration has {got} values, expected {expected}")]
    ConfigurationLength { expected: usize, got: usize },
    #[error("joint index {index} is out of range for a chain of {joints} joints")]
    JointIndex { index: usize, joints: usize },
    #[error("invalid robot model: {0}")]
    InvalidModel(String),
    #[error("expected {expected} twists, got {got}")]
    TwistCount { expected: usize, got: usize },
    #[error("operation requires {0}")]
    UnsupportedModel(&'static str),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("sweep grid has {points} points, limit is {limit}")]
    GridTooLarge { points: u128, limit: u128 },
    #[error("invalid singularity spec `{name}`: {reason}")]
    InvalidSingularitySpec { name: String, reason: String },
    #[error("invalid handling parameters: {0}")]
    InvalidParams(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
