use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum GeoError {
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid coordinate data: {0}")]
    InvalidInput(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("solver did not converge: best bound {best_bound}, residual {residual}")]
    Unconverged { best_bound: f64, residual: f64 },

    #[error("point lies on the center coset of the base point (distance function is not smooth there)")]
    OnCenterCoset,

    #[error("point at infinity: the south pole is mapped to infinity by the Cayley transform")]
    PointAtInfinity,

    #[error("input does not lie on the expected surface: {0}")]
    OffSurface(String),

    #[error("curve is not horizontal: worst contact defect {defect} on segment {segment}")]
    NotHorizontal { defect: f64, segment: usize },

    #[error("curve crosses the singular axis at interior sample {index}")]
    AxisCrossing { index: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeoError>;
