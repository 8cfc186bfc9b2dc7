use thiserror::Error;

/// Errors surfaced by the geometry and quadrature layers.
#[derive(Debug, Error)]
pub enum EngelError {
    #[error("invalid structure coefficients: {0}")]
    InvalidStructure(String),

    #[error("invalid multi-index ({i},{j}); need 1 <= i < j <= 4")]
    InvalidIndex { i: usize, j: usize },

    #[error("nonpositive dilation factor")]
    NonpositiveDilation,

    #[error("zero 2-vector has no degree")]
    ZeroTwoVector,

    #[error("point ({0}, {1}) lies outside the chart domain")]
    OutsideDomain(f64, f64),

    #[error("chart is rank-deficient at u = ({0}, {1}); embedding is a precondition")]
    RankDeficient(f64, f64),

    #[error("Newton iteration for the graph chart failed to converge (residual {residual:.3e})")]
    NewtonDiverged { residual: f64 },

    #[error("quadrature did not converge: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureNonconvergent { estimate: f64, tolerance: f64 },

    #[error("curve is not closed (gap {0:.3e})")]
    OpenCurve(f64),

    #[error("radius schedule entry {0} exceeds the chart coverage")]
    ScheduleOutsideDomain(f64),

    #[error("invalid input: {0}")]
    Validation(String),
}
