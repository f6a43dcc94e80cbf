use alloc::string::String;

/// Errors raised by the geometry kernel.
///
/// Variants split into two groups: parameter/domain problems that a caller
/// can fix by changing its input ([`GeometryError::is_domain_error`]), and
/// numeric failures during evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("t = {t} lies outside the warping interval ({lo}, {hi})")]
    OutsideInterval { t: f64, lo: f64, hi: f64 },
    #[error("base point lies on or beyond the chart boundary")]
    ChartBoundary,
    #[error("invalid warping function: {0}")]
    InvalidWarping(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parameter domain violated: {0}")]
    ParameterDomain(String),
    #[error("zero vector has no causal character")]
    ZeroVector,
    #[error("point ({u}, {v}) is closer to the patch boundary than the finite-difference stencil")]
    BoundaryProximity { u: f64, v: f64 },
    #[error("induced metric is not positive definite at ({u}, {v}): g11 = {g11}, det = {det}")]
    CausalDegeneracy { u: f64, v: f64, g11: f64, det: f64 },
    #[error("adapted frame degenerates: -1 + f^2 E = {value} <= {threshold}")]
    DegenerateFrame { value: f64, threshold: f64 },
    #[error("tangential part of d/dt vanishes (slice surface)")]
    SliceSurface,
    #[error("patch is not in canonical form: {0}")]
    NotCanonical(&'static str),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

impl GeometryError {
    /// True for errors caused by the caller's parameters rather than by
    /// numerics.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            GeometryError::OutsideInterval { .. }
                | GeometryError::ChartBoundary
                | GeometryError::InvalidWarping(_)
                | GeometryError::InvalidInput(_)
                | GeometryError::ParameterDomain(_)
                | GeometryError::BoundaryProximity { .. }
        )
    }
}
