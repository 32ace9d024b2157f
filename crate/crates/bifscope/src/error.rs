use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerically singular matrix in {0}")]
    Singular(String),

    /// `I - Phi0` is singular, so the affine period map has no unique fixed
    /// point. Usually means an exact integrator pole; raise delta.
    #[error("degenerate periodic orbit: I - Phi0 is singular")]
    DegenerateOrbit,

    /// The orbit is tangent to the ramp at the switching instant, so the
    /// modulator gain 1/(C.xdot - m_a) blows up.
    #[error("grazing switching: |C xdot(d-) - m_a| = {0:.3e} is below threshold")]
    GrazingSwitching(f64),

    #[error("z = {0} coincides with an open-loop pole of the loop gain")]
    PoleOfLoopGain(Complex64),

    /// The reference point lies on the curve itself: the critical condition
    /// F(theta) = m_a holds and the winding number is undefined.
    #[error("point lies on the curve within tolerance (marginal critical condition)")]
    PointOnCurve,

    #[error("curve sampling too coarse for a reliable winding count")]
    NeedsRefinement,

    /// An eigenvalue of Phi0 sits (numerically) on the unit circle, which the
    /// sweep path cannot pass through. Raising the integrator pole delta moves
    /// it off the circle.
    #[error("open-loop pole within {dist:.3e} of the unit circle; raise the integrator pole delta")]
    IndentationRequired { dist: f64 },

    #[error("trace too short: need at least {need} cycles, have {have}")]
    InsufficientData { need: usize, have: usize },

    #[error("improper transfer function: numerator degree {num} exceeds denominator degree {den}")]
    ImproperTransferFunction { num: usize, den: usize },

    #[error("unknown example id {0} (valid ids are 1..=9)")]
    UnknownExample(u32),

    #[error("unknown parameter `{0}` for this model")]
    UnknownParameter(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
