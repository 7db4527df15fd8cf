use thiserror::Error;

/// Failures raised by the geometric constructions and fits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("zero homogeneous vector")]
    ZeroVector,
    #[error("degenerate join/meet")]
    DegenerateJoinMeet,
    #[error("point at infinity where a finite point is required")]
    IdealPoint,
    #[error("line at infinity where a finite line is required")]
    LineAtInfinity,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate conic")]
    DegenerateConic,
    #[error("conic is not a parabola")]
    NotAParabola,
    #[error("conic is not an ellipse")]
    NotAnEllipse,
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("conjugate undefined")]
    ConjugateUndefined,
    #[error("undefined center for symmetric triangle")]
    UndefinedCenter,
    #[error("point is off the circumcircle (residual {0:.3e})")]
    OffCircumcircle(f64),
    #[error("focus coincides with a vertex")]
    FocusAtVertex,
    #[error("not perspective (residual {0:.3e})")]
    NotPerspective(f64),
    #[error("Poncelet condition violated (closure error {0:.3e})")]
    PonceletViolated(f64),
    #[error("point is not on the outer conic (residual {0:.3e})")]
    OffOuterConic(f64),
    #[error("outer conic is not a circle")]
    NotCircleInscribed,
    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("all consecutive lines are near-parallel")]
    AllParallel,
}

pub type Result<T> = std::result::Result<T, GeomError>;
