use thiserror::Error;

/// Errors raised by the geometric constructions and the sweeps built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inversion center: point coincides with the center of the inversion circle")]
    InversionCenter,

    #[error("degenerate dual: sideline {index} passes through the polar center")]
    DegenerateDual { index: usize },

    #[error("collinear points: no finite circle passes through them")]
    CollinearPoints,

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("concentric circles: the pencil has no axis")]
    ConcentricCircles,

    #[error("elliptic pencil: circles intersect, limiting points are not real")]
    EllipticPencil,

    #[error("parameter out of range: {name} = {value} violates {constraint}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("not harmonic / wrong omega: concurrence residual {residual:e} exceeds {tolerance:e}")]
    NotHarmonic { residual: f64, tolerance: f64 },

    #[error("Q on circumcircle: inverted polygon is collinear")]
    OnCircumcircle,

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, value: f64, constraint: &'static str) -> Error {
    Error::ParameterOutOfRange {
        name,
        value,
        constraint,
    }
}
