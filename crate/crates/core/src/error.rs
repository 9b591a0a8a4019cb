use thiserror::Error;

use crate::Point;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. `name()` gives the stable
/// identifier surfaced by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown symbol `{name}` at byte {offset}")]
    UnknownSymbol { name: String, offset: usize },

    #[error("domain error at {point:?}: {message}")]
    Domain { message: String, point: Point },

    #[error("metric is not positive definite{}", fmt_location(point))]
    NotPositiveDefinite { point: Option<Point> },

    #[error("form degree {degree} exceeds the dimension 3")]
    Degree { degree: usize },

    #[error("seed frame is degenerate (|det| = {det:e})")]
    DegenerateSeed { det: f64 },

    #[error("frame is not orthonormal at {point:?} (defect {defect:e})")]
    FrameNotOrthonormal { point: Point, defect: f64 },

    #[error("gauge map is not special orthogonal at {point:?} (defect {defect:e})")]
    NotSpecialOrthogonal { point: Point, defect: f64 },

    #[error("structure constants violate the Jacobi identity (defect {defect:e})")]
    JacobiViolation { defect: f64 },

    #[error("structure constants are not antisymmetric (defect {defect:e})")]
    NotAntisymmetric { defect: f64 },

    #[error("non-finite integrand sample at node {node:?}")]
    NonFiniteSample { node: Point },

    #[error("Cotton form does not vanish: max normalized norm {max_norm:e} >= tol {tol:e}")]
    CottonNotZero { max_norm: f64, tol: f64 },

    #[error("RK4 step too large: local error estimate {estimate:e} exceeds {limit:e}")]
    StepTooLarge { estimate: f64, limit: f64 },

    #[error("solution blew up at {point:?} (|X| = {norm:e})")]
    BlowUp { point: Point, norm: f64 },

    #[error("1-form is not closed: defect {defect:e} at {location:?}")]
    NotClosed { defect: f64, location: Point },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownSymbol { .. } => "UnknownSymbol",
            Error::Domain { .. } => "DomainError",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::Degree { .. } => "DegreeError",
            Error::DegenerateSeed { .. } => "DegenerateSeed",
            Error::FrameNotOrthonormal { .. } => "FrameNotOrthonormal",
            Error::NotSpecialOrthogonal { .. } => "NotSpecialOrthogonal",
            Error::JacobiViolation { .. } => "JacobiViolation",
            Error::NotAntisymmetric { .. } => "NotAntisymmetric",
            Error::NonFiniteSample { .. } => "NonFiniteSample",
            Error::CottonNotZero { .. } => "CottonNotZero",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::BlowUp { .. } => "BlowUp",
            Error::NotClosed { .. } => "NotClosed",
            Error::Io(_) => "IoError",
            Error::Schema(_) => "SchemaError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    pub(crate) fn domain(message: impl Into<String>, point: &Point) -> Self {
        Error::Domain {
            message: message.into(),
            point: *point,
        }
    }
}

fn fmt_location(point: &Option<Point>) -> String {
    match point {
        Some(p) => format!(" at {p:?}"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
