use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("values live on different space signatures")]
    SignatureMismatch,
    #[error("invalid space signature: {0}")]
    InvalidSignature(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("body of the superfunction is not an invertible constant")]
    NonUnitBody,
    #[error("dtheta power {power} exceeds the configured guard {guard}")]
    GuardExceeded { power: u32, guard: u32 },
    #[error("vector field is not parity-homogeneous")]
    NotHomogeneous,
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("ring error: {0}")]
    Ring(String),

    #[error("form is not an even 1-form: {0}")]
    NotEvenOneForm(String),
    #[error("no dtheta coefficient has an invertible constant body")]
    NotRegular,
    #[error("form does not define a super-foliation: da is not of the form b ^ a")]
    NotIntegrable,
    #[error("vector field is not transversal: i_X a != 1")]
    NotTransversal,
    #[error("1-form is not closed")]
    NotClosed,
    #[error("form is not a base 1-form: {0}")]
    NotBaseForm(String),

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("connection is not flat on generator pair ({0}, {1})")]
    NotFlat(usize, usize),
    #[error("generators are not in adapted form: {0}")]
    NotAdapted(String),
    #[error("generators are not involutive: bracket of ({0}, {1}) leaves their span")]
    NotInvolutive(usize, usize),
    #[error("gauge matrix is not invertible over the coefficient ring")]
    NonInvertibleGauge,
    #[error("invalid connection data: {0}")]
    InvalidConnection(String),

    #[error("syntax error at {line}:{column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("unknown symbol `{name}` at {line}:{column}")]
    UnknownSymbol {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("type error: {0}")]
    Type(String),
}

impl Error {
    /// Stable, machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SignatureMismatch => "SignatureMismatch",
            Error::InvalidSignature(_) => "InvalidSignature",
            Error::UnknownCoordinate(_) => "UnknownCoordinate",
            Error::NonUnitBody => "NonUnitBody",
            Error::GuardExceeded { .. } => "GuardExceeded",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::ParityMismatch(_) => "ParityMismatch",
            Error::Ring(_) => "RingError",
            Error::NotEvenOneForm(_) => "NotEvenOneForm",
            Error::NotRegular => "NotRegular",
            Error::NotIntegrable => "NotIntegrable",
            Error::NotTransversal => "NotTransversal",
            Error::NotClosed => "NotClosed",
            Error::NotBaseForm(_) => "NotBaseForm",
            Error::JacobiViolation(..) => "JacobiViolation",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::NotFlat(..) => "NotFlat",
            Error::NotAdapted(_) => "NotAdapted",
            Error::NotInvolutive(..) => "NotInvolutive",
            Error::NonInvertibleGauge => "NonInvertibleGauge",
            Error::InvalidConnection(_) => "InvalidConnection",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownSymbol { .. } => "UnknownSymbol",
            Error::Type(_) => "TypeError",
        }
    }

    /// Errors caused by malformed input text rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownSymbol { .. }
                | Error::Type(_)
                | Error::InvalidSignature(_)
                | Error::UnknownCoordinate(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
