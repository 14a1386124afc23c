use alloc::string::String;
use core::fmt;

/// Errors surfaced by state construction, measurement validation and the
/// paradox pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix or vector dimensions do not line up.
    DimensionMismatch { expected: usize, got: usize },
    /// A subsystem shape is inconsistent (bad local dims or Alice partition).
    InvalidShape(String),
    /// A state specification violates a norm or weight invariant; the message
    /// names the offending field.
    InvalidState(String),
    /// An operator expected to be a valid (sub)density matrix is not.
    NotHermitian { residual: f64 },
    /// A Hermitian operator has an eigenvalue below the negativity tolerance.
    NegativeEigenvalue { value: f64 },
    /// A projector fails idempotence.
    NotIdempotent { index: usize, residual: f64 },
    /// Two projectors in one setting are not mutually orthogonal.
    NotOrthogonal { first: usize, second: usize, residual: f64 },
    /// The projectors of a setting do not sum to the identity.
    Incomplete { residual: f64 },
    /// A setting has the wrong number of outcomes for its space.
    WrongOutcomeCount { expected: usize, got: usize },
    /// A projector is not rank one.
    NotRankOne { index: usize, trace: f64 },
    /// Unknown per-site basis label.
    UnknownBasisLabel(String),
    /// Number of per-site labels does not match the number of Alice sites.
    LabelArity { expected: usize, got: usize },
    /// A builtin state parameter is outside its domain.
    DomainError(String),
    /// Unknown builtin state name.
    UnknownBuiltin(String),
    /// A protocol needs at least two settings.
    ProtocolTooSmall { settings: usize },
    /// Settings of one protocol act on different Alice dimensions.
    MixedSettingDims { first: usize, offending: usize },
    /// A computed assemblage failed its own consistency audit. `outcome` is
    /// absent for per-setting failures (normalization, no-signalling).
    AssemblageInconsistent { setting: usize, outcome: Option<usize>, residual: f64 },
    /// A pair of conditional states falls inside the ambiguity band
    /// `(1 - 10*tol, 1 - tol)`: neither clearly equal nor clearly distinct.
    ToleranceAmbiguity { fidelity: f64, tol: f64 },
    /// Input exceeds the brute-force oracle's desk-scale limits.
    ScaleLimit(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidShape(msg) => write!(f, "invalid subsystem shape: {msg}"),
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::NotHermitian { residual } => {
                write!(f, "operator is not Hermitian (residual {residual:.3e})")
            }
            Error::NegativeEigenvalue { value } => {
                write!(f, "operator has negative eigenvalue {value:.3e}")
            }
            Error::NotIdempotent { index, residual } => {
                write!(f, "projector {index} is not idempotent (residual {residual:.3e})")
            }
            Error::NotOrthogonal { first, second, residual } => write!(
                f,
                "projectors {first} and {second} are not orthogonal (residual {residual:.3e})"
            ),
            Error::Incomplete { residual } => {
                write!(f, "projectors do not sum to identity (residual {residual:.3e})")
            }
            Error::WrongOutcomeCount { expected, got } => {
                write!(f, "setting must have {expected} outcomes, got {got}")
            }
            Error::NotRankOne { index, trace } => {
                write!(f, "projector {index} has trace {trace:.6}, expected rank one")
            }
            Error::UnknownBasisLabel(label) => write!(f, "unknown basis label '{label}'"),
            Error::LabelArity { expected, got } => {
                write!(f, "expected {expected} per-site labels, got {got}")
            }
            Error::DomainError(msg) => write!(f, "parameter outside domain: {msg}"),
            Error::UnknownBuiltin(name) => write!(f, "unknown builtin state '{name}'"),
            Error::ProtocolTooSmall { settings } => {
                write!(f, "protocol needs at least 2 settings, got {settings}")
            }
            Error::MixedSettingDims { first, offending } => write!(
                f,
                "settings act on different Alice dimensions ({first} vs {offending})"
            ),
            Error::AssemblageInconsistent { setting, outcome, residual } => match outcome {
                Some(a) => write!(
                    f,
                    "assemblage inconsistent at setting {setting}, outcome {a} \
                     (residual {residual:.3e})"
                ),
                None => write!(
                    f,
                    "assemblage inconsistent across setting {setting} (residual {residual:.3e})"
                ),
            },
            Error::ToleranceAmbiguity { fidelity, tol } => write!(
                f,
                "state fidelity {fidelity:.12} falls in the ambiguity band \
                 ({:.3e}, {:.3e}); adjust the tolerance",
                1.0 - 10.0 * tol,
                1.0 - tol
            ),
            Error::ScaleLimit(msg) => write!(f, "brute-force oracle scale limit: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
