//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong when building states or running a
/// measurement pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A state vector failed a structural requirement (length, norm, ...).
    InvalidState(String),
    /// A candidate projector matrix failed validation.
    InvalidProjector {
        hermiticity_residual: f64,
        idempotency_residual: f64,
        eigenvalue_residual: f64,
    },
    /// Two objects that must share a dimension or grid do not.
    ShapeMismatch { expected: usize, got: usize },
    /// Pre- and postselected states are (numerically) orthogonal, so the
    /// weak value and the PPS pointer state are undefined.
    OrthogonalPostselection { overlap_abs: f64 },
    /// An internally recomputed quantity violated its algebraic bound by
    /// more than rounding can explain.
    NumericalDegeneracy(String),
    /// The grid cannot hold the requested wavepacket.
    GridTooSmall(String),
    /// A translation pushed significant amplitude across the periodic
    /// boundary; the result would wrap around instead of shifting.
    GridOverflow { edge_ratio: f64 },
    /// The projected pointer norm vanished: the postselection outcome has
    /// zero probability on this state.
    PostselectionImpossible { norm_sq: f64 },
    /// A matrix argument is unusable (non-square rows, non-finite entries).
    InvalidMatrix(String),
    /// Two pointer states are numerically orthogonal, so no relative phase
    /// can be extracted.
    DegenerateOverlap { overlap_abs: f64 },
    /// A grid description violated its invariants.
    InvalidGrid(String),
    /// A configuration value is out of range.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::InvalidProjector {
                hermiticity_residual,
                idempotency_residual,
                eigenvalue_residual,
            } => write!(
                f,
                "matrix is not a projector (hermiticity residual {hermiticity_residual:.3e}, \
                 idempotency residual {idempotency_residual:.3e}, eigenvalue residual \
                 {eigenvalue_residual:.3e})"
            ),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {expected}, got {got}")
            }
            Error::OrthogonalPostselection { overlap_abs } => write!(
                f,
                "pre- and postselected states are orthogonal \
                 (|<psi_f|psi_i>| = {overlap_abs:.3e})"
            ),
            Error::NumericalDegeneracy(msg) => write!(f, "numerical degeneracy: {msg}"),
            Error::GridTooSmall(msg) => write!(f, "grid too small: {msg}"),
            Error::GridOverflow { edge_ratio } => write!(
                f,
                "translation wraps around the grid (edge amplitude ratio {edge_ratio:.3e})"
            ),
            Error::PostselectionImpossible { norm_sq } => write!(
                f,
                "postselection has vanishing probability (projected norm^2 = {norm_sq:.3e})"
            ),
            Error::InvalidMatrix(msg) => write!(f, "invalid matrix: {msg}"),
            Error::DegenerateOverlap { overlap_abs } => write!(
                f,
                "pointer states are orthogonal (|<a|b>| = {overlap_abs:.3e}); \
                 no relative phase exists"
            ),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
