use thiserror::Error;

/// Everything that can go wrong across the crate. Constructors validate
/// eagerly, so downstream math can assume well-formed inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Squared amplitudes do not sum to 1 within `tol::NORM_TOL`.
    #[error("state is not normalized: squared amplitudes sum to {norm}")]
    NotNormalized { norm: f64 },

    /// An amplitude is NaN or infinite.
    #[error("non-finite amplitude at flat index {index}")]
    NonFinite { index: usize },

    /// Amplitude count does not match the declared shape.
    #[error("expected {expected} amplitudes, got {got}")]
    BadShape { expected: usize, got: usize },

    /// A bipartition is empty, improper, out of range, or not in canonical
    /// form (canonical = sorted, deduplicated, contains party 1).
    #[error("bad bipartition: {reason}")]
    BadPartition { reason: String },

    /// Parameters are individually valid but mutually inconsistent.
    #[error("incompatible parameters: {reason}")]
    IncompatibleParams { reason: String },

    /// Requested invariant order alpha exceeds dim - 1.
    #[error("invariant order {alpha} out of range for dimension {dim}")]
    AlphaOutOfRange { alpha: usize, dim: usize },

    /// Operation expects a fixed number of parties.
    #[error("expected {expected} parties, got {got}")]
    WrongPartyCount { expected: usize, got: usize },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// State and operator shapes are incompatible.
    #[error("shape mismatch: {reason}")]
    ShapeMismatch { reason: String },

    /// A matrix offered as a local-unitary factor is not unitary.
    #[error("matrix is not unitary: max |UU^H - I| entry = {residue}")]
    NotUnitary { residue: f64 },

    /// Rank-2 mixture eigenvectors must be orthogonal.
    #[error("eigenvectors are not orthogonal: |<E1|E2>| = {overlap}")]
    NotOrthogonal { overlap: f64 },

    /// A quantity that is real or bounded by construction came out otherwise.
    #[error("internal numerical error: {context}")]
    InternalNumericalError { context: String },

    /// Iterative eigenvalue or singular-value decomposition failed to converge.
    #[error("eigendecomposition failed to converge ({context})")]
    EigenFailure { context: &'static str },

    /// Closed-form 3x3 spectrum disagrees with its defining power sums.
    #[error("closed-form spectrum inconsistent with inputs (max error {max_err})")]
    ClosedFormMismatch { max_err: f64 },

    /// All 2x2 minors of the second eigenvector vanish; the separability
    /// criterion has no pivot. Callers may fall back to the PPT test.
    #[error("separability criterion degenerate: all alpha minors vanish")]
    DegenerateAlpha,

    /// The criterion quadratic has a double root; the root condition is
    /// undefined. Callers may fall back to the PPT test.
    #[error("separability criterion degenerate: quadratic has a double root")]
    DegenerateRoots,
}

pub type Result<T> = std::result::Result<T, Error>;
