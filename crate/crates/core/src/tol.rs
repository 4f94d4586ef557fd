//! Centralized numerical tolerances. Every comparison in the crate points
//! here; no ad-hoc magic numbers at call sites.

/// Acceptable deviation of a squared state norm (or a density trace) from 1.
pub const NORM_TOL: f64 = 1e-9;

/// Acceptable entrywise deviation of a density matrix from its adjoint.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Most negative eigenvalue tolerated before a matrix stops counting as
/// positive semidefinite. Also the cutoff for the partial-transpose test.
pub const PSD_TOL: f64 = 1e-9;

/// Below this magnitude a pivot, root gap, or eigenvalue gap is treated as
/// degenerate rather than resolved.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Tolerance for the proportionality and phase conditions of the rank-2
/// separability criterion.
pub const PROPORTIONALITY_TOL: f64 = 1e-8;

/// Largest imaginary residue tolerated when casting an analytically real
/// quantity (a trace, an invariant) to f64.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Concurrence radicands in [-RADICAND_CLAMP, 0) are rounding residue and
/// clamp to zero; anything more negative is a hard numerical error.
pub const RADICAND_CLAMP: f64 = 1e-12;

/// Maximum disagreement tolerated between the invariant route and the
/// minor-sum route of a concurrence computation.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-9;

/// The closed-form 3x3 spectrum must reproduce its input power sums this
/// closely, or the branch selection is considered wrong.
pub const CLOSED_FORM_CONSISTENCY_TOL: f64 = 1e-6;

/// Distance from C = 1 inside which the closed-form spectrum short-circuits
/// to the exactly degenerate answer (1/3, 1/3, 1/3).
pub const CLOSED_FORM_DEGENERATE_TOL: f64 = 1e-10;

/// Acceptable entrywise deviation of U U^H from the identity.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Largest invariant drift tolerated across a local-unitary orbit.
pub const DRIFT_TOL: f64 = 1e-9;

/// Schmidt-spectrum sanity window: eigenvalues may undershoot 0 and the
/// spectrum sum may deviate from 1 by at most this much.
pub const SPECTRUM_TOL: f64 = 1e-10;

/// Largest inner-product magnitude two eigenvectors may have while still
/// counting as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;
