//! Local-unitary invariants, generalized concurrence, Schmidt spectra, and
//! separability checks for pure and rank-2 mixed multipartite states.

#![forbid(unsafe_code)]

pub mod concurrence;
pub mod error;
pub mod invariants;
pub mod jsonio;
pub mod lu;
pub mod separability;
pub mod spectrum;
pub mod state;
pub mod tol;

/// Complex double, the amplitude scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

pub use concurrence::{
    concurrence_bipartite, concurrence_multipartite, concurrence_tripartite, concurrence_value,
    ConcurrenceReport,
};
pub use error::{Error, Result};
pub use invariants::{
    bipartition_invariant, bipartition_invariants, invariant_i, invariant_vector,
    tripartite_invariants, InvariantVector, TripartiteInvariants,
};
pub use jsonio::{to_canonical_json, AmplitudeJson, StateJson};
pub use lu::{
    apply_local, haar_unitary, invariance_suite, random_rank_two, random_state, InvarianceReport,
    LocalUnitaryTuple, QuantityDrift, Seed,
};
pub use separability::{
    minor_tensors, ppt_check, resolve_separability, separability_check, DegeneracyKind,
    MinorTensors, PptReport, RankTwoMixedState, Resolution, SeparabilityVerdict, Violation,
};
pub use spectrum::{
    char_poly_coeffs, eigenvalues_n3_closed_form, entanglement_of_formation, eof_of_state,
    schmidt_spectrum, CharPolyCoeffs, ClosedFormN3, SchmidtSpectrum,
};
pub use state::{
    enumerate_bipartitions, make_named, reduced_density, reduced_density_subset, Bipartition,
    NamedKind, PureBipartiteState, PureMultipartiteState, ReducedDensity,
};
