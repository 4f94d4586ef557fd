//! Pure-state containers and reductions.
//!
//! A bipartite pure state is kept as its coefficient matrix `A`, with
//! `A[(i, j)] = a_ij` the amplitude of `|i>|j>`. A multipartite state is a
//! flat amplitude vector in row-major order with party 1 slowest, so for
//! M = 3 the flat index of (i1, i2, i3) is `(i1 * N + i2) * N + i3`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tol;
use crate::C64;

/// Hard cap on the total amplitude count, to keep accidental huge inputs
/// from exhausting memory. Everything here is meant for desk-scale states.
pub const MAX_TOTAL_DIM: usize = 1 << 22;

fn check_amplitudes(amps: &[C64]) -> Result<()> {
    for (index, a) in amps.iter().enumerate() {
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::NonFinite { index });
        }
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > tol::NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

pub(crate) fn total_dim(dim: usize, parties: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..parties {
        total = total
            .checked_mul(dim)
            .filter(|&t| t <= MAX_TOTAL_DIM)
            .ok_or_else(|| Error::IncompatibleParams {
                reason: format!("dim {dim} with {parties} parties exceeds the supported size"),
            })?;
    }
    Ok(total)
}

/// Pure state of two parties with equal local dimension, stored as the
/// N x N coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBipartiteState {
    dim: usize,
    a: DMatrix<C64>,
}

impl PureBipartiteState {
    /// Builds a state from its coefficient matrix. The matrix must be
    /// square with side >= 2, finite, and normalized.
    pub fn from_matrix(a: DMatrix<C64>) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() < 2 {
            return Err(Error::BadShape {
                expected: a.nrows() * a.nrows().max(2),
                got: a.nrows() * a.ncols(),
            });
        }
        let dim = a.nrows();
        // as_slice is column-major; order does not matter for these checks.
        check_amplitudes(a.as_slice())?;
        Ok(Self { dim, a })
    }

    /// Builds a state from row-major amplitudes, `amps[i * dim + j] = a_ij`.
    pub fn from_amplitudes(dim: usize, amps: &[C64]) -> Result<Self> {
        let expected = dim
            .checked_mul(dim)
            .filter(|&t| t <= MAX_TOTAL_DIM)
            .ok_or_else(|| Error::IncompatibleParams {
                reason: format!("dim {dim} too large"),
            })?;
        if dim < 2 || amps.len() != expected {
            return Err(Error::BadShape {
                expected,
                got: amps.len(),
            });
        }
        let a = DMatrix::from_fn(dim, dim, |i, j| amps[i * dim + j]);
        Self::from_matrix(a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.a[(i, j)]
    }

    /// Reinterprets the state as a two-party multipartite state. The
    /// amplitudes carry over bit for bit.
    pub fn to_multipartite(&self) -> PureMultipartiteState {
        let n = self.dim;
        let mut amps = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                amps.push(self.a[(i, j)]);
            }
        }
        PureMultipartiteState {
            parties: 2,
            dim: n,
            amps,
        }
    }
}

/// Pure state of M >= 2 parties, each of local dimension N >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PureMultipartiteState {
    parties: usize,
    dim: usize,
    amps: Vec<C64>,
}

impl PureMultipartiteState {
    pub fn new(parties: usize, dim: usize, amps: Vec<C64>) -> Result<Self> {
        if parties < 2 || dim < 2 {
            return Err(Error::IncompatibleParams {
                reason: format!("need parties >= 2 and dim >= 2, got parties {parties}, dim {dim}"),
            });
        }
        let expected = total_dim(dim, parties)?;
        if amps.len() != expected {
            return Err(Error::BadShape {
                expected,
                got: amps.len(),
            });
        }
        check_amplitudes(&amps)?;
        Ok(Self { parties, dim, amps })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitude at a full multi-index, one 0-based entry per party.
    pub fn amplitude(&self, index: &[usize]) -> C64 {
        debug_assert_eq!(index.len(), self.parties);
        let mut flat = 0;
        for &i in index {
            debug_assert!(i < self.dim);
            flat = flat * self.dim + i;
        }
        self.amps[flat]
    }

    /// Interprets a two-party state as a bipartite coefficient matrix.
    /// Lossless inverse of [`PureBipartiteState::to_multipartite`].
    pub fn to_bipartite(&self) -> Result<PureBipartiteState> {
        if self.parties != 2 {
            return Err(Error::WrongPartyCount {
                expected: 2,
                got: self.parties,
            });
        }
        let n = self.dim;
        let a = DMatrix::from_fn(n, n, |i, j| self.amps[i * n + j]);
        Ok(PureBipartiteState { dim: n, a })
    }

    /// Reorders parties: new party slot k holds what old party `perm[k]`
    /// held (0-based). `perm` must be a permutation of 0..M.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        let m = self.parties;
        let n = self.dim;
        let mut seen = vec![false; m];
        if perm.len() != m || !perm.iter().all(|&p| p < m && !std::mem::replace(&mut seen[p], true)) {
            return Err(Error::IncompatibleParams {
                reason: format!("{perm:?} is not a permutation of 0..{m}"),
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        let mut digits = vec![0usize; m];
        for (flat, slot) in amps.iter_mut().enumerate() {
            decompose(flat, n, &mut digits);
            let mut old_flat = 0;
            // digit k of the new index comes from old party perm[k], so the
            // old index has digits[k] at position perm[k].
            let mut old_digits = vec![0usize; m];
            for k in 0..m {
                old_digits[perm[k]] = digits[k];
            }
            for &d in &old_digits {
                old_flat = old_flat * n + d;
            }
            *slot = self.amps[old_flat];
        }
        Ok(Self {
            parties: m,
            dim: n,
            amps,
        })
    }
}

/// Writes the base-N digits of `flat` into `digits`, party 1 first.
pub(crate) fn decompose(flat: usize, dim: usize, digits: &mut [usize]) {
    let mut rest = flat;
    for d in digits.iter_mut().rev() {
        *d = rest % dim;
        rest /= dim;
    }
}

/// Reshapes a multipartite state into the matrix of one bipartition:
/// rows are the joint index of the 0-based parties in `left` (sorted),
/// columns the joint index of the rest, both in party order.
pub(crate) fn reshape(state: &PureMultipartiteState, left: &[usize]) -> DMatrix<C64> {
    let m = state.parties;
    let n = state.dim;
    let right: Vec<usize> = (0..m).filter(|k| !left.contains(k)).collect();
    let rows = n.pow(left.len() as u32);
    let cols = n.pow(right.len() as u32);
    let mut b = DMatrix::from_element(rows, cols, C64::new(0.0, 0.0));
    let mut digits = vec![0usize; m];
    for (flat, &amp) in state.amps.iter().enumerate() {
        decompose(flat, n, &mut digits);
        let row = left.iter().fold(0, |acc, &k| acc * n + digits[k]);
        let col = right.iter().fold(0, |acc, &k| acc * n + digits[k]);
        b[(row, col)] = amp;
    }
    b
}

/// One side of a split of the parties {1, .., M} into two nonempty halves.
/// Canonical form keeps the half containing party 1, so each unordered
/// split appears exactly once. Party indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    parties: usize,
    left: Vec<usize>,
}

impl Bipartition {
    pub fn new(parties: usize, left: Vec<usize>) -> Result<Self> {
        let bad = |reason: String| Err(Error::BadPartition { reason });
        if parties < 2 {
            return bad(format!("need at least 2 parties, got {parties}"));
        }
        if left.is_empty() {
            return bad("left half is empty".to_string());
        }
        if left.len() >= parties {
            return bad("left half must be a proper subset of the parties".to_string());
        }
        if !left.windows(2).all(|w| w[0] < w[1]) {
            return bad(format!("{left:?} is not sorted and deduplicated"));
        }
        if left[0] != 1 {
            return bad(format!("canonical form requires party 1, got {left:?}"));
        }
        if *left.last().unwrap() > parties {
            return bad(format!("party index out of range in {left:?} for {parties} parties"));
        }
        Ok(Self { parties, left })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    /// 1-based party indices of the canonical half.
    pub fn left(&self) -> &[usize] {
        &self.left
    }

    /// 1-based party indices of the other half.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.parties).filter(|p| !self.left.contains(p)).collect()
    }

    /// 0-based positions of the canonical half, for indexing into tensors.
    pub(crate) fn left_zero_based(&self) -> Vec<usize> {
        self.left.iter().map(|&p| p - 1).collect()
    }

    pub fn label(&self) -> String {
        let inner: Vec<String> = self.left.iter().map(|p| p.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// All canonical bipartitions of M parties, 2^(M-1) - 1 of them, in a fixed
/// order: subsets of {2..M} by ascending bitmask, each joined with party 1.
pub fn enumerate_bipartitions(parties: usize) -> Result<Vec<Bipartition>> {
    if parties < 2 {
        return Err(Error::IncompatibleParams {
            reason: format!("need at least 2 parties, got {parties}"),
        });
    }
    if parties > 20 {
        return Err(Error::IncompatibleParams {
            reason: format!("{parties} parties is beyond the supported size"),
        });
    }
    let mut out = Vec::with_capacity((1usize << (parties - 1)) - 1);
    for mask in 0..(1u32 << (parties - 1)) - 1 {
        let mut left = vec![1usize];
        for bit in 0..parties - 1 {
            if mask & (1 << bit) != 0 {
                left.push(bit + 2);
            }
        }
        out.push(Bipartition::new(parties, left)?);
    }
    Ok(out)
}

/// Density matrix of a subsystem, with its defining checks applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    dim: usize,
    mat: DMatrix<C64>,
}

impl ReducedDensity {
    /// Validates hermiticity, unit trace, and positive semidefiniteness.
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::BadShape {
                expected: mat.nrows() * mat.nrows(),
                got: mat.nrows() * mat.ncols(),
            });
        }
        let n = mat.nrows();
        for i in 0..n {
            for j in 0..n {
                let d = mat[(i, j)] - mat[(j, i)].conj();
                if d.norm() > tol::HERMITICITY_TOL {
                    return Err(Error::InternalNumericalError {
                        context: format!("density not hermitian at ({i},{j}): residue {}", d.norm()),
                    });
                }
            }
        }
        let tr: C64 = (0..n).map(|i| mat[(i, i)]).sum();
        if (tr.re - 1.0).abs() > tol::NORM_TOL || tr.im.abs() > tol::IMAG_RESIDUE_TOL {
            return Err(Error::NotNormalized { norm: tr.re });
        }
        let eig = nalgebra::SymmetricEigen::try_new(mat.clone(), f64::EPSILON, 10_000)
            .ok_or(Error::EigenFailure {
                context: "density eigendecomposition",
            })?;
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -tol::PSD_TOL {
            return Err(Error::InternalNumericalError {
                context: format!("density has negative eigenvalue {min}"),
            });
        }
        Ok(Self { dim: n, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Tr rho^2, real by hermiticity.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// rho_1 = A A^H, the reduction of a bipartite pure state to its first party.
pub fn reduced_density(state: &PureBipartiteState) -> Result<ReducedDensity> {
    let rho = state.a.clone() * state.a.adjoint();
    ReducedDensity::from_matrix(rho)
}

/// Reduction of a multipartite pure state onto the parties of `part`,
/// tracing out the complement.
pub fn reduced_density_subset(
    state: &PureMultipartiteState,
    part: &Bipartition,
) -> Result<ReducedDensity> {
    if part.parties() != state.parties {
        return Err(Error::BadPartition {
            reason: format!(
                "bipartition is over {} parties but the state has {}",
                part.parties(),
                state.parties
            ),
        });
    }
    let b = reshape(state, &part.left_zero_based());
    let rho = &b * b.adjoint();
    ReducedDensity::from_matrix(rho)
}

/// Deterministic reference states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedKind {
    /// Every party in its first basis state: one amplitude equal to 1.
    Product,
    /// Two parties, a_ii = 1/sqrt(N).
    MaxEntangled,
    /// Two qubits, a_11 = a_22 = 1/sqrt(2).
    Bell,
    /// M >= 3 parties, a_(i..i) = 1/sqrt(N).
    Ghz,
    /// Three qubits: a Bell pair on parties 1 and 2 tensored with
    /// (e1 + e2)/sqrt(2) on party 3; the four amplitudes a_111, a_112,
    /// a_221, a_222 all equal 1/2.
    BellPlus,
}

/// Builds one of the named reference states. Errors with
/// `IncompatibleParams` when the kind pins N or M to other values.
pub fn make_named(kind: NamedKind, dim: usize, parties: usize) -> Result<PureMultipartiteState> {
    let require = |ok: bool, reason: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatibleParams {
                reason: reason.to_string(),
            })
        }
    };
    match kind {
        NamedKind::Product => {
            let total = total_dim(dim, parties)?;
            let mut amps = vec![C64::new(0.0, 0.0); total];
            amps[0] = C64::new(1.0, 0.0);
            PureMultipartiteState::new(parties, dim, amps)
        }
        NamedKind::MaxEntangled => {
            require(parties == 2, "max_entangled is a two-party state")?;
            let w = 1.0 / (dim as f64).sqrt();
            let mut amps = vec![C64::new(0.0, 0.0); dim * dim];
            for i in 0..dim {
                amps[i * dim + i] = C64::new(w, 0.0);
            }
            PureMultipartiteState::new(2, dim, amps)
        }
        NamedKind::Bell => {
            require(parties == 2 && dim == 2, "bell is the two-qubit state")?;
            make_named(NamedKind::MaxEntangled, 2, 2)
        }
        NamedKind::Ghz => {
            require(parties >= 3, "ghz needs at least three parties")?;
            let total = total_dim(dim, parties)?;
            let w = 1.0 / (dim as f64).sqrt();
            let mut amps = vec![C64::new(0.0, 0.0); total];
            let mut stride_sum = 0usize;
            // flat index of (i, i, .., i) is i * (N^(M-1) + .. + N + 1)
            for k in 0..parties {
                stride_sum += dim.pow(k as u32);
            }
            for i in 0..dim {
                amps[i * stride_sum] = C64::new(w, 0.0);
            }
            PureMultipartiteState::new(parties, dim, amps)
        }
        NamedKind::BellPlus => {
            require(parties == 3 && dim == 2, "bell_plus is a three-qubit state")?;
            let mut amps = vec![C64::new(0.0, 0.0); 8];
            for flat in [0b000, 0b001, 0b110, 0b111] {
                amps[flat] = C64::new(0.5, 0.0);
            }
            PureMultipartiteState::new(3, 2, amps)
        }
    }
}
