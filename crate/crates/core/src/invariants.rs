//! Local-unitary invariants built from reduced-density traces.
//!
//! For a bipartite state with coefficient matrix A and rho = A A^H, the
//! invariant of order alpha is I_alpha = Tr rho^(alpha + 1), alpha from 0
//! to N - 1. I_0 is the norm; I_1 is the purity of either reduction.
//! For more parties the same purities are taken across bipartitions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::{enumerate_bipartitions, reshape, Bipartition, PureBipartiteState,
    PureMultipartiteState};
use crate::tol;
use crate::C64;

/// The complete set I_0 .. I_(N-1) for a bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantVector {
    dim: usize,
    values: Vec<f64>,
}

impl InvariantVector {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Values indexed by alpha; `values()[0]` is I_0.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, alpha: usize) -> Result<f64> {
        self.values
            .get(alpha)
            .copied()
            .ok_or(Error::AlphaOutOfRange {
                alpha,
                dim: self.dim,
            })
    }
}

fn real_trace(m: &DMatrix<C64>, context: &str) -> Result<f64> {
    let tr: C64 = (0..m.nrows()).map(|i| m[(i, i)]).sum();
    if tr.im.abs() > tol::IMAG_RESIDUE_TOL {
        return Err(Error::InternalNumericalError {
            context: format!("{context}: imaginary trace residue {}", tr.im),
        });
    }
    Ok(tr.re)
}

/// I_alpha = Tr (A A^H)^(alpha + 1) by iterated matrix products.
pub fn invariant_i(state: &PureBipartiteState, alpha: usize) -> Result<f64> {
    let n = state.dim();
    if alpha >= n {
        return Err(Error::AlphaOutOfRange { alpha, dim: n });
    }
    let rho = state.matrix() * state.matrix().adjoint();
    let mut power = rho.clone();
    for _ in 0..alpha {
        power *= &rho;
    }
    real_trace(&power, "trace power")
}

/// All of I_0 .. I_(N-1) in one pass over the powers of rho.
pub fn invariant_vector(state: &PureBipartiteState) -> Result<InvariantVector> {
    let n = state.dim();
    let rho = state.matrix() * state.matrix().adjoint();
    let mut values = Vec::with_capacity(n);
    let mut power = rho.clone();
    values.push(real_trace(&power, "trace power")?);
    for _ in 1..n {
        power *= &rho;
        values.push(real_trace(&power, "trace power")?);
    }
    Ok(InvariantVector { dim: n, values })
}

/// Purity Tr (B B^H)^2 of the reduction onto the row side of a reshape,
/// computed as the squared Frobenius norm of the Gram matrix B B^H.
pub(crate) fn purity_of_reshape(b: &DMatrix<C64>) -> f64 {
    let g = b * b.adjoint();
    g.iter().map(|z| z.norm_sqr()).sum()
}

/// Purity of the reduction onto one bipartition half.
pub fn bipartition_invariant(
    state: &PureMultipartiteState,
    part: &Bipartition,
) -> Result<f64> {
    if part.parties() != state.parties() {
        return Err(Error::BadPartition {
            reason: format!(
                "bipartition is over {} parties but the state has {}",
                part.parties(),
                state.parties()
            ),
        });
    }
    Ok(purity_of_reshape(&reshape(state, &part.left_zero_based())))
}

/// Purities across every canonical bipartition, in enumeration order,
/// labelled by the bipartition.
pub fn bipartition_invariants(
    state: &PureMultipartiteState,
) -> Result<Vec<(Bipartition, f64)>> {
    enumerate_bipartitions(state.parties())?
        .into_iter()
        .map(|p| bipartition_invariant(state, &p).map(|v| (p, v)))
        .collect()
}

/// The invariants of a three-party state: the norm I_0 and the three
/// quartic contractions I_1, I_2, I_3, each summing
/// a_* a_* a_* a_* with the index of one party exchanged between the
/// conjugated and unconjugated pairs. I_k exchanges the index of party
/// (4 - k), so I_1 is the purity of the {1,2} reduction, I_2 of {1,3},
/// and I_3 of {1} (equivalently {2,3}).
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteInvariants {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

pub fn tripartite_invariants(state: &PureMultipartiteState) -> Result<TripartiteInvariants> {
    if state.parties() != 3 {
        return Err(Error::WrongPartyCount {
            expected: 3,
            got: state.parties(),
        });
    }
    let i0: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    let i1 = purity_of_reshape(&reshape(state, &[0, 1]));
    let i2 = purity_of_reshape(&reshape(state, &[0, 2]));
    let i3 = purity_of_reshape(&reshape(state, &[0]));
    Ok(TripartiteInvariants { i0, i1, i2, i3 })
}
