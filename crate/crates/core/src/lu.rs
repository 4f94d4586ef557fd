//! Haar-random local unitaries and the invariance harness.
//!
//! Sampling: fill a matrix with iid complex Gaussians, QR-factor it, and
//! absorb the phases of R's diagonal into Q. The phase fix makes the
//! distribution exactly Haar rather than merely unitary. Everything is
//! deterministic in the seed; per-trial seeds derive from the base seed
//! through a 64-bit mix so results do not depend on execution order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::concurrence::concurrence_value;
use crate::error::{Error, Result};
use crate::invariants::{bipartition_invariants, invariant_vector, tripartite_invariants};
use crate::separability::RankTwoMixedState;
use crate::state::{total_dim, PureBipartiteState, PureMultipartiteState};
use crate::tol;
use crate::C64;

/// Seed for every randomized operation in the crate.
pub type Seed = u64;

/// One round of splitmix64: a bijective 64-bit mix used to derive
/// independent child seeds from (base, index) pairs.
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn complex_gaussian_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let mut g = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    // Explicit loops pin the fill order, which the determinism contract
    // depends on.
    for i in 0..n {
        for j in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    g
}

/// Haar-distributed N x N unitary, deterministic in the seed.
pub fn haar_unitary(n: usize, seed: Seed) -> DMatrix<C64> {
    assert!(n >= 1, "unitary dimension must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = complex_gaussian_matrix(n, &mut rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    // Multiply column i by the phase of r_ii so the factorization is the
    // unique one with positive-real R diagonal.
    for i in 0..n {
        let d = r[(i, i)];
        let phase = if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for row in 0..n {
            q[(row, i)] *= phase;
        }
    }
    q
}

fn unitarity_residue(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let gram = u * u.adjoint();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

/// One unitary per party, all of the same local dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitaryTuple {
    dim: usize,
    factors: Vec<DMatrix<C64>>,
}

impl LocalUnitaryTuple {
    pub fn new(factors: Vec<DMatrix<C64>>) -> Result<Self> {
        let first = factors.first().ok_or(Error::ShapeMismatch {
            reason: "tuple needs at least one factor".to_string(),
        })?;
        let dim = first.nrows();
        for (k, f) in factors.iter().enumerate() {
            if f.nrows() != dim || f.ncols() != dim {
                return Err(Error::ShapeMismatch {
                    reason: format!(
                        "factor {k} is {}x{}, expected {dim}x{dim}",
                        f.nrows(),
                        f.ncols()
                    ),
                });
            }
            let residue = unitarity_residue(f);
            if residue > tol::UNITARITY_TOL {
                return Err(Error::NotUnitary { residue });
            }
        }
        Ok(Self { dim, factors })
    }

    /// Haar-random tuple of `parties` factors.
    pub fn haar(parties: usize, dim: usize, seed: Seed) -> Result<Self> {
        let factors = (0..parties)
            .map(|k| haar_unitary(dim, splitmix64(seed.wrapping_add(k as u64))))
            .collect();
        Self::new(factors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[DMatrix<C64>] {
        &self.factors
    }

    /// Factorwise product: applying `self` then `other` equals applying
    /// the tuple whose k-th factor is self_k * other_k.
    pub fn compose(&self, other: &LocalUnitaryTuple) -> Result<Self> {
        if self.dim != other.dim || self.factors.len() != other.factors.len() {
            return Err(Error::ShapeMismatch {
                reason: "tuples must share party count and dimension".to_string(),
            });
        }
        Self::new(
            self.factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }
}

/// Transforms a_(i1..iM) to sum_j a_(j1..jM) b1_(j1 i1) .. bM_(jM iM):
/// each party's index is contracted against its factor on the left slot.
pub fn apply_local(
    state: &PureMultipartiteState,
    lus: &LocalUnitaryTuple,
) -> Result<PureMultipartiteState> {
    let m = state.parties();
    let n = state.dim();
    if lus.factors.len() != m {
        return Err(Error::ShapeMismatch {
            reason: format!("{} factors for {m} parties", lus.factors.len()),
        });
    }
    if lus.dim != n {
        return Err(Error::ShapeMismatch {
            reason: format!("factor dimension {} for local dimension {n}", lus.dim),
        });
    }
    let mut cur = state.amplitudes().to_vec();
    let mut next = vec![C64::new(0.0, 0.0); cur.len()];
    for (k, b) in lus.factors.iter().enumerate() {
        // Party k's index varies with this stride in the flat layout.
        let stride = n.pow((m - 1 - k) as u32);
        let block = stride * n;
        for base in (0..cur.len()).step_by(block) {
            for off in 0..stride {
                for i in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..n {
                        acc += cur[base + off + j * stride] * b[(j, i)];
                    }
                    next[base + off + i * stride] = acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    PureMultipartiteState::new(m, n, cur)
}

/// Haar-induced random pure state: iid complex Gaussian amplitudes,
/// normalized. Deterministic in the seed.
pub fn random_state(parties: usize, dim: usize, seed: Seed) -> Result<PureMultipartiteState> {
    if parties < 2 || dim < 2 {
        return Err(Error::IncompatibleParams {
            reason: format!("need parties >= 2 and dim >= 2, got parties {parties}, dim {dim}"),
        });
    }
    let total = total_dim(dim, parties)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps = Vec::with_capacity(total);
    for _ in 0..total {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        amps.push(C64::new(re, im));
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureMultipartiteState::new(parties, dim, amps)
}

/// Random rank-2 mixture: the two eigenvectors are the first two columns
/// of a Haar unitary on the N^2-dimensional joint space (hence exactly
/// orthonormal), the weight is uniform on (0.05, 0.95).
pub fn random_rank_two(dim: usize, seed: Seed) -> Result<RankTwoMixedState> {
    let d = dim
        .checked_mul(dim)
        .ok_or_else(|| Error::IncompatibleParams {
            reason: format!("dim {dim} too large"),
        })?;
    let u = haar_unitary(d, seed);
    let column = |c: usize| -> Result<PureBipartiteState> {
        let amps: Vec<C64> = (0..d).map(|r| u[(r, c)]).collect();
        PureBipartiteState::from_amplitudes(dim, &amps)
    };
    let unit = (splitmix64(seed ^ 0xA5A5_A5A5_A5A5_A5A5) >> 11) as f64 / (1u64 << 53) as f64;
    let p = 0.05 + 0.9 * unit;
    RankTwoMixedState::new(p, column(0)?, column(1)?)
}

/// Largest drift seen for one tracked quantity across an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityDrift {
    pub label: String,
    pub baseline: f64,
    pub max_drift: f64,
}

/// Per-quantity invariance record over `trials` random local-unitary
/// transformations of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub trials: u64,
    pub quantities: Vec<QuantityDrift>,
}

impl InvarianceReport {
    pub fn max_drift(&self) -> f64 {
        self.quantities
            .iter()
            .map(|q| q.max_drift)
            .fold(0.0, f64::max)
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.max_drift() <= tolerance
    }
}

/// Every quantity the module tracks for a given shape: the bipartite
/// trace-power invariants for two parties, the three quartic contractions
/// for three, the purity of every canonical bipartition, and the
/// concurrence.
fn tracked_quantities(state: &PureMultipartiteState) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    match state.parties() {
        2 => {
            let v = invariant_vector(&state.to_bipartite()?)?;
            for (alpha, value) in v.values().iter().enumerate() {
                out.push((format!("I_{alpha}"), *value));
            }
        }
        3 => {
            let t = tripartite_invariants(state)?;
            out.push(("I_1".to_string(), t.i1));
            out.push(("I_2".to_string(), t.i2));
            out.push(("I_3".to_string(), t.i3));
        }
        _ => {}
    }
    for (part, purity) in bipartition_invariants(state)? {
        out.push((format!("I{}", part.label()), purity));
    }
    out.push(("C".to_string(), concurrence_value(state)?));
    Ok(out)
}

/// Applies `trials` Haar-random tuples to the state and records, for every
/// tracked quantity, the largest absolute deviation from its value on the
/// untransformed state.
pub fn invariance_suite(
    state: &PureMultipartiteState,
    trials: u64,
    seed: Seed,
) -> Result<InvarianceReport> {
    if trials < 1 {
        return Err(Error::IncompatibleParams {
            reason: "need at least one trial".to_string(),
        });
    }
    let baseline = tracked_quantities(state)?;
    let mut drifts = vec![0.0f64; baseline.len()];
    for trial in 0..trials {
        let tuple = LocalUnitaryTuple::haar(
            state.parties(),
            state.dim(),
            splitmix64(seed.wrapping_add(trial)),
        )?;
        let transformed = apply_local(state, &tuple)?;
        let values = tracked_quantities(&transformed)?;
        for (slot, ((_, before), (_, after))) in
            drifts.iter_mut().zip(baseline.iter().zip(&values))
        {
            *slot = slot.max((after - before).abs());
        }
    }
    Ok(InvarianceReport {
        trials,
        quantities: baseline
            .into_iter()
            .zip(drifts)
            .map(|((label, value), max_drift)| QuantityDrift {
                label,
                baseline: value,
                max_drift,
            })
            .collect(),
    })
}
