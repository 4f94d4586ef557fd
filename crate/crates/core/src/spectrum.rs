//! Schmidt spectra, entanglement of formation, characteristic-polynomial
//! coefficients from invariants, and the closed-form N = 3 eigenvalues.
//!
//! Eigendecomposition of rho = AA^H is the primary spectrum route; the N = 3
//! trigonometric closed form is a secondary route whose branch conventions
//! were calibrated against that oracle (see `eigenvalues_n3_closed_form`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::invariants::InvariantVector;
use crate::state::{reduced_density, PureBipartiteState};
use crate::tol;

/// Eigenvalues of a reduction, descending, clamped at zero, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Validates and normalizes ordering. Entries in [-SPECTRUM_TOL, 0) are
    /// eigensolver noise and clamp to 0; lower entries are errors, as is a
    /// sum away from 1.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadShape { expected: 1, got: 0 });
        }
        for v in &values {
            if !v.is_finite() || *v < -tol::SPECTRUM_TOL {
                return Err(Error::InternalNumericalError {
                    context: format!("spectrum entry {v} below the clamp window"),
                });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tol::SPECTRUM_TOL {
            return Err(Error::NotNormalized { norm: sum });
        }
        for v in &mut values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("entries are finite"));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Spectrum of AA^H, descending.
pub fn schmidt_spectrum(state: &PureBipartiteState) -> Result<SchmidtSpectrum> {
    let rho = reduced_density(state)?;
    let eig = nalgebra::SymmetricEigen::try_new(rho.matrix().clone(), f64::EPSILON, 10_000)
        .ok_or(Error::EigenFailure {
            context: "schmidt spectrum eigendecomposition",
        })?;
    SchmidtSpectrum::from_values(eig.eigenvalues.iter().copied().collect())
}

/// Shannon entropy of the spectrum in bits: -sum L_i log2 L_i, with
/// 0 log2 0 = 0. Ranges over [0, log2 N].
pub fn entanglement_of_formation(spectrum: &SchmidtSpectrum) -> f64 {
    let e: f64 = spectrum
        .values()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    // -0.0 from a spectrum like (1, 0) would leak the sign bit into output.
    e.max(0.0)
}

/// Entanglement of formation straight from a state.
pub fn eof_of_state(state: &PureBipartiteState) -> Result<f64> {
    Ok(entanglement_of_formation(&schmidt_spectrum(state)?))
}

/// Leading coefficients of det(Lambda I - AA^H) = sum_k (-1)^(N-k) c_k
/// Lambda^k ... stored by index k with c_N = 1 implicit. Only the four
/// leading indices {N-1, N-2, N-3, N-4} (clipped at 0) are produced; c_k
/// equals the elementary symmetric polynomial e_{N-k} of the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPolyCoeffs {
    dim: usize,
    c: BTreeMap<usize, f64>,
}

impl CharPolyCoeffs {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.c.get(&k).copied()
    }

    /// (index, value) pairs, ascending index.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.c.iter().map(|(&k, &v)| (k, v))
    }
}

/// Newton's identities on the power sums p_k = I_{k-1}:
/// e_1 = p_1, 2 e_2 = p_1^2 - p_2, 6 e_3 = p_1^3 - 3 p_1 p_2 + 2 p_3,
/// 24 e_4 = p_1^4 - 6 p_1^2 p_2 + 3 p_2^2 + 8 p_1 p_3 - 6 p_4.
pub fn char_poly_coeffs(inv: &InvariantVector) -> CharPolyCoeffs {
    let n = inv.dim();
    let p = |k: usize| inv.values()[k - 1]; // p_k = I_{k-1}, k <= N
    let mut c = BTreeMap::new();
    for k in 1..=4usize {
        if k > n {
            break; // index N - k would be negative
        }
        let e = match k {
            1 => p(1),
            2 => (p(1) * p(1) - p(2)) / 2.0,
            3 => (p(1).powi(3) - 3.0 * p(1) * p(2) + 2.0 * p(3)) / 6.0,
            4 => {
                (p(1).powi(4) - 6.0 * p(1) * p(1) * p(2)
                    + 3.0 * p(2) * p(2)
                    + 8.0 * p(1) * p(3)
                    - 6.0 * p(4))
                    / 24.0
            }
            _ => unreachable!(),
        };
        c.insert(n - k, e);
    }
    CharPolyCoeffs { dim: n, c }
}

/// The N = 3 closed-form spectrum. `lambdas` keeps the formula's own
/// ordering (sorted descending it reads (L1, L3, L2)); `c3` is the
/// concurrence and `phi` the cubic's trigonometric angle in [0, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormN3 {
    pub lambdas: [f64; 3],
    pub c3: f64,
    pub phi: f64,
}

/// Trigonometric roots of the characteristic cubic of a 3x3 reduction,
/// driven only by the invariants.
///
/// With c2 = I_0, c1 = (I_0^2 - I_1)/2, c0 = (I_0^3 - 3 I_0 I_1 + 2 I_2)/6
/// and C_3^2 = (3/2)(I_0^2 - I_1):
///   B1 = 2 - 9 c1 + 27 c0,  B2 = |4 (3 c1 - 1)^3 + B1^2|,
///   phi = atan2(sqrt(B2), B1),  s = sqrt(1 - C_3^2),
///   L1 = 1/3 + (2/3) cos(phi/3) s,
///   L2 = 1/3 - (1/3)(cos(phi/3) + sqrt(3) sin(phi/3)) s,
///   L3 = 1/3 - (1/3)(cos(phi/3) - sqrt(3) sin(phi/3)) s.
/// The B1-squared discriminant term and the atan2 quadrant convention were
/// fixed by calibrating against the eigendecomposition oracle on 10^3
/// random states (max deviation observed 3.5e-15); the returned spectrum is
/// still re-verified here against its defining power sums, so a branch
/// error on any future input surfaces as ClosedFormMismatch instead of a
/// silently wrong spectrum.
pub fn eigenvalues_n3_closed_form(inv: &InvariantVector) -> Result<ClosedFormN3> {
    if inv.dim() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            got: inv.dim(),
        });
    }
    let (i0, i1, i2) = (inv.values()[0], inv.values()[1], inv.values()[2]);
    let c1 = (i0 * i0 - i1) / 2.0;
    let c0 = (i0.powi(3) - 3.0 * i0 * i1 + 2.0 * i2) / 6.0;

    let c3 = crate::concurrence::sqrt_clamped(1.5 * (i0 * i0 - i1), "closed-form C_3")?;
    let b1 = 2.0 - 9.0 * c1 + 27.0 * c0;
    let b2 = (4.0 * (3.0 * c1 - 1.0).powi(3) + b1 * b1).abs();
    let phi = b2.sqrt().atan2(b1);

    let lambdas = if (c3 - 1.0).abs() <= tol::CLOSED_FORM_DEGENERATE_TOL {
        // s = 0 up to noise; the formulas collapse to the fully degenerate
        // spectrum, returned exactly.
        [1.0 / 3.0; 3]
    } else {
        let s = crate::concurrence::sqrt_clamped(1.0 - c3 * c3, "closed-form spread factor")?;
        let (sin, cos) = (phi / 3.0).sin_cos();
        let sqrt3 = 3.0f64.sqrt();
        [
            1.0 / 3.0 + 2.0 / 3.0 * cos * s,
            1.0 / 3.0 - (cos + sqrt3 * sin) / 3.0 * s,
            1.0 / 3.0 - (cos - sqrt3 * sin) / 3.0 * s,
        ]
    };

    // Power-sum consistency: the roots must reproduce the invariants they
    // were built from, or the branch selection went wrong for this input.
    let mut max_err = 0.0f64;
    for (k, want) in [(1, i0), (2, i1), (3, i2)] {
        let got: f64 = lambdas.iter().map(|l| l.powi(k)).sum();
        max_err = max_err.max((got - want).abs());
    }
    if max_err > tol::CLOSED_FORM_CONSISTENCY_TOL {
        return Err(Error::ClosedFormMismatch { max_err });
    }

    let lambdas = lambdas.map(|l| {
        // Same clamp window as SchmidtSpectrum.
        if l < 0.0 && l >= -tol::SPECTRUM_TOL {
            0.0
        } else {
            l
        }
    });
    if lambdas.iter().any(|l| *l < 0.0) {
        return Err(Error::InternalNumericalError {
            context: format!("closed-form eigenvalue below the clamp window: {lambdas:?}"),
        });
    }
    Ok(ClosedFormN3 { lambdas, c3, phi })
}
