//! Separability of rank-2 mixed states.
//!
//! A rank-2 density matrix rho = p |E1><E1| + (1-p) |E2><E2| on an N x N
//! bipartite system is separable iff three algebraic conditions on the 2x2
//! minors of the two eigenvector coefficient matrices hold:
//!   (i)  a single phase theta maps the E2 minors onto the E1 minors,
//!        gamma = e^(i theta) (1 - 1/p) alpha, across all index tuples;
//!   (ii) the mixed minors beta are cross-proportional to alpha on every
//!        pair of tuples sharing superscripts;
//!   (iii) the roots of alpha lambda^2 + beta lambda + gamma = 0 at the
//!        pivot satisfy z = mu2 - mu1 != 0, z = e^(i theta) conj(z), and
//!        mu2 (1 + |mu1|^2) / (z - mu1 mu2 conj(z)) lands in [0, 1].
//! The criterion needs a tuple with alpha != 0; when all alpha minors (or
//! the root gap) vanish the check degenerates and an independent
//! partial-transpose test decides instead, where it is decisive.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::PureBipartiteState;
use crate::tol;
use crate::C64;

/// rho = p |E1><E1| + (1-p) |E2><E2| with orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTwoMixedState {
    p: f64,
    e1: PureBipartiteState,
    e2: PureBipartiteState,
}

impl RankTwoMixedState {
    pub fn new(p: f64, e1: PureBipartiteState, e2: PureBipartiteState) -> Result<Self> {
        if e1.dim() != e2.dim() {
            return Err(Error::DimMismatch {
                expected: e1.dim(),
                got: e2.dim(),
            });
        }
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::IncompatibleParams {
                reason: format!("mixing weight p must lie strictly inside (0,1), got {p}"),
            });
        }
        let n = e1.dim();
        let mut overlap = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                overlap += e1.amplitude(i, j) * e2.amplitude(i, j).conj();
            }
        }
        if overlap.norm() > tol::ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal {
                overlap: overlap.norm(),
            });
        }
        Ok(Self { p, e1, e2 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn e1(&self) -> &PureBipartiteState {
        &self.e1
    }

    pub fn e2(&self) -> &PureBipartiteState {
        &self.e2
    }

    pub fn dim(&self) -> usize {
        self.e1.dim()
    }
}

/// The three rank-4 minor tensors of a rank-2 mixture, flat-indexed by
/// ((i n + j) n + k) n + l. gamma holds the E1 minors, alpha the E2
/// minors, beta the mixed ones:
///   gamma_ij^kl = a1_ij a1_kl - a1_il a1_kj
///   alpha_ij^kl = a2_ij a2_kl - a2_il a2_kj
///   beta_ij^kl  = a1_ij a2_kl + a2_ij a1_kl - a2_il a1_kj - a1_il a2_kj
/// All three are antisymmetric under j <-> l; entries are computed once for
/// j < l and mirrored, so the antisymmetry holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorTensors {
    dim: usize,
    pub alpha: Vec<C64>,
    pub beta: Vec<C64>,
    pub gamma: Vec<C64>,
}

impl MinorTensors {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }
}

pub fn minor_tensors(rho: &RankTwoMixedState) -> MinorTensors {
    let n = rho.dim();
    let a1 = |i: usize, j: usize| rho.e1.amplitude(i, j);
    let a2 = |i: usize, j: usize| rho.e2.amplitude(i, j);
    let zero = C64::new(0.0, 0.0);
    let mut t = MinorTensors {
        dim: n,
        alpha: vec![zero; n * n * n * n],
        beta: vec![zero; n * n * n * n],
        gamma: vec![zero; n * n * n * n],
    };
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in j + 1..n {
                    let gamma = a1(i, j) * a1(k, l) - a1(i, l) * a1(k, j);
                    let alpha = a2(i, j) * a2(k, l) - a2(i, l) * a2(k, j);
                    let beta =
                        a1(i, j) * a2(k, l) + a2(i, j) * a1(k, l)
                            - a2(i, l) * a1(k, j)
                            - a1(i, l) * a2(k, j);
                    let fwd = t.index(i, j, k, l);
                    let mirror = t.index(i, l, k, j);
                    t.gamma[fwd] = gamma;
                    t.gamma[mirror] = -gamma;
                    t.alpha[fwd] = alpha;
                    t.alpha[mirror] = -alpha;
                    t.beta[fwd] = beta;
                    t.beta[mirror] = -beta;
                }
            }
        }
    }
    t
}

/// Which of the criterion's conditions failed, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    None,
    /// No phase maps the alpha minors onto the gamma minors globally.
    ThetaNonexistent,
    /// The mixed minors are not cross-proportional to alpha.
    ProportionalityFailed,
    /// The quadratic's roots fail the phase or mixing-range condition at
    /// some eligible pivot (or different pivots disagree).
    RootConditionFailed,
    /// Reported by callers that resolved a vanished pivot externally.
    DegenerateAlpha,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// The witnessing phase, present whenever condition (i) fixed one.
    pub theta: Option<f64>,
    /// The reconstructed mixing weight from the pivot's roots.
    pub mixing_value: Option<f64>,
    pub violated: Violation,
    /// Filled by callers that also ran the partial-transpose test.
    pub ppt_agrees: Option<bool>,
}

/// Both roots of a x^2 + b x + c = 0 (a != 0), via the half-sum trick and
/// Viete's product so the smaller root survives cancellation.
pub(crate) fn solve_quadratic(a: C64, b: C64, c: C64) -> (C64, C64) {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let plus = b + disc;
    let minus = b - disc;
    let q = if plus.norm() >= minus.norm() {
        -plus / 2.0
    } else {
        -minus / 2.0
    };
    if q.norm() == 0.0 {
        // b and the discriminant both vanish, so c does too: double root 0.
        return (q, q);
    }
    (q / a, c / q)
}

/// Runs the three-condition criterion. Degenerate inputs (no alpha pivot,
/// or a double root at the pivot) are errors so callers can route them to
/// the partial-transpose fallback; see [`resolve_separability`].
pub fn separability_check(rho: &RankTwoMixedState) -> Result<SeparabilityVerdict> {
    let n = rho.dim();
    let t = minor_tensors(rho);
    let total = t.alpha.len();

    let entangled = |violated: Violation, theta: Option<f64>| SeparabilityVerdict {
        separable: false,
        theta,
        mixing_value: None,
        violated,
        ppt_agrees: None,
    };

    let mut pivot = 0usize;
    let mut amax = 0.0f64;
    for (idx, a) in t.alpha.iter().enumerate() {
        if a.norm() > amax {
            amax = a.norm();
            pivot = idx;
        }
    }
    if amax <= tol::DEGENERACY_TOL {
        return Err(Error::DegenerateAlpha);
    }

    // Condition (i): extract theta at the pivot, then demand the single
    // phase works for every tuple. c is real and negative for p in (0,1).
    let c = 1.0 - 1.0 / rho.p();
    let theta = (t.gamma[pivot] * (t.alpha[pivot] * c).conj()).arg();
    let rot = C64::from_polar(1.0, theta);
    for idx in 0..total {
        if (t.gamma[idx] - rot * c * t.alpha[idx]).norm() > tol::PROPORTIONALITY_TOL {
            return Ok(entangled(Violation::ThetaNonexistent, None));
        }
    }

    // Condition (ii): beta_ij^kl alpha_mn^kl = alpha_ij^kl beta_mn^kl for
    // every pair of tuples sharing the superscript pair (k, l).
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let left = t.index(i, j, k, l);
                    for m in 0..n {
                        for nn in 0..n {
                            let right = t.index(m, nn, k, l);
                            let cross = t.beta[left] * t.alpha[right]
                                - t.alpha[left] * t.beta[right];
                            if cross.norm() > tol::PROPORTIONALITY_TOL {
                                return Ok(entangled(
                                    Violation::ProportionalityFailed,
                                    Some(theta),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    // Condition (iii) at every eligible pivot. The criterion leaves open
    // whether pivots can disagree; disagreement is reported as a root-
    // condition failure rather than silently trusting one pivot.
    let mixing_of = |mu1: C64, mu2: C64| -> Option<f64> {
        let z = mu2 - mu1;
        let den = z - mu1 * mu2 * z.conj();
        if den.norm() == 0.0 {
            return None;
        }
        let w = mu2 * (1.0 + mu1.norm_sqr()) / den;
        let in_range = w.im.abs() <= tol::PROPORTIONALITY_TOL
            && w.re >= -tol::PROPORTIONALITY_TOL
            && w.re <= 1.0 + tol::PROPORTIONALITY_TOL;
        in_range.then(|| w.re.clamp(0.0, 1.0))
    };

    let mut all_pass = true;
    let mut pivot_mixing = None;
    for idx in 0..total {
        if t.alpha[idx].norm() <= tol::DEGENERACY_TOL {
            continue;
        }
        let (mu1, mu2) = solve_quadratic(t.alpha[idx], t.beta[idx], t.gamma[idx]);
        let z = mu2 - mu1;
        if z.norm() <= tol::DEGENERACY_TOL {
            if idx == pivot {
                return Err(Error::DegenerateRoots);
            }
            all_pass = false;
            continue;
        }
        // The phase relation does not depend on which root is called mu1:
        // swapping flips the sign of both z and conj(z).
        let phase_ok = (z - rot * z.conj()).norm() <= tol::PROPORTIONALITY_TOL;
        let mixing = mixing_of(mu1, mu2).or_else(|| mixing_of(mu2, mu1));
        if phase_ok && mixing.is_some() {
            if idx == pivot {
                pivot_mixing = mixing;
            }
        } else {
            all_pass = false;
        }
    }

    if all_pass {
        Ok(SeparabilityVerdict {
            separable: true,
            theta: Some(theta),
            mixing_value: pivot_mixing,
            violated: Violation::None,
            ppt_agrees: None,
        })
    } else {
        Ok(entangled(Violation::RootConditionFailed, Some(theta)))
    }
}

/// Result of the partial-transpose test.
#[derive(Debug, Clone, PartialEq)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
}

/// Builds the N^2 x N^2 density matrix, transposes the second subsystem's
/// indices, and reports its minimal eigenvalue. A value below -PSD_TOL
/// certifies entanglement in any dimension; nonnegativity certifies
/// separability for 2x2 and 2x3 systems.
pub fn ppt_check(rho: &RankTwoMixedState) -> Result<PptReport> {
    let n = rho.dim();
    let d = n * n;
    let flat = |s: &PureBipartiteState| -> Vec<C64> {
        let mut v = Vec::with_capacity(d);
        for i in 0..n {
            for j in 0..n {
                v.push(s.amplitude(i, j));
            }
        }
        v
    };
    let v1 = flat(&rho.e1);
    let v2 = flat(&rho.e2);
    let (p, q) = (rho.p, 1.0 - rho.p);
    let full = DMatrix::from_fn(d, d, |r, s| {
        p * v1[r] * v1[s].conj() + q * v2[r] * v2[s].conj()
    });
    let mut pt = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    pt[(i * n + j, k * n + l)] = full[(i * n + l, k * n + j)];
                }
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::try_new(pt, f64::EPSILON, 10_000).ok_or(
        Error::EigenFailure {
            context: "partial-transpose eigendecomposition",
        },
    )?;
    let min_eigenvalue = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(PptReport {
        min_eigenvalue,
        is_ppt: min_eigenvalue >= -tol::PSD_TOL,
    })
}

/// Why the criterion could not run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyKind {
    /// Every alpha minor vanishes: E2 is a product state.
    Alpha,
    /// The pivot quadratic has a double root.
    Roots,
}

/// A separability answer with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    /// The criterion ran; its verdict stands on its own.
    Criterion(SeparabilityVerdict),
    /// The criterion degenerated; the partial-transpose test decided
    /// (valid for N <= 3, where PPT is decisive).
    PptFallback {
        reason: DegeneracyKind,
        ppt: PptReport,
        separable: bool,
    },
    /// The criterion degenerated and no decisive fallback exists (N > 3).
    Indeterminate { reason: DegeneracyKind },
}

impl Resolution {
    /// The verdict, when one exists.
    pub fn separable(&self) -> Option<bool> {
        match self {
            Resolution::Criterion(v) => Some(v.separable),
            Resolution::PptFallback { separable, .. } => Some(*separable),
            Resolution::Indeterminate { .. } => None,
        }
    }
}

/// Runs the criterion and routes its degenerate cases to the
/// partial-transpose fallback where that is decisive.
pub fn resolve_separability(rho: &RankTwoMixedState) -> Result<Resolution> {
    let fallback = |reason: DegeneracyKind| -> Result<Resolution> {
        if rho.dim() <= 3 {
            let ppt = ppt_check(rho)?;
            let separable = ppt.is_ppt;
            Ok(Resolution::PptFallback {
                reason,
                ppt,
                separable,
            })
        } else {
            Ok(Resolution::Indeterminate { reason })
        }
    };
    match separability_check(rho) {
        Ok(v) => Ok(Resolution::Criterion(v)),
        Err(Error::DegenerateAlpha) => fallback(DegeneracyKind::Alpha),
        Err(Error::DegenerateRoots) => fallback(DegeneracyKind::Roots),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn qubit_pair(amps1: [f64; 4], amps2: [f64; 4], p: f64) -> RankTwoMixedState {
        let to_state = |a: [f64; 4]| {
            let v: Vec<C64> = a.iter().map(|&x| c(x)).collect();
            PureBipartiteState::from_amplitudes(2, &v).unwrap()
        };
        RankTwoMixedState::new(p, to_state(amps1), to_state(amps2)).unwrap()
    }

    const RT: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn bell_mixture(p: f64) -> RankTwoMixedState {
        // E1 = (|00> + |11>)/sqrt2, E2 = (|01> + |10>)/sqrt2.
        qubit_pair([RT, 0.0, 0.0, RT], [0.0, RT, RT, 0.0], p)
    }

    #[test]
    fn construction_validates_inputs() {
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let e2 = [0.0, 0.0, 0.0, 1.0];
        for bad_p in [0.0, 1.0, 1.2, -0.1] {
            let to_state = |a: [f64; 4]| {
                let v: Vec<C64> = a.iter().map(|&x| c(x)).collect();
                PureBipartiteState::from_amplitudes(2, &v).unwrap()
            };
            assert!(matches!(
                RankTwoMixedState::new(bad_p, to_state(e1), to_state(e2)),
                Err(Error::IncompatibleParams { .. })
            ));
        }
        // Overlapping eigenvectors are rejected.
        let s1 = PureBipartiteState::from_amplitudes(2, &[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let s2 = PureBipartiteState::from_amplitudes(
            2,
            &[c(0.8), c(0.6), c(0.0), c(0.0)],
        )
        .unwrap();
        assert!(matches!(
            RankTwoMixedState::new(0.5, s1, s2),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn minor_tensors_of_product_eigenvectors_vanish() {
        // |00> and |11>: rank-1 coefficient matrices have no 2x2 minors.
        let rho = qubit_pair([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], 0.3);
        let t = minor_tensors(&rho);
        assert!(t.alpha.iter().all(|z| z.norm() == 0.0));
        assert!(t.gamma.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn minor_tensors_hand_values_and_antisymmetry() {
        let rho = bell_mixture(0.5);
        let t = minor_tensors(&rho);
        // gamma_00^11 = a1_00 a1_11 - a1_01 a1_10 = 1/2;
        // alpha_00^11 = a2_00 a2_11 - a2_01 a2_10 = -1/2.
        assert!((t.gamma[t.index(0, 0, 1, 1)] - c(0.5)).norm() < 1e-15);
        assert!((t.alpha[t.index(0, 0, 1, 1)] - c(-0.5)).norm() < 1e-15);
        let n = t.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let fwd = t.index(i, j, k, l);
                        let mirror = t.index(i, l, k, j);
                        // Mirrored construction makes this exact.
                        assert_eq!(t.alpha[fwd], -t.alpha[mirror]);
                        assert_eq!(t.beta[fwd], -t.beta[mirror]);
                        assert_eq!(t.gamma[fwd], -t.gamma[mirror]);
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_bell_mixture_is_separable_with_half_mixing() {
        // p = 1/2 turns this into (|++><++| + |--><--|)/2, a mixture of
        // product states. The criterion finds theta = 0 and weight 1/2.
        let verdict = separability_check(&bell_mixture(0.5)).unwrap();
        assert!(verdict.separable);
        assert_eq!(verdict.violated, Violation::None);
        assert!(verdict.theta.unwrap().abs() < 1e-12);
        assert!((verdict.mixing_value.unwrap() - 0.5).abs() < 1e-12);
        // PPT concurs: the partial transpose is PSD (minimal eigenvalue 0).
        let ppt = ppt_check(&bell_mixture(0.5)).unwrap();
        assert!(ppt.is_ppt);
        assert!(ppt.min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn unbalanced_bell_mixture_is_entangled() {
        let rho = bell_mixture(0.3);
        let verdict = separability_check(&rho).unwrap();
        assert!(!verdict.separable);
        assert_eq!(verdict.violated, Violation::ThetaNonexistent);
        // Independent witness: the partial transpose has eigenvalue
        // 1/2 - max(p, 1-p) = -0.2.
        let ppt = ppt_check(&rho).unwrap();
        assert!(!ppt.is_ppt);
        assert!((ppt.min_eigenvalue + 0.2).abs() < 1e-12);
    }

    #[test]
    fn product_mixture_degenerates_and_falls_back_to_ppt() {
        let rho = qubit_pair([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], 0.3);
        assert!(matches!(
            separability_check(&rho),
            Err(Error::DegenerateAlpha)
        ));
        match resolve_separability(&rho).unwrap() {
            Resolution::PptFallback {
                reason, separable, ..
            } => {
                assert_eq!(reason, DegeneracyKind::Alpha);
                assert!(separable);
            }
            other => panic!("expected PPT fallback, got {other:?}"),
        }
    }

    #[test]
    fn bell_with_product_state_is_entangled_via_fallback() {
        // E2 = |01> is a product state, so alpha vanishes; PPT decides.
        let rho = qubit_pair([RT, 0.0, 0.0, RT], [0.0, 1.0, 0.0, 0.0], 0.9);
        let res = resolve_separability(&rho).unwrap();
        assert_eq!(res.separable(), Some(false));
        match res {
            Resolution::PptFallback { reason, ppt, .. } => {
                assert_eq!(reason, DegeneracyKind::Alpha);
                assert!(ppt.min_eigenvalue < -1e-3);
            }
            other => panic!("expected PPT fallback, got {other:?}"),
        }
    }

    #[test]
    fn ppt_examples() {
        // Mixture of orthogonal product states: PPT, eigenvalues >= 0.
        let sep = qubit_pair([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], 0.5);
        let rep = ppt_check(&sep).unwrap();
        assert!(rep.is_ppt);
        assert!(rep.min_eigenvalue >= -1e-15);

        // Almost-pure Bell state mixed with an orthogonal product state.
        let npt = qubit_pair([RT, 0.0, 0.0, RT], [0.0, 1.0, 0.0, 0.0], 0.99);
        let rep = ppt_check(&npt).unwrap();
        assert!(!rep.is_ppt);
        assert!(rep.min_eigenvalue < -0.3);
    }

    #[test]
    fn quadratic_solver_is_stable() {
        // x^2 - 3x + 2: roots 1 and 2.
        let (r1, r2) = solve_quadratic(c(1.0), c(-3.0), c(2.0));
        let mut roots = [r1.re, r2.re];
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] - 1.0).abs() < 1e-14);
        assert!((roots[1] - 2.0).abs() < 1e-14);

        // Wildly separated roots: the naive formula would lose the small one.
        let (r1, r2) = solve_quadratic(c(1.0), c(-1e8), c(1.0));
        let small = if r1.norm() < r2.norm() { r1 } else { r2 };
        let large = if r1.norm() < r2.norm() { r2 } else { r1 };
        assert!((small.re - 1e-8).abs() < 1e-14);
        assert!((large.re - 1e8).abs() < 1.0);

        // Double root: the gap collapses, which callers map to
        // DegenerateRoots.
        let (r1, r2) = solve_quadratic(c(1.0), c(-2.0), c(1.0));
        assert!((r1 - r2).norm() < 1e-12);

        // Complex coefficients.
        let a = C64::new(0.3, -0.4);
        let mu1 = C64::new(0.2, 1.1);
        let mu2 = C64::new(-0.7, 0.35);
        let b = -a * (mu1 + mu2);
        let cc = a * mu1 * mu2;
        let (r1, r2) = solve_quadratic(a, b, cc);
        let direct = ((r1 - mu1).norm() + (r2 - mu2).norm()).min((r1 - mu2).norm() + (r2 - mu1).norm());
        assert!(direct < 1e-12);
    }
}
