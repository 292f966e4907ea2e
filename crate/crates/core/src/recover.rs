//! Explicit orthogonal maps to reduced forms: closed-form n = 2 recovery,
//! covariant-eigenvector recovery for generic tensors, and the parameters
//! and rotation of the canonical partially decoupled n = 3 form.

use std::fmt;

use nalgebra::{Complex, DMatrix};

use crate::covariants::{covariants, star2};
use crate::error::{Error, Result};
use crate::linalg::{sign_vectors, sym_eigen, SymEigen};
use crate::matrix::Mat;
use crate::orbitlab::make_pd_canonical;
use crate::ortho::OrthogonalMap;
use crate::scalar::{int, Check, Scalar, Tolerance};
use crate::tensor::{act, act_matrix, require_n, Pattern, SymTensor3};

/// Float-mode acceptance for recovered maps: `residual <= RECOVERY_TOL (1 + ‖Γ‖_F)`.
pub const RECOVERY_TOL: f64 = 1e-8;

/// Which condition ruled out a real canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvabilityFailure {
    Q1Negative,
    Q2Negative,
    Degree8Negative,
    /// `q̃2 = 0` but `q̃3 != q̃4²/4`, or `q̃3`, `q̃4` negative.
    DegenerateBranch,
}

impl fmt::Display for SolvabilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolvabilityFailure::Q1Negative => "q1 < 0",
            SolvabilityFailure::Q2Negative => "q2 < 0",
            SolvabilityFailure::Degree8Negative => "degree-8 solvability polynomial < 0",
            SolvabilityFailure::DegenerateBranch => "q2 = 0 branch constraints violated",
        })
    }
}

/// Parameters `(α, γ₁, γ₂, β₃)` of the canonical partially decoupled form.
#[derive(Debug, Clone, PartialEq)]
pub struct PdParams<S> {
    pub alpha: S,
    pub gamma1: S,
    pub gamma2: S,
    pub beta3: S,
}

impl<S: Scalar> PdParams<S> {
    /// The quadruple `(q1, q2, q3, q4)` these parameters produce.
    pub fn forward_q(&self) -> [S; 4] {
        let (a, g1, g2, b) = (&self.alpha, &self.gamma1, &self.gamma2, &self.beta3);
        let p = |x: &S, k: u32| (0..k).fold(S::one(), |acc, _| acc * x.clone());
        let i = int::<S>;
        let q1 = b.clone() * b.clone();
        let q2 = i(16) * p(a, 2);
        let q3 = i(20) * p(a, 4)
            + i(32) * p(a, 3) * g1.clone()
            + i(8) * p(a, 2) * p(g1, 2)
            + i(4) * p(g1, 4)
            + i(8) * p(a, 2) * p(g2, 2)
            + i(8) * p(g1, 2) * p(g2, 2)
            + i(4) * p(g2, 4);
        let q4 = i(12) * p(a, 2) + i(4) * p(g1, 2) + i(4) * p(g2, 2);
        [q1, q2, q3, q4]
    }

    pub fn to_f64(&self) -> PdParams<f64> {
        PdParams {
            alpha: self.alpha.to_f64(),
            gamma1: self.gamma1.to_f64(),
            gamma2: self.gamma2.to_f64(),
            beta3: self.beta3.to_f64(),
        }
    }

    pub fn values(&self) -> [(&'static str, S); 4] {
        [
            ("alpha", self.alpha.clone()),
            ("gamma1", self.gamma1.clone()),
            ("gamma2", self.gamma2.clone()),
            ("beta3", self.beta3.clone()),
        ]
    }
}

/// `4 q2³ γ₂²` as a polynomial in the quadruple; nonnegative exactly when
/// a real `γ₂` exists (for `q2 > 0`).
pub fn solvability_numerator<S: Scalar>(q: &[S; 4]) -> S {
    let [_, q2, q3, q4] = q;
    let p = |x: &S, k: u32| (0..k).fold(S::one(), |acc, _| acc * x.clone());
    let i = int::<S>;
    -p(q2, 4) + i(4) * p(q2, 2) * q3.clone() - i(16) * p(q3, 2) + i(2) * p(q2, 3) * q4.clone()
        - i(8) * q2.clone() * q3.clone() * q4.clone()
        - i(2) * p(q2, 2) * p(q4, 2)
        + i(8) * q3.clone() * p(q4, 2)
        + i(2) * q2.clone() * p(q4, 3)
        - p(q4, 4)
}

/// Natural size of the quadruple in units of `‖Γ‖²`.
fn q_scale<S: Scalar>(q: &[S; 4]) -> f64 {
    q[0].abs().to_f64() + q[1].abs().to_f64() + q[3].abs().to_f64() + q[2].abs().to_f64().sqrt()
}

/// Sign test `x >= 0` for a quantity of size `scale`.
fn nonnegative<S: Scalar>(x: &S, scale: f64, tol: Tolerance) -> Check {
    if !x.is_negative() {
        Check::Pass
    } else if S::EXACT {
        Check::Fail
    } else {
        tol.judge_normalized(x.abs().to_f64() / scale.max(f64::MIN_POSITIVE))
    }
}

/// Solvability of the canonical form for a `q̃` quadruple.
///
/// Returns the combined check and, unless it passes, the first condition
/// that failed or sits on the tolerance boundary.
pub fn solvability<S: Scalar>(q: &[S; 4], tol: Tolerance) -> (Check, Option<SolvabilityFailure>) {
    let s = q_scale(q);
    let c1 = nonnegative(&q[0], s, tol);
    if c1 != Check::Pass {
        return (c1, Some(SolvabilityFailure::Q1Negative));
    }
    let c2 = nonnegative(&q[1], s, tol);
    if c2 != Check::Pass {
        return (c2, Some(SolvabilityFailure::Q2Negative));
    }
    if q2_vanishes(q, tol) {
        let c3 = nonnegative(&q[2], s * s, tol).and(nonnegative(&q[3], s, tol));
        let diff = q[2].clone() - q[3].clone() * q[3].clone() / int::<S>(4);
        let c4 = tol.judge(&diff, s * s);
        let c = c3.and(c4);
        return if c == Check::Pass {
            (c, None)
        } else {
            (c, Some(SolvabilityFailure::DegenerateBranch))
        };
    }
    let c = nonnegative(&solvability_numerator(q), s.powi(4), tol);
    if c == Check::Pass {
        (c, None)
    } else {
        (c, Some(SolvabilityFailure::Degree8Negative))
    }
}

fn q2_vanishes<S: Scalar>(q: &[S; 4], tol: Tolerance) -> bool {
    if S::EXACT {
        q[1].is_zero()
    } else {
        q[1].abs().to_f64() <= tol.rel * q_scale(q)
    }
}

fn sqrt_or<S: Scalar>(x: &S, what: &'static str) -> Result<S> {
    let x = if x.is_negative() && !S::EXACT { S::zero() } else { x.clone() };
    x.sqrt_checked().ok_or(Error::NotRepresentable(what))
}

/// Canonical parameters with `α, γ₂, β₃ >= 0` reproducing the quadruple.
///
/// When `q̃2 = 0` the `(γ₁, γ₂)` continuum is pinned to `(√q̃4/2, 0)`.
/// In exact mode, irrational square roots give `NotRepresentable`.
pub fn recover_pd_params<S: Scalar>(q: &[S; 4]) -> Result<PdParams<S>> {
    let tol = Tolerance::default();
    let (check, failure) = solvability(q, tol);
    if check == Check::Fail {
        return Err(Error::Unsolvable(failure.expect("failure reported")));
    }
    let [q1, q2, q3, q4] = q;
    let beta3 = sqrt_or(q1, "beta3")?;
    let i = int::<S>;
    if q2_vanishes(q, tol) {
        let gamma1 = sqrt_or(q4, "gamma1")? / i(2);
        return Ok(PdParams {
            alpha: S::zero(),
            gamma1,
            gamma2: S::zero(),
            beta3,
        });
    }
    let alpha = sqrt_or(q2, "alpha")? / i(4);
    let q2sq = q2.clone() * q2.clone();
    let g2sq = solvability_numerator(q) / (i(4) * q2sq.clone() * q2.clone());
    let gamma2 = sqrt_or(&g2sq, "gamma2")?;
    let gamma1 = -alpha.clone()
        * (q2sq.clone() - i(8) * q3.clone() - i(2) * q2.clone() * q4.clone()
            + i(2) * q4.clone() * q4.clone())
        / q2sq;
    Ok(PdParams {
        alpha,
        gamma1,
        gamma2,
        beta3,
    })
}

/// One recovered map and the reduced tensor it produces.
#[derive(Debug, Clone)]
pub struct Branch<S> {
    pub map: OrthogonalMap<S>,
    pub reduced: SymTensor3<S>,
    /// Max entry deviation of `act(map, Γ)` from the target.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RecoveryReport<S> {
    /// Verified branches in enumeration order.
    pub branches: Vec<Branch<S>>,
    /// Target form (reduced tensor of the first branch, or the requested target).
    pub reduced: SymTensor3<S>,
    /// Largest residual among the returned branches; the best candidate's
    /// residual when none was accepted.
    pub residual: f64,
    /// Number of candidate maps examined.
    pub branch_count: usize,
}

impl<S: Scalar> RecoveryReport<S> {
    pub fn maps(&self) -> impl Iterator<Item = &OrthogonalMap<S>> {
        self.branches.iter().map(|b| &b.map)
    }
}

fn accept_bound(gamma_norm: f64) -> f64 {
    RECOVERY_TOL * (1.0 + gamma_norm)
}

/// `√u` for `u = p + iq` on the unit circle, with nonnegative real part
/// when possible; exact when the root is rational.
fn unit_sqrt<S: Scalar>(p: &S, q: &S) -> Option<(S, S)> {
    let two = int::<S>(2);
    let one = S::one();
    if !p.is_negative() {
        let c = ((one + p.clone()) / two.clone()).sqrt_checked()?;
        let s = q.clone() / (two * c.clone());
        Some((c, s))
    } else {
        let mut s = ((one - p.clone()) / two.clone()).sqrt_checked()?;
        if q.is_negative() {
            s = -s;
        }
        let c = q.clone() / (two * s.clone());
        Some((c, s))
    }
}

/// The eight maps in O(2) carrying a decoupleable n = 2 tensor to reduced form.
///
/// Rotations `σ_θ` with `e^{4iθ} = ((a0+a2) + i(a1+a3)) / ((a0-3a2) + i(a3-3a1))`
/// and its quarter turns, then the same four composed with the swap `x₁ <-> x₂`.
pub fn recover_n2<S: Scalar>(gamma: &SymTensor3<S>) -> Result<RecoveryReport<S>> {
    let [a0, a1, a2, a3] = gamma.n2_params()?;
    if gamma.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let tol = Tolerance::default();
    let rel = a2.clone() * (a2.clone() - a0.clone()) - a1.clone() * (a3.clone() - a1.clone());
    let scale = (a2.clone() * a2.clone()).abs().to_f64()
        + (a2.clone() * a0.clone()).abs().to_f64()
        + (a1.clone() * a3.clone()).abs().to_f64()
        + (a1.clone() * a1.clone()).abs().to_f64();
    if tol.judge(&rel, scale) == Check::Fail {
        return Err(Error::NotDecoupleable);
    }
    let i = int::<S>;
    let (p4, q4) = (a0.clone() + a2.clone(), a1.clone() + a3.clone());
    let (p1, q1) = (a0 - i(3) * a2, a3 - i(3) * a1);
    let den = p1.clone() * p1.clone() + q1.clone() * q1.clone();
    if den.is_zero() {
        return Err(Error::NotDecoupleable);
    }
    let mut zr = (p4.clone() * p1.clone() + q4.clone() * q1.clone()) / den.clone();
    let mut zi = (q4 * p1 - p4 * q1) / den;
    let modulus = zr.clone() * zr.clone() + zi.clone() * zi.clone();
    if S::EXACT {
        if !(modulus.clone() - S::one()).is_zero() {
            return Err(Error::NotDecoupleable);
        }
    } else {
        let m = modulus.to_f64().sqrt();
        zr = zr / S::from_f64(m).expect("finite");
        zi = zi / S::from_f64(m).expect("finite");
    }
    let (hr, hi) = unit_sqrt(&zr, &zi).ok_or(Error::NotRepresentable("rotation angle"))?;
    let (c, s) = unit_sqrt(&hr, &hi).ok_or(Error::NotRepresentable("rotation angle"))?;

    let bound = accept_bound(gamma.frobenius());
    let mut rotations = Vec::with_capacity(4);
    let (mut c, mut s) = (c, s);
    for _ in 0..4 {
        rotations.push(OrthogonalMap::rotation2(c.clone(), s.clone())?);
        // multiply e^{iθ} by i
        let next = (-s.clone(), c.clone());
        c = next.0;
        s = next.1;
    }
    let swap = OrthogonalMap::swap2();
    let reflections: Vec<_> = rotations.iter().map(|r| swap.compose(r)).collect();
    let mut branches = Vec::with_capacity(8);
    for map in rotations.into_iter().chain(reflections) {
        let reduced = act(&map, gamma)?;
        let residual = reduced.off_pattern_max(Pattern::Full);
        let ok = if S::EXACT { residual == 0.0 } else { residual <= bound };
        if !ok {
            return Err(Error::NoCandidateMatches);
        }
        branches.push(Branch {
            reduced: reduced.project(Pattern::Full),
            map,
            residual,
        });
    }
    let residual = branches.iter().map(|b| b.residual).fold(0.0, f64::max);
    Ok(RecoveryReport {
        reduced: branches[0].reduced.clone(),
        residual,
        branch_count: 8,
        branches,
    })
}

/// Covariant matrix used to align two tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Covariant {
    GammaStar2,
    DStar2,
}

impl Covariant {
    pub fn matrix<S: Scalar>(self, gamma: &SymTensor3<S>) -> Mat<S> {
        match self {
            Covariant::GammaStar2 => star2(gamma),
            Covariant::DStar2 => covariants(gamma).d_star2,
        }
    }
}

/// `Σ ε_i v_i u_iᵗ` for matched eigenbases.
fn aligned_map(from: &SymEigen, to: &SymEigen, eps: &[i8]) -> Mat<f64> {
    let n = eps.len();
    Mat::from_fn(n, |r, c| {
        (0..n)
            .map(|i| eps[i] as f64 * to.vectors.get(r, i) * from.vectors.get(c, i))
            .sum()
    })
}

/// Candidate maps `ρ` with `act(ρ, Γ₁) = Γ₂`, found by matching the
/// eigenvectors of the selected covariant matrix over all `2^n` sign choices.
pub fn recover_rotation_via_covariant<S: Scalar>(
    gamma1: &SymTensor3<S>,
    gamma2: &SymTensor3<S>,
    which: Covariant,
) -> Result<RecoveryReport<f64>> {
    if gamma1.n() != gamma2.n() {
        return Err(Error::DimensionMismatch {
            expected: gamma1.n(),
            got: gamma2.n(),
        });
    }
    let (g1, g2) = (gamma1.to_f64(), gamma2.to_f64());
    let (m1, m2) = (which.matrix(&g1), which.matrix(&g2));
    let (e1, e2) = (sym_eigen(&m1), sym_eigen(&m2));
    if !e1.is_distinct(m1.frobenius()) || !e2.is_distinct(m2.frobenius()) {
        return Err(Error::DegenerateEigenvalues);
    }
    let n = g1.n();
    let bound = accept_bound(g1.frobenius());
    let mut branches = Vec::new();
    let mut best = f64::INFINITY;
    for eps in sign_vectors(n) {
        let rho = aligned_map(&e1, &e2, &eps);
        let Ok(map) = OrthogonalMap::new(rho) else {
            continue;
        };
        let image = act_matrix(map.matrix(), &g1)?;
        let residual = image.sub(&g2).max_abs();
        best = best.min(residual);
        if residual <= bound {
            branches.push(Branch {
                map,
                reduced: image,
                residual,
            });
        }
    }
    let residual = if branches.is_empty() {
        best
    } else {
        branches.iter().map(|b| b.residual).fold(0.0, f64::max)
    };
    Ok(RecoveryReport {
        branches,
        reduced: g2,
        residual,
        branch_count: 1 << n,
    })
}

/// Maps `ρ_ε = Σ ε_i e_i u_iᵗ` diagonalizing `Γ*²`, kept when `act(ρ, Γ)`
/// has the fully decoupled pattern.
pub fn recover_fd_via_covariant<S: Scalar>(gamma: &SymTensor3<S>) -> Result<RecoveryReport<f64>> {
    let g = gamma.to_f64();
    let n = g.n();
    let m = star2(&g);
    let e = sym_eigen(&m);
    if !e.is_distinct(m.frobenius()) {
        return Err(Error::DegenerateEigenvalues);
    }
    let axes = SymEigen {
        values: e.values.clone(),
        vectors: Mat::identity(n),
    };
    let bound = accept_bound(g.frobenius());
    let mut branches = Vec::new();
    let mut best = f64::INFINITY;
    let mut best_image = None;
    for eps in sign_vectors(n) {
        let Ok(map) = OrthogonalMap::new(aligned_map(&e, &axes, &eps)) else {
            continue;
        };
        let image = act_matrix(map.matrix(), &g)?;
        let residual = image.off_pattern_max(Pattern::Full);
        if residual < best {
            best = residual;
            best_image = Some(image.clone());
        }
        if residual <= bound {
            branches.push(Branch {
                map,
                reduced: image.project(Pattern::Full),
                residual,
            });
        }
    }
    let (reduced, residual) = match branches.first() {
        Some(b) => (
            b.reduced.clone(),
            branches.iter().map(|b| b.residual).fold(0.0, f64::max),
        ),
        None => (best_image.unwrap_or(g), best),
    };
    Ok(RecoveryReport {
        branches,
        reduced,
        residual,
        branch_count: 1 << n,
    })
}

/// Map carrying an accepted partially decoupleable n = 3 tensor to the
/// canonical form with the given parameters.
pub fn recover_pd_rotation<S: Scalar>(
    gamma: &SymTensor3<S>,
    params: &PdParams<S>,
) -> Result<RecoveryReport<f64>> {
    require_n(gamma, 3)?;
    let target = make_pd_canonical(&params.to_f64());
    let report = recover_rotation_via_covariant(&gamma.to_f64(), &target, Covariant::GammaStar2)?;
    if report.branches.is_empty() {
        return Err(Error::NoCandidateMatches);
    }
    Ok(report)
}

/// Generator `L` of the rotation flow on `(a0, a1, a2, a3)`:
/// `d/dθ a(σ_θ∘Γ) = L a`.
pub fn ode_generator() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 3.0, 0.0, 0.0, //
            -1.0, 0.0, 2.0, 0.0, //
            0.0, -2.0, 0.0, 1.0, //
            0.0, 0.0, -3.0, 0.0,
        ],
    )
}

/// Rows are left eigenvectors of [`ode_generator`]: `E L = diag(ode_rates()) E`.
pub fn ode_eigenbasis() -> DMatrix<Complex<f64>> {
    let c = |re: f64, im: f64| Complex::new(re, im);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c(1.0, 0.0),
            c(0.0, -3.0),
            c(-3.0, 0.0),
            c(0.0, 1.0),
            c(-1.0, 0.0),
            c(0.0, -3.0),
            c(3.0, 0.0),
            c(0.0, 1.0),
            c(-1.0, 0.0),
            c(0.0, 1.0),
            c(-1.0, 0.0),
            c(0.0, 1.0),
            c(1.0, 0.0),
            c(0.0, 1.0),
            c(1.0, 0.0),
            c(0.0, 1.0),
        ],
    )
}

/// Growth rates `λ_j` with `v_j(θ) = e^{λ_j θ} v_j(0)`, `v = E a`.
pub fn ode_rates() -> [Complex<f64>; 4] {
    [
        Complex::new(0.0, 3.0),
        Complex::new(0.0, -3.0),
        Complex::new(0.0, 1.0),
        Complex::new(0.0, -1.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitlab::{haar_orthogonal, make_fd};
    use crate::scalar::{ratio, Rational};
    use std::collections::HashSet;

    fn r(k: i64) -> Rational {
        ratio(k, 1)
    }

    fn params(a: i64, g1: i64, g2: i64, b3: i64) -> PdParams<Rational> {
        PdParams {
            alpha: r(a),
            gamma1: r(g1),
            gamma2: r(g2),
            beta3: r(b3),
        }
    }

    #[test]
    fn forward_q_values() {
        assert_eq!(params(1, 0, 0, 2).forward_q(), [r(4), r(16), r(20), r(12)]);
        assert_eq!(params(2, 1, 1, 3).forward_q(), [r(9), r(64), r(656), r(56)]);
    }

    #[test]
    fn params_round_trip() {
        let p = recover_pd_params(&[r(9), r(64), r(656), r(56)]).unwrap();
        assert_eq!(p, params(2, 1, 1, 3));
        for (a, g1, g2, b3) in [(3, -2, 5, 1), (1, 4, 0, 2), (2, 0, 3, 7)] {
            let q = params(a, g1, g2, b3).forward_q();
            let back = recover_pd_params(&q).unwrap();
            assert_eq!(back.forward_q(), q);
            assert_eq!(back.alpha, r(a));
            assert_eq!(back.gamma2, r(g2));
        }
    }

    #[test]
    fn unsolvable_reasons() {
        assert_eq!(
            recover_pd_params(&[ratio(-332, 15), r(1), r(1), r(1)]),
            Err(Error::Unsolvable(SolvabilityFailure::Q1Negative))
        );
        assert_eq!(
            recover_pd_params(&[r(1), r(-1), r(1), r(1)]),
            Err(Error::Unsolvable(SolvabilityFailure::Q2Negative))
        );
        assert_eq!(
            recover_pd_params(&[r(1), r(0), r(5), r(2)]),
            Err(Error::Unsolvable(SolvabilityFailure::DegenerateBranch))
        );
    }

    #[test]
    fn continuum_convention() {
        let p = recover_pd_params(&[r(4), r(0), r(4), r(4)]).unwrap();
        assert_eq!(p, params(0, 1, 0, 2));
    }

    #[test]
    fn n2_identity_branch() {
        let g = SymTensor3::from_n2_params([r(1), r(0), r(0), r(2)]);
        let rep = recover_n2(&g).unwrap();
        assert_eq!(rep.branches.len(), 8);
        assert_eq!(rep.branches[0].map, OrthogonalMap::identity(2));
        assert_eq!(rep.branches[0].reduced, g);
        let distinct: HashSet<String> = rep.branches.iter().map(|b| format!("{:?}", b.reduced)).collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn n2_recovers_rational_rotation() {
        let seed = SymTensor3::from_n2_params([r(1), r(0), r(0), r(2)]);
        let sigma = OrthogonalMap::rotation2(ratio(3, 5), ratio(4, 5)).unwrap();
        let g = act(&sigma, &seed).unwrap();
        let rep = recover_n2(&g).unwrap();
        assert_eq!(rep.residual, 0.0);
        assert!(rep.maps().any(|m| *m == sigma.inverse()));
    }

    #[test]
    fn n2_float_angle() {
        let seed = SymTensor3::from_n2_params([1.0, 0.0, 0.0, 2.0]);
        let phi: f64 = 0.7;
        let g = act(&OrthogonalMap::rotation2_angle(phi), &seed).unwrap();
        let rep = recover_n2(&g).unwrap();
        let hit = rep.maps().filter(|m| m.det_sign() == 1).any(|m| {
            let theta = m.matrix().get(1, 0).atan2(*m.matrix().get(0, 0));
            let d = (theta + phi).rem_euclid(std::f64::consts::FRAC_PI_2);
            d < 1e-9 || std::f64::consts::FRAC_PI_2 - d < 1e-9
        });
        assert!(hit);
    }

    #[test]
    fn n2_errors() {
        assert_eq!(recover_n2(&SymTensor3::<Rational>::zeros(2)).unwrap_err(), Error::ZeroTensor);
        let g = SymTensor3::from_n2_params([r(0), r(0), r(1), r(0)]);
        assert_eq!(recover_n2(&g).unwrap_err(), Error::NotDecoupleable);
    }

    #[test]
    fn covariant_recovery_finds_map() {
        let seed = make_fd(&[1.0, -2.0, 3.0]).add(&SymTensor3::from_fn(3, |t| 0.1 * (t[0] + 2 * t[1] + t[2]) as f64));
        let sigma = haar_orthogonal(3, 9);
        let g2 = act(&sigma, &seed).unwrap();
        let rep = recover_rotation_via_covariant(&seed, &g2, Covariant::GammaStar2).unwrap();
        assert!(rep.maps().any(|m| m.matrix().max_abs_diff(sigma.matrix()) < 1e-8));
        let same = recover_rotation_via_covariant(&seed, &seed, Covariant::GammaStar2).unwrap();
        assert!(same.maps().any(|m| m.matrix().max_abs_diff(&Mat::identity(3)) < 1e-12));
    }

    #[test]
    fn covariant_recovery_degenerate() {
        // x₁³ - x₂³
        let g = make_fd(&[1.0, -1.0]);
        assert_eq!(
            recover_rotation_via_covariant(&g, &g, Covariant::GammaStar2).unwrap_err(),
            Error::DegenerateEigenvalues
        );
    }

    #[test]
    fn pd_rotation_round_trip() {
        let p = params(2, 0, 1, 3);
        let seed = make_pd_canonical(&p);
        let g = act(&haar_orthogonal(3, 4), &seed.to_f64()).unwrap();
        let rep = recover_pd_rotation(&g, &p.to_f64()).unwrap();
        assert!(rep.residual <= 1e-8 * (1.0 + g.frobenius()));
        let id = recover_pd_rotation(&seed, &p).unwrap();
        assert!(id.maps().any(|m| m.matrix().max_abs_diff(&Mat::identity(3)) < 1e-12));
    }

    #[test]
    fn pd_rotation_degenerate() {
        // R*² = diag(2·5, 2, 9)/... choose β₃² equal to a block eigenvalue
        let p = params(1, 0, 0, 1);
        let rs = crate::orbitlab::canonical_star2(&p);
        assert_eq!(*rs.get(1, 1), r(2));
        let p = PdParams { beta3: 2f64.sqrt(), ..p.to_f64() };
        let g = make_pd_canonical(&p);
        assert_eq!(recover_pd_rotation(&g, &p).unwrap_err(), Error::DegenerateEigenvalues);
    }

    #[test]
    fn ode_facts() {
        let l = ode_generator();
        let e = ode_eigenbasis();
        let lc = l.map(|x| Complex::new(x, 0.0));
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&ode_rates()));
        let lhs = &e * &lc;
        let rhs = &lam * &e;
        assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));
        let mut ev: Vec<f64> = l.complex_eigenvalues().iter().map(|z| z.im).collect();
        ev.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(l.complex_eigenvalues().iter().all(|z| z.re.abs() < 1e-12));
    }
}
