//! Membership classifiers for fully and partially decoupleable tensors.

use std::fmt;

use crate::covariants::{star2, u_dot_gamma};
use crate::error::{Error, Result};
use crate::invariants::{oa_basis, partial_domain, qtilde_full, qtilde_partial_from};
use crate::linalg::sym_eigen;
use crate::ortho::OrthogonalMap;
use crate::recover::{
    recover_fd_via_covariant, recover_n2, recover_pd_params, recover_pd_rotation, solvability, PdParams,
    RECOVERY_TOL,
};
use crate::relations::{evaluate_table, overall, RelationResidual, FULL, PARTIAL};
use crate::scalar::{int, Check, Scalar, Tolerance};
use crate::tensor::{require_n, Pattern, SymTensor3};

/// Why no hard verdict was given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndeterminateReason {
    DegenerateEigenvalues,
    ToleranceBoundary,
    DomainExcluded,
}

impl IndeterminateReason {
    pub fn as_str(self) -> &'static str {
        match self {
            IndeterminateReason::DegenerateEigenvalues => "DegenerateEigenvalues",
            IndeterminateReason::ToleranceBoundary => "ToleranceBoundary",
            IndeterminateReason::DomainExcluded => "DomainExcluded",
        }
    }
}

impl fmt::Display for IndeterminateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `|β_i|` in ascending order; signs belong to the recovered map.
    FullyDecoupleable { betas: Vec<f64> },
    PartiallyNotFully { params: PdParams<f64> },
    NotDecoupleable,
    Indeterminate { reason: IndeterminateReason },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::FullyDecoupleable { .. } => "FullyDecoupleable",
            Verdict::PartiallyNotFully { .. } => "PartiallyNotFully",
            Verdict::NotDecoupleable => "NotDecoupleable",
            Verdict::Indeterminate { .. } => "Indeterminate",
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::FullyDecoupleable { .. } | Verdict::PartiallyNotFully { .. })
    }

    fn from_check(check: Check) -> Option<Verdict> {
        match check {
            Check::Pass => None,
            Check::Boundary => Some(Verdict::Indeterminate {
                reason: IndeterminateReason::ToleranceBoundary,
            }),
            Check::Fail => Some(Verdict::NotDecoupleable),
        }
    }
}

/// A named check and its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification<S> {
    pub verdict: Verdict,
    pub residuals: Vec<RelationResidual<S>>,
    pub certificates: Vec<Certificate>,
    /// A verified map to the reduced or canonical form, when one was found.
    pub map: Option<OrthogonalMap<f64>>,
    /// Canonical parameters in the input field when they are representable there.
    pub exact_params: Option<PdParams<S>>,
    /// `q̃` values the relations were evaluated with.
    pub qtilde: Vec<S>,
}

impl<S: Scalar> Classification<S> {
    fn new(verdict: Verdict) -> Self {
        Self {
            verdict,
            residuals: Vec::new(),
            certificates: Vec::new(),
            map: None,
            exact_params: None,
            qtilde: Vec::new(),
        }
    }

    /// Largest normalized residual in the table.
    pub fn max_normalized(&self) -> f64 {
        self.residuals.iter().map(|r| r.normalized).fold(0.0, f64::max)
    }
}

fn abs_sorted(mut v: Vec<f64>) -> Vec<f64> {
    for x in &mut v {
        *x = x.abs();
    }
    v.sort_by(f64::total_cmp);
    v
}

fn n2_residual<S: Scalar>(name: &'static str, residual: S, scale: f64, tol: Tolerance) -> RelationResidual<S> {
    let check = tol.judge(&residual, scale);
    RelationResidual {
        name,
        degree: 2,
        normalized: crate::scalar::normalized(&residual, scale),
        residual,
        check,
    }
}

/// n = 2: fully (equivalently partially) decoupleable iff
/// `a2(a2 - a0) = a1(a3 - a1)`, cross-checked against `I1 = I2`.
pub fn classify_n2<S: Scalar>(gamma: &SymTensor3<S>, tol: Tolerance) -> Result<Classification<S>> {
    let [a0, a1, a2, a3] = gamma.n2_params()?;
    let f = |x: S| x.abs().to_f64();
    let sq = |x: &S| x.clone() * x.clone();
    let rel = a2.clone() * (a2.clone() - a0.clone()) - a1.clone() * (a3.clone() - a1.clone());
    let rel_scale = f(sq(&a2)) + f(a2.clone() * a0.clone()) + f(a1.clone() * a3.clone()) + f(sq(&a1));
    let i1 = sq(&(a1.clone() + a3.clone())) + sq(&(a0.clone() + a2.clone()));
    let i2 = sq(&a0) + int::<S>(3) * sq(&a1) + int::<S>(3) * sq(&a2) + sq(&a3);
    let i_scale = f(i1.clone()) + f(i2.clone());
    let rows = vec![
        n2_residual("a2(a2-a0)=a1(a3-a1)", rel, rel_scale, tol),
        n2_residual("I1=I2", i1 - i2, i_scale, tol),
    ];
    let agree = rows[0].check == rows[1].check;
    let mut out = Classification::new(Verdict::NotDecoupleable);
    out.certificates.push(Certificate::new(
        "criterion_forms_agree",
        agree,
        format!("{:?} vs {:?}", rows[0].check, rows[1].check),
    ));
    let check = if agree { overall(&rows) } else { Check::Boundary };
    out.residuals = rows;
    if let Some(v) = Verdict::from_check(check) {
        out.verdict = v;
        return Ok(out);
    }
    if gamma.is_zero() {
        out.verdict = Verdict::FullyDecoupleable { betas: vec![0.0; 2] };
        out.map = Some(OrthogonalMap::identity(2));
        return Ok(out);
    }
    let report = match recover_n2(gamma) {
        Ok(r) => Ok(r.branches.into_iter().next().map(|b| (b.map.to_f64(), b.reduced.to_f64()))),
        Err(Error::NotRepresentable(_)) => recover_n2(&gamma.to_f64()).map(|r| {
            r.branches.into_iter().next().map(|b| (b.map, b.reduced))
        }),
        Err(e) => Err(e),
    };
    match report {
        Ok(Some((map, reduced))) => {
            let [b2, _, _, b1] = reduced.n2_params()?;
            out.certificates.push(Certificate::new("recovered_map", true, "8 branches verified"));
            out.verdict = Verdict::FullyDecoupleable {
                betas: abs_sorted(vec![b1, b2]),
            };
            out.map = Some(map);
        }
        Ok(None) | Err(_) => {
            out.certificates.push(Certificate::new("recovered_map", false, "recovery did not verify"));
            out.verdict = Verdict::Indeterminate {
                reason: IndeterminateReason::ToleranceBoundary,
            };
        }
    }
    Ok(out)
}

/// n = 3: fully decoupleable iff the 13 relations between the invariants
/// and the characteristic polynomial of `Γ*²` hold.
pub fn classify_fd_n3<S: Scalar>(gamma: &SymTensor3<S>, tol: Tolerance) -> Result<Classification<S>> {
    require_n(gamma, 3)?;
    let inv = oa_basis(gamma)?;
    let q = qtilde_full(gamma);
    let rows = evaluate_table(FULL, &inv, &q, tol);
    let check = overall(&rows);
    let mut out = Classification::new(Verdict::NotDecoupleable);
    out.residuals = rows;
    out.qtilde = q;
    let quick = fd_necessary_quick(gamma, tol);
    out.certificates.push(Certificate::new(
        "gamma_star2_eq_u_dot_gamma",
        quick,
        "necessary condition",
    ));
    if let Some(v) = Verdict::from_check(check) {
        out.verdict = v;
        return Ok(out);
    }
    let m = star2(&gamma.to_f64());
    let betas = sym_eigen(&m).values.into_iter().map(|z| z.max(0.0).sqrt()).collect();
    out.verdict = Verdict::FullyDecoupleable { betas };
    if gamma.is_zero() {
        out.map = Some(OrthogonalMap::identity(3));
    } else if let Ok(rep) = recover_fd_via_covariant(gamma) {
        out.map = rep.branches.into_iter().next().map(|b| b.map);
    }
    out.certificates.push(Certificate::new(
        "recovered_map",
        out.map.is_some(),
        if out.map.is_some() { "verified" } else { "not attempted or degenerate spectrum" },
    ));
    Ok(out)
}

/// n = 3: partially but not fully decoupleable iff `H2 != 10 J2`, the nine
/// relations hold, and the canonical parameters are real.
pub fn classify_pd_not_fd_n3<S: Scalar>(gamma: &SymTensor3<S>, tol: Tolerance) -> Result<Classification<S>> {
    require_n(gamma, 3)?;
    let inv = oa_basis(gamma)?;
    let mut out = Classification::new(Verdict::NotDecoupleable);
    match partial_domain(&inv, tol) {
        Check::Pass => {}
        c => {
            out.certificates.push(Certificate::new("domain_h2_ne_10j2", false, "H2 = 10 J2"));
            out.verdict = Verdict::Indeterminate {
                reason: if c == Check::Fail {
                    IndeterminateReason::DomainExcluded
                } else {
                    IndeterminateReason::ToleranceBoundary
                },
            };
            return Ok(out);
        }
    }
    out.certificates.push(Certificate::new("domain_h2_ne_10j2", true, "H2 != 10 J2"));
    let q = qtilde_partial_from(&inv);
    out.residuals = evaluate_table(PARTIAL, &inv, &q, tol);
    out.qtilde = q.to_vec();
    if let Some(v) = Verdict::from_check(overall(&out.residuals)) {
        out.verdict = v;
        return Ok(out);
    }
    let (check, failure) = solvability(&q, tol);
    out.certificates.push(Certificate::new(
        "solvability",
        check == Check::Pass,
        failure.map_or_else(|| "real canonical parameters exist".to_string(), |f| f.to_string()),
    ));
    if let Some(v) = Verdict::from_check(check) {
        out.verdict = v;
        return Ok(out);
    }
    let params = match recover_pd_params(&q) {
        Ok(p) => {
            let f = p.to_f64();
            out.exact_params = Some(p);
            f
        }
        Err(Error::NotRepresentable(_)) => recover_pd_params(&q.clone().map(|x| x.to_f64()))?,
        Err(e) => return Err(e),
    };
    match recover_pd_rotation(&gamma.to_f64(), &params) {
        Ok(rep) => {
            out.certificates.push(Certificate::new("recovered_map", true, "verified"));
            out.map = rep.branches.into_iter().next().map(|b| b.map);
        }
        Err(e) => out.certificates.push(Certificate::new("recovered_map", false, e.to_string())),
    }
    out.verdict = Verdict::PartiallyNotFully { params };
    Ok(out)
}

/// Any n: decide full decoupleability by aligning with the eigenvectors of
/// `Γ*²`; complete when the eigenvalues are pairwise distinct.
pub fn classify_fd_generic<S: Scalar>(gamma: &SymTensor3<S>, _tol: Tolerance) -> Result<Classification<S>> {
    let n = gamma.n();
    if n < 2 {
        return Err(Error::InvalidArgument("n >= 2 required".into()));
    }
    if gamma.is_zero() {
        let mut out = Classification::new(Verdict::FullyDecoupleable { betas: vec![0.0; n] });
        out.map = Some(OrthogonalMap::identity(n));
        return Ok(out);
    }
    let rep = match recover_fd_via_covariant(gamma) {
        Ok(r) => r,
        Err(Error::DegenerateEigenvalues) => {
            let mut out = Classification::new(Verdict::Indeterminate {
                reason: IndeterminateReason::DegenerateEigenvalues,
            });
            out.certificates.push(Certificate::new("distinct_eigenvalues", false, "repeated eigenvalues of Gamma*2"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let bound = RECOVERY_TOL * (1.0 + gamma.frobenius());
    let mut out = Classification::new(Verdict::NotDecoupleable);
    out.certificates.push(Certificate::new("distinct_eigenvalues", true, ""));
    out.certificates.push(Certificate::new(
        "candidate_search",
        !rep.branches.is_empty(),
        format!(
            "{} of {} candidates verified, residual {:e}",
            rep.branches.len(),
            rep.branch_count,
            rep.residual
        ),
    ));
    if let Some(b) = rep.branches.into_iter().next() {
        let betas = (0..n).map(|i| *b.reduced.get(i, i, i)).collect();
        out.verdict = Verdict::FullyDecoupleable { betas: abs_sorted(betas) };
        out.map = Some(b.map);
    } else if rep.residual <= 10.0 * bound {
        out.verdict = Verdict::Indeterminate {
            reason: IndeterminateReason::ToleranceBoundary,
        };
    }
    Ok(out)
}

/// Necessary test for full decoupleability: `Γ*² = u·Γ`.
pub fn fd_necessary_quick<S: Scalar>(gamma: &SymTensor3<S>, tol: Tolerance) -> bool {
    let a = star2(gamma);
    let b = u_dot_gamma(gamma);
    if S::EXACT {
        return a == b;
    }
    let scale = gamma.frobenius().powi(2);
    tol.judge_normalized(if scale > 0.0 { a.max_abs_diff(&b) / scale } else { 0.0 }) != Check::Fail
}

/// Does `gamma` already have the reduced pattern for the verdict?
pub fn fits_verdict_pattern<S: Scalar>(gamma: &SymTensor3<S>, verdict: &Verdict) -> bool {
    match verdict {
        Verdict::FullyDecoupleable { .. } => gamma.fits_pattern(Pattern::Full),
        Verdict::PartiallyNotFully { .. } => gamma.fits_pattern(Pattern::Partial),
        _ => false,
    }
}
