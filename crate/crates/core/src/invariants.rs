//! Polynomial invariants: the two n = 2 integrity bases, the thirteen-element
//! basis for n = 3, and the derived `q̃` quantities.

use crate::covariants::{bilinear, contract1, contract3, covariants, dot, CovariantSuite};
use crate::error::{Error, Result};
use crate::scalar::{int, Check, Scalar, Tolerance};
use crate::tensor::{require_n, SymTensor3};

/// Invariants of an n = 2 tensor.
///
/// `(j2, h2, l4, m4)` generate the SO(2) invariants; `(i1, i2, i3)` generate
/// the O(2) invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSetN2<S> {
    pub j2: S,
    pub h2: S,
    pub l4: S,
    pub m4: S,
    /// `|u|²`.
    pub i1: S,
    /// `tr Γ*²`.
    pub i2: S,
    /// `det Γ*²`.
    pub i3: S,
}

impl<S: Scalar> InvariantSetN2<S> {
    /// `-h2 j2³ + 4 l4² + 4 m4²`, identically zero.
    pub fn syzygy(&self) -> S {
        let j3 = self.j2.clone() * self.j2.clone() * self.j2.clone();
        -(self.h2.clone() * j3)
            + int::<S>(4) * self.l4.clone() * self.l4.clone()
            + int::<S>(4) * self.m4.clone() * self.m4.clone()
    }

    /// Residuals of `i2 = (h2 + 12 j2)/16` and
    /// `i3 = (h2² + 8 h2 j2 + 80 j2² - 128 l4)/1024`.
    pub fn cross_basis_residuals(&self) -> [S; 2] {
        let (h, j) = (self.h2.clone(), self.j2.clone());
        let r2 = self.i2.clone() - (h.clone() + int::<S>(12) * j.clone()) / int::<S>(16);
        let r3 = self.i3.clone()
            - (h.clone() * h.clone() + int::<S>(8) * h * j.clone() + int::<S>(80) * j.clone() * j
                - int::<S>(128) * self.l4.clone())
                / int::<S>(1024);
        [r2, r3]
    }

    pub fn so2(&self) -> [(&'static str, S); 4] {
        [
            ("j2", self.j2.clone()),
            ("h2", self.h2.clone()),
            ("l4", self.l4.clone()),
            ("m4", self.m4.clone()),
        ]
    }

    pub fn o2(&self) -> [(&'static str, S); 3] {
        [
            ("i1", self.i1.clone()),
            ("i2", self.i2.clone()),
            ("i3", self.i3.clone()),
        ]
    }
}

pub fn so2_basis<S: Scalar>(gamma: &SymTensor3<S>) -> Result<InvariantSetN2<S>> {
    require_n(gamma, 2)?;
    let c = covariants(gamma);
    let j2 = dot(&c.u, &c.u);
    let m4 = c.u[0].clone() * c.w[1].clone() - c.u[1].clone() * c.w[0].clone();
    Ok(InvariantSetN2 {
        h2: c.d.frobenius_sq(),
        l4: contract3(&c.d, &c.u),
        m4,
        i1: j2.clone(),
        i2: c.gamma_star2.trace(),
        i3: c.gamma_star2.det(),
        j2,
    })
}

/// The thirteen n = 3 invariants, built from the trace-free part `D`
/// (without the `1/(n+2)` factor).
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSetN3<S> {
    pub h2: S,
    pub j2: S,
    pub h4: S,
    pub j4: S,
    pub k4: S,
    pub l4: S,
    pub h6: S,
    pub j6: S,
    pub k6: S,
    pub l6: S,
    pub m6: S,
    pub h8: S,
    pub h10: S,
}

/// Names in report order, paired with polynomial degree.
pub const OA_NAMES: [(&str, u32); 13] = [
    ("H2", 2),
    ("J2", 2),
    ("H4", 4),
    ("J4", 4),
    ("K4", 4),
    ("L4", 4),
    ("H6", 6),
    ("J6", 6),
    ("K6", 6),
    ("L6", 6),
    ("M6", 6),
    ("H8", 8),
    ("H10", 10),
];

impl<S: Scalar> InvariantSetN3<S> {
    pub fn get(&self, name: &str) -> Option<&S> {
        Some(match name {
            "H2" => &self.h2,
            "J2" => &self.j2,
            "H4" => &self.h4,
            "J4" => &self.j4,
            "K4" => &self.k4,
            "L4" => &self.l4,
            "H6" => &self.h6,
            "J6" => &self.j6,
            "K6" => &self.k6,
            "L6" => &self.l6,
            "M6" => &self.m6,
            "H8" => &self.h8,
            "H10" => &self.h10,
            _ => return None,
        })
    }

    pub fn values(&self) -> Vec<(&'static str, S)> {
        OA_NAMES
            .iter()
            .map(|&(name, _)| (name, self.get(name).expect("known name").clone()))
            .collect()
    }
}

pub fn oa_basis<S: Scalar>(gamma: &SymTensor3<S>) -> Result<InvariantSetN3<S>> {
    require_n(gamma, 3)?;
    Ok(oa_from_covariants(&covariants(gamma)))
}

pub fn oa_from_covariants<S: Scalar>(c: &CovariantSuite<S>) -> InvariantSetN3<S> {
    let m = &c.d_star2;
    let n = m.n();
    let du = contract1(&c.d, &c.u);
    let mut h4 = S::zero();
    let mut k4 = S::zero();
    for k in 0..n {
        for l in 0..n {
            h4 = h4 + m.get(k, l).clone() * m.get(k, l).clone();
            k4 = k4 + m.get(k, l).clone() * du.get(k, l).clone();
        }
    }
    let mv = m.mul_vec(&c.v);
    InvariantSetN3 {
        h2: c.d.frobenius_sq(),
        j2: dot(&c.u, &c.u),
        h4,
        j4: bilinear(&c.u, m, &c.u),
        k4,
        l4: contract3(&c.d, &c.u),
        h6: dot(&c.v, &c.v),
        j6: bilinear(&c.u, m, &c.w),
        k6: dot(&c.v, &c.w),
        l6: bilinear(&c.u, m, &c.v),
        m6: dot(&c.w, &c.w),
        h8: bilinear(&c.u, m, &mv),
        h10: contract3(&c.d, &c.v),
    }
}

/// Elementary symmetric functions of the eigenvalues of `Γ*²`
/// (trace, sum of principal 2x2 minors, ..., determinant); any n.
pub fn qtilde_full<S: Scalar>(gamma: &SymTensor3<S>) -> Vec<S> {
    crate::covariants::star2(gamma).char_poly_elementary()
}

/// Where `H2 - 10 J2` sits relative to zero: `Pass` is safely inside the
/// domain of the partial test, `Fail` is on the excluded set.
pub fn partial_domain<S: Scalar>(inv: &InvariantSetN3<S>, tol: Tolerance) -> Check {
    let gap = inv.h2.clone() - int::<S>(10) * inv.j2.clone();
    if S::EXACT {
        return if gap.is_zero() { Check::Fail } else { Check::Pass };
    }
    let scale = inv.h2.abs().to_f64() + 10.0 * inv.j2.abs().to_f64();
    if scale == 0.0 {
        return Check::Fail;
    }
    match tol.judge_normalized(gap.abs().to_f64() / scale) {
        Check::Pass => Check::Fail,
        Check::Boundary => Check::Boundary,
        Check::Fail => Check::Pass,
    }
}

/// `q̃1..q̃4` from `(H2, H4, J2, L4)`; caller guarantees `H2 != 10 J2`.
pub fn qtilde_partial_from<S: Scalar>(inv: &InvariantSetN3<S>) -> [S; 4] {
    let (h2, h4, j2, l4) = (inv.h2.clone(), inv.h4.clone(), inv.j2.clone(), inv.l4.clone());
    let i = int::<S>;
    let q1 = (h2.clone() * h2.clone() - i(2) * h4.clone() - i(3) * h2.clone() * j2.clone()
        + i(6) * j2.clone() * j2.clone()
        + i(6) * l4.clone())
        / (i(9) * (h2.clone() - i(10) * j2.clone()));
    let q2 = j2.clone() - q1.clone();
    let q3 = (-i(8) * h2.clone() * h2.clone() + i(25) * h4 + i(60) * h2.clone() * j2.clone()
        + i(1500) * j2.clone() * j2.clone()
        - i(1200) * l4
        - i(11250) * j2.clone() * q1.clone()
        + i(11250) * q1.clone() * q1.clone())
        / i(11250);
    let q4 = (h2 + i(15) * j2 - i(25) * q1.clone()) / i(25);
    [q1, q2, q3, q4]
}

/// `q̃1..q̃4` of the partial test; `DomainExcluded` when `H2 = 10 J2`
/// (or within the tolerance band of it in float mode).
pub fn qtilde_partial<S: Scalar>(gamma: &SymTensor3<S>) -> Result<[S; 4]> {
    let inv = oa_basis(gamma)?;
    match partial_domain(&inv, Tolerance::default()) {
        Check::Pass => Ok(qtilde_partial_from(&inv)),
        _ => Err(Error::DomainExcluded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use crate::tensor::{tensor_from_cubic, Cubic};

    fn r(k: i64) -> Rational {
        ratio(k, 1)
    }

    fn dense_sample() -> SymTensor3<Rational> {
        let f: Cubic<Rational> = [
            (vec![3, 0, 0], r(2)),
            (vec![2, 1, 0], r(3)),
            (vec![0, 3, 0], r(3)),
            (vec![1, 1, 1], r(-12)),
            (vec![0, 0, 3], r(6)),
        ]
        .into_iter()
        .collect();
        tensor_from_cubic(&f, 3).unwrap()
    }

    fn n2(a: [i64; 4]) -> SymTensor3<Rational> {
        SymTensor3::from_n2_params(a.map(r))
    }

    fn diag(b: &[i64]) -> SymTensor3<Rational> {
        let mut g = SymTensor3::zeros(b.len());
        for (i, &x) in b.iter().enumerate() {
            g.set(i, i, i, r(x));
        }
        g
    }

    #[test]
    fn so2_single_cube() {
        let inv = so2_basis(&n2([0, 0, 0, 1])).unwrap();
        assert_eq!([inv.j2.clone(), inv.h2.clone(), inv.l4.clone(), inv.m4.clone()], [r(1), r(4), r(1), r(0)]);
        assert_eq!(inv.syzygy(), r(0));
        let z = so2_basis(&SymTensor3::<Rational>::zeros(2)).unwrap();
        assert!(z.so2().iter().all(|(_, v)| *v == r(0)));
    }

    // Expanded polynomials in (a0, a1, a2, a3), written out independently.
    #[test]
    fn so2_closed_forms() {
        for a in [[1, 2, 3, 4], [-2, 5, 0, 1], [3, -1, 4, -1]] {
            let inv = so2_basis(&n2(a)).unwrap();
            let [a0, a1, a2, a3] = a.map(r);
            let j2 = (a1.clone() + a3.clone()).pow(2) + (a0.clone() + a2.clone()).pow(2);
            assert_eq!(inv.j2, j2);
            let h2 = r(4)
                * ((a0.clone() - r(3) * a2.clone()).pow(2) + (a3.clone() - r(3) * a1.clone()).pow(2));
            assert_eq!(inv.h2, h2);
            assert_eq!(inv.syzygy(), r(0));
            assert_eq!(inv.cross_basis_residuals(), [r(0), r(0)]);
        }
    }

    #[test]
    fn reflection_flips_m4() {
        let g = n2([1, 2, -3, 5]);
        let swapped = n2([5, -3, 2, 1]);
        let (a, b) = (so2_basis(&g).unwrap(), so2_basis(&swapped).unwrap());
        assert_eq!((a.j2.clone(), a.h2.clone(), a.l4.clone()), (b.j2, b.h2, b.l4));
        assert_eq!(a.m4, -b.m4);
        assert_ne!(a.m4, r(0));
    }

    #[test]
    fn oa_dense_sample() {
        let inv = oa_basis(&dense_sample()).unwrap();
        let expect = [
            ("H2", 1060),
            ("J2", 56),
            ("H4", 518384),
            ("J4", 30216),
            ("K4", -37712),
            ("L4", -4528),
            ("H6", 25866624),
            ("J6", -2890608),
            ("K6", 3485856),
            ("L6", -20516032),
            ("M6", 917264),
            ("H8", -11635543552),
            ("H10", 1921761101824),
        ];
        for (name, v) in expect {
            assert_eq!(*inv.get(name).unwrap(), r(v), "{name}");
        }
    }

    #[test]
    fn oa_single_axis() {
        let inv = oa_basis(&diag(&[1, 0, 0])).unwrap();
        let got: Vec<Rational> = ["H2", "J2", "J4", "K4", "L4", "H4"]
            .iter()
            .map(|n| inv.get(n).unwrap().clone())
            .collect();
        assert_eq!(got, [10, 1, 6, 8, 2, 44].map(r).to_vec());
        assert!(oa_basis(&SymTensor3::<Rational>::zeros(3))
            .unwrap()
            .values()
            .iter()
            .all(|(_, v)| *v == r(0)));
    }

    #[test]
    fn oa_requires_n3() {
        assert!(matches!(
            oa_basis(&SymTensor3::<Rational>::zeros(2)),
            Err(Error::WrongDimension { required: 3, got: 2 })
        ));
    }

    #[test]
    fn qtilde_full_diag() {
        assert_eq!(qtilde_full(&diag(&[1, 2, 3])), vec![r(14), r(49), r(36)]);
        assert_eq!(qtilde_full(&SymTensor3::<Rational>::zeros(3)), vec![r(0); 3]);
    }

    #[test]
    fn qtilde_partial_dense_sample() {
        let q = qtilde_partial(&dense_sample()).unwrap();
        assert_eq!(q[0], ratio(-332, 15));
    }

    #[test]
    fn qtilde_partial_canonical() {
        // (3α-γ₁)x₁³ + 3γ₂x₁²x₂ + 3(α+γ₁)x₁x₂² - γ₂x₂³ + β₃x₃³ at (1, 0, 0, 2)
        let mut g = SymTensor3::<Rational>::zeros(3);
        g.set(0, 0, 0, r(3));
        g.set(0, 1, 1, r(1));
        g.set(2, 2, 2, r(2));
        assert_eq!(qtilde_partial(&g).unwrap(), [r(4), r(16), r(20), r(12)]);
    }

    #[test]
    fn qtilde_partial_excludes_decoupled() {
        assert_eq!(qtilde_partial(&diag(&[1, 2, 3])), Err(Error::DomainExcluded));
        assert_eq!(qtilde_partial(&diag(&[1, 2, 3]).to_f64()), Err(Error::DomainExcluded));
    }
}
