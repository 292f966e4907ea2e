//! Covariants of `Γ`: trace vector, harmonic split, and the quadratic
//! matrices and vectors the invariants are assembled from.

use crate::matrix::Mat;
use crate::scalar::{int, Scalar};
use crate::tensor::{multiplicity, SymTensor3};

/// Trace vector `u_i = Σ_l Γ_ill`.
pub fn trace_vector<S: Scalar>(gamma: &SymTensor3<S>) -> Vec<S> {
    let n = gamma.n();
    (0..n)
        .map(|i| (0..n).fold(S::zero(), |acc, l| acc + gamma.get(i, l, l).clone()))
        .collect()
}

/// `M_kl = Σ_ij T_ijk T_ijl`.
pub fn star2<S: Scalar>(t: &SymTensor3<S>) -> Mat<S> {
    let n = t.n();
    let mut m = Mat::zeros(n);
    for k in 0..n {
        for l in k..n {
            let mut acc = S::zero();
            for i in 0..n {
                for j in 0..n {
                    acc = acc + t.get(i, j, k).clone() * t.get(i, j, l).clone();
                }
            }
            m.set(k, l, acc.clone());
            m.set(l, k, acc);
        }
    }
    m
}

/// `(x·T)_kl = Σ_i T_ikl x_i`.
pub fn contract1<S: Scalar>(t: &SymTensor3<S>, x: &[S]) -> Mat<S> {
    let n = t.n();
    let mut m = Mat::zeros(n);
    for k in 0..n {
        for l in k..n {
            let acc = (0..n).fold(S::zero(), |acc, i| acc + t.get(i, k, l).clone() * x[i].clone());
            m.set(k, l, acc.clone());
            m.set(l, k, acc);
        }
    }
    m
}

/// `T(x, x, ·)_m = Σ_ij T_ijm x_i x_j`.
pub fn contract2<S: Scalar>(t: &SymTensor3<S>, x: &[S]) -> Vec<S> {
    contract1(t, x).mul_vec(x)
}

/// `T(x, x, x)`, summed over sorted triples with their multiplicities.
pub fn contract3<S: Scalar>(t: &SymTensor3<S>, x: &[S]) -> S {
    t.iter().fold(S::zero(), |acc, ([i, j, k], v)| {
        acc + int::<S>(multiplicity([i, j, k]))
            * v.clone()
            * x[i].clone()
            * x[j].clone()
            * x[k].clone()
    })
}

/// `Σ_kl M_kl T_klm`.
pub fn matrix_dot_tensor<S: Scalar>(m: &Mat<S>, t: &SymTensor3<S>) -> Vec<S> {
    let n = t.n();
    (0..n)
        .map(|p| {
            let mut acc = S::zero();
            for k in 0..n {
                for l in 0..n {
                    acc = acc + m.get(k, l).clone() * t.get(k, l, p).clone();
                }
            }
            acc
        })
        .collect()
}

pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// `xᵗ M y`.
pub fn bilinear<S: Scalar>(x: &[S], m: &Mat<S>, y: &[S]) -> S {
    dot(x, &m.mul_vec(y))
}

/// The covariants of one tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantSuite<S> {
    /// Trace vector.
    pub u: Vec<S>,
    /// Part of `Γ` carried by `u`.
    pub b: SymTensor3<S>,
    /// Trace-free part, `Γ = B + D/(n+2)`.
    pub d: SymTensor3<S>,
    pub gamma_star2: Mat<S>,
    pub d_star2: Mat<S>,
    /// `v_m = Σ D*²_kl D_klm`.
    pub v: Vec<S>,
    /// `w_m = Σ D_ijm u_i u_j`.
    pub w: Vec<S>,
}

/// `B_ijk = (u_i δ_jk + u_j δ_ki + u_k δ_ij)/(n+2)`.
pub fn trace_part<S: Scalar>(u: &[S]) -> SymTensor3<S> {
    let n = u.len();
    let scale = int::<S>(n as i64 + 2);
    SymTensor3::from_fn(n, |[i, j, k]| trace_term(u, [i, j, k]) / scale.clone())
}

fn trace_term<S: Scalar>(u: &[S], [i, j, k]: [usize; 3]) -> S {
    let mut acc = S::zero();
    if j == k {
        acc = acc + u[i].clone();
    }
    if k == i {
        acc = acc + u[j].clone();
    }
    if i == j {
        acc = acc + u[k].clone();
    }
    acc
}

/// Trace-free part `D = (n+2)(Γ - B)`.
pub fn deviator<S: Scalar>(gamma: &SymTensor3<S>, u: &[S]) -> SymTensor3<S> {
    let n = gamma.n();
    let scale = int::<S>(n as i64 + 2);
    SymTensor3::from_fn(n, |t| {
        scale.clone() * gamma.get(t[0], t[1], t[2]).clone() - trace_term(u, t)
    })
}

pub fn covariants<S: Scalar>(gamma: &SymTensor3<S>) -> CovariantSuite<S> {
    let u = trace_vector(gamma);
    let b = trace_part(&u);
    let d = deviator(gamma, &u);
    let gamma_star2 = star2(gamma);
    let d_star2 = star2(&d);
    let v = matrix_dot_tensor(&d_star2, &d);
    let w = contract2(&d, &u);
    CovariantSuite {
        u,
        b,
        d,
        gamma_star2,
        d_star2,
        v,
        w,
    }
}

/// `(u·Γ)_kl = Σ_i Γ_ikl u_i`; equals `Γ*²` on fully decoupleable tensors.
pub fn u_dot_gamma<S: Scalar>(gamma: &SymTensor3<S>) -> Mat<S> {
    contract1(gamma, &trace_vector(gamma))
}
