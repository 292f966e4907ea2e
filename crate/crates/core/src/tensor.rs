//! Fully symmetric rank-3 tensors and the cubic forms they encode.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ortho::OrthogonalMap;
use crate::scalar::{int, Scalar};

/// Number of stored entries for dimension `n`.
pub const fn entry_count(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

/// Sorted index triples `i <= j <= k` (0-based) in storage order.
pub fn sorted_triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i| (i..n).flat_map(move |j| (j..n).map(move |k| [i, j, k])))
}

/// Number of distinct orderings of a sorted triple: 1, 3 or 6.
#[inline]
pub fn multiplicity([i, j, k]: [usize; 3]) -> i64 {
    if i == j && j == k {
        1
    } else if i == j || j == k {
        3
    } else {
        6
    }
}

/// Distinct orderings of a sorted triple.
pub fn orderings([i, j, k]: [usize; 3]) -> Vec<[usize; 3]> {
    let all = [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]];
    let mut out: Vec<[usize; 3]> = Vec::with_capacity(6);
    for t in all {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn sort3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

fn storage_index(n: usize, [i, j, k]: [usize; 3]) -> usize {
    // triples whose first index is below i
    let mut off = 0;
    for a in 0..i {
        let m = n - a;
        off += m * (m + 1) / 2;
    }
    // pairs (b, c) with i <= b < j
    for b in i..j {
        off += n - b;
    }
    off + (k - j)
}

/// Target zero-pattern for a reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Only the `(i,i,i)` entries may be nonzero.
    Full,
    /// The last coordinate is split off: every entry touching index `n`
    /// vanishes except `(n,n,n)`.
    Partial,
}

impl Pattern {
    /// Whether the sorted triple is allowed to be nonzero.
    pub fn allows(self, n: usize, [i, j, k]: [usize; 3]) -> bool {
        match self {
            Pattern::Full => i == j && j == k,
            Pattern::Partial => {
                let last = n - 1;
                let touches = i == last || j == last || k == last;
                !touches || (i == last && j == last && k == last)
            }
        }
    }
}

/// A fully symmetric `n x n x n` tensor `Γ`.
///
/// Only the sorted triples are stored; [`get`](Self::get) accepts any index
/// order. Indices are 0-based here and 1-based in the JSON format.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor3<S> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Scalar> SymTensor3<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![S::zero(); entry_count(n)],
        }
    }

    /// Build from a function of the sorted triple.
    pub fn from_fn(n: usize, mut f: impl FnMut([usize; 3]) -> S) -> Self {
        Self {
            n,
            entries: sorted_triples(n).map(&mut f).collect(),
        }
    }

    /// Build from values listed in storage order.
    pub fn from_sorted_entries(n: usize, entries: Vec<S>) -> Result<Self> {
        if entries.len() != entry_count(n) {
            return Err(Error::MalformedInput(format!(
                "expected {} entries for n = {n}, got {}",
                entry_count(n),
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.entries[storage_index(self.n, sort3([i, j, k]))]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: S) {
        let idx = storage_index(self.n, sort3([i, j, k]));
        self.entries[idx] = v;
    }

    /// `(sorted triple, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = ([usize; 3], &S)> {
        sorted_triples(self.n).zip(self.entries.iter())
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymTensor3<T> {
        SymTensor3 {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> SymTensor3<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn scale(&self, t: &S) -> Self {
        self.map(|x| x.clone() * t.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in tensor sum");
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    /// Squared Frobenius norm over the full `n^3` array.
    pub fn frobenius_sq(&self) -> S {
        self.iter().fold(S::zero(), |acc, (t, v)| {
            acc + int::<S>(multiplicity(t)) * v.clone() * v.clone()
        })
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().to_f64().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|x| x.abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// Largest magnitude among entries the pattern forces to zero.
    pub fn off_pattern_max(&self, pattern: Pattern) -> f64 {
        self.iter()
            .filter(|(t, _)| !pattern.allows(self.n, *t))
            .map(|(_, v)| v.abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// Whether every entry outside the pattern is exactly zero.
    pub fn fits_pattern(&self, pattern: Pattern) -> bool {
        self.iter()
            .all(|(t, v)| pattern.allows(self.n, t) || v.is_zero())
    }

    /// Tensor with the pattern-forbidden entries zeroed.
    pub fn project(&self, pattern: Pattern) -> Self {
        Self::from_fn(self.n, |t| {
            if pattern.allows(self.n, t) {
                self.get(t[0], t[1], t[2]).clone()
            } else {
                S::zero()
            }
        })
    }

    /// n = 2 coordinates `(a0, a1, a2, a3) = (Γ²₂₂, Γ¹₂₂, Γ²₁₁, Γ¹₁₁)`.
    pub fn n2_params(&self) -> Result<[S; 4]> {
        require_n(self, 2)?;
        Ok([
            self.get(1, 1, 1).clone(),
            self.get(0, 1, 1).clone(),
            self.get(0, 0, 1).clone(),
            self.get(0, 0, 0).clone(),
        ])
    }

    /// Inverse of [`n2_params`](Self::n2_params).
    pub fn from_n2_params([a0, a1, a2, a3]: [S; 4]) -> Self {
        let mut t = Self::zeros(2);
        t.set(1, 1, 1, a0);
        t.set(0, 1, 1, a1);
        t.set(0, 0, 1, a2);
        t.set(0, 0, 0, a3);
        t
    }
}

pub(crate) fn require_n<S>(t: &SymTensor3<S>, n: usize) -> Result<()> {
    if t.n != n {
        Err(Error::WrongDimension {
            required: n,
            got: t.n,
        })
    } else {
        Ok(())
    }
}

/// Exponent vector of a cubic monomial, e.g. `[2, 1, 0]` for `x₁²x₂`.
pub type Monomial = Vec<u32>;

/// Sparse cubic polynomial: monomial exponents to coefficient.
pub type Cubic<S> = BTreeMap<Monomial, S>;

fn monomial_of([i, j, k]: [usize; 3], n: usize) -> Monomial {
    let mut e = vec![0u32; n];
    e[i] += 1;
    e[j] += 1;
    e[k] += 1;
    e
}

/// Tensor of the cubic `f`, `Γ_ijk = (1/6) ∂i∂j∂k f`.
///
/// Repeated monomials are summed.
pub fn tensor_from_cubic<S: Scalar>(coeffs: &Cubic<S>, n: usize) -> Result<SymTensor3<S>> {
    let mut gamma: SymTensor3<S> = SymTensor3::zeros(n);
    for (mono, c) in coeffs {
        if mono.len() != n {
            return Err(Error::MalformedPolynomial(format!(
                "monomial {mono:?} has {} exponents, expected {n}",
                mono.len()
            )));
        }
        if mono.iter().sum::<u32>() != 3 {
            return Err(Error::MalformedPolynomial(format!(
                "monomial {mono:?} is not of degree 3"
            )));
        }
        let mut t = Vec::with_capacity(3);
        for (var, &e) in mono.iter().enumerate() {
            t.extend(std::iter::repeat_n(var, e as usize));
        }
        let t = [t[0], t[1], t[2]];
        let v = gamma.get(t[0], t[1], t[2]).clone() + c.clone() / int::<S>(multiplicity(t));
        gamma.set(t[0], t[1], t[2], v);
    }
    Ok(gamma)
}

/// Cubic form `f(x) = Σ Γ_ijk x_i x_j x_k`, zero coefficients omitted.
pub fn tensor_to_cubic<S: Scalar>(gamma: &SymTensor3<S>) -> Cubic<S> {
    gamma
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| (monomial_of(t, gamma.n), int::<S>(multiplicity(t)) * v.clone()))
        .collect()
}

pub fn eval_cubic<S: Scalar>(gamma: &SymTensor3<S>, x: &[S]) -> Result<S> {
    if x.len() != gamma.n {
        return Err(Error::DimensionMismatch {
            expected: gamma.n,
            got: x.len(),
        });
    }
    Ok(gamma.iter().fold(S::zero(), |acc, ([i, j, k], v)| {
        acc + int::<S>(multiplicity([i, j, k]))
            * v.clone()
            * x[i].clone()
            * x[j].clone()
            * x[k].clone()
    }))
}

/// `(σ∘Γ)_ijk = Σ σ_ii' σ_jj' σ_kk' Γ_i'j'k'` for any square matrix `σ`.
pub fn act_matrix<S: Scalar>(sigma: &Mat<S>, gamma: &SymTensor3<S>) -> Result<SymTensor3<S>> {
    let n = gamma.n;
    if sigma.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: sigma.n(),
        });
    }
    let source: Vec<(Vec<[usize; 3]>, S)> = gamma
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| (orderings(t), v.clone()))
        .collect();
    Ok(SymTensor3::from_fn(n, |[i, j, k]| {
        let mut acc = S::zero();
        for (perms, v) in &source {
            let mut w = S::zero();
            for &[p, q, r] in perms {
                w = w + sigma.get(i, p).clone() * sigma.get(j, q).clone() * sigma.get(k, r).clone();
            }
            acc = acc + w * v.clone();
        }
        acc
    }))
}

/// Group action of an orthogonal map; `f(x; σ∘Γ) = f(σᵗx; Γ)`.
pub fn act<S: Scalar>(sigma: &OrthogonalMap<S>, gamma: &SymTensor3<S>) -> Result<SymTensor3<S>> {
    act_matrix(sigma.matrix(), gamma)
}
