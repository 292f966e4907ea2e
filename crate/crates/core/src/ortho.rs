//! Certified orthogonal maps.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Float-mode bound on `max |σᵗσ - I|`.
pub const ORTHO_TOL: f64 = 1e-10;

/// An orthogonal `n x n` matrix together with the sign of its determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap<S> {
    matrix: Mat<S>,
    det_sign: i8,
}

impl<S: Scalar> OrthogonalMap<S> {
    /// Certify `m`: `σᵗσ = I` exactly (rational) or within [`ORTHO_TOL`] (float).
    pub fn new(m: Mat<S>) -> Result<Self> {
        let gram = &m.transpose() * &m;
        let dev = gram.max_abs_diff(&Mat::identity(m.n()));
        let ok = if S::EXACT { dev == 0.0 && gram == Mat::identity(m.n()) } else { dev <= ORTHO_TOL };
        if !ok {
            return Err(Error::NotOrthogonal(dev));
        }
        let det_sign = if m.det().is_negative() { -1 } else { 1 };
        Ok(Self { matrix: m, det_sign })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let m = Mat::from_rows(rows)
            .ok_or_else(|| Error::MalformedInput("orthogonal map must be square".into()))?;
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Mat::identity(n),
            det_sign: 1,
        }
    }

    /// Rotation `[[c, -s], [s, c]]`; requires `c² + s² = 1`.
    pub fn rotation2(c: S, s: S) -> Result<Self> {
        Self::new(Mat::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]).expect("2x2"))
    }

    /// The coordinate swap `x₁ <-> x₂` in dimension 2.
    pub fn swap2() -> Self {
        let (o, z) = (S::one(), S::zero());
        Self {
            matrix: Mat::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z]]).expect("2x2"),
            det_sign: -1,
        }
    }

    /// Diagonal sign matrix.
    pub fn signs(eps: &[i8]) -> Self {
        let d: Vec<S> = eps.iter().map(|&e| S::from_int(e as i64)).collect();
        let det_sign = eps.iter().product::<i8>().signum();
        Self {
            matrix: Mat::diag(&d),
            det_sign,
        }
    }

    /// Cayley transform `(I - A)(I + A)⁻¹` of a skew-symmetric `A`; always
    /// a rotation, with rational entries when `A` is rational.
    pub fn cayley(a: &Mat<S>) -> Result<Self> {
        let n = a.n();
        let skew = (0..n).all(|i| (0..n).all(|j| *a.get(i, j) == -a.get(j, i).clone()));
        if !skew {
            return Err(Error::InvalidArgument("Cayley generator must be skew-symmetric".into()));
        }
        let id: Mat<S> = Mat::identity(n);
        let minus = Mat::from_fn(n, |i, j| id.get(i, j).clone() - a.get(i, j).clone());
        let plus = Mat::from_fn(n, |i, j| id.get(i, j).clone() + a.get(i, j).clone());
        let inv = plus
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("I + A is singular".into()))?;
        Self::new(&minus * &inv)
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.matrix
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
            det_sign: self.det_sign * other.det_sign,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
            det_sign: self.det_sign,
        }
    }

    /// Orthogonality defect `max |σᵗσ - I|`.
    pub fn defect(&self) -> f64 {
        (&self.matrix.transpose() * &self.matrix).max_abs_diff(&Mat::identity(self.n()))
    }

    pub fn to_f64(&self) -> OrthogonalMap<f64> {
        OrthogonalMap {
            matrix: self.matrix.to_f64(),
            det_sign: self.det_sign,
        }
    }
}

impl OrthogonalMap<f64> {
    pub fn rotation2_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            matrix: Mat::from_rows(vec![vec![c, -s], vec![s, c]]).expect("2x2"),
            det_sign: 1,
        }
    }

    /// Re-orthonormalize by one Newton-Schulz step; keeps the determinant sign.
    pub fn polish(&self) -> Self {
        let m = &self.matrix;
        let n = m.n();
        let mtm = &m.transpose() * m;
        let corr = Mat::from_fn(n, |i, j| {
            let id = if i == j { 1.5 } else { 0.0 };
            id - 0.5 * mtm.get(i, j)
        });
        Self {
            matrix: m * &corr,
            det_sign: self.det_sign,
        }
    }
}
