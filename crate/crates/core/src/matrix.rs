//! Small dense square matrices over a [`Scalar`] field.

use std::ops::Mul;

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// Row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Build from rows; `None` if the rows do not form a square grid.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diag(values: &[S]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(S::zero(), |acc, j| acc + self.get(i, j).clone() * x[j].clone())
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm, evaluated in `f64`.
    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| {
                let v = x.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> S {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = S::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r1, &r2| {
                    a[r1 * n + col]
                        .abs()
                        .partial_cmp(&a[r2 * n + col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[pivot * n + col].is_zero() {
                return S::zero();
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det = det * p.clone();
            for r in col + 1..n {
                let factor = a[r * n + col].clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j].clone() * factor.clone();
                    a[r * n + j] = a[r * n + j].clone() - v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).max_by(|&r1, &r2| {
                a.get(r1, col)
                    .abs()
                    .partial_cmp(&a.get(r2, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a.get(pivot, col).is_zero() {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j).clone() / p.clone());
                inv.set(col, j, inv.get(col, j).clone() / p.clone());
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j).clone() - factor.clone() * a.get(col, j).clone();
                    a.set(r, j, av);
                    let iv = inv.get(r, j).clone() - factor.clone() * inv.get(col, j).clone();
                    inv.set(r, j, iv);
                }
            }
        }
        Some(inv)
    }

    /// Coefficients `e_1..e_n` of `det(tI - M) = t^n - e_1 t^{n-1} + e_2 t^{n-2} - ...`,
    /// i.e. the elementary symmetric functions of the eigenvalues, via the
    /// Faddeev-LeVerrier recursion (exact in rational mode).
    pub fn char_poly_elementary(&self) -> Vec<S> {
        let n = self.n;
        let mut c = vec![S::one()]; // c[k]: coefficient of t^{n-k} in det(tI - M)
        let mut m_k: Mat<S> = Mat::zeros(n); // M_0 = 0
        for k in 1..=n {
            // M_k = M (M_{k-1} + c_{k-1} I)
            let mut shifted = m_k.clone();
            for i in 0..n {
                let v = shifted.get(i, i).clone() + c[k - 1].clone();
                shifted.set(i, i, v);
            }
            m_k = self * &shifted;
            let ck = -m_k.trace() / S::from_int(k as i64);
            c.push(ck);
        }
        c.into_iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| if k % 2 == 1 { -ck } else { ck })
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }
}

impl Mat<f64> {
    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;

    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        Mat::from_fn(n, |i, j| {
            (0..n).fold(S::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn det_exact() {
        let m = Mat::from_rows(vec![
            vec![ratio(2, 1), ratio(1, 1), ratio(0, 1)],
            vec![ratio(1, 1), ratio(3, 1), ratio(1, 1)],
            vec![ratio(0, 1), ratio(1, 1), ratio(4, 1)],
        ])
        .unwrap();
        assert_eq!(m.det(), ratio(18, 1));
        let p = Mat::<Rational>::from_rows(vec![
            vec![ratio(0, 1), ratio(1, 1)],
            vec![ratio(1, 1), ratio(0, 1)],
        ])
        .unwrap();
        assert_eq!(p.det(), ratio(-1, 1));
    }

    #[test]
    fn inverse_exact() {
        let m = Mat::from_rows(vec![
            vec![ratio(2, 1), ratio(1, 1)],
            vec![ratio(5, 1), ratio(3, 1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        assert!(Mat::<Rational>::zeros(2).inverse().is_none());
    }

    #[test]
    fn char_poly_of_diagonal() {
        let m = Mat::diag(&[ratio(1, 1), ratio(4, 1), ratio(9, 1)]);
        assert_eq!(
            m.char_poly_elementary(),
            vec![ratio(14, 1), ratio(49, 1), ratio(36, 1)]
        );
    }

    #[test]
    fn char_poly_matches_minors() {
        let m = Mat::from_rows(vec![
            vec![ratio(298, 1), ratio(242, 1), ratio(48, 1)],
            vec![ratio(242, 1), ratio(306, 1), ratio(56, 1)],
            vec![ratio(48, 1), ratio(56, 1), ratio(456, 1)],
        ])
        .unwrap();
        let e = m.char_poly_elementary();
        let g = |i: usize, j: usize| m.get(i, j).clone();
        let minors = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) + g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0)
            + g(1, 1) * g(2, 2)
            - g(1, 2) * g(2, 1);
        assert_eq!(e[0], m.trace());
        assert_eq!(e[1], minors);
        assert_eq!(e[2], m.det());
    }
}
