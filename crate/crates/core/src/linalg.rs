//! Floating-point symmetric eigen-decomposition with a deterministic
//! ordering and sign convention.

use nalgebra::SymmetricEigen;

use crate::matrix::Mat;

/// Relative gap below which two eigenvalues count as repeated.
pub const GAP_TOL: f64 = 1e-8;

/// Eigenvalues in ascending order; `vectors` holds the matching unit
/// eigenvectors as columns, each with its first significant component positive.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl SymEigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        let n = self.values.len();
        (0..n).map(|r| *self.vectors.get(r, i)).collect()
    }

    /// Smallest distance between consecutive eigenvalues (infinite for n = 1).
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Pairwise-distinct test: `min_gap > GAP_TOL (1 + ‖M‖)`.
    pub fn is_distinct(&self, norm: f64) -> bool {
        self.min_gap() > GAP_TOL * (1.0 + norm)
    }
}

pub fn sym_eigen(m: &Mat<f64>) -> SymEigen {
    let n = m.n();
    let eig = SymmetricEigen::new(m.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Mat::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let v: Vec<f64> = (0..n).map(|r| eig.eigenvectors[(r, src)]).collect();
        let lead = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for (r, x) in v.into_iter().enumerate() {
            vectors.set(r, col, sign * x);
        }
    }
    SymEigen { values, vectors }
}

/// Every sign vector in `{±1}^n`, in binary counting order starting from all `+1`.
pub fn sign_vectors(n: usize) -> impl Iterator<Item = Vec<i8>> {
    (0u32..(1 << n)).map(move |mask| {
        (0..n)
            .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascending_with_signs() {
        let m = Mat::from_rows(vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ])
        .unwrap();
        let e = sym_eigen(&m);
        approx::assert_relative_eq!(e.values[0], 1.0, epsilon = 1e-12);
        approx::assert_relative_eq!(e.values[1], 3.0, epsilon = 1e-12);
        approx::assert_relative_eq!(e.values[2], 5.0, epsilon = 1e-12);
        for i in 0..3 {
            let v = e.vector(i);
            let lead = v.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*lead > 0.0);
            let mv = m.mul_vec(&v);
            for r in 0..3 {
                approx::assert_relative_eq!(mv[r], e.values[i] * v[r], epsilon = 1e-12);
            }
        }
        assert!(e.is_distinct(m.frobenius()));
    }

    #[test]
    fn repeated_values_detected() {
        let e = sym_eigen(&Mat::identity(2));
        assert!(!e.is_distinct(1.0));
    }

    #[test]
    fn sign_enumeration() {
        let all: Vec<Vec<i8>> = sign_vectors(2).collect();
        assert_eq!(all, vec![vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]);
    }
}
