//! Molien series of the SO(2) and O(2) actions on n = 2 tensors,
//! computed by quadrature over the circle.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Mat;

pub const MAX_DEGREE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    So2,
    O2,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::So2 => "so2",
            Group::O2 => "o2",
        }
    }
}

/// Matrix of `a ↦ a(σ∘Γ)` on `(a0, a1, a2, a3)` for the rotation by `theta`,
/// followed by the swap `x₁ <-> x₂` when `reflected`.
pub fn rep_matrix(theta: f64, reflected: bool) -> Mat<f64> {
    let (s, c) = theta.sin_cos();
    let rows = vec![
        vec![c * c * c, 3.0 * c * c * s, 3.0 * c * s * s, s * s * s],
        vec![-c * c * s, c * c * c - 2.0 * c * s * s, 2.0 * c * c * s - s * s * s, c * s * s],
        vec![c * s * s, -2.0 * c * c * s + s * s * s, c * c * c - 2.0 * c * s * s, c * c * s],
        vec![-s * s * s, 3.0 * c * s * s, -3.0 * c * c * s, c * c * c],
    ];
    let mut m = Mat::from_rows(rows).expect("4x4");
    if reflected {
        // the swap reverses the coordinate order
        m = Mat::from_fn(4, |i, j| *m.get(3 - i, j));
    }
    m
}

/// Coefficients of `det(I - λM)`, lowest degree first.
fn det_poly(m: &Mat<f64>) -> Vec<f64> {
    let e = m.char_poly_elementary();
    let mut p = vec![1.0];
    for (k, ek) in e.into_iter().enumerate() {
        p.push(if k % 2 == 0 { -ek } else { ek });
    }
    p
}

/// First `len` coefficients of `1/p(λ)` for `p(0) = 1`.
fn reciprocal_series(p: &[f64], len: usize) -> Vec<f64> {
    let mut b = vec![0.0; len];
    if len == 0 {
        return b;
    }
    b[0] = 1.0 / p[0];
    for m in 1..len {
        let acc: f64 = (1..p.len().min(m + 1)).map(|j| p[j] * b[m - j]).sum();
        b[m] = -acc / p[0];
    }
    b
}

fn branch_average(max_degree: usize, points: usize, reflected: bool) -> Vec<f64> {
    let per_point: Vec<Vec<f64>> = (0..points)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / points as f64;
            reciprocal_series(&det_poly(&rep_matrix(theta, reflected)), max_degree + 1)
        })
        .collect();
    let mut sum = vec![0.0; max_degree + 1];
    for row in &per_point {
        for (s, x) in sum.iter_mut().zip(row) {
            *s += x;
        }
    }
    sum.into_iter().map(|s| s / points as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MolienSeries {
    pub group: Group,
    pub max_degree: usize,
    pub coefficients: Vec<u64>,
    /// Averages before rounding.
    pub raw: Vec<f64>,
}

impl MolienSeries {
    /// Largest distance between a raw coefficient and its rounded value.
    pub fn drift(&self) -> f64 {
        self.raw
            .iter()
            .map(|x| (x - x.round()).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ c_d λ^d` through the computed degree.
    pub fn partial_sum(&self, lambda: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * lambda + c as f64)
    }
}

/// Coefficients `c_0..c_D` of the Molien series by the trapezoid rule with
/// `points` nodes on `[0, 2π)`.
pub fn molien_series(group: Group, max_degree: usize, points: usize) -> Result<MolienSeries> {
    if max_degree > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("max degree {max_degree} exceeds {MAX_DEGREE}")));
    }
    if points < 4 * max_degree || points == 0 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} quadrature points, got {points}",
            (4 * max_degree).max(1)
        )));
    }
    let rot = branch_average(max_degree, points, false);
    let raw = match group {
        Group::So2 => rot,
        Group::O2 => {
            let refl = branch_average(max_degree, points, true);
            rot.iter().zip(&refl).map(|(a, b)| (a + b) / 2.0).collect()
        }
    };
    let coefficients = raw.iter().map(|x| x.round().max(0.0) as u64).collect();
    Ok(MolienSeries {
        group,
        max_degree,
        coefficients,
        raw,
    })
}

/// Default node count for a degree bound.
pub fn default_points(max_degree: usize) -> usize {
    (8 * max_degree).max(64)
}

/// `1 / ((1-λ²)²(1-λ⁴))`.
pub fn o2_closed_form(lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    1.0 / ((1.0 - l2).powi(2) * (1.0 - l2 * l2))
}

/// `2 Φ_O(2) - 1/(1-λ²)²`.
pub fn so2_closed_form(lambda: f64) -> f64 {
    2.0 * o2_closed_form(lambda) - 1.0 / (1.0 - lambda * lambda).powi(2)
}
