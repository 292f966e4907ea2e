//! Reduced and canonical seed tensors, random orthogonal maps, orbit samples,
//! and a numerical orbit-search oracle.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ortho::OrthogonalMap;
use crate::recover::PdParams;
use crate::scalar::{int, Rational, Scalar};
use crate::tensor::{act, act_matrix, multiplicity, Pattern, SymTensor3};

/// Fully decoupled tensor: `Γ_iii = β_i`, every other entry zero.
pub fn make_fd<S: Scalar>(betas: &[S]) -> SymTensor3<S> {
    let mut g = SymTensor3::zeros(betas.len());
    for (i, b) in betas.iter().enumerate() {
        g.set(i, i, i, b.clone());
    }
    g
}

/// Canonical partially decoupled n = 3 tensor with cubic form
/// `(3α-γ₁)x₁³ + 3γ₂x₁²x₂ + 3(α+γ₁)x₁x₂² - γ₂x₂³ + β₃x₃³`.
pub fn make_pd_canonical<S: Scalar>(p: &PdParams<S>) -> SymTensor3<S> {
    let mut g = SymTensor3::zeros(3);
    g.set(0, 0, 0, int::<S>(3) * p.alpha.clone() - p.gamma1.clone());
    g.set(0, 0, 1, p.gamma2.clone());
    g.set(0, 1, 1, p.alpha.clone() + p.gamma1.clone());
    g.set(1, 1, 1, -p.gamma2.clone());
    g.set(2, 2, 2, p.beta3.clone());
    g
}

/// Closed form of `R*²` for the canonical tensor.
pub fn canonical_star2<S: Scalar>(p: &PdParams<S>) -> Mat<S> {
    let (a, g1, g2, b3) = (&p.alpha, &p.gamma1, &p.gamma2, &p.beta3);
    let two = int::<S>(2);
    let m00 = two.clone()
        * (int::<S>(5) * a.clone() * a.clone() - two.clone() * a.clone() * g1.clone()
            + g1.clone() * g1.clone()
            + g2.clone() * g2.clone());
    let m01 = int::<S>(4) * a.clone() * g2.clone();
    let ag = a.clone() + g1.clone();
    let m11 = two * (ag.clone() * ag + g2.clone() * g2.clone());
    let z = S::zero();
    Mat::from_rows(vec![
        vec![m00, m01.clone(), z.clone()],
        vec![m01, m11, z.clone()],
        vec![z.clone(), z, b3.clone() * b3.clone()],
    ])
    .expect("3x3")
}

/// Haar-distributed element of O(n), deterministic per seed.
pub fn haar_orthogonal(n: usize, seed: u64) -> OrthogonalMap<f64> {
    haar_with_rng(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// QR of a Gaussian matrix with the signs of `diag(R)` moved into `Q`.
pub fn haar_with_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OrthogonalMap<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    OrthogonalMap::new(Mat::from_nalgebra(&q)).expect("QR factor is orthogonal")
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::from_ratio(rng.random_range(-3..=3), rng.random_range(1..=3))
}

/// Random rational orthogonal map: Cayley transform of a small skew matrix,
/// with the first row negated half of the time.
pub fn rational_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OrthogonalMap<Rational> {
    let mut a = Mat::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let x = small_rational(rng);
            a.set(j, i, -x.clone());
            a.set(i, j, x);
        }
    }
    let q = OrthogonalMap::cayley(&a).expect("I + A is invertible for skew A");
    if rng.random_bool(0.5) {
        let mut eps = vec![1i8; n];
        eps[0] = -1;
        OrthogonalMap::signs(&eps).compose(&q)
    } else {
        q
    }
}

/// Dense tensor with integer entries in `-k..=k`.
pub fn random_integer_tensor<R: Rng + ?Sized>(n: usize, k: i64, rng: &mut R) -> SymTensor3<Rational> {
    SymTensor3::from_fn(n, |_| Rational::from_int(rng.random_range(-k..=k)))
}

/// Dense tensor with standard normal entries.
pub fn random_gaussian_tensor<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymTensor3<f64> {
    SymTensor3::from_fn(n, |_| rng.sample(StandardNormal))
}

/// Nonzero integers in `-k..=k` with pairwise distinct magnitudes.
pub fn distinct_betas<R: Rng + ?Sized>(n: usize, k: i64, rng: &mut R) -> Vec<i64> {
    assert!(k as usize >= n, "not enough distinct magnitudes");
    let mut out: Vec<i64> = Vec::with_capacity(n);
    while out.len() < n {
        let b = rng.random_range(1..=k);
        if !out.contains(&b) && !out.contains(&-b) {
            out.push(if rng.random_bool(0.5) { b } else { -b });
        }
    }
    out
}

/// Integer canonical parameters with `α² != γ₁² + γ₂²` and `β₃ != 0`.
pub fn random_pd_params<R: Rng + ?Sized>(k: i64, rng: &mut R) -> PdParams<Rational> {
    loop {
        let mut draw = || rng.random_range(-k..=k);
        let (a, g1, g2, b3) = (draw(), draw(), draw(), draw());
        if a * a != g1 * g1 + g2 * g2 && b3 != 0 {
            let r = |x: i64| Rational::from_int(x);
            return PdParams {
                alpha: r(a),
                gamma1: r(g1),
                gamma2: r(g2),
                beta3: r(b3),
            };
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// Rotated fully decoupled seed.
    Fd,
    /// Rotated canonical partially-but-not-fully decoupleable seed (n = 3).
    PdNotFd,
    /// Dense random tensor, left unrotated.
    Generic,
}

/// A seed form together with the map that carries it to the sampled point.
#[derive(Debug, Clone)]
pub struct OrbitSample<S> {
    pub seed_form: SymTensor3<S>,
    pub map: OrthogonalMap<S>,
    pub label: SampleKind,
}

impl<S: Scalar> OrbitSample<S> {
    /// `act(map, seed_form)`, recomputed on every call.
    pub fn point(&self) -> SymTensor3<S> {
        act(&self.map, &self.seed_form).expect("sample dimensions agree")
    }
}

/// Exact sample: integer seeds, rational orthogonal map.
pub fn sample_exact(kind: SampleKind, n: usize, seed: u64) -> Result<OrbitSample<Rational>> {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let r = |x: i64| Rational::from_int(x);
    let (seed_form, map) = match kind {
        SampleKind::Fd => {
            let k = (2 * n as i64).max(5);
            let b: Vec<Rational> = distinct_betas(n, k, rng).into_iter().map(r).collect();
            (make_fd(&b), rational_orthogonal(n, rng))
        }
        SampleKind::PdNotFd => {
            if n != 3 {
                return Err(Error::WrongDimension { required: 3, got: n });
            }
            let p = random_pd_params(4, rng);
            (make_pd_canonical(&p), rational_orthogonal(3, rng))
        }
        SampleKind::Generic => (random_integer_tensor(n, 5, rng), OrthogonalMap::identity(n)),
    };
    Ok(OrbitSample {
        seed_form,
        map,
        label: kind,
    })
}

/// Float sample: Gaussian or integer seeds, Haar-random map.
pub fn sample_float(kind: SampleKind, n: usize, seed: u64) -> Result<OrbitSample<f64>> {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let (seed_form, map) = match kind {
        SampleKind::Fd => {
            let k = (2 * n as i64).max(5);
            let b: Vec<f64> = distinct_betas(n, k, rng).into_iter().map(|x| x as f64).collect();
            (make_fd(&b), haar_with_rng(n, rng))
        }
        SampleKind::PdNotFd => {
            if n != 3 {
                return Err(Error::WrongDimension { required: 3, got: n });
            }
            let p = random_pd_params(4, rng).to_f64();
            (make_pd_canonical(&p), haar_with_rng(3, rng))
        }
        SampleKind::Generic => (random_gaussian_tensor(n, rng), OrthogonalMap::identity(n)),
    };
    Ok(OrbitSample {
        seed_form,
        map,
        label: kind,
    })
}

/// Search effort of [`orbit_search_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub starts: usize,
    pub steps: usize,
    pub seed: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            starts: 32,
            steps: 200,
            seed: 0,
        }
    }
}

/// Best point found by the oracle. `min_residual` is an upper bound on the
/// distance from the orbit to the pattern, not a certificate.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Frobenius norm of the off-pattern part of `act(map, Γ)`.
    pub min_residual: f64,
    pub map: OrthogonalMap<f64>,
    pub evaluations: usize,
}

/// Product of Givens rotations over all pairs `p < q`, optionally preceded
/// by the reflection `x₁ -> -x₁`.
pub fn givens_product(n: usize, angles: &[f64], reflect: bool) -> Mat<f64> {
    let mut m = Mat::identity(n);
    if reflect {
        m.set(0, 0, -1.0);
    }
    let mut a = angles.iter();
    for p in 0..n {
        for q in p + 1..n {
            let (s, c) = a.next().copied().unwrap_or(0.0).sin_cos();
            // left-multiply by the rotation in the (p, q) plane
            for col in 0..n {
                let (x, y) = (*m.get(p, col), *m.get(q, col));
                m.set(p, col, c * x - s * y);
                m.set(q, col, s * x + c * y);
            }
        }
    }
    m
}

struct Objective<'a> {
    gamma: &'a SymTensor3<f64>,
    reflect: bool,
    weights: Vec<(usize, f64)>,
}

impl Objective<'_> {
    fn new(gamma: &SymTensor3<f64>, pattern: Pattern, reflect: bool) -> Objective<'_> {
        let n = gamma.n();
        let weights = gamma
            .iter()
            .enumerate()
            .filter(|(_, (t, _))| !pattern.allows(n, *t))
            .map(|(pos, (t, _))| (pos, (multiplicity(t) as f64).sqrt()))
            .collect();
        Objective {
            gamma,
            reflect,
            weights,
        }
    }

    fn residuals(&self, angles: &[f64]) -> DVector<f64> {
        let m = givens_product(self.gamma.n(), angles, self.reflect);
        let t = act_matrix(&m, self.gamma).expect("square map");
        let e = t.entries();
        DVector::from_iterator(self.weights.len(), self.weights.iter().map(|&(pos, w)| w * e[pos]))
    }

    fn cost(&self, angles: &[f64]) -> f64 {
        self.residuals(angles).norm_squared()
    }
}

/// Levenberg-Marquardt from one start; returns `(cost, angles, evaluations)`.
fn refine(obj: &Objective<'_>, mut x: Vec<f64>, steps: usize) -> (f64, Vec<f64>, usize) {
    let dim = x.len();
    let mut r = obj.residuals(&x);
    let mut cost = r.norm_squared();
    let mut evals = 1;
    let mut lambda = 1e-3;
    let h = 1e-6;
    for _ in 0..steps {
        if cost < 1e-30 || dim == 0 {
            break;
        }
        let mut jac = DMatrix::zeros(r.len(), dim);
        for k in 0..dim {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let col = (obj.residuals(&xp) - obj.residuals(&xm)) / (2.0 * h);
            jac.set_column(k, &col);
            evals += 2;
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for k in 0..dim {
                a[(k, k)] += lambda * (jtj[(k, k)] + 1e-12);
            }
            let Some(delta) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let cand: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            let rc = obj.residuals(&cand);
            evals += 1;
            let c = rc.norm_squared();
            if c < cost {
                let small = delta.amax() < 1e-15;
                x = cand;
                r = rc;
                cost = c;
                lambda = (lambda / 3.0).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (cost, x, evals)
}

/// Minimize the off-pattern mass of `act(σ, Γ)` over O(n) by multi-start
/// Levenberg-Marquardt on Givens angles (both determinant sheets).
pub fn orbit_search_oracle<S: Scalar>(
    gamma: &SymTensor3<S>,
    pattern: Pattern,
    budget: OracleBudget,
) -> Result<OracleResult> {
    let n = gamma.n();
    if n < 2 {
        return Err(Error::InvalidArgument("oracle needs n >= 2".into()));
    }
    let g = gamma.to_f64();
    if g.is_zero() {
        return Ok(OracleResult {
            min_residual: 0.0,
            map: OrthogonalMap::identity(n),
            evaluations: 0,
        });
    }
    let dim = n * (n - 1) / 2;
    let starts = budget.starts.max(1);
    let jobs: Vec<(usize, bool)> = (0..starts).flat_map(|s| [(s, false), (s, true)]).collect();
    let results: Vec<(f64, usize, bool, Vec<f64>, usize)> = jobs
        .par_iter()
        .map(|&(s, reflect)| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_mul(0x9E37_79B9).wrapping_add(s as u64));
            let x0: Vec<f64> = if s == 0 {
                vec![0.0; dim]
            } else {
                (0..dim)
                    .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect()
            };
            let obj = Objective::new(&g, pattern, reflect);
            let (cost, x, evals) = refine(&obj, x0, budget.steps);
            (cost, s, reflect, x, evals)
        })
        .collect();
    let evaluations = results.iter().map(|r| r.4).sum();
    let best = results
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)))
        .expect("at least one start");
    let (cost, _, reflect, x, _) = best;
    let map = OrthogonalMap::new(givens_product(n, &x, reflect)).expect("Givens product is orthogonal");
    debug_assert!(Objective::new(&g, pattern, reflect).cost(&x) == cost);
    Ok(OracleResult {
        min_residual: cost.max(0.0).sqrt(),
        map,
        evaluations,
    })
}
