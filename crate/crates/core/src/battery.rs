//! Seeded property battery: the algebraic identities and round trips the
//! library relies on, checked on random fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::covariants::{covariants, star2};
use crate::decouple::{classify_fd_generic, classify_fd_n3, classify_n2, classify_pd_not_fd_n3, fd_necessary_quick, Verdict};
use crate::invariants::{oa_basis, qtilde_full, so2_basis};
use crate::matrix::Mat;
use crate::molien::{molien_series, Group};
use crate::orbitlab::{
    distinct_betas, haar_with_rng, make_fd, make_pd_canonical, random_gaussian_tensor, random_integer_tensor,
    random_pd_params, rational_orthogonal,
};
use crate::recover::{ode_eigenbasis, ode_generator, ode_rates, recover_n2};
use crate::scalar::{Rational, Scalar, Tolerance};
use crate::tensor::{act, eval_cubic, SymTensor3};

/// Result of one property over all of its cases.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Property = fn(&mut ChaCha8Rng) -> Result<(), String>;

const PROPERTIES: &[(&str, Property)] = &[
    ("act_composition_exact", act_composition),
    ("cubic_pullback", cubic_pullback),
    ("covariant_equivariance", covariant_equivariance),
    ("oa_invariance_exact", oa_invariance),
    ("oa_homogeneity", oa_homogeneity),
    ("n2_syzygy_and_cross_basis", n2_identities),
    ("n2_criterion_forms_agree", n2_forms),
    ("n2_recovery_census", n2_census),
    ("fd3_round_trip", fd3_round_trip),
    ("pd3_round_trip", pd3_round_trip),
    ("dense_n3_rejected", dense_rejected),
    ("generic_agrees_with_fd3", generic_agreement),
];

/// Names of every property, in run order; the last two are fixed checks.
pub fn property_names() -> Vec<&'static str> {
    PROPERTIES
        .iter()
        .map(|(n, _)| *n)
        .chain(["molien_tables", "rotation_flow_facts"])
        .collect()
}

/// Run every property on `cases` fixtures derived from `seed`.
pub fn run(seed: u64, cases: usize) -> Vec<Outcome> {
    let mut out: Vec<Outcome> = PROPERTIES
        .par_iter()
        .enumerate()
        .map(|(p, &(name, prop))| {
            let results: Vec<Result<(), String>> = (0..cases)
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream((p as u64) << 32 | c as u64);
                    prop(&mut rng)
                })
                .collect();
            let failures = results.iter().filter(|r| r.is_err()).count();
            let first_failure = results
                .into_iter()
                .enumerate()
                .find_map(|(c, r)| r.err().map(|e| format!("case {c}: {e}")));
            Outcome {
                name,
                cases,
                failures,
                first_failure,
            }
        })
        .collect();
    out.push(single("molien_tables", molien_tables()));
    out.push(single("rotation_flow_facts", flow_facts()));
    out
}

fn single(name: &'static str, r: Result<(), String>) -> Outcome {
    Outcome {
        name,
        cases: 1,
        failures: r.is_err() as usize,
        first_failure: r.err(),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rational_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4)))
        .collect()
}

fn act_composition(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.random_range(2..=4);
    let g = random_integer_tensor(n, 5, rng);
    let (s1, s2) = (rational_orthogonal(n, rng), rational_orthogonal(n, rng));
    let lhs = act(&s2, &act(&s1, &g).map_err(err)?).map_err(err)?;
    let rhs = act(&s2.compose(&s1), &g).map_err(err)?;
    ensure(lhs == rhs, || format!("n={n}"))
}

fn cubic_pullback(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.random_range(2..=4);
    let g = random_integer_tensor(n, 5, rng);
    let s = rational_orthogonal(n, rng);
    let x = rational_vector(n, rng);
    let sx = s.matrix().mul_vec(&x);
    let lhs = eval_cubic(&act(&s, &g).map_err(err)?, &sx).map_err(err)?;
    let rhs = eval_cubic(&g, &x).map_err(err)?;
    ensure(lhs == rhs, || format!("{lhs} != {rhs}"))
}

fn covariant_equivariance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.random_range(2..=4);
    let g = random_integer_tensor(n, 5, rng);
    let s = rational_orthogonal(n, rng);
    let (c, cs) = (covariants(&g), covariants(&act(&s, &g).map_err(err)?));
    let m = s.matrix();
    let conj = |x: &Mat<Rational>| &(m * x) * &m.transpose();
    ensure(cs.u == m.mul_vec(&c.u), || "u".into())?;
    ensure(cs.v == m.mul_vec(&c.v), || "v".into())?;
    ensure(cs.w == m.mul_vec(&c.w), || "w".into())?;
    ensure(cs.gamma_star2 == conj(&c.gamma_star2), || "gamma_star2".into())?;
    ensure(cs.d == act(&s, &c.d).map_err(err)?, || "D".into())?;
    ensure(qtilde_full(&g) == star2(&act(&s, &g).map_err(err)?).char_poly_elementary(), || {
        "char poly".into()
    })
}

fn oa_invariance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = random_integer_tensor(3, 4, rng);
    let s = rational_orthogonal(3, rng);
    let a = oa_basis(&g).map_err(err)?;
    let b = oa_basis(&act(&s, &g).map_err(err)?).map_err(err)?;
    ensure(a == b, || "invariants changed".into())
}

fn oa_homogeneity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = random_integer_tensor(3, 4, rng);
    let t = Rational::from_ratio(rng.random_range(-5..=5), rng.random_range(1..=5));
    let a = oa_basis(&g).map_err(err)?.values();
    let b = oa_basis(&g.scale(&t)).map_err(err)?.values();
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        let d: u32 = name[1..].parse().expect("degree suffix");
        let tp = (0..d).fold(Rational::from_int(1), |acc, _| acc * t.clone());
        ensure(*y == tp * x.clone(), || name.to_string())?;
    }
    Ok(())
}

fn n2_identities(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = random_integer_tensor(2, 9, rng);
    let inv = so2_basis(&g).map_err(err)?;
    ensure(inv.syzygy() == Rational::from_int(0), || "syzygy".into())?;
    let [r1, r2] = inv.cross_basis_residuals();
    ensure(r1 == Rational::from_int(0) && r2 == Rational::from_int(0), || "cross basis".into())
}

fn n2_forms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = if rng.random_bool(0.5) {
        random_integer_tensor(2, 3, rng)
    } else {
        let b = distinct_betas(2, 6, rng);
        act(&rational_orthogonal(2, rng), &make_fd(&[Rational::from_int(b[0]), Rational::from_int(b[1])]))
            .map_err(err)?
    };
    let c = classify_n2(&g, Tolerance::default()).map_err(err)?;
    ensure(c.residuals[0].check == c.residuals[1].check, || "forms disagree".into())
}

/// The eight reduced tensors of a decoupleable n = 2 tensor are the
/// signed permutations of its `(β1, β2)`.
fn n2_census(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let b = distinct_betas(2, 6, rng);
    let seed = make_fd(&[Rational::from_int(b[0]), Rational::from_int(b[1])]);
    let g = act(&rational_orthogonal(2, rng), &seed).map_err(err)?;
    let rep = recover_n2(&g).map_err(err)?;
    let mut got: Vec<(Rational, Rational)> = Vec::new();
    for br in &rep.branches {
        ensure(act(&br.map, &g).map_err(err)? == br.reduced, || "branch does not verify".into())?;
        let [a0, _, _, a3] = br.reduced.n2_params().map_err(err)?;
        got.push((a0, a3));
    }
    let mut want = Vec::new();
    for (x, y) in [(b[0], b[1]), (b[1], b[0])] {
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            want.push((Rational::from_int(sx * x), Rational::from_int(sy * y)));
        }
    }
    got.sort();
    want.sort();
    ensure(got == want, || format!("{got:?}"))
}

fn fd3_round_trip(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let b = distinct_betas(3, 6, rng);
    let seed: Vec<Rational> = b.iter().map(|&x| Rational::from_int(x)).collect();
    let g = act(&rational_orthogonal(3, rng), &make_fd(&seed)).map_err(err)?;
    let c = classify_fd_n3(&g, Tolerance::default()).map_err(err)?;
    ensure(c.residuals.iter().all(|r| r.residual == Rational::from_int(0)), || "nonzero residual".into())?;
    let Verdict::FullyDecoupleable { betas } = c.verdict else {
        return Err(format!("{:?}", c.verdict));
    };
    let mut want: Vec<f64> = b.iter().map(|x| x.abs() as f64).collect();
    want.sort_by(f64::total_cmp);
    ensure(betas.iter().zip(&want).all(|(x, y)| (x - y).abs() <= 1e-8 * y), || format!("{betas:?}"))?;
    ensure(fd_necessary_quick(&g, Tolerance::default()), || "quick test".into())
}

fn pd3_round_trip(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = random_pd_params(4, rng);
    let g = act(&rational_orthogonal(3, rng), &make_pd_canonical(&p)).map_err(err)?;
    let c = classify_pd_not_fd_n3(&g, Tolerance::default()).map_err(err)?;
    ensure(c.verdict.is_accepted(), || format!("{:?}", c.verdict))?;
    ensure(c.qtilde == p.forward_q().to_vec(), || "q mismatch".into())
}

fn dense_rejected(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = random_gaussian_tensor(3, rng);
    let tol = Tolerance::default();
    let fd = classify_fd_n3(&g, tol).map_err(err)?;
    let pd = classify_pd_not_fd_n3(&g, tol).map_err(err)?;
    ensure(fd.verdict == Verdict::NotDecoupleable, || format!("fd3 {:?}", fd.verdict))?;
    ensure(pd.verdict == Verdict::NotDecoupleable, || format!("pd3 {:?}", pd.verdict))
}

fn generic_agreement(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g: SymTensor3<f64> = if rng.random_bool(0.5) {
        let b: Vec<f64> = distinct_betas(3, 6, rng).into_iter().map(|x| x as f64).collect();
        act(&haar_with_rng(3, rng), &make_fd(&b)).map_err(err)?
    } else {
        random_gaussian_tensor(3, rng)
    };
    let tol = Tolerance::default();
    let gen = classify_fd_generic(&g, tol).map_err(err)?;
    if matches!(gen.verdict, Verdict::Indeterminate { .. }) {
        return Ok(());
    }
    let fd = classify_fd_n3(&g, tol).map_err(err)?;
    ensure(gen.verdict.is_accepted() == fd.verdict.is_accepted(), || {
        format!("{:?} vs {:?}", gen.verdict, fd.verdict)
    })
}

fn molien_tables() -> Result<(), String> {
    let so2 = molien_series(Group::So2, 12, 96).map_err(err)?;
    let o2 = molien_series(Group::O2, 12, 96).map_err(err)?;
    ensure(so2.coefficients == [1, 0, 2, 0, 5, 0, 8, 0, 13, 0, 18, 0, 25], || format!("{:?}", so2.coefficients))?;
    ensure(o2.coefficients == [1, 0, 2, 0, 4, 0, 6, 0, 9, 0, 12, 0, 16], || format!("{:?}", o2.coefficients))?;
    ensure(so2.drift() < 1e-6 && o2.drift() < 1e-6, || "drift".into())
}

fn flow_facts() -> Result<(), String> {
    let l = ode_generator();
    let e = ode_eigenbasis();
    let lam = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&ode_rates()));
    let lc = l.map(|x| nalgebra::Complex::new(x, 0.0));
    let defect = (&e * &lc - &lam * &e).iter().map(|z| z.norm()).fold(0.0, f64::max);
    ensure(defect < 1e-12, || format!("E L - diag E = {defect:e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes() {
        let out = run(7, 4);
        assert_eq!(out.len(), property_names().len());
        for o in &out {
            assert!(o.passed(), "{}: {:?}", o.name, o.first_failure);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(run(3, 2), run(3, 2));
    }
}
