//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tridec_core::covariants::{star2, u_dot_gamma};
use tridec_core::decouple::{
    classify_fd_generic, classify_fd_n3, classify_n2, classify_pd_not_fd_n3, fd_necessary_quick, Verdict,
};
use tridec_core::invariants::{oa_basis, qtilde_full, qtilde_partial_from, so2_basis};
use tridec_core::linalg::sym_eigen;
use tridec_core::molien::{molien_series, Group};
use tridec_core::orbitlab::{
    canonical_star2, distinct_betas, haar_with_rng, make_fd, make_pd_canonical, orbit_search_oracle,
    random_gaussian_tensor, random_integer_tensor, random_pd_params, rational_orthogonal, OracleBudget,
};
use tridec_core::recover::{ode_eigenbasis, ode_generator, recover_n2, recover_pd_rotation};
use tridec_core::scalar::{ratio, Rational, Scalar, Tolerance};
use tridec_core::tensor::{act, tensor_from_cubic, Cubic, Pattern, SymTensor3};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(k: i64) -> Rational {
    ratio(k, 1)
}

fn zero() -> Rational {
    r(0)
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut g = ChaCha8Rng::seed_from_u64(20240611);
    g.set_stream(stream);
    g
}

/// `2x₁³ + 3x₁²x₂ + 3x₂³ - 12x₁x₂x₃ + 6x₃³`
fn dense_sample() -> SymTensor3<Rational> {
    let c: Cubic<Rational> = [
        (vec![3, 0, 0], r(2)),
        (vec![2, 1, 0], r(3)),
        (vec![0, 3, 0], r(3)),
        (vec![1, 1, 1], r(-12)),
        (vec![0, 0, 3], r(6)),
    ]
    .into_iter()
    .collect();
    tensor_from_cubic(&c, 3).expect("cubic in three variables")
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let res = f();
    let took = start.elapsed();
    match (res, limit) {
        (Ok(_), Some(l)) if took > l => Err(format!("took {:.2?}, limit {:.2?}", took, l)),
        (Ok(m), _) => Ok(format!("{m} ({took:.2?})")),
        (Err(e), _) => Err(e),
    }
}

fn ac1() -> Outcome {
    let g = dense_sample();
    let inv = oa_basis(&g).map_err(|e| e.to_string())?;
    ensure(inv.h2 == r(1060), || format!("H2 = {}", inv.h2))?;
    ensure(inv.h4 == r(518384), || format!("H4 = {}", inv.h4))?;
    ensure(inv.j2 == r(56), || format!("J2 = {}", inv.j2))?;
    ensure(inv.l4 == r(-4528), || format!("L4 = {}", inv.l4))?;
    let q1 = qtilde_partial_from(&inv)[0].clone();
    ensure(q1.abs() == ratio(332, 15), || format!("q1 = {q1}"))?;
    let tol = Tolerance::default();
    let fd = classify_fd_n3(&g, tol).map_err(|e| e.to_string())?;
    let pd = classify_pd_not_fd_n3(&g, tol).map_err(|e| e.to_string())?;
    ensure(fd.verdict == Verdict::NotDecoupleable, || format!("fd3: {:?}", fd.verdict))?;
    ensure(pd.verdict == Verdict::NotDecoupleable, || format!("pd3: {:?}", pd.verdict))?;
    let oracle = orbit_search_oracle(&g, Pattern::Full, OracleBudget::default()).map_err(|e| e.to_string())?;
    ensure(oracle.min_residual > 1e-3, || format!("oracle residual {:e}", oracle.min_residual))?;
    Ok(format!("q1 = {q1}, oracle residual {:.3}", oracle.min_residual))
}

fn ac2() -> Outcome {
    let so2 = molien_series(Group::So2, 12, 96).map_err(|e| e.to_string())?;
    let o2 = molien_series(Group::O2, 12, 96).map_err(|e| e.to_string())?;
    ensure(so2.coefficients == [1, 0, 2, 0, 5, 0, 8, 0, 13, 0, 18, 0, 25], || format!("SO(2) {:?}", so2.coefficients))?;
    ensure(o2.coefficients == [1, 0, 2, 0, 4, 0, 6, 0, 9, 0, 12, 0, 16], || format!("O(2) {:?}", o2.coefficients))?;
    let drift = so2.drift().max(o2.drift());
    ensure(drift < 1e-6, || format!("drift {drift:e}"))?;
    Ok(format!("drift {drift:.1e}"))
}

fn random_n2(g: &mut ChaCha8Rng) -> [Rational; 4] {
    std::array::from_fn(|_| ratio(g.random_range(-6..=6), g.random_range(1..=3)))
}

fn ac3() -> Outcome {
    // both criterion forms, evaluated directly from the coordinates
    let disagreements: usize = (0..100_000u64)
        .into_par_iter()
        .filter(|&i| {
            let g = &mut rng(1 << 40 | i);
            let a = if i % 10 == 0 {
                let b = distinct_betas(2, 6, g);
                let t = act(&rational_orthogonal(2, g), &make_fd(&[r(b[0]), r(b[1])])).unwrap();
                t.n2_params().unwrap()
            } else {
                random_n2(g)
            };
            let [a0, a1, a2, a3] = a.clone();
            let rel = a2.clone() * (a2.clone() - a0.clone()) == a1.clone() * (a3.clone() - a1.clone());
            let i1 = (a1.clone() + a3.clone()).pow(2) + (a0.clone() + a2.clone()).pow(2);
            let i2 = a0.pow(2) + r(3) * a1.pow(2) + r(3) * a2.pow(2) + a3.pow(2);
            let c = classify_n2(&SymTensor3::from_n2_params(a), Tolerance::default()).unwrap();
            rel != (i1 == i2) || rel != c.verdict.is_accepted() || !c.certificates[0].passed
        })
        .count();
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;

    let census: Vec<Result<(), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let g = &mut rng(2 << 40 | i);
            let b = distinct_betas(2, 7, g);
            let exact = i % 2 == 0;
            let reduced: Vec<(f64, f64)> = if exact {
                let t = act(&rational_orthogonal(2, g), &make_fd(&[r(b[0]), r(b[1])])).unwrap();
                let rep = recover_n2(&t).map_err(|e| e.to_string())?;
                ensure(rep.residual == 0.0, || format!("exact residual {}", rep.residual))?;
                let mut out = Vec::new();
                for br in &rep.branches {
                    ensure(act(&br.map, &t).unwrap() == br.reduced, || "branch fails act".into())?;
                    ensure(br.reduced.fits_pattern(Pattern::Full), || "not reduced".into())?;
                    let [a0, _, _, a3] = br.reduced.n2_params().unwrap();
                    out.push((a0.to_f64(), a3.to_f64()));
                }
                out
            } else {
                let seed = make_fd(&[b[0] as f64, b[1] as f64]);
                let t = act(&haar_with_rng(2, g), &seed).unwrap();
                let rep = recover_n2(&t).map_err(|e| e.to_string())?;
                let mut out = Vec::new();
                for br in &rep.branches {
                    let v = act(&br.map, &t).unwrap();
                    let res = v.off_pattern_max(Pattern::Full);
                    ensure(res <= 1e-9, || format!("float residual {res:e}"))?;
                    let [a0, _, _, a3] = v.n2_params().unwrap();
                    out.push((a0, a3));
                }
                out
            };
            ensure(reduced.len() == 8, || format!("{} branches", reduced.len()))?;
            let key = |x: f64| (x * 1e6).round() as i64;
            let mut keys: Vec<(i64, i64)> = reduced.iter().map(|&(x, y)| (key(x), key(y))).collect();
            keys.sort();
            keys.dedup();
            ensure(keys.len() == 8, || format!("{} distinct reduced tensors", keys.len()))
        })
        .collect();
    let failures: Vec<_> = census.into_iter().filter_map(Result::err).collect();
    ensure(failures.is_empty(), || format!("{} census failures, first: {}", failures.len(), failures[0]))?;
    Ok("1e5 criterion comparisons, 1e3 eight-branch censuses".into())
}

fn ac4() -> Outcome {
    let results: Vec<Result<(), String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let g = &mut rng(4 << 40 | i);
            let b = distinct_betas(3, 7, g);
            let mut want: Vec<f64> = b.iter().map(|x| x.abs() as f64).collect();
            want.sort_by(f64::total_cmp);
            let tol = Tolerance::default();

            let exact = act(&rational_orthogonal(3, g), &make_fd(&b.iter().map(|&x| r(x)).collect::<Vec<_>>())).unwrap();
            let c = classify_fd_n3(&exact, tol).map_err(|e| e.to_string())?;
            ensure(c.verdict.is_accepted(), || format!("exact verdict {:?}", c.verdict))?;
            ensure(c.residuals.len() == 13 && c.residuals.iter().all(|x| x.residual == zero()), || {
                "nonzero exact residual".into()
            })?;

            let fl = act(&haar_with_rng(3, g), &make_fd(&b.iter().map(|&x| x as f64).collect::<Vec<_>>())).unwrap();
            let c = classify_fd_n3(&fl, tol).map_err(|e| e.to_string())?;
            let Verdict::FullyDecoupleable { betas } = c.verdict else {
                return Err(format!("float verdict {:?}", c.verdict));
            };
            ensure(betas.iter().zip(&want).all(|(x, y)| (x - y).abs() <= 1e-8 * y), || format!("{betas:?} vs {want:?}"))?;

            let gen = classify_fd_generic(&fl, tol).map_err(|e| e.to_string())?;
            let map = gen.map.ok_or_else(|| format!("generic verdict {:?}", gen.verdict))?;
            let res = act(&map, &fl).unwrap().off_pattern_max(Pattern::Full);
            ensure(res <= 1e-8 * (1.0 + fl.frobenius()), || format!("generic residual {res:e}"))
        })
        .collect();
    let failures: Vec<_> = results.into_iter().filter_map(Result::err).collect();
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok("500 rotated diagonal tensors".into())
}

fn ac5() -> Outcome {
    let rotations = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<Result<(), String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let g = &mut rng(5 << 40 | i);
            let p = random_pd_params(5, g);
            let gamma = act(&rational_orthogonal(3, g), &make_pd_canonical(&p)).unwrap();
            let c = classify_pd_not_fd_n3(&gamma, Tolerance::default()).map_err(|e| e.to_string())?;
            ensure(c.verdict.is_accepted(), || format!("verdict {:?} for {p:?}", c.verdict))?;
            ensure(c.residuals.len() == 9 && c.residuals.iter().all(|x| x.residual == zero()), || {
                "nonzero residual".into()
            })?;
            ensure(c.qtilde == p.forward_q().to_vec(), || "q mismatch".into())?;

            let rs = canonical_star2(&p).to_f64();
            if !sym_eigen(&rs).is_distinct(rs.frobenius()) {
                return Ok(());
            }
            let Verdict::PartiallyNotFully { params } = &c.verdict else { unreachable!() };
            let rep = recover_pd_rotation(&gamma.to_f64(), params).map_err(|e| e.to_string())?;
            let target = make_pd_canonical(params);
            let gf = gamma.to_f64();
            let map = rep.branches.first().map(|b| b.map.clone()).ok_or("no map")?;
            let res = act(&map, &gf).unwrap().sub(&target).max_abs();
            ensure(res <= 1e-8 * (1.0 + gf.frobenius()), || format!("rotation residual {res:e}"))?;
            rotations.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            Ok(())
        })
        .collect();
    let failures: Vec<_> = results.into_iter().filter_map(Result::err).collect();
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok(format!("500 rotated canonical forms, {} rotations verified", rotations.into_inner()))
}

fn ac6() -> Outcome {
    let threshold = Tolerance::default().rel / 10.0;
    let results: Vec<Result<f64, String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let g = &mut rng(6 << 40 | i);
            let tol = Tolerance::default();
            let fl = random_gaussian_tensor(3, g);
            let mut worst = f64::INFINITY;
            for c in [classify_fd_n3(&fl, tol), classify_pd_not_fd_n3(&fl, tol)] {
                let c = c.map_err(|e| e.to_string())?;
                ensure(c.verdict == Verdict::NotDecoupleable, || format!("float verdict {:?}", c.verdict))?;
                let m = c.max_normalized();
                ensure(m > 1e3 * threshold, || format!("max residual {m:e}"))?;
                worst = worst.min(m);
            }
            let m = star2(&fl);
            let differs = m.max_abs_diff(&u_dot_gamma(&fl)) > 1e-6 * (1.0 + m.max_abs());
            ensure(!differs || !fd_necessary_quick(&fl, tol), || "quick test accepted".into())?;

            let ex = random_integer_tensor(3, 5, g);
            for c in [classify_fd_n3(&ex, tol), classify_pd_not_fd_n3(&ex, tol)] {
                let c = c.map_err(|e| e.to_string())?;
                ensure(!c.verdict.is_accepted(), || format!("exact verdict {:?}", c.verdict))?;
            }
            Ok(worst)
        })
        .collect();
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(w) => worst = worst.min(w),
            Err(e) => failures.push(e),
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok(format!("smallest max residual {worst:.2e}"))
}

fn ac7() -> Outcome {
    let bad = (0..10_000u64)
        .into_par_iter()
        .filter(|&i| {
            let a = random_n2(&mut rng(7 << 40 | i));
            let inv = so2_basis(&SymTensor3::from_n2_params(a)).unwrap();
            let (j2, h2, l4, m4) = (inv.j2, inv.h2, inv.l4, inv.m4);
            let syz = -h2.clone() * j2.pow(3) + r(4) * l4.pow(2) + r(4) * m4.pow(2);
            let i2 = (h2.clone() + r(12) * j2.clone()) / r(16);
            let i3 = (h2.pow(2) + r(8) * h2.clone() * j2.clone() + r(80) * j2.pow(2) - r(128) * l4) / r(1024);
            syz != zero() || i2 != inv.i2 || i3 != inv.i3
        })
        .count();
    ensure(bad == 0, || format!("{bad} violations"))?;
    Ok("1e4 tensors".into())
}

fn ac8() -> Outcome {
    for i in 0..200u64 {
        let g = &mut rng(8 << 40 | i);
        let n = 3;
        let b: Vec<Rational> = (0..n).map(|_| ratio(g.random_range(-9..=9), g.random_range(1..=3))).collect();
        let fd = make_fd(&b);
        let inv = oa_basis(&fd).unwrap();
        let q1 = qtilde_full(&fd)[0].clone();
        ensure(inv.h2 == r(10) * q1, || "H2 != 10 q1".into())?;
        let rotated = act(&rational_orthogonal(3, g), &fd).unwrap();
        let inv = oa_basis(&rotated).unwrap();
        ensure(inv.h2 == r(10) * inv.j2.clone(), || "H2 != 10 J2".into())?;
    }
    let l = ode_generator();
    let mut ev: Vec<(f64, f64)> = l.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    ev.sort_by(|a, b| a.1.total_cmp(&b.1));
    for ((re, im), want) in ev.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
        ensure(re.abs() < 1e-12 && (im - want).abs() < 1e-12, || format!("eigenvalue {re}+{im}i"))?;
    }
    let e = ode_eigenbasis();
    let lc = l.map(|x| nalgebra::Complex::new(x, 0.0));
    let einv = e.clone().try_inverse().ok_or("E singular")?;
    let d = &e * &lc * &einv;
    let off = d
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 5 != 0)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    ensure(off < 1e-12, || format!("E L E^-1 off-diagonal {off:e}"))?;
    Ok("200 diagonal tensors, flow generator checks".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1", "dense sample golden values and rejection", Some(Duration::from_secs(1)), ac1),
        ("AC2", "Molien coefficient tables", Some(Duration::from_secs(1)), ac2),
        ("AC3", "n=2 criterion equivalence and eight-branch census", None, ac3),
        ("AC4", "n=3 full decoupling round trip", None, ac4),
        ("AC5", "n=3 partial decoupling round trip", None, ac5),
        ("AC6", "negative controls on dense tensors", None, ac6),
        ("AC7", "n=2 syzygy and cross-basis identities", None, ac7),
        ("AC8", "structural identities and flow generator", None, ac8),
    ];
    let mut failed = 0;
    for (id, what, limit, f) in criteria {
        match timed(limit, f) {
            Ok(msg) => println!("{id} PASS  {what}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL  {what}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
