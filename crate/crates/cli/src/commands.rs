//! Subcommand handlers. Each returns a JSON report and an exit code.

use std::fmt::Display;
use std::path::Path;

use serde_json::{json, Map, Value};

use tridec_core::battery;
use tridec_core::decouple::{
    classify_fd_generic, classify_fd_n3, classify_n2, classify_pd_not_fd_n3, Classification, Verdict,
};
use tridec_core::invariants::{oa_basis, so2_basis, OA_NAMES};
use tridec_core::molien::{default_points, molien_series, Group};
use tridec_core::orbitlab::{orbit_search_oracle, sample_exact, sample_float, OracleBudget, OrbitSample, SampleKind};
use tridec_core::recover::{
    recover_fd_via_covariant, recover_n2, recover_pd_rotation, PdParams, RecoveryReport, RECOVERY_TOL,
};
use tridec_core::scalar::{Check, Scalar, Tolerance};
use tridec_core::tensor::{Pattern, SymTensor3};
use tridec_core::Error;

use crate::doc::{self, map_doc, scalar_string, tensor_doc, Tensor};
use crate::{
    Basis, ClassifyMode, Command, Failure, GroupArg, KindArg, PatternArg, RecoverMode, EXIT_INDETERMINATE, EXIT_OK,
    EXIT_REJECTED, REPORT_SCHEMA,
};

pub type Outcome = Result<(Value, i32), Failure>;

pub fn execute(cmd: &Command) -> Outcome {
    match cmd {
        Command::Invariants { basis, input, exact } => invariants(*basis, input, *exact),
        Command::Classify { mode, input, tol, exact } => classify(*mode, input, *tol, *exact),
        Command::Recover { mode, input, exact } => recover(*mode, input, *exact),
        Command::Molien { group, max_degree, points } => molien(*group, *max_degree, *points),
        Command::Sample { kind, n, seed, exact } => sample(*kind, *n, *seed, *exact),
        Command::Oracle {
            pattern,
            input,
            budget,
            seed,
            steps,
        } => oracle(*pattern, input, *budget, *seed, *steps),
        Command::Verify { seed, cases } => verify(*seed, *cases),
    }
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("schema".into(), json!(REPORT_SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

struct Input {
    tensor: Tensor,
    digest: String,
}

impl Input {
    fn load(path: &Path, exact: bool) -> Result<Self, Failure> {
        let bytes = crate::read_input(path)?;
        let mut tensor = doc::parse(&bytes)?;
        if exact {
            tensor = tensor.into_exact();
        }
        Ok(Self {
            tensor,
            digest: doc::digest(&bytes),
        })
    }

    fn header(&self, command: &str) -> Map<String, Value> {
        let mut m = header(command);
        m.insert("input_digest".into(), json!(self.digest));
        m.insert("mode".into(), json!(self.tensor.mode()));
        m.insert("n".into(), json!(self.tensor.n()));
        m
    }

    fn require_n(&self, n: usize, what: &str) -> Result<(), Failure> {
        if self.tensor.n() == n {
            Ok(())
        } else {
            Err(Failure::Malformed(format!("{what} needs n = {n}, document has n = {}", self.tensor.n())))
        }
    }
}

/// Core errors caused by the input document.
fn input_failure(e: Error) -> Failure {
    Failure::Malformed(e.to_string())
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Pass => "pass",
        Check::Boundary => "boundary",
        Check::Fail => "fail",
    }
}

fn named<S: Scalar + Display>(values: &[(&str, S)]) -> Value {
    Value::Object(values.iter().map(|(k, v)| (k.to_string(), scalar_string(v))).collect())
}

fn params_json<S: Scalar + Display>(p: &PdParams<S>) -> Value {
    named(&p.values())
}

fn verdict_json(v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(v.name()));
    match v {
        Verdict::FullyDecoupleable { betas } => {
            m.insert("betas".into(), json!(betas));
        }
        Verdict::PartiallyNotFully { params } => {
            m.insert("params".into(), params_json(params));
        }
        Verdict::NotDecoupleable => {}
        Verdict::Indeterminate { reason } => {
            m.insert("reason".into(), json!(reason.as_str()));
        }
    }
    Value::Object(m)
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::FullyDecoupleable { .. } | Verdict::PartiallyNotFully { .. } => EXIT_OK,
        Verdict::NotDecoupleable => EXIT_REJECTED,
        Verdict::Indeterminate { .. } => EXIT_INDETERMINATE,
    }
}

fn classification_json<S: Scalar + Display>(c: &Classification<S>, out: &mut Map<String, Value>) {
    out.insert("verdict".into(), verdict_json(&c.verdict));
    let rows: Vec<Value> = c
        .residuals
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "degree": r.degree,
                "residual": scalar_string(&r.residual),
                "normalized": r.normalized,
                "check": check_name(r.check),
            })
        })
        .collect();
    out.insert("residuals".into(), Value::Array(rows));
    out.insert("max_normalized".into(), json!(c.max_normalized()));
    let certs: Vec<Value> = c
        .certificates
        .iter()
        .map(|x| json!({"name": x.name, "passed": x.passed, "detail": x.detail}))
        .collect();
    out.insert("certificates".into(), Value::Array(certs));
    out.insert("map".into(), c.map.as_ref().map_or(Value::Null, map_doc));
    out.insert("qtilde".into(), Value::Array(c.qtilde.iter().map(scalar_string).collect()));
    out.insert(
        "exact_params".into(),
        c.exact_params.as_ref().map_or(Value::Null, params_json),
    );
}

fn invariants(basis: Basis, path: &Path, exact: bool) -> Outcome {
    let input = Input::load(path, exact)?;
    let mut out = input.header("invariants");
    let basis_name = match basis {
        Basis::So2 => "so2",
        Basis::O2 => "o2",
        Basis::Oa => "oa",
    };
    out.insert("basis".into(), json!(basis_name));
    let values = match basis {
        Basis::So2 | Basis::O2 => {
            input.require_n(2, "an n = 2 basis")?;
            fn rows<S: Scalar + Display>(g: &SymTensor3<S>, so2: bool) -> Result<Vec<Value>, Failure> {
                let inv = so2_basis(g).map_err(input_failure)?;
                let degree = |name: &str| if name.ends_with('4') || name == "i3" { 4 } else { 2 };
                let list: Vec<(&str, S)> = if so2 { inv.so2().to_vec() } else { inv.o2().to_vec() };
                Ok(list
                    .iter()
                    .map(|(k, v)| json!({"name": k, "degree": degree(k), "value": scalar_string(v)}))
                    .collect())
            }
            let so2 = basis == Basis::So2;
            match &input.tensor {
                Tensor::Exact(g) => rows(g, so2)?,
                Tensor::Float(g) => rows(g, so2)?,
            }
        }
        Basis::Oa => {
            input.require_n(3, "the O(3) basis")?;
            fn rows<S: Scalar + Display>(g: &SymTensor3<S>) -> Result<Vec<Value>, Failure> {
                let inv = oa_basis(g).map_err(input_failure)?;
                Ok(OA_NAMES
                    .iter()
                    .map(|&(k, d)| json!({"name": k, "degree": d, "value": scalar_string(inv.get(k).expect("known name"))}))
                    .collect())
            }
            match &input.tensor {
                Tensor::Exact(g) => rows(g)?,
                Tensor::Float(g) => rows(g)?,
            }
        }
    };
    out.insert("values".into(), Value::Array(values));
    Ok((Value::Object(out), EXIT_OK))
}

fn classify(mode: ClassifyMode, path: &Path, tol: f64, exact: bool) -> Outcome {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive and finite, got {tol}")));
    }
    let input = Input::load(path, exact)?;
    let tol = Tolerance::new(tol);
    let mode_name = match mode {
        ClassifyMode::N2 => "n2",
        ClassifyMode::Fd3 => "fd3",
        ClassifyMode::Pd3 => "pd3",
        ClassifyMode::Generic => "generic",
    };
    match mode {
        ClassifyMode::N2 => input.require_n(2, "mode n2")?,
        ClassifyMode::Fd3 | ClassifyMode::Pd3 => input.require_n(3, &format!("mode {mode_name}"))?,
        ClassifyMode::Generic if input.tensor.n() < 2 => {
            return Err(Failure::Malformed("mode generic needs n >= 2".into()))
        }
        ClassifyMode::Generic => {}
    }
    fn run<S: Scalar + Display>(
        mode: ClassifyMode,
        g: &SymTensor3<S>,
        tol: Tolerance,
        out: &mut Map<String, Value>,
    ) -> Result<i32, Failure> {
        let c = match mode {
            ClassifyMode::N2 => classify_n2(g, tol),
            ClassifyMode::Fd3 => classify_fd_n3(g, tol),
            ClassifyMode::Pd3 => classify_pd_not_fd_n3(g, tol),
            ClassifyMode::Generic => classify_fd_generic(g, tol),
        }
        .map_err(input_failure)?;
        classification_json(&c, out);
        Ok(verdict_code(&c.verdict))
    }
    let mut out = input.header("classify");
    out.insert("classify_mode".into(), json!(mode_name));
    out.insert("tol".into(), json!(tol.rel));
    let code = match &input.tensor {
        Tensor::Exact(g) => run(mode, g, tol, &mut out)?,
        Tensor::Float(g) => run(mode, g, tol, &mut out)?,
    };
    Ok((Value::Object(out), code))
}

fn recovery_json<S: Scalar + Display>(rep: &RecoveryReport<S>, out: &mut Map<String, Value>) {
    let maps: Vec<Value> = rep
        .branches
        .iter()
        .map(|b| {
            let mut m = map_doc(&b.map);
            m["residual"] = json!(b.residual);
            m
        })
        .collect();
    out.insert("maps".into(), Value::Array(maps));
    out.insert("reduced".into(), tensor_doc(&rep.reduced));
    out.insert("residual".into(), json!(rep.residual));
    out.insert("branch_count".into(), json!(rep.branch_count));
}

/// Status line and exit code for a recovery that produced no map.
fn recovery_failure(e: Error, out: &mut Map<String, Value>) -> Result<i32, Failure> {
    let (status, code) = match e {
        Error::NotDecoupleable => ("not_decoupleable", EXIT_REJECTED),
        Error::ZeroTensor | Error::DegenerateEigenvalues | Error::NoCandidateMatches => {
            ("indeterminate", EXIT_INDETERMINATE)
        }
        e => return Err(input_failure(e)),
    };
    out.insert("status".into(), json!(status));
    out.insert("reason".into(), json!(e.to_string()));
    out.insert("maps".into(), json!([]));
    Ok(code)
}

fn recovered(out: &mut Map<String, Value>, field: &str) -> i32 {
    out.insert("status".into(), json!("recovered"));
    out.insert("field".into(), json!(field));
    EXIT_OK
}

fn recover(mode: RecoverMode, path: &Path, exact: bool) -> Outcome {
    let input = Input::load(path, exact)?;
    let mut out = input.header("recover");
    let code = match mode {
        RecoverMode::N2 => {
            input.require_n(2, "mode n2")?;
            out.insert("recover_mode".into(), json!("n2"));
            let float_path = |g: &SymTensor3<f64>, out: &mut Map<String, Value>| match recover_n2(g) {
                Ok(rep) => {
                    recovery_json(&rep, out);
                    Ok(recovered(out, "float"))
                }
                Err(e) => recovery_failure(e, out),
            };
            match &input.tensor {
                Tensor::Exact(g) => match recover_n2(g) {
                    Ok(rep) => {
                        recovery_json(&rep, &mut out);
                        recovered(&mut out, "exact")
                    }
                    Err(Error::NotRepresentable(_)) => float_path(&g.to_f64(), &mut out)?,
                    Err(e) => recovery_failure(e, &mut out)?,
                },
                Tensor::Float(g) => float_path(g, &mut out)?,
            }
        }
        RecoverMode::Generic => {
            out.insert("recover_mode".into(), json!("generic"));
            let g = input.tensor.to_f64();
            if g.n() < 2 {
                return Err(Failure::Malformed("mode generic needs n >= 2".into()));
            }
            if g.is_zero() {
                recovery_failure(Error::ZeroTensor, &mut out)?
            } else {
                match recover_fd_via_covariant(&g) {
                    Ok(rep) if rep.branches.is_empty() => {
                        let bound = RECOVERY_TOL * (1.0 + g.frobenius());
                        recovery_json(&rep, &mut out);
                        if rep.residual <= 10.0 * bound {
                            out.insert("status".into(), json!("indeterminate"));
                            EXIT_INDETERMINATE
                        } else {
                            out.insert("status".into(), json!("not_decoupleable"));
                            EXIT_REJECTED
                        }
                    }
                    Ok(rep) => {
                        recovery_json(&rep, &mut out);
                        recovered(&mut out, "float")
                    }
                    Err(e) => recovery_failure(e, &mut out)?,
                }
            }
        }
        RecoverMode::Pd3 => {
            input.require_n(3, "mode pd3")?;
            out.insert("recover_mode".into(), json!("pd3"));
            let verdict = match &input.tensor {
                Tensor::Exact(g) => classify_pd_not_fd_n3(g, Tolerance::default()).map(|c| c.verdict),
                Tensor::Float(g) => classify_pd_not_fd_n3(g, Tolerance::default()).map(|c| c.verdict),
            }
            .map_err(input_failure)?;
            out.insert("verdict".into(), verdict_json(&verdict));
            match &verdict {
                Verdict::PartiallyNotFully { params } => {
                    match recover_pd_rotation(&input.tensor.to_f64(), params) {
                        Ok(rep) => {
                            recovery_json(&rep, &mut out);
                            recovered(&mut out, "float")
                        }
                        Err(e) => recovery_failure(e, &mut out)?,
                    }
                }
                Verdict::NotDecoupleable => recovery_failure(Error::NotDecoupleable, &mut out)?,
                v => {
                    out.insert("status".into(), json!("indeterminate"));
                    out.insert("maps".into(), json!([]));
                    verdict_code(v)
                }
            }
        }
    };
    Ok((Value::Object(out), code))
}

fn molien(group: GroupArg, max_degree: usize, points: Option<usize>) -> Outcome {
    let group = match group {
        GroupArg::So2 => Group::So2,
        GroupArg::O2 => Group::O2,
    };
    let points = points.unwrap_or_else(|| default_points(max_degree));
    let series = molien_series(group, max_degree, points).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = header("molien");
    out.insert("group".into(), json!(group.as_str()));
    out.insert("max_degree".into(), json!(max_degree));
    out.insert("points".into(), json!(points));
    out.insert("coefficients".into(), json!(series.coefficients));
    out.insert("drift".into(), json!(series.drift()));
    Ok((Value::Object(out), EXIT_OK))
}

fn sample(kind: KindArg, n: usize, seed: u64, exact: bool) -> Outcome {
    let (sk, name) = match kind {
        KindArg::Fd => (SampleKind::Fd, "fd"),
        KindArg::Pd => (SampleKind::PdNotFd, "pd"),
        KindArg::Generic => (SampleKind::Generic, "generic"),
    };
    if !(1..=16).contains(&n) {
        return Err(Failure::Usage(format!("--n must lie in 1..=16, got {n}")));
    }
    fn document<S: Scalar + Display>(s: &OrbitSample<S>, name: &str, seed: u64) -> Value {
        let mut d = tensor_doc(&s.point());
        d["tool_version"] = json!(env!("CARGO_PKG_VERSION"));
        d["sample"] = json!({
            "kind": name,
            "seed": seed,
            "map": map_doc(&s.map),
            "seed_form": tensor_doc(&s.seed_form),
        });
        d
    }
    let usage = |e: Error| Failure::Usage(e.to_string());
    let doc = if exact {
        document(&sample_exact(sk, n, seed).map_err(usage)?, name, seed)
    } else {
        document(&sample_float(sk, n, seed).map_err(usage)?, name, seed)
    };
    Ok((doc, EXIT_OK))
}

fn oracle(pattern: PatternArg, path: &Path, starts: usize, seed: u64, steps: usize) -> Outcome {
    if starts == 0 || steps == 0 {
        return Err(Failure::Usage("--budget and --steps must be positive".into()));
    }
    let input = Input::load(path, false)?;
    if input.tensor.n() < 2 {
        return Err(Failure::Malformed("the oracle needs n >= 2".into()));
    }
    let (pat, name) = match pattern {
        PatternArg::Fd => (Pattern::Full, "fd"),
        PatternArg::Pd => (Pattern::Partial, "pd"),
    };
    let budget = OracleBudget { starts, steps, seed };
    let res = orbit_search_oracle(&input.tensor.to_f64(), pat, budget).map_err(input_failure)?;
    let mut out = input.header("oracle");
    out.insert("pattern".into(), json!(name));
    out.insert("budget".into(), json!({"starts": starts, "steps": steps, "seed": seed}));
    out.insert("min_residual".into(), json!(res.min_residual));
    out.insert("map".into(), map_doc(&res.map));
    out.insert("evaluations".into(), json!(res.evaluations));
    Ok((Value::Object(out), EXIT_OK))
}

fn verify(seed: u64, cases: usize) -> Outcome {
    if cases == 0 {
        return Err(Failure::Usage("--cases must be positive".into()));
    }
    let outcomes = battery::run(seed, cases);
    let passed = outcomes.iter().all(|o| o.passed());
    let props: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "cases": o.cases,
                "failures": o.failures,
                "first_failure": o.first_failure,
            })
        })
        .collect();
    let mut out = header("verify");
    out.insert("seed".into(), json!(seed));
    out.insert("cases".into(), json!(cases));
    out.insert("properties".into(), Value::Array(props));
    out.insert("passed".into(), json!(passed));
    Ok((Value::Object(out), if passed { EXIT_OK } else { EXIT_REJECTED }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::scalar_value;

    #[test]
    fn verdict_codes() {
        assert_eq!(verdict_code(&Verdict::NotDecoupleable), EXIT_REJECTED);
        assert_eq!(verdict_code(&Verdict::FullyDecoupleable { betas: vec![1.0, 2.0] }), EXIT_OK);
    }

    #[test]
    fn molien_report_lists_coefficients() {
        let (v, code) = molien(GroupArg::O2, 8, None).unwrap();
        assert_eq!(code, EXIT_OK);
        assert_eq!(v["coefficients"], json!([1, 0, 2, 0, 4, 0, 6, 0, 9]));
        assert!(molien(GroupArg::So2, 99, None).is_err());
    }

    #[test]
    fn scalar_rendering() {
        assert_eq!(scalar_value(&1.5f64), json!(1.5));
        assert_eq!(scalar_value(&tridec_core::scalar::ratio(-3, 4)), json!("-3/4"));
    }
}
