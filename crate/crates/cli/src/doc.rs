//! Tensor documents: reading, mode detection and writing.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use tridec_core::scalar::{parse_rational, Rational, Scalar};
use tridec_core::ortho::OrthogonalMap;
use tridec_core::tensor::{tensor_from_cubic, Cubic, SymTensor3};

/// A parsed tensor in the field its document selected.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    Exact(SymTensor3<Rational>),
    Float(SymTensor3<f64>),
}

impl Tensor {
    pub fn n(&self) -> usize {
        match self {
            Tensor::Exact(t) => t.n(),
            Tensor::Float(t) => t.n(),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            Tensor::Exact(_) => "exact",
            Tensor::Float(_) => "float",
        }
    }

    /// Promote a float document to exact mode (binary values kept exactly).
    pub fn into_exact(self) -> Tensor {
        match self {
            Tensor::Float(t) => Tensor::Exact(t.map(|x| Rational::from_f64(*x).expect("finite entries"))),
            t => t,
        }
    }

    pub fn to_f64(&self) -> SymTensor3<f64> {
        match self {
            Tensor::Exact(t) => t.to_f64(),
            Tensor::Float(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError(pub String);

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> DocError {
    DocError(msg.into())
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

enum Raw {
    Exact(Rational),
    Float(f64),
}

fn raw_value(v: &Value) -> Result<Raw, DocError> {
    match v {
        Value::String(s) => parse_rational(s).map(Raw::Exact).map_err(|e| bad(e.to_string())),
        Value::Number(x) => {
            let x = x.as_f64().ok_or_else(|| bad("number out of range"))?;
            Ok(Raw::Float(x))
        }
        other => Err(bad(format!("value must be a string or number, got {other}"))),
    }
}

/// Collect values and reject documents that mix rational strings and numbers.
fn unify(values: Vec<Raw>) -> Result<Result<Vec<Rational>, Vec<f64>>, DocError> {
    let exact = values.iter().filter(|v| matches!(v, Raw::Exact(_))).count();
    if exact == values.len() {
        Ok(Ok(values
            .into_iter()
            .map(|v| match v {
                Raw::Exact(r) => r,
                Raw::Float(_) => unreachable!(),
            })
            .collect()))
    } else if exact == 0 {
        Ok(Err(values
            .into_iter()
            .map(|v| match v {
                Raw::Float(x) => x,
                Raw::Exact(_) => unreachable!(),
            })
            .collect()))
    } else {
        Err(bad("document mixes rational strings and floating-point numbers"))
    }
}

fn dimension(doc: &Map<String, Value>) -> Result<Option<usize>, DocError> {
    match doc.get("n") {
        None => Ok(None),
        Some(v) => {
            let n = v.as_u64().ok_or_else(|| bad("\"n\" must be a positive integer"))? as usize;
            if !(1..=64).contains(&n) {
                return Err(bad(format!("unsupported dimension {n}")));
            }
            Ok(Some(n))
        }
    }
}

pub fn parse(bytes: &[u8]) -> Result<Tensor, DocError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let doc = v.as_object().ok_or_else(|| bad("tensor document must be a JSON object"))?;
    match (doc.get("entries"), doc.get("cubic")) {
        (Some(_), Some(_)) => Err(bad("give either \"entries\" or \"cubic\", not both")),
        (Some(e), None) => parse_entries(dimension(doc)?.ok_or_else(|| bad("missing \"n\""))?, e),
        (None, Some(c)) => parse_cubic(dimension(doc)?, c),
        (None, None) => Err(bad("missing \"entries\" or \"cubic\"")),
    }
}

fn parse_entries(n: usize, entries: &Value) -> Result<Tensor, DocError> {
    let list = entries.as_array().ok_or_else(|| bad("\"entries\" must be an array"))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut idxs = Vec::with_capacity(list.len());
    let mut raws = Vec::with_capacity(list.len());
    for item in list {
        let idx = item
            .get("idx")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| bad("each entry needs \"idx\": [i, j, k]"))?;
        let mut t = [0usize; 3];
        for (slot, x) in t.iter_mut().zip(idx) {
            let i = x.as_u64().ok_or_else(|| bad("indices must be positive integers"))? as usize;
            if i == 0 || i > n {
                return Err(bad(format!("index {i} outside 1..={n}")));
            }
            *slot = i - 1;
        }
        t.sort_unstable();
        if !seen.insert(t) {
            return Err(bad(format!("entry {:?} given twice", t.map(|i| i + 1))));
        }
        let val = item.get("val").ok_or_else(|| bad("each entry needs \"val\""))?;
        idxs.push(t);
        raws.push(raw_value(val)?);
    }
    Ok(match unify(raws)? {
        Ok(vals) => Tensor::Exact(fill(n, &idxs, vals)),
        Err(vals) => Tensor::Float(fill(n, &idxs, vals)),
    })
}

fn fill<S: Scalar>(n: usize, idxs: &[[usize; 3]], vals: Vec<S>) -> SymTensor3<S> {
    let mut t = SymTensor3::zeros(n);
    for (&[i, j, k], v) in idxs.iter().zip(vals) {
        t.set(i, j, k, v);
    }
    t
}

fn parse_cubic(n: Option<usize>, cubic: &Value) -> Result<Tensor, DocError> {
    let map = cubic.as_object().ok_or_else(|| bad("\"cubic\" must be an object"))?;
    let mut monos = Vec::with_capacity(map.len());
    let mut raws = Vec::with_capacity(map.len());
    for (key, val) in map {
        let mono: Vec<u32> = key
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("monomial key {key:?} must list exponents like \"2,1,0\"")))?;
        monos.push(mono);
        raws.push(raw_value(val)?);
    }
    let n = match (n, monos.first()) {
        (Some(n), _) => n,
        (None, Some(m)) => m.len(),
        (None, None) => return Err(bad("empty \"cubic\" needs \"n\"")),
    };
    let err = |e: tridec_core::Error| bad(e.to_string());
    match unify(raws)? {
        Ok(vals) => {
            let c: Cubic<Rational> = collect_cubic(monos, vals);
            tensor_from_cubic(&c, n).map(Tensor::Exact).map_err(err)
        }
        Err(vals) => {
            let c: Cubic<f64> = collect_cubic(monos, vals);
            tensor_from_cubic(&c, n).map(Tensor::Float).map_err(err)
        }
    }
}

fn collect_cubic<S: Scalar>(monos: Vec<Vec<u32>>, vals: Vec<S>) -> Cubic<S> {
    let mut c = Cubic::new();
    for (m, v) in monos.into_iter().zip(vals) {
        let e = c.entry(m).or_insert_with(S::zero);
        *e = e.clone() + v;
    }
    c
}

/// JSON value of a scalar inside a tensor or matrix: rational string or number.
pub fn scalar_value<S: Scalar + std::fmt::Display>(x: &S) -> Value {
    if S::EXACT {
        Value::String(x.to_string())
    } else {
        json!(x.to_f64())
    }
}

/// A scalar reported as a named value: always a string.
pub fn scalar_string<S: Scalar + std::fmt::Display>(x: &S) -> Value {
    Value::String(x.to_string())
}

/// Tensor document listing every stored entry with 1-based indices.
pub fn tensor_doc<S: Scalar + std::fmt::Display>(t: &SymTensor3<S>) -> Value {
    let entries: Vec<Value> = t
        .iter()
        .map(|([i, j, k], v)| json!({"idx": [i + 1, j + 1, k + 1], "val": scalar_value(v)}))
        .collect();
    json!({"n": t.n(), "entries": entries})
}

pub fn map_doc<S: Scalar + std::fmt::Display>(m: &OrthogonalMap<S>) -> Value {
    let rows: Vec<Vec<Value>> = m
        .matrix()
        .rows()
        .iter()
        .map(|r| r.iter().map(scalar_value).collect())
        .collect();
    json!({"matrix": rows, "det_sign": m.det_sign()})
}

#[cfg(test)]
mod tests {
    use super::*;
    use tridec_core::scalar::ratio;

    #[test]
    fn entries_exact_and_float() {
        let t = parse(br#"{"n":2,"entries":[{"idx":[1,1,1],"val":"3/2"},{"idx":[2,1,2],"val":"1"}]}"#).unwrap();
        let Tensor::Exact(t) = t else { panic!() };
        assert_eq!(*t.get(0, 0, 0), ratio(3, 2));
        assert_eq!(*t.get(1, 1, 0), ratio(1, 1));
        let t = parse(br#"{"n":2,"entries":[{"idx":[1,1,1],"val":1.5}]}"#).unwrap();
        assert_eq!(t.mode(), "float");
    }

    #[test]
    fn cubic_document() {
        let t = parse(br#"{"cubic":{"3,0,0":"2","2,1,0":"3","0,3,0":"3","1,1,1":"-12","0,0,3":"6"}}"#).unwrap();
        let Tensor::Exact(t) = t else { panic!() };
        assert_eq!(*t.get(0, 1, 2), ratio(-2, 1));
        assert_eq!(*t.get(0, 0, 1), ratio(1, 1));
    }

    #[test]
    fn rejects_malformed() {
        for doc in [
            &br#"{"n":2,"entries":[{"idx":[1,1,1],"val":"1"},{"idx":[1,1,2],"val":2.0}]}"#[..],
            br#"{"n":2,"entries":[{"idx":[1,1,3],"val":"1"}]}"#,
            br#"{"n":2,"entries":[{"idx":[1,1,2],"val":"1"},{"idx":[2,1,1],"val":"1"}]}"#,
            br#"{"cubic":{"2,0":"1"}}"#,
            br#"{"cubic":{"x":"1"}}"#,
            br#"[1,2]"#,
            br#"{"n":2}"#,
        ] {
            assert!(parse(doc).is_err(), "{}", String::from_utf8_lossy(doc));
        }
    }

    #[test]
    fn round_trip() {
        let t: SymTensor3<Rational> = SymTensor3::from_fn(3, |[i, j, k]| ratio((i + 2 * j + 3 * k) as i64, 7));
        let doc = serde_json::to_vec(&tensor_doc(&t)).unwrap();
        assert_eq!(parse(&doc).unwrap(), Tensor::Exact(t));
        let f: SymTensor3<f64> = SymTensor3::from_fn(2, |[i, j, k]| 0.1 * (i + j + k) as f64 - 0.3);
        let doc = serde_json::to_vec(&tensor_doc(&f)).unwrap();
        assert_eq!(parse(&doc).unwrap(), Tensor::Float(f));
    }
}
