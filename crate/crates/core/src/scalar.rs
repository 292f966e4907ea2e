//! Scalar fields the tensor algebra runs over.
//!
//! Two fields are supported: exact rationals ([`Rational`], arbitrary precision)
//! and `f64`. Polynomial constructions are written once against [`Scalar`];
//! eigen-solves and the orbit optimizer always run in `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Default relative tolerance for float-mode identity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Field operations shared by the exact and floating-point modes.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_int(k: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn to_f64(&self) -> f64;

    /// Nonnegative square root. `None` for negative input, and in exact mode
    /// also when the value is not the square of a rational.
    fn sqrt_checked(&self) -> Option<Self>;

    /// Lossless for exact types; `f64` returns the value unchanged.
    fn from_f64(x: f64) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(k: i64) -> Self {
        k as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(k: i64) -> Self {
        Rational::from_integer(BigInt::from(k))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator or denominator beyond f64 range: scale both down
            let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }

    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }
}

fn exact_isqrt(x: &BigInt) -> Option<BigInt> {
    let r = x.sqrt();
    if &r * &r == *x {
        Some(r)
    } else {
        None
    }
}

/// Parse `"p/q"`, `"p"` or a plain decimal such as `"-1.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::MalformedInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::parse_bytes(p.trim().as_bytes(), 10).ok_or_else(bad)?;
        let q = BigInt::parse_bytes(q.trim().as_bytes(), 10).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(Error::MalformedInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut numer = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
        if neg {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u8), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    let p = BigInt::parse_bytes(s.as_bytes(), 10).ok_or_else(bad)?;
    Ok(Rational::from_integer(p))
}

/// Outcome of comparing a residual against the pass threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Pass,
    /// Float mode only: within a factor of 10 of the threshold on either side.
    Boundary,
    Fail,
}

impl Check {
    /// Combine two outcomes: any failure wins, then any boundary.
    pub fn and(self, other: Check) -> Check {
        match (self, other) {
            (Check::Fail, _) | (_, Check::Fail) => Check::Fail,
            (Check::Boundary, _) | (_, Check::Boundary) => Check::Boundary,
            _ => Check::Pass,
        }
    }
}

/// Relative tolerance used by float-mode identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: DEFAULT_TOL }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        Self { rel }
    }

    /// Judge a normalized residual `r`, a dimensionless ratio.
    ///
    /// `r <= tol/10` passes, `r > 10 tol` fails, anything between is a
    /// boundary case.
    pub fn judge_normalized(&self, r: f64) -> Check {
        if !r.is_finite() {
            Check::Fail
        } else if r <= self.rel / 10.0 {
            Check::Pass
        } else if r <= self.rel * 10.0 {
            Check::Boundary
        } else {
            Check::Fail
        }
    }

    /// Judge a raw residual in scalar field `S`.
    ///
    /// Exact mode ignores `scale` and requires the residual to be zero.
    pub fn judge<S: Scalar>(&self, residual: &S, scale: f64) -> Check {
        if S::EXACT {
            if residual.is_zero() {
                Check::Pass
            } else {
                Check::Fail
            }
        } else {
            self.judge_normalized(normalized(residual, scale))
        }
    }
}

/// `|residual| / scale`, with a zero scale treated as 1.
pub fn normalized<S: Scalar>(residual: &S, scale: f64) -> f64 {
    let r = residual.abs().to_f64();
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

pub(crate) fn int<S: Scalar>(k: i64) -> S {
    S::from_int(k)
}

/// Convert between scalar fields through `f64` (exact types convert the
/// binary value of the double losslessly).
pub fn convert<A: Scalar, B: Scalar>(x: &A) -> B {
    B::from_f64(x.to_f64()).unwrap_or_else(B::zero)
}

/// Rational from a pair of machine integers; handy in tests and fixtures.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}
