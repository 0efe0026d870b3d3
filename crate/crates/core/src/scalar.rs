//! Scalar backends.
//!
//! Two coefficient fields are supported: exact rationals ([`Rational`], GMP
//! backed) and complex binary floating point of configurable precision
//! ([`MpComplex`], a pair of MPFR floats). Generic code is written against the
//! [`Scalar`] trait; the run-time tagged [`AnyScalar`] is used at the
//! serialization and binding boundaries.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use rug::Rational;

/// Default working precision of the float backend, in bits.
pub const DEFAULT_PRECISION: u32 = 256;
/// Smallest precision accepted for the float backend.
pub const MIN_PRECISION: u32 = 53;

/// Which arithmetic a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

/// A commutative field of coefficients.
///
/// Division by zero through the `Div` operator panics; fallible code uses
/// [`Scalar::checked_inv`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Data needed to manufacture constants (the precision for floats).
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;

    const BACKEND: Backend;

    fn ctx(&self) -> Self::Ctx;
    fn from_rational(r: &Rational, ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_inv(&self) -> Option<Self>;
    /// |self| rounded to an `f64`; used for tolerances and residual reports.
    fn abs_f64(&self) -> f64;
    fn to_mp(&self, prec: u32) -> MpComplex;
    /// Working precision of a float value; `None` on the exact backend.
    fn bits(&self) -> Option<u32>;
    /// Converts a float into this backend; `None` on the exact backend.
    fn from_mp(z: &MpComplex, ctx: &Self::Ctx) -> Option<Self>;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, ctx: &Self::Ctx) -> Result<Self>;
    /// Compact human-readable form used by the polynomial text format.
    fn to_text(&self) -> String;
    fn from_text(s: &str, ctx: &Self::Ctx) -> Result<Self>;

    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self {
        Self::from_rational(&Rational::from(n), ctx)
    }

    fn zero_like(&self) -> Self {
        Self::from_i64(0, &self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::from_i64(1, &self.ctx())
    }

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Exact
    }

    /// Integer power; `None` for a negative power of zero.
    fn powi(&self, n: i64) -> Option<Self> {
        let base = if n < 0 {
            self.checked_inv()?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * &sq;
            }
        }
        Some(acc)
    }

    /// Equality up to `max(atol, rtol * scale)`; exact comparison on the
    /// exact backend.
    fn close_to(&self, other: &Self, atol: f64, rtol: f64, scale: f64) -> bool {
        if Self::is_exact() {
            return self == other;
        }
        let diff = (self.clone() - other).abs_f64();
        diff <= atol.max(rtol * scale)
    }
}

// ---------------------------------------------------------------------------
// exact backend

impl Scalar for Rational {
    type Ctx = ();
    const BACKEND: Backend = Backend::Exact;

    fn ctx(&self) {}

    fn from_rational(r: &Rational, _: &()) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }

    fn checked_inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(self.clone().recip())
        }
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn to_mp(&self, prec: u32) -> MpComplex {
        MpComplex::from_rational_prec(self, prec)
    }

    fn bits(&self) -> Option<u32> {
        None
    }

    fn from_mp(_: &MpComplex, _: &()) -> Option<Self> {
        None
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value, _: &()) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap_or(0))),
            Value::Object(_) => Err(Error::BackendMismatch(
                "complex float value where an exact rational was expected".into(),
            )),
            other => Err(Error::Parse(format!("not a rational scalar: {other}"))),
        }
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_text(s: &str, _: &()) -> Result<Self> {
        if s.trim_start().starts_with('(') {
            return Err(Error::BackendMismatch(format!(
                "complex coefficient {s:?} in exact input"
            )));
        }
        parse_rational(s)
    }
}

/// Parses `"n/d"`, `"n"` or a Unicode-minus variant of either.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let cleaned = s.trim().replace('\u{2212}', "-");
    cleaned
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

// ---------------------------------------------------------------------------
// float backend

/// A complex number with MPFR real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        MpComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        MpComplex::real(Float::with_val(prec, 1))
    }

    pub fn real(re: Float) -> Self {
        let prec = re.prec();
        MpComplex::new(re, Float::new(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        MpComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_rational_prec(r: &Rational, prec: u32) -> Self {
        MpComplex::real(Float::with_val(prec, r))
    }

    /// e^{iθ} for θ = 2π·num/den, computed at full precision.
    pub fn root_of_unity(num: i64, den: i64, prec: u32) -> Self {
        let mut theta = Float::with_val(prec + 16, Constant::Pi);
        theta *= 2 * num;
        theta /= den;
        let (s, c) = theta.sin_cos(Float::new(prec + 16));
        MpComplex::new(Float::with_val(prec, c), Float::with_val(prec, s))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        MpComplex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale_f(&self, s: &Float) -> Self {
        let p = self.prec();
        MpComplex::new(
            Float::with_val(p, &self.re * s),
            Float::with_val(p, &self.im * s),
        )
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Relative distance |self − other| / |other| as an `f64`; falls back to
    /// the absolute distance when `other` is zero.
    pub fn rel_err(&self, other: &MpComplex) -> f64 {
        let diff = (self.clone() - other).abs();
        let den = other.abs();
        if den.is_zero() {
            diff.to_f64()
        } else {
            Float::with_val(diff.prec(), &diff / &den).to_f64()
        }
    }

    fn float_to_string(f: &Float) -> String {
        if f.is_zero() {
            return "0".into();
        }
        // enough decimal digits to round-trip the binary precision
        let digits = (f.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        f.to_string_radix(10, Some(digits))
    }
}

fn mp_from_value(v: &Value, prec: u32) -> Result<Float> {
    match v {
        Value::String(s) => Float::parse(s.trim())
            .map(|p| Float::with_val(prec, p))
            .map_err(|e| Error::Parse(format!("bad float {s:?}: {e}"))),
        Value::Number(n) => Ok(Float::with_val(prec, n.as_f64().unwrap_or(f64::NAN))),
        other => Err(Error::Parse(format!("not a float: {other}"))),
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im == 0.0 {
            write!(f, "{re:e}")
        } else {
            write!(
                f,
                "({re:e}{}{:e}i)",
                if im < 0.0 { "-" } else { "+" },
                im.abs()
            )
        }
    }
}

impl Scalar for MpComplex {
    type Ctx = u32;
    const BACKEND: Backend = Backend::Float;

    fn ctx(&self) -> u32 {
        self.prec()
    }

    fn from_rational(r: &Rational, prec: &u32) -> Self {
        MpComplex::from_rational_prec(r, *prec)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn checked_inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let p = self.prec();
        let n = self.norm_sqr();
        let re = Float::with_val(p, &self.re / &n);
        let im = Float::with_val(p, &self.im / &n);
        Some(MpComplex::new(re, -im))
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    fn to_mp(&self, prec: u32) -> MpComplex {
        MpComplex::new(
            Float::with_val(prec, &self.re),
            Float::with_val(prec, &self.im),
        )
    }

    fn bits(&self) -> Option<u32> {
        Some(self.prec())
    }

    fn from_mp(z: &MpComplex, prec: &u32) -> Option<Self> {
        Some(z.to_mp(*prec))
    }

    fn to_json(&self) -> Value {
        json!({
            "re": MpComplex::float_to_string(&self.re),
            "im": MpComplex::float_to_string(&self.im),
            "bits": self.prec(),
        })
    }

    fn from_json(v: &Value, prec: &u32) -> Result<Self> {
        match v {
            Value::Object(map) => {
                let bits = map
                    .get("bits")
                    .and_then(Value::as_u64)
                    .map(|b| b as u32)
                    .unwrap_or(*prec)
                    .max(MIN_PRECISION);
                let re = mp_from_value(map.get("re").unwrap_or(&Value::from(0)), bits)?;
                let im = mp_from_value(map.get("im").unwrap_or(&Value::from(0)), bits)?;
                Ok(MpComplex::new(re, im))
            }
            Value::String(_) => Err(Error::BackendMismatch(
                "exact rational value where a complex float was expected".into(),
            )),
            Value::Number(_) => Ok(MpComplex::real(mp_from_value(v, *prec)?)),
            other => Err(Error::Parse(format!("not a complex scalar: {other}"))),
        }
    }

    fn to_text(&self) -> String {
        format!(
            "({},{})",
            MpComplex::float_to_string(&self.re),
            MpComplex::float_to_string(&self.im)
        )
    }

    fn from_text(s: &str, prec: &u32) -> Result<Self> {
        let t = s.trim();
        let parse = |x: &str| -> Result<Float> {
            Float::parse(x.trim().replace('\u{2212}', "-"))
                .map(|p| Float::with_val(*prec, p))
                .map_err(|e| Error::Parse(format!("bad float {x:?}: {e}")))
        };
        if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            let (re, im) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected (re,im), got {s:?}")))?;
            return Ok(MpComplex::new(parse(re)?, parse(im)?));
        }
        if t.contains('/') {
            return Ok(MpComplex::from_rational_prec(&parse_rational(t)?, *prec));
        }
        Ok(MpComplex::real(parse(t)?))
    }

    fn powi(&self, n: i64) -> Option<Self> {
        if Scalar::is_zero(self) {
            return if n < 0 {
                None
            } else if n == 0 {
                Some(self.one_like())
            } else {
                Some(self.clone())
            };
        }
        if self.is_real() {
            let p = self.prec();
            let r = Float::with_val(p, (&self.re).pow(n as i32));
            return Some(MpComplex::real(r));
        }
        let base = if n < 0 {
            self.checked_inv()?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * &sq;
            }
        }
        Some(acc)
    }
}

impl<'a> Add<&'a MpComplex> for MpComplex {
    type Output = MpComplex;
    fn add(mut self, rhs: &'a MpComplex) -> MpComplex {
        let p = self.prec().max(rhs.prec());
        self.re.set_prec(p);
        self.im.set_prec(p);
        self.re += &rhs.re;
        self.im += &rhs.im;
        self
    }
}

impl<'a> Sub<&'a MpComplex> for MpComplex {
    type Output = MpComplex;
    fn sub(mut self, rhs: &'a MpComplex) -> MpComplex {
        let p = self.prec().max(rhs.prec());
        self.re.set_prec(p);
        self.im.set_prec(p);
        self.re -= &rhs.re;
        self.im -= &rhs.im;
        self
    }
}

impl<'a> Mul<&'a MpComplex> for MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: &'a MpComplex) -> MpComplex {
        let p = self.prec().max(rhs.prec());
        if self.im.is_zero() && rhs.im.is_zero() {
            return MpComplex::new(Float::with_val(p, &self.re * &rhs.re), Float::new(p));
        }
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        MpComplex::new(re, im)
    }
}

impl<'a> Div<&'a MpComplex> for MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: &'a MpComplex) -> MpComplex {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero");
            let p = self.prec().max(rhs.prec());
            return MpComplex::new(
                Float::with_val(p, &self.re / &rhs.re),
                Float::with_val(p, &self.im / &rhs.re),
            );
        }
        let inv = rhs.checked_inv().expect("division by zero");
        self * &inv
    }
}

macro_rules! owned_rhs {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<MpComplex> for MpComplex {
            type Output = MpComplex;
            fn $m(self, rhs: MpComplex) -> MpComplex {
                <MpComplex as $tr<&MpComplex>>::$m(self, &rhs)
            }
        }
    )*};
}
owned_rhs!(Add add, Sub sub, Mul mul, Div div);

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex::new(-self.re, -self.im)
    }
}

// ---------------------------------------------------------------------------
// run-time tagged scalar

/// A scalar whose backend is known only at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScalar {
    Exact(Rational),
    Float(MpComplex),
}

impl AnyScalar {
    pub fn backend(&self) -> Backend {
        match self {
            AnyScalar::Exact(_) => Backend::Exact,
            AnyScalar::Float(_) => Backend::Float,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyScalar::Exact(r) => r.to_json(),
            AnyScalar::Float(z) => z.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(_) => Ok(AnyScalar::Float(MpComplex::from_json(
                v,
                &DEFAULT_PRECISION,
            )?)),
            _ => Ok(AnyScalar::Exact(Rational::from_json(v, &())?)),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            AnyScalar::Exact(r) => r.abs_f64(),
            AnyScalar::Float(z) => z.abs_f64(),
        }
    }
}

impl fmt::Display for AnyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyScalar::Exact(r) => write!(f, "{r}"),
            AnyScalar::Float(z) => write!(f, "{z}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_json_round_trip() {
        let x = r(-9, 4);
        assert_eq!(x.to_json(), Value::String("-9/4".into()));
        assert_eq!(Rational::from_json(&x.to_json(), &()).unwrap(), x);
        assert_eq!(
            Rational::from_json(&Value::String("\u{2212}7/8".into()), &()).unwrap(),
            r(-7, 8)
        );
    }

    #[test]
    fn mixing_backends_in_json_is_a_mismatch() {
        let z = MpComplex::from_f64(0.5, 0.0, 64);
        assert!(matches!(
            Rational::from_json(&z.to_json(), &()),
            Err(Error::BackendMismatch(_))
        ));
        assert!(matches!(
            MpComplex::from_json(&r(1, 2).to_json(), &64),
            Err(Error::BackendMismatch(_))
        ));
    }

    #[test]
    fn float_json_round_trip_keeps_all_bits() {
        let third = MpComplex::from_rational_prec(&r(1, 3), 256);
        let z = MpComplex::new(third.re.clone(), Float::with_val(256, -2) / 7u32);
        let back = MpComplex::from_json(&z.to_json(), &53).unwrap();
        assert_eq!(back.prec(), 256);
        assert_eq!(back, z);
    }

    #[test]
    fn complex_field_operations() {
        let p = 128;
        let z = MpComplex::from_f64(1.5, -2.0, p);
        let w = MpComplex::from_f64(-0.25, 0.75, p);
        let back = (z.clone() * &w) / &w;
        assert!(back.rel_err(&z) < 1e-35);
        let inv = z.checked_inv().unwrap();
        assert!((z.clone() * &inv).rel_err(&MpComplex::one(p)) < 1e-35);
        assert!(
            z.powi(-3).unwrap().rel_err(&(inv.clone() * &inv * &inv)) < 1e-35
        );
    }

    #[test]
    fn roots_of_unity_lie_on_the_circle() {
        for k in 0..8 {
            let z = MpComplex::root_of_unity(k, 8, 256);
            assert!((z.abs_f64() - 1.0).abs() < 1e-15);
        }
        let i = MpComplex::root_of_unity(1, 4, 256);
        assert!(i.re.to_f64().abs() < 1e-70);
    }

    #[test]
    fn exact_powers() {
        assert_eq!(r(2, 3).powi(-2).unwrap(), r(9, 4));
        assert_eq!(r(0, 1).powi(-1), None);
        assert_eq!(r(5, 1).powi(0).unwrap(), r(1, 1));
    }
}
