//! Laurent polynomials in one variable `x`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{MpComplex, Scalar};

/// Position of `x^e` in the order `1 ≺ x^{-1} ≺ x ≺ x^{-2} ≺ x^2 ≺ ⋯`.
pub fn rank(e: i64) -> u64 {
    if e > 0 {
        2 * e as u64
    } else {
        2 * e.unsigned_abs() - u64::from(e != 0)
    }
}

/// Inverse of [`rank`].
pub fn exponent_of_rank(r: u64) -> i64 {
    if r.is_multiple_of(2) {
        (r / 2) as i64
    } else {
        -(r.div_ceil(2) as i64)
    }
}

/// Tolerances for coefficientwise comparison on the float backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Tolerance {
    /// `atol = 2^{-180}`, `rtol = 2^{-160}` at 256 bits, scaled proportionally
    /// for other precisions.
    pub fn for_bits(bits: u32) -> Self {
        let b = bits as f64;
        Tolerance {
            atol: 2f64.powf(-b * 180.0 / 256.0),
            rtol: 2f64.powf(-b * 160.0 / 256.0),
        }
    }
}

/// Elements of the affine Weyl group acting on exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylElement {
    S0,
    S1,
    Tau(i64),
}

/// A sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S: Scalar> {
    terms: BTreeMap<i64, S>,
}

impl<S: Scalar> Default for LaurentPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(e: i64, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, S)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c·x^e` in place.
    pub fn add_term(&mut self, e: i64, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + &c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &S)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Option<&S> {
        self.terms.get(&e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Largest `|e|` in the support (0 for the zero polynomial).
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|e| e.abs()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * s)))
    }

    /// Multiplication by `c·x^k`.
    pub fn mul_monomial(&self, k: i64, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (e + k, v.clone() * c)))
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaurentPoly<T> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Reindexes `c·x^e ↦ g(e, c)·x^{h(e)}`.
    pub fn map_terms(&self, f: impl Fn(i64, &S) -> (i64, S)) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| f(*e, c)))
    }

    pub fn to_mp(&self, prec: u32) -> LaurentPoly<MpComplex> {
        self.map_coeffs(|c| c.to_mp(prec))
    }

    /// `‖f‖∞` as an `f64`.
    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    fn bits(&self) -> Option<u32> {
        self.terms.values().next().and_then(|c| c.bits())
    }

    /// Exact equality on the exact backend; coefficientwise within
    /// `max(atol, rtol·‖·‖∞)` on the float backend.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        if S::is_exact() {
            return self == other;
        }
        let scale = self.norm_inf().max(other.norm_inf());
        let bound = tol.atol.max(tol.rtol * scale);
        let diff = self - other;
        diff.terms.values().all(|c| c.abs_f64() <= bound)
    }

    /// [`LaurentPoly::approx_eq`] with the default tolerance of the working
    /// precision.
    pub fn same(&self, other: &Self) -> bool {
        let bits = self.bits().or(other.bits()).unwrap_or(256);
        self.approx_eq(other, Tolerance::for_bits(bits))
    }

    /// Largest coefficient of `self − other` relative to the larger norm.
    pub fn rel_distance(&self, other: &Self) -> f64 {
        let scale = self.norm_inf().max(other.norm_inf());
        let d = (self - other).norm_inf();
        if scale == 0.0 {
            d
        } else {
            d / scale
        }
    }

    // -- Weyl group ---------------------------------------------------------

    pub fn s1(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// `x^m ↦ q^m x^{-m}`.
    pub fn s0(&self, q: &S) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (-e, c.clone() * &q.powi(*e).expect("q is nonzero"))),
        )
    }

    /// `x^m ↦ q^{μm} x^m`.
    pub fn tau(&self, mu: i64, q: &S) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * &q.powi(mu * e).expect("q is nonzero"))),
        )
    }

    pub fn act_weyl(&self, w: WeylElement, q: &S) -> Self {
        match w {
            WeylElement::S0 => self.s0(q),
            WeylElement::S1 => self.s1(),
            WeylElement::Tau(mu) => self.tau(mu, q),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.same(&self.s1())
    }

    /// `f(x) ↦ f(λx)`: the coefficient of `x^j` is multiplied by `λ^j`.
    pub fn dilate(&self, lambda: &S) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * &lambda.powi(*e).expect("nonzero dilation"))),
        )
    }

    // -- division, order, evaluation ---------------------------------------

    /// `h` with `self = g·h` in the Laurent ring.
    pub fn exact_div(&self, g: &Self) -> Result<Self> {
        let (lg, hg) = match (g.min_exp(), g.max_exp()) {
            (Some(l), Some(h)) => (l, h),
            _ => {
                return Err(Error::NotDivisible(
                    "division by the zero polynomial".into(),
                ))
            }
        };
        let (lf, hf) = match (self.min_exp(), self.max_exp()) {
            (Some(l), Some(h)) => (l, h),
            _ => return Ok(Self::zero()),
        };
        let df = (hf - lf) as usize;
        let dg = (hg - lg) as usize;
        if df < dg {
            return Err(Error::NotDivisible(format!("{} by {}", self, g)));
        }
        let zero = self.terms.values().next().expect("nonzero").zero_like();
        let mut rem: Vec<S> = vec![zero.clone(); df + 1];
        for (e, c) in &self.terms {
            rem[(e - lf) as usize] = c.clone();
        }
        let mut gd: Vec<S> = vec![zero.clone(); dg + 1];
        for (e, c) in &g.terms {
            gd[(e - lg) as usize] = c.clone();
        }
        let lead_inv = gd[dg]
            .checked_inv()
            .expect("leading coefficient is nonzero");
        let mut quot: Vec<S> = vec![zero; df - dg + 1];
        for k in (0..=df - dg).rev() {
            let c = rem[k + dg].clone() * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for j in 0..=dg {
                if !gd[j].is_zero() {
                    rem[k + j] = rem[k + j].clone() - &(c.clone() * &gd[j]);
                }
            }
            quot[k] = c;
        }
        let leftover = if S::is_exact() {
            rem[..dg].iter().any(|c| !c.is_zero())
        } else {
            let tol = Tolerance::for_bits(self.bits().unwrap_or(256));
            let bound = tol.atol.max(tol.rtol * self.norm_inf().max(1.0) * 16.0);
            rem[..dg].iter().any(|c| c.abs_f64() > bound)
        };
        if leftover {
            return Err(Error::NotDivisible(format!("{} by {}", self, g)));
        }
        Ok(Self::from_terms(
            quot.into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64 + lf - lg, c)),
        ))
    }

    /// The term of largest [`rank`].
    pub fn leading_term(&self) -> Result<(i64, S)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| rank(**e))
            .map(|(e, c)| (*e, c.clone()))
            .ok_or(Error::EmptyPolynomial)
    }

    pub fn evaluate(&self, x0: &S) -> Result<S> {
        let mut acc = x0.zero_like();
        if x0.is_zero() {
            if self.min_exp().is_some_and(|e| e < 0) {
                return Err(Error::PoleAtZero);
            }
            return Ok(self.coeff(0).cloned().unwrap_or(acc));
        }
        let (lo, hi) = match (self.min_exp(), self.max_exp()) {
            (Some(l), Some(h)) => (l, h),
            _ => return Ok(acc),
        };
        // Horner in x on the shifted polynomial, then multiply by x^lo.
        for e in (lo..=hi).rev() {
            acc = acc * x0;
            if let Some(c) = self.terms.get(&e) {
                acc = acc + c;
            }
        }
        Ok(acc * &x0.powi(lo).expect("x0 nonzero"))
    }

    // -- formats ------------------------------------------------------------

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, c)| format!("{}*x^{}", c.to_text(), e))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse_text(s: &str, ctx: &S::Ctx) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            let (c, e) = term
                .rsplit_once("*x^")
                .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
            let e: i64 = e
                .trim()
                .replace('\u{2212}', "-")
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
            out.add_term(e, S::from_text(c, ctx)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(e, c)| json!({"e": e, "c": c.to_json()})).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value, ctx: &S::Ctx) -> Result<Self> {
        let arr = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial JSON lacks a \"terms\" array".into()))?;
        let mut out = Self::zero();
        for t in arr {
            let e = t
                .get("e")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("bad exponent in {t}")))?;
            let c = t
                .get("c")
                .ok_or_else(|| Error::Parse(format!("missing coefficient in {t}")))?;
            out.add_term(e, S::from_json(c, ctx)?);
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `δ = x^{-1}(x − a^{-1})(x − b^{-1})`.
pub fn weyl_denominator<S: Scalar>(t: &ParameterSet<S>) -> LaurentPoly<S> {
    let ai = ParameterSet::inv(t.a());
    let bi = ParameterSet::inv(t.b());
    LaurentPoly::from_terms([(1, t.one()), (0, -(ai.clone() + &bi)), (-1, ai * &bi)])
}

// ---------------------------------------------------------------------------
// arithmetic

impl<S: Scalar> Add<&LaurentPoly<S>> for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub<&LaurentPoly<S>> for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul<&LaurentPoly<S>> for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2);
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<S: Scalar> Neg for LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        -&self
    }
}

macro_rules! owned_variants {
    ($($tr:ident $m:ident),*) => {$(
        impl<S: Scalar> $tr<LaurentPoly<S>> for LaurentPoly<S> {
            type Output = LaurentPoly<S>;
            fn $m(self, rhs: LaurentPoly<S>) -> LaurentPoly<S> {
                (&self).$m(&rhs)
            }
        }
        impl<S: Scalar> $tr<&LaurentPoly<S>> for LaurentPoly<S> {
            type Output = LaurentPoly<S>;
            fn $m(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
                (&self).$m(rhs)
            }
        }
        impl<S: Scalar> $tr<LaurentPoly<S>> for &LaurentPoly<S> {
            type Output = LaurentPoly<S>;
            fn $m(self, rhs: LaurentPoly<S>) -> LaurentPoly<S> {
                self.$m(&rhs)
            }
        }
    )*};
}
owned_variants!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = LaurentPoly<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn poly(terms: &[(i64, i64)]) -> P {
        P::from_terms(terms.iter().map(|(e, c)| (*e, r(*c, 1))))
    }

    #[test]
    fn ranks_realize_the_order() {
        let order: Vec<i64> = (0..9).map(exponent_of_rank).collect();
        assert_eq!(order, vec![0, -1, 1, -2, 2, -3, 3, -4, 4]);
        for e in -20..=20 {
            assert_eq!(exponent_of_rank(rank(e)), e);
        }
    }

    #[test]
    fn ring_examples() {
        let f = poly(&[(1, 1), (-1, 1)]);
        assert_eq!(&f * &f, poly(&[(2, 1), (0, 2), (-2, 1)]));
        assert_eq!(&f * &P::constant(r(1, 1)), f);
        assert_eq!(
            poly(&[(1, 1), (0, -1)]) * poly(&[(1, 1), (0, 1)]),
            poly(&[(2, 1), (0, -1)])
        );
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn weyl_action_examples() {
        let q = r(1, 4);
        assert_eq!(poly(&[(1, 1)]).s0(&q), P::monomial(-1, q.clone()));
        assert_eq!(poly(&[(2, 1), (0, 3)]).s1(), poly(&[(-2, 1), (0, 3)]));
        assert_eq!(poly(&[(-3, 1)]).tau(1, &q), P::monomial(-3, r(64, 1)));
    }

    #[test]
    fn division_examples() {
        let one_minus_x2 = poly(&[(0, 1), (2, -1)]);
        let one_minus_x = poly(&[(0, 1), (1, -1)]);
        assert_eq!(
            one_minus_x2.exact_div(&one_minus_x).unwrap(),
            poly(&[(0, 1), (1, 1)])
        );
        let f = poly(&[(-2, 1), (2, -1)]);
        assert_eq!(
            f.exact_div(&one_minus_x2).unwrap(),
            poly(&[(-2, 1), (0, 1)])
        );
        assert!(matches!(
            poly(&[(1, 1)]).exact_div(&one_minus_x),
            Err(Error::NotDivisible(_))
        ));
    }

    #[test]
    fn leading_terms() {
        assert_eq!(
            poly(&[(0, 1), (1, 1), (-2, -1)]).leading_term().unwrap(),
            (-2, r(-1, 1))
        );
        assert_eq!(poly(&[(0, 5)]).leading_term().unwrap(), (0, r(5, 1)));
        assert_eq!(P::zero().leading_term(), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn evaluation() {
        assert_eq!(
            poly(&[(1, 1), (-1, 1)]).evaluate(&r(2, 1)).unwrap(),
            r(5, 2)
        );
        let f = poly(&[(3, 2), (-2, -7), (0, 4)]);
        assert_eq!(f.evaluate(&r(1, 1)).unwrap(), r(-1, 1));
        assert_eq!(f.evaluate(&r(0, 1)), Err(Error::PoleAtZero));
        assert_eq!(poly(&[(0, 4), (2, 1)]).evaluate(&r(0, 1)).unwrap(), r(4, 1));
    }

    #[test]
    fn denominator_at_fixture() {
        let t = ParameterSet::fixture();
        let d = weyl_denominator(&t);
        assert_eq!(
            d,
            P::from_terms([(1, r(1, 1)), (0, r(-7, 8)), (-1, r(-9, 4))])
        );
        assert_eq!(d.leading_term().unwrap(), (1, r(1, 1)));
        assert_eq!(d.to_text(), "-9/4*x^-1 + -7/8*x^0 + 1*x^1");
    }

    #[test]
    fn text_and_json_round_trip() {
        let f = P::from_terms([(-3, r(-9, 4)), (0, r(7, 1)), (5, r(1, 3))]);
        assert_eq!(P::parse_text(&f.to_text(), &()).unwrap(), f);
        assert_eq!(
            P::parse_text("\u{2212}9/4*x^-1 + 1*x^1", &())
                .unwrap()
                .coeff(-1),
            Some(&r(-9, 4))
        );
        assert_eq!(P::from_json(&f.to_json(), &()).unwrap(), f);
        assert_eq!(P::zero().to_text(), "0");
        let g = f.to_mp(256);
        assert_eq!(
            LaurentPoly::<MpComplex>::from_json(&g.to_json(), &256).unwrap(),
            g
        );
        assert_eq!(
            LaurentPoly::<MpComplex>::parse_text(&g.to_text(), &256).unwrap(),
            g
        );
        assert!(matches!(
            P::from_json(&g.to_json(), &()),
            Err(Error::BackendMismatch(_))
        ));
    }

    #[test]
    fn float_equality_is_tolerant() {
        let f = poly(&[(1, 3), (-1, 2)]).to_mp(256);
        let mut g = f.clone();
        g.add_term(1, MpComplex::from_f64(1e-60, 0.0, 256));
        assert!(f.same(&g));
        g.add_term(0, MpComplex::from_f64(1e-30, 0.0, 256));
        assert!(!f.same(&g));
    }
}
