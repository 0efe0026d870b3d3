use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::params::Abcd;
use crate::qpoch::{qpoch_inf_many, truncation_length};
use crate::scalar::{MpComplex, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightVariant {
    /// `Δ₊(x) = (x², x^{-2}; q)_∞ / (ax^{±1}, bx^{±1}, cx^{±1}, dx^{±1}; q)_∞`.
    DeltaPlus,
    /// `Δ(x) = α(x) Δ₊(x)`.
    Delta,
    /// `α(x) = (1 − a/x)(1 − b/x)/(1 − x^{-2})`.
    Alpha,
}

fn near_zero(z: &MpComplex) -> bool {
    let p = z.prec() as i32;
    z.is_zero() || z.abs_f64() < 2f64.powi(-(p - 16).max(40))
}

fn one(prec: u32) -> MpComplex {
    MpComplex::one(prec)
}

/// `α(x)`.
pub fn alpha(ab: &Abcd<MpComplex>, x: &MpComplex) -> Result<MpComplex> {
    let p = x.prec();
    let xi = x
        .checked_inv()
        .ok_or_else(|| Error::PoleEvaluation("x = 0".into()))?;
    let den = one(p) - &(xi.clone() * &xi);
    if near_zero(&den) {
        return Err(Error::PoleEvaluation(format!("α has a pole at x = {x}")));
    }
    let num = (one(p) - &(ab.a.clone() * &xi)) * &(one(p) - &(ab.b.clone() * &xi));
    Ok(num / &den)
}

fn denominator(ab: &Abcd<MpComplex>, x: &MpComplex, xi: &MpComplex, tol: f64) -> Result<MpComplex> {
    let zs: Vec<MpComplex> = ab
        .as_array()
        .iter()
        .flat_map(|e| [(*e).clone() * x, (*e).clone() * xi])
        .collect();
    let d = qpoch_inf_many(&zs, &ab.q, tol)?;
    if near_zero(&d) {
        return Err(Error::PoleEvaluation(format!(
            "weight has a pole at x = {x}"
        )));
    }
    Ok(d)
}

/// Evaluates a weight at an arbitrary nonzero `x`.
pub fn weight(
    ab: &Abcd<MpComplex>,
    x: &MpComplex,
    variant: WeightVariant,
    tol: f64,
) -> Result<MpComplex> {
    if variant == WeightVariant::Alpha {
        return alpha(ab, x);
    }
    let xi = x
        .checked_inv()
        .ok_or_else(|| Error::PoleEvaluation("x = 0".into()))?;
    let plus = {
        let den = denominator(ab, x, &xi, tol)?;
        let x2 = x.clone() * x;
        let num = qpoch_inf_many(&[x2.clone(), xi.clone() * &xi], &ab.q, tol)?;
        num / &den
    };
    match variant {
        WeightVariant::DeltaPlus => Ok(plus),
        _ => Ok(alpha(ab, x)? * &plus),
    }
}

/// `Δ(x)` with the factor `1 − x^{-2}` cancelled, regular at `x = ±1`.
pub(crate) fn delta_cancelled(ab: &Abcd<MpComplex>, x: &MpComplex, tol: f64) -> Result<MpComplex> {
    let p = x.prec();
    let xi = x
        .checked_inv()
        .ok_or_else(|| Error::PoleEvaluation("x = 0".into()))?;
    let den = denominator(ab, x, &xi, tol)?;
    let x2 = x.clone() * x;
    let q = &ab.q;
    let num = qpoch_inf_many(&[q.clone() * &x2, q.clone() * &(xi.clone() * &xi)], q, tol)?
        * &(one(p) - &x2)
        * &(one(p) - &(ab.a.clone() * &xi))
        * &(one(p) - &(ab.b.clone() * &xi));
    Ok(num / &den)
}

/// Fast evaluation of `Δ₊` on the unit circle for real parameters, using
/// `(1 − e x q^j)(1 − e x^{-1} q^j) = 1 − 2 e q^j cos θ + e² q^{2j}`.
#[derive(Clone, Debug)]
pub(crate) struct CircleWeight {
    /// `e q^j` for every denominator factor.
    den_terms: Vec<Float>,
    /// `q^j`, `j ≥ 1`, for the numerator `(q x², q x^{-2}; q)_∞`.
    num_terms: Vec<Float>,
    prec: u32,
}

impl CircleWeight {
    pub(crate) fn new(ab: &Abcd<MpComplex>, tol: f64) -> Option<Self> {
        if !ab.as_array().iter().all(|e| e.is_real()) || !ab.q.is_real() {
            return None;
        }
        let prec = ab.q.prec();
        let q = &ab.q.re;
        let qa = q.to_f64().abs();
        if !(qa < 1.0) {
            return None;
        }
        let powers = |start: &Float| -> Vec<Float> {
            let n = truncation_length(start.to_f64().abs(), qa, tol);
            let mut v = Vec::with_capacity(n as usize);
            let mut cur = Float::with_val(prec, start);
            for _ in 0..n {
                v.push(cur.clone());
                cur *= q;
            }
            v
        };
        let mut den_terms = Vec::new();
        for e in ab.as_array() {
            den_terms.extend(powers(&e.re));
        }
        let num_terms = powers(q);
        Some(CircleWeight {
            den_terms,
            num_terms,
            prec,
        })
    }

    fn product(terms: &[Float], two_c: &Float, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 1);
        let mut f = Float::new(prec);
        for e in terms {
            // 1 − 2 e c + e²
            f.assign(e - two_c);
            f *= e;
            f += 1;
            acc *= &f;
        }
        acc
    }

    /// `(Δ₊(x), Π_{j≥1}|1 − q^j x²|² / D(x))` at `x` with `|x| = 1`.
    pub(crate) fn eval(&self, x: &MpComplex) -> (Float, Float) {
        let p = self.prec;
        let two_c = Float::with_val(p, &x.re * 2u32);
        // cos 2θ = 2cos²θ − 1
        let mut two_c2 = Float::with_val(p, x.re.square_ref());
        two_c2 *= 4u32;
        two_c2 -= 2u32;
        let den = Self::product(&self.den_terms, &two_c, p);
        let num = Self::product(&self.num_terms, &two_c2, p);
        let reduced = Float::with_val(p, &num / &den);
        // |1 − x²|² = 2 − 2cos 2θ
        let mut first = Float::with_val(p, 2u32);
        first -= &two_c2;
        let plus = Float::with_val(p, &reduced * &first);
        (plus, reduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterSet;

    fn setup() -> (Abcd<MpComplex>, f64) {
        (ParameterSet::fixture().abcd().to_mp(256), 1e-70)
    }

    #[test]
    fn symmetric_under_inversion_and_factorized() {
        let (ab, tol) = setup();
        let p = 256;
        for k in [1, 5, 11, 17] {
            let x = MpComplex::root_of_unity(k, 37, p);
            let xi = x.checked_inv().unwrap();
            let w = weight(&ab, &x, WeightVariant::DeltaPlus, tol).unwrap();
            let wi = weight(&ab, &xi, WeightVariant::DeltaPlus, tol).unwrap();
            assert!(w.rel_err(&wi) < 1e-60);
            let d = weight(&ab, &x, WeightVariant::Delta, tol).unwrap();
            let al = alpha(&ab, &x).unwrap();
            assert!(d.rel_err(&(al.clone() * &w)) < 1e-60);
            let ali = alpha(&ab, &xi).unwrap();
            let expect = MpComplex::one(p) - &(ab.a.clone() * &ab.b);
            assert!((al + &ali).rel_err(&expect) < 1e-60);
            assert!(delta_cancelled(&ab, &x, tol).unwrap().rel_err(&d) < 1e-60);
        }
    }

    #[test]
    fn circle_evaluator_matches_generic_products() {
        let (ab, tol) = setup();
        let cw = CircleWeight::new(&ab, tol).unwrap();
        for k in [0, 3, 8, 16] {
            let x = MpComplex::root_of_unity(k, 32, 256);
            let (plus, _) = cw.eval(&x);
            let generic = weight(&ab, &x, WeightVariant::DeltaPlus, tol).unwrap();
            assert!((MpComplex::real(plus) - &generic).abs_f64() < 1e-60);
        }
    }

    #[test]
    fn poles_are_reported() {
        let (ab, tol) = setup();
        let one = MpComplex::one(256);
        assert!(matches!(alpha(&ab, &one), Err(Error::PoleEvaluation(_))));
        assert!(matches!(
            weight(&ab, &-one, WeightVariant::Delta, tol),
            Err(Error::PoleEvaluation(_))
        ));
        let at_pole = ab.a.checked_inv().unwrap();
        assert!(matches!(
            weight(&ab, &at_pole, WeightVariant::DeltaPlus, tol),
            Err(Error::PoleEvaluation(_))
        ));
    }
}
