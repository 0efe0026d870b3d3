//! The difference-reflection representation and formal operator words.
//!
//! An [`OperatorExpr`] is a linear combination of words in the generators
//! `T0, T1, T0v, T1v`, their inverses and multiplication operators `Z(k)`
//! (multiplication by `x^k`). Words are applied right to left.

mod action;
mod relations;

use std::fmt;

use serde_json::{json, Value};

pub use action::{
    apply_l, apply_shift, t0, t0_inv, t0v, t0v_inv, t1, t1_inv, t1v, t1v_inv, ShiftDirection,
};
pub use relations::{verify_relations, verify_relations_with, RelationOptions};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::ParameterSet;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    T0,
    T1,
    T0v,
    T1v,
    T0Inv,
    T1Inv,
    T0vInv,
    T1vInv,
    /// Multiplication by `x^k`.
    Z(i64),
}

impl Token {
    pub fn name(&self) -> String {
        match self {
            Token::T0 => "T0".into(),
            Token::T1 => "T1".into(),
            Token::T0v => "T0v".into(),
            Token::T1v => "T1v".into(),
            Token::T0Inv => "T0inv".into(),
            Token::T1Inv => "T1inv".into(),
            Token::T0vInv => "T0vinv".into(),
            Token::T1vInv => "T1vinv".into(),
            Token::Z(k) => format!("Z({k})"),
        }
    }

    pub fn parse(s: &str) -> Result<Token> {
        let s = s.trim();
        Ok(match s {
            "T0" => Token::T0,
            "T1" => Token::T1,
            "T0v" => Token::T0v,
            "T1v" => Token::T1v,
            "T0inv" => Token::T0Inv,
            "T1inv" => Token::T1Inv,
            "T0vinv" => Token::T0vInv,
            "T1vinv" => Token::T1vInv,
            _ => {
                let k = s
                    .strip_prefix("Z(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.trim().parse::<i64>().ok())
                    .ok_or_else(|| Error::UnknownOperator(s.to_string()))?;
                Token::Z(k)
            }
        })
    }

    pub fn inverse(&self) -> Token {
        match self {
            Token::T0 => Token::T0Inv,
            Token::T1 => Token::T1Inv,
            Token::T0v => Token::T0vInv,
            Token::T1v => Token::T1vInv,
            Token::T0Inv => Token::T0,
            Token::T1Inv => Token::T1,
            Token::T0vInv => Token::T0v,
            Token::T1vInv => Token::T1v,
            Token::Z(k) => Token::Z(-k),
        }
    }

    pub fn apply<S: Scalar>(
        &self,
        f: &LaurentPoly<S>,
        t: &ParameterSet<S>,
    ) -> Result<LaurentPoly<S>> {
        match self {
            Token::T0 => t0(f, t),
            Token::T1 => t1(f, t),
            Token::T0v => t0v(f, t),
            Token::T1v => t1v(f, t),
            Token::T0Inv => t0_inv(f, t),
            Token::T1Inv => t1_inv(f, t),
            Token::T0vInv => t0v_inv(f, t),
            Token::T1vInv => t1v_inv(f, t),
            Token::Z(k) => Ok(f.shift(*k)),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `Σ coeff·word`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorExpr<S: Scalar> {
    terms: Vec<(S, Vec<Token>)>,
}

impl<S: Scalar> OperatorExpr<S> {
    pub fn zero() -> Self {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn word(coeff: S, word: Vec<Token>) -> Self {
        let mut e = Self::zero();
        e.push(coeff, word);
        e
    }

    pub fn token(tok: Token, one: S) -> Self {
        Self::word(one, vec![tok])
    }

    pub fn scalar(c: S) -> Self {
        Self::word(c, Vec::new())
    }

    pub fn terms(&self) -> &[(S, Vec<Token>)] {
        &self.terms
    }

    /// Adds `coeff·word`, merging with an identical word.
    pub fn push(&mut self, coeff: S, word: Vec<Token>) {
        if coeff.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, w)| *w == word) {
            let c = self.terms[pos].0.clone() + &coeff;
            if c.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].0 = c;
            }
        } else {
            self.terms.push((coeff, word));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, w) in &other.terms {
            out.push(c.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        match other.terms.first() {
            None => self.clone(),
            Some((c, _)) => self.add(&other.scale_by(&-c.one_like())),
        }
    }

    pub fn scale_by(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (c, w) in &self.terms {
            out.push(c.clone() * s, w.clone());
        }
        out
    }

    /// The product `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.push(c1.clone() * c2, w);
            }
        }
        out
    }

    /// `self ∘ other − other ∘ self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// `self^n` for `n ≥ 0`; needs a scalar for the identity.
    pub fn pow(&self, n: u32, one: &S) -> Self {
        let mut out = Self::scalar(one.clone());
        for _ in 0..n {
            out = out.compose(self);
        }
        out
    }

    pub fn apply(&self, f: &LaurentPoly<S>, t: &ParameterSet<S>) -> Result<LaurentPoly<S>> {
        let mut out = LaurentPoly::zero();
        for (c, w) in &self.terms {
            let mut g = f.clone();
            for tok in w.iter().rev() {
                g = tok.apply(&g, t)?;
            }
            out = out + g.scale(c);
        }
        Ok(out)
    }

    /// `Σ c_k Y^k` for `f = Σ c_k x^k`.
    pub fn poly_in_y(f: &LaurentPoly<S>) -> Self {
        let mut out = Self::zero();
        for (k, c) in f.terms() {
            let unit: &[Token] = if k >= 0 {
                &[Token::T1, Token::T0]
            } else {
                &[Token::T0Inv, Token::T1Inv]
            };
            let mut w = Vec::with_capacity(2 * k.unsigned_abs() as usize);
            for _ in 0..k.abs() {
                w.extend_from_slice(unit);
            }
            out.push(c.clone(), w);
        }
        out
    }

    /// Multiplication by the Laurent polynomial `f`.
    pub fn multiplication(f: &LaurentPoly<S>) -> Self {
        let mut out = Self::zero();
        for (k, c) in f.terms() {
            out.push(
                c.clone(),
                if k == 0 {
                    Vec::new()
                } else {
                    vec![Token::Z(k)]
                },
            );
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(c, w)| json!({
                "coeff": c.to_json(),
                "word": w.iter().map(Token::name).collect::<Vec<_>>(),
            })).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value, ctx: &S::Ctx) -> Result<Self> {
        let arr = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("operator JSON lacks a \"terms\" array".into()))?;
        let mut out = Self::zero();
        for t in arr {
            let c = S::from_json(t.get("coeff").unwrap_or(&Value::Null), ctx)?;
            let w = t
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("operator term lacks a word: {t}")))?
                .iter()
                .map(|s| Token::parse(s.as_str().unwrap_or("")))
                .collect::<Result<Vec<_>>>()?;
            out.push(c, w);
        }
        Ok(out)
    }
}

/// The named elements `Y, Yinv, S0, S1, Cplus, Cminus, hplus, hminus`.
pub fn named_expr<S: Scalar>(name: &str, t: &ParameterSet<S>) -> Result<OperatorExpr<S>> {
    let one = t.one();
    let tok = |k: Token| OperatorExpr::token(k, one.clone());
    let y = || OperatorExpr::word(one.clone(), vec![Token::T1, Token::T0]);
    let yinv = || OperatorExpr::word(one.clone(), vec![Token::T0Inv, Token::T1Inv]);
    let k1 = t.k1();
    let k1inv = ParameterSet::inv(k1);
    // h±(Y) = Y^{±1} + (k0^{-1}k1 − k0k1) − k1² Y^{∓1}
    let mid = k1.clone() * &ParameterSet::inv(t.k0()) - &(t.k0().clone() * k1);
    let k1sq = k1.clone() * k1;
    Ok(match name {
        "Y" => y(),
        "Yinv" => yinv(),
        "S1" => tok(Token::T1).commutator(&y()),
        "S0" => y().commutator(&tok(Token::T1v)),
        "Cplus" => {
            let n = ParameterSet::inv(&(one.clone() + &k1sq));
            OperatorExpr::scalar(one.clone())
                .add(&tok(Token::T1).scale_by(k1))
                .scale_by(&n)
        }
        "Cminus" => {
            let n = ParameterSet::inv(&(one.clone() + &(k1inv.clone() * &k1inv)));
            OperatorExpr::scalar(one.clone())
                .add(&tok(Token::T1).scale_by(&-k1inv))
                .scale_by(&n)
        }
        "hplus" => y()
            .add(&OperatorExpr::scalar(mid))
            .add(&yinv().scale_by(&-k1sq)),
        "hminus" => yinv()
            .add(&OperatorExpr::scalar(mid))
            .add(&y().scale_by(&-k1sq)),
        other => return Err(Error::UnknownOperator(other.to_string())),
    })
}

/// Names accepted by [`named_expr`].
pub const NAMED: [&str; 8] = [
    "Y", "Yinv", "S0", "S1", "Cplus", "Cminus", "hplus", "hminus",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = LaurentPoly<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn inv(x: &Rational) -> Rational {
        x.clone().recip()
    }

    #[test]
    fn generators_on_low_monomials() {
        let t = ParameterSet::fixture();
        let one = P::constant(r(1, 1));
        let x = P::monomial(1, r(1, 1));
        assert_eq!(t1(&one, &t).unwrap(), P::constant(t.k1().clone()));
        assert_eq!(t0(&one, &t).unwrap(), P::constant(t.k0().clone()));
        let expect_t1 = P::from_terms([(-1, inv(t.k1())), (0, inv(t.u1()) - t.u1())]);
        assert_eq!(t1(&x, &t).unwrap(), expect_t1);
        let expect_t0 = P::from_terms([
            (-1, t.q().clone() * t.k0()),
            (0, t.p().clone() * &(t.u0().clone() - &inv(t.u0()))),
            (1, t.k0().clone() - &inv(t.k0())),
        ]);
        assert_eq!(t0(&x, &t).unwrap(), expect_t0);
    }

    #[test]
    fn named_expressions() {
        let t = ParameterSet::fixture();
        let one = P::constant(r(1, 1));
        let y = named_expr("Y", &t).unwrap();
        assert_eq!(y.apply(&one, &t).unwrap(), P::constant(t.gamma(0)));
        assert_eq!(
            named_expr("hplus", &t).unwrap().apply(&one, &t).unwrap(),
            P::zero()
        );
        let f = P::from_terms([(-2, r(3, 1)), (1, r(-1, 2)), (3, r(5, 7))]);
        let cp = named_expr("Cplus", &t).unwrap().apply(&f, &t).unwrap();
        let cm = named_expr("Cminus", &t).unwrap().apply(&f, &t).unwrap();
        assert_eq!(cp + cm, f);
        assert!(matches!(
            named_expr("W", &t),
            Err(Error::UnknownOperator(_))
        ));
    }

    #[test]
    fn token_names_round_trip() {
        for tok in [
            Token::T0,
            Token::T1,
            Token::T0v,
            Token::T1v,
            Token::T0Inv,
            Token::T1Inv,
            Token::T0vInv,
            Token::T1vInv,
            Token::Z(-3),
            Token::Z(2),
        ] {
            assert_eq!(Token::parse(&tok.name()).unwrap(), tok);
            assert_eq!(tok.inverse().inverse(), tok);
        }
        assert!(Token::parse("T2").is_err());
    }

    #[test]
    fn expression_json_round_trip() {
        let t = ParameterSet::fixture();
        let s0 = named_expr("S0", &t).unwrap();
        let back = OperatorExpr::<Rational>::from_json(&s0.to_json(), &()).unwrap();
        assert_eq!(back, s0);
        assert_eq!(s0.to_json()["terms"][0]["word"][0], "T1");
    }

    #[test]
    fn inverse_tokens_undo_their_generators() {
        let t = ParameterSet::fixture();
        let f = P::from_terms([(-3, r(2, 1)), (0, r(1, 5)), (2, r(-4, 3))]);
        for tok in [Token::T0, Token::T1, Token::T0v, Token::T1v, Token::Z(4)] {
            let g = tok.apply(&f, &t).unwrap();
            assert_eq!(tok.inverse().apply(&g, &t).unwrap(), f, "{tok}");
        }
    }

    #[test]
    fn second_order_operator_on_constants() {
        let t = ParameterSet::fixture();
        let k = t.k0().clone() * t.k1();
        let expect = P::constant(k.clone() + &inv(&k));
        assert_eq!(apply_l(&P::constant(r(1, 1)), &t).unwrap(), expect);
        assert_eq!(
            apply_l(&P::monomial(1, r(1, 1)), &t),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn shift_of_one_vanishes() {
        let t = ParameterSet::fixture();
        let g = apply_shift(ShiftDirection::Plus, &P::constant(r(1, 1)), &t).unwrap();
        assert!(g.is_zero());
    }
}
