use super::{AWPolynomial, Family, Kind, Method};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::ParameterSet;
use crate::qpoch::qpoch;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvKind {
    Nonsym,
    Sym,
}

/// `f(a^{-1})`.
pub fn ev_value<S: Scalar>(f: &LaurentPoly<S>, t: &ParameterSet<S>) -> Result<S> {
    f.evaluate(&ParameterSet::inv(t.a()))
}

/// Closed forms for `P_m(a^{-1})` and `P_m^+(a^{-1})`.
pub fn ev_closed<S: Scalar>(t: &ParameterSet<S>, m: i64, kind: EvKind) -> Result<S> {
    let (a, b, c, d, q) = (t.a(), t.b(), t.c(), t.d(), t.q());
    let one = t.one();
    let ab = a.clone() * b;
    let ac = a.clone() * c;
    let ad = a.clone() * d;
    let abcd = ab.clone() * c * d;
    let n = m.unsigned_abs();
    let a_pow = a.powi(-m.abs()).expect("a nonzero");
    let div = |num: S, den: S, what: &str| -> Result<S> {
        den.checked_inv()
            .map(|i| num * &i)
            .ok_or_else(|| Error::DegenerateParameters(format!("{what} vanishes")))
    };
    match kind {
        EvKind::Sym => {
            if m < 0 {
                return Err(Error::InvalidParameter(format!(
                    "symmetric index {m} is negative"
                )));
            }
            let num = qpoch(&ab, q, n) * &qpoch(&ac, q, n) * &qpoch(&ad, q, n);
            div(
                a_pow * &num,
                qpoch(&(abcd * &t.q_pow(m - 1)), q, n),
                "(q^{m-1}abcd; q)_m",
            )
        }
        EvKind::Nonsym if m >= 0 => {
            let num = qpoch(&(q.clone() * &ab), q, n) * &qpoch(&ac, q, n) * &qpoch(&ad, q, n);
            div(
                a_pow * &num,
                qpoch(&(abcd * &t.q_pow(m)), q, n),
                "(q^m abcd; q)_m",
            )
        }
        EvKind::Nonsym => {
            let num = qpoch(&ab, q, n) * &qpoch(&ac, q, n) * &qpoch(&ad, q, n);
            let den =
                qpoch(&(abcd * &t.q_pow(n as i64 - 1)), q, n) * &(one - &ParameterSet::inv(&ab));
            div(a_pow * &num, den, "(1 − a^{-1}b^{-1})(q^{m-1}abcd; q)_m")
        }
    }
}

pub(super) fn normalize<S: Scalar>(p: &LaurentPoly<S>, at: &S) -> Result<LaurentPoly<S>> {
    let v = p.evaluate(at)?;
    let i = v
        .checked_inv()
        .ok_or_else(|| Error::NormalizationFailure(format!("polynomial vanishes at {at}")))?;
    Ok(p.scale(&i))
}

/// `E_{γ_m}` or `E^+_{s(γ_m)}`, normalized to one at `a^{-1}` resp. `a`.
pub fn renormalize<S: Scalar>(
    t: &ParameterSet<S>,
    m: i64,
    symmetric: bool,
) -> Result<AWPolynomial<S>> {
    let fam = Family::new(t.clone());
    let (poly, kind, method) = if symmetric {
        (fam.renorm_sym(m)?, Kind::RenormSym, Method::Symmetrized)
    } else {
        (fam.renorm(m)?, Kind::RenormNonsym, Method::Triangular)
    };
    Ok(AWPolynomial {
        poly,
        kind,
        m,
        params: t.clone(),
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn closed_forms_match_direct_evaluation() {
        let t = ParameterSet::<Rational>::fixture();
        let fam = Family::new(t.clone());
        assert_eq!(ev_closed(&t, 0, EvKind::Nonsym).unwrap(), Rational::from(1));
        for m in -3..=3 {
            let p = fam.nonsym(m).unwrap();
            assert_eq!(
                ev_value(&p, &t).unwrap(),
                ev_closed(&t, m, EvKind::Nonsym).unwrap(),
                "m = {m}"
            );
        }
        for m in 0..=3 {
            let p = fam.sym(m).unwrap();
            assert_eq!(
                ev_value(&p, &t).unwrap(),
                ev_closed(&t, m, EvKind::Sym).unwrap()
            );
        }
    }

    #[test]
    fn renormalized_polynomials_take_the_value_one() {
        let t = ParameterSet::<Rational>::fixture();
        for m in -2..=2 {
            let e = renormalize(&t, m, false).unwrap();
            assert_eq!(ev_value(&e.poly, &t).unwrap(), Rational::from(1));
        }
        let e = renormalize(&t, 2, true).unwrap();
        assert_eq!(e.poly.evaluate(t.a()).unwrap(), Rational::from(1));
    }
}
