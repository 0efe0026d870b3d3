use super::{AWPolynomial, Kind, Method};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::{Abcd, ParameterSet};
use crate::qpoch::qpoch;
use crate::scalar::Scalar;

type Poly<S> = LaurentPoly<S>;

fn inv<S: Scalar>(x: &S, what: &str) -> Result<S> {
    x.checked_inv()
        .ok_or_else(|| Error::DegenerateParameters(format!("{what} vanishes")))
}

/// Monic symmetric polynomial of degree `m` from the terminating balanced
/// `4φ3` in `(q^{-m}, q^{m-1}abcd, ax, a/x; ab, ac, ad)`.
pub fn sym_series<S: Scalar>(p: &Abcd<S>, m: i64) -> Result<Poly<S>> {
    if m < 0 {
        return Err(Error::InvalidParameter(format!("degree {m} is negative")));
    }
    let one = p.q.one_like();
    let q = &p.q;
    let qp = |n: i64| q.powi(n).expect("q nonzero");
    let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
    let ab = a.clone() * b;
    let ac = a.clone() * c;
    let ad = a.clone() * d;
    let abcd = ab.clone() * c * d;
    let mu = m as u64;
    let norm_den = a
        .powi(m)
        .ok_or_else(|| Error::DegenerateParameters("a vanishes".into()))?
        * &qpoch(&(abcd.clone() * &qp(m - 1)), q, mu);
    let prefactor = qpoch(&ab, q, mu)
        * &qpoch(&ac, q, mu)
        * &qpoch(&ad, q, mu)
        * &inv(&norm_den, "(q^{m-1}abcd; q)_m")?;

    let mut sum = Poly::zero();
    let mut coeff = one.clone();
    // (ax, a/x; q)_k built incrementally.
    let mut basis = Poly::constant(one.clone());
    for k in 0..=m {
        if k > 0 {
            let j = k - 1;
            let num =
                (one.clone() - &qp(j - m)) * &(one.clone() - &(abcd.clone() * &qp(m - 1 + j)));
            let den = (one.clone() - &(ab.clone() * &qp(j)))
                * &(one.clone() - &(ac.clone() * &qp(j)))
                * &(one.clone() - &(ad.clone() * &qp(j)))
                * &(one.clone() - &qp(j + 1));
            coeff = coeff * &num * &inv(&den, "(ab, ac, ad, q; q)_k")? * q;
            let aq = a.clone() * &qp(j);
            // (1 − aq^j x)(1 − aq^j/x) = 1 + a²q^{2j} − aq^j (x + 1/x)
            let factor = Poly::from_terms([
                (-1, -aq.clone()),
                (0, one.clone() + &(aq.clone() * &aq)),
                (1, -aq),
            ]);
            basis = basis * factor;
        }
        sum = sum + basis.scale(&coeff);
    }
    Ok(sum.scale(&prefactor))
}

/// `P_{m-1}^+(q^{-1/2}x; q^{1/2}a, q^{1/2}b, q^{1/2}c, q^{1/2}d)` times
/// `q^{(m-1)/2}(1 − c/x)(1 − d/x)x`.
fn shifted_part<S: Scalar>(t: &ParameterSet<S>, m: i64) -> Result<Poly<S>> {
    let p = t.p();
    let ab = t.abcd();
    let lifted = Abcd::new(
        ab.a.clone() * p,
        ab.b.clone() * p,
        ab.c.clone() * p,
        ab.d.clone() * p,
        ab.q.clone(),
    );
    let inner = sym_series(&lifted, m - 1)?.dilate(&ParameterSet::inv(p));
    let lin = Poly::from_terms([
        (1, t.one()),
        (0, -(t.c().clone() + t.d())),
        (-1, t.c().clone() * t.d()),
    ]);
    Ok((lin * inner).scale(&t.p_pow(m - 1)))
}

/// `P_m` as a combination of two balanced `4φ3`'s.
pub fn nonsym_series<S: Scalar>(t: &ParameterSet<S>, m: i64) -> Result<AWPolynomial<S>> {
    let ab = t.abcd();
    let one = t.one();
    let abcd = t.a().clone() * t.b() * t.c() * t.d();
    let poly = if m == 0 {
        Poly::constant(one)
    } else if m > 0 {
        let den = inv(
            &(one.clone() - &(abcd.clone() * &t.q_pow(2 * m - 1))),
            "1 − abcd q^{2m-1}",
        )?;
        let first = sym_series(&ab, m)?
            .scale(&(t.q_pow(m) * &(one.clone() - &(abcd.clone() * &t.q_pow(m - 1))) * &den));
        let second = shifted_part(t, m)?.scale(&((one - &t.q_pow(m)) * &den));
        first + second
    } else {
        let n = -m;
        let den = inv(
            &(one - &(t.c().clone() * t.d() * &t.q_pow(n - 1))),
            "1 − cd q^{m-1}",
        )?;
        (sym_series(&ab, n)? - shifted_part(t, n)?).scale(&den)
    };
    Ok(AWPolynomial {
        poly,
        kind: Kind::Nonsym,
        m,
        params: t.clone(),
        method: Method::Series,
    })
}

/// `P_m^-` (`m ≥ 1`) as a combination of two balanced `4φ3`'s.
pub fn antisym_series<S: Scalar>(t: &ParameterSet<S>, m: i64) -> Result<AWPolynomial<S>> {
    if m < 1 {
        return Err(Error::EmptyIsotype);
    }
    let one = t.one();
    let ab = t.a().clone() * t.b();
    let abcd = ab.clone() * t.c() * t.d();
    let den = inv(
        &(ab.clone() * &(one.clone() - &(t.c().clone() * t.d() * &t.q_pow(m - 1)))),
        "ab(1 − cd q^{m-1})",
    )?;
    let first =
        sym_series(&t.abcd(), m)?.scale(&((one.clone() - &(abcd * &t.q_pow(m - 1))) * &den));
    let second = shifted_part(t, m)?.scale(&((ab - &one) * &den));
    Ok(AWPolynomial {
        poly: first + second,
        kind: Kind::Antisym,
        m,
        params: t.clone(),
        method: Method::Series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn degree_zero_and_one() {
        let t = ParameterSet::<Rational>::fixture();
        assert_eq!(
            sym_series(&t.abcd(), 0).unwrap(),
            Poly::constant(Rational::from(1))
        );
        let p1 = sym_series(&t.abcd(), 1).unwrap();
        assert!(p1.is_symmetric());
        assert_eq!(p1.leading_term().unwrap(), (1, Rational::from(1)));
        assert_eq!(
            nonsym_series(&t, 0).unwrap().poly,
            Poly::constant(Rational::from(1))
        );
    }

    #[test]
    fn parameter_permutations_leave_the_polynomial_unchanged() {
        let t = ParameterSet::<Rational>::fixture();
        let base = t.abcd();
        for m in 0..=3 {
            let p = sym_series(&base, m).unwrap();
            for perm in [[1, 0, 2, 3], [2, 3, 0, 1], [3, 1, 2, 0]] {
                assert_eq!(
                    sym_series(&base.permuted(perm), m).unwrap(),
                    p,
                    "m = {m}, {perm:?}"
                );
            }
        }
    }
}
