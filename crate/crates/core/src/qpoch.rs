//! q-shifted factorials `(z; q)_n` and `(z; q)_∞`.

use crate::error::{Error, Result};
use crate::scalar::{MpComplex, Scalar};

/// Default truncation tolerance of infinite products, `2^{-200}`.
pub fn default_product_tol() -> f64 {
    2f64.powi(-200)
}

/// A tolerance suited to the given working precision.
pub fn product_tol_for(prec: u32) -> f64 {
    if prec >= 256 {
        default_product_tol()
    } else {
        2f64.powi(-(prec as i32 + 8))
    }
}

/// Length of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(u64),
    Infinite,
}

/// `∏_{j<n} (1 − z q^j)`, exact on either backend.
pub fn qpoch<S: Scalar>(z: &S, q: &S, n: u64) -> S {
    let mut acc = z.one_like();
    let mut zq = z.clone();
    for j in 0..n {
        acc = acc * &(z.one_like() - &zq);
        if j + 1 < n {
            zq = zq * q;
        }
    }
    acc
}

/// `∏_i (z_i; q)_n`.
pub fn qpoch_many<S: Scalar>(zs: &[S], q: &S, n: u64) -> S {
    let mut acc = q.one_like();
    for z in zs {
        acc = acc * &qpoch(z, q, n);
    }
    acc
}

/// Number of factors kept when truncating `(z; q)_∞` at tolerance `tol`:
/// the smallest `J` with `|z|·|q|^J < tol`.
pub fn truncation_length(z_abs: f64, q_abs: f64, tol: f64) -> u64 {
    if z_abs < tol {
        return 0;
    }
    let est = ((tol / z_abs).ln() / q_abs.ln()).floor().max(0.0) as u64;
    let mut j = est.saturating_sub(2);
    while z_abs * q_abs.powi(j as i32) >= tol {
        j += 1;
    }
    j
}

/// `(z; q)_∞` truncated at the smallest `J` with `|z|·|q|^J < tol`.
pub fn qpoch_inf(z: &MpComplex, q: &MpComplex, tol: f64) -> Result<MpComplex> {
    let q_abs = q.abs_f64();
    if q_abs >= 1.0 {
        return Err(Error::DivergentProduct(format!("|q| = {q_abs} >= 1")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(
            "truncation tolerance must be positive".into(),
        ));
    }
    let j = truncation_length(z.abs_f64(), q_abs, tol);
    Ok(qpoch(z, q, j))
}

/// `∏_i (z_i; q)_∞`.
pub fn qpoch_inf_many(zs: &[MpComplex], q: &MpComplex, tol: f64) -> Result<MpComplex> {
    let mut acc = MpComplex::one(q.prec());
    for z in zs {
        acc = acc * &qpoch_inf(z, q, tol)?;
    }
    Ok(acc)
}

/// Backend-generic entry point; infinite products need the float backend.
pub fn qpoch_len<S: Scalar>(z: &S, q: &S, len: Length, tol: f64) -> Result<S> {
    match len {
        Length::Finite(n) => Ok(qpoch(z, q, n)),
        Length::Infinite => {
            if S::is_exact() {
                return Err(Error::BackendUnsupported(
                    "infinite q-shifted factorials need the float backend".into(),
                ));
            }
            let prec = z.bits().unwrap_or(53).max(q.bits().unwrap_or(53));
            let v = qpoch_inf(&z.to_mp(prec), &q.to_mp(prec), tol)?;
            Ok(S::from_mp(&v, &z.ctx()).expect("float backend"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn finite_products() {
        assert_eq!(qpoch(&r(3, 7), &r(1, 4), 0), r(1, 1));
        assert_eq!(qpoch(&r(1, 4), &r(1, 4), 2), r(45, 64));
        for n in 0..12u64 {
            let lhs = qpoch(&r(2, 3), &r(-1, 5), n + 1);
            let rhs = qpoch(&r(2, 3), &r(-1, 5), n)
                * (r(1, 1) - r(2, 3) * r(-1, 5).powi(n as i64).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn infinite_product_is_stable_under_doubling() {
        let prec = 256;
        let z = MpComplex::from_rational_prec(&r(1, 2), prec);
        let q = MpComplex::from_rational_prec(&r(1, 4), prec);
        let tol = 1e-30;
        let v = qpoch_inf(&z, &q, tol).unwrap();
        let j = truncation_length(0.5, 0.25, tol);
        let doubled = qpoch(&z, &q, 2 * j);
        assert!((v.clone() - &doubled).abs_f64() < tol);
        assert!(0.5 * 0.25f64.powi(j as i32) < tol);
        assert!(0.5 * 0.25f64.powi(j as i32 - 1) >= tol);
    }

    #[test]
    fn infinite_product_errors() {
        let e = qpoch_len(&r(1, 2), &r(1, 4), Length::Infinite, 1e-20).unwrap_err();
        assert!(matches!(e, Error::BackendUnsupported(_)));
        let z = MpComplex::from_f64(0.5, 0.0, 64);
        let q = MpComplex::from_f64(1.0, 0.0, 64);
        assert!(matches!(
            qpoch_inf(&z, &q, 1e-10),
            Err(Error::DivergentProduct(_))
        ));
        let q2 = MpComplex::from_f64(0.25, 0.0, 64);
        let g = qpoch_len(&z, &q2, Length::Infinite, 1e-15).unwrap();
        assert!((g.abs_f64() - 0.4194224417951).abs() < 1e-12);
    }
}
