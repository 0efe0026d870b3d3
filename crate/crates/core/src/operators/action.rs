//! Primitive difference-reflection operators on Laurent polynomials.

use crate::error::{Error, Result};
use crate::laurent::{weyl_denominator, LaurentPoly};
use crate::params::ParameterSet;
use crate::scalar::Scalar;

type Poly<S> = LaurentPoly<S>;

fn one_minus<S: Scalar>(c: &S, e: i64) -> Poly<S> {
    Poly::from_terms([(0, c.one_like()), (e, -c.clone())])
}

/// `T1 f = k1 f + k1^{-1}(1−ax)(1−bx)/(1−x²)·(s1 f − f)`.
pub fn t1<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    let diff = &f.s1() - f;
    let num = one_minus(t.a(), 1) * one_minus(t.b(), 1) * diff;
    let h = num.exact_div(&one_minus(&t.one(), 2))?;
    Ok(f.scale(t.k1()) + h.scale(&ParameterSet::inv(t.k1())))
}

/// `T0 f = k0 f + k0^{-1}(1−cx^{-1})(1−dx^{-1})/(1−qx^{-2})·(s0 f − f)`.
pub fn t0<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    let diff = &f.s0(t.q()) - f;
    let num = one_minus(t.c(), -1) * one_minus(t.d(), -1) * diff;
    let h = num.exact_div(&one_minus(t.q(), -2))?;
    Ok(f.scale(t.k0()) + h.scale(&ParameterSet::inv(t.k0())))
}

/// `T1^{-1} = T1 + k1^{-1} − k1`.
pub fn t1_inv<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    let shift = ParameterSet::inv(t.k1()) - t.k1();
    Ok(t1(f, t)? + f.scale(&shift))
}

/// `T0^{-1} = T0 + k0^{-1} − k0`.
pub fn t0_inv<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    let shift = ParameterSet::inv(t.k0()) - t.k0();
    Ok(t0(f, t)? + f.scale(&shift))
}

/// `T1^∨ = x^{-1} T1^{-1}`.
pub fn t1v<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    Ok(t1_inv(f, t)?.shift(-1))
}

/// `(T1^∨)^{-1} = T1 x`.
pub fn t1v_inv<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    t1(&f.shift(1), t)
}

/// `T0^∨ = p^{-1} T0^{-1} x`.
pub fn t0v<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    Ok(t0_inv(&f.shift(1), t)?.scale(&ParameterSet::inv(t.p())))
}

/// `(T0^∨)^{-1} = p x^{-1} T0`.
pub fn t0v_inv<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    Ok(t0(f, t)?.shift(-1).scale(t.p()))
}

/// The second-order operator
/// `L = A(x)(τ(1) − 1) + A(x^{-1})(τ(−1) − 1) + k0k1 + (k0k1)^{-1}` on
/// symmetric polynomials, with
/// `A(x) = (k0k1)^{-1}(1−ax)(1−bx)(1−cx)(1−dx)/((1−x²)(1−qx²))`.
pub fn apply_l<S: Scalar>(f: &Poly<S>, t: &ParameterSet<S>) -> Result<Poly<S>> {
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let one = t.one();
    let num = one_minus(t.a(), 1) * one_minus(t.b(), 1) * one_minus(t.c(), 1) * one_minus(t.d(), 1);
    let den = one_minus(&one, 2) * one_minus(t.q(), 2);
    let num_inv = num.s1();
    let den_inv = den.s1();
    let up = &f.tau(1, t.q()) - f;
    let down = &f.tau(-1, t.q()) - f;
    let combined = num * &den_inv * up + num_inv * &den * down;
    let quotient = combined.exact_div(&(den * den_inv))?;
    let k = t.k0().clone() * t.k1();
    let kinv = ParameterSet::inv(&k);
    Ok(quotient.scale(&kinv) + f.scale(&(k + &kinv)))
}

/// Direction of a shift operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Plus,
    Minus,
}

/// `G₊ f = δ^{-1} h₊(Y) f` and `G₋ f = h₋(Y)(δ f)` on symmetric `f`.
pub fn apply_shift<S: Scalar>(
    dir: ShiftDirection,
    f: &Poly<S>,
    t: &ParameterSet<S>,
) -> Result<Poly<S>> {
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let delta = weyl_denominator(t);
    match dir {
        ShiftDirection::Plus => {
            let h = super::named_expr("hplus", t)?.apply(f, t)?;
            h.exact_div(&delta)
        }
        ShiftDirection::Minus => super::named_expr("hminus", t)?.apply(&(&delta * f), t),
    }
}
