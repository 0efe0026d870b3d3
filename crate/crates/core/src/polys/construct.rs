use super::{basis_len, AWPolynomial, Family, Kind, Method, Sign};
use crate::error::{Error, Result};
use crate::laurent::{exponent_of_rank, LaurentPoly};
use crate::operators::named_expr;
use crate::params::ParameterSet;
use crate::qpoch::qpoch;
use crate::scalar::Scalar;

type Poly<S> = LaurentPoly<S>;

fn inv<S: Scalar>(x: &S, what: &str) -> Result<S> {
    x.checked_inv()
        .ok_or_else(|| Error::DegenerateParameters(format!("{what} vanishes")))
}

/// Back-substitution for the monic eigenvector of `Y` with eigenvalue `γ_m`.
pub(super) fn triangular_poly<S: Scalar>(fam: &Family<S>, m: i64) -> Result<Poly<S>> {
    let t = fam.params();
    let n = basis_len(m) as usize;
    let images = fam.y_images(n as u64 - 1)?;
    let target = t.gamma(m);
    let mut c: Vec<S> = vec![t.zero(); n];
    c[n - 1] = t.one();
    for s in (0..n - 1).rev() {
        let es = exponent_of_rank(s as u64);
        let mut acc = t.zero();
        for (r, img) in images.iter().enumerate().skip(s + 1) {
            if c[r].is_zero() {
                continue;
            }
            if let Some(v) = img.coeff(es) {
                acc = acc + &(v.clone() * &c[r]);
            }
        }
        let diag = images[s].coeff(es).cloned().unwrap_or_else(|| t.zero());
        let gap = target.clone() - &diag;
        let close = if S::is_exact() {
            gap.is_zero()
        } else {
            gap.abs_f64() <= 1e-30 * target.abs_f64().max(1.0)
        };
        if close {
            return Err(Error::DegenerateSpectrum(format!(
                "γ_{m} coincides with the diagonal entry at x^{es}"
            )));
        }
        c[s] = acc / &gap;
    }
    Ok(Poly::from_terms(
        c.into_iter()
            .enumerate()
            .map(|(r, v)| (exponent_of_rank(r as u64), v)),
    ))
}

/// `P_m` as the monic triangular eigenfunction of `Y`.
pub fn nonsym_triangular<S: Scalar>(t: &ParameterSet<S>, m: i64) -> Result<AWPolynomial<S>> {
    let fam = Family::new(t.clone());
    Ok(AWPolynomial {
        poly: fam.nonsym(m)?,
        kind: Kind::Nonsym,
        m,
        params: t.clone(),
        method: Method::Triangular,
    })
}

/// The constant `d_m` with `F_m = d_m P_m`.
pub fn rodrigues_dm<S: Scalar>(t: &ParameterSet<S>, m: i64) -> S {
    let k = t.k0().clone() * t.k1();
    let z = t.q().clone() * &k * &k;
    if m >= 0 {
        t.q_pow(-(m + 1) * m) * &k.powi(-2 * m).expect("nonzero") * &qpoch(&z, t.q(), 2 * m as u64)
    } else {
        let n = -m;
        t.q_pow(-n * n)
            * &t.k0().powi(1 - 2 * n).expect("nonzero")
            * &t.k1().powi(-2 * n).expect("nonzero")
            * &qpoch(&z, t.q(), (2 * n - 1) as u64)
    }
}

/// `P_m` from `(S1 S0)^m(1)` or `S0 (S1 S0)^{m-1}(1)` divided by `d_m`.
pub fn nonsym_rodrigues<S: Scalar>(t: &ParameterSet<S>, m: i64) -> Result<AWPolynomial<S>> {
    let s0 = named_expr("S0", t)?;
    let s1 = named_expr("S1", t)?;
    let mut f = Poly::constant(t.one());
    let pairs = if m >= 0 { m } else { -m - 1 };
    for _ in 0..pairs {
        f = s1.apply(&s0.apply(&f, t)?, t)?;
    }
    if m < 0 {
        f = s0.apply(&f, t)?;
    }
    let dm = rodrigues_dm(t, m);
    let dinv = inv(&dm, &format!("d_{m}"))?;
    Ok(AWPolynomial {
        poly: f.scale(&dinv),
        kind: Kind::Nonsym,
        m,
        params: t.clone(),
        method: Method::Rodrigues,
    })
}

/// Coefficient of `P_{-m}` in `P_m^±`.
fn mix_coefficient<S: Scalar>(t: &ParameterSet<S>, m: i64, sign: Sign) -> Result<S> {
    let g = match sign {
        Sign::Plus => t.gamma(m),
        Sign::Minus => ParameterSet::inv(&t.gamma(m)),
    };
    let one = t.one();
    let num = (one.clone() + &(t.k0().clone() / t.k1() * &g))
        * &(one.clone() - &(g.clone() / &(t.k0().clone() * t.k1())));
    let den = one - &(g.clone() * &g);
    Ok(num * &inv(&den, "1 - γ_m^2")?)
}

pub(super) fn symmetrize_with<S: Scalar>(fam: &Family<S>, m: i64, sign: Sign) -> Result<Poly<S>> {
    let t = fam.params();
    match (sign, m) {
        (_, m) if m < 0 => Err(Error::InvalidParameter(format!(
            "symmetrization index {m} is negative"
        ))),
        (Sign::Minus, 0) => Err(Error::EmptyIsotype),
        (Sign::Plus, 0) => Ok(Poly::constant(t.one())),
        (sign, m) => {
            let c = mix_coefficient(t, m, sign)?;
            let pm = fam.nonsym(m)?;
            let pneg = fam.nonsym(-m)?.scale(&c);
            Ok(match sign {
                Sign::Plus => pm + pneg,
                Sign::Minus => pm - pneg,
            })
        }
    }
}

/// `P_m^+` (`m ≥ 0`) or `P_m^-` (`m ≥ 1`) as combinations of `P_m` and `P_{-m}`.
pub fn symmetrize<S: Scalar>(t: &ParameterSet<S>, m: i64, sign: Sign) -> Result<AWPolynomial<S>> {
    let fam = Family::new(t.clone());
    let poly = symmetrize_with(&fam, m, sign)?;
    let kind = if sign == Sign::Plus {
        Kind::Sym
    } else {
        Kind::Antisym
    };
    Ok(AWPolynomial {
        poly,
        kind,
        m,
        params: t.clone(),
        method: Method::Symmetrized,
    })
}

/// `(α_m, β_m)` with `T1 P_m = α_m P_m + β_m P_{-m}`, `m ≠ 0`.
pub fn alpha_beta<S: Scalar>(t: &ParameterSet<S>, m: i64) -> Result<(S, S)> {
    if m == 0 {
        return Err(Error::InvalidParameter("α_m, β_m need m ≠ 0".into()));
    }
    let (k0, k1) = (t.k0(), t.k1());
    let one = t.one();
    let g = t.gamma(m);
    let g2 = g.clone() * &g;
    let den = inv(&(one.clone() - &g2), "1 - γ_m^2")?;
    let alpha = ((ParameterSet::inv(k1) - k1) * &g2 + &((ParameterSet::inv(k0) - k0) * &g)) * &den;
    if m < 0 {
        return Ok((alpha, k1.clone()));
    }
    let mut beta = k1.clone();
    for xi in [1i64, -1] {
        let gx = g.powi(xi).expect("nonzero");
        let num = (one.clone() + &(k0.clone() / k1 * &gx))
            * &(one.clone() - &(gx.clone() / &(k0.clone() * k1)));
        let den = one.clone() - &gx.powi(2).expect("nonzero");
        beta = beta * &num * &inv(&den, "1 - γ_m^{±2}")?;
    }
    Ok((alpha, beta))
}

/// `(P_m, P_{-m})` rebuilt from `P_m^+` through `(Y − γ_{∓m})`, `m ≥ 1`.
pub fn reconstruct_pair<S: Scalar>(fam: &Family<S>, m: i64) -> Result<(Poly<S>, Poly<S>)> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!(
            "reconstruction needs m ≥ 1, got {m}"
        )));
    }
    let t = fam.params();
    let y = named_expr("Y", t)?;
    let plus = fam.sym(m)?;
    let yp = y.apply(&plus, t)?;
    let (g, gneg) = (t.gamma(m), t.gamma(-m));
    let pm = (&yp - &plus.scale(&gneg)).scale(&inv(&(g.clone() - &gneg), "γ_m − γ_{-m}")?);
    let one = t.one();
    let k = (one.clone() + &(t.k0().clone() / t.k1() * &g))
        * &(one - &(g.clone() / &(t.k0().clone() * t.k1())));
    let pneg = (&yp - &plus.scale(&g)).scale(&(g.clone() * &inv(&k, "symmetrization factor")?));
    Ok((pm, pneg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_cases() {
        let t = ParameterSet::<Rational>::fixture();
        assert_eq!(
            nonsym_triangular(&t, 0).unwrap().poly,
            Poly::constant(r(1, 1))
        );
        assert_eq!(rodrigues_dm(&t, 0), r(1, 1));
        let k0 = t.k0().clone();
        let k1 = t.k1().clone();
        let expect = ParameterSet::inv(t.q()) / &k0 / &(k1.clone() * &k1)
            * &(r(1, 1) - &(t.q().clone() * &k0 * &k0 * &k1 * &k1));
        assert_eq!(rodrigues_dm(&t, -1), expect);
        assert_eq!(
            symmetrize(&t, 0, Sign::Plus).unwrap().poly,
            Poly::constant(r(1, 1))
        );
        assert_eq!(
            symmetrize(&t, 0, Sign::Minus).unwrap_err(),
            Error::EmptyIsotype
        );
        assert_eq!(alpha_beta(&t, -3).unwrap().1, k1);
    }

    #[test]
    fn eigen_equation_and_rodrigues_agree() {
        let t = ParameterSet::<Rational>::fixture();
        let y = named_expr("Y", &t).unwrap();
        for m in -3..=3 {
            let p = nonsym_triangular(&t, m).unwrap().poly;
            assert_eq!(p.leading_term().unwrap(), (m, r(1, 1)));
            assert_eq!(y.apply(&p, &t).unwrap(), p.scale(&t.gamma(m)));
            assert_eq!(nonsym_rodrigues(&t, m).unwrap().poly, p, "m = {m}");
        }
    }

    #[test]
    fn degenerate_spectrum_is_reported() {
        // k0·k1 = 2 and q = 1/4 give γ_0 = γ_{-1} = 2.
        let t = ParameterSet::new(r(1, 2), r(3, 1), r(2, 3), r(5, 7), r(3, 4)).unwrap();
        assert!(matches!(
            nonsym_triangular(&t, -1),
            Err(Error::DegenerateSpectrum(_))
        ));
    }
}
