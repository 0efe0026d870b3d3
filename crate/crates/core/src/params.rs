//! Multiplicity data, spectral sequences and genericity checks.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, MpComplex, Rational, Scalar};

/// Default scan window for [`check_genericity`].
pub const DEFAULT_GENERICITY_WINDOW: i64 = 100;

/// The parameters `(p, k0, k1, u0, u1)` with `q = p²` and the derived
/// Askey-Wilson parameters `a = k1·u1`, `b = −k1/u1`, `c = p·k0·u0`,
/// `d = −p·k0/u0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet<S: Scalar> {
    p: S,
    k0: S,
    k1: S,
    u0: S,
    u1: S,
    q: S,
    a: S,
    b: S,
    c: S,
    d: S,
}

/// The four Askey-Wilson parameters together with the base `q`.
///
/// Used where only `(a, b, c, d; q)` matter (symmetric polynomials, weights,
/// closed forms), including parameter points that are not presented through a
/// [`ParameterSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct Abcd<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
    pub q: S,
}

impl<S: Scalar> Abcd<S> {
    pub fn new(a: S, b: S, c: S, d: S, q: S) -> Self {
        Abcd { a, b, c, d, q }
    }

    pub fn as_array(&self) -> [&S; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `(q^{2k}a, q^{2l}b, q^{2m}c, q^{2n}d)`.
    pub fn scaled(&self, k: i64, l: i64, m: i64, n: i64) -> Self {
        let qp = |e: i64| self.q.powi(2 * e).expect("q is nonzero");
        Abcd {
            a: self.a.clone() * &qp(k),
            b: self.b.clone() * &qp(l),
            c: self.c.clone() * &qp(m),
            d: self.d.clone() * &qp(n),
            q: self.q.clone(),
        }
    }

    /// Reorders `(a, b, c, d)` by the permutation `perm` of `0..4`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let v = self.as_array();
        Abcd {
            a: v[perm[0]].clone(),
            b: v[perm[1]].clone(),
            c: v[perm[2]].clone(),
            d: v[perm[3]].clone(),
            q: self.q.clone(),
        }
    }

    pub fn to_mp(&self, prec: u32) -> Abcd<MpComplex> {
        Abcd {
            a: self.a.to_mp(prec),
            b: self.b.to_mp(prec),
            c: self.c.to_mp(prec),
            d: self.d.to_mp(prec),
            q: self.q.to_mp(prec),
        }
    }

    pub fn ctx(&self) -> S::Ctx {
        self.q.ctx()
    }
}

/// Spectral data attached to an integer index.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPoint<S: Scalar> {
    pub m: i64,
    pub gamma: S,
    pub xval: S,
    pub eps: i8,
}

pub fn eps(m: i64) -> i64 {
    if m >= 0 {
        1
    } else {
        -1
    }
}

impl<S: Scalar> ParameterSet<S> {
    pub fn new(p: S, k0: S, k1: S, u0: S, u1: S) -> Result<Self> {
        for (name, v) in [
            ("p", &p),
            ("k0", &k0),
            ("k1", &k1),
            ("u0", &u0),
            ("u1", &u1),
        ] {
            if v.is_zero() {
                return Err(Error::InvalidParameter(format!("{name} must be nonzero")));
            }
        }
        let q = p.clone() * &p;
        if q == q.one_like() {
            return Err(Error::InvalidParameter("q = 1 is excluded".into()));
        }
        let a = k1.clone() * &u1;
        let b = -(k1.clone() / &u1);
        let c = p.clone() * &k0 * &u0;
        let d = -(p.clone() * &k0 / &u0);
        Ok(ParameterSet {
            p,
            k0,
            k1,
            u0,
            u1,
            q,
            a,
            b,
            c,
            d,
        })
    }

    pub fn p(&self) -> &S {
        &self.p
    }
    pub fn k0(&self) -> &S {
        &self.k0
    }
    pub fn k1(&self) -> &S {
        &self.k1
    }
    pub fn u0(&self) -> &S {
        &self.u0
    }
    pub fn u1(&self) -> &S {
        &self.u1
    }
    pub fn q(&self) -> &S {
        &self.q
    }
    pub fn a(&self) -> &S {
        &self.a
    }
    pub fn b(&self) -> &S {
        &self.b
    }
    pub fn c(&self) -> &S {
        &self.c
    }
    pub fn d(&self) -> &S {
        &self.d
    }

    pub fn ctx(&self) -> S::Ctx {
        self.p.ctx()
    }

    /// The scalar `n` in this backend.
    pub fn int(&self, n: i64) -> S {
        S::from_i64(n, &self.ctx())
    }

    pub fn rat(&self, r: &Rational) -> S {
        S::from_rational(r, &self.ctx())
    }

    pub fn one(&self) -> S {
        self.int(1)
    }

    pub fn zero(&self) -> S {
        self.int(0)
    }

    /// `q^n` for any integer `n`.
    pub fn q_pow(&self, n: i64) -> S {
        self.q.powi(n).expect("q is nonzero")
    }

    /// `p^n` for any integer `n`.
    pub fn p_pow(&self, n: i64) -> S {
        self.p.powi(n).expect("p is nonzero")
    }

    pub fn inv(x: &S) -> S {
        x.checked_inv().expect("parameters are nonzero")
    }

    pub fn entries(&self) -> [&S; 5] {
        [&self.p, &self.k0, &self.k1, &self.u0, &self.u1]
    }

    /// `(p, u1, k1, u0, k0)`: `k0` and `u1` interchanged.
    pub fn dual(&self) -> Self {
        Self::new(
            self.p.clone(),
            self.u1.clone(),
            self.k1.clone(),
            self.u0.clone(),
            self.k0.clone(),
        )
        .expect("dual of a valid parameter set is valid")
    }

    /// Every entry replaced by its reciprocal.
    pub fn inverse(&self) -> Self {
        let i = |x: &S| Self::inv(x);
        Self::new(
            i(&self.p),
            i(&self.k0),
            i(&self.k1),
            i(&self.u0),
            i(&self.u1),
        )
        .expect("inverse of a valid parameter set is valid")
    }

    /// `(k0, q·k1, u0, u1)`, the target of the shift operators.
    pub fn shifted(&self) -> Self {
        Self::new(
            self.p.clone(),
            self.k0.clone(),
            self.q.clone() * &self.k1,
            self.u0.clone(),
            self.u1.clone(),
        )
        .expect("shift of a valid parameter set is valid")
    }

    pub fn abcd(&self) -> Abcd<S> {
        Abcd::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.q.clone(),
        )
    }

    /// `γ_m = (k0·k1)^{ε(m)} q^m`.
    pub fn gamma(&self, m: i64) -> S {
        let base = self.k0.clone() * &self.k1;
        base.powi(eps(m)).expect("nonzero") * &self.q_pow(m)
    }

    /// `x_m = (k1·u1)^{ε(m)} q^m`.
    pub fn xval(&self, m: i64) -> S {
        self.a.powi(eps(m)).expect("nonzero") * &self.q_pow(m)
    }

    pub fn spectral_point(&self, m: i64) -> SpectralPoint<S> {
        SpectralPoint {
            m,
            gamma: self.gamma(m),
            xval: self.xval(m),
            eps: eps(m) as i8,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.to_json(),
            "k0": self.k0.to_json(),
            "k1": self.k1.to_json(),
            "u0": self.u0.to_json(),
            "u1": self.u1.to_json(),
        })
    }

    pub fn from_json(v: &Value, ctx: &S::Ctx) -> Result<Self> {
        let get = |k: &str| -> Result<S> {
            let x = v
                .get(k)
                .ok_or_else(|| Error::Parse(format!("parameter set lacks {k:?}")))?;
            S::from_json(x, ctx)
        };
        Self::new(get("p")?, get("k0")?, get("k1")?, get("u0")?, get("u1")?)
    }

    pub fn to_mp(&self, prec: u32) -> ParameterSet<MpComplex> {
        let f = |x: &S| x.to_mp(prec);
        ParameterSet::new(
            f(&self.p),
            f(&self.k0),
            f(&self.k1),
            f(&self.u0),
            f(&self.u1),
        )
        .expect("conversion keeps entries nonzero")
    }
}

impl ParameterSet<Rational> {
    /// The standard test point `(1/2, 3/5, 2/3, 5/7, 3/4)`.
    pub fn fixture() -> Self {
        let r = |n: i64, d: i64| Rational::from((n, d));
        Self::new(r(1, 2), r(3, 5), r(2, 3), r(5, 7), r(3, 4)).expect("fixture is valid")
    }

    /// Parses `"p,k0,k1,u0,u1"` with each entry `n/d` or an integer.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "expected five comma-separated rationals, got {s:?}"
            )));
        }
        let v = parts
            .iter()
            .map(|x| parse_rational(x))
            .collect::<Result<Vec<_>>>()?;
        let mut it = v.into_iter();
        let mut next = || it.next().expect("five entries");
        Self::new(next(), next(), next(), next(), next())
    }

    pub fn to_compact(&self) -> String {
        self.entries()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl<S: Scalar> fmt::Display for ParameterSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(p={}, k0={}, k1={}, u0={}, u1={})",
            self.p, self.k0, self.k1, self.u0, self.u1
        )
    }
}

// ---------------------------------------------------------------------------
// genericity

/// Which products `e·f` of the Askey-Wilson parameters are scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRule {
    /// Only `e ≠ f`.
    Distinct,
    /// Also the squares `e·e`.
    IncludeDiagonal,
}

/// A relation `quantity = sign·q^power` found inside the scan window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityViolation {
    pub quantity: String,
    pub sign: i8,
    pub power: i64,
}

impl fmt::Display for GenericityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == i64::MAX {
            return write!(f, "{}", self.quantity);
        }
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{} = {s}q^{}", self.quantity, self.power)
    }
}

fn matches<S: Scalar>(x: &S, y: &S) -> bool {
    let scale = x.abs_f64().max(y.abs_f64());
    x.close_to(y, 0.0, 2f64.powi(-160), scale)
}

/// Scans `|j| ≤ n` for the relations excluded by the genericity assumptions,
/// with distinct pairs `e ≠ f` for the products of Askey-Wilson parameters.
pub fn check_genericity<S: Scalar>(t: &ParameterSet<S>, n: i64) -> Vec<GenericityViolation> {
    check_genericity_with(t, n, PairRule::Distinct)
}

pub fn check_genericity_with<S: Scalar>(
    t: &ParameterSet<S>,
    n: i64,
    rule: PairRule,
) -> Vec<GenericityViolation> {
    let mut out = Vec::new();
    let one = t.one();
    let unit_q = if S::is_exact() {
        t.q() == &one || t.q() == &-one.clone()
    } else {
        (t.q().abs_f64() - 1.0).abs() < 1e-15
    };
    if unit_q {
        out.push(GenericityViolation {
            quantity: "|q| = 1".into(),
            sign: 1,
            power: i64::MAX,
        });
        return out;
    }
    let powers: Vec<(i64, S)> = (-n..=n).map(|j| (j, t.q_pow(j))).collect();
    let squares = [
        ("k0^2", t.k0().clone() * t.k0()),
        ("k1^2", t.k1().clone() * t.k1()),
        ("u1^2", t.u1().clone() * t.u1()),
    ];
    for (name, v) in &squares {
        for (j, qj) in &powers {
            if matches(v, qj) {
                out.push(GenericityViolation {
                    quantity: name.to_string(),
                    sign: 1,
                    power: *j,
                });
            }
            if matches(v, &-qj.clone()) {
                out.push(GenericityViolation {
                    quantity: name.to_string(),
                    sign: -1,
                    power: *j,
                });
            }
        }
    }
    let names = ["a", "b", "c", "d"];
    let vals = [t.a(), t.b(), t.c(), t.d()];
    for i in 0..4 {
        for k in 0..4 {
            if i == k && rule == PairRule::Distinct {
                continue;
            }
            let prod = vals[i].clone() * vals[k];
            for (j, qj) in &powers {
                if matches(&prod, qj) {
                    out.push(GenericityViolation {
                        quantity: format!("{}*{}", names[i], names[k]),
                        sign: 1,
                        power: *j,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn fixture_derived_values() {
        let t = ParameterSet::fixture();
        assert_eq!(t.q(), &r(1, 4));
        assert_eq!(t.a(), &r(1, 2));
        assert_eq!(t.b(), &r(-8, 9));
        assert_eq!(t.c(), &r(3, 14));
        assert_eq!(t.d(), &r(-21, 50));
        assert_eq!(t.a().clone() * t.b(), -(t.k1().clone() * t.k1()));
        assert_eq!(t.c().clone() * t.d(), -(t.q().clone() * t.k0() * t.k0()));
    }

    #[test]
    fn unit_multiplicities() {
        let t = ParameterSet::new(r(1, 3), r(1, 1), r(1, 1), r(1, 1), r(1, 1)).unwrap();
        assert_eq!(
            (t.a(), t.b(), t.c(), t.d()),
            (&r(1, 1), &r(-1, 1), &r(1, 3), &r(-1, 3))
        );
    }

    #[test]
    fn zero_entries_rejected() {
        let e = ParameterSet::new(r(1, 2), r(3, 5), r(0, 1), r(5, 7), r(3, 4)).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter(_)));
        assert!(ParameterSet::new(r(1, 1), r(3, 5), r(1, 2), r(5, 7), r(3, 4)).is_err());
    }

    #[test]
    fn dual_and_inverse() {
        let t = ParameterSet::fixture();
        let dt = t.dual();
        assert_eq!(
            dt.entries(),
            [&r(1, 2), &r(3, 4), &r(2, 3), &r(5, 7), &r(3, 5)]
        );
        assert_eq!(dt.a(), &r(2, 5));
        assert_eq!(dt.dual(), t);
        let it = t.inverse();
        assert_eq!(
            it.entries(),
            [&r(2, 1), &r(5, 3), &r(3, 2), &r(7, 5), &r(4, 3)]
        );
        assert_eq!(it.a(), &r(2, 1));
        assert_eq!(it.inverse(), t);
        let fixed = ParameterSet::new(r(1, 2), r(3, 5), r(2, 3), r(5, 7), r(3, 5)).unwrap();
        assert_eq!(fixed.dual(), fixed);
    }

    #[test]
    fn spectral_points() {
        let t = ParameterSet::fixture();
        let s0 = t.spectral_point(0);
        assert_eq!((s0.gamma, s0.xval, s0.eps), (r(2, 5), r(1, 2), 1));
        assert_eq!(t.gamma(-1), r(10, 1));
        assert_eq!(t.xval(2), r(1, 32));
        assert_eq!(t.spectral_point(-3).eps, -1);
    }

    #[test]
    fn genericity_scan() {
        let t = ParameterSet::fixture();
        assert!(check_genericity(&t, 50).is_empty());
        // a = 1/2 and q = 1/4, so the diagonal reading flags a·a = q
        let diag = check_genericity_with(&t, 50, PairRule::IncludeDiagonal);
        assert_eq!(diag.len(), 1);
        assert_eq!(diag[0].to_string(), "a*a = q^1");

        let bad = ParameterSet::new(r(1, 2), r(3, 5), r(1, 2), r(5, 7), r(3, 4)).unwrap();
        let v = check_genericity(&bad, 10);
        assert!(v.iter().any(|g| g.to_string() == "k1^2 = q^1"), "{v:?}");

        // a = 1 via u1 = 1/k1
        let unit_a = ParameterSet::new(r(1, 2), r(3, 5), r(2, 3), r(5, 7), r(3, 2)).unwrap();
        let v = check_genericity_with(&unit_a, 10, PairRule::IncludeDiagonal);
        assert!(
            v.iter().any(|g| g.quantity == "a*a" && g.power == 0),
            "{v:?}"
        );
    }

    #[test]
    fn unit_modulus_q_flagged() {
        let t = ParameterSet::new(r(-1, 1), r(3, 5), r(2, 3), r(5, 7), r(3, 4));
        assert!(t.is_err());
        let f = ParameterSet::fixture().to_mp(64);
        assert!(check_genericity(&f, 20).is_empty());
    }

    #[test]
    fn parse_and_print() {
        let t = ParameterSet::parse("1/2, 3/5,2/3,5/7,3/4").unwrap();
        assert_eq!(t, ParameterSet::fixture());
        assert_eq!(t.to_compact(), "1/2,3/5,2/3,5/7,3/4");
        assert!(ParameterSet::parse("1/2,3/5").is_err());
        let j = t.to_json();
        assert_eq!(ParameterSet::<Rational>::from_json(&j, &()).unwrap(), t);
    }
}
