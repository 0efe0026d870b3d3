//! Non-symmetric, symmetric and anti-symmetric Askey-Wilson polynomials.
//!
//! The default route is the triangular eigen-solve for `Y`; the Rodrigues
//! formula and the balanced `4φ3` expansions are independent oracles.

mod construct;
mod eval;
mod series;
mod suite;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{exponent_of_rank, rank, LaurentPoly};
use crate::params::ParameterSet;
use crate::scalar::Scalar;

pub use construct::{
    alpha_beta, nonsym_rodrigues, nonsym_triangular, reconstruct_pair, rodrigues_dm, symmetrize,
};
pub use eval::{ev_closed, ev_value, renormalize, EvKind};
pub use series::{antisym_series, nonsym_series, sym_series};
pub use suite::verify_polys;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Nonsym,
    Sym,
    Antisym,
    RenormNonsym,
    RenormSym,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Nonsym => "nonsym",
            Kind::Sym => "sym",
            Kind::Antisym => "antisym",
            Kind::RenormNonsym => "renorm_nonsym",
            Kind::RenormSym => "renorm_sym",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Triangular,
    Rodrigues,
    Series,
    Symmetrized,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Triangular => "triangular",
            Method::Rodrigues => "rodrigues",
            Method::Series => "series",
            Method::Symmetrized => "symmetrized",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "triangular" => Method::Triangular,
            "rodrigues" => Method::Rodrigues,
            "series" => Method::Series,
            "symmetrized" => Method::Symmetrized,
            other => {
                return Err(Error::Parse(format!(
                    "unknown construction method {other:?}"
                )))
            }
        })
    }
}

/// Sign of a (anti-)symmetrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A constructed polynomial with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct AWPolynomial<S: Scalar> {
    pub poly: LaurentPoly<S>,
    pub kind: Kind,
    pub m: i64,
    pub params: ParameterSet<S>,
    pub method: Method,
}

impl<S: Scalar> AWPolynomial<S> {
    pub fn to_json(&self) -> Value {
        let mut v = self.poly.to_json();
        v["kind"] = json!(self.kind.as_str());
        v["m"] = json!(self.m);
        v["method"] = json!(self.method.as_str());
        v
    }
}

impl<S: Scalar> fmt::Display for AWPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Memoized constructions at one parameter set.
///
/// Safe to share between threads; concurrent constructions of the same entry
/// simply store the same value twice.
#[derive(Clone, Debug)]
pub struct Family<S: Scalar> {
    t: ParameterSet<S>,
    y_images: Arc<Mutex<Vec<LaurentPoly<S>>>>,
    nonsym: Arc<Mutex<HashMap<i64, LaurentPoly<S>>>>,
}

impl<S: Scalar> Family<S> {
    pub fn new(t: ParameterSet<S>) -> Self {
        Family {
            t,
            y_images: Arc::default(),
            nonsym: Arc::default(),
        }
    }

    pub fn params(&self) -> &ParameterSet<S> {
        &self.t
    }

    /// `Y x^{e_r}` for all ranks `r ≤ max_rank`.
    pub(crate) fn y_images(&self, max_rank: u64) -> Result<Vec<LaurentPoly<S>>> {
        let have = self.y_images.lock().expect("poisoned").len() as u64;
        if have <= max_rank {
            let y = crate::operators::named_expr("Y", &self.t)?;
            let mut fresh = Vec::new();
            for r in have..=max_rank {
                fresh.push(y.apply(
                    &LaurentPoly::monomial(exponent_of_rank(r), self.t.one()),
                    &self.t,
                )?);
            }
            let mut guard = self.y_images.lock().expect("poisoned");
            if guard.len() as u64 == have {
                guard.extend(fresh);
            }
        }
        Ok(self.y_images.lock().expect("poisoned")[..=max_rank as usize].to_vec())
    }

    /// Monic `P_m` by the triangular route.
    pub fn nonsym(&self, m: i64) -> Result<LaurentPoly<S>> {
        if let Some(p) = self.nonsym.lock().expect("poisoned").get(&m) {
            return Ok(p.clone());
        }
        let p = construct::triangular_poly(self, m)?;
        self.nonsym.lock().expect("poisoned").insert(m, p.clone());
        Ok(p)
    }

    /// Monic `P_m^+`, `m ≥ 0`.
    pub fn sym(&self, m: i64) -> Result<LaurentPoly<S>> {
        construct::symmetrize_with(self, m, Sign::Plus)
    }

    /// Monic `P_m^-`, `m ≥ 1`.
    pub fn antisym(&self, m: i64) -> Result<LaurentPoly<S>> {
        construct::symmetrize_with(self, m, Sign::Minus)
    }

    /// `E_{γ_m} = P_m / P_m(a^{-1})`.
    pub fn renorm(&self, m: i64) -> Result<LaurentPoly<S>> {
        eval::normalize(&self.nonsym(m)?, &ParameterSet::inv(self.t.a()))
    }

    /// `E^+_{s(γ_m)} = P_{|m|}^+ / P_{|m|}^+(a)`.
    pub fn renorm_sym(&self, m: i64) -> Result<LaurentPoly<S>> {
        eval::normalize(&self.sym(m.abs())?, self.t.a())
    }
}

/// Number of monomials up to and including the rank of `x^m`.
pub(crate) fn basis_len(m: i64) -> u64 {
    rank(m) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn json_carries_metadata() {
        let t = ParameterSet::<Rational>::fixture();
        let p = nonsym_triangular(&t, 1).unwrap();
        let v = p.to_json();
        assert_eq!(v["kind"], "nonsym");
        assert_eq!(v["m"], 1);
        assert_eq!(v["method"], "triangular");
        assert!(v["terms"].is_array());
    }

    #[test]
    fn family_caches_are_consistent() {
        let fam = Family::new(ParameterSet::<Rational>::fixture());
        let a = fam.nonsym(3).unwrap();
        let b = fam.nonsym(3).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            fam.renorm(0).unwrap(),
            LaurentPoly::constant(Rational::from(1))
        );
    }
}
