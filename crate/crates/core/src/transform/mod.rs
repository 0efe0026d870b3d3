//! The non-symmetric and symmetric Askey-Wilson transforms on a truncated
//! spectrum, their inverses, and the spectral-side Hecke operators.

mod suite;

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{residue_weight, FormKind, Quadrature, QuadratureSettings, ResidueVariant};
use crate::laurent::LaurentPoly;
use crate::params::ParameterSet;
use crate::polys::Family;
use crate::scalar::{MpComplex, Rational, Scalar};

pub use suite::{verify_transform, TransformOptions};

type Poly = LaurentPoly<MpComplex>;

/// A finitely supported function on `σ′ = {γ′_m = γ_m^{-1}}`, keyed by `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction {
    pub params: ParameterSet<Rational>,
    pub values: BTreeMap<i64, MpComplex>,
}

impl SpectralFunction {
    pub fn new(params: ParameterSet<Rational>) -> Self {
        SpectralFunction {
            params,
            values: BTreeMap::new(),
        }
    }

    pub fn get(&self, m: i64) -> Option<&MpComplex> {
        self.values.get(&m)
    }

    pub fn support(&self) -> Vec<i64> {
        self.values.keys().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .values()
            .map(|v| v.abs_f64())
            .fold(0.0, f64::max)
    }

    /// `value(m) = value(−m)` on the support, up to a relative `tol`.
    pub fn is_w_invariant(&self, tol: f64) -> bool {
        let scale = self.max_abs();
        self.values.iter().all(|(m, v)| match self.values.get(&-m) {
            Some(w) => (v.clone() - w).abs_f64() <= tol * scale,
            None => v.abs_f64() <= tol * scale,
        })
    }

    pub fn scale(&self, c: &MpComplex) -> Self {
        let values = self
            .values
            .iter()
            .map(|(m, v)| (*m, v.clone() * c))
            .collect();
        SpectralFunction {
            params: self.params.clone(),
            values,
        }
    }

    /// Largest `|self(m) − other(m)|` over the union of supports, relative to
    /// the larger of the two maxima.
    pub fn rel_distance(&self, other: &SpectralFunction) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        let keys: std::collections::BTreeSet<i64> = self
            .values
            .keys()
            .chain(other.values.keys())
            .copied()
            .collect();
        let worst = keys
            .into_iter()
            .map(|m| match (self.get(m), other.get(m)) {
                (Some(a), Some(b)) => (a.clone() - b).abs_f64(),
                (Some(a), None) | (None, Some(a)) => a.abs_f64(),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max);
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = self
            .values
            .iter()
            .map(|(m, v)| json!({ "m": m, "v": v.to_json() }))
            .collect();
        json!({ "params": self.params.to_json(), "values": values })
    }

    pub fn from_json(v: &Value, prec: u32) -> Result<Self> {
        let params = ParameterSet::<Rational>::from_json(
            v.get("params")
                .ok_or_else(|| Error::Parse("spectral function lacks \"params\"".into()))?,
            &(),
        )?;
        let list = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("spectral function lacks a \"values\" array".into()))?;
        let mut values = BTreeMap::new();
        for item in list {
            let m = item
                .get("m")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("entry {item} lacks an integer \"m\"")))?;
            let raw = item
                .get("v")
                .ok_or_else(|| Error::Parse(format!("entry {item} lacks \"v\"")))?;
            let val = match raw {
                Value::String(s) => MpComplex::from_text(s, &prec)?,
                other => MpComplex::from_json(other, &prec)?,
            };
            if values.insert(m, val).is_some() {
                return Err(Error::Parse(format!("index {m} appears twice")));
            }
        }
        Ok(SpectralFunction { params, values })
    }
}

/// Transform machinery at one parameter point: the quadratures, both
/// polynomial families and a cache of residue weights.
pub struct Transform {
    t: ParameterSet<Rational>,
    td: ParameterSet<Rational>,
    fam: Family<Rational>,
    inv_fam: Family<Rational>,
    angle: Quadrature,
    round: Quadrature,
    settings: QuadratureSettings,
    weights: Mutex<BTreeMap<(i64, bool), MpComplex>>,
}

impl Transform {
    pub fn new(t: &ParameterSet<Rational>, settings: QuadratureSettings) -> Result<Self> {
        Ok(Transform {
            t: t.clone(),
            td: t.dual(),
            fam: Family::new(t.clone()),
            inv_fam: Family::new(t.inverse()),
            angle: Quadrature::for_params(t, FormKind::Angle, settings)?,
            round: Quadrature::for_params(t, FormKind::Round, settings)?,
            settings,
            weights: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn params(&self) -> &ParameterSet<Rational> {
        &self.t
    }

    pub fn settings(&self) -> &QuadratureSettings {
        &self.settings
    }

    fn prec(&self) -> u32 {
        self.settings.prec
    }

    fn mp(&self, r: &Rational) -> MpComplex {
        MpComplex::from_rational_prec(r, self.prec())
    }

    /// `1 + k1²`.
    fn hecke_factor(&self) -> MpComplex {
        let k1 = self.t.k1();
        self.mp(&(Rational::from(1) + k1.clone() * k1))
    }

    /// `w(γ′_m; t̃)` or `w₊(γ′_m; t̃)`.
    pub fn residue(&self, m: i64, plus: bool) -> Result<MpComplex> {
        if let Some(w) = self.weights.lock().expect("poisoned").get(&(m, plus)) {
            return Ok(w.clone());
        }
        let variant = if plus {
            ResidueVariant::WPlus
        } else {
            ResidueVariant::W
        };
        let w = residue_weight(&self.td, m, variant, &self.settings)?;
        self.weights
            .lock()
            .expect("poisoned")
            .insert((m, plus), w.clone());
        Ok(w)
    }

    fn prune(&self, values: BTreeMap<i64, MpComplex>) -> BTreeMap<i64, MpComplex> {
        let scale = values.values().map(|v| v.abs_f64()).fold(0.0, f64::max);
        let cut = self.settings.tol.sqrt() * scale;
        values
            .into_iter()
            .filter(|(_, v)| v.abs_f64() > cut)
            .collect()
    }

    /// `F(f)(γ′_m) = ⟨f, E′_{γ′_m}⟩` for `|m| ≤ max_m`.
    pub fn forward(&self, f: &Poly, max_m: i64) -> Result<SpectralFunction> {
        let mut values = BTreeMap::new();
        for m in -max_m..=max_m {
            let e = self.inv_fam.renorm(m)?.to_mp(self.prec());
            values.insert(m, self.angle.pair(f, &e)?.value);
        }
        Ok(SpectralFunction {
            params: self.t.clone(),
            values: self.prune(values),
        })
    }

    /// `G(g) = Σ_m g(γ′_m) E_{γ_m} w(γ′_m; t̃)`.
    pub fn inverse(&self, g: &SpectralFunction) -> Result<Poly> {
        self.check_params(g)?;
        let mut out = Poly::zero();
        for (m, v) in &g.values {
            let e = self.fam.renorm(*m)?.to_mp(self.prec());
            out = &out + &e.scale(&(v.clone() * &self.residue(*m, false)?));
        }
        Ok(out)
    }

    /// `F₊(f)(γ′_m) = ½(1 + k1²)(f, E⁺_{s(γ_m)})` for `|m| ≤ max_m`.
    pub fn forward_sym(&self, f: &Poly, max_m: i64) -> Result<SpectralFunction> {
        if !f.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let half = self
            .hecke_factor()
            .scale_f(&rug::Float::with_val(self.prec(), 0.5));
        let mut values = BTreeMap::new();
        for m in 0..=max_m {
            let e = self.fam.renorm_sym(m)?.to_mp(self.prec());
            let v = self.round.pair(f, &e)?.value * &half;
            if m > 0 {
                values.insert(-m, v.clone());
            }
            values.insert(m, v);
        }
        Ok(SpectralFunction {
            params: self.t.clone(),
            values: self.prune(values),
        })
    }

    /// `G₊(g) = (1 + k1²) Σ_{m ≥ 0} g(γ′_m) E⁺_{s(γ_m)} w₊(γ′_m; t̃)`.
    pub fn inverse_sym(&self, g: &SpectralFunction) -> Result<Poly> {
        self.check_params(g)?;
        if !g.is_w_invariant(self.settings.tol.sqrt()) {
            return Err(Error::NotSymmetric);
        }
        let h = self.hecke_factor();
        let mut out = Poly::zero();
        for (m, v) in g.values.range(0..) {
            let e = self.fam.renorm_sym(*m)?.to_mp(self.prec());
            out = &out + &e.scale(&(v.clone() * &self.residue(*m, true)? * &h));
        }
        Ok(out)
    }

    /// `c = w(γ′_0; t̃)⟨1, 1⟩`.
    pub fn inversion_constant(&self) -> Result<MpComplex> {
        let one = Poly::constant(MpComplex::one(self.prec()));
        Ok(self.residue(0, false)? * &self.angle.pair(&one, &one)?.value)
    }

    /// `c = ½(1 + k1²)² w₊(γ′_0; t̃)(1, 1)`.
    pub fn inversion_constant_sym(&self) -> Result<MpComplex> {
        let one = Poly::constant(MpComplex::one(self.prec()));
        let h = self.hecke_factor();
        let half = rug::Float::with_val(self.prec(), 0.5);
        Ok((h.clone() * &h).scale_f(&half)
            * &self.residue(0, true)?
            * &self.round.pair(&one, &one)?.value)
    }

    fn check_params(&self, g: &SpectralFunction) -> Result<()> {
        if g.params != self.t {
            return Err(Error::InvalidParameter(format!(
                "spectral function lives at {}, transform at {}",
                g.params, self.t
            )));
        }
        Ok(())
    }

    /// `γ′_m` as a float.
    fn point(&self, m: i64) -> MpComplex {
        self.mp(&ParameterSet::inv(&self.t.gamma(m)))
    }

    /// `(T̃1 g)(γ) = k1 g(γ) + φ̃1(γ)(g(s1 γ) − g(γ))` with `s1 γ′_m = γ′_{−m}`.
    /// Indices whose partner lies outside the support are left out.
    pub fn spectral_t1(&self, g: &SpectralFunction) -> SpectralFunction {
        let t = &self.t;
        let k1 = self.mp(t.k1());
        let k1i = self.mp(&ParameterSet::inv(t.k1()));
        let k0k1 = self.mp(&(t.k0().clone() * t.k1()));
        let k0ik1 = self.mp(&(t.k1().clone() / t.k0()));
        let one = MpComplex::one(self.prec());
        self.spectral_step(
            g,
            |m| -m,
            |m| {
                let y = self.point(m);
                let num =
                    (one.clone() - &(k0k1.clone() * &y)) * &(one.clone() + &(k0ik1.clone() * &y));
                let den = one.clone() - &(y.clone() * &y);
                (k1.clone(), k1i.clone() * &num / &den)
            },
        )
    }

    /// `(T̃0 g)(γ) = u1 g(γ) + φ̃0(γ)(g(s0 γ) − g(γ))` with `s0 γ′_m = γ′_{−m−1}`.
    pub fn spectral_t0(&self, g: &SpectralFunction) -> SpectralFunction {
        let t = &self.t;
        let u1 = self.mp(t.u1());
        let u1i = self.mp(&ParameterSet::inv(t.u1()));
        let a = self.mp(&(t.u0().clone() * t.u1() * t.p()));
        let b = self.mp(&(t.u1().clone() / t.u0() * t.p()));
        let q = self.mp(t.q());
        let one = MpComplex::one(self.prec());
        self.spectral_step(
            g,
            |m| -m - 1,
            |m| {
                let yi = self.mp(&t.gamma(m));
                let num = (one.clone() - &(a.clone() * &yi)) * &(one.clone() + &(b.clone() * &yi));
                let den = one.clone() - &(q.clone() * &yi * &yi);
                (u1.clone(), u1i.clone() * &num / &den)
            },
        )
    }

    fn spectral_step(
        &self,
        g: &SpectralFunction,
        reflect: impl Fn(i64) -> i64,
        coeffs: impl Fn(i64) -> (MpComplex, MpComplex),
    ) -> SpectralFunction {
        let mut values = BTreeMap::new();
        for (m, v) in &g.values {
            let Some(w) = g.get(reflect(*m)) else {
                continue;
            };
            let (k, phi) = coeffs(*m);
            values.insert(*m, k * v + &(phi * &(w.clone() - v)));
        }
        SpectralFunction {
            params: g.params.clone(),
            values,
        }
    }

    /// `(μ(Y) g)(γ′_m) = γ_m g(γ′_m)`, the image of multiplication by `Y`.
    pub fn spectral_y(&self, g: &SpectralFunction) -> SpectralFunction {
        let values = g
            .values
            .iter()
            .map(|(m, v)| (*m, v.clone() * &self.mp(&self.t.gamma(*m))))
            .collect();
        SpectralFunction {
            params: g.params.clone(),
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_function_json_round_trip() {
        let t = ParameterSet::fixture();
        let mut g = SpectralFunction::new(t);
        g.values.insert(-2, MpComplex::from_f64(1.5, 0.0, 128));
        g.values.insert(3, MpComplex::from_f64(-0.25, 2.0, 128));
        let back = SpectralFunction::from_json(&g.to_json(), 128).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn forward_of_one_is_concentrated_at_zero() {
        let t = ParameterSet::fixture();
        let tr = Transform::new(&t, QuadratureSettings::for_precision(128)).unwrap();
        let one = Poly::constant(MpComplex::one(128));
        let g = tr.forward(&one, 3).unwrap();
        assert_eq!(g.support(), vec![0]);
    }
}
