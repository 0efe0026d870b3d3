use rug::Float;

use super::weight::{alpha, weight, WeightVariant};
use super::{FormValue, QuadratureSettings};
use crate::error::{Error, Result};
use crate::params::{eps, Abcd, ParameterSet};
use crate::qpoch::{qpoch, qpoch_inf, truncation_length};
use crate::scalar::{MpComplex, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueVariant {
    /// `w(γ) = α(γ) w₊(γ)`.
    W,
    /// `w₊(γ) = sgn(γ) Res_{y=γ} Δ₊(y)/y`.
    WPlus,
}

/// A denominator factor `1 − e q^j y` (direct) or `1 − e q^j / y` (inverse).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Factor {
    param: usize,
    j: u64,
    inverse: bool,
}

fn one(p: u32) -> MpComplex {
    MpComplex::one(p)
}

/// The pole `γ′_m = γ_m^{-1}` of `Δ₊(·; t̃)`, where `t̃` is the dual point.
fn pole<S: Scalar>(td: &ParameterSet<S>, m: i64, prec: u32) -> Result<MpComplex> {
    td.xval(m)
        .checked_inv()
        .map(|y| y.to_mp(prec))
        .ok_or_else(|| Error::DegenerateSpectrum(format!("γ_{m} vanishes")))
}

fn vanishing_factors(ab: &Abcd<MpComplex>, y0: &MpComplex, depth: u64) -> Vec<Factor> {
    let p = y0.prec();
    let thresh = 2f64.powi(-(p as i32 / 2));
    let yi = y0.checked_inv().expect("pole is nonzero");
    let mut out = Vec::new();
    for (i, e) in ab.as_array().into_iter().enumerate() {
        let mut eq = e.clone();
        for j in 0..depth {
            for (inverse, y) in [(false, y0), (true, &yi)] {
                if (one(p) - &(eq.clone() * y)).abs_f64() < thresh {
                    out.push(Factor {
                        param: i,
                        j,
                        inverse,
                    });
                }
            }
            eq = eq * &ab.q;
        }
    }
    out
}

/// `Δ₊(y0)` with `factor` removed from the denominator.
fn reduced(ab: &Abcd<MpComplex>, y0: &MpComplex, factor: Factor, tol: f64) -> Result<MpComplex> {
    let p = y0.prec();
    let q = &ab.q;
    let yi = y0.checked_inv().expect("pole is nonzero");
    let y2 = y0.clone() * y0;
    let mut num = qpoch_inf(&y2, q, tol)? * &qpoch_inf(&(yi.clone() * &yi), q, tol)?;
    let mut den = one(p);
    for (i, e) in ab.as_array().into_iter().enumerate() {
        for (inverse, y) in [(false, y0), (true, &yi)] {
            let z = e.clone() * y;
            if i == factor.param && inverse == factor.inverse {
                // (z; q)_j (z q^{j+1}; q)_∞
                let tail = z.clone() * &q.powi(factor.j as i64 + 1).expect("q nonzero");
                den = den * &qpoch(&z, q, factor.j) * &qpoch_inf(&tail, q, tol)?;
            } else {
                den = den * &qpoch_inf(&z, q, tol)?;
            }
        }
    }
    if den.abs_f64() < 2f64.powi(-(p as i32 / 2)) {
        return Err(Error::PoleIdentificationFailure(
            "reduced denominator vanishes".into(),
        ));
    }
    num = num / &den;
    Ok(num)
}

/// Residue weight `w` or `w₊` at `γ′_m`, for the dual parameter point `td`,
/// computed by cancelling the vanishing denominator factor.
pub fn residue_weight<S: Scalar>(
    td: &ParameterSet<S>,
    m: i64,
    variant: ResidueVariant,
    settings: &QuadratureSettings,
) -> Result<MpComplex> {
    let prec = settings.prec;
    let tol = settings.product_tol;
    let ab = td.abcd().to_mp(prec);
    let qa = ab.q.abs_f64();
    if !(qa < 1.0) {
        return Err(Error::ContourUnsupported(format!(
            "|q| = {qa} is not below 1"
        )));
    }
    let y0 = pole(td, m, prec)?;
    let depth = ab
        .as_array()
        .iter()
        .map(|e| truncation_length(e.abs_f64(), qa, tol))
        .max()
        .unwrap_or(0)
        .max(m.unsigned_abs() + 2);
    let found = vanishing_factors(&ab, &y0, depth);
    let factor = match found.as_slice() {
        [f] => *f,
        [] => {
            return Err(Error::PoleIdentificationFailure(format!(
                "no denominator factor vanishes at γ′_{m}"
            )))
        }
        many => {
            return Err(Error::PoleIdentificationFailure(format!(
                "{} denominator factors vanish at γ′_{m}; the pole is not simple",
                many.len()
            )))
        }
    };
    let r = reduced(&ab, &y0, factor, tol)?;
    // Res Δ₊/y is −R for a direct factor and +R for an inverse one.
    let res = if factor.inverse { r } else { -r };
    let w_plus = if eps(m) > 0 { res } else { -res };
    match variant {
        ResidueVariant::WPlus => Ok(w_plus),
        ResidueVariant::W => Ok(alpha(&ab, &y0)? * &w_plus),
    }
}

/// Distance from `y0` to the nearest other pole of the integrand.
fn nearest_pole(ab: &Abcd<MpComplex>, y0: (f64, f64), with_alpha: bool) -> f64 {
    let qa = ab.q.abs_f64();
    let dist = |z: (f64, f64)| ((z.0 - y0.0).powi(2) + (z.1 - y0.1).powi(2)).sqrt();
    let scale = (y0.0.powi(2) + y0.1.powi(2)).sqrt();
    let mut best = dist((0.0, 0.0));
    let mut consider = |z: (f64, f64)| {
        let d = dist(z);
        if d > 1e-12 * scale.max(1.0) && d < best {
            best = d;
        }
    };
    if with_alpha {
        consider((1.0, 0.0));
        consider((-1.0, 0.0));
    }
    for e in ab.as_array() {
        let (er, ei) = e.to_f64_pair();
        let mut qj = 1.0;
        while qj > 1e-30 {
            let z = (er * qj, ei * qj);
            consider(z);
            let n = z.0 * z.0 + z.1 * z.1;
            consider((z.0 / n, -z.1 / n));
            qj *= qa;
        }
    }
    best
}

/// Numeric residue of the same quantity as [`residue_weight`], by the
/// trapezoid rule on a small circle around `γ′_m`.
pub fn residue_contour<S: Scalar>(
    td: &ParameterSet<S>,
    m: i64,
    variant: ResidueVariant,
    settings: &QuadratureSettings,
) -> Result<FormValue> {
    settings.validate()?;
    let prec = settings.prec;
    let ab = td.abcd().to_mp(prec);
    let y0 = pole(td, m, prec)?;
    let radius = 0.5 * nearest_pole(&ab, y0.to_f64_pair(), variant == ResidueVariant::W);
    let r = MpComplex::from_f64(radius, 0.0, prec);
    let wv = match variant {
        ResidueVariant::W => WeightVariant::Delta,
        ResidueVariant::WPlus => WeightVariant::DeltaPlus,
    };
    let integrand = |j: usize, n: usize| -> Result<MpComplex> {
        let off = MpComplex::root_of_unity(j as i64, n as i64, prec) * &r;
        let y = y0.clone() + &off;
        let f = weight(&ab, &y, wv, settings.product_tol)? / &y;
        Ok(f * &off)
    };
    let mut n = settings.n0;
    let mut sum = MpComplex::zero(prec);
    for j in 0..n {
        sum = sum + &integrand(j, n)?;
    }
    let mut prev = sum.scale_f(&Float::with_val(prec, 1.0 / n as f64));
    let sign = if eps(m) > 0 { one(prec) } else { -one(prec) };
    // An oracle: half the working digits are plenty.
    let tol = settings.tol.sqrt();
    for _ in 0..settings.max_doublings {
        n *= 2;
        for j in (1..n).step_by(2) {
            sum = sum + &integrand(j, n)?;
        }
        let cur = sum.scale_f(&Float::with_val(prec, 1.0 / n as f64));
        let err = (cur.clone() - &prev).abs_f64();
        if err <= tol * cur.abs_f64() {
            return Ok(FormValue {
                value: cur * &sign,
                err,
                nodes: n,
            });
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged(format!(
        "residue contour at γ′_{m} did not settle"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn residue_at_the_base_point_has_the_expected_alpha_factor() {
        let t = ParameterSet::<Rational>::fixture();
        let td = t.dual();
        let s = QuadratureSettings::for_precision(128);
        let w = residue_weight(&td, 0, ResidueVariant::W, &s).unwrap();
        let wp = residue_weight(&td, 0, ResidueVariant::WPlus, &s).unwrap();
        let k1 = t.k1().clone();
        let expect = MpComplex::from_rational_prec(&(Rational::from(1) + k1.clone() * &k1), 128);
        assert!((w / &wp).rel_err(&expect) < 1e-30);
    }

    #[test]
    fn cancellation_agrees_with_the_contour() {
        let td = ParameterSet::<Rational>::fixture().dual();
        let s = QuadratureSettings::for_precision(128);
        for m in [-2, 0, 1] {
            for v in [ResidueVariant::W, ResidueVariant::WPlus] {
                let a = residue_weight(&td, m, v, &s).unwrap();
                let b = residue_contour(&td, m, v, &s).unwrap().value;
                assert!(a.rel_err(&b) < 1e-20, "m = {m}: {a} vs {b}");
            }
        }
    }
}
