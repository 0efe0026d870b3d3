//! Numeric identity checks for the transform pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SpectralFunction, Transform};
use crate::error::Result;
use crate::forms::QuadratureSettings;
use crate::laurent::LaurentPoly;
use crate::operators::{named_expr, Token};
use crate::params::ParameterSet;
use crate::report::{run_check, CheckRecord, Outcome, VerificationReport};
use crate::scalar::{MpComplex, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformOptions {
    pub settings: QuadratureSettings,
    /// Support bound `M` of the forward transform.
    pub max_m: i64,
    /// Number of random round-trip inputs.
    pub samples: usize,
    pub seed: u64,
}

impl TransformOptions {
    pub fn new(settings: QuadratureSettings, max_m: i64) -> Self {
        TransformOptions {
            settings,
            max_m,
            samples: 5,
            seed: 0x5eed,
        }
    }
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions::new(QuadratureSettings::default(), 6)
    }
}

fn random_poly(rng: &mut ChaCha8Rng, deg: i64) -> LaurentPoly<Rational> {
    let mut f = LaurentPoly::zero();
    for e in -deg..=deg {
        let c: i64 = rng.gen_range(-9..=9);
        if c != 0 {
            f.add_term(e, Rational::from(c));
        }
    }
    if f.is_zero() {
        f = LaurentPoly::constant(Rational::from(1));
    }
    f
}

fn rel_poly(a: &LaurentPoly<MpComplex>, b: &LaurentPoly<MpComplex>) -> f64 {
    let scale = a.norm_inf().max(b.norm_inf());
    let d = (a - b).norm_inf();
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

type Body<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;

fn checks<'a>(
    tr: &'a Transform,
    opts: &'a TransformOptions,
) -> Vec<(&'static str, &'static str, Body<'a>)> {
    let p = opts.settings.prec;
    let mm = opts.max_m;
    let t = tr.params();
    let mp = move |f: &LaurentPoly<Rational>| f.to_mp(p);
    let mut v: Vec<(&'static str, &'static str, Body<'a>)> = Vec::new();

    v.push((
        "transform.constant",
        "c = w(γ_0^{-1}; t̃)⟨1, 1⟩ = ½(1 + k1²)² w₊(γ_0^{-1}; t̃)(1, 1)",
        Box::new(move || {
            let a = tr.inversion_constant()?;
            let b = tr.inversion_constant_sym()?;
            Ok(Outcome::within(a.rel_err(&b), 1e-8))
        }),
    ));

    v.push((
        "transform.forward.one",
        "F(1) is supported at γ′_0 with value ⟨1, 1⟩",
        Box::new(move || {
            let one = LaurentPoly::constant(MpComplex::one(p));
            let g = tr.forward(&one, mm)?;
            if g.support() != vec![0] {
                return Ok(Outcome::exact(false, format!("support {:?}", g.support())));
            }
            let c = tr.inversion_constant()? / &tr.residue(0, false)?;
            Ok(Outcome::within(
                g.get(0).expect("supported").rel_err(&c),
                1e-8,
            ))
        }),
    ));

    v.push((
        "transform.forward.support",
        "F(P_m) is supported at γ′_m",
        Box::new(move || {
            let fam = crate::polys::Family::new(t.clone());
            let mut bad = None;
            for m in -mm.min(5)..=mm.min(5) {
                let g = tr.forward(&mp(&fam.nonsym(m)?), mm)?;
                if g.support() != vec![m] && bad.is_none() {
                    bad = Some(format!("m = {m}: support {:?}", g.support()));
                }
            }
            Ok(Outcome::exact(bad.is_none(), bad))
        }),
    ));

    v.push((
        "transform.forward.sym_support",
        "F₊(P_m^+) is supported at γ′_{±m}",
        Box::new(move || {
            let fam = crate::polys::Family::new(t.clone());
            let mut bad = None;
            for m in 0..=mm.min(5) {
                let g = tr.forward_sym(&mp(&fam.sym(m)?), mm)?;
                let want: Vec<i64> = if m == 0 { vec![0] } else { vec![-m, m] };
                if g.support() != want && bad.is_none() {
                    bad = Some(format!("m = {m}: support {:?}", g.support()));
                }
            }
            Ok(Outcome::exact(bad.is_none(), bad))
        }),
    ));

    v.push((
        "transform.forward.Y",
        "F(Y f)(γ′_m) = γ_m F(f)(γ′_m)",
        Box::new(move || {
            let y = named_expr("Y", t)?;
            let mut worst = 0f64;
            for e in -4..=4 {
                let f = LaurentPoly::monomial(e, Rational::from(1));
                let lhs = tr.forward(&mp(&y.apply(&f, t)?), mm)?;
                let rhs = tr.spectral_y(&tr.forward(&mp(&f), mm)?);
                worst = worst.max(lhs.rel_distance(&rhs));
            }
            Ok(Outcome::within(worst, 1e-8))
        }),
    ));

    for (name, identity, tok) in [
        (
            "transform.intertwining.T1",
            "F(T1 f) = T̃1 F(f), T̃1 = k1 + φ̃1(s1 − 1)",
            Token::T1,
        ),
        (
            "transform.intertwining.T1v",
            "F(T1^∨ f) = T̃0 F(f), T̃0 = u1 + φ̃0(s0 − 1)",
            Token::T1v,
        ),
    ] {
        v.push((
            name,
            identity,
            Box::new(move || {
                let mut worst = 0f64;
                let mut compared = 0usize;
                for e in -4..=4 {
                    let f = LaurentPoly::monomial(e, Rational::from(1));
                    // Support bound large enough that T f stays inside it.
                    let g = tr.forward(&mp(&f), mm)?;
                    let lhs = tr.forward(&mp(&tok.apply(&f, t)?), mm)?;
                    let full = SpectralFunction {
                        params: g.params.clone(),
                        values: (-mm..=mm)
                            .map(|m| (m, g.get(m).cloned().unwrap_or_else(|| MpComplex::zero(p))))
                            .collect(),
                    };
                    let rhs = if tok == Token::T1 {
                        tr.spectral_t1(&full)
                    } else {
                        tr.spectral_t0(&full)
                    };
                    let scale = lhs.max_abs().max(rhs.max_abs());
                    for (m, r) in &rhs.values {
                        let l = lhs.get(*m).cloned().unwrap_or_else(|| MpComplex::zero(p));
                        worst = worst.max((l - r).abs_f64() / scale);
                        compared += 1;
                    }
                }
                if compared == 0 {
                    return Ok(Outcome::skipped(
                        "no index had its reflection inside the support",
                    ));
                }
                Ok(Outcome::within(worst, 1e-8))
            }),
        ));
    }

    v.push((
        "transform.round_trip",
        "G(F(f)) = c f for random integer f of degree ≤ 5",
        Box::new(move || {
            let c = tr.inversion_constant()?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut worst = 0f64;
            for _ in 0..opts.samples {
                let f = mp(&random_poly(&mut rng, 5));
                let back = tr.inverse(&tr.forward(&f, mm)?)?;
                worst = worst.max(rel_poly(&back, &f.scale(&c)));
            }
            Ok(Outcome::within(worst, 1e-8))
        }),
    ));

    v.push((
        "transform.round_trip.spectral",
        "F(G(g)) = c g for g supported in |m| ≤ 4",
        Box::new(move || {
            let c = tr.inversion_constant()?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xff);
            let mut worst = 0f64;
            for _ in 0..opts.samples {
                let mut g = SpectralFunction::new(t.clone());
                for m in -4..=4 {
                    let x: i64 = rng.gen_range(-9..=9);
                    if x != 0 {
                        g.values.insert(m, MpComplex::from_f64(x as f64, 0.0, p));
                    }
                }
                let back = tr.forward(&tr.inverse(&g)?, mm.max(4))?;
                worst = worst.max(back.rel_distance(&g.scale(&c)));
            }
            Ok(Outcome::within(worst, 1e-8))
        }),
    ));

    v.push((
        "transform.round_trip.sym",
        "G₊(F₊(f)) = c f for f = x² + x^{-2} + 3",
        Box::new(move || {
            let c = tr.inversion_constant()?;
            let f = mp(&LaurentPoly::from_terms([
                (2, Rational::from(1)),
                (0, Rational::from(3)),
                (-2, Rational::from(1)),
            ]));
            let back = tr.inverse_sym(&tr.forward_sym(&f, mm)?)?;
            Ok(Outcome::within(rel_poly(&back, &f.scale(&c)), 1e-8))
        }),
    ));

    v.push((
        "transform.diagonal_ratio",
        "F(E_γ)(γ^{-1}) w(γ^{-1}; t̃) = c for every γ = γ_m",
        Box::new(move || {
            let c = tr.inversion_constant()?;
            let fam = crate::polys::Family::new(t.clone());
            let mut worst = 0f64;
            for m in -mm.min(5)..=mm.min(5) {
                let g = tr.forward(&mp(&fam.renorm(m)?), mm)?;
                let v = g.get(m).cloned().unwrap_or_else(|| MpComplex::zero(p))
                    * &tr.residue(m, false)?;
                worst = worst.max(v.rel_err(&c));
                let off = g
                    .values
                    .iter()
                    .filter(|(k, _)| **k != m)
                    .map(|(_, x)| x.abs_f64())
                    .fold(0.0, f64::max);
                worst = worst.max(off / g.max_abs().max(f64::MIN_POSITIVE));
            }
            Ok(Outcome::within(worst, 1e-8))
        }),
    ));

    v
}

/// Runs every transform check at `t`.
pub fn verify_transform(t: &ParameterSet<Rational>, opts: &TransformOptions) -> VerificationReport {
    let tr = match opts
        .settings
        .validate()
        .and_then(|_| Transform::new(t, opts.settings))
    {
        Ok(tr) => tr,
        Err(e) => {
            return VerificationReport::from_checks(vec![run_check(
                "transform.setup",
                "transform at t",
                || Err(e),
            )])
        }
    };
    let records: Vec<CheckRecord> = checks(&tr, opts)
        .into_iter()
        .map(|(name, identity, body)| run_check(name, identity, body))
        .collect();
    VerificationReport::from_checks(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_suite_passes_at_reduced_precision() {
        let t = ParameterSet::<Rational>::fixture();
        let mut opts = TransformOptions::new(QuadratureSettings::for_precision(160), 6);
        opts.samples = 2;
        let rep = verify_transform(&t, &opts);
        assert!(rep.passed(), "{rep}");
    }
}
