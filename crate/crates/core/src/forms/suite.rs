//! Numeric identity checks for the weights, forms and residues.

use rayon::prelude::*;

use super::{
    alpha, constant_term_closed, diagonal_closed, grand_ratio_closed, residue_contour,
    residue_weight, shift_ratio_closed, weight, DiagonalKind, FormKind, Quadrature,
    QuadratureSettings, ResidueVariant, WeightVariant,
};
use crate::error::Result;
use crate::laurent::{weyl_denominator, LaurentPoly};
use crate::operators::{named_expr, Token};
use crate::params::{Abcd, ParameterSet};
use crate::polys::Family;
use crate::report::{run_check, CheckRecord, Outcome, VerificationReport};
use crate::scalar::{MpComplex, Rational, Scalar};

type Poly = LaurentPoly<Rational>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormsOptions {
    pub settings: QuadratureSettings,
    /// Largest `|m|` for orthogonality and diagonal terms.
    pub max_m: i64,
}

impl FormsOptions {
    pub fn new(settings: QuadratureSettings, max_m: i64) -> Self {
        FormsOptions { settings, max_m }
    }

    fn prec(&self) -> u32 {
        self.settings.prec
    }

    /// Bound for quantities whose accuracy is limited by the quadrature.
    fn quad_bound(&self) -> f64 {
        if self.prec() >= 256 {
            1e-20
        } else {
            1e-8
        }
    }

    /// Bound for identities between closed-form values.
    fn fine_bound(&self) -> f64 {
        2f64.powf(-0.6 * self.prec() as f64)
    }
}

impl Default for FormsOptions {
    fn default() -> Self {
        FormsOptions::new(QuadratureSettings::default(), 6)
    }
}

struct Worst {
    value: f64,
    at: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            at: None,
        }
    }

    fn note(&mut self, r: f64, label: impl FnOnce() -> String) {
        if r > self.value || r.is_nan() {
            self.value = if r.is_nan() { f64::INFINITY } else { r };
            self.at = Some(label());
        }
    }

    fn finish(self, bound: f64) -> Outcome {
        let mut o = Outcome::within(self.value, bound);
        if let (Some(d), Some(at)) = (o.detail.as_mut(), self.at) {
            d.push_str(&format!(" at {at}"));
        }
        o
    }
}

struct Ctx {
    t: ParameterSet<Rational>,
    ti: ParameterSet<Rational>,
    td: ParameterSet<Rational>,
    fam: Family<Rational>,
    inv_fam: Family<Rational>,
    shift_fam: Family<Rational>,
    angle: Quadrature,
    round: Quadrature,
    shifted_round: Quadrature,
    opts: FormsOptions,
}

impl Ctx {
    fn p(&self) -> u32 {
        self.opts.prec()
    }

    fn mp(&self, r: &Rational) -> MpComplex {
        MpComplex::from_rational_prec(r, self.p())
    }

    fn ab(&self) -> Abcd<MpComplex> {
        self.t.abcd().to_mp(self.p())
    }

    fn ptol(&self) -> f64 {
        self.opts.settings.product_tol
    }
}

/// `⟨P_{−m}, P′_{−m}⟩ / ⟨P_m^−, P_m^−′⟩`, as implied by the diagonal closed forms.
pub(crate) fn negative_to_antisym(t: &ParameterSet<Rational>, m: i64) -> Rational {
    let one = Rational::from(1);
    let gi = ParameterSet::inv(&t.gamma(m));
    let (k0, k1) = (t.k0(), t.k1());
    let num = one.clone() - gi.clone() * &gi;
    let den = (one.clone() + k1.clone() * k1)
        * (one.clone() + k0.clone() / k1 * &gi)
        * &(one - gi / k0 / k1);
    num / den
}

fn sym_monomial(k: i64) -> Poly {
    if k == 0 {
        LaurentPoly::constant(Rational::from(1))
    } else {
        LaurentPoly::from_terms([(k, Rational::from(1)), (-k, Rational::from(1))])
    }
}

fn monomial(k: i64) -> Poly {
    LaurentPoly::monomial(k, Rational::from(1))
}

type CheckFn<'a> = Box<dyn Fn() -> CheckRecord + Send + Sync + 'a>;

fn check<'a>(
    name: &'static str,
    identity: &'static str,
    body: impl Fn() -> Result<Outcome> + Send + Sync + 'a,
) -> CheckFn<'a> {
    Box::new(move || run_check(name, identity, &body))
}

/// `⟨A f, g⟩ = c ⟨f, B g⟩` on monomials `|a|, |b| ≤ 5`, residual relative to the batch maximum.
fn adjoint_check<'a>(
    cx: &'a Ctx,
    lhs: impl Fn(&Poly) -> Result<Poly> + Send + Sync + 'a,
    rhs: impl Fn(&Poly) -> Result<Poly> + Send + Sync + 'a,
    factor: Rational,
) -> impl Fn() -> Result<Outcome> + Send + Sync + 'a {
    move || {
        let c = cx.mp(&factor);
        let mut diffs = Vec::new();
        let mut scale = 0f64;
        for a in -5..=5 {
            let f = monomial(a);
            let af = lhs(&f)?;
            for b in -5..=5 {
                let g = monomial(b);
                let l = cx.angle.pair_exact(&af, &g)?.value;
                let r = cx.angle.pair_exact(&f, &rhs(&g)?)?.value * &c;
                scale = scale.max(l.abs_f64()).max(r.abs_f64());
                diffs.push(((l - &r).abs_f64(), a, b));
            }
        }
        let mut w = Worst::new();
        for (d, a, b) in diffs {
            w.note(d / scale, || format!("f = x^{a}, g = x^{b}"));
        }
        Ok(w.finish(1e-15))
    }
}

fn checks(cx: &Ctx) -> Vec<CheckFn<'_>> {
    let mm = cx.opts.max_m;
    let rm = mm.min(5);
    let mut v: Vec<CheckFn<'_>> = Vec::new();
    let fine = cx.opts.fine_bound();
    let quad = cx.opts.quad_bound();

    v.push(check(
        "forms.weight.identities",
        "Δ₊(x) = Δ₊(1/x), α(x) + α(1/x) = 1 − ab, Δ = α Δ₊",
        move || {
            let ab = cx.ab();
            let p = cx.p();
            let one_ab = MpComplex::one(p) - &(ab.a.clone() * &ab.b);
            let mut w = Worst::new();
            for k in [1, 97, 211, 388, 503, 640, 777, 951] {
                let x = MpComplex::root_of_unity(k, 1009, p);
                let xi = x.conj();
                let dp = weight(&ab, &x, WeightVariant::DeltaPlus, cx.ptol())?;
                let dpi = weight(&ab, &xi, WeightVariant::DeltaPlus, cx.ptol())?;
                let d = weight(&ab, &x, WeightVariant::Delta, cx.ptol())?;
                let al = alpha(&ab, &x)?;
                let ali = alpha(&ab, &xi)?;
                w.note(dp.rel_err(&dpi), || {
                    format!("symmetry, x = e^(2πi·{k}/1009)")
                });
                w.note((al.clone() + &ali).rel_err(&one_ab), || {
                    format!("α sum, k = {k}")
                });
                w.note(d.rel_err(&(al * &dp)), || format!("factorization, k = {k}"));
            }
            Ok(w.finish(fine))
        },
    ));

    v.push(check(
        "forms.constant_term",
        "(1, 1) = 2(abcd)_∞ / (q, ab, ac, ad, bc, bd, cd)_∞",
        move || {
            let one = Poly::constant(Rational::from(1));
            let num = cx.round.pair_exact(&one, &one)?.value;
            let closed = constant_term_closed(&cx.ab(), cx.ptol())?;
            Ok(Outcome::within(num.rel_err(&closed), quad))
        },
    ));

    v.push(check(
        "forms.constant_term.near_degenerate",
        "(1, 1) = closed form at (a, b, c, d) = (0.99, −0.99, 0.495, −0.495), q = 1/4",
        move || {
            let r = |n: i64, d: i64| Rational::from((n, d));
            let near = ParameterSet::new(r(1, 2), r(99, 100), r(99, 100), r(1, 1), r(1, 1))?;
            let settings = cx.opts.settings.with_tol(cx.opts.settings.tol.max(1e-24));
            let q = Quadrature::for_params(&near, FormKind::Round, settings)?;
            let one = Poly::constant(Rational::from(1));
            let num = q.pair_exact(&one, &one)?.value;
            let closed = constant_term_closed(&near.abcd().to_mp(cx.p()), cx.ptol())?;
            Ok(Outcome::within(num.rel_err(&closed), quad))
        },
    ));

    v.push(check(
        "forms.restriction",
        "⟨f, g⟩ = ½(1 − ab)(f, g) for symmetric f, g",
        move || {
            let half = (Rational::from(1) - cx.t.a().clone() * cx.t.b()) / Rational::from(2);
            let c = cx.mp(&half);
            let mut w = Worst::new();
            for i in 0..=3 {
                for j in 0..=3 {
                    let (f, g) = (sym_monomial(i), sym_monomial(j));
                    let l = cx.angle.pair_exact(&f, &g)?.value;
                    let r = cx.round.pair_exact(&f, &g)?.value * &c;
                    w.note(l.rel_err(&r), || format!("f = m_{i}, g = m_{j}"));
                }
            }
            Ok(w.finish(quad))
        },
    ));

    v.push(check(
        "forms.biorthogonality",
        "⟨P_m, P′_n⟩ = 0 for m ≠ n",
        move || {
            let mut diag = 0f64;
            let mut off = Vec::new();
            for m in -mm..=mm {
                let pm = cx.fam.nonsym(m)?;
                for n in -mm..=mm {
                    let val = cx
                        .angle
                        .pair_exact(&pm, &cx.inv_fam.nonsym(n)?)?
                        .value
                        .abs_f64();
                    if m == n {
                        diag = diag.max(val);
                    } else {
                        off.push((val, m, n));
                    }
                }
            }
            let mut w = Worst::new();
            for (val, m, n) in off {
                w.note(val / diag, || format!("m = {m}, n = {n}"));
            }
            Ok(w.finish(quad))
        },
    ));

    v.push(check(
        "forms.orthogonality.sym",
        "(P_m^+, P_n^+) = 0 for m ≠ n",
        move || {
            let mut diag = 0f64;
            let mut off = Vec::new();
            for m in 0..=mm {
                let pm = cx.fam.sym(m)?;
                for n in 0..=mm {
                    let val = cx.round.pair_exact(&pm, &cx.fam.sym(n)?)?.value.abs_f64();
                    if m == n {
                        diag = diag.max(val);
                    } else {
                        off.push((val, m, n));
                    }
                }
            }
            let mut w = Worst::new();
            for (val, m, n) in off {
                w.note(val / diag, || format!("m = {m}, n = {n}"));
            }
            Ok(w.finish(quad))
        },
    ));

    for kind in DiagonalKind::ALL {
        let name = match kind {
            DiagonalKind::Sym => "forms.diagonal.sym",
            DiagonalKind::NonsymPos => "forms.diagonal.nonsym_pos",
            DiagonalKind::NonsymNeg => "forms.diagonal.nonsym_neg",
            DiagonalKind::Antisym => "forms.diagonal.antisym",
        };
        let identity = match kind {
            DiagonalKind::Sym => "(P_m^+, P_m^+) = closed form",
            DiagonalKind::NonsymPos => "⟨P_m, P′_m⟩ = closed form, m ≥ 0",
            DiagonalKind::NonsymNeg => "⟨P_{−m}, P′_{−m}⟩ = closed form, m ≥ 1",
            DiagonalKind::Antisym => "⟨P_m^−, P_m^−′⟩ = closed form",
        };
        v.push(check(name, identity, move || {
            let ab = cx.ab();
            let mut w = Worst::new();
            for m in kind.min_m()..=mm {
                let num = match kind {
                    DiagonalKind::Sym => {
                        let p = cx.fam.sym(m)?;
                        cx.round.pair_exact(&p, &p)?
                    }
                    DiagonalKind::NonsymPos => cx
                        .angle
                        .pair_exact(&cx.fam.nonsym(m)?, &cx.inv_fam.nonsym(m)?)?,
                    DiagonalKind::NonsymNeg => cx
                        .angle
                        .pair_exact(&cx.fam.nonsym(-m)?, &cx.inv_fam.nonsym(-m)?)?,
                    DiagonalKind::Antisym => cx
                        .angle
                        .pair_exact(&cx.fam.antisym(m)?, &cx.inv_fam.antisym(m)?)?,
                };
                let closed = diagonal_closed(&ab, m, kind, cx.ptol())?;
                w.note(num.value.rel_err(&closed), || format!("m = {m}"));
            }
            Ok(w.finish(1e-10))
        }));
    }

    v.push(check(
        "forms.diagonal.relation",
        "⟨P_{−m}, P′_{−m}⟩ = (1 − γ_m^{−2}) / ((1 + k1²)(1 + k0 k1^{−1} γ_m^{−1})(1 − k0^{−1}k1^{−1}γ_m^{−1})) ⟨P_m^−, P_m^−′⟩",
        move || {
            let ab = cx.ab();
            let t = &cx.t;
            let mut w = Worst::new();
            for m in 1..=mm {
                let factor = cx.mp(&negative_to_antisym(t, m));
                let lhs = diagonal_closed(&ab, m, DiagonalKind::NonsymNeg, cx.ptol())?;
                let rhs = diagonal_closed(&ab, m, DiagonalKind::Antisym, cx.ptol())? * &factor;
                w.note(lhs.rel_err(&rhs), || format!("m = {m}"));
            }
            Ok(w.finish(fine))
        },
    ));

    let ti = &cx.ti;
    v.push(check(
        "forms.adjoint.T1",
        "⟨T1 f, g⟩ = ⟨f, (T1′)^{-1} g⟩",
        adjoint_check(
            cx,
            move |f| Token::T1.apply(f, &cx.t),
            move |g| Token::T1Inv.apply(g, ti),
            Rational::from(1),
        ),
    ));
    v.push(check(
        "forms.adjoint.T0",
        "⟨T0 f, g⟩ = ⟨f, (T0′)^{-1} g⟩",
        adjoint_check(
            cx,
            move |f| Token::T0.apply(f, &cx.t),
            move |g| Token::T0Inv.apply(g, ti),
            Rational::from(1),
        ),
    ));
    v.push(check(
        "forms.adjoint.Y",
        "⟨Y f, g⟩ = ⟨f, (Y′)^{-1} g⟩",
        adjoint_check(
            cx,
            move |f| named_expr("Y", &cx.t)?.apply(f, &cx.t),
            move |g| named_expr("Yinv", ti)?.apply(g, ti),
            Rational::from(1),
        ),
    ));
    v.push(check(
        "forms.adjoint.S1",
        "⟨S1 f, g⟩ = ⟨f, S1′ g⟩",
        adjoint_check(
            cx,
            move |f| named_expr("S1", &cx.t)?.apply(f, &cx.t),
            move |g| named_expr("S1", ti)?.apply(g, ti),
            Rational::from(1),
        ),
    ));
    v.push(check(
        "forms.adjoint.S0",
        "⟨S0 f, g⟩ = q^{-1}⟨f, S0′ g⟩",
        adjoint_check(
            cx,
            move |f| named_expr("S0", &cx.t)?.apply(f, &cx.t),
            move |g| named_expr("S0", ti)?.apply(g, ti),
            ParameterSet::inv(cx.t.q()),
        ),
    ));

    v.push(check(
        "forms.weyl_denominator",
        "⟨δ f, δ′ g⟩ = ½(1 + k1^{−2})(f, g) at (k0, q k1, u0, u1)",
        move || {
            let d = weyl_denominator(&cx.t);
            let dp = weyl_denominator(&cx.ti);
            let k1 = cx.t.k1();
            let c = cx.mp(
                &((Rational::from(1) + Rational::from(1) / (k1.clone() * k1)) / Rational::from(2)),
            );
            let mut w = Worst::new();
            for i in 0..=4 {
                for j in 0..=4 {
                    let (f, g) = (sym_monomial(i), sym_monomial(j));
                    let l = cx.angle.pair_exact(&(&d * &f), &(&dp * &g))?.value;
                    let r = cx.shifted_round.pair_exact(&f, &g)?.value * &c;
                    w.note(l.rel_err(&r), || format!("f = m_{i}, g = m_{j}"));
                }
            }
            Ok(w.finish(quad))
        },
    ));

    v.push(check(
        "forms.residue.contour",
        "factor cancellation = small-circle contour integral",
        move || {
            let mut w = Worst::new();
            for m in -rm..=rm {
                for var in [ResidueVariant::W, ResidueVariant::WPlus] {
                    let a = residue_weight(&cx.td, m, var, &cx.opts.settings)?;
                    let b = residue_contour(&cx.td, m, var, &cx.opts.settings)?.value;
                    w.note(a.rel_err(&b), || format!("m = {m}, {var:?}"));
                }
            }
            Ok(w.finish(1e-8))
        },
    ));

    v.push(check(
        "forms.residue.alpha",
        "w(γ) = α(γ; k1, k0) w₊(γ), α(γ_0^{-1}) = 1 + k1²",
        move || {
            let abd = cx.td.abcd().to_mp(cx.p());
            let mut w = Worst::new();
            for m in -rm..=rm {
                let full = residue_weight(&cx.td, m, ResidueVariant::W, &cx.opts.settings)?;
                let plus = residue_weight(&cx.td, m, ResidueVariant::WPlus, &cx.opts.settings)?;
                let y = cx.mp(&ParameterSet::inv(&cx.td.xval(m)));
                w.note(full.rel_err(&(alpha(&abd, &y)? * &plus)), || {
                    format!("m = {m}")
                });
            }
            let y0 = cx.mp(&ParameterSet::inv(&cx.td.xval(0)));
            let k1 = cx.t.k1();
            let expect = cx.mp(&(Rational::from(1) + k1.clone() * k1));
            w.note(alpha(&abd, &y0)?.rel_err(&expect), || "m = 0 value".into());
            Ok(w.finish(fine))
        },
    ));

    v.push(check(
        "forms.norm_ratio.nonsym",
        "⟨E_γ, E′_{γ^{-1}}⟩ / ⟨1, 1⟩ = w(γ_0^{-1}) / w(γ^{-1})",
        move || {
            let one = Poly::constant(Rational::from(1));
            let base = cx.angle.pair_exact(&one, &one)?.value;
            let w0 = residue_weight(&cx.td, 0, ResidueVariant::W, &cx.opts.settings)?;
            let mut w = Worst::new();
            for m in -rm..=rm {
                let e = cx.fam.renorm(m)?;
                let ep = cx.inv_fam.renorm(m)?;
                let lhs = cx.angle.pair_exact(&e, &ep)?.value / &base;
                let rhs =
                    w0.clone() / &residue_weight(&cx.td, m, ResidueVariant::W, &cx.opts.settings)?;
                w.note(lhs.rel_err(&rhs), || format!("m = {m}"));
            }
            Ok(w.finish(1e-8))
        },
    ));

    v.push(check(
        "forms.norm_ratio.sym",
        "(E^+, E^+) / (1, 1) = w₊(γ_0^{-1}) / w₊(γ^{-1})",
        move || {
            let one = Poly::constant(Rational::from(1));
            let base = cx.round.pair_exact(&one, &one)?.value;
            let w0 = residue_weight(&cx.td, 0, ResidueVariant::WPlus, &cx.opts.settings)?;
            let mut w = Worst::new();
            for m in 0..=rm {
                let e = cx.fam.renorm_sym(m)?;
                let lhs = cx.round.pair_exact(&e, &e)?.value / &base;
                let rhs = w0.clone()
                    / &residue_weight(&cx.td, m, ResidueVariant::WPlus, &cx.opts.settings)?;
                w.note(lhs.rel_err(&rhs), || format!("m = {m}"));
            }
            Ok(w.finish(1e-8))
        },
    ));

    v.push(check(
        "forms.shift_ratio",
        "(P_m^+, P_m^+)_{a,b,c,d} / (P_{m−1}^+, P_{m−1}^+)_{qa,qb,c,d} = (1 − q^m)(1 − q^{m−1}cd) / ((1 − q^m ab)(1 − q^{m−1}abcd))",
        move || {
            let ab = cx.ab();
            let mut w = Worst::new();
            for m in 1..=mm {
                let p = cx.fam.sym(m)?;
                let ps = cx.shift_fam.sym(m - 1)?;
                let lhs = cx.round.pair_exact(&p, &p)?.value / &cx.shifted_round.pair_exact(&ps, &ps)?.value;
                w.note(lhs.rel_err(&shift_ratio_closed(&ab, m)?), || format!("m = {m}"));
            }
            Ok(w.finish(1e-8))
        },
    ));

    v.push(check(
        "forms.grand_ratio",
        "(P_t^+, P_t^+)_{a,b,c,d} / (1, 1)_{q^{2k}a, q^{2l}b, q^{2m}c, q^{2n}d} = closed form, t = k + l + m + n ≤ 3",
        move || {
            let ab = cx.ab();
            let one = Poly::constant(Rational::from(1));
            let mut w = Worst::new();
            for k in 0..=3i64 {
                for l in 0..=3 - k {
                    for m in 0..=3 - k - l {
                        for n in 0..=3 - k - l - m {
                            let t = k + l + m + n;
                            let p = cx.fam.sym(t)?;
                            let num = cx.round.pair_exact(&p, &p)?.value;
                            let q = Quadrature::new(&ab.scaled(k, l, m, n), FormKind::Round, cx.opts.settings)?;
                            let den = q.pair_exact(&one, &one)?.value;
                            let closed = grand_ratio_closed(&ab, k, l, m, n, cx.ptol())?;
                            w.note((num / &den).rel_err(&closed), || format!("(k, l, m, n) = ({k}, {l}, {m}, {n})"));
                        }
                    }
                }
            }
            Ok(w.finish(1e-8))
        },
    ));

    v
}

/// Runs every forms check at `t`.
pub fn verify_forms(t: &ParameterSet<Rational>, opts: &FormsOptions) -> VerificationReport {
    let setup = (|| -> Result<Ctx> {
        opts.settings.validate()?;
        let s = opts.settings;
        Ok(Ctx {
            t: t.clone(),
            ti: t.inverse(),
            td: t.dual(),
            fam: Family::new(t.clone()),
            inv_fam: Family::new(t.inverse()),
            shift_fam: Family::new(t.shifted()),
            angle: Quadrature::for_params(t, FormKind::Angle, s)?,
            round: Quadrature::for_params(t, FormKind::Round, s)?,
            shifted_round: Quadrature::for_params(&t.shifted(), FormKind::Round, s)?,
            opts: *opts,
        })
    })();
    let cx = match setup {
        Ok(cx) => cx,
        Err(e) => {
            return VerificationReport::from_checks(vec![run_check(
                "forms.setup",
                "unit-circle quadrature",
                || Err(e),
            )])
        }
    };
    let list = checks(&cx);
    let records: Vec<CheckRecord> = list.par_iter().map(|c| c()).collect();
    VerificationReport::from_checks(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_suite_passes_at_low_degree() {
        let t = ParameterSet::<Rational>::fixture();
        let rep = verify_forms(
            &t,
            &FormsOptions::new(QuadratureSettings::for_precision(256), 3),
        );
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn negative_index_diagonal_carries_an_inverse_hecke_factor() {
        // The prefactor (1 + k1²) in the commonly displayed version of this
        // relation overshoots the closed forms by (1 + k1²)².
        let t = ParameterSet::<Rational>::fixture();
        let ab = t.abcd().to_mp(256);
        let k1 = t.k1().clone();
        let h = Rational::from(1) + k1.clone() * &k1;
        for m in 1..=4 {
            let neg = diagonal_closed(&ab, m, DiagonalKind::NonsymNeg, 1e-70).unwrap();
            let anti = diagonal_closed(&ab, m, DiagonalKind::Antisym, 1e-70).unwrap();
            let ours =
                anti.clone() * &MpComplex::from_rational_prec(&negative_to_antisym(&t, m), 256);
            assert!(neg.rel_err(&ours) < 1e-50);
            let displayed = negative_to_antisym(&t, m) * h.clone() * &h;
            let other = anti * &MpComplex::from_rational_prec(&displayed, 256);
            assert!(neg.rel_err(&other) > 0.5);
        }
    }
}
