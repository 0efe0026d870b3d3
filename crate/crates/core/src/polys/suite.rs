//! Identity checks for the constructed families.

use rayon::prelude::*;

use super::{
    alpha_beta, antisym_series, ev_closed, ev_value, nonsym_rodrigues, nonsym_series,
    reconstruct_pair, sym_series, EvKind, Family,
};
use crate::error::Result;
use crate::laurent::{weyl_denominator, LaurentPoly, Tolerance};
use crate::operators::{apply_l, apply_shift, named_expr, ShiftDirection, Token};
use crate::params::ParameterSet;
use crate::report::{run_check, CheckRecord, Outcome, VerificationReport};
use crate::scalar::Scalar;

type Poly<S> = LaurentPoly<S>;

/// Worst mismatch over a run of comparisons.
struct Tally {
    worst: f64,
    first_bad: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            worst: 0.0,
            first_bad: None,
        }
    }

    fn note(&mut self, ok: bool, dist: f64, label: impl FnOnce() -> String) {
        if !ok && self.first_bad.is_none() {
            self.first_bad = Some(format!("fails at {}", label()));
        }
        self.worst = self.worst.max(dist);
    }

    fn poly<S: Scalar>(&mut self, l: &Poly<S>, r: &Poly<S>, label: impl FnOnce() -> String) {
        let ok = l.same(r);
        let dist = if S::is_exact() {
            0.0
        } else {
            l.rel_distance(r)
        };
        self.note(ok, dist, label);
    }

    fn scalar<S: Scalar>(&mut self, l: &S, r: &S, label: impl FnOnce() -> String) {
        let scale = l.abs_f64().max(r.abs_f64());
        let tol = Tolerance::for_bits(l.bits().unwrap_or(256));
        let ok = l.close_to(r, tol.atol, tol.rtol, scale);
        let dist = if S::is_exact() {
            0.0
        } else {
            (l.clone() - r).abs_f64() / scale.max(f64::MIN_POSITIVE)
        };
        self.note(ok, dist, label);
    }

    fn finish<S: Scalar>(self) -> Outcome {
        if S::is_exact() {
            Outcome::exact(self.first_bad.is_none(), self.first_bad)
        } else {
            let mut o = Outcome::within(
                self.worst,
                if self.first_bad.is_none() {
                    f64::INFINITY
                } else {
                    0.0
                },
            );
            o.detail = self.first_bad;
            o
        }
    }
}

type CheckFn<'a> = Box<dyn Fn() -> CheckRecord + Send + Sync + 'a>;

fn check<'a>(
    name: &'static str,
    identity: &'static str,
    body: impl Fn() -> Result<Outcome> + Send + Sync + 'a,
) -> CheckFn<'a> {
    Box::new(move || run_check(name, identity, &body))
}

fn checks<'a, S: Scalar>(
    fam: &'a Family<S>,
    dual: &'a Family<S>,
    shifted: &'a Family<S>,
    mm: i64,
) -> Vec<CheckFn<'a>> {
    let t = fam.params();
    let mut v: Vec<CheckFn<'a>> = Vec::new();

    v.push(check(
        "polys.monic",
        "leading_term(P_m) = (m, 1)",
        move || {
            let mut tally = Tally::new();
            for m in -mm..=mm {
                let p = fam.nonsym(m)?;
                let ok = p.leading_term()? == (m, t.one());
                tally.note(ok, 0.0, || format!("m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check("polys.eigen.Y", "Y P_m = γ_m P_m", move || {
        let y = named_expr("Y", t)?;
        let mut tally = Tally::new();
        for m in -mm..=mm {
            let p = fam.nonsym(m)?;
            tally.poly(&y.apply(&p, t)?, &p.scale(&t.gamma(m)), || {
                format!("m = {m}")
            });
        }
        Ok(tally.finish::<S>())
    }));

    v.push(check(
        "polys.agreement.rodrigues",
        "(S1 S0)^m(1) / d_m = P_m",
        move || {
            let mut tally = Tally::new();
            for m in -mm..=mm {
                tally.poly(&nonsym_rodrigues(t, m)?.poly, &fam.nonsym(m)?, || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.agreement.series",
        "two-term 4φ3 expansion = P_m",
        move || {
            let mut tally = Tally::new();
            for m in -mm..=mm {
                tally.poly(&nonsym_series(t, m)?.poly, &fam.nonsym(m)?, || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.agreement.sym_series",
        "balanced 4φ3 = P_m^+",
        move || {
            let mut tally = Tally::new();
            for m in 0..=mm {
                tally.poly(&sym_series(&t.abcd(), m)?, &fam.sym(m)?, || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.agreement.antisym_series",
        "two-term 4φ3 expansion = P_m^-",
        move || {
            let mut tally = Tally::new();
            for m in 1..=mm {
                tally.poly(&antisym_series(t, m)?.poly, &fam.antisym(m)?, || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.sym_series.permutation",
        "P_m^+ is symmetric in a, b, c, d",
        move || {
            let base = t.abcd();
            let mut tally = Tally::new();
            for m in 0..=mm.min(5) {
                let p = sym_series(&base, m)?;
                for perm in [
                    [1, 0, 2, 3],
                    [0, 2, 1, 3],
                    [0, 1, 3, 2],
                    [3, 2, 1, 0],
                    [2, 3, 0, 1],
                ] {
                    tally.poly(&sym_series(&base.permuted(perm), m)?, &p, || {
                        format!("m = {m}, {perm:?}")
                    });
                }
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.t1_action",
        "T1 P_m = α_m P_m + β_m P_{-m}",
        move || {
            let mut tally = Tally::new();
            for m in (-mm..=mm).filter(|&m| m != 0) {
                let (al, be) = alpha_beta(t, m)?;
                let lhs = crate::operators::t1(&fam.nonsym(m)?, t)?;
                let rhs = fam.nonsym(m)?.scale(&al) + fam.nonsym(-m)?.scale(&be);
                tally.poly(&lhs, &rhs, || format!("m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.beta_product",
        "β_m β_{-m} = (k1 − α_m)(k1^-1 + α_m)",
        move || {
            let mut tally = Tally::new();
            for m in 1..=mm {
                let (al, be) = alpha_beta(t, m)?;
                let (_, be_neg) = alpha_beta(t, -m)?;
                let lhs = be * &be_neg;
                let rhs = (t.k1().clone() - &al) * &(ParameterSet::inv(t.k1()) + &al);
                tally.scalar(&lhs, &rhs, || format!("m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.intertwiner.S1",
        "S1 P_m = (γ_m − γ_{-m}) β_m P_{-m}",
        move || {
            let s1 = named_expr("S1", t)?;
            let mut tally = Tally::new();
            for m in (-mm..=mm).filter(|&m| m != 0) {
                let (_, be) = alpha_beta(t, m)?;
                let c = (t.gamma(m) - &t.gamma(-m)) * &be;
                tally.poly(
                    &s1.apply(&fam.nonsym(m)?, t)?,
                    &fam.nonsym(-m)?.scale(&c),
                    || format!("m = {m}"),
                );
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.intertwiner.S0",
        "S0 P_m = (γ_{-m-1} − γ_m) k1^-1 P_{-m-1}",
        move || {
            let s0 = named_expr("S0", t)?;
            let mut tally = Tally::new();
            for m in 0..mm {
                let c = (t.gamma(-m - 1) - &t.gamma(m)) * &ParameterSet::inv(t.k1());
                tally.poly(
                    &s0.apply(&fam.nonsym(m)?, t)?,
                    &fam.nonsym(-m - 1)?.scale(&c),
                    || format!("m = {m}"),
                );
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.reconstruction",
        "P_{±m} from (Y − γ_{∓m}) P_m^+",
        move || {
            let mut tally = Tally::new();
            for m in 1..=mm {
                let (pm, pneg) = reconstruct_pair(fam, m)?;
                tally.poly(&pm, &fam.nonsym(m)?, || format!("P_{m}"));
                tally.poly(&pneg, &fam.nonsym(-m)?, || format!("P_-{m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.symmetric",
        "T1 P_m^+ = k1 P_m^+ and s1 P_m^+ = P_m^+",
        move || {
            let mut tally = Tally::new();
            for m in 0..=mm {
                let p = fam.sym(m)?;
                tally.poly(&crate::operators::t1(&p, t)?, &p.scale(t.k1()), || {
                    format!("T1, m = {m}")
                });
                tally.poly(&p.s1(), &p, || format!("s1, m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check("polys.antisymmetric", "C+ P_m^- = 0", move || {
        let cplus = named_expr("Cplus", t)?;
        let mut tally = Tally::new();
        for m in 1..=mm {
            tally.poly(&cplus.apply(&fam.antisym(m)?, t)?, &Poly::zero(), || {
                format!("m = {m}")
            });
        }
        Ok(tally.finish::<S>())
    }));

    v.push(check(
        "polys.weyl_character",
        "P_m^- = δ P_{m-1}^+(k0, q k1, u0, u1)",
        move || {
            let delta = weyl_denominator(t);
            let mut tally = Tally::new();
            for m in 1..=mm {
                tally.poly(&fam.antisym(m)?, &(&delta * &shifted.sym(m - 1)?), || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    let h = move |g: &S, plus: bool| -> S {
        let k = t.k0().clone() * t.k1();
        let r = t.k1().clone() * &ParameterSet::inv(t.k0());
        let gi = ParameterSet::inv(g);
        if plus {
            gi * &(g.clone() - &k) * &(g.clone() + &r)
        } else {
            g.clone() * &(gi.clone() - &k) * &(gi + &r)
        }
    };

    v.push(check(
        "polys.shift.plus",
        "G+ P_m^+ = h+(γ_m) P_{m-1}^+(k0, q k1, u0, u1)",
        move || {
            let mut tally = Tally::new();
            for m in 1..=mm {
                let lhs = apply_shift(ShiftDirection::Plus, &fam.sym(m)?, t)?;
                tally.poly(
                    &lhs,
                    &shifted.sym(m - 1)?.scale(&h(&t.gamma(m), true)),
                    || format!("m = {m}"),
                );
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.shift.minus",
        "G- P_{m-1}^+(k0, q k1, u0, u1) = h-(γ_m) P_m^+",
        move || {
            let mut tally = Tally::new();
            for m in 1..=mm {
                let lhs = apply_shift(ShiftDirection::Minus, &shifted.sym(m - 1)?, t)?;
                tally.poly(&lhs, &fam.sym(m)?.scale(&h(&t.gamma(m), false)), || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.second_order.L",
        "L P_m^+ = (γ_m + γ_m^-1) P_m^+",
        move || {
            let mut tally = Tally::new();
            for m in 0..=mm {
                let p = fam.sym(m)?;
                let g = t.gamma(m);
                let ev = g.clone() + &ParameterSet::inv(&g);
                tally.poly(&apply_l(&p, t)?, &p.scale(&ev), || format!("m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.evaluation.nonsym",
        "P_m(a^-1) = closed q-factorial form",
        move || {
            let mut tally = Tally::new();
            for m in -mm..=mm {
                let direct = ev_value(&fam.nonsym(m)?, t)?;
                tally.scalar(&direct, &ev_closed(t, m, EvKind::Nonsym)?, || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.evaluation.sym",
        "P_m^+(a) = closed q-factorial form",
        move || {
            let mut tally = Tally::new();
            for m in 0..=mm {
                let direct = fam.sym(m)?.evaluate(t.a())?;
                tally.scalar(&direct, &ev_closed(t, m, EvKind::Sym)?, || {
                    format!("m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.renormalized",
        "E_γm(a^-1) = 1 and C+ E_γm = E+_s(γm)",
        move || {
            let cplus = named_expr("Cplus", t)?;
            let mut tally = Tally::new();
            for m in -mm..=mm {
                let e = fam.renorm(m)?;
                tally.scalar(&ev_value(&e, t)?, &t.one(), || format!("value, m = {m}"));
                tally.poly(&cplus.apply(&e, t)?, &fam.renorm_sym(m)?, || {
                    format!("C+, m = {m}")
                });
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.duality.nonsym",
        "E_γm(x_n^-1; t) = E_xn(γ_m^-1; dual t)",
        move || {
            let mut tally = Tally::new();
            for m in -mm..=mm {
                let e = fam.renorm(m)?;
                for n in -mm..=mm {
                    let lhs = e.evaluate(&ParameterSet::inv(&t.xval(n)))?;
                    let rhs = dual.renorm(n)?.evaluate(&ParameterSet::inv(&t.gamma(m)))?;
                    tally.scalar(&lhs, &rhs, || format!("m = {m}, n = {n}"));
                }
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.duality.sym",
        "E+_s(γm)(x_n; t) = E+_s(xn)(γ_m; dual t)",
        move || {
            let mut tally = Tally::new();
            for m in -mm..=mm {
                let e = fam.renorm_sym(m)?;
                for n in -mm..=mm {
                    let lhs = e.evaluate(&t.xval(n))?;
                    let rhs = dual.renorm_sym(n)?.evaluate(&t.gamma(m))?;
                    tally.scalar(&lhs, &rhs, || format!("m = {m}, n = {n}"));
                }
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.action.T1",
        "T1 E_γ = k1 E_γ + k1^-1 (1 − k0k1γ^-1)(1 + k0^-1k1γ^-1)/(1 − γ^-2) (E_s1γ − E_γ)",
        move || {
            let mut tally = Tally::new();
            let (k0, k1) = (t.k0(), t.k1());
            for m in -mm..=mm {
                let g = t.gamma(m);
                let gi = ParameterSet::inv(&g);
                let Some(den) = (t.one() - &(gi.clone() * &gi)).checked_inv() else {
                    continue;
                };
                let c = ParameterSet::inv(k1)
                    * &(t.one() - &(k0.clone() * k1 * &gi))
                    * &(t.one() + &(k1.clone() / k0 * &gi))
                    * &den;
                let e = fam.renorm(m)?;
                let rhs = e.scale(k1) + (&fam.renorm(-m)? - &e).scale(&c);
                tally.poly(&Token::T1.apply(&e, t)?, &rhs, || format!("m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v.push(check(
        "polys.action.T1v",
        "T1v E_γ = u1 E_γ + u1^-1 (1 − u0u1q^½γ)(1 + u0^-1u1q^½γ)/(1 − qγ²) (E_s0γ − E_γ)",
        move || {
            let mut tally = Tally::new();
            let (u0, u1) = (t.u0(), t.u1());
            for m in -mm..=mm {
                let g = t.gamma(m);
                let Some(den) = (t.one() - &(t.q().clone() * &g * &g)).checked_inv() else {
                    continue;
                };
                let pg = t.p().clone() * &g;
                let c = ParameterSet::inv(u1)
                    * &(t.one() - &(u0.clone() * u1 * &pg))
                    * &(t.one() + &(u1.clone() / u0 * &pg))
                    * &den;
                let e = fam.renorm(m)?;
                // s0 γ_m = γ_{-m-1}
                let rhs = e.scale(u1) + (&fam.renorm(-m - 1)? - &e).scale(&c);
                tally.poly(&Token::T1v.apply(&e, t)?, &rhs, || format!("m = {m}"));
            }
            Ok(tally.finish::<S>())
        },
    ));

    v
}

/// Runs every polynomial identity for indices `|m| ≤ max_m` (the
/// permutation check is capped at degree 5).
pub fn verify_polys<S: Scalar>(t: &ParameterSet<S>, max_m: i64) -> VerificationReport {
    let fam = Family::new(t.clone());
    let dual = Family::new(t.dual());
    let shifted = Family::new(t.shifted());
    // Warm the shared caches before fanning out.
    let warm = (|| -> Result<()> {
        fam.y_images(super::basis_len(max_m + 1).max(super::basis_len(-max_m - 1)) - 1)?;
        Ok(())
    })();
    if let Err(e) = warm {
        return VerificationReport::from_checks(vec![run_check(
            "polys.setup",
            "Y on the monomial basis",
            || Err(e),
        )]);
    }
    let list = checks(&fam, &dual, &shifted, max_m);
    let records: Vec<CheckRecord> = list.par_iter().map(|c| c()).collect();
    VerificationReport::from_checks(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn all_identities_hold_in_low_degree() {
        let t = ParameterSet::<Rational>::fixture();
        let rep = verify_polys(&t, 3);
        assert!(rep.passed(), "{rep}");
        assert!(
            rep.checks()
                .iter()
                .all(|c| c.status == crate::report::Status::Pass),
            "{rep}"
        );
    }
}
