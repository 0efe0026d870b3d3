//! Relation checks for the difference-reflection representation on a
//! window of monomials.

use rayon::prelude::*;

use super::{apply_l, named_expr, OperatorExpr, Token};
use crate::error::Result;
use crate::laurent::{rank, weyl_denominator, LaurentPoly};
use crate::params::ParameterSet;
use crate::report::{run_check, CheckRecord, Outcome, VerificationReport};
use crate::scalar::Scalar;

type Poly<S> = LaurentPoly<S>;

#[derive(Clone, Copy, Debug)]
pub struct RelationOptions {
    /// Evaluate independent checks on the rayon pool.
    pub parallel: bool,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions { parallel: true }
    }
}

/// Compares `lhs(f)` and `rhs(f)` over the monomials `x^m`, `|m| ≤ window`.
fn on_monomials<S: Scalar>(
    t: &ParameterSet<S>,
    window: i64,
    lhs: impl Fn(&Poly<S>) -> Result<Poly<S>>,
    rhs: impl Fn(&Poly<S>) -> Result<Poly<S>>,
) -> Result<Outcome> {
    compare_on(
        t,
        (-window..=window).map(|m| (format!("x^{m}"), Poly::monomial(m, t.one()))),
        lhs,
        rhs,
    )
}

fn compare_on<S: Scalar>(
    _t: &ParameterSet<S>,
    inputs: impl Iterator<Item = (String, Poly<S>)>,
    lhs: impl Fn(&Poly<S>) -> Result<Poly<S>>,
    rhs: impl Fn(&Poly<S>) -> Result<Poly<S>>,
) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut first_bad: Option<String> = None;
    for (label, f) in inputs {
        let l = lhs(&f)?;
        let r = rhs(&f)?;
        if !l.same(&r) {
            worst = worst.max(l.rel_distance(&r));
            if first_bad.is_none() {
                first_bad = Some(format!("fails on {label}"));
            }
        } else if !S::is_exact() {
            worst = worst.max(l.rel_distance(&r));
        }
    }
    if S::is_exact() {
        Ok(Outcome::exact(first_bad.is_none(), first_bad))
    } else {
        let mut o = Outcome::within(
            worst,
            if first_bad.is_none() {
                f64::INFINITY
            } else {
                0.0
            },
        );
        o.detail = first_bad;
        Ok(o)
    }
}

fn tok<S: Scalar>(t: &ParameterSet<S>, k: Token) -> OperatorExpr<S> {
    OperatorExpr::token(k, t.one())
}

/// `(T − k)(T + k^{-1}) = T² + (k^{-1} − k)T − 1`.
fn quadratic<S: Scalar>(t: &ParameterSet<S>, g: Token, k: &S) -> OperatorExpr<S> {
    let gt = tok(t, g);
    gt.compose(&gt)
        .add(&gt.scale_by(&(ParameterSet::inv(k) - k)))
        .add(&OperatorExpr::scalar(-t.one()))
}

/// Right side of `T1 f(Y) − f(Y^{-1}) T1 = ((k1−k1^{-1})Y² + (k0−k0^{-1})Y)·(f(Y^{-1}) − f(Y))/(1 − Y²)`.
fn lusztig_rhs<S: Scalar>(t: &ParameterSet<S>, f: &Poly<S>) -> Result<OperatorExpr<S>> {
    let k0 = t.k0();
    let k1 = t.k1();
    let pre = Poly::from_terms([
        (2, k1.clone() - &ParameterSet::inv(k1)),
        (1, k0.clone() - &ParameterSet::inv(k0)),
    ]);
    let num = &f.s1() - f;
    let den = Poly::from_terms([(0, t.one()), (2, -t.one())]);
    let quotient = num.exact_div(&den)?;
    Ok(OperatorExpr::poly_in_y(&(pre * quotient)))
}

/// Right side of `f(z)T_i − T_i(s_i f)(z) = [(k_i−k_i^{-1}) + (u_i−u_i^{-1})z^{a_i^∨}]/(1 − z^{a_i})·(f − s_i f)(z)`
/// as a multiplication operator.
fn commutation_rhs<S: Scalar>(t: &ParameterSet<S>, i: u8, f: &Poly<S>) -> Result<Poly<S>> {
    let one = t.one();
    let (k, u, coroot, root, sf) = if i == 1 {
        (
            t.k1(),
            t.u1(),
            Poly::monomial(1, one.clone()),
            Poly::monomial(2, one.clone()),
            f.s1(),
        )
    } else {
        (
            t.k0(),
            t.u0(),
            Poly::monomial(-1, t.p().clone()),
            Poly::monomial(-2, t.q().clone()),
            f.s0(t.q()),
        )
    };
    let lin = Poly::constant(k.clone() - &ParameterSet::inv(k))
        + coroot.scale(&(u.clone() - &ParameterSet::inv(u)));
    let den = Poly::constant(one) - root;
    (lin * (f - &sf)).exact_div(&den)
}

type CheckFn<'a> = Box<dyn Fn() -> CheckRecord + Send + Sync + 'a>;

fn checks<'a, S: Scalar>(t: &'a ParameterSet<S>, m: i64) -> Result<Vec<CheckFn<'a>>> {
    let mut v: Vec<CheckFn<'a>> = Vec::new();

    for (g, k, name, label) in [
        (
            Token::T0,
            t.k0(),
            "hecke.quadratic.T0",
            "(T0 - k0)(T0 + k0^-1) = 0",
        ),
        (
            Token::T1,
            t.k1(),
            "hecke.quadratic.T1",
            "(T1 - k1)(T1 + k1^-1) = 0",
        ),
        (
            Token::T0v,
            t.u0(),
            "hecke.quadratic.T0v",
            "(T0v - u0)(T0v + u0^-1) = 0",
        ),
        (
            Token::T1v,
            t.u1(),
            "hecke.quadratic.T1v",
            "(T1v - u1)(T1v + u1^-1) = 0",
        ),
    ] {
        v.push(Box::new(move || {
            run_check(name, label, || {
                let e = quadratic(t, g, k);
                on_monomials(t, m, |f| e.apply(f, t), |_| Ok(Poly::zero()))
            })
        }));
    }

    for (g, name) in [
        (Token::T0, "hecke.inverse.T0"),
        (Token::T1, "hecke.inverse.T1"),
    ] {
        v.push(Box::new(move || {
            run_check(name, format!("{g} {g}^-1 = {g}^-1 {g} = 1"), || {
                let a = OperatorExpr::word(t.one(), vec![g, g.inverse()]);
                let b = OperatorExpr::word(t.one(), vec![g.inverse(), g]);
                let o1 = on_monomials(t, m, |f| a.apply(f, t), |f| Ok(f.clone()))?;
                if o1.status == crate::report::Status::Fail {
                    return Ok(o1);
                }
                on_monomials(t, m, |f| b.apply(f, t), |f| Ok(f.clone()))
            })
        }));
    }

    for (k, name, label) in [
        (
            1i64,
            "hecke.lusztig.Y",
            "T1 Y - Y^-1 T1 = (k1 - k1^-1) Y + (k0 - k0^-1)",
        ),
        (
            -1i64,
            "hecke.lusztig.Yinv",
            "T1 Y^-1 - Y T1 = -(k1 - k1^-1) Y - (k0 - k0^-1)",
        ),
    ] {
        v.push(Box::new(move || {
            run_check(name, label, || {
                let fpoly = Poly::monomial(k, t.one());
                let fy = OperatorExpr::poly_in_y(&fpoly);
                let fyinv = OperatorExpr::poly_in_y(&fpoly.s1());
                let t1 = tok(t, Token::T1);
                let lhs = t1.compose(&fy).sub(&fyinv.compose(&t1));
                let rhs = lusztig_rhs(t, &fpoly)?;
                on_monomials(t, m, |f| lhs.apply(f, t), |f| rhs.apply(f, t))
            })
        }));
    }

    v.push(Box::new(move || {
        run_check("hecke.compatibility", "T1v T1 T0 T0v = p^-1", || {
            let w = OperatorExpr::word(t.one(), vec![Token::T1v, Token::T1, Token::T0, Token::T0v]);
            let pinv = ParameterSet::inv(t.p());
            on_monomials(t, m, |f| w.apply(f, t), |f| Ok(f.scale(&pinv)))
        })
    }));

    for i in [0u8, 1] {
        for k in [1i64, -1] {
            let name = format!(
                "hecke.commutation.T{i}.{}",
                if k > 0 { "x" } else { "xinv" }
            );
            let label = format!(
                "f(z) T{i} - T{i} (s{i} f)(z) = [(k{i} - k{i}^-1) + (u{i} - u{i}^-1) z^a{i}v]/(1 - z^a{i}) (f - s{i} f)(z), f = x^{k}"
            );
            v.push(Box::new(move || {
                run_check(name.clone(), label.clone(), || {
                    let fpoly = Poly::monomial(k, t.one());
                    let sf = if i == 1 { fpoly.s1() } else { fpoly.s0(t.q()) };
                    let g = if i == 1 { Token::T1 } else { Token::T0 };
                    let lhs_op = OperatorExpr::multiplication(&fpoly)
                        .compose(&tok(t, g))
                        .sub(&tok(t, g).compose(&OperatorExpr::multiplication(&sf)));
                    let r = commutation_rhs(t, i, &fpoly)?;
                    on_monomials(t, m, |f| lhs_op.apply(f, t), |f| Ok(&r * f))
                })
            }));
        }
    }

    v.push(Box::new(move || {
        run_check(
            "hecke.intertwiner_square.S0",
            "S0^2 = q^-1 u1^2 prod_(xi=+-1) (1 - u0^-1 u1^-1 q^(xi/2) Y^xi)(1 + u0 u1^-1 q^(xi/2) Y^xi)",
            || {
                let s0 = named_expr("S0", t)?;
                let sq = s0.compose(&s0);
                let (u0, u1, p) = (t.u0(), t.u1(), t.p());
                let alpha = ParameterSet::inv(&(u0.clone() * u1));
                let beta = u0.clone() / u1;
                let mut f = Poly::constant(t.q_pow(-1) * u1 * u1);
                for xi in [1i64, -1] {
                    let pq = t.p_pow(xi);
                    let _ = p;
                    f = f * Poly::from_terms([(0, t.one()), (xi, -(alpha.clone() * &pq))]);
                    f = f * Poly::from_terms([(0, t.one()), (xi, beta.clone() * &pq)]);
                }
                let rhs = OperatorExpr::poly_in_y(&f);
                on_monomials(t, m, |g| sq.apply(g, t), |g| rhs.apply(g, t))
            },
        )
    }));

    v.push(Box::new(move || {
        run_check(
            "hecke.intertwiner_square.S1",
            "S1^2 = k1^2 prod_(xi=+-1) (1 - k0^-1 k1^-1 Y^xi)(1 + k0 k1^-1 Y^xi)",
            || {
                let s1 = named_expr("S1", t)?;
                let sq = s1.compose(&s1);
                let (k0, k1) = (t.k0(), t.k1());
                let alpha = ParameterSet::inv(&(k0.clone() * k1));
                let beta = k0.clone() / k1;
                let mut f = Poly::constant(k1.clone() * k1);
                for xi in [1i64, -1] {
                    f = f * Poly::from_terms([(0, t.one()), (xi, -alpha.clone())]);
                    f = f * Poly::from_terms([(0, t.one()), (xi, beta.clone())]);
                }
                let rhs = OperatorExpr::poly_in_y(&f);
                on_monomials(t, m, |g| sq.apply(g, t), |g| rhs.apply(g, t))
            },
        )
    }));

    for (which, k) in [("S1", 1i64), ("S1", -1), ("S0", 1), ("S0", -1)] {
        let name = format!(
            "hecke.intertwining.{which}.{}",
            if k > 0 { "Y" } else { "Yinv" }
        );
        let label = if which == "S1" {
            format!("Y^{k} S1 = S1 Y^{}", -k)
        } else {
            format!("Y^{k} S0 = S0 (q^-1 Y^-1)^{k}")
        };
        v.push(Box::new(move || {
            run_check(name.clone(), label.clone(), || {
                let s = named_expr(which, t)?;
                let fy = OperatorExpr::poly_in_y(&Poly::monomial(k, t.one()));
                let g = if which == "S1" {
                    Poly::monomial(-k, t.one())
                } else {
                    Poly::monomial(-k, t.q_pow(-k))
                };
                let gy = OperatorExpr::poly_in_y(&g);
                let lhs = fy.compose(&s);
                let rhs = s.compose(&gy);
                on_monomials(t, m, |f| lhs.apply(f, t), |f| rhs.apply(f, t))
            })
        }));
    }

    v.push(Box::new(move || {
        run_check(
            "hecke.triangularity.Y",
            "Y x^m = gamma_m x^m + lower order terms",
            || {
                let y = named_expr("Y", t)?;
                let mut bad = None;
                for e in -m..=m {
                    let img = y.apply(&Poly::monomial(e, t.one()), t)?;
                    let top_ok = img
                        .coeff(e)
                        .is_some_and(|c| c.close_to(&t.gamma(e), 0.0, 1e-40, 1.0));
                    let lower_ok = img.terms().all(|(k, _)| k == e || rank(k) < rank(e));
                    if !(top_ok && lower_ok) && bad.is_none() {
                        bad = Some(format!("fails on x^{e}"));
                    }
                }
                Ok(Outcome::exact(bad.is_none(), bad))
            },
        )
    }));

    v.push(Box::new(move || {
        run_check(
            "hecke.idempotents",
            "C+^2 = C+, C-^2 = C-, C+ C- = 0, C+ + C- = 1",
            || {
                let cp = named_expr("Cplus", t)?;
                let cm = named_expr("Cminus", t)?;
                let parts = [
                    (cp.compose(&cp), cp.clone()),
                    (cm.compose(&cm), cm.clone()),
                    (cp.compose(&cm), OperatorExpr::zero()),
                    (cp.add(&cm), OperatorExpr::scalar(t.one())),
                ];
                for (l, r) in parts.iter() {
                    let o = on_monomials(t, m, |f| l.apply(f, t), |f| r.apply(f, t))?;
                    if o.status == crate::report::Status::Fail {
                        return Ok(o);
                    }
                }
                Ok(Outcome::exact(true, None))
            },
        )
    }));

    v.push(Box::new(move || {
        run_check(
            "hecke.second_order.L",
            "L f = (Y + Y^-1) f on symmetric f",
            || {
                let ysum = named_expr("Y", t)?.add(&named_expr("Yinv", t)?);
                let inputs = (0..=m).map(|j| {
                    (
                        format!("x^{j} + x^-{j}"),
                        Poly::monomial(j, t.one()) + Poly::monomial(-j, t.one()),
                    )
                });
                compare_on(t, inputs, |f| apply_l(f, t), |f| ysum.apply(f, t))
            },
        )
    }));

    v.push(Box::new(move || {
        run_check(
            "hecke.shift_isotypes",
            "h+(Y) maps symmetric to anti-symmetric, h-(Y) anti-symmetric to symmetric",
            || {
                let hp = named_expr("hplus", t)?;
                let hm = named_expr("hminus", t)?;
                let cp = named_expr("Cplus", t)?;
                let cm = named_expr("Cminus", t)?;
                let delta = weyl_denominator(t);
                let sym = |j: i64| Poly::monomial(j, t.one()) + Poly::monomial(-j, t.one());
                let o = compare_on(
                    t,
                    (0..m).map(|j| (format!("x^{j} + x^-{j}"), sym(j))),
                    |f| cp.apply(&hp.apply(f, t)?, t),
                    |_| Ok(Poly::zero()),
                )?;
                if o.status == crate::report::Status::Fail {
                    return Ok(o);
                }
                compare_on(
                    t,
                    (0..m).map(|j| (format!("delta (x^{j} + x^-{j})"), &delta * &sym(j))),
                    |f| cm.apply(&hm.apply(f, t)?, t),
                    |_| Ok(Poly::zero()),
                )
            },
        )
    }));

    Ok(v)
}

/// Checks the defining and derived relations of the representation on all
/// monomials `x^m` with `|m| ≤ window`.
pub fn verify_relations<S: Scalar>(t: &ParameterSet<S>, window: i64) -> VerificationReport {
    verify_relations_with(t, window, RelationOptions::default())
}

pub fn verify_relations_with<S: Scalar>(
    t: &ParameterSet<S>,
    window: i64,
    opts: RelationOptions,
) -> VerificationReport {
    let list = match checks(t, window) {
        Ok(l) => l,
        Err(e) => {
            return VerificationReport::from_checks(vec![run_check(
                "hecke.setup",
                "operator construction",
                || Err(e),
            )])
        }
    };
    let records: Vec<CheckRecord> = if opts.parallel {
        list.par_iter().map(|c| c()).collect()
    } else {
        list.iter().map(|c| c()).collect()
    };
    VerificationReport::from_checks(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn relations_hold_on_a_small_window() {
        let t = ParameterSet::<Rational>::fixture();
        let rep = verify_relations_with(&t, 3, RelationOptions { parallel: false });
        assert!(rep.passed(), "{rep}");
        assert!(rep.checks().len() >= 20);
    }

    #[test]
    fn compatibility_on_cube() {
        let t = ParameterSet::<Rational>::fixture();
        let w = OperatorExpr::word(t.one(), vec![Token::T1v, Token::T1, Token::T0, Token::T0v]);
        let x3 = Poly::monomial(3, t.one());
        assert_eq!(
            w.apply(&x3, &t).unwrap(),
            x3.scale(&ParameterSet::inv(t.p()))
        );
    }
}
