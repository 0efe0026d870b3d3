//! Acceptance suite at the fixture point. Prints one line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use awdaha::forms::{
    constant_term_closed, verify_forms, FormKind, FormsOptions, Quadrature, QuadratureSettings,
};
use awdaha::operators::verify_relations;
use awdaha::polys::verify_polys;
use awdaha::report::{Residual, Status, VerificationReport};
use awdaha::transform::{verify_transform, TransformOptions};
use awdaha::{LaurentPoly, ParameterSet, Rational};

struct Criterion {
    id: usize,
    title: &'static str,
    ok: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Every named check must be present and pass outright.
fn named(rep: &VerificationReport, names: &[&str]) -> (bool, String) {
    let mut bad = Vec::new();
    let mut worst = 0f64;
    for n in names {
        match rep.get(n) {
            None => bad.push(format!("{n}: missing")),
            Some(c) if c.status != Status::Pass => bad.push(format!(
                "{n}: {} {}",
                c.status.as_str(),
                c.detail.clone().unwrap_or_default()
            )),
            Some(c) => {
                if let Residual::Value(r) = c.residual {
                    worst = worst.max(r);
                }
            }
        }
    }
    if bad.is_empty() {
        (
            true,
            format!("{} checks, worst residual {worst:.2e}", names.len()),
        )
    } else {
        (false, bad.join("; "))
    }
}

/// Every check whose name starts with one of `prefixes` must pass, and there
/// must be at least one.
fn prefixed(rep: &VerificationReport, prefixes: &[&str], exclude: &[&str]) -> (bool, String) {
    let names: Vec<&str> = rep
        .checks()
        .iter()
        .map(|c| c.name.as_str())
        .filter(|n| {
            prefixes.iter().any(|p| n.starts_with(p)) && !exclude.iter().any(|p| n.starts_with(p))
        })
        .collect();
    if names.is_empty() {
        return (false, "no checks ran".into());
    }
    named(rep, &names)
}

fn constant_term_low_precision() -> (bool, String) {
    let r = |n: i64, d: i64| Rational::from((n, d));
    let points = [
        ParameterSet::<Rational>::fixture(),
        ParameterSet::new(r(1, 2), r(99, 100), r(99, 100), r(1, 1), r(1, 1)).expect("valid point"),
    ];
    let settings = QuadratureSettings::for_precision(53);
    let one = LaurentPoly::constant(Rational::from(1));
    let mut worst = 0f64;
    for t in &points {
        let got = Quadrature::for_params(t, FormKind::Round, settings)
            .and_then(|q| q.pair_exact(&one, &one))
            .and_then(|v| {
                Ok((
                    v.value,
                    constant_term_closed(&t.abcd().to_mp(53), settings.product_tol)?,
                ))
            });
        match got {
            Ok((num, closed)) => worst = worst.max(num.rel_err(&closed)),
            Err(e) => return (false, format!("53 bits: {e}")),
        }
    }
    (worst <= 1e-10, format!("53 bits: worst {worst:.2e}"))
}

fn main() -> ExitCode {
    let t = ParameterSet::<Rational>::fixture();
    let settings = QuadratureSettings::for_precision(256);
    let wall = Instant::now();
    let mut out = Vec::new();

    let (hecke, hecke_time) = timed(|| verify_relations(&t, 10));
    let (ok, d) = prefixed(&hecke, &["hecke."], &[]);
    out.push(Criterion {
        id: 1,
        title: "Hecke relations on monomials |m| <= 10",
        ok: ok && hecke_time < Duration::from_secs(30),
        detail: format!("{d}, {:.1} s", hecke_time.as_secs_f64()),
    });

    let polys8 = verify_polys(&t, 8);
    let polys6 = verify_polys(&t, 6);

    let (ok, d) = named(&polys8, &["polys.eigen.Y"]);
    out.push(Criterion {
        id: 2,
        title: "Y P_m = gamma_m P_m for |m| <= 8",
        ok,
        detail: d,
    });

    let (ok, d) = prefixed(&polys8, &["polys.agreement."], &[]);
    out.push(Criterion {
        id: 3,
        title: "triangular, Rodrigues and series constructions agree for |m| <= 8",
        ok,
        detail: d,
    });

    let (ok, d) = prefixed(
        &polys6,
        &["polys."],
        &[
            "polys.eigen",
            "polys.agreement",
            "polys.duality",
            "polys.evaluation",
        ],
    );
    out.push(Criterion {
        id: 4,
        title: "structural polynomial identities for m <= 6",
        ok,
        detail: d,
    });

    let (ok, d) = named(&polys6, &["polys.duality.nonsym", "polys.duality.sym"]);
    out.push(Criterion {
        id: 5,
        title: "duality for |m|, |n| <= 6",
        ok,
        detail: d,
    });

    let (ok, d) = named(
        &polys8,
        &["polys.evaluation.nonsym", "polys.evaluation.sym"],
    );
    out.push(Criterion {
        id: 6,
        title: "evaluation closed forms for |m| <= 8",
        ok,
        detail: d,
    });

    let forms = verify_forms(&t, &FormsOptions::new(settings, 6));

    let (ok256, d256) = named(
        &forms,
        &["forms.constant_term", "forms.constant_term.near_degenerate"],
    );
    let ((ok53, d53), low_time) = timed(constant_term_low_precision);
    let ct_time: Duration = ["forms.constant_term", "forms.constant_term.near_degenerate"]
        .iter()
        .filter_map(|n| forms.get(n))
        .map(|c| c.elapsed)
        .sum::<Duration>()
        + low_time;
    out.push(Criterion {
        id: 7,
        title: "constant term against its closed form",
        ok: ok256 && ok53 && ct_time < Duration::from_secs(10),
        detail: format!("256 bits: {d256}; {d53}; {:.1} s", ct_time.as_secs_f64()),
    });

    let (ok, d) = prefixed(&forms, &["forms.biorthogonality", "forms.diagonal."], &[]);
    out.push(Criterion {
        id: 8,
        title: "bi-orthogonality and diagonal closed forms for |m|, |n| <= 6",
        ok,
        detail: d,
    });

    let (ok, d) = prefixed(&forms, &["forms.norm_ratio.", "forms.residue."], &[]);
    out.push(Criterion {
        id: 9,
        title: "norm ratios through residue weights",
        ok,
        detail: d,
    });

    let tr = verify_transform(&t, &TransformOptions::new(settings, 6));
    let (ok, d) = named(&tr, &["transform.round_trip", "transform.constant"]);
    out.push(Criterion {
        id: 10,
        title: "transform round trip and inversion constant",
        ok,
        detail: d,
    });

    let (ok, d) = named(&forms, &["forms.shift_ratio", "forms.grand_ratio"]);
    out.push(Criterion {
        id: 11,
        title: "norm recursions between quadratured values",
        ok,
        detail: d,
    });

    let (ok, d) = prefixed(&forms, &["forms.adjoint."], &[]);
    out.push(Criterion {
        id: 12,
        title: "adjointness on monomials |m| <= 5",
        ok,
        detail: d,
    });

    let total = wall.elapsed();
    let mut all = true;
    for c in &out {
        all &= c.ok;
        println!(
            "[{}] criterion {:>2}: {} ({})",
            if c.ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.detail
        );
    }
    let fast = total < Duration::from_secs(300);
    all &= fast;
    println!(
        "[{}] full suite wall clock {:.1} s",
        if fast { "PASS" } else { "FAIL" },
        total.as_secs_f64()
    );

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
