//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{
    constant_term_closed, diagonal_closed, verify_forms, DiagonalKind, FormKind, FormsOptions,
    Quadrature, QuadratureSettings,
};
use crate::laurent::LaurentPoly;
use crate::operators::verify_relations;
use crate::params::ParameterSet;
use crate::polys::{
    antisym_series, nonsym_rodrigues, nonsym_series, renormalize, sym_series, symmetrize,
    verify_polys, AWPolynomial, Family, Kind, Method, Sign,
};
use crate::report::VerificationReport;
use crate::scalar::{Backend, MpComplex, Rational, Scalar, DEFAULT_PRECISION, MIN_PRECISION};
use crate::transform::{verify_transform, SpectralFunction, Transform, TransformOptions};

const FIXTURE: &str = "1/2,3/5,2/3,5/7,3/4";

/// Smallest window of the Hecke relation suite.
const HECKE_WINDOW: i64 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "awdaha",
    version,
    about = "Askey-Wilson polynomials and the rank-one DAHA"
)]
struct Cli {
    /// Parameters p,k0,k1,u0,u1 as rationals.
    #[arg(long, global = true, default_value = FIXTURE)]
    params: String,
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Working precision of the float backend in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Quadrature tolerance; defaults to 2^(-3/4·precision).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long = "max-degree", global = true, default_value_t = 6)]
    max_degree: i64,
    #[arg(long, global = true)]
    json: bool,
    /// Include per-check elapsed times in reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Nonsym,
    Sym,
    Antisym,
    #[value(name = "E")]
    E,
    #[value(name = "Eplus")]
    Eplus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Triangular,
    Rodrigues,
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Hecke,
    Polys,
    Forms,
    Transform,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    Fwd,
    Inv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct one polynomial.
    Poly {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Triangular)]
        method: MethodArg,
    },
    /// Run identity checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Diagonal terms by closed form and by quadrature.
    Norms,
    /// Apply the transform or its inverse to a JSON input.
    Transform {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// The constant term (1, 1) by closed form and by quadrature.
    ConstantTerm,
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ParameterSet<Rational>,
    pub backend: Backend,
    pub precision: u32,
    pub tol: Option<f64>,
    pub max_degree: i64,
    pub json: bool,
    pub timings: bool,
}

impl RunConfig {
    fn from_cli(c: &Cli) -> Result<Self> {
        let params = ParameterSet::parse(&c.params)?;
        if c.precision < MIN_PRECISION {
            return Err(Error::InvalidParameter(format!(
                "precision must be at least {MIN_PRECISION} bits"
            )));
        }
        if let Some(t) = c.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter("tolerance must be positive".into()));
            }
        }
        if c.max_degree < 1 {
            return Err(Error::InvalidParameter(
                "max degree must be at least 1".into(),
            ));
        }
        Ok(RunConfig {
            params,
            backend: match c.backend {
                BackendArg::Exact => Backend::Exact,
                BackendArg::Float => Backend::Float,
            },
            precision: c.precision,
            tol: c.tol,
            max_degree: c.max_degree,
            json: c.json,
            timings: c.timings,
        })
    }

    pub fn settings(&self) -> QuadratureSettings {
        let s = QuadratureSettings::for_precision(self.precision);
        match self.tol {
            Some(t) => s.with_tol(t),
            None => s,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": self.params.to_compact(),
            "backend": self.backend,
            "precision": self.precision,
            "tol": self.settings().tol,
            "max_degree": self.max_degree,
        })
    }
}

/// Runs the selected suites.
pub fn run_suites(cfg: &RunConfig, suites: &[&str]) -> VerificationReport {
    let t = &cfg.params;
    let mut rep = VerificationReport::new();
    let window = cfg.max_degree.max(HECKE_WINDOW);
    for s in suites {
        let part = match (*s, cfg.backend) {
            ("hecke", Backend::Exact) => verify_relations(t, window),
            ("hecke", Backend::Float) => verify_relations(&t.to_mp(cfg.precision), window),
            ("polys", Backend::Exact) => verify_polys(t, cfg.max_degree),
            ("polys", Backend::Float) => verify_polys(&t.to_mp(cfg.precision), cfg.max_degree),
            ("forms", _) => verify_forms(t, &FormsOptions::new(cfg.settings(), cfg.max_degree)),
            ("transform", _) => {
                verify_transform(t, &TransformOptions::new(cfg.settings(), cfg.max_degree))
            }
            _ => continue,
        };
        rep.extend(part);
    }
    rep
}

fn build_poly<S: Scalar>(
    t: &ParameterSet<S>,
    kind: KindArg,
    m: i64,
    method: MethodArg,
) -> Result<AWPolynomial<S>> {
    let abs = m.abs();
    match (kind, method) {
        (KindArg::Nonsym, MethodArg::Triangular) => Ok(AWPolynomial {
            poly: Family::new(t.clone()).nonsym(m)?,
            kind: Kind::Nonsym,
            m,
            params: t.clone(),
            method: Method::Triangular,
        }),
        (KindArg::Nonsym, MethodArg::Rodrigues) => nonsym_rodrigues(t, m),
        (KindArg::Nonsym, MethodArg::Series) => nonsym_series(t, m),
        (KindArg::Sym, MethodArg::Series) => {
            if m < 0 {
                return Err(Error::InvalidParameter(format!(
                    "symmetric index {m} is negative"
                )));
            }
            Ok(AWPolynomial {
                poly: sym_series(&t.abcd(), m)?,
                kind: Kind::Sym,
                m,
                params: t.clone(),
                method: Method::Series,
            })
        }
        (KindArg::Sym, _) => {
            if m < 0 {
                return Err(Error::InvalidParameter(format!(
                    "symmetric index {m} is negative"
                )));
            }
            symmetrize(t, abs, Sign::Plus)
        }
        (KindArg::Antisym, MethodArg::Series) => antisym_series(t, m),
        (KindArg::Antisym, _) => {
            if m < 1 {
                return Err(Error::InvalidParameter(format!(
                    "anti-symmetric index must be positive, got {m}"
                )));
            }
            symmetrize(t, m, Sign::Minus)
        }
        (KindArg::E, _) => renormalize(t, m, false),
        (KindArg::Eplus, _) => renormalize(t, m, true),
    }
}

fn poly_output<S: Scalar>(p: &AWPolynomial<S>, json_out: bool) -> String {
    if json_out {
        p.to_json().to_string()
    } else {
        p.poly.to_text()
    }
}

fn norms(cfg: &RunConfig) -> Result<Value> {
    let t = &cfg.params;
    let s = cfg.settings();
    let ab = t.abcd().to_mp(cfg.precision);
    let angle = Quadrature::for_params(t, FormKind::Angle, s)?;
    let round = Quadrature::for_params(t, FormKind::Round, s)?;
    let fam = Family::new(t.clone());
    let inv = Family::new(t.inverse());
    let mut rows = Vec::new();
    for kind in DiagonalKind::ALL {
        for m in kind.min_m()..=cfg.max_degree {
            let num = match kind {
                DiagonalKind::Sym => {
                    let p = fam.sym(m)?;
                    round.pair_exact(&p, &p)?
                }
                DiagonalKind::NonsymPos => angle.pair_exact(&fam.nonsym(m)?, &inv.nonsym(m)?)?,
                DiagonalKind::NonsymNeg => angle.pair_exact(&fam.nonsym(-m)?, &inv.nonsym(-m)?)?,
                DiagonalKind::Antisym => angle.pair_exact(&fam.antisym(m)?, &inv.antisym(m)?)?,
            };
            let closed = diagonal_closed(&ab, m, kind, s.product_tol)?;
            rows.push(json!({
                "kind": kind.as_str(),
                "m": m,
                "closed": closed.to_json(),
                "quadrature": num.to_json(),
                "rel_err": num.value.rel_err(&closed),
            }));
        }
    }
    Ok(Value::Array(rows))
}

fn constant_term(cfg: &RunConfig) -> Result<Value> {
    let t = &cfg.params;
    let s = cfg.settings();
    let closed = constant_term_closed(&t.abcd().to_mp(cfg.precision), s.product_tol)?;
    let one = LaurentPoly::constant(Rational::from(1));
    let num = Quadrature::for_params(t, FormKind::Round, s)?.pair_exact(&one, &one)?;
    Ok(json!({
        "closed": closed.to_json(),
        "quadrature": num.to_json(),
        "rel_err": num.value.rel_err(&closed),
    }))
}

fn read_poly(v: &Value, text: &str, prec: u32) -> Result<LaurentPoly<MpComplex>> {
    if v.is_null() {
        return match LaurentPoly::<Rational>::parse_text(text, &()) {
            Ok(p) => Ok(p.to_mp(prec)),
            Err(_) => LaurentPoly::<MpComplex>::parse_text(text, &prec),
        };
    }
    match LaurentPoly::<Rational>::from_json(v, &()) {
        Ok(p) => Ok(p.to_mp(prec)),
        Err(_) => LaurentPoly::<MpComplex>::from_json(v, &prec),
    }
}

fn transform(cfg: &RunConfig, input: &std::path::Path, dir: Direction) -> Result<Value> {
    let text = std::fs::read_to_string(input)?;
    let v: Value = serde_json::from_str(&text).unwrap_or(Value::Null);
    match dir {
        Direction::Fwd => {
            let f = read_poly(&v, &text, cfg.precision)?;
            let tr = Transform::new(&cfg.params, cfg.settings())?;
            Ok(tr.forward(&f, cfg.max_degree)?.to_json())
        }
        Direction::Inv => {
            let g = SpectralFunction::from_json(&v, cfg.precision)?;
            let tr = Transform::new(&g.params, cfg.settings())?;
            Ok(tr.inverse(&g)?.to_json())
        }
    }
}

fn report_json(cfg: &RunConfig, suite: &str, rep: &VerificationReport) -> Value {
    let mut config = cfg.to_json();
    config["suite"] = json!(suite);
    json!({
        "schema": 1,
        "config": config,
        "checks": rep.checks_json(cfg.timings),
        "status": rep.status().as_str(),
    })
}

fn suite_names(s: Suite) -> (&'static str, Vec<&'static str>) {
    match s {
        Suite::Hecke => ("hecke", vec!["hecke"]),
        Suite::Polys => ("polys", vec!["polys"]),
        Suite::Forms => ("forms", vec!["forms"]),
        Suite::Transform => ("transform", vec!["transform"]),
        Suite::All => ("all", vec!["hecke", "polys", "forms", "transform"]),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code: 0 on success, 1 on failed checks or runtime
/// errors, 2 on bad arguments.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let emit = |out: &mut dyn Write, v: Value, text: String| {
        let _ = if cfg.json {
            writeln!(out, "{v}")
        } else {
            writeln!(out, "{text}")
        };
    };
    let result: Result<i32> = (|| match &cli.command {
        Command::Poly { kind, m, method } => {
            let line = match cfg.backend {
                Backend::Exact => {
                    poly_output(&build_poly(&cfg.params, *kind, *m, *method)?, cfg.json)
                }
                Backend::Float => poly_output(
                    &build_poly(&cfg.params.to_mp(cfg.precision), *kind, *m, *method)?,
                    cfg.json,
                ),
            };
            let _ = writeln!(out, "{line}");
            Ok(0)
        }
        Command::Verify { suite } => {
            let (name, list) = suite_names(*suite);
            let rep = run_suites(&cfg, &list);
            let text = rep.to_string();
            emit(out, report_json(&cfg, name, &rep), text);
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Command::Norms => {
            let v = norms(&cfg)?;
            let text = v
                .as_array()
                .into_iter()
                .flatten()
                .map(|r| {
                    format!(
                        "{:<11} m = {:>2}  rel_err = {:.3e}",
                        r["kind"].as_str().unwrap_or(""),
                        r["m"],
                        r["rel_err"].as_f64().unwrap_or(f64::NAN)
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(out, v, text);
            Ok(0)
        }
        Command::ConstantTerm => {
            let v = constant_term(&cfg)?;
            let text = format!(
                "closed     {}\nquadrature {}\nrel_err    {:.3e}",
                v["closed"],
                v["quadrature"]["value"],
                v["rel_err"].as_f64().unwrap_or(f64::NAN)
            );
            emit(out, v, text);
            Ok(0)
        }
        Command::Transform { input, direction } => {
            let v = transform(&cfg, input, *direction)?;
            emit(
                out,
                v.clone(),
                serde_json::to_string_pretty(&v).unwrap_or_default(),
            );
            Ok(0)
        }
    })();
    match result {
        Ok(code) => code,
        Err(e @ (Error::Parse(_) | Error::Io(_) | Error::InvalidParameter(_))) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("awdaha").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn constant_symmetric_polynomial() {
        let (code, out) = call(&["poly", "--kind", "sym", "--m", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1*x^0");
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(
            call(&["poly", "--kind", "sym", "--m", "0", "--params", "1,2"]).0,
            2
        );
    }

    #[test]
    fn negative_index_is_accepted() {
        let (code, out) = call(&[
            "poly", "--kind", "nonsym", "--m", "-1", "--method", "series",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("x^-1"));
    }
}
