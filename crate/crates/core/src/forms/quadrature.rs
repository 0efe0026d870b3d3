use std::sync::Mutex;

use rayon::prelude::*;
use rug::Float;

use super::weight::{delta_cancelled, weight, CircleWeight, WeightVariant};
use super::{FormValue, QuadratureSettings};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::{Abcd, ParameterSet};
use crate::scalar::{MpComplex, Scalar};

/// Which bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// `⟨f, g⟩`, weight `Δ`.
    Angle,
    /// `(f, g)`, weight `Δ₊`.
    Round,
}

/// Trapezoid data at `N` equispaced nodes on the unit circle.
struct Level {
    nodes: Vec<MpComplex>,
    weights: Vec<MpComplex>,
    mean_abs: f64,
    /// `μ_k = N^{-1} Σ_j x_j^k W(x_j)` for `|k| ≤ kmax`, stored at `k + kmax`.
    moments: Vec<MpComplex>,
    kmax: i64,
}

impl Level {
    fn moment(&self, k: i64) -> &MpComplex {
        &self.moments[(k + self.kmax) as usize]
    }

    fn ensure_moments(&mut self, kmax: i64, prec: u32) {
        if kmax <= self.kmax && !self.moments.is_empty() {
            return;
        }
        let n = self.nodes.len() as i64;
        let inv_n = Float::with_val(prec, 1) / Float::with_val(prec, n);
        self.moments = (-kmax..=kmax)
            .into_par_iter()
            .map(|k| {
                let mut acc = MpComplex::zero(prec);
                for (j, w) in self.weights.iter().enumerate() {
                    let idx = ((j as i64 * k).rem_euclid(n)) as usize;
                    acc = acc + &(self.nodes[idx].clone() * w);
                }
                acc.scale_f(&inv_n)
            })
            .collect();
        self.kmax = kmax;
    }
}

/// A reusable trapezoid rule for one bilinear form at one parameter point.
///
/// Levels nest: level `L` has `n0·2^L` nodes and reuses every weight value
/// of level `L − 1`.
pub struct Quadrature {
    abcd: Abcd<MpComplex>,
    kind: FormKind,
    settings: QuadratureSettings,
    fast: Option<CircleWeight>,
    levels: Mutex<Vec<Level>>,
}

/// Checks that the unit circle separates the poles `e q^k` from `e^{-1} q^{-k}`.
fn check_regime(ab: &Abcd<MpComplex>) -> Result<()> {
    let q = &ab.q;
    let qf = q.re.to_f64();
    if !q.is_real() || !(qf > 0.0 && qf < 1.0) {
        return Err(Error::ContourUnsupported(format!(
            "q = {q} is not in (0, 1)"
        )));
    }
    for (name, e) in ["a", "b", "c", "d"].iter().zip(ab.as_array()) {
        if !(e.abs_f64() < 1.0) {
            return Err(Error::ContourUnsupported(format!(
                "|{name}| = {} is not below 1",
                e.abs_f64()
            )));
        }
    }
    Ok(())
}

impl Quadrature {
    pub fn new(
        abcd: &Abcd<MpComplex>,
        kind: FormKind,
        settings: QuadratureSettings,
    ) -> Result<Self> {
        settings.validate()?;
        let abcd = Abcd::new(
            abcd.a.to_mp(settings.prec),
            abcd.b.to_mp(settings.prec),
            abcd.c.to_mp(settings.prec),
            abcd.d.to_mp(settings.prec),
            abcd.q.to_mp(settings.prec),
        );
        check_regime(&abcd)?;
        let fast = CircleWeight::new(&abcd, settings.product_tol);
        Ok(Quadrature {
            abcd,
            kind,
            settings,
            fast,
            levels: Mutex::new(Vec::new()),
        })
    }

    pub fn for_params<S: Scalar>(
        t: &ParameterSet<S>,
        kind: FormKind,
        settings: QuadratureSettings,
    ) -> Result<Self> {
        Self::new(&t.abcd().to_mp(settings.prec), kind, settings)
    }

    pub fn settings(&self) -> &QuadratureSettings {
        &self.settings
    }

    pub fn abcd(&self) -> &Abcd<MpComplex> {
        &self.abcd
    }

    fn weight_at(&self, x: &MpComplex) -> Result<MpComplex> {
        let tol = self.settings.product_tol;
        if let Some(fast) = &self.fast {
            let (plus, reduced) = fast.eval(x);
            return Ok(match self.kind {
                FormKind::Round => MpComplex::real(plus),
                FormKind::Angle => {
                    // Δ = (1 − a/x)(1 − b/x)(1 − x²)·reduced
                    let p = self.settings.prec;
                    let one = MpComplex::one(p);
                    let xi = x.conj();
                    let f = (one.clone() - &(self.abcd.a.clone() * &xi))
                        * &(one.clone() - &(self.abcd.b.clone() * &xi))
                        * &(one - &(x.clone() * x));
                    f.scale_f(&reduced)
                }
            });
        }
        match self.kind {
            FormKind::Round => weight(&self.abcd, x, WeightVariant::DeltaPlus, tol),
            FormKind::Angle => delta_cancelled(&self.abcd, x, tol),
        }
    }

    fn build_level(&self, levels: &mut Vec<Level>, l: usize) -> Result<()> {
        let p = self.settings.prec;
        while levels.len() <= l {
            let idx = levels.len();
            let n = self.settings.n0 << idx;
            let (nodes, weights) = if idx == 0 {
                let nodes: Vec<MpComplex> = (0..n)
                    .map(|j| MpComplex::root_of_unity(j as i64, n as i64, p))
                    .collect();
                let weights = nodes
                    .par_iter()
                    .map(|x| self.weight_at(x))
                    .collect::<Result<Vec<_>>>()?;
                (nodes, weights)
            } else {
                let prev = &levels[idx - 1];
                let odd: Vec<(MpComplex, MpComplex)> = (0..n / 2)
                    .into_par_iter()
                    .map(|i| {
                        let x = MpComplex::root_of_unity(2 * i as i64 + 1, n as i64, p);
                        let w = self.weight_at(&x)?;
                        Ok((x, w))
                    })
                    .collect::<Result<_>>()?;
                let mut nodes = Vec::with_capacity(n);
                let mut weights = Vec::with_capacity(n);
                for (i, (x, w)) in odd.into_iter().enumerate() {
                    nodes.push(prev.nodes[i].clone());
                    weights.push(prev.weights[i].clone());
                    nodes.push(x);
                    weights.push(w);
                }
                (nodes, weights)
            };
            let mean_abs = weights.iter().map(|w| w.abs_f64()).sum::<f64>() / n as f64;
            levels.push(Level {
                nodes,
                weights,
                mean_abs,
                moments: Vec::new(),
                kmax: 0,
            });
        }
        Ok(())
    }

    /// `μ_k` at level `l` for `|k| ≤ kmax`, with the mean of `|W|`.
    fn with_level<R>(&self, l: usize, kmax: i64, f: impl FnOnce(&Level) -> R) -> Result<R> {
        let mut levels = self.levels.lock().expect("poisoned");
        self.build_level(&mut levels, l)?;
        levels[l].ensure_moments(kmax, self.settings.prec);
        Ok(f(&levels[l]))
    }

    /// The form of `f` and `g`, i.e. `N^{-1} Σ_j f(x_j) g(x_j^{-1}) W(x_j)`,
    /// doubled until consecutive levels agree.
    pub fn pair(
        &self,
        f: &LaurentPoly<MpComplex>,
        g: &LaurentPoly<MpComplex>,
    ) -> Result<FormValue> {
        let p = self.settings.prec;
        if f.is_zero() || g.is_zero() {
            return Ok(FormValue {
                value: MpComplex::zero(p),
                err: 0.0,
                nodes: 0,
            });
        }
        let span = |h: &LaurentPoly<MpComplex>| {
            h.min_exp()
                .unwrap_or(0)
                .abs()
                .max(h.max_exp().unwrap_or(0).abs())
        };
        let kmax = span(f) + span(g);
        let l1 = |h: &LaurentPoly<MpComplex>| h.terms().map(|(_, c)| c.abs_f64()).sum::<f64>();
        let size = l1(f) * l1(g);
        let mut prev: Option<MpComplex> = None;
        for l in 0..=self.settings.max_doublings as usize {
            let (s, mean_abs, n) = self.with_level(l, kmax, |lev| {
                let mut s = MpComplex::zero(p);
                for (a, fa) in f.terms() {
                    for (b, gb) in g.terms() {
                        s = s + &(fa.clone() * gb * lev.moment(a - b));
                    }
                }
                (s, lev.mean_abs, lev.nodes.len())
            })?;
            if let Some(prev) = prev {
                let err = (s.clone() - &prev).abs_f64();
                if n / 2 > 2 * kmax as usize && err <= self.settings.tol * size * mean_abs {
                    return Ok(FormValue {
                        value: s,
                        err,
                        nodes: n,
                    });
                }
            }
            prev = Some(s);
        }
        Err(Error::QuadratureNotConverged(format!(
            "no agreement after {} doublings from {} nodes",
            self.settings.max_doublings, self.settings.n0
        )))
    }

    /// [`Quadrature::pair`] on exactly built polynomials.
    pub fn pair_exact<S: Scalar>(
        &self,
        f: &LaurentPoly<S>,
        g: &LaurentPoly<S>,
    ) -> Result<FormValue> {
        let p = self.settings.prec;
        self.pair(&f.to_mp(p), &g.to_mp(p))
    }
}

/// One-shot evaluation of `⟨f, g⟩` or `(f, g)` at `t`.
pub fn pair<S: Scalar>(
    f: &LaurentPoly<S>,
    g: &LaurentPoly<S>,
    t: &ParameterSet<S>,
    kind: FormKind,
    settings: QuadratureSettings,
) -> Result<FormValue> {
    Quadrature::for_params(t, kind, settings)?.pair_exact(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn out_of_regime_parameters_are_rejected() {
        // k0 = 3 puts |d| above one.
        let r = |n: i64, d: i64| Rational::from((n, d));
        let t = ParameterSet::new(r(1, 2), r(3, 1), r(2, 3), r(5, 7), r(3, 4)).unwrap();
        let e = Quadrature::for_params(&t, FormKind::Round, QuadratureSettings::default())
            .err()
            .unwrap();
        assert!(matches!(e, Error::ContourUnsupported(_)));
    }

    #[test]
    fn symmetric_restriction_of_the_angle_form() {
        let t = ParameterSet::<Rational>::fixture();
        let s = QuadratureSettings::for_precision(128);
        let angle = Quadrature::for_params(&t, FormKind::Angle, s).unwrap();
        let round = Quadrature::for_params(&t, FormKind::Round, s).unwrap();
        let r = |n: i64| Rational::from(n);
        let f = LaurentPoly::from_terms([(-1, r(1)), (1, r(1))]);
        let g = LaurentPoly::from_terms([(-2, r(1)), (0, r(3)), (2, r(1))]);
        let lhs = angle.pair_exact(&f, &g).unwrap().value;
        let half = (Rational::from(1) - t.a().clone() * t.b()) / Rational::from(2);
        let rhs =
            round.pair_exact(&f, &g).unwrap().value * &MpComplex::from_rational_prec(&half, 128);
        assert!(lhs.rel_err(&rhs) < 1e-30, "{lhs} vs {rhs}");
    }
}
