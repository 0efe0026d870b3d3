use crate::error::{Error, Result};
use crate::params::Abcd;
use crate::qpoch::qpoch_inf;
use crate::scalar::{MpComplex, Scalar};

/// The four diagonal terms with closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalKind {
    /// `(P_m^+, P_m^+)`, `m ≥ 0`.
    Sym,
    /// `⟨P_m, P_m′⟩`, `m ≥ 0`.
    NonsymPos,
    /// `⟨P_{−m}, P_{−m}′⟩`, `m ≥ 1`.
    NonsymNeg,
    /// `⟨P_m^−, P_m^{−′}⟩`, `m ≥ 1`.
    Antisym,
}

impl DiagonalKind {
    pub const ALL: [DiagonalKind; 4] = [
        DiagonalKind::Sym,
        DiagonalKind::NonsymPos,
        DiagonalKind::NonsymNeg,
        DiagonalKind::Antisym,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DiagonalKind::Sym => "sym",
            DiagonalKind::NonsymPos => "nonsym_pos",
            DiagonalKind::NonsymNeg => "nonsym_neg",
            DiagonalKind::Antisym => "antisym",
        }
    }

    pub fn min_m(self) -> i64 {
        match self {
            DiagonalKind::Sym | DiagonalKind::NonsymPos => 0,
            _ => 1,
        }
    }
}

struct Products<'a> {
    ab: &'a Abcd<MpComplex>,
    tol: f64,
}

impl Products<'_> {
    fn qp(&self, n: i64) -> MpComplex {
        let q = &self.ab.q;
        q.powi(n).expect("q nonzero")
    }

    /// `Π (z_i; q)_∞`.
    fn inf(&self, zs: &[MpComplex]) -> Result<MpComplex> {
        let mut acc = MpComplex::one(self.ab.q.prec());
        for z in zs {
            acc = acc * &qpoch_inf(z, &self.ab.q, self.tol)?;
        }
        Ok(acc)
    }

    fn ratio(&self, num: &[MpComplex], den: &[MpComplex], what: &str) -> Result<MpComplex> {
        let d = self.inf(den)?;
        if d.is_zero() || d.abs_f64() < 1e-300 {
            return Err(Error::DegenerateParameters(format!(
                "{what}: a denominator factor vanishes"
            )));
        }
        Ok(self.inf(num)? / &d)
    }

    fn pairs(&self) -> [MpComplex; 6] {
        let Abcd { a, b, c, d, .. } = self.ab;
        [
            a.clone() * b,
            a.clone() * c,
            a.clone() * d,
            b.clone() * c,
            b.clone() * d,
            c.clone() * d,
        ]
    }

    fn abcd(&self) -> MpComplex {
        let Abcd { a, b, c, d, .. } = self.ab;
        a.clone() * b * c * d
    }
}

/// `(1, 1) = 2 (abcd; q)_∞ / (q, ab, ac, ad, bc, bd, cd; q)_∞`.
pub fn constant_term_closed(ab: &Abcd<MpComplex>, tol: f64) -> Result<MpComplex> {
    let pr = Products { ab, tol };
    let mut den = vec![ab.q.clone()];
    den.extend(pr.pairs());
    let two = MpComplex::from_f64(2.0, 0.0, ab.q.prec());
    Ok(two * &pr.ratio(&[pr.abcd()], &den, "constant term")?)
}

/// Closed-form diagonal term of the given kind at index `m`.
pub fn diagonal_closed(
    ab: &Abcd<MpComplex>,
    m: i64,
    kind: DiagonalKind,
    tol: f64,
) -> Result<MpComplex> {
    if m < kind.min_m() {
        return Err(Error::InvalidParameter(format!(
            "{} diagonal needs m ≥ {}, got {m}",
            kind.as_str(),
            kind.min_m()
        )));
    }
    let pr = Products { ab, tol };
    let [pab, pac, pad, pbc, pbd, pcd] = pr.pairs();
    let s = pr.abcd();
    let q = |n: i64| pr.qp(n);
    let two = MpComplex::from_f64(2.0, 0.0, ab.q.prec());
    match kind {
        DiagonalKind::Sym => {
            let num = [s.clone() * &q(2 * m - 1), s.clone() * &q(2 * m)];
            let den = [
                q(m + 1),
                pab * &q(m),
                pac * &q(m),
                pad * &q(m),
                pbc * &q(m),
                pbd * &q(m),
                pcd * &q(m),
                s * &q(m - 1),
            ];
            Ok(two * &pr.ratio(&num, &den, "symmetric diagonal")?)
        }
        DiagonalKind::NonsymPos => {
            let num = [s.clone() * &q(2 * m), s.clone() * &q(2 * m)];
            let den = [
                q(m + 1),
                pab * &q(m + 1),
                pac * &q(m),
                pad * &q(m),
                pbc * &q(m),
                pbd * &q(m),
                pcd * &q(m),
                s * &q(m),
            ];
            pr.ratio(&num, &den, "non-symmetric diagonal, m ≥ 0")
        }
        DiagonalKind::NonsymNeg => {
            let num = [s.clone() * &q(2 * m - 1), s.clone() * &q(2 * m - 1)];
            let den = [
                q(m),
                pab * &q(m),
                pac * &q(m),
                pad * &q(m),
                pbc * &q(m),
                pbd * &q(m),
                pcd * &q(m - 1),
                s * &q(m - 1),
            ];
            pr.ratio(&num, &den, "non-symmetric diagonal, m < 0")
        }
        DiagonalKind::Antisym => {
            let num = [s.clone() * &q(2 * m - 1), s.clone() * &q(2 * m)];
            let den = [
                q(m),
                pab.clone() * &q(m + 1),
                pac * &q(m),
                pad * &q(m),
                pbc * &q(m),
                pbd * &q(m),
                pcd * &q(m - 1),
                s * &q(m),
            ];
            let inv_ab = pab
                .checked_inv()
                .ok_or_else(|| Error::DegenerateParameters("ab = 0".into()))?;
            let pre = (pab - &MpComplex::one(ab.q.prec())) * &inv_ab;
            Ok(pre * &pr.ratio(&num, &den, "anti-symmetric diagonal")?)
        }
    }
}

/// `(1 − q^m)(1 − q^{m−1}cd) / ((1 − q^m ab)(1 − q^{m−1}abcd))`, the ratio
/// `(P_m^+, P_m^+)_{a,b,c,d} / (P_{m−1}^+, P_{m−1}^+)_{qa,qb,c,d}`.
pub fn shift_ratio_closed(ab: &Abcd<MpComplex>, m: i64) -> Result<MpComplex> {
    let pr = Products { ab, tol: 1.0 };
    let one = MpComplex::one(ab.q.prec());
    let [pab, _, _, _, _, pcd] = pr.pairs();
    let num = (one.clone() - &pr.qp(m)) * &(one.clone() - &(pcd * &pr.qp(m - 1)));
    let den = (one.clone() - &(pab * &pr.qp(m))) * &(one - &(pr.abcd() * &pr.qp(m - 1)));
    let inv = den
        .checked_inv()
        .ok_or_else(|| Error::DegenerateParameters("shift ratio denominator vanishes".into()))?;
    Ok(num * &inv)
}

/// `(P_t^+, P_t^+)_{a,b,c,d} / (1, 1)_{q^{2k}a, q^{2l}b, q^{2m}c, q^{2n}d}`
/// with `t = k + l + m + n`.
pub fn grand_ratio_closed(
    ab: &Abcd<MpComplex>,
    k: i64,
    l: i64,
    m: i64,
    n: i64,
    tol: f64,
) -> Result<MpComplex> {
    let pr = Products { ab, tol };
    let t = k + l + m + n;
    let q = |e: i64| pr.qp(e);
    let [pab, pac, pad, pbc, pbd, pcd] = pr.pairs();
    let s = pr.abcd();
    let num = [
        q(1),
        s.clone() * &q(2 * t - 1),
        pab.clone() * &q(2 * k + 2 * l),
        pac.clone() * &q(2 * k + 2 * m),
        pad.clone() * &q(2 * k + 2 * n),
        pbc.clone() * &q(2 * l + 2 * m),
        pbd.clone() * &q(2 * l + 2 * n),
        pcd.clone() * &q(2 * m + 2 * n),
    ];
    let den = [
        q(t + 1),
        s * &q(t - 1),
        pab * &q(t),
        pac * &q(t),
        pad * &q(t),
        pbc * &q(t),
        pbd * &q(t),
        pcd * &q(t),
    ];
    pr.ratio(&num, &den, "grand ratio")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterSet;

    fn fixture() -> Abcd<MpComplex> {
        ParameterSet::fixture().abcd().to_mp(256)
    }

    #[test]
    fn constant_term_is_permutation_invariant_and_the_zeroth_diagonal() {
        let ab = fixture();
        let tol = 1e-70;
        let c = constant_term_closed(&ab, tol).unwrap();
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
            let cp = constant_term_closed(&ab.permuted(perm), tol).unwrap();
            assert!(c.rel_err(&cp) < 1e-60);
        }
        let d0 = diagonal_closed(&ab, 0, DiagonalKind::Sym, tol).unwrap();
        assert!(c.rel_err(&d0) < 1e-60);
    }

    #[test]
    fn index_ranges_are_enforced() {
        let ab = fixture();
        assert!(diagonal_closed(&ab, 0, DiagonalKind::Antisym, 1e-30).is_err());
        assert!(diagonal_closed(&ab, 0, DiagonalKind::NonsymNeg, 1e-30).is_err());
    }

    #[test]
    fn grand_ratio_is_one_at_the_origin() {
        let ab = fixture();
        let r = grand_ratio_closed(&ab, 0, 0, 0, 0, 1e-70).unwrap();
        assert!(r.rel_err(&MpComplex::one(256)) < 1e-60);
    }
}
