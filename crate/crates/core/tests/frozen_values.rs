//! Values fixed by independent computations at the fixture point.

use awdaha::forms::{constant_term_closed, FormKind, Quadrature, QuadratureSettings};
use awdaha::laurent::weyl_denominator;
use awdaha::operators::{t0, t1};
use awdaha::params::check_genericity;
use awdaha::polys::Family;
use awdaha::{LaurentPoly, MpComplex, ParameterSet, Rational};
use rug::Float;

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn fixture() -> ParameterSet<Rational> {
    ParameterSet::fixture()
}

#[test]
fn fixture_is_generic_up_to_fifty() {
    assert!(check_genericity(&fixture(), 50).is_empty());
}

#[test]
fn weyl_denominator_at_the_fixture() {
    let want = LaurentPoly::from_terms([(1, r(1, 1)), (0, r(-7, 8)), (-1, r(-9, 4))]);
    assert_eq!(weyl_denominator(&fixture()), want);
}

#[test]
fn generators_on_x() {
    let t = fixture();
    let x = LaurentPoly::monomial(1, r(1, 1));
    let want1 = LaurentPoly::from_terms([(-1, r(3, 2)), (0, r(7, 12))]);
    assert_eq!(t1(&x, &t).unwrap(), want1);
    let want0 = LaurentPoly::from_terms([(-1, r(3, 20)), (0, r(-12, 35)), (1, r(-16, 15))]);
    assert_eq!(t0(&x, &t).unwrap(), want0);
}

// Oracle: the monic three-term recurrence of the symmetric family.
#[test]
fn low_degree_symmetric_polynomials() {
    let fam = Family::new(fixture());
    let p1 = LaurentPoly::from_terms([(1, r(1, 1)), (0, r(9085, 12096)), (-1, r(1, 1))]);
    assert_eq!(fam.sym(1).unwrap(), p1);
    let p2 = LaurentPoly::from_terms([
        (2, r(1, 1)),
        (1, r(157805, 201096)),
        (0, r(223972403, 228042864)),
        (-1, r(157805, 201096)),
        (-2, r(1, 1)),
    ]);
    assert_eq!(fam.sym(2).unwrap(), p2);
}

// Oracle: 50-digit adaptive quadrature of the weight over the circle.
#[test]
fn constant_term_value() {
    let prec = 256;
    let want = MpComplex::real(Float::with_val(
        prec,
        Float::parse("1.890392203699888470714355757886530579854936282785").unwrap(),
    ));
    let t = fixture();
    let s = QuadratureSettings::for_precision(prec);
    let closed = constant_term_closed(&t.abcd().to_mp(prec), s.product_tol).unwrap();
    assert!(closed.rel_err(&want) < 1e-45, "{closed}");
    let one = LaurentPoly::constant(r(1, 1));
    let quad = Quadrature::for_params(&t, FormKind::Round, s)
        .unwrap()
        .pair_exact(&one, &one)
        .unwrap();
    assert!(quad.value.rel_err(&want) < 1e-45);
}
