use awdaha::laurent::WeylElement;
use awdaha::operators::{t0, t0_inv, t1, t1_inv};
use awdaha::qpoch::qpoch;
use awdaha::{LaurentPoly, ParameterSet, Rational, Scalar};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rational::from((n, d)))
}

fn poly() -> impl Strategy<Value = LaurentPoly<Rational>> {
    prop::collection::vec((-6i64..=6, rat()), 0..6).prop_map(LaurentPoly::from_terms)
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly<Rational>> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn fixture() -> ParameterSet<Rational> {
    ParameterSet::fixture()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_division_undoes_multiplication(f in poly(), g in nonzero_poly()) {
        let prod = &f * &g;
        prop_assert_eq!(prod.exact_div(&g).unwrap(), f);
    }

    #[test]
    fn reflections_are_involutions(f in poly()) {
        let q = fixture().q().clone();
        prop_assert_eq!(f.s1().s1(), f.clone());
        prop_assert_eq!(f.s0(&q).s0(&q), f.clone());
        let there = f.act_weyl(WeylElement::Tau(2), &q);
        prop_assert_eq!(there.act_weyl(WeylElement::Tau(-2), &q), f);
    }

    #[test]
    fn translation_is_the_product_of_the_reflections(f in poly()) {
        let q = fixture().q().clone();
        prop_assert_eq!(f.s1().s0(&q), f.act_weyl(WeylElement::Tau(-1), &q));
    }

    #[test]
    fn finite_qpochhammer_recurrence(z in rat(), n in 0u64..8) {
        let q = Rational::from((1, 3));
        let next = qpoch(&z, &q, n + 1);
        let qn = q.powi(n as i64).unwrap();
        let step = qpoch(&z, &q, n) * (Rational::from(1) - z * qn);
        prop_assert_eq!(next, step);
    }

    #[test]
    fn spectrum_of_the_inverse_point_is_reciprocal(m in -12i64..=12) {
        let t = fixture();
        prop_assert_eq!(t.gamma(m) * t.inverse().gamma(m), Rational::from(1));
        prop_assert_eq!(t.gamma(m), t.dual().xval(m));
    }

    #[test]
    fn hecke_generators_are_invertible(f in poly()) {
        let t = fixture();
        prop_assert_eq!(t1_inv(&t1(&f, &t).unwrap(), &t).unwrap(), f.clone());
        prop_assert_eq!(t0(&t0_inv(&f, &t).unwrap(), &t).unwrap(), f);
    }

    #[test]
    fn t1_satisfies_its_quadratic_relation(f in poly()) {
        let t = fixture();
        let k1 = t.k1().clone();
        let tf = t1(&f, &t).unwrap();
        // (T1 − k1)(T1 + k1⁻¹) = T1² − (k1 − k1⁻¹)T1 − 1
        let lhs = t1(&tf, &t).unwrap();
        let c = k1.clone() - Rational::from(1) / k1;
        let rhs = &tf.scale(&c) + &f;
        prop_assert_eq!(lhs, rhs);
    }
}
