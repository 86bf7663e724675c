use orbiweyl_core::novikov::parse;
use orbiweyl_core::{int, rat, NovikovSeries, Rational, Valuation};
use proptest::prelude::*;

fn series() -> impl Strategy<Value = NovikovSeries> {
    prop::collection::vec(((-6i64..=12, 1i64..=3), (-5i64..=5, 1i64..=3)), 0..5).prop_map(|terms| {
        NovikovSeries::from_terms(terms.into_iter().map(|((en, ed), (cn, cd))| (rat(en, ed), rat(cn, cd))), None)
    })
}

fn nonzero_series() -> impl Strategy<Value = NovikovSeries> {
    series().prop_filter("nonzero", |s| !s.is_zero())
}

proptest! {
    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, NovikovSeries::zero());
        prop_assert_eq!(&a * &NovikovSeries::one(), a.clone());
    }

    #[test]
    fn valuation_is_additive(a in nonzero_series(), b in nonzero_series()) {
        prop_assert_eq!((&a * &b).val(), a.val().plus(&b.val()));
        let sum = &a + &b;
        if let (Valuation::Finite(vs), Valuation::Finite(va), Valuation::Finite(vb)) = (sum.val(), a.val(), b.val()) {
            prop_assert!(vs >= va.min(vb));
        }
    }

    #[test]
    fn inverse_multiplies_back(a in nonzero_series(), w in 7i64..14) {
        let working = int(w);
        let inv = a.invert_to(&working).unwrap();
        prop_assert!((&a * &inv).agrees_with(&NovikovSeries::one()));
        if let Valuation::Finite(v) = a.val() {
            prop_assert_eq!(inv.val(), Valuation::Finite(-v));
        }
    }

    #[test]
    fn truncation_commutes_with_products(a in series(), b in series(), t in 0i64..10) {
        let t = int(t);
        let lhs = (&a.truncate(&t) * &b.truncate(&t)).truncate(&(&t + int(-6)));
        let rhs = (&a * &b).truncate(&(&t + int(-6)));
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn display_parse_round_trip(a in series(), trunc in prop::option::of(0i64..20)) {
        let a = match trunc { Some(t) => a.truncate(&int(t)), None => a };
        let text = a.to_string();
        prop_assert_eq!(parse(&text).unwrap(), a);
    }

    #[test]
    fn square_roots_square_back(n in 1i64..6, d in 1i64..6, e in -4i64..4, tail in series()) {
        let lead = NovikovSeries::monomial(rat(n * n, d * d), int(2 * e));
        let s = &lead + &tail.shift(&int(2 * e + 20)).truncate(&int(2 * e + 30));
        let s = if s.is_exact() { s.truncate(&int(2 * e + 30)) } else { s };
        let r = s.sqrt().unwrap();
        prop_assert!((&r * &r).agrees_with(&s));
        prop_assert_eq!(r.leading_coefficient().cloned(), Some(rat(n, d)));
    }
}

#[test]
fn shift_and_scale_are_module_maps() {
    let a: NovikovSeries = "2 - 1/3*T^(1/2) + O(T^(4))".parse().unwrap();
    let q: Rational = rat(-3, 2);
    assert_eq!(a.shift(&int(1)), &a * &NovikovSeries::t_pow(int(1)));
    assert_eq!(a.scale(&q), &a * &NovikovSeries::constant(q));
}
