use num_traits::{Signed, Zero};
use orbiweyl_core::quasimorphism::{
    closure_expression, commutator_bound_check, commutator_expression, defect, eq16_bound_check, multiply_out,
    random_functions, FiniteGroupTable, DEFAULT_DEPTH_CAP,
};
use orbiweyl_core::{int, rat, Rational};
use proptest::prelude::*;

#[test]
fn a5_bounds_for_100_functions() {
    let g = FiniteGroupTable::a5();
    let three = g.names().iter().position(|n| n == "(1 2 3)").unwrap();
    let closure: Vec<_> = (0..g.order()).map(|x| closure_expression(&g, &[three], x, DEFAULT_DEPTH_CAP).unwrap()).collect();
    let commutators: Vec<_> = (0..g.order()).map(|x| commutator_expression(&g, x, DEFAULT_DEPTH_CAP).unwrap()).collect();
    for (x, e) in closure.iter().enumerate() {
        assert_eq!(multiply_out(&g, e.iter().map(|c| c.value(&g))), x);
    }
    for (x, e) in commutators.iter().enumerate() {
        assert_eq!(multiply_out(&g, e.iter().map(|&(a, b)| g.commutator(a, b))), x);
        assert!(e.len() <= 1);
    }
    for mu in random_functions(&g, 100, 2024) {
        let d = defect(&g, &mu).unwrap();
        assert!(mu[g.identity()].abs() <= d);
        for x in 0..g.order() {
            assert!(eq16_bound_check(&g, &mu, &closure[x], x).unwrap());
            assert!(commutator_bound_check(&g, &mu, x, &commutators[x]).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn defect_functional_properties(n in 2usize..9, values in prop::collection::vec((-9i64..=9, 1i64..=4), 8), c in (-5i64..=5, 1i64..=3)) {
        let g = FiniteGroupTable::cyclic(n);
        let mu: Vec<Rational> = values.iter().take(n).map(|&(a, b)| rat(a, b)).collect();
        let c = rat(c.0, c.1);
        let d = defect(&g, &mu).unwrap();
        prop_assert!(mu[g.identity()].abs() <= d);
        let neg: Vec<Rational> = mu.iter().map(|x| -x).collect();
        prop_assert_eq!(defect(&g, &neg).unwrap(), d.clone());
        let scaled: Vec<Rational> = mu.iter().map(|x| x * &c).collect();
        prop_assert_eq!(defect(&g, &scaled).unwrap(), &d * c.abs());
        // the only homomorphism to ℚ is zero, and adding it changes nothing
        let linear: Vec<Rational> = (0..n).map(|i| &c * int(i as i64)).collect();
        prop_assert_eq!(defect(&g, &linear).unwrap().is_zero(), c.is_zero());
        let zero = vec![int(0); n];
        let plus: Vec<Rational> = mu.iter().zip(&zero).map(|(a, b)| a + b).collect();
        prop_assert_eq!(defect(&g, &plus).unwrap(), d);
    }
}
