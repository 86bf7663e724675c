use std::collections::BTreeMap;

use orbiweyl_core::flow_complex::{
    build_differential, d_squared_identity, random_consistent_category, random_product, spectral_invariant,
    verify_d_squared, verify_subadditivity, FlowError, Generator, RandomCategoryOptions, SyntheticFlowCategory,
};
use orbiweyl_core::{int, rat, NovikovSeries};

fn opts(seed: u64) -> RandomCategoryOptions {
    RandomCategoryOptions { size: 2 + (seed as usize % 7), depth: seed as usize % 4, gamma_swap: seed % 7 == 3 }
}

#[test]
fn d_squared_over_200_seeds() {
    for seed in 0..200 {
        let cat = random_consistent_category(seed, opts(seed));
        let rep = verify_d_squared(&cat);
        assert!(rep.passed(), "seed {seed}: {rep:?}");
    }
}

#[test]
fn spectrality_and_shift() {
    let alpha = NovikovSeries::constant(rat(1, 3));
    for seed in 0..50 {
        let cat = random_consistent_category(seed, opts(seed));
        let c = build_differential(&cat, &alpha).unwrap();
        for x in cat.homology_cycles(&alpha).unwrap() {
            let value = spectral_invariant(&c, &x).unwrap().expect("homology class is nonzero");
            assert!(c.in_action_spectrum(&value), "seed {seed}");
            assert!(value <= c.level_of(&x).unwrap());
            for delta in [rat(5, 2), int(-3)] {
                let moved = spectral_invariant(&c.shifted(&delta), &x).unwrap().unwrap();
                assert_eq!(moved, &value + &delta);
            }
            let t = NovikovSeries::t_pow(int(2));
            let scaled: Vec<NovikovSeries> = x.iter().map(|xi| xi * &t).collect();
            assert_eq!(spectral_invariant(&c, &scaled).unwrap(), Some(&value - int(2)));
        }
        for b in cat.boundary_cycles(&alpha).unwrap() {
            assert_eq!(spectral_invariant(&c, &b).unwrap(), None);
        }
    }
}

#[test]
fn subadditivity_on_50_products() {
    let alpha = NovikovSeries::constant(rat(-1, 2));
    let (mut checked, mut nontrivial) = (0, 0);
    for seed in 0..50u64 {
        let cat = random_consistent_category(1000 + seed, RandomCategoryOptions { size: 3 + (seed as usize % 5), depth: 2, gamma_swap: false });
        let c = build_differential(&cat, &alpha).unwrap();
        let (right, table) = random_product(&c, 3, seed);
        let cycles = cat.homology_cycles(&alpha).unwrap();
        let mut classes = Vec::new();
        for x in &cycles {
            for j in 0..right.len() {
                let mut y = vec![NovikovSeries::zero(); right.len()];
                y[j] = NovikovSeries::one();
                classes.push((x.clone(), y));
            }
        }
        for sample in verify_subadditivity(&c, &right, &c, &table, &classes).unwrap() {
            assert!(sample.holds(), "seed {seed}: {sample:?}");
            checked += 1;
            nontrivial += usize::from(sample.product.is_some());
        }
    }
    assert!(checked > 0 && nontrivial * 2 > checked, "{nontrivial} of {checked}");
}

#[test]
fn broken_hand_table_reports_its_triple() {
    let gens: Vec<Generator> = (0..3)
        .map(|i| Generator { id: format!("p{}", i + 1), action: i, label: String::new(), gamma_orbit: None })
        .collect();
    let mut counts = BTreeMap::new();
    counts.insert((0, 0, 1, 0), int(1));
    counts.insert((0, 1, 2, 0), int(2));
    let cat = SyntheticFlowCategory::new(gens, 5, counts, Vec::new());
    let (p, q, k, _) = d_squared_identity(&cat).unwrap();
    assert_eq!((p, q, k), (0, 2, 0));
    assert!(!verify_d_squared(&cat).passed());
    assert!(matches!(build_differential(&cat, &NovikovSeries::zero()), Err(FlowError::InvariantViolation(_))));
}
