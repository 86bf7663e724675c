use orbiweyl_core::orbifold_cohomology::{age, age_from_weights, conjugacy_classes, cr_betti_table_p1, rotation_weights, sectors};
use orbiweyl_core::quantum_algebra::{
    analyze_symmetric_p1, idempotent_decomposition, qh_p1, summand_rank, tensor_power, AlgebraElement,
};
use orbiweyl_core::{int, rat, NovikovSeries, Valuation};

fn sum(elems: &[AlgebraElement], dim: usize) -> AlgebraElement {
    elems.iter().fold(AlgebraElement::zero(dim), |acc, e| acc.add(e))
}

#[test]
fn decompositions_are_complete_and_orthogonal() {
    let working = int(24);
    for omega in [int(1), int(2), rat(1, 2)] {
        for k in 1..=4 {
            let a = analyze_symmetric_p1(k, &omega, &working).unwrap();
            let alg = &a.algebra.algebra;
            let es = &a.idempotents;
            assert_eq!(es.len(), k + 1);
            assert!(sum(es, alg.dim()).agrees_with(alg.unit()), "omega={omega} k={k}");
            for (i, e) in es.iter().enumerate() {
                assert!(alg.mul(e, e).agrees_with(e));
                assert_eq!(summand_rank(alg, e, &working).unwrap(), 1);
                for f in &es[i + 1..] {
                    assert!(alg.mul(e, f).agrees_with(&AlgebraElement::zero(alg.dim())));
                }
            }
        }
    }
}

#[test]
fn idempotent_valuations_scale_with_omega() {
    let working = int(32);
    for k in 1..=4 {
        let one = analyze_symmetric_p1(k, &int(1), &working).unwrap();
        let two = analyze_symmetric_p1(k, &int(2), &working).unwrap();
        for (v1, v2) in one.valuations.iter().zip(&two.valuations) {
            let (Valuation::Finite(a), Valuation::Finite(b)) = (v1, v2) else { panic!("zero idempotent") };
            assert_eq!(a * int(2), *b);
            assert_eq!(*a, rat(-(k as i64), 2));
        }
    }
}

#[test]
fn full_tensor_power_splits_into_points() {
    let working = int(12);
    let a = tensor_power(&qh_p1(&int(1)), 2, 64).unwrap();
    let es = idempotent_decomposition(&a, &working).unwrap();
    assert_eq!(es.len(), 4);
    for e in &es {
        assert!(a.mul(e, e).agrees_with(e));
    }
    assert!(sum(&es, a.dim()).agrees_with(a.unit()));
    let constant = AlgebraElement::new(a.unit().coords().iter().map(|c| c * &NovikovSeries::constant(int(3))).collect());
    assert!(a.mul(&constant, a.unit()).agrees_with(&constant));
}

/// `Π_m (1 − x^m)^{−2}` up to `x^n`.
fn partition_pair_counts(n: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; n + 1];
    coeffs[0] = 1;
    for m in 1..=n {
        for _ in 0..2 {
            for i in m..=n {
                coeffs[i] += coeffs[i - m];
            }
        }
    }
    coeffs
}

#[test]
fn chen_ruan_ranks_match_generating_function() {
    let oracle = partition_pair_counts(12);
    for k in 1..=12 {
        let table = cr_betti_table_p1(k);
        assert_eq!(table.total_rank(), oracle[k], "k={k}");
        assert!(table.all_integral());
    }
}

#[test]
fn ages_match_rotation_weights() {
    for k in 1..=12 {
        for n in 1..=3 {
            for lambda in conjugacy_classes(k) {
                assert_eq!(age(&lambda, n), age_from_weights(&rotation_weights(&lambda, n)));
            }
            assert_eq!(sectors(k, n).len(), conjugacy_classes(k).len());
        }
    }
}
