use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use orbiweyl_core::capped_orbits::{
    classify_orbits, energy_identity, integralize, minkowski_sum, parity, recap, spec_k, FormalCappedOrbit, Gluing,
    LedgerError, SpectrumTable, SphereClass,
};
use orbiweyl_core::{int, rat, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

fn random_orbit(rng: &mut ChaCha8Rng) -> FormalCappedOrbit {
    FormalCappedOrbit::new("x", random_rat(rng), random_rat(rng), rng.gen_range(0..3), int(rng.gen_range(-4..=4)))
}

fn random_sphere(rng: &mut ChaCha8Rng) -> SphereClass {
    SphereClass::new(random_rat(rng), int(rng.gen_range(-2..=2)), rng.gen_range(0..3))
}

#[test]
fn recap_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let c = random_orbit(&mut rng);
        let s = random_sphere(&mut rng);
        let v = rat(rng.gen_range(1..=3), 4);
        let gluing = if s.orb_points > 0 && c.cap_orb_points > 0 && rng.gen_bool(0.5) { Gluing::Orbifold } else { Gluing::Smooth };
        let ages = (gluing == Gluing::Orbifold).then(|| (rat(1, 2), rat(1, 2)));
        let mult = rng.gen_range(1..=3);
        let there = recap(&c, mult, &s, gluing, ages.clone()).unwrap();
        let back = recap(&there, -mult, &s, gluing, ages).unwrap();
        assert_eq!(back.action(&v), c.action(&v));
        assert_eq!(back.cz(), c.cz());
        assert_eq!(parity(&there), parity(&c));
    }
}

#[test]
fn recap_shifts_on_100_ledgers() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let c = random_orbit(&mut rng);
        let s = random_sphere(&mut rng);
        let v = rat(rng.gen_range(1..=5), 6);
        let k = int(s.orb_points as i64);
        let smooth = recap(&c, 1, &s, Gluing::Smooth, None).unwrap();
        assert_eq!(smooth.action(&v), c.action(&v) - &s.area - &k * &v);
        assert_eq!(smooth.cz(), c.cz() + &s.c1 * int(2));
        if s.orb_points > 0 && c.cap_orb_points > 0 {
            let orb = recap(&c, 1, &s, Gluing::Orbifold, None).unwrap();
            assert_eq!(orb.action(&v), c.action(&v) - &s.area - (k - int(2)) * &v);
        }
    }
}

#[test]
fn energy_identity_on_recapped_ledgers() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let c = random_orbit(&mut rng);
        let s = random_sphere(&mut rng);
        let v = rat(1, rng.gen_range(2..=5));
        let r = recap(&c, 1, &s, Gluing::Smooth, None).unwrap();
        assert!(energy_identity(&c, &r, &s.area, s.orb_points as i64, &v));
        assert!(!energy_identity(&c, &r, &(&s.area + rat(1, 7)), s.orb_points as i64, &v));
    }
}

/// Union over ordered compositions of `k`.
fn spec_by_compositions(table: &SpectrumTable, k: usize) -> BTreeSet<Rational> {
    if k == 0 {
        return BTreeSet::from([int(0)]);
    }
    let mut out = BTreeSet::new();
    for first in 1..=k {
        out.extend(minkowski_sum(&table[&first], &spec_by_compositions(table, k - first)));
    }
    out
}

#[test]
fn spec_k_matches_compositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..10 {
        let table: SpectrumTable = (1..=6).map(|j| (j, (0..5).map(|_| random_rat(&mut rng)).collect())).collect();
        for k in 1..=6 {
            assert_eq!(spec_k(&table, k).unwrap(), spec_by_compositions(&table, k), "k={k}");
        }
    }
    let partial: SpectrumTable = BTreeMap::from([(1, BTreeSet::from([int(0)]))]);
    assert_eq!(spec_k(&partial, 2), Err(LedgerError::MissingTableEntry(2)));
}

#[test]
fn integralize_preserves_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let actions: Vec<Rational> = (0..6).map(|_| random_rat(&mut rng)).collect();
        let v = rat(1, rng.gen_range(1..=6));
        let omegas = vec![random_rat(&mut rng)];
        let out = integralize(&actions, Some(&v), &omegas);
        assert!(out.values.iter().all(|x| *x >= 0.into()));
        for i in 0..actions.len() {
            assert_eq!(Rational::from_integer(out.values[i].clone()), (&actions[i] + &out.epsilon) * Rational::from_integer(out.n.clone()));
            for j in 0..actions.len() {
                assert_eq!(actions[i].cmp(&actions[j]), out.values[i].cmp(&out.values[j]));
            }
        }
        assert!((&v * Rational::from_integer(out.n.clone())).is_integer());
    }
}

/// Actions reachable from `c` by one recap with lattice areas and up to two
/// orbifold points, seen through a window that does not depend on `v`.
fn reachable(c: &FormalCappedOrbit, lattice: &Rational, v: &Rational) -> BTreeSet<Rational> {
    let center = &c.hamiltonian_integral - &c.cap_area;
    let mut out = BTreeSet::new();
    for a in -40..=40 {
        for k in 0..=2 {
            let s = SphereClass::new(lattice * int(a), int(0), k);
            let x = recap(c, 1, &s, Gluing::Smooth, None).unwrap().action(v);
            if (&x - &center).abs() <= lattice * int(10) {
                out.insert(x);
            }
        }
    }
    out
}

#[test]
fn spectrum_independent_of_lattice_bulk() {
    let g = rat(1, 4);
    let c = FormalCappedOrbit::new("x", int(1), rat(1, 2), 1, int(0));
    let reference = reachable(&c, &g, &g);
    assert_eq!(reference.len(), 21);
    for m in [2, 3, -1] {
        assert_eq!(reachable(&c, &g, &(&g * int(m))), reference);
    }
}

#[test]
fn orbit_classification() {
    let swap = vec![1, 0];
    let c = classify_orbits(2, &[swap.clone()], &swap).unwrap();
    assert_eq!(c.pairs, vec![(0, 1), (1, 1)]);
    assert_eq!(c.orbits.len(), 1);
    let id = classify_orbits(2, &[swap.clone()], &[0, 1]).unwrap();
    assert_eq!(id.pairs, vec![(0, 0), (1, 0)]);
    assert_eq!(id.orbits.len(), 1);
    assert_eq!(classify_orbits(3, &[vec![1, 0, 2]], &[0, 2, 1]), Err(LedgerError::NonEquivariant));
}
