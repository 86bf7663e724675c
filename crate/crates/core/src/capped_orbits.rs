//! Action and index ledgers for formal capped orbits.
//!
//! A capped orbit carries its Hamiltonian integral, a cap (area, orbifold
//! point count, Conley-Zehnder index) and a formal integer combination `U`
//! of spheres. With bulk valuation `v`,
//! `𝒜 = ∫H − (cap_area + k(c̄)·v) − ω(U)` and
//! `ω(U) = Σ aᵢ(areaᵢ + kᵢ·v)`, corrected by `+2v` per orbifold gluing.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::novikov::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LedgerError {
    #[error("capped orbits lie over different orbits")]
    DifferentOrbit,
    #[error("orbifold gluing needs orbifold points on both the sphere and the cap")]
    OrbifoldGluePrecondition,
    #[error("Conley-Zehnder index {0} is not an integer")]
    NonIntegralCZ(Rational),
    #[error("spectrum table has no entry for {0}")]
    MissingTableEntry(usize),
    #[error("the map does not commute with the group action")]
    NonEquivariant,
    #[error("permutation has the wrong size or is not a bijection")]
    BadPermutation,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SphereClass {
    pub area: Rational,
    pub c1: Rational,
    pub orb_points: u32,
}

impl SphereClass {
    pub fn new(area: Rational, c1: Rational, orb_points: u32) -> Self {
        SphereClass { area, c1, orb_points }
    }

    /// `area + k(u)·v`.
    pub fn omega(&self, val_v: &Rational) -> Rational {
        &self.area + val_v * int(self.orb_points as i64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gluing {
    Smooth,
    Orbifold,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCappedOrbit {
    pub orbit: String,
    pub hamiltonian_integral: Rational,
    pub cap_area: Rational,
    pub cap_orb_points: u32,
    pub spheres: Vec<(i64, SphereClass)>,
    pub marking: String,
    pub cap_cz: Rational,
    /// Net count of orbifold gluings (negative after inverse recaps).
    pub orbifold_glues: i64,
    /// Accumulated `a + a'` from orbifold gluings.
    pub age_shift: Rational,
}

impl FormalCappedOrbit {
    pub fn new(orbit: &str, hamiltonian_integral: Rational, cap_area: Rational, cap_orb_points: u32, cap_cz: Rational) -> Self {
        FormalCappedOrbit {
            orbit: String::from(orbit),
            hamiltonian_integral,
            cap_area,
            cap_orb_points,
            spheres: Vec::new(),
            marking: String::from("1"),
            cap_cz,
            orbifold_glues: 0,
            age_shift: Rational::zero(),
        }
    }

    /// `ω(U) = Σ aᵢ(areaᵢ + kᵢ·v)`.
    pub fn omega_u(&self, val_v: &Rational) -> Rational {
        self.spheres.iter().fold(Rational::zero(), |acc, (m, s)| acc + s.omega(val_v) * int(*m))
    }

    pub fn c1_u(&self) -> Rational {
        self.spheres.iter().fold(Rational::zero(), |acc, (m, s)| acc + &s.c1 * int(*m))
    }

    /// Everything the action subtracts from `∫H`.
    pub fn total_cap(&self, val_v: &Rational) -> Rational {
        &self.cap_area + val_v * int(self.cap_orb_points as i64) + self.omega_u(val_v) - val_v * int(2 * self.orbifold_glues)
    }

    pub fn action(&self, val_v: &Rational) -> Rational {
        &self.hamiltonian_integral - self.total_cap(val_v)
    }

    /// `μ_CZ(c̄) + 2c₁(U) + 2·(ages)`.
    pub fn cz(&self) -> Rational {
        &self.cap_cz + self.c1_u() * int(2) + &self.age_shift * int(2)
    }
}

pub fn action(c: &FormalCappedOrbit, val_v: &Rational) -> Rational {
    c.action(val_v)
}

pub fn equivalent(c: &FormalCappedOrbit, d: &FormalCappedOrbit, val_v: &Rational) -> Result<bool, LedgerError> {
    if c.orbit != d.orbit {
        return Err(LedgerError::DifferentOrbit);
    }
    Ok(c.total_cap(val_v) == d.total_cap(val_v))
}

/// Glues `mult` copies of `s` onto the cap. The action drops by
/// `mult·(ω(s) + k·v)` for smooth gluing and `mult·(ω(s) + (k−2)·v)` at an
/// orbifold point; the index rises by `2·mult·c₁`, plus `2·mult·(a + a')`
/// when ages are given for an orbifold gluing.
pub fn recap(
    c: &FormalCappedOrbit,
    mult: i64,
    s: &SphereClass,
    gluing: Gluing,
    ages: Option<(Rational, Rational)>,
) -> Result<FormalCappedOrbit, LedgerError> {
    let mut out = c.clone();
    if gluing == Gluing::Orbifold {
        if s.orb_points == 0 || c.cap_orb_points == 0 {
            return Err(LedgerError::OrbifoldGluePrecondition);
        }
        out.orbifold_glues += mult;
        if let Some((a, b)) = ages {
            out.age_shift += (a + b) * int(mult);
        }
    }
    out.spheres.push((mult, s.clone()));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

pub fn parity(c: &FormalCappedOrbit) -> Result<Parity, LedgerError> {
    let cz = c.cz();
    if !cz.is_integer() {
        return Err(LedgerError::NonIntegralCZ(cz));
    }
    Ok(if cz.to_integer().is_even() { Parity::Even } else { Parity::Odd })
}

/// `𝒜(c_x) − 𝒜(c_y) = E + k(v)·val(𝔳)`.
pub fn energy_identity(cx: &FormalCappedOrbit, cy: &FormalCappedOrbit, energy: &Rational, k_v: i64, val_v: &Rational) -> bool {
    cx.action(val_v) - cy.action(val_v) == energy + val_v * int(k_v)
}

/// `μ_glued − μ_in − 1 + 2k(u)`.
pub fn vdim_floer(mu_in: i64, mu_glued: i64, k_u: i64) -> i64 {
    mu_glued - mu_in - 1 + 2 * k_u
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integralization {
    pub n: BigInt,
    pub epsilon: Rational,
    pub values: Vec<BigInt>,
}

/// Smallest `N` with `N·(a − a')`, `N·val(𝔳)` and `N·ω` integral for all
/// inputs, and `ε = −min a`, so `N·(a + ε)` is a nonnegative integer.
pub fn integralize(actions: &[Rational], val_v: Option<&Rational>, omega_values: &[Rational]) -> Integralization {
    let Some(min) = actions.iter().min().cloned() else {
        return Integralization { n: BigInt::one(), epsilon: Rational::zero(), values: Vec::new() };
    };
    let mut n = BigInt::one();
    // pairwise differences share denominators with differences from the minimum
    for a in actions {
        n = n.lcm((a - &min).denom());
    }
    for w in omega_values.iter().chain(val_v) {
        n = n.lcm(w.denom());
    }
    let epsilon = -min;
    let scale = Rational::from_integer(n.clone());
    let values = actions.iter().map(|a| ((a + &epsilon) * &scale).to_integer()).collect();
    Integralization { n, epsilon, values }
}

pub type SpectrumTable = BTreeMap<usize, BTreeSet<Rational>>;

/// Partitions of `k` as weakly decreasing part lists.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            acc.push(part);
            go(rest - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

pub fn minkowski_sum(a: &BTreeSet<Rational>, b: &BTreeSet<Rational>) -> BTreeSet<Rational> {
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

/// `⋃ Spec(H^{k₁}) + ⋯ + Spec(H^{k_l})` over partitions `k₁ + ⋯ + k_l = k`.
pub fn spec_k(table: &SpectrumTable, k: usize) -> Result<BTreeSet<Rational>, LedgerError> {
    for j in 1..=k {
        if !table.contains_key(&j) {
            return Err(LedgerError::MissingTableEntry(j));
        }
    }
    let mut out = BTreeSet::new();
    for parts in partitions(k) {
        let mut acc: BTreeSet<Rational> = BTreeSet::from([Rational::zero()]);
        for p in parts {
            acc = minkowski_sum(&acc, &table[&p]);
        }
        out.extend(acc);
    }
    Ok(out)
}

/// A finite group given by permutations of `0..n`.
fn closure(n: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
    let mut frontier = alloc::vec![id];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let hg: Vec<usize> = g.iter().map(|&x| h[x]).collect();
            if seen.insert(hg.clone()) {
                frontier.push(hg);
            }
        }
    }
    seen.into_iter().collect()
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    p.len() == n && p.iter().collect::<BTreeSet<_>>().len() == n && p.iter().all(|&x| x < n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClassification {
    /// Group elements as permutations; index 0 is the identity.
    pub group: Vec<Vec<usize>>,
    /// `(p, h)` with `h·p = φ(p)`, `h` indexing `group`.
    pub pairs: Vec<(usize, usize)>,
    /// Orbits of `g·(p, h) = (gp, ghg⁻¹)`, as indices into `pairs`.
    pub orbits: Vec<Vec<usize>>,
    /// `|Γ_p ∩ C(h)|` per pair.
    pub stabilizer_orders: Vec<usize>,
}

/// Twisted fixed points `{(p, h) : h·p = φ(p)}` of an equivariant bijection.
pub fn classify_orbits(n: usize, gamma: &[Vec<usize>], phi: &[usize]) -> Result<OrbitClassification, LedgerError> {
    if !is_permutation(phi, n) || gamma.iter().any(|g| !is_permutation(g, n)) {
        return Err(LedgerError::BadPermutation);
    }
    for g in gamma {
        if (0..n).any(|p| phi[g[p]] != g[phi[p]]) {
            return Err(LedgerError::NonEquivariant);
        }
    }
    let mut group = closure(n, gamma);
    let id: Vec<usize> = (0..n).collect();
    group.retain(|g| *g != id);
    group.insert(0, id);
    let index: BTreeMap<&Vec<usize>, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    let inverse = |a: &[usize]| -> Vec<usize> {
        let mut inv = alloc::vec![0; a.len()];
        for (i, &x) in a.iter().enumerate() {
            inv[x] = i;
        }
        inv
    };
    let mut pairs = Vec::new();
    for p in 0..n {
        for (hi, h) in group.iter().enumerate() {
            if h[p] == phi[p] {
                pairs.push((p, hi));
            }
        }
    }
    let pair_index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut orbit_of = alloc::vec![usize::MAX; pairs.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..pairs.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let (p, hi) = pairs[start];
        let mut members = BTreeSet::new();
        for g in &group {
            let conj = compose(&compose(g, &group[hi]), &inverse(g));
            let key = (g[p], index[&conj]);
            let j = pair_index[&key];
            members.insert(j);
        }
        for &j in &members {
            orbit_of[j] = orbits.len();
        }
        orbits.push(members.into_iter().collect());
    }
    let stabilizer_orders = pairs
        .iter()
        .map(|&(p, hi)| {
            let h = &group[hi];
            group.iter().filter(|g| g[p] == p && compose(g, h) == compose(h, g)).count()
        })
        .collect();
    Ok(OrbitClassification { group, pairs, orbits, stabilizer_orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::rat;

    fn orbit() -> FormalCappedOrbit {
        FormalCappedOrbit::new("x", int(0), int(0), 0, int(0))
    }

    #[test]
    fn action_examples() {
        let v = rat(1, 4);
        let mut c = orbit();
        c.hamiltonian_integral = int(3);
        assert_eq!(c.action(&v), int(3));
        let c = FormalCappedOrbit::new("x", int(0), int(1), 2, int(0));
        assert_eq!(c.action(&v), rat(-3, 2));
        let c = recap(&orbit(), 2, &SphereClass::new(int(1), int(0), 1), Gluing::Smooth, None).unwrap();
        assert_eq!(c.action(&v), rat(-5, 2));
    }

    #[test]
    fn equivalence_examples() {
        let v = rat(1, 4);
        let a = FormalCappedOrbit::new("x", int(0), rat(1, 2), 0, int(0));
        assert!(equivalent(&a, &a, &v).unwrap());
        let b = FormalCappedOrbit::new("x", int(0), rat(1, 4), 1, int(0));
        assert!(equivalent(&a, &b, &v).unwrap());
        let c = FormalCappedOrbit::new("x", int(0), int(1), 0, int(0));
        let d = FormalCappedOrbit::new("x", int(0), int(2), 0, int(0));
        assert!(!equivalent(&c, &d, &v).unwrap());
        let y = FormalCappedOrbit::new("y", int(0), int(1), 0, int(0));
        assert_eq!(equivalent(&c, &y, &v), Err(LedgerError::DifferentOrbit));
    }

    #[test]
    fn recap_examples() {
        let v = rat(1, 4);
        let c = FormalCappedOrbit::new("x", int(2), int(1), 2, int(3));
        let s = SphereClass::new(int(1), int(1), 0);
        let r = recap(&c, 1, &s, Gluing::Smooth, None).unwrap();
        assert_eq!(r.action(&v) - c.action(&v), int(-1));
        assert_eq!(r.cz() - c.cz(), int(2));
        let orb = SphereClass::new(int(0), int(0), 2);
        let r = recap(&c, 1, &orb, Gluing::Orbifold, None).unwrap();
        assert_eq!(r.action(&v), c.action(&v));
        let r = recap(&c, 1, &orb, Gluing::Orbifold, Some((rat(1, 2), rat(1, 2)))).unwrap();
        assert_eq!(r.cz() - c.cz(), int(2));
        let zero = SphereClass::new(int(0), int(0), 0);
        let r = recap(&c, 1, &zero, Gluing::Smooth, None).unwrap();
        assert_eq!((r.action(&v), r.cz()), (c.action(&v), c.cz()));
        assert_eq!(recap(&c, 1, &zero, Gluing::Orbifold, None), Err(LedgerError::OrbifoldGluePrecondition));
    }

    #[test]
    fn parity_examples() {
        let c = FormalCappedOrbit::new("x", int(0), int(0), 0, int(3));
        assert_eq!(parity(&c), Ok(Parity::Odd));
        let r = recap(&c, 1, &SphereClass::new(int(1), int(1), 0), Gluing::Smooth, None).unwrap();
        assert_eq!(parity(&r), Ok(Parity::Odd));
        let h = FormalCappedOrbit::new("x", int(0), int(0), 0, rat(1, 2));
        assert_eq!(parity(&h), Err(LedgerError::NonIntegralCZ(rat(1, 2))));
    }

    #[test]
    fn energy_examples() {
        let v = rat(1, 4);
        let c = FormalCappedOrbit::new("x", int(1), int(1), 1, int(0));
        assert!(energy_identity(&c, &c, &int(0), 0, &v));
        let r = recap(&c, 1, &SphereClass::new(int(1), int(0), 0), Gluing::Smooth, None).unwrap();
        assert!(energy_identity(&c, &r, &int(1), 0, &v));
        assert!(!energy_identity(&c, &r, &(int(1) + rat(1, 8)), 0, &v));
        let o = recap(&c, 1, &SphereClass::new(int(0), int(0), 1), Gluing::Smooth, None).unwrap();
        assert!(energy_identity(&c, &o, &int(0), 1, &v));
    }

    #[test]
    fn vdim_examples() {
        assert_eq!(vdim_floer(5, 5, 0), -1);
        assert_eq!(vdim_floer(2, 3, 0), 0);
        assert_eq!(vdim_floer(2, 2, 1), 1);
        // two-step gluing
        let (a, b, c) = (1, 4, 6);
        let (k0, k1) = (1, 2);
        assert_eq!(vdim_floer(a, b, k0) + vdim_floer(b, c, k1), vdim_floer(a, c, k0 + k1) - 1);
    }

    #[test]
    fn integralize_examples() {
        let r = integralize(&[int(0), rat(1, 2), rat(3, 2)], None, &[]);
        assert_eq!((r.n.clone(), r.epsilon.clone()), (BigInt::from(2), int(0)));
        assert_eq!(r.values, alloc::vec![BigInt::from(0), BigInt::from(1), BigInt::from(3)]);
        assert_eq!(integralize(&[rat(1, 3), rat(1, 2)], None, &[]).n, BigInt::from(6));
        let r = integralize(&[rat(7, 5)], None, &[]);
        assert_eq!((r.n, r.epsilon), (BigInt::from(1), rat(-7, 5)));
        assert_eq!(integralize(&[int(0), int(1)], Some(&rat(1, 4)), &[rat(1, 3)]).n, BigInt::from(12));
    }

    #[test]
    fn spec_examples() {
        let set = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<BTreeSet<_>>();
        let mut table = SpectrumTable::new();
        table.insert(1, set(&[0, 1]));
        table.insert(2, set(&[3]));
        assert_eq!(spec_k(&table, 1).unwrap(), set(&[0, 1]));
        assert_eq!(spec_k(&table, 2).unwrap(), set(&[0, 1, 2, 3]));
        assert_eq!(spec_k(&table, 3), Err(LedgerError::MissingTableEntry(3)));
        let zeros: SpectrumTable = (1..=5).map(|j| (j, set(&[0]))).collect();
        for k in 1..=5 {
            assert_eq!(spec_k(&zeros, k).unwrap(), set(&[0]));
        }
        assert_eq!(partitions(4).len(), 5);
    }

    #[test]
    fn classification_examples() {
        let trivial = classify_orbits(3, &[], &[0, 1, 2]).unwrap();
        assert_eq!(trivial.pairs, alloc::vec![(0, 0), (1, 0), (2, 0)]);
        let swap = alloc::vec![1, 0];
        let twisted = classify_orbits(2, &[swap.clone()], &[1, 0]).unwrap();
        assert_eq!(twisted.pairs, alloc::vec![(0, 1), (1, 1)]);
        assert_eq!(twisted.orbits.len(), 1);
        let fixed = classify_orbits(2, &[swap.clone()], &[0, 1]).unwrap();
        assert_eq!(fixed.pairs, alloc::vec![(0, 0), (1, 0)]);
        assert_eq!(fixed.orbits.len(), 1);
        assert_eq!(fixed.stabilizer_orders, alloc::vec![1, 1]);
        // φ moving a point that Γ fixes breaks equivariance
        assert_eq!(classify_orbits(3, &[alloc::vec![1, 0, 2]], &[0, 2, 1]), Err(LedgerError::NonEquivariant));
    }
}
