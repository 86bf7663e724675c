//! Chen-Ruan sector data for symmetric products `Sym^k(M)`.
//!
//! Sectors are conjugacy classes of `Sym_k`, i.e. partitions of `k`. Ages and
//! fixed-locus dimensions are available for any complex dimension `n`; graded
//! ranks are computed for `M = ℙ¹`, where the fixed locus of a class with `a_m`
//! cycles of length `m` is `Π_m Sym^{a_m}(ℙ¹) = Π_m ℙ^{a_m}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::novikov::{int, rat, Rational};

/// A partition of `k`, stored as weakly decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Accepts parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn identity(k: usize) -> Self {
        Partition { parts: alloc::vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `k = Σ m·a_m`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `ℓ(λ) = Σ a_m`, the number of cycles.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `m ↦ a_m`.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &p in &self.parts {
            *out.entry(p).or_insert(0) += 1;
        }
        out
    }
}

impl core::fmt::Display for Partition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// All partitions of `k`, each once, from `(1,…,1)` up to `(k)`.
pub fn conjugacy_classes(k: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `n·(k − ℓ(λ))/2`.
pub fn age(lambda: &Partition, n: usize) -> Rational {
    rat((n * (lambda.size() - lambda.length())) as i64, 2)
}

/// Rotation weights `r_j ∈ [0, 1)` of the class acting on `(ℂⁿ)^k`: an
/// `m`-cycle contributes `j/m` for `j = 0..m`, each `n` times.
pub fn rotation_weights(lambda: &Partition, n: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    for &m in lambda.parts() {
        for j in 0..m {
            for _ in 0..n {
                out.push(rat(j as i64, m as i64));
            }
        }
    }
    out
}

/// `Σ r_j`, the age read off from rotation weights.
pub fn age_from_weights(weights: &[Rational]) -> Rational {
    weights.iter().fold(Rational::zero(), |acc, w| acc + w)
}

/// `a(g) + a(g⁻¹) = codim_ℂ` for a class conjugate to its inverse.
pub fn age_conjugation_check(lambda: &Partition, n: usize) -> bool {
    let codim = int((n * (lambda.size() - lambda.length())) as i64);
    age(lambda, n) * int(2) == codim
}

/// `Π_m m^{a_m}·a_m!`.
pub fn centralizer_order(lambda: &Partition) -> BigUint {
    let mut out = BigUint::one();
    for (m, a) in lambda.multiplicities() {
        for i in 1..=a {
            out *= BigUint::from(m) * BigUint::from(i);
        }
    }
    out
}

/// Complex dimension `n·ℓ(λ)` of the fixed locus in `M^k`.
pub fn fixed_locus_dim(lambda: &Partition, n: usize) -> usize {
    n * lambda.length()
}

/// Rank of `⊗_m Sym^{a_m}(H*(ℙ¹))`, i.e. `Π_m (a_m + 1)`.
pub fn sector_rank_sym_p1(lambda: &Partition) -> u64 {
    lambda.multiplicities().values().map(|&a| a as u64 + 1).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub partition: Partition,
    pub cycle_count: usize,
    pub age: Rational,
    pub centralizer_order: BigUint,
    pub fixed_dim: usize,
}

impl Sector {
    pub fn new(partition: Partition, n: usize) -> Self {
        Sector {
            cycle_count: partition.length(),
            age: age(&partition, n),
            centralizer_order: centralizer_order(&partition),
            fixed_dim: fixed_locus_dim(&partition, n),
            partition,
        }
    }
}

pub fn sectors(k: usize, n: usize) -> Vec<Sector> {
    conjugacy_classes(k).into_iter().map(|p| Sector::new(p, n)).collect()
}

/// Degree-indexed ranks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    ranks: BTreeMap<Rational, u64>,
}

impl BettiTable {
    pub fn ranks(&self) -> &BTreeMap<Rational, u64> {
        &self.ranks
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.values().sum()
    }

    pub fn add(&mut self, degree: Rational, rank: u64) {
        if rank > 0 {
            *self.ranks.entry(degree).or_insert(0) += rank;
        }
    }

    pub fn merge(&mut self, other: &BettiTable) {
        for (d, r) in &other.ranks {
            self.add(d.clone(), *r);
        }
    }

    pub fn min_degree(&self) -> Option<&Rational> {
        self.ranks.keys().next()
    }

    pub fn max_degree(&self) -> Option<&Rational> {
        self.ranks.keys().next_back()
    }

    pub fn all_integral(&self) -> bool {
        self.ranks.keys().all(|d| d.is_integer())
    }
}

/// Graded ranks of one sector of `Sym^k(ℙ¹)`, shifted by `2·age`.
pub fn sector_betti_p1(lambda: &Partition) -> BettiTable {
    // Poincaré polynomial Π_m (1 + t² + … + t^{2a_m}) of Π_m ℙ^{a_m}
    let mut poly: BTreeMap<usize, u64> = BTreeMap::new();
    poly.insert(0, 1);
    for a in lambda.multiplicities().into_values() {
        let mut next = BTreeMap::new();
        for (&d, &r) in &poly {
            for j in 0..=a {
                *next.entry(d + 2 * j).or_insert(0) += r;
            }
        }
        poly = next;
    }
    let shift = age(lambda, 1) * int(2);
    let mut table = BettiTable::default();
    for (d, r) in poly {
        table.add(int(d as i64) + &shift, r);
    }
    table
}

/// Chen-Ruan Betti table of `Sym^k(ℙ¹)`.
pub fn cr_betti_table_p1(k: usize) -> BettiTable {
    let mut table = BettiTable::default();
    for lambda in conjugacy_classes(k) {
        table.merge(&sector_betti_p1(&lambda));
    }
    table
}

/// Complex virtual dimension of closed orbifold curves:
/// `⟨c₁, β⟩ + (n − 3)(1 − g) + h − Σ ages`, with `h = ages.len()`.
pub fn vdim_closed(c1_pairing: &Rational, n: i64, genus: i64, ages: &[Rational]) -> Rational {
    let h = ages.len() as i64;
    let sum = age_from_weights(ages);
    c1_pairing + int((n - 3) * (1 - genus) + h) - sum
}

/// `(n − dim Z) − (a₁ + a₂)`; zero exactly when a node with these ages is
/// smoothable.
pub fn vdim_breaking_defect(n: i64, dim_z: i64, a1: &Rational, a2: &Rational) -> Rational {
    int(n - dim_z) - a1 - a2
}
