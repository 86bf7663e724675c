//! Quasimorphism defects on finite groups given by multiplication tables.
//!
//! On a perfect group every element is a product of commutators, and a
//! function `μ` with defect `D` obeys `|μ(g)| ≤ (8N_g − 1)·D` where `N_g`
//! is the commutator length. Expressions come from breadth-first search
//! and are re-multiplied through the table before use.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::novikov::{int, rat, Rational};
use crate::quantum_algebra::{sublinear_trend, TrendPolicy};

/// Default BFS depth cap for closure and commutator searches.
pub const DEFAULT_DEPTH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("multiplication table violates the group axioms: {0}")]
    NotAGroup(String),
    #[error("element is not in the normal closure within {0} factors")]
    NotInClosure(usize),
    #[error("group is not perfect")]
    NotPerfect,
    #[error("function has {got} values for a group of order {order}")]
    Arity { order: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
}

impl FiniteGroupTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = names.len();
        let bad = |m: &str| Err(GroupError::NotAGroup(String::from(m)));
        if n == 0 || mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table shape");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g)) else {
            return bad("no identity");
        };
        let mut inv = alloc::vec![0; n];
        for g in 0..n {
            match (0..n).find(|&h| mul[g][h] == identity && mul[h][g] == identity) {
                Some(h) => inv[g] = h,
                None => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroupTable { names, mul, inv, identity })
    }

    /// The permutation group generated by `gens`, elements in sorted order.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        let degree = gens.first().map_or(0, Vec::len);
        if gens.iter().any(|g| g.len() != degree || g.iter().collect::<BTreeSet<_>>().len() != degree) {
            return Err(GroupError::NotAGroup(String::from("generators are not permutations of one set")));
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let sg: Vec<usize> = g.iter().map(|&x| s[x]).collect();
                if seen.insert(sg.clone()) {
                    queue.push_back(sg);
                }
            }
        }
        let elements: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: BTreeMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        // (ab)(x) = a(b(x))
        let mul = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()]).collect())
            .collect();
        let names = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_table(names, mul)
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| format!("{i}")).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, mul).expect("cyclic group table")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The alternating group on five letters.
    pub fn a5() -> Self {
        Self::from_permutations(&[alloc::vec![1, 2, 0, 3, 4], alloc::vec![1, 2, 3, 4, 0]]).expect("A5 is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn conjugate(&self, l: usize, f: usize) -> usize {
        self.mul(self.mul(l, f), self.inv(l))
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = alloc::vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&format!("{}", x + 1));
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

pub type GroupFunction = Vec<Rational>;

fn check_arity(g: &FiniteGroupTable, mu: &[Rational]) -> Result<(), GroupError> {
    if mu.len() != g.order() {
        return Err(GroupError::Arity { order: g.order(), got: mu.len() });
    }
    Ok(())
}

/// `max_{g,h} |μ(gh) − μ(g) − μ(h)|`.
pub fn defect(g: &FiniteGroupTable, mu: &[Rational]) -> Result<Rational, GroupError> {
    check_arity(g, mu)?;
    if let Some(d) = defect_small(g, mu) {
        return Ok(d);
    }
    let mut best = Rational::zero();
    for a in 0..g.order() {
        for b in 0..g.order() {
            let d = (&mu[g.mul(a, b)] - &mu[a] - &mu[b]).abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Machine-integer path over a common denominator, when it fits.
fn defect_small(g: &FiniteGroupTable, mu: &[Rational]) -> Option<Rational> {
    let denom = mu.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let den = denom.to_i64()?;
    let nums: Vec<i128> = mu.iter().map(|x| (x.numer() * (&denom / x.denom())).to_i64().map(i128::from)).collect::<Option<_>>()?;
    let mut best = 0i128;
    for a in 0..g.order() {
        let row = &g.mul[a];
        for b in 0..g.order() {
            best = best.max((nums[row[b]] - nums[a] - nums[b]).abs());
        }
    }
    Some(Rational::new(BigInt::from(best), BigInt::from(den)))
}

/// The subgroup generated by `gens`.
pub fn generated_subgroup(g: &FiniteGroupTable, gens: &[usize]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([g.identity()]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn is_perfect(g: &FiniteGroupTable) -> bool {
    let comms: BTreeSet<usize> = (0..g.order()).flat_map(|a| (0..g.order()).map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
    let comms: Vec<usize> = comms.into_iter().collect();
    generated_subgroup(g, &comms).len() == g.order()
}

/// One factor `ℓ·f^{±1}·ℓ⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjugateFactor {
    pub ell: usize,
    pub f: usize,
    pub inverse: bool,
}

impl ConjugateFactor {
    pub fn f_signed(&self, g: &FiniteGroupTable) -> usize {
        if self.inverse {
            g.inv(self.f)
        } else {
            self.f
        }
    }

    pub fn value(&self, g: &FiniteGroupTable) -> usize {
        g.conjugate(self.ell, self.f_signed(g))
    }
}

/// Product of a word of group elements, left to right.
pub fn multiply_out(g: &FiniteGroupTable, word: impl IntoIterator<Item = usize>) -> usize {
    word.into_iter().fold(g.identity(), |acc, x| g.mul(acc, x))
}

/// Breadth-first search from the identity over right multiplication by
/// `steps`; returns the step indices of a shortest word reaching `target`.
fn bfs_word(g: &FiniteGroupTable, steps: &[usize], target: usize, cap: usize) -> Option<Vec<usize>> {
    let n = g.order();
    let mut parent: Vec<Option<(usize, usize)>> = alloc::vec![None; n];
    let mut depth = alloc::vec![usize::MAX; n];
    depth[g.identity()] = 0;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            break;
        }
        if depth[x] >= cap {
            continue;
        }
        for (si, &s) in steps.iter().enumerate() {
            let y = g.mul(x, s);
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((x, si));
                queue.push_back(y);
            }
        }
    }
    if depth[target] == usize::MAX {
        return None;
    }
    let mut word = Vec::new();
    let mut x = target;
    while let Some((prev, si)) = parent[x] {
        word.push(si);
        x = prev;
    }
    word.reverse();
    Some(word)
}

/// A shortest `target = Π ℓ_j f_j^{±1} ℓ_j⁻¹` over `f_j ∈ F`.
pub fn closure_expression(g: &FiniteGroupTable, gens: &[usize], target: usize, cap: usize) -> Result<Vec<ConjugateFactor>, GroupError> {
    // one witness per distinct conjugate value, preferring ℓ = e, then small ℓ
    let mut witnesses: BTreeMap<usize, ConjugateFactor> = BTreeMap::new();
    let mut ells: Vec<usize> = (0..g.order()).collect();
    ells.sort_by_key(|&l| (l != g.identity(), l));
    for &f in gens {
        for inverse in [false, true] {
            for &ell in &ells {
                let factor = ConjugateFactor { ell, f, inverse };
                witnesses.entry(factor.value(g)).or_insert(factor);
            }
        }
    }
    let steps: Vec<usize> = witnesses.keys().copied().collect();
    let word = bfs_word(g, &steps, target, cap).ok_or(GroupError::NotInClosure(cap))?;
    let expr: Vec<ConjugateFactor> = word.into_iter().map(|si| witnesses[&steps[si]]).collect();
    debug_assert_eq!(multiply_out(g, expr.iter().map(|c| c.value(g))), target);
    Ok(expr)
}

/// `|μ(h) − Σ μ(f_j^{±1})| ≤ 5N·D`; for `N = 0`, `|μ(e)| ≤ D`.
pub fn eq16_bound_check(g: &FiniteGroupTable, mu: &[Rational], expr: &[ConjugateFactor], h: usize) -> Result<bool, GroupError> {
    let d = defect(g, mu)?;
    if multiply_out(g, expr.iter().map(|c| c.value(g))) != h {
        return Ok(false);
    }
    if expr.is_empty() {
        return Ok(mu[h].abs() <= d);
    }
    let sum = expr.iter().fold(Rational::zero(), |acc, c| acc + &mu[c.f_signed(g)]);
    Ok((&mu[h] - sum).abs() <= d * int(5 * expr.len() as i64))
}

/// Shortest expression of `target` as a product of commutators `[a, b]`.
pub fn commutator_expression(g: &FiniteGroupTable, target: usize, cap: usize) -> Result<Vec<(usize, usize)>, GroupError> {
    let mut witnesses: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            witnesses.entry(g.commutator(a, b)).or_insert((a, b));
        }
    }
    let steps: Vec<usize> = witnesses.keys().copied().collect();
    let word = bfs_word(g, &steps, target, cap).ok_or(GroupError::NotInClosure(cap))?;
    Ok(word.into_iter().map(|si| witnesses[&steps[si]]).collect())
}

/// Commutator length of every element; `None` outside the commutator subgroup.
pub fn commutator_lengths(g: &FiniteGroupTable) -> Vec<Option<usize>> {
    (0..g.order())
        .map(|x| commutator_expression(g, x, DEFAULT_DEPTH_CAP).ok().map(|e| e.len()))
        .collect()
}

/// `(8N − 1)·D` for `N ≥ 1` and `D` for the identity.
pub fn commutator_bound(n: usize, d: &Rational) -> Rational {
    if n == 0 {
        d.clone()
    } else {
        d * int(8 * n as i64 - 1)
    }
}

pub fn commutator_bound_check(g: &FiniteGroupTable, mu: &[Rational], target: usize, expr: &[(usize, usize)]) -> Result<bool, GroupError> {
    let d = defect(g, mu)?;
    if multiply_out(g, expr.iter().map(|&(a, b)| g.commutator(a, b))) != target {
        return Ok(false);
    }
    Ok(mu[target].abs() <= commutator_bound(expr.len(), &d))
}

/// `C_G = max_g (8N_g − 1)` over a perfect group.
pub fn commutator_constant(g: &FiniteGroupTable) -> Result<i64, GroupError> {
    if !is_perfect(g) {
        return Err(GroupError::NotPerfect);
    }
    let lengths = commutator_lengths(g);
    Ok(lengths.iter().map(|l| l.map_or(1, |n| if n == 0 { 1 } else { 8 * n as i64 - 1 })).max().unwrap_or(1))
}

/// Uniform random values `a/b` with `|a| ≤ 20`, `1 ≤ b ≤ 6`.
pub fn random_function(g: &FiniteGroupTable, rng: &mut ChaCha8Rng) -> GroupFunction {
    (0..g.order()).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))).collect()
}

pub fn random_functions(g: &FiniteGroupTable, count: usize, seed: u64) -> Vec<GroupFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_function(g, &mut rng)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRow {
    pub k: usize,
    pub defect: Rational,
    pub sup_norm: Rational,
    pub bound: Rational,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub constant: i64,
    pub rows: Vec<SequenceRow>,
    pub verdict: bool,
}

/// Defects, sup-norms and the certified bound `sup ≤ C_G·D_k` for a
/// sequence indexed from `k = 1`. PASS iff every bound holds and both
/// defects and sup-norms shrink.
pub fn sequence_report(g: &FiniteGroupTable, seq: &[GroupFunction]) -> Result<SequenceReport, GroupError> {
    let constant = commutator_constant(g)?;
    let mut rows = Vec::with_capacity(seq.len());
    for (i, mu) in seq.iter().enumerate() {
        let d = defect(g, mu)?;
        let sup = mu.iter().map(Signed::abs).max().unwrap_or_default();
        let bound = &d * int(constant);
        rows.push(SequenceRow { k: i + 1, within_bound: sup <= bound, defect: d, sup_norm: sup, bound });
    }
    let policy = TrendPolicy::default();
    let defects: Vec<(usize, Rational)> = rows.iter().map(|r| (r.k, r.defect.clone())).collect();
    let sups: Vec<(usize, Rational)> = rows.iter().map(|r| (r.k, r.sup_norm.clone())).collect();
    let verdict = rows.iter().all(|r| r.within_bound) && sublinear_trend(&defects, &policy) && sublinear_trend(&sups, &policy);
    Ok(SequenceReport { constant, rows, verdict })
}

/// Largest `|μ(g)| / ((8N_g − 1)·D)` over samples and non-identity `g`.
pub fn tightness_probe(g: &FiniteGroupTable, samples: &[GroupFunction]) -> Result<Rational, GroupError> {
    let lengths = commutator_lengths(g);
    let mut best = Rational::zero();
    for mu in samples {
        let d = defect(g, mu)?;
        if d.is_zero() {
            continue;
        }
        for (x, len) in lengths.iter().enumerate() {
            if let Some(n) = len.filter(|&n| n > 0) {
                let r = mu[x].abs() / commutator_bound(n, &d);
                if r > best {
                    best = r;
                }
            }
        }
    }
    Ok(best)
}
