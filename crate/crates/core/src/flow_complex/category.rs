//! Synthetic flow categories given by count tables `nᵏ_{p, aᵐq}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{FilteredComplex, SignedPermutation};
use super::FlowError;
use crate::linalg::{self, Matrix};
use crate::novikov::{int, rat, NovikovSeries, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    /// Integralized action.
    pub action: i64,
    pub label: String,
    pub gamma_orbit: Option<usize>,
}

/// `(k, from, to, shift)`: the count `nᵏ_{from, a^shift · to}`.
pub type CountKey = (usize, usize, usize, i64);

#[derive(Clone, Debug)]
pub struct SyntheticFlowCategory {
    pub generators: Vec<Generator>,
    /// `𝒜_Π(a)`, the action of the translation generator.
    pub step: i64,
    pub counts: BTreeMap<CountKey, Rational>,
    /// Generators of the finite marker group acting on the basis.
    pub gamma: Vec<SignedPermutation>,
    construction: Option<Construction>,
}

/// Matrices of the conjugation construction `D(α) = e^{αS}·G·E·G⁻¹·e^{−αS}`.
#[derive(Clone, Debug)]
struct Construction {
    g_inv: Matrix,
    s: Matrix,
    /// Generators neither source nor target of the pairing.
    unpaired: Vec<usize>,
    /// Targets of the pairing.
    targets: Vec<usize>,
}

impl SyntheticFlowCategory {
    pub fn new(generators: Vec<Generator>, step: i64, counts: BTreeMap<CountKey, Rational>, gamma: Vec<SignedPermutation>) -> Self {
        let counts = counts.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        SyntheticFlowCategory { generators, step, counts, gamma, construction: None }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn max_k(&self) -> usize {
        self.counts.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Levels `λ(p) = −𝒜(p)`.
    pub fn levels(&self) -> Vec<Rational> {
        self.generators.iter().map(|g| int(-g.action)).collect()
    }

    /// Checks the step, Π-translation consistency, and that every count
    /// goes strictly up in action.
    pub fn check_structure(&self) -> Result<(), FlowError> {
        if self.step <= 0 {
            return Err(FlowError::InvariantViolation(String::from("translation step must be positive")));
        }
        let n = self.len();
        for &(k, p, q, m) in self.counts.keys() {
            if p >= n || q >= n {
                return Err(FlowError::InvariantViolation(format!("count n^{k} refers to a missing generator")));
            }
            if self.generators[p].action >= self.generators[q].action + m * self.step {
                return Err(FlowError::InvariantViolation(format!(
                    "count n^{k} from {} to a^{m}·{} does not increase the action",
                    self.generators[p].id, self.generators[q].id
                )));
            }
        }
        for g in &self.gamma {
            if g.len() != n {
                return Err(FlowError::NonEquivariant);
            }
            for (i, (j, _)) in g.images().iter().enumerate() {
                if self.generators[i].action != self.generators[*j].action {
                    return Err(FlowError::NonEquivariant);
                }
            }
        }
        Ok(())
    }

    /// Exact cycles representing a homology basis of `D(α)`, when the
    /// category came from [`random_consistent_category`].
    pub fn homology_cycles(&self, alpha: &NovikovSeries) -> Option<Vec<Vec<NovikovSeries>>> {
        let c = self.construction.as_ref()?;
        let p_inv = linalg::mat_mul(&c.g_inv, &exp_nilpotent(&c.s, &-alpha));
        Some(c.unpaired.iter().map(|&u| p_inv[u].clone()).collect())
    }

    /// Exact boundaries spanning the image of `D(α)`, under the same condition.
    pub fn boundary_cycles(&self, alpha: &NovikovSeries) -> Option<Vec<Vec<NovikovSeries>>> {
        let c = self.construction.as_ref()?;
        let p_inv = linalg::mat_mul(&c.g_inv, &exp_nilpotent(&c.s, &-alpha));
        Some(c.targets.iter().map(|&t| p_inv[t].clone()).collect())
    }
}

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

fn binomial(n: usize, k: usize) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `d(p) = Σ_{q,k,m} αᵏ·nᵏ_{p,aᵐq}/k! · T^{m·step} q`, as rows.
pub fn build_differential(cat: &SyntheticFlowCategory, alpha: &NovikovSeries) -> Result<FilteredComplex, FlowError> {
    if !alpha.is_nonnegative() {
        return Err(FlowError::NegativeAlpha);
    }
    cat.check_structure()?;
    let report = d_squared_identity(cat);
    if let Some(v) = report {
        return Err(FlowError::InvariantViolation(format!("d² identity fails at {v:?}")));
    }
    Ok(differential_unchecked(cat, alpha))
}

fn differential_unchecked(cat: &SyntheticFlowCategory, alpha: &NovikovSeries) -> FilteredComplex {
    let n = cat.len();
    let mut powers = alloc::vec![NovikovSeries::one()];
    for k in 1..=cat.max_k() {
        let next = &powers[k - 1] * alpha;
        powers.push(next);
    }
    let mut d = linalg::zeros(n, n);
    for (&(k, p, q, m), v) in &cat.counts {
        let term = powers[k].scale(&(v / factorial(k))).shift(&int(m * cat.step));
        d[p][q] = &d[p][q] + &term;
    }
    let labels = cat.generators.iter().map(|g| g.id.clone()).collect();
    FilteredComplex::from_parts(labels, cat.levels(), d, int(cat.step))
}

/// First `(p, q, k, shift)` where `Σ_{r, k₀+k₁=k} C(k,k₀) n^{k₀}_{pr} n^{k₁}_{rq}`
/// fails to vanish, with shifts added along the composite.
pub fn d_squared_identity(cat: &SyntheticFlowCategory) -> Option<(usize, usize, usize, i64)> {
    let mut by_source: BTreeMap<usize, Vec<(CountKey, &Rational)>> = BTreeMap::new();
    for (key, v) in &cat.counts {
        by_source.entry(key.1).or_default().push((*key, v));
    }
    let mut sums: BTreeMap<(usize, usize, usize, i64), Rational> = BTreeMap::new();
    for ((k0, p, r, m0), v0) in &cat.counts {
        if let Some(next) = by_source.get(r) {
            for ((k1, _, q, m1), v1) in next {
                let k = k0 + k1;
                *sums.entry((*p, *q, k, m0 + m1)).or_insert_with(Rational::zero) += binomial(k, *k0) * v0 * *v1;
            }
        }
    }
    sums.into_iter().find(|(_, v)| !v.is_zero()).map(|(key, _)| key)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredReport {
    pub identity_violation: Option<(usize, usize, usize, i64)>,
    /// α values at which the matrix square was nonzero.
    pub matrix_failures: Vec<NovikovSeries>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.identity_violation.is_none() && self.matrix_failures.is_empty()
    }
}

/// Checks the binomial identity and `D(α)² = 0` for three seeded α.
pub fn verify_d_squared(cat: &SyntheticFlowCategory) -> DSquaredReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let step = int(cat.step.max(1));
    let mut matrix_failures = Vec::new();
    for _ in 0..3 {
        let alpha = NovikovSeries::constant(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
            + NovikovSeries::monomial(rat(rng.gen_range(1..=5), rng.gen_range(1..=3)), step.clone());
        let c = differential_unchecked(cat, &alpha);
        let d = c.differential();
        let sq = linalg::mat_mul(d, d);
        if sq.iter().flatten().any(|x| !x.is_zero()) {
            matrix_failures.push(alpha);
        }
    }
    DSquaredReport { identity_violation: d_squared_identity(cat), matrix_failures }
}

/// `exp(M)` for nilpotent `M`.
fn exp_nilpotent(m: &Matrix, scale: &NovikovSeries) -> Matrix {
    let n = m.len();
    let sm: Matrix = m.iter().map(|row| row.iter().map(|x| x * scale).collect()).collect();
    let mut out = linalg::identity(n);
    let mut term = linalg::identity(n);
    for k in 1..=n {
        term = linalg::mat_mul(&term, &sm);
        if term.iter().flatten().all(NovikovSeries::is_zero) {
            break;
        }
        let inv_k = rat(1, k as i64);
        let scaled: Matrix = term.iter().map(|row| row.iter().map(|x| x.scale(&inv_k)).collect()).collect();
        term = scaled;
        out = add(&out, &term);
    }
    out
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Inverse of a unipotent matrix `I + N`.
fn unipotent_inverse(g: &Matrix) -> Matrix {
    let n = g.len();
    let nil = sub(g, &linalg::identity(n));
    let neg: Matrix = nil.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect();
    let mut out = linalg::identity(n);
    let mut term = linalg::identity(n);
    for _ in 0..n {
        term = linalg::mat_mul(&term, &neg);
        if term.iter().flatten().all(NovikovSeries::is_zero) {
            break;
        }
        out = add(&out, &term);
    }
    out
}

fn nonzero_small(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(1..=3);
    int(if rng.gen_bool(0.5) { v } else { -v })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCategoryOptions {
    pub size: usize,
    /// Largest `k` with possibly nonzero counts.
    pub depth: usize,
    /// Doubles the generators and adds the swap of the two copies as `Γ = ℤ/2`.
    pub gamma_swap: bool,
}

/// Count tables `nᵏ = k!·[αᵏ] e^{αS}·D₀·e^{−αS}`, `D₀ = G·E·G⁻¹` with `E` a
/// disjoint pairing (possibly wrapping once around `Π`), `G` unipotent and
/// `S` nilpotent, both strictly action-increasing. `S` is layered so that
/// its nilpotency index keeps every count at `k ≤ depth`.
pub fn random_consistent_category(seed: u64, opts: RandomCategoryOptions) -> SyntheticFlowCategory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = opts.size;
    let mut actions = Vec::with_capacity(n);
    let mut a = 0i64;
    for _ in 0..n {
        actions.push(a);
        a += rng.gen_range(1..=3);
    }
    let step = a.max(1) + rng.gen_range(0..=2);
    let tstep = NovikovSeries::t_pow(int(step));

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let pairs = if n >= 2 { rng.gen_range(0..=n / 2) } else { 0 };
    let mut e = linalg::zeros(n, n);
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for c in 0..pairs {
        let (x, y) = (order[2 * c], order[2 * c + 1]);
        let v = NovikovSeries::constant(nonzero_small(&mut rng));
        e[x][y] = if actions[x] < actions[y] { v } else { &v * &tstep };
        sources.push(x);
        targets.push(y);
    }
    let mut unpaired: Vec<usize> = (0..n).filter(|i| !sources.contains(i) && !targets.contains(i)).collect();
    unpaired.sort_unstable();
    targets.sort_unstable();

    let layers = opts.depth / 2 + 1;
    let layer: Vec<usize> = (0..n).map(|_| rng.gen_range(0..layers)).collect();
    let mut g_half = linalg::identity(n);
    let mut g_cross = linalg::zeros(n, n);
    let mut s_half = linalg::zeros(n, n);
    let mut s_cross = linalg::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                g_half[i][j] = NovikovSeries::constant(nonzero_small(&mut rng));
            }
            if opts.gamma_swap && rng.gen_bool(0.3) {
                g_cross[i][j] = NovikovSeries::constant(nonzero_small(&mut rng));
            }
            if layer[i] < layer[j] {
                if rng.gen_bool(0.5) {
                    s_half[i][j] = NovikovSeries::constant(nonzero_small(&mut rng));
                }
                if opts.gamma_swap && rng.gen_bool(0.3) {
                    s_cross[i][j] = NovikovSeries::constant(nonzero_small(&mut rng));
                }
            }
        }
    }

    let (g, s, e, generators, gamma, unpaired, targets) = if opts.gamma_swap {
        let block = |a: &Matrix, b: &Matrix| -> Matrix {
            let mut m = linalg::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = a[i][j].clone();
                    m[i + n][j + n] = a[i][j].clone();
                    m[i][j + n] = b[i][j].clone();
                    m[i + n][j] = b[i][j].clone();
                }
            }
            m
        };
        let zero = linalg::zeros(n, n);
        let generators = (0..2 * n)
            .map(|i| Generator {
                id: if i < n { format!("p{}", i + 1) } else { format!("p{}'", i - n + 1) },
                action: actions[i % n],
                label: format!("x{}", i % n + 1),
                gamma_orbit: Some(i % n),
            })
            .collect();
        let swap = SignedPermutation::new((0..2 * n).map(|i| ((i + n) % (2 * n), 1)).collect());
        let doubled = |v: &[usize]| {
            let mut out: Vec<usize> = v.iter().flat_map(|&i| [i, i + n]).collect();
            out.sort_unstable();
            out
        };
        (
            block(&g_half, &g_cross),
            block(&s_half, &s_cross),
            block(&e, &zero),
            generators,
            alloc::vec![swap],
            doubled(&unpaired),
            doubled(&targets),
        )
    } else {
        let generators = (0..n)
            .map(|i| Generator { id: format!("p{}", i + 1), action: actions[i], label: format!("x{}", i + 1), gamma_orbit: None })
            .collect();
        (g_half, s_half, e, generators, Vec::new(), unpaired, targets)
    };

    let g_inv = unipotent_inverse(&g);
    let d0 = linalg::mat_mul(&linalg::mat_mul(&g, &e), &g_inv);
    let mut counts = BTreeMap::new();
    let mut ad = d0;
    for k in 0..=opts.depth {
        if ad.iter().flatten().all(NovikovSeries::is_zero) {
            break;
        }
        for (p, row) in ad.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                for (exp, c) in x.terms() {
                    let m = (exp / int(step)).to_integer();
                    let m: i64 = m.try_into().expect("shift fits in i64");
                    counts.insert((k, p, q, m), c.clone());
                }
            }
        }
        // ad_S(X) = S·X − X·S
        ad = sub(&linalg::mat_mul(&s, &ad), &linalg::mat_mul(&ad, &s));
    }
    let mut cat = SyntheticFlowCategory::new(generators, step, counts, gamma);
    cat.construction = Some(Construction { g_inv, s, unpaired, targets });
    cat
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(actions: &[i64]) -> Vec<Generator> {
        actions
            .iter()
            .enumerate()
            .map(|(i, &a)| Generator { id: format!("p{}", i + 1), action: a, label: format!("x{}", i + 1), gamma_orbit: None })
            .collect()
    }

    /// `D₀ = E₁₂`, `S = E₂₃`.
    fn conjugation_family() -> SyntheticFlowCategory {
        let mut counts = BTreeMap::new();
        counts.insert((0, 0, 1, 0), int(1));
        counts.insert((1, 0, 2, 0), int(-1));
        SyntheticFlowCategory::new(gens(&[0, 1, 2]), 10, counts, Vec::new())
    }

    #[test]
    fn conjugation_family_differential() {
        let cat = conjugation_family();
        assert!(verify_d_squared(&cat).passed());
        let alpha: NovikovSeries = "1/2 + T^(1)".parse().unwrap();
        let c = build_differential(&cat, &alpha).unwrap();
        let d = c.differential();
        assert_eq!(d[0][1], NovikovSeries::one());
        assert_eq!(d[0][2], -alpha.clone());
        let c0 = build_differential(&cat, &NovikovSeries::zero()).unwrap();
        assert!(c0.differential()[0][2].is_zero());
    }

    #[test]
    fn broken_and_empty_categories() {
        let mut counts = BTreeMap::new();
        counts.insert((0, 0, 1, 0), int(1));
        counts.insert((0, 1, 2, 0), int(1));
        let bad = SyntheticFlowCategory::new(gens(&[0, 1, 2]), 10, counts, Vec::new());
        let rep = verify_d_squared(&bad);
        assert_eq!(rep.identity_violation, Some((0, 2, 0, 0)));
        assert_eq!(rep.matrix_failures.len(), 3);
        assert!(matches!(build_differential(&bad, &NovikovSeries::one()), Err(FlowError::InvariantViolation(_))));
        let empty = SyntheticFlowCategory::new(Vec::new(), 1, BTreeMap::new(), Vec::new());
        assert!(verify_d_squared(&empty).passed());
        let zero = SyntheticFlowCategory::new(gens(&[0, 1]), 3, BTreeMap::new(), Vec::new());
        let c = build_differential(&zero, &NovikovSeries::one()).unwrap();
        assert!(c.differential().iter().flatten().all(NovikovSeries::is_zero));
    }

    #[test]
    fn counts_must_raise_action() {
        let mut counts = BTreeMap::new();
        counts.insert((0, 1, 0, 0), int(1));
        let down = SyntheticFlowCategory::new(gens(&[0, 1]), 3, counts, Vec::new());
        assert!(matches!(down.check_structure(), Err(FlowError::InvariantViolation(_))));
        let mut counts = BTreeMap::new();
        counts.insert((0, 1, 0, 1), int(1));
        let wrapped = SyntheticFlowCategory::new(gens(&[0, 1]), 3, counts, Vec::new());
        assert!(wrapped.check_structure().is_ok());
    }

    #[test]
    fn random_categories() {
        let opts = RandomCategoryOptions { size: 6, depth: 0, gamma_swap: false };
        let flat = random_consistent_category(3, opts);
        assert_eq!(flat.max_k(), 0);
        let a = random_consistent_category(11, RandomCategoryOptions { size: 6, depth: 3, gamma_swap: false });
        let b = random_consistent_category(11, RandomCategoryOptions { size: 6, depth: 3, gamma_swap: false });
        assert_eq!(a.counts, b.counts);
        for seed in 0..200 {
            let opts = RandomCategoryOptions { size: 2 + (seed as usize % 6), depth: seed as usize % 4, gamma_swap: seed % 5 == 0 };
            let cat = random_consistent_category(seed, opts);
            assert!(cat.max_k() <= opts.depth);
            assert!(cat.check_structure().is_ok(), "seed {seed}");
            assert!(verify_d_squared(&cat).passed(), "seed {seed}");
        }
    }

    #[test]
    fn construction_cycles_are_cycles() {
        let alpha = NovikovSeries::constant(rat(2, 3));
        for seed in 0..20 {
            let cat = random_consistent_category(seed, RandomCategoryOptions { size: 6, depth: 2, gamma_swap: seed % 2 == 0 });
            let c = build_differential(&cat, &alpha).unwrap();
            for z in cat.homology_cycles(&alpha).unwrap().iter().chain(&cat.boundary_cycles(&alpha).unwrap()) {
                assert!(c.is_cycle(z));
            }
        }
    }
}
