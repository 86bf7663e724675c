//! Level-filtered complexes over Λ and their spectral invariants.
//!
//! Rows carry the differential: `d(p_i) = Σ_j D[i][j]·p_j`. The level of
//! `c·T^v·p` is `λ(p) − v` and the differential strictly lowers it.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FlowError;
use crate::linalg::{self, Matrix};
use crate::novikov::{int, rat, NovikovSeries, Rational};

/// Precision used when eliminating with non-monomial pivots.
pub const SPECTRAL_WORKING: i64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    labels: Vec<String>,
    levels: Vec<Rational>,
    differential: Matrix,
    /// Levels are compared against `{λ(p)} + step·ℤ`.
    step: Rational,
}

impl FilteredComplex {
    /// Builds a complex, checking shape, filtration and `d² = 0`.
    pub fn new(labels: Vec<String>, levels: Vec<Rational>, differential: Matrix, step: Rational) -> Result<Self, FlowError> {
        let n = labels.len();
        if levels.len() != n || differential.len() != n || differential.iter().any(|r| r.len() != n) {
            return Err(FlowError::Shape);
        }
        let c = Self::from_parts(labels, levels, differential, step);
        c.check_filtration()?;
        let sq = linalg::mat_mul(&c.differential, &c.differential);
        if sq.iter().flatten().any(|x| !x.is_zero()) {
            return Err(FlowError::InvariantViolation(String::from("d² ≠ 0")));
        }
        Ok(c)
    }

    pub(crate) fn from_parts(labels: Vec<String>, levels: Vec<Rational>, differential: Matrix, step: Rational) -> Self {
        FilteredComplex { labels, levels, differential, step }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    pub fn differential(&self) -> &Matrix {
        &self.differential
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Every entry `D[i][j]` has `λ(p_j) − val < λ(p_i)`.
    pub fn check_filtration(&self) -> Result<(), FlowError> {
        for (i, row) in self.differential.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if let Some(v) = x.val().finite() {
                    if &self.levels[j] - v >= self.levels[i] {
                        return Err(FlowError::FiltrationViolation { from: i, to: j });
                    }
                }
            }
        }
        Ok(())
    }

    /// Adds `δ` to every level.
    pub fn shifted(&self, delta: &Rational) -> Self {
        let mut c = self.clone();
        for l in &mut c.levels {
            *l += delta;
        }
        c
    }

    /// `d(x)` for a coefficient vector `x`.
    pub fn apply(&self, x: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let n = self.len();
        let mut out = alloc::vec![NovikovSeries::zero(); n];
        for (xi, row) in x.iter().zip(&self.differential) {
            if xi.is_zero() {
                continue;
            }
            for (o, d) in out.iter_mut().zip(row) {
                if !d.is_zero() {
                    *o = &*o + &(xi * d);
                }
            }
        }
        out
    }

    pub fn is_cycle(&self, x: &[NovikovSeries]) -> bool {
        x.len() == self.len() && self.apply(x).iter().all(NovikovSeries::is_zero)
    }

    /// `max_i (λ_i − val x_i)`, `None` for zero.
    pub fn level_of(&self, x: &[NovikovSeries]) -> Option<Rational> {
        x.iter()
            .zip(&self.levels)
            .filter_map(|(c, l)| c.val().finite().map(|v| l - v))
            .max()
    }

    /// Whether `value ∈ λ(p) + step·ℤ` for some generator `p`.
    pub fn in_action_spectrum(&self, value: &Rational) -> bool {
        self.levels.iter().any(|l| ((value - l) / &self.step).is_integer())
    }
}

/// Parses `"p3 + 2*p5 - 1/2*T^(1)*p1"`-style classes over the basis labels.
pub fn parse_class(complex: &FilteredComplex, text: &str) -> Result<Vec<NovikovSeries>, FlowError> {
    let mut x = alloc::vec![NovikovSeries::zero(); complex.len()];
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0i32;
    for ch in cleaned.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth -= 1;
                current.push(ch);
            }
            '+' | '-' if depth == 0 && !current.ends_with('^') => {
                if !current.is_empty() {
                    terms.push((negative, core::mem::take(&mut current)));
                }
                negative = ch == '-';
            }
            _ => current.push(ch),
        }
    }
    if !current.is_empty() {
        terms.push((negative, current));
    }
    if terms.is_empty() {
        return Err(FlowError::Parse(String::from("empty class")));
    }
    for (neg, term) in terms {
        let (coeff, label) = match term.rfind('*') {
            Some(pos) => (&term[..pos], &term[pos + 1..]),
            None => ("1", term.as_str()),
        };
        let i = complex.index_of(label).ok_or_else(|| FlowError::Parse(format!("unknown generator {label}")))?;
        let mut c: NovikovSeries = coeff.parse().map_err(|e| FlowError::Parse(format!("{e}")))?;
        if neg {
            c = -c;
        }
        x[i] = &x[i] + &c;
    }
    Ok(x)
}

/// Valuation-orthogonal basis of the image of `d`, in coordinates rescaled
/// by `T^{−λ_i}` so that `val` is minus the level.
struct ReducedImage {
    /// `(pivot coordinate, rescaled vector)`.
    basis: Vec<(usize, Vec<NovikovSeries>)>,
}

fn rescale(x: &[NovikovSeries], levels: &[Rational]) -> Vec<NovikovSeries> {
    x.iter().zip(levels).map(|(c, l)| c.shift(&-l.clone())).collect()
}

fn reduce_image(c: &FilteredComplex, working: &Rational) -> Result<ReducedImage, FlowError> {
    let mut rest: Vec<Vec<NovikovSeries>> = c
        .differential
        .iter()
        .map(|row| rescale(row, &c.levels))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let mut basis: Vec<(usize, Vec<NovikovSeries>)> = Vec::new();
    while !rest.is_empty() {
        // complete pivot: minimal valuation, then lowest vector, then lowest coordinate
        let mut best: Option<(Rational, usize, usize)> = None;
        for (vi, v) in rest.iter().enumerate() {
            for (ci, x) in v.iter().enumerate() {
                if let Some(val) = x.val().finite() {
                    if best.as_ref().map_or(true, |(b, _, _)| val < b) {
                        best = Some((val.clone(), vi, ci));
                    }
                }
            }
        }
        let Some((_, vi, ci)) = best else { break };
        let pivot = rest.remove(vi);
        let inv = pivot[ci].invert_to(working)?;
        let mut next = Vec::with_capacity(rest.len());
        for v in rest {
            let reduced = eliminate(&v, &pivot, ci, &inv, working);
            if reduced.iter().any(|x| !x.is_zero()) {
                next.push(reduced);
            }
        }
        for (_, b) in basis.iter_mut() {
            *b = eliminate(b, &pivot, ci, &inv, working);
        }
        rest = next;
        basis.push((ci, pivot));
    }
    Ok(ReducedImage { basis })
}

fn eliminate(v: &[NovikovSeries], pivot: &[NovikovSeries], ci: usize, inv: &NovikovSeries, working: &Rational) -> Vec<NovikovSeries> {
    if v[ci].is_zero() {
        return v.to_vec();
    }
    let f = &v[ci] * inv;
    let mut out: Vec<NovikovSeries> = v.iter().zip(pivot).map(|(a, b)| (a - &(&f * b)).truncate(working)).collect();
    out[ci] = NovikovSeries::zero();
    out
}

/// `inf{a : x is homologous to a chain of level ≤ a}`; `None` when `x` is
/// a boundary. The infimum is attained by reducing `x` against a
/// valuation-orthogonal basis of the image.
pub fn spectral_invariant(c: &FilteredComplex, x: &[NovikovSeries]) -> Result<Option<Rational>, FlowError> {
    if !c.is_cycle(x) {
        return Err(FlowError::NotACycle);
    }
    let spread = c.levels.iter().map(|l| if l < &Rational::zero() { -l.clone() } else { l.clone() }).max().unwrap_or_default();
    let working = int(SPECTRAL_WORKING) + spread * int(2);
    let image = reduce_image(c, &working)?;
    let mut y = rescale(x, &c.levels);
    for (ci, b) in &image.basis {
        let inv = b[*ci].invert_to(&working)?;
        y = eliminate(&y, b, *ci, &inv, &working);
    }
    Ok(y.iter().filter_map(|v| v.val().finite().map(|q| -q.clone())).max())
}

/// Signed permutation of a basis: `p_i ↦ sign·p_{σ(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignedPermutation {
    images: Vec<(usize, i8)>,
}

impl SignedPermutation {
    pub fn new(images: Vec<(usize, i8)>) -> Self {
        SignedPermutation { images }
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { images: (0..n).map(|i| (i, 1)).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[(usize, i8)] {
        &self.images
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        SignedPermutation {
            images: other
                .images
                .iter()
                .map(|&(j, s)| {
                    let (k, t) = self.images[j];
                    (k, s * t)
                })
                .collect(),
        }
    }

    pub fn apply(&self, x: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let mut out = alloc::vec![NovikovSeries::zero(); x.len()];
        for (xi, &(j, s)) in x.iter().zip(&self.images) {
            out[j] = if s < 0 { &out[j] - xi } else { &out[j] + xi };
        }
        out
    }

    fn is_bijective(&self) -> bool {
        let targets: BTreeSet<usize> = self.images.iter().map(|&(j, _)| j).collect();
        targets.len() == self.images.len() && targets.iter().all(|&j| j < self.images.len())
    }
}

/// All elements of the group generated by `gens`.
pub fn group_closure(n: usize, gens: &[SignedPermutation]) -> Vec<SignedPermutation> {
    let mut seen: BTreeSet<SignedPermutation> = BTreeSet::new();
    let mut frontier = alloc::vec![SignedPermutation::identity(n)];
    seen.insert(SignedPermutation::identity(n));
    while let Some(g) = frontier.pop() {
        for h in gens {
            let gh = h.compose(&g);
            if seen.insert(gh.clone()) {
                frontier.push(gh);
            }
        }
    }
    seen.into_iter().collect()
}

/// The subcomplex of Γ-invariant chains, on the basis of orbit averages.
/// Averages that vanish (sign representations) drop out.
pub fn gamma_invariant_subcomplex(c: &FilteredComplex, gens: &[SignedPermutation]) -> Result<FilteredComplex, FlowError> {
    let n = c.len();
    if gens.iter().any(|g| g.len() != n || !g.is_bijective()) {
        return Err(FlowError::NonEquivariant);
    }
    for g in gens {
        for (i, &(j, _)) in g.images.iter().enumerate() {
            if c.levels[i] != c.levels[j] {
                return Err(FlowError::NonEquivariant);
            }
        }
        for i in 0..n {
            let mut e = alloc::vec![NovikovSeries::zero(); n];
            e[i] = NovikovSeries::one();
            if g.apply(&c.apply(&e)) != c.apply(&g.apply(&e)) {
                return Err(FlowError::NonEquivariant);
            }
        }
    }
    let group = group_closure(n, gens);
    let order = rat(1, group.len() as i64);
    let mut covered = alloc::vec![false; n];
    let mut averages: Vec<(usize, Vec<NovikovSeries>)> = Vec::new();
    for i in 0..n {
        if covered[i] {
            continue;
        }
        let mut e = alloc::vec![NovikovSeries::zero(); n];
        e[i] = NovikovSeries::one();
        let mut avg = alloc::vec![NovikovSeries::zero(); n];
        for g in &group {
            covered[g.images[i].0] = true;
            let ge = g.apply(&e);
            avg = avg.iter().zip(&ge).map(|(a, b)| a + b).collect();
        }
        let avg: Vec<NovikovSeries> = avg.iter().map(|a| a.scale(&order)).collect();
        if avg.iter().any(|a| !a.is_zero()) {
            averages.push((i, avg));
        }
    }
    let m = averages.len();
    let mut d = linalg::zeros(m, m);
    for (a, (_, va)) in averages.iter().enumerate() {
        let image = c.apply(va);
        let mut rebuilt = alloc::vec![NovikovSeries::zero(); n];
        for (b, (rep, vb)) in averages.iter().enumerate() {
            let coef = &image[*rep] * &vb[*rep].invert()?;
            if !coef.is_zero() {
                rebuilt = rebuilt.iter().zip(vb).map(|(r, v)| r + &(&coef * v)).collect();
            }
            d[a][b] = coef;
        }
        if rebuilt != image {
            return Err(FlowError::NonEquivariant);
        }
    }
    let labels = averages.iter().map(|(rep, _)| format!("avg({})", c.labels[*rep])).collect();
    let levels = averages.iter().map(|(rep, _)| c.levels[*rep].clone()).collect();
    Ok(FilteredComplex::from_parts(labels, levels, d, c.step.clone()))
}

/// A bilinear product `C ⊗ C' → C''` for a right factor `C'` with zero
/// differential: `images[j]` is the matrix of `x ↦ μ(x, p'_j)`.
#[derive(Clone, Debug)]
pub struct ProductTable {
    pub images: Vec<Matrix>,
}

impl ProductTable {
    pub fn apply(&self, x: &[NovikovSeries], y: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let n = self.images.first().map_or(0, |m| m.first().map_or(0, Vec::len));
        let mut out = alloc::vec![NovikovSeries::zero(); n];
        for (yj, m) in y.iter().zip(&self.images) {
            if yj.is_zero() {
                continue;
            }
            for (xi, row) in x.iter().zip(m) {
                if xi.is_zero() {
                    continue;
                }
                let c = yj * xi;
                for (o, e) in out.iter_mut().zip(row) {
                    if !e.is_zero() {
                        *o = &*o + &(&c * e);
                    }
                }
            }
        }
        out
    }
}

/// Checks that `μ` is a chain map into `target` and never raises
/// `λ(p) + λ'(p')`.
pub fn check_product(left: &FilteredComplex, right: &FilteredComplex, target: &FilteredComplex, table: &ProductTable) -> Result<(), FlowError> {
    let incompatible = |m: &str| Err(FlowError::IncompatibleProduct(String::from(m)));
    if right.differential.iter().flatten().any(|x| !x.is_zero()) {
        return incompatible("right factor must have zero differential");
    }
    if table.images.len() != right.len() {
        return incompatible("one image matrix per right generator");
    }
    for (j, m) in table.images.iter().enumerate() {
        if m.len() != left.len() || m.iter().any(|r| r.len() != target.len()) {
            return incompatible("image matrix has the wrong shape");
        }
        if linalg::mat_mul(&left.differential, m) != linalg::mat_mul(m, &target.differential) {
            return incompatible("product is not a chain map");
        }
        for (i, row) in m.iter().enumerate() {
            for (l, e) in row.iter().enumerate() {
                if let Some(v) = e.val().finite() {
                    if &target.levels[l] - v > &left.levels[i] + &right.levels[j] {
                        return incompatible("product raises the level");
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubadditivitySample {
    pub left: Option<Rational>,
    pub right: Option<Rational>,
    pub product: Option<Rational>,
}

impl SubadditivitySample {
    /// `c(x·x') ≤ c(x) + c(x')`, with `None` as `−∞`.
    pub fn holds(&self) -> bool {
        match (&self.product, &self.left, &self.right) {
            (None, _, _) => true,
            (Some(_), None, _) | (Some(_), _, None) => false,
            (Some(p), Some(a), Some(b)) => p <= &(a + b),
        }
    }
}

pub fn verify_subadditivity(
    left: &FilteredComplex,
    right: &FilteredComplex,
    target: &FilteredComplex,
    table: &ProductTable,
    classes: &[(Vec<NovikovSeries>, Vec<NovikovSeries>)],
) -> Result<Vec<SubadditivitySample>, FlowError> {
    check_product(left, right, target, table)?;
    classes
        .iter()
        .map(|(x, y)| {
            Ok(SubadditivitySample {
                left: spectral_invariant(left, x)?,
                right: spectral_invariant(right, y)?,
                product: spectral_invariant(target, &table.apply(x, y))?,
            })
        })
        .collect()
}

/// A compatible product `C ⊗ C' → C` with `C'` of zero differential and
/// levels in `[0, 3]`: each `p'_j` acts by `T^{δ_j}(I + dh_j + h_j d)` for
/// random level-non-increasing `h_j` and `δ_j ≥ 0`.
pub fn random_product(c: &FilteredComplex, right_size: usize, seed: u64) -> (FilteredComplex, ProductTable) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.len();
    let right_levels: Vec<Rational> = (0..right_size).map(|_| int(rng.gen_range(0..=3))).collect();
    let right = FilteredComplex::from_parts(
        (0..right_size).map(|j| format!("e{}", j + 1)).collect(),
        right_levels,
        linalg::zeros(right_size, right_size),
        c.step.clone(),
    );
    let step = c.step.clone();
    let mut images = Vec::with_capacity(right_size);
    for _ in 0..right_size {
        let mut h = linalg::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.3) {
                    // smallest multiple of the step keeping λ_j − v ≤ λ_i
                    let gap = &c.levels[j] - &c.levels[i];
                    let m = (gap / &step).ceil().to_integer().max(0.into());
                    let v = Rational::from_integer(m) * &step + int(rng.gen_range(0..=1)) * &step;
                    h[i][j] = NovikovSeries::monomial(int(rng.gen_range(-2..=2)), v);
                }
            }
        }
        let dh = linalg::mat_mul(&c.differential, &h);
        let hd = linalg::mat_mul(&h, &c.differential);
        let delta = &step * int(rng.gen_range(0..=1));
        let phi: Matrix = linalg::identity(n)
            .iter()
            .zip(&dh)
            .zip(&hd)
            .map(|((a, b), c2)| a.iter().zip(b).zip(c2).map(|((x, y), z)| (&(x + y) + z).shift(&delta)).collect())
            .collect();
        images.push(phi);
    }
    (right, ProductTable { images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> NovikovSeries {
        t.parse().unwrap()
    }

    fn complex(levels: &[i64], entries: &[(usize, usize, &str)]) -> FilteredComplex {
        let n = levels.len();
        let mut d = linalg::zeros(n, n);
        for &(i, j, v) in entries {
            d[i][j] = s(v);
        }
        FilteredComplex::new(
            (0..n).map(|i| format!("p{}", i + 1)).collect(),
            levels.iter().map(|&l| int(l)).collect(),
            d,
            int(1),
        )
        .unwrap()
    }

    fn basis(n: usize, i: usize) -> Vec<NovikovSeries> {
        let mut e = alloc::vec![NovikovSeries::zero(); n];
        e[i] = NovikovSeries::one();
        e
    }

    #[test]
    fn zero_differential_levels() {
        let c = complex(&[2, -1, 5], &[]);
        for i in 0..3 {
            assert_eq!(spectral_invariant(&c, &basis(3, i)).unwrap(), Some(c.levels()[i].clone()));
        }
        let x = alloc::vec![s("T^(1)"), s("0"), s("0")];
        assert_eq!(spectral_invariant(&c, &x).unwrap(), Some(int(1)));
    }

    #[test]
    fn killed_pair_and_survivor() {
        let c = complex(&[2, 1, 0], &[(0, 1, "1")]);
        assert_eq!(spectral_invariant(&c, &basis(3, 2)).unwrap(), Some(int(0)));
        assert_eq!(spectral_invariant(&c, &basis(3, 1)).unwrap(), None);
        assert_eq!(spectral_invariant(&c, &basis(3, 0)), Err(FlowError::NotACycle));
        assert!(matches!(
            FilteredComplex::new(alloc::vec!["a".into(), "b".into()], alloc::vec![int(0), int(1)], alloc::vec![alloc::vec![s("0"), s("1")], alloc::vec![s("0"), s("0")]], int(1)),
            Err(FlowError::FiltrationViolation { .. })
        ));
    }

    /// `d(p1) = p2 + T·p3`; `p2 + p4` improves to `−T·p3 + p4`.
    fn improvable() -> (FilteredComplex, Vec<NovikovSeries>) {
        let c = complex(&[3, 2, 2, 0], &[(0, 1, "1"), (0, 2, "T^(1)")]);
        let x = alloc::vec![s("0"), s("1"), s("0"), s("1")];
        (c, x)
    }

    #[test]
    fn boundary_improves_representative_brute_force() {
        let (c, x) = improvable();
        let got = spectral_invariant(&c, &x).unwrap();
        // brute force over x + a·d(p1) with a = c·T^v, v < 10
        let d1 = c.apply(&basis(4, 0));
        let mut best = c.level_of(&x);
        for coef in -3..=3 {
            for v in -5..10 {
                let a = NovikovSeries::monomial(int(coef), int(v));
                let y: Vec<NovikovSeries> = (0..4).map(|i| &x[i] + &(&a * &d1[i])).collect();
                let lvl = c.level_of(&y);
                if lvl < best {
                    best = lvl;
                }
            }
        }
        assert_eq!(got, best);
        assert_eq!(got, Some(int(1)));
        assert_eq!(c.level_of(&x), Some(int(2)));
    }

    #[test]
    fn shift_moves_invariants() {
        let (c, x) = improvable();
        let base = spectral_invariant(&c, &x).unwrap().unwrap();
        let delta = rat(7, 3);
        assert_eq!(spectral_invariant(&c.shifted(&delta), &x).unwrap(), Some(base + delta));
    }

    #[test]
    fn class_parsing() {
        let c = complex(&[0, 1, 2], &[]);
        let x = parse_class(&c, "p3 + 2*p1 - 1/2*T^(1)*p2").unwrap();
        assert_eq!(x, alloc::vec![s("2"), s("-1/2*T^(1)"), s("1")]);
        assert!(parse_class(&c, "p9").is_err());
    }

    #[test]
    fn gamma_invariants() {
        let c = complex(&[2, 2, 1, 1], &[(0, 2, "1"), (1, 3, "1")]);
        let trivial = gamma_invariant_subcomplex(&c, &[]).unwrap();
        assert_eq!(trivial.differential(), c.differential());
        let swap = SignedPermutation::new(alloc::vec![(1, 1), (0, 1), (3, 1), (2, 1)]);
        let inv = gamma_invariant_subcomplex(&c, &[swap]).unwrap();
        assert_eq!(inv.len(), 2);
        assert_eq!(inv.differential()[0][1], NovikovSeries::one());
        let sign = SignedPermutation::new(alloc::vec![(0, 1), (1, 1), (2, 1), (3, -1)]);
        let z = complex(&[0, 0, 0, 0], &[]);
        assert_eq!(gamma_invariant_subcomplex(&z, &[sign.clone()]).unwrap().len(), 3);
        assert_eq!(gamma_invariant_subcomplex(&c, &[sign]), Err(FlowError::NonEquivariant));
    }

    #[test]
    fn subadditivity_examples() {
        let zero = complex(&[0], &[]);
        let id = ProductTable { images: alloc::vec![linalg::identity(1)] };
        let samples = verify_subadditivity(&zero, &zero, &zero, &id, &[(basis(1, 0), basis(1, 0))]).unwrap();
        assert_eq!(samples[0].product, Some(int(0)));
        assert!(samples[0].holds());

        let (c, x) = improvable();
        let delta = int(2);
        let scalar: Matrix = linalg::identity(4).iter().map(|r| r.iter().map(|x| x.shift(&delta)).collect()).collect();
        let samples = verify_subadditivity(&c, &zero, &c, &ProductTable { images: alloc::vec![scalar] }, &[(x, basis(1, 0))]).unwrap();
        let smp = &samples[0];
        assert_eq!(smp.product.clone().unwrap() + &delta, smp.left.clone().unwrap() + smp.right.clone().unwrap());

        let raising = ProductTable { images: alloc::vec![linalg::identity(4)] };
        let high = complex(&[-1], &[]);
        assert!(matches!(check_product(&c, &high, &c, &raising), Err(FlowError::IncompatibleProduct(_))));
    }
}
