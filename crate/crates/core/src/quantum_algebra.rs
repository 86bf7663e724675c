//! Finite-dimensional unital commutative algebras over the Novikov field.
//!
//! The main customer is the trivial-sector algebra of `QH*_orb(Sym^k ℙ¹)`:
//! the `Sym_k`-invariants of `QH*(ℙ¹)^{⊗k}` with `QH*(ℙ¹) = Λ[H]/(H² − T^ω)`.
//! Idempotents are found through the spectrum of a primitive element (roots
//! of its characteristic polynomial, read off the Newton polygon and lifted
//! T-adically), then polished with `e ↦ 3e² − 2e³`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, Matrix};
use crate::novikov::{int, rat, NovikovError, NovikovSeries, Rational, Valuation};
use crate::poly;

/// Basis size above which [`tensor_power`] refuses to build.
pub const DEFAULT_BASIS_CAP: usize = 4096;
/// Dimension up to which associativity is checked on every basis triple.
pub const FULL_ASSOCIATIVITY_DIM: usize = 32;
const SAMPLED_TRIPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("basis size {size} exceeds the cap {cap}")]
    DimensionCap { size: usize, cap: usize },
    #[error("structure table has the wrong shape")]
    Shape,
    #[error("product of basis elements {0} and {1} is not commutative")]
    NotCommutative(usize, usize),
    #[error("basis triple ({0}, {1}, {2}) violates associativity")]
    NotAssociative(usize, usize, usize),
    #[error("unit element does not act as the identity on basis element {0}")]
    BadUnit(usize),
    #[error("product of basis elements {0} and {1} is not homogeneous of the expected degree")]
    GradingMismatch(usize, usize),
    #[error("group action does not preserve the structure constants")]
    NotInvariant,
    #[error("idempotent iteration stalled: defect valuation {current} after {previous}")]
    NoConvergence { previous: Valuation, current: Valuation },
    #[error("leading-order algebra does not split over the rationals: {0}")]
    ResidueNotSplit(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    coords: Vec<NovikovSeries>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<NovikovSeries>) -> Self {
        AlgebraElement { coords }
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraElement { coords: (0..dim).map(|_| NovikovSeries::zero()).collect() }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coords[i] = NovikovSeries::one();
        e
    }

    pub fn coords(&self) -> &[NovikovSeries] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(NovikovSeries::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &NovikovSeries) -> Self {
        Self::new(self.coords.iter().map(|a| a * c).collect())
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::new(self.coords.iter().map(|a| a.scale(q)).collect())
    }

    pub fn truncate(&self, t: &Rational) -> Self {
        Self::new(self.coords.iter().map(|a| a.truncate(t)).collect())
    }

    /// Minimum over coordinate valuations.
    pub fn val(&self) -> Valuation {
        self.coords.iter().map(NovikovSeries::val).min().unwrap_or(Valuation::Infinity)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.agrees_with(b))
    }
}

/// Degrees of basis elements, with `deg(T^a) = 4a/ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub degrees: Vec<Rational>,
    pub omega: Rational,
}

impl Grading {
    pub fn t_degree(&self, a: &Rational) -> Rational {
        a * int(4) / &self.omega
    }
}

#[derive(Clone, Debug)]
pub struct FiniteCommAlgebra {
    labels: Vec<String>,
    /// `products[i][j]` is `e_i·e_j` as sparse `(k, c_{ij}^k)`.
    products: Vec<Vec<Vec<(usize, NovikovSeries)>>>,
    unit: AlgebraElement,
    grading: Option<Grading>,
}

fn sparse(e: &AlgebraElement) -> Vec<(usize, NovikovSeries)> {
    e.coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

impl FiniteCommAlgebra {
    /// Builds and verifies an algebra from its dense product table.
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<AlgebraElement>>,
        unit: AlgebraElement,
        grading: Option<Grading>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|e| e.dim() != n)) || unit.dim() != n {
            return Err(AlgebraError::Shape);
        }
        if grading.as_ref().is_some_and(|g| g.degrees.len() != n) {
            return Err(AlgebraError::Shape);
        }
        let products = table.iter().map(|row| row.iter().map(sparse).collect()).collect();
        let alg = FiniteCommAlgebra { labels, products, unit, grading };
        alg.verify()?;
        Ok(alg)
    }

    fn verify(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..i {
                if self.products[i][j] != self.products[j][i] {
                    return Err(AlgebraError::NotCommutative(i, j));
                }
            }
            let ei = AlgebraElement::basis(n, i);
            if !self.mul(&self.unit, &ei).agrees_with(&ei) {
                return Err(AlgebraError::BadUnit(i));
            }
        }
        if let Some(g) = &self.grading {
            for i in 0..n {
                for j in 0..n {
                    let expected = &g.degrees[i] + &g.degrees[j];
                    for (k, c) in &self.products[i][j] {
                        for (a, _) in c.terms() {
                            if &g.degrees[*k] + g.t_degree(a) != expected {
                                return Err(AlgebraError::GradingMismatch(i, j));
                            }
                        }
                    }
                }
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<(), AlgebraError> {
            let ij = self.mul(&AlgebraElement::basis(n, i), &AlgebraElement::basis(n, j));
            let jk = self.mul(&AlgebraElement::basis(n, j), &AlgebraElement::basis(n, k));
            let left = self.mul(&ij, &AlgebraElement::basis(n, k));
            let right = self.mul(&AlgebraElement::basis(n, i), &jk);
            if left.agrees_with(&right) {
                Ok(())
            } else {
                Err(AlgebraError::NotAssociative(i, j, k))
            }
        };
        if n <= FULL_ASSOCIATIVITY_DIM {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, NovikovSeries)] {
        &self.products[i][j]
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), i)
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let n = self.dim();
        let mut out = AlgebraElement::zero(n);
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi * yj;
                for (k, c) in &self.products[i][j] {
                    out.coords[*k] = &out.coords[*k] + &(&xy * c);
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y`; column `j` holds `x·e_j`.
    pub fn multiplication_matrix(&self, x: &AlgebraElement) -> Matrix {
        let n = self.dim();
        let mut m = linalg::zeros(n, n);
        for j in 0..n {
            let col = self.mul(x, &self.basis_element(j));
            for (i, c) in col.coords.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m
    }

    /// `x + c·1`.
    pub fn add_scalar(&self, x: &AlgebraElement, c: &NovikovSeries) -> AlgebraElement {
        x.add(&self.unit.scale(c))
    }
}

/// `QH*(ℙ¹) = Λ[1, H]/(H² − T^ω)`, graded by `deg 1 = 0`, `deg H = 2`.
pub fn qh_p1(omega: &Rational) -> FiniteCommAlgebra {
    let one = AlgebraElement::basis(2, 0);
    let h = AlgebraElement::basis(2, 1);
    let hh = AlgebraElement::new(alloc::vec![NovikovSeries::t_pow(omega.clone()), NovikovSeries::zero()]);
    let table = alloc::vec![alloc::vec![one.clone(), h.clone()], alloc::vec![h, hh]];
    let grading = Grading { degrees: alloc::vec![int(0), int(2)], omega: omega.clone() };
    FiniteCommAlgebra::new(alloc::vec![String::from("1"), String::from("H")], table, one, Some(grading))
        .expect("QH(P1) is a commutative graded algebra")
}

/// Index ↔ tuple conversion for `A^{⊗k}`; the first factor is most significant.
fn tuple_of(mut idx: usize, base: usize, k: usize) -> Vec<usize> {
    let mut t = alloc::vec![0; k];
    for slot in (0..k).rev() {
        t[slot] = idx % base;
        idx /= base;
    }
    t
}

fn index_of(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

/// `A^{⊗k}` with componentwise structure constants.
pub fn tensor_power(a: &FiniteCommAlgebra, k: usize, cap: usize) -> Result<FiniteCommAlgebra, AlgebraError> {
    assert!(k >= 1, "tensor power needs k ≥ 1");
    let d = a.dim();
    let size = d.checked_pow(k as u32).filter(|&s| s <= cap).ok_or(AlgebraError::DimensionCap {
        size: d.saturating_pow(k as u32),
        cap,
    })?;
    if k == 1 {
        return Ok(a.clone());
    }
    let labels: Vec<String> = (0..size)
        .map(|i| {
            let t = tuple_of(i, d, k);
            t.iter().map(|&x| a.labels[x].as_str()).collect::<Vec<_>>().join("⊗")
        })
        .collect();
    let mut table = Vec::with_capacity(size);
    for i in 0..size {
        let ti = tuple_of(i, d, k);
        let mut row = Vec::with_capacity(size);
        for j in 0..size {
            let tj = tuple_of(j, d, k);
            // expand Π_slot (e_{ti}·e_{tj}) over all choices of output components
            let mut acc: Vec<(Vec<usize>, NovikovSeries)> = alloc::vec![(Vec::new(), NovikovSeries::one())];
            for slot in 0..k {
                let prod = a.basis_product(ti[slot], tj[slot]);
                let mut next = Vec::with_capacity(acc.len() * prod.len());
                for (prefix, c) in &acc {
                    for (out, pc) in prod {
                        let mut p = prefix.clone();
                        p.push(*out);
                        next.push((p, c * pc));
                    }
                }
                acc = next;
            }
            let mut e = AlgebraElement::zero(size);
            for (t, c) in acc {
                let idx = index_of(&t, d);
                e.coords[idx] = &e.coords[idx] + &c;
            }
            row.push(e);
        }
        table.push(row);
    }
    let unit = tensor_elements(&alloc::vec![a.unit.clone(); k]);
    let grading = a.grading.as_ref().map(|g| Grading {
        degrees: (0..size)
            .map(|i| tuple_of(i, d, k).iter().fold(Rational::zero(), |acc, &x| acc + &g.degrees[x]))
            .collect(),
        omega: g.omega.clone(),
    });
    FiniteCommAlgebra::new(labels, table, unit, grading)
}

/// `x₁ ⊗ … ⊗ x_k` in the tensor-power basis.
pub fn tensor_elements(factors: &[AlgebraElement]) -> AlgebraElement {
    let d = factors.first().map_or(1, AlgebraElement::dim);
    let k = factors.len();
    let size = d.pow(k as u32);
    let mut out = AlgebraElement::zero(size);
    for (idx, slot) in out.coords.iter_mut().enumerate() {
        let t = tuple_of(idx, d, k);
        let mut c = NovikovSeries::one();
        for (f, &x) in factors.iter().zip(&t) {
            c = &c * &f.coords[x];
            if c.is_zero() {
                break;
            }
        }
        *slot = c;
    }
    out
}

/// Generators of the `Sym_k` action on the basis of `A^{⊗k}` (adjacent
/// transpositions of tensor factors), as basis permutations.
pub fn sym_action(base_dim: usize, k: usize) -> Vec<Vec<usize>> {
    let size = base_dim.pow(k as u32);
    (0..k.saturating_sub(1))
        .map(|s| {
            (0..size)
                .map(|i| {
                    let mut t = tuple_of(i, base_dim, k);
                    t.swap(s, s + 1);
                    index_of(&t, base_dim)
                })
                .collect()
        })
        .collect()
}

/// The invariant subalgebra of a permutation action on the basis, with basis
/// the orbit sums.
#[derive(Clone, Debug)]
pub struct InvariantSubalgebra {
    pub algebra: FiniteCommAlgebra,
    /// Ambient basis indices of each orbit, sorted; the first is the representative.
    pub orbits: Vec<Vec<usize>>,
    pub ambient_dim: usize,
}

impl InvariantSubalgebra {
    /// Coordinates in the ambient algebra of an invariant element.
    pub fn expand(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.ambient_dim);
        for (orbit, c) in self.orbits.iter().zip(&x.coords) {
            for &i in orbit {
                out.coords[i] = c.clone();
            }
        }
        out
    }

    /// Restricts an invariant ambient element to orbit-sum coordinates.
    pub fn restrict(&self, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let mut coords = Vec::with_capacity(self.orbits.len());
        for orbit in &self.orbits {
            let c = &x.coords[orbit[0]];
            if orbit.iter().any(|&i| !x.coords[i].agrees_with(c)) {
                return Err(AlgebraError::NotInvariant);
            }
            coords.push(c.clone());
        }
        Ok(AlgebraElement::new(coords))
    }
}

pub fn invariant_subalgebra(ambient: &FiniteCommAlgebra, action: &[Vec<usize>]) -> Result<InvariantSubalgebra, AlgebraError> {
    let n = ambient.dim();
    if action.iter().any(|p| p.len() != n) {
        return Err(AlgebraError::Shape);
    }
    let mut orbit_of = alloc::vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = alloc::vec![start];
        orbit_of[start] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let x = members[cursor];
            cursor += 1;
            for g in action {
                let y = g[x];
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = id;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    let m = orbits.len();
    let labels = orbits
        .iter()
        .map(|o| {
            if o.len() == 1 {
                ambient.labels[o[0]].clone()
            } else {
                o.iter().map(|&i| ambient.labels[i].as_str()).collect::<Vec<_>>().join(" + ")
            }
        })
        .collect();
    let sums: Vec<AlgebraElement> = orbits
        .iter()
        .map(|o| {
            let mut e = AlgebraElement::zero(n);
            for &i in o {
                e.coords[i] = NovikovSeries::one();
            }
            e
        })
        .collect();
    let partial = InvariantSubalgebra {
        algebra: ambient.clone(),
        orbits: orbits.clone(),
        ambient_dim: n,
    };
    let mut table = Vec::with_capacity(m);
    for a in &sums {
        let mut row = Vec::with_capacity(m);
        for b in &sums {
            row.push(partial.restrict(&ambient.mul(a, b))?);
        }
        table.push(row);
    }
    let unit = partial.restrict(ambient.unit())?;
    let grading = ambient.grading.as_ref().map(|g| Grading {
        degrees: orbits.iter().map(|o| g.degrees[o[0]].clone()).collect(),
        omega: g.omega.clone(),
    });
    let algebra = FiniteCommAlgebra::new(labels, table, unit, grading)?;
    Ok(InvariantSubalgebra { algebra, orbits, ambient_dim: n })
}

/// Valuations of the idempotent defect `e² − e` at each step of a lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftTrace {
    pub defect_valuations: Vec<Valuation>,
}

/// Lifts an approximate idempotent by `e ↦ 3e² − 2e³` until `e² = e`
/// modulo `T^working`. The defect valuation must at least double per step.
pub fn idempotent_lift(
    a: &FiniteCommAlgebra,
    e0: &AlgebraElement,
    working: &Rational,
) -> Result<(AlgebraElement, LiftTrace), AlgebraError> {
    let mut e = e0.clone();
    let mut trace = Vec::new();
    for _ in 0..64 {
        let e2 = a.mul(&e, &e);
        let defect = e2.sub(&e).truncate(working);
        let v = defect.val();
        trace.push(v.clone());
        if v.is_infinite() {
            return Ok((e, LiftTrace { defect_valuations: trace }));
        }
        let ok = match (&trace.get(trace.len().wrapping_sub(2)), &v) {
            (_, Valuation::Finite(cur)) if !cur.is_positive() => false,
            (Some(Valuation::Finite(prev)), Valuation::Finite(cur)) => cur >= &(prev * int(2)),
            _ => true,
        };
        if !ok {
            let previous = if trace.len() >= 2 { trace[trace.len() - 2].clone() } else { v.clone() };
            return Err(AlgebraError::NoConvergence { previous, current: v });
        }
        let e3 = a.mul(&e2, &e);
        e = e2.scale_rational(&int(3)).sub(&e3.scale_rational(&int(2))).truncate(working);
    }
    let last = trace.last().cloned().unwrap_or(Valuation::Infinity);
    Err(AlgebraError::NoConvergence { previous: last.clone(), current: last })
}

/// Characteristic polynomial `det(t·I − M)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial(m: &Matrix) -> Vec<NovikovSeries> {
    let n = m.len();
    let mut coeffs = alloc::vec![NovikovSeries::zero(); n + 1];
    coeffs[n] = NovikovSeries::one();
    let mut mk = linalg::zeros(n, n);
    for k in 1..=n {
        // M_k = M·M_{k−1} + c_{n−k+1}·I
        let mut next = linalg::mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[n - k + 1];
        }
        mk = next;
        let am = linalg::mat_mul(m, &mk);
        let trace = (0..n).fold(NovikovSeries::zero(), |acc, i| &acc + &am[i][i]);
        coeffs[n - k] = trace.scale(&-rat(1, k as i64));
    }
    coeffs
}

fn primitive_candidates(a: &FiniteCommAlgebra) -> Vec<AlgebraElement> {
    let n = a.dim();
    let mut out: Vec<AlgebraElement> = (0..n).map(|i| a.basis_element(i)).collect();
    for s in 2..=4i64 {
        let coords = (0..n).map(|i| NovikovSeries::constant(int(((i as i64) * s) % 7 + 1))).collect();
        out.push(AlgebraElement::new(coords));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1de);
    for _ in 0..4 {
        let coords = (0..n).map(|_| NovikovSeries::constant(int(rng.gen_range(1..=997)))).collect();
        out.push(AlgebraElement::new(coords));
    }
    out
}

/// Complete list of indecomposable idempotents, each polished to `T^working`.
pub fn idempotent_decomposition(a: &FiniteCommAlgebra, working: &Rational) -> Result<Vec<AlgebraElement>, AlgebraError> {
    let n = a.dim();
    if n == 1 {
        return Ok(alloc::vec![a.unit().clone()]);
    }
    let mut reasons = Vec::new();
    for x in primitive_candidates(a) {
        let m = a.multiplication_matrix(&x);
        match split_spectrum(&m, working) {
            Ok(roots) => return lagrange_idempotents(a, &x, &roots, working),
            Err(err) => reasons.push(err),
        }
        // a residue shared by every eigenvalue hides the splitting: subtract the mean eigenvalue
        let trace = (0..n).fold(NovikovSeries::zero(), |acc, i| &acc + &m[i][i]);
        let centered = a.add_scalar(&x, &-trace.scale(&rat(1, n as i64)));
        match split_spectrum(&a.multiplication_matrix(&centered), working) {
            Ok(roots) => return lagrange_idempotents(a, &centered, &roots, working),
            Err(err) => reasons.push(err),
        }
    }
    Err(AlgebraError::ResidueNotSplit(reasons.join("; ")))
}

fn split_spectrum(m: &Matrix, working: &Rational) -> Result<Vec<NovikovSeries>, String> {
    let chi = characteristic_polynomial(m);
    match poly::split_roots(&chi, working) {
        Ok(r) if r.len() == m.len() => Ok(r),
        Ok(r) => Err(format!("{} of {} eigenvalues split", r.len(), m.len())),
        Err(err) => Err(format!("{err}")),
    }
}

/// `e_i = Π_{j≠i} (x − ρ_j)/(ρ_i − ρ_j)`, then lifted.
fn lagrange_idempotents(
    a: &FiniteCommAlgebra,
    x: &AlgebraElement,
    roots: &[NovikovSeries],
    working: &Rational,
) -> Result<Vec<AlgebraElement>, AlgebraError> {
    let mut out = Vec::with_capacity(roots.len());
    for (i, ri) in roots.iter().enumerate() {
        let mut e = a.unit().clone();
        for (j, rj) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            let factor = a.add_scalar(x, &-rj);
            let denom = (ri - rj).invert_to(working)?;
            e = a.mul(&e, &factor).scale(&denom);
        }
        let (lifted, _) = idempotent_lift(a, &e, working)?;
        out.push(lifted);
    }
    Ok(out)
}

pub fn idempotent_valuations(idempotents: &[AlgebraElement]) -> Vec<Valuation> {
    idempotents.iter().map(AlgebraElement::val).collect()
}

/// Λ-rank of `e·A`.
pub fn summand_rank(a: &FiniteCommAlgebra, e: &AlgebraElement, working: &Rational) -> Result<usize, AlgebraError> {
    Ok(linalg::rank(&a.multiplication_matrix(e), working)?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradeError {
    #[error("algebra carries no grading")]
    Ungraded,
    #[error("element is zero")]
    Zero,
    #[error("element is not homogeneous")]
    NonHomogeneous,
}

/// Common degree of every term of `x`.
pub fn grade_check(a: &FiniteCommAlgebra, x: &AlgebraElement) -> Result<Rational, GradeError> {
    let g = a.grading().ok_or(GradeError::Ungraded)?;
    let mut degree: Option<Rational> = None;
    for (i, c) in x.coords().iter().enumerate() {
        for (e, _) in c.terms() {
            let d = &g.degrees[i] + g.t_degree(e);
            match &degree {
                None => degree = Some(d),
                Some(prev) if *prev != d => return Err(GradeError::NonHomogeneous),
                _ => {}
            }
        }
    }
    degree.ok_or(GradeError::Zero)
}

/// How a finite sequence of ratios `r_k = val(e_k)/k` is judged to tend to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrendPolicy {
    /// When set, also require `|r_k| ≤ envelope/√k`, checked as `r_k²·k ≤ envelope²`.
    pub envelope: Option<Rational>,
}

/// `|r_k|` non-increasing and either ending at zero or strictly smaller at
/// the end than at the start. A lone nonzero sample shows no decay and fails.
pub fn sublinear_trend(samples: &[(usize, Rational)], policy: &TrendPolicy) -> bool {
    let mags: Vec<Rational> = samples.iter().map(|(_, r)| r.abs()).collect();
    if mags.windows(2).any(|w| w[1] > w[0]) {
        return false;
    }
    if let Some(env) = &policy.envelope {
        let bound = env * env;
        if samples.iter().any(|(k, r)| r * r * int(*k as i64) > bound) {
            return false;
        }
    }
    match (mags.first(), mags.last()) {
        (Some(first), Some(last)) => last.is_zero() || last < first,
        _ => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentRow {
    pub k: usize,
    pub summand_rank: usize,
    pub valuation: Valuation,
    pub ratio: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentReport {
    pub rows: Vec<IdempotentRow>,
    pub all_field_summands: bool,
    pub sublinear: bool,
}

impl IdempotentReport {
    pub fn passed(&self) -> bool {
        self.all_field_summands && self.sublinear
    }
}

/// The two idempotent conditions for a sequence `(k, A_k, e_k)`: `e_k·A_k`
/// has rank one, and `val(e_k)/k` tends to 0.
pub fn weyl_idempotent_predicate(
    family: &[(usize, &FiniteCommAlgebra, &AlgebraElement)],
    policy: &TrendPolicy,
    working: &Rational,
) -> Result<IdempotentReport, AlgebraError> {
    let mut rows = Vec::with_capacity(family.len());
    for (k, a, e) in family {
        let rank = summand_rank(a, e, working)?;
        let valuation = e.val();
        let ratio = valuation.finite().map(|v| v / int(*k as i64));
        rows.push(IdempotentRow { k: *k, summand_rank: rank, valuation, ratio });
    }
    let all_field_summands = rows.iter().all(|r| r.summand_rank == 1);
    let samples: Vec<(usize, Rational)> = rows.iter().filter_map(|r| r.ratio.clone().map(|q| (r.k, q))).collect();
    let sublinear = samples.len() == rows.len() && sublinear_trend(&samples, policy);
    Ok(IdempotentReport { rows, all_field_summands, sublinear })
}

/// The trivial-sector algebra `(QH*(ℙ¹)^{⊗k})^{Sym_k}`.
pub fn symmetric_p1_algebra(k: usize, omega: &Rational) -> Result<InvariantSubalgebra, AlgebraError> {
    let base = qh_p1(omega);
    let ambient = tensor_power(&base, k, DEFAULT_BASIS_CAP)?;
    invariant_subalgebra(&ambient, &sym_action(base.dim(), k))
}

/// Per-k summary of the trivial-sector idempotent analysis.
#[derive(Clone, Debug)]
pub struct SymmetricP1Analysis {
    pub k: usize,
    pub algebra: InvariantSubalgebra,
    pub idempotents: Vec<AlgebraElement>,
    pub valuations: Vec<Valuation>,
    pub grades: Vec<Result<Rational, GradeError>>,
}

pub fn analyze_symmetric_p1(k: usize, omega: &Rational, working: &Rational) -> Result<SymmetricP1Analysis, AlgebraError> {
    let algebra = symmetric_p1_algebra(k, omega)?;
    let idempotents = idempotent_decomposition(&algebra.algebra, working)?;
    let valuations = idempotent_valuations(&idempotents);
    let grades = idempotents.iter().map(|e| grade_check(&algebra.algebra, e)).collect();
    Ok(SymmetricP1Analysis { k, algebra, idempotents, valuations, grades })
}

/// Ordered-map view of an element, for stable reporting.
pub fn element_terms(a: &FiniteCommAlgebra, x: &AlgebraElement) -> BTreeMap<usize, (String, NovikovSeries)> {
    x.coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, (a.labels()[i].clone(), c.clone())))
        .collect()
}
