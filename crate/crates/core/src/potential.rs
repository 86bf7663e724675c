//! Disc potentials of circle links on S² and their critical points.
//!
//! Derivatives are logarithmic (`z_j ∂/∂z_j`), so critical points live on
//! the unitary torus `(U_Λ)^k` and the Hessian is symmetric by construction.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Matrix};
use crate::novikov::{int, NovikovError, NovikovSeries, Rational, Valuation};
use crate::poly;
use crate::quantum_algebra::{sublinear_trend, TrendPolicy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PotentialError {
    #[error("invalid link configuration: {0}")]
    Config(String),
    #[error("leading-order gradient system has no solution on the torus")]
    NoLeadingCriticalPoint,
    #[error("leading-order gradient system has solutions only outside the rationals")]
    IrrationalRoots,
    #[error("leading-order gradient system is not triangular enough to solve")]
    UnsupportedLeadingSystem,
    #[error("leading Hessian is singular")]
    SingularLeadingHessian,
    #[error("Newton lifting stalled at gradient valuation {0}")]
    NoConvergence(Valuation),
    #[error("Hessian determinant vanishes at the critical point")]
    ZeroDeterminant,
    #[error("point has {got} coordinates, potential has {expected} variables")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

/// Laurent polynomial in `z_1, …, z_n` with Novikov coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovLaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, NovikovSeries>,
}

impl NovikovLaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        NovikovLaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, NovikovSeries> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·z^exponent`, dropping the entry if it cancels.
    pub fn add_term(&mut self, exponent: Vec<i64>, c: NovikovSeries) {
        assert_eq!(exponent.len(), self.nvars, "exponent length must match the variable count");
        let sum = match self.terms.remove(&exponent) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exponent, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// `z_j ∂/∂z_j`.
    pub fn log_derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] != 0 {
                out.add_term(e.clone(), c.scale(&int(e[j])));
            }
        }
        out
    }

    pub fn evaluate(&self, z: &[NovikovSeries], working: &Rational) -> Result<NovikovSeries, PotentialError> {
        if z.len() != self.nvars {
            return Err(PotentialError::Arity { expected: self.nvars, got: z.len() });
        }
        let mut acc = NovikovSeries::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (zj, &ej) in z.iter().zip(e) {
                if ej != 0 {
                    m = &m * &zj.pow(ej, working)?;
                }
            }
            acc = &acc + &m;
        }
        Ok(acc)
    }

    /// Smallest coefficient valuation.
    pub fn val(&self) -> Valuation {
        self.terms.values().map(NovikovSeries::val).min().unwrap_or(Valuation::Infinity)
    }

    /// Leading coefficients of the terms at the minimal valuation.
    fn leading_part(&self) -> Vec<(Vec<i64>, Rational)> {
        let v = self.val();
        self.terms
            .iter()
            .filter(|(_, c)| c.val() == v)
            .filter_map(|(e, c)| c.leading_coefficient().map(|q| (e.clone(), q.clone())))
            .collect()
    }
}

impl fmt::Display for NovikovLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(j, &x)| if x == 1 { alloc::format!("z{}", j + 1) } else { alloc::format!("z{}^({})", j + 1, x) })
                .collect();
            if c.terms().len() == 1 && c.is_exact() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})")?;
            }
            for m in monomial {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

/// Areas for a `k`-component link: two discs of area `B`, `k − 1` annuli
/// of area `A`, and the unit part `γ` of the bulk coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkConfig {
    pub k: usize,
    pub b: Rational,
    pub a: Rational,
    pub gamma: Rational,
    pub total_area: Option<Rational>,
}

impl LinkConfig {
    pub fn new(k: usize, b: Rational, a: Rational) -> Self {
        LinkConfig { k, b, a, gamma: Rational::one(), total_area: None }
    }

    /// `A = (total − 2B)/(k − 1)` for `k ≥ 2`, `A = 0` otherwise.
    pub fn from_total_area(k: usize, b: Rational, total: Rational) -> Self {
        let a = if k >= 2 { (&total - &b * int(2)) / int(k as i64 - 1) } else { Rational::zero() };
        LinkConfig { k, b, a, gamma: Rational::one(), total_area: Some(total) }
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        let err = |m: &str| Err(PotentialError::Config(String::from(m)));
        if self.k == 0 {
            return err("k must be at least 1");
        }
        if !self.b.is_positive() {
            return err("disc area B must be positive");
        }
        if self.gamma.is_zero() {
            return err("bulk scalar gamma must be nonzero");
        }
        if self.k >= 2 {
            if self.a.is_negative() {
                return err("annulus area A must be nonnegative");
            }
            if self.a >= self.b {
                return err("annulus area A must be smaller than disc area B");
            }
            if let Some(total) = &self.total_area {
                if &self.a * int(self.k as i64 - 1) + &self.b * int(2) != *total {
                    return err("(k-1)A + 2B does not match the total area");
                }
            }
        }
        Ok(())
    }
}

/// `T^B z_1 + T^B/z_k + γ²T^B Σ_{j<k} (1/z_j + z_{j+1})`; for `k = 1`,
/// `T^B(z + 1/z)`.
pub fn build_s2_potential(cfg: &LinkConfig) -> Result<NovikovLaurentPoly, PotentialError> {
    cfg.validate()?;
    Ok(s2_terms(cfg))
}

fn s2_terms(cfg: &LinkConfig) -> NovikovLaurentPoly {
    let k = cfg.k;
    let unit = |j: usize, s: i64| {
        let mut e = alloc::vec![0i64; k];
        e[j] = s;
        e
    };
    let tb = NovikovSeries::t_pow(cfg.b.clone());
    let mut w = NovikovLaurentPoly::zero(k);
    w.add_term(unit(0, 1), tb.clone());
    w.add_term(unit(k - 1, -1), tb.clone());
    let bulk = tb.scale(&(&cfg.gamma * &cfg.gamma));
    for j in 0..k.saturating_sub(1) {
        w.add_term(unit(j, -1), bulk.clone());
        w.add_term(unit(j + 1, 1), bulk.clone());
    }
    w
}

pub fn log_gradient(w: &NovikovLaurentPoly) -> Vec<NovikovLaurentPoly> {
    (0..w.nvars()).map(|j| w.log_derivative(j)).collect()
}

pub fn log_hessian(w: &NovikovLaurentPoly) -> Vec<Vec<NovikovLaurentPoly>> {
    let grad = log_gradient(w);
    grad.iter().map(|g| (0..w.nvars()).map(|j| g.log_derivative(j)).collect()).collect()
}

/// Rational Laurent polynomial as exponent → coefficient.
type RatLaurent = Vec<(Vec<i64>, Rational)>;

fn substitute(eq: &RatLaurent, point: &[Option<Rational>]) -> RatLaurent {
    let mut out: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    for (e, c) in eq {
        let mut c = c.clone();
        let mut rest = e.clone();
        for (j, v) in point.iter().enumerate() {
            if let Some(v) = v {
                c *= pow_rational(v, e[j]);
                rest[j] = 0;
            }
        }
        *out.entry(rest).or_insert_with(Rational::zero) += c;
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn pow_rational(v: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[derive(Default)]
struct LeadingSearch {
    solutions: Vec<Vec<Rational>>,
    irrational: bool,
    unsupported: bool,
}

impl LeadingSearch {
    fn branch(&mut self, system: &[RatLaurent], point: Vec<Option<Rational>>) {
        let reduced: Vec<RatLaurent> = system.iter().map(|eq| substitute(eq, &point)).collect();
        if reduced.iter().any(|eq| eq.len() == 1) {
            // a lone monomial never vanishes on the torus
            return;
        }
        if point.iter().all(Option::is_some) {
            if reduced.iter().all(Vec::is_empty) {
                self.solutions.push(point.into_iter().flatten().collect());
            }
            return;
        }
        let univariate = reduced.iter().find_map(|eq| {
            let vars: Vec<usize> = (0..point.len()).filter(|&j| eq.iter().any(|(e, _)| e[j] != 0)).collect();
            (vars.len() == 1).then(|| (vars[0], eq))
        });
        let Some((j, eq)) = univariate else {
            self.unsupported = true;
            return;
        };
        let lo = eq.iter().map(|(e, _)| e[j]).min().unwrap_or(0);
        let hi = eq.iter().map(|(e, _)| e[j]).max().unwrap_or(0);
        let mut coeffs = alloc::vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in eq {
            coeffs[(e[j] - lo) as usize] += c;
        }
        let (roots, rest) = poly::rational_roots(&coeffs);
        if rest > 0 {
            self.irrational = true;
        }
        for (r, _) in roots {
            if r.is_zero() {
                continue;
            }
            let mut next = point.clone();
            next[j] = Some(r);
            self.branch(system, next);
        }
    }
}

/// All rational torus solutions of the leading-order log-gradient system,
/// sorted lexicographically.
pub fn leading_critical_points(w: &NovikovLaurentPoly) -> Result<Vec<Vec<Rational>>, PotentialError> {
    let system: Vec<RatLaurent> = log_gradient(w).iter().map(NovikovLaurentPoly::leading_part).collect();
    let mut search = LeadingSearch::default();
    search.branch(&system, alloc::vec![None; w.nvars()]);
    if search.solutions.is_empty() {
        return Err(if search.unsupported {
            PotentialError::UnsupportedLeadingSystem
        } else if search.irrational {
            PotentialError::IrrationalRoots
        } else {
            PotentialError::NoLeadingCriticalPoint
        });
    }
    search.solutions.sort();
    search.solutions.dedup();
    Ok(search.solutions)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    pub coordinates: Vec<NovikovSeries>,
    /// Valuation of the log-gradient at the point; infinite when exact.
    pub gradient_valuation: Valuation,
    pub hessian: Matrix,
    pub hessian_det: NovikovSeries,
    /// Valuation of the gradient after each Newton step.
    pub trace: Vec<Valuation>,
}

fn evaluate_all(ps: &[NovikovLaurentPoly], z: &[NovikovSeries], working: &Rational) -> Result<Vec<NovikovSeries>, PotentialError> {
    ps.iter().map(|p| p.evaluate(z, working)).collect()
}

/// Log-Hessian matrix at `z`.
pub fn hessian_at(w: &NovikovLaurentPoly, z: &[NovikovSeries], working: &Rational) -> Result<Matrix, PotentialError> {
    log_hessian(w).iter().map(|row| evaluate_all(row, z, working)).collect()
}

/// Smallest valuation, counting a truncated zero at its truncation.
fn min_val(v: &[NovikovSeries]) -> Valuation {
    v.iter()
        .map(|x| x.effective_val().map_or(Valuation::Infinity, Valuation::Finite))
        .min()
        .unwrap_or(Valuation::Infinity)
}

/// Default Newton target: ten disc areas above the leading gradient level.
pub fn default_target(w: &NovikovLaurentPoly, b: &Rational) -> Rational {
    let lead = w.val().finite().cloned().unwrap_or_else(Rational::zero);
    lead + b * int(10)
}

/// Lifts a leading critical point until the log-gradient has valuation at
/// least `target`, using `z_j ← z_j(1 − δ_j)` with `H·δ = ∇W`.
pub fn newton_lift(w: &NovikovLaurentPoly, p0: &[Rational], target: &Rational) -> Result<CriticalPoint, PotentialError> {
    if p0.len() != w.nvars() {
        return Err(PotentialError::Arity { expected: w.nvars(), got: p0.len() });
    }
    let grad = log_gradient(w);
    let hess = log_hessian(w);
    let lead = w.val().finite().cloned().unwrap_or_else(Rational::zero);
    // coordinates are units, so this precision puts every gradient error above `target`
    let precision = (target - &lead).max(Rational::zero()) + Rational::one();
    let working = target + &precision + lead.abs();
    let mut z: Vec<NovikovSeries> = p0.iter().map(|q| NovikovSeries::constant(q.clone())).collect();
    let h0: Matrix = hess.iter().map(|row| evaluate_all(row, &z, &working)).collect::<Result<_, _>>()?;
    if linalg::determinant(&h0, &working)?.is_zero() {
        return Err(PotentialError::SingularLeadingHessian);
    }
    let mut trace = Vec::new();
    for _ in 0..64 {
        let g = evaluate_all(&grad, &z, &working)?;
        let v = min_val(&g);
        let done = match &v {
            Valuation::Infinity => true,
            Valuation::Finite(q) => q >= target,
        };
        if trace.last().is_some_and(|prev| &v <= prev) {
            return Err(PotentialError::NoConvergence(v));
        }
        trace.push(v.clone());
        if done {
            let hessian: Matrix = hess.iter().map(|row| evaluate_all(row, &z, &working)).collect::<Result<_, _>>()?;
            let hessian_det = linalg::determinant(&hessian, &working)?;
            return Ok(CriticalPoint { coordinates: z, gradient_valuation: v, hessian, hessian_det, trace });
        }
        let h: Matrix = hess.iter().map(|row| evaluate_all(row, &z, &working)).collect::<Result<_, _>>()?;
        let delta = linalg::solve(&h, &g, &working)?.ok_or(PotentialError::SingularLeadingHessian)?;
        z = z
            .iter()
            .zip(&delta)
            .map(|(zj, dj)| (zj - &(zj * dj)).truncate(&precision))
            .collect();
    }
    Err(PotentialError::NoConvergence(trace.last().cloned().unwrap_or(Valuation::Infinity)))
}

/// The Hessian determinant `Z` and its valuation, the defect bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianSummary {
    pub det: NovikovSeries,
    pub valuation: Rational,
    pub leading: NovikovSeries,
}

pub fn hessian_det_valuation(cp: &CriticalPoint) -> Result<HessianSummary, PotentialError> {
    let valuation = cp.hessian_det.val().finite().cloned().ok_or(PotentialError::ZeroDeterminant)?;
    if cp.hessian_det.is_zero() {
        return Err(PotentialError::ZeroDeterminant);
    }
    Ok(HessianSummary { det: cp.hessian_det.clone(), valuation, leading: cp.hessian_det.leading_term() })
}

/// Whether the leading Hessian at a rational point is nonsingular.
pub fn is_morse_at(w: &NovikovLaurentPoly, p: &[Rational]) -> Result<bool, PotentialError> {
    let z: Vec<NovikovSeries> = p.iter().map(|q| NovikovSeries::constant(q.clone())).collect();
    let working = Rational::from_integer(64.into());
    let h = hessian_at(w, &z, &working)?;
    Ok(!linalg::determinant(&h, &working)?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialReport {
    pub config: LinkConfig,
    pub potential: NovikovLaurentPoly,
    pub leading_points: usize,
    pub all_leading_morse: bool,
    pub critical_point: CriticalPoint,
    pub hessian: HessianSummary,
}

impl PotentialReport {
    /// `val(Z)` bounds the quasimorphism defect.
    pub fn defect_bound(&self) -> &Rational {
        &self.hessian.valuation
    }

    pub fn expected_valuation(&self) -> Rational {
        &self.config.b * int(self.config.k as i64)
    }
}

/// Builds the potential, finds every leading critical point, and lifts the
/// first one with all coordinates positive (or the first one overall).
pub fn analyze_link(cfg: &LinkConfig, target: Option<&Rational>) -> Result<PotentialReport, PotentialError> {
    cfg.validate()?;
    analyze_terms(cfg, target)
}

fn analyze_terms(cfg: &LinkConfig, target: Option<&Rational>) -> Result<PotentialReport, PotentialError> {
    if cfg.k == 0 || !cfg.b.is_positive() || cfg.gamma.is_zero() {
        return Err(PotentialError::Config(String::from("k, B and gamma must be positive, positive and nonzero")));
    }
    let w = s2_terms(cfg);
    let points = leading_critical_points(&w)?;
    let mut all_leading_morse = true;
    for p in &points {
        all_leading_morse &= is_morse_at(&w, p)?;
    }
    let p0 = points.iter().find(|p| p.iter().all(Signed::is_positive)).unwrap_or(&points[0]);
    let target = target.cloned().unwrap_or_else(|| default_target(&w, &cfg.b));
    let cp = newton_lift(&w, p0, &target)?;
    let hessian = hessian_det_valuation(&cp)?;
    Ok(PotentialReport {
        config: cfg.clone(),
        potential: w,
        leading_points: points.len(),
        all_leading_morse,
        critical_point: cp,
        hessian,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylRow {
    pub k: usize,
    pub b: Rational,
    pub a: Rational,
    /// Whether `0 ≤ A < B` holds; the potential itself does not see `A` when `γ = 1`.
    pub admissible: bool,
    pub morse: bool,
    pub hess_det_val: Rational,
    pub matches_law: bool,
    pub ratio: Rational,
    pub defect_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylCertificate {
    pub rows: Vec<WeylRow>,
    pub verdict: bool,
}

/// Runs [`analyze_link`] for each `k` with total area 1 and `B_k` from the
/// rule. PASS iff every configuration is admissible, every point is Morse, `val(det) = k·B_k`, and the ratios
/// `B_k` shrink over the range.
pub fn weyl_certificate<F>(bk: F, ks: &[usize]) -> Result<WeylCertificate, PotentialError>
where
    F: Fn(usize) -> Rational,
{
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let b = bk(k);
        let cfg = LinkConfig::from_total_area(k, b.clone(), Rational::one());
        let admissible = cfg.validate().is_ok();
        let report = analyze_terms(&cfg, None)?;
        let val = report.hessian.valuation.clone();
        let ratio = &val / int(k as i64);
        rows.push(WeylRow {
            k,
            a: cfg.a.clone(),
            admissible,
            morse: report.all_leading_morse,
            matches_law: val == report.expected_valuation(),
            hess_det_val: val,
            ratio,
            defect_bound: report.defect_bound().clone(),
            b,
        });
    }
    let samples: Vec<(usize, Rational)> = rows.iter().map(|r| (r.k, r.ratio.clone())).collect();
    let verdict = rows.iter().all(|r| r.admissible && r.morse && r.matches_law) && sublinear_trend(&samples, &TrendPolicy::default());
    Ok(WeylCertificate { rows, verdict })
}
