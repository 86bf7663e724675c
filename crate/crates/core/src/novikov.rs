//! The one-variable universal Novikov field over ℚ with rational exponents.
//!
//! A [`NovikovSeries`] is a finite list of terms `a·T^b` together with an
//! optional truncation `t`: the value is only known modulo `T^t`. A series
//! with no truncation is exact. Canonical form (sorted exponents, merged
//! duplicates, no zero coefficients, nothing at or above the truncation) is
//! maintained eagerly, so derived equality is structural.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational numbers, used for both exponents and coefficients.
pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Working truncation used when an exact multi-term series has to be
/// inverted or square-rooted and no explicit precision was requested.
pub const DEFAULT_WORKING_TRUNCATION: i64 = 64;

pub fn default_working_truncation() -> Rational {
    int(DEFAULT_WORKING_TRUNCATION)
}

/// Valuation of a series: a rational, or +∞ for zero.
///
/// Variant order makes every finite value compare below `Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn plus(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NovikovError {
    #[error("attempted to invert the zero series")]
    ZeroInverse,
    #[error("leading coefficient {0} is not the square of a rational")]
    NonSquareLeading(Rational),
    #[error("half of the valuation {0} is not an admissible exponent")]
    OddValuation(Rational),
    #[error("square root of the zero series is undetermined")]
    ZeroSqrt,
}

/// Malformed series text, with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovSeries {
    terms: Vec<(Rational, Rational)>,
    trunc: Option<Rational>,
}

fn min_trunc(a: Option<&Rational>, b: Option<&Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

fn below(e: &Rational, trunc: Option<&Rational>) -> bool {
    trunc.map_or(true, |t| e < t)
}

impl NovikovSeries {
    pub fn zero() -> Self {
        NovikovSeries { terms: Vec::new(), trunc: None }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `c·T^e`, exact.
    pub fn monomial(c: Rational, e: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NovikovSeries { terms: alloc::vec![(e, c)], trunc: None }
    }

    /// The Novikov parameter raised to `e`.
    pub fn t_pow(e: Rational) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// The zero series known only modulo `T^t`.
    pub fn zero_mod(t: Rational) -> Self {
        NovikovSeries { terms: Vec::new(), trunc: Some(t) }
    }

    /// Builds a canonical series from arbitrary `(exponent, coefficient)` terms.
    pub fn from_terms<I>(terms: I, trunc: Option<Rational>) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut v: Vec<(Rational, Rational)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            if !below(&e, trunc.as_ref()) {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        NovikovSeries { terms: out, trunc }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn truncation(&self) -> Option<&Rational> {
        self.trunc.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True when no term is known; a truncated zero counts as zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn val(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinity,
        }
    }

    /// Valuation, with a truncated zero counted at its truncation level.
    pub fn effective_val(&self) -> Option<Rational> {
        match (self.terms.first(), &self.trunc) {
            (Some((e, _)), _) => Some(e.clone()),
            (None, Some(t)) => Some(t.clone()),
            (None, None) => None,
        }
    }

    /// Leading `(exponent, coefficient)` pair.
    pub fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Coefficient of `T^e` (zero when absent).
    pub fn coefficient(&self, e: &Rational) -> Rational {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Restrict to `mod T^t` (never loosens an existing truncation).
    pub fn truncate(&self, t: &Rational) -> Self {
        let trunc = min_trunc(self.trunc.as_ref(), Some(t));
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| below(e, trunc.as_ref()))
            .cloned()
            .collect();
        NovikovSeries { terms, trunc }
    }

    /// Leading term only, as an exact monomial.
    pub fn leading_term(&self) -> Self {
        match self.terms.first() {
            Some((e, c)) => Self::monomial(c.clone(), e.clone()),
            None => Self::zero(),
        }
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return NovikovSeries { terms: Vec::new(), trunc: None };
        }
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Multiply by `T^s`.
    pub fn shift(&self, s: &Rational) -> Self {
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
            trunc: self.trunc.as_ref().map(|t| t + s),
        }
    }

    /// Agreement on the range where both operands are known.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match min_trunc(self.trunc.as_ref(), other.trunc.as_ref()) {
            Some(t) => self.truncate(&t).terms == other.truncate(&t).terms,
            None => self.terms == other.terms,
        }
    }

    /// Membership in `U_Λ = val⁻¹(0)`.
    pub fn is_unitary(&self) -> bool {
        matches!(self.val(), Valuation::Finite(v) if v.is_zero())
    }

    /// Membership in `Λ_{>0}` (zero included).
    pub fn is_positive(&self) -> bool {
        match self.val() {
            Valuation::Finite(v) => v.is_positive(),
            Valuation::Infinity => true,
        }
    }

    /// Membership in `Λ_{≥0}`.
    pub fn is_nonnegative(&self) -> bool {
        match self.val() {
            Valuation::Finite(v) => !v.is_negative(),
            Valuation::Infinity => true,
        }
    }

    /// Membership in `Λ^{per}_{>0}`: every exponent is a positive integer
    /// multiple of `generator`.
    pub fn is_periodic_positive(&self, generator: &Rational) -> bool {
        if !generator.is_positive() {
            return false;
        }
        self.terms.iter().all(|(e, _)| {
            let m = e / generator;
            m.is_integer() && m.is_positive()
        })
    }

    /// Integer power, negative exponents through [`NovikovSeries::invert_to`].
    pub fn pow(&self, n: i64, working: &Rational) -> Result<Self, NovikovError> {
        let base = if n < 0 { self.invert_to(working)? } else { self.clone() };
        let mut m = n.unsigned_abs();
        let mut acc = NovikovSeries::one();
        let mut sq = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc * &sq;
            }
            m >>= 1;
            if m > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Splits `s = c·T^v·(1 + u)` with `val(u) > 0`.
    fn split_unit(&self) -> Option<(Rational, Rational, NovikovSeries)> {
        let (v, c) = self.leading()?;
        let (v, c) = (v.clone(), c.clone());
        let inv_c = c.recip();
        let mut rest = self.shift(&-v.clone()).scale(&inv_c);
        rest.terms.remove(0);
        Some((c, v, rest))
    }

    /// Relative precision for a result computed from `self`.
    fn relative_precision(&self, v: &Rational, working: &Rational, result_val: &Rational) -> Rational {
        match &self.trunc {
            Some(t) => t - v,
            None => working - result_val,
        }
    }

    /// Multiplicative inverse with the default working truncation.
    pub fn invert(&self) -> Result<Self, NovikovError> {
        self.invert_to(&default_working_truncation())
    }

    /// Multiplicative inverse. Exact monomials invert exactly; other exact
    /// series are inverted modulo `T^working`; truncated inputs keep their
    /// relative precision.
    pub fn invert_to(&self, working: &Rational) -> Result<Self, NovikovError> {
        let (c, v, u) = self.split_unit().ok_or(NovikovError::ZeroInverse)?;
        let inv_c = c.recip();
        if u.is_zero() && self.trunc.is_none() {
            return Ok(Self::monomial(inv_c, -v));
        }
        let rel = self.relative_precision(&v, working, &-v.clone());
        let y = inv_one_plus(&u, &rel);
        Ok(y.scale(&inv_c).shift(&-v))
    }

    /// Square root with positive leading coefficient and the default
    /// working truncation.
    pub fn sqrt(&self) -> Result<Self, NovikovError> {
        self.sqrt_in_grid(&default_working_truncation(), None)
    }

    /// Square root. When `grid` is supplied, `val/2` must be an integer
    /// multiple of it.
    pub fn sqrt_in_grid(&self, working: &Rational, grid: Option<&Rational>) -> Result<Self, NovikovError> {
        let (c, v, u) = self.split_unit().ok_or(NovikovError::ZeroSqrt)?;
        let half = &v / int(2);
        if let Some(g) = grid {
            if !(&half / g).is_integer() {
                return Err(NovikovError::OddValuation(v));
            }
        }
        let root_c = rational_sqrt(&c).ok_or_else(|| NovikovError::NonSquareLeading(c.clone()))?;
        if u.is_zero() && self.trunc.is_none() {
            return Ok(Self::monomial(root_c, half));
        }
        let rel = self.relative_precision(&v, working, &half);
        let y = sqrt_one_plus(&u, &rel);
        Ok(y.scale(&root_c).shift(&half))
    }
}

/// `1/(1+u)` modulo `T^rel` by Newton iteration; `val(u) > 0`.
fn inv_one_plus(u: &NovikovSeries, rel: &Rational) -> NovikovSeries {
    if !rel.is_positive() {
        return NovikovSeries::zero_mod(rel.clone());
    }
    let s = (&NovikovSeries::one() + u).truncate(rel);
    let one = NovikovSeries::one().truncate(rel);
    let mut y = one.clone();
    for _ in 0..128 {
        let defect = &one - &(&s * &y).truncate(rel);
        if defect.is_zero() {
            break;
        }
        y = (&y + &(&y * &defect)).truncate(rel);
    }
    y.truncate(rel)
}

/// `(1+u)^{1/2}` modulo `T^rel`; `val(u) > 0`.
fn sqrt_one_plus(u: &NovikovSeries, rel: &Rational) -> NovikovSeries {
    if !rel.is_positive() {
        return NovikovSeries::zero_mod(rel.clone());
    }
    let s = (&NovikovSeries::one() + u).truncate(rel);
    let three = NovikovSeries::constant(int(3)).truncate(rel);
    let half = rat(1, 2);
    // z → (1+u)^{-1/2}
    let mut z = NovikovSeries::one().truncate(rel);
    for _ in 0..128 {
        let zz = (&z * &z).truncate(rel);
        let t = (&s * &zz).truncate(rel);
        if (&t - &NovikovSeries::one()).is_zero() {
            break;
        }
        z = (&z * &(&three - &t)).truncate(rel).scale(&half);
    }
    (&s * &z).truncate(rel)
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

impl Add<&NovikovSeries> for &NovikovSeries {
    type Output = NovikovSeries;
    fn add(self, rhs: &NovikovSeries) -> NovikovSeries {
        let trunc = min_trunc(self.trunc.as_ref(), rhs.trunc.as_ref());
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (e, c) = match ord {
                Ordering::Less => {
                    i += 1;
                    (a[i - 1].0.clone(), a[i - 1].1.clone())
                }
                Ordering::Greater => {
                    j += 1;
                    (b[j - 1].0.clone(), b[j - 1].1.clone())
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (a[i - 1].0.clone(), &a[i - 1].1 + &b[j - 1].1)
                }
            };
            if !below(&e, trunc.as_ref()) {
                break;
            }
            if !c.is_zero() {
                out.push((e, c));
            }
        }
        NovikovSeries { terms: out, trunc }
    }
}

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }
}

impl Sub<&NovikovSeries> for &NovikovSeries {
    type Output = NovikovSeries;
    fn sub(self, rhs: &NovikovSeries) -> NovikovSeries {
        self + &(-rhs)
    }
}

impl Mul<&NovikovSeries> for &NovikovSeries {
    type Output = NovikovSeries;
    fn mul(self, rhs: &NovikovSeries) -> NovikovSeries {
        // s = s0 + O(T^a), t = t0 + O(T^b)  ⇒  st = s0·t0 + O(T^{min(a + val t, b + val s)})
        let trunc = match (&self.trunc, &rhs.trunc) {
            (None, None) => None,
            (Some(a), None) => rhs.effective_val().map(|vt| a + vt),
            (None, Some(b)) => self.effective_val().map(|vs| b + vs),
            (Some(a), Some(b)) => {
                let x = a + rhs.effective_val().unwrap_or_else(|| b.clone());
                let y = b + self.effective_val().unwrap_or_else(|| a.clone());
                Some(x.min(y))
            }
        };
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return NovikovSeries { terms: Vec::new(), trunc };
        }
        let mut acc: alloc::collections::BTreeMap<Rational, Rational> = alloc::collections::BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if !below(&e, trunc.as_ref()) {
                    // rhs exponents increase, so the rest of this row is out of range
                    break;
                }
                let c = ca * cb;
                acc.entry(e)
                    .and_modify(|x| *x += &c)
                    .or_insert(c);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        NovikovSeries { terms, trunc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<NovikovSeries> for NovikovSeries {
            type Output = NovikovSeries;
            fn $m(self, rhs: NovikovSeries) -> NovikovSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&NovikovSeries> for NovikovSeries {
            type Output = NovikovSeries;
            fn $m(self, rhs: &NovikovSeries) -> NovikovSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        -&self
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "T^({e})")?;
            } else {
                write!(f, "{mag}*T^({e})")?;
            }
        }
        if let Some(t) = &self.trunc {
            if first {
                write!(f, "O(T^({t}))")?;
            } else {
                write!(f, " + O(T^({t}))")?;
            }
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Parses the rational sub-grammar `[-]digits[/digits]`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let q = p.rational()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input after rational"));
    }
    Ok(q)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> ParseError {
        ParseError { position: self.pos, message: String::from(message) }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err("unexpected character"))
        }
    }

    fn unsigned(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(BigInt::parse_bytes(s.as_bytes(), 10).expect("digits parse"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat("-");
        let n = self.unsigned()?;
        let d = if self.eat("/") {
            let at = self.pos;
            let d = self.unsigned()?;
            if d.is_zero() {
                return Err(ParseError { position: at, message: String::from("zero denominator") });
            }
            d
        } else {
            BigInt::one()
        };
        let q = Rational::new(n, d);
        Ok(if neg { -q } else { q })
    }

    fn t_power(&mut self) -> Result<Rational, ParseError> {
        self.expect("T^(")?;
        self.skip_ws();
        let e = self.rational()?;
        self.skip_ws();
        self.expect(")")?;
        Ok(e)
    }
}

enum Term {
    Known(Rational, Rational),
    Order(Rational),
}

impl FromStr for NovikovSeries {
    type Err = ParseError;

    /// Grammar: `term (('+'|'-') term)*` with
    /// `term := coeff | coeff '*' 'T^(' rational ')' | 'T^(' rational ')' | 'O(T^(' rational '))'`.
    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let mut terms = Vec::new();
        let mut trunc: Option<Rational> = None;
        p.skip_ws();
        if p.pos == p.src.len() {
            return Err(p.err("empty input"));
        }
        let mut negative = p.eat("-");
        loop {
            p.skip_ws();
            let term = match p.peek() {
                Some(b'T') => Term::Known(p.t_power()?, Rational::one()),
                Some(b'O') => {
                    p.expect("O(")?;
                    let t = p.t_power()?;
                    p.expect(")")?;
                    Term::Order(t)
                }
                Some(c) if c.is_ascii_digit() => {
                    let c = p.rational()?;
                    p.skip_ws();
                    if p.eat("*") {
                        p.skip_ws();
                        Term::Known(p.t_power()?, c)
                    } else {
                        Term::Known(Rational::zero(), c)
                    }
                }
                _ => return Err(p.err("expected a term")),
            };
            match term {
                Term::Known(e, c) => terms.push((e, if negative { -c } else { c })),
                Term::Order(t) => {
                    if negative {
                        return Err(p.err("order term cannot be negated"));
                    }
                    trunc = Some(match trunc {
                        Some(old) => old.min(t),
                        None => t,
                    });
                }
            }
            p.skip_ws();
            match p.peek() {
                None => break,
                Some(b'+') => {
                    p.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    p.pos += 1;
                    negative = true;
                }
                Some(_) => return Err(p.err("expected '+' or '-'")),
            }
        }
        Ok(NovikovSeries::from_terms(terms, trunc))
    }
}

/// Parses series text; thin wrapper over [`FromStr`].
pub fn parse(text: &str) -> Result<NovikovSeries, ParseError> {
    text.parse()
}

/// Least common multiple of the exponent denominators of a series.
pub fn exponent_denominator_lcm(s: &NovikovSeries) -> BigInt {
    use num_integer::Integer;
    s.terms
        .iter()
        .map(|(e, _)| e.denom().clone())
        .chain(s.trunc.iter().map(|t| t.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d))
}
