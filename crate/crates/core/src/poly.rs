//! Univariate polynomials over ℚ and over the Novikov field.
//!
//! Coefficient vectors are little-endian: `coeffs[i]` multiplies `t^i`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::novikov::{int, NovikovError, NovikovSeries, Rational};

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

pub fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(t − r)`; the remainder is dropped.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = coeffs.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut out = alloc::vec![Rational::zero(); n - 1];
    let mut carry = Rational::zero();
    for i in (1..n).rev() {
        carry = &carry * r + &coeffs[i];
        out[i - 1] = carry.clone();
    }
    out
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Rational roots with multiplicities, in increasing order, plus the degree
/// of the factor that has no rational roots.
pub fn rational_roots(coeffs: &[Rational]) -> (Vec<(Rational, usize)>, usize) {
    let mut p = trim(coeffs.to_vec());
    if p.len() <= 1 {
        return (Vec::new(), 0);
    }
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let mut zero_mult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    // clear denominators
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints[0].clone();
    let an = ints[ints.len() - 1].clone();
    let mut candidates: Vec<Rational> = Vec::new();
    for num in positive_divisors(&a0) {
        for den in positive_divisors(&an) {
            let q = Rational::new(num.clone(), den);
            candidates.push(q.clone());
            candidates.push(-q);
        }
    }
    candidates.sort();
    candidates.dedup();
    for c in candidates {
        let mut m = 0;
        while p.len() > 1 && eval(&p, &c).is_zero() {
            p = deflate(&p, &c);
            m += 1;
        }
        if m > 0 {
            roots.push((c, m));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, p.len() - 1)
}

/// A segment of the lower Newton polygon: roots of valuation `slope`,
/// `end − start` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    pub start: usize,
    pub end: usize,
    pub slope: Rational,
}

/// Lower convex hull of `(i, val a_i)`; each segment carries the common
/// valuation of the roots it accounts for.
pub fn newton_polygon(coeffs: &[NovikovSeries]) -> Vec<NewtonSegment> {
    let pts: Vec<(usize, Rational)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.val().finite().map(|v| (i, v.clone())))
        .collect();
    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (i1, v1) = &hull[hull.len() - 2];
            let (i2, v2) = &hull[hull.len() - 1];
            // drop the middle point if it lies on or above the chord
            let lhs = (v2 - v1) * int((p.0 - i1) as i64);
            let rhs = (&p.1 - v1) * int((i2 - i1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| NewtonSegment {
            start: w[0].0,
            end: w[1].0,
            // root valuation is minus the hull slope
            slope: -(&w[1].1 - &w[0].1) / int((w[1].0 - w[0].0) as i64),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("residue polynomial on the valuation-{0} segment does not split into distinct rational roots")]
    ResidueNotSplit(Rational),
    #[error("polynomial has a repeated zero root")]
    ZeroRoot,
    #[error("Newton lifting stalled")]
    NoConvergence,
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

pub fn eval_series(coeffs: &[NovikovSeries], x: &NovikovSeries) -> NovikovSeries {
    coeffs.iter().rev().fold(NovikovSeries::zero(), |acc, c| &(&acc * x) + c)
}

pub fn derivative_series(coeffs: &[NovikovSeries]) -> Vec<NovikovSeries> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&int(i as i64))).collect()
}

/// All roots in Λ of a polynomial whose every Newton segment has a residue
/// polynomial with distinct rational roots, lifted by Newton iteration to
/// absolute precision `working`. A simple zero root comes first; the others
/// are ordered by (valuation, residue).
pub fn split_roots(coeffs: &[NovikovSeries], working: &Rational) -> Result<Vec<NovikovSeries>, RootError> {
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 1 {
        return Err(RootError::ZeroRoot);
    }
    // a simple zero root is exact; the rest are roots of p(t)/t
    let mut out = Vec::new();
    if zeros == 1 && coeffs.len() > 1 {
        out.push(NovikovSeries::zero());
    }
    let coeffs = &coeffs[zeros.min(coeffs.len())..];
    let deriv = derivative_series(coeffs);
    for seg in newton_polygon(coeffs) {
        // t = T^s·u: terms on the segment share the minimal valuation
        let level = on_segment(coeffs, &seg);
        let residue: Vec<Rational> = (seg.start..=seg.end)
            .map(|i| {
                let c = &coeffs[i];
                match c.val().finite() {
                    Some(v) if v + &seg.slope * int(i as i64) == level => {
                        c.leading_coefficient().cloned().unwrap_or_else(Rational::zero)
                    }
                    _ => Rational::zero(),
                }
            })
            .collect();
        let (roots, rest) = rational_roots(&residue);
        if rest > 0 || roots.iter().any(|(_, m)| *m > 1) {
            return Err(RootError::ResidueNotSplit(seg.slope.clone()));
        }
        for (u, _) in roots {
            let rho = NovikovSeries::monomial(u, seg.slope.clone());
            out.push(newton_root(coeffs, &deriv, rho, working)?);
        }
    }
    Ok(out)
}

fn on_segment(coeffs: &[NovikovSeries], seg: &NewtonSegment) -> Rational {
    let v = coeffs[seg.start].val();
    v.finite().expect("segment endpoint is nonzero") + &seg.slope * int(seg.start as i64)
}

fn newton_root(
    coeffs: &[NovikovSeries],
    deriv: &[NovikovSeries],
    mut rho: NovikovSeries,
    working: &Rational,
) -> Result<NovikovSeries, RootError> {
    let mut last: Option<Rational> = None;
    for _ in 0..64 {
        let f = eval_series(coeffs, &rho).truncate(working);
        if f.is_zero() {
            return Ok(rho);
        }
        let fp = eval_series(deriv, &rho);
        let step = &f * &fp.invert_to(working)?;
        // correction valuation must strictly increase
        let v = step.val().finite().cloned().ok_or(RootError::NoConvergence)?;
        if last.as_ref().is_some_and(|l| &v <= l) {
            return Err(RootError::NoConvergence);
        }
        last = Some(v);
        rho = (&rho - &step).truncate(working);
    }
    Err(RootError::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::rat;

    #[test]
    fn rational_roots_with_multiplicity_and_irrational_rest() {
        // (t − 1/2)²(t + 3)(t² − 2)
        let p = [rat(-3, 2), rat(11, 2), rat(-13, 4), rat(-19, 4), int(2), int(1)];
        let (roots, rest) = rational_roots(&p);
        assert_eq!(roots, alloc::vec![(int(-3), 1), (rat(1, 2), 2)]);
        assert_eq!(rest, 2);
        let (roots, rest) = rational_roots(&[int(0), int(0), int(1)]);
        assert_eq!(roots, alloc::vec![(int(0), 2)]);
        assert_eq!(rest, 0);
    }

    #[test]
    fn newton_polygon_slopes() {
        // t² − T (roots ±T^{1/2}) times (t − T²): t³ − T² t² − T t + T³
        let s = |x: &str| x.parse::<NovikovSeries>().unwrap();
        let p = [s("T^(3)"), s("-T^(1)"), s("-T^(2)"), s("1")];
        let segs = newton_polygon(&p);
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].slope, int(2));
        assert_eq!(segs[1].slope, rat(1, 2));
        let roots = split_roots(&p, &int(20)).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(eval_series(&p, r).truncate(&int(20)).is_zero());
        }
    }

    #[test]
    fn non_split_residue_reported() {
        let s = |x: &str| x.parse::<NovikovSeries>().unwrap();
        assert!(matches!(split_roots(&[s("-2"), s("0"), s("1")], &int(8)), Err(RootError::ResidueNotSplit(_))));
    }
}
