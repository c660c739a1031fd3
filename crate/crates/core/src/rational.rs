//! Exact rational scalars, points and vectors.
//!
//! Everything downstream (sign evaluation, projections, angular sorts,
//! Smith normal forms) is computed over these types; no floating point
//! is used anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type Int = BigInt;

/// A point or vector with exact rational coordinates.
pub type QVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Parses a rational literal such as `7`, `-3/4` or `18/5`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: Int = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn qvec(coords: &[i64]) -> QVec {
    coords.iter().map(|&c| rat(c)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rat], c: &Rat) -> QVec {
    a.iter().map(|x| x * c).collect()
}

/// Squared Euclidean distance between two points.
pub fn dist2(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += &d * &d;
    }
    acc
}

/// Midpoint of two points.
pub fn midpoint(a: &[Rat], b: &[Rat]) -> QVec {
    let half = rat_frac(1, 2);
    a.iter().zip(b).map(|(x, y)| (x + y) * &half).collect()
}

/// Sign of a rational: -1, 0 or +1.
pub fn sign_of(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert_eq!(parse_rat("-3/4").unwrap(), rat_frac(-3, 4));
        assert_eq!(parse_rat("18/5").unwrap(), rat_frac(18, 5));
        assert_eq!(fmt_rat(&rat_frac(18, 5)), "18/5");
        assert_eq!(fmt_rat(&rat(-2)), "-2");
        assert_eq!(fmt_rat(&rat_frac(4, 2)), "2");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("").is_none());
    }

    #[test]
    fn distances_are_exact() {
        let a = qvec(&[1, 0]);
        let b = vec![rat(0), rat_frac(1, 2)];
        assert_eq!(dist2(&a, &b), rat_frac(5, 4));
    }
}
