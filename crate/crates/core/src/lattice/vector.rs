use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::{IntVector, Q};

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = p.trim().parse::<i64>().map_err(|_| bad())?;
            let q = q.trim().parse::<i64>().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
    }
}

/// An exact rational vector. The rank is the number of coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalVector {
    coords: Vec<Q>,
}

impl RationalVector {
    pub fn new(coords: Vec<Q>) -> Self {
        Self { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![Q::zero(); rank] }
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.coords[i] = Q::from_integer(1);
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self { coords: coords.iter().map(|&c| Q::from_integer(c)).collect() }
    }

    /// `coords / scale`.
    pub fn from_scaled(coords: &[i64], scale: i64) -> Self {
        Self { coords: coords.iter().map(|&c| Q::new(c, scale)).collect() }
    }

    pub fn parse(items: &[&str]) -> Result<Self> {
        items.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>().map(Self::new)
    }

    /// Parses a comma separated list such as `1,1/2`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let items: Vec<&str> = s.split(',').collect();
        Self::parse(&items)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|c| c.is_positive())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> i64 {
        self.coords.iter().fold(1, |acc, c| acc.lcm(c.denom()))
    }

    /// Sum of the coordinates.
    pub fn total(&self) -> Q {
        self.coords.iter().fold(Q::zero(), |acc, c| acc + c)
    }

    pub fn dot(&self, other: &Self) -> Q {
        debug_assert_eq!(self.rank(), other.rank());
        self.coords.iter().zip(&other.coords).fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, k: Q) -> Self {
        Self { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// Coordinatewise `self <= other`.
    pub fn le_coordinatewise(&self, other: &Self) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// `self * scale` as integers, if every product is integral.
    pub fn to_scaled_ints(&self, scale: i64) -> Option<IntVector> {
        self.coords
            .iter()
            .map(|c| {
                let s = c * Q::from_integer(scale);
                s.is_integer().then(|| s.to_integer())
            })
            .collect()
    }

    /// The primitive integer vector on the ray through `self`, or `None` for zero.
    pub fn primitive_direction(&self) -> Option<IntVector> {
        if self.is_zero() {
            return None;
        }
        let ints = self.to_scaled_ints(self.denominator())?;
        Some(primitive(&ints))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[i64]) -> IntVector {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn int_dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: Self) -> RationalVector {
        RationalVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: Self) -> RationalVector {
        RationalVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl From<Vec<Q>> for RationalVector {
    fn from(coords: Vec<Q>) -> Self {
        Self::new(coords)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-5/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = RationalVector::parse(&["1/2", "3/4"]).unwrap();
        assert_eq!(v.primitive_direction(), Some(vec![2, 3]));
        assert_eq!(RationalVector::zero(2).primitive_direction(), None);
        assert_eq!(RationalVector::from_ints(&[-4, 6]).primitive_direction(), Some(vec![-2, 3]));
    }
}
