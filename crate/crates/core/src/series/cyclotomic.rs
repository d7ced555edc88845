use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::BigQ;

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial,
/// computed as `(x^n - 1) / prod_{d | n, d < n} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic level must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div(&num, &cyclotomic_polynomial(d));
    }
    cyclotomic_cache().lock().unwrap().insert(n, num.clone());
    num
}

/// Quotient of integer polynomials when the divisor is monic and divides exactly.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut q = vec![0; rem.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Degree of `Φ_n`, Euler's totient.
pub fn totient(n: u64) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Reduces a polynomial with rational coefficients modulo the monic `Φ_n`.
fn reduce(mut poly: Vec<BigQ>, n: u64) -> Vec<BigQ> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    while poly.len() > deg {
        let c = poly.pop().expect("nonempty");
        if c.is_zero() {
            continue;
        }
        let shift = poly.len() - deg;
        for (j, &pj) in phi.iter().take(deg).enumerate() {
            poly[shift + j] -= &c * BigQ::from_integer(BigInt::from(pj));
        }
    }
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    poly
}

/// An element of the cyclotomic field `Q(ζ_level)`.
///
/// Stored as coordinates in the power basis `1, ζ, …, ζ^{φ(level)-1}`, reduced
/// modulo the cyclotomic polynomial, with trailing zeros removed. Values that are
/// rational are always stored at level 1, so the representation of a given
/// element at a given level is unique and equality is decided exactly after
/// lifting both sides to a common level.
#[derive(Clone)]
pub struct CyclotomicNumber {
    level: u64,
    coords: Vec<BigQ>,
}

impl CyclotomicNumber {
    fn normalized(level: u64, coords: Vec<BigQ>) -> Self {
        let coords = reduce(coords, level);
        if coords.len() <= 1 {
            Self { level: 1, coords }
        } else {
            Self { level, coords }
        }
    }

    pub fn from_coords(level: u64, coords: Vec<BigQ>) -> Self {
        assert!(level >= 1, "cyclotomic level must be positive");
        Self::normalized(level, coords)
    }

    pub fn zero() -> Self {
        Self { level: 1, coords: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigQ::one())
    }

    pub fn from_rational(q: BigQ) -> Self {
        Self::normalized(1, vec![q])
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigQ::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigQ::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `ζ_level^k`.
    pub fn root_of_unity(level: u64, k: i64) -> Self {
        let k = k.rem_euclid(level as i64) as usize;
        let mut coords = vec![BigQ::zero(); k + 1];
        coords[k] = BigQ::one();
        Self::normalized(level, coords)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coords(&self) -> &[BigQ] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.level == 1
    }

    pub fn to_rational(&self) -> Option<BigQ> {
        self.is_rational().then(|| self.coords.first().cloned().unwrap_or_else(BigQ::zero))
    }

    /// Rewrites the element at a level that is a multiple of the current one.
    pub fn lift(&self, level: u64) -> Self {
        assert!(level.is_multiple_of(self.level), "level {level} is not a multiple of {}", self.level);
        if level == self.level || self.is_rational() {
            return Self { level: self.level, coords: self.coords.clone() };
        }
        let step = (level / self.level) as usize;
        let mut poly = vec![BigQ::zero(); (self.coords.len() - 1) * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::normalized(level, poly)
    }

    fn lifted_pair(&self, other: &Self) -> (u64, Vec<BigQ>, Vec<BigQ>) {
        let level = self.level.lcm(&other.level);
        let a = if self.is_rational() { self.coords.clone() } else { self.lift(level).coords };
        let b = if other.is_rational() { other.coords.clone() } else { other.lift(level).coords };
        (level, a, b)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_bigq).collect()
    }
}

pub fn format_bigq(q: &BigQ) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = self.lifted_pair(other);
        a == b
    }
}

impl Eq for CyclotomicNumber {}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> CyclotomicNumber {
        let (level, mut a, b) = self.lifted_pair(rhs);
        if a.len() < b.len() {
            a.resize(b.len(), BigQ::zero());
        }
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        CyclotomicNumber::normalized(level, a)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { level: self.level, coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> CyclotomicNumber {
        if self.is_zero() || rhs.is_zero() {
            return CyclotomicNumber::zero();
        }
        let (level, a, b) = self.lifted_pair(rhs);
        let mut prod = vec![BigQ::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        CyclotomicNumber::normalized(level, prod)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", format_bigq(&q));
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_bigq(c),
                1 => format!("{}*z{}", format_bigq(c), self.level),
                _ => format!("{}*z{}^{}", format_bigq(c), self.level, i),
            })
            .collect();
        write!(f, "({})", parts.join(" + "))
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rational numbers are embedded at level 1.
impl From<crate::Q> for CyclotomicNumber {
    fn from(q: crate::Q) -> Self {
        Self::from_ratio(*q.numer(), *q.denom())
    }
}
