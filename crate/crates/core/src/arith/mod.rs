//! Exact integer and modular arithmetic.
//!
//! Characteristic `0` is supported throughout and means plain integer
//! arithmetic: a "congruence mod 0" is an equality of integers.

mod field;

pub use field::{Field, PrimeField, RationalField};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is neither 0 nor a prime")]
    NotPrimeOrZero(u64),
    #[error("characteristic {0} is too large (must fit in 32 bits)")]
    TooLarge(u64),
    #[error("exponent {s} overflows {p}^s")]
    PowerOverflow { p: u32, s: u32 },
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The characteristic of the ground field: a prime, or `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeChar(u32);

impl PrimeChar {
    pub const ZERO: PrimeChar = PrimeChar(0);

    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p > u32::MAX as u64 {
            return Err(ArithError::TooLarge(p));
        }
        if p == 0 || is_prime(p) {
            Ok(PrimeChar(p as u32))
        } else {
            Err(ArithError::NotPrimeOrZero(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn zero(self) -> FpScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FpScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FpScalar {
        if self.0 == 0 {
            FpScalar::Integer(BigInt::from(v))
        } else {
            FpScalar::Residue(v.rem_euclid(self.0 as i64) as u32)
        }
    }

    pub fn from_u64(self, v: u64) -> FpScalar {
        if self.0 == 0 {
            FpScalar::Integer(BigInt::from(v))
        } else {
            FpScalar::Residue((v % self.0 as u64) as u32)
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> FpScalar {
        if self.0 == 0 {
            FpScalar::Integer(v.clone())
        } else {
            let m = BigInt::from(self.0);
            let r = ((v % &m) + &m) % &m;
            FpScalar::Residue(r.to_u32().expect("residue fits"))
        }
    }

    pub fn add(self, a: &FpScalar, b: &FpScalar) -> FpScalar {
        match (a, b) {
            (FpScalar::Residue(x), FpScalar::Residue(y)) => {
                FpScalar::Residue(((*x as u64 + *y as u64) % self.0 as u64) as u32)
            }
            (FpScalar::Integer(x), FpScalar::Integer(y)) => FpScalar::Integer(x + y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(self, a: &FpScalar) -> FpScalar {
        match a {
            FpScalar::Residue(0) => FpScalar::Residue(0),
            FpScalar::Residue(x) => FpScalar::Residue(self.0 - x),
            FpScalar::Integer(x) => FpScalar::Integer(-x),
        }
    }

    pub fn sub(self, a: &FpScalar, b: &FpScalar) -> FpScalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &FpScalar, b: &FpScalar) -> FpScalar {
        match (a, b) {
            (FpScalar::Residue(x), FpScalar::Residue(y)) => {
                FpScalar::Residue(((*x as u64 * *y as u64) % self.0 as u64) as u32)
            }
            (FpScalar::Integer(x), FpScalar::Integer(y)) => FpScalar::Integer(x * y),
            _ => panic!("mixed scalar kinds"),
        }
    }
}

impl fmt::Display for PrimeChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for PrimeChar {
    type Error = ArithError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeChar::new(p)
    }
}

impl From<PrimeChar> for u64 {
    fn from(c: PrimeChar) -> u64 {
        c.0 as u64
    }
}

/// A residue mod `p`, or an exact integer when `p = 0`.
///
/// The residue is always canonical (`0 <= value < p`), so derived equality
/// is equality of classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FpScalar {
    Residue(u32),
    Integer(BigInt),
}

impl FpScalar {
    pub fn is_zero(&self) -> bool {
        match self {
            FpScalar::Residue(v) => *v == 0,
            FpScalar::Integer(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FpScalar::Residue(v) => *v == 1,
            FpScalar::Integer(v) => v.is_one(),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            FpScalar::Residue(v) => BigInt::from(*v),
            FpScalar::Integer(v) => v.clone(),
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpScalar::Residue(v) => v.fmt(f),
            FpScalar::Integer(v) => v.fmt(f),
        }
    }
}

/// `q = p^s` for a positive characteristic `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    p: u32,
    s: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: PrimeChar, s: u32) -> Result<Self, ArithError> {
        assert!(!p.is_zero(), "prime powers need a positive characteristic");
        let q = (p.p() as u64).checked_pow(s).ok_or(ArithError::PowerOverflow { p: p.p(), s })?;
        Ok(PrimePower { p: p.p(), s, q })
    }

    /// Recognises `n` as a power of `p`.
    pub fn of(n: u64, p: PrimeChar) -> Option<Self> {
        if p.is_zero() || n == 0 {
            return None;
        }
        as_prime_power(n, p.p() as u64).map(|s| PrimePower { p: p.p(), s, q: n })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.s)
    }
}

/// Exact binomial coefficient by additive Pascal recursion.
///
/// Only the first `min(b, a - b) + 1` columns of each row are built, so the
/// cost is `O(a * min(b, a - b))` big-integer additions.
pub fn binom_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as usize;
    let mut row = vec![BigUint::zero(); b + 1];
    row[0] = BigUint::one();
    for n in 1..=a as usize {
        let top = b.min(n);
        for k in (1..=top).rev() {
            let prev = row[k - 1].clone();
            row[k] += prev;
        }
    }
    row.swap_remove(b)
}

/// Successive rows of Pascal's triangle, starting from row 0.
///
/// Rows are built additively from their predecessor, which makes this the
/// natural oracle for sweeps over every `(a, b)` up to a bound.
#[derive(Debug, Clone, Default)]
pub struct PascalRows {
    row: Vec<BigUint>,
}

impl Iterator for PascalRows {
    type Item = Vec<BigUint>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.row.is_empty() {
            self.row.push(BigUint::one());
        } else {
            let mut next = Vec::with_capacity(self.row.len() + 1);
            next.push(BigUint::one());
            for w in self.row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigUint::one());
            self.row = next;
        }
        Some(self.row.clone())
    }
}

pub fn pascal_rows() -> PascalRows {
    PascalRows::default()
}

/// Little-endian base-`p` digits of `a`; `[0]` for `a = 0`.
pub fn lucas_digits(a: u64, p: u64) -> Vec<u64> {
    assert!(p >= 2, "base must be at least 2");
    if a == 0 {
        return vec![0];
    }
    let mut digits = Vec::new();
    let mut a = a;
    while a > 0 {
        digits.push(a % p);
        a /= p;
    }
    digits
}

/// Returns `s` with `n = p^s`, if any.
pub fn as_prime_power(n: u64, p: u64) -> Option<u32> {
    assert!(p >= 2 && n >= 1);
    let mut n = n;
    let mut s = 0;
    while n.is_multiple_of(p) {
        n /= p;
        s += 1;
    }
    (n == 1).then_some(s)
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for digits `a, b < p`.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

/// `C(a, b)` reduced in characteristic `ch`: Lucas' digit product for
/// `p > 0`, the exact integer for `p = 0`.
pub fn binom_mod(a: u64, b: u64, ch: PrimeChar) -> FpScalar {
    if ch.is_zero() {
        return FpScalar::Integer(BigInt::from(binom_exact(a, b)));
    }
    if b > a {
        return FpScalar::Residue(0);
    }
    let p = ch.p() as u64;
    let (mut a, mut b) = (a, b);
    let mut acc = 1u64;
    while b > 0 || a > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return FpScalar::Residue(0);
        }
        acc = acc * small_binom_mod(ad, bd, p) % p;
        a /= p;
        b /= p;
    }
    FpScalar::Residue(acc as u32)
}
