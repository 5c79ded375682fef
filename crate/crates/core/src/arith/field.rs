use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FpScalar, PrimeChar};

/// Ground field of a structure-constant table.
///
/// Elements are plain values; all arithmetic goes through the field
/// context so that the modulus of `F_p` is carried once, not per element.
// `from_*` constructors take `&self` because the modulus lives in the context
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn characteristic(&self) -> PrimeChar;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_scalar(&self, s: &FpScalar) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Scalars a search may branch over, in canonical order.
    ///
    /// All of `F_p`; for `Q` a finite window of small-height rationals.
    fn branch_values(&self) -> Vec<Self::Elem>;

    /// Whether `a X^2 + b XY + c Y^2` vanishes at some nonzero point.
    fn binary_form_isotropic(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> bool;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Option<Self::Elem>;
}

/// `F_p` for a prime `p`, elements as canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(ch: PrimeChar) -> Self {
        assert!(!ch.is_zero(), "F_p needs p > 0");
        PrimeField { p: ch.p() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> PrimeChar {
        PrimeChar(self.p)
    }

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn from_scalar(&self, s: &FpScalar) -> u32 {
        match s {
            FpScalar::Residue(v) => v % self.p,
            FpScalar::Integer(v) => {
                let m = BigInt::from(self.p);
                let r = v.mod_floor(&m);
                u32::try_from(r).expect("residue fits")
            }
        }
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, *a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        Some(t.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn branch_values(&self) -> Vec<u32> {
        (0..self.p).collect()
    }

    fn binary_form_isotropic(&self, a: &u32, b: &u32, c: &u32) -> bool {
        // points (1 : t) and (0 : 1)
        if *c == 0 {
            return true;
        }
        (0..self.p).any(|t| {
            let tt = self.mul(&t, &t);
            let v = self.add(&self.add(a, &self.mul(b, &t)), &self.mul(c, &tt));
            v == 0
        })
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Option<u32> {
        let v: i64 = s.trim().parse().ok()?;
        (0..self.p as i64).contains(&v).then_some(v as u32)
    }
}

/// The rationals, used for characteristic zero.
///
/// `height` bounds numerators and denominators of the values a search
/// branches over; it plays no role in arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalField {
    height: u32,
}

impl RationalField {
    pub fn new(height: u32) -> Self {
        RationalField { height }
    }

    pub fn height(&self) -> u32 {
        self.height
    }
}

impl Default for RationalField {
    fn default() -> Self {
        RationalField { height: 1 }
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

impl Field for RationalField {
    type Elem = BigRational;

    fn characteristic(&self) -> PrimeChar {
        PrimeChar::ZERO
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn from_scalar(&self, s: &FpScalar) -> BigRational {
        BigRational::from_integer(s.to_bigint())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn branch_values(&self) -> Vec<BigRational> {
        let h = self.height.max(1) as i64;
        let mut out = vec![BigRational::zero()];
        for den in 1..=h {
            for num in 1..=h {
                if num.gcd(&den) != 1 {
                    continue;
                }
                let v = BigRational::new(num.into(), den.into());
                out.push(v.clone());
                out.push(-v);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn binary_form_isotropic(&self, a: &BigRational, b: &BigRational, c: &BigRational) -> bool {
        if a.is_zero() || c.is_zero() {
            return true;
        }
        // rational root of a t^2 + b t + c iff the discriminant is a rational square
        let disc = b * b - BigRational::from_integer(4.into()) * a * c;
        if disc.is_negative() {
            return false;
        }
        is_square(disc.numer()) && is_square(disc.denom())
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Option<BigRational> {
        s.trim().parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(PrimeChar::new(7).unwrap());
        for a in 1..7 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn isotropy() {
        let f5 = PrimeField::new(PrimeChar::new(5).unwrap());
        // X^2 - 2 Y^2: 2 is a non-square mod 5
        assert!(!f5.binary_form_isotropic(&1, &0, &3));
        // X^2 - Y^2
        assert!(f5.binary_form_isotropic(&1, &0, &4));
        let q = RationalField::default();
        let r = |n: i64| q.from_i64(n);
        assert!(!q.binary_form_isotropic(&r(1), &r(0), &r(1)));
        assert!(q.binary_form_isotropic(&r(1), &r(0), &r(-4)));
        assert!(!q.binary_form_isotropic(&r(1), &r(0), &r(-2)));
    }

    #[test]
    fn rational_branch_window() {
        assert_eq!(RationalField::new(1).branch_values().len(), 3);
        // 0, ±1, ±2, ±1/2
        assert_eq!(RationalField::new(2).branch_values().len(), 7);
    }

    #[test]
    fn parse_and_format() {
        let f = PrimeField::new(PrimeChar::new(5).unwrap());
        assert_eq!(f.parse("4"), Some(4));
        assert_eq!(f.parse("5"), None);
        let q = RationalField::default();
        let v = q.parse("-3/2").unwrap();
        assert_eq!(q.format(&v), "-3/2");
    }
}
