//! Truncated polynomials over `F_p` (or `Z` when `p = 0`) and the binomial
//! congruence criteria behind the admissible values of constituent lengths
//! and second-diamond degrees.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binom_mod, FpScalar, PrimeChar, PrimePower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("polynomials differ in characteristic or truncation order")]
    Mismatch,
    #[error("expected an odd value, got {0}")]
    EvenValue(u64),
    #[error("expected an even length, got {0}")]
    OddLength(u64),
    #[error("constituent length {ell} outside [{q}, {}]", 2 * q)]
    OutOfRange { ell: u64, q: u64 },
}

/// A polynomial modulo `X^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    ch: PrimeChar,
    coeffs: Vec<FpScalar>,
}

impl TruncPoly {
    pub fn zero(ch: PrimeChar, order: usize) -> Self {
        TruncPoly { ch, coeffs: vec![ch.zero(); order] }
    }

    pub fn one(ch: PrimeChar, order: usize) -> Self {
        Self::from_i64(ch, order, &[1])
    }

    /// Truncates (or zero-pads) the given low-order coefficients.
    pub fn from_i64(ch: PrimeChar, order: usize, low: &[i64]) -> Self {
        let mut p = Self::zero(ch, order);
        for (c, v) in p.coeffs.iter_mut().zip(low) {
            *c = ch.from_i64(*v);
        }
        p
    }

    /// `1 + X`
    pub fn one_plus_x(ch: PrimeChar, order: usize) -> Self {
        Self::from_i64(ch, order, &[1, 1])
    }

    pub fn characteristic(&self) -> PrimeChar {
        self.ch
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, j: usize) -> &FpScalar {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[FpScalar] {
        &self.coeffs
    }

    /// Product modulo `X^order`.
    pub fn mul_trunc(&self, other: &TruncPoly) -> Result<TruncPoly, CongruenceError> {
        if self.ch != other.ch || self.order() != other.order() {
            return Err(CongruenceError::Mismatch);
        }
        let n = self.order();
        let ch = self.ch;
        if !ch.is_zero() {
            return Ok(self.mul_residues(other));
        }
        let mut out = TruncPoly::zero(ch, n);
        // exact integers for p = 0
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = ch.mul(a, b);
                out.coeffs[i + j] = ch.add(&out.coeffs[i + j], &t);
            }
        }
        Ok(out)
    }

    /// Product over `F_p` touching only pairs of nonzero terms.
    fn mul_residues(&self, other: &TruncPoly) -> TruncPoly {
        let n = self.order();
        let p = self.ch.p() as u64;
        let terms = |t: &TruncPoly| -> Vec<(usize, u64)> {
            t.coeffs
                .iter()
                .enumerate()
                .filter_map(|(i, c)| match c {
                    FpScalar::Residue(v) if *v != 0 => Some((i, *v as u64)),
                    _ => None,
                })
                .collect()
        };
        let (a, b) = (terms(self), terms(other));
        let mut acc = vec![0u64; n];
        for &(i, x) in &a {
            for &(j, y) in b.iter().take_while(|(j, _)| i + j < n) {
                // acc < p and x * y < p^2, so this fits for p < 2^32
                acc[i + j] = (acc[i + j] + x * y) % p;
            }
        }
        TruncPoly { ch: self.ch, coeffs: acc.into_iter().map(|v| FpScalar::Residue(v as u32)).collect() }
    }

    /// `self^e` modulo `X^order` by binary exponentiation.
    pub fn pow_trunc(&self, e: u64) -> TruncPoly {
        let mut acc = TruncPoly::one(self.ch, self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_trunc(&base).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_trunc(&base).expect("same shape");
            }
        }
        acc
    }

    fn nonzero_in(&self, range: std::ops::Range<usize>) -> bool {
        self.coeffs[range].iter().any(|c| !c.is_zero())
    }
}

/// `(X + 1)^n == X^n + 1` in `F_p[X]`.
pub fn frobenius_power_test(n: u64, ch: PrimeChar) -> bool {
    assert!(n >= 1 && !ch.is_zero());
    let order = n as usize + 1;
    let lhs = TruncPoly::one_plus_x(ch, order).pow_trunc(n);
    let mut rhs = TruncPoly::one(ch, order);
    rhs.coeffs[n as usize] = ch.add(&rhs.coeffs[n as usize], &ch.one());
    lhs == rhs
}

/// `(1 + X)^{2n} == 1 (mod X^n)` in `F_p[X]`.
pub fn double_power_test(n: u64, ch: PrimeChar) -> bool {
    assert!(n >= 1 && !ch.is_zero());
    let order = n as usize;
    let f = TruncPoly::one_plus_x(ch, order).pow_trunc(2 * n);
    !f.nonzero_in(1..order)
}

/// `C(2n+1, j+1) == n C(2n+1, j) (mod p)` for `0 < j < n - 1`, or for
/// `0 < j < n` when `extended`.
pub fn chain_hypothesis_test(n: u64, ch: PrimeChar, extended: bool) -> bool {
    assert!(n >= 1);
    let m = 2 * n + 1;
    let end = if extended { n } else { n.saturating_sub(1) };
    let nn = ch.from_u64(n);
    (1..end).all(|j| {
        let lhs = binom_mod(m, j + 1, ch);
        let rhs = ch.mul(&nn, &binom_mod(m, j, ch));
        lhs == rhs
    })
}

/// `(X + 1)^{2n+1} (1 - nX) == 1 + (n + 1) X (mod X^n)`.
pub fn chain_hypothesis_poly_test(n: u64, ch: PrimeChar) -> bool {
    chain_hypothesis_poly_test_at(n, ch, n as usize)
}

/// As [`chain_hypothesis_poly_test`] with a caller-chosen truncation order
/// (at least `n`); coefficients at `X^n` and above are ignored.
pub fn chain_hypothesis_poly_test_at(n: u64, ch: PrimeChar, order: usize) -> bool {
    assert!(n >= 2 && order >= n as usize);
    let lhs = TruncPoly::one_plus_x(ch, order)
        .pow_trunc(2 * n + 1)
        .mul_trunc(&TruncPoly::from_i64(ch, order, &[1, -(n as i64)]))
        .expect("same shape");
    let rhs = TruncPoly::from_i64(ch, order, &[1, n as i64 + 1]);
    lhs.coeffs[..n as usize] == rhs.coeffs[..n as usize]
}

/// Closed-form values of the second-diamond degree allowed by the chain
/// lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", content = "q", rename_all = "snake_case")]
pub enum AdmissibleK {
    Three,
    Five,
    Seven,
    Q(PrimePower),
    TwoQMinusOne(PrimePower),
    TwoQPlusOne(PrimePower),
}

impl AdmissibleK {
    pub fn value(&self) -> u64 {
        match self {
            AdmissibleK::Three => 3,
            AdmissibleK::Five => 5,
            AdmissibleK::Seven => 7,
            AdmissibleK::Q(q) => q.q(),
            AdmissibleK::TwoQMinusOne(q) => 2 * q.q() - 1,
            AdmissibleK::TwoQPlusOne(q) => 2 * q.q() + 1,
        }
    }

    pub fn label(&self) -> String {
        match self {
            AdmissibleK::Three => "3".into(),
            AdmissibleK::Five => "5".into(),
            AdmissibleK::Seven => "7".into(),
            AdmissibleK::Q(q) => format!("q (q={})", q.q()),
            AdmissibleK::TwoQMinusOne(q) => format!("2q-1 (q={})", q.q()),
            AdmissibleK::TwoQPlusOne(q) => format!("2q+1 (q={})", q.q()),
        }
    }
}

fn power_with_s_ge_1(n: u64, ch: PrimeChar) -> Option<PrimePower> {
    PrimePower::of(n, ch).filter(|q| q.s() >= 1)
}

/// Prime-power forms in the order `q`, `2q - 1`, `2q + 1` (with `q >= p`).
fn prime_power_form(value: u64, ch: PrimeChar) -> Option<AdmissibleK> {
    if ch.is_zero() {
        return None;
    }
    if let Some(q) = power_with_s_ge_1(value, ch) {
        return Some(AdmissibleK::Q(q));
    }
    if value % 2 == 1 {
        if let Some(q) = power_with_s_ge_1(value.div_ceil(2), ch) {
            return Some(AdmissibleK::TwoQMinusOne(q));
        }
        if let Some(q) = power_with_s_ge_1((value - 1) / 2, ch) {
            return Some(AdmissibleK::TwoQPlusOne(q));
        }
    }
    None
}

fn small_form(value: u64) -> Option<AdmissibleK> {
    match value {
        3 => Some(AdmissibleK::Three),
        5 => Some(AdmissibleK::Five),
        7 => Some(AdmissibleK::Seven),
        _ => None,
    }
}

/// Membership of `value` in `{3, 5, 7, q, 2q-1, 2q+1}`.
pub fn classify_admissible_k(value: u64, ch: PrimeChar) -> Result<Option<AdmissibleK>, CongruenceError> {
    if value.is_multiple_of(2) {
        return Err(CongruenceError::EvenValue(value));
    }
    Ok(small_form(value).or_else(|| prime_power_form(value, ch)))
}

fn half_divisible(value: u64, ch: PrimeChar) -> bool {
    let half = (value - 1) / 2;
    if ch.is_zero() {
        half == 0
    } else {
        half.is_multiple_of(ch.p() as u64)
    }
}

/// Degree of the second diamond allowed at theorem level.
///
/// Starts from the chain-lemma set, drops `7` unless `p` is `2` or `7`, and
/// when `half_not_divisible` is set also drops values with
/// `p | (value - 1) / 2`. With the flag set the result is `{3, 5, q, 2q-1}`
/// for odd `p`, `{3, 2q-1}` for `p = 2` and `{3, 5}` for `p = 0`.
pub fn classify_final_k(
    value: u64,
    ch: PrimeChar,
    half_not_divisible: bool,
) -> Result<Option<AdmissibleK>, CongruenceError> {
    if value.is_multiple_of(2) {
        return Err(CongruenceError::EvenValue(value));
    }
    if classify_admissible_k(value, ch)?.is_none() {
        return Ok(None);
    }
    if value == 7 && ch.p() != 2 && ch.p() != 7 {
        return Ok(None);
    }
    if half_not_divisible && half_divisible(value, ch) {
        return Ok(None);
    }
    let by_theorem = match value {
        3 => Some(AdmissibleK::Three),
        5 if ch.p() != 2 => Some(AdmissibleK::Five),
        _ => prime_power_form(value, ch),
    };
    Ok(by_theorem.or_else(|| small_form(value)))
}

/// The first-constituent congruence: `C(ell, j) == 0 (mod p)` for every
/// `0 < j < ell` other than `ell / 2`.
pub fn first_constituent_criterion(ell: u64, ch: PrimeChar) -> Result<bool, CongruenceError> {
    if ell % 2 == 1 || ell < 2 {
        return Err(CongruenceError::OddLength(ell));
    }
    let half = ell / 2;
    Ok((1..ell).filter(|&j| j != half).all(|j| binom_mod(ell, j, ch).is_zero()))
}

/// Returns `q` with `ell = 2q` when the first-constituent congruence holds.
pub fn first_constituent_test(ell: u64, ch: PrimeChar) -> Result<Option<PrimePower>, CongruenceError> {
    if !first_constituent_criterion(ell, ch)? {
        return Ok(None);
    }
    Ok(PrimePower::of(ell / 2, ch))
}

/// Length of a later constituent relative to `2q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibleConstituent {
    /// `2q`
    FullLength { q: PrimePower },
    /// `2q - p^s` with `p^s <= q`
    Deficit { q: PrimePower, s: u32 },
}

impl AdmissibleConstituent {
    pub fn value(&self) -> u64 {
        match self {
            AdmissibleConstituent::FullLength { q } => 2 * q.q(),
            AdmissibleConstituent::Deficit { q, s } => 2 * q.q() - (q.p() as u64).pow(*s),
        }
    }
}

/// The later-constituent congruence `C(j, j - ell + 1) == 0 (mod p)` for
/// `ell <= j < 2q - 1`.
pub fn constituent_length_criterion(ell: u64, q: PrimePower) -> Result<bool, CongruenceError> {
    let qq = q.q();
    if ell < qq || ell > 2 * qq {
        return Err(CongruenceError::OutOfRange { ell, q: qq });
    }
    let ch = PrimeChar::new(q.p() as u64).expect("prime");
    Ok((ell..(2 * qq).saturating_sub(1)).all(|j| binom_mod(j, j - ell + 1, ch).is_zero()))
}

/// Classifies `ell` as `2q` or `2q - p^s` when the later-constituent
/// congruence holds.
pub fn constituent_length_test(ell: u64, q: PrimePower) -> Result<Option<AdmissibleConstituent>, CongruenceError> {
    if !constituent_length_criterion(ell, q)? {
        return Ok(None);
    }
    let qq = q.q();
    if ell == 2 * qq {
        return Ok(Some(AdmissibleConstituent::FullLength { q }));
    }
    let ch = PrimeChar::new(q.p() as u64).expect("prime");
    Ok(PrimePower::of(2 * qq - ell, ch).map(|d| AdmissibleConstituent::Deficit { q, s: d.s() }))
}

/// `(-1)^a C(a, b) == (-1)^b C(q-1-b, q-1-a) (mod p)` for `0 <= b <= a < q`.
pub fn reflection_identity_check(q: PrimePower) -> bool {
    let ch = PrimeChar::new(q.p() as u64).expect("prime");
    let qq = q.q();
    let signed = |negative: bool, v: FpScalar| if negative { ch.neg(&v) } else { v };
    (0..qq).all(|a| {
        (0..=a).all(|b| {
            let lhs = signed(a % 2 == 1, binom_mod(a, b, ch));
            let rhs = signed(b % 2 == 1, binom_mod(qq - 1 - b, qq - 1 - a, ch));
            lhs == rhs
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{as_prime_power, binom_exact};

    fn ch(p: u64) -> PrimeChar {
        PrimeChar::new(p).unwrap()
    }

    #[test]
    fn residue_product_matches_schoolbook() {
        for p in [2u64, 3, 7, 65_521] {
            let order = 23;
            let a: Vec<i64> = (0..order as i64).map(|i| (i * i * 7 + 3) % 11 - 5).collect();
            let b: Vec<i64> = (0..17).map(|i| if i % 3 == 0 { 0 } else { 40_000 - i * 977 }).collect();
            let got = TruncPoly::from_i64(ch(p), order, &a).mul_trunc(&TruncPoly::from_i64(ch(p), order, &b)).unwrap();
            let mut naive = vec![0i128; order];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate().filter(|(j, _)| i + j < order) {
                    naive[i + j] += *x as i128 * *y as i128;
                }
            }
            let want: Vec<i64> = naive.iter().map(|v| v.rem_euclid(p as i128) as i64).collect();
            assert_eq!(got, TruncPoly::from_i64(ch(p), order, &want), "p = {p}");
        }
    }

    fn pp(p: u64, s: u32) -> PrimePower {
        PrimePower::new(ch(p), s).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let f = TruncPoly::one_plus_x(ch(2), 3);
        assert_eq!(f.mul_trunc(&f).unwrap(), TruncPoly::from_i64(ch(2), 3, &[1, 0, 1]));
        let g = TruncPoly::from_i64(ch(5), 4, &[2, 0, 3, 1]);
        assert_eq!(g.mul_trunc(&TruncPoly::one(ch(5), 4)).unwrap(), g);
        let a = TruncPoly::one_plus_x(ch(5), 2);
        let b = TruncPoly::from_i64(ch(5), 2, &[1, -1]);
        assert_eq!(a.mul_trunc(&b).unwrap(), TruncPoly::one(ch(5), 2));
        assert_eq!(a.mul_trunc(&TruncPoly::one(ch(3), 2)), Err(CongruenceError::Mismatch));
        assert_eq!(a.mul_trunc(&TruncPoly::one(ch(5), 3)), Err(CongruenceError::Mismatch));
    }

    #[test]
    fn power_examples() {
        let f = TruncPoly::one_plus_x(ch(2), 8);
        let mut slow = TruncPoly::one(ch(2), 8);
        for _ in 0..4 {
            slow = slow.mul_trunc(&f).unwrap();
        }
        assert_eq!(f.pow_trunc(4), slow);
        assert_eq!(f.pow_trunc(4), TruncPoly::from_i64(ch(2), 8, &[1, 0, 0, 0, 1]));
        assert_eq!(f.pow_trunc(0), TruncPoly::one(ch(2), 8));
        assert_eq!(f.pow_trunc(8), TruncPoly::one(ch(2), 8));
    }

    #[test]
    fn power_coefficients_are_binomials() {
        for p in [0, 2, 3, 5] {
            let c = ch(p);
            for e in [0u64, 1, 7, 12, 25] {
                let f = TruncPoly::one_plus_x(c, 30).pow_trunc(e);
                for j in 0..30 {
                    assert_eq!(f.coeff(j), &binom_mod(e, j as u64, c));
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        assert!(frobenius_power_test(9, ch(3)));
        assert!(!frobenius_power_test(6, ch(3)));
        for p in [2, 3, 5, 7] {
            assert!(frobenius_power_test(1, ch(p)));
        }
    }

    #[test]
    fn double_power_examples() {
        assert!(double_power_test(4, ch(2)));
        assert!(!double_power_test(6, ch(2)));
        assert!(double_power_test(1, ch(3)));
    }

    #[test]
    fn double_power_matches_binomial_route() {
        for p in [2, 3, 5, 7] {
            for n in 1..200u64 {
                let by_binom = (1..n).all(|k| binom_mod(2 * n, k, ch(p)).is_zero());
                assert_eq!(double_power_test(n, ch(p)), by_binom, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn chain_examples() {
        for p in [0, 2, 3, 5, 7, 11] {
            assert!(chain_hypothesis_test(3, ch(p), false));
            assert!(chain_hypothesis_test(2, ch(p), false));
        }
        // C(9,3) = 84, 4 C(9,2) = 144, difference 60 is nonzero mod 7
        assert!(!chain_hypothesis_test(4, ch(7), false));
        assert!(chain_hypothesis_poly_test(2, ch(3)));
        assert!(!chain_hypothesis_poly_test(4, ch(7)));
        for (p, q) in [(2, 4), (2, 8), (3, 9), (5, 5)] {
            assert!(chain_hypothesis_poly_test(q, ch(p)), "n=q={q}, p={p}");
        }
    }

    #[test]
    fn chain_raised_order_is_equivalent() {
        for p in [0, 3, 5] {
            for n in 2..40 {
                assert_eq!(
                    chain_hypothesis_poly_test(n, ch(p)),
                    chain_hypothesis_poly_test_at(n, ch(p), n as usize + 5)
                );
            }
        }
    }

    #[test]
    fn chain_exact_oracle_in_characteristic_zero() {
        // direct integer comparison with binom_exact
        for n in 2..60u64 {
            let m = 2 * n + 1;
            let expect = (1..n - 1).all(|j| binom_exact(m, j + 1) == binom_exact(m, j) * num_bigint::BigUint::from(n));
            assert_eq!(chain_hypothesis_test(n, PrimeChar::ZERO, false), expect);
        }
    }

    #[test]
    fn admissible_k_examples() {
        assert_eq!(classify_admissible_k(9, ch(2)).unwrap(), Some(AdmissibleK::TwoQPlusOne(pp(2, 2))));
        assert_eq!(classify_admissible_k(9, ch(5)).unwrap(), Some(AdmissibleK::TwoQMinusOne(pp(5, 1))));
        assert_eq!(classify_admissible_k(11, ch(3)).unwrap(), None);
        assert_eq!(classify_admissible_k(8, ch(3)), Err(CongruenceError::EvenValue(8)));
        assert_eq!(classify_admissible_k(27, ch(3)).unwrap(), Some(AdmissibleK::Q(pp(3, 3))));
        assert_eq!(classify_admissible_k(9, PrimeChar::ZERO).unwrap(), None);
    }

    #[test]
    fn final_k_examples() {
        assert_eq!(classify_final_k(7, ch(2), true).unwrap(), Some(AdmissibleK::TwoQMinusOne(pp(2, 2))));
        assert_eq!(classify_final_k(7, ch(5), true).unwrap(), None);
        assert_eq!(classify_final_k(5, PrimeChar::ZERO, true).unwrap(), Some(AdmissibleK::Five));
        assert_eq!(classify_final_k(7, ch(7), true).unwrap(), Some(AdmissibleK::Q(pp(7, 1))));
        // 2q + 1 survives only without the divisibility restriction
        assert_eq!(classify_final_k(11, ch(5), true).unwrap(), None);
        assert_eq!(classify_final_k(11, ch(5), false).unwrap(), Some(AdmissibleK::TwoQPlusOne(pp(5, 1))));
        assert_eq!(classify_final_k(5, ch(2), true).unwrap(), None);
    }

    #[test]
    fn final_k_closed_form() {
        for p in [0u64, 2, 3, 5, 7, 11] {
            let c = ch(p);
            for v in (3..400).step_by(2) {
                let got = classify_final_k(v, c, true).unwrap().is_some();
                let is_q = p > 0 && as_prime_power(v, p).is_some_and(|s| s >= 1);
                let is_2q_minus_1 = p > 0 && as_prime_power(v.div_ceil(2), p).is_some_and(|s| s >= 1);
                let expect = match p {
                    0 => v == 3 || v == 5,
                    2 => v == 3 || is_2q_minus_1,
                    _ => v == 3 || v == 5 || is_q || is_2q_minus_1,
                };
                assert_eq!(got, expect, "v={v} p={p}");
                if let Some(k) = classify_final_k(v, c, true).unwrap() {
                    assert_eq!(k.value(), v);
                }
            }
        }
    }

    #[test]
    fn first_constituent_examples() {
        assert_eq!(first_constituent_test(6, ch(3)).unwrap(), Some(pp(3, 1)));
        assert_eq!(first_constituent_test(6, ch(5)).unwrap(), None);
        assert_eq!(first_constituent_test(4, ch(2)).unwrap(), Some(pp(2, 1)));
        assert_eq!(first_constituent_test(7, ch(2)), Err(CongruenceError::OddLength(7)));
        assert_eq!(first_constituent_test(6, PrimeChar::ZERO).unwrap(), None);
    }

    #[test]
    fn constituent_length_examples() {
        let q4 = pp(2, 2);
        assert_eq!(constituent_length_test(6, q4).unwrap(), Some(AdmissibleConstituent::Deficit { q: q4, s: 1 }));
        assert_eq!(constituent_length_test(5, q4).unwrap(), None);
        assert_eq!(constituent_length_test(8, q4).unwrap(), Some(AdmissibleConstituent::FullLength { q: q4 }));
        assert_eq!(constituent_length_test(7, q4).unwrap(), Some(AdmissibleConstituent::Deficit { q: q4, s: 0 }));
        assert_eq!(constituent_length_test(3, q4), Err(CongruenceError::OutOfRange { ell: 3, q: 4 }));
        assert_eq!(constituent_length_test(6, q4).unwrap().unwrap().value(), 6);
    }

    #[test]
    fn reflection_examples() {
        assert!(reflection_identity_check(pp(5, 1)));
        assert!(reflection_identity_check(pp(3, 2)));
        assert!(reflection_identity_check(pp(2, 3)));
    }
}
