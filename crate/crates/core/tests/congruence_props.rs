use num_bigint::BigUint;
use proptest::prelude::*;
use thinlie::arith::{as_prime_power, binom_exact, binom_mod, lucas_digits, FpScalar, PrimeChar, PrimePower};
use thinlie::congruence::{
    chain_hypothesis_poly_test, chain_hypothesis_test, classify_admissible_k, classify_final_k,
    constituent_length_test, double_power_test, first_constituent_test, frobenius_power_test, TruncPoly,
};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn ch(p: u64) -> PrimeChar {
    PrimeChar::new(p).unwrap()
}

fn residue(s: &FpScalar) -> u64 {
    match s {
        FpScalar::Residue(v) => *v as u64,
        FpScalar::Integer(_) => panic!("expected a residue"),
    }
}

fn small_binom(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1))
}

proptest! {
    #[test]
    fn binom_mod_matches_exact(a in 0u64..1500, b in 0u64..1500, p in prime()) {
        let exact = binom_exact(a, b) % BigUint::from(p);
        prop_assert_eq!(BigUint::from(residue(&binom_mod(a, b, ch(p)))), exact);
    }

    #[test]
    fn lucas_product_of_digits(a in 0u64..100_000, b in 0u64..100_000, p in prime()) {
        let (da, db) = (lucas_digits(a, p), lucas_digits(b, p));
        let prod = da.iter().enumerate().fold(1u64, |acc, (i, &x)| {
            let y = db.get(i).copied().unwrap_or(0);
            acc * small_binom(x, y) % p
        });
        let prod = if db.len() > da.len() && db[da.len()..].iter().any(|&d| d > 0) { 0 } else { prod };
        prop_assert_eq!(residue(&binom_mod(a, b, ch(p))), prod);
    }

    #[test]
    fn digits_reassemble(a in 0u64..1_000_000, p in prime()) {
        let back = lucas_digits(a, p).iter().rev().fold(0u64, |acc, &d| acc * p + d);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn power_criteria_detect_powers(n in 1u64..700, p in prime()) {
        let is_power = as_prime_power(n, p).is_some();
        prop_assert_eq!(frobenius_power_test(n, ch(p)), is_power);
        prop_assert_eq!(double_power_test(n, ch(p)), is_power);
    }

    #[test]
    fn truncated_power_is_repeated_product(e in 0u64..40, order in 1usize..30, p in prime(), c in -5i64..5) {
        let base = TruncPoly::from_i64(ch(p), order, &[1, c, 2]);
        let mut acc = TruncPoly::one(ch(p), order);
        for _ in 0..e {
            acc = acc.mul_trunc(&base).unwrap();
        }
        prop_assert_eq!(base.pow_trunc(e), acc);
    }

    #[test]
    fn one_plus_x_powers_are_binomials(e in 0u64..200, p in prime()) {
        let order = 64;
        let poly = TruncPoly::one_plus_x(ch(p), order).pow_trunc(e);
        for j in 0..order as u64 {
            prop_assert_eq!(poly.coeff(j as usize), &binom_mod(e, j, ch(p)));
        }
    }

    #[test]
    fn chain_hypothesis_routes_agree(n in 2u64..150, p in prime()) {
        prop_assert_eq!(chain_hypothesis_test(n, ch(p), false), chain_hypothesis_poly_test(n, ch(p)));
    }

    #[test]
    fn chain_hypothesis_matches_lemma_set(n in 1u64..150, p in prop::sample::select(vec![0u64, 2, 3, 5, 7])) {
        let k = 2 * n + 1;
        let listed = classify_admissible_k(k, ch(p)).unwrap();
        prop_assert_eq!(chain_hypothesis_test(n, ch(p), false), listed.is_some());
        if let Some(form) = listed {
            prop_assert_eq!(form.value(), k);
        }
    }

    #[test]
    fn final_set_refines_lemma_set(n in 1u64..300, p in prop::sample::select(vec![0u64, 2, 3, 5, 7])) {
        let k = 2 * n + 1;
        if let Some(form) = classify_final_k(k, ch(p), true).unwrap() {
            prop_assert_eq!(form.value(), k);
            prop_assert!(classify_admissible_k(k, ch(p)).unwrap().is_some());
        }
    }

    #[test]
    fn first_constituent_closed_form(half in 1u64..500, p in prime()) {
        let ell = 2 * half;
        let found = first_constituent_test(ell, ch(p)).unwrap();
        prop_assert_eq!(found.map(|q| q.q()), as_prime_power(half, p).map(|_| half));
    }

    #[test]
    fn later_constituent_closed_form(s in 1u32..5, p in prop::sample::select(vec![2u64, 3, 5]), offset in 0u64..200) {
        let q = PrimePower::new(ch(p), s).unwrap();
        let qq = q.q();
        let ell = qq + offset % (qq + 1);
        let expected = ell == 2 * qq || as_prime_power(2 * qq - ell, p).is_some();
        let found = constituent_length_test(ell, q).unwrap();
        prop_assert_eq!(found.is_some(), expected);
        if let Some(c) = found {
            prop_assert_eq!(c.value(), ell);
        }
    }
}
