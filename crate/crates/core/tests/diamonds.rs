use thinlie::arith::{Field, PrimeChar, PrimeField};
use thinlie::lie_engine::{Extent, Generator, GradedAlgebra, LeftNormedWord, LieError, ThinTable};
use thinlie::search::{enumerate_thin, AlgebraKind, SearchConfig};

fn fp(p: u64) -> PrimeField {
    PrimeField::new(PrimeChar::new(p).unwrap())
}

fn thin(p: u64, n: usize, vxx_zero: bool) -> Vec<ThinTable<PrimeField>> {
    let mut cfg = SearchConfig::new(PrimeChar::new(p).unwrap(), n, AlgebraKind::Thin).unwrap();
    cfg.normalization.vxx_zero = vxx_zero;
    enumerate_thin(fp(p), &cfg).unwrap().collect()
}

fn with_k(tables: &[ThinTable<PrimeField>], k: usize) -> Vec<&ThinTable<PrimeField>> {
    tables.iter().filter(|t| t.diamond_degrees().first() == Some(&k)).collect()
}

fn word(t: &ThinTable<PrimeField>, k: usize, tail: &str) -> Vec<u32> {
    let mut w = LeftNormedWord::power(Generator::Y, Generator::X, k - 2);
    for c in tail.chars() {
        w = w.then(if c == 'x' { Generator::X } else { Generator::Y }, 1);
    }
    t.eval_word(&w).unwrap().coords
}

#[test]
fn normalization_of_x() {
    let f = fp(7);
    let free = thin(7, 9, false);
    let ks = with_k(&free, 5);
    assert!(!ks.is_empty());
    let mut moved = 0;
    for t in ks {
        let (vxx, vyx) = (word(t, 5, "xx"), word(t, 5, "yx"));
        let j = vyx.iter().position(|c| *c != 0).unwrap();
        let c = f.div(&vxx[j], &vyx[j]).unwrap();
        let (alpha, normal) = t.normalize_x(5).unwrap();
        assert_eq!(alpha, f.div(&f.neg(&f.mul(&2, &c)), &6).unwrap());
        assert!(word(&normal, 5, "xx").iter().all(|c| *c == 0));
        if alpha != 0 {
            moved += 1;
        }
        let (before, after) = (t.diamond_profile().unwrap(), normal.diamond_profile().unwrap());
        assert_eq!((before.k, before.h, &before.diamond_degrees), (after.k, after.h, &after.diamond_degrees));
        assert_eq!(after.normalization_alpha.as_deref(), Some("0"));
    }
    assert!(moved > 0);

    for t in with_k(&thin(7, 9, true), 5) {
        assert_eq!(t.normalize_x(5).unwrap().0, 0);
    }
}

#[test]
fn normalization_needs_k_invertible_and_large() {
    let tables = thin(5, 13, true);
    let nines = with_k(&tables, 9);
    assert!(!nines.is_empty());
    for t in &nines {
        assert_eq!(t.normalize_x(9).unwrap_err(), LieError::NormalizationImpossible { k: 9 });
        // [vxy] = 4 [vyx] at k = 9
        let (vxy, vyx) = (word(t, 9, "xy"), word(t, 9, "yx"));
        assert_eq!(vxy, vyx.iter().map(|c| (4 * c) % 5).collect::<Vec<_>>());
        assert_eq!(t.diamond_profile().unwrap().diamond_relation_holds, Some(true));
    }
    let threes = with_k(&tables, 3);
    assert_eq!(threes[0].normalize_x(3).unwrap_err(), LieError::SmallDiamond { k: 3 });
}

#[test]
fn chain_parameter_examples() {
    for t in with_k(&thin(7, 17, true), 5) {
        let d = t.diamond_profile().unwrap();
        assert_eq!(d.h, Extent::Finite(2));
        assert_eq!(d.vyy_vanishes, Some(true));
        assert!(!d.half_divisible);
    }
    // k = 2q - 1 with q = 3
    let p3 = thin(3, 12, true);
    let fives = with_k(&p3, 5);
    assert!(!fives.is_empty());
    for t in fives {
        assert_eq!(t.diamond_profile().unwrap().h, Extent::Finite(2));
    }
    // the k = q family has a metabelian quotient
    for t in with_k(&thin(3, 21, true), 9) {
        assert!(t.metabelian_quotient_check(9));
        let h = t.diamond_profile().unwrap().h.value().unwrap();
        assert!((4..=9).contains(&h));
    }
    for t in with_k(&p3, 3) {
        assert!(t.metabelian_quotient_check(3));
        let h = t.diamond_profile().unwrap().h.value().unwrap();
        assert!(h == 1 || h == 2);
    }
}

#[test]
fn profile_needs_covering() {
    let f = fp(3);
    let m = |rows, data: Vec<u32>| thinlie::linalg::Mat::from_rows(rows, data.len() / rows, data);
    // L_3 two-dimensional, then [z, L_1] = 0 for z = [y x x]
    let phis = vec![m(1, vec![0, 1, 2, 0]), m(2, vec![1, 0, 0, 1]), m(1, vec![0, 1, 0, 1])];
    let t = ThinTable::new(f, phis).unwrap();
    assert_eq!(t.covering_violation(), Some(3));
    assert_eq!(t.diamond_profile().unwrap_err(), LieError::CoveringViolation { degree: 3 });
}
