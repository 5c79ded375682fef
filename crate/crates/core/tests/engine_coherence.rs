use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thinlie::arith::{Field, PrimeChar, PrimeField, RationalField};
use thinlie::lie_engine::{
    expand_generalized_jacobi, Generator, GradedAlgebra, JacobiMode, LeftNormedWord, MaxClassTable, ThinTable,
};
use thinlie::search::{enumerate_maxclass, enumerate_thin, AlgebraKind, SearchConfig};

const CASES_PER_FAMILY: usize = 600;

fn config(p: u64, n: usize, kind: AlgebraKind) -> SearchConfig {
    SearchConfig::new(PrimeChar::new(p).unwrap(), n, kind).unwrap()
}

fn maxclass<F: Field>(f: F, p: u64, n: usize) -> Vec<MaxClassTable<F>> {
    enumerate_maxclass(f, &config(p, n, AlgebraKind::MaxClass)).unwrap().collect()
}

fn thin<F: Field>(f: F, p: u64, n: usize) -> Vec<ThinTable<F>> {
    enumerate_thin(f, &config(p, n, AlgebraKind::Thin)).unwrap().collect()
}

fn generator(rng: &mut ChaCha8Rng) -> Generator {
    if rng.gen_bool(0.5) {
        Generator::X
    } else {
        Generator::Y
    }
}

/// Compares `[v [y z^j]]` evaluated directly with its binomial expansion on
/// random words; returns how many cases had a nonzero value.
fn expansion_cases<T: GradedAlgebra>(tables: &[T], ch: PrimeChar, rng: &mut ChaCha8Rng, cases: usize) -> usize {
    let mut nonzero = 0;
    for _ in 0..cases {
        let t = &tables[rng.gen_range(0..tables.len())];
        let n = t.maxdeg();
        let j = rng.gen_range(0..=n - 2);
        let a = rng.gen_range(1..=n - 1 - j);
        // bias the prefix towards [y x^i], the shape used throughout
        let prefix = if rng.gen_bool(0.5) {
            LeftNormedWord::power(Generator::Y, Generator::X, a - 1)
        } else {
            LeftNormedWord::new((0..a).map(|_| generator(rng)).collect()).unwrap()
        };
        let (head, tail) =
            if rng.gen_bool(0.5) { (Generator::Y, Generator::X) } else { (generator(rng), generator(rng)) };
        let v = t.eval_word(&prefix).unwrap();
        let w = t.eval_word(&LeftNormedWord::power(head, tail, j)).unwrap();
        let lhs = t.bracket(&v, &w).unwrap();
        let rhs = t.eval_sum(&expand_generalized_jacobi(&prefix, head, tail, j, ch)).unwrap();
        assert_eq!(lhs, rhs, "prefix {prefix}, head {head:?}, tail {tail:?}, j = {j}");
        if lhs.coords.iter().any(|c| !t.field().is_zero(c)) {
            nonzero += 1;
        }
    }
    nonzero
}

fn expansion_sweep<F: Field>(f: F, p: u64, seed: u64) {
    let ch = f.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = maxclass(f.clone(), p, 16);
    let t = thin(f, p, 11);
    let nonzero =
        expansion_cases(&m, ch, &mut rng, CASES_PER_FAMILY) + expansion_cases(&t, ch, &mut rng, CASES_PER_FAMILY);
    eprintln!("p = {p}: {nonzero} of {} cases nonzero", 2 * CASES_PER_FAMILY);
    assert!(nonzero >= CASES_PER_FAMILY / 4, "only {nonzero} nontrivial cases");
}

#[test]
fn generalized_jacobi_matches_evaluation() {
    for p in [2, 3, 5, 7] {
        expansion_sweep(PrimeField::new(PrimeChar::new(p).unwrap()), p, p);
    }
    expansion_sweep(RationalField::default(), 0, 0);
}

#[test]
fn bracket_constants_are_path_independent() {
    for (p, n) in [(2, 33), (3, 27), (5, 33)] {
        let f = PrimeField::new(PrimeChar::new(p).unwrap());
        let mut checked = 0;
        for t in maxclass(f, p, n) {
            for i in 2..n {
                assert_eq!(t.bracket_components(i, i).unwrap_or(0), 0);
                for j in 2..=n - i {
                    let c = t.bracket_components(i, j).unwrap();
                    assert_eq!(f.add(&c, &t.bracket_components(j, i).unwrap()), 0);
                    if let Some(alt) = t.bracket_components_alt(i, j) {
                        assert_eq!(alt, c, "c({i}, {j}) depends on the path for p = {p}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn enumerated_tables_pass_all_triples() {
    for p in [2, 3, 5] {
        let f = PrimeField::new(PrimeChar::new(p).unwrap());
        for t in maxclass(f, p, 16) {
            assert_eq!(t.jacobi_consistency(16, JacobiMode::AllTriples), Ok(()));
        }
    }
    for (p, n) in [(2, 12), (3, 12), (5, 10), (7, 10)] {
        let f = PrimeField::new(PrimeChar::new(p).unwrap());
        for t in thin(f, p, n) {
            assert_eq!(t.jacobi_consistency(n, JacobiMode::AllTriples), Ok(()));
            assert_eq!(t.covering_violation(), None);
        }
    }
    for t in thin(RationalField::default(), 0, 10) {
        assert_eq!(t.jacobi_consistency(10, JacobiMode::AllTriples), Ok(()));
    }
}

#[test]
fn scalar_and_graded_formats_agree() {
    let f = PrimeField::new(PrimeChar::new(2).unwrap());
    for t in maxclass(f, 2, 24) {
        let g = t.to_thin_format();
        assert_eq!(g.dims()[1..], vec![1; 23][..]);
        for i in 2..=22 {
            for j in 2..=24 - i {
                assert_eq!(g.basis_bracket(i, 0, j, 0), vec![t.bracket_components(i, j).unwrap()]);
            }
        }
        let profile = g.diamond_profile().unwrap();
        assert_eq!(profile.k, None);
    }
}
