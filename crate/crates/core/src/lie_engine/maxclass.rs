use std::cmp::Ordering;

use crate::arith::Field;
use crate::linalg::Mat;

use super::graded::{Graded, ThinTable};
use super::profile::{ConstituentProfile, Extent};
use super::{Generator, GradedAlgebra, HomogeneousElement, JacobiFailure, JacobiMode, LieError};

/// A point `(beta : gamma)` of the projective line, standing for the line
/// spanned by `beta x + gamma y`. Canonical: last nonzero coordinate is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint<E> {
    pub beta: E,
    pub gamma: E,
}

impl<E: Ord> PartialOrd for ProjPoint<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E: Ord> Ord for ProjPoint<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.beta, &self.gamma).cmp(&(&other.beta, &other.gamma))
    }
}

impl<E: Clone> ProjPoint<E> {
    /// Canonical representative of `(beta : gamma)`, or `None` for `(0 : 0)`.
    pub fn new<F: Field<Elem = E>>(f: &F, beta: E, gamma: E) -> Option<Self> {
        if !f.is_zero(&gamma) {
            let inv = f.inv(&gamma).expect("nonzero");
            Some(ProjPoint { beta: f.mul(&beta, &inv), gamma: f.one() })
        } else if !f.is_zero(&beta) {
            Some(ProjPoint { beta: f.one(), gamma: f.zero() })
        } else {
            None
        }
    }

    pub fn y<F: Field<Elem = E>>(f: &F) -> Self {
        ProjPoint { beta: f.zero(), gamma: f.one() }
    }

    pub fn x<F: Field<Elem = E>>(f: &F) -> Self {
        ProjPoint { beta: f.one(), gamma: f.zero() }
    }

    /// The canonical pair `(a, b)` with `[e, x] = a e'`, `[e, y] = b e'`
    /// whose kernel is this point.
    pub fn to_pair<F: Field<Elem = E>>(&self, f: &F) -> (E, E) {
        // kernel of (a, b) is (b : -a); invert and scale the first nonzero to 1
        canonical_pair(f, f.neg(&self.gamma), self.beta.clone()).expect("point is nonzero")
    }

    /// The kernel of `[e, -]` on `L_1` for the pair `(a, b)`.
    pub fn from_pair<F: Field<Elem = E>>(f: &F, a: &E, b: &E) -> Option<Self> {
        ProjPoint::new(f, b.clone(), f.neg(a))
    }

    /// Every point, in canonical order: over `Q` only those whose affine
    /// coordinate lies in the branching window.
    pub fn all<F: Field<Elem = E>>(f: &F) -> Vec<Self>
    where
        E: Ord,
    {
        let mut out: Vec<Self> = f.branch_values().into_iter().map(|beta| ProjPoint { beta, gamma: f.one() }).collect();
        out.push(ProjPoint::x(f));
        out.sort();
        out
    }
}

fn canonical_pair<F: Field>(f: &F, a: F::Elem, b: F::Elem) -> Option<(F::Elem, F::Elem)> {
    if !f.is_zero(&a) {
        let inv = f.inv(&a).expect("nonzero");
        Some((f.one(), f.mul(&b, &inv)))
    } else if !f.is_zero(&b) {
        Some((f.zero(), f.one()))
    } else {
        None
    }
}

/// Sequence of two-step centralizers `C_{L_1}(L_i)`, `i = 2, ..., N - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CentralizerSequence<E> {
    pub points: Vec<ProjPoint<E>>,
}

fn g_of<E>(pair: &(E, E), g: Generator) -> &E {
    match g {
        Generator::X => &pair.0,
        Generator::Y => &pair.1,
    }
}

/// Which generator carries `e_i` to `e_{i+1}`: `x` unless `a_i = 0`.
fn chosen<F: Field>(f: &F, pair: &(F::Elem, F::Elem)) -> Generator {
    if f.is_zero(&pair.0) {
        Generator::Y
    } else {
        Generator::X
    }
}

/// Bracket constants `c_{a, m-a}` landing in degree `m`.
///
/// `pairs[i - 2]` is the pair of degree `i` and must be known for
/// `i <= m - 1`; `prev` holds the constants landing in degree `m - 1`.
/// The result has length `m + 1` and is zero outside `2 <= a <= m - 2`.
pub fn level_constants<F: Field>(f: &F, pairs: &[(F::Elem, F::Elem)], prev: &[F::Elem], m: usize) -> Vec<F::Elem> {
    let pair = |i: usize| &pairs[i - 2];
    let mut c = vec![f.zero(); m + 1];
    if m < 4 {
        return c;
    }
    // b = 2: [e_a, [y, x]] = [[e_a, y], x] - [[e_a, x], y]
    let a = m - 2;
    let (pa, pa1) = (pair(a), pair(a + 1));
    c[a] = f.sub(&f.mul(&pa.1, &pa1.0), &f.mul(&pa.0, &pa1.1));
    for b in 3..=m - 2 {
        let a = m - b;
        let pb = pair(b - 1);
        let g = chosen(f, pb);
        let top = g_of(pair(m - 1), g);
        let lhs = f.mul(&prev[a], top);
        let rhs = f.mul(g_of(pair(a), g), &c[a + 1]);
        let inv = f.inv(g_of(pb, g)).expect("chosen generator acts nontrivially");
        c[a] = f.mul(&f.sub(&lhs, &rhs), &inv);
    }
    c
}

/// First failure among the relations landing in degree `m`: alternation
/// and the derivation rule for both generators.
fn check_level<F: Field>(
    f: &F,
    pairs: &[(F::Elem, F::Elem)],
    prev: &[F::Elem],
    cur: &[F::Elem],
    m: usize,
) -> Option<JacobiFailure> {
    if m < 4 {
        return None;
    }
    let pair = |i: usize| &pairs[i - 2];
    for a in 2..=m / 2 {
        let b = m - a;
        let bad = if a == b { !f.is_zero(&cur[a]) } else { !f.is_zero(&f.add(&cur[a], &cur[b])) };
        if bad {
            return Some(JacobiFailure::Alternation { degree: m, left: a, right: b });
        }
    }
    // [e_a, [e_b, g]] = [[e_a, e_b], g] - [[e_a, g], e_b] with a + b + 1 = m
    for a in 2..m.saturating_sub(2) {
        let b = m - 1 - a;
        if b < 2 {
            continue;
        }
        for g in [Generator::X, Generator::Y] {
            let lhs = f.mul(&cur[a], g_of(pair(b), g));
            let rhs = f.sub(&f.mul(&prev[a], g_of(pair(a + b), g)), &f.mul(g_of(pair(a), g), &cur[a + 1]));
            if lhs != rhs {
                return Some(JacobiFailure::Derivation { degree: m, left: a, right: b, generator: g });
            }
        }
    }
    None
}

/// Checks the relations landing in degree `m` after the pair of degree
/// `m - 1` has been fixed; returns the new constants or the failure.
pub fn extend_constants<F: Field>(
    f: &F,
    pairs: &[(F::Elem, F::Elem)],
    prev: &[F::Elem],
    m: usize,
) -> Result<Vec<F::Elem>, JacobiFailure> {
    let cur = level_constants(f, pairs, prev, m);
    match check_level(f, pairs, prev, &cur, m) {
        Some(fail) => Err(fail),
        None => Ok(cur),
    }
}

/// Truncated graded Lie algebra of maximal class, given by the pairs
/// `(a_i, b_i)` with `[e_i, x] = a_i e_{i+1}` and `[e_i, y] = b_i e_{i+1}`
/// for `2 <= i < N`, where `e_2 = [y, x]`.
#[derive(Debug, Clone)]
pub struct MaxClassTable<F: Field> {
    field: F,
    maxdeg: usize,
    pairs: Vec<(F::Elem, F::Elem)>,
    consts: Vec<Vec<F::Elem>>,
}

impl<F: Field> PartialEq for MaxClassTable<F> {
    fn eq(&self, other: &Self) -> bool {
        self.maxdeg == other.maxdeg && self.pairs == other.pairs
    }
}

impl<F: Field> Eq for MaxClassTable<F> {}

impl<F: Field> MaxClassTable<F> {
    /// Pairs are scaled so that the first nonzero entry is one.
    pub fn new(field: F, maxdeg: usize, pairs: Vec<(F::Elem, F::Elem)>) -> Result<Self, LieError> {
        if maxdeg < 2 || pairs.len() != maxdeg - 2 {
            return Err(LieError::Malformed(format!(
                "expected {} pairs for truncation degree {maxdeg}",
                maxdeg.saturating_sub(2)
            )));
        }
        let mut canon = Vec::with_capacity(pairs.len());
        for (i, (a, b)) in pairs.into_iter().enumerate() {
            canon.push(canonical_pair(&field, a, b).ok_or(LieError::NotSurjective { degree: i + 2 })?);
        }
        let mut consts: Vec<Vec<F::Elem>> = Vec::with_capacity(maxdeg + 1);
        for m in 0..=maxdeg {
            let prev = if m == 0 { Vec::new() } else { consts[m - 1].clone() };
            let prev = if prev.len() < m { vec![field.zero(); m] } else { prev };
            consts.push(level_constants(&field, &canon, &prev, m));
        }
        Ok(MaxClassTable { field, maxdeg, pairs: canon, consts })
    }

    /// The table whose two-step centralizers are the given points.
    pub fn from_centralizers(field: F, maxdeg: usize, seq: &CentralizerSequence<F::Elem>) -> Result<Self, LieError> {
        let pairs = seq.points.iter().map(|p| p.to_pair(&field)).collect();
        Self::new(field, maxdeg, pairs)
    }

    /// The metabelian table: `y` centralizes every `L_i`, `i >= 2`.
    pub fn metabelian(field: F, maxdeg: usize) -> Self {
        let pairs = vec![(field.one(), field.zero()); maxdeg.saturating_sub(2)];
        Self::new(field, maxdeg, pairs).expect("well-formed")
    }

    pub fn pairs(&self) -> &[(F::Elem, F::Elem)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> &(F::Elem, F::Elem) {
        &self.pairs[i - 2]
    }

    pub fn centralizer_sequence(&self) -> CentralizerSequence<F::Elem> {
        let f = &self.field;
        CentralizerSequence {
            points: self.pairs.iter().map(|(a, b)| ProjPoint::from_pair(f, a, b).expect("nonzero")).collect(),
        }
    }

    /// `c_{ij}` with `[e_i, e_j] = c_{ij} e_{i+j}`.
    pub fn bracket_components(&self, i: usize, j: usize) -> Result<F::Elem, LieError> {
        if i < 2 || j < 2 {
            return Err(LieError::Malformed("bracket constants need degrees at least two".into()));
        }
        self.check_degree(i + j)?;
        Ok(self.consts[i + j][i].clone())
    }

    /// Recomputes `c_{ij}` writing `e_j` through the other generator when
    /// both act nontrivially on `e_{j-1}`; `None` when there is no choice.
    pub fn bracket_components_alt(&self, i: usize, j: usize) -> Option<F::Elem> {
        let f = &self.field;
        if j < 3 {
            return None;
        }
        let pb = self.pair(j - 1);
        if f.is_zero(&pb.0) || f.is_zero(&pb.1) {
            return None;
        }
        let g = chosen(f, pb).other();
        let lhs = f.mul(&self.consts[i + j - 1][i], g_of(self.pair(i + j - 1), g));
        let rhs = f.mul(g_of(self.pair(i), g), &self.consts[i + j][i + 1]);
        f.div(&f.sub(&lhs, &rhs), g_of(pb, g))
    }

    /// Jacobi check on triples of total degree at most `n`.
    pub fn jacobi_consistency(&self, n: usize, mode: JacobiMode) -> Result<(), JacobiFailure> {
        let n = n.min(self.maxdeg);
        match mode {
            JacobiMode::Generators => {
                for m in 4..=n {
                    if let Some(fail) = check_level(&self.field, &self.pairs, &self.consts[m - 1], &self.consts[m], m) {
                        return Err(fail);
                    }
                }
                Ok(())
            }
            JacobiMode::AllTriples => self.all_triples_check(n),
        }
    }

    /// `(ad y)^2 = 0` on every component up to degree `n - 2`.
    pub fn sandwich_check(&self, n: usize) -> bool {
        let f = &self.field;
        let n = n.min(self.maxdeg);
        if n < 3 {
            return true;
        }
        // [[x, y], y] = -b_2 e_3
        if !f.is_zero(&self.pair(2).1) {
            return false;
        }
        (2..=n - 2).all(|i| f.is_zero(&self.pair(i).1) || f.is_zero(&self.pair(i + 1).1))
    }

    /// Degrees `D_r` with `[e_{D_r}, y] != 0`.
    pub fn y_onsets(&self) -> Vec<usize> {
        (2..self.maxdeg).filter(|&i| !self.field.is_zero(&self.pair(i).1)).collect()
    }

    pub fn constituent_profile(&self) -> ConstituentProfile {
        let onsets = self.y_onsets();
        let determined_up_to = self.maxdeg - 1;
        let ell = match onsets.first() {
            Some(&d) => Extent::Finite(d),
            None => Extent::Unbounded { checked_to: determined_up_to },
        };
        let subsequent = onsets.windows(2).map(|w| w[1] - w[0]).collect();
        ConstituentProfile { ell, subsequent, onsets, determined_up_to }
    }

    /// The same table in the general graded format.
    pub fn to_graded(&self) -> Graded<F> {
        let f = &self.field;
        let mut phis = vec![Mat::from_rows(1, 4, vec![f.zero(), f.one(), f.neg(&f.one()), f.zero()])];
        for (a, b) in &self.pairs {
            phis.push(Mat::from_rows(1, 2, vec![a.clone(), b.clone()]));
        }
        Graded::from_phis(f.clone(), phis).expect("well-formed").0
    }

    pub fn to_thin_format(&self) -> ThinTable<F> {
        ThinTable::from_graded(self.to_graded())
    }
}

impl<F: Field> GradedAlgebra for MaxClassTable<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.field
    }

    fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    fn dim(&self, degree: usize) -> usize {
        if degree == 1 {
            2
        } else {
            1
        }
    }

    fn act(&self, u: &HomogeneousElement<F::Elem>, g: Generator) -> Result<HomogeneousElement<F::Elem>, LieError> {
        let f = &self.field;
        self.check_degree(u.degree + 1)?;
        let c = if u.degree == 1 {
            // [u, x] = u_y e_2, [u, y] = -u_x e_2
            match g {
                Generator::X => u.coords[1].clone(),
                Generator::Y => f.neg(&u.coords[0]),
            }
        } else {
            f.mul(&u.coords[0], g_of(self.pair(u.degree), g))
        };
        Ok(HomogeneousElement::new(u.degree + 1, vec![c]))
    }

    fn basis_bracket(&self, a: usize, s: usize, b: usize, t: usize) -> Vec<F::Elem> {
        let f = &self.field;
        let gen = |i: usize| if i == 0 { Generator::X } else { Generator::Y };
        match (a, b) {
            (1, 1) => {
                let v = match (s, t) {
                    (1, 0) => f.one(),
                    (0, 1) => f.neg(&f.one()),
                    _ => f.zero(),
                };
                vec![v]
            }
            (_, 1) => vec![g_of(self.pair(a), gen(t)).clone()],
            (1, _) => vec![f.neg(g_of(self.pair(b), gen(s)))],
            _ => vec![self.consts[a + b][a].clone()],
        }
    }
}
