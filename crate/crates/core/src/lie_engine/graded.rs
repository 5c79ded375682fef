//! Degree-by-degree construction of a graded Lie algebra from the action of
//! its two generators.
//!
//! At degree `i` write `V_i = L_i (x) L_1`, ordered with the `x`-images
//! first, and let `phi_i : V_i -> L_{i+1}` send `u (x) g` to `[u, g]`. Every
//! product `[u, w]` landing in degree `i + 1` equals `phi_i(T(u, w))` for a
//! formal vector `T(u, w)` obtained by writing `w` as a combination of
//! `[w', g]` and applying the derivation rule. The table is a Lie algebra up
//! to degree `i + 1` exactly when `phi_i` kills the relations expressing
//! alternation and independence of the chosen preimages.

use std::sync::Arc;

use crate::arith::Field;
use crate::linalg::{axpy, inverse, is_zero_vec, mat_vec, null_space, rank, rref, subspaces_of_dim, Mat};

use super::{Generator, GradedAlgebra, HomogeneousElement, JacobiFailure, LieError};

#[derive(Debug)]
struct Level<E> {
    dim: usize,
    /// `phi` of the previous degree; absent in degree one.
    phi: Option<Mat<E>>,
    /// Preimage under `phi` of each basis vector.
    section: Vec<Vec<E>>,
    kernel: Vec<Vec<E>>,
    /// `prods[a][s * dim(b) + t] = [e_s, f_t]` for `e_s` in `L_a`, `f_t` in
    /// `L_b`, `a + b` = this degree.
    prods: Vec<Vec<Vec<E>>>,
}

/// New `phi_i` and new basis of `L_{i+1}` after one step of a change of
/// generators.
pub type RebaseStep<E> = (Mat<E>, Vec<Vec<E>>);

/// A graded algebra generated by `x` and `y`, known up to its top degree.
///
/// Cloning is cheap: completed degrees are shared.
#[derive(Debug)]
pub struct Graded<F: Field> {
    field: F,
    levels: Vec<Arc<Level<F::Elem>>>,
}

impl<F: Field> Clone for Graded<F> {
    fn clone(&self) -> Self {
        Graded { field: self.field.clone(), levels: self.levels.clone() }
    }
}

/// Formal products and consistency relations for the next degree.
#[derive(Debug, Clone)]
pub struct Formal<E> {
    degree: usize,
    vdim: usize,
    t: Vec<Vec<Vec<E>>>,
    relations: Vec<(JacobiFailure, Vec<E>)>,
}

impl<E> Formal<E> {
    /// The degree these products land in.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension of `V_i`.
    pub fn vdim(&self) -> usize {
        self.vdim
    }

    /// Formal vector of `[e_s, f_t]` for `e_s` in `L_a`.
    pub fn product(&self, a: usize, index: usize) -> &[E] {
        &self.t[a][index]
    }

    pub fn relations(&self) -> impl Iterator<Item = &Vec<E>> {
        self.relations.iter().map(|(_, r)| r)
    }
}

impl<F: Field> Graded<F> {
    /// The free algebra truncated at degree one.
    pub fn new(field: F) -> Self {
        let one = Level { dim: 2, phi: None, section: Vec::new(), kernel: Vec::new(), prods: Vec::new() };
        Graded { field, levels: vec![Arc::new(one)] }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn top(&self) -> usize {
        self.levels.len()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.levels[degree - 1].dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }

    /// `phi_i : V_i -> L_{i+1}` for `i < top`.
    pub fn phi(&self, i: usize) -> &Mat<F::Elem> {
        self.levels[i].phi.as_ref().expect("degrees above one carry phi")
    }

    /// `[e_s, f_t]` with `e_s` in `L_a`, `f_t` in `L_b`.
    pub fn product(&self, a: usize, s: usize, b: usize, t: usize) -> &[F::Elem] {
        &self.levels[a + b - 1].prods[a][s * self.dim(b) + t]
    }

    fn formal_of(&self, t: &[Vec<Vec<F::Elem>>], a: usize, s: usize, b: usize, preimage: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let i = self.top();
        let di = self.dim(i);
        let db1 = self.dim(b - 1);
        let mut out = vec![f.zero(); 2 * di];
        for g in 0..2 {
            for r in 0..db1 {
                let coef = &preimage[g * db1 + r];
                if f.is_zero(coef) {
                    continue;
                }
                // [[u, w'], g]
                let uw = self.product(a, s, b - 1, r);
                axpy(f, &mut out[g * di..(g + 1) * di], coef, uw);
                // - [[u, g], w']
                let ug = self.product(a, s, 1, g);
                for (s2, c2) in ug.iter().enumerate() {
                    if f.is_zero(c2) {
                        continue;
                    }
                    let c = f.neg(&f.mul(coef, c2));
                    axpy(f, &mut out, &c, &t[a + 1][s2 * db1 + r]);
                }
            }
        }
        out
    }

    /// Formal products and relations for degree `top + 1`.
    pub fn formal(&self) -> Formal<F::Elem> {
        let f = &self.field;
        let i = self.top();
        let m = i + 1;
        let di = self.dim(i);
        let vdim = 2 * di;
        let mut t: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); m];
        // b = 1: [u, g] is u (x) g itself
        t[i] = (0..di)
            .flat_map(|s| {
                (0..2).map(move |g| {
                    let mut v = vec![f.zero(); vdim];
                    v[g * di + s] = f.one();
                    v
                })
            })
            .collect();
        for b in 2..m {
            let a = m - b;
            let db = self.dim(b);
            let mut row = Vec::with_capacity(self.dim(a) * db);
            for s in 0..self.dim(a) {
                for tt in 0..db {
                    let pre = &self.levels[b - 1].section[tt];
                    row.push(self.formal_of(&t, a, s, b, pre));
                }
            }
            t[a] = row;
        }

        let mut relations = Vec::new();
        for b in 2..m {
            let a = m - b;
            let db1 = self.dim(b - 1);
            for k in &self.levels[b - 1].kernel {
                let g = k.iter().position(|c| !f.is_zero(c)).map_or(0, |p| p / db1);
                let generator = if g == 0 { Generator::X } else { Generator::Y };
                for s in 0..self.dim(a) {
                    let r = self.formal_of(&t, a, s, b, k);
                    let label = JacobiFailure::Derivation { degree: m, left: a, right: b - 1, generator };
                    relations.push((label, r));
                }
            }
        }
        for a in 1..=m / 2 {
            let b = m - a;
            let (da, db) = (self.dim(a), self.dim(b));
            let label = JacobiFailure::Alternation { degree: m, left: a, right: b };
            for s in 0..da {
                for tt in 0..db {
                    if a == b && tt < s {
                        continue;
                    }
                    let mut r = t[a][s * db + tt].clone();
                    if !(a == b && s == tt) {
                        axpy(f, &mut r, &f.one(), &t[b][tt * da + s]);
                    }
                    relations.push((label.clone(), r));
                }
            }
        }
        relations.retain(|(_, r)| !is_zero_vec(f, r));
        Formal { degree: m, vdim, t, relations }
    }

    /// Products `T(u, w)` with both factors in degree at least two; killing
    /// them makes the new degree metabelian.
    pub fn metabelian_relations(&self, formal: &Formal<F::Elem>) -> Vec<Vec<F::Elem>> {
        let m = formal.degree;
        (2..m.saturating_sub(1)).flat_map(|a| formal.t[a].iter().cloned()).collect()
    }

    /// First relation that `phi` fails to kill.
    pub fn violated(&self, formal: &Formal<F::Elem>, phi: &Mat<F::Elem>) -> Option<JacobiFailure> {
        let f = &self.field;
        formal.relations.iter().find(|(_, r)| !is_zero_vec(f, &mat_vec(f, phi, r))).map(|(label, _)| label.clone())
    }

    /// All `phi` in canonical reduced echelon form with `dim` rows that kill
    /// the formal relations together with `extra`.
    pub fn candidates(&self, formal: &Formal<F::Elem>, extra: &[Vec<F::Elem>], dim: usize) -> Vec<Mat<F::Elem>> {
        let f = &self.field;
        let mut rows: Vec<Vec<F::Elem>> = formal.relations.iter().map(|(_, r)| r.clone()).collect();
        rows.extend(extra.iter().cloned());
        let ann = null_space(f, &rows, formal.vdim);
        subspaces_of_dim(f, &ann, dim, formal.vdim)
            .into_iter()
            .map(|rs| Mat::from_rows(dim, formal.vdim, rs.into_iter().flatten().collect()))
            .collect()
    }

    /// Adjoins degree `top + 1` with the given `phi`, which must have full
    /// row rank. Consistency is not checked here; see [`Graded::violated`].
    pub fn extend(&self, formal: &Formal<F::Elem>, phi: Mat<F::Elem>) -> Result<Graded<F>, LieError> {
        let f = &self.field;
        let i = self.top();
        if phi.cols() != formal.vdim || phi.rows() == 0 {
            return Err(LieError::Malformed(format!("phi in degree {i} has the wrong shape")));
        }
        let rows = phi.row_vecs();
        let (_, pivots) = rref(f, &rows, phi.cols());
        if pivots.len() != phi.rows() {
            return Err(LieError::NotSurjective { degree: i });
        }
        let d = phi.rows();
        let block = Mat::from_rows(
            d,
            d,
            (0..d).flat_map(|r| pivots.iter().map(move |&c| (r, c))).map(|(r, c)| phi.get(r, c).clone()).collect(),
        );
        let binv = inverse(f, &block).expect("pivot block is invertible");
        let section = (0..d)
            .map(|r| {
                let mut v = vec![f.zero(); phi.cols()];
                for (j, &c) in pivots.iter().enumerate() {
                    v[c] = binv.get(j, r).clone();
                }
                v
            })
            .collect();
        let kernel = null_space(f, &rows, phi.cols());
        let prods = formal.t.iter().map(|ts| ts.iter().map(|v| mat_vec(f, &phi, v)).collect()).collect();
        let mut levels = self.levels.clone();
        levels.push(Arc::new(Level { dim: d, phi: Some(phi), section, kernel, prods }));
        Ok(Graded { field: self.field.clone(), levels })
    }

    /// Builds an algebra from its sequence of `phi`, reporting the first
    /// inconsistency alongside.
    pub fn from_phis(field: F, phis: Vec<Mat<F::Elem>>) -> Result<(Graded<F>, Option<JacobiFailure>), LieError> {
        let mut g = Graded::new(field);
        let mut failure = None;
        for phi in phis {
            let formal = g.formal();
            if failure.is_none() {
                failure = g.violated(&formal, &phi);
            }
            g = g.extend(&formal, phi)?;
        }
        Ok((g, failure))
    }

    /// `[u, g]` for `u` of degree below the top.
    pub fn act_coords(&self, degree: usize, u: &[F::Elem], g: Generator) -> Vec<F::Elem> {
        let f = &self.field;
        let d = self.dim(degree);
        let mut v = vec![f.zero(); 2 * d];
        v[g.index() * d..(g.index() + 1) * d].clone_from_slice(u);
        mat_vec(f, self.phi(degree), &v)
    }

    /// One degree of a change of generators. `basis` holds the new basis
    /// of `L_i` in old coordinates; returns the new `phi_i` in canonical
    /// form and the new basis of `L_{i+1}`.
    pub fn rebase_step(
        &self,
        i: usize,
        gens: &[[F::Elem; 2]; 2],
        basis: &[Vec<F::Elem>],
    ) -> Result<RebaseStep<F::Elem>, LieError> {
        let f = &self.field;
        let d_next = self.dim(i + 1);
        let images: Vec<Vec<F::Elem>> = gens
            .iter()
            .flat_map(|g| basis.iter().map(move |b| (g, b)))
            .map(|(g, b)| {
                let mut img = vec![f.zero(); d_next];
                for (h, coef) in g.iter().enumerate() {
                    if f.is_zero(coef) {
                        continue;
                    }
                    let gen = if h == 0 { Generator::X } else { Generator::Y };
                    axpy(f, &mut img, coef, &self.act_coords(i, b, gen));
                }
                img
            })
            .collect();
        // images are the columns of the new phi in old coordinates
        let cols = images.len();
        let a_rows: Vec<Vec<F::Elem>> = (0..d_next).map(|r| images.iter().map(|c| c[r].clone()).collect()).collect();
        let (red, pivots) = rref(f, &a_rows, cols);
        if red.len() != d_next {
            return Err(LieError::NotSurjective { degree: i });
        }
        let phi = Mat::from_rows(d_next, cols, red.into_iter().flatten().collect());
        let next = pivots.iter().map(|&c| images[c].clone()).collect();
        Ok((phi, next))
    }

    /// The same algebra with generators `x' = gx[0] x + gx[1] y` and
    /// `y' = gy[0] x + gy[1] y`, put back in canonical form.
    pub fn rebase(&self, gx: [F::Elem; 2], gy: [F::Elem; 2]) -> Result<Graded<F>, LieError> {
        let f = &self.field;
        let det = f.sub(&f.mul(&gx[0], &gy[1]), &f.mul(&gx[1], &gy[0]));
        if f.is_zero(&det) {
            return Err(LieError::Malformed("change of generators is singular".into()));
        }
        let gens = [gx, gy];
        let mut basis: Vec<Vec<F::Elem>> = vec![gens[0].to_vec(), gens[1].to_vec()];
        let mut out = Graded::new(self.field.clone());
        for i in 1..self.top() {
            let (phi, next) = self.rebase_step(i, &gens, &basis)?;
            basis = next;
            let formal = out.formal();
            out = out.extend(&formal, phi)?;
        }
        Ok(out)
    }
}

/// Whether `phi_i` has the covering property: every nonzero `z` in `L_i`
/// satisfies `[z, L_1] = L_{i+1}`. Components of dimension above two are
/// rejected.
pub fn covering_ok<F: Field>(f: &F, phi: &Mat<F::Elem>, d_in: usize) -> bool {
    let d_out = phi.rows();
    let mx = phi.column_block(0, d_in);
    let my = phi.column_block(d_in, d_in);
    match (d_in, d_out) {
        (1, 1) | (1, 2) => rank(f, &phi.row_vecs(), 2) == d_out,
        (2, 1) => {
            let rows = vec![mx.row(0).to_vec(), my.row(0).to_vec()];
            rank(f, &rows, 2) == 2
        }
        (2, 2) => {
            // det[Mz | Nz] as a binary quadratic form in z
            let (p, q) = (&mx, &my);
            let m = |a: &F::Elem, b: &F::Elem| f.mul(a, b);
            let a = f.sub(&m(p.get(0, 0), q.get(1, 0)), &m(p.get(1, 0), q.get(0, 0)));
            let c = f.sub(&m(p.get(0, 1), q.get(1, 1)), &m(p.get(1, 1), q.get(0, 1)));
            let b = f.sub(
                &f.add(&m(p.get(0, 0), q.get(1, 1)), &m(p.get(0, 1), q.get(1, 0))),
                &f.add(&m(p.get(1, 0), q.get(0, 1)), &m(p.get(1, 1), q.get(0, 0))),
            );
            !f.binary_form_isotropic(&a, &b, &c)
        }
        _ => false,
    }
}

/// Truncated graded algebra with components of dimension one or two.
#[derive(Debug, Clone)]
pub struct ThinTable<F: Field> {
    graded: Graded<F>,
    failure: Option<JacobiFailure>,
}

impl<F: Field> ThinTable<F> {
    /// Builds a table from `phi_1, ..., phi_{N-1}`; `maxdeg` is `N`.
    pub fn new(field: F, phis: Vec<Mat<F::Elem>>) -> Result<Self, LieError> {
        if phis.is_empty() {
            return Err(LieError::Malformed("a table needs degree two".into()));
        }
        if phis[0].rows() != 1 {
            return Err(LieError::Malformed("L_2 must be one-dimensional".into()));
        }
        if let Some((i, _)) = phis.iter().enumerate().find(|(_, p)| p.rows() > 2) {
            return Err(LieError::Malformed(format!("L_{} has dimension above two", i + 2)));
        }
        let (graded, failure) = Graded::from_phis(field, phis)?;
        Ok(ThinTable { graded, failure })
    }

    /// Wraps an already built algebra. The caller guarantees consistency.
    pub fn from_graded(graded: Graded<F>) -> Self {
        ThinTable { graded, failure: None }
    }

    pub fn graded(&self) -> &Graded<F> {
        &self.graded
    }

    pub fn dims(&self) -> Vec<usize> {
        self.graded.dims()
    }

    /// `phi_i` for `1 <= i < N`.
    pub fn phis(&self) -> Vec<&Mat<F::Elem>> {
        (1..self.graded.top()).map(|i| self.graded.phi(i)).collect()
    }

    /// Action of `g` on `L_i` as a `dim L_{i+1} x dim L_i` matrix.
    pub fn action_matrix(&self, i: usize, g: Generator) -> Mat<F::Elem> {
        let d = self.graded.dim(i);
        self.graded.phi(i).column_block(g.index() * d, d)
    }

    /// First degree below `N` where the covering property fails.
    pub fn covering_violation(&self) -> Option<usize> {
        let f = self.graded.field();
        (1..self.graded.top()).find(|&i| !covering_ok(f, self.graded.phi(i), self.graded.dim(i)))
    }

    /// Jacobi check up to degree `n`. The generator mode replays the
    /// relations recorded while building; the triple mode recomputes every
    /// triple from the derived products.
    pub fn jacobi_consistency(&self, n: usize, mode: super::JacobiMode) -> Result<(), JacobiFailure> {
        match mode {
            super::JacobiMode::Generators => match &self.failure {
                Some(fail) if fail.degree() <= n => Err(fail.clone()),
                _ => Ok(()),
            },
            super::JacobiMode::AllTriples => self.all_triples_check(n),
        }
    }

    /// Degrees above one with two-dimensional component.
    pub fn diamond_degrees(&self) -> Vec<usize> {
        (2..=self.graded.top()).filter(|&i| self.graded.dim(i) == 2).collect()
    }

    /// Every product of basis elements of degrees `i, j >= 2` with
    /// `i + j < k` vanishes.
    pub fn metabelian_quotient_check(&self, k: usize) -> bool {
        let f = self.graded.field();
        let top = self.graded.top();
        (4..k.min(top + 1)).all(|m| {
            (2..=m - 2).all(|a| {
                let b = m - a;
                (0..self.graded.dim(a))
                    .all(|s| (0..self.graded.dim(b)).all(|t| is_zero_vec(f, self.graded.product(a, s, b, t))))
            })
        })
    }

    /// The table in generators `(x + alpha y, y)`.
    pub fn rebase_x(&self, alpha: &F::Elem) -> Result<ThinTable<F>, LieError> {
        let f = self.graded.field();
        let g = self.graded.rebase([f.one(), alpha.clone()], [f.zero(), f.one()])?;
        Ok(ThinTable { graded: g, failure: self.failure.clone() })
    }
}

impl<F: Field> PartialEq for ThinTable<F> {
    fn eq(&self, other: &Self) -> bool {
        self.graded.top() == other.graded.top() && self.phis() == other.phis()
    }
}

impl<F: Field> Eq for ThinTable<F> {}

impl<F: Field> GradedAlgebra for ThinTable<F> {
    type F = F;

    fn field(&self) -> &F {
        self.graded.field()
    }

    fn maxdeg(&self) -> usize {
        self.graded.top()
    }

    fn dim(&self, degree: usize) -> usize {
        self.graded.dim(degree)
    }

    fn act(&self, u: &HomogeneousElement<F::Elem>, g: Generator) -> Result<HomogeneousElement<F::Elem>, LieError> {
        self.check_degree(u.degree + 1)?;
        Ok(HomogeneousElement::new(u.degree + 1, self.graded.act_coords(u.degree, &u.coords, g)))
    }

    fn basis_bracket(&self, a: usize, s: usize, b: usize, t: usize) -> Vec<F::Elem> {
        self.graded.product(a, s, b, t).to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeChar, PrimeField};
    use crate::lie_engine::{JacobiMode, MaxClassTable};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(PrimeChar::new(p).unwrap())
    }

    fn yx(f: &PrimeField) -> Mat<u32> {
        Mat::from_rows(1, 4, vec![0, 1, f.neg(&1), 0])
    }

    #[test]
    fn rejects_malformed_tables() {
        let f = fp(3);
        let two = Mat::from_rows(2, 4, vec![1, 0, 0, 0, 0, 1, 0, 0]);
        assert!(matches!(ThinTable::new(f, vec![two]), Err(LieError::Malformed(_))));
        assert!(ThinTable::new(f, vec![]).is_err());
        let singular = Mat::from_rows(1, 2, vec![0, 0]);
        assert!(matches!(ThinTable::new(f, vec![yx(&f), singular]), Err(LieError::NotSurjective { degree: 2 })));
    }

    #[test]
    fn inconsistent_phi_is_reported() {
        let f = fp(5);
        // [e_2, y] != 0 together with a nonzero [e_3, y]
        let phis = vec![
            yx(&f),
            Mat::from_rows(1, 2, vec![1, 1]),
            Mat::from_rows(1, 2, vec![0, 1]),
            Mat::from_rows(1, 2, vec![0, 1]),
        ];
        let t = ThinTable::new(f, phis).unwrap();
        let generators = t.jacobi_consistency(5, JacobiMode::Generators);
        assert!(generators.is_err());
        assert!(t.jacobi_consistency(5, JacobiMode::AllTriples).is_err());
    }

    #[test]
    fn covering_cases() {
        let f = fp(3);
        assert!(covering_ok(&f, &Mat::from_rows(1, 2, vec![1, 0]), 1));
        // 2 -> 1: z = (1, 0) is killed by both generators
        assert!(!covering_ok(&f, &Mat::from_rows(1, 4, vec![0, 1, 0, 0]), 2));
        assert!(covering_ok(&f, &Mat::from_rows(1, 4, vec![1, 0, 0, 1]), 2));
        // 2 -> 2 with M_x = I, M_y = [[0, -1], [1, 0]]: det = a^2 + b^2, anisotropic mod 3
        let phi = Mat::from_rows(2, 4, vec![1, 0, 0, 2, 0, 1, 1, 0]);
        assert!(covering_ok(&f, &phi, 2));
        assert!(!covering_ok(&fp(5), &Mat::from_rows(2, 4, vec![1, 0, 0, 4, 0, 1, 1, 0]), 2));
        // M_y = 0: [z, y] = 0 for every z
        assert!(!covering_ok(&f, &Mat::from_rows(2, 4, vec![1, 0, 0, 0, 0, 1, 0, 0]), 2));
    }

    #[test]
    fn metabelian_quotient() {
        let f = fp(2);
        let meta = MaxClassTable::metabelian(f, 10).to_thin_format();
        assert!(meta.metabelian_quotient_check(7));
        // [e_3, e_2] = -b_4 e_5 != 0
        let pairs = vec![(1, 0), (1, 0), (0, 1), (1, 0), (1, 0), (1, 0)];
        let t = MaxClassTable::new(f, 8, pairs).unwrap().to_thin_format();
        assert!(!t.metabelian_quotient_check(7));
        assert!(t.metabelian_quotient_check(3));
    }

    #[test]
    fn rebase_round_trip() {
        let f = fp(5);
        let t = MaxClassTable::new(f, 9, vec![(1, 0), (1, 0), (1, 0), (1, 0), (1, 3), (1, 0), (1, 0)]).unwrap();
        let g = t.to_graded();
        let same = g.rebase([1, 0], [0, 1]).unwrap();
        assert_eq!(ThinTable::from_graded(same), ThinTable::from_graded(g.clone()));
        let there = g.rebase([1, 2], [0, 1]).unwrap();
        let back = there.rebase([1, 3], [0, 1]).unwrap();
        assert_eq!(ThinTable::from_graded(back), ThinTable::from_graded(g));
    }
}
