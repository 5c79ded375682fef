//! Small dense linear algebra over a [`Field`].

use crate::arith::Field;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Mat { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat<E>) -> Mat<E> {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Mat { rows: self.rows, cols, data }
    }

    /// Columns `start..start + n`.
    pub fn column_block(&self, start: usize, n: usize) -> Mat<E> {
        let mut data = Vec::with_capacity(self.rows * n);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..start + n]);
        }
        Mat { rows: self.rows, cols: n, data }
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    let mut m = Mat::filled(n, n, f.zero());
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn mat_vec<F: Field>(f: &F, m: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(m.cols, v.len());
    (0..m.rows).map(|r| dot(f, m.row(r), v)).collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.cols, b.rows);
    let mut out = Mat::filled(a.rows, b.cols, f.zero());
    for r in 0..a.rows {
        for c in 0..b.cols {
            let mut acc = f.zero();
            for k in 0..a.cols {
                acc = f.add(&acc, &f.mul(a.get(r, k), b.get(k, c)));
            }
            out.set(r, c, acc);
        }
    }
    out
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// `acc += c * v`
pub fn axpy<F: Field>(f: &F, acc: &mut [F::Elem], c: &F::Elem, v: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !f.is_zero(x) {
            *a = f.add(a, &f.mul(c, x));
        }
    }
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(c, x)).collect()
}

/// Reduced row echelon form of a list of row vectors of length `n`.
///
/// Returns the nonzero rows and their pivot columns; both are canonical for
/// the row space.
pub fn rref<F: Field>(f: &F, rows: &[Vec<F::Elem>], n: usize) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(sel) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, sel);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        let pivot_row: Vec<_> = m[r].iter().map(|x| f.mul(&inv, x)).collect();
        m[r] = pivot_row;
        for i in 0..m.len() {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = f.neg(&m[i][c]);
                let pr = m[r].clone();
                axpy(f, &mut m[i], &factor, &pr);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>], n: usize) -> usize {
    rref(f, rows, n).1.len()
}

/// Basis of `{ v : <row, v> = 0 for every row }`, in canonical order.
pub fn null_space<F: Field>(f: &F, rows: &[Vec<F::Elem>], n: usize) -> Vec<Vec<F::Elem>> {
    let (red, pivots) = rref(f, rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = f.neg(&row[fc]);
            }
            v
        })
        .collect()
}

/// Solves `m x = b` for square invertible `m`.
pub fn solve<F: Field>(f: &F, m: &Mat<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = m.rows;
    assert_eq!(n, m.cols);
    let aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(f, &aug, n + 1);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some(red.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse<F: Field>(f: &F, m: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let n = m.rows;
    assert_eq!(n, m.cols);
    let aug = m.hcat(&identity(f, n));
    let (red, pivots) = rref(f, &aug.row_vecs(), 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let data = red.iter().flat_map(|row| row[n..].to_vec()).collect();
    Some(Mat::from_rows(n, n, data))
}

/// Every `c`-dimensional subspace of the row space spanned by `basis`
/// (assumed independent), as canonical RREF row sets in ambient dimension
/// `n`, sorted.
pub fn subspaces_of_dim<F: Field>(f: &F, basis: &[Vec<F::Elem>], c: usize, n: usize) -> Vec<Vec<Vec<F::Elem>>> {
    let w = basis.len();
    if c > w {
        return Vec::new();
    }
    let values = f.branch_values();
    let mut out = Vec::new();
    // pivot sets of size c in 0..w; free entries to the right of each pivot
    for pivots in combinations(w, c) {
        let mut slots = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..w {
                if !pivots.contains(&col) {
                    slots.push((i, col));
                }
            }
        }
        let mut assignment = vec![0usize; slots.len()];
        loop {
            let mut coeff = vec![vec![f.zero(); w]; c];
            for (i, &pc) in pivots.iter().enumerate() {
                coeff[i][pc] = f.one();
            }
            for (slot, &vi) in slots.iter().zip(&assignment) {
                coeff[slot.0][slot.1] = values[vi].clone();
            }
            let rows: Vec<Vec<F::Elem>> = coeff
                .iter()
                .map(|cr| {
                    let mut v = vec![f.zero(); n];
                    for (k, b) in basis.iter().enumerate() {
                        axpy(f, &mut v, &cr[k], b);
                    }
                    v
                })
                .collect();
            out.push(rref(f, &rows, n).0);
            // odometer
            let mut k = 0;
            while k < assignment.len() {
                assignment[k] += 1;
                if assignment[k] < values.len() {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
            if k == assignment.len() {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
