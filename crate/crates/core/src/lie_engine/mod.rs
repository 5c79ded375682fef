//! Truncated graded Lie algebras generated in degree one.
//!
//! Two table formats are provided: [`MaxClassTable`], where every component
//! above degree one is a line and the whole algebra is a sequence of pairs,
//! and [`ThinTable`], whose components have dimension one or two and whose
//! brackets are derived degree by degree from the action of the generators.

mod graded;
mod maxclass;
mod profile;
mod word;

pub use graded::{covering_ok, Formal, Graded, ThinTable};
pub use maxclass::{extend_constants, level_constants, CentralizerSequence, MaxClassTable, ProjPoint};
pub use profile::{ConstituentProfile, DiamondProfile, Extent};
pub use word::{expand_generalized_jacobi, FormalSum, Generator, LeftNormedWord};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Field;
use crate::linalg::{axpy, is_zero_vec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("words need at least one letter")]
    EmptyWord,
    #[error("unexpected letter {0:?} in word")]
    BadLetter(char),
    #[error("term of degree {found} in a sum of degree {expected}")]
    Inhomogeneous { expected: usize, found: usize },
    #[error("degree {degree} exceeds the truncation degree {maxdeg}")]
    DegreeExceeded { degree: usize, maxdeg: usize },
    #[error("[L_{degree}, L_1] does not span L_{}", degree + 1)]
    NotSurjective { degree: usize },
    #[error("covering property fails in degree {degree}")]
    CoveringViolation { degree: usize },
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("no second diamond within degree {maxdeg}")]
    NoDiamond { maxdeg: usize },
    #[error("x cannot be normalised when k = {k} is -1 modulo p")]
    NormalizationImpossible { k: usize },
    #[error("operation needs k > 3, got k = {k}")]
    SmallDiamond { k: usize },
}

/// An element of a single homogeneous component, in that component's basis.
///
/// In degree one the basis is `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousElement<E> {
    pub degree: usize,
    pub coords: Vec<E>,
}

impl<E: Clone> HomogeneousElement<E> {
    pub fn new(degree: usize, coords: Vec<E>) -> Self {
        HomogeneousElement { degree, coords }
    }
}

/// Where the Jacobi identity (or alternation) first fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JacobiFailure {
    /// `[u, w] + [w, u] != 0` or `[u, u] != 0` for basis elements of the
    /// given degrees.
    Alternation { degree: usize, left: usize, right: usize },
    /// `[[u, w], g] != [[u, g], w] + [u, [w, g]]`.
    Derivation { degree: usize, left: usize, right: usize, generator: Generator },
    /// Some triple of basis elements violates the Jacobi identity.
    Triple { degree: usize, degrees: [usize; 3] },
}

impl JacobiFailure {
    pub fn degree(&self) -> usize {
        match self {
            JacobiFailure::Alternation { degree, .. }
            | JacobiFailure::Derivation { degree, .. }
            | JacobiFailure::Triple { degree, .. } => *degree,
        }
    }
}

/// How thoroughly to check the Jacobi identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum JacobiMode {
    /// Alternation plus `ad x`, `ad y` being derivations. Sufficient because
    /// the elements whose adjoint map is a derivation form a subalgebra.
    #[default]
    Generators,
    /// Every triple of basis elements.
    AllTriples,
}

/// Read access shared by both table formats.
pub trait GradedAlgebra {
    type F: Field;

    fn field(&self) -> &Self::F;
    fn maxdeg(&self) -> usize;
    fn dim(&self, degree: usize) -> usize;

    /// `[u, g]`
    fn act(
        &self,
        u: &HomogeneousElement<<Self::F as Field>::Elem>,
        g: Generator,
    ) -> Result<HomogeneousElement<<Self::F as Field>::Elem>, LieError>;

    /// `[e, f]` for basis vectors `e` of `L_a` and `f` of `L_b`, `a + b <= maxdeg`.
    fn basis_bracket(&self, a: usize, s: usize, b: usize, t: usize) -> Vec<<Self::F as Field>::Elem>;

    fn basis(&self, degree: usize) -> Vec<HomogeneousElement<<Self::F as Field>::Elem>> {
        let f = self.field();
        let d = self.dim(degree);
        (0..d)
            .map(|s| {
                let mut c = vec![f.zero(); d];
                c[s] = f.one();
                HomogeneousElement::new(degree, c)
            })
            .collect()
    }

    fn generator(&self, g: Generator) -> HomogeneousElement<<Self::F as Field>::Elem> {
        self.basis(1).swap_remove(g.index())
    }

    fn zero_element(&self, degree: usize) -> HomogeneousElement<<Self::F as Field>::Elem> {
        HomogeneousElement::new(degree, vec![self.field().zero(); self.dim(degree)])
    }

    fn check_degree(&self, degree: usize) -> Result<(), LieError> {
        if degree > self.maxdeg() {
            Err(LieError::DegreeExceeded { degree, maxdeg: self.maxdeg() })
        } else {
            Ok(())
        }
    }

    /// `[u, w]` for homogeneous `u`, `w`.
    fn bracket(
        &self,
        u: &HomogeneousElement<<Self::F as Field>::Elem>,
        w: &HomogeneousElement<<Self::F as Field>::Elem>,
    ) -> Result<HomogeneousElement<<Self::F as Field>::Elem>, LieError> {
        let m = u.degree + w.degree;
        self.check_degree(m)?;
        let f = self.field();
        let mut out = vec![f.zero(); self.dim(m)];
        for (s, us) in u.coords.iter().enumerate() {
            if f.is_zero(us) {
                continue;
            }
            for (t, wt) in w.coords.iter().enumerate() {
                if f.is_zero(wt) {
                    continue;
                }
                let c = f.mul(us, wt);
                axpy(f, &mut out, &c, &self.basis_bracket(u.degree, s, w.degree, t));
            }
        }
        Ok(HomogeneousElement::new(m, out))
    }

    /// Value of a left-normed word.
    fn eval_word(&self, word: &LeftNormedWord) -> Result<HomogeneousElement<<Self::F as Field>::Elem>, LieError> {
        self.check_degree(word.degree())?;
        let mut letters = word.letters().iter();
        let first = letters.next().expect("words are nonempty");
        let mut acc = self.generator(*first);
        for g in letters {
            acc = self.act(&acc, *g)?;
        }
        Ok(acc)
    }

    /// Value of a formal sum of words.
    fn eval_sum(&self, sum: &FormalSum) -> Result<HomogeneousElement<<Self::F as Field>::Elem>, LieError> {
        let f = self.field();
        self.check_degree(sum.degree())?;
        let mut out = self.zero_element(sum.degree());
        for (c, w) in sum.terms() {
            let v = self.eval_word(w)?;
            axpy(f, &mut out.coords, &f.from_scalar(c), &v.coords);
        }
        Ok(out)
    }

    /// Checks alternation and the Jacobi identity on every triple of basis
    /// elements with total degree at most `n`.
    fn all_triples_check(&self, n: usize) -> Result<(), JacobiFailure> {
        let f = self.field();
        let n = n.min(self.maxdeg());
        for m in 2..=n {
            for a in 1..m {
                let b = m - a;
                if a > b {
                    break;
                }
                for s in 0..self.dim(a) {
                    for t in 0..self.dim(b) {
                        let fw = self.basis_bracket(a, s, b, t);
                        let bw = self.basis_bracket(b, t, a, s);
                        let sum: Vec<_> = fw.iter().zip(&bw).map(|(p, q)| f.add(p, q)).collect();
                        let self_pair = a == b && s == t;
                        if !is_zero_vec(f, &sum) || (self_pair && !is_zero_vec(f, &fw)) {
                            return Err(JacobiFailure::Alternation { degree: m, left: a, right: b });
                        }
                    }
                }
            }
        }
        for m in 3..=n {
            for a in 1..=m {
                for b in a..=m {
                    if a + b >= m {
                        break;
                    }
                    let c = m - a - b;
                    if c < b {
                        continue;
                    }
                    for u in self.basis(a) {
                        for v in self.basis(b) {
                            for w in self.basis(c) {
                                let uv_w = self.bracket(&self.bracket(&u, &v).unwrap(), &w).unwrap();
                                let vw_u = self.bracket(&self.bracket(&v, &w).unwrap(), &u).unwrap();
                                let wu_v = self.bracket(&self.bracket(&w, &u).unwrap(), &v).unwrap();
                                let mut sum = uv_w.coords;
                                axpy(f, &mut sum, &f.one(), &vw_u.coords);
                                axpy(f, &mut sum, &f.one(), &wu_v.coords);
                                if !is_zero_vec(f, &sum) {
                                    return Err(JacobiFailure::Triple { degree: m, degrees: [a, b, c] });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
