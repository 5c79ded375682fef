use std::cmp::Ordering;
use std::sync::Arc;

use crate::arith::Field;
use crate::lie_engine::{covering_ok, Graded, ThinTable};
use crate::linalg::Mat;

use super::tree::{BranchStats, DfsStream, SearchTree};
use super::{AlgebraKind, Normalization, SearchConfig, SearchError};

/// A change of generators fixing a node's table, with the image of the
/// basis of its top component.
#[derive(Debug, Clone)]
struct Symmetry<E> {
    gens: [[E; 2]; 2],
    basis: Vec<Vec<E>>,
}

#[derive(Debug, Clone)]
pub struct ThinNode<F: Field> {
    graded: Graded<F>,
    /// Degree of the second diamond, once reached.
    k: Option<usize>,
    /// When `k = 3`: the changes of generators fixing this node. The
    /// branch keeps only tables that are least in their orbit, so a child
    /// need only be compared with its images under these.
    stabilizer: Option<Arc<Vec<Symmetry<F::Elem>>>>,
}

/// Search tree of thin tables with `C_{L_1}(L_2) = <y>` whenever `L_3` is
/// a line.
#[derive(Debug, Clone)]
pub struct ThinSearch<F: Field> {
    field: F,
    maxdeg: usize,
    normalization: Normalization,
}

impl<F: Field> ThinSearch<F> {
    pub fn new(field: F, config: &SearchConfig) -> Result<Self, SearchError> {
        config.expect_kind(AlgebraKind::Thin)?;
        Ok(ThinSearch { field, maxdeg: config.maxdeg, normalization: config.normalization })
    }

    /// Every invertible change of generators, when the field is finite.
    fn general_linear(&self) -> Option<Vec<[[F::Elem; 2]; 2]>> {
        let f = &self.field;
        if f.characteristic().is_zero() {
            return None;
        }
        let vals = f.branch_values();
        let mut out = Vec::new();
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    for d in &vals {
                        if !f.is_zero(&f.sub(&f.mul(a, d), &f.mul(b, c))) {
                            out.push([[a.clone(), b.clone()], [c.clone(), d.clone()]]);
                        }
                    }
                }
            }
        }
        Some(out)
    }

    /// Stabilizer of a table with `k = 3` at degree three, where every
    /// change of generators fixes the table.
    fn initial_stabilizer(&self, g: &Graded<F>) -> Option<Arc<Vec<Symmetry<F::Elem>>>> {
        let group = self.general_linear()?;
        let syms = group
            .into_iter()
            .map(|gens| {
                let mut basis = vec![gens[0].to_vec(), gens[1].to_vec()];
                for i in 1..g.top() {
                    basis = g.rebase_step(i, &gens, &basis).expect("invertible change").1;
                }
                Symmetry { gens, basis }
            })
            .collect();
        Some(Arc::new(syms))
    }

    /// Filters a child against the parent stabilizer: `None` when some
    /// image of the child is smaller, else the child's stabilizer.
    fn canonical_child(&self, child: &Graded<F>, stab: &[Symmetry<F::Elem>]) -> Option<Vec<Symmetry<F::Elem>>> {
        let i = child.top() - 1;
        let own: &Mat<F::Elem> = child.phi(i);
        let mut keep = Vec::new();
        for sym in stab {
            let (phi, basis) = child.rebase_step(i, &sym.gens, &sym.basis).expect("invertible change");
            match phi.cmp(own) {
                Ordering::Less => return None,
                Ordering::Equal => keep.push(Symmetry { gens: sym.gens.clone(), basis }),
                Ordering::Greater => {}
            }
        }
        Some(keep)
    }

    fn unit(&self, len: usize, at: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); len];
        v[at] = self.field.one();
        v
    }
}

impl<F: Field> SearchTree for ThinSearch<F> {
    type Node = ThinNode<F>;
    type Output = ThinTable<F>;

    fn root(&self) -> Self::Node {
        // L_2 is spanned by [y, x]
        let g = Graded::new(self.field.clone());
        let formal = g.formal();
        let f = &self.field;
        let phi = crate::linalg::Mat::from_rows(1, 4, vec![f.zero(), f.one(), f.neg(&f.one()), f.zero()]);
        ThinNode { graded: g.extend(&formal, phi).expect("degree two"), k: None, stabilizer: None }
    }

    fn depth(&self, node: &Self::Node) -> usize {
        node.graded.top()
    }

    fn is_leaf(&self, node: &Self::Node) -> bool {
        node.graded.top() >= self.maxdeg
    }

    fn children(&self, node: &Self::Node, stats: &mut BranchStats) -> Vec<Self::Node> {
        let g = &node.graded;
        let i = g.top();
        let di = g.dim(i);
        let formal = g.formal();
        let mut out = Vec::new();
        for c in 1..=2 {
            let mut extra = Vec::new();
            if node.k.is_none() && c == 1 {
                if self.normalization.metabelian_prefix {
                    extra.extend(g.metabelian_relations(&formal));
                }
                if i == 2 {
                    // y spans the centralizer of L_2
                    extra.push(self.unit(formal.vdim(), di));
                }
            }
            if let Some(k) = node.k {
                let invertible = !self.field.is_zero(&self.field.from_i64(k as i64 + 1));
                if i == k && k > 3 && invertible && self.normalization.vxx_zero {
                    // [v x] is the first basis vector of L_k; ask [v x x] = 0
                    extra.push(self.unit(formal.vdim(), 0));
                }
            }
            for phi in g.candidates(&formal, &extra, c) {
                if !covering_ok(&self.field, &phi, di) {
                    stats.pruned_covering += 1;
                    continue;
                }
                let k = node.k.or((c == 2).then_some(i + 1));
                let graded = g.extend(&formal, phi).expect("full rank");
                let stabilizer = match (&node.stabilizer, k) {
                    (Some(stab), _) => match self.canonical_child(&graded, stab) {
                        Some(keep) => Some(Arc::new(keep)),
                        None => {
                            stats.pruned_isomorphic += 1;
                            continue;
                        }
                    },
                    (None, Some(3)) if self.normalization.reduce_k3 => self.initial_stabilizer(&graded),
                    (None, _) => None,
                };
                out.push(ThinNode { graded, k, stabilizer });
            }
        }
        out
    }

    fn finish(&self, node: Self::Node, stats: &mut BranchStats) -> Option<Self::Output> {
        if node.k.is_none() {
            stats.filtered_leaves += 1;
            return None;
        }
        Some(ThinTable::from_graded(node.graded))
    }
}

/// Lazy depth-first stream of every canonical thin table consistent
/// through `config.maxdeg` that has a second diamond.
pub fn enumerate_thin<F: Field>(field: F, config: &SearchConfig) -> Result<DfsStream<ThinSearch<F>>, SearchError> {
    Ok(DfsStream::new(ThinSearch::new(field, config)?))
}
