use std::sync::Arc;

use crate::arith::Field;
use crate::lie_engine::{extend_constants, level_constants, MaxClassTable, ProjPoint};

use super::tree::{BranchStats, DfsStream, SearchTree};
use super::{AlgebraKind, SearchConfig, SearchError};

/// Partial table: pairs for degrees `2..depth`, consistent through `depth`.
#[derive(Debug, Clone)]
pub struct MaxClassNode<E> {
    pairs: Vec<(E, E)>,
    /// Constants landing in degree `depth`.
    consts: Arc<Vec<E>>,
    deviated: bool,
}

/// Search tree of maximal-class tables with `C_{L_1}(L_2) = <y>`.
#[derive(Debug, Clone)]
pub struct MaxClassSearch<F: Field> {
    field: F,
    maxdeg: usize,
    first_deviation_x: bool,
    points: Vec<(F::Elem, F::Elem)>,
}

impl<F: Field> MaxClassSearch<F> {
    pub fn new(field: F, config: &SearchConfig) -> Result<Self, SearchError> {
        config.expect_kind(AlgebraKind::MaxClass)?;
        let points = ProjPoint::all(&field).iter().map(|p| p.to_pair(&field)).collect();
        Ok(MaxClassSearch {
            field,
            maxdeg: config.maxdeg,
            first_deviation_x: config.normalization.first_deviation_x,
            points,
        })
    }

    fn depth_of(node: &MaxClassNode<F::Elem>) -> usize {
        node.pairs.len() + 2
    }
}

impl<F: Field> SearchTree for MaxClassSearch<F> {
    type Node = MaxClassNode<F::Elem>;
    type Output = MaxClassTable<F>;

    fn root(&self) -> Self::Node {
        let f = &self.field;
        let pairs = vec![(f.one(), f.zero())];
        let consts = level_constants(f, &pairs, &vec![f.zero(); 3], 3);
        MaxClassNode { pairs, consts: Arc::new(consts), deviated: false }
    }

    fn depth(&self, node: &Self::Node) -> usize {
        Self::depth_of(node)
    }

    fn is_leaf(&self, node: &Self::Node) -> bool {
        Self::depth_of(node) >= self.maxdeg
    }

    fn children(&self, node: &Self::Node, stats: &mut BranchStats) -> Vec<Self::Node> {
        let f = &self.field;
        let m = Self::depth_of(node) + 1;
        let restricted = self.first_deviation_x && !node.deviated;
        let y_pair = (f.one(), f.zero());
        let x_pair = (f.zero(), f.one());
        let options: Vec<&(F::Elem, F::Elem)> =
            if restricted { vec![&y_pair, &x_pair] } else { self.points.iter().collect() };
        let mut out = Vec::with_capacity(options.len());
        for pair in options {
            let mut pairs = node.pairs.clone();
            pairs.push(pair.clone());
            match extend_constants(f, &pairs, &node.consts, m) {
                Ok(consts) => {
                    let deviated = node.deviated || *pair != y_pair;
                    out.push(MaxClassNode { pairs, consts: Arc::new(consts), deviated });
                }
                Err(_) => stats.pruned_jacobi += 1,
            }
        }
        out
    }

    fn finish(&self, node: Self::Node, _stats: &mut BranchStats) -> Option<Self::Output> {
        Some(MaxClassTable::new(self.field.clone(), self.maxdeg, node.pairs).expect("consistent pairs"))
    }
}

/// Lazy depth-first stream of every canonical maximal-class table
/// consistent through `config.maxdeg`.
pub fn enumerate_maxclass<F: Field>(
    field: F,
    config: &SearchConfig,
) -> Result<DfsStream<MaxClassSearch<F>>, SearchError> {
    Ok(DfsStream::new(MaxClassSearch::new(field, config)?))
}
