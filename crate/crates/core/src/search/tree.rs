//! Depth-first enumeration with an order-preserving parallel runner.

use serde::{Deserialize, Serialize};

/// Counters collected while walking a search tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    /// `nodes[d]` counts nodes whose top degree is `d`.
    pub nodes: Vec<u64>,
    /// Choices discarded by the Jacobi identity.
    pub pruned_jacobi: u64,
    /// Choices discarded by the covering property.
    pub pruned_covering: u64,
    /// Children discarded as images of kept children under a change of
    /// generators.
    pub pruned_isomorphic: u64,
    /// Nodes below the truncation degree with no admissible child.
    pub dead_ends: u64,
    /// Complete tables that were not emitted (thin tables without a second
    /// diamond).
    pub filtered_leaves: u64,
}

impl BranchStats {
    pub fn visit(&mut self, depth: usize) {
        if self.nodes.len() <= depth {
            self.nodes.resize(depth + 1, 0);
        }
        self.nodes[depth] += 1;
    }

    pub fn merge(&mut self, other: &BranchStats) {
        if self.nodes.len() < other.nodes.len() {
            self.nodes.resize(other.nodes.len(), 0);
        }
        for (a, b) in self.nodes.iter_mut().zip(&other.nodes) {
            *a += b;
        }
        self.pruned_jacobi += other.pruned_jacobi;
        self.pruned_covering += other.pruned_covering;
        self.pruned_isomorphic += other.pruned_isomorphic;
        self.dead_ends += other.dead_ends;
        self.filtered_leaves += other.filtered_leaves;
    }

    pub fn total_nodes(&self) -> u64 {
        self.nodes.iter().sum()
    }
}

/// A finitely branching tree whose leaves all sit at the same depth.
pub trait SearchTree: Sync {
    type Node: Send;
    type Output: Send;

    fn root(&self) -> Self::Node;
    fn depth(&self, node: &Self::Node) -> usize;
    fn is_leaf(&self, node: &Self::Node) -> bool;
    /// Children in canonical order.
    fn children(&self, node: &Self::Node, stats: &mut BranchStats) -> Vec<Self::Node>;
    /// The emitted value of a leaf, if any.
    fn finish(&self, node: Self::Node, stats: &mut BranchStats) -> Option<Self::Output>;
}

impl<T: SearchTree> SearchTree for &T {
    type Node = T::Node;
    type Output = T::Output;

    fn root(&self) -> T::Node {
        (**self).root()
    }
    fn depth(&self, node: &T::Node) -> usize {
        (**self).depth(node)
    }
    fn is_leaf(&self, node: &T::Node) -> bool {
        (**self).is_leaf(node)
    }
    fn children(&self, node: &T::Node, stats: &mut BranchStats) -> Vec<T::Node> {
        (**self).children(node, stats)
    }
    fn finish(&self, node: T::Node, stats: &mut BranchStats) -> Option<T::Output> {
        (**self).finish(node, stats)
    }
}

/// Lazy depth-first stream of the outputs below some starting nodes.
pub struct DfsStream<T: SearchTree> {
    tree: T,
    stack: Vec<T::Node>,
    stats: BranchStats,
}

impl<T: SearchTree> DfsStream<T> {
    pub fn new(tree: T) -> Self {
        let root = tree.root();
        Self::from_nodes(tree, vec![root])
    }

    fn from_nodes(tree: T, mut nodes: Vec<T::Node>) -> Self {
        nodes.reverse();
        DfsStream { tree, stack: nodes, stats: BranchStats::default() }
    }

    pub fn stats(&self) -> &BranchStats {
        &self.stats
    }

    pub fn into_stats(self) -> BranchStats {
        self.stats
    }
}

impl<T: SearchTree> Iterator for DfsStream<T> {
    type Item = T::Output;

    fn next(&mut self) -> Option<T::Output> {
        while let Some(node) = self.stack.pop() {
            self.stats.visit(self.tree.depth(&node));
            if self.tree.is_leaf(&node) {
                if let Some(out) = self.tree.finish(node, &mut self.stats) {
                    return Some(out);
                }
                continue;
            }
            let mut kids = self.tree.children(&node, &mut self.stats);
            if kids.is_empty() {
                self.stats.dead_ends += 1;
            }
            kids.reverse();
            self.stack.extend(kids);
        }
        None
    }
}

/// Subtrees handed to workers per round; bounds buffered output.
#[cfg(feature = "parallel")]
const CHUNK: usize = 64;

/// Expands the tree breadth-first until the frontier has at least `target`
/// nodes or consists of leaves. Level order keeps the frontier in the same
/// relative order as a depth-first walk, since all leaves share one depth.
#[cfg(feature = "parallel")]
fn frontier<T: SearchTree>(tree: &T, target: usize, stats: &mut BranchStats) -> Vec<T::Node> {
    let mut level = vec![tree.root()];
    loop {
        if level.len() >= target || level.iter().all(|n| tree.is_leaf(n)) || level.is_empty() {
            return level;
        }
        let mut next = Vec::new();
        for node in level {
            if tree.is_leaf(&node) {
                next.push(node);
                continue;
            }
            stats.visit(tree.depth(&node));
            let kids = tree.children(&node, stats);
            if kids.is_empty() {
                stats.dead_ends += 1;
            }
            next.extend(kids);
        }
        level = next;
    }
}

/// Runs the whole tree, handing outputs to `sink` in depth-first order.
///
/// With `jobs > 1` (and the `parallel` feature) subtrees below a shallow
/// frontier are explored concurrently; the output sequence is identical to
/// the sequential walk.
pub fn run_ordered<T, S>(tree: &T, jobs: usize, mut sink: S) -> BranchStats
where
    T: SearchTree,
    S: FnMut(T::Output),
{
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        return run_parallel(tree, jobs, &mut sink);
    }
    let _ = jobs;
    let mut stream = DfsStream::new(tree);
    for out in stream.by_ref() {
        sink(out);
    }
    stream.into_stats()
}

#[cfg(feature = "parallel")]
fn run_parallel<T, S>(tree: &T, jobs: usize, sink: &mut S) -> BranchStats
where
    T: SearchTree,
    S: FnMut(T::Output),
{
    use rayon::prelude::*;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let mut stats = BranchStats::default();
    let mut front = frontier(tree, 8 * jobs, &mut stats);
    while !front.is_empty() {
        let rest = front.split_off(front.len().min(CHUNK));
        let batch = std::mem::replace(&mut front, rest);
        let results: Vec<(Vec<T::Output>, BranchStats)> = pool.install(|| {
            batch
                .into_par_iter()
                .map(|node| {
                    let mut stream = DfsStream::from_nodes(tree, vec![node]);
                    let outs: Vec<T::Output> = stream.by_ref().collect();
                    (outs, stream.into_stats())
                })
                .collect()
        });
        for (outs, st) in results {
            stats.merge(&st);
            outs.into_iter().for_each(&mut *sink);
        }
    }
    stats
}

/// Collects the entire output in depth-first order.
pub fn collect_ordered<T: SearchTree>(tree: &T, jobs: usize) -> (Vec<T::Output>, BranchStats) {
    let mut out = Vec::new();
    let stats = run_ordered(tree, jobs, |t| out.push(t));
    (out, stats)
}
