//! Exhaustive enumeration of consistent truncated tables and the
//! verification reports built on top of it.

mod maxclass;
mod thin;
mod tree;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Field, PrimeChar, PrimeField, RationalField};
use crate::lie_engine::JacobiMode;

pub use maxclass::{enumerate_maxclass, MaxClassSearch};
pub use thin::{enumerate_thin, ThinSearch};
pub use tree::{collect_ordered, run_ordered, BranchStats, DfsStream, SearchTree};
pub use verify::{
    h_bounds, verify_any_constituent, verify_first_constituent, verify_h_values, verify_second_diamond, Observation,
    TableProfile, Theorem, VerificationReport, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("truncation degree must be at least 6, got {0}")]
    DegreeTooSmall(usize),
    #[error("this operation needs {expected:?} tables, the configuration asks for {found:?}")]
    WrongKind { expected: AlgebraKind, found: AlgebraKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    #[serde(rename = "maxclass")]
    MaxClass,
    Thin,
}

/// Gauge fixing applied while branching. Each flag removes choices that are
/// equivalent to kept ones under a change of generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Normalization {
    /// Maximal class: the first centralizer different from `y` is `x`.
    pub first_deviation_x: bool,
    /// Thin: `[vxx] = 0` at the second diamond when `k > 3` and
    /// `k + 1` is invertible.
    pub vxx_zero: bool,
    /// Thin: components below the second diamond form a metabelian
    /// algebra, so only tables with `L/L^k` metabelian are produced.
    pub metabelian_prefix: bool,
    /// Thin, `k = 3`, finite fields: keep one table per orbit under all
    /// changes of generators.
    pub reduce_k3: bool,
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization { first_deviation_x: true, vxx_zero: true, metabelian_prefix: true, reduce_k3: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchConfig {
    pub characteristic: u32,
    pub maxdeg: usize,
    pub kind: AlgebraKind,
    /// Invariants are asserted only when their defining brackets lie
    /// within `maxdeg - lookahead`.
    pub lookahead: usize,
    pub normalization: Normalization,
    /// Over `Q` the search branches over rationals `n/d` with
    /// `|n|, d <= rational_height`.
    pub rational_height: u32,
    /// `AllTriples` re-checks every emitted table against all triples.
    pub jacobi_mode: JacobiMode,
}

impl SearchConfig {
    pub fn new(ch: PrimeChar, maxdeg: usize, kind: AlgebraKind) -> Result<Self, SearchError> {
        if maxdeg < 6 {
            return Err(SearchError::DegreeTooSmall(maxdeg));
        }
        Ok(SearchConfig {
            characteristic: ch.p(),
            maxdeg,
            kind,
            lookahead: 0,
            normalization: Normalization::default(),
            rational_height: 1,
            jacobi_mode: JacobiMode::Generators,
        })
    }

    pub fn with_lookahead(mut self, lookahead: usize) -> Self {
        self.lookahead = lookahead;
        self
    }

    pub fn with_jacobi_mode(mut self, mode: JacobiMode) -> Self {
        self.jacobi_mode = mode;
        self
    }

    pub fn ch(&self) -> PrimeChar {
        PrimeChar::new(self.characteristic as u64).expect("validated characteristic")
    }

    /// Last degree at which invariants may be asserted.
    pub fn horizon(&self) -> usize {
        self.maxdeg.saturating_sub(self.lookahead)
    }

    pub(crate) fn expect_kind(&self, expected: AlgebraKind) -> Result<(), SearchError> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(SearchError::WrongKind { expected, found: self.kind })
        }
    }

    /// Runs `task` over the ground field of this configuration.
    pub fn dispatch<T: FieldTask>(&self, task: T) -> T::Output {
        if self.characteristic == 0 {
            task.run(RationalField::new(self.rational_height))
        } else {
            task.run(PrimeField::new(self.ch()))
        }
    }
}

/// Work that is generic in the ground field.
pub trait FieldTask {
    type Output;
    fn run<F: Field>(self, field: F) -> Self::Output;
}
