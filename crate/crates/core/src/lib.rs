//! Exact computations with graded Lie algebras of maximal class and thin
//! Lie algebras over `F_p` and `Q`.

pub mod arith;
pub mod congruence;
pub mod lie_engine;
pub mod linalg;
pub mod search;
