//! Exact-arithmetic computations for universal Jacobians over moduli of
//! stable curves: numerical invariants of a (genus, degree) pair, dual-graph
//! combinatorics of quasistable curves, balanced multidegrees, boundary
//! divisor tables, Picard-group presentations with tautological-class
//! reduction, the residual and twisting maps, theta-bundle bookkeeping, test
//! families with their boundary-independence matrices, and the comparison
//! with the associated moduli scheme.
//!
//! Everything is computed over the integers or exact rationals; no floating
//! point enters any result. With the default `parallel` feature the heavier
//! sweeps fan out over a thread pool, with byte-identical output to the
//! sequential fallback (`--no-default-features`).

pub mod arith;
pub mod balanced;
pub mod compare;
pub mod corpus;
pub mod dualgraph;
pub mod error;
pub mod families;
pub mod picard;
pub mod verify;

pub use arith::GD;
pub use error::{Error, Result};
