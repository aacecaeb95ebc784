//! Exact symbolic calculus for the Cuntz algebra `O_2` and its crossed
//! products by the generator-swapping symmetry.
//!
//! Everything is computed over the field `Q(i, sqrt(2))`, so equality of
//! operators is decided exactly: elements of `O_2 x| Z_2` are canonical
//! linear combinations of dyadic partial isometries `V±(I, J)` acting on
//! `L^2([-1, 1])`, and every identity can be cross-checked against exact
//! step-function matrices.

pub mod algebra;
pub mod dyadic;
pub mod expr;
pub mod matrix2;
pub mod numeric;
pub mod pisometry;
pub mod sample;
pub mod scalar;
pub mod tower;
pub mod zcross;

pub use algebra::AlgebraElement;
pub use dyadic::{DyadicInterval, Sign, SignedAffineMap};
pub use pisometry::BasisIsometry;
pub use scalar::Scalar;

/// Default cap on interval depth reachable through scripted evaluation.
/// Term counts can grow as `2^depth`, so runaway refinement is reported as a
/// resource error instead of exhausting memory.
pub const DEFAULT_DEPTH_CEILING: u32 = 24;
