//! Operator algebra: group elements, rational coefficients with hyperplane
//! denominators, and normal-ordered differential-reflection operators.

mod group;
mod operator;
mod ratfn;

pub use group::GroupElement;
pub use operator::{Operator, TermKey};
pub use ratfn::{DiffFactor, RatFn};
