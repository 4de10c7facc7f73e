//! Exact operator algebra for Dunkl operators of the cyclic group
//! `S_n x (Z/ell)^n`, the rank-one radial-part/twist identities, and two
//! independent evaluators of the cyclotomic Bessel function.

pub mod bessel;
pub mod dunkl;
pub mod error;
pub mod opalg;
pub mod poly;
pub mod radial;
pub mod scalars;

pub use error::{Error, Result};
