//! The cyclotomic Bessel function by eigen-series and by integral formulas.

pub mod quad;
pub mod series;

use crate::dunkl::Convention;
use crate::scalars::{c_from_big_c, CycRat, Rational, Ring};
use crate::Result;

/// Parameters `c_m` whose constants (under `convention`) are `big_c`.
pub fn c_for_big_c(big_c: &[Rational], convention: &Convention) -> Result<Vec<CycRat>> {
    let ell = big_c.len() as u32;
    let c = c_from_big_c(ell, big_c)?;
    Ok(if convention.c_sign < 0 {
        c.iter().map(|v| v.neg()).collect()
    } else {
        c
    })
}

/// The series-side `C` matching the integral-side `C`.
pub fn series_c_for_integral_c(big_c: &[Rational]) -> Vec<Rational> {
    big_c.iter().map(|v| -v).collect()
}
