//! Exact scalars: the cyclotomic field, polynomial parameter rings, affine
//! exponent expressions and the derived constants `C`, `sigma`, `t`, `a`, `b`.

mod constants;
mod cyclotomic;
mod exponent;
mod param;

pub use constants::{c_from_big_c, compute_a_b, compute_c, compute_sigma_t};
pub use cyclotomic::{cyc_invert, cyc_reduce, cyclotomic_polynomial, euler_phi, CycRat};
pub use exponent::ExponentExpr;
pub use param::{Monomial, ParamPoly, Var};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt::Debug;

/// Arbitrary precision rational.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: scale down
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Commutative ring that contains the `ell`-th roots of unity.
///
/// Constructors take `ell` because the exact cyclotomic types need it; the
/// floating point implementation ignores it except for `root_of_unity`.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero(ell: u32) -> Self;
    fn from_rational(ell: u32, r: &Rational) -> Self;
    fn root_of_unity(ell: u32, power: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn one(ell: u32) -> Self {
        Self::from_i64(ell, 1)
    }
    fn from_i64(ell: u32, v: i64) -> Self {
        Self::from_rational(ell, &Rational::from_integer(BigInt::from(v)))
    }
    /// Zero test used on remainders of divided differences. Exact types
    /// ignore `scale`.
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    /// Size estimate used for pivoting and residual scales.
    fn magnitude(&self) -> f64;
}

/// A ring in which nonzero elements can be inverted.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
    /// Numeric embedding with `zeta -> exp(2 pi i / ell)`.
    fn to_complex(&self) -> Complex64;
    /// Image of an exact cyclotomic number.
    fn from_cyc(c: &CycRat) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// Relative tolerance used for floating remainders of exact divisions.
pub const FLOAT_DIVISION_TOL: f64 = 1e-9;

impl Ring for Complex64 {
    fn zero(_ell: u32) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_rational(_ell: u32, r: &Rational) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn root_of_unity(ell: u32, power: i64) -> Self {
        let p = power.rem_euclid(ell as i64);
        if p == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / ell as f64)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_DIVISION_TOL * scale.max(1e-300)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn from_cyc(c: &CycRat) -> Self {
        c.to_complex()
    }
}
