use super::{CycRat, ParamPoly, Rational, Ring, Var};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Affine-linear expression `const + sum_v coeff_v * v` used as a symbolic
/// monomial exponent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentExpr {
    ell: u32,
    constant: Rational,
    linear: BTreeMap<Var, CycRat>,
}

impl ExponentExpr {
    pub fn constant(ell: u32, c: Rational) -> Self {
        ExponentExpr {
            ell,
            constant: c,
            linear: BTreeMap::new(),
        }
    }

    pub fn int(ell: u32, c: i64) -> Self {
        Self::constant(ell, Rational::from_integer(c.into()))
    }

    pub fn var(ell: u32, v: Var) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(v, CycRat::one(ell));
        ExponentExpr {
            ell,
            constant: Rational::zero(),
            linear,
        }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn const_part(&self) -> &Rational {
        &self.constant
    }

    pub fn linear_part(&self) -> &BTreeMap<Var, CycRat> {
        &self.linear
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut linear = self.linear.clone();
        for (v, c) in &other.linear {
            let s = linear.get(v).map_or_else(|| c.clone(), |a| a.add(c));
            if s.is_zero() {
                linear.remove(v);
            } else {
                linear.insert(*v, s);
            }
        }
        ExponentExpr {
            ell: self.ell,
            constant: &self.constant + &other.constant,
            linear,
        }
    }

    pub fn neg(&self) -> Self {
        ExponentExpr {
            ell: self.ell,
            constant: -&self.constant,
            linear: self.linear.iter().map(|(v, c)| (*v, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::constant(self.ell, Rational::zero());
        }
        ExponentExpr {
            ell: self.ell,
            constant: &self.constant * r,
            linear: self.linear.iter().map(|(v, c)| (*v, c.scale(r))).collect(),
        }
    }

    pub fn add_int(&self, d: i64) -> Self {
        self.add(&Self::int(self.ell, d))
    }

    pub fn to_param_poly(&self) -> ParamPoly {
        let mut out = ParamPoly::from_rat(self.ell, self.constant.clone());
        for (v, c) in &self.linear {
            out = out.add(&ParamPoly::var(self.ell, *v).scale(c));
        }
        out
    }

    /// Convert an affine polynomial with rational constant term.
    pub fn try_from_param_poly(p: &ParamPoly) -> Result<Self> {
        let ell = p.ell();
        let mut out = Self::constant(ell, Rational::zero());
        for (m, c) in p.terms() {
            match m.as_slice() {
                [] => match c.as_rational() {
                    Some(r) => out.constant = r.clone(),
                    None => return Err(Error::NonlinearExponent(format!("irrational constant part {}", c))),
                },
                [(v, 1)] => {
                    out.linear.insert(*v, c.clone());
                }
                _ => return Err(Error::NonlinearExponent(p.to_string())),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_param_poly())
    }
}

impl fmt::Debug for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
