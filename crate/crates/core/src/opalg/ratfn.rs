use super::GroupElement;
use crate::poly::LaurentPoly;
use crate::scalars::{ParamPoly, Ring};
use std::collections::BTreeMap;
use std::fmt;

/// Hyperplane factor `x_i - zeta^m x_j` with `i < j` (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DiffFactor {
    pub i: u8,
    pub j: u8,
    pub m: u32,
}

impl DiffFactor {
    /// Normalize `x_a - zeta^u x_b` as `unit * factor`, with the unit
    /// returned as `(negate, zeta power)`.
    pub fn normalize(ell: u32, a: usize, b: usize, u: i64) -> (bool, i64, DiffFactor) {
        assert_ne!(a, b);
        let l = ell as i64;
        if a < b {
            (
                false,
                0,
                DiffFactor {
                    i: a as u8,
                    j: b as u8,
                    m: u.rem_euclid(l) as u32,
                },
            )
        } else {
            // x_a - z^u x_b = -z^u (x_b - z^{-u} x_a)
            (
                true,
                u.rem_euclid(l),
                DiffFactor {
                    i: b as u8,
                    j: a as u8,
                    m: (-u).rem_euclid(l) as u32,
                },
            )
        }
    }

    pub fn as_poly(&self, n: usize, ell: u32) -> LaurentPoly<ParamPoly> {
        LaurentPoly::linear_form(n, ell, self.i as usize, self.j as usize, self.m as i64)
    }

    /// `d/dx_k` of the factor (a constant).
    fn derivative(&self, ell: u32, k: usize) -> Option<ParamPoly> {
        if k == self.i as usize {
            Some(ParamPoly::one(ell))
        } else if k == self.j as usize {
            Some(ParamPoly::root_of_unity(ell, self.m as i64).neg())
        } else {
            None
        }
    }

    /// Image under `g`, as `(negate, zeta power, factor)` with
    /// `g(F) = (-1)^negate zeta^power F'`.
    fn act(&self, g: &GroupElement) -> (bool, i64, DiffFactor) {
        let (i, j) = (self.i as usize, self.j as usize);
        let w = g.twist();
        let p = g.perm();
        let u = self.m as i64 + w[j] as i64 - w[i] as i64;
        let (neg, zp, f) = Self::normalize(g.ell(), p[i] as usize, p[j] as usize, u);
        (neg, zp + w[i] as i64, f)
    }
}

impl fmt::Display for DiffFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "(x{} - x{})", self.i + 1, self.j + 1)
        } else {
            write!(f, "(x{} - z^{}*x{})", self.i + 1, self.m, self.j + 1)
        }
    }
}

/// Rational function with denominator in the hyperplane-arrangement monoid,
/// kept in reduced form (numerator not divisible by any denominator factor),
/// so structural equality is equality of functions.
#[derive(Clone, PartialEq)]
pub struct RatFn {
    num: LaurentPoly<ParamPoly>,
    den: BTreeMap<DiffFactor, u32>,
}

impl RatFn {
    pub fn zero(n: usize, ell: u32) -> Self {
        RatFn {
            num: LaurentPoly::zero(n, ell),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(num: LaurentPoly<ParamPoly>) -> Self {
        RatFn {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, ell: u32, c: ParamPoly) -> Self {
        Self::from_poly(LaurentPoly::constant(n, ell, c))
    }

    /// `c / (x_a - zeta^u x_b)`.
    pub fn over_linear(n: usize, ell: u32, c: ParamPoly, a: usize, b: usize, u: i64) -> Self {
        let (neg, zp, f) = DiffFactor::normalize(ell, a, b, u);
        let mut unit = ParamPoly::root_of_unity(ell, -zp);
        if neg {
            unit = unit.neg();
        }
        let mut den = BTreeMap::new();
        den.insert(f, 1);
        RatFn {
            num: LaurentPoly::constant(n, ell, c.mul(&unit)),
            den,
        }
        .reduced()
    }

    /// Same denominator, new numerator (reduced).
    pub fn with_numerator(&self, num: LaurentPoly<ParamPoly>) -> Self {
        RatFn {
            num,
            den: self.den.clone(),
        }
        .reduced()
    }

    pub fn numerator(&self) -> &LaurentPoly<ParamPoly> {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<DiffFactor, u32> {
        &self.den
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn ell(&self) -> u32 {
        self.num.ell()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let factors: Vec<DiffFactor> = self.den.keys().copied().collect();
        for f in factors {
            let mut e = self.den[&f];
            while e > 0 {
                match self.num.divide_linear(f.i as usize, f.j as usize, f.m as i64) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e == 0 {
                self.den.remove(&f);
            } else {
                self.den.insert(f, e);
            }
        }
        self
    }

    fn factor_power(&self, f: &DiffFactor, e: u32) -> LaurentPoly<ParamPoly> {
        f.as_poly(self.n(), self.ell()).pow(e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return RatFn {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .reduced();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            let cur = den.entry(*f).or_insert(0);
            *cur = (*cur).max(*e);
        }
        let lift = |r: &RatFn| {
            let mut num = r.num.clone();
            for (f, e) in &den {
                let have = r.den.get(f).copied().unwrap_or(0);
                if *e > have {
                    num = num.mul(&r.factor_power(f, e - have));
                }
            }
            num
        };
        let num = lift(self).add(&lift(other));
        RatFn { num, den }.reduced()
    }

    pub fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.n(), self.ell());
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            *den.entry(*f).or_insert(0) += e;
        }
        let out = RatFn {
            num: self.num.mul(&other.num),
            den,
        };
        if self.den.is_empty() && other.den.is_empty() {
            out
        } else {
            out.reduced()
        }
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        RatFn {
            num: self.num.scale(c),
            den: if c.is_zero() { BTreeMap::new() } else { self.den.clone() },
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly<ParamPoly>) -> Self {
        self.mul(&RatFn::from_poly(p.clone()))
    }

    /// Partial derivative in `x_k`.
    pub fn derivative(&self, k: usize) -> Self {
        if self.den.is_empty() {
            return RatFn::from_poly(self.num.derivative(k));
        }
        let (n, ell) = (self.n(), self.ell());
        // d(N / prod F^e) = [N' P - N sum_F e_F F' P/F] / (prod F^e * P), P = prod F
        let factors: Vec<(DiffFactor, u32)> = self.den.iter().map(|(f, e)| (*f, *e)).collect();
        let polys: Vec<LaurentPoly<ParamPoly>> = factors.iter().map(|(f, _)| f.as_poly(n, ell)).collect();
        let full = polys.iter().fold(LaurentPoly::one(n, ell), |acc, p| acc.mul(p));
        let mut num = self.num.derivative(k).mul(&full);
        for (idx, (f, e)) in factors.iter().enumerate() {
            if let Some(df) = f.derivative(ell, k) {
                let others = polys
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != idx)
                    .fold(LaurentPoly::one(n, ell), |acc, (_, p)| acc.mul(p));
                let coef = df.mul(&ParamPoly::from_i64(ell, *e as i64));
                num = num.sub(&self.num.mul(&others).scale(&coef));
            }
        }
        let den = self.den.iter().map(|(f, e)| (*f, e + 1)).collect();
        RatFn { num, den }.reduced()
    }

    pub fn derivative_multi(&self, gamma: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, g) in gamma.iter().enumerate() {
            for _ in 0..*g {
                out = out.derivative(i);
            }
        }
        out
    }

    /// Image under the automorphism of `g`.
    pub fn act(&self, g: &GroupElement) -> Self {
        if g.is_identity() {
            return self.clone();
        }
        let ell = self.ell();
        let mut num = self.num.act(g);
        let mut den = BTreeMap::new();
        let mut zp = 0i64;
        let mut neg = false;
        for (f, e) in &self.den {
            let (fneg, fzp, f2) = f.act(g);
            // 1/F^e -> unit^{-e} / F'^e
            zp -= fzp * *e as i64;
            if fneg && e % 2 == 1 {
                neg = !neg;
            }
            den.insert(f2, *e);
        }
        if zp.rem_euclid(ell as i64) != 0 || neg {
            let mut unit = ParamPoly::root_of_unity(ell, zp);
            if neg {
                unit = unit.neg();
            }
            num = num.scale(&unit);
        }
        RatFn { num, den }
    }

    /// Substitute parameter values into the coefficients.
    pub fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        RatFn {
            num: self.num.map(f),
            den: self.den.clone(),
        }
        .reduced()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.num)?;
        for (fac, e) in &self.den {
            if *e == 1 {
                write!(f, " / {}", fac)?;
            } else {
                write!(f, " / {}^{}", fac, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
