use super::{CycRat, Field, Rational, Ring};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Indeterminate of a [`ParamPoly`]: `k`, `c_m`, or an auxiliary formal symbol
/// (used for symbolic exponents such as `r` in `x^r`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u16);

impl Var {
    pub const K: Var = Var(0);
    const SYM_BASE: u16 = 1000;

    pub fn c(m: usize) -> Var {
        assert!(m >= 1 && (m as u16) < Self::SYM_BASE);
        Var(m as u16)
    }

    pub fn sym(i: usize) -> Var {
        Var(Self::SYM_BASE + i as u16)
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "k".to_string(),
            v if v < Self::SYM_BASE => format!("c{}", v),
            v => ["r", "m", "s", "u"]
                .get((v - Self::SYM_BASE) as usize)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("t{}", v - Self::SYM_BASE)),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Sorted `(variable, power)` pairs with positive powers.
pub type Monomial = Vec<(Var, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Polynomial in the formal parameters with coefficients in `Q(zeta_ell)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPoly {
    ell: u32,
    terms: BTreeMap<Monomial, CycRat>,
}

impl ParamPoly {
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn var(ell: u32, v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(v, 1)], CycRat::one(ell));
        ParamPoly { ell, terms }
    }

    pub fn constant(c: CycRat) -> Self {
        let ell = c.ell();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ParamPoly { ell, terms }
    }

    pub fn from_rat(ell: u32, r: Rational) -> Self {
        Self::constant(CycRat::rational(ell, r))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn from_terms(ell: u32, terms: impl IntoIterator<Item = (Monomial, CycRat)>) -> Self {
        let mut out = ParamPoly::zero(ell);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: CycRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &CycRat) -> Self {
        if c.is_zero() {
            return ParamPoly::zero(self.ell);
        }
        ParamPoly {
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.mul(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&CycRat::rational(self.ell, r.clone()))
    }

    /// Value when the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<CycRat> {
        match self.terms.len() {
            0 => Some(CycRat::zero(self.ell)),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|(_, p)| *p).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().find(|(w, _)| *w == v).map_or(0, |(_, p)| *p))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients with respect to `v`: `self = sum_d out[d] * v^d`.
    pub fn coefficients_in(&self, v: Var) -> Vec<ParamPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![ParamPoly::zero(self.ell); deg + 1];
        for (m, c) in &self.terms {
            let d = m.iter().find(|(w, _)| *w == v).map_or(0, |(_, p)| *p) as usize;
            let rest: Monomial = m.iter().copied().filter(|(w, _)| *w != v).collect();
            out[d].add_term(rest, c.clone());
        }
        out
    }

    /// Substitute polynomials for some variables.
    pub fn substitute(&self, map: &BTreeMap<Var, ParamPoly>) -> ParamPoly {
        let mut out = ParamPoly::zero(self.ell);
        for (m, c) in &self.terms {
            let mut acc = ParamPoly::constant(c.clone());
            for (v, p) in m {
                let base = match map.get(v) {
                    Some(q) => q.clone(),
                    None => ParamPoly::var(self.ell, *v),
                };
                for _ in 0..*p {
                    acc = acc.mul(&base);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Numeric evaluation; unspecified variables are an error (`None`).
    pub fn eval<F: Field>(&self, values: &BTreeMap<Var, F>, lift: impl Fn(&CycRat) -> F) -> Option<F> {
        let mut acc = F::zero(self.ell);
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (v, p) in m {
                let x = values.get(v)?;
                for _ in 0..*p {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    pub fn eval_complex(&self, values: &BTreeMap<Var, Complex64>) -> Option<Complex64> {
        self.eval(values, |c| c.to_complex())
    }

    pub fn eval_exact(&self, values: &BTreeMap<Var, CycRat>) -> Option<CycRat> {
        self.eval(values, |c| c.clone())
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Re-embed coefficients into `Q(zeta_target)`.
    pub fn embed(&self, target: u32) -> ParamPoly {
        ParamPoly {
            ell: target,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.embed(target))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one(self.ell);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Ring for ParamPoly {
    fn zero(ell: u32) -> Self {
        ParamPoly {
            ell,
            terms: BTreeMap::new(),
        }
    }
    fn from_rational(ell: u32, r: &Rational) -> Self {
        ParamPoly::from_rat(ell, r.clone())
    }
    fn root_of_unity(ell: u32, power: i64) -> Self {
        ParamPoly::constant(CycRat::zeta_pow(ell, power))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = ParamPoly::zero(self.ell);
        if self.terms.len() == 1 && self.terms.contains_key(&Vec::new()) {
            return other.scale(&self.terms[&Vec::new()]);
        }
        if other.terms.len() == 1 && other.terms.contains_key(&Vec::new()) {
            return self.scale(&other.terms[&Vec::new()]);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca.mul(cb));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        ParamPoly {
            ell: self.ell,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let needs_paren = cs.contains(' ');
            if m.is_empty() {
                write!(f, "{}", if needs_paren { format!("({})", cs) } else { cs })?;
                continue;
            }
            if cs != "1" {
                if needs_paren {
                    write!(f, "({})*", cs)?;
                } else {
                    write!(f, "{}*", cs)?;
                }
            }
            let parts: Vec<String> = m
                .iter()
                .map(|(v, p)| {
                    if *p == 1 {
                        v.name()
                    } else {
                        format!("{}^{}", v.name(), p)
                    }
                })
                .collect();
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn ring_basics() {
        let k = ParamPoly::var(3, Var::K);
        let c1 = ParamPoly::var(3, Var::c(1));
        let s = k.add(&c1);
        let sq = s.mul(&s);
        let expect = k.mul(&k).add(&k.mul(&c1).scale_rat(&rat(2, 1))).add(&c1.mul(&c1));
        assert_eq!(sq, expect);
        assert!(s.sub(&s).is_zero());
        assert_eq!(sq.degree_in(Var::K), 2);
        let coeffs = sq.coefficients_in(Var::K);
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[2], ParamPoly::one(3));
    }

    #[test]
    fn substitution_and_eval() {
        let r = ParamPoly::var(2, Var::sym(0));
        let c = ParamPoly::var(2, Var::c(1));
        let p = r.mul(&r.sub(&ParamPoly::one(2)).add(&c));
        let mut vals = BTreeMap::new();
        vals.insert(Var::sym(0), CycRat::rational(2, rat(3, 1)));
        vals.insert(Var::c(1), CycRat::rational(2, rat(1, 2)));
        assert_eq!(p.eval_exact(&vals).unwrap(), CycRat::rational(2, rat(15, 2)));
        let mut map = BTreeMap::new();
        map.insert(Var::c(1), ParamPoly::one(2));
        assert_eq!(p.substitute(&map), r.mul(&r));
    }
}
