//! Sparse Laurent polynomials in `x_1, ..., x_n` over a [`Ring`].

use crate::opalg::GroupElement;
use crate::scalars::{Field, Ring};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

pub type Exponents = Vec<i32>;

#[derive(Clone, PartialEq)]
pub struct LaurentPoly<R: Ring> {
    n: usize,
    ell: u32,
    terms: BTreeMap<Exponents, R>,
}

impl<R: Ring> LaurentPoly<R> {
    pub fn zero(n: usize, ell: u32) -> Self {
        LaurentPoly {
            n,
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, ell: u32, c: R) -> Self {
        Self::monomial(vec![0; n], c, ell)
    }

    pub fn one(n: usize, ell: u32) -> Self {
        Self::constant(n, ell, R::one(ell))
    }

    pub fn monomial(exps: Exponents, c: R, ell: u32) -> Self {
        let mut p = Self::zero(exps.len(), ell);
        p.add_term(exps, c);
        p
    }

    /// The coordinate `x_i` (0-based).
    pub fn var(n: usize, ell: u32, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, R::one(ell), ell)
    }

    /// `x_a - zeta^u x_b`.
    pub fn linear_form(n: usize, ell: u32, a: usize, b: usize, u: i64) -> Self {
        let mut p = Self::var(n, ell, a);
        let mut e = vec![0; n];
        e[b] = 1;
        p.add_term(e, R::root_of_unity(ell, u).neg());
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> Option<&R> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Exponents, c: R) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &R) -> Self {
        if s.is_zero() {
            return Self::zero(self.n, self.ell);
        }
        let mut out = Self::zero(self.n, self.ell);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(s));
        }
        out
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn map_ring<S: Ring>(&self, ell: u32, f: impl Fn(&R) -> S) -> LaurentPoly<S> {
        let mut out = LaurentPoly::zero(self.n, ell);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            n: self.n,
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n, self.ell);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c.mul(&R::from_i64(self.ell, e[i] as i64)));
            }
        }
        out
    }

    pub fn derivative_multi(&self, beta: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, b) in beta.iter().enumerate() {
            for _ in 0..*b {
                out = out.derivative(i);
            }
        }
        out
    }

    /// Image under the ring automorphism of a group element.
    pub fn act(&self, g: &GroupElement) -> Self {
        if g.is_identity() {
            return self.clone();
        }
        let mut out = Self::zero(self.n, self.ell);
        for (e, c) in &self.terms {
            let (zp, f) = g.act_on_exponents(e);
            let c = if zp == 0 {
                c.clone()
            } else {
                c.mul(&R::root_of_unity(self.ell, zp))
            };
            out.add_term(f, c);
        }
        out
    }

    /// Exact quotient by `x_a - zeta^u x_b`, or `None` when the remainder is
    /// not (numerically) zero.
    pub fn divide_linear(&self, a: usize, b: usize, u: i64) -> Option<Self> {
        assert_ne!(a, b);
        let root = R::root_of_unity(self.ell, u);
        // group by (other exponents, e_a + e_b); divide in t = x_a / x_b
        let mut groups: BTreeMap<(Exponents, i32), BTreeMap<i32, R>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[a] = 0;
            rest[b] = 0;
            groups.entry((rest, e[a] + e[b])).or_default().insert(e[a], c.clone());
        }
        let mut out = Self::zero(self.n, self.ell);
        for ((rest, d), coeffs) in groups {
            let smin = *coeffs.keys().next().unwrap();
            let smax = *coeffs.keys().next_back().unwrap();
            let scale = coeffs.values().map(|c| c.magnitude()).fold(0.0, f64::max);
            let zero = R::zero(self.ell);
            // synthetic division: q_{s-1} = c_s + root * q_s
            let mut q = R::zero(self.ell);
            let mut quotient: Vec<(i32, R)> = Vec::new();
            for s in (smin..=smax).rev() {
                let cs = coeffs.get(&s).unwrap_or(&zero);
                let val = cs.add(&root.mul(&q));
                if s == smin {
                    if !val.negligible(scale) {
                        return None;
                    }
                } else {
                    quotient.push((s - 1, val.clone()));
                    q = val;
                }
            }
            for (s, c) in quotient {
                let mut e = rest.clone();
                e[a] = s;
                e[b] = d - 1 - s;
                out.add_term(e, c);
            }
        }
        Some(out)
    }

    /// `x_i -> x_i^p` for every coordinate.
    pub fn substitute_powers(&self, p: i32) -> Self {
        LaurentPoly {
            n: self.n,
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|v| v * p).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn total_degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort();
        d.dedup();
        d
    }
}

/// Partitions of `total` into at most `max_parts` positive parts, in
/// decreasing lexicographic order.
pub fn partitions(total: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, cap: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for p in (1..=cap.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Monomial symmetric polynomial `m_lambda(x_1^p, ..., x_n^p)`.
pub fn monomial_symmetric<R: Ring>(n: usize, ell: u32, lambda: &[u32], p: i32) -> LaurentPoly<R> {
    let mut e: Vec<i32> = lambda.iter().map(|v| *v as i32 * p).collect();
    e.resize(n, 0);
    e.sort();
    let mut out = LaurentPoly::zero(n, ell);
    loop {
        out.add_term(e.clone(), R::one(ell));
        if !next_permutation(&mut e) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [i32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Spanning set of `Gamma_n`-invariant polynomials of degree `<= max_degree`.
pub fn invariant_basis<R: Ring>(n: usize, ell: u32, max_degree: u32) -> Vec<LaurentPoly<R>> {
    let mut out = Vec::new();
    for d in 0..=max_degree / ell {
        for lambda in partitions(d, n) {
            out.push(monomial_symmetric(n, ell, &lambda, ell as i32));
        }
    }
    out
}

impl<F: Field> LaurentPoly<F> {
    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (xi, ei) in x.iter().zip(e) {
                t *= xi.powi(*ei);
            }
            acc += t;
        }
        acc
    }
}

impl<R: Ring + fmt::Display> fmt::Display for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| **p != 0)
                    .map(|(i, p)| {
                        if *p == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, p)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("({})", c)
                } else {
                    format!("({})*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring> fmt::Debug for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
