use super::{GroupElement, RatFn};
use crate::error::{Error, Result};
use crate::poly::{invariant_basis, LaurentPoly};
use crate::scalars::{ExponentExpr, ParamPoly, Ring};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Term key: derivative multi-exponent and the group element on the right.
pub type TermKey = (Vec<u32>, GroupElement);

/// Element of the smash product of `Gamma_n` with differential operators on
/// the regular locus, stored as `sum f * d^beta * g`.
#[derive(Clone, PartialEq)]
pub struct Operator {
    n: usize,
    ell: u32,
    terms: BTreeMap<TermKey, RatFn>,
}

fn binomial(n: u32, k: u32) -> u64 {
    let mut r = 1u64;
    for i in 0..k as u64 {
        r = r * (n as u64 - i) / (i + 1);
    }
    r
}

/// All `gamma <= beta` componentwise, with the product of binomials.
fn sub_multi_indices(beta: &[u32]) -> Vec<(Vec<u32>, u64)> {
    let mut out = vec![(Vec::new(), 1u64)];
    for b in beta {
        let mut next = Vec::new();
        for (g, c) in &out {
            for j in 0..=*b {
                let mut g2 = g.clone();
                g2.push(j);
                next.push((g2, c * binomial(*b, j)));
            }
        }
        out = next;
    }
    out
}

/// `prod_{j<b} (e - j)` as a parameter polynomial.
fn falling(e: &ParamPoly, b: u32) -> ParamPoly {
    let ell = e.ell();
    let mut acc = ParamPoly::one(ell);
    for j in 0..b {
        acc = acc.mul(&e.sub(&ParamPoly::from_i64(ell, j as i64)));
    }
    acc
}

impl Operator {
    pub fn zero(n: usize, ell: u32) -> Self {
        Operator {
            n,
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(coef: RatFn, beta: Vec<u32>, g: GroupElement) -> Self {
        let mut op = Self::zero(coef.n(), coef.ell());
        op.add_term(beta, g, coef);
        op
    }

    pub fn identity(n: usize, ell: u32) -> Self {
        Self::scalar(n, ell, ParamPoly::one(ell))
    }

    pub fn scalar(n: usize, ell: u32, c: ParamPoly) -> Self {
        Self::multiplication(RatFn::constant(n, ell, c))
    }

    pub fn multiplication(f: RatFn) -> Self {
        let (n, ell) = (f.n(), f.ell());
        Self::from_term(f, vec![0; n], GroupElement::identity(n, ell))
    }

    pub fn multiplication_poly(p: LaurentPoly<ParamPoly>) -> Self {
        Self::multiplication(RatFn::from_poly(p))
    }

    /// `d/dx_i` (0-based).
    pub fn partial(n: usize, ell: u32, i: usize) -> Self {
        let mut beta = vec![0; n];
        beta[i] = 1;
        Self::from_term(
            RatFn::constant(n, ell, ParamPoly::one(ell)),
            beta,
            GroupElement::identity(n, ell),
        )
    }

    pub fn group(g: GroupElement) -> Self {
        let (n, ell) = (g.n(), g.ell());
        Self::from_term(RatFn::constant(n, ell, ParamPoly::one(ell)), vec![0; n], g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &RatFn)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every group element is the identity.
    pub fn is_differential(&self) -> bool {
        self.terms.keys().all(|(_, g)| g.is_identity())
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(b, _)| b.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, beta: Vec<u32>, g: GroupElement, coef: RatFn) {
        if coef.is_zero() {
            return;
        }
        let key = (beta, g);
        match self.terms.remove(&key) {
            Some(old) => {
                let s = old.add(&coef);
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, coef);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((b, g), c) in &other.terms {
            out.add_term(b.clone(), g.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Operator {
            n: self.n,
            ell: self.ell,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.ell);
        }
        Operator {
            n: self.n,
            ell: self.ell,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect(),
        }
    }

    /// Exact product `self * other` in normal order.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.ell), (other.n, other.ell));
        let mut out = Self::zero(self.n, self.ell);
        for ((b1, g1), f1) in &self.terms {
            let gammas = sub_multi_indices(b1);
            for ((b2, g2), f2) in &other.terms {
                // g1 f2 = g1(f2) g1;  g1 d^b2 = z^{-sum w_i b2_i} d^{b2'} g1
                let h = f2.act(g1);
                let w = g1.twist();
                let p = g1.perm();
                let mut zp = 0i64;
                let mut b2p = vec![0u32; self.n];
                for i in 0..self.n {
                    zp -= w[i] as i64 * b2[i] as i64;
                    b2p[p[i] as usize] = b2[i];
                }
                let unit = ParamPoly::root_of_unity(self.ell, zp);
                let g = g1.compose(g2);
                let mut dh: HashMap<&Vec<u32>, RatFn> = HashMap::new();
                for (gamma, binom) in &gammas {
                    let d = dh.entry(gamma).or_insert_with(|| h.derivative_multi(gamma));
                    if d.is_zero() {
                        continue;
                    }
                    let coef = f1
                        .mul(d)
                        .scale(&unit.mul(&ParamPoly::from_i64(self.ell, *binom as i64)));
                    let beta: Vec<u32> = (0..self.n).map(|i| b1[i] - gamma[i] + b2p[i]).collect();
                    out.add_term(beta, g.clone(), coef);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.n, self.ell);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Action on a rational function.
    pub fn apply_ratfn(&self, f: &RatFn) -> RatFn {
        let mut acc = RatFn::zero(self.n, self.ell);
        for ((b, g), c) in &self.terms {
            acc = acc.add(&c.mul(&f.act(g).derivative_multi(b)));
        }
        acc
    }

    /// Action on a Laurent polynomial; the result must be polynomial.
    pub fn apply(&self, p: &LaurentPoly<ParamPoly>) -> Result<LaurentPoly<ParamPoly>> {
        // accumulate numerators per denominator, then combine
        let mut buckets: BTreeMap<Vec<(super::DiffFactor, u32)>, (RatFn, LaurentPoly<ParamPoly>)> = BTreeMap::new();
        let mut acted: HashMap<&GroupElement, LaurentPoly<ParamPoly>> = HashMap::new();
        for ((b, g), c) in &self.terms {
            let gp = acted.entry(g).or_insert_with(|| p.act(g));
            let d = gp.derivative_multi(b);
            if d.is_zero() {
                continue;
            }
            let key: Vec<_> = c.denominator().iter().map(|(f, e)| (*f, *e)).collect();
            let prod = c.numerator().mul(&d);
            let entry = buckets
                .entry(key)
                .or_insert_with(|| (c.clone(), LaurentPoly::zero(self.n, self.ell)));
            entry.1 = entry.1.add(&prod);
        }
        let mut total = RatFn::zero(self.n, self.ell);
        for (_, (template, num)) in buckets {
            total = total.add(&template.with_numerator(num));
        }
        if total.is_polynomial() {
            Ok(total.numerator().clone())
        } else {
            Err(Error::InexactDivision(format!("non-polynomial result {}", total)))
        }
    }

    /// Replace every group element by the identity; spot-checked against
    /// [`Operator::apply`] on invariant polynomials of degree `<= check_degree`.
    pub fn restrict_to_invariants(&self, check_degree: u32) -> Result<Operator> {
        let mut out = Self::zero(self.n, self.ell);
        for ((b, _), c) in &self.terms {
            out.add_term(b.clone(), GroupElement::identity(self.n, self.ell), c.clone());
        }
        for p in invariant_basis::<ParamPoly>(self.n, self.ell, check_degree) {
            let lhs = out.apply(&p)?;
            let rhs = self.apply(&p)?;
            if lhs != rhs {
                return Err(Error::ContractViolation(format!(
                    "restriction disagrees on invariant {}",
                    p
                )));
            }
        }
        Ok(out)
    }

    /// Checks that invariant polynomials of degree `<= check_degree` are
    /// mapped to invariants.
    pub fn preserves_invariants(&self, check_degree: u32) -> Result<()> {
        let mut generators = vec![GroupElement::alpha(self.n, self.ell, 0, 1, 1)];
        generators.extend((1..self.n).map(|i| GroupElement::transposition(self.n, self.ell, i - 1, i)));
        for p in invariant_basis::<ParamPoly>(self.n, self.ell, check_degree) {
            let img = self.apply(&p)?;
            if let Some(g) = generators.iter().find(|g| img.act(g) != img) {
                return Err(Error::ContractViolation(format!(
                    "image of {} is not fixed by {}",
                    p, g
                )));
            }
        }
        Ok(())
    }

    fn require_differential(&self) -> Result<()> {
        if self.is_differential() {
            Ok(())
        } else {
            Err(Error::ContractViolation("operator has group parts".into()))
        }
    }

    /// Formal action on `x^e` for symbolic exponents `e`.
    pub fn apply_formal(&self, e: &[ExponentExpr]) -> Result<Vec<(ParamPoly, Vec<ExponentExpr>)>> {
        self.require_differential()?;
        let ep: Vec<ParamPoly> = e.iter().map(|v| v.to_param_poly()).collect();
        let mut out: BTreeMap<Vec<ExponentExpr>, ParamPoly> = BTreeMap::new();
        for ((b, _), c) in &self.terms {
            if !c.is_polynomial() {
                return Err(Error::UnsupportedDenominator(format!("{}", c)));
            }
            let mut fall = ParamPoly::one(self.ell);
            for i in 0..self.n {
                fall = fall.mul(&falling(&ep[i], b[i]));
            }
            if fall.is_zero() {
                continue;
            }
            for (a, coef) in c.numerator().terms() {
                let shifted: Vec<ExponentExpr> = (0..self.n).map(|i| e[i].add_int(a[i] as i64 - b[i] as i64)).collect();
                let v = coef.mul(&fall);
                let slot = out.entry(shifted).or_insert_with(|| ParamPoly::zero(self.ell));
                *slot = slot.add(&v);
            }
        }
        Ok(out
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect())
    }

    /// `x^{-e} * self * x^e`, via `d_i -> d_i + e_i / x_i`.
    pub fn conjugate_by_monomial(&self, e: &[ExponentExpr]) -> Result<Operator> {
        self.require_differential()?;
        let (n, ell) = (self.n, self.ell);
        let shifted: Vec<Operator> = (0..n)
            .map(|i| {
                let mut inv = vec![0; n];
                inv[i] = -1;
                let coef = LaurentPoly::monomial(inv, e[i].to_param_poly(), ell);
                Operator::partial(n, ell, i).add(&Operator::multiplication_poly(coef))
            })
            .collect();
        let mut powers: HashMap<(usize, u32), Operator> = HashMap::new();
        let mut out = Self::zero(n, ell);
        for ((b, _), c) in &self.terms {
            let mut term = Operator::multiplication(c.clone());
            for i in 0..n {
                if b[i] > 0 {
                    let pw = powers.entry((i, b[i])).or_insert_with(|| shifted[i].pow(b[i]));
                    term = term.mul(pw);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Apply `f` to every parameter coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for ((b, g), c) in &self.terms {
            out.add_term(b.clone(), g.clone(), c.map_coeffs(&f));
        }
        out
    }

    /// Deterministic one-term-per-line text form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ((b, g), c) in &self.terms {
            let d: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            s.push_str(&format!("{} | d[{}] | {}\n", c, d.join(","), g));
        }
        s
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.to_text().trim_end())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Var};

    fn x(n: usize, ell: u32, i: usize) -> Operator {
        Operator::multiplication_poly(LaurentPoly::var(n, ell, i))
    }

    fn xpow(ell: u32, e: i32) -> LaurentPoly<ParamPoly> {
        LaurentPoly::monomial(vec![e], ParamPoly::one(ell), ell)
    }

    #[test]
    fn weyl_relation() {
        let d = Operator::partial(1, 1, 0);
        let expect = x(1, 1, 0).mul(&d).add(&Operator::identity(1, 1));
        assert_eq!(d.mul(&x(1, 1, 0)), expect);
    }

    #[test]
    fn group_passes_coefficient() {
        let ell = 3;
        let a = Operator::group(GroupElement::alpha(1, ell, 0, 1, 1));
        let z = ParamPoly::root_of_unity(ell, 1);
        assert_eq!(a.mul(&x(1, ell, 0)), x(1, ell, 0).mul(&a).scale(&z));
    }

    #[test]
    fn leibniz_with_inverse() {
        let d = Operator::partial(1, 1, 0);
        let inv = Operator::multiplication_poly(xpow(1, -1));
        let expect = inv.mul(&d).sub(&Operator::multiplication_poly(xpow(1, -2)));
        assert_eq!(d.mul(&inv), expect);
    }

    #[test]
    fn apply_examples() {
        let d = Operator::partial(1, 1, 0);
        assert_eq!(
            d.apply(&xpow(1, 3)).unwrap(),
            xpow(1, 2).scale(&ParamPoly::from_i64(1, 3))
        );

        // (c_1/(z-1)) x^{-1} (alpha - 1) applied to x is c_1, for ell = 2
        let ell = 2;
        let c1 = ParamPoly::var(ell, Var::c(1));
        let coef = c1.scale_rat(&rat(-1, 2));
        let alpha = Operator::group(GroupElement::alpha(1, ell, 0, 1, 1));
        let op = Operator::multiplication_poly(LaurentPoly::monomial(vec![-1], coef, ell))
            .mul(&alpha.sub(&Operator::identity(1, ell)));
        assert_eq!(op.apply(&xpow(ell, 1)).unwrap(), LaurentPoly::constant(1, ell, c1));

        // (s12 - 1)/(x1 - x2) on x1^2 is -(x1 + x2)
        let (n, ell) = (2, 1);
        let s = Operator::group(GroupElement::transposition(n, ell, 0, 1));
        let inv = Operator::multiplication(RatFn::over_linear(n, ell, ParamPoly::one(ell), 0, 1, 0));
        let op = inv.mul(&s.sub(&Operator::identity(n, ell)));
        let p = LaurentPoly::<ParamPoly>::var(n, ell, 0).pow(2);
        let expect = LaurentPoly::var(n, ell, 0).add(&LaurentPoly::var(n, ell, 1)).neg();
        assert_eq!(op.apply(&p).unwrap(), expect);
    }

    #[test]
    fn inexact_division_is_reported() {
        let (n, ell) = (2, 1);
        let inv = Operator::multiplication(RatFn::over_linear(n, ell, ParamPoly::one(ell), 0, 1, 0));
        let p = LaurentPoly::<ParamPoly>::var(n, ell, 0);
        assert!(matches!(inv.apply(&p), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn restriction_examples() {
        let ell = 2;
        let c1 = ParamPoly::var(ell, Var::c(1));
        // D = d + (c_1/(z - 1)) x^{-1} (alpha - 1)
        let alpha = Operator::group(GroupElement::alpha(1, ell, 0, 1, 1));
        let refl = Operator::multiplication_poly(LaurentPoly::monomial(vec![-1], c1.scale_rat(&rat(-1, 2)), ell))
            .mul(&alpha.sub(&Operator::identity(1, ell)));
        let dunkl = Operator::partial(1, ell, 0).add(&refl);
        let res = dunkl.pow(2).restrict_to_invariants(10).unwrap();
        let d = Operator::partial(1, ell, 0);
        let expect = d
            .pow(2)
            .add(&Operator::multiplication_poly(LaurentPoly::monomial(vec![-1], c1, ell)).mul(&d));
        assert_eq!(res, expect);

        assert_eq!(d.restrict_to_invariants(4).unwrap(), d);
        assert_eq!(alpha.restrict_to_invariants(4).unwrap(), Operator::identity(1, ell));
    }

    #[test]
    fn restriction_detects_non_invariant_operators() {
        // a Dunkl operator does not preserve invariants
        let ell = 2;
        let c1 = ParamPoly::var(ell, Var::c(1));
        let alpha = Operator::group(GroupElement::alpha(1, ell, 0, 1, 1));
        let refl = Operator::multiplication_poly(LaurentPoly::monomial(vec![-1], c1.scale_rat(&rat(-1, 2)), ell))
            .mul(&alpha.sub(&Operator::identity(1, ell)));
        let dunkl = Operator::partial(1, ell, 0).add(&refl);
        assert!(matches!(
            dunkl.preserves_invariants(4),
            Err(Error::ContractViolation(_))
        ));
        assert!(dunkl.pow(2).preserves_invariants(6).is_ok());
    }

    #[test]
    fn formal_application() {
        let ell = 2;
        let r = ExponentExpr::var(ell, Var::sym(0));
        let d = Operator::partial(1, ell, 0);
        let out = d.apply_formal(std::slice::from_ref(&r)).unwrap();
        assert_eq!(out, vec![(r.to_param_poly(), vec![r.add_int(-1)])]);

        let c1 = ParamPoly::var(ell, Var::c(1));
        let op = d
            .pow(2)
            .add(&Operator::multiplication_poly(LaurentPoly::monomial(vec![-1], c1.clone(), ell)).mul(&d));
        let out = op.apply_formal(std::slice::from_ref(&r)).unwrap();
        let rp = r.to_param_poly();
        let expect = rp.mul(&rp.sub(&ParamPoly::one(ell)).add(&c1));
        assert_eq!(out, vec![(expect, vec![r.add_int(-2)])]);

        assert!(d.apply_formal(&[ExponentExpr::int(ell, 0)]).unwrap().is_empty());
    }

    #[test]
    fn conjugation_examples() {
        let ell = 1;
        let e = ExponentExpr::var(ell, Var::sym(0));
        let ep = e.to_param_poly();
        let d = Operator::partial(1, ell, 0);
        let ex = |c: ParamPoly, k: i32| Operator::multiplication_poly(LaurentPoly::monomial(vec![k], c, ell));
        assert_eq!(
            d.conjugate_by_monomial(std::slice::from_ref(&e)).unwrap(),
            d.add(&ex(ep.clone(), -1))
        );
        let xo = x(1, ell, 0);
        assert_eq!(xo.conjugate_by_monomial(std::slice::from_ref(&e)).unwrap(), xo);
        let expect = d
            .pow(2)
            .add(&ex(ep.scale_rat(&rat(2, 1)), -1).mul(&d))
            .add(&ex(ep.mul(&ep.sub(&ParamPoly::one(ell))), -2));
        assert_eq!(d.pow(2).conjugate_by_monomial(&[e]).unwrap(), expect);
    }

    #[test]
    fn text_form_is_sorted_and_stable() {
        let (n, ell) = (2, 2);
        let op = Operator::partial(n, ell, 1)
            .add(&Operator::group(GroupElement::transposition(n, ell, 0, 1)))
            .add(&Operator::partial(n, ell, 0));
        assert_eq!(op.to_text(), op.clone().to_text());
        assert_eq!(op.to_text().lines().count(), 3);
    }
}
