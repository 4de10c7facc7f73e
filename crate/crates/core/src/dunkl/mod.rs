//! Dunkl operators for `Gamma_n`, the embedding `Theta_{k,c}`, relation
//! checks, the rank-one operator `D'` and the localization embeddings.

mod embeddings;
mod rank_one;
mod relations;

pub use embeddings::{i_embedding_check, i_image, j_embedding_check, EmbeddingReport};
pub use rank_one::{
    calibrate, dprime, dprime_factorized, kernel_check, symbol, CalibrationReport, CandidateResult, DPrimeReport,
    KernelEntry, KernelReport,
};

pub use relations::{check_relations, verify_relations, RelationRecord, RelationReport};

use crate::opalg::{GroupElement, Operator, RatFn};
use crate::poly::{invariant_basis, LaurentPoly};
use crate::scalars::{rat, ParamPoly, Rational, Ring, Var};
use crate::{Error, Result};
use serde::Serialize;

/// Sign conventions that the defining formulas leave open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convention {
    /// `alpha_i` acts on functions by `x_i -> zeta^{alpha_action} x_i`.
    pub alpha_action: i8,
    /// Multiplier applied to `c` before computing `C`.
    pub c_sign: i8,
    /// Normalization of the radial operator `D''`.
    #[serde(serialize_with = "ser_rational")]
    pub hc_scalar: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Convention {
    pub fn new(alpha_action: i8, c_sign: i8) -> Self {
        Convention {
            alpha_action,
            c_sign,
            hc_scalar: rat(1, 1),
        }
    }

    /// The setting selected by [`calibrate`].
    pub fn calibrated() -> Self {
        Self::new(1, -1)
    }

    pub fn candidates() -> Vec<Convention> {
        let mut out = Vec::new();
        for a in [1, -1] {
            for c in [1, -1] {
                out.push(Self::new(a, c));
            }
        }
        out
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::calibrated()
    }
}

#[derive(Clone, Debug)]
pub struct DunklParams {
    pub n: usize,
    pub ell: u32,
    pub k: ParamPoly,
    /// `c_1, ..., c_{ell-1}`.
    pub c: Vec<ParamPoly>,
    pub convention: Convention,
}

impl DunklParams {
    /// Fully symbolic `k` and `c`.
    pub fn symbolic(n: usize, ell: u32, convention: Convention) -> Self {
        DunklParams {
            n,
            ell,
            k: ParamPoly::var(ell, Var::K),
            c: (1..ell as usize).map(|m| ParamPoly::var(ell, Var::c(m))).collect(),
            convention,
        }
    }

    pub fn with_values(n: usize, ell: u32, k: ParamPoly, c: Vec<ParamPoly>, convention: Convention) -> Result<Self> {
        if c.len() + 1 != ell as usize {
            return Err(Error::Dimension(format!(
                "expected {} parameters c_m, got {}",
                ell - 1,
                c.len()
            )));
        }
        Ok(DunklParams {
            n,
            ell,
            k,
            c,
            convention,
        })
    }

    /// `alpha_i^m` under the active convention (0-based `i`).
    pub fn alpha(&self, i: usize, m: i64) -> GroupElement {
        GroupElement::alpha(self.n, self.ell, i, m, self.convention.alpha_action)
    }

    /// `s_ij alpha_i^m alpha_j^{-m}`.
    pub fn reflection(&self, i: usize, j: usize, m: i64) -> GroupElement {
        GroupElement::transposition(self.n, self.ell, i, j)
            .compose(&self.alpha(i, m))
            .compose(&self.alpha(j, -m))
    }

    /// `c` multiplied by the convention sign, as fed into `C`.
    pub fn c_for_constants(&self) -> Vec<ParamPoly> {
        let s = ParamPoly::from_i64(self.ell, self.convention.c_sign as i64);
        self.c.iter().map(|c| c.mul(&s)).collect()
    }
}

/// `k sum_{j != i} sum_m (x_i - eps^m x_j)^{-1} (s_ij alpha_i^m alpha_j^{-m} - 1)`.
pub fn k_reflection_part(i: usize, params: &DunklParams) -> Operator {
    let (n, ell) = (params.n, params.ell);
    let one = Operator::identity(n, ell);
    let mut out = Operator::zero(n, ell);
    for j in (0..n).filter(|j| *j != i) {
        for m in 0..ell as i64 {
            let coef = Operator::multiplication(RatFn::over_linear(n, ell, params.k.clone(), i, j, m));
            let g = Operator::group(params.reflection(i, j, m));
            out = out.add(&coef.mul(&g.sub(&one)));
        }
    }
    out
}

/// `sum_{m>=1} c_m / ((eps^m - 1) x_i) (alpha_i^m - 1)`.
pub fn c_part(i: usize, params: &DunklParams) -> Operator {
    let (n, ell) = (params.n, params.ell);
    let one = Operator::identity(n, ell);
    let mut out = Operator::zero(n, ell);
    for m in 1..ell as i64 {
        let denom = ParamPoly::root_of_unity(ell, m).sub(&ParamPoly::one(ell));
        let inv = denom
            .as_constant()
            .and_then(|d| crate::scalars::Field::inv(&d))
            .expect("eps^m != 1");
        let coef = params.c[m as usize - 1].scale(&inv);
        let mut e = vec![0; n];
        e[i] = -1;
        let mult = Operator::multiplication_poly(LaurentPoly::monomial(e, coef, ell));
        out = out.add(&mult.mul(&Operator::group(params.alpha(i, m)).sub(&one)));
    }
    out
}

/// The Dunkl operator `D_i` (0-based `i`).
pub fn build_dunkl(i: usize, params: &DunklParams) -> Operator {
    Operator::partial(params.n, params.ell, i)
        .add(&k_reflection_part(i, params))
        .add(&c_part(i, params))
}

/// Generator of the rational Cherednik algebra, or an explicit operator.
#[derive(Clone, Debug)]
pub enum Letter {
    X(usize),
    Y(usize),
    G(GroupElement),
}

/// Linear combination of words in the generators.
#[derive(Clone, Debug, Default)]
pub struct AlgebraWord {
    pub terms: Vec<(ParamPoly, Vec<Letter>)>,
}

impl AlgebraWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn word(ell: u32, letters: Vec<Letter>) -> Self {
        AlgebraWord {
            terms: vec![(ParamPoly::one(ell), letters)],
        }
    }

    pub fn scalar(c: ParamPoly) -> Self {
        AlgebraWord {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn plus(mut self, c: ParamPoly, letters: Vec<Letter>) -> Self {
        self.terms.push((c, letters));
        self
    }

    pub fn add(mut self, other: &AlgebraWord) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn scale(&self, s: &ParamPoly) -> Self {
        AlgebraWord {
            terms: self.terms.iter().map(|(c, w)| (c.mul(s), w.clone())).collect(),
        }
    }

    /// `[a, b]` for single letters.
    pub fn commutator(ell: u32, a: Letter, b: Letter) -> Self {
        let minus = ParamPoly::from_i64(ell, -1);
        Self::word(ell, vec![a.clone(), b.clone()]).plus(minus, vec![b, a])
    }
}

/// Operator images of the generators.
pub struct Images<'a> {
    pub n: usize,
    pub ell: u32,
    pub ys: &'a [Operator],
}

impl Images<'_> {
    fn letter(&self, l: &Letter) -> Operator {
        match l {
            Letter::X(i) => Operator::multiplication_poly(LaurentPoly::var(self.n, self.ell, *i)),
            Letter::Y(i) => self.ys[*i].clone(),
            Letter::G(g) => Operator::group(g.clone()),
        }
    }

    /// Image of a word as a normal-ordered operator.
    pub fn operator(&self, w: &AlgebraWord) -> Operator {
        let mut out = Operator::zero(self.n, self.ell);
        for (c, letters) in &w.terms {
            let mut op = Operator::scalar(self.n, self.ell, c.clone());
            for l in letters {
                op = op.mul(&self.letter(l));
            }
            out = out.add(&op);
        }
        out
    }

    /// Action of a word on a polynomial, letter by letter from the right.
    pub fn apply(&self, w: &AlgebraWord, p: &LaurentPoly<ParamPoly>) -> Result<LaurentPoly<ParamPoly>> {
        let mut out = LaurentPoly::zero(self.n, self.ell);
        for (c, letters) in &w.terms {
            let mut q = p.clone();
            for l in letters.iter().rev() {
                q = match l {
                    Letter::X(i) => q.mul(&LaurentPoly::var(self.n, self.ell, *i)),
                    Letter::Y(i) => self.ys[*i].apply(&q)?,
                    Letter::G(g) => q.act(g),
                };
            }
            out = out.add(&q.scale(c));
        }
        Ok(out)
    }
}

/// `Theta_{k,c}` on words.
pub fn theta(w: &AlgebraWord, params: &DunklParams) -> Operator {
    let ys: Vec<Operator> = (0..params.n).map(|i| build_dunkl(i, params)).collect();
    Images {
        n: params.n,
        ell: params.ell,
        ys: &ys,
    }
    .operator(w)
}

/// `Theta^sph(sum_i y_i^{ell r})`, checked to map invariants of degree `d`
/// to invariants of degree `d - ell r` up to `check_degree`.
pub fn spherical_power(r: u32, params: &DunklParams, check_degree: u32) -> Result<Operator> {
    let (n, ell) = (params.n, params.ell);
    let mut full = Operator::zero(n, ell);
    for i in 0..n {
        full = full.add(&build_dunkl(i, params).pow(ell * r));
    }
    full.preserves_invariants(check_degree)?;
    let res = full.restrict_to_invariants(check_degree)?;
    let drop = (ell * r) as i32;
    for p in invariant_basis::<ParamPoly>(n, ell, check_degree) {
        let d = p.total_degrees()[0];
        let img = res.apply(&p)?;
        if !img.is_zero() && img.total_degrees() != vec![d - drop] {
            return Err(Error::ContractViolation(format!(
                "image of {} has degrees {:?}, expected {}",
                p,
                img.total_degrees(),
                d - drop
            )));
        }
    }
    Ok(res)
}

/// All exponent vectors with entries `>= lo` and `lo*n <= total <= max_total`.
pub fn exponent_vectors(n: usize, lo: i32, max_total: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut cur = vec![lo; n];
    fn rec(i: usize, lo: i32, budget: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        let mut v = lo;
        while v - lo <= budget {
            cur[i] = v;
            rec(i + 1, lo, budget - (v - lo), cur, out);
            v += 1;
        }
        cur[i] = lo;
    }
    rec(0, lo, max_total - lo * n as i32, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(ell: u32, e: Vec<i32>) -> LaurentPoly<ParamPoly> {
        LaurentPoly::monomial(e, ParamPoly::one(ell), ell)
    }

    #[test]
    fn rank_one_trivial_group_is_derivative() {
        let p = DunklParams::symbolic(1, 1, Convention::default());
        assert_eq!(build_dunkl(0, &p), Operator::partial(1, 1, 0));
        let p0 = DunklParams::with_values(
            2,
            3,
            ParamPoly::zero(3),
            vec![ParamPoly::zero(3); 2],
            Convention::default(),
        )
        .unwrap();
        assert_eq!(build_dunkl(1, &p0), Operator::partial(2, 3, 1));
    }

    #[test]
    fn rank_one_on_x() {
        let p = DunklParams::symbolic(1, 2, Convention::default());
        let out = build_dunkl(0, &p).apply(&mono(2, vec![1])).unwrap();
        let expect = ParamPoly::one(2).add(&ParamPoly::var(2, Var::c(1)));
        assert_eq!(out, LaurentPoly::constant(1, 2, expect));
    }

    #[test]
    fn type_a_on_x1() {
        let p = DunklParams::symbolic(2, 1, Convention::default());
        let out = build_dunkl(0, &p).apply(&mono(1, vec![1, 0])).unwrap();
        // d x1 = 1; k (s - 1) x1 / (x1 - x2) = -k
        let expect = ParamPoly::one(1).sub(&ParamPoly::var(1, Var::K));
        assert_eq!(out, LaurentPoly::constant(2, 1, expect));
    }

    #[test]
    fn theta_examples() {
        let p = DunklParams::symbolic(2, 2, Convention::default());
        let w = AlgebraWord::word(2, vec![Letter::X(0), Letter::Y(0)]);
        let x = Operator::multiplication_poly(LaurentPoly::var(2, 2, 0));
        assert_eq!(theta(&w, &p), x.mul(&build_dunkl(0, &p)));
        assert!(theta(&AlgebraWord::empty(), &p).is_zero());
        assert_eq!(
            theta(&AlgebraWord::scalar(ParamPoly::one(2)), &p),
            Operator::identity(2, 2)
        );
        let comm = AlgebraWord::commutator(2, Letter::Y(0), Letter::Y(1));
        assert!(theta(&comm, &p).is_zero());
    }

    #[test]
    fn spherical_power_examples() {
        let p = DunklParams::symbolic(1, 1, Convention::default());
        assert_eq!(spherical_power(1, &p, 4).unwrap(), Operator::partial(1, 1, 0));

        let p = DunklParams::symbolic(1, 2, Convention::default());
        let d = Operator::partial(1, 2, 0);
        let c1 = ParamPoly::var(2, Var::c(1));
        let expect = d
            .pow(2)
            .add(&Operator::multiplication_poly(LaurentPoly::monomial(vec![-1], c1, 2)).mul(&d));
        assert_eq!(spherical_power(1, &p, 8).unwrap(), expect);

        let p = DunklParams::with_values(2, 1, ParamPoly::zero(1), vec![], Convention::default()).unwrap();
        let expect = Operator::partial(2, 1, 0).add(&Operator::partial(2, 1, 1));
        assert_eq!(spherical_power(1, &p, 4).unwrap(), expect);
        let expect = Operator::partial(2, 1, 0)
            .pow(2)
            .add(&Operator::partial(2, 1, 1).pow(2));
        assert_eq!(spherical_power(2, &p, 4).unwrap(), expect);
    }

    #[test]
    fn exponent_vector_enumeration() {
        assert_eq!(exponent_vectors(2, 0, 2).len(), 6);
        assert_eq!(exponent_vectors(3, 0, 6).len(), 84);
        assert!(exponent_vectors(2, -1, 1).iter().all(|e| e.iter().sum::<i32>() <= 1));
    }
}
