use super::{build_dunkl, check_relations, exponent_vectors, k_reflection_part, DunklParams, RelationRecord};
use crate::opalg::{GroupElement, Operator, RatFn};
use crate::poly::LaurentPoly;
use crate::scalars::{rat, ParamPoly, Ring};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub check: String,
    pub n: usize,
    pub ell: u32,
    pub variant: String,
    pub records: Vec<RelationRecord>,
}

impl EmbeddingReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.passed())
    }
}

/// Type-A Dunkl operator `d_i + k sum_{j != i} (x_i - x_j)^{-1} (s_ij - 1)`,
/// built with scalars in the `ell`-th cyclotomic field.
fn type_a_dunkl(i: usize, params: &DunklParams) -> Operator {
    let (n, ell) = (params.n, params.ell);
    let one = Operator::identity(n, ell);
    let mut out = Operator::partial(n, ell, i);
    for j in (0..n).filter(|j| *j != i) {
        let coef = Operator::multiplication(RatFn::over_linear(n, ell, params.k.clone(), i, j, 0));
        let s = Operator::group(GroupElement::transposition(n, ell, i, j));
        out = out.add(&coef.mul(&s.sub(&one)));
    }
    out
}

/// Embedding `j`: `ell^{-1} x_i^{1-ell} D_i` against the type-A Dunkl
/// operator in `X_i = x_i^ell`, on all monomials `x^{ell a}` with
/// `a_i >= -1` and degree `<= degree_bound`.
pub fn j_embedding_check(params: &DunklParams, degree_bound: u32) -> Result<EmbeddingReport> {
    let (n, ell) = (params.n, params.ell);
    let l = ell as i32;
    let mut records = Vec::new();
    let exps: Vec<Vec<i32>> = exponent_vectors(n, -1, degree_bound as i32 / l)
        .into_iter()
        .filter(|a| a.iter().sum::<i32>() * l <= degree_bound as i32)
        .collect();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1 - l;
        let pre = LaurentPoly::monomial(e, ParamPoly::from_rat(ell, rat(1, ell as i64)), ell);
        let lhs = Operator::multiplication_poly(pre).mul(&build_dunkl(i, params));
        let rhs = type_a_dunkl(i, params);
        let mut witness = None;
        for a in &exps {
            let xa = LaurentPoly::monomial(a.iter().map(|v| v * l).collect(), ParamPoly::one(ell), ell);
            let big = LaurentPoly::monomial(a.clone(), ParamPoly::one(ell), ell);
            let left = lhs.apply(&xa)?;
            let right = rhs.apply(&big)?.substitute_powers(l);
            if left != right {
                witness = Some(format!("on x^{:?}: {} vs {}", a, left, right));
                break;
            }
        }
        records.push(RelationRecord {
            relation_id: format!("j(Y{})", i + 1),
            mode: "applied".into(),
            status: if witness.is_none() { "pass" } else { "fail" }.into(),
            variant: None,
            witness,
        });
    }
    Ok(EmbeddingReport {
        check: "j".into(),
        n,
        ell,
        variant: "verbatim".into(),
        records,
    })
}

/// Image of `y_i` under embedding `i`: `D_i + sign * k sum (...)(g - 1)`.
pub fn i_image(i: usize, params: &DunklParams, sign: i8) -> Operator {
    let part = k_reflection_part(i, params);
    let part = if sign < 0 { part.neg() } else { part };
    build_dunkl(i, params).add(&part)
}

/// Embedding `i`: images must satisfy the relations of `H_n(0,c)`.
pub fn i_embedding_check(params: &DunklParams, degree_bound: u32, sign: i8) -> Result<EmbeddingReport> {
    if params.n < 2 {
        return Err(Error::Dimension("embedding i needs n >= 2".into()));
    }
    let ys: Vec<Operator> = (0..params.n).map(|i| i_image(i, params, sign)).collect();
    let zero = ParamPoly::zero(params.ell);
    let records = check_relations(&ys, &zero, &params.c, &params.convention, degree_bound);
    Ok(EmbeddingReport {
        check: "i".into(),
        n: params.n,
        ell: params.ell,
        variant: if sign < 0 { "minus" } else { "plus (verbatim)" }.into(),
        records,
    })
}
