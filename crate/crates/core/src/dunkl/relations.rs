use super::{build_dunkl, exponent_vectors, AlgebraWord, Convention, DunklParams, Images, Letter};
use crate::opalg::{GroupElement, Operator};
use crate::poly::LaurentPoly;
use crate::scalars::{ParamPoly, Ring};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct RelationRecord {
    pub relation_id: String,
    pub mode: String,
    pub status: String,
    /// Form of the relation that was checked when several are tried.
    pub variant: Option<String>,
    pub witness: Option<String>,
}

impl RelationRecord {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub ell: u32,
    pub convention: Convention,
    pub degree_bound: u32,
    pub records: Vec<RelationRecord>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.passed())
    }

    pub fn canonical_pass(&self) -> bool {
        self.records
            .iter()
            .filter(|r| r.mode == "canonical")
            .all(|r| r.passed())
    }
}

/// A relation `lhs = rhs`, possibly with alternative right-hand sides.
struct Relation {
    id: String,
    lhs: AlgebraWord,
    rhs: Vec<(String, AlgebraWord)>,
}

/// `(-1)^neg * eps^{dir * m}`.
fn offdiag_forms() -> Vec<(&'static str, i64, bool)> {
    vec![
        ("verbatim eps^m", 1, false),
        ("eps^-m", -1, false),
        ("-eps^m", 1, true),
        ("-eps^-m", -1, true),
    ]
}

fn relations(n: usize, ell: u32, k: &ParamPoly, c: &[ParamPoly], conv: &Convention) -> Vec<Relation> {
    let one = ParamPoly::one(ell);
    let alpha = |i: usize, m: i64| GroupElement::alpha(n, ell, i, m, conv.alpha_action);
    let refl = |i: usize, j: usize, m: i64| {
        GroupElement::transposition(n, ell, i, j)
            .compose(&alpha(i, m))
            .compose(&alpha(j, -m))
    };
    let single = |w: AlgebraWord| vec![("verbatim".to_string(), w)];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Relation {
                id: format!("[x{},x{}]", i + 1, j + 1),
                lhs: AlgebraWord::commutator(ell, Letter::X(i), Letter::X(j)),
                rhs: single(AlgebraWord::empty()),
            });
            out.push(Relation {
                id: format!("[y{},y{}]", i + 1, j + 1),
                lhs: AlgebraWord::commutator(ell, Letter::Y(i), Letter::Y(j)),
                rhs: single(AlgebraWord::empty()),
            });
        }
    }
    for i in 0..n {
        let mut rhs = AlgebraWord::scalar(one.clone());
        for j in (0..n).filter(|j| *j != i) {
            for m in 0..ell as i64 {
                rhs = rhs.plus(k.neg(), vec![Letter::G(refl(i, j, m))]);
            }
        }
        for m in 1..ell as i64 {
            rhs = rhs.plus(c[m as usize - 1].clone(), vec![Letter::G(alpha(i, m))]);
        }
        out.push(Relation {
            id: format!("[y{},x{}]", i + 1, i + 1),
            lhs: AlgebraWord::commutator(ell, Letter::Y(i), Letter::X(i)),
            rhs: single(rhs),
        });
    }
    for i in 0..n {
        for j in (0..n).filter(|j| *j != i) {
            let forms = offdiag_forms()
                .into_iter()
                .map(|(name, dir, neg)| {
                    let mut w = AlgebraWord::empty();
                    for m in 0..ell as i64 {
                        let mut coef = k.mul(&ParamPoly::root_of_unity(ell, dir * m));
                        if neg {
                            coef = coef.neg();
                        }
                        w = w.plus(coef, vec![Letter::G(refl(i, j, m))]);
                    }
                    (name.to_string(), w)
                })
                .collect();
            out.push(Relation {
                id: format!("[y{},x{}]", i + 1, j + 1),
                lhs: AlgebraWord::commutator(ell, Letter::Y(i), Letter::X(j)),
                rhs: forms,
            });
        }
    }
    // smash-product relations g u g^{-1} = g(u) for generators g
    let mut gens: Vec<(String, GroupElement)> = (0..n).map(|i| (format!("a{}", i + 1), alpha(i, 1))).collect();
    gens.extend((1..n).map(|i| {
        (
            format!("s{}{}", i, i + 1),
            GroupElement::transposition(n, ell, i - 1, i),
        )
    }));
    for (name, g) in gens {
        let ginv = g.inverse();
        for j in 0..n {
            let target = g.perm()[j] as usize;
            // g x_j g^{-1} = eps^{w_j} x_{p(j)},  g y_j g^{-1} = eps^{-w_j} y_{p(j)}
            let w = g.twist()[j] as i64;
            for (sym, letter, image, power) in [
                ("x", Letter::X(j), Letter::X(target), w),
                ("y", Letter::Y(j), Letter::Y(target), -w),
            ] {
                let lhs = AlgebraWord::word(ell, vec![Letter::G(g.clone()), letter, Letter::G(ginv.clone())]);
                let rhs = AlgebraWord::word(ell, vec![image]).scale(&ParamPoly::root_of_unity(ell, power));
                out.push(Relation {
                    id: format!("{}.{}{}", name, sym, j + 1),
                    lhs,
                    rhs: single(rhs),
                });
            }
        }
    }
    out
}

fn neg_word(w: &AlgebraWord) -> AlgebraWord {
    w.scale(&ParamPoly::from_i64(w.terms.first().map_or(1, |(c, _)| c.ell()), -1))
}

/// Check every defining relation of `H_n(k_rel, c_rel)` for the given images
/// of `y_i`, as operator identities and on monomials of degree `<= degree_bound`.
pub fn check_relations(
    ys: &[Operator],
    k_rel: &ParamPoly,
    c_rel: &[ParamPoly],
    convention: &Convention,
    degree_bound: u32,
) -> Vec<RelationRecord> {
    let n = ys.len();
    let ell = ys[0].ell();
    let images = Images { n, ell, ys };
    let rels = relations(n, ell, k_rel, c_rel, convention);
    let monomials: Vec<LaurentPoly<ParamPoly>> = exponent_vectors(n, 0, degree_bound as i32)
        .into_iter()
        .map(|e| LaurentPoly::monomial(e, ParamPoly::one(ell), ell))
        .collect();
    rels.par_iter()
        .flat_map_iter(|rel| {
            let lhs = images.operator(&rel.lhs);
            let mut canonical = None;
            let mut first_diff = None;
            for (name, rhs) in &rel.rhs {
                let diff = lhs.sub(&images.operator(rhs));
                if diff.is_zero() {
                    canonical = Some(name.clone());
                    break;
                }
                first_diff.get_or_insert(diff);
            }
            let variant = canonical.clone().or_else(|| rel.rhs.first().map(|(n, _)| n.clone()));
            let rhs = &rel
                .rhs
                .iter()
                .find(|(n, _)| Some(n) == variant.as_ref())
                .expect("variant exists")
                .1;
            let multi = rel.rhs.len() > 1;
            let canon = RelationRecord {
                relation_id: rel.id.clone(),
                mode: "canonical".into(),
                status: if canonical.is_some() { "pass" } else { "fail" }.into(),
                variant: if multi { variant.clone() } else { None },
                witness: if canonical.is_some() {
                    None
                } else {
                    first_diff.map(|d| d.to_text())
                },
            };
            // independent route: apply letter by letter
            let word = rel.lhs.clone().add(&neg_word(rhs));
            let mut witness = None;
            for p in &monomials {
                match images.apply(&word, p) {
                    Ok(v) if v.is_zero() => {}
                    Ok(v) => {
                        witness = Some(format!("on {}: {}", p, v));
                        break;
                    }
                    Err(e) => {
                        witness = Some(format!("on {}: {}", p, e));
                        break;
                    }
                }
            }
            let applied = RelationRecord {
                relation_id: rel.id.clone(),
                mode: "applied".into(),
                status: if witness.is_none() { "pass" } else { "fail" }.into(),
                variant: if multi { variant } else { None },
                witness,
            };
            vec![canon, applied]
        })
        .collect()
}

/// Relations of `H_n(k,c)` under `Theta_{k,c}`.
pub fn verify_relations(params: &DunklParams, degree_bound: u32) -> RelationReport {
    let ys: Vec<Operator> = (0..params.n).map(|i| build_dunkl(i, params)).collect();
    let records = check_relations(&ys, &params.k, &params.c, &params.convention, degree_bound);
    RelationReport {
        n: params.n,
        ell: params.ell,
        convention: params.convention.clone(),
        degree_bound,
        records,
    }
}
