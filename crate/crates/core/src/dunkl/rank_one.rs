use super::{build_dunkl, Convention, DunklParams};
use crate::opalg::Operator;
use crate::poly::LaurentPoly;
use crate::scalars::{compute_a_b, compute_c, CycRat, ExponentExpr, ParamPoly, Ring, Var};
use crate::{Error, Result};
use serde::Serialize;

fn require_rank_one(params: &DunklParams) -> Result<()> {
    if params.n != 1 {
        return Err(Error::Dimension(format!(
            "rank-one construction needs n = 1, got {}",
            params.n
        )));
    }
    Ok(())
}

/// Symbol `p(r)` of a rank-one operator homogeneous of degree `-shift`:
/// `A x^r = p(r) x^{r - shift}`, as a polynomial in `Var::sym(0)`.
pub fn symbol(op: &Operator, shift: i64) -> Result<ParamPoly> {
    let ell = op.ell();
    let r = ExponentExpr::var(ell, Var::sym(0));
    let terms = op.apply_formal(std::slice::from_ref(&r))?;
    let target = r.add_int(-shift);
    let mut out = ParamPoly::zero(ell);
    for (c, e) in terms {
        if e[0] != target {
            return Err(Error::ContractViolation(format!(
                "operator is not homogeneous: term x^({})",
                e[0]
            )));
        }
        out = out.add(&c);
    }
    Ok(out)
}

/// `D' = Theta^sph(y^ell)` for `n = 1`.
pub fn dprime(params: &DunklParams) -> Result<Operator> {
    require_rank_one(params)?;
    build_dunkl(0, params)
        .pow(params.ell)
        .restrict_to_invariants(3 * params.ell)
}

/// The product `prod_{i=0}^{ell-1} (d + S_i / x)` with
/// `S_i = sum_{j<=i} sum_m eps^{mj} c_m`.
pub fn dprime_factorized(params: &DunklParams) -> Result<Operator> {
    require_rank_one(params)?;
    let ell = params.ell;
    let d = Operator::partial(1, ell, 0);
    let mut out = Operator::identity(1, ell);
    let mut s = ParamPoly::zero(ell);
    for j in 0..ell as i64 {
        for (idx, cm) in params.c.iter().enumerate() {
            s = s.add(&cm.scale(&CycRat::zeta_pow(ell, (idx as i64 + 1) * j)));
        }
        let factor = d.add(&Operator::multiplication_poly(LaurentPoly::monomial(
            vec![-1],
            s.clone(),
            ell,
        )));
        out = out.mul(&factor);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DPrimeReport {
    pub ell: u32,
    pub convention: Convention,
    pub dunkl: String,
    pub factorized: String,
    pub symbol: String,
    pub agree: bool,
}

impl DPrimeReport {
    pub fn compute(params: &DunklParams) -> Result<Self> {
        let a = dprime(params)?;
        let b = dprime_factorized(params)?;
        Ok(DPrimeReport {
            ell: params.ell,
            convention: params.convention.clone(),
            dunkl: a.to_text(),
            factorized: b.to_text(),
            symbol: symbol(&a, params.ell as i64)?.to_string(),
            agree: a == b,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelEntry {
    pub i: usize,
    pub exponent: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub ell: u32,
    pub convention: Convention,
    pub entries: Vec<KernelEntry>,
}

impl KernelReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// `D'(x^{a_i}) = 0` identically in `c`, with `a_i` from the constants `C`.
pub fn kernel_check(params: &DunklParams) -> Result<KernelReport> {
    let op = dprime(params)?;
    let big_c = compute_c(params.ell, &params.c_for_constants())?;
    let (a, _) = compute_a_b(&big_c)?;
    let mut entries = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        let out = op.apply_formal(std::slice::from_ref(ai))?;
        let residual = out.iter().map(|(c, _)| c.to_string()).collect::<Vec<_>>().join(" + ");
        entries.push(KernelEntry {
            i,
            exponent: ai.to_string(),
            residual: if out.is_empty() { "0".into() } else { residual },
            pass: out.is_empty(),
        });
    }
    Ok(KernelReport {
        ell: params.ell,
        convention: params.convention.clone(),
        entries,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateResult {
    pub convention: Convention,
    pub per_ell: Vec<(u32, bool)>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub ells: Vec<u32>,
    pub candidates: Vec<CandidateResult>,
    pub selected: Option<Convention>,
    pub unique: bool,
}

/// Try the four flag settings and keep those for which `kernel_check`
/// passes for every `ell` in `ells`.
pub fn calibrate(ells: &[u32]) -> Result<CalibrationReport> {
    let mut candidates = Vec::new();
    for conv in Convention::candidates() {
        let mut per_ell = Vec::new();
        for &ell in ells {
            let p = DunklParams::symbolic(1, ell, conv.clone());
            per_ell.push((ell, kernel_check(&p)?.all_pass()));
        }
        let pass = per_ell.iter().all(|(_, ok)| *ok);
        candidates.push(CandidateResult {
            convention: conv,
            per_ell,
            pass,
        });
    }
    let passing: Vec<&CandidateResult> = candidates.iter().filter(|c| c.pass).collect();
    let unique = passing.len() == 1;
    let selected = if unique {
        Some(passing[0].convention.clone())
    } else {
        None
    };
    Ok(CalibrationReport {
        ells: ells.to_vec(),
        candidates,
        selected,
        unique,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn trivial_group() {
        let p = DunklParams::symbolic(1, 1, Convention::default());
        assert_eq!(dprime(&p).unwrap(), Operator::partial(1, 1, 0));
        assert_eq!(dprime_factorized(&p).unwrap(), Operator::partial(1, 1, 0));
        assert!(kernel_check(&p).unwrap().all_pass());
    }

    #[test]
    fn ell_two_symbol_and_roots() {
        let p = DunklParams::symbolic(1, 2, Convention::default());
        let s = symbol(&dprime(&p).unwrap(), 2).unwrap();
        let r = ParamPoly::var(2, Var::sym(0));
        let c1 = ParamPoly::var(2, Var::c(1));
        assert_eq!(s, r.mul(&r.add(&c1).sub(&ParamPoly::one(2))));
        // roots 0 and 1 - c_1
        let root = ExponentExpr::int(2, 1).sub(&ExponentExpr::var(2, Var::c(1)));
        let mut sub = std::collections::BTreeMap::new();
        sub.insert(Var::sym(0), root.to_param_poly());
        assert!(s.substitute(&sub).is_zero());
        sub.insert(Var::sym(0), ParamPoly::zero(2));
        assert!(s.substitute(&sub).is_zero());
    }

    #[test]
    fn c_sign_pins_second_root() {
        let good = kernel_check(&DunklParams::symbolic(1, 2, Convention::new(1, -1))).unwrap();
        assert!(good.all_pass());
        let bad = kernel_check(&DunklParams::symbolic(1, 2, Convention::new(1, 1))).unwrap();
        // a_1 = 0 is always a root; a_0 only with the right sign
        assert!(bad.entries[1].pass);
        assert!(!bad.entries[0].pass);
    }

    #[test]
    fn factorization_matches_for_small_ell() {
        for ell in 1..=4 {
            let p = DunklParams::symbolic(1, ell, Convention::default());
            assert!(DPrimeReport::compute(&p).unwrap().agree, "ell = {}", ell);
        }
        let _ = rat(1, 1);
    }
}
