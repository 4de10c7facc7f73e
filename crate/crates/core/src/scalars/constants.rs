use super::{rat, CycRat, ExponentExpr, ParamPoly, Rational, Ring};
use crate::error::{Error, Result};
use num_traits::Zero;

/// The character constants `C_0, ..., C_{ell-1}` from the parameters
/// `c_1, ..., c_{ell-1}`:
/// `C_i = 1/ell - (1/ell) sum_m zeta^{m i} c_m` for `i >= 1` and
/// `C_0 = (1 - ell)/ell - (1/ell) sum_m c_m`.
pub fn compute_c(ell: u32, c: &[ParamPoly]) -> Result<Vec<ParamPoly>> {
    if c.len() + 1 != ell as usize {
        return Err(Error::Dimension(format!(
            "expected {} parameters c_m, got {}",
            ell - 1,
            c.len()
        )));
    }
    let l = ell as i64;
    let inv_l = rat(1, l);
    let out = (0..l)
        .map(|i| {
            let mut s = ParamPoly::zero(ell);
            for (idx, cm) in c.iter().enumerate() {
                let m = idx as i64 + 1;
                s = s.add(&cm.scale(&CycRat::zeta_pow(ell, m * i)));
            }
            let base = if i == 0 { rat(1 - l, l) } else { inv_l.clone() };
            ParamPoly::from_rat(ell, base).sub(&s.scale_rat(&inv_l))
        })
        .collect();
    Ok(out)
}

/// `(sigma, t)` with `t = sum_s s C_s` and `sigma = t / ell`.
pub fn compute_sigma_t(big_c: &[ParamPoly]) -> (ParamPoly, ParamPoly) {
    let ell = big_c.len() as u32;
    let mut t = ParamPoly::zero(big_c.first().map_or(1, |p| p.ell()));
    for (s, cs) in big_c.iter().enumerate() {
        t = t.add(&cs.scale_rat(&rat(s as i64, 1)));
    }
    (t.scale_rat(&rat(1, ell as i64)), t)
}

/// Kernel exponents `a_i = -ell sum_{s<=i} C_s` and `b_i = ell sigma + a_i`.
pub fn compute_a_b(big_c: &[ParamPoly]) -> Result<(Vec<ExponentExpr>, Vec<ExponentExpr>)> {
    let ell = big_c.len() as i64;
    let (_, t) = compute_sigma_t(big_c);
    let t = ExponentExpr::try_from_param_poly(&t)?;
    let mut partial = ParamPoly::zero(big_c.first().map_or(1, |p| p.ell()));
    let mut a = Vec::with_capacity(big_c.len());
    for cs in big_c {
        partial = partial.add(cs);
        a.push(ExponentExpr::try_from_param_poly(&partial.scale_rat(&rat(-ell, 1)))?);
    }
    let b = a.iter().map(|ai| t.add(ai)).collect();
    Ok((a, b))
}

/// Invert [`compute_c`]: the parameters `c_m` whose character constants are
/// the given `C` (which must sum to zero).
pub fn c_from_big_c(ell: u32, big_c: &[Rational]) -> Result<Vec<CycRat>> {
    if big_c.len() != ell as usize {
        return Err(Error::Dimension(format!("C must have length {}", ell)));
    }
    let total: Rational = big_c.iter().sum();
    if !total.is_zero() {
        return Err(Error::Domain(format!("C must sum to zero, got {}", total)));
    }
    let l = ell as i64;
    // u_i = sum_m zeta^{m i} c_m
    let u: Vec<Rational> = big_c
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            let shift = if i == 0 { rat(l, 1) } else { Rational::zero() };
            rat(1, 1) - ci * rat(l, 1) - shift
        })
        .collect();
    Ok((1..l)
        .map(|m| {
            let mut acc = CycRat::zero(ell);
            for (i, ui) in u.iter().enumerate() {
                acc = acc.add(&CycRat::zeta_pow(ell, -m * i as i64).scale(ui));
            }
            acc.scale(&rat(1, l))
        })
        .collect())
}
