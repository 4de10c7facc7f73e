use cyclohc::dunkl::{Convention, DunklParams};
use cyclohc::radial::{dm_identity_check, hc_identity_check, lift};
use cyclohc::scalars::{compute_a_b, compute_c, rat, CycRat, ExponentExpr, ParamPoly, Var};

fn pow(ell: u32, e: u32) -> String {
    CycRat::rational(ell, rat((ell as i64).pow(e), 1)).to_string()
}

#[test]
fn hc_constant_is_ell_to_the_ell() {
    for ell in 1..=4 {
        let r = hc_identity_check(&DunklParams::symbolic(1, ell, Convention::calibrated())).unwrap();
        assert!(r.passed(), "ell = {}", ell);
        assert_eq!(r.proportionality_constant.unwrap(), pow(ell, ell));
    }
}

#[test]
fn dm_constant_is_power_of_hc_constant() {
    for ell in 1..=3 {
        for m in 1..=3 {
            let r = dm_identity_check(m, &DunklParams::symbolic(1, ell, Convention::calibrated())).unwrap();
            assert!(r.passed(), "ell = {} m = {}", ell, m);
            assert_eq!(r.proportionality_constant.unwrap(), pow(ell, ell * m));
        }
    }
}

#[test]
fn lift_exponent_vanishes_exactly_at_b() {
    for ell in 1..=4u32 {
        let c: Vec<ParamPoly> = (1..ell as usize).map(|m| ParamPoly::var(ell, Var::c(m))).collect();
        let big_c = compute_c(ell, &c).unwrap();
        let (_, b) = compute_a_b(&big_c).unwrap();
        let m = ExponentExpr::var(ell, Var::sym(0));
        let l = lift(&m, &big_c).unwrap();
        for (i, bi) in b.iter().enumerate() {
            // r_i(m) = (m - b_i) / ell as affine expressions
            let expect = m.sub(bi).scale(&rat(1, ell as i64));
            assert_eq!(l.exps[i], expect, "ell = {} i = {}", ell, i);
        }
    }
}
