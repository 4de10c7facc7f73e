//! Eigen-series for the Bessel function: Frobenius recursion for `n = 1`
//! and degree-by-degree joint solves for general `n`.

use super::c_for_big_c;
use crate::dunkl::{dprime, symbol, Convention, DunklParams};
use crate::opalg::GroupElement;
use crate::poly::{monomial_symmetric, partitions, LaurentPoly};
use crate::scalars::{CycRat, Field, ParamPoly, Rational, Ring, Var};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Truncated rank-one series `B(x) = sum_m b_m x^{ell m}`.
#[derive(Clone, Debug)]
pub struct SeriesN1<F: Field> {
    pub ell: u32,
    pub big_c: Vec<Rational>,
    pub lambda: F,
    pub coeffs: Vec<F>,
    /// Power-basis coefficients of the symbol `p(r)` of `D'`.
    pub symbol: Vec<CycRat>,
}

/// Symbol of `D'` for the parameters whose constants are `big_c`.
pub fn rank_one_symbol(big_c: &[Rational], convention: &Convention) -> Result<Vec<CycRat>> {
    let ell = big_c.len() as u32;
    let c: Vec<ParamPoly> = c_for_big_c(big_c, convention)?
        .into_iter()
        .map(ParamPoly::constant)
        .collect();
    let params = DunklParams::with_values(1, ell, ParamPoly::zero(ell), c, convention.clone())?;
    let s = symbol(&dprime(&params)?, ell as i64)?;
    s.coefficients_in(Var::sym(0))
        .into_iter()
        .map(|p| {
            p.as_constant()
                .ok_or_else(|| Error::Domain(format!("symbol coefficient {} is not numeric", p)))
        })
        .collect()
}

fn eval_symbol(sym: &[CycRat], r: i64) -> CycRat {
    let ell = sym[0].ell();
    let x = CycRat::from_i64(ell, r);
    sym.iter().rev().fold(CycRat::zero(ell), |acc, c| acc.mul(&x).add(c))
}

/// `b_0 = 1`, `b_m = lambda^ell b_{m-1} / p(ell m)`.
pub fn series_n1<F: Field>(ell: u32, big_c: &[Rational], lambda: F, m_max: usize) -> Result<SeriesN1<F>> {
    if big_c.len() != ell as usize {
        return Err(Error::Dimension(format!("C must have length {}", ell)));
    }
    let sym = rank_one_symbol(big_c, &Convention::calibrated())?;
    let mut lam_l = F::one(ell);
    for _ in 0..ell {
        lam_l = lam_l.mul(&lambda);
    }
    let mut coeffs = vec![F::one(ell)];
    for m in 1..=m_max {
        let p = eval_symbol(&sym, (ell as usize * m) as i64);
        if p.is_zero() {
            return Err(Error::Resonance { m });
        }
        let b = lam_l
            .mul(&coeffs[m - 1])
            .div(&F::from_cyc(&p))
            .ok_or(Error::DivisionByZero)?;
        coeffs.push(b);
    }
    Ok(SeriesN1 {
        ell,
        big_c: big_c.to_vec(),
        lambda,
        coeffs,
        symbol: sym,
    })
}

impl<F: Field> SeriesN1<F> {
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Bound on `sum_{m > M} |b_m x^{ell m}|` if the ratio test applies past `M`.
    fn tail_bound(&self, x: Complex64, m: usize, term_m: f64) -> Option<f64> {
        let ell = self.ell as i32;
        // p(ell j) grows for j > M once ell (M+1) exceeds every root
        let roots_ok = (1..=4).all(|d| {
            let a = eval_symbol(&self.symbol, (self.ell as usize * (m + d)) as i64)
                .to_complex()
                .norm();
            let b = eval_symbol(&self.symbol, (self.ell as usize * (m + d + 1)) as i64)
                .to_complex()
                .norm();
            b >= a
        }) && self.symbol_roots_below(self.ell as f64 * (m + 1) as f64);
        if !roots_ok {
            return None;
        }
        let p = eval_symbol(&self.symbol, (self.ell as usize * (m + 1)) as i64)
            .to_complex()
            .norm();
        let rho = (self.lambda.to_complex() * x).norm().powi(ell) / p;
        if rho >= 1.0 {
            return None;
        }
        Some(term_m * rho / (1.0 - rho))
    }

    /// All real parts of the indicial roots lie below `bound` (roots are the
    /// kernel exponents, which are rational for rational `C`).
    fn symbol_roots_below(&self, bound: f64) -> bool {
        let ell = self.ell as i64;
        let mut partial = Rational::from_integer(0.into());
        for c in &self.big_c {
            partial += c;
            let a = -crate::scalars::rat_to_f64(&partial) * ell as f64;
            if a >= bound {
                return false;
            }
        }
        true
    }

    /// Value at `x` and a rigorous bound on the truncation error.
    pub fn eval(&self, x: Complex64, tol: f64) -> Result<(Complex64, f64)> {
        let y = x.powi(self.ell as i32);
        let mut acc = Complex64::new(0.0, 0.0);
        for b in self.coeffs.iter().rev() {
            acc = acc * y + b.to_complex();
        }
        if x.norm() == 0.0 {
            return Ok((acc, 0.0));
        }
        let m = self.truncation();
        let term = (self.coeffs[m].to_complex() * y.powu(m as u32)).norm();
        match self.tail_bound(x, m, term) {
            Some(t) if t <= tol * acc.norm().max(1e-300) || t <= tol => Ok((acc, t)),
            _ => Err(Error::TruncationInsufficient {
                suggested: self.suggest(x, tol),
            }),
        }
    }

    fn suggest(&self, x: Complex64, tol: f64) -> usize {
        let lam = self.lambda.to_complex();
        let z = (lam * x).norm().powi(self.ell as i32);
        let mut term = 1.0f64;
        let mut m = 0usize;
        while m < 100_000 {
            m += 1;
            let p = eval_symbol(&self.symbol, (self.ell as usize * m) as i64)
                .to_complex()
                .norm();
            term *= if p == 0.0 { 1.0 } else { z / p };
            if m > self.truncation() && term < tol * 1e-3 {
                break;
            }
        }
        m
    }
}

/// Value of the rank-one series, enlarging `M` until the tail bound is met.
pub fn eval_n1(ell: u32, big_c: &[Rational], lambda: Complex64, x: Complex64, tol: f64) -> Result<(Complex64, f64)> {
    let mut m = 40;
    loop {
        let s = series_n1(ell, big_c, lambda, m)?;
        match s.eval(x, tol) {
            Err(Error::TruncationInsufficient { suggested }) if suggested > m && suggested < 100_000 => m = suggested,
            other => return other,
        }
    }
}

/// Numeric Dunkl operators acting on Laurent polynomials over `F`.
pub struct NumericDunkl<F: Field> {
    pub n: usize,
    pub ell: u32,
    k: F,
    /// `(alpha_i^m, c_m / (eps^m - 1))` for each `i`.
    c_terms: Vec<Vec<(GroupElement, F)>>,
    /// `(s_ij alpha_i^m alpha_j^{-m}, j, m)` for each `i`.
    refl: Vec<Vec<(GroupElement, usize, i64)>>,
}

impl<F: Field> NumericDunkl<F> {
    pub fn new(n: usize, ell: u32, k: F, c: &[F], convention: &Convention) -> Result<Self> {
        if c.len() + 1 != ell as usize {
            return Err(Error::Dimension(format!("expected {} parameters c_m", ell - 1)));
        }
        let s = convention.alpha_action;
        let mut c_terms = Vec::new();
        let mut refl = Vec::new();
        for i in 0..n {
            let mut ct = Vec::new();
            for m in 1..ell as i64 {
                let d = F::root_of_unity(ell, m).sub(&F::one(ell));
                let coef = c[m as usize - 1].div(&d).ok_or(Error::DivisionByZero)?;
                ct.push((GroupElement::alpha(n, ell, i, m, s), coef));
            }
            c_terms.push(ct);
            let mut rt = Vec::new();
            for j in (0..n).filter(|j| *j != i) {
                for m in 0..ell as i64 {
                    let g = GroupElement::transposition(n, ell, i, j)
                        .compose(&GroupElement::alpha(n, ell, i, m, s))
                        .compose(&GroupElement::alpha(n, ell, j, -m, s));
                    rt.push((g, j, m));
                }
            }
            refl.push(rt);
        }
        Ok(NumericDunkl {
            n,
            ell,
            k,
            c_terms,
            refl,
        })
    }

    pub fn apply(&self, i: usize, f: &LaurentPoly<F>) -> Result<LaurentPoly<F>> {
        let mut out = f.derivative(i);
        if !self.k.is_zero() {
            for (g, j, m) in &self.refl[i] {
                let diff = f.act(g).sub(f);
                let q = diff
                    .divide_linear(i, *j, *m)
                    .ok_or_else(|| Error::InexactDivision(format!("reflection ({}, {}, {})", i, j, m)))?;
                out = out.add(&q.scale(&self.k));
            }
        }
        let mut shift = vec![0; self.n];
        shift[i] = -1;
        for (g, coef) in &self.c_terms[i] {
            if coef.is_zero() {
                continue;
            }
            let diff = f.act(g).sub(f);
            out = out.add(&diff.mul_monomial(&shift).scale(coef));
        }
        Ok(out)
    }

    /// `sum_i D_i^{power} f`.
    pub fn power_sum(&self, power: u32, f: &LaurentPoly<F>) -> Result<LaurentPoly<F>> {
        let mut out = LaurentPoly::zero(self.n, self.ell);
        for i in 0..self.n {
            let mut g = f.clone();
            for _ in 0..power {
                g = self.apply(i, &g)?;
            }
            out = out.add(&g);
        }
        Ok(out)
    }
}

/// `lambda` is regular: `lambda_i != 0` and `lambda_i^ell != lambda_j^ell`.
pub fn check_regular<F: Field>(ell: u32, lambda: &[F]) -> Result<()> {
    let pw: Vec<F> = lambda
        .iter()
        .map(|l| (0..ell).fold(F::one(ell), |acc, _| acc.mul(l)))
        .collect();
    let scale = pw.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
    let lam_scale = lambda.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
    for (i, l) in lambda.iter().enumerate() {
        if l.negligible(1e6 * lam_scale) {
            return Err(Error::Regularity(format!("lambda_{} = 0", i + 1)));
        }
        for j in i + 1..lambda.len() {
            if pw[i].sub(&pw[j]).negligible(1e6 * scale) {
                return Err(Error::Regularity(format!(
                    "lambda_{}^ell = lambda_{}^ell",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Graded expansion `f = sum_d f_{ell d}` of the Bessel function.
#[derive(Clone, Debug)]
pub struct InvariantExpansion<F: Field> {
    pub n: usize,
    pub ell: u32,
    pub lambda: Vec<F>,
    /// `components[d]` lists `(partition, coefficient)` for degree `ell d`.
    pub components: Vec<Vec<(Vec<u32>, F)>>,
    pub polys: Vec<LaurentPoly<F>>,
    /// Largest relative residual of the stacked equations `r <= n`.
    pub solve_residual: f64,
    /// Largest relative residual of the equations `r = n+1, n+2`.
    pub overdetermination_residual: f64,
}

/// Residual tolerance for floating solves.
pub const RESIDUAL_TOL: f64 = 1e-10;

fn relative_residual<F: Field>(diff: &LaurentPoly<F>, scale: f64) -> f64 {
    let d = diff.max_abs_coeff();
    if d == 0.0 {
        0.0
    } else {
        d / scale.max(1e-300)
    }
}

/// Gaussian elimination with full-rank check; returns the solution and the
/// number of independent rows found.
fn solve<F: Field>(mut rows: Vec<(Vec<F>, F)>, unknowns: usize, ell: u32) -> std::result::Result<Vec<F>, usize> {
    let scale = rows
        .iter()
        .flat_map(|(r, _)| r.iter().map(|v| v.magnitude()))
        .fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let best = (row..rows.len()).max_by(|a, b| rows[*a].0[col].magnitude().total_cmp(&rows[*b].0[col].magnitude()));
        let Some(best) = best else { break };
        if rows[best].0[col].negligible(scale) {
            continue;
        }
        rows.swap(row, best);
        let inv = rows[row].0[col].inv().expect("nonzero pivot");
        let (head, tail) = rows.split_at_mut(row + 1);
        let pivot = &head[row];
        for r in tail.iter_mut() {
            if r.0[col].is_zero() {
                continue;
            }
            let f = r.0[col].mul(&inv);
            for c in col..unknowns {
                r.0[c] = r.0[c].sub(&f.mul(&pivot.0[c]));
            }
            r.1 = r.1.sub(&f.mul(&pivot.1));
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < unknowns {
        return Err(pivots.len());
    }
    let mut x = vec![F::zero(ell); unknowns];
    for (r, &col) in pivots.iter().enumerate().rev() {
        let mut acc = rows[r].1.clone();
        for c in col + 1..unknowns {
            acc = acc.sub(&rows[r].0[c].mul(&x[c]));
        }
        x[col] = acc.div(&rows[r].0[col]).expect("nonzero pivot");
    }
    Ok(x)
}

/// Solve `D_{P_r} f = P_r(lambda) f` degree by degree up to degree `ell * d_max`.
pub fn series_multivariate<F: Field>(
    n: usize,
    ell: u32,
    k: F,
    c: &[F],
    lambda: &[F],
    d_max: u32,
    convention: &Convention,
) -> Result<InvariantExpansion<F>> {
    if lambda.len() != n {
        return Err(Error::Dimension(format!("lambda must have length {}", n)));
    }
    check_regular(ell, lambda)?;
    let dunkl = NumericDunkl::new(n, ell, k, c, convention)?;
    let power_sums: Vec<F> = (1..=n + 2)
        .map(|r| {
            lambda.iter().fold(F::zero(ell), |acc, l| {
                acc.add(&(0..ell as usize * r).fold(F::one(ell), |p, _| p.mul(l)))
            })
        })
        .collect();
    let mut polys = vec![LaurentPoly::one(n, ell)];
    let mut components = vec![vec![(Vec::new(), F::one(ell))]];
    let mut solve_residual = 0.0f64;
    let mut over_residual = 0.0f64;
    for d in 1..=d_max as usize {
        let basis_parts = partitions(d as u32, n);
        let basis: Vec<LaurentPoly<F>> = basis_parts
            .iter()
            .map(|p| monomial_symmetric(n, ell, p, ell as i32))
            .collect();
        let mut images: Vec<Vec<LaurentPoly<F>>> = Vec::new();
        for b in &basis {
            let mut per_r = Vec::new();
            for r in 1..=n.min(d) {
                per_r.push(dunkl.power_sum(ell * r as u32, b)?);
            }
            images.push(per_r);
        }
        let mut rows = Vec::new();
        let mut targets = Vec::new();
        for r in 1..=n.min(d) {
            let rhs = polys[d - r].scale(&power_sums[r - 1]);
            let mut keys: BTreeMap<Vec<i32>, ()> = BTreeMap::new();
            for img in &images {
                for (e, _) in img[r - 1].terms() {
                    keys.insert(e.clone(), ());
                }
            }
            for (e, _) in rhs.terms() {
                keys.insert(e.clone(), ());
            }
            for e in keys.keys() {
                let row: Vec<F> = images
                    .iter()
                    .map(|img| img[r - 1].coeff(e).cloned().unwrap_or_else(|| F::zero(ell)))
                    .collect();
                let b = rhs.coeff(e).cloned().unwrap_or_else(|| F::zero(ell));
                rows.push((row, b));
            }
            targets.push(rhs);
        }
        let u = solve(rows, basis.len(), ell).map_err(|rank| Error::RankDeficient {
            degree: ell as usize * d,
            rank,
            unknowns: basis.len(),
        })?;
        let mut f = LaurentPoly::zero(n, ell);
        for (b, ui) in basis.iter().zip(&u) {
            f = f.add(&b.scale(ui));
        }
        // re-check every stacked equation
        for r in 1..=n.min(d) {
            let mut lhs = LaurentPoly::zero(n, ell);
            for (img, ui) in images.iter().zip(&u) {
                lhs = lhs.add(&img[r - 1].scale(ui));
            }
            let scale = lhs.max_abs_coeff().max(targets[r - 1].max_abs_coeff());
            solve_residual = solve_residual.max(relative_residual(&lhs.sub(&targets[r - 1]), scale));
        }
        polys.push(f);
        components.push(basis_parts.into_iter().zip(u).collect());
        for r in n + 1..=n + 2 {
            if r > d {
                continue;
            }
            let lhs = dunkl.power_sum(ell * r as u32, &polys[d])?;
            let rhs = polys[d - r].scale(&power_sums[r - 1]);
            let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
            over_residual = over_residual.max(relative_residual(&lhs.sub(&rhs), scale));
        }
    }
    if solve_residual > RESIDUAL_TOL {
        return Err(Error::ResidualTooLarge {
            residual: solve_residual,
            tolerance: RESIDUAL_TOL,
            context: "stacked eigen-equations".into(),
        });
    }
    if over_residual > RESIDUAL_TOL {
        return Err(Error::ResidualTooLarge {
            residual: over_residual,
            tolerance: RESIDUAL_TOL,
            context: "overdetermination equations".into(),
        });
    }
    Ok(InvariantExpansion {
        n,
        ell,
        lambda: lambda.to_vec(),
        components,
        polys,
        solve_residual,
        overdetermination_residual: over_residual,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Tolerance of the `S_n`-invariance assertion.
pub const SYMMETRY_TOL: f64 = 1e-10;

impl<F: Field> InvariantExpansion<F> {
    pub fn degree_max(&self) -> usize {
        self.polys.len() - 1
    }

    fn raw_eval(&self, x: &[Complex64]) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut last = 0.0;
        for p in &self.polys {
            let v = p.eval_complex(x);
            acc += v;
            last = v.norm();
        }
        (acc, last)
    }

    /// Value at `x`; fails when the last graded piece exceeds `tol` relative
    /// to the value, and asserts permutation invariance.
    pub fn eval(&self, x: &[Complex64], tol: f64) -> Result<Complex64> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!("x must have length {}", self.n)));
        }
        let (v, last) = self.raw_eval(x);
        if last > tol * v.norm().max(1.0) {
            let growth = if last > 0.0 {
                (last / (tol * v.norm().max(1.0))).log10().ceil() as usize
            } else {
                0
            };
            return Err(Error::TruncationInsufficient {
                suggested: self.degree_max() + 4 * growth.max(1),
            });
        }
        for perm in permutations(self.n) {
            let y: Vec<Complex64> = perm.iter().map(|i| x[*i]).collect();
            let (w, _) = self.raw_eval(&y);
            if (w - v).norm() > SYMMETRY_TOL * v.norm() {
                return Err(Error::ContractViolation(format!(
                    "value changes under permutation {:?}: {} vs {}",
                    perm, v, w
                )));
            }
        }
        Ok(v)
    }

    /// Coefficient table with columns `degree,partition,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,partition,re,im\n");
        for (d, comp) in self.components.iter().enumerate() {
            for (part, c) in comp {
                let z = c.to_complex();
                let p: Vec<String> = part.iter().map(|v| v.to_string()).collect();
                s.push_str(&format!(
                    "{},{},{:.17e},{:.17e}\n",
                    d * self.ell as usize,
                    p.join(" "),
                    z.re,
                    z.im
                ));
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRecord {
    pub x: Vec<f64>,
    pub re: f64,
    pub im: f64,
}
