//! Integral formulas for the Bessel function: a product trapezoidal rule on
//! the torus for `n = 1` and Haar Monte Carlo over `U(n)^ell` for `n >= 2`.

use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::f64::consts::PI;

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadEstimate {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub stderr: f64,
    pub samples_or_nodes: u64,
    pub seed: Option<u64>,
}

/// Uniform product grid on `[0,1)^ell` with `nodes` points per circle.
#[derive(Clone, Debug)]
pub struct TorusRule {
    pub ell: usize,
    pub nodes: usize,
}

impl TorusRule {
    pub fn new(ell: usize, nodes: usize) -> Self {
        TorusRule { ell, nodes }
    }

    /// Mean of `f(a)` over grid indices `a`, where `phi_j = a_j / nodes`.
    pub fn mean(&self, f: impl Fn(&[usize]) -> Complex64 + Sync) -> Complex64 {
        let n = self.nodes;
        let total = n.pow(self.ell as u32);
        let sums: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|first| {
                let inner = total / n;
                let mut idx = vec![0usize; self.ell];
                let mut acc = Vec::with_capacity(inner);
                for mut r in 0..inner {
                    idx[0] = first;
                    for slot in idx.iter_mut().skip(1) {
                        *slot = r % n;
                        r /= n;
                    }
                    acc.push(f(&idx));
                }
                pairwise_sum(&acc)
            })
            .collect();
        pairwise_sum(&sums) / total as f64
    }
}

pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn unit_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

fn check_c(c: &[i64]) -> Result<()> {
    if c.is_empty() {
        return Err(Error::Dimension("C must be nonempty".into()));
    }
    if c.iter().sum::<i64>() != 0 {
        return Err(Error::Domain(format!("C = {:?} does not sum to zero", c)));
    }
    Ok(())
}

/// `t = sum_s s C_s`.
pub fn t_of(c: &[i64]) -> i64 {
    c.iter().enumerate().map(|(s, v)| s as i64 * v).sum()
}

/// Lowest-order lattice exponents `n_j` of the Taylor expansion at `x = 0`:
/// `n_j = d_j - min d` with `d_j = sum_{s>j} C_s`.
pub fn leading_exponents(c: &[i64]) -> Vec<u64> {
    let d: Vec<i64> = (0..c.len()).map(|j| c[j + 1..].iter().sum()).collect();
    let lo = *d.iter().min().unwrap_or(&0);
    d.iter().map(|v| (v - lo) as u64).collect()
}

/// Normalization applied to the torus integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// `t! / (lambda x)^t`.
    Factorial,
    /// `prod_j n_j! / (lambda x)^{sum n_j}` with the leading exponents.
    LeadingTerm,
    /// No normalization.
    None,
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// The unnormalized torus integral of
/// `exp(sum_j 2 pi i phi_j C_j + e^{2 pi i (phi_j - phi_{j+1})} lambda x)`.
pub fn torus_integral(c: &[i64], lambda: Complex64, x: f64, nodes: usize) -> Result<Complex64> {
    check_c(c)?;
    let ell = c.len();
    let w = unit_table(nodes);
    let z = lambda * x;
    let rule = TorusRule::new(ell, nodes);
    Ok(rule.mean(|a| {
        let mut phase = 0i64;
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..ell {
            phase += c[j] * a[j] as i64;
            let next = a[(j + 1) % ell];
            s += w[(a[j] + nodes - next) % nodes];
        }
        (z * s).exp() * w[phase.rem_euclid(nodes as i64) as usize]
    }))
}

/// Normalized torus quadrature for the rank-one Bessel function.
pub fn torus_bessel_n1_with(
    c: &[i64],
    lambda: Complex64,
    x: f64,
    nodes: usize,
    norm: Normalization,
) -> Result<QuadEstimate> {
    check_c(c)?;
    let t = t_of(c);
    if t < 0 {
        return Err(Error::Domain(format!("t = {} is negative", t)));
    }
    let z = lambda * x;
    let (order, scale) = match norm {
        Normalization::Factorial => (t as u64, factorial(t as u64)),
        Normalization::LeadingTerm => {
            let e = leading_exponents(c);
            (e.iter().sum(), e.iter().map(|v| factorial(*v)).product())
        }
        Normalization::None => (0, 1.0),
    };
    if z.norm() == 0.0 && order > 0 {
        return Err(Error::Domain("lambda x = 0 with t > 0; use the series value 1".into()));
    }
    let integral = torus_integral(c, lambda, x, nodes)?;
    Ok(QuadEstimate {
        value: integral * scale / z.powu(order as u32),
        stderr: 0.0,
        samples_or_nodes: (nodes as u64).pow(c.len() as u32),
        seed: None,
    })
}

/// Torus quadrature with the `t! / (lambda x)^t` normalization.
pub fn torus_bessel_n1(c: &[i64], lambda: Complex64, x: f64, nodes: usize) -> Result<QuadEstimate> {
    torus_bessel_n1_with(c, lambda, x, nodes, Normalization::Factorial)
}

/// `d^s/dx^s` at `x = 0` of the unnormalized integral, i.e. the torus
/// integral of `e^{2 pi i (C, phi)} (lambda sum_j z_j)^s`.
pub fn taylor_derivative(c: &[i64], lambda: Complex64, s: u32, nodes: usize) -> Result<Complex64> {
    check_c(c)?;
    let ell = c.len();
    let w = unit_table(nodes);
    Ok(TorusRule::new(ell, nodes).mean(|a| {
        let mut phase = 0i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..ell {
            phase += c[j] * a[j] as i64;
            sum += w[(a[j] + nodes - a[(j + 1) % ell]) % nodes];
        }
        (lambda * sum).powu(s) * w[phase.rem_euclid(nodes as i64) as usize]
    }))
}

/// Relative size below which a Taylor coefficient counts as zero.
pub const VANISHING_TOL: f64 = 1e-9;

/// First `s` for which the `s`-th derivative at `x = 0` is nonzero.
pub fn vanishing_order(c: &[i64], lambda: Complex64, nodes: usize) -> Result<u32> {
    check_c(c)?;
    let max_order = 8 * c.len() as u32 + c.iter().map(|v| v.unsigned_abs() as u32).sum::<u32>() * c.len() as u32;
    for s in 0..=max_order {
        // the s-th term is a trigonometric polynomial of degree <= s + |C|
        let need = 2 * (s as usize + c.iter().map(|v| v.unsigned_abs() as usize).sum::<usize>()) + 1;
        let v = taylor_derivative(c, lambda, s, nodes.max(need))?;
        let scale = (c.len() as f64 * lambda.norm()).powi(s as i32).max(1.0);
        if v.norm() > VANISHING_TOL * scale {
            return Ok(s);
        }
    }
    Err(Error::Domain(format!(
        "no nonvanishing derivative up to order {}",
        max_order
    )))
}

/// Haar-distributed unitary matrices, deterministic in `(seed, stream)`.
pub struct HaarSampler {
    pub n: usize,
    rng: ChaCha8Rng,
}

impl HaarSampler {
    pub fn new(n: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        HaarSampler { n, rng }
    }

    /// QR of a complex Gaussian matrix with the phases of `diag(R)` removed.
    pub fn sample(&mut self) -> DMatrix<Complex64> {
        let n = self.n;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = DMatrix::from_fn(n, n, |_, _| {
            let re: f64 = StandardNormal.sample(&mut self.rng);
            let im: f64 = StandardNormal.sample(&mut self.rng);
            Complex64::new(re * h, im * h)
        });
        let qr = z.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..n {
            let d = r[(j, j)];
            let ph = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..n {
                q[(i, j)] *= ph;
            }
        }
        q
    }
}

/// One Haar unitary for `(seed, draw)`.
pub fn haar_unitary(n: usize, seed: u64, draw: u64) -> DMatrix<Complex64> {
    HaarSampler::new(n, seed, draw).sample()
}

/// Coefficient of `(y_1...y_n)^k` in `prod_j (sum_i g_ij y_i)^k`.
pub fn m_k(g: &DMatrix<Complex64>, k: u32) -> Complex64 {
    let n = g.nrows();
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let base = k as usize + 1;
    let size = base.pow(n as u32);
    // dense coefficients indexed in mixed radix, exponents capped at k
    let mut poly = vec![Complex64::new(0.0, 0.0); size];
    poly[0] = Complex64::new(1.0, 0.0);
    let stride: Vec<usize> = (0..n).map(|i| base.pow(i as u32)).collect();
    for j in 0..n {
        for _ in 0..k {
            let mut next = vec![Complex64::new(0.0, 0.0); size];
            for (idx, c) in poly.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                for i in 0..n {
                    if (idx / stride[i]) % base < k as usize {
                        next[idx + stride[i]] += c * g[(i, j)];
                    }
                }
            }
            poly = next;
        }
    }
    poly[stride.iter().map(|s| s * k as usize).sum::<usize>()]
}

/// Brute-force permanent.
pub fn permanent(g: &DMatrix<Complex64>) -> Complex64 {
    let n = g.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        acc += (0..n).map(|i| g[(i, perm[i])]).product::<Complex64>();
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    acc
}

/// Problem data for the Monte Carlo integral.
#[derive(Clone, Debug, Serialize)]
pub struct McProblem {
    pub n: usize,
    pub ell: usize,
    pub k: u32,
    pub c: Vec<i64>,
    pub lambda: Vec<f64>,
    pub x: Vec<f64>,
}

impl McProblem {
    fn validate(&self) -> Result<()> {
        check_c(&self.c)?;
        if self.c.len() != self.ell {
            return Err(Error::Dimension(format!("C must have length {}", self.ell)));
        }
        if self.lambda.len() != self.n || self.x.len() != self.n {
            return Err(Error::Dimension(format!("lambda and x must have length {}", self.n)));
        }
        check_regular_real(self.ell, &self.lambda, "lambda")?;
        check_regular_real(self.ell, &self.x, "x")
    }

    /// `delta^{k+1} (prod x_i)^t` with `delta = prod_{i<j} (x_i^ell - x_j^ell)`.
    pub fn delta_kc(&self) -> f64 {
        let p = |v: f64| v.powi(self.ell as i32);
        let mut delta = 1.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                delta *= p(self.x[i]) - p(self.x[j]);
            }
        }
        let gamma: f64 = self.x.iter().product();
        delta.powi(self.k as i32 + 1) * gamma.powi(t_of(&self.c) as i32)
    }

    /// `exp(sum_i tr(g_i Lambda g_{i+1}^{-1} X)) m_k(g_0) prod_i det(g_i)^{C_i}`.
    pub fn integrand(&self, g: &[DMatrix<Complex64>]) -> Complex64 {
        let (n, ell) = (self.n, self.ell);
        let mut exponent = Complex64::new(0.0, 0.0);
        for i in 0..ell {
            let a = &g[i];
            let b = &g[(i + 1) % ell];
            // tr(A diag(lambda) B^* diag(x)) = sum_{p,q} A_pq lambda_q conj(B_pq) x_p
            for p in 0..n {
                for q in 0..n {
                    exponent += a[(p, q)] * self.lambda[q] * b[(p, q)].conj() * self.x[p];
                }
            }
        }
        let mut v = exponent.exp() * m_k(&g[0], self.k);
        for (gi, ci) in g.iter().zip(&self.c) {
            let d = gi.determinant();
            let d = if *ci < 0 { d.conj() } else { d };
            v *= d.powu(ci.unsigned_abs() as u32);
        }
        v
    }
}

fn check_regular_real(ell: usize, v: &[f64], name: &str) -> Result<()> {
    let scale = v
        .iter()
        .map(|a| a.abs())
        .fold(0.0, f64::max)
        .powi(ell as i32)
        .max(1e-300);
    for (i, a) in v.iter().enumerate() {
        if *a == 0.0 {
            return Err(Error::Regularity(format!("{}_{} = 0", name, i + 1)));
        }
        for b in &v[i + 1..] {
            if (a.powi(ell as i32) - b.powi(ell as i32)).abs() <= 1e-12 * scale {
                return Err(Error::Regularity(format!("{} is not regular: {:?}", name, v)));
            }
        }
    }
    Ok(())
}

/// Samples per deterministic stream; results do not depend on the worker count.
pub const CHUNK: u64 = 4096;

/// Monte Carlo mean of the integrand, without the division by `delta_{k,c}`.
pub fn mc_integral(problem: &McProblem, samples: u64, seed: u64) -> Result<QuadEstimate> {
    problem.validate()?;
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(Complex64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut sampler = HaarSampler::new(problem.n, seed, chunk);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut vals = Vec::with_capacity(count as usize);
            for _ in 0..count {
                let g: Vec<_> = (0..problem.ell).map(|_| sampler.sample()).collect();
                vals.push(problem.integrand(&g));
            }
            let sq: Vec<Complex64> = vals.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
            (pairwise_sum(&vals), pairwise_sum(&sq).re)
        })
        .collect();
    let sums: Vec<Complex64> = partial.iter().map(|p| p.0).collect();
    let sqs: Vec<Complex64> = partial.iter().map(|p| Complex64::new(p.1, 0.0)).collect();
    let nf = samples as f64;
    let mean = pairwise_sum(&sums) / nf;
    let var = ((pairwise_sum(&sqs).re / nf - mean.norm_sqr()) * nf / (nf - 1.0)).max(0.0);
    Ok(QuadEstimate {
        value: mean,
        stderr: (var / nf).sqrt(),
        samples_or_nodes: samples,
        seed: Some(seed),
    })
}

/// Monte Carlo integral divided by `delta_{k,c}(x)`.
pub fn mc_bessel(problem: &McProblem, samples: u64, seed: u64) -> Result<QuadEstimate> {
    let raw = mc_integral(problem, samples, seed)?;
    let d = problem.delta_kc();
    Ok(QuadEstimate {
        value: raw.value / d,
        stderr: raw.stderr / d.abs(),
        ..raw
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    #[serde(serialize_with = "ser_complex")]
    pub constant: Complex64,
    pub residuals: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub points: usize,
    pub pass: bool,
}

/// Fit `quad ~ constant * series` by weighted least squares and score the
/// residuals against `max(stderr, floor)`.
pub fn cross_check(series: &[Complex64], quad: &[QuadEstimate], floor: f64) -> Result<CrossCheckReport> {
    if series.len() != quad.len() || series.is_empty() {
        return Err(Error::Dimension(
            "series and quadrature lists must be nonempty and equal length".into(),
        ));
    }
    let sigma: Vec<f64> = quad.iter().map(|q| q.stderr.max(floor).max(1e-300)).collect();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for ((s, q), w) in series.iter().zip(quad).zip(&sigma) {
        num += s.conj() * q.value / (w * w);
        den += s.norm_sqr() / (w * w);
    }
    if den == 0.0 {
        return Err(Error::Domain("series values are all zero".into()));
    }
    let constant = num / den;
    let residuals: Vec<f64> = series
        .iter()
        .zip(quad)
        .map(|(s, q)| (q.value - constant * s).norm())
        .collect();
    let z_scores: Vec<f64> = residuals.iter().zip(&sigma).map(|(r, w)| r / w).collect();
    let pass = z_scores.iter().all(|z| *z < 3.0) && constant.norm().is_finite() && constant.norm() > 0.0;
    Ok(CrossCheckReport {
        constant,
        residuals,
        z_scores,
        points: series.len(),
        pass,
    })
}
