use super::{rat_to_f64, Field, Rational, Ring};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic order must be positive");
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_int_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    debug_assert_eq!(lead, 1);
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let coef = rem[i + dd];
        q[i] = coef;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= coef * dj;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    q
}

struct FieldData {
    phi: usize,
    modulus: Vec<i64>,
    /// `x^j mod Phi_ell` for `0 <= j < ell`.
    powers: Vec<Vec<i64>>,
}

fn field_data(ell: u32) -> Arc<FieldData> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = cache.read().unwrap().get(&ell) {
        return d.clone();
    }
    let modulus = cyclotomic_polynomial(ell);
    let phi = modulus.len() - 1;
    let mut powers = Vec::with_capacity(ell as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..ell {
        powers.push(cur.clone());
        // multiply by x and reduce
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1];
        }
        for i in 0..phi {
            next[i] -= top * modulus[i];
        }
        cur = next;
    }
    let data = Arc::new(FieldData { phi, modulus, powers });
    cache.write().unwrap().insert(ell, data.clone());
    data
}

/// Element of the cyclotomic field `Q(zeta_ell)` stored as its reduced
/// residue modulo `Phi_ell` (coefficients of `1, zeta, ..., zeta^(phi-1)`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycRat {
    ell: u32,
    coeffs: Vec<Rational>,
}

impl CycRat {
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn from_coeffs(ell: u32, coeffs: Vec<Rational>) -> Self {
        let data = field_data(ell);
        let mut out = vec![Rational::zero(); data.phi];
        for (j, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in data.powers[j % ell as usize].iter().enumerate() {
                if *p != 0 {
                    out[i] += &c * Rational::from_integer(BigInt::from(*p));
                }
            }
        }
        CycRat { ell, coeffs: out }
    }

    pub fn rational(ell: u32, r: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); field_data(ell).phi];
        coeffs[0] = r;
        CycRat { ell, coeffs }
    }

    pub fn zeta_pow(ell: u32, power: i64) -> Self {
        let data = field_data(ell);
        let j = power.rem_euclid(ell as i64) as usize;
        CycRat {
            ell,
            coeffs: data.powers[j]
                .iter()
                .map(|c| Rational::from_integer(BigInt::from(*c)))
                .collect(),
        }
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycRat {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Re-embed into `Q(zeta_target)`; `ell` must divide `target`.
    pub fn embed(&self, target: u32) -> Self {
        assert!(
            target.is_multiple_of(self.ell),
            "cannot embed Q(zeta_{}) into Q(zeta_{})",
            self.ell,
            target
        );
        let step = (target / self.ell) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        CycRat::from_coeffs(target, poly)
    }
}

/// Reduce an integer polynomial in `zeta` modulo `Phi_ell`.
pub fn cyc_reduce(ell: u32, poly: &[i64]) -> CycRat {
    CycRat::from_coeffs(
        ell,
        poly.iter().map(|c| Rational::from_integer(BigInt::from(*c))).collect(),
    )
}

/// Multiplicative inverse in `Q(zeta_ell)` by the extended Euclidean algorithm
/// against `Phi_ell`.
pub fn cyc_invert(a: &CycRat) -> Result<CycRat> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let data = field_data(a.ell);
    let modulus: Vec<Rational> = data
        .modulus
        .iter()
        .map(|c| Rational::from_integer(BigInt::from(*c)))
        .collect();
    // invariant: s * a == r (mod Phi)
    let (mut r0, mut r1) = (modulus, trim(a.coeffs.clone()));
    let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
    while !(r1.len() == 1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        if r1.is_empty() {
            // a shares a factor with Phi: impossible for a nonzero residue
            return Err(Error::DivisionByZero);
        }
    }
    let inv_c = Rational::one() / &r1[0];
    let s: Vec<Rational> = s1.iter().map(|c| c * &inv_c).collect();
    Ok(CycRat::from_coeffs(a.ell, s))
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![Rational::zero(); rem.len() - db];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let coef = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &coef * bj;
        }
        q[shift] = coef;
        rem.pop();
        rem = trim(rem);
    }
    (trim(q), rem)
}

impl Ring for CycRat {
    fn zero(ell: u32) -> Self {
        CycRat::rational(ell, Rational::zero())
    }
    fn from_rational(ell: u32, r: &Rational) -> Self {
        CycRat::rational(ell, r.clone())
    }
    fn root_of_unity(ell: u32, power: i64) -> Self {
        CycRat::zeta_pow(ell, power)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ell, other.ell);
        CycRat {
            ell: self.ell,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ell, other.ell);
        CycRat {
            ell: self.ell,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ell, other.ell);
        let phi = self.coeffs.len();
        if phi == 1 {
            return CycRat {
                ell: self.ell,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut prod = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycRat::from_coeffs(self.ell, prod)
    }
    fn neg(&self) -> Self {
        CycRat {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Field for CycRat {
    fn inv(&self) -> Option<Self> {
        cyc_invert(self).ok()
    }
    fn from_cyc(c: &CycRat) -> Self {
        c.clone()
    }
    fn to_complex(&self) -> Complex64 {
        let z = Complex64::root_of_unity(self.ell, 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    }
}

impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match j {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if j == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "z^{}", j)?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn reduce_examples() {
        // zeta^2 = -1 - zeta for ell = 3
        assert_eq!(
            cyc_reduce(3, &[0, 0, 1]),
            CycRat::from_coeffs(3, vec![rat(-1, 1), rat(-1, 1)])
        );
        assert_eq!(cyc_reduce(2, &[0, 1]), CycRat::rational(2, rat(-1, 1)));
        assert!(cyc_reduce(4, &[0, 1, 0, 1]).is_zero());
    }

    #[test]
    fn invert_examples() {
        let z = CycRat::zeta_pow(3, 1);
        assert_eq!(cyc_invert(&z).unwrap(), cyc_reduce(3, &[-1, -1]));
        let em1 = CycRat::zeta_pow(2, 1).sub(&CycRat::one(2));
        assert_eq!(cyc_invert(&em1).unwrap(), CycRat::rational(2, rat(-1, 2)));
        let zm1 = CycRat::zeta_pow(3, 1).sub(&CycRat::one(3));
        let inv = cyc_invert(&zm1).unwrap();
        assert_eq!(inv.mul(&zm1), CycRat::one(3));
        assert_eq!(cyc_invert(&CycRat::zero(5)), Err(Error::DivisionByZero));
    }

    #[test]
    fn geometric_sums_vanish() {
        for ell in 2..=8u32 {
            for i in 1..ell as i64 {
                let mut acc = CycRat::zero(ell);
                for m in 0..ell as i64 {
                    acc = acc.add(&CycRat::zeta_pow(ell, m * i));
                }
                assert!(acc.is_zero(), "ell={ell} i={i}");
            }
            assert_eq!(CycRat::zeta_pow(ell, ell as i64), CycRat::one(ell));
        }
    }

    #[test]
    fn embedding_preserves_products() {
        let a = CycRat::from_coeffs(3, vec![rat(1, 2), rat(2, 1)]);
        let b = CycRat::from_coeffs(3, vec![rat(-3, 1), rat(1, 5)]);
        assert_eq!(a.mul(&b).embed(6), a.embed(6).mul(&b.embed(6)));
    }
}
