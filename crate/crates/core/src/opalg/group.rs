use crate::scalars::Ring;
use std::fmt;

/// Element of `Gamma_n = S_n x (Z/ell)^n`, stored as the ring automorphism
/// `x_i -> zeta^{twist_i} x_{perm(i)}` of the polynomial ring.
///
/// Composition follows operator order: `(g * h)(p) = g(h(p))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    ell: u32,
    perm: Vec<u8>,
    twist: Vec<u32>,
}

impl GroupElement {
    pub fn identity(n: usize, ell: u32) -> Self {
        GroupElement {
            ell,
            perm: (0..n as u8).collect(),
            twist: vec![0; n],
        }
    }

    /// `alpha_i^power` acting by `x_i -> zeta^{sign * power} x_i` (0-based `i`).
    pub fn alpha(n: usize, ell: u32, i: usize, power: i64, sign: i8) -> Self {
        let mut g = Self::identity(n, ell);
        g.twist[i] = (power * sign as i64).rem_euclid(ell as i64) as u32;
        g
    }

    /// The transposition `s_ij` (0-based indices).
    pub fn transposition(n: usize, ell: u32, i: usize, j: usize) -> Self {
        let mut g = Self::identity(n, ell);
        g.perm.swap(i, j);
        g
    }

    pub fn from_parts(ell: u32, perm: Vec<u8>, twist: Vec<u32>) -> Self {
        let twist = twist.into_iter().map(|w| w % ell).collect();
        GroupElement { ell, perm, twist }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn twist(&self) -> &[u32] {
        &self.twist
    }

    pub fn is_identity(&self) -> bool {
        self.twist.iter().all(|w| *w == 0) && self.perm.iter().enumerate().all(|(i, p)| *p as usize == i)
    }

    pub fn compose(&self, h: &GroupElement) -> GroupElement {
        let n = self.n();
        let mut perm = vec![0u8; n];
        let mut twist = vec![0u32; n];
        for i in 0..n {
            let hi = h.perm[i] as usize;
            perm[i] = self.perm[hi];
            twist[i] = (h.twist[i] + self.twist[hi]) % self.ell;
        }
        GroupElement {
            ell: self.ell,
            perm,
            twist,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let n = self.n();
        let mut perm = vec![0u8; n];
        let mut twist = vec![0u32; n];
        // g(x_i) = z^{w_i} x_{p(i)}  =>  g^{-1}(x_{p(i)}) = z^{-w_i} x_i
        for i in 0..n {
            let pi = self.perm[i] as usize;
            perm[pi] = i as u8;
            twist[pi] = (self.ell - self.twist[i] % self.ell) % self.ell;
        }
        GroupElement {
            ell: self.ell,
            perm,
            twist,
        }
    }

    /// Image of the monomial `x^e`: returns `(zeta power, new exponents)`.
    pub fn act_on_exponents(&self, e: &[i32]) -> (i64, Vec<i32>) {
        let mut out = vec![0i32; e.len()];
        let mut zp = 0i64;
        for i in 0..e.len() {
            out[self.perm[i] as usize] = e[i];
            zp += self.twist[i] as i64 * e[i] as i64;
        }
        (zp.rem_euclid(self.ell as i64), out)
    }

    /// All elements of `Gamma_n`.
    pub fn enumerate(n: usize, ell: u32) -> Vec<GroupElement> {
        let mut perms: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for v in 0..n as u8 {
                    if !p.contains(&v) {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::new();
        let total = (ell as usize).pow(n as u32);
        for p in perms {
            for code in 0..total {
                let mut c = code;
                let twist = (0..n)
                    .map(|_| {
                        let w = (c % ell as usize) as u32;
                        c /= ell as usize;
                        w
                    })
                    .collect();
                out.push(GroupElement {
                    ell,
                    perm: p.clone(),
                    twist,
                });
            }
        }
        out
    }

    /// Scalar `u` with `g d_i g^{-1} = u * d_{perm(i)}`.
    pub fn derivative_factor<R: Ring>(&self, i: usize) -> R {
        R::root_of_unity(self.ell, -(self.twist[i] as i64))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let p: Vec<String> = self.perm.iter().map(|v| (v + 1).to_string()).collect();
        let w: Vec<String> = self.twist.iter().map(|v| v.to_string()).collect();
        write!(f, "g[{}|{}]", p.join(""), w.join(","))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_rule() {
        // s_ij alpha_i s_ij = alpha_j
        let (n, ell) = (3, 4);
        let s = GroupElement::transposition(n, ell, 0, 2);
        let a0 = GroupElement::alpha(n, ell, 0, 3, 1);
        let a2 = GroupElement::alpha(n, ell, 2, 3, 1);
        assert_eq!(s.compose(&a0).compose(&s), a2);
        let a1 = GroupElement::alpha(n, ell, 1, 1, 1);
        assert_eq!(s.compose(&a1).compose(&s), a1);
    }

    #[test]
    fn order_and_inverse() {
        let all = GroupElement::enumerate(2, 3);
        assert_eq!(all.len(), 18);
        for g in &all {
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.inverse().compose(g).is_identity());
        }
        let a = GroupElement::alpha(2, 3, 0, 1, 1);
        assert!(a.compose(&a).compose(&a).is_identity());
    }

    #[test]
    fn composition_is_associative() {
        let all = GroupElement::enumerate(2, 2);
        for a in &all {
            for b in &all {
                for c in &all {
                    assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
                }
            }
        }
    }
}
