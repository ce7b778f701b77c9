//! Table-driven arithmetic in a small extension `F_{q^m}` of `F_q`.
//!
//! Evaluating a polynomial of `F_q[t]` at `alpha` in `F_{q^m}` is reduction
//! modulo the minimal polynomial of `alpha`, so the points of `F_{q^m}` give
//! cheap access to every prime of degree `m`.

use super::field::{Fq, FqElem};
use super::poly::{Poly, PolyRing};
use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// Largest extension handled with log tables.
pub const MAX_EXT_SIZE: u64 = 1 << 21;

#[derive(Clone, Debug)]
pub struct ExtField {
    base: Fq,
    m: usize,
    p: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.m == other.m && self.exp.get(1) == other.exp.get(1)
    }
}

impl ExtField {
    /// `F_{q^m} = F_q[x]/(P)` for the first monic irreducible `P` of degree `m`.
    pub fn new(base: Fq, m: usize) -> Result<Self> {
        let q = base.q() as u64;
        let size = q
            .checked_pow(m as u32)
            .filter(|&s| m >= 1 && s <= MAX_EXT_SIZE)
            .ok_or_else(|| MzvError::InvalidArgument(format!("extension of degree {m} over F_{q} too large for tables")))?;
        let ring = PolyRing::new(base.clone());
        let modulus = ring.monics(m).find(|f| ring.is_irreducible(f)).expect("irreducibles exist in every degree");
        let size = size as u32;
        let to_poly = |x: u32| {
            let mut c = Vec::with_capacity(m);
            let mut x = x;
            for _ in 0..m {
                c.push(base.elem(x % base.q()).expect("digit in range"));
                x /= base.q();
            }
            Poly::from_coeffs(c)
        };
        let to_index = |f: &Poly| (0..m).rev().fold(0u32, |acc, i| acc * base.q() + f.coeff(i).index());
        let order = size - 1;
        for g in 1..size {
            let gp = to_poly(g);
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = Poly::one();
            let mut primitive = true;
            for i in 0..order {
                let idx = to_index(&cur);
                if i > 0 && idx == 1 {
                    primitive = false;
                    break;
                }
                exp.push(idx);
                cur = ring.mul_mod(&cur, &gp, &modulus);
            }
            if !primitive {
                continue;
            }
            let mut log = vec![0u32; size as usize];
            for (i, &x) in exp.iter().enumerate() {
                log[x as usize] = i as u32;
            }
            return Ok(ExtField { p: base.p(), base, m, size, exp, log });
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.size as u64 - 1;
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
        self.exp[e as usize]
    }

    /// `a^e` for any integer `e`; `0^e` with `e < 0` is an error.
    pub fn pow_i(&self, a: u32, e: i64) -> Result<u32> {
        if a == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => Err(MzvError::DivisionByZero),
                std::cmp::Ordering::Equal => Ok(1),
                std::cmp::Ordering::Greater => Ok(0),
            };
        }
        let order = self.size as i64 - 1;
        let l = self.log[a as usize] as i64;
        let r = (l * e.rem_euclid(order)).rem_euclid(order);
        Ok(self.exp[r as usize])
    }

    /// Image of a base-field element.
    pub fn embed(&self, c: FqElem) -> u32 {
        c.index()
    }

    pub fn eval(&self, f: &Poly, alpha: u32) -> u32 {
        f.coeffs().iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, alpha), self.embed(c)))
    }

    /// One element from each Frobenius orbit of size exactly `m`; these are
    /// in bijection with the monic irreducibles of degree `m` over `F_q`.
    pub fn primitive_orbit_representatives(&self) -> Vec<u32> {
        let order = self.size as u64 - 1;
        let q = self.base.q() as u64;
        let mut out = Vec::new();
        for a in 1..self.size {
            let l = self.log[a as usize] as u64;
            let mut cur = l;
            let mut orbit_min = a;
            let mut len = 0;
            loop {
                cur = cur * q % order;
                len += 1;
                if cur == l {
                    break;
                }
                orbit_min = orbit_min.min(self.exp[cur as usize]);
            }
            if len == self.m && orbit_min == a {
                out.push(a);
            }
        }
        if self.m == 1 {
            // zero is the root of t itself
            out.insert(0, 0);
        }
        out
    }
}

impl Ring for ExtField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ExtField::add(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        ExtField::neg(self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ExtField::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_int(&self, n: i64) -> u32 {
        self.embed(self.base.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        format!("F_{}^{}", self.base.q(), self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;

    #[test]
    fn orbit_counts_match_irreducible_counts() {
        for (q, m) in [(2u64, 1usize), (2, 4), (2, 6), (3, 1), (3, 3), (4, 2), (4, 3), (9, 2)] {
            let base = Fq::new(FieldSpec::with_q(q).unwrap());
            let ext = ExtField::new(base.clone(), m).unwrap();
            let ring = PolyRing::new(base);
            assert_eq!(ext.primitive_orbit_representatives().len(), ring.irreducibles(m).len(), "q={q} m={m}");
        }
    }

    #[test]
    fn evaluation_detects_divisibility() {
        let base = Fq::new(FieldSpec::with_q(3).unwrap());
        let ring = PolyRing::new(base.clone());
        let ext = ExtField::new(base, 3).unwrap();
        let reps = ext.primitive_orbit_representatives();
        let primes = ring.irreducibles(3);
        // each representative is a root of exactly one cubic irreducible
        for &alpha in &reps {
            let roots: Vec<_> = primes.iter().filter(|f| ext.eval(f, alpha) == 0).collect();
            assert_eq!(roots.len(), 1);
        }
        // field axioms on a sample
        for a in 0..ext.size() {
            let b = (a * 7 + 3) % ext.size();
            assert_eq!(ext.add(ext.add(a, b), ext.neg(b)), a);
            if a != 0 {
                assert_eq!(ext.mul(a, ext.pow_i(a, -1).unwrap()), 1);
            }
        }
    }
}
