//! Dense univariate polynomials over `F_q` (the ring `A = F_q[t]`).

use std::fmt;

use super::field::{Fq, FqElem};
use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// A polynomial in `t`, coefficients from the constant term up.
///
/// The coefficient vector never has a trailing zero; the zero polynomial is
/// the empty vector and has degree `None` (minus infinity).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FqElem::ONE] }
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![FqElem::ZERO; k + 1];
        coeffs[k] = FqElem::ONE;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    pub fn leading(&self) -> Option<FqElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FqElem::ONE)
    }
}

/// Arithmetic context for `F_q[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: Fq,
}

impl PolyRing {
    pub fn new(field: Fq) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// The variable `t`.
    pub fn t(&self) -> Poly {
        Poly::monomial(1)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = self.field.add(*c, s);
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|&c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.sub(a.coeff(i), b.coeff(i))).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, a: &Poly, c: FqElem) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect() }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FqElem::ZERO; k];
        coeffs.extend_from_slice(&a.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        if a.coeffs.len() == 1 {
            return self.scale(b, a.coeffs[0]);
        }
        if b.coeffs.len() == 1 {
            return self.scale(a, b.coeffs[0]);
        }
        let n = a.coeffs.len() + b.coeffs.len() - 1;
        if self.field.degree() == 1 && self.field.p() < (1 << 16) {
            // Prime field: accumulate in u64 and reduce once. Each product is
            // below 2^32, so up to 2^32 of them fit.
            let p = self.field.p() as u64;
            let mut acc = vec![0u64; n];
            for (i, &x) in a.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let x = x.0 as u64;
                for (slot, &y) in acc[i..].iter_mut().zip(&b.coeffs) {
                    *slot += x * y.0 as u64;
                }
            }
            return Poly::from_coeffs(acc.into_iter().map(|v| FqElem((v % p) as u32)).collect());
        }
        let mut out = vec![FqElem::ZERO; n];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (slot, &y) in out[i..].iter_mut().zip(&b.coeffs) {
                *slot = self.field.add(*slot, self.field.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn square(&self, a: &Poly) -> Poly {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// Euclidean division `a = quo * b + rem` with `deg rem < deg b`.
    pub fn div_rem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(MzvError::DivisionByZero)?;
        let Some(da) = a.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if da < db {
            return Ok((Poly::zero(), a.clone()));
        }
        let lead_inv = self.field.inv(b.coeffs[db])?;
        let mut rem = a.coeffs.clone();
        let mut quo = vec![FqElem::ZERO; da - db + 1];
        for k in (0..=da - db).rev() {
            let c = rem[k + db];
            if c.is_zero() {
                continue;
            }
            let factor = self.field.mul(c, lead_inv);
            quo[k] = factor;
            let neg = self.field.neg(factor);
            for (slot, &y) in rem[k..k + db + 1].iter_mut().zip(&b.coeffs) {
                *slot = self.field.add(*slot, self.field.mul(neg, y));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let db = b.degree().ok_or(MzvError::DivisionByZero)?;
        if a.degree().is_none_or(|da| da < db) {
            return Ok(a.clone());
        }
        if b.is_monic() {
            return Ok(self.rem_monic(a, b));
        }
        Ok(self.div_rem(a, b)?.1)
    }

    // Remainder by a monic divisor without computing the quotient.
    fn rem_monic(&self, a: &Poly, b: &Poly) -> Poly {
        let db = b.coeffs.len() - 1;
        let mut rem = a.coeffs.clone();
        let k = &self.field;
        for top in (db..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let neg = k.neg(c);
            let base = top - db;
            for (slot, &y) in rem[base..top].iter_mut().zip(&b.coeffs[..db]) {
                *slot = k.add(*slot, k.mul(neg, y));
            }
            rem[top] = FqElem::ZERO;
        }
        rem.truncate(db);
        Poly::from_coeffs(rem)
    }

    /// Exact quotient; errors if `b` does not divide `a`.
    pub fn exact_div(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(a, b)?;
        if !r.is_zero() {
            return Err(MzvError::InvalidArgument(format!(
                "{} does not divide {}",
                self.format(b),
                self.format(a)
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, b: &Poly, a: &Poly) -> bool {
        self.rem(a, b).is_ok_and(|r| r.is_zero())
    }

    /// Scales a nonzero polynomial to be monic; zero stays zero.
    pub fn monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            None => Poly::zero(),
            Some(l) if l == FqElem::ONE => a.clone(),
            Some(l) => self.scale(a, self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns `(g, s, u)` with `s*a + u*b = g = gcd(a, b)` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut u0, mut u1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let u = self.sub(&u0, &self.mul(&q, &u1));
            u0 = std::mem::replace(&mut u1, u);
        }
        match r0.leading() {
            None => (Poly::zero(), Poly::zero(), Poly::zero()),
            Some(l) => {
                let li = self.field.inv(l).expect("nonzero");
                (self.scale(&r0, li), self.scale(&s0, li), self.scale(&u0, li))
            }
        }
    }

    pub fn mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, a: &Poly, mut e: u64, m: &Poly) -> Poly {
        let mut acc = self.rem(&Poly::one(), m).expect("nonzero modulus");
        let mut base = self.rem(a, m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly, m: &Poly) -> Result<Poly> {
        let a = self.rem(a, m)?;
        let (g, s, _) = self.ext_gcd(&a, m);
        if !g.is_one() {
            return Err(MzvError::NotInvertible(self.format(m)));
        }
        self.rem(&s, m)
    }

    /// Ben-Or irreducibility test: `gcd(t^(q^i) - t, f) = 1` for `i <= deg f / 2`.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let Some(n) = f.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic(f);
        let t = self.t();
        let mut h = self.rem(&t, &f).expect("nonzero");
        for _ in 1..=n / 2 {
            h = self.pow_mod(&h, self.q() as u64, &f);
            let g = self.gcd(&self.sub(&h, &t), &f);
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// The `q^d` monic polynomials of degree `d`, counting the coefficient
    /// vector `(c_0, .., c_{d-1})` in base `q` with `c_0` least significant.
    pub fn monics(&self, d: usize) -> Monics {
        Monics { q: self.q(), d, coeffs: vec![FqElem::ZERO; d], done: false }
    }

    /// Monic irreducible polynomials of exact degree `d`, in enumeration order.
    pub fn irreducibles(&self, d: usize) -> Vec<Poly> {
        if d == 0 {
            return Vec::new();
        }
        self.monics(d).filter(|f| self.is_irreducible(f)).collect()
    }

    /// Renders `a` in the literal syntax accepted by [`super::parse::parse_poly`].
    pub fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let cs = self.field.format_elem(c);
            parts.push(if i == 0 {
                cs
            } else if c == FqElem::ONE {
                mono
            } else if cs.contains('+') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.join("+")
    }
}

/// Iterator over the monic polynomials of a fixed degree.
pub struct Monics {
    q: u32,
    d: usize,
    coeffs: Vec<FqElem>,
    done: bool,
}

impl Iterator for Monics {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        let mut c = self.coeffs.clone();
        c.push(FqElem::ONE);
        let out = Poly { coeffs: c };
        // advance the base-q counter
        let mut i = 0;
        loop {
            if i == self.d {
                self.done = true;
                break;
            }
            let next = self.coeffs[i].0 + 1;
            if next < self.q {
                self.coeffs[i] = FqElem(next);
                break;
            }
            self.coeffs[i] = FqElem::ZERO;
            i += 1;
        }
        Some(out)
    }
}

impl fmt::Display for Poly {
    // Context-free rendering; use `PolyRing::format` for field-aware output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.coeffs.iter().map(|c| c.0.to_string()).collect();
        write!(f, "[{}]", idx.join(","))
    }
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::add(self, a, b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        PolyRing::neg(self, a)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::sub(self, a, b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> Poly {
        Poly::constant(self.field.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.field.p() as u64
    }
    fn format(&self, a: &Poly) -> String {
        PolyRing::format(self, a)
    }
    fn describe(&self) -> String {
        format!("F_{}[t]", self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(Fq::new(FieldSpec::with_q(q).unwrap()))
    }

    fn p(r: &PolyRing, c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| r.field().elem(x).unwrap()).collect())
    }

    #[test]
    fn division_identity() {
        let r = ring(3);
        let a = p(&r, &[1, 2, 0, 1, 2]);
        let b = p(&r, &[2, 1, 1]);
        let (q, rem) = r.div_rem(&a, &b).unwrap();
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.degree().unwrap() < 2);
        assert!(r.div_rem(&a, &Poly::zero()).is_err());
    }

    #[test]
    fn gcd_and_bezout() {
        let r = ring(2);
        // t^2 + t and t^3 + t^2 share t(t+1)
        let a = p(&r, &[0, 1, 1]);
        let b = p(&r, &[0, 0, 1, 1]);
        assert_eq!(r.gcd(&a, &b), a);
        let (g, s, u) = r.ext_gcd(&a, &b);
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&u, &b)), g);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree d over F_q
        let expected = [(2u64, vec![2usize, 1, 2, 3, 6]), (3, vec![3, 3, 8, 18]), (4, vec![4, 6, 20])];
        for (q, counts) in expected {
            let r = ring(q);
            for (i, &c) in counts.iter().enumerate() {
                assert_eq!(r.irreducibles(i + 1).len(), c, "q={q} d={}", i + 1);
            }
        }
    }

    #[test]
    fn monic_enumeration_order() {
        let r = ring(2);
        let all: Vec<String> = r.monics(2).map(|f| r.format(&f)).collect();
        assert_eq!(all, vec!["t^2", "t^2+1", "t^2+t", "t^2+t+1"]);
        assert_eq!(r.monics(0).count(), 1);
    }

    #[test]
    fn formatting_over_extension_field() {
        let r = ring(4);
        let a = r.field().generator();
        let a1 = r.field().add(a, FqElem::ONE);
        let f = Poly::from_coeffs(vec![FqElem::ONE, a, a1, FqElem::ONE]);
        assert_eq!(r.format(&f), "t^3+(a+1)*t^2+a*t+1");
    }
}
