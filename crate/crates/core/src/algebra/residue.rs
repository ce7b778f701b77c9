//! Truncated `v`-adic arithmetic: the residue rings `A/(v^N)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::field::{Fq, FqElem};
use super::poly::{Poly, PolyRing};
use super::ratfn::RationalFn;
use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// A `v`-adic valuation, possibly only known up to the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Valuation {
    Finite(i64),
    /// The value vanishes modulo `v^N`.
    AtLeast(u32),
    /// The exact value zero.
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(n) => write!(f, "{n}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug)]
struct ResidueCtx {
    ring: PolyRing,
    v: Poly,
    n: u32,
    modulus: Poly,
}

/// The ring `A/(v^N)` for a monic irreducible `v`.
#[derive(Clone, Debug)]
pub struct ResidueRing(Arc<ResidueCtx>);

impl PartialEq for ResidueRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n == other.0.n && self.0.v == other.0.v && self.0.ring == other.0.ring)
    }
}

impl Eq for ResidueRing {}

/// An element of `A/(v^N)`; it remembers its ring so that mixing moduli is
/// detected rather than silently coerced.
#[derive(Clone, Debug)]
pub struct ResidueElem {
    ctx: ResidueRing,
    rep: Poly,
}

impl PartialEq for ResidueElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.rep == other.rep
    }
}

impl Eq for ResidueElem {}

impl ResidueElem {
    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl ResidueRing {
    /// Checks that `v` is monic irreducible and `n >= 1`.
    pub fn new(field: Fq, v: Poly, n: u32) -> Result<Self> {
        let ring = PolyRing::new(field);
        if !v.is_monic() || !ring.is_irreducible(&v) {
            return Err(MzvError::InvalidPrime(ring.format(&v)));
        }
        if n == 0 {
            return Err(MzvError::InvalidArgument("precision N must be at least 1".into()));
        }
        Ok(Self::new_unchecked(ring, v, n))
    }

    /// Skips the irreducibility test; `v` must be monic of positive degree.
    pub fn new_unchecked(ring: PolyRing, v: Poly, n: u32) -> Self {
        let modulus = ring.pow(&v, n as u64);
        ResidueRing(Arc::new(ResidueCtx { ring, v, n, modulus }))
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.0.ring
    }

    pub fn field(&self) -> &Fq {
        self.0.ring.field()
    }

    pub fn prime(&self) -> &Poly {
        &self.0.v
    }

    pub fn precision(&self) -> u32 {
        self.0.n
    }

    /// `v^N`.
    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    /// `N * deg v`, the `F_q`-dimension of the ring.
    pub fn dimension(&self) -> usize {
        self.0.modulus.degree().unwrap_or(0)
    }

    pub fn reduce(&self, a: &Poly) -> ResidueElem {
        let rep = self.0.ring.rem(a, &self.0.modulus).expect("nonzero modulus");
        ResidueElem { ctx: self.clone(), rep }
    }

    pub fn from_ratfn(&self, x: &RationalFn) -> Result<ResidueElem> {
        let num = self.reduce(x.num());
        let den = self.inv_poly(x.den())?;
        Ok(self.mul(&num, &den))
    }

    /// Inverse of a polynomial modulo `v^N`.
    pub fn inv_poly(&self, a: &Poly) -> Result<ResidueElem> {
        let r = &self.0.ring;
        let rep = r
            .inv_mod(a, &self.0.modulus)
            .map_err(|_| MzvError::NotInvertible(r.format(&self.0.v)))?;
        Ok(ResidueElem { ctx: self.clone(), rep })
    }

    pub fn inv(&self, a: &ResidueElem) -> Result<ResidueElem> {
        self.check(a)?;
        self.inv_poly(&a.rep)
    }

    fn check(&self, a: &ResidueElem) -> Result<()> {
        if a.ctx != *self {
            return Err(MzvError::MixedModulus(self.describe(), a.ctx.describe()));
        }
        Ok(())
    }

    pub fn try_add(&self, a: &ResidueElem, b: &ResidueElem) -> Result<ResidueElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(ResidueElem { ctx: self.clone(), rep: self.0.ring.add(&a.rep, &b.rep) })
    }

    pub fn try_mul(&self, a: &ResidueElem, b: &ResidueElem) -> Result<ResidueElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(ResidueElem { ctx: self.clone(), rep: self.0.ring.mul_mod(&a.rep, &b.rep, &self.0.modulus) })
    }

    pub fn scale(&self, a: &ResidueElem, c: FqElem) -> ResidueElem {
        ResidueElem { ctx: self.clone(), rep: self.0.ring.scale(&a.rep, c) }
    }

    /// Largest `k <= N` with `v^k | rep`; `AtLeast(N)` when `rep = 0`.
    pub fn valuation(&self, a: &ResidueElem) -> Valuation {
        if a.rep.is_zero() {
            return Valuation::AtLeast(self.0.n);
        }
        let r = &self.0.ring;
        let mut k = 0;
        let mut cur = a.rep.clone();
        loop {
            let (q, rem) = r.div_rem(&cur, &self.0.v).expect("nonzero prime");
            if !rem.is_zero() {
                return Valuation::Finite(k);
            }
            cur = q;
            k += 1;
        }
    }

    /// The `N * deg v` coefficients of the representative in the basis `t^i`.
    pub fn coords(&self, a: &ResidueElem) -> Vec<FqElem> {
        (0..self.dimension()).map(|i| a.rep.coeff(i)).collect()
    }

    /// Reduction to a lower precision `m <= N`.
    pub fn truncate(&self, a: &ResidueElem, m: u32) -> Result<ResidueElem> {
        if m == 0 || m > self.0.n {
            return Err(MzvError::InvalidArgument(format!("cannot reduce precision {} to {m}", self.0.n)));
        }
        let lower = ResidueRing::new_unchecked(self.0.ring.clone(), self.0.v.clone(), m);
        Ok(lower.reduce(&a.rep))
    }
}

impl Ring for ResidueRing {
    type Elem = ResidueElem;

    fn zero(&self) -> ResidueElem {
        ResidueElem { ctx: self.clone(), rep: Poly::zero() }
    }
    fn one(&self) -> ResidueElem {
        self.reduce(&Poly::one())
    }
    fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        self.try_add(a, b).unwrap_or_else(|e| panic!("{e}"))
    }
    fn neg(&self, a: &ResidueElem) -> ResidueElem {
        ResidueElem { ctx: self.clone(), rep: self.0.ring.neg(&a.rep) }
    }
    fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        self.try_mul(a, b).unwrap_or_else(|e| panic!("{e}"))
    }
    fn is_zero(&self, a: &ResidueElem) -> bool {
        a.rep.is_zero()
    }
    fn from_int(&self, n: i64) -> ResidueElem {
        self.reduce(&Poly::constant(self.field().from_i64(n)))
    }
    fn characteristic(&self) -> u64 {
        self.field().p() as u64
    }
    fn format(&self, a: &ResidueElem) -> String {
        self.0.ring.format(&a.rep)
    }
    fn describe(&self) -> String {
        let v = self.0.ring.format(&self.0.v);
        if self.0.n == 1 {
            format!("F_{}[t]/({v})", self.field().q())
        } else {
            format!("F_{}[t]/({v})^{}", self.field().q(), self.0.n)
        }
    }
}

/// Inverse of `a` modulo `v^n`.
pub fn poly_inv_mod(ring: &PolyRing, a: &Poly, v: &Poly, n: u32) -> Result<Poly> {
    let rr = ResidueRing::new(ring.field().clone(), v.clone(), n)?;
    Ok(rr.inv_poly(a)?.rep)
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
    fn inverse_examples() {
        let r = ring(2);
        let t = p(&r, &[0, 1]);
        assert_eq!(poly_inv_mod(&r, &p(&r, &[1, 1]), &t, 3).unwrap(), p(&r, &[1, 1, 1]));
        assert_eq!(poly_inv_mod(&r, &Poly::one(), &t, 5).unwrap(), Poly::one());
        let v = p(&r, &[1, 1, 1]);
        assert_eq!(poly_inv_mod(&r, &p(&r, &[0, 1, 1]), &v, 1).unwrap(), Poly::one());
        assert!(matches!(
            poly_inv_mod(&r, &p(&r, &[0, 0, 1]), &t, 2),
            Err(MzvError::NotInvertible(_))
        ));
        assert!(matches!(poly_inv_mod(&r, &t, &p(&r, &[1, 0, 1]), 2), Err(MzvError::InvalidPrime(_))));
    }

    #[test]
    fn valuation_of_zero_is_bounded_by_precision() {
        let r = ring(2);
        let rr = ResidueRing::new(r.field().clone(), p(&r, &[0, 1]), 4).unwrap();
        assert_eq!(rr.valuation(&rr.zero()), Valuation::AtLeast(4));
        assert_eq!(rr.valuation(&rr.reduce(&p(&r, &[0, 0, 1, 1]))), Valuation::Finite(2));
    }

    #[test]
    fn mixed_moduli_are_rejected() {
        let r = ring(2);
        let a = ResidueRing::new(r.field().clone(), p(&r, &[0, 1]), 2).unwrap();
        let b = ResidueRing::new(r.field().clone(), p(&r, &[0, 1]), 3).unwrap();
        let x = a.one();
        let y = b.one();
        assert!(matches!(a.try_add(&x, &y), Err(MzvError::MixedModulus(..))));
        assert!(matches!(a.try_mul(&x, &y), Err(MzvError::MixedModulus(..))));
    }
}
