//! The rational function field `K = F_q(t)` in canonical form.

use super::field::{Fq, FqElem};
use super::poly::{Poly, PolyRing};
use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// `num / den` with `gcd(num, den) = 1` and `den` monic, so equality of
/// values is equality of representations. Zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFn { num: p, den: Poly::one() }
    }
}

/// Arithmetic context for `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionField {
    ring: PolyRing,
}

impl FunctionField {
    pub fn new(field: Fq) -> Self {
        FunctionField { ring: PolyRing::new(field) }
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Fq {
        self.ring.field()
    }

    /// Canonical form of `num / den`.
    pub fn normalize(&self, num: &Poly, den: &Poly) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(MzvError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFn { num: Poly::zero(), den: Poly::one() });
        }
        let r = &self.ring;
        let g = r.gcd(num, den);
        let (mut n, mut d) = if g.is_one() {
            (num.clone(), den.clone())
        } else {
            (r.exact_div(num, &g)?, r.exact_div(den, &g)?)
        };
        let lead = d.leading().expect("nonzero denominator");
        if lead != FqElem::ONE {
            let li = self.field().inv(lead)?;
            n = r.scale(&n, li);
            d = r.scale(&d, li);
        }
        Ok(RationalFn { num: n, den: d })
    }

    pub fn from_poly(&self, p: Poly) -> RationalFn {
        RationalFn::from_poly(p)
    }

    pub fn add(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let r = &self.ring;
        if a.den == b.den {
            let num = r.add(&a.num, &b.num);
            return self.normalize(&num, &a.den).expect("nonzero denominator");
        }
        // Henrici: with g = gcd(b, d), a/b + c/d = (a d' + c b') / (b' d)
        // where b = g b', d = g d'; only g can still share factors with the
        // numerator.
        let g = r.gcd(&a.den, &b.den);
        if g.is_one() {
            let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
            let den = r.mul(&a.den, &b.den);
            return RationalFn { num, den }.canonical_unchecked(self);
        }
        let bp = r.exact_div(&a.den, &g).expect("gcd divides");
        let dp = r.exact_div(&b.den, &g).expect("gcd divides");
        let num = r.add(&r.mul(&a.num, &dp), &r.mul(&b.num, &bp));
        if num.is_zero() {
            return RationalFn { num, den: Poly::one() };
        }
        let e = r.gcd(&num, &g);
        let (num, g) = if e.is_one() {
            (num, g)
        } else {
            (r.exact_div(&num, &e).expect("gcd divides"), r.exact_div(&g, &e).expect("gcd divides"))
        };
        let den = r.mul(&r.mul(&bp, &dp), &g);
        RationalFn { num, den }.canonical_unchecked(self)
    }

    pub fn neg(&self, a: &RationalFn) -> RationalFn {
        RationalFn { num: self.ring.neg(&a.num), den: a.den.clone() }
    }

    pub fn sub(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        if a.is_zero() || b.is_zero() {
            return RationalFn { num: Poly::zero(), den: Poly::one() };
        }
        let r = &self.ring;
        // cross-cancel before multiplying
        let g1 = r.gcd(&a.num, &b.den);
        let g2 = r.gcd(&b.num, &a.den);
        let div = |x: &Poly, g: &Poly| if g.is_one() { x.clone() } else { r.exact_div(x, g).expect("gcd divides") };
        let num = r.mul(&div(&a.num, &g1), &div(&b.num, &g2));
        let den = r.mul(&div(&a.den, &g2), &div(&b.den, &g1));
        RationalFn { num, den }.canonical_unchecked(self)
    }

    pub fn inv(&self, a: &RationalFn) -> Result<RationalFn> {
        if a.is_zero() {
            return Err(MzvError::DivisionByZero);
        }
        Ok(RationalFn { num: a.den.clone(), den: a.num.clone() }.canonical_unchecked(self))
    }

    pub fn div(&self, a: &RationalFn, b: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e` for any integer `e`; negative powers of zero are an error.
    pub fn pow_i(&self, a: &RationalFn, e: i64) -> Result<RationalFn> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let r = &self.ring;
        let e = e.unsigned_abs();
        // coprime num/den stay coprime under powers
        Ok(RationalFn { num: r.pow(&base.num, e), den: r.pow(&base.den, e) })
    }

    /// `v`-adic valuation; `None` for zero (plus infinity).
    pub fn valuation(&self, x: &RationalFn, v: &Poly) -> Result<Option<i64>> {
        if !v.is_monic() || !self.ring.is_irreducible(v) {
            return Err(MzvError::InvalidPrime(self.ring.format(v)));
        }
        if x.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.poly_valuation(&x.num, v) as i64 - self.poly_valuation(&x.den, v) as i64))
    }

    fn poly_valuation(&self, a: &Poly, v: &Poly) -> usize {
        let mut n = 0;
        let mut cur = a.clone();
        loop {
            let (q, r) = self.ring.div_rem(&cur, v).expect("nonzero prime");
            if !r.is_zero() {
                return n;
            }
            cur = q;
            n += 1;
        }
    }

    pub fn format(&self, a: &RationalFn) -> String {
        let num = self.ring.format(&a.num);
        if a.den.is_one() {
            return num;
        }
        let wrap = |s: String, p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(num, &a.num), wrap(self.ring.format(&a.den), &a.den))
    }
}

impl RationalFn {
    // Scales to a monic denominator; callers guarantee coprimality.
    fn canonical_unchecked(self, k: &FunctionField) -> RationalFn {
        if self.num.is_zero() {
            return RationalFn { num: Poly::zero(), den: Poly::one() };
        }
        let lead = self.den.leading().expect("nonzero denominator");
        if lead == FqElem::ONE {
            return self;
        }
        let li = k.field().inv(lead).expect("nonzero");
        let r = k.poly_ring();
        RationalFn { num: r.scale(&self.num, li), den: r.scale(&self.den, li) }
    }
}

impl Ring for FunctionField {
    type Elem = RationalFn;

    fn zero(&self) -> RationalFn {
        RationalFn::from_poly(Poly::zero())
    }
    fn one(&self) -> RationalFn {
        RationalFn::from_poly(Poly::one())
    }
    fn add(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        FunctionField::add(self, a, b)
    }
    fn neg(&self, a: &RationalFn) -> RationalFn {
        FunctionField::neg(self, a)
    }
    fn mul(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        FunctionField::mul(self, a, b)
    }
    fn is_zero(&self, a: &RationalFn) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> RationalFn {
        RationalFn::from_poly(Poly::constant(self.field().from_i64(n)))
    }
    fn characteristic(&self) -> u64 {
        self.field().p() as u64
    }
    fn format(&self, a: &RationalFn) -> String {
        FunctionField::format(self, a)
    }
    fn describe(&self) -> String {
        format!("F_{}(t)", self.field().q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;

    fn kf(q: u64) -> FunctionField {
        FunctionField::new(Fq::new(FieldSpec::with_q(q).unwrap()))
    }

    fn p(k: &FunctionField, c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| k.field().elem(x).unwrap()).collect())
    }

    #[test]
    fn normalize_examples() {
        let k = kf(2);
        let x = k.normalize(&p(&k, &[0, 1, 1]), &p(&k, &[0, 0, 1, 1])).unwrap();
        assert_eq!(x.num(), &Poly::one());
        assert_eq!(x.den(), &p(&k, &[0, 1]));
        let z = k.normalize(&Poly::zero(), &p(&k, &[0, 1])).unwrap();
        assert!(z.is_zero() && z.den().is_one());
        let k3 = kf(3);
        let y = k3.normalize(&p(&k3, &[0, 2]), &p(&k3, &[2])).unwrap();
        assert_eq!(y.num(), &p(&k3, &[0, 1]));
        assert!(y.den().is_one());
        assert_eq!(k.normalize(&Poly::one(), &Poly::zero()), Err(MzvError::DivisionByZero));
    }

    #[test]
    fn addition_matches_cross_multiplication_over_f2() {
        let k = kf(2);
        let r = k.poly_ring().clone();
        let mut polys = Vec::new();
        for d in 0..=2 {
            polys.extend(r.monics(d));
        }
        let nums: Vec<Poly> = std::iter::once(Poly::zero()).chain(polys.iter().cloned()).collect();
        for a in &nums {
            for b in &polys {
                let x = k.normalize(a, b).unwrap();
                for c in &nums {
                    for d in &polys {
                        let y = k.normalize(c, d).unwrap();
                        let cross = k
                            .normalize(&r.add(&r.mul(a, d), &r.mul(c, b)), &r.mul(b, d))
                            .unwrap();
                        assert_eq!(k.add(&x, &y), cross);
                        let prod = k.normalize(&r.mul(a, c), &r.mul(b, d)).unwrap();
                        assert_eq!(k.mul(&x, &y), prod);
                    }
                }
            }
        }
    }

    #[test]
    fn valuations() {
        let k = kf(2);
        let t = p(&k, &[0, 1]);
        let x = k.from_poly(p(&k, &[0, 1, 1]));
        assert_eq!(k.valuation(&x, &t).unwrap(), Some(1));
        assert_eq!(k.valuation(&k.one(), &t).unwrap(), Some(0));
        assert_eq!(k.valuation(&k.zero(), &t).unwrap(), None);
        let y = k.normalize(&Poly::one(), &p(&k, &[0, 0, 1, 1])).unwrap();
        assert_eq!(k.valuation(&y, &t).unwrap(), Some(-2));
        assert!(k.valuation(&x, &p(&k, &[1, 0, 1])).is_err());
    }
}
