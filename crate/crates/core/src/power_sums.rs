//! Carlitz power sums `S_d(k)` and their coprime variants `S~_d(k)`.
//!
//! `S_d(k)` is the sum of `a^(-k)` over the `q^d` monic `a` of degree `d`;
//! `S~_d(k)` restricts to `a` coprime to a prime `v`.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::algebra::{FieldSpec, Fq, FunctionField, Poly, PolyRing, RationalFn, ResidueElem, ResidueRing};
use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// Where a power sum is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    /// Exactly, in `F_q(t)`.
    Exact,
    /// In `A/(v^N)`.
    Residue { v: Poly, n: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSumKey {
    pub d: usize,
    pub k: i64,
    /// Restrict the sum to `a` coprime to this prime.
    pub coprime_to: Option<Poly>,
    pub carrier: Carrier,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PowerSumValue {
    Exact(RationalFn),
    Residue(ResidueElem),
}

/// Snapshot of the exact power sums computed so far, for reuse across
/// processes. Coefficients are field-element indices, constant term first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCache {
    pub field: String,
    pub entries: Vec<ExactCacheEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCacheEntry {
    pub d: usize,
    pub k: i64,
    pub num: Vec<u32>,
    pub den: Vec<u32>,
}

type ResidueKey = (Poly, u32, bool, usize, i64);

/// Memoizing power-sum engine for one field.
#[derive(Debug)]
pub struct PowerSums {
    field: Fq,
    ring: PolyRing,
    kf: FunctionField,
    exact: Mutex<HashMap<(usize, i64), RationalFn>>,
    // P_i(j) = sum of b^j over all b with deg b < i
    low_sums: Mutex<HashMap<(usize, u64), Poly>>,
    residue: Mutex<HashMap<ResidueKey, Poly>>,
    inverses: Mutex<HashMap<(Poly, u32, bool, usize), Vec<Poly>>>,
}

impl PowerSums {
    pub fn new(field: Fq) -> Self {
        PowerSums {
            ring: PolyRing::new(field.clone()),
            kf: FunctionField::new(field.clone()),
            field,
            exact: Mutex::default(),
            low_sums: Mutex::default(),
            residue: Mutex::default(),
            inverses: Mutex::default(),
        }
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        Self::new(Fq::new(spec))
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn function_field(&self) -> &FunctionField {
        &self.kf
    }

    pub fn power_sum(&self, key: &PowerSumKey) -> Result<PowerSumValue> {
        match (&key.carrier, &key.coprime_to) {
            (Carrier::Exact, None) => Ok(PowerSumValue::Exact(self.exact(key.d, key.k))),
            (Carrier::Exact, Some(_)) => Err(MzvError::InvalidArgument(
                "coprime power sums need a residue carrier".into(),
            )),
            (Carrier::Residue { v, n }, cop) => {
                if cop.as_ref().is_some_and(|c| c != v) {
                    return Err(MzvError::InvalidArgument(
                        "coprimality prime differs from the carrier prime".into(),
                    ));
                }
                let rr = ResidueRing::new(self.field.clone(), v.clone(), *n)?;
                Ok(PowerSumValue::Residue(self.residue(&rr, key.d, key.k, cop.is_some())?))
            }
        }
    }

    pub fn export_exact(&self) -> ExactCache {
        let index = |p: &Poly| p.coeffs().iter().map(|c| c.index()).collect();
        let mut entries: Vec<ExactCacheEntry> = self
            .exact
            .lock()
            .unwrap()
            .iter()
            .map(|(&(d, k), x)| ExactCacheEntry { d, k, num: index(x.num()), den: index(x.den()) })
            .collect();
        entries.sort_by_key(|e| (e.d, e.k));
        ExactCache { field: self.field.spec().to_string(), entries }
    }

    /// Loads a snapshot taken over the same field; returns how many entries
    /// were added.
    pub fn import_exact(&self, cache: &ExactCache) -> Result<usize> {
        if cache.field != self.field.spec().to_string() {
            return Err(MzvError::InvalidField(format!("cache is for {}, not {}", cache.field, self.field.spec())));
        }
        let poly = |c: &[u32]| -> Result<Poly> {
            Ok(Poly::from_coeffs(c.iter().map(|&i| self.field.elem(i)).collect::<Result<_>>()?))
        };
        let mut loaded = Vec::with_capacity(cache.entries.len());
        for e in &cache.entries {
            loaded.push(((e.d, e.k), self.kf.normalize(&poly(&e.num)?, &poly(&e.den)?)?));
        }
        let mut map = self.exact.lock().unwrap();
        let before = map.len();
        map.extend(loaded);
        Ok(map.len() - before)
    }

    /// Exact `S_d(k)` in `F_q(t)`.
    pub fn exact(&self, d: usize, k: i64) -> RationalFn {
        if let Some(x) = self.exact.lock().unwrap().get(&(d, k)) {
            return x.clone();
        }
        let value = if k <= 0 {
            RationalFn::from_poly(self.neg_poly(d, k.unsigned_abs()))
        } else {
            self.exact_positive(d, k as u64)
        };
        self.exact.lock().unwrap().insert((d, k), value.clone());
        value
    }

    // Sum over the common denominator lcm(A_{d+})^k, normalized once.
    fn exact_positive(&self, d: usize, k: u64) -> RationalFn {
        let r = &self.ring;
        let lambda = self.lcm_of_monics(d);
        let mut num = Poly::zero();
        for a in r.monics(d) {
            let cofactor = r.exact_div(&lambda, &a).expect("a divides the lcm");
            num = r.add(&num, &r.pow(&cofactor, k));
        }
        self.kf.normalize(&num, &r.pow(&lambda, k)).expect("nonzero denominator")
    }

    /// `lcm` of all monic polynomials of degree `d`: each monic irreducible
    /// `P` of degree `e <= d` to the power `floor(d / e)`.
    pub fn lcm_of_monics(&self, d: usize) -> Poly {
        let r = &self.ring;
        let mut acc = Poly::one();
        for e in 1..=d {
            for p in r.irreducibles(e) {
                acc = r.mul(&acc, &r.pow(&p, (d / e) as u64));
            }
        }
        acc
    }

    /// `S_d(-m)` as a polynomial, by expanding `(t^d + b)^m` and summing
    /// the powers of the lower part `b` degree by degree.
    pub fn neg_poly(&self, d: usize, m: u64) -> Poly {
        let r = &self.ring;
        let p = self.field.p() as u64;
        let mut acc = Poly::zero();
        for j in 0..=m {
            let c = binomial_mod_p(m, j, p);
            if c == 0 {
                continue;
            }
            let low = self.low_sum(d, j);
            if low.is_zero() {
                continue;
            }
            let term = r.shift(&low, d * (m - j) as usize);
            acc = r.add(&acc, &r.scale(&term, self.field.from_i64(c as i64)));
        }
        acc
    }

    // P_i(j) = sum_{deg b < i} b^j. Writing b = b' + c t^(i-1) and summing c
    // over F_q, only exponents e >= 1 with (q-1) | e survive, each with
    // sum_c c^e = -1.
    fn low_sum(&self, i: usize, j: u64) -> Poly {
        if i == 0 {
            return if j == 0 { Poly::one() } else { Poly::zero() };
        }
        if let Some(x) = self.low_sums.lock().unwrap().get(&(i, j)) {
            return x.clone();
        }
        let r = &self.ring;
        let p = self.field.p() as u64;
        let step = self.field.q() as u64 - 1;
        let mut acc = Poly::zero();
        let mut e = step;
        while e <= j {
            let c = binomial_mod_p(j, e, p);
            if c != 0 {
                let lower = self.low_sum(i - 1, j - e);
                if !lower.is_zero() {
                    let term = r.shift(&lower, (i - 1) * e as usize);
                    acc = r.sub(&acc, &r.scale(&term, self.field.from_i64(c as i64)));
                }
            }
            e += step;
        }
        self.low_sums.lock().unwrap().insert((i, j), acc.clone());
        acc
    }

    /// `S_d(k)` or `S~_d(k)` in `A/(v^N)`.
    ///
    /// For `d > N deg v` the residues of the degree-`d` monics are uniformly
    /// distributed modulo `v^N`, each class hit `q^(d - N deg v)` times, so the
    /// sum vanishes without enumeration.
    pub fn residue(&self, rr: &ResidueRing, d: usize, k: i64, coprime: bool) -> Result<ResidueElem> {
        let v = rr.prime();
        let deg_v = v.degree().expect("prime of positive degree");
        if k > 0 && !coprime && d >= deg_v {
            return Err(MzvError::NotInvertible(self.ring.format(v)));
        }
        if d > rr.dimension() {
            return Ok(rr.zero());
        }
        let key = (v.clone(), rr.precision(), coprime, d, k);
        if let Some(rep) = self.residue.lock().unwrap().get(&key) {
            return Ok(rr.reduce(rep));
        }
        let value = if k <= 0 {
            let m = k.unsigned_abs();
            let mut x = rr.reduce(&self.neg_poly(d, m));
            if coprime && d >= deg_v {
                // remove a = v b with b monic of degree d - deg v
                let multiples = self.ring.mul(&self.ring.pow(v, m), &self.neg_poly(d - deg_v, m));
                x = rr.sub(&x, &rr.reduce(&multiples));
            }
            x
        } else {
            let invs = self.inverses(rr, d, coprime)?;
            let mut acc = rr.zero();
            for inv in invs.iter() {
                let e = rr.reduce(inv);
                acc = rr.add(&acc, &rr.pow(&e, k as u64));
            }
            acc
        };
        self.residue.lock().unwrap().insert(key, value.rep().clone());
        Ok(value)
    }

    fn inverses(&self, rr: &ResidueRing, d: usize, coprime: bool) -> Result<Vec<Poly>> {
        let key = (rr.prime().clone(), rr.precision(), coprime, d);
        if let Some(x) = self.inverses.lock().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let r = &self.ring;
        let mut out = Vec::new();
        for a in r.monics(d) {
            if coprime && r.divides(rr.prime(), &a) {
                continue;
            }
            out.push(rr.inv_poly(&a)?.rep().clone());
        }
        self.inverses.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Largest `d <= cap` with `S_d(-m) != 0`.
    ///
    /// Maximality is certified only by `S_cap(-m) = 0`; otherwise the cap is
    /// reported as too small.
    pub fn vanish_degree(&self, m: u64, cap: usize) -> Result<usize> {
        if m == 0 || cap == 0 {
            return Err(MzvError::InvalidArgument("vanish_degree needs m >= 1 and cap >= 1".into()));
        }
        if !self.neg_poly(cap, m).is_zero() {
            return Err(MzvError::CapTooSmall { m, cap });
        }
        Ok((0..cap).rev().find(|&d| !self.neg_poly(d, m).is_zero()).unwrap_or(0))
    }

    /// The default cap `2 m f + 4`.
    pub fn default_cap(&self, m: u64) -> usize {
        (2 * m * self.field.degree() as u64 + 4) as usize
    }
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binomial(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn small_binomial(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is a unit because k < p
    num * mod_pow(den, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(q: u64) -> PowerSums {
        PowerSums::from_spec(FieldSpec::with_q(q).unwrap())
    }

    fn p(e: &PowerSums, c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| e.field().elem(x).unwrap()).collect())
    }

    // Independent literal enumeration in F_q(t).
    fn literal(e: &PowerSums, d: usize, k: i64) -> RationalFn {
        let kf = e.function_field();
        let mut acc = kf.zero();
        for a in e.poly_ring().monics(d) {
            let x = kf.pow_i(&RationalFn::from_poly(a), -k).unwrap();
            acc = kf.add(&acc, &x);
        }
        acc
    }

    #[test]
    fn pinned_values() {
        let e = engine(2);
        let kf = e.function_field();
        for k in -3..=3 {
            assert_eq!(e.exact(0, k), kf.one());
        }
        let expected = kf.normalize(&Poly::one(), &p(&e, &[0, 1, 1])).unwrap();
        assert_eq!(e.exact(1, 1), expected);
        assert_eq!(e.exact(1, -1), kf.one());
        assert!(e.exact(2, -1).is_zero());
    }

    #[test]
    fn matches_literal_enumeration() {
        for q in [2, 3, 4] {
            let e = engine(q);
            for d in 0..=3 {
                if q == 4 && d == 3 {
                    continue;
                }
                for k in -6..=6 {
                    assert_eq!(e.exact(d, k), literal(&e, d, k), "q={q} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn count_sums_vanish() {
        let e = engine(3);
        for d in 1..5 {
            assert!(e.exact(d, 0).is_zero());
        }
    }

    #[test]
    fn coprime_residue_example() {
        let e = engine(2);
        let t = p(&e, &[0, 1]);
        let key = PowerSumKey { d: 1, k: 1, coprime_to: Some(t.clone()), carrier: Carrier::Residue { v: t.clone(), n: 3 } };
        let PowerSumValue::Residue(x) = e.power_sum(&key).unwrap() else { panic!() };
        // 1/(t+1) = 1 + t + t^2 mod t^3
        assert_eq!(x.rep(), &p(&e, &[1, 1, 1]));
        let bad = PowerSumKey { coprime_to: None, ..key };
        assert!(matches!(e.power_sum(&bad), Err(MzvError::NotInvertible(_))));
    }

    #[test]
    fn high_degree_residue_shortcut_matches_enumeration() {
        for q in [2u64, 3] {
            let e = engine(q);
            let r = e.poly_ring().clone();
            for v in [p(&e, &[0, 1]), p(&e, &[1, 1])] {
                for n in 1..=2u32 {
                    let rr = ResidueRing::new(e.field().clone(), v.clone(), n).unwrap();
                    let top = rr.dimension() + 3;
                    for d in 0..=top.min(if q == 2 { 7 } else { 5 }) {
                        for k in [-3i64, -1, 1, 2, 5] {
                            let fast = e.residue(&rr, d, k, true).unwrap();
                            let mut slow = rr.zero();
                            for a in r.monics(d) {
                                if r.divides(&v, &a) {
                                    continue;
                                }
                                let x = if k > 0 {
                                    rr.pow(&rr.inv_poly(&a).unwrap(), k as u64)
                                } else {
                                    rr.reduce(&r.pow(&a, k.unsigned_abs()))
                                };
                                slow = rr.add(&slow, &x);
                            }
                            assert_eq!(fast, slow, "q={q} v={} n={n} d={d} k={k}", r.format(&v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_degrees() {
        assert_eq!(engine(2).vanish_degree(1, 4).unwrap(), 1);
        assert_eq!(engine(3).vanish_degree(2, 8).unwrap(), 1);
        assert_eq!(engine(2).vanish_degree(1, 1), Err(MzvError::CapTooSmall { m: 1, cap: 1 }));
        let e = engine(3);
        assert_eq!(e.exact(1, -2), RationalFn::from_poly(p(&e, &[2])));
    }

    #[test]
    fn lucas() {
        assert_eq!(binomial_mod_p(4, 2, 2), 0);
        assert_eq!(binomial_mod_p(5, 1, 3), 2);
        assert_eq!(binomial_mod_p(10, 3, 7), 120 % 7);
    }

    #[test]
    fn exact_cache_round_trip() {
        let a = PowerSums::from_spec(FieldSpec::with_q(4).unwrap());
        for (d, k) in [(2, 3), (3, -2), (1, 1)] {
            a.exact(d, k);
        }
        let snap = a.export_exact();
        let b = PowerSums::from_spec(FieldSpec::with_q(4).unwrap());
        assert_eq!(b.import_exact(&snap).unwrap(), 3);
        assert_eq!(b.export_exact(), snap);
        assert_eq!(b.exact(2, 3), a.exact(2, 3));
        let c = PowerSums::from_spec(FieldSpec::with_q(2).unwrap());
        assert!(c.import_exact(&snap).is_err());
    }
}
