//! Evaluating formal relations under the truncated, finite and `v`-adic
//! flavors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::FormalRelation;
use crate::algebra::ext::ExtField;
use crate::algebra::{FqElem, Poly, RationalFn, ResidueRing, Valuation};
use crate::error::{MzvError, Result};
use crate::ring::Ring;
use crate::zeta::{nested_partial_sums, Composition, ZetaEngine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluator {
    /// `zeta(D, s)` exactly in `F_q(t)`.
    TruncatedExact { d: usize, star: bool },
    /// Finite values in `F_v`.
    Finite { v: Poly, star: bool },
    /// `v`-adic partial sums with `d_1 < D`, modulo `v^N`.
    Vadic { v: Poly, d: usize, n: u32, star: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Zero,
    NonZero(String),
    ValuationAtLeast(u32),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::NonZero(_))
    }
}

/// Evidence that a truncated relation vanishes exactly: its value, times a
/// common denominator, is a polynomial of degree at most `degree_bound`
/// that vanishes modulo `primes` distinct primes of total degree
/// `degree_total > degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub primes: usize,
    pub degree_total: u64,
    pub degree_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub verdict: Verdict,
    /// The relation's value, rendered exactly.
    pub value: String,
    /// `v`-adic valuation of the value (for the `v`-adic flavor).
    pub valuation: Option<Valuation>,
    /// Factors whose `v`-adic partial sums did not stabilize.
    pub unstabilized: Vec<Composition>,
    pub certificate: Option<Certificate>,
}

/// Evaluates relations over one field, caching power sums and extension
/// tables across calls.
#[derive(Debug)]
pub struct RelationEvaluator {
    engine: ZetaEngine,
    ext: Mutex<HashMap<usize, Arc<ExtField>>>,
}

fn combine<R: Ring>(
    ring: &R,
    rel: &FormalRelation,
    values: &HashMap<Composition, R::Elem>,
    coeff: impl Fn(FqElem) -> R::Elem,
) -> R::Elem {
    let mut acc = ring.zero();
    for t in &rel.terms {
        let mut prod = coeff(t.coeff);
        for f in &t.factors {
            prod = ring.mul(&prod, &values[f]);
        }
        acc = ring.add(&acc, &prod);
    }
    acc
}

impl RelationEvaluator {
    pub fn new(engine: ZetaEngine) -> Self {
        RelationEvaluator { engine, ext: Mutex::default() }
    }

    pub fn engine(&self) -> &ZetaEngine {
        &self.engine
    }

    fn residue_ring(&self, v: &Poly, n: u32) -> Result<ResidueRing> {
        ResidueRing::new(self.engine.field().clone(), v.clone(), n).map_err(|e| MzvError::InvalidEvaluator(e.to_string()))
    }

    pub fn evaluate(&self, rel: &FormalRelation, ev: &Evaluator) -> Result<Evaluation> {
        match ev {
            Evaluator::TruncatedExact { d, star } => self.evaluate_truncated(rel, *d, *star),
            Evaluator::Finite { v, star } => {
                let rr = self.residue_ring(v, 1)?;
                let mut values = HashMap::new();
                for s in rel.compositions() {
                    let x = self.engine.finite_mzv_in(&rr, &s, *star)?;
                    values.insert(s, x);
                }
                let value = combine(&rr, rel, &values, |c| rr.reduce(&Poly::constant(c)));
                let text = rr.format(&value);
                let verdict = if value.is_zero() { Verdict::Zero } else { Verdict::NonZero(text.clone()) };
                Ok(Evaluation { verdict, value: text, valuation: None, unstabilized: vec![], certificate: None })
            }
            Evaluator::Vadic { v, d, n, star } => {
                if *d == 0 {
                    return Err(MzvError::InvalidEvaluator("truncation needs D >= 1".into()));
                }
                let rr = self.residue_ring(v, *n)?;
                let mut values = HashMap::new();
                let mut unstabilized = Vec::new();
                for s in rel.compositions() {
                    let rep = self.engine.vadic_mzv_in(&rr, &s, *d, *star)?;
                    if !rep.stabilized {
                        unstabilized.push(s.clone());
                    }
                    values.insert(s, rep.value);
                }
                let value = combine(&rr, rel, &values, |c| rr.reduce(&Poly::constant(c)));
                let text = rr.format(&value);
                let valuation = rr.valuation(&value);
                let verdict = if value.is_zero() { Verdict::ValuationAtLeast(*n) } else { Verdict::NonZero(text.clone()) };
                Ok(Evaluation { verdict, value: text, valuation: Some(valuation), unstabilized, certificate: None })
            }
        }
    }

    fn evaluate_truncated(&self, rel: &FormalRelation, d: usize, star: bool) -> Result<Evaluation> {
        if d == 0 {
            return Err(MzvError::InvalidEvaluator("truncation needs D >= 1".into()));
        }
        if let Some(cert) = self.certify_truncated(rel, d, star)? {
            return Ok(Evaluation {
                verdict: Verdict::Zero,
                value: "0".into(),
                valuation: None,
                unstabilized: vec![],
                certificate: Some(cert),
            });
        }
        let value = self.evaluate_exact(rel, d, star)?;
        let text = self.engine.power_sums().function_field().format(&value);
        let verdict = if value.is_zero() { Verdict::Zero } else { Verdict::NonZero(text.clone()) };
        Ok(Evaluation { verdict, value: text, valuation: None, unstabilized: vec![], certificate: None })
    }

    /// The truncated value computed directly in `F_q(t)`.
    pub fn evaluate_exact(&self, rel: &FormalRelation, d: usize, star: bool) -> Result<RationalFn> {
        let kf = self.engine.power_sums().function_field();
        let mut values = HashMap::new();
        for s in rel.compositions() {
            let x = self.engine.truncated_mzv(d, &s, star)?;
            values.insert(s, x);
        }
        Ok(combine(kf, rel, &values, |c| RationalFn::from_poly(Poly::constant(c))))
    }

    /// Proves that the truncated value is exactly zero by evaluating it at
    /// roots of enough primes of degree `>= D`.
    ///
    /// Every `S_d(k)` with `d < D` and `k > 0` has denominator dividing
    /// `Lambda^k` with `Lambda = lcm(A_{(D-1)+})`, and degree at most `0`; for
    /// `k < 0` it is a polynomial of degree at most `(D-1)|k|`. So the value
    /// times `Lambda^B` (with `B` the largest positive weight of a term) is a
    /// polynomial of degree at most `B deg Lambda + E`, and primes of degree
    /// `>= D` do not divide `Lambda`.
    ///
    /// Returns `None` when some evaluation is nonzero, or when the primes
    /// needed are beyond the table limit.
    pub fn certify_truncated(&self, rel: &FormalRelation, d: usize, star: bool) -> Result<Option<Certificate>> {
        let q = self.engine.field().q() as u64;
        let mut b = 0u64;
        let mut e = 0u64;
        for t in &rel.terms {
            let pos: i64 = t.factors.iter().flat_map(|f| f.entries()).filter(|&&x| x > 0).sum();
            let neg: i64 = t.factors.iter().flat_map(|f| f.entries()).filter(|&&x| x < 0).map(|x| -x).sum();
            b = b.max(pos as u64);
            e = e.max(neg as u64 * (d as u64 - 1));
        }
        let bound = b.saturating_mul(lcm_degree(q, d - 1)).saturating_add(e);
        let comps = rel.compositions();
        let max_k_abs = comps.iter().flat_map(|c| c.entries()).map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let _ = max_k_abs;
        let mut total = 0u64;
        let mut primes = 0usize;
        let mut m = d.max(1);
        loop {
            let Ok(ext) = self.ext_field(m) else { return Ok(None) };
            for alpha in ext.primitive_orbit_representatives() {
                let value = self.value_at(&ext, alpha, rel, &comps, d, star)?;
                if value != 0 {
                    return Ok(None);
                }
                total += m as u64;
                primes += 1;
                if total > bound {
                    return Ok(Some(Certificate { primes, degree_total: total, degree_bound: bound }));
                }
            }
            m += 1;
        }
    }

    fn ext_field(&self, m: usize) -> Result<Arc<ExtField>> {
        if let Some(x) = self.ext.lock().unwrap().get(&m) {
            return Ok(x.clone());
        }
        let ext = Arc::new(ExtField::new(self.engine.field().clone(), m)?);
        self.ext.lock().unwrap().insert(m, ext.clone());
        Ok(ext)
    }

    fn value_at(
        &self,
        ext: &ExtField,
        alpha: u32,
        rel: &FormalRelation,
        comps: &[Composition],
        d: usize,
        star: bool,
    ) -> Result<u32> {
        // values of all polynomials of degree < i at alpha, for i < d
        let field = self.engine.field();
        let mut lows: Vec<Vec<u32>> = vec![vec![0]];
        let mut alpha_pow = vec![1u32];
        for i in 1..d {
            let prev = &lows[i - 1];
            let mut next = Vec::with_capacity(prev.len() * field.q() as usize);
            for c in field.elements() {
                let shift = ext.mul(ext.embed(c), alpha_pow[i - 1]);
                next.extend(prev.iter().map(|&x| ext.add(x, shift)));
            }
            lows.push(next);
            alpha_pow.push(ext.mul(alpha_pow[i - 1], alpha));
        }
        let mut cache: HashMap<(usize, i64), u32> = HashMap::new();
        let mut power_sum = |deg: usize, k: i64| -> Result<u32> {
            if let Some(&x) = cache.get(&(deg, k)) {
                return Ok(x);
            }
            let mut acc = 0u32;
            for &low in &lows[deg] {
                let a = ext.add(alpha_pow[deg], low);
                acc = ext.add(acc, ext.pow_i(a, -k)?);
            }
            cache.insert((deg, k), acc);
            Ok(acc)
        };
        let mut values = HashMap::new();
        for s in comps {
            let e = s.entries();
            let sums = nested_partial_sums(ext, d, e.len(), star, |deg, j| power_sum(deg, e[j]))?;
            values.insert(s.clone(), sums[d]);
        }
        Ok(combine(ext, rel, &values, |c| ext.embed(c)))
    }
}

/// Number of monic irreducibles of degree `n` over `F_q`.
pub(crate) fn irreducible_count(q: u64, n: u64) -> u64 {
    let mut total: i128 = 0;
    for k in 1..=n {
        if n.is_multiple_of(k) {
            total += mobius(k) as i128 * (q as i128).saturating_pow((n / k) as u32);
        }
    }
    (total / n as i128) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `deg lcm(A_{n+}) = sum_{e <= n} N_e e floor(n / e)`.
pub(crate) fn lcm_degree(q: u64, n: usize) -> u64 {
    (1..=n as u64).map(|e| irreducible_count(q, e) * e * (n as u64 / e)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldSpec, Fq, PolyRing};
    use crate::power_sums::PowerSums;
    use crate::relations::{gen_thm2, gen_thm_a, gen_thm_b, Family, Thm3Config};

    fn evaluator(q: u64) -> RelationEvaluator {
        RelationEvaluator::new(ZetaEngine::new(Fq::new(FieldSpec::with_q(q).unwrap())))
    }

    fn c(s: &[i64]) -> Composition {
        Composition::new(s.to_vec()).unwrap()
    }

    #[test]
    fn lcm_degrees_match_direct_products() {
        for q in [2u64, 3] {
            let sums = PowerSums::from_spec(FieldSpec::with_q(q).unwrap());
            for n in 0..=3 {
                assert_eq!(sums.lcm_of_monics(n).degree().unwrap() as u64, lcm_degree(q, n));
            }
        }
        assert_eq!(irreducible_count(4, 4), 60);
    }

    #[test]
    fn finite_alternating_sum_at_degree_one_prime() {
        let ev = evaluator(2);
        let rel = gen_thm2(&c(&[1, 2, 3]), ev.engine().field()).unwrap();
        let out = ev.evaluate(&rel, &Evaluator::Finite { v: Poly::monomial(1), star: false }).unwrap();
        assert_eq!(out.verdict, Verdict::Zero);
    }

    #[test]
    fn product_identity_is_exact_at_truncation() {
        let ev = evaluator(2);
        let rel = gen_thm_a(&c(&[1, 2, 3]), ev.engine().field()).unwrap();
        for d in 1..=3 {
            assert!(ev.evaluate_exact(&rel, d, false).unwrap().is_zero());
            let out = ev.evaluate(&rel, &Evaluator::TruncatedExact { d, star: false }).unwrap();
            assert_eq!(out.verdict, Verdict::Zero);
            assert!(out.certificate.is_some());
        }
    }

    #[test]
    fn certified_and_direct_routes_agree() {
        let ev = evaluator(2);
        let k = ev.engine().field().clone();
        let mut rels = vec![
            gen_thm_a(&c(&[1, 2, 3]), &k).unwrap(),
            gen_thm_b(&Thm3Config::new(vec![(1, 3)]), &k).unwrap(),
            gen_thm_b(&Thm3Config::new(vec![(1, 2), (3, 1)]), &k).unwrap(),
            gen_thm2(&c(&[1, 2, 3]), &k).unwrap(),
        ];
        // a relation that is not an identity at the truncation level
        rels.push(FormalRelation::from_terms(&k, Family::Custom, vec![(FqElem::ONE, vec![c(&[1, -1])])]));
        for rel in &rels {
            for d in 1..=4 {
                for star in [false, true] {
                    let direct = ev.evaluate_exact(rel, d, star).unwrap();
                    let cert = ev.certify_truncated(rel, d, star).unwrap();
                    assert_eq!(cert.is_some(), direct.is_zero(), "{} D={d}", rel.display(&k));
                }
            }
        }
    }

    #[test]
    fn char2_product_identities_vanish() {
        let ev = evaluator(2);
        let k = ev.engine().field().clone();
        for pairs in [vec![(1, 3)], vec![(1, 2), (3, 1)], vec![(3, 2)]] {
            let rel = gen_thm_b(&Thm3Config::new(pairs), &k).unwrap();
            for d in 1..=4 {
                assert!(ev.evaluate_exact(&rel, d, false).unwrap().is_zero(), "{} D={d}", rel.display(&k));
            }
        }
    }

    #[test]
    fn vadic_alternating_sum() {
        let ev = evaluator(2);
        let rel = gen_thm2(&c(&[1, 2, 3]), ev.engine().field()).unwrap();
        let out = ev.evaluate(&rel, &Evaluator::Vadic { v: Poly::monomial(1), d: 8, n: 3, star: false }).unwrap();
        assert_eq!(out.verdict, Verdict::ValuationAtLeast(3));
        assert!(out.unstabilized.is_empty());
    }

    #[test]
    fn invalid_prime_is_an_evaluator_error() {
        let ev = evaluator(2);
        let rel = gen_thm2(&c(&[1, 2, 3]), ev.engine().field()).unwrap();
        let r = PolyRing::new(ev.engine().field().clone());
        let v = r.mul(&Poly::monomial(1), &Poly::monomial(1));
        assert!(matches!(ev.evaluate(&rel, &Evaluator::Finite { v, star: false }), Err(MzvError::InvalidEvaluator(_))));
        assert!(ev.evaluate(&rel, &Evaluator::TruncatedExact { d: 0, star: false }).is_err());
    }
}
