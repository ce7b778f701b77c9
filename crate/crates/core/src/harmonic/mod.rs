//! Sums of multiple harmonic type over an arbitrary commutative ring:
//! `H(s_1, ..., s_r) = sum_{d_1 > ... > d_r} h(d_1, s_1) ... h(d_r, s_r)`
//! over a finite ordered index set, and checkers for the alternating and
//! characteristic-2 product identities they satisfy.

mod rings;

use std::collections::HashMap;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub use rings::{IntegersMod, RandomElem, RingChoice, Rationals, TruncatedPoly};

use crate::algebra::Fq;
use crate::error::{MzvError, Result};
use crate::relations::{distinct_reorders, permutation_sign, Thm3Config};
use crate::ring::Ring;
use crate::zeta::nested_partial_sums;

/// A finite instance: index set `D` (strictly increasing), magma `S` and a
/// table of `h(d, s)`.
#[derive(Clone, Debug)]
pub struct MhtInstance<R: Ring> {
    ring: R,
    index: Vec<i64>,
    magma: Vec<i64>,
    slot: HashMap<i64, usize>,
    /// `table[i][j] = h(index[i], magma[j])`.
    table: Vec<Vec<R::Elem>>,
    seed: Option<u64>,
}

impl<R: Ring> MhtInstance<R> {
    pub fn new(ring: R, index: Vec<i64>, magma: Vec<i64>, mut h: impl FnMut(i64, i64) -> R::Elem) -> Result<Self> {
        if index.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MzvError::InvalidArgument("index set must be strictly increasing".into()));
        }
        let mut slot = HashMap::new();
        for (j, &s) in magma.iter().enumerate() {
            if slot.insert(s, j).is_some() {
                return Err(MzvError::InvalidArgument(format!("{s} listed twice in the magma")));
            }
        }
        let table = index.iter().map(|&d| magma.iter().map(|&s| h(d, s)).collect()).collect();
        Ok(MhtInstance { ring, index, magma, slot, table, seed: None })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn index_set(&self) -> &[i64] {
        &self.index
    }

    pub fn magma(&self) -> &[i64] {
        &self.magma
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn h(&self, d: i64, s: i64) -> Option<&R::Elem> {
        let i = self.index.binary_search(&d).ok()?;
        Some(&self.table[i][*self.slot.get(&s)?])
    }

    fn slots(&self, s: &[i64]) -> Result<Vec<usize>> {
        s.iter()
            .map(|x| self.slot.get(x).copied().ok_or_else(|| MzvError::InvalidArgument(format!("{x} is not in the magma"))))
            .collect()
    }

    /// `H(s)` over strictly decreasing chains in the index set (weakly
    /// decreasing when `star`). The empty tuple gives 1.
    pub fn mht_sum(&self, s: &[i64], star: bool) -> Result<R::Elem> {
        let slots = self.slots(s)?;
        let sums = nested_partial_sums(&self.ring, self.index.len(), s.len(), star, |i, j| Ok(self.table[i][slots[j]].clone()))?;
        Ok(sums.into_iter().last().expect("nonempty"))
    }

    /// `sum_{d_1 > ... > d_r}` by explicit chain enumeration.
    pub fn mht_sum_naive(&self, s: &[i64]) -> Result<R::Elem> {
        let slots = self.slots(s)?;
        let mut acc = self.ring.zero();
        for chain in (0..self.index.len()).rev().combinations(s.len()) {
            let term = chain.iter().zip(&slots).fold(self.ring.one(), |p, (&i, &j)| self.ring.mul(&p, &self.table[i][j]));
            acc = self.ring.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Checks `h(d, 2s) = h(d, s)^2` wherever both sides are in the table.
    pub fn check_doubling(&self) -> Result<()> {
        for (i, &d) in self.index.iter().enumerate() {
            for (j, &s) in self.magma.iter().enumerate() {
                if let Some(&k) = self.slot.get(&(2 * s)) {
                    if self.table[i][k] != self.ring.square(&self.table[i][j]) {
                        return Err(MzvError::DoublingLawViolated { d, s });
                    }
                }
            }
        }
        Ok(())
    }

    /// `{ring, D, S, h, seed}` with elements rendered by the ring.
    pub fn to_json(&self) -> Value {
        let h: Vec<Vec<String>> = self.table.iter().map(|row| row.iter().map(|x| self.ring.format(x)).collect()).collect();
        json!({
            "ring": self.ring.describe(),
            "D": self.index,
            "S": self.magma,
            "h": h,
            "seed": self.seed,
        })
    }
}

/// Both sides of an identity and their difference.
#[derive(Clone, Debug, PartialEq)]
pub struct MhtCheck<E> {
    pub lhs: E,
    pub rhs: E,
    pub residual: E,
}

fn signed_sum<R: Ring>(inst: &MhtInstance<R>, entries: &[i64]) -> Result<R::Elem> {
    let ring = inst.ring();
    let mut acc = ring.zero();
    for perm in (0..entries.len()).permutations(entries.len()) {
        let tuple: Vec<i64> = perm.iter().map(|&i| entries[i]).collect();
        let h = inst.mht_sum(&tuple, false)?;
        acc = if permutation_sign(&perm) == 1 { ring.add(&acc, &h) } else { ring.sub(&acc, &h) };
    }
    Ok(acc)
}

/// `sum_sigma sgn(sigma) H(sigma(s))` against
/// `sum_j (-1)^(n-j) H(s_j) sum_tau sgn(tau) H(tau(s^j))`.
pub fn check_thm_c<R: Ring>(inst: &MhtInstance<R>, s: &[i64]) -> Result<MhtCheck<R::Elem>> {
    let n = s.len();
    if n.is_multiple_of(2) {
        return Err(MzvError::InvalidFamilyInput(format!("depth {n} is not odd")));
    }
    if s.iter().collect::<std::collections::HashSet<_>>().len() != n {
        return Err(MzvError::InvalidFamilyInput("entries must be distinct".into()));
    }
    let ring = inst.ring();
    let lhs = signed_sum(inst, s)?;
    let mut rhs = ring.zero();
    for j in 0..n {
        let rest: Vec<i64> = s.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
        let term = ring.mul(&inst.mht_sum(&[s[j]], false)?, &signed_sum(inst, &rest)?);
        // (-1)^(n-j) with j counted from 1
        rhs = if (n - 1 - j).is_multiple_of(2) { ring.add(&rhs, &term) } else { ring.sub(&rhs, &term) };
    }
    let residual = ring.sub(&lhs, &rhs);
    Ok(MhtCheck { lhs, rhs, residual })
}

fn reorder_sum<R: Ring>(inst: &MhtInstance<R>, multiset: &[i64]) -> Result<R::Elem> {
    if multiset.is_empty() {
        return Ok(inst.ring().one());
    }
    let ring = inst.ring();
    let mut acc = ring.zero();
    for r in distinct_reorders(multiset) {
        acc = ring.add(&acc, &inst.mht_sum(&r, false)?);
    }
    Ok(acc)
}

fn remove_one(items: &[i64], x: i64) -> Vec<i64> {
    let mut out = items.to_vec();
    let pos = out.iter().position(|&y| y == x).expect("element present");
    out.remove(pos);
    out
}

/// The characteristic-2 multiplicity identity; the right side is
///
/// ```text
///   sum_j sum_{i != j, k_i > 1} H(s_j) F(s_i - {s_j})
/// + sum_{j: k_j > 2}            H(s_j) F(s_j - {s_j})
/// + sum_{j: k_j > 1}            H(2 s_j) F(s_j - {2 s_j})
/// + phi sum_j                   H(s_j) F(s_0 - {s_j})
/// ```
///
/// with `F(M)` the sum of `H` over distinct reorders of `M` and `F` of the
/// empty multiset equal to 1.
pub fn check_thm_d<R: Ring>(inst: &MhtInstance<R>, cfg: &Thm3Config) -> Result<MhtCheck<R::Elem>> {
    let ring = inst.ring();
    if ring.characteristic() != 2 {
        return Err(MzvError::InvalidFamilyInput(format!("{} does not have characteristic 2", ring.describe())));
    }
    let mut seen = std::collections::HashSet::new();
    for &(s, k) in &cfg.pairs {
        if k == 0 {
            return Err(MzvError::InvalidFamilyInput(format!("multiplicity of {s} must be at least 1")));
        }
        let doubled = if k > 1 { Some(2 * s) } else { None };
        for x in std::iter::once(s).chain(doubled) {
            if !seen.insert(x) {
                return Err(MzvError::InvalidFamilyInput(format!("{x} appears twice among the s_i and 2 s_i")));
            }
        }
    }
    if cfg.pairs.is_empty() {
        return Err(MzvError::InvalidFamilyInput("empty pair list".into()));
    }
    inst.check_doubling()?;

    let phi = ring.from_int(cfg.phi() as i64);
    let mut lhs = ring.zero();
    for (i, &(_, k)) in cfg.pairs.iter().enumerate() {
        if k > 1 {
            lhs = ring.add(&lhs, &reorder_sum(inst, &cfg.s_doubled(i))?);
        }
    }
    let s0 = cfg.s0();
    lhs = ring.add(&lhs, &ring.mul(&phi, &reorder_sum(inst, &s0)?));

    let mut rhs = ring.zero();
    let mut push = |x: i64, rest: Vec<i64>, scale: Option<&R::Elem>| -> Result<()> {
        let mut term = ring.mul(&inst.mht_sum(&[x], false)?, &reorder_sum(inst, &rest)?);
        if let Some(c) = scale {
            term = ring.mul(c, &term);
        }
        rhs = ring.add(&rhs, &term);
        Ok(())
    };
    for (j, &(sj, kj)) in cfg.pairs.iter().enumerate() {
        for (i, &(_, ki)) in cfg.pairs.iter().enumerate() {
            if i != j && ki > 1 {
                push(sj, remove_one(&cfg.s_doubled(i), sj), None)?;
            }
        }
        if kj > 2 {
            push(sj, remove_one(&cfg.s_doubled(j), sj), None)?;
        }
        if kj > 1 {
            push(2 * sj, remove_one(&cfg.s_doubled(j), 2 * sj), None)?;
        }
        push(sj, remove_one(&s0, sj), Some(&phi))?;
    }
    let residual = ring.sub(&lhs, &rhs);
    Ok(MhtCheck { lhs, rhs, residual })
}

/// Shape of a random instance: `D = {1, ..., index_size}` and `S` the given
/// base values, closed under doubling when `doubling` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceShape {
    pub index_size: usize,
    pub base: Vec<i64>,
    pub doubling: bool,
}

/// A reproducible instance with uniformly drawn table entries. With
/// `doubling`, entries on `2s` are squares of the entries on `s`.
pub fn random_instance<R: RandomElem>(ring: R, seed: u64, shape: &InstanceShape) -> Result<MhtInstance<R>> {
    if shape.doubling && ring.characteristic() != 2 {
        return Err(MzvError::InvalidArgument(format!(
            "the doubling law needs characteristic 2, not {}",
            ring.describe()
        )));
    }
    let mut magma = shape.base.clone();
    if shape.doubling {
        magma.extend(shape.base.iter().map(|s| 2 * s));
    }
    magma.sort_by_key(|&s| (s.abs(), s));
    magma.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index: Vec<i64> = (1..=shape.index_size as i64).collect();
    let mut table: HashMap<(i64, i64), R::Elem> = HashMap::new();
    // smaller |s| first, so the square of h(d, s) is known when 2s arrives
    for &s in &magma {
        for &d in &index {
            let x = match table.get(&(d, s / 2)) {
                Some(half) if shape.doubling && s % 2 == 0 => ring.square(half),
                _ => ring.random(&mut rng),
            };
            table.insert((d, s), x);
        }
    }
    magma.sort_unstable();
    let mut inst = MhtInstance::new(ring, index, magma, |d, s| table[&(d, s)].clone())?;
    inst.seed = Some(seed);
    Ok(inst)
}

/// `h(d, s) = d^{-s}` over `Q` on `D = {1, ..., n}`.
pub fn classical_instance(n: usize, magma: Vec<i64>) -> Result<MhtInstance<Rationals>> {
    let index = (1..=n as i64).collect();
    MhtInstance::new(Rationals, index, magma, |d, s| {
        let d = num_rational::BigRational::from_integer(d.into());
        num_traits::pow::Pow::pow(d, -s as i32)
    })
}

/// What a harmonic run checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MhtTarget {
    Alternating(Vec<i64>),
    Multiplicity(Thm3Config),
}

/// Serializable outcome of one check on one random instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MhtReport {
    pub ring: String,
    pub seed: u64,
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
    pub zero: bool,
    pub instance: Value,
}

fn report<R: RandomElem>(ring: R, seed: u64, shape: &InstanceShape, target: &MhtTarget) -> Result<MhtReport> {
    let inst = random_instance(ring, seed, shape)?;
    let (check, identity) = match target {
        MhtTarget::Alternating(s) => (check_thm_c(&inst, s)?, format!("alternating {}", crate::algebra::parse::format_tuple(s))),
        MhtTarget::Multiplicity(cfg) => {
            (check_thm_d(&inst, cfg)?, format!("multiplicity {}", crate::algebra::parse::format_pairs(&cfg.pairs)))
        }
    };
    let r = inst.ring();
    Ok(MhtReport {
        ring: r.describe(),
        seed,
        identity,
        lhs: r.format(&check.lhs),
        rhs: r.format(&check.rhs),
        residual: r.format(&check.residual),
        zero: r.is_zero(&check.residual),
        instance: inst.to_json(),
    })
}

/// Builds a random instance over the chosen ring and checks `target` on it.
pub fn run_check(choice: &RingChoice, seed: u64, shape: &InstanceShape, target: &MhtTarget) -> Result<MhtReport> {
    match choice {
        RingChoice::IntegersMod(m) => report(IntegersMod::new(*m)?, seed, shape, target),
        RingChoice::TruncatedPoly { p, k } => report(TruncatedPoly::new(*p, *k)?, seed, shape, target),
        RingChoice::Rationals => report(Rationals, seed, shape, target),
        RingChoice::Fq(spec) => report(Fq::new(spec.clone()), seed, shape, target),
    }
}
