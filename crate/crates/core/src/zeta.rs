//! Truncated, finite and `v`-adic multiple zeta values, plain and star.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::parse::{format_tuple, parse_tuple};
use crate::algebra::{Fq, Poly, RationalFn, ResidueElem, ResidueRing, Valuation};
use crate::error::{MzvError, Result};
use crate::power_sums::PowerSums;
use crate::ring::Ring;

/// An exponent tuple `s = (s_1, ..., s_r)` with `r >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Composition(Vec<i64>);

impl Composition {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(MzvError::InvalidArgument("a composition needs at least one entry".into()));
        }
        Ok(Composition(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// `sum s_i`, defined only when every entry is positive.
    pub fn weight(&self) -> Option<i64> {
        self.0.iter().all(|&s| s > 0).then(|| self.0.iter().sum())
    }

    /// `sum |s_i|`, defined for every composition.
    pub fn abs_weight(&self) -> i64 {
        self.0.iter().map(|s| s.abs()).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&s| s > 0)
    }
}

impl TryFrom<Vec<i64>> for Composition {
    type Error = MzvError;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<i64> {
    fn from(c: Composition) -> Vec<i64> {
        c.0
    }
}

impl FromStr for Composition {
    type Err = MzvError;

    fn from_str(s: &str) -> Result<Self> {
        Composition::new(parse_tuple(s)?)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tuple(&self.0))
    }
}

/// Orders by depth, then lexicographically.
impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationConfig {
    /// Chains use top index `d_1 < d`.
    pub d: usize,
    /// `v`-adic precision.
    pub n: u32,
    pub star: bool,
}

impl TruncationConfig {
    pub fn new(d: usize, n: u32, star: bool) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(MzvError::InvalidArgument("truncation needs D >= 1 and N >= 1".into()));
        }
        Ok(TruncationConfig { d, n, star })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizationReport {
    /// Partial sum over chains with `d_1 < D`.
    pub value: ResidueElem,
    /// Smallest `D'` such that every partial sum for `D'..=D` equals `value`.
    pub stable_from: usize,
    /// The last two partial sums agree and every `S~_{D-1}(s_i)` vanishes
    /// modulo `v^N`. This is a heuristic signal.
    pub stabilized: bool,
    /// `D - 1 > N deg v`: all later power sums vanish modulo `v^N`, so the
    /// value is the limit modulo `v^N`.
    pub certified: bool,
    /// `v`-adic valuation of `value`.
    pub valuation: Valuation,
}

/// Sums of `prod term(d_i, i)` over chains `d_1 > ... > d_r >= 0`
/// (`d_1 >= ... >= d_r` when `star`) for every top bound.
///
/// Returns `P` with `P[e]` the sum over chains with `d_1 < e`, for
/// `e = 0..=top`. Runs in `O(r * top)` ring operations.
pub fn nested_partial_sums<R, F>(ring: &R, top: usize, depth: usize, star: bool, mut term: F) -> Result<Vec<R::Elem>>
where
    R: Ring,
    F: FnMut(usize, usize) -> Result<R::Elem>,
{
    // g[e] for the current suffix s_j..s_r; the empty suffix sums to 1.
    let mut g: Vec<R::Elem> = vec![ring.one(); top + 1];
    for j in (0..depth).rev() {
        let mut next = Vec::with_capacity(top + 1);
        next.push(ring.zero());
        for e in 0..top {
            let tail = if star { &g[e + 1] } else { &g[e] };
            let contribution = if ring.is_zero(tail) { ring.zero() } else { ring.mul(&term(e, j)?, tail) };
            let acc = ring.add(&next[e], &contribution);
            next.push(acc);
        }
        g = next;
    }
    Ok(g)
}

/// Evaluates zeta values over one field, sharing a power-sum cache.
#[derive(Clone, Debug)]
pub struct ZetaEngine {
    sums: Arc<PowerSums>,
}

impl ZetaEngine {
    pub fn new(field: Fq) -> Self {
        ZetaEngine { sums: Arc::new(PowerSums::new(field)) }
    }

    pub fn with_power_sums(sums: Arc<PowerSums>) -> Self {
        ZetaEngine { sums }
    }

    pub fn power_sums(&self) -> &Arc<PowerSums> {
        &self.sums
    }

    pub fn field(&self) -> &Fq {
        self.sums.field()
    }

    /// Exact `zeta(D, s)` (or its star version) in `F_q(t)`.
    pub fn truncated_mzv(&self, d: usize, s: &Composition, star: bool) -> Result<RationalFn> {
        Ok(self.truncated_partials(d, s, star)?.pop().expect("nonempty"))
    }

    /// Exact partial sums for every top bound `0..=D`.
    pub fn truncated_partials(&self, d: usize, s: &Composition, star: bool) -> Result<Vec<RationalFn>> {
        let e = s.entries();
        nested_partial_sums(self.sums.function_field(), d, e.len(), star, |deg, j| Ok(self.sums.exact(deg, e[j])))
    }

    /// Finite MZV: chains with `d_1 < deg v`, reduced modulo `v`.
    pub fn finite_mzv(&self, v: &Poly, s: &Composition, star: bool) -> Result<ResidueElem> {
        let rr = ResidueRing::new(self.field().clone(), v.clone(), 1)?;
        self.finite_mzv_in(&rr, s, star)
    }

    pub fn finite_mzv_in(&self, rr: &ResidueRing, s: &Composition, star: bool) -> Result<ResidueElem> {
        let top = rr.prime().degree().expect("positive degree");
        let e = s.entries();
        let mut sums = nested_partial_sums(rr, top, e.len(), star, |deg, j| self.sums.residue(rr, deg, e[j], false))?;
        Ok(sums.pop().expect("nonempty"))
    }

    /// `v`-adic partial sum with `d_1 < cfg.d`, modulo `v^N`.
    pub fn vadic_mzv(&self, v: &Poly, s: &Composition, cfg: TruncationConfig) -> Result<StabilizationReport> {
        let rr = ResidueRing::new(self.field().clone(), v.clone(), cfg.n)?;
        self.vadic_mzv_in(&rr, s, cfg.d, cfg.star)
    }

    pub fn vadic_mzv_in(&self, rr: &ResidueRing, s: &Composition, d: usize, star: bool) -> Result<StabilizationReport> {
        if d == 0 {
            return Err(MzvError::InvalidArgument("truncation needs D >= 1".into()));
        }
        let e = s.entries();
        let partials = nested_partial_sums(rr, d, e.len(), star, |deg, j| self.sums.residue(rr, deg, e[j], true))?;
        let value = partials[d].clone();
        let mut stable_from = d;
        while stable_from > 1 && partials[stable_from - 1] == value {
            stable_from -= 1;
        }
        let mut window_vanishes = true;
        for &sj in e {
            if !self.sums.residue(rr, d - 1, sj, true)?.is_zero() {
                window_vanishes = false;
                break;
            }
        }
        let stabilized = d >= 2 && partials[d - 1] == value && window_vanishes;
        let certified = d - 1 > rr.dimension();
        let valuation = rr.valuation(&value);
        Ok(StabilizationReport { value, stable_from, stabilized, certified, valuation })
    }

    /// Runs [`Self::vadic_mzv_in`] with the smallest `D` in `d_start..=d_max`
    /// that stabilizes, or at `d_max` if none does.
    pub fn vadic_mzv_auto(
        &self,
        rr: &ResidueRing,
        s: &Composition,
        d_start: usize,
        d_max: usize,
        star: bool,
    ) -> Result<StabilizationReport> {
        let mut d = d_start.max(1);
        loop {
            let report = self.vadic_mzv_in(rr, s, d, star)?;
            if report.stabilized || d >= d_max {
                return Ok(report);
            }
            d += 1;
        }
    }
}
