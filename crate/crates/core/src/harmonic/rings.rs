//! Coefficient rings for multiple harmonic type sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use crate::algebra::parse::parse_field_spec;
use crate::algebra::{FieldSpec, Fq, FqElem};
use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// `Z/m` for `m >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegersMod {
    m: u64,
}

impl IntegersMod {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(MzvError::InvalidArgument(format!("modulus {m} must be at least 2")));
        }
        Ok(IntegersMod { m })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }
}

impl Ring for IntegersMod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.m as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.m - a % self.m) % self.m
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.m as i64) as u64
    }
    fn characteristic(&self) -> u64 {
        self.m
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        format!("Z/{}", self.m)
    }
}

/// `F_p[x]/(x^k)`, elements as coefficient vectors of length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    p: u64,
    k: usize,
}

impl TruncatedPoly {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if FieldSpec::prime(p as u32).is_err() || p > u32::MAX as u64 {
            return Err(MzvError::InvalidPrime(p.to_string()));
        }
        if k == 0 {
            return Err(MzvError::InvalidArgument("truncation order must be at least 1".into()));
        }
        Ok(TruncatedPoly { p, k })
    }

    pub fn x(&self) -> Vec<u64> {
        let mut out = vec![0; self.k];
        if self.k > 1 {
            out[1] = 1;
        }
        out
    }
}

impl Ring for TruncatedPoly {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        let mut out = vec![0; self.k];
        out[0] = 1;
        out
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut out = vec![0; self.k];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in b[..self.k - i].iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        out
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn from_int(&self, n: i64) -> Vec<u64> {
        let mut out = vec![0; self.k];
        out[0] = n.rem_euclid(self.p as i64) as u64;
        out
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn format(&self, a: &Vec<u64>) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
    fn describe(&self) -> String {
        format!("F_{}[x]/(x^{})", self.p, self.k)
    }
}

/// `Q` with arbitrary precision.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        "Q".into()
    }
}

/// Rings that can produce reproducible random elements.
pub trait RandomElem: Ring {
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}

impl RandomElem for IntegersMod {
    fn random(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..self.m)
    }
}

impl RandomElem for TruncatedPoly {
    fn random(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.k).map(|_| rng.gen_range(0..self.p)).collect()
    }
}

impl RandomElem for Rationals {
    fn random(&self, rng: &mut ChaCha8Rng) -> BigRational {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=9);
        BigRational::new(num.into(), den.into())
    }
}

impl RandomElem for Fq {
    fn random(&self, rng: &mut ChaCha8Rng) -> FqElem {
        self.elem(rng.gen_range(0..self.q())).expect("index in range")
    }
}

/// A supported coefficient ring, parsed from `Z/12`, `F_2[x]/(x^8)`, `Q`
/// or a field spec such as `q=4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingChoice {
    IntegersMod(u64),
    TruncatedPoly { p: u64, k: usize },
    Rationals,
    Fq(FieldSpec),
}

impl RingChoice {
    pub fn characteristic(&self) -> u64 {
        match self {
            RingChoice::IntegersMod(m) => *m,
            RingChoice::TruncatedPoly { p, .. } => *p,
            RingChoice::Rationals => 0,
            RingChoice::Fq(spec) => spec.p() as u64,
        }
    }
}

impl fmt::Display for RingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingChoice::IntegersMod(m) => write!(f, "Z/{m}"),
            RingChoice::TruncatedPoly { p, k } => write!(f, "F_{p}[x]/(x^{k})"),
            RingChoice::Rationals => f.write_str("Q"),
            RingChoice::Fq(spec) => write!(f, "{spec}"),
        }
    }
}

impl FromStr for RingChoice {
    type Err = MzvError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || MzvError::Parse(format!("unknown ring {s:?}"));
        if s == "Q" {
            return Ok(RingChoice::Rationals);
        }
        if let Some(m) = s.strip_prefix("Z/") {
            let m: u64 = m.parse().map_err(|_| bad())?;
            IntegersMod::new(m)?;
            return Ok(RingChoice::IntegersMod(m));
        }
        if let Some(rest) = s.strip_prefix("F_") {
            let (p, k) = rest.split_once("[x]/(x^").ok_or_else(bad)?;
            let k = k.strip_suffix(')').ok_or_else(bad)?;
            let (p, k) = (p.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?);
            TruncatedPoly::new(p, k)?;
            return Ok(RingChoice::TruncatedPoly { p, k });
        }
        if s.starts_with("q=") {
            return Ok(RingChoice::Fq(parse_field_spec(s)?));
        }
        Err(bad())
    }
}
