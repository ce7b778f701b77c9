//! The finite field `F_q`, `q = p^f`, on a fixed polynomial basis over `F_p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{MzvError, Result};
use crate::ring::Ring;

/// Largest field size supported. Elements are packed into a `u32`.
pub const MAX_Q: u64 = 1 << 24;

/// Fields up to this size get full addition/multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// Characteristic, degree and defining polynomial of `F_q`.
///
/// `modulus` holds the coefficients over `F_p` from the constant term up and
/// is monic of degree `f`. For prime fields it is `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    f: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, vec![0, 1])
    }

    pub fn new(p: u32, f: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(MzvError::InvalidField(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(MzvError::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(f).filter(|&q| q <= MAX_Q);
        if q.is_none() {
            return Err(MzvError::InvalidField(format!("{p}^{f} exceeds {MAX_Q}")));
        }
        if f == 1 {
            return Ok(FieldSpec { p, f, modulus: vec![0, 1] });
        }
        let mut modulus = modulus;
        for c in modulus.iter_mut() {
            *c %= p;
        }
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() != f as usize + 1 || modulus[f as usize] != 1 {
            return Err(MzvError::InvalidField(format!(
                "modulus must be monic of degree {f}"
            )));
        }
        if !fp_irreducible_by_trial_division(p, &modulus) {
            return Err(MzvError::InvalidField(format!(
                "modulus {} is reducible over F_{p}",
                format_fp_poly(&modulus, 'x')
            )));
        }
        Ok(FieldSpec { p, f, modulus })
    }

    /// `F_q` with the lexicographically first monic irreducible modulus.
    pub fn with_q(q: u64) -> Result<Self> {
        let (p, f) = prime_power(q)
            .ok_or_else(|| MzvError::InvalidField(format!("{q} is not a prime power")))?;
        if f == 1 {
            return Self::prime(p);
        }
        let count = (p as u64).pow(f);
        for idx in 0..count {
            let mut modulus = digits(idx, p, f as usize);
            modulus.push(1);
            if modulus[0] != 0 && fp_irreducible_by_trial_division(p, &modulus) {
                return Self::new(p, f, modulus);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f == 1 {
            write!(f, "q={}", self.q())
        } else {
            write!(f, "q={};modulus={}", self.q(), format_fp_poly(&self.modulus, 'x'))
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_power(q: u64) -> Option<(u32, u32)> {
    if !(2..=MAX_Q).contains(&q) {
        return None;
    }
    let mut p = 2u64;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p as u32, f))
}

fn digits(mut n: u64, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % base as u64) as u32);
        n /= base as u64;
    }
    out
}

fn format_fp_poly(coeffs: &[u32], var: char) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn fp_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p as u64;
        if lead != 0 {
            let base = r.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                r[base + i] = (r[base + i] + (p as u64 - lead) * mc as u64) % p as u64;
            }
        }
    }
    r.into_iter().map(|c| (c % p as u64) as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2` over `F_p`.
fn fp_irreducible_by_trial_division(p: u32, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx, p, d);
            g.push(1);
            if fp_rem(p, m, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// An element of `F_q`, packed as `sum coords[i] * p^i`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// Packed index in `[0, q)`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

struct FqInner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
    inv: Option<Vec<u32>>,
    neg: Option<Vec<u32>>,
}

/// Arithmetic context for `F_q`. Cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0.spec)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Fq {}

impl Fq {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q();
        let mut inner = FqInner { spec, q, tables: None, inv: None, neg: None };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = slow_add(&inner, a, b);
                    mul[a as usize * n + b as usize] = slow_mul(&inner, a, b);
                }
            }
            inner.tables = Some(Tables { add, mul });
        }
        if q <= 1 << 16 {
            let mut inv = vec![0u32; q as usize];
            for a in 1..q {
                if inv[a as usize] == 0 {
                    let b = slow_inv(&inner, a);
                    inv[a as usize] = b;
                    inv[b as usize] = a;
                }
            }
            inner.inv = Some(inv);
            let p = inner.spec.p;
            let f = inner.spec.f as usize;
            let neg = (0..q)
                .map(|a| {
                    let c = digits(a as u64, p, f);
                    c.iter().rev().fold(0, |acc, &x| acc * p + (p - x) % p)
                })
                .collect();
            inner.neg = Some(neg);
        }
        Fq(Arc::new(inner))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.f
    }

    pub fn elem(&self, index: u32) -> Result<FqElem> {
        if index < self.0.q {
            Ok(FqElem(index))
        } else {
            Err(MzvError::InvalidArgument(format!("{index} is not an element index of F_{}", self.0.q)))
        }
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    /// The basis generator `a` (the class of `x`). Only meaningful when `f > 1`.
    pub fn generator(&self) -> FqElem {
        if self.0.spec.f == 1 {
            FqElem(0)
        } else {
            FqElem(self.0.spec.p)
        }
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        digits(a.0 as u64, self.0.spec.p, self.0.spec.f as usize)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FqElem> {
        let p = self.0.spec.p;
        if coords.len() != self.0.spec.f as usize {
            return Err(MzvError::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.0.spec.f,
                coords.len()
            )));
        }
        let mut idx = 0u32;
        for &c in coords.iter().rev() {
            if c >= p {
                return Err(MzvError::InvalidArgument(format!("coordinate {c} not reduced mod {p}")));
            }
            idx = idx * p + c;
        }
        Ok(FqElem(idx))
    }

    pub fn from_i64(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.spec.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.spec.f == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= inner.q { s - inner.q } else { s });
        }
        match &inner.tables {
            Some(t) => FqElem(t.add[(a.0 * inner.q + b.0) as usize]),
            None => FqElem(slow_add(inner, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.spec.f == 1 {
            return FqElem(if a.0 == 0 { 0 } else { inner.q - a.0 });
        }
        if let Some(t) = &inner.neg {
            return FqElem(t[a.0 as usize]);
        }
        let p = inner.spec.p;
        let c: Vec<u32> = self.coords(a).into_iter().map(|c| (p - c) % p).collect();
        self.from_coords(&c).expect("reduced coordinates")
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.spec.f == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % inner.q as u64) as u32);
        }
        match &inner.tables {
            Some(t) => FqElem(t.mul[(a.0 * inner.q + b.0) as usize]),
            None => FqElem(slow_mul(inner, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(MzvError::DivisionByZero);
        }
        Ok(match &self.0.inv {
            Some(t) => FqElem(t[a.0 as usize]),
            None => FqElem(slow_inv(&self.0, a.0)),
        })
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut acc = FqElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Renders an element as an integer (prime fields) or a polynomial in `a`.
    pub fn format_elem(&self, a: FqElem) -> String {
        if self.0.spec.f == 1 {
            a.0.to_string()
        } else {
            format_fp_poly(&self.coords(a), 'a')
        }
    }
}

fn slow_add(inner: &FqInner, a: u32, b: u32) -> u32 {
    let p = inner.spec.p;
    let f = inner.spec.f as usize;
    let (ca, cb) = (digits(a as u64, p, f), digits(b as u64, p, f));
    let mut idx = 0;
    for i in (0..f).rev() {
        idx = idx * p + (ca[i] + cb[i]) % p;
    }
    idx
}

fn slow_mul(inner: &FqInner, a: u32, b: u32) -> u32 {
    let p = inner.spec.p;
    let f = inner.spec.f as usize;
    let (ca, cb) = (digits(a as u64, p, f), digits(b as u64, p, f));
    let mut prod = vec![0u32; 2 * f - 1];
    for i in 0..f {
        for j in 0..f {
            prod[i + j] = ((prod[i + j] as u64 + ca[i] as u64 * cb[j] as u64) % p as u64) as u32;
        }
    }
    let r = fp_rem(p, &prod, &inner.spec.modulus);
    let mut idx = 0;
    for i in (0..f).rev() {
        idx = idx * p + r.get(i).copied().unwrap_or(0);
    }
    idx
}

// a^(q-2) by square-and-multiply on the slow path.
fn slow_inv(inner: &FqInner, a: u32) -> u32 {
    let mut e = inner.q as u64 - 2;
    let mut acc = 1u32;
    let mut base = a;
    let m = |x: u32, y: u32| {
        if inner.spec.f == 1 {
            ((x as u64 * y as u64) % inner.q as u64) as u32
        } else {
            slow_mul(inner, x, y)
        }
    };
    while e > 0 {
        if e & 1 == 1 {
            acc = m(acc, base);
        }
        base = m(base, base);
        e >>= 1;
    }
    acc
}

impl Ring for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    fn one(&self) -> FqElem {
        FqElem::ONE
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::add(self, *a, *b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        Fq::neg(self, *a)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> FqElem {
        self.from_i64(n)
    }
    fn characteristic(&self) -> u64 {
        self.p() as u64
    }
    fn format(&self, a: &FqElem) -> String {
        self.format_elem(*a)
    }
    fn describe(&self) -> String {
        format!("F_{}", self.q())
    }
}
