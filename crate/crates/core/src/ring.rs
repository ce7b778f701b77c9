//! A minimal commutative-ring interface.
//!
//! Rings are context objects: elements are plain values and every operation
//! goes through the ring, so the same nested-sum code runs over `F_q`,
//! `F_q(t)`, `A/(v^N)` and the toy rings used by the harmonic engine.

use std::fmt::Debug;

pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Characteristic of the ring, 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Exact textual rendering of an element.
    fn format(&self, a: &Self::Elem) -> String;
    /// Short description of the ring itself, e.g. `Z/12`.
    fn describe(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}
