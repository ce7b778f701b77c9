//! Generators for the universal relation families.

use std::collections::HashSet;

use itertools::Itertools;

use super::{is_q_even, Family, FormalRelation};
use crate::algebra::{Fq, FqElem};
use crate::error::{MzvError, Result};
use crate::zeta::Composition;

/// Multiplicity data `(s_i, k_i)` for the characteristic-2 families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm3Config {
    pub pairs: Vec<(i64, u32)>,
}

impl Thm3Config {
    pub fn new(pairs: Vec<(i64, u32)>) -> Self {
        Thm3Config { pairs }
    }

    /// `phi = sum k_i`.
    pub fn phi(&self) -> u32 {
        self.pairs.iter().map(|&(_, k)| k).sum()
    }

    /// Checks characteristic 2, `k_i >= 1`, and that the `s_i` together with
    /// the `2 s_i` for `k_i > 1` are pairwise distinct and `q`-even.
    pub fn validate(&self, field: &Fq) -> Result<()> {
        let bad = |m: String| Err(MzvError::InvalidFamilyInput(m));
        if field.p() != 2 {
            return bad(format!("multiplicity families need characteristic 2, got {}", field.p()));
        }
        if self.pairs.is_empty() {
            return bad("empty pair list".into());
        }
        let mut seen = HashSet::new();
        for &(s, k) in &self.pairs {
            if k == 0 {
                return bad(format!("multiplicity of {s} must be at least 1"));
            }
            let mut values = vec![s];
            if k > 1 {
                values.push(2 * s);
            }
            for x in values {
                if !is_q_even(x, field.q()) {
                    return bad(format!("{x} is not q-even for q = {}", field.q()));
                }
                if !seen.insert(x) {
                    return bad(format!("{x} appears twice among the s_i and 2 s_i"));
                }
            }
        }
        Ok(())
    }

    /// The multiset `s_0`: each `s_i` repeated `k_i` times.
    pub fn s0(&self) -> Vec<i64> {
        self.pairs.iter().flat_map(|&(s, k)| std::iter::repeat_n(s, k as usize)).collect()
    }

    /// `s_i`: `s_0` with two copies of `s_i` replaced by `2 s_i`.
    pub fn s_doubled(&self, i: usize) -> Vec<i64> {
        let mut out = Vec::new();
        for (j, &(s, k)) in self.pairs.iter().enumerate() {
            if j == i {
                out.extend(std::iter::repeat_n(s, k as usize - 2));
                out.push(2 * s);
            } else {
                out.extend(std::iter::repeat_n(s, k as usize));
            }
        }
        out
    }
}

/// Sign of a permutation given as a list of distinct indices.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All distinct orderings of a multiset, in lexicographic order.
pub fn distinct_reorders(items: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // standard next-permutation step
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

fn check_alternating_input(s: &Composition, field: &Fq) -> Result<()> {
    let e = s.entries();
    let bad = |m: String| Err(MzvError::InvalidFamilyInput(m));
    if e.len().is_multiple_of(2) {
        return bad(format!("{s} has even depth"));
    }
    if e.iter().collect::<HashSet<_>>().len() != e.len() {
        return bad(format!("{s} has repeated entries"));
    }
    if let Some(x) = e.iter().find(|&&x| !is_q_even(x, field.q())) {
        return bad(format!("{x} is not q-even for q = {}", field.q()));
    }
    Ok(())
}

fn comp(v: Vec<i64>) -> Composition {
    Composition::new(v).expect("nonempty")
}

fn signed_permutations(entries: &[i64]) -> impl Iterator<Item = (i64, Vec<i64>)> + '_ {
    (0..entries.len())
        .permutations(entries.len())
        .map(move |p| (permutation_sign(&p), p.iter().map(|&i| entries[i]).collect()))
}

/// `sum_sigma sgn(sigma) zeta(sigma(s))` for distinct `q`-even entries and
/// odd depth.
pub fn gen_thm2(s: &Composition, field: &Fq) -> Result<FormalRelation> {
    check_alternating_input(s, field)?;
    let terms = signed_permutations(s.entries()).map(|(sg, p)| (field.from_i64(sg), vec![comp(p)]));
    Ok(FormalRelation::from_terms(field, Family::Thm2, terms))
}

/// `sum_{i: k_i > 1} sum_{L_i} zeta + phi sum_{L_0} zeta` in characteristic 2.
pub fn gen_thm3(cfg: &Thm3Config, field: &Fq) -> Result<FormalRelation> {
    cfg.validate(field)?;
    let mut terms = Vec::new();
    for (i, &(_, k)) in cfg.pairs.iter().enumerate() {
        if k > 1 {
            for r in distinct_reorders(&cfg.s_doubled(i)) {
                terms.push((FqElem::ONE, vec![comp(r)]));
            }
        }
    }
    let phi = field.from_i64(cfg.phi() as i64);
    for r in distinct_reorders(&cfg.s0()) {
        terms.push((phi, vec![comp(r)]));
    }
    Ok(FormalRelation::from_terms(field, Family::Thm3, terms))
}

/// The product identity
/// `sum_sigma sgn(sigma) zeta(sigma(s)) = sum_j (-1)^(n-j) zeta(s_j) sum_tau sgn(tau) zeta(tau(s^j))`,
/// with `s^j` the tuple without its `j`-th entry, written as left minus right.
pub fn gen_thm_a(s: &Composition, field: &Fq) -> Result<FormalRelation> {
    check_alternating_input(s, field)?;
    let e = s.entries();
    let n = e.len();
    let mut terms: Vec<(FqElem, Vec<Composition>)> =
        signed_permutations(e).map(|(sg, p)| (field.from_i64(sg), vec![comp(p)])).collect();
    for j in 0..n {
        let rest: Vec<i64> = e.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
        let outer = if (n - 1 - j).is_multiple_of(2) { 1 } else { -1 };
        let single = comp(vec![e[j]]);
        if rest.is_empty() {
            terms.push((field.from_i64(-outer), vec![single]));
            continue;
        }
        for (sg, p) in signed_permutations(&rest) {
            terms.push((field.from_i64(-outer * sg), vec![single.clone(), comp(p)]));
        }
    }
    Ok(FormalRelation::from_terms(field, Family::ThmA, terms))
}

fn remove_one(items: &[i64], x: i64) -> Vec<i64> {
    let mut out = items.to_vec();
    let pos = out.iter().position(|&y| y == x).expect("element present");
    out.remove(pos);
    out
}

/// `zeta(x) * F(rest)` where `F` sums over the distinct reorders of `rest`
/// and `F` of the empty multiset is 1.
fn push_products(terms: &mut Vec<(FqElem, Vec<Composition>)>, coeff: FqElem, x: i64, rest: &[i64]) {
    if rest.is_empty() {
        terms.push((coeff, vec![comp(vec![x])]));
        return;
    }
    for r in distinct_reorders(rest) {
        terms.push((coeff, vec![comp(vec![x]), comp(r)]));
    }
}

/// The characteristic-2 product identity refining the multiplicity family,
/// written as left minus right. With `F(M)` the sum over distinct reorders
/// of a multiset `M`, the right side is
///
/// ```text
///   sum_j sum_{i != j, k_i > 1} zeta(s_j) F(s_i - {s_j})
/// + sum_{j: k_j > 2}            zeta(s_j) F(s_j - {s_j})
/// + sum_{j: k_j > 1}            zeta(2 s_j) F(s_j - {2 s_j})
/// + phi sum_j                   zeta(s_j) F(s_0 - {s_j})
/// ```
///
/// The first sum runs over every `j`, including those with `k_j = 2`.
pub fn gen_thm_b(cfg: &Thm3Config, field: &Fq) -> Result<FormalRelation> {
    let lhs = gen_thm3(cfg, field)?;
    let minus_one = field.from_i64(-1);
    let mut terms: Vec<(FqElem, Vec<Composition>)> =
        lhs.terms.into_iter().map(|t| (t.coeff, t.factors)).collect();
    let phi = field.from_i64(cfg.phi() as i64);
    let s0 = cfg.s0();
    for (j, &(sj, kj)) in cfg.pairs.iter().enumerate() {
        for (i, &(_, ki)) in cfg.pairs.iter().enumerate() {
            if i != j && ki > 1 {
                push_products(&mut terms, minus_one, sj, &remove_one(&cfg.s_doubled(i), sj));
            }
        }
        if kj > 2 {
            push_products(&mut terms, minus_one, sj, &remove_one(&cfg.s_doubled(j), sj));
        }
        if kj > 1 {
            push_products(&mut terms, minus_one, 2 * sj, &remove_one(&cfg.s_doubled(j), 2 * sj));
        }
        if !phi.is_zero() {
            push_products(&mut terms, field.mul(minus_one, phi), sj, &remove_one(&s0, sj));
        }
    }
    Ok(FormalRelation::from_terms(field, Family::ThmB, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    fn field(q: u64) -> Fq {
        Fq::new(FieldSpec::with_q(q).unwrap())
    }

    fn c(s: &[i64]) -> Composition {
        Composition::new(s.to_vec()).unwrap()
    }

    fn singles(rel: &FormalRelation, k: &Fq) -> Vec<(i64, String)> {
        rel.terms
            .iter()
            .map(|t| {
                let coeff = k.coords(t.coeff)[0] as i64;
                let f: Vec<String> = t.factors.iter().map(|f| f.to_string()).collect();
                (coeff, f.join("*"))
            })
            .collect()
    }

    #[test]
    fn alternating_sum_over_f3() {
        let k = field(3);
        let rel = gen_thm2(&c(&[2, 4, 6]), &k).unwrap();
        let expected = [
            (1, "(2,4,6)"),
            (2, "(2,6,4)"),
            (2, "(4,2,6)"),
            (1, "(4,6,2)"),
            (1, "(6,2,4)"),
            (2, "(6,4,2)"),
        ];
        let got = singles(&rel, &k);
        assert_eq!(got, expected.iter().map(|&(a, b)| (a, b.to_string())).collect::<Vec<_>>());
    }

    #[test]
    fn alternating_sum_rejects_bad_input() {
        let k = field(3);
        assert!(matches!(gen_thm2(&c(&[2, 2, 4]), &k), Err(MzvError::InvalidFamilyInput(_))));
        assert!(gen_thm2(&c(&[2, 4]), &k).is_err());
        assert!(gen_thm2(&c(&[1, 2, 4]), &k).is_err());
        let k2 = field(2);
        let rel = gen_thm2(&c(&[1, 2, 3]), &k2).unwrap();
        assert_eq!(rel.terms.len(), 6);
        assert!(rel.terms.iter().all(|t| t.coeff == FqElem::ONE));
    }

    #[test]
    fn antisymmetry_under_input_permutation() {
        let k = field(3);
        let a = gen_thm2(&c(&[2, 4, 6]), &k).unwrap();
        let b = gen_thm2(&c(&[4, 2, 6]), &k).unwrap();
        let neg = |t: &super::super::Term| (k.neg(t.coeff), t.factors.clone());
        let mut lhs: Vec<_> = a.terms.iter().map(neg).collect();
        let mut rhs: Vec<_> = b.terms.iter().map(|t| (t.coeff, t.factors.clone())).collect();
        lhs.sort_by(|x, y| x.1.cmp(&y.1));
        rhs.sort_by(|x, y| x.1.cmp(&y.1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplicity_family_examples() {
        let k = field(2);
        let rel = gen_thm3(&Thm3Config::new(vec![(1, 3)]), &k).unwrap();
        let got: Vec<String> = rel.terms.iter().map(|t| t.factors[0].to_string()).collect();
        assert_eq!(got, vec!["(1,2)", "(2,1)", "(1,1,1)"]);
        let rel = gen_thm3(&Thm3Config::new(vec![(1, 2)]), &k).unwrap();
        assert_eq!(rel.terms.len(), 1);
        assert_eq!(rel.terms[0].factors, vec![c(&[2])]);
        let rel = gen_thm3(&Thm3Config::new(vec![(1, 1)]), &k).unwrap();
        assert_eq!(rel.terms[0].factors, vec![c(&[1])]);
        assert!(gen_thm3(&Thm3Config::new(vec![(1, 1), (3, 1)]), &k).unwrap().terms.is_empty());
        assert!(gen_thm3(&Thm3Config::new(vec![(1, 2), (2, 1)]), &k).is_err());
        assert!(gen_thm3(&Thm3Config::new(vec![(2, 2)]), &field(3)).is_err());
        assert!(gen_thm3(&Thm3Config::new(vec![(1, 2)]), &field(4)).is_err());
    }

    #[test]
    fn product_identity_shapes() {
        let k3 = field(3);
        assert!(gen_thm_a(&c(&[2]), &k3).unwrap().is_empty());
        let k2 = field(2);
        let rel = gen_thm_a(&c(&[1, 2, 3]), &k2).unwrap();
        assert_eq!(rel.terms.iter().filter(|t| t.factors.len() == 1).count(), 6);
        assert_eq!(rel.terms.iter().filter(|t| t.factors.len() == 2).count(), 6);
        assert!(rel.terms.iter().all(|t| t.coeff == FqElem::ONE));
        // over F_3 the j = 2 products carry the sign (-1)^(3-2) on the right
        let rel = gen_thm_a(&c(&[2, 4, 6]), &k3).unwrap();
        let coeff = |f: Vec<Composition>| rel.terms.iter().find(|t| t.factors == f).unwrap().coeff;
        assert_eq!(coeff(vec![c(&[4]), c(&[2, 6])]), FqElem::ONE);
        assert_eq!(coeff(vec![c(&[4]), c(&[6, 2])]), k3.from_i64(2));
        assert_eq!(coeff(vec![c(&[2]), c(&[4, 6])]), k3.from_i64(2));
    }

    #[test]
    fn char2_product_identity_contains_the_multiplicity_family() {
        let k = field(2);
        let cfg = Thm3Config::new(vec![(1, 3)]);
        let b = gen_thm_b(&cfg, &k).unwrap();
        let singles: Vec<_> = b.terms.iter().filter(|t| t.factors.len() == 1).cloned().collect();
        assert_eq!(singles, gen_thm3(&cfg, &k).unwrap().terms);
        assert!(b.terms.iter().any(|t| t.factors == vec![c(&[1]), c(&[1, 1])]));
        // all multiplicities one and phi even: nothing left on either side
        assert!(gen_thm_b(&Thm3Config::new(vec![(1, 1), (3, 1)]), &k).unwrap().is_empty());
    }

    #[test]
    fn reorders_are_sets() {
        assert_eq!(distinct_reorders(&[1, 1, 2]), vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(distinct_reorders(&[3]), vec![vec![3]]);
        assert_eq!(distinct_reorders(&[1, 2, 3]).len(), 6);
    }
}
