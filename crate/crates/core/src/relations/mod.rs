//! Formal `F_q`-linear relations among (products of) zeta values: the
//! universal families, trivial zeros, and evaluation under any flavor.

mod evaluate;
mod families;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{Fq, FqElem, Poly};
use crate::error::{MzvError, Result};
use crate::power_sums::PowerSums;
use crate::zeta::Composition;

pub use evaluate::{Certificate, Evaluation, Evaluator, RelationEvaluator, Verdict};
pub use families::{distinct_reorders, gen_thm2, gen_thm3, gen_thm_a, gen_thm_b, permutation_sign, Thm3Config};

/// Which construction produced a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "thm2")]
    Thm2,
    #[serde(rename = "thm3")]
    Thm3,
    #[serde(rename = "thm3star")]
    Thm3Star,
    #[serde(rename = "thmA")]
    ThmA,
    #[serde(rename = "thmB")]
    ThmB,
    #[serde(rename = "custom")]
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Thm2 => "thm2",
            Family::Thm3 => "thm3",
            Family::Thm3Star => "thm3star",
            Family::ThmA => "thmA",
            Family::ThmB => "thmB",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = MzvError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "thm2" => Family::Thm2,
            "thm3" => Family::Thm3,
            "thm3star" => Family::Thm3Star,
            "thmA" | "thma" => Family::ThmA,
            "thmB" | "thmb" => Family::ThmB,
            "custom" => Family::Custom,
            _ => return Err(MzvError::Parse(format!("unknown relation family {s:?}"))),
        })
    }
}

/// `coeff * prod zeta(factor)`; factors are kept sorted by depth, then
/// lexicographically, so equal products have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: FqElem,
    pub factors: Vec<Composition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalRelation {
    pub tag: Family,
    pub terms: Vec<Term>,
}

impl FormalRelation {
    /// Collects like terms (in order of first appearance) and drops zeros.
    pub fn from_terms<I>(field: &Fq, tag: Family, terms: I) -> Self
    where
        I: IntoIterator<Item = (FqElem, Vec<Composition>)>,
    {
        let mut order: Vec<Vec<Composition>> = Vec::new();
        let mut coeffs: HashMap<Vec<Composition>, FqElem> = HashMap::new();
        for (c, mut factors) in terms {
            factors.sort();
            match coeffs.get_mut(&factors) {
                Some(x) => *x = field.add(*x, c),
                None => {
                    coeffs.insert(factors.clone(), c);
                    order.push(factors);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|f| {
                let c = coeffs[&f];
                (!c.is_zero()).then_some(Term { coeff: c, factors: f })
            })
            .collect();
        FormalRelation { tag, terms }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every composition appearing in some factor.
    pub fn compositions(&self) -> Vec<Composition> {
        let mut out: Vec<Composition> = self.terms.iter().flat_map(|t| t.factors.iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// One JSON object per term, keys in a fixed order.
    pub fn to_jsonl(&self, field: &Fq) -> String {
        let mut out = String::new();
        for t in &self.terms {
            let factors: Vec<&[i64]> = t.factors.iter().map(|f| f.entries()).collect();
            let line = json!({
                "coeff": field.coords(t.coeff),
                "factors": factors,
                "tag": self.tag,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`Self::to_jsonl`]; the tag of the first
    /// line wins and an empty input is the empty custom relation.
    pub fn from_jsonl(field: &Fq, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Line {
            coeff: Vec<u32>,
            factors: Vec<Composition>,
            tag: Family,
        }
        let mut tag = None;
        let mut terms = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let l: Line = serde_json::from_str(line).map_err(|e| MzvError::Parse(format!("line {}: {e}", i + 1)))?;
            if l.factors.is_empty() {
                return Err(MzvError::Parse(format!("line {}: a term needs at least one factor", i + 1)));
            }
            tag.get_or_insert(l.tag);
            terms.push((field.from_coords(&l.coeff)?, l.factors));
        }
        Ok(Self::from_terms(field, tag.unwrap_or(Family::Custom), terms))
    }

    /// Human-readable form such as `z(1,2) + 2*z(2)*z(1,3)`.
    pub fn display(&self, field: &Fq) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let prod: Vec<String> = t.factors.iter().map(|f| format!("z{f}")).collect();
                let prod = prod.join("*");
                if t.coeff == FqElem::ONE {
                    prod
                } else {
                    format!("({})*{prod}", field.format_elem(t.coeff))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// `(q - 1) | s`.
pub fn is_q_even(s: i64, q: u32) -> bool {
    s.rem_euclid(q as i64 - 1) == 0
}

/// Structural trivial zeros of depth `r > 1` at the prime `v`, with
/// `L_m` the last degree where `S_d(-m)` is nonzero. Depth one is never
/// reported here.
pub fn is_trivial_zero(s: &Composition, v: &Poly, sums: &PowerSums) -> Result<bool> {
    let e = s.entries();
    let r = e.len() as i64;
    if r < 2 {
        return Ok(false);
    }
    let deg_v = v.degree().ok_or_else(|| MzvError::InvalidPrime("0".into()))? as i64;
    let mut l = vec![None; e.len()];
    for (i, &si) in e.iter().enumerate() {
        if si < 0 {
            let m = si.unsigned_abs();
            l[i] = Some(sums.vanish_degree(m, sums.default_cap(m))? as i64);
        }
    }
    for (i0, li) in l.iter().enumerate() {
        let Some(li) = *li else { continue };
        let i = i0 as i64 + 1;
        if r - i > li + deg_v {
            return Ok(true);
        }
        if deg_v > r - i && r - i > li {
            for (j0, lj) in l.iter().enumerate() {
                let Some(lj) = *lj else { continue };
                if i - (j0 as i64 + 1) > lj {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    fn comp(s: &[i64]) -> Composition {
        Composition::new(s.to_vec()).unwrap()
    }

    #[test]
    fn q_even() {
        assert!(is_q_even(6, 3));
        assert!(!is_q_even(4, 4));
        assert!(is_q_even(-6, 4));
        assert!((1..20).all(|s| is_q_even(s, 2)));
    }

    #[test]
    fn trivial_zero_examples() {
        let sums = PowerSums::from_spec(FieldSpec::with_q(2).unwrap());
        let t = Poly::monomial(1);
        assert!(!is_trivial_zero(&comp(&[1, -1, 1, 1]), &t, &sums).unwrap());
        assert!(is_trivial_zero(&comp(&[-1, 1, 1, 1, 1]), &t, &sums).unwrap());
        assert!(!is_trivial_zero(&comp(&[1, 2, 3]), &t, &sums).unwrap());
        assert!(!is_trivial_zero(&comp(&[-1]), &t, &sums).unwrap());
    }

    #[test]
    fn jsonl_round_trip() {
        let field = Fq::new(FieldSpec::with_q(9).unwrap());
        let a = field.generator();
        let rel = FormalRelation::from_terms(
            &field,
            Family::ThmA,
            vec![(a, vec![comp(&[2, 4])]), (FqElem::ONE, vec![comp(&[2, 6]), comp(&[4])])],
        );
        // factors are canonically ordered
        assert_eq!(rel.terms[1].factors, vec![comp(&[4]), comp(&[2, 6])]);
        let text = rel.to_jsonl(&field);
        assert_eq!(text.lines().next().unwrap(), r#"{"coeff":[0,1],"factors":[[2,4]],"tag":"thmA"}"#);
        assert_eq!(FormalRelation::from_jsonl(&field, &text).unwrap(), rel);
    }

    #[test]
    fn like_terms_cancel() {
        let field = Fq::new(FieldSpec::with_q(3).unwrap());
        let two = field.from_i64(2);
        let rel = FormalRelation::from_terms(
            &field,
            Family::Custom,
            vec![(FqElem::ONE, vec![comp(&[1]), comp(&[2])]), (two, vec![comp(&[2]), comp(&[1])])],
        );
        assert!(rel.is_empty());
    }
}
