//! Linear relations among `v`-adic zeta values at finite precision, and
//! their comparison with the universal families.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{FieldSpec, Fq, FqElem, FqMatrix, Poly, ResidueRing};
use crate::error::{MzvError, Result};
use crate::relations::{gen_thm2, gen_thm3, is_q_even, is_trivial_zero, Family, FormalRelation, Term, Thm3Config};
use crate::zeta::{Composition, StabilizationReport, ZetaEngine};

/// Truncation used by [`SearchScope::new`].
pub const DEFAULT_TRUNCATION: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchScope {
    pub field: FieldSpec,
    pub v: Poly,
    pub weight_max: i64,
    pub depth_max: usize,
    pub q_even_only: bool,
    /// Also enumerate tuples with negative entries, `1 <= |s_i|` and
    /// `sum |s_i| <= weight_max`.
    pub include_negatives: bool,
    /// Partial sums use `d_1 < d`.
    pub d: usize,
    pub n: u32,
}

impl SearchScope {
    pub fn new(field: FieldSpec, v: Poly, weight_max: i64, depth_max: usize, n: u32) -> Self {
        SearchScope {
            field,
            v,
            weight_max,
            depth_max,
            q_even_only: false,
            include_negatives: false,
            d: DEFAULT_TRUNCATION,
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(MzvError::InvalidScope(m.into()));
        if self.weight_max < 1 {
            return bad("weight_max must be at least 1");
        }
        if self.depth_max < 1 {
            return bad("depth_max must be at least 1");
        }
        if self.n < 1 {
            return bad("precision must be at least 1");
        }
        if self.d < 1 {
            return bad("truncation must be at least 1");
        }
        self.residue_ring().map(|_| ())
    }

    pub fn residue_ring(&self) -> Result<ResidueRing> {
        ResidueRing::new(Fq::new(self.field.clone()), self.v.clone(), self.n)
            .map_err(|e| MzvError::InvalidScope(e.to_string()))
    }

    fn allowed(&self, s: i64) -> bool {
        s != 0 && (!self.q_even_only || is_q_even(s, self.field.q()))
    }
}

/// All compositions in scope, ordered by depth and then lexicographically.
pub fn enumerate_tuples(scope: &SearchScope) -> Result<Vec<Composition>> {
    scope.validate()?;
    let w = scope.weight_max;
    let lo = if scope.include_negatives { -w } else { 1 };
    let values: Vec<i64> = (lo..=w).filter(|&s| scope.allowed(s)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn extend(values: &[i64], budget: i64, depth_left: usize, cur: &mut Vec<i64>, out: &mut Vec<Composition>) {
        if !cur.is_empty() {
            out.push(Composition::new(cur.clone()).expect("nonempty"));
        }
        if depth_left == 0 {
            return;
        }
        for &s in values {
            if s.abs() <= budget {
                cur.push(s);
                extend(values, budget - s.abs(), depth_left - 1, cur, out);
                cur.pop();
            }
        }
    }
    extend(&values, w, scope.depth_max, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

/// Columns of `F_q`-coordinates of `zeta_v(s) mod v^N` on the basis
/// `t^i mod v^N`, one per tuple, with the stabilization report of each.
pub fn value_matrix(
    engine: &ZetaEngine,
    tuples: &[Composition],
    scope: &SearchScope,
) -> Result<(FqMatrix, Vec<StabilizationReport>)> {
    scope.validate()?;
    let rr = scope.residue_ring()?;
    let mut columns = Vec::with_capacity(tuples.len());
    let mut reports = Vec::with_capacity(tuples.len());
    for s in tuples {
        let rep = engine.vadic_mzv_in(&rr, s, scope.d, false)?;
        columns.push(rr.coords(&rep.value));
        reports.push(rep);
    }
    let matrix = FqMatrix::from_columns(engine.field().clone(), rr.dimension(), &columns)?;
    Ok((matrix, reports))
}

/// A column counts as settled when it stabilized or is certified.
pub fn is_settled(report: &StabilizationReport) -> bool {
    report.stabilized || report.certified
}

/// Nullspace basis of the value matrix of `tuples`, as coefficient vectors.
pub fn kernel_vectors(engine: &ZetaEngine, tuples: &[Composition], scope: &SearchScope) -> Result<Vec<Vec<FqElem>>> {
    Ok(value_matrix(engine, tuples, scope)?.0.nullspace())
}

fn vector_to_relation(field: &Fq, tuples: &[Composition], x: &[FqElem]) -> FormalRelation {
    let terms = tuples.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(s, &c)| (c, vec![s.clone()]));
    FormalRelation::from_terms(field, Family::Custom, terms)
}

/// A basis of the relations modulo `v^N` among the tuples in scope.
pub fn find_relations(engine: &ZetaEngine, scope: &SearchScope) -> Result<Vec<FormalRelation>> {
    let tuples = enumerate_tuples(scope)?;
    let kernel = kernel_vectors(engine, &tuples, scope)?;
    Ok(kernel.iter().map(|x| vector_to_relation(engine.field(), &tuples, x)).collect())
}

/// Coordinates of a single-factor relation on `tuples`; `None` if it uses a
/// product or a tuple outside the list.
fn relation_vector(field: &Fq, rel: &FormalRelation, index: &HashMap<&Composition, usize>) -> Option<Vec<FqElem>> {
    let mut x = vec![FqElem::ZERO; index.len()];
    for Term { coeff, factors } in &rel.terms {
        let [s] = factors.as_slice() else { return None };
        let &i = index.get(s)?;
        x[i] = field.add(x[i], *coeff);
    }
    Some(x)
}

/// A universal relation restricted to the scope, with a readable label.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalRelation {
    pub label: String,
    pub relation: FormalRelation,
}

/// The universal relations whose tuples all lie in `tuples`: alternating
/// sums over distinct `q`-even sets of odd size, the characteristic-2
/// multiplicity family, and unit relations for trivial zeros (including
/// depth-one `q`-even values).
pub fn universal_relations(engine: &ZetaEngine, tuples: &[Composition], scope: &SearchScope) -> Result<Vec<UniversalRelation>> {
    let field = engine.field();
    let q = field.q();
    let in_scope: HashMap<&Composition, usize> = tuples.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let fits = |rel: &FormalRelation| !rel.is_empty() && rel.compositions().iter().all(|s| in_scope.contains_key(s));
    let w = scope.weight_max;
    let lo = if scope.include_negatives { -w } else { 1 };
    let q_even: Vec<i64> = (lo..=w).filter(|&s| s != 0 && is_q_even(s, q)).collect();
    let mut out = Vec::new();

    // distinct q-even sets of odd size
    let mut sets = Vec::new();
    subsets(&q_even, w, scope.depth_max, &mut Vec::new(), &mut sets);
    for set in sets.into_iter().filter(|s| s.len() % 2 == 1) {
        let s = Composition::new(set).expect("nonempty");
        let rel = gen_thm2(&s, field)?;
        if fits(&rel) {
            out.push(UniversalRelation { label: format!("thm2 {s}"), relation: rel });
        }
    }

    if field.p() == 2 {
        let mut configs = Vec::new();
        multiplicities(&q_even, 0, w, scope.depth_max, &mut Vec::new(), &mut configs);
        for pairs in configs {
            let cfg = Thm3Config::new(pairs);
            if cfg.validate(field).is_err() {
                continue;
            }
            let rel = gen_thm3(&cfg, field)?;
            if fits(&rel) {
                let label = crate::algebra::parse::format_pairs(&cfg.pairs);
                out.push(UniversalRelation { label: format!("thm3 {label}"), relation: rel });
            }
        }
    }

    for s in tuples {
        let e = s.entries();
        let unit = if e.len() == 1 {
            e[0] > 0 && is_q_even(e[0], q)
        } else {
            is_trivial_zero(s, &scope.v, engine.power_sums())?
        };
        if unit {
            let rel = FormalRelation::from_terms(field, Family::Custom, [(FqElem::ONE, vec![s.clone()])]);
            out.push(UniversalRelation { label: format!("zero {s}"), relation: rel });
        }
    }
    Ok(out)
}

fn subsets(values: &[i64], budget: i64, size_left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    if size_left == 0 {
        return;
    }
    for (i, &s) in values.iter().enumerate() {
        if s.abs() <= budget {
            cur.push(s);
            subsets(&values[i + 1..], budget - s.abs(), size_left - 1, cur, out);
            cur.pop();
        }
    }
}

fn multiplicities(
    values: &[i64],
    start: usize,
    budget: i64,
    phi_left: usize,
    cur: &mut Vec<(i64, u32)>,
    out: &mut Vec<Vec<(i64, u32)>>,
) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    for i in start..values.len() {
        let s = values[i];
        for k in 1..=phi_left {
            if s.abs() * k as i64 > budget {
                break;
            }
            cur.push((s, k as u32));
            multiplicities(values, i + 1, budget - s.abs() * k as i64, phi_left - k, cur, out);
            cur.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScopeSummary {
    pub q: u32,
    pub field: String,
    pub v: String,
    pub weight_max: i64,
    pub depth_max: usize,
    pub q_even_only: bool,
    pub include_negatives: bool,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub tuples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub scope: ScopeSummary,
    pub dim_found: usize,
    pub dim_universal: usize,
    /// The universal span lies inside the found relations.
    pub containment: bool,
    /// `dim(found + universal) - dim(universal)`.
    pub residual: usize,
    pub unstabilized_columns: Vec<String>,
    /// Found relations, valid modulo `v^N`.
    pub relations: Vec<String>,
    /// Universal relations missing from the found span.
    pub missing: Vec<String>,
    /// Found relations completing the universal span to the found span:
    /// candidate non-universal relations.
    pub witnesses: Vec<String>,
}

/// Compares relations found on `scope` with the universal span there.
pub fn compare_with_universal(engine: &ZetaEngine, found: &[FormalRelation], scope: &SearchScope) -> Result<ComparisonReport> {
    let tuples = enumerate_tuples(scope)?;
    let (_, reports) = value_matrix(engine, &tuples, scope)?;
    compare_on(engine, found, scope, &tuples, &reports)
}

fn compare_on(
    engine: &ZetaEngine,
    found: &[FormalRelation],
    scope: &SearchScope,
    tuples: &[Composition],
    reports: &[StabilizationReport],
) -> Result<ComparisonReport> {
    let field = engine.field();
    let index: HashMap<&Composition, usize> = tuples.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut found_rows = Vec::with_capacity(found.len());
    for rel in found {
        let x = relation_vector(field, rel, &index)
            .ok_or_else(|| MzvError::ScopeMismatch(format!("{} is not a relation among the scope's tuples", rel.display(field))))?;
        found_rows.push(x);
    }
    let universal = universal_relations(engine, tuples, scope)?;
    let uni_rows: Vec<Vec<FqElem>> =
        universal.iter().map(|u| relation_vector(field, &u.relation, &index).expect("restricted to scope")).collect();

    let cols = tuples.len();
    let f = FqMatrix::from_rows(field.clone(), cols, &found_rows)?;
    let u = FqMatrix::from_rows(field.clone(), cols, &uni_rows)?;
    let rank_f = f.rank();
    let rank_u = u.rank();
    let rank_both = f.vstack(&u)?.rank();

    let mut missing = Vec::new();
    let mut span = found_rows.clone();
    let mut rank = rank_f;
    for (row, uni) in uni_rows.iter().zip(&universal) {
        span.push(row.clone());
        let r = FqMatrix::from_rows(field.clone(), cols, &span)?.rank();
        if r > rank {
            missing.push(uni.label.clone());
            rank = r;
        } else {
            span.pop();
        }
    }

    let mut witnesses = Vec::new();
    let mut span = uni_rows.clone();
    let mut rank = rank_u;
    for (row, rel) in found_rows.iter().zip(found) {
        span.push(row.clone());
        let r = FqMatrix::from_rows(field.clone(), cols, &span)?.rank();
        if r > rank {
            witnesses.push(rel.display(field));
            rank = r;
        } else {
            span.pop();
        }
    }

    let poly_ring = engine.power_sums().poly_ring();
    Ok(ComparisonReport {
        scope: ScopeSummary {
            q: scope.field.q(),
            field: scope.field.to_string(),
            v: poly_ring.format(&scope.v),
            weight_max: scope.weight_max,
            depth_max: scope.depth_max,
            q_even_only: scope.q_even_only,
            include_negatives: scope.include_negatives,
            d: scope.d,
            n: scope.n,
            tuples: tuples.len(),
        },
        dim_found: rank_f,
        dim_universal: rank_u,
        containment: rank_both == rank_f,
        residual: rank_both - rank_u,
        unstabilized_columns: tuples.iter().zip(reports).filter(|(_, r)| !is_settled(r)).map(|(s, _)| s.to_string()).collect(),
        relations: found.iter().map(|r| r.display(field)).collect(),
        missing,
        witnesses,
    })
}

/// Result of a full scan: relations found plus their comparison.
#[derive(Clone, Debug)]
pub struct Scan {
    pub tuples: Vec<Composition>,
    pub matrix: FqMatrix,
    pub reports: Vec<StabilizationReport>,
    pub relations: Vec<FormalRelation>,
    pub comparison: ComparisonReport,
}

pub fn scan(engine: &ZetaEngine, scope: &SearchScope) -> Result<Scan> {
    let tuples = enumerate_tuples(scope)?;
    let (matrix, reports) = value_matrix(engine, &tuples, scope)?;
    let relations: Vec<FormalRelation> =
        matrix.nullspace().iter().map(|x| vector_to_relation(engine.field(), &tuples, x)).collect();
    let comparison = compare_on(engine, &relations, scope, &tuples, &reports)?;
    Ok(Scan { tuples, matrix, reports, relations, comparison })
}

/// One row of the per-class summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub q: u32,
    pub v: String,
    pub weight: i64,
    pub depth: usize,
    pub tuples: usize,
    /// Dimension of the relations among tuples of this weight and depth.
    pub relations: usize,
    pub unstabilized: usize,
}

/// Relation counts per `(weight, depth)` class, with weight the sum of
/// absolute values.
pub fn summary_rows(scan: &Scan, scope: &SearchScope, engine: &ZetaEngine) -> Vec<SummaryRow> {
    let mut classes: Vec<(i64, usize)> = scan.tuples.iter().map(|s| (s.abs_weight(), s.depth())).collect();
    classes.sort();
    classes.dedup();
    let v = engine.power_sums().poly_ring().format(&scope.v);
    classes
        .into_iter()
        .map(|(w, r)| {
            let idx: Vec<usize> = (0..scan.tuples.len())
                .filter(|&j| scan.tuples[j].abs_weight() == w && scan.tuples[j].depth() == r)
                .collect();
            let cols: Vec<Vec<FqElem>> = idx.iter().map(|&j| scan.matrix.column(j)).collect();
            let sub = FqMatrix::from_columns(engine.field().clone(), scan.matrix.rows(), &cols).expect("consistent shape");
            SummaryRow {
                q: scope.field.q(),
                v: v.clone(),
                weight: w,
                depth: r,
                tuples: idx.len(),
                relations: idx.len() - sub.rank(),
                unstabilized: idx.iter().filter(|&&j| !is_settled(&scan.reports[j])).count(),
            }
        })
        .collect()
}
