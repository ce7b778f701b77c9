//! The subcommands.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use mzv_core::algebra::parse::{format_pairs, format_tuple, parse_pairs, parse_poly, parse_tuple};
use mzv_core::harmonic::{run_check, InstanceShape, MhtTarget, RingChoice};
use mzv_core::relations::{gen_thm2, gen_thm3, gen_thm_a, gen_thm_b, Certificate};
use mzv_core::search::{scan, summary_rows, SearchScope, DEFAULT_TRUNCATION};
use mzv_core::{
    Composition, Evaluator, Family, FormalRelation, MzvError, Poly, PolyRing, RelationEvaluator, Result, Thm3Config,
    TruncationConfig, Verdict, ZetaEngine,
};

use crate::output::Output;

const DEFAULT_TRUNC_D: usize = 4;
const DEFAULT_N: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorKind {
    Trunc,
    Finite,
    Vadic,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    /// Exponent tuple such as "(1,2)".
    #[arg(long)]
    pub tuple: String,
    /// Monic prime in t.
    #[arg(long)]
    pub v: Option<String>,
    /// Defaults to vadic when --v is given and trunc otherwise.
    #[arg(long, value_enum)]
    pub evaluator: Option<EvaluatorKind>,
    /// Truncation: chains with d_1 < D.
    #[arg(long = "D")]
    pub d: Option<usize>,
    /// v-adic precision.
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub star: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub tuple: Option<String>,
    /// Multiplicity data "(s:k),(s:k)".
    #[arg(long)]
    pub pairs: Option<String>,
    /// Relation in JSONL form, instead of --family.
    #[arg(long)]
    pub relation_file: Option<PathBuf>,
    /// Also write the relation as JSONL to this path.
    #[arg(long)]
    pub dump_relation: Option<PathBuf>,
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long, value_enum)]
    pub evaluator: Option<EvaluatorKind>,
    #[arg(long = "D")]
    pub d: Option<usize>,
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub star: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, default_value = "t")]
    pub v: String,
    #[arg(long)]
    pub weight_max: i64,
    #[arg(long)]
    pub depth_max: usize,
    #[arg(long = "N", default_value_t = 6)]
    pub n: u32,
    #[arg(long = "D", default_value_t = DEFAULT_TRUNCATION)]
    pub d: usize,
    #[arg(long)]
    pub q_even_only: bool,
    #[arg(long)]
    pub include_negatives: bool,
}

#[derive(Args, Debug)]
pub struct HarmonicArgs {
    /// Z/m, F_p[x]/(x^k), Q, or a field spec such as q=4.
    #[arg(long, default_value = "Z/12")]
    pub ring: String,
    /// Distinct entries for the alternating identity.
    #[arg(long)]
    pub tuple: Option<String>,
    /// Multiplicity data for the characteristic-2 identity.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Size of the index set {1, ..., n}.
    #[arg(long, default_value_t = 4)]
    pub index_size: usize,
    /// Number of consecutive seeds to check.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
}

#[derive(Args, Debug)]
pub struct PrimesArgs {
    /// Largest degree listed.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
}

fn usage(msg: impl Into<String>) -> MzvError {
    MzvError::InvalidArgument(msg.into())
}

fn composition(s: &str) -> Result<Composition> {
    Composition::new(parse_tuple(s)?)
}

fn prime(ring: &PolyRing, v: Option<&String>) -> Result<Poly> {
    let v = v.ok_or_else(|| usage("this evaluator needs --v"))?;
    parse_poly(ring, v)
}

fn evaluator(
    ring: &PolyRing,
    kind: Option<EvaluatorKind>,
    v: Option<&String>,
    d: Option<usize>,
    n: Option<u32>,
    star: bool,
) -> Result<Evaluator> {
    let kind = kind.unwrap_or(if v.is_some() { EvaluatorKind::Vadic } else { EvaluatorKind::Trunc });
    Ok(match kind {
        EvaluatorKind::Trunc => Evaluator::TruncatedExact { d: d.unwrap_or(DEFAULT_TRUNC_D), star },
        EvaluatorKind::Finite => Evaluator::Finite { v: prime(ring, v)?, star },
        EvaluatorKind::Vadic => Evaluator::Vadic {
            v: prime(ring, v)?,
            d: d.unwrap_or(DEFAULT_TRUNCATION),
            n: n.unwrap_or(DEFAULT_N),
            star,
        },
    })
}

fn describe_evaluator(ring: &PolyRing, ev: &Evaluator) -> Value {
    match ev {
        Evaluator::TruncatedExact { d, star } => json!({"kind": "trunc", "D": d, "star": star}),
        Evaluator::Finite { v, star } => json!({"kind": "finite", "v": ring.format(v), "star": star}),
        Evaluator::Vadic { v, d, n, star } => {
            json!({"kind": "vadic", "v": ring.format(v), "D": d, "N": n, "star": star})
        }
    }
}

fn evaluator_label(ev: &Evaluator) -> &'static str {
    match ev {
        Evaluator::TruncatedExact { .. } => "trunc",
        Evaluator::Finite { .. } => "finite",
        Evaluator::Vadic { .. } => "vadic",
    }
}

pub fn compute(engine: &ZetaEngine, args: &ComputeArgs) -> Result<Output> {
    let s = composition(&args.tuple)?;
    let sums = engine.power_sums();
    let ring = sums.poly_ring();
    let ev = evaluator(ring, args.evaluator, args.v.as_ref(), args.d, args.n, args.star)?;
    let field = engine.field().spec().to_string();
    let mut json = json!({
        "field": field,
        "tuple": s.to_string(),
        "evaluator": describe_evaluator(ring, &ev),
    });
    let mut plain = vec![format!("field: {field}"), format!("tuple: {s}"), format!("evaluator: {}", evaluator_label(&ev))];
    let (value, valuation) = match &ev {
        Evaluator::TruncatedExact { d, star } => {
            if *d == 0 {
                return Err(MzvError::InvalidEvaluator("truncation needs D >= 1".into()));
            }
            (sums.function_field().format(&engine.truncated_mzv(*d, &s, *star)?), String::new())
        }
        Evaluator::Finite { v, star } => {
            let x = engine.finite_mzv(v, &s, *star)?;
            (ring.format(x.rep()), String::new())
        }
        Evaluator::Vadic { v, d, n, star } => {
            let rep = engine.vadic_mzv(v, &s, TruncationConfig::new(*d, *n, *star)?)?;
            json["stable_from"] = json!(rep.stable_from);
            json["stabilized"] = json!(rep.stabilized);
            json["certified"] = json!(rep.certified);
            json["valuation"] = json!(rep.valuation.to_string());
            plain.push(format!("stable_from: {}", rep.stable_from));
            plain.push(format!("stabilized: {}", rep.stabilized));
            plain.push(format!("certified: {}", rep.certified));
            (ring.format(rep.value.rep()), rep.valuation.to_string())
        }
    };
    json["value"] = json!(value);
    plain.push(format!("value: {value}"));
    if !valuation.is_empty() {
        plain.push(format!("valuation: {valuation}"));
    }
    Ok(Output {
        json,
        headers: vec!["tuple", "evaluator", "value", "valuation"],
        rows: vec![vec![s.to_string(), evaluator_label(&ev).into(), value, valuation]],
        plain,
        passed: true,
    })
}

fn build_relation(engine: &ZetaEngine, args: &VerifyArgs) -> Result<FormalRelation> {
    let field = engine.field();
    if let Some(path) = &args.relation_file {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        return FormalRelation::from_jsonl(field, &text);
    }
    let family = args.family.ok_or_else(|| usage("verify needs --family or --relation-file"))?;
    let tuple = || composition(args.tuple.as_deref().ok_or_else(|| usage(format!("--family {family} needs --tuple")))?);
    let pairs = || -> Result<Thm3Config> {
        let p = args.pairs.as_deref().ok_or_else(|| usage(format!("--family {family} needs --pairs")))?;
        Ok(Thm3Config::new(parse_pairs(p)?))
    };
    let mut rel = match family {
        Family::Thm2 => gen_thm2(&tuple()?, field)?,
        Family::ThmA => gen_thm_a(&tuple()?, field)?,
        Family::Thm3 | Family::Thm3Star => gen_thm3(&pairs()?, field)?,
        Family::ThmB => gen_thm_b(&pairs()?, field)?,
        Family::Custom => return Err(usage("custom relations are read with --relation-file")),
    };
    if args.star && rel.tag == Family::Thm3 {
        rel.tag = Family::Thm3Star;
    }
    Ok(rel)
}

fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::Zero => "zero".into(),
        Verdict::NonZero(_) => "nonzero".into(),
        Verdict::ValuationAtLeast(n) => format!("valuation>={n}"),
    }
}

fn certificate_json(c: &Option<Certificate>) -> Value {
    match c {
        Some(c) => json!({"primes": c.primes, "degree_total": c.degree_total, "degree_bound": c.degree_bound}),
        None => Value::Null,
    }
}

pub fn verify(engine: &ZetaEngine, args: &VerifyArgs) -> Result<Output> {
    let field = engine.field();
    let ring = engine.power_sums().poly_ring();
    let rel = build_relation(engine, args)?;
    if let Some(path) = &args.dump_relation {
        fs::write(path, rel.to_jsonl(field)).map_err(|e| MzvError::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    let ev = evaluator(ring, args.evaluator, args.v.as_ref(), args.d, args.n, args.star)?;
    let out = RelationEvaluator::new(engine.clone()).evaluate(&rel, &ev)?;
    let verdict = verdict_label(&out.verdict);
    let unstabilized: Vec<String> = out.unstabilized.iter().map(|s| s.to_string()).collect();
    let relation = rel.display(field);
    let json = json!({
        "field": field.spec().to_string(),
        "family": rel.tag,
        "relation": relation,
        "terms": rel.terms.len(),
        "evaluator": describe_evaluator(ring, &ev),
        "verdict": verdict,
        "value": out.value,
        "valuation": out.valuation.map(|v| v.to_string()),
        "unstabilized": unstabilized,
        "certificate": certificate_json(&out.certificate),
    });
    let mut plain = vec![
        format!("family: {}", rel.tag),
        format!("relation: {relation}"),
        format!("evaluator: {}", evaluator_label(&ev)),
        format!("verdict: {verdict}"),
        format!("value: {}", out.value),
    ];
    if !unstabilized.is_empty() {
        plain.push(format!("unstabilized: {}", unstabilized.join(" ")));
    }
    Ok(Output {
        json,
        headers: vec!["family", "relation", "evaluator", "verdict", "value"],
        rows: vec![vec![rel.tag.to_string(), relation, evaluator_label(&ev).into(), verdict, out.value.clone()]],
        plain,
        passed: out.verdict.passed(),
    })
}

pub fn search(engine: &ZetaEngine, args: &SearchArgs) -> Result<Output> {
    let ring = engine.power_sums().poly_ring();
    let mut scope = SearchScope::new(engine.field().spec().clone(), parse_poly(ring, &args.v)?, args.weight_max, args.depth_max, args.n);
    scope.d = args.d;
    scope.q_even_only = args.q_even_only;
    scope.include_negatives = args.include_negatives;
    let result = scan(engine, &scope)?;
    let report = &result.comparison;
    let rows = summary_rows(&result, &scope, engine)
        .into_iter()
        .map(|r| {
            vec![
                r.q.to_string(),
                r.v,
                r.weight.to_string(),
                r.depth.to_string(),
                r.tuples.to_string(),
                r.relations.to_string(),
                r.unstabilized.to_string(),
            ]
        })
        .collect();
    let mut plain = vec![
        format!("field: {}", report.scope.field),
        format!("v: {}", report.scope.v),
        format!("tuples: {}", report.scope.tuples),
        format!("dim_found: {}", report.dim_found),
        format!("dim_universal: {}", report.dim_universal),
        format!("containment: {}", report.containment),
        format!("residual: {}", report.residual),
    ];
    plain.extend(report.witnesses.iter().map(|w| format!("candidate mod v^{}: {w}", scope.n)));
    plain.extend(report.missing.iter().map(|m| format!("missing: {m}")));
    Ok(Output {
        json: serde_json::to_value(report).expect("report serializes"),
        headers: vec!["q", "v", "weight", "depth", "tuples", "relations", "unstabilized"],
        rows,
        plain,
        passed: report.containment,
    })
}

pub fn harmonic(ring: &str, seed: u64, args: &HarmonicArgs) -> Result<Output> {
    let choice: RingChoice = ring.parse()?;
    let (target, base, doubling) = match (&args.tuple, &args.pairs) {
        (Some(t), None) => {
            let s = parse_tuple(t)?;
            let mut base = s.clone();
            base.sort_unstable();
            base.dedup();
            (MhtTarget::Alternating(s), base, false)
        }
        (None, Some(p)) => {
            let pairs = parse_pairs(p)?;
            let base = pairs.iter().map(|&(s, _)| s).collect();
            (MhtTarget::Multiplicity(Thm3Config::new(pairs)), base, true)
        }
        _ => return Err(usage("harmonic needs exactly one of --tuple and --pairs")),
    };
    if args.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let shape = InstanceShape { index_size: args.index_size, base, doubling };
    let mut reports = Vec::new();
    for seed in seed..seed + args.runs {
        reports.push(run_check(&choice, seed, &shape, &target)?);
    }
    let passed = reports.iter().all(|r| r.zero);
    let identity = match &target {
        MhtTarget::Alternating(s) => format!("alternating {}", format_tuple(s)),
        MhtTarget::Multiplicity(cfg) => format!("multiplicity {}", format_pairs(&cfg.pairs)),
    };
    let mut plain = vec![format!("ring: {choice}"), format!("identity: {identity}")];
    plain.extend(reports.iter().map(|r| format!("seed {}: residual {}", r.seed, r.residual)));
    Ok(Output {
        json: json!({"ring": choice.to_string(), "identity": identity, "all_zero": passed, "runs": reports}),
        headers: vec!["ring", "seed", "identity", "lhs", "rhs", "residual", "zero"],
        rows: reports
            .iter()
            .map(|r| {
                vec![r.ring.clone(), r.seed.to_string(), r.identity.clone(), r.lhs.clone(), r.rhs.clone(), r.residual.clone(), r.zero.to_string()]
            })
            .collect(),
        plain,
        passed,
    })
}

pub fn primes(ring: &PolyRing, args: &PrimesArgs) -> Result<Output> {
    let mut rows = Vec::new();
    for d in 1..=args.degree {
        for p in ring.irreducibles(d) {
            rows.push(vec![d.to_string(), ring.format(&p)]);
        }
    }
    let list: Vec<Value> = rows.iter().map(|r| json!({"degree": r[0].parse::<usize>().unwrap(), "poly": r[1]})).collect();
    Ok(Output {
        json: json!({"field": ring.field().spec().to_string(), "primes": list}),
        headers: vec!["degree", "poly"],
        plain: rows.iter().map(|r| format!("{} {}", r[0], r[1])).collect(),
        rows,
        passed: true,
    })
}
