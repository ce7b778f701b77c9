//! Multiple zeta values over `F_q[t]`: exact power sums, truncated, finite
//! and `v`-adic zeta values, the universal relation families, relation
//! search at finite precision, and sums of multiple harmonic type over
//! arbitrary commutative rings.

pub mod algebra;
pub mod error;
pub mod harmonic;
pub mod power_sums;
pub mod relations;
pub mod ring;
pub mod search;
pub mod zeta;

pub use algebra::{FieldSpec, Fq, FqElem, FqMatrix, FunctionField, Poly, PolyRing, RationalFn, ResidueElem, ResidueRing, Valuation};
pub use error::{MzvError, Result};
pub use power_sums::{Carrier, PowerSumKey, PowerSumValue, PowerSums};
pub use relations::{Evaluation, Evaluator, Family, FormalRelation, RelationEvaluator, Thm3Config, Verdict};
pub use ring::Ring;
pub use search::SearchScope;
pub use zeta::{Composition, StabilizationReport, TruncationConfig, ZetaEngine};
