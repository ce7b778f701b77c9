//! Exact arithmetic: `F_q`, `F_q[t]`, `F_q(t)`, `A/(v^N)` and `F_q` matrices.

pub mod ext;
pub mod field;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod residue;

pub use field::{FieldSpec, Fq, FqElem};
pub use matrix::FqMatrix;
pub use poly::{Poly, PolyRing};
pub use ratfn::{FunctionField, RationalFn};
pub use residue::{poly_inv_mod, ResidueElem, ResidueRing, Valuation};
