//! Characteristic classes of real vector bundles and their complexifications.
//!
//! - [`wring`]: sparse graded polynomials over `F_2` in `w_i` (or root
//!   variables `r_i`), with degree and rank truncation.
//! - [`steenrod`]: `Sq^1` as a derivation.
//! - [`bundlecalc`]: bundles as total classes; Whitney sums, `ξ ⊕ ξ`, Chern
//!   and Pontrjagin reductions, and the `U/O × BO` oracle ring.
//! - [`feshbach`]: the integral ring `H*(BO_n; Z)` on generators `p_i`, `V_I`.
//! - [`complexifiability`]: the decision procedures and expansions.
//! - [`verify`]: deterministic verification suites producing [`Report`]s.

pub mod bundlecalc;
pub mod complexifiability;
pub mod error;
pub mod feshbach;
pub mod report;
pub mod sample;
pub mod steenrod;
pub mod verify;
pub mod wring;

pub use bundlecalc::{AmbientPoly, ExtMonomial, ExtPoly, FormalBundle};
pub use complexifiability::{ChernExpr, CMonomial, Lemma3Mode, SquaresPoly};
pub use error::{Error, Result};
pub use feshbach::{IndexSet, IntClass, PMonomial, Rank, Relation, TMonomial};
pub use report::{Case, Report, Status, Summary};
pub use wring::{MPoly2, Namespace, RingContext, WMonomial};
