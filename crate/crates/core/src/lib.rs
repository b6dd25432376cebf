//! Association schemes on Schubert cells of Grassmannians over finite fields.
//!
//! A Schubert cell `O_α` of Gr(m, n) is the set of subspaces whose reduced
//! reverse column echelon matrix has pivot set α. Upper triangular matrices
//! act on it, and the label `Piv(M − N)` of a pair is invariant under the
//! diagonal action. This crate builds the resulting scheme `X_α`, builds the
//! generalized wreath product of one-class schemes over the poset D(α)
//! independently, and checks that the two agree relation by relation.
//!
//! Modules:
//!
//! - [`field`]: GF(q) arithmetic for q ≤ 2¹⁶.
//! - [`matrix`]: dense matrices, RRCEF, pivot sets, Borel action and witnesses.
//! - [`poset`]: posets, anti-chains, partitions, Ferrers boards, the cell indexing maps.
//! - [`schubert`]: cell descriptors, points, relation labels, the scheme `X_α`.
//! - [`scheme`]: generic association schemes and the axiom checker.
//! - [`wreath`]: generalized wreath products over arbitrary posets.
//! - [`verify`]: per-cell verification reports.
//!
//! Exhaustive kernels run on rayon when the `parallel` feature is on (the
//! default) and the [`Parallelism`] argument asks for it.

pub mod error;
pub mod field;
pub mod matrix;
pub mod par;
pub mod poset;
pub mod scheme;
pub mod schubert;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec, FiniteField};
pub use matrix::{Matrix, MatrixJson, PivotSet, Position};
pub use par::Parallelism;
pub use poset::{AntiChain, FerrersPoset, Partition, Poset, PosetJson};
pub use scheme::{IntersectionNumbers, SchemeInstance, SchemeVerdict, VerifyOptions};
pub use schubert::{CellDescriptor, CellPoint, CellScheme, CellSelector};
pub use verify::{Check, Status, SuiteConfig, VerificationReport};
pub use wreath::{GwpLabel, GwpScheme, GwpSpec};
