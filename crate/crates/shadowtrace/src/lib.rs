//! An exact-arithmetic engine for strict 2-categories equipped with a shadow.
//!
//! The library provides:
//!
//! * a core interface for strict 2-categories with a shadow functor
//!   ([`bicat`]), together with a randomized axiom-checking harness;
//! * three concrete instances ([`instances`]): matrices of free modules over
//!   finite sets (`MatMod`), spans of finite sets (`Span`), and free
//!   group-ring bimodules over finite groups (`GrBimod`);
//! * duality data, mates, and the bicategorical trace with its derived
//!   quantities — Euler characteristics, transfers, Hattori–Stallings,
//!   twisted, Reidemeister, and Lefschetz traces ([`trace`], [`traces`]);
//! * a combinatorial IR for cylindrical string diagrams with deformation
//!   moves and a normal form ([`diagram`]), and a layer-by-layer evaluator
//!   ([`eval`]);
//! * shadow functors between the instances and conjunctional comparison
//!   data for scalar extension, with verifiers for every algebraic law the
//!   machinery satisfies ([`functor`], [`laws`]);
//! * a plain-text workspace format and a thin command-line front end
//!   ([`workspace`]).
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals,
//! zero-tolerance equality, no floating point anywhere.

pub mod bicat;
pub mod diagram;
pub mod eval;
pub mod functor;
pub mod group;
pub mod groupring;
pub mod instances;
pub mod laws;
pub mod linalg;
pub mod sample;
pub mod shadow;
pub mod trace;
pub mod traces;
pub mod workspace;

pub use linalg::{QMat, Scalar};
pub use shadow::{Ring, ShadowMor, ShadowOb};
