//! Concrete strict 2-categories with shadows.
//!
//! * [`matmod`]: matrices of finitely generated free `Z`- or `Q`-modules
//!   indexed by finite sets; composition is matrix multiplication with
//!   Kronecker blocks, the shadow is the direct sum of diagonal entries.
//! * [`span`]: spans of finite sets; composition is pullback, the shadow is
//!   the free abelian group on the fixed points of an endo-span.
//! * [`grbimod`]: free right modules over group rings of finite groups with
//!   a left action of a second finite group; the shadow is a cokernel
//!   computed by Smith normal form.
//!
//! Strictness is obtained in each case by canonical basis bookkeeping:
//! every basis element of a composite carries the full history of atomic
//! basis elements it was built from, in a canonical sorted order, so that
//! both bracketings of a triple composite produce identical values.

pub mod grbimod;
pub mod matmod;
pub mod span;

pub use grbimod::GrBimod;
pub use matmod::MatMod;
pub use span::Span;
