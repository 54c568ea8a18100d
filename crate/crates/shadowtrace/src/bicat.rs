//! The abstract contract implemented by every concrete instance: a strict
//! 2-category together with a shadow.
//!
//! Strictness is a hard requirement: `compose1` must be associative and
//! unital on the nose (value equality, not isomorphism).  The instances
//! achieve this with canonical basis bookkeeping; see [`crate::instances`].
//!
//! Shape violations (composing cells with mismatched endpoints, composing
//! 2-cells whose boundaries differ) are programming errors and panic with a
//! descriptive message; the front end validates its inputs before calling
//! in here.

use crate::shadow::{ShadowMor, ShadowOb};
use std::fmt::Debug;

/// A strict 2-category with a shadow valued in presented abelian groups or
/// rational vector spaces.
pub trait Bicat {
    /// 0-cells.
    type Z: Clone + PartialEq + Debug;
    /// 1-cells.
    type O: Clone + PartialEq + Debug;
    /// 2-cells.
    type F: Clone + Debug;

    fn name(&self) -> &'static str;

    fn src0(&self, m: &Self::O) -> Self::Z;
    fn tgt0(&self, m: &Self::O) -> Self::Z;

    /// The strict unit 1-cell on a 0-cell.
    fn unit(&self, r: &Self::Z) -> Self::O;

    /// Horizontal composite `M (.) N` of `M: R -|-> S` and `N: S -|-> T`.
    fn compose1(&self, m: &Self::O, n: &Self::O) -> Self::O;

    fn two_src(&self, f: &Self::F) -> Self::O;
    fn two_tgt(&self, f: &Self::F) -> Self::O;

    /// Identity 2-cell.
    fn id2(&self, m: &Self::O) -> Self::F;

    /// Vertical composite `g . f` (apply `f` first).
    fn vcomp(&self, g: &Self::F, f: &Self::F) -> Self::F;

    /// Horizontal composite of 2-cells.
    fn hcomp(&self, f: &Self::F, g: &Self::F) -> Self::F;

    /// Exact equality of parallel 2-cells.
    fn eq2(&self, f: &Self::F, g: &Self::F) -> bool;

    /// Shadow of an endo-1-cell.
    fn shadow_ob(&self, m: &Self::O) -> ShadowOb;

    /// Shadow of a 2-cell between endo-1-cells.
    fn shadow_mor(&self, f: &Self::F) -> ShadowMor;

    /// The cyclicity isomorphism `<M (.) N>  ->  <N (.) M>` for
    /// `M: R -|-> S`, `N: S -|-> R`.
    fn theta(&self, m: &Self::O, n: &Self::O) -> ShadowMor;

    // ---- derived helpers ----

    /// Fold a word of 1-cells into a single 1-cell; the empty word at an
    /// ambient 0-cell folds to the unit.
    fn fold_word(&self, ambient: &Self::Z, word: &[Self::O]) -> Self::O {
        match word.split_first() {
            None => self.unit(ambient),
            Some((first, rest)) => {
                let mut acc = first.clone();
                for m in rest {
                    acc = self.compose1(&acc, m);
                }
                acc
            }
        }
    }

    /// Fold a word of 2-cells by horizontal composition; the empty word is
    /// the identity of the ambient unit.
    fn fold_hcomp(&self, ambient: &Self::Z, fs: &[Self::F]) -> Self::F {
        match fs.split_first() {
            None => self.id2(&self.unit(ambient)),
            Some((first, rest)) => {
                let mut acc = first.clone();
                for f in rest {
                    acc = self.hcomp(&acc, f);
                }
                acc
            }
        }
    }

    /// `theta` for a word split at position `k`: the rotation
    /// `<M_1 (.) ... (.) M_n>  ->  <M_{k+1} (.) ... (.) M_k>`.
    /// `k = 0` and `k = n` give the identity.
    fn theta_split(&self, ambient: &Self::Z, word: &[Self::O], k: usize) -> ShadowMor {
        let n = word.len();
        assert!(k <= n, "rotation {k} out of range for word of length {n}");
        if k == 0 || k == n {
            return ShadowMor::identity(&self.shadow_ob(&self.fold_word(ambient, word)));
        }
        let left = self.fold_word(ambient, &word[..k]);
        let right = self.fold_word(ambient, &word[k..]);
        self.theta(&left, &right)
    }
}

/// Check that a 2-cell has the given source and target 1-cells, with a
/// readable panic otherwise.
pub fn expect_shape<I: Bicat>(inst: &I, f: &I::F, src: &I::O, tgt: &I::O, what: &str) {
    assert!(
        inst.two_src(f) == *src && inst.two_tgt(f) == *tgt,
        "{what}: 2-cell has unexpected boundary"
    );
}
