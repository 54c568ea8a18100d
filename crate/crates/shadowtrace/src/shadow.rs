//! The common target of all shadows: finitely generated abelian groups and
//! finite-dimensional rational vector spaces, presented as cokernels.
//!
//! A [`ShadowOb`] is a presentation `K^gens / rowspan(rels)` with `K` the
//! ground ring; a [`ShadowMor`] is a matrix on generators that descends to
//! the quotients.  Equality of morphisms is decided exactly by reducing
//! every column to a canonical form through the Smith normal form of the
//! relation matrix.

use crate::linalg::{smith_normal_form, QMat, Scalar, ZMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Ground ring of a presentation: the integers or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Z,
    Q,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
        }
    }
}

/// Precomputed reduction data for a presentation.
#[derive(Debug)]
struct Reducer {
    /// Unimodular change of basis on generators (`U` of the Smith form of
    /// the transposed relation matrix).
    u: QMat,
    /// Invariant factors per transformed coordinate: `Some(d)` for a
    /// torsion/killed coordinate, `None` for a free coordinate.
    factors: Vec<Option<BigInt>>,
}

/// A finitely generated abelian group (ring `Z`) or rational vector space
/// (ring `Q`) presented as a cokernel: generators modulo the row span of a
/// relation matrix.
#[derive(Clone)]
pub struct ShadowOb {
    pub ring: Ring,
    pub gens: usize,
    /// Printable generator labels (cosmetic; not part of equality).
    pub labels: Vec<String>,
    /// Relations, one per row, `gens` columns.
    pub rels: QMat,
    reducer: Arc<Reducer>,
}

impl PartialEq for ShadowOb {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.rels == other.rels
    }
}
impl Eq for ShadowOb {}

impl fmt::Debug for ShadowOb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (free, torsion) = self.invariants();
        write!(f, "ShadowOb({}^{} ", self.ring, self.gens)?;
        write!(f, "~ free rank {free}")?;
        if !torsion.is_empty() {
            let t: Vec<String> = torsion.iter().map(|d| format!("Z/{d}")).collect();
            write!(f, " + {}", t.join(" + "))?;
        }
        write!(f, ")")
    }
}

impl ShadowOb {
    /// Build a presentation; the Smith normal form of the relations is
    /// computed eagerly and cached.
    pub fn new(ring: Ring, labels: Vec<String>, rels: QMat) -> ShadowOb {
        let gens = labels.len();
        assert_eq!(rels.cols, gens, "relation matrix must have one column per generator");
        // Transpose so relations become columns, then integerize. Over Q
        // only the span matters, so clearing denominators is harmless; over
        // Z the instances only produce integral relations.
        let mut at = ZMat::zero(gens, rels.rows);
        for r in 0..rels.rows {
            let mut lcm = BigInt::one();
            for j in 0..gens {
                let den = rels.get(r, j).denom().clone();
                lcm = num_integer::lcm(lcm, den);
            }
            if ring == Ring::Z && !lcm.is_one() {
                panic!("integral presentation has rational relation");
            }
            for j in 0..gens {
                let v = rels.get(r, j) * BigRational::from_integer(lcm.clone());
                at.set(j, r, v.numer().clone());
            }
        }
        let snf = smith_normal_form(&at);
        let mut factors: Vec<Option<BigInt>> = vec![None; gens];
        for (i, d) in snf.diag.iter().enumerate() {
            if !d.is_zero() {
                // Over Q any nonzero invariant factor kills the coordinate.
                factors[i] = Some(if ring == Ring::Q { BigInt::one() } else { d.clone() });
            }
        }
        let reducer = Reducer { u: snf.u.to_qmat(), factors };
        ShadowOb { ring, gens, labels, rels, reducer: Arc::new(reducer) }
    }

    /// A free presentation (no relations).
    pub fn free(ring: Ring, labels: Vec<String>) -> ShadowOb {
        let n = labels.len();
        ShadowOb::new(ring, labels, QMat::zero(0, n))
    }

    /// `(free rank, torsion coefficients > 1)` of the presented group.
    pub fn invariants(&self) -> (usize, Vec<BigInt>) {
        let mut free = 0usize;
        let mut torsion = Vec::new();
        for f in &self.reducer.factors {
            match f {
                None => free += 1,
                Some(d) => {
                    if !d.is_one() {
                        torsion.push(d.clone());
                    }
                }
            }
        }
        (free, torsion)
    }

    /// Reduce a coefficient vector (a `gens x 1` column) to the canonical
    /// form of its coset: coordinates are transformed by `U`, torsion
    /// coordinates are reduced to `[0, d)`, killed coordinates to zero.
    pub fn canonical_column(&self, col: &QMat) -> QMat {
        assert_eq!(col.rows, self.gens);
        assert_eq!(col.cols, 1);
        let mut c = self.reducer.u.mul(col);
        for i in 0..self.gens {
            if let Some(d) = &self.reducer.factors[i] {
                if d.is_one() {
                    c.set(i, 0, Scalar::zero());
                } else {
                    let dq = BigRational::from_integer(d.clone());
                    let v = c.get(i, 0).clone();
                    let f = (&v / &dq).floor();
                    c.set(i, 0, v - f * dq);
                }
            }
        }
        c
    }

    /// Canonical form of a whole matrix into this presentation, columnwise.
    pub fn canonical_mat(&self, m: &QMat) -> QMat {
        assert_eq!(m.rows, self.gens);
        let mut out = QMat::zero(self.gens, m.cols);
        for j in 0..m.cols {
            let c = self.canonical_column(&m.column(j));
            for i in 0..self.gens {
                out.set(i, j, c.get(i, 0).clone());
            }
        }
        out
    }

    /// True if the vector lies in the relation span.
    pub fn is_zero_coset(&self, col: &QMat) -> bool {
        self.canonical_column(col).is_zero()
    }
}

/// An exact linear map between shadow presentations, stored as a matrix on
/// generators.
#[derive(Clone)]
pub struct ShadowMor {
    pub src: ShadowOb,
    pub tgt: ShadowOb,
    /// `tgt.gens x src.gens` matrix on generators.
    pub mat: QMat,
}

impl fmt::Debug for ShadowMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShadowMor({:?} -> {:?}, {:?})", self.src, self.tgt, self.mat)
    }
}

impl ShadowMor {
    pub fn new(src: ShadowOb, tgt: ShadowOb, mat: QMat) -> ShadowMor {
        assert_eq!(mat.cols, src.gens, "matrix width must match source generators");
        assert_eq!(mat.rows, tgt.gens, "matrix height must match target generators");
        ShadowMor { src, tgt, mat }
    }

    pub fn identity(ob: &ShadowOb) -> ShadowMor {
        ShadowMor::new(ob.clone(), ob.clone(), QMat::identity(ob.gens))
    }

    /// Composite `self . rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &ShadowMor) -> ShadowMor {
        assert_eq!(
            self.src, rhs.tgt,
            "shadow morphisms not composable: presentations differ"
        );
        ShadowMor::new(rhs.src.clone(), self.tgt.clone(), self.mat.mul(&rhs.mat))
    }

    /// Exact equality of the induced maps on the presented quotients.
    pub fn eq(&self, other: &ShadowMor) -> bool {
        if self.src != other.src || self.tgt != other.tgt {
            return false;
        }
        self.tgt.canonical_mat(&self.mat) == other.tgt.canonical_mat(&other.mat)
    }

    /// Check the matrix descends to the quotients: every source relation
    /// must map into the target relation span.
    pub fn is_well_defined(&self) -> bool {
        let rt = self.src.rels.transpose(); // gens x nrels
        let image = self.mat.mul(&rt);
        (0..image.cols).all(|j| self.tgt.is_zero_coset(&image.column(j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn free_presentation_identity() {
        let ob = ShadowOb::free(Ring::Z, vec!["a".into(), "b".into()]);
        let id = ShadowMor::identity(&ob);
        assert!(id.eq(&id.compose(&id)));
        assert_eq!(ob.invariants(), (2, vec![]));
    }

    #[test]
    fn torsion_detected() {
        // Z^2 / (2a) = Z + Z/2
        let rels = QMat::from_int_rows(&[&[2, 0]]);
        let ob = ShadowOb::new(Ring::Z, vec!["a".into(), "b".into()], rels);
        let (free, torsion) = ob.invariants();
        assert_eq!(free, 1);
        assert_eq!(torsion, vec![num_bigint::BigInt::from(2)]);
    }

    #[test]
    fn torsion_killed_over_q() {
        let rels = QMat::from_int_rows(&[&[2, 0]]);
        let ob = ShadowOb::new(Ring::Q, vec!["a".into(), "b".into()], rels);
        assert_eq!(ob.invariants(), (1, vec![]));
    }

    #[test]
    fn coset_equality_mod_relations() {
        // Z^2 / (a - b): the cosets of a and b agree.
        let rels = QMat::from_int_rows(&[&[1, -1]]);
        let ob = ShadowOb::new(Ring::Z, vec!["a".into(), "b".into()], rels);
        let ea = QMat::from_int_rows(&[&[1], &[0]]);
        let eb = QMat::from_int_rows(&[&[0], &[1]]);
        assert_eq!(ob.canonical_column(&ea), ob.canonical_column(&eb));
        assert!(!ob.is_zero_coset(&ea));
        let diff = ea.sub(&eb);
        assert!(ob.is_zero_coset(&diff));
    }

    #[test]
    fn mod_two_reduction() {
        // Z / 2: coefficient 3 and 1 agree; 4 is zero.
        let rels = QMat::from_int_rows(&[&[2]]);
        let ob = ShadowOb::new(Ring::Z, vec!["a".into()], rels);
        let three = QMat::from_int_rows(&[&[3]]);
        let one = QMat::from_int_rows(&[&[1]]);
        let four = QMat::from_int_rows(&[&[4]]);
        assert_eq!(ob.canonical_column(&three), ob.canonical_column(&one));
        assert!(ob.is_zero_coset(&four));
        assert_eq!(*ob.canonical_column(&three).get(0, 0), q(1));
    }

    #[test]
    fn well_definedness() {
        // Z/2 -> Z: only the zero map descends; the identity-on-generators
        // map does not.
        let src = ShadowOb::new(Ring::Z, vec!["a".into()], QMat::from_int_rows(&[&[2]]));
        let tgt = ShadowOb::free(Ring::Z, vec!["b".into()]);
        let bad = ShadowMor::new(src.clone(), tgt.clone(), QMat::identity(1));
        assert!(!bad.is_well_defined());
        let good = ShadowMor::new(src, tgt, QMat::zero(1, 1));
        assert!(good.is_well_defined());
    }
}
