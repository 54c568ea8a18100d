//! Matrices over group rings of finite groups.
//!
//! A [`GrMat`] is a matrix with entries in `K[G]` for a finite group `G`,
//! stored as one rational component matrix per group element: the matrix
//! `A = sum_g A_g * g`.  Products combine components through the group's
//! multiplication table.

use crate::group::{Endo, GroupRef};
use crate::linalg::{QMat, Scalar};
use num_traits::Zero;
use std::fmt;

/// A matrix over the group ring `K[G]`, as components indexed by group
/// elements.
#[derive(Clone, PartialEq, Eq)]
pub struct GrMat {
    pub group: GroupRef,
    pub rows: usize,
    pub cols: usize,
    /// `comps[g]` is the coefficient matrix of the group element `g`.
    pub comps: Vec<QMat>,
}

impl fmt::Debug for GrMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GrMat {}x{} over {:?} [", self.rows, self.cols, self.group)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.entry_string(i, j)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl GrMat {
    pub fn zero(group: GroupRef, rows: usize, cols: usize) -> GrMat {
        let comps = (0..group.n).map(|_| QMat::zero(rows, cols)).collect();
        GrMat { group, rows, cols, comps }
    }

    /// The identity matrix (coefficient `I` on the group identity).
    pub fn identity(group: GroupRef, n: usize) -> GrMat {
        let mut m = GrMat::zero(group, n, n);
        m.comps[0] = QMat::identity(n);
        m
    }

    /// A 1x1 matrix whose entry is the single group element `g`.
    pub fn monomial(group: GroupRef, g: usize) -> GrMat {
        let mut m = GrMat::zero(group, 1, 1);
        m.comps[g] = QMat::identity(1);
        m
    }

    /// Embed a plain rational matrix as coefficients of the identity.
    pub fn from_scalar_mat(group: GroupRef, m: &QMat) -> GrMat {
        let mut out = GrMat::zero(group, m.rows, m.cols);
        out.comps[0] = m.clone();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.comps[0].is_identity() && self.comps[1..].iter().all(|c| c.is_zero())
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.comps.iter().all(|c| c.is_integral())
    }

    pub fn add(&self, rhs: &GrMat) -> GrMat {
        assert!(std::sync::Arc::ptr_eq(&self.group, &rhs.group) || *self.group == *rhs.group);
        let comps = self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.add(b)).collect();
        GrMat { group: self.group.clone(), rows: self.rows, cols: self.cols, comps }
    }

    pub fn sub(&self, rhs: &GrMat) -> GrMat {
        let comps = self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.sub(b)).collect();
        GrMat { group: self.group.clone(), rows: self.rows, cols: self.cols, comps }
    }

    pub fn scale(&self, s: &Scalar) -> GrMat {
        let comps = self.comps.iter().map(|c| c.scale(s)).collect();
        GrMat { group: self.group.clone(), rows: self.rows, cols: self.cols, comps }
    }

    /// Matrix product over the group ring: `(AB)_g = sum_{h1 h2 = g} A_h1 B_h2`.
    pub fn mul(&self, rhs: &GrMat) -> GrMat {
        assert_eq!(self.cols, rhs.rows, "group-ring matrix dimension mismatch");
        assert!(*self.group == *rhs.group, "group mismatch");
        let mut out = GrMat::zero(self.group.clone(), self.rows, rhs.cols);
        for h1 in 0..self.group.n {
            if self.comps[h1].is_zero() {
                continue;
            }
            for h2 in 0..self.group.n {
                if rhs.comps[h2].is_zero() {
                    continue;
                }
                let g = self.group.mul[h1][h2];
                out.comps[g] = out.comps[g].add(&self.comps[h1].mul(&rhs.comps[h2]));
            }
        }
        out
    }

    /// Kronecker product of the underlying free-module bases, multiplying
    /// group-ring entries: `(A (x) B)_{(i,k),(j,l)} = A_{i,j} * B_{k,l}`.
    pub fn kron(&self, rhs: &GrMat) -> GrMat {
        assert!(*self.group == *rhs.group);
        let mut out = GrMat::zero(self.group.clone(), self.rows * rhs.rows, self.cols * rhs.cols);
        for h1 in 0..self.group.n {
            if self.comps[h1].is_zero() {
                continue;
            }
            for h2 in 0..self.group.n {
                if rhs.comps[h2].is_zero() {
                    continue;
                }
                let g = self.group.mul[h1][h2];
                out.comps[g] = out.comps[g].add(&self.comps[h1].kron(&rhs.comps[h2]));
            }
        }
        out
    }

    /// Apply a group endomorphism to every entry:
    /// `sum c_h * h  ->  sum c_h * psi(h)`.
    pub fn map_group(&self, psi: &Endo) -> GrMat {
        assert!(*self.group == *psi.group);
        let mut out = GrMat::zero(self.group.clone(), self.rows, self.cols);
        for h in 0..self.group.n {
            let t = psi.apply(h);
            out.comps[t] = out.comps[t].add(&self.comps[h]);
        }
        out
    }

    /// Augmentation: collapse every group element to 1, leaving a plain
    /// rational matrix.
    pub fn augment(&self) -> QMat {
        let mut out = QMat::zero(self.rows, self.cols);
        for c in &self.comps {
            out = out.add(c);
        }
        out
    }

    /// Overwrite entry `(i, j)` with the single entry of a 1x1 matrix.
    pub fn set_entry(&mut self, i: usize, j: usize, e: &GrMat) {
        assert_eq!((e.rows, e.cols), (1, 1), "set_entry takes a 1x1 source");
        assert_eq!(e.group, self.group, "set_entry group mismatch");
        for g in 0..self.group.n {
            let v = e.comps[g].get(0, 0).clone();
            self.comps[g].set(i, j, v);
        }
    }

    /// Coefficient of group element `g` in entry `(i, j)`.
    pub fn coeff(&self, i: usize, j: usize, g: usize) -> &Scalar {
        self.comps[g].get(i, j)
    }

    /// Printable form of entry `(i, j)`.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        let mut terms = Vec::new();
        for g in 0..self.group.n {
            let c = self.coeff(i, j, g);
            if !c.is_zero() {
                terms.push(format!("{}*{}", c, self.group.elem_names[g]));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::linalg::q;

    #[test]
    fn monomial_multiplication_follows_table() {
        let g = Group::cyclic(3);
        let a = GrMat::monomial(g.clone(), 1);
        let b = GrMat::monomial(g.clone(), 2);
        let ab = a.mul(&b);
        assert_eq!(*ab.coeff(0, 0, 0), q(1)); // g * g^2 = e
    }

    #[test]
    fn identity_is_neutral() {
        let g = Group::s3();
        let mut a = GrMat::zero(g.clone(), 2, 2);
        a.comps[3] = QMat::from_int_rows(&[&[1, 2], &[0, 1]]);
        let i = GrMat::identity(g, 2);
        assert_eq!(i.mul(&a), a);
        assert_eq!(a.mul(&i), a);
    }

    #[test]
    fn augmentation_is_ring_map() {
        let g = Group::cyclic(2);
        let mut a = GrMat::zero(g.clone(), 1, 1);
        a.comps[0] = QMat::from_int_rows(&[&[2]]);
        a.comps[1] = QMat::from_int_rows(&[&[3]]);
        let b = a.clone();
        assert_eq!(a.mul(&b).augment(), a.augment().mul(&b.augment()));
        assert_eq!(*a.augment().get(0, 0), q(5));
    }

    #[test]
    fn map_group_respects_products() {
        let g = Group::cyclic(3);
        let psi = crate::group::Endo::new(g.clone(), vec![0, 2, 1]).unwrap();
        let a = GrMat::monomial(g.clone(), 1);
        let b = GrMat::monomial(g.clone(), 1);
        assert_eq!(a.mul(&b).map_group(&psi), a.map_group(&psi).mul(&b.map_group(&psi)));
    }
}
