//! Matrices of finitely generated free modules over finite sets.
//!
//! A 0-cell is a finite set `R`; a 1-cell `M: R -|-> S` assigns to every
//! pair `(r, s)` a finitely generated free `K`-module, recorded by an
//! ordered basis of labels; a 2-cell is an entrywise exact matrix.
//! Composition is "matrix multiplication" of modules: the `(r, t)` entry of
//! `M (.) N` is the direct sum over `s` of tensor products, realized by
//! concatenating basis labels and sorting them canonically.  Because a
//! label records the entire tensor history, both bracketings of a triple
//! composite build the same sorted basis, making the instance strict on
//! the nose.
//!
//! The shadow of an endo-1-cell is the direct sum of its diagonal entries;
//! `theta` is the basis permutation that swaps the two tensor factors.

use crate::bicat::Bicat;
use crate::linalg::QMat;
use crate::shadow::{Ring, ShadowMor, ShadowOb};
use num_traits::Zero;
use std::fmt;

/// A finite indexing set.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct MatZero {
    pub name: String,
    pub elems: usize,
}

/// One step of tensor history: basis element `i` of the `(r, s)` entry of
/// the atomic cell `cell`; `star` marks the dual.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub cell: String,
    pub r: usize,
    pub s: usize,
    pub i: usize,
    pub star: bool,
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{},{}]{}", self.cell, self.r, self.s, self.i, if self.star { "*" } else { "" })
    }
}

/// A basis label: the (possibly empty) tensor history of a basis element.
pub type Label = Vec<Atom>;

pub fn label_string(l: &Label) -> String {
    if l.is_empty() {
        "1".to_string()
    } else {
        l.iter().map(|a| format!("{a:?}")).collect::<Vec<_>>().join(".")
    }
}

/// A 1-cell: per-entry ordered bases of labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatCell {
    pub src: MatZero,
    pub tgt: MatZero,
    /// `labels[r][s]` is the ordered basis of the `(r, s)` entry.
    pub labels: Vec<Vec<Vec<Label>>>,
}

impl MatCell {
    /// An atomic 1-cell with given entry ranks; `name` must be unique
    /// within a session for labels to stay collision-free.
    pub fn atomic(name: &str, src: &MatZero, tgt: &MatZero, ranks: &[Vec<usize>]) -> MatCell {
        assert_eq!(ranks.len(), src.elems);
        let labels = (0..src.elems)
            .map(|r| {
                assert_eq!(ranks[r].len(), tgt.elems);
                (0..tgt.elems)
                    .map(|s| {
                        (0..ranks[r][s])
                            .map(|i| vec![Atom { cell: name.to_string(), r, s, i, star: false }])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        MatCell { src: src.clone(), tgt: tgt.clone(), labels }
    }

    pub fn rank(&self, r: usize, s: usize) -> usize {
        self.labels[r][s].len()
    }

    /// The dual 1-cell `M*: S -|-> R`: transposed entries with reversed,
    /// starred labels.  Dualizing twice restores the original.
    pub fn dual(&self) -> MatCell {
        let labels = (0..self.tgt.elems)
            .map(|s| {
                (0..self.src.elems)
                    .map(|r| {
                        let mut ls: Vec<Label> = self.labels[r][s]
                            .iter()
                            .map(|l| {
                                l.iter()
                                    .rev()
                                    .map(|a| Atom { star: !a.star, ..a.clone() })
                                    .collect::<Label>()
                            })
                            .collect();
                        ls.sort();
                        ls
                    })
                    .collect()
            })
            .collect();
        MatCell { src: self.tgt.clone(), tgt: self.src.clone(), labels }
    }
}

/// For a composite entry `(r, t)` of `M (.) N`: the sorted list of
/// `(label, s, i, j)` with `label = M.labels[r][s][i] ++ N.labels[s][t][j]`.
/// The position in this list is the basis index of the composite entry.
fn composite_entry(m: &MatCell, n: &MatCell, r: usize, t: usize) -> Vec<(Label, usize, usize, usize)> {
    let mut out = Vec::new();
    for s in 0..m.tgt.elems {
        for (i, a) in m.labels[r][s].iter().enumerate() {
            for (j, b) in n.labels[s][t].iter().enumerate() {
                let mut l = a.clone();
                l.extend(b.iter().cloned());
                out.push((l, s, i, j));
            }
        }
    }
    out.sort();
    for w in out.windows(2) {
        assert!(w[0].0 != w[1].0, "basis label collision in composite");
    }
    out
}

/// A 2-cell: per-entry exact matrices (target rank x source rank).
#[derive(Clone, Debug)]
pub struct MatTwo {
    pub src: MatCell,
    pub tgt: MatCell,
    /// `mats[r][s]` maps the `(r, s)` entry of `src` to that of `tgt`.
    pub mats: Vec<Vec<QMat>>,
}

impl MatTwo {
    pub fn new(src: MatCell, tgt: MatCell, mats: Vec<Vec<QMat>>) -> MatTwo {
        assert_eq!(src.src, tgt.src, "2-cell endpoints differ");
        assert_eq!(src.tgt, tgt.tgt, "2-cell endpoints differ");
        for r in 0..src.src.elems {
            for s in 0..src.tgt.elems {
                assert_eq!(mats[r][s].cols, src.rank(r, s), "entry ({r},{s}) width mismatch");
                assert_eq!(mats[r][s].rows, tgt.rank(r, s), "entry ({r},{s}) height mismatch");
            }
        }
        MatTwo { src, tgt, mats }
    }
}

/// The matrices-of-modules instance over `Z` or `Q`.
#[derive(Clone, Copy, Debug)]
pub struct MatMod {
    pub ring: Ring,
}

impl MatMod {
    pub fn new(ring: Ring) -> MatMod {
        MatMod { ring }
    }
}

impl Bicat for MatMod {
    type Z = MatZero;
    type O = MatCell;
    type F = MatTwo;

    fn name(&self) -> &'static str {
        match self.ring {
            Ring::Z => "matmod-z",
            Ring::Q => "matmod-q",
        }
    }

    fn src0(&self, m: &MatCell) -> MatZero {
        m.src.clone()
    }

    fn tgt0(&self, m: &MatCell) -> MatZero {
        m.tgt.clone()
    }

    fn unit(&self, r: &MatZero) -> MatCell {
        let labels = (0..r.elems)
            .map(|a| (0..r.elems).map(|b| if a == b { vec![Vec::new()] } else { Vec::new() }).collect())
            .collect();
        MatCell { src: r.clone(), tgt: r.clone(), labels }
    }

    fn compose1(&self, m: &MatCell, n: &MatCell) -> MatCell {
        assert_eq!(m.tgt, n.src, "endpoint mismatch in 1-cell composition");
        let labels = (0..m.src.elems)
            .map(|r| {
                (0..n.tgt.elems)
                    .map(|t| composite_entry(m, n, r, t).into_iter().map(|(l, _, _, _)| l).collect())
                    .collect()
            })
            .collect();
        MatCell { src: m.src.clone(), tgt: n.tgt.clone(), labels }
    }

    fn two_src(&self, f: &MatTwo) -> MatCell {
        f.src.clone()
    }

    fn two_tgt(&self, f: &MatTwo) -> MatCell {
        f.tgt.clone()
    }

    fn id2(&self, m: &MatCell) -> MatTwo {
        let mats = (0..m.src.elems)
            .map(|r| (0..m.tgt.elems).map(|s| QMat::identity(m.rank(r, s))).collect())
            .collect();
        MatTwo { src: m.clone(), tgt: m.clone(), mats }
    }

    fn vcomp(&self, g: &MatTwo, f: &MatTwo) -> MatTwo {
        assert_eq!(g.src, f.tgt, "vertical composition boundary mismatch");
        let mats = (0..f.src.src.elems)
            .map(|r| (0..f.src.tgt.elems).map(|s| g.mats[r][s].mul(&f.mats[r][s])).collect())
            .collect();
        MatTwo { src: f.src.clone(), tgt: g.tgt.clone(), mats }
    }

    fn hcomp(&self, f: &MatTwo, g: &MatTwo) -> MatTwo {
        let src = self.compose1(&f.src, &g.src);
        let tgt = self.compose1(&f.tgt, &g.tgt);
        let mut mats = Vec::with_capacity(src.src.elems);
        for r in 0..src.src.elems {
            let mut row = Vec::with_capacity(src.tgt.elems);
            for t in 0..src.tgt.elems {
                let src_idx = composite_entry(&f.src, &g.src, r, t);
                let tgt_idx = composite_entry(&f.tgt, &g.tgt, r, t);
                let mut out = QMat::zero(tgt_idx.len(), src_idx.len());
                for (col, (_, s, i, j)) in src_idx.iter().enumerate() {
                    for (row_i, (_, s2, i2, j2)) in tgt_idx.iter().enumerate() {
                        if s != s2 {
                            continue;
                        }
                        let a = f.mats[r][*s].get(*i2, *i);
                        if a.is_zero() {
                            continue;
                        }
                        let b = g.mats[*s][t].get(*j2, *j);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(row_i, col, a * b);
                    }
                }
                row.push(out);
            }
            mats.push(row);
        }
        MatTwo { src, tgt, mats }
    }

    fn eq2(&self, f: &MatTwo, g: &MatTwo) -> bool {
        f.src == g.src && f.tgt == g.tgt && f.mats == g.mats
    }

    fn shadow_ob(&self, m: &MatCell) -> ShadowOb {
        assert_eq!(m.src, m.tgt, "shadow requires an endo-1-cell");
        let mut labels = Vec::new();
        for r in 0..m.src.elems {
            for l in &m.labels[r][r] {
                labels.push(format!("{}:{}", r, label_string(l)));
            }
        }
        ShadowOb::free(self.ring, labels)
    }

    fn shadow_mor(&self, f: &MatTwo) -> ShadowMor {
        let src = self.shadow_ob(&f.src);
        let tgt = self.shadow_ob(&f.tgt);
        let mut mat = QMat::zero(tgt.gens, src.gens);
        let mut col0 = 0;
        let mut row0 = 0;
        for r in 0..f.src.src.elems {
            let blk = &f.mats[r][r];
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    mat.set(row0 + i, col0 + j, blk.get(i, j).clone());
                }
            }
            col0 += blk.cols;
            row0 += blk.rows;
        }
        ShadowMor::new(src, tgt, mat)
    }

    fn theta(&self, m: &MatCell, n: &MatCell) -> ShadowMor {
        assert_eq!(m.tgt, n.src, "endpoint mismatch");
        assert_eq!(n.tgt, m.src, "theta requires a cyclically composable pair");
        let mn = self.compose1(m, n);
        let nm = self.compose1(n, m);
        let src = self.shadow_ob(&mn);
        let tgt = self.shadow_ob(&nm);
        // Precompute generator offsets of each diagonal entry.
        let offsets = |c: &MatCell| -> Vec<usize> {
            let mut off = vec![0usize; c.src.elems + 1];
            for r in 0..c.src.elems {
                off[r + 1] = off[r] + c.rank(r, r);
            }
            off
        };
        let off_src = offsets(&mn);
        let off_tgt = offsets(&nm);
        let mut mat = QMat::zero(tgt.gens, src.gens);
        for r in 0..m.src.elems {
            let src_idx = composite_entry(m, n, r, r);
            for (p, (_, s, i, j)) in src_idx.iter().enumerate() {
                // (a_i in M[r][s]) tensor (b_j in N[s][r])  ->  b_j tensor a_i
                let tgt_idx = composite_entry(n, m, *s, *s);
                let mut swapped = n.labels[*s][r][*j].clone();
                swapped.extend(m.labels[r][*s][*i].iter().cloned());
                let p2 = tgt_idx
                    .iter()
                    .position(|(l, _, _, _)| *l == swapped)
                    .expect("swapped label must exist in the reversed composite");
                mat.set(off_tgt[*s] + p2, off_src[r] + p, crate::linalg::q(1));
            }
        }
        ShadowMor::new(src, tgt, mat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn set(name: &str, n: usize) -> MatZero {
        MatZero { name: name.into(), elems: n }
    }

    #[test]
    fn strict_unit_and_assoc() {
        let inst = MatMod::new(Ring::Z);
        let r = set("R", 2);
        let s = set("S", 3);
        let t = set("T", 2);
        let m = MatCell::atomic("M", &r, &s, &[vec![2, 1, 0], vec![0, 1, 3]]);
        let n = MatCell::atomic("N", &s, &t, &[vec![1, 1], vec![2, 0], vec![0, 1]]);
        let p = MatCell::atomic("P", &t, &r, &[vec![1, 2], vec![1, 0]]);
        let u = inst.unit(&r);
        assert_eq!(inst.compose1(&u, &m), m);
        let ms = inst.compose1(&m, &inst.unit(&s));
        assert_eq!(ms, m);
        let left = inst.compose1(&inst.compose1(&m, &n), &p);
        let right = inst.compose1(&m, &inst.compose1(&n, &p));
        assert_eq!(left, right);
    }

    #[test]
    fn rank_multiplication() {
        let inst = MatMod::new(Ring::Z);
        let pt = set("pt", 1);
        let a = MatCell::atomic("A", &pt, &pt, &[vec![2]]);
        let b = MatCell::atomic("B", &pt, &pt, &[vec![3]]);
        assert_eq!(inst.compose1(&a, &b).rank(0, 0), 6);
    }

    #[test]
    fn shadow_is_diagonal_sum() {
        let inst = MatMod::new(Ring::Z);
        let r = set("R", 2);
        let m = MatCell::atomic("M", &r, &r, &[vec![2, 1], vec![4, 3]]);
        assert_eq!(inst.shadow_ob(&m).gens, 5);
    }

    #[test]
    fn theta_involutive_and_unit() {
        let inst = MatMod::new(Ring::Q);
        let pt = set("pt", 1);
        let m = MatCell::atomic("M", &pt, &pt, &[vec![2]]);
        let n = MatCell::atomic("N", &pt, &pt, &[vec![3]]);
        let t1 = inst.theta(&m, &n);
        let t2 = inst.theta(&n, &m);
        let round = t2.compose(&t1);
        assert!(round.eq(&ShadowMor::identity(&round.src)));
        let tu = inst.theta(&m, &inst.unit(&pt));
        assert!(tu.eq(&ShadowMor::identity(&tu.src)));
    }

    #[test]
    fn interchange_on_point() {
        let inst = MatMod::new(Ring::Q);
        let pt = set("pt", 1);
        let m = MatCell::atomic("M", &pt, &pt, &[vec![2]]);
        let n = MatCell::atomic("N", &pt, &pt, &[vec![2]]);
        let f = MatTwo::new(m.clone(), m.clone(), vec![vec![QMat::from_int_rows(&[&[1, 2], &[3, 4]])]]);
        let g = MatTwo::new(n.clone(), n.clone(), vec![vec![QMat::from_int_rows(&[&[0, 1], &[1, 1]])]]);
        let fg = inst.hcomp(&f, &g);
        let lhs = inst.vcomp(&inst.hcomp(&f, &inst.id2(&n)), &inst.hcomp(&inst.id2(&m), &g));
        assert!(inst.eq2(&fg, &lhs));
        // On a one-point set the horizontal composite is the Kronecker
        // product of the entry matrices.
        assert_eq!(fg.mats[0][0], f.mats[0][0].kron(&g.mats[0][0]));
        assert_eq!(*fg.mats[0][0].get(0, 0), q(0));
    }

    #[test]
    fn dual_is_involutive() {
        let r = set("R", 2);
        let s = set("S", 2);
        let m = MatCell::atomic("M", &r, &s, &[vec![2, 1], vec![0, 1]]);
        assert_eq!(m.dual().dual(), m);
    }
}
