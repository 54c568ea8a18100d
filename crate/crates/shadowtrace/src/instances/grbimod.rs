//! Free group-ring bimodules over finite groups.
//!
//! A 0-cell is a pair `(G, K)` of a finite group and a ground ring; a
//! 1-cell `(G, K) -|-> (H, K')` (with `K' >= K`) is a finitely generated
//! free right `K'[H]`-module of rank `n` together with a left `G`-action
//! given by a monoid homomorphism `lambda: G -> GL_n(K'[H])`; a 2-cell is a
//! `G`-equivariant matrix over the target group ring.
//!
//! Composition `M (.) N` is the tensor product over the middle group ring:
//! the composite is free of rank `m * n` with basis ordered first-factor
//! major, and its left action pushes `lambda_M` entrywise through the
//! linear extension of `lambda_N`.  Because that extension is an algebra
//! map, both bracketings of a triple composite give literally equal
//! actions, so the instance is strict.
//!
//! The shadow of an endo-1-cell at `(G, K)` is the cokernel of the
//! relations `g.(m_i x) - (m_i x).g` on the `n * |G|` generators `m_i x`,
//! computed by Smith normal form; `theta` rewrites `m (x) n . x` as
//! `n (x) (x . m)` through `lambda_M`.

use crate::bicat::Bicat;
use crate::group::GroupRef;
use crate::groupring::GrMat;
use crate::linalg::QMat;
use crate::shadow::{Ring, ShadowMor, ShadowOb};
use num_traits::Zero;
use std::fmt;

/// A 0-cell: a finite group with a ground ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrZero {
    pub group: GroupRef,
    pub ring: Ring,
}

/// A 1-cell: a free right module over the target group ring with a left
/// action of the source group.
#[derive(Clone, PartialEq, Eq)]
pub struct GrCell {
    pub src: GrZero,
    pub tgt: GrZero,
    pub rank: usize,
    /// `lambda[g]`: the action of `g` as a `rank x rank` matrix over the
    /// target group ring.
    pub lambda: Vec<GrMat>,
}

impl fmt::Debug for GrCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GrCell(({},{}) -|-> ({},{}), rank {})",
            self.src.group.name, self.src.ring, self.tgt.group.name, self.tgt.ring, self.rank
        )
    }
}

impl GrCell {
    /// Build and validate a 1-cell: `lambda` must be a monoid homomorphism
    /// with entries over the target group ring, integral when the target
    /// ring is `Z`, and the target ring must contain the source ring.
    pub fn new(src: GrZero, tgt: GrZero, rank: usize, lambda: Vec<GrMat>) -> GrCell {
        assert!(tgt.ring >= src.ring, "target ring must contain the source ring");
        assert_eq!(lambda.len(), src.group.n, "one action matrix per source group element");
        for m in &lambda {
            assert_eq!((m.rows, m.cols), (rank, rank), "action matrix shape mismatch");
            assert!(*m.group == *tgt.group, "action matrices must be over the target group");
            if tgt.ring == Ring::Z {
                assert!(m.is_integral(), "integral 1-cell has rational action entries");
            }
        }
        assert!(lambda[0].is_identity(), "action of the group identity must be the identity");
        for a in 0..src.group.n {
            for b in 0..src.group.n {
                let p = src.group.mul[a][b];
                assert_eq!(lambda[a].mul(&lambda[b]), lambda[p], "left action is not a monoid homomorphism");
            }
        }
        GrCell { src, tgt, rank, lambda }
    }

    /// Linear extension of this cell's action applied entrywise to a matrix
    /// over the source 0-cell's group ring: each entry `sum c_h h` becomes
    /// the block `sum c_h lambda[h]`.
    pub fn ext(&self, a: &GrMat) -> GrMat {
        assert!(*a.group == *self.src.group);
        let tgt_group = self.tgt.group.clone();
        let mut out = GrMat::zero(tgt_group.clone(), a.rows * self.rank, a.cols * self.rank);
        for h in 0..a.group.n {
            if a.comps[h].is_zero() {
                continue;
            }
            let scalar = GrMat::from_scalar_mat(tgt_group.clone(), &a.comps[h]);
            out = out.add(&scalar.kron(&self.lambda[h]));
        }
        out
    }
}

/// A 2-cell: an equivariant matrix over the target group ring.
#[derive(Clone, Debug)]
pub struct GrTwo {
    pub src: GrCell,
    pub tgt: GrCell,
    /// `tgt.rank x src.rank` over the target group ring.
    pub mat: GrMat,
}

impl GrTwo {
    /// Build and validate: the matrix must intertwine the left actions.
    pub fn new(src: GrCell, tgt: GrCell, mat: GrMat) -> GrTwo {
        let f = GrTwo::new_unchecked(src, tgt, mat);
        assert!(f.is_equivariant(), "2-cell matrix is not equivariant for the left actions");
        f
    }

    pub fn new_unchecked(src: GrCell, tgt: GrCell, mat: GrMat) -> GrTwo {
        assert_eq!(src.src, tgt.src, "2-cell endpoints differ");
        assert_eq!(src.tgt, tgt.tgt, "2-cell endpoints differ");
        assert_eq!((mat.rows, mat.cols), (tgt.rank, src.rank), "2-cell matrix shape mismatch");
        assert!(*mat.group == *src.tgt.group, "2-cell matrix over wrong group ring");
        if src.tgt.ring == Ring::Z {
            assert!(mat.is_integral(), "integral 2-cell has rational entries");
        }
        GrTwo { src, tgt, mat }
    }

    pub fn is_equivariant(&self) -> bool {
        (0..self.src.src.group.n)
            .all(|g| self.tgt.lambda[g].mul(&self.mat) == self.mat.mul(&self.src.lambda[g]))
    }
}

/// The group-ring bimodule instance.  The same instance value handles both
/// ground rings (and mixed cells, whose target ring strictly contains the
/// source ring); `preferred_ring` only steers samplers and printing.
#[derive(Clone, Copy, Debug)]
pub struct GrBimod {
    pub preferred_ring: Ring,
}

impl GrBimod {
    pub fn new(ring: Ring) -> GrBimod {
        GrBimod { preferred_ring: ring }
    }

    /// Generator index of `m_i * x` in the shadow presentation of an endo
    /// cell: first-factor major.
    fn gen_index(i: usize, x: usize, order: usize) -> usize {
        i * order + x
    }
}

impl Bicat for GrBimod {
    type Z = GrZero;
    type O = GrCell;
    type F = GrTwo;

    fn name(&self) -> &'static str {
        match self.preferred_ring {
            Ring::Z => "grbimod-z",
            Ring::Q => "grbimod-q",
        }
    }

    fn src0(&self, m: &GrCell) -> GrZero {
        m.src.clone()
    }

    fn tgt0(&self, m: &GrCell) -> GrZero {
        m.tgt.clone()
    }

    fn unit(&self, r: &GrZero) -> GrCell {
        let lambda = (0..r.group.n).map(|g| GrMat::monomial(r.group.clone(), g)).collect();
        GrCell { src: r.clone(), tgt: r.clone(), rank: 1, lambda }
    }

    fn compose1(&self, m: &GrCell, n: &GrCell) -> GrCell {
        assert_eq!(m.tgt, n.src, "endpoint mismatch in 1-cell composition");
        let lambda = (0..m.src.group.n).map(|g| n.ext(&m.lambda[g])).collect();
        GrCell { src: m.src.clone(), tgt: n.tgt.clone(), rank: m.rank * n.rank, lambda }
    }

    fn two_src(&self, f: &GrTwo) -> GrCell {
        f.src.clone()
    }

    fn two_tgt(&self, f: &GrTwo) -> GrCell {
        f.tgt.clone()
    }

    fn id2(&self, m: &GrCell) -> GrTwo {
        GrTwo::new_unchecked(m.clone(), m.clone(), GrMat::identity(m.tgt.group.clone(), m.rank))
    }

    fn vcomp(&self, g: &GrTwo, f: &GrTwo) -> GrTwo {
        assert!(g.src == f.tgt, "vertical composition boundary mismatch");
        GrTwo::new_unchecked(f.src.clone(), g.tgt.clone(), g.mat.mul(&f.mat))
    }

    fn hcomp(&self, f: &GrTwo, g: &GrTwo) -> GrTwo {
        let src = self.compose1(&f.src, &g.src);
        let tgt = self.compose1(&f.tgt, &g.tgt);
        // m_i (x) n_j  ->  f(m_i) (x) g(n_j), moving the group-ring
        // coefficients of f through the action of the target second factor.
        let left = g.tgt.ext(&f.mat);
        let scalar_id = GrMat::from_scalar_mat(g.mat.group.clone(), &QMat::identity(f.src.rank));
        let right = scalar_id.kron(&g.mat);
        GrTwo::new_unchecked(src, tgt, left.mul(&right))
    }

    fn eq2(&self, f: &GrTwo, g: &GrTwo) -> bool {
        f.src == g.src && f.tgt == g.tgt && f.mat == g.mat
    }

    fn shadow_ob(&self, m: &GrCell) -> ShadowOb {
        assert_eq!(m.src, m.tgt, "shadow requires an endo-1-cell");
        let group = m.src.group.clone();
        let order = group.n;
        let gens = m.rank * order;
        let labels = (0..m.rank)
            .flat_map(|i| (0..order).map(move |x| (i, x)))
            .map(|(i, x)| format!("m{}*{}", i, group.elem_names[x]))
            .collect();
        // Relations g.(m_i x) - (m_i x).g for g != e.
        let mut rows = Vec::new();
        for g in 1..order {
            for i in 0..m.rank {
                for x in 0..order {
                    let mut row = QMat::zero(1, gens);
                    // g . m_i = sum_i' m_i' lambda(g)[i', i]; multiply by x
                    // on the right and expand group-ring coefficients.
                    for ip in 0..m.rank {
                        for h in 0..order {
                            let c = m.lambda[g].coeff(ip, i, h);
                            if c.is_zero() {
                                continue;
                            }
                            let y = group.mul[h][x];
                            let idx = Self::gen_index(ip, y, order);
                            let cur = row.get(0, idx).clone();
                            row.set(0, idx, cur + c);
                        }
                    }
                    let idx = Self::gen_index(i, group.mul[x][g], order);
                    let cur = row.get(0, idx).clone();
                    row.set(0, idx, cur - crate::linalg::q(1));
                    rows.push(row);
                }
            }
        }
        let mut rels = QMat::zero(rows.len(), gens);
        for (k, row) in rows.iter().enumerate() {
            for j in 0..gens {
                rels.set(k, j, row.get(0, j).clone());
            }
        }
        ShadowOb::new(m.src.ring, labels, rels)
    }

    fn shadow_mor(&self, f: &GrTwo) -> ShadowMor {
        let src = self.shadow_ob(&f.src);
        let tgt = self.shadow_ob(&f.tgt);
        let group = f.src.src.group.clone();
        let order = group.n;
        let mut mat = QMat::zero(tgt.gens, src.gens);
        for i in 0..f.src.rank {
            for x in 0..order {
                let col = Self::gen_index(i, x, order);
                // f(m_i x) = sum_{i'} n_i' (F[i',i] x)
                for ip in 0..f.tgt.rank {
                    for h in 0..order {
                        let c = f.mat.coeff(ip, i, h);
                        if c.is_zero() {
                            continue;
                        }
                        let y = group.mul[h][x];
                        let row = Self::gen_index(ip, y, order);
                        let cur = mat.get(row, col).clone();
                        mat.set(row, col, cur + c);
                    }
                }
            }
        }
        ShadowMor::new(src, tgt, mat)
    }

    fn theta(&self, m: &GrCell, n: &GrCell) -> ShadowMor {
        assert_eq!(m.tgt, n.src, "endpoint mismatch");
        assert_eq!(n.tgt, m.src, "theta requires a cyclically composable pair");
        let mn = self.compose1(m, n);
        let nm = self.compose1(n, m);
        let src = self.shadow_ob(&mn);
        let tgt = self.shadow_ob(&nm);
        let g_order = m.src.group.n;
        let h_order = m.tgt.group.n;
        let mut mat = QMat::zero(tgt.gens, src.gens);
        // Generator (m_i (x) n_j).x of <M (.) N> maps to the class of
        // (n_j x) (x) m_i = sum_k (n_j (x) m_k) . lambda_M(x)[k, i].
        for i in 0..m.rank {
            for j in 0..n.rank {
                for x in 0..g_order {
                    let col = (i * n.rank + j) * g_order + x;
                    for k in 0..m.rank {
                        for h in 0..h_order {
                            let c = m.lambda[x].coeff(k, i, h);
                            if c.is_zero() {
                                continue;
                            }
                            let row = (j * m.rank + k) * h_order + h;
                            let cur = mat.get(row, col).clone();
                            mat.set(row, col, cur + c);
                        }
                    }
                }
            }
        }
        ShadowMor::new(src, tgt, mat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn zc(group: GroupRef, ring: Ring) -> GrZero {
        GrZero { group, ring }
    }

    #[test]
    fn unit_shadow_counts_conjugacy_classes() {
        let inst = GrBimod::new(Ring::Z);
        for (name, classes) in [("z2", 2), ("z3", 3), ("s3", 3)] {
            let g = Group::builtin(name).unwrap();
            let u = inst.unit(&zc(g, Ring::Z));
            let sh = inst.shadow_ob(&u);
            let (free, torsion) = sh.invariants();
            assert_eq!(free, classes, "wrong class count for {name}");
            assert!(torsion.is_empty());
        }
    }

    #[test]
    fn strict_unit_and_assoc() {
        let inst = GrBimod::new(Ring::Z);
        let g = Group::cyclic(2);
        let r = zc(g.clone(), Ring::Z);
        // A rank-2 cell: g acts by the swap.
        let swap = {
            let mut m = GrMat::zero(g.clone(), 2, 2);
            m.comps[0] = QMat::from_int_rows(&[&[0, 1], &[1, 0]]);
            m
        };
        let m = GrCell::new(r.clone(), r.clone(), 2, vec![GrMat::identity(g.clone(), 2), swap]);
        let u = inst.unit(&r);
        assert_eq!(inst.compose1(&u, &m), m);
        assert_eq!(inst.compose1(&m, &u), m);
        let mm = inst.compose1(&m, &m);
        assert_eq!(inst.compose1(&inst.compose1(&m, &m), &m), inst.compose1(&m, &mm));
    }

    #[test]
    fn theta_involutive_on_units() {
        let inst = GrBimod::new(Ring::Z);
        let g = Group::s3();
        let r = zc(g.clone(), Ring::Z);
        let u = inst.unit(&r);
        let t1 = inst.theta(&u, &u);
        let t2 = inst.theta(&u, &u);
        let round = t2.compose(&t1);
        assert!(round.eq(&ShadowMor::identity(&round.src)));
        assert!(round.is_well_defined());
    }

    #[test]
    fn twisted_unit_shadow_matches_orbit_count() {
        // R_psi for psi = inversion on Z/3 has a single twisted class.
        let inst = GrBimod::new(Ring::Z);
        let g = Group::cyclic(3);
        let r = zc(g.clone(), Ring::Z);
        let psi = crate::group::Endo::new(g.clone(), vec![0, 2, 1]).unwrap();
        let lambda = (0..3).map(|x| GrMat::monomial(g.clone(), psi.apply(x))).collect();
        let r_psi = GrCell::new(r.clone(), r.clone(), 1, lambda);
        let sh = inst.shadow_ob(&r_psi);
        let (free, torsion) = sh.invariants();
        let classes = crate::group::twisted_conjugacy_classes(g, &psi);
        assert_eq!(free, classes.reps.len());
        assert_eq!(free, 1);
        assert!(torsion.is_empty());
    }
}
