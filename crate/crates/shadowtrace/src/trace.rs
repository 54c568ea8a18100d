//! Dual pairs, mates, and the bicategorical trace.
//!
//! A [`DualPair`] packages a right-dualizable 1-cell `M: R -|-> S` with its
//! dual `M*`, coevaluation `coev: U_R -> M (.) M*` and evaluation
//! `ev: M* (.) M -> U_S`, both triangle identities checked exactly at
//! construction.
//!
//! The trace of `f: Q (.) M -> M (.) P` is the composite
//!
//! ```text
//! <Q> --<id_Q (.) coev>--> <Q (.) M (.) M*> --<f (.) id>--> <M (.) P (.) M*>
//!     --theta--> <M* (.) M (.) P> --<ev (.) id_P>--> <P>
//! ```
//!
//! For left-dualizable input (used by the mate law) the mirror composite
//! `left_trace` applies `theta` on the other side.

use crate::bicat::{expect_shape, Bicat};
use crate::instances::grbimod::{GrBimod, GrCell, GrTwo};
use crate::instances::matmod::{MatCell, MatMod, MatTwo};
use crate::instances::span::{Span, SpanAtom, SpanCell, SpanTwo};
use crate::groupring::GrMat;
use crate::linalg::{q, QMat};
use crate::shadow::ShadowMor;
use num_traits::Zero;

/// A 1-cell with a chosen right dual and structure 2-cells.
#[derive(Clone, Debug)]
pub struct DualPair<I: Bicat> {
    pub m: I::O,
    pub mdual: I::O,
    /// `U_R -> M (.) M*`
    pub coev: I::F,
    /// `M* (.) M -> U_S`
    pub ev: I::F,
}

impl<I: Bicat> DualPair<I> {
    /// Assemble and verify both triangle identities.
    pub fn new(inst: &I, m: I::O, mdual: I::O, coev: I::F, ev: I::F) -> Result<DualPair<I>, String> {
        let r = inst.src0(&m);
        let s = inst.tgt0(&m);
        if inst.src0(&mdual) != s || inst.tgt0(&mdual) != r {
            return Err("dual has wrong endpoints".into());
        }
        let ur = inst.unit(&r);
        let us = inst.unit(&s);
        expect_shape(inst, &coev, &ur, &inst.compose1(&m, &mdual), "coevaluation");
        expect_shape(inst, &ev, &inst.compose1(&mdual, &m), &us, "evaluation");
        // (id_M (.) ev) . (coev (.) id_M) = id_M
        let t1 = inst.vcomp(
            &inst.hcomp(&inst.id2(&m), &ev),
            &inst.hcomp(&coev, &inst.id2(&m)),
        );
        if !inst.eq2(&t1, &inst.id2(&m)) {
            return Err("first triangle identity fails".into());
        }
        // (ev (.) id_M*) . (id_M* (.) coev) = id_M*
        let t2 = inst.vcomp(
            &inst.hcomp(&ev, &inst.id2(&mdual)),
            &inst.hcomp(&inst.id2(&mdual), &coev),
        );
        if !inst.eq2(&t2, &inst.id2(&mdual)) {
            return Err("second triangle identity fails".into());
        }
        Ok(DualPair { m, mdual, coev, ev })
    }
}

/// Construct the dual pair of `M (.) N` from dual pairs of the factors:
/// the dual is `N* (.) M*`, with coevaluation
/// `(id_M (.) coev_N (.) id_M*) . coev_M` and evaluation
/// `ev_N . (id_N* (.) ev_M (.) id_N)`.
pub fn compose_duals<I: Bicat>(inst: &I, dm: &DualPair<I>, dn: &DualPair<I>) -> DualPair<I> {
    let m = inst.compose1(&dm.m, &dn.m);
    let mdual = inst.compose1(&dn.mdual, &dm.mdual);
    let coev = inst.vcomp(
        &inst.hcomp(&inst.hcomp(&inst.id2(&dm.m), &dn.coev), &inst.id2(&dm.mdual)),
        &dm.coev,
    );
    let ev = inst.vcomp(
        &dn.ev,
        &inst.hcomp(&inst.hcomp(&inst.id2(&dn.mdual), &dm.ev), &inst.id2(&dn.m)),
    );
    DualPair::new(inst, m, mdual, coev, ev).expect("composite dual pair must satisfy the triangles")
}

/// The bicategorical trace of `f: Q (.) M -> M (.) P`, a shadow morphism
/// `<Q> -> <P>`.  `q_cell` and `p_cell` are passed explicitly because the
/// decomposition of the boundary of `f` is not recoverable from `f` alone.
pub fn trace<I: Bicat>(inst: &I, q_cell: &I::O, p_cell: &I::O, f: &I::F, d: &DualPair<I>) -> ShadowMor {
    let m = &d.m;
    expect_shape(inst, f, &inst.compose1(q_cell, m), &inst.compose1(m, p_cell), "trace input");
    let step1 = inst.shadow_mor(&inst.hcomp(&inst.id2(q_cell), &d.coev));
    let step2 = inst.shadow_mor(&inst.hcomp(f, &inst.id2(&d.mdual)));
    let rot = inst.theta(&inst.compose1(m, p_cell), &d.mdual);
    let step4 = inst.shadow_mor(&inst.hcomp(&d.ev, &inst.id2(p_cell)));
    step4.compose(&rot).compose(&step2).compose(&step1)
}

/// Trace computed with a left-dualizable convention: for
/// `g: M' (.) Q -> P (.) M'` where `(M, M')` is a dual pair (so `M'` is
/// left dualizable with left dual `M`), the composite
///
/// ```text
/// <Q> --<coev (.) id_Q>--> <M (.) M' (.) Q> --<id_M (.) g>--> <M (.) P (.) M'>
///     --theta_{M, P (.) M'}--> <P (.) M' (.) M> --<id_P (.) ev>--> <P>
/// ```
pub fn left_trace<I: Bicat>(inst: &I, q_cell: &I::O, p_cell: &I::O, g: &I::F, d: &DualPair<I>) -> ShadowMor {
    let mprime = &d.mdual;
    expect_shape(inst, g, &inst.compose1(mprime, q_cell), &inst.compose1(p_cell, mprime), "left trace input");
    let step1 = inst.shadow_mor(&inst.hcomp(&d.coev, &inst.id2(q_cell)));
    let step2 = inst.shadow_mor(&inst.hcomp(&inst.id2(&d.m), g));
    let rot = inst.theta(&d.m, &inst.compose1(p_cell, mprime));
    let step4 = inst.shadow_mor(&inst.hcomp(&inst.id2(p_cell), &d.ev));
    step4.compose(&rot).compose(&step2).compose(&step1)
}

/// The mate of `f: Q (.) M -> N (.) P` along dual pairs for `M` and `N`:
/// the 2-cell `N* (.) Q -> P (.) M*` given by
/// `(ev_N (.) id (.) id) . (id (.) f (.) id) . (id (.) id (.) coev_M)`.
pub fn mate<I: Bicat>(
    inst: &I,
    q_cell: &I::O,
    p_cell: &I::O,
    f: &I::F,
    dm: &DualPair<I>,
    dn: &DualPair<I>,
) -> I::F {
    expect_shape(
        inst,
        f,
        &inst.compose1(q_cell, &dm.m),
        &inst.compose1(&dn.m, p_cell),
        "mate input",
    );
    let ndual = inst.id2(&dn.mdual);
    let step1 = inst.hcomp(&inst.hcomp(&ndual, &inst.id2(q_cell)), &dm.coev);
    let step2 = inst.hcomp(&inst.hcomp(&ndual, f), &inst.id2(&dm.mdual));
    let step3 = inst.hcomp(&inst.hcomp(&dn.ev, &inst.id2(p_cell)), &inst.id2(&dm.mdual));
    inst.vcomp(&step3, &inst.vcomp(&step2, &step1))
}

/// The inverse construction: for `g: M* (.) Q -> P (.) N*`, the 2-cell
/// `Q (.) N -> M (.) P` given by
/// `(id (.) id (.) ev_N) . (id (.) g (.) id) . (coev_M (.) id (.) id)`.
/// Applying [`mate`] and then this returns the original 2-cell.
pub fn comate<I: Bicat>(
    inst: &I,
    q_cell: &I::O,
    p_cell: &I::O,
    g: &I::F,
    dm: &DualPair<I>,
    dn: &DualPair<I>,
) -> I::F {
    expect_shape(
        inst,
        g,
        &inst.compose1(&dm.mdual, q_cell),
        &inst.compose1(p_cell, &dn.mdual),
        "comate input",
    );
    let step1 = inst.hcomp(&dm.coev, &inst.id2(&inst.compose1(q_cell, &dn.m)));
    let step2 = inst.hcomp(&inst.hcomp(&inst.id2(&dm.m), g), &inst.id2(&dn.m));
    let step3 = inst.hcomp(&inst.id2(&inst.compose1(&dm.m, p_cell)), &dn.ev);
    inst.vcomp(&step3, &inst.vcomp(&step2, &step1))
}

/// Euler characteristic: the trace of the identity 2-cell, as a morphism
/// `<U_R> -> <U_S>` ... more precisely with unit outer cells.
pub fn euler<I: Bicat>(inst: &I, d: &DualPair<I>) -> ShadowMor {
    let r = inst.src0(&d.m);
    let s = inst.tgt0(&d.m);
    let uq = inst.unit(&r);
    let up = inst.unit(&s);
    // id_M seen as Q (.) M -> M (.) P with unit Q, P; strictness makes the
    // boundaries literally equal.
    let f = inst.id2(&d.m);
    trace(inst, &uq, &up, &f, d)
}

/// Transfer: the trace of a "diagonal" 2-cell `delta: M -> M (.) P`
/// (typically `P = M` for an honest diagonal), with unit incoming cell.
pub fn transfer<I: Bicat>(inst: &I, p_cell: &I::O, delta: &I::F, d: &DualPair<I>) -> ShadowMor {
    let r = inst.src0(&d.m);
    let uq = inst.unit(&r);
    trace(inst, &uq, p_cell, delta, d)
}

// ---------------------------------------------------------------------------
// Instance-specific dual constructions
// ---------------------------------------------------------------------------

/// Dual pair for any `MatMod` 1-cell (always dualizable: entries are
/// finitely generated free).  Coevaluation and evaluation pair each basis
/// label with its starred mirror.
pub fn matmod_dual(inst: &MatMod, m: &MatCell) -> Result<DualPair<MatMod>, String> {
    let mdual = m.dual();
    let mmd = inst.compose1(m, &mdual);
    let u_r = inst.unit(&m.src);
    // coev: unit label at r maps to the sum over s, i of a_i . a_i*.
    let mut coev_mats = Vec::new();
    for r in 0..m.src.elems {
        let mut row = Vec::new();
        for r2 in 0..m.src.elems {
            let mut mat = QMat::zero(mmd.rank(r, r2), u_r.rank(r, r2));
            if r == r2 {
                for s in 0..m.tgt.elems {
                    for a in &m.labels[r][s] {
                        let mut paired = a.clone();
                        paired.extend(a.iter().rev().map(|at| crate::instances::matmod::Atom {
                            star: !at.star,
                            ..at.clone()
                        }));
                        let pos = mmd.labels[r][r].iter().position(|l| *l == paired).unwrap();
                        mat.set(pos, 0, q(1));
                    }
                }
            }
            row.push(mat);
        }
        coev_mats.push(row);
    }
    let coev = MatTwo::new(u_r, mmd, coev_mats);
    // ev: a* . b at (s, s) maps to delta_{a,b} times the unit label.
    let mdm = inst.compose1(&mdual, m);
    let u_s = inst.unit(&m.tgt);
    let mut ev_mats = Vec::new();
    for s in 0..m.tgt.elems {
        let mut row = Vec::new();
        for s2 in 0..m.tgt.elems {
            let mut mat = QMat::zero(u_s.rank(s, s2), mdm.rank(s, s2));
            if s == s2 {
                for (p, l) in mdm.labels[s][s].iter().enumerate() {
                    // l = a* ++ b with a, b labels of M entries (r, s); the
                    // starred half has the length of a.
                    let half = l.len() / 2;
                    let (astar, b) = l.split_at(half);
                    let a: Vec<_> = astar
                        .iter()
                        .rev()
                        .map(|at| crate::instances::matmod::Atom { star: !at.star, ..at.clone() })
                        .collect();
                    if a == *b {
                        mat.set(0, p, q(1));
                    }
                }
            }
            row.push(mat);
        }
        ev_mats.push(row);
    }
    let ev = MatTwo::new(mdm, u_s, ev_mats);
    DualPair::new(inst, m.clone(), mdual, coev, ev)
}

/// Dual pair for a span whose left leg is a bijection; errors otherwise.
pub fn span_dual(inst: &Span, m: &SpanCell) -> Result<DualPair<Span>, String> {
    // left leg must be a bijection onto src
    let mut seen = vec![false; m.src.elems];
    for e in &m.elems {
        if seen[e.l] {
            return Err(format!("left leg is not injective (object {} hit twice)", e.l));
        }
        seen[e.l] = true;
    }
    if !seen.iter().all(|&b| b) {
        return Err("left leg is not surjective".into());
    }
    let mdual = m.dual();
    let mmd = inst.compose1(m, &mdual);
    let u_r = inst.unit(&m.src);
    let coev_map = u_r
        .elems
        .iter()
        .map(|ue| {
            // unit at r -> (x, x*) where l(x) = r
            let x = m.elems.iter().find(|e| e.l == ue.l).unwrap();
            let mut atoms = x.atoms.clone();
            atoms.extend(x.atoms.iter().rev().map(|a| match a {
                SpanAtom::El { cell, idx, star } => SpanAtom::El { cell: cell.clone(), idx: *idx, star: !*star },
                SpanAtom::Unit { r } => SpanAtom::Unit { r: *r },
            }));
            mmd.index_of(&atoms)
        })
        .collect();
    let coev = SpanTwo::new(u_r, mmd, coev_map);
    let mdm = inst.compose1(&mdual, m);
    let u_s = inst.unit(&m.tgt);
    let ev_map = mdm
        .elems
        .iter()
        .map(|e| u_s.index_of(&[SpanAtom::Unit { r: e.l }]))
        .collect();
    let ev = SpanTwo::new(mdm, u_s, ev_map);
    DualPair::new(inst, m.clone(), mdual, coev, ev)
}

/// Dual pair for a group-ring bimodule.  Two shapes are supported:
///
/// * source 0-cell has the trivial group: `M` is a plain free right
///   `K[H]`-module of rank `n`; the dual is the rank `n * |H|` module of
///   functionals with the regular-representation left `H`-action;
/// * target 0-cell has the trivial group and the left action is literally
///   a direct sum of copies of the regular representation of `G` in the
///   standard layout: the dual is free of rank `n / |G|` over `K[G]`.
pub fn grbimod_dual(inst: &GrBimod, m: &GrCell) -> Result<DualPair<GrBimod>, String> {
    if m.src.ring != m.tgt.ring {
        return Err("mixed-ring cells have no dual in this encoding".into());
    }
    if m.src.group.n == 1 {
        grbimod_dual_src_trivial(inst, m)
    } else if m.tgt.group.n == 1 {
        grbimod_dual_regular(inst, m)
    } else {
        Err("dualizable shapes require a trivial group on one side".into())
    }
}

fn grbimod_dual_src_trivial(inst: &GrBimod, m: &GrCell) -> Result<DualPair<GrBimod>, String> {
    let h = m.tgt.group.clone();
    let n = m.rank;
    let order = h.n;
    // Dual basis phi_{i,x}: m_j -> delta_{ij} x, ordered i-major; left
    // action h . phi_{i,x} = phi_{i,hx}.
    let lambda: Vec<GrMat> = (0..order)
        .map(|g| {
            // Matrices over the dual's target group ring: the trivial
            // group of the original source 0-cell.
            let mut p = GrMat::zero(m.src.group.clone(), n * order, n * order);
            for i in 0..n {
                for x in 0..order {
                    let y = h.mul[g][x];
                    p.comps[0].set(i * order + y, i * order + x, q(1));
                }
            }
            p
        })
        .collect();
    let mdual = GrCell::new(m.tgt.clone(), m.src.clone(), n * order, lambda);
    let mmd = inst.compose1(m, &mdual);
    let u_r = inst.unit(&m.src);
    // coev: 1 -> sum_i m_i (x) phi_{i,e}; composite basis (j, (i, x)).
    let mut coev_mat = GrMat::zero(m.src.group.clone(), n * n * order, 1);
    for i in 0..n {
        let row = i * (n * order) + i * order; // (i, (i, e))
        coev_mat.comps[0].set(row, 0, q(1));
    }
    let coev = GrTwo::new_unchecked(u_r, mmd, coev_mat);
    // ev: phi_{i,x} (x) m_j -> delta_{ij} x in K[H].
    let mdm = inst.compose1(&mdual, m);
    let u_s = inst.unit(&m.tgt);
    let mut ev_mat = GrMat::zero(h.clone(), 1, n * order * n);
    for i in 0..n {
        for x in 0..order {
            for j in 0..n {
                if i == j {
                    let col = (i * order + x) * n + j;
                    ev_mat.comps[x].set(0, col, q(1));
                }
            }
        }
    }
    let ev = GrTwo::new_unchecked(mdm, u_s, ev_mat);
    DualPair::new(inst, m.clone(), mdual, coev, ev)
}

fn grbimod_dual_regular(inst: &GrBimod, m: &GrCell) -> Result<DualPair<GrBimod>, String> {
    let g = m.src.group.clone();
    let order = g.n;
    if m.rank % order != 0 {
        return Err(format!("rank {} is not a multiple of the group order {}", m.rank, order));
    }
    let k = m.rank / order;
    // Require lambda(g) = I_k (x) P_g with P_g the left-multiplication
    // permutation on the basis (copy, x).
    for gg in 0..order {
        let mut expected = GrMat::zero(m.tgt.group.clone(), m.rank, m.rank);
        for c in 0..k {
            for x in 0..order {
                let y = g.mul[gg][x];
                expected.comps[0].set(c * order + y, c * order + x, q(1));
            }
        }
        if m.lambda[gg] != expected {
            return Err("left action is not a standard-layout sum of regular representations".into());
        }
    }
    // Dual: rank k free right K[G]-module; basis psi_c = phi_{c, e}, with
    // phi_{c,x} = psi_c . x^{-1}.
    // The source group of the dual is trivial, so its action is the single
    // identity matrix over K[G].
    let mdual = GrCell::new(m.tgt.clone(), m.src.clone(), k, vec![GrMat::identity(g.clone(), k)]);
    let mmd = inst.compose1(m, &mdual);
    let u_r = inst.unit(&m.src);
    // coev: u -> sum_{c,x} e_{(c,x)} (x) psi_c . x^{-1}; composite basis
    // ((c, x), c') over K[G].
    let mut coev_mat = GrMat::zero(g.clone(), m.rank * k, 1);
    for c in 0..k {
        for x in 0..order {
            let row = (c * order + x) * k + c;
            let xinv = g.inv[x];
            let cur = coev_mat.comps[xinv].get(row, 0).clone();
            coev_mat.comps[xinv].set(row, 0, cur + q(1));
        }
    }
    let coev = GrTwo::new_unchecked(u_r.clone(), mmd, coev_mat);
    // ev: psi_c (x) e_{(c', x)} -> delta_{c c'} delta_{x e} over K.
    let mdm = inst.compose1(&mdual, m);
    let u_s = inst.unit(&m.tgt);
    let mut ev_mat = GrMat::zero(m.tgt.group.clone(), 1, k * m.rank);
    for c in 0..k {
        let col = c * m.rank + c * order; // (c, (c, e))
        ev_mat.comps[0].set(0, col, q(1));
    }
    let ev = GrTwo::new_unchecked(mdm, u_s, ev_mat);
    DualPair::new(inst, m.clone(), mdual, coev, ev)
}

/// Replace a dual pair by an equivalent one whose dual basis is permuted;
/// used to test that traces do not depend on the chosen dual.  The
/// permutation is realized by an invertible 2-cell `p: M* -> M*'` given as
/// an instance-specific relabeling; here we only implement the `MatMod`
/// case, where any invertible matrix conjugation of the dual works.
pub fn matmod_permuted_dual(inst: &MatMod, d: &DualPair<MatMod>, p: &MatTwo) -> DualPair<MatMod> {
    // p: M* -> M* invertible (caller supplies an invertible entrywise
    // matrix with p_inv below); new coev = (id (.) p) . coev, new ev =
    // ev . (p_inv (.) id).
    let p_inv = {
        let mats = p
            .mats
            .iter()
            .map(|row| row.iter().map(invert_qmat).collect())
            .collect();
        MatTwo::new(p.tgt.clone(), p.src.clone(), mats)
    };
    let coev = inst.vcomp(&inst.hcomp(&inst.id2(&d.m), p), &d.coev);
    let ev = inst.vcomp(&d.ev, &inst.hcomp(&p_inv, &inst.id2(&d.m)));
    DualPair::new(inst, d.m.clone(), d.mdual.clone(), coev, ev)
        .expect("permuted dual must still satisfy the triangles")
}

/// Exact inverse of a square rational matrix (Gauss-Jordan); panics if
/// singular.
pub fn invert_qmat(m: &QMat) -> QMat {
    assert_eq!(m.rows, m.cols, "only square matrices invert");
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = QMat::identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&i| !a.get(i, col).is_zero()).expect("singular matrix");
        for j in 0..n {
            let (x, y) = (a.get(piv, j).clone(), a.get(col, j).clone());
            a.set(col, j, x);
            a.set(piv, j, y);
            let (x, y) = (inv.get(piv, j).clone(), inv.get(col, j).clone());
            inv.set(col, j, x);
            inv.set(piv, j, y);
        }
        let p = a.get(col, col).clone();
        for j in 0..n {
            let x = a.get(col, j).clone() / &p;
            a.set(col, j, x);
            let x = inv.get(col, j).clone() / &p;
            inv.set(col, j, x);
        }
        for i in 0..n {
            if i != col && !a.get(i, col).is_zero() {
                let c = a.get(i, col).clone();
                for j in 0..n {
                    let x = a.get(i, j).clone() - &c * a.get(col, j);
                    a.set(i, j, x);
                    let x = inv.get(i, j).clone() - &c * inv.get(col, j);
                    inv.set(i, j, x);
                }
            }
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Endo, Group};
    use crate::instances::grbimod::GrZero;
    use crate::instances::matmod::MatZero;
    use crate::instances::span::SpanZero;
    use crate::linalg::q;
    use crate::sample::{rng, GrSampler, MatSampler, SpanSampler};
    use crate::shadow::{Ring, ShadowMor};

    #[test]
    fn matmod_trace_is_diagonal_sum() {
        let inst = MatMod::new(Ring::Z);
        let pt = MatZero { name: "pt".into(), elems: 1 };
        let m = MatCell::atomic("M", &pt, &pt, &[vec![3]]);
        let f = MatTwo::new(
            m.clone(),
            m.clone(),
            vec![vec![QMat::from_int_rows(&[&[1, 2, 0], &[5, -3, 1], &[0, 4, 7]])]],
        );
        let d = matmod_dual(&inst, &m).unwrap();
        let u = inst.unit(&pt);
        let t = trace(&inst, &u, &u, &f, &d);
        assert_eq!(t.mat.rows, 1);
        assert_eq!(t.mat.cols, 1);
        assert_eq!(*t.mat.get(0, 0), q(1 - 3 + 7));
    }

    #[test]
    fn matmod_trace_independent_of_dual_basis() {
        let mut r = rng(23);
        let mut s = MatSampler::new(Ring::Q);
        let inst = MatMod::new(Ring::Q);
        for _ in 0..20 {
            let a = s.set(&mut r);
            let m = s.cell(&mut r, &a, &a);
            let f = s.two(&mut r, &m, &m);
            let d = matmod_dual(&inst, &m).unwrap();
            let p = s.invertible_endo(&mut r, &d.mdual);
            let d2 = matmod_permuted_dual(&inst, &d, &p);
            let u = inst.unit(&a);
            let t1 = trace(&inst, &u, &u, &f, &d);
            let t2 = trace(&inst, &u, &u, &f, &d2);
            assert!(t1.eq(&t2), "trace must not depend on the chosen dual");
        }
    }

    #[test]
    fn mate_then_comate_is_identity() {
        let mut r = rng(31);
        let mut s = MatSampler::new(Ring::Q);
        let inst = MatMod::new(Ring::Q);
        for _ in 0..10 {
            let a = s.set(&mut r);
            let b = s.set(&mut r);
            let m = s.cell(&mut r, &a, &b);
            let n = s.cell(&mut r, &a, &b);
            let qc = s.cell(&mut r, &a, &a);
            let pc = s.cell(&mut r, &b, &b);
            let f = s.two(&mut r, &inst.compose1(&qc, &m), &inst.compose1(&n, &pc));
            let dm = matmod_dual(&inst, &m).unwrap();
            let dn = matmod_dual(&inst, &n).unwrap();
            let g = mate(&inst, &qc, &pc, &f, &dm, &dn);
            // the mate lives between the duals, so inverting swaps the
            // roles of the two dual pairs
            let back = comate(&inst, &qc, &pc, &g, &dn, &dm);
            assert!(inst.eq2(&back, &f));
        }
    }

    #[test]
    fn span_euler_tabulates_the_right_leg() {
        let mut r = rng(37);
        let mut s = SpanSampler::new();
        let inst = Span;
        for _ in 0..20 {
            let a = s.set(&mut r);
            let b = s.set(&mut r);
            let m = s.dualizable(&mut r, &a, &b);
            let d = span_dual(&inst, &m).unwrap();
            let t = euler(&inst, &d);
            // entry (g(x), x) = 1 where x runs over src elements and g is
            // the right leg read through the left-leg bijection
            let mut expected = QMat::zero(b.elems, a.elems);
            for e in &m.elems {
                expected.set(e.r, e.l, q(1));
            }
            assert_eq!(t.mat, expected);
        }
    }

    #[test]
    fn span_without_bijective_left_leg_has_no_dual() {
        let inst = Span;
        let a = SpanZero { name: "A".into(), elems: 2 };
        let m = SpanCell::atomic("M", &a, &a, &[(0, 0), (0, 1)]);
        assert!(span_dual(&inst, &m).is_err());
    }

    #[test]
    fn grbimod_src_trivial_euler_counts_rank_at_identity() {
        let inst = GrBimod::new(Ring::Z);
        let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
        let mut r = rng(41);
        let s = GrSampler::new(Ring::Z);
        for name in ["z2", "z3", "s3"] {
            let h = GrZero { group: Group::builtin(name).unwrap(), ring: Ring::Z };
            let m = s.cell(&mut r, &triv, &h);
            let d = grbimod_dual(&inst, &m).unwrap();
            let t = euler(&inst, &d);
            // <U_1> = Z -> <U_H>: the class of the identity with
            // coefficient rank(M).
            let sh_tgt = inst.shadow_ob(&inst.unit(&h));
            let mut expected = QMat::zero(sh_tgt.gens, 1);
            expected.set(0, 0, q(m.rank as i64));
            let want = ShadowMor::new(inst.shadow_ob(&inst.unit(&triv)), sh_tgt, expected);
            assert!(t.eq(&want), "euler of a free module is its rank at the identity class");
        }
    }

    #[test]
    fn regular_representation_character_of_z2() {
        // The regular representation of Z/2 over Q: euler is the character
        // (2 at the identity, 0 at the involution).
        let inst = GrBimod::new(Ring::Q);
        let g = Group::cyclic(2);
        let gz = GrZero { group: g.clone(), ring: Ring::Q };
        let triv = GrZero { group: Group::trivial(), ring: Ring::Q };
        let lambda = (0..2)
            .map(|x| {
                let mut p = GrMat::zero(Group::trivial(), 2, 2);
                for y in 0..2 {
                    p.comps[0].set(g.mul[x][y], y, q(1));
                }
                p
            })
            .collect();
        let m = GrCell::new(gz.clone(), triv.clone(), 2, lambda);
        let d = grbimod_dual(&inst, &m).unwrap();
        let t = euler(&inst, &d);
        // Oracle: the character as diagonal sums of the action matrices.
        let character: Vec<_> = (0..2)
            .map(|x| {
                let mut acc = q(0);
                for i in 0..2 {
                    acc += m.lambda[x].comps[0].get(i, i);
                }
                acc
            })
            .collect();
        assert_eq!(character, vec![q(2), q(0)]);
        let src = inst.shadow_ob(&inst.unit(&gz));
        let tgt = inst.shadow_ob(&inst.unit(&triv));
        let mut expected = QMat::zero(1, 2);
        for (x, c) in character.iter().enumerate() {
            expected.set(0, x, c.clone());
        }
        let want = ShadowMor::new(src, tgt, expected);
        assert!(t.eq(&want), "euler of the regular representation is its character");
    }

    #[test]
    fn composed_duals_satisfy_triangles_and_compose_traces() {
        let mut r = rng(43);
        let mut s = MatSampler::new(Ring::Z);
        let inst = MatMod::new(Ring::Z);
        let a = s.set(&mut r);
        let b = s.set(&mut r);
        let c = s.set(&mut r);
        let m = s.cell(&mut r, &a, &b);
        let n = s.cell(&mut r, &b, &c);
        let dm = matmod_dual(&inst, &m).unwrap();
        let dn = matmod_dual(&inst, &n).unwrap();
        let dmn = compose_duals(&inst, &dm, &dn);
        assert_eq!(dmn.m, inst.compose1(&m, &n));
    }

    #[test]
    fn twisted_trace_agrees_with_bicategorical_trace() {
        // A free rank-n module over Z[G] with a plain matrix F, read as a
        // 2-cell M -> M (.) U_psi: its trace must equal the projection of
        // the diagonal sum along twisted classes.
        let inst = GrBimod::new(Ring::Z);
        let mut r = rng(47);
        let s = GrSampler::new(Ring::Z);
        for name in ["z2", "z3", "s3"] {
            let g = Group::builtin(name).unwrap();
            let gz = GrZero { group: g.clone(), ring: Ring::Z };
            let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
            for psi in Endo::all(&g) {
                let rpsi = crate::traces::twisted_unit(&gz, &psi);
                let n = 2;
                let m = GrCell::new(
                    triv.clone(),
                    gz.clone(),
                    n,
                    vec![GrMat::identity(g.clone(), n)],
                );
                let fmat = s.grmat(&mut r, &g, Ring::Z, n, n);
                let f = GrTwo::new_unchecked(m.clone(), inst.compose1(&m, &rpsi), fmat.clone());
                let d = grbimod_dual(&inst, &m).unwrap();
                let u = inst.unit(&triv);
                let t = trace(&inst, &u, &rpsi, &f, &d);
                let classes = crate::group::twisted_conjugacy_classes(g.clone(), &psi);
                let tt = crate::traces::twisted_trace(&fmat, &psi);
                // expected column: coefficient of each generator x of
                // <U_psi> is the raw diagonal-sum coefficient; equality is
                // taken in the presented quotient.
                let diag = crate::traces::diagonal_sum(&fmat);
                let sh_src = inst.shadow_ob(&u);
                let sh_tgt = inst.shadow_ob(&rpsi);
                let mut col = QMat::zero(sh_tgt.gens, 1);
                for x in 0..g.n {
                    col.set(x, 0, diag.comps[x].get(0, 0).clone());
                }
                let want = ShadowMor::new(sh_src.clone(), sh_tgt.clone(), col);
                assert!(t.eq(&want), "bicategorical twisted trace disagrees for {name}");
                // and the class projection has one coordinate per class
                assert_eq!(tt.len(), classes.reps.len());
            }
        }
    }
}
