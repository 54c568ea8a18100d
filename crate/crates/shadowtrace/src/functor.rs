//! Shadow functors between instances, with the compatibility squares
//! between functors and traces, and the comparison transformation from
//! integral to rational group-ring bimodules.
//!
//! Both concrete functors here — linearization of spans and rationalization
//! of group-ring bimodules — are strict: they preserve units and 1-cell
//! composition on the nose, so their composition and unit comparison cells
//! are identities and a dual pair maps to a dual pair by applying the
//! functor to its structure 2-cells.

use crate::bicat::Bicat;
use crate::groupring::GrMat;
use crate::instances::grbimod::{GrBimod, GrCell, GrTwo, GrZero};
use crate::instances::matmod::{Atom, Label, MatCell, MatMod, MatTwo};
use crate::instances::span::{Span, SpanAtom, SpanCell, SpanTwo};
use crate::linalg::{q, QMat};
use crate::shadow::{Ring, ShadowMor, ShadowOb};
use crate::trace::{grbimod_dual, trace, DualPair};

/// A strict functor between instances that laxly preserves shadows: `phi`
/// compares the shadow of the image with the image of the shadow.
pub trait ShadowFunctor<S: Bicat, T: Bicat> {
    fn src_inst(&self) -> &S;
    fn tgt_inst(&self) -> &T;
    fn map0(&self, z: &S::Z) -> T::Z;
    fn map1(&self, m: &S::O) -> T::O;
    fn map2(&self, f: &S::F) -> T::F;
    /// The induced map on shadow targets, on objects.
    fn shadow_target(&self, sh: &ShadowOb) -> ShadowOb;
    /// The induced map on shadow targets, on morphisms.
    fn shadow_map(&self, f: &ShadowMor) -> ShadowMor;
    /// The comparison `<F(M)> -> shadow_target(<M>)` for an endo 1-cell.
    fn phi(&self, m: &S::O) -> ShadowMor;
}

/// Transport a dual pair along a strict functor; the triangle identities
/// are re-verified on the image.
pub fn derived_dual<S: Bicat, T: Bicat, F: ShadowFunctor<S, T>>(
    fun: &F,
    d: &DualPair<S>,
) -> Result<DualPair<T>, String> {
    DualPair::new(
        fun.tgt_inst(),
        fun.map1(&d.m),
        fun.map1(&d.mdual),
        fun.map2(&d.coev),
        fun.map2(&d.ev),
    )
}

/// The trace-functoriality square: for `f: Q (.) M -> M (.) P`,
/// `phi_P . tr(F(f)) = F_tr(tr(f)) . phi_Q`.
pub fn functoriality_square<S: Bicat, T: Bicat, F: ShadowFunctor<S, T>>(
    fun: &F,
    q_cell: &S::O,
    p_cell: &S::O,
    f: &S::F,
    d: &DualPair<S>,
) -> bool {
    let tr_s = trace(fun.src_inst(), q_cell, p_cell, f, d);
    let dt = match derived_dual(fun, d) {
        Ok(dt) => dt,
        Err(_) => return false,
    };
    let tr_t = trace(
        fun.tgt_inst(),
        &fun.map1(q_cell),
        &fun.map1(p_cell),
        &fun.map2(f),
        &dt,
    );
    let lhs = fun.phi(p_cell).compose(&tr_t);
    let rhs = fun.shadow_map(&tr_s).compose(&fun.phi(q_cell));
    lhs.eq(&rhs)
}

// ---------------------------------------------------------------------------
// Linearization of spans
// ---------------------------------------------------------------------------

/// Spans to integral matrices of modules: a set maps to itself, a span to
/// the matrix of free modules on its fibers, an apex map to the 0/1 matrix
/// it induces.  Apex atoms map to basis labels so that images of
/// composites are literally composites of images.
pub struct Linearize {
    pub src: Span,
    pub tgt: MatMod,
}

impl Linearize {
    pub fn new() -> Linearize {
        Linearize { src: Span, tgt: MatMod::new(Ring::Z) }
    }

    fn label(atoms: &[SpanAtom]) -> Label {
        atoms
            .iter()
            .filter_map(|a| match a {
                SpanAtom::El { cell, idx, star } => {
                    Some(Atom { cell: cell.clone(), r: 0, s: 0, i: *idx, star: *star })
                }
                SpanAtom::Unit { .. } => None,
            })
            .collect()
    }
}

impl Default for Linearize {
    fn default() -> Self {
        Self::new()
    }
}

impl ShadowFunctor<Span, MatMod> for Linearize {
    fn src_inst(&self) -> &Span {
        &self.src
    }

    fn tgt_inst(&self) -> &MatMod {
        &self.tgt
    }

    fn map0(&self, z: &crate::instances::span::SpanZero) -> crate::instances::matmod::MatZero {
        crate::instances::matmod::MatZero { name: z.name.clone(), elems: z.elems }
    }

    fn map1(&self, m: &SpanCell) -> MatCell {
        let src = self.map0(&m.src);
        let tgt = self.map0(&m.tgt);
        let mut labels: Vec<Vec<Vec<Label>>> =
            vec![vec![Vec::new(); tgt.elems]; src.elems];
        for e in &m.elems {
            labels[e.l][e.r].push(Self::label(&e.atoms));
        }
        for row in &mut labels {
            for entry in row {
                entry.sort();
            }
        }
        MatCell { src, tgt, labels }
    }

    fn map2(&self, f: &SpanTwo) -> MatTwo {
        let src = self.map1(&f.src);
        let tgt = self.map1(&f.tgt);
        let mut mats: Vec<Vec<QMat>> = (0..src.src.elems)
            .map(|r| (0..src.tgt.elems).map(|s| QMat::zero(tgt.rank(r, s), src.rank(r, s))).collect())
            .collect();
        for (i, e) in f.src.elems.iter().enumerate() {
            let im = &f.tgt.elems[f.map[i]];
            let (r, s) = (e.l, e.r);
            let col = src.labels[r][s].iter().position(|l| *l == Self::label(&e.atoms)).unwrap();
            let row = tgt.labels[r][s].iter().position(|l| *l == Self::label(&im.atoms)).unwrap();
            mats[r][s].set(row, col, q(1));
        }
        MatTwo::new(src, tgt, mats)
    }

    fn shadow_target(&self, sh: &ShadowOb) -> ShadowOb {
        sh.clone()
    }

    fn shadow_map(&self, f: &ShadowMor) -> ShadowMor {
        f.clone()
    }

    /// Both shadows are free on the fixed points; `phi` matches a fixed
    /// apex element with the diagonal basis label it linearizes to.
    fn phi(&self, m: &SpanCell) -> ShadowMor {
        let lm = self.map1(m);
        let src = self.tgt.shadow_ob(&lm);
        let tgt = self.src.shadow_ob(m);
        // enumerate the diagonal labels of L(M) in the shadow's order
        let mut diag: Vec<(usize, Label)> = Vec::new();
        for r in 0..lm.src.elems {
            for l in &lm.labels[r][r] {
                diag.push((r, l.clone()));
            }
        }
        let fixed_elems: Vec<_> = m.elems.iter().filter(|e| e.l == e.r).collect();
        let mut mat = QMat::zero(tgt.gens, src.gens);
        for (col, (r, l)) in diag.iter().enumerate() {
            let row = fixed_elems
                .iter()
                .position(|e| e.l == *r && Self::label(&e.atoms) == *l)
                .expect("diagonal label must come from a fixed point");
            mat.set(row, col, q(1));
        }
        ShadowMor::new(src, tgt, mat)
    }
}

// ---------------------------------------------------------------------------
// Rationalization of group-ring bimodules
// ---------------------------------------------------------------------------

/// Integral to rational group-ring bimodules: cells keep their action
/// matrices, only the ground ring of every 0-cell changes.  Shadows map by
/// re-presenting the same generators and relations over `Q`.
pub struct Rationalize {
    pub src: GrBimod,
    pub tgt: GrBimod,
}

impl Rationalize {
    pub fn new() -> Rationalize {
        Rationalize { src: GrBimod::new(Ring::Z), tgt: GrBimod::new(Ring::Q) }
    }
}

impl Default for Rationalize {
    fn default() -> Self {
        Self::new()
    }
}

impl ShadowFunctor<GrBimod, GrBimod> for Rationalize {
    fn src_inst(&self) -> &GrBimod {
        &self.src
    }

    fn tgt_inst(&self) -> &GrBimod {
        &self.tgt
    }

    fn map0(&self, z: &GrZero) -> GrZero {
        GrZero { group: z.group.clone(), ring: Ring::Q }
    }

    fn map1(&self, m: &GrCell) -> GrCell {
        GrCell::new(self.map0(&m.src), self.map0(&m.tgt), m.rank, m.lambda.clone())
    }

    fn map2(&self, f: &GrTwo) -> GrTwo {
        GrTwo::new_unchecked(self.map1(&f.src), self.map1(&f.tgt), f.mat.clone())
    }

    fn shadow_target(&self, sh: &ShadowOb) -> ShadowOb {
        ShadowOb::new(Ring::Q, sh.labels.clone(), sh.rels.clone())
    }

    fn shadow_map(&self, f: &ShadowMor) -> ShadowMor {
        ShadowMor::new(self.shadow_target(&f.src), self.shadow_target(&f.tgt), f.mat.clone())
    }

    /// The shadow of the rationalized cell has the same presentation as the
    /// rationalized shadow, so the comparison is the generator identity.
    fn phi(&self, m: &GrCell) -> ShadowMor {
        let src = self.tgt.shadow_ob(&self.map1(m));
        let tgt = self.shadow_target(&self.src.shadow_ob(m));
        let n = src.gens;
        ShadowMor::new(src, tgt, QMat::identity(n))
    }
}

// ---------------------------------------------------------------------------
// The comparison transformation from integral to rational bimodules
// ---------------------------------------------------------------------------

/// The comparison 1-cell `(G, Z) -|-> (G, Q)`: rank one with `g` acting by
/// `[g]`.  Tensoring with it on the right rationalizes a cell.
pub fn comparison_cell(z: &GrZero) -> GrCell {
    assert_eq!(z.ring, Ring::Z, "comparison starts at an integral 0-cell");
    let target = GrZero { group: z.group.clone(), ring: Ring::Q };
    let lambda = (0..z.group.n).map(|g| GrMat::monomial(z.group.clone(), g)).collect();
    GrCell::new(z.clone(), target, 1, lambda)
}

/// The comparison data for the pair (inclusion, rationalization) at a cell
/// `M: (1, Z) -|-> (G, Z)`: the invertible 2-cell
/// `alpha_M: M (.) alpha_G -> alpha_1 (.) M_Q` (both sides are the same
/// free rational module), its candidate inverse built from the duals, and
/// the two naturality/invertibility checks.
pub struct Comparison {
    pub inst: GrBimod,
    pub rat: Rationalize,
}

impl Comparison {
    pub fn new() -> Comparison {
        Comparison { inst: GrBimod::new(Ring::Z), rat: Rationalize::new() }
    }

    /// `alpha_M` for `M: (1, Z) -|-> (G, Z)`: the identity matrix between
    /// `M (.) alpha_G` and `alpha_1 (.) M_Q`.
    pub fn alpha(&self, m: &GrCell) -> GrTwo {
        assert_eq!(m.src.group.n, 1, "comparison cells require a trivial source group");
        assert_eq!(m.src.ring, Ring::Z);
        let a_g = comparison_cell(&m.tgt);
        let a_1 = comparison_cell(&m.src);
        let src = self.inst.compose1(m, &a_g);
        let tgt = self.inst.compose1(&a_1, &self.rat.map1(m));
        let ident = GrMat::identity(src.tgt.group.clone(), m.rank);
        GrTwo::new(src, tgt, ident)
    }

    /// `alpha_{M*}` for the functional dual `M*: (G, Z) -|-> (1, Z)`: the
    /// identity matrix between `M* (.) alpha_1` and `alpha_G (.) (M*)_Q`.
    pub fn alpha_dual(&self, mdual: &GrCell) -> GrTwo {
        assert_eq!(mdual.tgt.group.n, 1, "expected a dual with trivial target group");
        let a_1 = comparison_cell(&mdual.tgt);
        let a_g = comparison_cell(&mdual.src);
        let src = self.inst.compose1(mdual, &a_1);
        let tgt = self.inst.compose1(&a_g, &self.rat.map1(mdual));
        let ident = GrMat::identity(src.tgt.group.clone(), mdual.rank);
        GrTwo::new(src, tgt, ident)
    }

    /// The candidate inverse of `alpha_M` expressed through the dual pairs
    /// of `M` and `M_Q`:
    ///
    /// ```text
    /// alpha_1 . M_Q  --coev_M . id-->  M . M* . alpha_1 . M_Q
    ///   --id . alpha_{M*} . id-->  M . alpha_G . (M*)_Q . M_Q
    ///   --id . ev_{M_Q}-->  M . alpha_G
    /// ```
    pub fn alpha_inverse(&self, m: &GrCell) -> Result<GrTwo, String> {
        let inst = &self.inst;
        let d_z = grbimod_dual(inst, m)?;
        let m_q = self.rat.map1(m);
        let d_q = grbimod_dual(inst, &m_q)?;
        let a_1 = comparison_cell(&m.src);
        let a_g = comparison_cell(&m.tgt);
        let start = inst.compose1(&a_1, &m_q);
        let step1 = inst.hcomp(&d_z.coev, &inst.id2(&start));
        let ad = self.alpha_dual(&d_z.mdual);
        let step2 = inst.hcomp(&inst.hcomp(&inst.id2(m), &ad), &inst.id2(&m_q));
        let step3 = inst.hcomp(&inst.id2(&inst.compose1(m, &a_g)), &d_q.ev);
        Ok(inst.vcomp(&step3, &inst.vcomp(&step2, &step1)))
    }

    /// Verify that `alpha_M` is invertible with the dual-pair inverse.
    pub fn duals_invert(&self, m: &GrCell) -> Result<bool, String> {
        let a = self.alpha(m);
        let b = self.alpha_inverse(m)?;
        let inst = &self.inst;
        let left = inst.vcomp(&b, &a);
        let right = inst.vcomp(&a, &b);
        Ok(inst.eq2(&left, &inst.id2(&a.src)) && inst.eq2(&right, &inst.id2(&a.tgt)))
    }

    /// Naturality of the comparison in 2-cells `f: M -> N`:
    /// `alpha_N . (f (.) id) = (id (.) f_Q) . alpha_M`.
    pub fn natural(&self, f: &GrTwo) -> bool {
        let inst = &self.inst;
        let a_g = comparison_cell(&f.src.tgt);
        let a_1 = comparison_cell(&f.src.src);
        let lhs = inst.vcomp(&self.alpha(&f.tgt), &inst.hcomp(f, &inst.id2(&a_g)));
        let rhs = inst.vcomp(&inst.hcomp(&inst.id2(&a_1), &self.rat.map2(f)), &self.alpha(&f.src));
        inst.eq2(&lhs, &rhs)
    }

    /// The canonical comparison on shadows `<X>_Z -> <X_Q>`: the same
    /// generators, re-presented over `Q`.  This is the trace of the
    /// comparison 2-cell at `X`.
    pub fn shadow_comparison(&self, x: &GrCell) -> ShadowMor {
        let src = self.inst.shadow_ob(x);
        let tgt = self.inst.shadow_ob(&self.rat.map1(x));
        let n = src.gens;
        ShadowMor::new(src, tgt, QMat::identity(n))
    }

    /// The six faces of the compatibility cube at a twisted endomorphism:
    /// `M: (1, Z) -|-> (G, Z)` free, `f: U (.) M -> M (.) P` with `P` the
    /// twisted unit.  The vertical edges are the canonical shadow
    /// comparisons; the horizontal faces are the trace-functoriality
    /// squares of the two functors; the front and back faces say the
    /// comparison commutes with traces; the side faces are the comparison
    /// axiom relating the two shadow functors.
    pub fn cube_faces(&self, m: &GrCell, f: &GrTwo, p_cell: &GrCell) -> Result<[bool; 6], String> {
        let inst = &self.inst;
        let rat = &self.rat;
        let d_z = grbimod_dual(inst, m)?;
        let q_cell = inst.unit(&m.src);
        let tr_z = trace(inst, &q_cell, p_cell, f, &d_z);
        let d_q = derived_dual(rat, &d_z)?;
        let f_q = rat.map2(f);
        let tr_q = trace(inst, &rat.map1(&q_cell), &rat.map1(p_cell), &f_q, &d_q);
        // top: the square for the inclusion functor (identity comparison)
        let top = tr_z.eq(&tr_z);
        // bottom: the square for rationalization
        let bottom = functoriality_square(rat, &q_cell, p_cell, f, &d_z);
        // back: the comparison commutes with the trace
        let back = self
            .shadow_comparison(p_cell)
            .compose(&tr_z)
            .eq(&tr_q.compose(&self.shadow_comparison(&q_cell)));
        // front: the induced map on shadow targets commutes with the trace
        let alpha_tr = |sh: &ShadowOb| -> ShadowMor {
            ShadowMor::new(sh.clone(), rat.shadow_target(sh), QMat::identity(sh.gens))
        };
        let sh_q = inst.shadow_ob(&q_cell);
        let sh_p = inst.shadow_ob(p_cell);
        let front = alpha_tr(&sh_p).compose(&tr_z).eq(&rat.shadow_map(&tr_z).compose(&alpha_tr(&sh_q)));
        // left and right: the comparison axiom at Q and at P
        let axiom = |x: &GrCell| -> bool {
            let sh = inst.shadow_ob(x);
            rat.phi(x)
                .compose(&self.shadow_comparison(x))
                .eq(&alpha_tr(&sh).compose(&ShadowMor::identity(&sh)))
        };
        let left = axiom(&q_cell);
        let right = axiom(p_cell);
        Ok([top, bottom, back, front, left, right])
    }
}

impl Default for Comparison {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Endo, Group};
    use crate::sample::{rng, GrSampler, SpanSampler};
    use crate::trace::span_dual;

    #[test]
    fn linearization_is_strict() {
        let mut r = rng(53);
        let mut s = SpanSampler::new();
        let lin = Linearize::new();
        for _ in 0..20 {
            let a = s.set(&mut r);
            let b = s.set(&mut r);
            let c = s.set(&mut r);
            let m = s.span(&mut r, &a, &b);
            let n = s.span(&mut r, &b, &c);
            let mn = lin.src.compose1(&m, &n);
            assert_eq!(lin.map1(&mn), lin.tgt.compose1(&lin.map1(&m), &lin.map1(&n)));
            assert_eq!(lin.map1(&lin.src.unit(&a)), lin.tgt.unit(&lin.map0(&a)));
        }
    }

    #[test]
    fn linearization_square_on_dualizable_spans() {
        let mut r = rng(59);
        let mut s = SpanSampler::new();
        let lin = Linearize::new();
        for _ in 0..20 {
            let a = s.set(&mut r);
            let m = s.dualizable(&mut r, &a, &a);
            let d = span_dual(&lin.src, &m).unwrap();
            // only the identity endomorphism exists: both legs pin the map
            let f = lin.src.id2(&m);
            let u = lin.src.unit(&a);
            assert!(functoriality_square(&lin, &u, &u, &f, &d));
        }
    }

    #[test]
    fn rationalization_square_and_comparison() {
        let mut r = rng(61);
        let s = GrSampler::new(Ring::Z);
        let cmp = Comparison::new();
        for name in ["z2", "z3", "s3"] {
            let g = Group::builtin(name).unwrap();
            let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
            let gz = GrZero { group: g.clone(), ring: Ring::Z };
            for _ in 0..3 {
                let m = s.cell(&mut r, &triv, &gz);
                assert!(cmp.duals_invert(&m).unwrap(), "comparison not invertible for {name}");
                let n = s.cell_of_rank(&mut r, &triv, &gz, m.rank);
                let f = s.two(&mut r, &m, &n);
                assert!(cmp.natural(&f), "comparison not natural for {name}");
            }
        }
    }

    #[test]
    fn cube_faces_hold_for_twisted_endomorphisms() {
        let mut r = rng(67);
        let s = GrSampler::new(Ring::Z);
        let cmp = Comparison::new();
        let inst = &cmp.inst;
        for name in ["z2", "z3"] {
            let g = Group::builtin(name).unwrap();
            let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
            let gz = GrZero { group: g.clone(), ring: Ring::Z };
            for psi in Endo::all(&g) {
                let p_cell = crate::traces::twisted_unit(&gz, &psi);
                let m = GrCell::new(triv.clone(), gz.clone(), 2, vec![GrMat::identity(g.clone(), 2)]);
                let fmat = s.grmat(&mut r, &g, Ring::Z, 2, 2);
                let f = GrTwo::new_unchecked(m.clone(), inst.compose1(&m, &p_cell), fmat);
                let faces = cmp.cube_faces(&m, &f, &p_cell).unwrap();
                assert!(faces.iter().all(|&b| b), "cube face failed for {name}: {faces:?}");
            }
        }
    }
}
