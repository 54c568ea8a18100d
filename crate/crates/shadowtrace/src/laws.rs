//! Randomized law verifiers: the axioms of the cyclicity isomorphism, the
//! trace laws, diagram-move invariance, and the functor/comparison
//! squares, each reported with replayable per-trial seeds.
//!
//! Every check is a closed equation between exactly computed shadow
//! morphisms or 2-cells; a report lists the seeds of failing trials so any
//! failure can be reproduced in isolation.

use crate::bicat::Bicat;
use crate::diagram::apply_move;
use crate::eval::{value, Valuation};
use crate::functor::{functoriality_square, Comparison, Linearize, Rationalize, ShadowFunctor};
use crate::group::{Endo, Group, GroupRef};
use crate::instances::grbimod::{GrBimod, GrCell, GrTwo, GrZero};
use crate::instances::matmod::MatMod;
use crate::instances::span::Span;
use crate::sample::{
    random_diagram, random_move, rng, GrDiagramCells, GrSampler, MatDiagramCells, MatSampler,
    SpanDiagramCells, SpanSampler,
};
use crate::shadow::Ring;
use crate::trace::{
    grbimod_dual, left_trace, mate, matmod_dual, span_dual, trace, compose_duals, DualPair,
};
use crate::traces::build_trace_diagram;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The laws the engine can verify by random sampling.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum LawId {
    Hexagon,
    ThetaUnit,
    ThetaInvolution,
    ThetaNaturality,
    Interchange,
    ShadowFunctoriality,
    Tightening,
    Sliding,
    Cyclicity,
    Unit,
    Composition,
    Mate,
    MoveInvariance,
    TraceDiagram,
    Functoriality,
    DualsInvert,
    Cube,
}

impl LawId {
    pub const ALL: [LawId; 17] = [
        LawId::Hexagon,
        LawId::ThetaUnit,
        LawId::ThetaInvolution,
        LawId::ThetaNaturality,
        LawId::Interchange,
        LawId::ShadowFunctoriality,
        LawId::Tightening,
        LawId::Sliding,
        LawId::Cyclicity,
        LawId::Unit,
        LawId::Composition,
        LawId::Mate,
        LawId::MoveInvariance,
        LawId::TraceDiagram,
        LawId::Functoriality,
        LawId::DualsInvert,
        LawId::Cube,
    ];

    pub const AXIOMS: [LawId; 6] = [
        LawId::Hexagon,
        LawId::ThetaUnit,
        LawId::ThetaInvolution,
        LawId::ThetaNaturality,
        LawId::Interchange,
        LawId::ShadowFunctoriality,
    ];

    pub const TRACE_LAWS: [LawId; 6] = [
        LawId::Tightening,
        LawId::Sliding,
        LawId::Cyclicity,
        LawId::Unit,
        LawId::Composition,
        LawId::Mate,
    ];

    pub fn parse(s: &str) -> Option<LawId> {
        LawId::ALL.iter().copied().find(|l| format!("{l:?}").eq_ignore_ascii_case(s))
    }
}

/// Which concrete instance a verification runs in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum InstanceId {
    MatModZ,
    MatModQ,
    Span,
    GrBimodZ,
    GrBimodQ,
}

impl InstanceId {
    pub const ALL: [InstanceId; 5] = [
        InstanceId::MatModZ,
        InstanceId::MatModQ,
        InstanceId::Span,
        InstanceId::GrBimodZ,
        InstanceId::GrBimodQ,
    ];

    pub fn parse(s: &str) -> Option<InstanceId> {
        match s {
            "matmod-z" => Some(InstanceId::MatModZ),
            "matmod-q" => Some(InstanceId::MatModQ),
            "span" => Some(InstanceId::Span),
            "grbimod-z" => Some(InstanceId::GrBimodZ),
            "grbimod-q" => Some(InstanceId::GrBimodQ),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceId::MatModZ => "matmod-z",
            InstanceId::MatModQ => "matmod-q",
            InstanceId::Span => "span",
            InstanceId::GrBimodZ => "grbimod-z",
            InstanceId::GrBimodQ => "grbimod-q",
        }
    }

    fn ring(&self) -> Ring {
        match self {
            InstanceId::MatModQ | InstanceId::GrBimodQ => Ring::Q,
            _ => Ring::Z,
        }
    }
}

/// The outcome of a randomized verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LawReport {
    pub law: LawId,
    pub instance: String,
    pub trials: usize,
    /// Seeds of failing trials; empty means the law held everywhere.
    pub failures: Vec<u64>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn trial_seed(seed: u64, t: usize) -> u64 {
    seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_trials(
    law: LawId,
    instance: &str,
    trials: usize,
    seed: u64,
    mut check: impl FnMut(&mut ChaCha8Rng) -> bool,
) -> LawReport {
    let mut failures = Vec::new();
    for t in 0..trials {
        let s = trial_seed(seed, t);
        let mut r = rng(s);
        if !check(&mut r) {
            failures.push(s);
        }
    }
    LawReport { law, instance: instance.to_string(), trials, failures }
}

// ---------------------------------------------------------------------------
// Generic law equations
// ---------------------------------------------------------------------------

/// Hexagon, in its strict form on a cyclically composable triple.
pub fn hexagon_holds<I: Bicat>(inst: &I, m: &I::O, n: &I::O, p: &I::O) -> bool {
    let lhs = inst
        .theta(n, &inst.compose1(p, m))
        .compose(&inst.theta(m, &inst.compose1(n, p)));
    let rhs = inst.theta(&inst.compose1(m, n), p);
    lhs.eq(&rhs)
}

pub fn theta_unit_holds<I: Bicat>(inst: &I, m: &I::O) -> bool {
    let u = inst.unit(&inst.src0(m));
    let left = inst.theta(m, &u);
    let right = inst.theta(&u, m);
    left.eq(&crate::shadow::ShadowMor::identity(&left.src))
        && right.eq(&crate::shadow::ShadowMor::identity(&right.src))
}

pub fn theta_involution_holds<I: Bicat>(inst: &I, m: &I::O, n: &I::O) -> bool {
    let round = inst.theta(n, m).compose(&inst.theta(m, n));
    round.eq(&crate::shadow::ShadowMor::identity(&round.src))
}

/// `theta . <f (.) g> = <g (.) f> . theta` for `f: M -> M'`, `g: N -> N'`.
pub fn theta_naturality_holds<I: Bicat>(inst: &I, f: &I::F, g: &I::F) -> bool {
    let (m, mp) = (inst.two_src(f), inst.two_tgt(f));
    let (n, np) = (inst.two_src(g), inst.two_tgt(g));
    let lhs = inst.theta(&mp, &np).compose(&inst.shadow_mor(&inst.hcomp(f, g)));
    let rhs = inst.shadow_mor(&inst.hcomp(g, f)).compose(&inst.theta(&m, &n));
    lhs.eq(&rhs)
}

/// Middle-four interchange of horizontal and vertical composition.
pub fn interchange_holds<I: Bicat>(inst: &I, f: &I::F, f2: &I::F, g: &I::F, g2: &I::F) -> bool {
    let lhs = inst.hcomp(&inst.vcomp(f2, f), &inst.vcomp(g2, g));
    let rhs = inst.vcomp(&inst.hcomp(f2, g2), &inst.hcomp(f, g));
    inst.eq2(&lhs, &rhs)
}

/// The shadow is functorial on 2-cells of endo-1-cells.
pub fn shadow_functorial_holds<I: Bicat>(inst: &I, f: &I::F, g: &I::F) -> bool {
    let lhs = inst.shadow_mor(&inst.vcomp(g, f));
    let rhs = inst.shadow_mor(g).compose(&inst.shadow_mor(f));
    lhs.eq(&rhs) && {
        let idm = inst.id2(&inst.two_src(f));
        let sid = inst.shadow_mor(&idm);
        sid.eq(&crate::shadow::ShadowMor::identity(&sid.src))
    }
}

/// Tightening: `<h> . tr(f) . <g> = tr((id (.) h) . f . (g (.) id))` for
/// `f: Q (.) M -> M (.) P`, `g: Q' -> Q`, `h: P -> P'`.
pub fn tightening_holds<I: Bicat>(
    inst: &I,
    q: &I::O,
    p: &I::O,
    qp: &I::O,
    pp: &I::O,
    f: &I::F,
    g: &I::F,
    h: &I::F,
    d: &DualPair<I>,
) -> bool {
    let lhs = inst
        .shadow_mor(h)
        .compose(&trace(inst, q, p, f, d))
        .compose(&inst.shadow_mor(g));
    let tightened = inst.vcomp(
        &inst.hcomp(&inst.id2(&d.m), h),
        &inst.vcomp(f, &inst.hcomp(g, &inst.id2(&d.m))),
    );
    let rhs = trace(inst, qp, pp, &tightened, d);
    lhs.eq(&rhs)
}

/// Sliding: for `f: Q (.) M -> N (.) P` and `g: K (.) N -> M (.) L`,
/// `theta_{P,L} . tr_N((f (.) id_L)(id_Q (.) g)) =
///  tr_M((g (.) id_P)(id_K (.) f)) . theta_{Q,K}`.
#[allow(clippy::too_many_arguments)]
pub fn sliding_holds<I: Bicat>(
    inst: &I,
    q: &I::O,
    k: &I::O,
    p: &I::O,
    l: &I::O,
    f: &I::F,
    g: &I::F,
    dm: &DualPair<I>,
    dn: &DualPair<I>,
) -> bool {
    let qk = inst.compose1(q, k);
    let pl = inst.compose1(p, l);
    let kq = inst.compose1(k, q);
    let lp = inst.compose1(l, p);
    let left_inner = inst.vcomp(&inst.hcomp(f, &inst.id2(l)), &inst.hcomp(&inst.id2(q), g));
    let lhs = inst.theta(p, l).compose(&trace(inst, &qk, &pl, &left_inner, dn));
    let right_inner = inst.vcomp(&inst.hcomp(g, &inst.id2(p)), &inst.hcomp(&inst.id2(k), f));
    let rhs = trace(inst, &kq, &lp, &right_inner, dm).compose(&inst.theta(q, k));
    lhs.eq(&rhs)
}

/// Cyclicity: `tr(g . f) = tr(f . g)` for `f: M -> N`, `g: N -> M`
/// (endo-1-cells on a common 0-cell, unit outer boundary).
pub fn cyclicity_holds<I: Bicat>(inst: &I, f: &I::F, g: &I::F, dm: &DualPair<I>, dn: &DualPair<I>) -> bool {
    let us = inst.unit(&inst.src0(&dm.m));
    let ut = inst.unit(&inst.tgt0(&dm.m));
    let lhs = trace(inst, &us, &ut, &inst.vcomp(g, f), dm);
    let rhs = trace(inst, &us, &ut, &inst.vcomp(f, g), dn);
    lhs.eq(&rhs)
}

/// The unit 1-cell is its own dual with identity structure maps.
pub fn unit_dual<I: Bicat>(inst: &I, r: &I::Z) -> DualPair<I> {
    let u = inst.unit(r);
    DualPair::new(inst, u.clone(), u.clone(), inst.id2(&u), inst.id2(&u))
        .expect("the unit is self-dual with identity structure maps")
}

/// Unit law: for `M = U_R`, `tr(f) = <f>`.
pub fn unit_law_holds<I: Bicat>(inst: &I, q: &I::O, p: &I::O, f: &I::F) -> bool {
    let r = inst.src0(q);
    let d = unit_dual(inst, &r);
    let t = trace(inst, q, p, f, &d);
    t.eq(&inst.shadow_mor(f))
}

/// Composition: `tr((id_M (.) g)(f (.) id_N)) = tr(g) . tr(f)` for
/// `f: Q (.) M -> M (.) Y`, `g: Y (.) N -> N (.) P`, with the composite
/// dual `(M (.) N)* = N* (.) M*`.
pub fn composition_holds<I: Bicat>(
    inst: &I,
    q: &I::O,
    y: &I::O,
    p: &I::O,
    f: &I::F,
    g: &I::F,
    dm: &DualPair<I>,
    dn: &DualPair<I>,
) -> bool {
    let dmn = compose_duals(inst, dm, dn);
    let inner = inst.vcomp(&inst.hcomp(&inst.id2(&dm.m), g), &inst.hcomp(f, &inst.id2(&dn.m)));
    let lhs = trace(inst, q, p, &inner, &dmn);
    let rhs = trace(inst, y, p, g, dn).compose(&trace(inst, q, y, f, dm));
    lhs.eq(&rhs)
}

/// Mate law: `tr(f) = tr*(mate(f))`, the right trace of `f` equals the
/// mirrored trace of its mate.
pub fn mate_law_holds<I: Bicat>(inst: &I, q: &I::O, p: &I::O, f: &I::F, d: &DualPair<I>) -> bool {
    let lhs = trace(inst, q, p, f, d);
    let fm = mate(inst, q, p, f, d, d);
    let rhs = left_trace(inst, q, p, &fm, d);
    lhs.eq(&rhs)
}

/// Applying a random applicable deformation move must not change the value
/// of a diagram.
pub fn move_invariance_holds<I: Bicat, R: Rng>(
    inst: &I,
    d: &crate::diagram::Diagram,
    v: &Valuation<I>,
    r: &mut R,
    moves: usize,
) -> (bool, usize) {
    let base = match value(inst, d, v) {
        Ok(x) => x,
        Err(_) => return (false, 0),
    };
    let mut cur = d.clone();
    let mut applied = 0usize;
    for _ in 0..moves {
        let Some(mv) = random_move(&cur, r) else { break };
        let Ok(next) = apply_move(&cur, &mv) else { return (false, applied) };
        cur = next;
        applied += 1;
        let val = match value(inst, &cur, v) {
            Ok(x) => x,
            Err(_) => return (false, applied),
        };
        if !val.eq(&base) {
            return (false, applied);
        }
    }
    (true, applied)
}

/// The four-layer trace diagram evaluates to the trace.
pub fn trace_diagram_holds<I: Bicat>(
    inst: &I,
    q: &I::O,
    p: &I::O,
    f: &I::F,
    d: &DualPair<I>,
) -> bool {
    let (diag, v) = build_trace_diagram(inst, q, p, f, d);
    match value(inst, &diag, &v) {
        Ok(val) => val.eq(&trace(inst, q, p, f, d)),
        Err(_) => false,
    }
}

// ---------------------------------------------------------------------------
// Per-instance sampling drivers
// ---------------------------------------------------------------------------

struct MatData {
    inst: MatMod,
}

impl MatData {
    fn check(&self, law: LawId, r: &mut ChaCha8Rng) -> bool {
        let inst = &self.inst;
        let mut s = MatSampler::new(inst.ring);
        if matches!(law, LawId::Sliding | LawId::Composition) {
            // these laws trace five-fold horizontal composites, whose entry
            // ranks multiply; keep the factors small so the worst case stays
            // bounded
            s.max_set = 2;
            s.max_rank = 2;
        }
        let a = s.set(r);
        let b = s.set(r);
        match law {
            LawId::Hexagon => {
                let c = s.set(r);
                let m = s.cell(r, &a, &b);
                let n = s.cell(r, &b, &c);
                let p = s.cell(r, &c, &a);
                hexagon_holds(inst, &m, &n, &p)
            }
            LawId::ThetaUnit => theta_unit_holds(inst, &s.cell(r, &a, &a)),
            LawId::ThetaInvolution => {
                let m = s.cell(r, &a, &b);
                let n = s.cell(r, &b, &a);
                theta_involution_holds(inst, &m, &n)
            }
            LawId::ThetaNaturality => {
                let m = s.cell(r, &a, &b);
                let mp = s.cell(r, &a, &b);
                let n = s.cell(r, &b, &a);
                let np = s.cell(r, &b, &a);
                theta_naturality_holds(inst, &s.two(r, &m, &mp), &s.two(r, &n, &np))
            }
            LawId::Interchange => {
                let c = s.set(r);
                let m1 = s.cell(r, &a, &b);
                let m2 = s.cell(r, &a, &b);
                let m3 = s.cell(r, &a, &b);
                let n1 = s.cell(r, &b, &c);
                let n2 = s.cell(r, &b, &c);
                let n3 = s.cell(r, &b, &c);
                interchange_holds(
                    inst,
                    &s.two(r, &m1, &m2),
                    &s.two(r, &m2, &m3),
                    &s.two(r, &n1, &n2),
                    &s.two(r, &n2, &n3),
                )
            }
            LawId::ShadowFunctoriality => {
                let m1 = s.cell(r, &a, &a);
                let m2 = s.cell(r, &a, &a);
                let m3 = s.cell(r, &a, &a);
                shadow_functorial_holds(inst, &s.two(r, &m1, &m2), &s.two(r, &m2, &m3))
            }
            LawId::Tightening => {
                let m = s.cell(r, &a, &b);
                let d = matmod_dual(inst, &m).unwrap();
                let (q, qp) = (s.cell(r, &a, &a), s.cell(r, &a, &a));
                let (p, pp) = (s.cell(r, &b, &b), s.cell(r, &b, &b));
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                let g = s.two(r, &qp, &q);
                let h = s.two(r, &p, &pp);
                tightening_holds(inst, &q, &p, &qp, &pp, &f, &g, &h, &d)
            }
            LawId::Sliding => {
                let (rp, sp) = (s.set(r), s.set(r));
                let m = s.cell(r, &a, &b);
                let n = s.cell(r, &rp, &sp);
                let dm = matmod_dual(inst, &m).unwrap();
                let dn = matmod_dual(inst, &n).unwrap();
                let q = s.cell(r, &rp, &a);
                let k = s.cell(r, &a, &rp);
                let p = s.cell(r, &sp, &b);
                let l = s.cell(r, &b, &sp);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&n, &p));
                let g = s.two(r, &inst.compose1(&k, &n), &inst.compose1(&m, &l));
                sliding_holds(inst, &q, &k, &p, &l, &f, &g, &dm, &dn)
            }
            LawId::Cyclicity => {
                let m = s.cell(r, &a, &a);
                let n = s.cell(r, &a, &a);
                let dm = matmod_dual(inst, &m).unwrap();
                let dn = matmod_dual(inst, &n).unwrap();
                cyclicity_holds(inst, &s.two(r, &m, &n), &s.two(r, &n, &m), &dm, &dn)
            }
            LawId::Unit => {
                let q = s.cell(r, &a, &a);
                let p = s.cell(r, &a, &a);
                unit_law_holds(inst, &q, &p, &s.two(r, &q, &p))
            }
            LawId::Composition => {
                let c = s.set(r);
                let m = s.cell(r, &a, &b);
                let n = s.cell(r, &b, &c);
                let dm = matmod_dual(inst, &m).unwrap();
                let dn = matmod_dual(inst, &n).unwrap();
                let q = s.cell(r, &a, &a);
                let y = s.cell(r, &b, &b);
                let p = s.cell(r, &c, &c);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &y));
                let g = s.two(r, &inst.compose1(&y, &n), &inst.compose1(&n, &p));
                composition_holds(inst, &q, &y, &p, &f, &g, &dm, &dn)
            }
            LawId::Mate => {
                let m = s.cell(r, &a, &b);
                let d = matmod_dual(inst, &m).unwrap();
                let q = s.cell(r, &a, &a);
                let p = s.cell(r, &b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                mate_law_holds(inst, &q, &p, &f, &d)
            }
            LawId::MoveInvariance => {
                let mut cells = MatDiagramCells(s);
                let (d, v) = random_diagram(inst, &mut cells, r, 4);
                move_invariance_holds(inst, &d, &v, r, 8).0
            }
            LawId::TraceDiagram => {
                let m = s.cell(r, &a, &b);
                let d = matmod_dual(inst, &m).unwrap();
                let q = s.cell(r, &a, &a);
                let p = s.cell(r, &b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                trace_diagram_holds(inst, &q, &p, &f, &d)
            }
            _ => unreachable!("law not applicable to the matmod driver"),
        }
    }
}

struct SpanData;

impl SpanData {
    fn check(&self, law: LawId, r: &mut ChaCha8Rng) -> bool {
        let inst = &Span;
        let mut s = SpanSampler::new();
        let a = s.set(r);
        let b = s.set(r);
        match law {
            LawId::Hexagon => {
                let c = s.set(r);
                let m = s.span(r, &a, &b);
                let n = s.span(r, &b, &c);
                let p = s.span(r, &c, &a);
                hexagon_holds(inst, &m, &n, &p)
            }
            LawId::ThetaUnit => theta_unit_holds(inst, &s.span(r, &a, &a)),
            LawId::ThetaInvolution => {
                let m = s.span(r, &a, &b);
                let n = s.span(r, &b, &a);
                theta_involution_holds(inst, &m, &n)
            }
            LawId::ThetaNaturality => {
                let m = s.span(r, &a, &b);
                let mp = s.full(&a, &b);
                let n = s.span(r, &b, &a);
                let np = s.full(&b, &a);
                theta_naturality_holds(inst, &s.two(r, &m, &mp), &s.two(r, &n, &np))
            }
            LawId::Interchange => {
                let c = s.set(r);
                let m1 = s.span(r, &a, &b);
                let m2 = s.full(&a, &b);
                let n1 = s.span(r, &b, &c);
                let n2 = s.full(&b, &c);
                let f = s.two(r, &m1, &m2);
                let f2 = s.two(r, &m2, &m2);
                let g = s.two(r, &n1, &n2);
                let g2 = s.two(r, &n2, &n2);
                interchange_holds(inst, &f, &f2, &g, &g2)
            }
            LawId::ShadowFunctoriality => {
                let m1 = s.span(r, &a, &a);
                let m2 = s.full(&a, &a);
                shadow_functorial_holds(inst, &s.two(r, &m1, &m2), &s.two(r, &m2, &m2))
            }
            LawId::Tightening => {
                let m = s.dualizable(r, &a, &b);
                let d = span_dual(inst, &m).unwrap();
                let qp = s.span(r, &a, &a);
                let q = s.full(&a, &a);
                let p = s.full(&b, &b);
                let pp = s.full(&b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                let g = s.two(r, &qp, &q);
                let h = s.two(r, &p, &pp);
                tightening_holds(inst, &q, &p, &qp, &pp, &f, &g, &h, &d)
            }
            LawId::Sliding => {
                let (rp, sp) = (s.set(r), s.set(r));
                let m = s.dualizable(r, &a, &b);
                let n = s.dualizable(r, &rp, &sp);
                let dm = span_dual(inst, &m).unwrap();
                let dn = span_dual(inst, &n).unwrap();
                let q = s.span(r, &rp, &a);
                let k = s.span(r, &a, &rp);
                let p = s.full(&sp, &b);
                let l = s.full(&b, &sp);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&n, &p));
                let g = s.two(r, &inst.compose1(&k, &n), &inst.compose1(&m, &l));
                sliding_holds(inst, &q, &k, &p, &l, &f, &g, &dm, &dn)
            }
            LawId::Cyclicity => {
                // 2-cells between spans with bijective left legs are forced
                // to be identities, so the applicable shape is M = N.
                let m = s.dualizable(r, &a, &a);
                let d = span_dual(inst, &m).unwrap();
                let f = inst.id2(&m);
                cyclicity_holds(inst, &f, &f, &d, &d)
            }
            LawId::Unit => {
                let q = s.span(r, &a, &a);
                let p = s.full(&a, &a);
                unit_law_holds(inst, &q, &p, &s.two(r, &q, &p))
            }
            LawId::Composition => {
                let c = s.set(r);
                let m = s.dualizable(r, &a, &b);
                let n = s.dualizable(r, &b, &c);
                let dm = span_dual(inst, &m).unwrap();
                let dn = span_dual(inst, &n).unwrap();
                let q = s.span(r, &a, &a);
                let y = s.full(&b, &b);
                let p = s.full(&c, &c);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &y));
                let g = s.two(r, &inst.compose1(&y, &n), &inst.compose1(&n, &p));
                composition_holds(inst, &q, &y, &p, &f, &g, &dm, &dn)
            }
            LawId::Mate => {
                let m = s.dualizable(r, &a, &b);
                let d = span_dual(inst, &m).unwrap();
                let q = s.span(r, &a, &a);
                let p = s.full(&b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                mate_law_holds(inst, &q, &p, &f, &d)
            }
            LawId::MoveInvariance => {
                let mut cells = SpanDiagramCells(s);
                let (d, v) = random_diagram(inst, &mut cells, r, 4);
                move_invariance_holds(inst, &d, &v, r, 8).0
            }
            LawId::TraceDiagram => {
                let m = s.dualizable(r, &a, &b);
                let d = span_dual(inst, &m).unwrap();
                let q = s.span(r, &a, &a);
                let p = s.full(&b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                trace_diagram_holds(inst, &q, &p, &f, &d)
            }
            _ => unreachable!("law not applicable to the span driver"),
        }
    }
}

struct GrData {
    inst: GrBimod,
}

impl GrData {
    fn zero(&self, g: GroupRef) -> GrZero {
        GrZero { group: g, ring: self.inst.preferred_ring }
    }

    fn trivial(&self) -> GrZero {
        self.zero(Group::trivial())
    }

    /// A cell with the standard-layout regular left action (always
    /// dualizable toward the trivial 0-cell).
    fn regular_cell(&self, h: &GrZero, copies: usize) -> GrCell {
        let g = &h.group;
        let rank = copies * g.n;
        let lambda = (0..g.n)
            .map(|x| {
                let mut p = crate::groupring::GrMat::zero(Group::trivial(), rank, rank);
                for c in 0..copies {
                    for y in 0..g.n {
                        p.comps[0].set(c * g.n + g.mul[x][y], c * g.n + y, crate::linalg::q(1));
                    }
                }
                p
            })
            .collect();
        GrCell::new(h.clone(), self.trivial(), rank, lambda)
    }

    fn check(&self, law: LawId, r: &mut ChaCha8Rng) -> bool {
        let inst = &self.inst;
        let s = GrSampler::new(inst.preferred_ring);
        let a = s.zero(r);
        let b = s.zero(r);
        match law {
            LawId::Hexagon => {
                let c = s.zero(r);
                let m = s.cell(r, &a, &b);
                let n = s.cell(r, &b, &c);
                let p = s.cell(r, &c, &a);
                hexagon_holds(inst, &m, &n, &p)
            }
            LawId::ThetaUnit => theta_unit_holds(inst, &s.cell(r, &a, &a)),
            LawId::ThetaInvolution => {
                let m = s.cell(r, &a, &b);
                let n = s.cell(r, &b, &a);
                theta_involution_holds(inst, &m, &n)
            }
            LawId::ThetaNaturality => {
                let m = s.cell(r, &a, &b);
                let mp = s.cell_of_rank(r, &a, &b, m.rank);
                let n = s.cell(r, &b, &a);
                let np = s.cell_of_rank(r, &b, &a, n.rank);
                theta_naturality_holds(inst, &s.two(r, &m, &mp), &s.two(r, &n, &np))
            }
            LawId::Interchange => {
                let c = s.zero(r);
                let m1 = s.cell(r, &a, &b);
                let m2 = s.cell_of_rank(r, &a, &b, m1.rank);
                let m3 = s.cell_of_rank(r, &a, &b, m1.rank);
                let n1 = s.cell(r, &b, &c);
                let n2 = s.cell_of_rank(r, &b, &c, n1.rank);
                let n3 = s.cell_of_rank(r, &b, &c, n1.rank);
                interchange_holds(
                    inst,
                    &s.two(r, &m1, &m2),
                    &s.two(r, &m2, &m3),
                    &s.two(r, &n1, &n2),
                    &s.two(r, &n2, &n3),
                )
            }
            LawId::ShadowFunctoriality => {
                let m1 = s.cell(r, &a, &a);
                let m2 = s.cell_of_rank(r, &a, &a, m1.rank);
                let m3 = s.cell_of_rank(r, &a, &a, m1.rank);
                shadow_functorial_holds(inst, &s.two(r, &m1, &m2), &s.two(r, &m2, &m3))
            }
            LawId::Tightening => {
                let triv = self.trivial();
                let m = s.cell(r, &triv, &b);
                let d = grbimod_dual(inst, &m).unwrap();
                let q = s.cell(r, &triv, &triv);
                let qp = s.cell(r, &triv, &triv);
                let p = s.cell(r, &b, &b);
                let pp = s.cell_of_rank(r, &b, &b, p.rank);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                let g = s.two(r, &qp, &q);
                let h = s.two(r, &p, &pp);
                tightening_holds(inst, &q, &p, &qp, &pp, &f, &g, &h, &d)
            }
            LawId::Sliding => {
                let triv = self.trivial();
                let m = s.cell(r, &triv, &b);
                let n = s.cell(r, &triv, &b);
                let dm = grbimod_dual(inst, &m).unwrap();
                let dn = grbimod_dual(inst, &n).unwrap();
                let q = s.cell(r, &triv, &triv);
                let k = s.cell(r, &triv, &triv);
                let p = s.cell(r, &b, &b);
                let l = s.cell(r, &b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&n, &p));
                let g = s.two(r, &inst.compose1(&k, &n), &inst.compose1(&m, &l));
                sliding_holds(inst, &q, &k, &p, &l, &f, &g, &dm, &dn)
            }
            LawId::Cyclicity => {
                let triv = self.trivial();
                let m = s.cell(r, &triv, &b);
                let n = s.cell_of_rank(r, &triv, &b, m.rank);
                let dm = grbimod_dual(inst, &m).unwrap();
                let dn = grbimod_dual(inst, &n).unwrap();
                cyclicity_holds(inst, &s.two(r, &m, &n), &s.two(r, &n, &m), &dm, &dn)
            }
            LawId::Unit => {
                let q = s.cell(r, &a, &a);
                let p = s.cell_of_rank(r, &a, &a, q.rank);
                unit_law_holds(inst, &q, &p, &s.two(r, &q, &p))
            }
            LawId::Composition => {
                let triv = self.trivial();
                let m = s.cell(r, &triv, &b);
                let n = self.regular_cell(&b, 1);
                let dm = grbimod_dual(inst, &m).unwrap();
                let dn = grbimod_dual(inst, &n).unwrap();
                let q = s.cell(r, &triv, &triv);
                let y = s.cell(r, &b, &b);
                let p = s.cell(r, &triv, &triv);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &y));
                let g = s.two(r, &inst.compose1(&y, &n), &inst.compose1(&n, &p));
                composition_holds(inst, &q, &y, &p, &f, &g, &dm, &dn)
            }
            LawId::Mate => {
                let triv = self.trivial();
                let m = s.cell(r, &triv, &b);
                let d = grbimod_dual(inst, &m).unwrap();
                let q = s.cell(r, &triv, &triv);
                let p = s.cell(r, &b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                mate_law_holds(inst, &q, &p, &f, &d)
            }
            LawId::MoveInvariance => {
                let mut cells = GrDiagramCells(s);
                let (d, v) = random_diagram(inst, &mut cells, r, 3);
                move_invariance_holds(inst, &d, &v, r, 6).0
            }
            LawId::TraceDiagram => {
                let triv = self.trivial();
                let m = s.cell(r, &triv, &b);
                let d = grbimod_dual(inst, &m).unwrap();
                let q = s.cell(r, &triv, &triv);
                let p = s.cell(r, &b, &b);
                let f = s.two(r, &inst.compose1(&q, &m), &inst.compose1(&m, &p));
                trace_diagram_holds(inst, &q, &p, &f, &d)
            }
            _ => unreachable!("law not applicable to the group-ring driver"),
        }
    }
}

// ---------------------------------------------------------------------------
// Functor and comparison drivers
// ---------------------------------------------------------------------------

fn span_functoriality(r: &mut ChaCha8Rng) -> bool {
    let lin = Linearize::new();
    let mut s = SpanSampler::new();
    let a = s.set(r);
    let b = s.set(r);
    let m = s.dualizable(r, &a, &b);
    let d = span_dual(&lin.src, &m).unwrap();
    let q = s.span(r, &a, &a);
    let p = s.full(&b, &b);
    let f = s.two(r, &lin.src.compose1(&q, &m), &lin.src.compose1(&m, &p));
    functoriality_square(&lin, &q, &p, &f, &d)
}

fn gr_functoriality(r: &mut ChaCha8Rng) -> bool {
    let rat = Rationalize::new();
    let s = GrSampler::new(Ring::Z);
    let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
    let h = GrZero { group: s.group(r), ring: Ring::Z };
    let m = s.cell(r, &triv, &h);
    let d = grbimod_dual(rat.src_inst(), &m).unwrap();
    let q = s.cell(r, &triv, &triv);
    let p = s.cell(r, &h, &h);
    let f = s.two(r, &rat.src_inst().compose1(&q, &m), &rat.src_inst().compose1(&m, &p));
    functoriality_square(&rat, &q, &p, &f, &d)
}

fn duals_invert_trial(r: &mut ChaCha8Rng) -> bool {
    let cmp = Comparison::new();
    let s = GrSampler::new(Ring::Z);
    let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
    let h = GrZero { group: s.group(r), ring: Ring::Z };
    let m = s.cell(r, &triv, &h);
    let n = s.cell_of_rank(r, &triv, &h, m.rank);
    let f = s.two(r, &m, &n);
    cmp.duals_invert(&m).unwrap_or(false) && cmp.natural(&f)
}

/// One Reidemeister-style input: a free cell with a twisted endomorphism.
fn cube_trial(r: &mut ChaCha8Rng) -> bool {
    let cmp = Comparison::new();
    let s = GrSampler::new(Ring::Z);
    let g = s.group(r);
    let endos = Endo::all(&g);
    let psi = endos[r.gen_range(0..endos.len())].clone();
    let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
    let gz = GrZero { group: g.clone(), ring: Ring::Z };
    let p_cell = crate::traces::twisted_unit(&gz, &psi);
    let rank = r.gen_range(1..=2);
    let m = GrCell::new(
        triv.clone(),
        gz.clone(),
        rank,
        vec![crate::groupring::GrMat::identity(g.clone(), rank)],
    );
    let fmat = s.grmat(r, &g, Ring::Z, rank, rank);
    let f = GrTwo::new_unchecked(m.clone(), cmp.inst.compose1(&m, &p_cell), fmat);
    match cmp.cube_faces(&m, &f, &p_cell) {
        Ok(faces) => faces.iter().all(|&x| x),
        Err(_) => false,
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Run a randomized verification of one law in one instance.
pub fn verify_law(law: LawId, instance: InstanceId, trials: usize, seed: u64) -> LawReport {
    let name = instance.name();
    match law {
        LawId::Functoriality => {
            let check: fn(&mut ChaCha8Rng) -> bool = match instance {
                InstanceId::Span => span_functoriality,
                _ => gr_functoriality,
            };
            run_trials(law, name, trials, seed, check)
        }
        LawId::DualsInvert => run_trials(law, name, trials, seed, duals_invert_trial),
        LawId::Cube => run_trials(law, name, trials, seed, cube_trial),
        _ => match instance {
            InstanceId::MatModZ | InstanceId::MatModQ => {
                let d = MatData { inst: MatMod::new(instance.ring()) };
                run_trials(law, name, trials, seed, |r| d.check(law, r))
            }
            InstanceId::Span => {
                let d = SpanData;
                run_trials(law, name, trials, seed, |r| d.check(law, r))
            }
            InstanceId::GrBimodZ | InstanceId::GrBimodQ => {
                let d = GrData { inst: GrBimod::new(instance.ring()) };
                run_trials(law, name, trials, seed, |r| d.check(law, r))
            }
        },
    }
}

/// Run the axiom suite (the non-trace laws) in one instance.
pub fn check_axioms(instance: InstanceId, trials: usize, seed: u64) -> Vec<LawReport> {
    LawId::AXIOMS.iter().map(|&l| verify_law(l, instance, trials, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_hold_in_every_instance() {
        for inst in InstanceId::ALL {
            for rep in check_axioms(inst, 8, 100) {
                assert!(rep.passed(), "{:?} failed in {}: seeds {:?}", rep.law, rep.instance, rep.failures);
            }
        }
    }

    #[test]
    fn trace_laws_hold_in_matmod() {
        for law in LawId::TRACE_LAWS {
            let rep = verify_law(law, InstanceId::MatModQ, 8, 200);
            assert!(rep.passed(), "{:?} failed: seeds {:?}", rep.law, rep.failures);
        }
    }

    #[test]
    fn trace_laws_hold_in_span_and_grbimod() {
        for law in LawId::TRACE_LAWS {
            for inst in [InstanceId::Span, InstanceId::GrBimodZ] {
                let rep = verify_law(law, inst, 6, 300);
                assert!(rep.passed(), "{:?} failed in {}: seeds {:?}", rep.law, rep.instance, rep.failures);
            }
        }
    }

    #[test]
    fn diagram_laws_hold() {
        for inst in [InstanceId::MatModZ, InstanceId::Span, InstanceId::GrBimodZ] {
            for law in [LawId::MoveInvariance, LawId::TraceDiagram] {
                let rep = verify_law(law, inst, 5, 400);
                assert!(rep.passed(), "{:?} failed in {}: seeds {:?}", rep.law, rep.instance, rep.failures);
            }
        }
    }

    #[test]
    fn functor_and_comparison_laws_hold() {
        for (law, inst) in [
            (LawId::Functoriality, InstanceId::Span),
            (LawId::Functoriality, InstanceId::GrBimodZ),
            (LawId::DualsInvert, InstanceId::GrBimodZ),
            (LawId::Cube, InstanceId::GrBimodZ),
        ] {
            let rep = verify_law(law, inst, 5, 500);
            assert!(rep.passed(), "{:?} failed in {}: seeds {:?}", rep.law, rep.instance, rep.failures);
        }
    }
}
