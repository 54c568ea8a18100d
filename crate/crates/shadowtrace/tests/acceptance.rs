//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line.  All equality checks are exact.

use shadowtrace::bicat::Bicat;
use shadowtrace::group::{Endo, Group};
use shadowtrace::groupring::GrMat;
use shadowtrace::instances::matmod::{MatCell, MatMod, MatTwo, MatZero};
use shadowtrace::instances::span::{Span, SpanTwo};
use shadowtrace::laws::{
    check_axioms, move_invariance_holds, verify_law, InstanceId, LawId,
};
use shadowtrace::linalg::{q, QMat, Scalar};
use shadowtrace::sample::{
    random_diagram, rng, twisted_complex, GrDiagramCells, GrSampler, MatDiagramCells, MatSampler,
    SpanDiagramCells, SpanSampler,
};
use shadowtrace::shadow::Ring;
use shadowtrace::trace::{euler, grbimod_dual, matmod_dual, span_dual, trace};
use shadowtrace::traces::{augment_classes, lefschetz, reidemeister, TwistedComplex};
use num_traits::Zero;
use rand::Rng;

fn report(n: usize, what: &str, pass: bool) {
    println!("criterion {n}: {} — {what}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {what}");
}

#[test]
fn criterion_1_axiom_suite() {
    let mut pass = true;
    for inst in InstanceId::ALL {
        for rep in check_axioms(inst, 200, 0xA1) {
            if !rep.passed() {
                eprintln!("axiom {:?} failed in {}: seeds {:?}", rep.law, rep.instance, rep.failures);
                pass = false;
            }
        }
    }
    report(1, "structural axioms, 200 samples per instance, zero failures", pass);
}

#[test]
fn criterion_2_trace_is_diagonal_sum() {
    let inst = MatMod::new(Ring::Z);
    let r = MatZero { name: "R".into(), elems: 1 };
    let mut rr = rng(0xA2);
    let mut pass = true;
    for _ in 0..500 {
        let n = rr.gen_range(1..=6);
        let cell = MatCell::atomic("M", &r, &r, &[vec![n]]);
        let d = matmod_dual(&inst, &cell).unwrap();
        let mut m = QMat::zero(n, n);
        let mut diag = Scalar::zero();
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, q(rr.gen_range(-9..=9)));
            }
            diag += m.get(i, i);
        }
        let f = MatTwo::new(cell.clone(), cell.clone(), vec![vec![m]]);
        let u = inst.unit(&r);
        let t = trace(&inst, &u, &u, &f, &d);
        pass &= *t.mat.get(0, 0) == diag;
    }
    report(2, "one-object matmod trace equals the diagonal sum, 500 matrices", pass);
}

#[test]
fn criterion_3_span_trace_formula() {
    let inst = Span;
    let mut s = SpanSampler::new();
    let mut rr = rng(0xA3);
    let mut pass = true;
    // dualizable spans: the trace tabulates the right leg, and the only
    // endomorphism (the identity) satisfies g . f = g trivially
    for _ in 0..100 {
        let a = s.set(&mut rr);
        let b = s.set(&mut rr);
        let m = s.dualizable(&mut rr, &a, &b);
        let d = span_dual(&inst, &m).unwrap();
        let t = euler(&inst, &d);
        for e in &m.elems {
            let (l, r) = (e.l, e.r);
            for row in 0..t.mat.rows {
                let expect = if row == r { q(1) } else { q(0) };
                pass &= *t.mat.get(row, l) == expect;
            }
        }
    }
    // arbitrary endo-spans through linearization: the trace entry (s, r)
    // counts the brute-force fixed points of f over the fiber (r, s)
    let lin = shadowtrace::functor::Linearize::new();
    use shadowtrace::functor::ShadowFunctor;
    for _ in 0..100 {
        let a = s.set(&mut rr);
        let m = s.span(&mut rr, &a, &a);
        let f: SpanTwo = s.two(&mut rr, &m, &m);
        let lm = lin.map1(&m);
        let lf = lin.map2(&f);
        let dz = matmod_dual(lin.tgt_inst(), &lm).unwrap();
        let u = lin.tgt_inst().unit(&lin.tgt_inst().src0(&lm));
        let t = trace(lin.tgt_inst(), &u, &u, &lf, &dz);
        for r in 0..a.elems {
            for sv in 0..a.elems {
                let count = m
                    .elems
                    .iter()
                    .enumerate()
                    .filter(|(i, e)| e.l == r && e.r == sv && f.map[*i] == *i)
                    .count();
                pass &= *t.mat.get(sv, r) == q(count as i64);
            }
        }
    }
    report(3, "span traces tabulate the right leg; linearized traces count fixed points", pass);
}

#[test]
fn criterion_4_trace_law_suite() {
    let mut pass = true;
    for law in LawId::TRACE_LAWS {
        for (inst, trials) in [
            (InstanceId::MatModZ, 100),
            (InstanceId::MatModQ, 100),
            (InstanceId::Span, 10),
            (InstanceId::GrBimodZ, 10),
        ] {
            let rep = verify_law(law, inst, trials, 0xA4);
            if !rep.passed() {
                eprintln!("{:?} failed in {}: seeds {:?}", rep.law, rep.instance, rep.failures);
                pass = false;
            }
        }
    }
    report(4, "trace laws: 200 matmod trials each plus span/group-ring shapes", pass);
}

#[test]
fn criterion_5_diagram_suite() {
    let mut pass = true;
    // rotation laws, 500 trials
    for law in [LawId::Hexagon, LawId::ThetaUnit, LawId::ThetaInvolution, LawId::ThetaNaturality] {
        let rep = verify_law(law, InstanceId::MatModZ, 500, 0xA5);
        if !rep.passed() {
            eprintln!("{:?} failed: seeds {:?}", rep.law, rep.failures);
            pass = false;
        }
    }
    // >= 1000 applicable moves per instance leave the value unchanged
    let mut rr = rng(0xA51);
    let mut moves = 0usize;
    let mat = MatMod::new(Ring::Z);
    while moves < 1000 {
        let mut cells = MatDiagramCells(MatSampler::new(Ring::Z));
        let (d, v) = random_diagram(&mat, &mut cells, &mut rr, 4);
        let (ok, n) = move_invariance_holds(&mat, &d, &v, &mut rr, 40);
        pass &= ok;
        moves += n;
    }
    let mut moves = 0usize;
    while moves < 1000 {
        let mut cells = SpanDiagramCells(SpanSampler::new());
        let (d, v) = random_diagram(&Span, &mut cells, &mut rr, 4);
        let (ok, n) = move_invariance_holds(&Span, &d, &v, &mut rr, 40);
        pass &= ok;
        moves += n;
    }
    let gr = shadowtrace::instances::grbimod::GrBimod::new(Ring::Z);
    let mut moves = 0usize;
    while moves < 1000 {
        let mut cells = GrDiagramCells(GrSampler::new(Ring::Z));
        let (d, v) = random_diagram(&gr, &mut cells, &mut rr, 3);
        let (ok, n) = move_invariance_holds(&gr, &d, &v, &mut rr, 40);
        pass &= ok;
        moves += n;
    }
    // 200 trace diagrams evaluate to the trace
    for (inst, trials) in
        [(InstanceId::MatModZ, 150), (InstanceId::Span, 40), (InstanceId::GrBimodZ, 10)]
    {
        let rep = verify_law(LawId::TraceDiagram, inst, trials, 0xA52);
        if !rep.passed() {
            eprintln!("trace diagram failed in {}: seeds {:?}", rep.instance, rep.failures);
            pass = false;
        }
    }
    report(5, "rotation laws, 1000+ deformation moves per instance, 200 trace diagrams", pass);
}

#[test]
fn criterion_6_functoriality_squares() {
    let mut pass = true;
    for (inst, what) in [(InstanceId::Span, "linearization"), (InstanceId::GrBimodZ, "rationalization")] {
        let rep = verify_law(LawId::Functoriality, inst, 100, 0xA6);
        if !rep.passed() {
            eprintln!("{what} square failed: seeds {:?}", rep.failures);
            pass = false;
        }
    }
    report(6, "trace squares commute for linearization and rationalization, 100 each", pass);
}

#[test]
fn criterion_7_comparison_cube() {
    let mut pass = true;
    let rep = verify_law(LawId::DualsInvert, InstanceId::GrBimodZ, 50, 0xA7);
    if !rep.passed() {
        eprintln!("duals-invert failed: seeds {:?}", rep.failures);
        pass = false;
    }
    let rep = verify_law(LawId::Cube, InstanceId::GrBimodZ, 50, 0xA71);
    if !rep.passed() {
        eprintln!("cube failed: seeds {:?}", rep.failures);
        pass = false;
    }
    // the integrally computed Reidemeister trace maps to the rational one
    let mut rr = rng(0xA72);
    for _ in 0..50 {
        let gs = GrSampler::new(Ring::Z);
        let g = gs.group(&mut rr);
        let endos = Endo::all(&g);
        let psi = endos[rr.gen_range(0..endos.len())].clone();
        let c = twisted_complex(&mut rr, g.clone(), Ring::Z, psi.clone(), 3, 3);
        let cq = TwistedComplex::new(g, Ring::Q, psi, c.ranks.clone(), c.d.clone(), c.f.clone())
            .unwrap();
        pass &= reidemeister(&c) == reidemeister(&cq);
    }
    report(7, "comparison duals invert; all six cube faces on 50 instances; Z to Q transport", pass);
}

#[test]
fn criterion_8_reidemeister_lefschetz() {
    let mut rr = rng(0xA8);
    let mut pass = true;
    for _ in 0..100 {
        let gs = GrSampler::new(Ring::Z);
        let g = gs.group(&mut rr);
        let endos = Endo::all(&g);
        let psi = endos[rr.gen_range(0..endos.len())].clone();
        let c = twisted_complex(&mut rr, g, Ring::Z, psi, 3, 3);
        let plain = c.augment();
        pass &= plain.validate().is_ok();
        pass &= augment_classes(&reidemeister(&c)) == lefschetz(&plain);
    }
    for _ in 0..20 {
        let t = Group::trivial();
        let c = twisted_complex(&mut rr, t.clone(), Ring::Q, Endo::identity(t), 3, 3);
        let rt = reidemeister(&c);
        pass &= rt.len() == 1 && rt[0] == lefschetz(&c.augment());
    }
    report(8, "augmented Reidemeister = Lefschetz on 100 complexes; trivial group agrees", pass);
}

#[test]
fn criterion_9_regular_representation_character() {
    let h = Group::cyclic(2);
    let src = shadowtrace::instances::grbimod::GrZero { group: h.clone(), ring: Ring::Q };
    let tgt =
        shadowtrace::instances::grbimod::GrZero { group: Group::trivial(), ring: Ring::Q };
    let mut swap = GrMat::zero(Group::trivial(), 2, 2);
    swap.comps[0].set(0, 1, q(1));
    swap.comps[0].set(1, 0, q(1));
    let lambda = vec![GrMat::identity(Group::trivial(), 2), swap];
    let reg = shadowtrace::instances::grbimod::GrCell::new(src, tgt, 2, lambda.clone());
    let inst = shadowtrace::instances::grbimod::GrBimod::new(Ring::Q);
    let d = grbimod_dual(&inst, &reg).unwrap();
    let chi = euler(&inst, &d);
    // independent oracle: the character is the diagonal sum of each action
    // matrix
    let mut pass = true;
    for (gi, lam) in lambda.iter().enumerate() {
        let mut tr = Scalar::zero();
        for i in 0..lam.rows {
            tr += lam.comps[0].get(i, i);
        }
        pass &= *chi.mat.get(0, gi) == tr;
    }
    pass &= *chi.mat.get(0, 0) == q(2) && *chi.mat.get(0, 1) == q(0);
    report(9, "euler of the regular representation of Z/2 over Q is the character (2, 0)", pass);
}
