//! Shadow functors between instances: linearization of spans, scalar
//! extension of group-ring bimodules, and the comparison cells whose six
//! cube faces commute.

use shadowtrace::bicat::Bicat;
use shadowtrace::functor::{functoriality_square, Comparison, Linearize, Rationalize, ShadowFunctor};
use shadowtrace::group::{Endo, Group};
use shadowtrace::groupring::GrMat;
use shadowtrace::instances::grbimod::{GrCell, GrTwo, GrZero};
use shadowtrace::sample::{rng, GrSampler, SpanSampler};
use shadowtrace::shadow::Ring;
use shadowtrace::trace::{grbimod_dual, span_dual};
use shadowtrace::traces::twisted_unit;

fn main() {
    let mut r = rng(3);

    // linearization Span -> MatMod(Z) is strict, and the trace square
    // commutes for dualizable spans
    let lin = Linearize::new();
    let mut ss = SpanSampler::new();
    for _ in 0..10 {
        let a = ss.set(&mut r);
        let b = ss.set(&mut r);
        let m = ss.dualizable(&mut r, &a, &b);
        let n = ss.span(&mut r, &a, &b);
        let comp = lin.src_inst().compose1(&m, &m.dual());
        assert_eq!(lin.map1(&comp), lin.tgt_inst().compose1(&lin.map1(&m), &lin.map1(&m.dual())));
        let _ = n;
        let d = span_dual(lin.src_inst(), &m).unwrap();
        let q = ss.span(&mut r, &a, &a);
        let p = ss.full(&b, &b);
        let f = ss.two(
            &mut r,
            &lin.src_inst().compose1(&q, &m),
            &lin.src_inst().compose1(&m, &p),
        );
        assert!(functoriality_square(&lin, &q, &p, &f, &d));
    }
    println!("linearization is strict and its trace square commutes (10 samples)");

    // rationalization GrBimod(Z) -> GrBimod(Q), same square
    let rat = Rationalize::new();
    let gs = GrSampler::new(Ring::Z);
    let triv = GrZero { group: Group::trivial(), ring: Ring::Z };
    for _ in 0..10 {
        let h = GrZero { group: gs.group(&mut r), ring: Ring::Z };
        let m = gs.cell(&mut r, &triv, &h);
        let d = grbimod_dual(rat.src_inst(), &m).unwrap();
        let q = gs.cell(&mut r, &triv, &triv);
        let p = gs.cell(&mut r, &h, &h);
        let f = gs.two(
            &mut r,
            &rat.src_inst().compose1(&q, &m),
            &rat.src_inst().compose1(&m, &p),
        );
        assert!(functoriality_square(&rat, &q, &p, &f, &d));
    }
    println!("rationalization trace square commutes (10 samples)");

    // the comparison cells are invertible with the mate as inverse, and
    // all six faces of the trace cube commute for twisted endomorphisms
    let cmp = Comparison::new();
    for gname in ["z2", "z3"] {
        let g = Group::builtin(gname).unwrap();
        let gz = GrZero { group: g.clone(), ring: Ring::Z };
        for psi in Endo::all(&g) {
            let p_cell = twisted_unit(&gz, &psi);
            let m = GrCell::new(
                triv.clone(),
                gz.clone(),
                2,
                vec![GrMat::identity(g.clone(), 2)],
            );
            assert!(cmp.duals_invert(&m).unwrap());
            let fmat = gs.grmat(&mut r, &g, Ring::Z, 2, 2);
            let f = GrTwo::new_unchecked(m.clone(), cmp.inst.compose1(&m, &p_cell), fmat);
            let faces = cmp.cube_faces(&m, &f, &p_cell).unwrap();
            assert!(faces.iter().all(|&x| x), "{gname}: all six faces commute");
        }
        println!("comparison cube: all six faces commute over {gname} for every twist");
    }
}
