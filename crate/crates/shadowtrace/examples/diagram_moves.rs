//! Cylindrical string diagrams: build the standard trace diagram, evaluate
//! it layer by layer, deform it with boundary-preserving moves, and
//! normalize it — the value never changes.

use shadowtrace::diagram::{apply_move, normalize, Move};
use shadowtrace::eval::{validate, value};
use shadowtrace::instances::matmod::{MatCell, MatMod, MatTwo, MatZero};
use shadowtrace::linalg::QMat;
use shadowtrace::sample::{random_move, rng};
use shadowtrace::shadow::Ring;
use shadowtrace::trace::{matmod_dual, trace};
use shadowtrace::traces::build_trace_diagram;

fn main() {
    let inst = MatMod::new(Ring::Z);
    let r = MatZero { name: "R".into(), elems: 1 };
    let q = MatCell::atomic("Q", &r, &r, &[vec![1]]);
    let m = MatCell::atomic("M", &r, &r, &[vec![2]]);
    let p = MatCell::atomic("P", &r, &r, &[vec![1]]);
    let d = matmod_dual(&inst, &m).unwrap();

    use shadowtrace::bicat::Bicat;
    let f = MatTwo::new(
        inst.compose1(&q, &m),
        inst.compose1(&m, &p),
        vec![vec![QMat::from_int_rows(&[&[1, 2], &[3, 4]])]],
    );

    let (diagram, v) = build_trace_diagram(&inst, &q, &p, &f, &d);
    let (top, bottom) = validate(&inst, &diagram, &v).expect("trace diagram validates");
    println!("trace diagram: {top} => {bottom}");
    for (i, layer) in diagram.layers.iter().enumerate() {
        println!("  layer {i}: {layer:?}");
    }

    let base = value(&inst, &diagram, &v).expect("diagram evaluates");
    println!("value = {}", base.mat.get(0, 0));
    assert!(base.eq(&trace(&inst, &q, &p, &f, &d)));

    // deform: 100 random applicable moves, value invariant throughout
    let mut cur = diagram.clone();
    let mut rr = rng(11);
    let mut applied = 0;
    while applied < 100 {
        let Some(mv) = random_move(&cur, &mut rr) else { break };
        cur = apply_move(&cur, &mv).expect("enumerated moves apply");
        applied += 1;
        assert!(value(&inst, &cur, &v).unwrap().eq(&base));
    }
    println!("applied {applied} random moves; value invariant ({} layers now)", cur.layers.len());

    // a named move sequence and the greedy normal form
    let split = apply_move(&diagram, &Move::ConjugateByRotation { pos: 1, j: 1 }).unwrap();
    assert!(value(&inst, &split, &v).unwrap().eq(&base));
    let norm = normalize(&cur).expect("normalization preserves well-formedness");
    assert!(value(&inst, &norm, &v).unwrap().eq(&base));
    println!("normal form has {} layers", norm.layers.len());
}
