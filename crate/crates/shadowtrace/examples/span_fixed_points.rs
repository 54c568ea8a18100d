//! Traces of spans of finite sets.  A span with a bijective left leg is
//! dualizable and its trace tabulates the right leg; linearizing an
//! arbitrary endo-span turns the trace into a count of fixed points.

use shadowtrace::bicat::Bicat;
use shadowtrace::functor::{Linearize, ShadowFunctor};
use shadowtrace::instances::span::{SpanCell, SpanZero};
use shadowtrace::trace::{euler, span_dual, trace};

fn main() {
    let inst = shadowtrace::instances::span::Span;
    let a = SpanZero { name: "A".into(), elems: 3 };
    let b = SpanZero { name: "B".into(), elems: 2 };

    // left leg a bijection, right leg the function 0->1, 1->0, 2->1
    let s = SpanCell::atomic("S", &a, &b, &[(0, 1), (1, 0), (2, 1)]);
    let d = span_dual(&inst, &s).expect("bijective left leg gives a dual");
    let tab = euler(&inst, &d);
    println!("span trace (columns indexed by A, rows by B):");
    for i in 0..tab.mat.rows {
        let row: Vec<String> = (0..tab.mat.cols).map(|j| tab.mat.get(i, j).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    // a span that is not dualizable: the left leg misses an element
    let n = SpanCell::atomic("N", &a, &b, &[(0, 0), (0, 1)]);
    println!("non-bijective left leg dualizable? {}", span_dual(&inst, &n).is_ok());

    // linearize an endo-span and trace it: each diagonal label of the
    // matrix is a fixed point of the relation
    let lin = Linearize::new();
    let t = SpanCell::atomic("T", &a, &a, &[(0, 0), (0, 1), (1, 1), (2, 2), (2, 0)]);
    let lt = lin.map1(&t);
    let shadow = lin.src_inst().shadow_ob(&t);
    println!("fixed elements of T (shadow generators): {:?}", shadow.labels);
    let lshadow = lin.tgt_inst().shadow_ob(&lt);
    println!("diagonal labels of Z[T]: {:?}", lshadow.labels);
    assert_eq!(shadow.gens, lshadow.gens);

    // the trace of the identity on Z[T] counts the fixed elements
    let dz = shadowtrace::trace::matmod_dual(lin.tgt_inst(), &lt).unwrap();
    let id = shadowtrace::bicat::Bicat::id2(lin.tgt_inst(), &lt);
    let u = shadowtrace::bicat::Bicat::unit(
        lin.tgt_inst(),
        &shadowtrace::bicat::Bicat::src0(lin.tgt_inst(), &lt),
    );
    let chi = trace(lin.tgt_inst(), &u, &u, &id, &dz);
    println!("euler of Z[T] (entry (s, r) counts apex elements with legs (r, s)):");
    let mut diag = shadowtrace::linalg::q(0);
    for i in 0..chi.mat.rows {
        let row: Vec<String> = (0..chi.mat.cols).map(|j| chi.mat.get(i, j).to_string()).collect();
        println!("  {}", row.join(" "));
        diag += chi.mat.get(i, i);
    }
    // the diagonal sum counts the fixed elements of the span
    assert_eq!(diag, shadowtrace::linalg::q(shadow.gens as i64));
}
