//! Bicategorical traces in the matrices-of-modules instance: the trace of
//! an endomorphism of a free module is its diagonal sum, the Euler
//! characteristic of a free cell is its rank, and a diagonal-shaped
//! 2-cell gives a transfer.

use shadowtrace::bicat::Bicat;
use shadowtrace::instances::matmod::{MatCell, MatMod, MatTwo, MatZero};
use shadowtrace::linalg::QMat;
use shadowtrace::shadow::Ring;
use shadowtrace::trace::{euler, matmod_dual, trace, transfer};

fn main() {
    let inst = MatMod::new(Ring::Z);
    let r = MatZero { name: "R".into(), elems: 1 };
    let m = MatCell::atomic("M", &r, &r, &[vec![3]]);
    let d = matmod_dual(&inst, &m).expect("free cells are always dualizable");

    // trace of an endomorphism = diagonal sum
    let f_mat = QMat::from_int_rows(&[&[1, 5, 0], &[0, -3, 2], &[4, 0, 7]]);
    let f = MatTwo::new(m.clone(), m.clone(), vec![vec![f_mat]]);
    let u = inst.unit(&r);
    let tr = trace(&inst, &u, &u, &f, &d);
    println!("trace of [[1,5,0],[0,-3,2],[4,0,7]] = {}", tr.mat.get(0, 0));
    assert_eq!(*tr.mat.get(0, 0), shadowtrace::linalg::q(5));

    // euler characteristic of a free rank-3 cell = 3
    let chi = euler(&inst, &d);
    println!("euler of the free rank-3 cell = {}", chi.mat.get(0, 0));
    assert_eq!(*chi.mat.get(0, 0), shadowtrace::linalg::q(3));

    // transfer of the identity-shaped diagonal M -> M . P with P of rank 1
    let p = MatCell::atomic("P", &r, &r, &[vec![1]]);
    let mp = inst.compose1(&m, &p);
    let delta = MatTwo::new(m.clone(), mp, vec![vec![QMat::identity(3)]]);
    let t = transfer(&inst, &p, &delta, &d);
    println!("transfer of the diagonal = {}", t.mat.get(0, 0));
    assert_eq!(*t.mat.get(0, 0), shadowtrace::linalg::q(3));
}
