//! Euler characteristics over group rings are characters: the euler of the
//! regular representation of Z/2 over Q is (2 at e, 0 at g), and
//! Hattori-Stallings traces of idempotents read off ranks of projectives.

use shadowtrace::group::Group;
use shadowtrace::groupring::GrMat;
use shadowtrace::instances::grbimod::{GrBimod, GrCell, GrZero};
use shadowtrace::linalg::{q, qr};
use shadowtrace::shadow::Ring;
use shadowtrace::trace::{euler, grbimod_dual};
use shadowtrace::traces::{hattori_stallings, IdempotentModule};

fn main() {
    // the regular representation of Z/2 over Q as a cell (Z/2, Q) -> (1, Q)
    let h = Group::cyclic(2);
    let src = GrZero { group: h.clone(), ring: Ring::Q };
    let tgt = GrZero { group: Group::trivial(), ring: Ring::Q };
    let mut swap = GrMat::zero(Group::trivial(), 2, 2);
    swap.comps[0].set(0, 1, q(1));
    swap.comps[0].set(1, 0, q(1));
    let reg = GrCell::new(src, tgt, 2, vec![GrMat::identity(Group::trivial(), 2), swap]);

    let inst = GrBimod::new(Ring::Q);
    let d = grbimod_dual(&inst, &reg).expect("regular-shaped cells are dualizable");
    let chi = euler(&inst, &d);
    println!("euler of the regular representation of Z/2 over Q:");
    for (i, label) in chi.src.labels.iter().enumerate() {
        println!("  [{}] {}", label, chi.mat.get(0, i));
    }
    // the character of the regular representation: |G| at e, 0 elsewhere
    assert_eq!(*chi.mat.get(0, 0), q(2));
    assert_eq!(*chi.mat.get(0, 1), q(0));

    // Hattori-Stallings: the averaging idempotent over Q[Z/3] cuts out a
    // rank-1 projective; its trace is 1/3 on every class
    let g3 = Group::cyclic(3);
    let mut e = GrMat::zero(g3.clone(), 1, 1);
    for gi in 0..3 {
        e.comps[gi].set(0, 0, qr(1, 3));
    }
    let idem = IdempotentModule::new(e.clone()).expect("averaging element is idempotent");
    let hs = idem.hs(&e).expect("e itself is a compatible endomorphism");
    println!("HS trace of the averaging idempotent over Q[Z/3]: {hs:?}");
    assert!(hs.iter().all(|x| *x == qr(1, 3)));

    // and the identity on the free rank-2 module has HS trace 2 at e
    let f = GrMat::identity(g3, 2);
    let hsf = hattori_stallings(&f);
    println!("HS trace of id on the free rank-2 module: {hsf:?}");
    assert_eq!(hsf[0], q(2));
}
