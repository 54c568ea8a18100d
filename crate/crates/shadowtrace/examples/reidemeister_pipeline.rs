//! The Reidemeister pipeline: twisted conjugacy classes, twisted traces of
//! equivariant complexes, and the augmentation down to the Lefschetz
//! number.

use shadowtrace::group::{twisted_conjugacy_classes, Endo, Group};
use shadowtrace::sample::{rng, twisted_complex};
use shadowtrace::shadow::Ring;
use shadowtrace::traces::{augment_classes, lefschetz, reidemeister};

fn main() {
    // inversion on Z/3 identifies g with g^2 up to twisted conjugacy
    let g = Group::cyclic(3);
    let psi = Endo::new(g.clone(), vec![0, 2, 1]).unwrap();
    let classes = twisted_conjugacy_classes(g.clone(), &psi);
    println!(
        "twisted conjugacy classes of Z/3 under inversion: {:?}",
        classes.reps.iter().map(|&r| g.elem_names[r].clone()).collect::<Vec<_>>()
    );

    // a random equivariant complex with a psi-twisted self-map
    let mut r = rng(5);
    let c = twisted_complex(&mut r, g.clone(), Ring::Z, psi.clone(), 3, 3);
    println!("sampled complex ranks: {:?}", c.ranks);
    let rt = reidemeister(&c);
    for (i, v) in rt.iter().enumerate() {
        println!("reidemeister trace at [{}] = {}", g.elem_names[classes.reps[i]], v);
    }

    // augmenting the class vector gives the Lefschetz number of the
    // augmented complex
    let plain = c.augment();
    plain.validate().unwrap();
    let l = lefschetz(&plain);
    println!("lefschetz of the augmented complex = {l}");
    assert_eq!(augment_classes(&rt), l);

    // over the trivial group the Reidemeister trace is the Lefschetz number
    let t = Group::trivial();
    let idt = Endo::identity(t.clone());
    let c0 = twisted_complex(&mut r, t, Ring::Q, idt, 3, 3);
    let rt0 = reidemeister(&c0);
    assert_eq!(rt0.len(), 1);
    assert_eq!(rt0[0], lefschetz(&c0.augment()));
    println!("trivial-group check: reidemeister = lefschetz = {}", rt0[0]);
}
