//! Named trace invariants: Hattori-Stallings and twisted traces of
//! group-ring matrices, Reidemeister and Lefschetz numbers of equivariant
//! chain complexes, and the diagram presentation of the trace.
//!
//! Conventions.  A free right `K[G]`-module endomorphism is a square matrix
//! `F` over the group ring acting on basis columns; its Hattori-Stallings
//! trace is the diagonal sum projected to the free module on conjugacy
//! classes.  A `psi`-twisted endomorphism (`f(m g) = f(m) psi(g)`) is the
//! same data read as a 2-cell `M -> M (.) U_psi` where `U_psi` is the unit
//! 1-cell with its left action twisted by `psi`; its trace projects the
//! diagonal sum along `psi`-twisted conjugacy classes.

use crate::bicat::Bicat;
use crate::diagram::{CyclicWord, Diagram, Generator, Layer, Slot};
use crate::eval::Valuation;
use crate::group::{twisted_conjugacy_classes, Endo, GroupRef};
use crate::groupring::GrMat;
use crate::instances::grbimod::{GrCell, GrZero};
use crate::linalg::{QMat, Scalar};
use crate::shadow::Ring;
use crate::trace::DualPair;
use num_traits::Zero;

/// The unit 1-cell on `(G, K)` with left action twisted by `psi`:
/// `lambda(g) = [psi(g)]`.
pub fn twisted_unit(zero: &GrZero, psi: &Endo) -> GrCell {
    assert!(*psi.group == *zero.group, "twist endomorphism is over the wrong group");
    let lambda = (0..zero.group.n)
        .map(|g| GrMat::monomial(zero.group.clone(), psi.apply(g)))
        .collect();
    GrCell::new(zero.clone(), zero.clone(), 1, lambda)
}

/// The diagonal sum of a square group-ring matrix, as a single group-ring
/// element (a `1 x 1` matrix).
pub fn diagonal_sum(f: &GrMat) -> GrMat {
    assert_eq!(f.rows, f.cols, "diagonal sum requires a square matrix");
    let mut out = GrMat::zero(f.group.clone(), 1, 1);
    for h in 0..f.group.n {
        let mut acc = Scalar::zero();
        for i in 0..f.rows {
            acc += f.comps[h].get(i, i);
        }
        out.comps[h].set(0, 0, acc);
    }
    out
}

/// Project a group-ring element onto classes: the coefficient of each class
/// is the sum of the coefficients of its members.  `class_of[x]` indexes
/// into the class list.
pub fn project_classes(elem: &GrMat, class_of: &[usize], num_classes: usize) -> Vec<Scalar> {
    assert_eq!((elem.rows, elem.cols), (1, 1), "expected a group-ring element");
    let mut out = vec![Scalar::zero(); num_classes];
    for x in 0..elem.group.n {
        out[class_of[x]] += elem.comps[x].get(0, 0);
    }
    out
}

/// The `psi`-twisted trace of a square matrix over `K[G]`: the diagonal sum
/// projected along `psi`-twisted conjugacy classes, ordered by class
/// representative.
pub fn twisted_trace(f: &GrMat, psi: &Endo) -> Vec<Scalar> {
    let classes = twisted_conjugacy_classes(f.group.clone(), psi);
    project_classes(&diagonal_sum(f), &classes.class_of, classes.reps.len())
}

/// The Hattori-Stallings trace: the identity-twisted case, projecting along
/// ordinary conjugacy classes.
pub fn hattori_stallings(f: &GrMat) -> Vec<Scalar> {
    twisted_trace(f, &Endo::identity(f.group.clone()))
}

/// A finitely generated projective module presented by an idempotent
/// `e = e^2` acting on a free module, together with an endomorphism
/// `f = e f e` of its image.
pub struct IdempotentModule {
    pub e: GrMat,
}

impl IdempotentModule {
    pub fn new(e: GrMat) -> Result<IdempotentModule, String> {
        if e.rows != e.cols {
            return Err("idempotent must be square".into());
        }
        if e.mul(&e) != e {
            return Err("matrix is not idempotent".into());
        }
        Ok(IdempotentModule { e })
    }

    /// The Hattori-Stallings trace of an endomorphism of the image of `e`,
    /// given as a matrix on the ambient free module with `f = e f e`.
    pub fn hs(&self, f: &GrMat) -> Result<Vec<Scalar>, String> {
        let efe = self.e.mul(f).mul(&self.e);
        if efe != *f {
            return Err("endomorphism does not restrict to the image of the idempotent".into());
        }
        Ok(hattori_stallings(f))
    }
}

/// Sum the class coefficients: the image of a trace under the augmentation
/// `K[G] -> K`.
pub fn augment_classes(v: &[Scalar]) -> Scalar {
    v.iter().fold(Scalar::zero(), |a, b| a + b)
}

// ---------------------------------------------------------------------------
// Equivariant chain complexes
// ---------------------------------------------------------------------------

/// A bounded complex of finitely generated free right `K[G]`-modules with a
/// `psi`-twisted self-map.  Degrees run `0 ..= ranks.len() - 1`;
/// `d[i]: C_{i+1} -> C_i` and `f[i]: C_i -> C_i`.
///
/// The twisted chain-map condition reads `psi(d) . f_{i+1} = f_i . d`
/// because moving `f` past the differential pushes the differential's
/// coefficients through the twist.
pub struct TwistedComplex {
    pub group: GroupRef,
    pub ring: Ring,
    pub psi: Endo,
    pub ranks: Vec<usize>,
    pub d: Vec<GrMat>,
    pub f: Vec<GrMat>,
}

impl TwistedComplex {
    pub fn new(
        group: GroupRef,
        ring: Ring,
        psi: Endo,
        ranks: Vec<usize>,
        d: Vec<GrMat>,
        f: Vec<GrMat>,
    ) -> Result<TwistedComplex, String> {
        if *psi.group != *group {
            return Err("twist endomorphism is over the wrong group".into());
        }
        let top = ranks.len();
        if top == 0 {
            return Err("complex must have at least one degree".into());
        }
        if d.len() + 1 != top || f.len() != top {
            return Err("wrong number of differentials or map components".into());
        }
        for (i, m) in f.iter().enumerate() {
            if (m.rows, m.cols) != (ranks[i], ranks[i]) {
                return Err(format!("map component in degree {i} has the wrong shape"));
            }
        }
        for (i, m) in d.iter().enumerate() {
            if (m.rows, m.cols) != (ranks[i], ranks[i + 1]) {
                return Err(format!("differential into degree {i} has the wrong shape"));
            }
        }
        for i in 0..d.len().saturating_sub(1) {
            if !d[i].mul(&d[i + 1]).is_zero() {
                return Err(format!("differential does not square to zero at degree {}", i + 2));
            }
        }
        for i in 0..d.len() {
            if d[i].map_group(&psi).mul(&f[i + 1]) != f[i].mul(&d[i]) {
                return Err(format!("self-map is not a twisted chain map at degree {}", i + 1));
            }
        }
        if ring == Ring::Z {
            for m in d.iter().chain(f.iter()) {
                if !m.is_integral() {
                    return Err("integral complex has rational entries".into());
                }
            }
        }
        Ok(TwistedComplex { group, ring, psi, ranks, d, f })
    }

    /// Entrywise augmentation: the induced complex of free `K`-modules with
    /// its (untwisted) self-map.
    pub fn augment(&self) -> PlainComplex {
        PlainComplex {
            ring: self.ring,
            ranks: self.ranks.clone(),
            d: self.d.iter().map(|m| m.augment()).collect(),
            f: self.f.iter().map(|m| m.augment()).collect(),
        }
    }
}

/// The Reidemeister trace: the alternating sum of degreewise twisted
/// traces, a vector over the `psi`-twisted conjugacy classes.
pub fn reidemeister(c: &TwistedComplex) -> Vec<Scalar> {
    let classes = twisted_conjugacy_classes(c.group.clone(), &c.psi);
    let mut out = vec![Scalar::zero(); classes.reps.len()];
    for (i, fi) in c.f.iter().enumerate() {
        let t = twisted_trace(fi, &c.psi);
        for (o, x) in out.iter_mut().zip(t) {
            if i % 2 == 0 {
                *o += x;
            } else {
                *o -= x;
            }
        }
    }
    out
}

/// A bounded complex of finitely generated free `K`-modules with a
/// self-map; the shape [`reidemeister`] lands in after augmentation.
pub struct PlainComplex {
    pub ring: Ring,
    pub ranks: Vec<usize>,
    pub d: Vec<QMat>,
    pub f: Vec<QMat>,
}

impl PlainComplex {
    pub fn validate(&self) -> Result<(), String> {
        for i in 0..self.d.len().saturating_sub(1) {
            if !self.d[i].mul(&self.d[i + 1]).is_zero() {
                return Err("differential does not square to zero".into());
            }
        }
        for i in 0..self.d.len() {
            if self.d[i].mul(&self.f[i + 1]) != self.f[i].mul(&self.d[i]) {
                return Err("self-map is not a chain map".into());
            }
        }
        Ok(())
    }
}

/// The Lefschetz number: the alternating sum of matrix traces.
pub fn lefschetz(c: &PlainComplex) -> Scalar {
    let mut out = Scalar::zero();
    for (i, fi) in c.f.iter().enumerate() {
        let mut t = Scalar::zero();
        for k in 0..fi.rows {
            t += fi.get(k, k);
        }
        if i % 2 == 0 {
            out += t;
        } else {
            out -= t;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The trace as a diagram
// ---------------------------------------------------------------------------

/// Build the four-layer diagram whose value is the trace of
/// `f: Q (.) M -> M (.) P`, together with the valuation binding it:
///
/// ```text
/// [Q]  --(wire Q | coev)-->  [Q M M*]  --(f | wire M*)-->  [M P M*]
///      --rotate 2-->  [M* M P]  --(ev | wire P)-->  [P]
/// ```
pub fn build_trace_diagram<I: Bicat>(
    inst: &I,
    q_cell: &I::O,
    p_cell: &I::O,
    f: &I::F,
    d: &DualPair<I>,
) -> (Diagram, Valuation<I>) {
    let mut v: Valuation<I> = Valuation::new();
    v.cells.insert("Q".into(), q_cell.clone());
    v.cells.insert("M".into(), d.m.clone());
    v.cells.insert("Md".into(), d.mdual.clone());
    v.cells.insert("P".into(), p_cell.clone());
    v.gens.insert("coev".into(), d.coev.clone());
    v.gens.insert("f".into(), f.clone());
    v.gens.insert("ev".into(), d.ev.clone());
    v.regions.insert("o".into(), inst.src0(q_cell));
    let s = |x: &str| x.to_string();
    let diagram = Diagram {
        top: CyclicWord::new(vec![s("Q")], "o"),
        layers: vec![
            Layer::Elementary {
                slots: vec![
                    Slot::Wire(s("Q")),
                    Slot::Box(Generator { name: s("coev"), dom: vec![], cod: vec![s("M"), s("Md")] }),
                ],
            },
            Layer::Elementary {
                slots: vec![
                    Slot::Box(Generator { name: s("f"), dom: vec![s("Q"), s("M")], cod: vec![s("M"), s("P")] }),
                    Slot::Wire(s("Md")),
                ],
            },
            Layer::Rotation { k: 2 },
            Layer::Elementary {
                slots: vec![
                    Slot::Box(Generator { name: s("ev"), dom: vec![s("Md"), s("M")], cod: vec![] }),
                    Slot::Wire(s("P")),
                ],
            },
        ],
    };
    (diagram, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::linalg::q;

    fn elem(group: &GroupRef, terms: &[(usize, i64)]) -> GrMat {
        let mut m = GrMat::zero(group.clone(), 1, 1);
        for &(h, c) in terms {
            let cur = m.comps[h].get(0, 0).clone();
            m.comps[h].set(0, 0, cur + q(c));
        }
        m
    }

    #[test]
    fn hs_of_identity_is_rank_at_the_trivial_class() {
        let g = Group::s3();
        let f = GrMat::identity(g.clone(), 3);
        let t = hattori_stallings(&f);
        // class of e comes first (representative 0)
        assert_eq!(t[0], q(3));
        assert!(t[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn hs_collapses_conjugate_elements() {
        let g = Group::s3();
        // s and r s r^{-1} lie in the same class: their difference has
        // trivial trace.
        let s = 3usize;
        let conj = g.mul[1][g.mul[s][g.inv[1]]];
        let f = elem(&g, &[(s, 1), (conj, -1)]);
        assert!(hattori_stallings(&f).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn twisted_trace_merges_twisted_classes() {
        // inversion on Z/3 has a single twisted class, so the twisted trace
        // only sees the total coefficient sum.
        let g = Group::cyclic(3);
        let psi = Endo::new(g.clone(), vec![0, 2, 1]).unwrap();
        let f = elem(&g, &[(0, 2), (1, -5), (2, 7)]);
        let t = twisted_trace(&f, &psi);
        assert_eq!(t, vec![q(4)]);
    }

    #[test]
    fn idempotent_module_checks_its_inputs() {
        let g = Group::cyclic(2);
        // e = (1 + g)/2 is idempotent over Q
        let mut e = GrMat::zero(g.clone(), 1, 1);
        e.comps[0].set(0, 0, crate::linalg::qr(1, 2));
        e.comps[1].set(0, 0, crate::linalg::qr(1, 2));
        let p = IdempotentModule::new(e.clone()).unwrap();
        // f = e itself restricts; hs(e) = (1/2, 1/2)
        let t = p.hs(&e).unwrap();
        assert_eq!(t, vec![crate::linalg::qr(1, 2), crate::linalg::qr(1, 2)]);
        let bad = elem(&g, &[(0, 1)]);
        assert!(p.hs(&bad).is_err());
        assert!(IdempotentModule::new(elem(&g, &[(1, 1)])).is_err());
    }

    #[test]
    fn complex_validation_and_reidemeister_of_a_disk() {
        // A disk: C_1 = C_0 = Z[G], d = [u], f_1 = [b], f_0 = psi(u) b u^-1.
        let g = Group::cyclic(3);
        let psi = Endo::new(g.clone(), vec![0, 2, 1]).unwrap();
        let u = elem(&g, &[(1, 1)]);
        let b = elem(&g, &[(2, 3)]);
        let f0 = u.map_group(&psi).mul(&b).mul(&elem(&g, &[(g.inv[1], 1)]));
        let c = TwistedComplex::new(
            g.clone(),
            Ring::Z,
            psi.clone(),
            vec![1, 1],
            vec![u],
            vec![f0, b],
        )
        .unwrap();
        // One twisted class: the two degree traces cancel only if their
        // class projections agree; a disk is twisted-contractible, so the
        // Reidemeister trace vanishes.
        assert!(reidemeister(&c).iter().all(|x| x.is_zero()));
        assert_eq!(lefschetz(&c.augment()), q(0));
    }

    #[test]
    fn lefschetz_matches_alternating_matrix_traces() {
        let c = PlainComplex {
            ring: Ring::Z,
            ranks: vec![2, 1],
            d: vec![QMat::zero(2, 1)],
            f: vec![QMat::from_int_rows(&[&[1, 2], &[3, 4]]), QMat::from_int_rows(&[&[7]])],
        };
        c.validate().unwrap();
        assert_eq!(lefschetz(&c), q(-2));
    }
}
