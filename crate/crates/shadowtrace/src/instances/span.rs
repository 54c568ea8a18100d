//! Spans of finite sets.
//!
//! A 0-cell is a finite set; a 1-cell `R -|-> S` is a span `R <- A -> S`
//! with a finite apex; a 2-cell is a map of apexes commuting with both
//! legs.  Composition is by pullback.  The shadow of an endo-span is the
//! free abelian group on its fixed points (apex elements where both legs
//! agree), so that traces land in the same presented-module target as the
//! other instances; `theta` is the pair swap.
//!
//! Strictness: apex elements are flat sequences of atoms in a canonical
//! sorted order.  Composing concatenates atom sequences and erases unit
//! atoms, so both bracketings of a triple composite produce identical
//! apexes, and composition with a unit span is the identity on the nose.

use crate::bicat::Bicat;
use crate::linalg::{q, QMat};
use crate::shadow::{Ring, ShadowMor, ShadowOb};
use std::fmt;

/// A finite set.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct SpanZero {
    pub name: String,
    pub elems: usize,
}

/// One atom of an apex element: either a named element of an atomic span's
/// apex (`star` marks the dual), or a unit marker for the identity span.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpanAtom {
    El { cell: String, idx: usize, star: bool },
    Unit { r: usize },
}

impl fmt::Debug for SpanAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanAtom::El { cell, idx, star } => {
                write!(f, "{cell}.{idx}{}", if *star { "*" } else { "" })
            }
            SpanAtom::Unit { r } => write!(f, "u{r}"),
        }
    }
}

/// An apex element with its images under the two legs.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct SpanElem {
    pub atoms: Vec<SpanAtom>,
    pub l: usize,
    pub r: usize,
}

/// A 1-cell: a span with canonically ordered apex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpanCell {
    pub src: SpanZero,
    pub tgt: SpanZero,
    /// Sorted by atom sequence; sequences are distinct.
    pub elems: Vec<SpanElem>,
}

impl SpanCell {
    /// An atomic span given by the leg images of each apex element.
    pub fn atomic(name: &str, src: &SpanZero, tgt: &SpanZero, legs: &[(usize, usize)]) -> SpanCell {
        let mut elems: Vec<SpanElem> = legs
            .iter()
            .enumerate()
            .map(|(idx, &(l, r))| {
                assert!(l < src.elems && r < tgt.elems, "leg image out of range");
                SpanElem { atoms: vec![SpanAtom::El { cell: name.into(), idx, star: false }], l, r }
            })
            .collect();
        elems.sort_by(|a, b| a.atoms.cmp(&b.atoms));
        SpanCell { src: src.clone(), tgt: tgt.clone(), elems }
    }

    /// True if every apex element is a unit marker (identity-like span).
    pub fn is_unital(&self) -> bool {
        self.elems.iter().all(|e| matches!(e.atoms.as_slice(), [SpanAtom::Unit { .. }]))
    }

    /// Common atom length of apex elements (unit markers count as zero
    /// history); composites keep this uniform.
    fn elem_len(&self) -> Option<usize> {
        self.elems.first().map(|e| e.atoms.len())
    }

    /// The reversed span with starred atoms; `S <- A -> R`.
    pub fn dual(&self) -> SpanCell {
        let mut elems: Vec<SpanElem> = self
            .elems
            .iter()
            .map(|e| SpanElem {
                atoms: e
                    .atoms
                    .iter()
                    .rev()
                    .map(|a| match a {
                        SpanAtom::El { cell, idx, star } => {
                            SpanAtom::El { cell: cell.clone(), idx: *idx, star: !*star }
                        }
                        SpanAtom::Unit { r } => SpanAtom::Unit { r: *r },
                    })
                    .collect(),
                l: e.r,
                r: e.l,
            })
            .collect();
        elems.sort_by(|a, b| a.atoms.cmp(&b.atoms));
        SpanCell { src: self.tgt.clone(), tgt: self.src.clone(), elems }
    }

    /// Index of the element with the given atom sequence.
    pub fn index_of(&self, atoms: &[SpanAtom]) -> usize {
        self.elems
            .iter()
            .position(|e| e.atoms == atoms)
            .unwrap_or_else(|| panic!("apex element {:?} not found", atoms))
    }

    /// Split a composite element of `self (.) other` back into its two
    /// halves, as indices into the factors' apexes.
    fn decompose(m: &SpanCell, n: &SpanCell, e: &SpanElem) -> (usize, usize) {
        if m.is_unital() {
            let x = m.index_of(&[SpanAtom::Unit { r: e.l }]);
            let y = if n.is_unital() { n.index_of(&e.atoms) } else { n.index_of(&e.atoms) };
            return (x, y);
        }
        if n.is_unital() {
            let x = m.index_of(&e.atoms);
            let y = n.index_of(&[SpanAtom::Unit { r: e.r }]);
            return (x, y);
        }
        let k = m.elem_len().expect("nonempty apex");
        let (a, b) = e.atoms.split_at(k);
        (m.index_of(a), n.index_of(b))
    }
}

/// Concatenate two atom sequences, erasing unit markers; an all-unit
/// result collapses to a single marker at the given object.
fn normalize_atoms(a: &[SpanAtom], b: &[SpanAtom], at: usize) -> Vec<SpanAtom> {
    let mut out: Vec<SpanAtom> = a
        .iter()
        .chain(b.iter())
        .filter(|x| matches!(x, SpanAtom::El { .. }))
        .cloned()
        .collect();
    if out.is_empty() {
        out.push(SpanAtom::Unit { r: at });
    }
    out
}

/// A 2-cell: an apex map commuting with both legs.
#[derive(Clone, Debug)]
pub struct SpanTwo {
    pub src: SpanCell,
    pub tgt: SpanCell,
    /// `map[i]` is the index in `tgt.elems` of the image of `src.elems[i]`.
    pub map: Vec<usize>,
}

impl SpanTwo {
    pub fn new(src: SpanCell, tgt: SpanCell, map: Vec<usize>) -> SpanTwo {
        assert_eq!(src.src, tgt.src, "2-cell endpoints differ");
        assert_eq!(src.tgt, tgt.tgt, "2-cell endpoints differ");
        assert_eq!(map.len(), src.elems.len(), "apex map has wrong length");
        for (i, &j) in map.iter().enumerate() {
            assert!(j < tgt.elems.len(), "apex map image out of range");
            assert_eq!(src.elems[i].l, tgt.elems[j].l, "apex map breaks the left leg");
            assert_eq!(src.elems[i].r, tgt.elems[j].r, "apex map breaks the right leg");
        }
        SpanTwo { src, tgt, map }
    }
}

/// The spans-of-finite-sets instance.
#[derive(Clone, Copy, Debug)]
pub struct Span;

impl Bicat for Span {
    type Z = SpanZero;
    type O = SpanCell;
    type F = SpanTwo;

    fn name(&self) -> &'static str {
        "span"
    }

    fn src0(&self, m: &SpanCell) -> SpanZero {
        m.src.clone()
    }

    fn tgt0(&self, m: &SpanCell) -> SpanZero {
        m.tgt.clone()
    }

    fn unit(&self, r: &SpanZero) -> SpanCell {
        let elems = (0..r.elems).map(|i| SpanElem { atoms: vec![SpanAtom::Unit { r: i }], l: i, r: i }).collect();
        SpanCell { src: r.clone(), tgt: r.clone(), elems }
    }

    fn compose1(&self, m: &SpanCell, n: &SpanCell) -> SpanCell {
        assert_eq!(m.tgt, n.src, "endpoint mismatch in span composition");
        let mut elems = Vec::new();
        for x in &m.elems {
            for y in &n.elems {
                if x.r == y.l {
                    elems.push(SpanElem { atoms: normalize_atoms(&x.atoms, &y.atoms, x.r), l: x.l, r: y.r });
                }
            }
        }
        elems.sort_by(|a, b| a.atoms.cmp(&b.atoms));
        for w in elems.windows(2) {
            assert!(w[0].atoms != w[1].atoms, "apex element collision in composite");
        }
        SpanCell { src: m.src.clone(), tgt: n.tgt.clone(), elems }
    }

    fn two_src(&self, f: &SpanTwo) -> SpanCell {
        f.src.clone()
    }

    fn two_tgt(&self, f: &SpanTwo) -> SpanCell {
        f.tgt.clone()
    }

    fn id2(&self, m: &SpanCell) -> SpanTwo {
        SpanTwo { src: m.clone(), tgt: m.clone(), map: (0..m.elems.len()).collect() }
    }

    fn vcomp(&self, g: &SpanTwo, f: &SpanTwo) -> SpanTwo {
        assert_eq!(g.src, f.tgt, "vertical composition boundary mismatch");
        let map = f.map.iter().map(|&i| g.map[i]).collect();
        SpanTwo { src: f.src.clone(), tgt: g.tgt.clone(), map }
    }

    fn hcomp(&self, f: &SpanTwo, g: &SpanTwo) -> SpanTwo {
        let src = self.compose1(&f.src, &g.src);
        let tgt = self.compose1(&f.tgt, &g.tgt);
        let map = src
            .elems
            .iter()
            .map(|e| {
                let (x, y) = SpanCell::decompose(&f.src, &g.src, e);
                let fx = &f.tgt.elems[f.map[x]];
                let gy = &g.tgt.elems[g.map[y]];
                tgt.index_of(&normalize_atoms(&fx.atoms, &gy.atoms, fx.r))
            })
            .collect();
        SpanTwo { src, tgt, map }
    }

    fn eq2(&self, f: &SpanTwo, g: &SpanTwo) -> bool {
        f.src == g.src && f.tgt == g.tgt && f.map == g.map
    }

    fn shadow_ob(&self, m: &SpanCell) -> ShadowOb {
        assert_eq!(m.src, m.tgt, "shadow requires an endo-span");
        let labels = m
            .elems
            .iter()
            .filter(|e| e.l == e.r)
            .map(|e| format!("{:?}", e.atoms))
            .collect();
        ShadowOb::free(Ring::Z, labels)
    }

    fn shadow_mor(&self, f: &SpanTwo) -> ShadowMor {
        let src = self.shadow_ob(&f.src);
        let tgt = self.shadow_ob(&f.tgt);
        let src_fixed: Vec<usize> =
            (0..f.src.elems.len()).filter(|&i| f.src.elems[i].l == f.src.elems[i].r).collect();
        let tgt_fixed: Vec<usize> =
            (0..f.tgt.elems.len()).filter(|&i| f.tgt.elems[i].l == f.tgt.elems[i].r).collect();
        let mut mat = QMat::zero(tgt.gens, src.gens);
        for (col, &i) in src_fixed.iter().enumerate() {
            let j = f.map[i];
            let row = tgt_fixed.iter().position(|&k| k == j).expect("image of a fixed point is fixed");
            mat.set(row, col, q(1));
        }
        ShadowMor::new(src, tgt, mat)
    }

    fn theta(&self, m: &SpanCell, n: &SpanCell) -> ShadowMor {
        assert_eq!(m.tgt, n.src, "endpoint mismatch");
        assert_eq!(n.tgt, m.src, "theta requires a cyclically composable pair");
        let mn = self.compose1(m, n);
        let nm = self.compose1(n, m);
        let src = self.shadow_ob(&mn);
        let tgt = self.shadow_ob(&nm);
        let src_fixed: Vec<&SpanElem> = mn.elems.iter().filter(|e| e.l == e.r).collect();
        let tgt_fixed: Vec<&SpanElem> = nm.elems.iter().filter(|e| e.l == e.r).collect();
        let mut mat = QMat::zero(tgt.gens, src.gens);
        for (col, e) in src_fixed.iter().enumerate() {
            let (x, y) = SpanCell::decompose(m, n, e);
            let swapped = normalize_atoms(&n.elems[y].atoms, &m.elems[x].atoms, n.elems[y].l);
            let row = tgt_fixed
                .iter()
                .position(|e2| e2.atoms == swapped)
                .expect("swapped fixed point must exist");
            mat.set(row, col, q(1));
        }
        ShadowMor::new(src, tgt, mat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zset(name: &str, n: usize) -> SpanZero {
        SpanZero { name: name.into(), elems: n }
    }

    #[test]
    fn strict_unit_and_assoc() {
        let inst = Span;
        let r = zset("R", 3);
        let s = zset("S", 2);
        let t = zset("T", 3);
        let m = SpanCell::atomic("M", &r, &s, &[(0, 0), (1, 1), (2, 1), (0, 1)]);
        let n = SpanCell::atomic("N", &s, &t, &[(0, 2), (1, 0), (1, 1)]);
        let p = SpanCell::atomic("P", &t, &r, &[(0, 0), (2, 2), (1, 1)]);
        assert_eq!(inst.compose1(&inst.unit(&r), &m), m);
        assert_eq!(inst.compose1(&m, &inst.unit(&s)), m);
        let left = inst.compose1(&inst.compose1(&m, &n), &p);
        let right = inst.compose1(&m, &inst.compose1(&n, &p));
        assert_eq!(left, right);
    }

    #[test]
    fn shadow_of_graph_is_fixed_points() {
        // graph of f: {0,1,2} -> itself with f = (0->0, 1->2, 2->2)
        let inst = Span;
        let r = zset("R", 3);
        let m = SpanCell::atomic("G", &r, &r, &[(0, 0), (1, 2), (2, 2)]);
        assert_eq!(inst.shadow_ob(&m).gens, 2); // fixed points 0 and 2
    }

    #[test]
    fn theta_involutive() {
        let inst = Span;
        let r = zset("R", 2);
        let s = zset("S", 2);
        let m = SpanCell::atomic("M", &r, &s, &[(0, 0), (1, 1), (0, 1)]);
        let n = SpanCell::atomic("N", &s, &r, &[(0, 0), (1, 0), (1, 1)]);
        let t1 = inst.theta(&m, &n);
        let t2 = inst.theta(&n, &m);
        let round = t2.compose(&t1);
        assert!(round.eq(&ShadowMor::identity(&round.src)));
    }

    #[test]
    fn unit_theta_is_identity() {
        let inst = Span;
        let r = zset("R", 2);
        let m = SpanCell::atomic("M", &r, &r, &[(0, 1), (1, 0), (1, 1)]);
        let t = inst.theta(&m, &inst.unit(&r));
        assert!(t.eq(&ShadowMor::identity(&t.src)));
        let t2 = inst.theta(&inst.unit(&r), &m);
        assert!(t2.eq(&ShadowMor::identity(&t2.src)));
    }
}
