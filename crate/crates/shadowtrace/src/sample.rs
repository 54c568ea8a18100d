//! Seeded random generation of cells, 2-cells, and diagrams.
//!
//! Every law checker and the acceptance suite draws its test data from the
//! samplers here, always through an explicitly seeded [`ChaCha8Rng`], so
//! that failures are reproducible from the reported seed alone.

use crate::bicat::Bicat;
use crate::diagram::{CyclicWord, Diagram, Generator, Layer, Move, Slot};
use crate::eval::Valuation;
use crate::group::{Endo, Group, GroupRef};
use crate::groupring::GrMat;
use crate::instances::grbimod::{GrBimod, GrCell, GrTwo, GrZero};
use crate::instances::matmod::{MatCell, MatMod, MatTwo, MatZero};
use crate::instances::span::{Span, SpanCell, SpanTwo, SpanZero};
use crate::linalg::{QMat, Scalar};
use crate::shadow::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The project-wide seeded generator.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random scalar: an integer in `[-bound, bound]` over `Z`, a fraction
/// with the same numerator range and denominator in `1..=3` over `Q`.
pub fn rand_scalar<R: Rng>(rng: &mut R, ring: Ring, bound: i64) -> Scalar {
    let num = rng.gen_range(-bound..=bound);
    let den = match ring {
        Ring::Z => 1,
        Ring::Q => rng.gen_range(1..=3),
    };
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rand_qmat<R: Rng>(rng: &mut R, ring: Ring, rows: usize, cols: usize, bound: i64) -> QMat {
    let mut m = QMat::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rand_scalar(rng, ring, bound));
        }
    }
    m
}

/// A uniformly random permutation of `0..n`.
pub fn rand_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

// ---------------------------------------------------------------------------
// Matrices of modules
// ---------------------------------------------------------------------------

/// Sampler for the matrices-of-modules instance.  Carries a counter so that
/// every atomic cell gets a globally fresh name.
pub struct MatSampler {
    pub inst: MatMod,
    pub max_set: usize,
    pub max_rank: usize,
    pub bound: i64,
    counter: usize,
}

impl MatSampler {
    pub fn new(ring: Ring) -> MatSampler {
        MatSampler { inst: MatMod::new(ring), max_set: 3, max_rank: 3, bound: 4, counter: 0 }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{}{}", prefix, self.counter)
    }

    pub fn set<R: Rng>(&mut self, rng: &mut R) -> MatZero {
        let name = self.fresh("X");
        MatZero { name, elems: rng.gen_range(1..=self.max_set) }
    }

    /// A random atomic 1-cell; every entry rank is in `0..=max_rank` but at
    /// least one entry is nonzero.
    pub fn cell<R: Rng>(&mut self, rng: &mut R, src: &MatZero, tgt: &MatZero) -> MatCell {
        let name = self.fresh("M");
        loop {
            let ranks: Vec<Vec<usize>> = (0..src.elems)
                .map(|_| (0..tgt.elems).map(|_| rng.gen_range(0..=self.max_rank)).collect())
                .collect();
            if ranks.iter().flatten().any(|&k| k > 0) {
                return MatCell::atomic(&name, src, tgt, &ranks);
            }
        }
    }

    /// A random 2-cell between two parallel 1-cells.
    pub fn two<R: Rng>(&self, rng: &mut R, src: &MatCell, tgt: &MatCell) -> MatTwo {
        let mats = (0..src.src.elems)
            .map(|r| {
                (0..src.tgt.elems)
                    .map(|s| rand_qmat(rng, self.inst.ring, tgt.rank(r, s), src.rank(r, s), self.bound))
                    .collect()
            })
            .collect();
        MatTwo::new(src.clone(), tgt.clone(), mats)
    }

    /// An invertible 2-cell `M -> M` (entrywise unimodular over `Z`): a
    /// product of elementary row operations applied to identities.
    pub fn invertible_endo<R: Rng>(&self, rng: &mut R, m: &MatCell) -> MatTwo {
        let mats = (0..m.src.elems)
            .map(|r| {
                (0..m.tgt.elems)
                    .map(|s| {
                        let n = m.rank(r, s);
                        let mut a = QMat::identity(n);
                        if n > 1 {
                            for _ in 0..(2 * n) {
                                let i = rng.gen_range(0..n);
                                let mut j = rng.gen_range(0..n);
                                while j == i {
                                    j = rng.gen_range(0..n);
                                }
                                let c = rand_scalar(rng, Ring::Z, 2);
                                for k in 0..n {
                                    let x = a.get(i, k).clone() + c.clone() * a.get(j, k);
                                    a.set(i, k, x);
                                }
                            }
                        }
                        a
                    })
                    .collect()
            })
            .collect();
        MatTwo::new(m.clone(), m.clone(), mats)
    }
}

// ---------------------------------------------------------------------------
// Spans
// ---------------------------------------------------------------------------

pub struct SpanSampler {
    pub max_set: usize,
    pub max_apex: usize,
    counter: usize,
}

impl SpanSampler {
    pub fn new() -> SpanSampler {
        SpanSampler { max_set: 4, max_apex: 6, counter: 0 }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{}{}", prefix, self.counter)
    }

    pub fn set<R: Rng>(&mut self, rng: &mut R) -> SpanZero {
        let name = self.fresh("X");
        SpanZero { name, elems: rng.gen_range(1..=self.max_set) }
    }

    /// A random span with apex size in `0..=max_apex`.
    pub fn span<R: Rng>(&mut self, rng: &mut R, src: &SpanZero, tgt: &SpanZero) -> SpanCell {
        let name = self.fresh("A");
        let k = rng.gen_range(0..=self.max_apex);
        let legs: Vec<(usize, usize)> =
            (0..k).map(|_| (rng.gen_range(0..src.elems), rng.gen_range(0..tgt.elems))).collect();
        SpanCell::atomic(&name, src, tgt, &legs)
    }

    /// A random right-dualizable span: the left leg is a bijection.
    pub fn dualizable<R: Rng>(&mut self, rng: &mut R, src: &SpanZero, tgt: &SpanZero) -> SpanCell {
        let name = self.fresh("D");
        let perm = rand_perm(rng, src.elems);
        let legs: Vec<(usize, usize)> =
            perm.into_iter().map(|l| (l, rng.gen_range(0..tgt.elems))).collect();
        SpanCell::atomic(&name, src, tgt, &legs)
    }

    /// The "full" span on `(src, tgt)`: one apex element per pair of leg
    /// images.  Every parallel span admits a 2-cell into it.
    pub fn full(&mut self, src: &SpanZero, tgt: &SpanZero) -> SpanCell {
        let name = self.fresh("F");
        let legs: Vec<(usize, usize)> =
            (0..src.elems).flat_map(|l| (0..tgt.elems).map(move |r| (l, r))).collect();
        SpanCell::atomic(&name, src, tgt, &legs)
    }

    /// A random 2-cell between parallel spans, sending each apex element to
    /// a uniformly random element with the same leg images.  Panics if some
    /// fiber of the target is empty while the source's is not.
    pub fn two<R: Rng>(&self, rng: &mut R, src: &SpanCell, tgt: &SpanCell) -> SpanTwo {
        let map = src
            .elems
            .iter()
            .map(|e| {
                let choices: Vec<usize> = (0..tgt.elems.len())
                    .filter(|&j| tgt.elems[j].l == e.l && tgt.elems[j].r == e.r)
                    .collect();
                *choices.choose(rng).expect("target span misses a fiber of the source")
            })
            .collect();
        SpanTwo::new(src.clone(), tgt.clone(), map)
    }
}

impl Default for SpanSampler {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// Group-ring bimodules
// ---------------------------------------------------------------------------

pub struct GrSampler {
    pub inst: GrBimod,
    pub max_rank: usize,
    pub bound: i64,
}

impl GrSampler {
    pub fn new(ring: Ring) -> GrSampler {
        GrSampler { inst: GrBimod::new(ring), max_rank: 2, bound: 2 }
    }

    /// One of the stock groups used in tests.
    pub fn group<R: Rng>(&self, rng: &mut R) -> GroupRef {
        let names = ["z2", "z3", "s3"];
        Group::builtin(names.choose(rng).unwrap()).unwrap()
    }

    pub fn zero<R: Rng>(&self, rng: &mut R) -> GrZero {
        GrZero { group: self.group(rng), ring: self.inst.preferred_ring }
    }

    /// A random matrix over the group ring with small support.
    pub fn grmat<R: Rng>(&self, rng: &mut R, group: &GroupRef, ring: Ring, rows: usize, cols: usize) -> GrMat {
        let mut m = GrMat::zero(group.clone(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                // at most two group-ring terms per entry
                for _ in 0..rng.gen_range(0..=2) {
                    let h = rng.gen_range(0..group.n);
                    let c = rand_scalar(rng, ring, self.bound);
                    let cur = m.comps[h].get(i, j).clone();
                    m.comps[h].set(i, j, cur + c);
                }
            }
        }
        m
    }

    /// An invertible matrix over the group ring together with its inverse:
    /// a monomial diagonal (signed group elements) followed by a few
    /// elementary transvections `E_ij(c * h)`.
    pub fn invertible<R: Rng>(
        &self,
        rng: &mut R,
        group: &GroupRef,
        ring: Ring,
        n: usize,
    ) -> (GrMat, GrMat) {
        let mut s = GrMat::zero(group.clone(), n, n);
        let mut s_inv = GrMat::zero(group.clone(), n, n);
        for i in 0..n {
            let h = rng.gen_range(0..group.n);
            let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            s.comps[h].set(i, i, crate::linalg::q(sign));
            s_inv.comps[group.inv[h]].set(i, i, crate::linalg::q(sign));
        }
        if n > 1 {
            for _ in 0..(2 * n) {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let h = rng.gen_range(0..group.n);
                let c = rand_scalar(rng, ring, 1);
                let mut e = GrMat::identity(group.clone(), n);
                let cur = e.comps[h].get(i, j).clone();
                e.comps[h].set(i, j, cur + c.clone());
                let mut e_inv = GrMat::identity(group.clone(), n);
                let cur = e_inv.comps[h].get(i, j).clone();
                e_inv.comps[h].set(i, j, cur - c);
                s = e.mul(&s);
                s_inv = s_inv.mul(&e_inv);
            }
        }
        debug_assert!(s.mul(&s_inv).is_identity());
        (s, s_inv)
    }

    /// A random 1-cell `(G, K) -|-> (H, K')`: a conjugated direct sum of
    /// signed monomial characters.  Each diagonal slot picks a group
    /// homomorphism `G -> H` and an independent sign character, so the
    /// action is `lambda(g) = S . diag(sign_i(g) [phi_i(g)]) . S^{-1}`.
    pub fn cell<R: Rng>(&self, rng: &mut R, src: &GrZero, tgt: &GrZero) -> GrCell {
        let rank = rng.gen_range(1..=self.max_rank);
        self.cell_of_rank(rng, src, tgt, rank)
    }

    pub fn cell_of_rank<R: Rng>(&self, rng: &mut R, src: &GrZero, tgt: &GrZero, rank: usize) -> GrCell {
        let g = &src.group;
        let h = &tgt.group;
        let homs = Endo::all_homs(g, h);
        let z2 = Group::cyclic(2);
        let signs = Endo::all_homs(g, &z2);
        let slots: Vec<(&Vec<usize>, &Vec<usize>)> = (0..rank)
            .map(|_| (homs.choose(rng).unwrap(), signs.choose(rng).unwrap()))
            .collect();
        let (s, s_inv) = self.invertible(rng, h, tgt.ring, rank);
        let lambda = (0..g.n)
            .map(|x| {
                let mut d = GrMat::zero(h.clone(), rank, rank);
                for (i, (phi, sg)) in slots.iter().enumerate() {
                    let sign: i64 = if sg[x] == 0 { 1 } else { -1 };
                    d.comps[phi[x]].set(i, i, crate::linalg::q(sign));
                }
                s.mul(&d).mul(&s_inv)
            })
            .collect();
        GrCell::new(src.clone(), tgt.clone(), rank, lambda)
    }

    /// A random equivariant 2-cell between parallel 1-cells, built by
    /// symmetrizing an arbitrary matrix: `sum_g lambda_tgt(g) C lambda_src(g)^{-1}`.
    pub fn two<R: Rng>(&self, rng: &mut R, src: &GrCell, tgt: &GrCell) -> GrTwo {
        let g = &src.src.group;
        let c = self.grmat(rng, &src.tgt.group, src.tgt.ring, tgt.rank, src.rank);
        let mut sum = GrMat::zero(src.tgt.group.clone(), tgt.rank, src.rank);
        for x in 0..g.n {
            let xi = g.inv[x];
            sum = sum.add(&tgt.lambda[x].mul(&c).mul(&src.lambda[xi]));
        }
        GrTwo::new(src.clone(), tgt.clone(), sum)
    }
}

// ---------------------------------------------------------------------------
// Random diagrams
// ---------------------------------------------------------------------------

/// Instance-specific hooks needed to grow random diagrams: a base 0-cell,
/// a pool of endo-1-cells on it, and 2-cells between word composites.
pub trait DiagramCells<I: Bicat> {
    fn base<R: Rng>(&mut self, rng: &mut R) -> I::Z;
    fn pool<R: Rng>(&mut self, rng: &mut R, z: &I::Z, k: usize) -> Vec<I::O>;
    /// A 2-cell between the folds of two words over the pool; `cod` is
    /// chosen by [`DiagramCells::cod_word`] so this is always possible.
    fn two_between<R: Rng>(&mut self, rng: &mut R, inst: &I, src: &I::O, tgt: &I::O) -> I::F;
    /// Pick a codomain word (indices into the pool) for a box whose domain
    /// is the given word.
    fn cod_word<R: Rng>(&mut self, rng: &mut R, pool_len: usize, dom: &[usize]) -> Vec<usize>;
}

pub struct MatDiagramCells(pub MatSampler);

impl DiagramCells<MatMod> for MatDiagramCells {
    fn base<R: Rng>(&mut self, rng: &mut R) -> MatZero {
        self.0.set(rng)
    }

    fn pool<R: Rng>(&mut self, rng: &mut R, z: &MatZero, k: usize) -> Vec<MatCell> {
        (0..k).map(|_| self.0.cell(rng, z, z)).collect()
    }

    fn two_between<R: Rng>(&mut self, rng: &mut R, _inst: &MatMod, src: &MatCell, tgt: &MatCell) -> MatTwo {
        self.0.two(rng, src, tgt)
    }

    fn cod_word<R: Rng>(&mut self, rng: &mut R, pool_len: usize, _dom: &[usize]) -> Vec<usize> {
        (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..pool_len)).collect()
    }
}

pub struct SpanDiagramCells(pub SpanSampler);

impl DiagramCells<Span> for SpanDiagramCells {
    fn base<R: Rng>(&mut self, rng: &mut R) -> SpanZero {
        self.0.set(rng)
    }

    /// Pool slot 0 is the full span, so any box can take it as codomain.
    fn pool<R: Rng>(&mut self, rng: &mut R, z: &SpanZero, k: usize) -> Vec<SpanCell> {
        let mut cells = vec![self.0.full(z, z)];
        for _ in 1..k {
            cells.push(self.0.span(rng, z, z));
        }
        cells
    }

    fn two_between<R: Rng>(&mut self, rng: &mut R, _inst: &Span, src: &SpanCell, tgt: &SpanCell) -> SpanTwo {
        self.0.two(rng, src, tgt)
    }

    fn cod_word<R: Rng>(&mut self, _rng: &mut R, _pool_len: usize, _dom: &[usize]) -> Vec<usize> {
        vec![0]
    }
}

pub struct GrDiagramCells(pub GrSampler);

impl DiagramCells<GrBimod> for GrDiagramCells {
    fn base<R: Rng>(&mut self, rng: &mut R) -> GrZero {
        self.0.zero(rng)
    }

    fn pool<R: Rng>(&mut self, rng: &mut R, z: &GrZero, k: usize) -> Vec<GrCell> {
        (0..k).map(|_| self.0.cell(rng, z, z)).collect()
    }

    fn two_between<R: Rng>(&mut self, rng: &mut R, _inst: &GrBimod, src: &GrCell, tgt: &GrCell) -> GrTwo {
        self.0.two(rng, src, tgt)
    }

    fn cod_word<R: Rng>(&mut self, rng: &mut R, pool_len: usize, _dom: &[usize]) -> Vec<usize> {
        (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..pool_len)).collect()
    }
}

/// A random diagram together with a valuation that binds it, over a pool of
/// endo-1-cells on a single random 0-cell.
pub fn random_diagram<I: Bicat, C: DiagramCells<I>, R: Rng>(
    inst: &I,
    cells: &mut C,
    rng: &mut R,
    layers: usize,
) -> (Diagram, Valuation<I>) {
    let z = cells.base(rng);
    let pool_len = rng.gen_range(2..=3);
    let pool = cells.pool(rng, &z, pool_len);
    let mut v: Valuation<I> = Valuation::new();
    v.regions.insert("o".into(), z.clone());
    let names: Vec<String> = (0..pool_len).map(|i| format!("c{i}")).collect();
    for (name, c) in names.iter().zip(pool.iter()) {
        v.cells.insert(name.clone(), c.clone());
    }
    let top_len = rng.gen_range(0..=3);
    let top_idx: Vec<usize> = (0..top_len).map(|_| rng.gen_range(0..pool_len)).collect();
    let top = CyclicWord {
        letters: top_idx.iter().map(|&i| names[i].clone()).collect(),
        ambient: "o".into(),
    };
    let mut word = top_idx;
    let mut out_layers = Vec::new();
    let mut gen_counter = 0usize;
    for _ in 0..layers {
        let n = word.len();
        if n > 0 && rng.gen_bool(0.3) {
            out_layers.push(Layer::Rotation { k: rng.gen_range(0..n) });
            let k = match out_layers.last().unwrap() {
                Layer::Rotation { k } => *k,
                _ => unreachable!(),
            };
            word.rotate_left(k);
            continue;
        }
        // Build an elementary layer: walk the word, grouping letters into
        // wires and boxes.
        let mut slots = Vec::new();
        let mut next_word = Vec::new();
        let mut i = 0;
        let mut boxed = false;
        while i < n {
            if rng.gen_bool(0.5) {
                slots.push(Slot::Wire(names[word[i]].clone()));
                next_word.push(word[i]);
                i += 1;
            } else {
                let take = rng.gen_range(1..=(n - i).min(2));
                let dom: Vec<usize> = word[i..i + take].to_vec();
                let cod = cells.cod_word(rng, pool_len, &dom);
                push_box(
                    inst, cells, rng, &mut v, &names, &z, &dom, &cod, &mut gen_counter, &mut slots,
                );
                next_word.extend(cod.iter().cloned());
                boxed = true;
                i += take;
            }
        }
        if n == 0 && rng.gen_bool(0.5) {
            // A floating box on the empty word.
            let cod = cells.cod_word(rng, pool_len, &[]);
            push_box(inst, cells, rng, &mut v, &names, &z, &[], &cod, &mut gen_counter, &mut slots);
            next_word.extend(cod.iter().cloned());
            boxed = true;
        }
        let _ = boxed;
        out_layers.push(Layer::Elementary { slots });
        word = next_word;
    }
    (Diagram { top, layers: out_layers }, v)
}

#[allow(clippy::too_many_arguments)]
fn push_box<I: Bicat, C: DiagramCells<I>, R: Rng>(
    inst: &I,
    cells: &mut C,
    rng: &mut R,
    v: &mut Valuation<I>,
    names: &[String],
    z: &I::Z,
    dom: &[usize],
    cod: &[usize],
    gen_counter: &mut usize,
    slots: &mut Vec<Slot>,
) {
    let fold = |idx: &[usize]| -> I::O {
        if idx.is_empty() {
            inst.unit(z)
        } else {
            let ws: Vec<I::O> = idx.iter().map(|&i| v.cells[&names[i]].clone()).collect();
            inst.fold_word(z, &ws)
        }
    };
    let src_cell = fold(dom);
    let tgt_cell = fold(cod);
    let f = cells.two_between(rng, inst, &src_cell, &tgt_cell);
    *gen_counter += 1;
    let gname = format!("g{gen_counter}");
    v.gens.insert(gname.clone(), f);
    slots.push(Slot::Box(Generator {
        name: gname,
        dom: dom.iter().map(|&i| names[i].clone()).collect(),
        cod: cod.iter().map(|&i| names[i].clone()).collect(),
    }));
}

/// A random bounded complex of free modules over a group ring with a
/// `psi`-twisted self-map.
///
/// The complex is assembled from blocks in a standard basis — spheres
/// (a single slot with zero differential and an arbitrary diagonal map
/// entry) and disks (two slots in adjacent degrees joined by a signed
/// monomial differential `u`, with map entries `beta` above and
/// `psi(u) . beta . u^{-1}` below) — and then conjugated degreewise by
/// random invertible matrices, which preserves the twisted chain-map
/// condition but destroys the block structure.
pub fn twisted_complex<R: Rng>(
    rng: &mut R,
    group: GroupRef,
    ring: Ring,
    psi: Endo,
    max_deg: usize,
    max_rank: usize,
) -> crate::traces::TwistedComplex {
    let s = GrSampler::new(ring);
    let top = rng.gen_range(1..=max_deg + 1);
    // blocks: disks[i] joins degree i+1 to degree i; spheres[i] sits in
    // degree i alone.
    let mut disks = vec![0usize; top.saturating_sub(1)];
    let mut spheres = vec![0usize; top];
    for d in disks.iter_mut() {
        *d = rng.gen_range(0..=1);
    }
    for sp in spheres.iter_mut() {
        *sp = rng.gen_range(0..=1);
    }
    let rank_of = |i: usize, disks: &[usize], spheres: &[usize]| {
        spheres[i]
            + if i < top - 1 { disks[i] } else { 0 }
            + if i > 0 { disks[i - 1] } else { 0 }
    };
    for i in 0..top {
        while rank_of(i, &disks, &spheres) == 0 {
            spheres[i] += 1;
        }
        while rank_of(i, &disks, &spheres) > max_rank {
            if spheres[i] > 0 {
                spheres[i] -= 1;
            } else if i < top - 1 && disks[i] > 0 {
                disks[i] -= 1;
            } else {
                disks[i - 1] -= 1;
            }
        }
        while rank_of(i, &disks, &spheres) == 0 {
            spheres[i] += 1;
        }
    }
    let ranks: Vec<usize> = (0..top).map(|i| rank_of(i, &disks, &spheres)).collect();
    // basis layout in degree i: disk sources going down (disks[i-1]),
    // then disk targets coming from above (disks[i]), then spheres.
    let src_base = |_i: usize| 0usize;
    let tgt_base = |i: usize| if i > 0 { disks[i - 1] } else { 0 };
    let sph_base = |i: usize| tgt_base(i) + if i < top - 1 { disks[i] } else { 0 };
    let mut d: Vec<GrMat> = (0..top - 1)
        .map(|i| GrMat::zero(group.clone(), ranks[i], ranks[i + 1]))
        .collect();
    let mut f: Vec<GrMat> = (0..top)
        .map(|i| GrMat::zero(group.clone(), ranks[i], ranks[i]))
        .collect();
    let monomial_unit = |rng: &mut R| {
        let h = rng.gen_range(0..group.n);
        let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        (h, sign)
    };
    for i in 0..top {
        for k in 0..spheres[i] {
            let a = s.grmat(rng, &group, ring, 1, 1);
            let slot = sph_base(i) + k;
            f[i].set_entry(slot, slot, &a);
        }
    }
    for i in 0..top - 1 {
        for p in 0..disks[i] {
            let (h, sign) = monomial_unit(rng);
            let row = tgt_base(i) + p; // target slot in degree i
            let col = src_base(i + 1) + p; // source slot in degree i+1
            d[i].comps[h].set(row, col, crate::linalg::q(sign));
            let beta = s.grmat(rng, &group, ring, 1, 1);
            f[i + 1].set_entry(col, col, &beta);
            // psi(u) . beta . u^{-1} with u = sign [h]
            let mut below = GrMat::zero(group.clone(), 1, 1);
            for (g, comp) in beta.comps.iter().enumerate() {
                let gp = group.mul[psi.image[h]][group.mul[g][group.inv[h]]];
                let cur = below.comps[gp].get(0, 0).clone();
                below.comps[gp].set(0, 0, cur + comp.get(0, 0));
            }
            f[i].set_entry(row, row, &below);
        }
    }
    // Degreewise change of basis: d'_i = T_i d_i T_{i+1}^{-1},
    // f'_i = psi(T_i) f_i T_i^{-1}.
    let ts: Vec<(GrMat, GrMat)> =
        ranks.iter().map(|&n| s.invertible(rng, &group, ring, n)).collect();
    for i in 0..top - 1 {
        d[i] = ts[i].0.mul(&d[i]).mul(&ts[i + 1].1);
    }
    for i in 0..top {
        f[i] = ts[i].0.map_group(&psi).mul(&f[i]).mul(&ts[i].1);
    }
    crate::traces::TwistedComplex::new(group, ring, psi, ranks, d, f)
        .expect("sampled complex satisfies the twisted chain conditions by construction")
}

/// Enumerate moves applicable to a diagram and pick one at random;
/// `None` when no move applies.
pub fn random_move<R: Rng>(d: &Diagram, rng: &mut R) -> Option<Move> {
    let mut candidates: Vec<Move> = Vec::new();
    for (i, layer) in d.layers.iter().enumerate() {
        match layer {
            Layer::Rotation { k } => {
                if *k == 0 {
                    candidates.push(Move::DropZeroRotation { pos: i });
                }
                if matches!(d.layers.get(i + 1), Some(Layer::Rotation { .. })) {
                    candidates.push(Move::FuseRotations { pos: i });
                }
            }
            Layer::Elementary { slots } => {
                if slots.iter().all(|s| matches!(s, Slot::Wire(_))) {
                    candidates.push(Move::DropBoxFreeElementary { pos: i });
                }
                let boxes: Vec<usize> = (0..slots.len())
                    .filter(|&j| matches!(slots[j], Slot::Box(_)))
                    .collect();
                if boxes.len() >= 2 {
                    // keep a random nonempty proper subset in the upper layer
                    let cut = rng.gen_range(1..boxes.len());
                    let mut picked = boxes.clone();
                    picked.shuffle(rng);
                    picked.truncate(cut);
                    candidates.push(Move::SplitElementary { pos: i, first: picked });
                }
                if !slots.is_empty() {
                    candidates.push(Move::ConjugateByRotation {
                        pos: i,
                        j: rng.gen_range(0..=slots.len()),
                    });
                }
                if matches!(d.layers.get(i + 1), Some(Layer::Elementary { .. }))
                    && crate::diagram::apply_move(d, &Move::MergeElementary { pos: i }).is_ok()
                {
                    candidates.push(Move::MergeElementary { pos: i });
                }
            }
        }
    }
    candidates.choose(rng).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{validate, value};

    #[test]
    fn matmod_sampler_produces_valid_two_cells() {
        let mut r = rng(7);
        let mut s = MatSampler::new(Ring::Z);
        for _ in 0..20 {
            let a = s.set(&mut r);
            let b = s.set(&mut r);
            let m = s.cell(&mut r, &a, &b);
            let n = s.cell(&mut r, &a, &b);
            let f = s.two(&mut r, &m, &n);
            assert_eq!(f.src, m);
            assert_eq!(f.tgt, n);
        }
    }

    #[test]
    fn span_sampler_two_preserves_legs() {
        let mut r = rng(11);
        let mut s = SpanSampler::new();
        for _ in 0..20 {
            let a = s.set(&mut r);
            let b = s.set(&mut r);
            let m = s.span(&mut r, &a, &b);
            let full = s.full(&a, &b);
            let f = s.two(&mut r, &m, &full);
            for (i, &j) in f.map.iter().enumerate() {
                assert_eq!(m.elems[i].l, full.elems[j].l);
                assert_eq!(m.elems[i].r, full.elems[j].r);
            }
        }
    }

    #[test]
    fn grbimod_sampler_cells_and_twos_are_valid() {
        let mut r = rng(13);
        let s = GrSampler::new(Ring::Z);
        for _ in 0..10 {
            let a = s.zero(&mut r);
            let b = s.zero(&mut r);
            let m = s.cell(&mut r, &a, &b);
            let n = s.cell_of_rank(&mut r, &a, &b, m.rank);
            let f = s.two(&mut r, &m, &n);
            assert!(f.is_equivariant());
        }
    }

    #[test]
    fn random_diagrams_validate_and_evaluate() {
        let mut r = rng(17);
        let inst = MatMod::new(Ring::Z);
        let mut cells = MatDiagramCells(MatSampler::new(Ring::Z));
        for _ in 0..10 {
            let (d, v) = random_diagram(&inst, &mut cells, &mut r, 3);
            validate(&inst, &d, &v).expect("sampled diagram must validate");
            value(&inst, &d, &v).expect("sampled diagram must evaluate");
        }
    }

    #[test]
    fn sampled_complexes_link_twisted_and_plain_invariants() {
        use crate::traces::{augment_classes, lefschetz, reidemeister};
        let mut r = rng(99);
        for _ in 0..30 {
            let s = GrSampler::new(Ring::Z);
            let g = s.group(&mut r);
            let endos = Endo::all(&g);
            let psi = endos[r.gen_range(0..endos.len())].clone();
            let c = twisted_complex(&mut r, g, Ring::Z, psi, 3, 3);
            let plain = c.augment();
            plain.validate().expect("augmented complex must be a chain map");
            assert_eq!(augment_classes(&reidemeister(&c)), lefschetz(&plain));
        }
        // over the trivial group the twisted invariant is the plain one
        for _ in 0..10 {
            let g = Group::trivial();
            let psi = Endo::identity(g.clone());
            let c = twisted_complex(&mut r, g, Ring::Q, psi, 3, 3);
            let rd = reidemeister(&c);
            assert_eq!(rd.len(), 1);
            assert_eq!(rd[0], lefschetz(&c.augment()));
        }
    }
}
