//! Layer-by-layer evaluation of cylindrical diagrams in an instance.
//!
//! A [`Valuation`] binds the string labels of a [`Diagram`] to cells of a
//! concrete instance: wire labels to 1-cells, generator names to 2-cells,
//! region labels to 0-cells.  The value of a diagram is the composite of
//! its layer values, top to bottom: an elementary layer contributes the
//! shadow of the horizontal composite of its slots, a rotation layer
//! contributes the cyclicity isomorphism `theta` of the split word.

use crate::bicat::Bicat;
use crate::diagram::{boundaries, codomain_word, CyclicWord, Diagram, DiagramError, Layer, Slot};
use crate::shadow::ShadowMor;
use std::collections::BTreeMap;
use thiserror::Error;

/// Binding of diagram labels to instance cells.
#[derive(Clone, Debug)]
pub struct Valuation<I: Bicat> {
    /// Wire label -> 1-cell.
    pub cells: BTreeMap<String, I::O>,
    /// Generator name -> 2-cell.
    pub gens: BTreeMap<String, I::F>,
    /// Region label -> 0-cell (needed for empty boundary words).
    pub regions: BTreeMap<String, I::Z>,
}

impl<I: Bicat> Valuation<I> {
    pub fn new() -> Self {
        Valuation { cells: BTreeMap::new(), gens: BTreeMap::new(), regions: BTreeMap::new() }
    }
}

impl<I: Bicat> Default for Valuation<I> {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("unbound wire label {0}")]
    UnboundCell(String),
    #[error("unbound generator {0}")]
    UnboundGen(String),
    #[error("unbound region label {0}")]
    UnboundRegion(String),
    #[error("word {0} is not cyclically composable under the valuation")]
    NotComposable(String),
    #[error("generator {0}: bound 2-cell boundary does not match its declared words")]
    GeneratorMismatch(String),
}

fn lookup_cell<'a, I: Bicat>(v: &'a Valuation<I>, label: &str) -> Result<&'a I::O, EvalError> {
    v.cells.get(label).ok_or_else(|| EvalError::UnboundCell(label.to_string()))
}

fn lookup_region<'a, I: Bicat>(v: &'a Valuation<I>, label: &str) -> Result<&'a I::Z, EvalError> {
    v.regions.get(label).ok_or_else(|| EvalError::UnboundRegion(label.to_string()))
}

/// Resolve a cyclic word to 1-cells and its ambient 0-cell, checking
/// cyclic composability of endpoints.
pub fn resolve_word<I: Bicat>(
    inst: &I,
    v: &Valuation<I>,
    w: &CyclicWord,
) -> Result<(I::Z, Vec<I::O>), EvalError> {
    if w.letters.is_empty() {
        return Ok((lookup_region(v, &w.ambient)?.clone(), Vec::new()));
    }
    let cells: Vec<I::O> = w
        .letters
        .iter()
        .map(|l| lookup_cell(v, l).cloned())
        .collect::<Result<_, _>>()?;
    for i in 0..cells.len() {
        let next = &cells[(i + 1) % cells.len()];
        if inst.tgt0(&cells[i]) != inst.src0(next) {
            return Err(EvalError::NotComposable(w.to_string()));
        }
    }
    Ok((inst.src0(&cells[0]), cells))
}

/// Validate a diagram against a valuation: all layer interfaces must
/// match, every label must resolve, every rotation must be in range, and
/// every generator's bound 2-cell must have the declared boundary words.
/// Returns the top and bottom boundary words.
pub fn validate<I: Bicat>(
    inst: &I,
    d: &Diagram,
    v: &Valuation<I>,
) -> Result<(CyclicWord, CyclicWord), EvalError> {
    let (top, bottom) = boundaries(d)?;
    let mut w = d.top.clone();
    for (i, layer) in d.layers.iter().enumerate() {
        resolve_word(inst, v, &w)?;
        if let Layer::Elementary { slots } = layer {
            for s in slots {
                if let Slot::Box(g) = s {
                    let f = v.gens.get(&g.name).ok_or_else(|| EvalError::UnboundGen(g.name.clone()))?;
                    let ambient = region_of_first_letter(inst, v, &w)?;
                    let dom_cells: Vec<I::O> = g
                        .dom
                        .iter()
                        .map(|l| lookup_cell(v, l).cloned())
                        .collect::<Result<_, _>>()?;
                    let cod_cells: Vec<I::O> = g
                        .cod
                        .iter()
                        .map(|l| lookup_cell(v, l).cloned())
                        .collect::<Result<_, _>>()?;
                    // A box with empty dom and cod would have no anchor for
                    // its 0-cell; use the ambient region in that case.
                    let dom_fold = fold_or_unit(inst, &dom_cells, &cod_cells, &ambient)?;
                    let cod_fold = fold_or_unit(inst, &cod_cells, &dom_cells, &ambient)?;
                    if inst.two_src(f) != dom_fold || inst.two_tgt(f) != cod_fold {
                        return Err(EvalError::GeneratorMismatch(g.name.clone()));
                    }
                }
            }
        }
        w = codomain_word(layer, &w, i)?;
    }
    resolve_word(inst, v, &w)?;
    Ok((top, bottom))
}

fn region_of_first_letter<I: Bicat>(
    inst: &I,
    v: &Valuation<I>,
    w: &CyclicWord,
) -> Result<I::Z, EvalError> {
    Ok(resolve_word(inst, v, w)?.0)
}

fn fold_or_unit<I: Bicat>(
    inst: &I,
    word: &[I::O],
    other: &[I::O],
    ambient: &I::Z,
) -> Result<I::O, EvalError> {
    if word.is_empty() {
        // Anchor the unit at the source of the other word, or the ambient
        // region when both are empty.
        let at = other.first().map(|c| inst.src0(c)).unwrap_or_else(|| ambient.clone());
        Ok(inst.unit(&at))
    } else {
        Ok(inst.fold_word(&inst.src0(&word[0]), word))
    }
}

/// The rotation isomorphism of a word at shift `k`:
/// `<M_1 ... M_n> -> <M_{k+1} ... M_k>`.
pub fn theta_power<I: Bicat>(
    inst: &I,
    v: &Valuation<I>,
    w: &CyclicWord,
    k: usize,
) -> Result<ShadowMor, EvalError> {
    let (ambient, cells) = resolve_word(inst, v, w)?;
    let n = cells.len();
    if !(k <= n) || (n == 0 && k != 0) {
        return Err(EvalError::Diagram(DiagramError::RotationOutOfRange { layer: 0, k, n }));
    }
    Ok(inst.theta_split(&ambient, &cells, k))
}

/// The value of one elementary layer: the shadow of the horizontal
/// composite of slot 2-cells, wires contributing identities.
pub fn value_elementary<I: Bicat>(
    inst: &I,
    v: &Valuation<I>,
    w: &CyclicWord,
    slots: &[Slot],
) -> Result<ShadowMor, EvalError> {
    let (ambient, _) = resolve_word(inst, v, w)?;
    let mut parts: Vec<I::F> = Vec::new();
    for s in slots {
        match s {
            Slot::Wire(l) => parts.push(inst.id2(lookup_cell(v, l)?)),
            Slot::Box(g) => {
                let f = v.gens.get(&g.name).ok_or_else(|| EvalError::UnboundGen(g.name.clone()))?;
                parts.push(f.clone());
            }
        }
    }
    let composite = inst.fold_hcomp(&ambient, &parts);
    Ok(inst.shadow_mor(&composite))
}

/// The value of a diagram: the composite of its layer values top to
/// bottom, a morphism `<top> -> <bottom>`.
pub fn value<I: Bicat>(inst: &I, d: &Diagram, v: &Valuation<I>) -> Result<ShadowMor, EvalError> {
    validate(inst, d, v)?;
    let mut w = d.top.clone();
    let (ambient, cells) = resolve_word(inst, v, &w)?;
    let mut acc = ShadowMor::identity(&inst.shadow_ob(&inst.fold_word(&ambient, &cells)));
    for (i, layer) in d.layers.iter().enumerate() {
        let step = match layer {
            Layer::Rotation { k } => theta_power(inst, v, &w, *k)?,
            Layer::Elementary { slots } => value_elementary(inst, v, &w, slots)?,
        };
        acc = step.compose(&acc);
        w = codomain_word(layer, &w, i)?;
    }
    Ok(acc)
}
