//! Line-oriented text format for declaring diagrams, valuations, spans,
//! groups, group-ring matrices, and chain complexes.
//!
//! The grammar is documented in `docs/FORMAT.md`.  A [`Workspace`] is the
//! parsed form of one or more such files; serializing a workspace and
//! re-parsing it yields an equal workspace.

use crate::diagram::{CyclicWord, Diagram, Generator, Layer, Slot};
use crate::eval::Valuation;
use crate::group::{Endo, Group, GroupRef};
use crate::groupring::GrMat;
use crate::instances::grbimod::{GrCell, GrZero};
use crate::instances::matmod::{MatCell, MatMod, MatTwo, MatZero};
use crate::instances::span::{SpanCell, SpanZero};
use crate::linalg::{QMat, Scalar};
use crate::shadow::Ring;
use crate::traces::{PlainComplex, TwistedComplex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{file}:{line}: {msg}")]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub msg: String,
}

/// A declared 1-cell of the matrices-of-modules instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsCell {
    pub src: String,
    pub tgt: String,
    pub ranks: Vec<Vec<usize>>,
}

/// A declared generator (2-cell box) with its matrix.  `region` anchors
/// empty boundary words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsGen {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub region: Option<String>,
    pub mat: QMat,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsSpan {
    pub src: String,
    pub tgt: String,
    pub legs: Vec<(usize, usize)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsEndo {
    pub group: String,
    pub image: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsGrMat {
    pub group: String,
    pub ring: Ring,
    pub mat: GrMat,
}

/// A group-ring 1-cell `(G, K) -|-> (H, K)`; `lambda` is indexed by the
/// elements of `G` in table order and its matrices live over `K[H]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsGrCell {
    pub src_group: String,
    pub tgt_group: String,
    pub ring: Ring,
    pub rank: usize,
    pub lambda: Vec<GrMat>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsComplex {
    pub group: String,
    pub psi: String,
    pub ring: Ring,
    pub ranks: Vec<usize>,
    pub d: Vec<GrMat>,
    pub f: Vec<GrMat>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WsPlain {
    pub ring: Ring,
    pub ranks: Vec<usize>,
    pub d: Vec<QMat>,
    pub f: Vec<QMat>,
}

/// The parsed contents of one or more corpus files.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Workspace {
    pub sets: BTreeMap<String, usize>,
    pub cells: BTreeMap<String, WsCell>,
    pub gens: BTreeMap<String, WsGen>,
    pub diagrams: BTreeMap<String, Diagram>,
    pub spans: BTreeMap<String, WsSpan>,
    pub groups: BTreeMap<String, GroupRef>,
    pub endos: BTreeMap<String, WsEndo>,
    pub grmats: BTreeMap<String, WsGrMat>,
    pub grcells: BTreeMap<String, WsGrCell>,
    pub complexes: BTreeMap<String, WsComplex>,
    pub plains: BTreeMap<String, WsPlain>,
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    match s {
        "Z" => Ok(Ring::Z),
        "Q" => Ok(Ring::Q),
        _ => Err(format!("unknown ring {s} (expected Z or Q)")),
    }
}

fn ring_name(r: Ring) -> &'static str {
    match r {
        Ring::Z => "Z",
        Ring::Q => "Q",
    }
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad number {s}"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad number {s}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s}"));
    }
    Ok(BigRational::new(n, d))
}

fn scalar_string(x: &Scalar) -> String {
    x.to_string()
}

/// Parse one group-ring entry: `0` or terms `c*name` joined by `+`.
fn parse_gr_entry(s: &str, group: &GroupRef) -> Result<Vec<(Scalar, usize)>, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        let (c, name) = term
            .split_once('*')
            .ok_or_else(|| format!("bad group-ring term {term} (expected c*element)"))?;
        let idx = group
            .elem_names
            .iter()
            .position(|n| n == name.trim())
            .ok_or_else(|| format!("unknown group element {name}"))?;
        out.push((parse_scalar(c.trim())?, idx));
    }
    Ok(out)
}

fn gr_entry_string(m: &GrMat, i: usize, j: usize) -> String {
    let mut terms = Vec::new();
    for g in 0..m.group.n {
        let c = m.coeff(i, j, g);
        if !c.is_zero() {
            terms.push(format!("{}*{}", scalar_string(c), m.group.elem_names[g]));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Lines<'a> {
    file: &'a str,
    lines: Vec<(usize, String)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(file: &'a str, text: &str) -> Lines<'a> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                let body = match l.find('#') {
                    Some(k) => &l[..k],
                    None => l,
                };
                (i + 1, body.trim().to_string())
            })
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { file, lines, pos: 0 }
    }

    fn peek(&self) -> Option<&(usize, String)> {
        self.lines.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, String)> {
        let x = self.lines.get(self.pos).cloned();
        if x.is_some() {
            self.pos += 1;
        }
        x
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> ParseError {
        ParseError { file: self.file.to_string(), line, msg: msg.into() }
    }

    /// Consume following `row`-prefixed lines.
    fn rows(&mut self, keyword: &str) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        while let Some((n, l)) = self.peek() {
            if let Some(rest) = l.strip_prefix(keyword) {
                if rest.starts_with(' ') || rest.is_empty() {
                    out.push((*n, rest.trim().to_string()));
                    self.pos += 1;
                    continue;
                }
            }
            break;
        }
        out
    }
}

fn parse_qmat_rows(
    ls: &Lines<'_>,
    rows: &[(usize, String)],
    shape: Option<(usize, usize)>,
) -> Result<QMat, ParseError> {
    let parsed: Vec<(usize, Vec<Scalar>)> = rows
        .iter()
        .map(|(n, l)| {
            let entries = if l.is_empty() {
                Vec::new()
            } else {
                l.split_whitespace()
                    .map(parse_scalar)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| ls.err(*n, e))?
            };
            Ok((*n, entries))
        })
        .collect::<Result<_, ParseError>>()?;
    let (r, c) = match shape {
        Some(s) => s,
        None => (parsed.len(), parsed.first().map_or(0, |(_, e)| e.len())),
    };
    if parsed.len() != r {
        let n = parsed.first().map_or(0, |(n, _)| *n);
        return Err(ls.err(n, format!("expected {r} rows, found {}", parsed.len())));
    }
    let mut m = QMat::zero(r, c);
    for (i, (n, entries)) in parsed.into_iter().enumerate() {
        if entries.len() != c {
            return Err(ls.err(n, format!("expected {c} entries, found {}", entries.len())));
        }
        for (j, x) in entries.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

fn parse_grmat_rows(
    ls: &Lines<'_>,
    rows: &[(usize, String)],
    group: &GroupRef,
    shape: (usize, usize),
) -> Result<GrMat, ParseError> {
    let (r, c) = shape;
    if rows.len() != r {
        let n = rows.first().map_or(0, |(n, _)| *n);
        return Err(ls.err(n, format!("expected {r} rows, found {}", rows.len())));
    }
    let mut m = GrMat::zero(group.clone(), r, c);
    for (i, (n, l)) in rows.iter().enumerate() {
        let entries: Vec<&str> =
            if l.is_empty() { Vec::new() } else { l.split(',').collect() };
        if entries.len() != c {
            return Err(ls.err(*n, format!("expected {c} entries, found {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            for (coef, g) in parse_gr_entry(e, group).map_err(|e| ls.err(*n, e))? {
                let cur = m.comps[g].get(i, j).clone();
                m.comps[g].set(i, j, cur + coef);
            }
        }
    }
    Ok(m)
}

impl Workspace {
    pub fn new() -> Workspace {
        Workspace::default()
    }

    /// Parse one file's text into this workspace; redeclaration is an error.
    pub fn parse_into(&mut self, file: &str, text: &str) -> Result<(), ParseError> {
        let mut ls = Lines::new(file, text);
        while let Some((line, header)) = ls.next() {
            if !(header.starts_with('[') && header.ends_with(']')) {
                return Err(ls.err(line, format!("expected a [section] header, found {header}")));
            }
            let words: Vec<String> =
                header[1..header.len() - 1].split_whitespace().map(str::to_string).collect();
            let kind = words.first().cloned().unwrap_or_default();
            match kind.as_str() {
                "zero-cell" => self.parse_zero(&mut ls, line, &words)?,
                "one-cell" => self.parse_one(&mut ls, line, &words)?,
                "generator" => self.parse_gen(&mut ls, line, &words)?,
                "diagram" => self.parse_diagram(&mut ls, line, &words)?,
                "span" => self.parse_span(&mut ls, line, &words)?,
                "group" => self.parse_group(&mut ls, line, &words)?,
                "endo" => self.parse_endo(&mut ls, line, &words)?,
                "grmat" => self.parse_grmat(&mut ls, line, &words)?,
                "grcell" => self.parse_grcell(&mut ls, line, &words)?,
                "complex" => self.parse_complex(&mut ls, line, &words)?,
                "plain-complex" => self.parse_plain(&mut ls, line, &words)?,
                _ => return Err(ls.err(line, format!("unknown section kind {kind}"))),
            }
        }
        Ok(())
    }

    pub fn parse(file: &str, text: &str) -> Result<Workspace, ParseError> {
        let mut w = Workspace::new();
        w.parse_into(file, text)?;
        Ok(w)
    }

    fn check_fresh(&self, ls: &Lines<'_>, line: usize, name: &str) -> Result<(), ParseError> {
        let taken = self.sets.contains_key(name)
            || self.cells.contains_key(name)
            || self.gens.contains_key(name)
            || self.diagrams.contains_key(name)
            || self.spans.contains_key(name)
            || self.groups.contains_key(name)
            || self.endos.contains_key(name)
            || self.grmats.contains_key(name)
            || self.grcells.contains_key(name)
            || self.complexes.contains_key(name)
            || self.plains.contains_key(name);
        if taken {
            Err(ls.err(line, format!("redeclaration of {name}")))
        } else {
            Ok(())
        }
    }

    fn parse_zero(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 3 {
            return Err(ls.err(line, "usage: [zero-cell NAME SIZE]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let n: usize = w[2].parse().map_err(|_| ls.err(line, "bad size"))?;
        self.sets.insert(w[1].clone(), n);
        Ok(())
    }

    fn parse_one(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 4 {
            return Err(ls.err(line, "usage: [one-cell NAME SRC TGT]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let (src, tgt) = (w[2].clone(), w[3].clone());
        let (rs, cs) = (
            *self.sets.get(&src).ok_or_else(|| ls.err(line, format!("unknown zero-cell {src}")))?,
            *self.sets.get(&tgt).ok_or_else(|| ls.err(line, format!("unknown zero-cell {tgt}")))?,
        );
        let rows = ls.rows("row");
        if rows.len() != rs {
            return Err(ls.err(line, format!("expected {rs} rank rows")));
        }
        let ranks: Vec<Vec<usize>> = rows
            .iter()
            .map(|(n, l)| {
                let r: Vec<usize> = l
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| ls.err(*n, "bad rank")))
                    .collect::<Result<_, _>>()?;
                if r.len() != cs {
                    return Err(ls.err(*n, format!("expected {cs} ranks per row")));
                }
                Ok(r)
            })
            .collect::<Result<_, ParseError>>()?;
        self.cells.insert(w[1].clone(), WsCell { src, tgt, ranks });
        Ok(())
    }

    fn parse_gen(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 2 {
            return Err(ls.err(line, "usage: [generator NAME]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let mut dom = None;
        let mut cod = None;
        let mut region = None;
        while let Some((n, l)) = ls.peek().cloned() {
            let mut it = l.split_whitespace();
            match it.next() {
                Some("dom") => dom = Some(it.map(str::to_string).collect::<Vec<_>>()),
                Some("cod") => cod = Some(it.map(str::to_string).collect::<Vec<_>>()),
                Some("region") => {
                    region = Some(
                        it.next().ok_or_else(|| ls.err(n, "region needs a name"))?.to_string(),
                    )
                }
                Some("mat") => break,
                _ => break,
            }
            ls.pos += 1;
        }
        let dom = dom.ok_or_else(|| ls.err(line, "generator needs a dom line"))?;
        let cod = cod.ok_or_else(|| ls.err(line, "generator needs a cod line"))?;
        match ls.next() {
            Some((_, l)) if l == "mat" => {}
            other => {
                let n = other.map_or(line, |(n, _)| n);
                return Err(ls.err(n, "generator needs a mat block"));
            }
        }
        let rows = ls.rows("row");
        let mat = parse_qmat_rows(ls, &rows, None)?;
        self.gens.insert(w[1].clone(), WsGen { dom, cod, region, mat });
        Ok(())
    }

    fn parse_diagram(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 2 {
            return Err(ls.err(line, "usage: [diagram NAME]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let mut top: Option<Vec<String>> = None;
        let mut ambient = String::new();
        let mut layers = Vec::new();
        while let Some((n, l)) = ls.peek().cloned() {
            let mut it = l.split_whitespace();
            match it.next() {
                Some("top") => top = Some(it.map(str::to_string).collect()),
                Some("ambient") => {
                    ambient =
                        it.next().ok_or_else(|| ls.err(n, "ambient needs a name"))?.to_string()
                }
                Some("rot") => {
                    let k: usize = it
                        .next()
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| ls.err(n, "rot needs a count"))?;
                    layers.push(Layer::Rotation { k });
                }
                Some("elem") => {
                    let mut slots = Vec::new();
                    for tok in it {
                        if let Some(name) = tok.strip_prefix("wire:") {
                            slots.push(Slot::Wire(name.to_string()));
                        } else if let Some(name) = tok.strip_prefix("box:") {
                            let g = self
                                .gens
                                .get(name)
                                .ok_or_else(|| ls.err(n, format!("unknown generator {name}")))?;
                            slots.push(Slot::Box(Generator {
                                name: name.to_string(),
                                dom: g.dom.clone(),
                                cod: g.cod.clone(),
                            }));
                        } else {
                            return Err(ls.err(n, format!("bad slot {tok} (wire:… or box:…)")));
                        }
                    }
                    layers.push(Layer::Elementary { slots });
                }
                _ => break,
            }
            ls.pos += 1;
        }
        let top = top.ok_or_else(|| ls.err(line, "diagram needs a top line"))?;
        let d = Diagram { top: CyclicWord { letters: top, ambient }, layers };
        self.diagrams.insert(w[1].clone(), d);
        Ok(())
    }

    fn parse_span(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 4 {
            return Err(ls.err(line, "usage: [span NAME SRC TGT]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let (src, tgt) = (w[2].clone(), w[3].clone());
        let (rs, cs) = (
            *self.sets.get(&src).ok_or_else(|| ls.err(line, format!("unknown zero-cell {src}")))?,
            *self.sets.get(&tgt).ok_or_else(|| ls.err(line, format!("unknown zero-cell {tgt}")))?,
        );
        let mut legs = Vec::new();
        if let Some((n, l)) = ls.peek().cloned() {
            if let Some(rest) = l.strip_prefix("legs") {
                for pair in rest.split_whitespace() {
                    let (a, b) = pair
                        .split_once(':')
                        .ok_or_else(|| ls.err(n, format!("bad leg pair {pair}")))?;
                    let (a, b): (usize, usize) = (
                        a.parse().map_err(|_| ls.err(n, "bad leg index"))?,
                        b.parse().map_err(|_| ls.err(n, "bad leg index"))?,
                    );
                    if a >= rs || b >= cs {
                        return Err(ls.err(n, format!("leg {pair} out of range")));
                    }
                    legs.push((a, b));
                }
                ls.pos += 1;
            }
        }
        self.spans.insert(w[1].clone(), WsSpan { src, tgt, legs });
        Ok(())
    }

    fn parse_group(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        match w.len() {
            3 => {
                self.check_fresh(ls, line, &w[1])?;
                let g = Group::builtin(&w[2])
                    .ok_or_else(|| ls.err(line, format!("unknown builtin group {}", w[2])))?;
                // re-register under the declared name so that serializing
                // and re-parsing yields an equal workspace
                let g = Group::from_table(&w[1], g.mul.clone(), Some(g.elem_names.clone()))
                    .expect("builtin tables are valid");
                self.groups.insert(w[1].clone(), g);
                Ok(())
            }
            2 => {
                self.check_fresh(ls, line, &w[1])?;
                let mut names = None;
                if let Some((_, l)) = ls.peek().cloned() {
                    if let Some(rest) = l.strip_prefix("names") {
                        names = Some(rest.split_whitespace().map(str::to_string).collect());
                        ls.pos += 1;
                    }
                }
                let rows = ls.rows("row");
                let table: Vec<Vec<usize>> = rows
                    .iter()
                    .map(|(n, l)| {
                        l.split_whitespace()
                            .map(|x| x.parse().map_err(|_| ls.err(*n, "bad table entry")))
                            .collect()
                    })
                    .collect::<Result<_, ParseError>>()?;
                let g = Group::from_table(&w[1], table, names)
                    .map_err(|e| ls.err(line, e.to_string()))?;
                self.groups.insert(w[1].clone(), g);
                Ok(())
            }
            _ => Err(ls.err(line, "usage: [group NAME] or [group NAME BUILTIN]")),
        }
    }

    fn group_ref(&self, ls: &Lines<'_>, line: usize, name: &str) -> Result<GroupRef, ParseError> {
        self.groups
            .get(name)
            .cloned()
            .ok_or_else(|| ls.err(line, format!("unknown group {name}")))
    }

    fn parse_endo(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 3 {
            return Err(ls.err(line, "usage: [endo NAME GROUP]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let g = self.group_ref(ls, line, &w[2])?;
        let (n, l) = ls.next().ok_or_else(|| ls.err(line, "endo needs an images line"))?;
        let rest = l
            .strip_prefix("images")
            .ok_or_else(|| ls.err(n, "endo needs an images line"))?;
        let image: Vec<usize> = rest
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| ls.err(n, "bad image index")))
            .collect::<Result<_, _>>()?;
        Endo::new(g, image.clone()).map_err(|e| ls.err(n, e.to_string()))?;
        self.endos.insert(w[1].clone(), WsEndo { group: w[2].clone(), image });
        Ok(())
    }

    fn parse_grmat(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 6 {
            return Err(ls.err(line, "usage: [grmat NAME GROUP RING ROWS COLS]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let g = self.group_ref(ls, line, &w[2])?;
        let ring = parse_ring(&w[3]).map_err(|e| ls.err(line, e))?;
        let (r, c): (usize, usize) = (
            w[4].parse().map_err(|_| ls.err(line, "bad row count"))?,
            w[5].parse().map_err(|_| ls.err(line, "bad column count"))?,
        );
        let rows = ls.rows("row");
        let mat = parse_grmat_rows(ls, &rows, &g, (r, c))?;
        if ring == Ring::Z && !mat.is_integral() {
            return Err(ls.err(line, "integral matrix has rational entries"));
        }
        self.grmats.insert(w[1].clone(), WsGrMat { group: w[2].clone(), ring, mat });
        Ok(())
    }

    fn parse_grcell(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 6 {
            return Err(ls.err(line, "usage: [grcell NAME SRCGROUP TGTGROUP RING RANK]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let src = self.group_ref(ls, line, &w[2])?;
        let tgt = self.group_ref(ls, line, &w[3])?;
        let ring = parse_ring(&w[4]).map_err(|e| ls.err(line, e))?;
        let rank: usize = w[5].parse().map_err(|_| ls.err(line, "bad rank"))?;
        let mut lambda = Vec::new();
        for gi in 0..src.n {
            let (n, l) = ls
                .next()
                .ok_or_else(|| ls.err(line, format!("missing lambda block for element {gi}")))?;
            let expect = format!("lambda {}", src.elem_names[gi]);
            if l != expect {
                return Err(ls.err(n, format!("expected `{expect}`, found `{l}`")));
            }
            let rows = ls.rows("row");
            lambda.push(parse_grmat_rows(ls, &rows, &tgt, (rank, rank))?);
        }
        self.grcells.insert(
            w[1].clone(),
            WsGrCell { src_group: w[2].clone(), tgt_group: w[3].clone(), ring, rank, lambda },
        );
        Ok(())
    }

    fn parse_complex(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 5 {
            return Err(ls.err(line, "usage: [complex NAME GROUP ENDO RING]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let g = self.group_ref(ls, line, &w[2])?;
        if !self.endos.contains_key(&w[3]) {
            return Err(ls.err(line, format!("unknown endo {}", w[3])));
        }
        let ring = parse_ring(&w[4]).map_err(|e| ls.err(line, e))?;
        let (n, l) = ls.next().ok_or_else(|| ls.err(line, "complex needs a ranks line"))?;
        let rest =
            l.strip_prefix("ranks").ok_or_else(|| ls.err(n, "complex needs a ranks line"))?;
        let ranks: Vec<usize> = rest
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| ls.err(n, "bad rank")))
            .collect::<Result<_, _>>()?;
        if ranks.is_empty() {
            return Err(ls.err(n, "complex needs at least one degree"));
        }
        let mut d = Vec::new();
        for i in 0..ranks.len() - 1 {
            let (n, l) = ls.next().ok_or_else(|| ls.err(line, format!("missing d {i}")))?;
            if l != format!("d {i}") {
                return Err(ls.err(n, format!("expected `d {i}`, found `{l}`")));
            }
            let rows = ls.rows("row");
            d.push(parse_grmat_rows(ls, &rows, &g, (ranks[i], ranks[i + 1]))?);
        }
        let mut f = Vec::new();
        for i in 0..ranks.len() {
            let (n, l) = ls.next().ok_or_else(|| ls.err(line, format!("missing f {i}")))?;
            if l != format!("f {i}") {
                return Err(ls.err(n, format!("expected `f {i}`, found `{l}`")));
            }
            let rows = ls.rows("row");
            f.push(parse_grmat_rows(ls, &rows, &g, (ranks[i], ranks[i]))?);
        }
        self.complexes.insert(
            w[1].clone(),
            WsComplex { group: w[2].clone(), psi: w[3].clone(), ring, ranks, d, f },
        );
        Ok(())
    }

    fn parse_plain(&mut self, ls: &mut Lines<'_>, line: usize, w: &[String]) -> Result<(), ParseError> {
        if w.len() != 3 {
            return Err(ls.err(line, "usage: [plain-complex NAME RING]"));
        }
        self.check_fresh(ls, line, &w[1])?;
        let ring = parse_ring(&w[2]).map_err(|e| ls.err(line, e))?;
        let (n, l) = ls.next().ok_or_else(|| ls.err(line, "complex needs a ranks line"))?;
        let rest =
            l.strip_prefix("ranks").ok_or_else(|| ls.err(n, "complex needs a ranks line"))?;
        let ranks: Vec<usize> = rest
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| ls.err(n, "bad rank")))
            .collect::<Result<_, _>>()?;
        if ranks.is_empty() {
            return Err(ls.err(n, "complex needs at least one degree"));
        }
        let mut d = Vec::new();
        for i in 0..ranks.len() - 1 {
            let (n, l) = ls.next().ok_or_else(|| ls.err(line, format!("missing d {i}")))?;
            if l != format!("d {i}") {
                return Err(ls.err(n, format!("expected `d {i}`, found `{l}`")));
            }
            let rows = ls.rows("row");
            d.push(parse_qmat_rows(ls, &rows, Some((ranks[i], ranks[i + 1])))?);
        }
        let mut f = Vec::new();
        for i in 0..ranks.len() {
            let (n, l) = ls.next().ok_or_else(|| ls.err(line, format!("missing f {i}")))?;
            if l != format!("f {i}") {
                return Err(ls.err(n, format!("expected `f {i}`, found `{l}`")));
            }
            let rows = ls.rows("row");
            f.push(parse_qmat_rows(ls, &rows, Some((ranks[i], ranks[i])))?);
        }
        self.plains.insert(w[1].clone(), WsPlain { ring, ranks, d, f });
        Ok(())
    }

    // -----------------------------------------------------------------------
    // Serialization
    // -----------------------------------------------------------------------

    /// Canonical textual form: sections sorted by name within each kind.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (name, n) in &self.sets {
            let _ = writeln!(out, "[zero-cell {name} {n}]");
        }
        for (name, c) in &self.cells {
            let _ = writeln!(out, "[one-cell {name} {} {}]", c.src, c.tgt);
            for row in &c.ranks {
                let strs: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "row {}", strs.join(" "));
            }
        }
        for (name, g) in &self.gens {
            let _ = writeln!(out, "[generator {name}]");
            let _ = writeln!(out, "dom {}", g.dom.join(" "));
            let _ = writeln!(out, "cod {}", g.cod.join(" "));
            if let Some(r) = &g.region {
                let _ = writeln!(out, "region {r}");
            }
            let _ = writeln!(out, "mat");
            for i in 0..g.mat.rows {
                let strs: Vec<String> =
                    (0..g.mat.cols).map(|j| scalar_string(g.mat.get(i, j))).collect();
                let _ = writeln!(out, "row {}", strs.join(" "));
            }
        }
        for (name, d) in &self.diagrams {
            let _ = writeln!(out, "[diagram {name}]");
            let _ = writeln!(out, "top {}", d.top.letters.join(" "));
            if !d.top.ambient.is_empty() {
                let _ = writeln!(out, "ambient {}", d.top.ambient);
            }
            for layer in &d.layers {
                match layer {
                    Layer::Rotation { k } => {
                        let _ = writeln!(out, "rot {k}");
                    }
                    Layer::Elementary { slots } => {
                        let toks: Vec<String> = slots
                            .iter()
                            .map(|s| match s {
                                Slot::Wire(l) => format!("wire:{l}"),
                                Slot::Box(g) => format!("box:{}", g.name),
                            })
                            .collect();
                        let _ = writeln!(out, "elem {}", toks.join(" "));
                    }
                }
            }
        }
        for (name, s) in &self.spans {
            let _ = writeln!(out, "[span {name} {} {}]", s.src, s.tgt);
            let pairs: Vec<String> = s.legs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
            let _ = writeln!(out, "legs {}", pairs.join(" "));
        }
        for (name, g) in &self.groups {
            let _ = writeln!(out, "[group {name}]");
            let _ = writeln!(out, "names {}", g.elem_names.join(" "));
            for row in &g.mul {
                let strs: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "row {}", strs.join(" "));
            }
        }
        for (name, e) in &self.endos {
            let _ = writeln!(out, "[endo {name} {}]", e.group);
            let strs: Vec<String> = e.image.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "images {}", strs.join(" "));
        }
        for (name, m) in &self.grmats {
            let _ = writeln!(
                out,
                "[grmat {name} {} {} {} {}]",
                m.group,
                ring_name(m.ring),
                m.mat.rows,
                m.mat.cols
            );
            for i in 0..m.mat.rows {
                let strs: Vec<String> =
                    (0..m.mat.cols).map(|j| gr_entry_string(&m.mat, i, j)).collect();
                let _ = writeln!(out, "row {}", strs.join(" , "));
            }
        }
        for (name, c) in &self.grcells {
            let _ = writeln!(
                out,
                "[grcell {name} {} {} {} {}]",
                c.src_group,
                c.tgt_group,
                ring_name(c.ring),
                c.rank
            );
            let src = &self.groups[&c.src_group];
            for (gi, lam) in c.lambda.iter().enumerate() {
                let _ = writeln!(out, "lambda {}", src.elem_names[gi]);
                for i in 0..lam.rows {
                    let strs: Vec<String> =
                        (0..lam.cols).map(|j| gr_entry_string(lam, i, j)).collect();
                    let _ = writeln!(out, "row {}", strs.join(" , "));
                }
            }
        }
        for (name, c) in &self.complexes {
            let _ = writeln!(
                out,
                "[complex {name} {} {} {}]",
                c.group,
                c.psi,
                ring_name(c.ring)
            );
            let strs: Vec<String> = c.ranks.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "ranks {}", strs.join(" "));
            for (i, m) in c.d.iter().enumerate() {
                let _ = writeln!(out, "d {i}");
                for r in 0..m.rows {
                    let strs: Vec<String> =
                        (0..m.cols).map(|j| gr_entry_string(m, r, j)).collect();
                    let _ = writeln!(out, "row {}", strs.join(" , "));
                }
            }
            for (i, m) in c.f.iter().enumerate() {
                let _ = writeln!(out, "f {i}");
                for r in 0..m.rows {
                    let strs: Vec<String> =
                        (0..m.cols).map(|j| gr_entry_string(m, r, j)).collect();
                    let _ = writeln!(out, "row {}", strs.join(" , "));
                }
            }
        }
        for (name, c) in &self.plains {
            let _ = writeln!(out, "[plain-complex {name} {}]", ring_name(c.ring));
            let strs: Vec<String> = c.ranks.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "ranks {}", strs.join(" "));
            for (i, m) in c.d.iter().enumerate() {
                let _ = writeln!(out, "d {i}");
                for r in 0..m.rows {
                    let strs: Vec<String> =
                        (0..m.cols).map(|j| scalar_string(m.get(r, j))).collect();
                    let _ = writeln!(out, "row {}", strs.join(" "));
                }
            }
            for (i, m) in c.f.iter().enumerate() {
                let _ = writeln!(out, "f {i}");
                for r in 0..m.rows {
                    let strs: Vec<String> =
                        (0..m.cols).map(|j| scalar_string(m.get(r, j))).collect();
                    let _ = writeln!(out, "row {}", strs.join(" "));
                }
            }
        }
        out
    }

    // -----------------------------------------------------------------------
    // Instance bindings
    // -----------------------------------------------------------------------

    /// Bind the matmod declarations to a valuation.  Generators whose
    /// boundary touches a multi-element zero-cell are rejected (boxes are
    /// restricted to one-object regions; box-free diagrams may use any).
    pub fn matmod_valuation(&self, inst: &MatMod) -> Result<Valuation<MatMod>, String> {
        let mut v = Valuation::new();
        for (name, &n) in &self.sets {
            v.regions.insert(name.clone(), MatZero { name: name.clone(), elems: n });
        }
        for (name, c) in &self.cells {
            let src = &v.regions[&c.src];
            let tgt = &v.regions[&c.tgt];
            v.cells.insert(name.clone(), MatCell::atomic(name, src, tgt, &c.ranks));
        }
        for (name, g) in &self.gens {
            let fold = |word: &[String]| -> Result<MatCell, String> {
                let cells: Vec<&MatCell> = word
                    .iter()
                    .map(|l| v.cells.get(l).ok_or_else(|| format!("unknown one-cell {l}")))
                    .collect::<Result<_, _>>()?;
                match cells.split_first() {
                    None => {
                        let r = g
                            .region
                            .as_ref()
                            .ok_or_else(|| format!("generator {name} needs a region line"))?;
                        let z = v
                            .regions
                            .get(r)
                            .ok_or_else(|| format!("unknown zero-cell {r}"))?;
                        Ok(crate::bicat::Bicat::unit(inst, z))
                    }
                    Some((h, t)) => {
                        let mut acc = (*h).clone();
                        for c in t {
                            acc = crate::bicat::Bicat::compose1(inst, &acc, c);
                        }
                        Ok(acc)
                    }
                }
            };
            let src = fold(&g.dom)?;
            let tgt = fold(&g.cod)?;
            if src.src.elems != 1 || src.tgt.elems != 1 {
                return Err(format!(
                    "generator {name}: boxes are restricted to one-object zero-cells"
                ));
            }
            if (g.mat.rows, g.mat.cols) != (tgt.rank(0, 0), src.rank(0, 0)) {
                return Err(format!(
                    "generator {name}: matrix is {}x{} but boundary needs {}x{}",
                    g.mat.rows,
                    g.mat.cols,
                    tgt.rank(0, 0),
                    src.rank(0, 0)
                ));
            }
            v.gens.insert(name.clone(), MatTwo::new(src, tgt, vec![vec![g.mat.clone()]]));
        }
        Ok(v)
    }

    pub fn span_cell(&self, name: &str) -> Result<SpanCell, String> {
        let s = self.spans.get(name).ok_or_else(|| format!("unknown span {name}"))?;
        let src = SpanZero { name: s.src.clone(), elems: self.sets[&s.src] };
        let tgt = SpanZero { name: s.tgt.clone(), elems: self.sets[&s.tgt] };
        Ok(SpanCell::atomic(name, &src, &tgt, &s.legs))
    }

    pub fn endo(&self, name: &str) -> Result<Endo, String> {
        let e = self.endos.get(name).ok_or_else(|| format!("unknown endo {name}"))?;
        Endo::new(self.groups[&e.group].clone(), e.image.clone()).map_err(|e| e.to_string())
    }

    pub fn gr_cell(&self, name: &str) -> Result<GrCell, String> {
        let c = self.grcells.get(name).ok_or_else(|| format!("unknown grcell {name}"))?;
        let src = GrZero { group: self.groups[&c.src_group].clone(), ring: c.ring };
        let tgt = GrZero { group: self.groups[&c.tgt_group].clone(), ring: c.ring };
        Ok(GrCell::new(src, tgt, c.rank, c.lambda.clone()))
    }

    pub fn twisted_complex(&self, name: &str) -> Result<TwistedComplex, String> {
        let c = self.complexes.get(name).ok_or_else(|| format!("unknown complex {name}"))?;
        TwistedComplex::new(
            self.groups[&c.group].clone(),
            c.ring,
            self.endo(&c.psi)?,
            c.ranks.clone(),
            c.d.clone(),
            c.f.clone(),
        )
    }

    pub fn plain_complex(&self, name: &str) -> Result<PlainComplex, String> {
        let c = self.plains.get(name).ok_or_else(|| format!("unknown plain complex {name}"))?;
        let p = PlainComplex {
            ring: c.ring,
            ranks: c.ranks.clone(),
            d: c.d.clone(),
            f: c.f.clone(),
        };
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{validate, value};

    const SAMPLE: &str = r#"
# a tiny one-object workspace
[zero-cell R 1]
[one-cell M R R]
row 2
[generator f]
dom M
cod M
mat
row 1 2
row 3 4
[diagram D]
top M
ambient R
rot 0
elem box:f
[span S R R]
legs 0:0
[group G z3]
[endo psi G]
images 0 2 1
[grmat A G Z 1 1]
row 1*e + -2*g
[grcell C G G Z 1]
lambda e
row 1*e
lambda g
row 1*g
lambda g^2
row 1*g^2
[complex X G psi Z]
ranks 1 1
d 0
row 0
f 0
row 2*e
f 1
row 1*g
[plain-complex P Q]
ranks 2 1
d 0
row 1
row 0
f 0
row 1/2 0
row 0 3
f 1
row 1/2
"#;

    #[test]
    fn parse_serialize_round_trip() {
        let w = Workspace::parse("sample.st", SAMPLE).expect("sample parses");
        let text = w.serialize();
        let w2 = Workspace::parse("round.st", &text).expect("serialized form parses");
        assert_eq!(w, w2);
    }

    #[test]
    fn parsed_diagram_validates_and_evaluates() {
        let w = Workspace::parse("sample.st", SAMPLE).unwrap();
        let inst = MatMod::new(Ring::Z);
        let v = w.matmod_valuation(&inst).unwrap();
        let d = &w.diagrams["D"];
        validate(&inst, d, &v).expect("diagram validates");
        let val = value(&inst, d, &v).expect("diagram evaluates");
        assert_eq!(val.mat.rows, 2);
    }

    #[test]
    fn parsed_complexes_validate() {
        let w = Workspace::parse("sample.st", SAMPLE).unwrap();
        let c = w.twisted_complex("X").expect("twisted complex builds");
        assert_eq!(c.ranks, vec![1, 1]);
        let p = w.plain_complex("P").expect("plain complex builds");
        assert_eq!(p.ranks, vec![2, 1]);
    }

    #[test]
    fn errors_carry_file_and_line() {
        let bad = "[zero-cell R 1]\n[one-cell M R R]\nrow 1 2\n";
        let e = Workspace::parse("bad.st", bad).unwrap_err();
        assert_eq!(e.file, "bad.st");
        assert_eq!(e.line, 3);
    }

    #[test]
    fn redeclaration_is_an_error() {
        let bad = "[zero-cell R 1]\n[zero-cell R 2]\n";
        let e = Workspace::parse("bad.st", bad).unwrap_err();
        assert!(e.msg.contains("redeclaration"));
    }
}
