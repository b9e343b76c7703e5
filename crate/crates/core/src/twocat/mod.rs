//! Strict 2-categories by generators and relations.
//!
//! 1-cells are [`Word`]s over the generating 1-cells; `[a, b]` is "a then b"
//! and horizontal composition of 1-cells is concatenation. A 2-cell is a
//! [`PastingTerm`]: a vertical stack of whiskered generators, one per layer.

mod catalog;
mod hom;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::present::{EqualityVerdict, SearchBudget, Word};

pub use catalog::{catalog, corpus, CatalogName};
pub use hom::{hom_category, hom_category_bounded, one_cells, Bound, HomCategory, LayerKey};
pub(crate) use hom::HomEmitter;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen1 {
    pub label: String,
    pub src: u32,
    pub tgt: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen2 {
    pub label: String,
    pub src: Word,
    pub tgt: Word,
    pub invertible: bool,
}

/// A generating 2-cell or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub gen: u32,
    pub inverse: bool,
}

/// `left * cell * right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layer {
    pub left: Word,
    pub cell: Cell,
    pub right: Word,
}

/// A vertical composite of layers from `src` to `tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PastingTerm {
    pub src: Word,
    pub tgt: Word,
    pub layers: Vec<Layer>,
}

pub(crate) fn concat(words: &[&Word]) -> Word {
    let mut letters = Vec::new();
    for w in words {
        letters.extend_from_slice(&w.letters);
    }
    Word { src: words[0].src, tgt: words[words.len() - 1].tgt, letters }
}

/// A strict 2-category presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCatPresentation {
    pub name: String,
    zero_cells: Vec<String>,
    gen1: Vec<Gen1>,
    gen2: Vec<Gen2>,
    rel2: Vec<(PastingTerm, PastingTerm)>,
}

impl TwoCatPresentation {
    pub fn new(name: &str) -> Self {
        TwoCatPresentation { name: name.into(), zero_cells: Vec::new(), gen1: Vec::new(), gen2: Vec::new(), rel2: Vec::new() }
    }

    pub fn zero_cells(&self) -> &[String] {
        &self.zero_cells
    }

    pub fn gen1(&self) -> &[Gen1] {
        &self.gen1
    }

    pub fn gen2(&self) -> &[Gen2] {
        &self.gen2
    }

    pub fn rel2(&self) -> &[(PastingTerm, PastingTerm)] {
        &self.rel2
    }

    pub fn add_zero_cell(&mut self, label: &str) -> u32 {
        self.zero_cells.push(label.into());
        (self.zero_cells.len() - 1) as u32
    }

    pub fn add_gen1(&mut self, label: &str, src: u32, tgt: u32) -> Result<u32> {
        let n = self.zero_cells.len() as u32;
        if src >= n || tgt >= n {
            return Err(Error::Malformed(format!("1-cell {label} has an undeclared endpoint")));
        }
        if self.gen1.iter().any(|g| g.label == label) {
            return Err(Error::Malformed(format!("duplicate 1-cell {label}")));
        }
        self.gen1.push(Gen1 { label: label.into(), src, tgt });
        Ok((self.gen1.len() - 1) as u32)
    }

    pub fn add_gen2(&mut self, label: &str, src: Word, tgt: Word, invertible: bool) -> Result<u32> {
        self.check_path(&src)?;
        self.check_path(&tgt)?;
        if src.src != tgt.src || src.tgt != tgt.tgt {
            return Err(Error::Malformed(format!("2-cell {label} has non-parallel boundaries")));
        }
        if self.gen2.iter().any(|g| g.label == label) {
            return Err(Error::Malformed(format!("duplicate 2-cell {label}")));
        }
        self.gen2.push(Gen2 { label: label.into(), src, tgt, invertible });
        Ok((self.gen2.len() - 1) as u32)
    }

    pub fn add_rel2(&mut self, a: PastingTerm, b: PastingTerm) -> Result<()> {
        self.check_term(&a)?;
        self.check_term(&b)?;
        if a.src != b.src || a.tgt != b.tgt {
            return Err(Error::Malformed("2-relation sides are not parallel".into()));
        }
        self.rel2.push((a, b));
        Ok(())
    }

    pub fn gen1_id(&self, label: &str) -> Option<u32> {
        self.gen1.iter().position(|g| g.label == label).map(|i| i as u32)
    }

    pub fn gen2_id(&self, label: &str) -> Option<u32> {
        self.gen2.iter().position(|g| g.label == label).map(|i| i as u32)
    }

    pub fn zero_cell_id(&self, label: &str) -> Option<u32> {
        self.zero_cells.iter().position(|z| z == label).map(|i| i as u32)
    }

    /// A 1-cell word from `at` through the named 1-cells.
    pub fn path(&self, at: u32, labels: &[&str]) -> Result<Word> {
        let mut letters = Vec::new();
        for l in labels {
            letters.push(self.gen1_id(l).ok_or_else(|| Error::Lookup(format!("1-cell {l}")))?);
        }
        let w = Word { src: at, tgt: at, letters };
        self.fix_path(w)
    }

    fn fix_path(&self, mut w: Word) -> Result<Word> {
        if w.src as usize >= self.zero_cells.len() {
            return Err(Error::Malformed(format!("0-cell {} is not declared", w.src)));
        }
        let mut at = w.src;
        for &g in &w.letters {
            let c = self.gen1.get(g as usize).ok_or_else(|| Error::Malformed(format!("1-cell {g} is not declared")))?;
            if c.src != at {
                return Err(Error::Malformed(format!("1-cell {} is not composable here", c.label)));
            }
            at = c.tgt;
        }
        w.tgt = at;
        Ok(w)
    }

    pub fn check_path(&self, w: &Word) -> Result<()> {
        let f = self.fix_path(w.clone())?;
        if f.tgt != w.tgt {
            return Err(Error::Malformed("1-cell word target does not match its letters".into()));
        }
        Ok(())
    }

    pub fn display_path(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            return format!("∅{}", self.zero_cells[w.src as usize]);
        }
        w.letters.iter().map(|&g| self.gen1[g as usize].label.as_str()).collect::<Vec<_>>().join(".")
    }

    /// Whisker text for layer labels: empty words print as nothing.
    pub(crate) fn display_whisker(&self, w: &Word) -> String {
        w.letters.iter().map(|&g| self.gen1[g as usize].label.as_str()).collect::<Vec<_>>().join(".")
    }

    pub fn cell_boundary(&self, c: Cell) -> (&Word, &Word) {
        let g = &self.gen2[c.gen as usize];
        if c.inverse {
            (&g.tgt, &g.src)
        } else {
            (&g.src, &g.tgt)
        }
    }

    pub fn cell_label(&self, c: Cell) -> String {
        let g = &self.gen2[c.gen as usize];
        if c.inverse {
            format!("{}^-1", g.label)
        } else {
            g.label.clone()
        }
    }

    pub fn layer_label(&self, l: &Layer) -> String {
        format!("[{}|{}|{}]", self.display_whisker(&l.left), self.cell_label(l.cell), self.display_whisker(&l.right))
    }

    pub fn layer_boundary(&self, l: &Layer) -> (Word, Word) {
        let (a, b) = self.cell_boundary(l.cell);
        (concat(&[&l.left, a, &l.right]), concat(&[&l.left, b, &l.right]))
    }

    pub fn check_layer(&self, l: &Layer) -> Result<()> {
        let g = self.gen2.get(l.cell.gen as usize).ok_or_else(|| Error::Malformed("undeclared 2-cell".into()))?;
        if l.cell.inverse && !g.invertible {
            return Err(Error::Malformed(format!("2-cell {} is not invertible", g.label)));
        }
        self.check_path(&l.left)?;
        self.check_path(&l.right)?;
        if l.left.tgt != g.src.src || g.src.tgt != l.right.src {
            return Err(Error::Malformed(format!("whiskers do not fit {}", g.label)));
        }
        Ok(())
    }

    pub fn check_term(&self, t: &PastingTerm) -> Result<()> {
        self.check_path(&t.src)?;
        self.check_path(&t.tgt)?;
        let mut at = t.src.clone();
        for (i, l) in t.layers.iter().enumerate() {
            self.check_layer(l)?;
            let (s, e) = self.layer_boundary(l);
            if s != at {
                return Err(Error::Malformed(format!("layer {i} does not compose vertically")));
            }
            at = e;
        }
        if at != t.tgt {
            return Err(Error::Malformed("term target does not match its layers".into()));
        }
        Ok(())
    }

    pub fn identity_term(&self, w: &Word) -> PastingTerm {
        PastingTerm { src: w.clone(), tgt: w.clone(), layers: Vec::new() }
    }

    /// The layer `left * cell * right` as a one-layer term.
    pub fn layer_term(&self, left: Word, cell: Cell, right: Word) -> Result<PastingTerm> {
        let l = Layer { left, cell, right };
        self.check_layer(&l)?;
        let (src, tgt) = self.layer_boundary(&l);
        Ok(PastingTerm { src, tgt, layers: vec![l] })
    }

    /// A generator (or its inverse) with empty whiskers.
    pub fn cell_term(&self, cell: Cell) -> Result<PastingTerm> {
        let g = self.gen2.get(cell.gen as usize).ok_or_else(|| Error::Malformed("undeclared 2-cell".into()))?;
        let (a, b) = (Word::empty(g.src.src), Word::empty(g.src.tgt));
        self.layer_term(a, cell, b)
    }

    /// Builds a term from layers `(left labels, cell label, inverse, right labels)`.
    pub fn term(&self, src: &Word, layers: &[(&[&str], &str, bool, &[&str])]) -> Result<PastingTerm> {
        let mut t = self.identity_term(src);
        for &(l, c, inv, r) in layers {
            let g = self.gen2_id(c).ok_or_else(|| Error::Lookup(format!("2-cell {c}")))?;
            let gen = &self.gen2[g as usize];
            let left = self.path_to(gen.src.src, l)?;
            let right = self.path(gen.src.tgt, r)?;
            let layer = self.layer_term(left, Cell { gen: g, inverse: inv }, right)?;
            t = self.compose_v(&t, &layer)?;
        }
        Ok(t)
    }

    /// A 1-cell word ending at `end` through the named 1-cells.
    fn path_to(&self, end: u32, labels: &[&str]) -> Result<Word> {
        match labels.first() {
            None => Ok(Word::empty(end)),
            Some(first) => {
                let g = self.gen1_id(first).ok_or_else(|| Error::Lookup(format!("1-cell {first}")))?;
                let w = self.path(self.gen1[g as usize].src, labels)?;
                if w.tgt != end {
                    return Err(Error::Malformed("left whisker does not end at the cell".into()));
                }
                Ok(w)
            }
        }
    }

    pub fn compose_v(&self, t1: &PastingTerm, t2: &PastingTerm) -> Result<PastingTerm> {
        if t1.tgt != t2.src {
            return Err(Error::Precondition("vertical composite of non-matching boundaries".into()));
        }
        let mut layers = t1.layers.clone();
        layers.extend(t2.layers.iter().cloned());
        Ok(PastingTerm { src: t1.src.clone(), tgt: t2.tgt.clone(), layers })
    }

    pub fn whisker(&self, left: &Word, t: &PastingTerm, right: &Word) -> Result<PastingTerm> {
        self.check_path(left)?;
        self.check_path(right)?;
        if left.tgt != t.src.src || t.src.tgt != right.src {
            return Err(Error::Precondition("whiskers do not fit the term".into()));
        }
        let layers = t
            .layers
            .iter()
            .map(|l| Layer { left: concat(&[left, &l.left]), cell: l.cell, right: concat(&[&l.right, right]) })
            .collect();
        Ok(PastingTerm { src: concat(&[left, &t.src, right]), tgt: concat(&[left, &t.tgt, right]), layers })
    }

    /// `t1 * t2`, expanded as `(t1 * src t2) ; (tgt t1 * t2)`.
    pub fn compose_h(&self, t1: &PastingTerm, t2: &PastingTerm) -> Result<PastingTerm> {
        if t1.src.tgt != t2.src.src {
            return Err(Error::Precondition("horizontal composite of non-adjacent terms".into()));
        }
        let a = self.whisker(&Word::empty(t1.src.src), t1, &t2.src)?;
        let b = self.whisker(&t1.tgt, t2, &Word::empty(t2.src.tgt))?;
        self.compose_v(&a, &b)
    }

    /// Formal inverse of a term all of whose cells are invertible.
    pub fn invert_term(&self, t: &PastingTerm) -> Option<PastingTerm> {
        let mut layers = Vec::new();
        for l in t.layers.iter().rev() {
            if !self.gen2[l.cell.gen as usize].invertible {
                return None;
            }
            layers.push(Layer { left: l.left.clone(), cell: Cell { gen: l.cell.gen, inverse: !l.cell.inverse }, right: l.right.clone() });
        }
        Some(PastingTerm { src: t.tgt.clone(), tgt: t.src.clone(), layers })
    }

    pub fn display_term(&self, t: &PastingTerm) -> String {
        if t.layers.is_empty() {
            return format!("id[{}]", self.display_path(&t.src));
        }
        t.layers.iter().map(|l| self.layer_label(l)).collect::<Vec<_>>().join(" ; ")
    }

    /// All 0-cells and 1-cell words are endomorphisms of something; this is the list of loops.
    pub fn endo_words(&self, max_len: usize) -> Vec<Word> {
        (0..self.zero_cells.len() as u32).flat_map(|x| one_cells(self, x, x, max_len)).collect()
    }

    pub fn pasting_equal(&self, t1: &PastingTerm, t2: &PastingTerm, b: &SearchBudget) -> Result<EqualityVerdict> {
        self.check_term(t1)?;
        self.check_term(t2)?;
        if t1.src != t2.src || t1.tgt != t2.tgt {
            return Err(Error::Precondition("pasting terms are not parallel".into()));
        }
        let longest = [t1, t2]
            .iter()
            .flat_map(|t| std::iter::once(t.src.len()).chain(t.layers.iter().map(|l| self.layer_boundary(l).1.len())))
            .max()
            .unwrap_or(0);
        let len = longest.max(b.max_word_length.min(longest + 2));
        let h = hom_category_bounded(self, t1.src.src, t1.src.tgt, Bound::length(t1.src.src, len), b)?;
        let (w1, w2) = (h.word_of(t1)?, h.word_of(t2)?);
        h.presentation().equal(&w1, &w2, b)
    }

    pub fn to_file(&self) -> TwoCatFile {
        let ids = |w: &Word| w.letters.iter().map(|&g| self.gen1[g as usize].label.clone()).collect::<Vec<_>>();
        let term = |t: &PastingTerm| TermSpec {
            from: self.zero_cells[t.src.src as usize].clone(),
            src: ids(&t.src),
            layers: t
                .layers
                .iter()
                .map(|l| LayerSpec {
                    left: ids(&l.left),
                    cell: self.gen2[l.cell.gen as usize].label.clone(),
                    inverse: l.cell.inverse,
                    right: ids(&l.right),
                })
                .collect(),
        };
        TwoCatFile {
            name: self.name.clone(),
            strict: true,
            zero_cells: self.zero_cells.clone(),
            gen1: self
                .gen1
                .iter()
                .map(|g| Gen1Spec {
                    id: g.label.clone(),
                    src: self.zero_cells[g.src as usize].clone(),
                    tgt: self.zero_cells[g.tgt as usize].clone(),
                })
                .collect(),
            gen2: self
                .gen2
                .iter()
                .map(|g| Gen2Spec {
                    id: g.label.clone(),
                    from: self.zero_cells[g.src.src as usize].clone(),
                    to: self.zero_cells[g.src.tgt as usize].clone(),
                    src: ids(&g.src),
                    tgt: ids(&g.tgt),
                    invertible: g.invertible,
                })
                .collect(),
            rel2: self.rel2.iter().map(|(a, b)| [term(a), term(b)]).collect(),
        }
    }

    pub fn from_file(f: &TwoCatFile) -> Result<Self> {
        if !f.strict {
            return Err(Error::Validation("only strict 2-categories are accepted (set \"strict\": true)".into()));
        }
        let mut t = TwoCatPresentation::new(&f.name);
        let mut zi = HashMap::new();
        for (i, z) in f.zero_cells.iter().enumerate() {
            if zi.insert(z.clone(), t.add_zero_cell(z)).is_some() {
                return Err(Error::Malformed(format!("zero_cells[{i}]: duplicate 0-cell {z}")));
            }
        }
        let zero = |s: &str, path: &str| zi.get(s).copied().ok_or_else(|| Error::Malformed(format!("{path}: unknown 0-cell {s}")));
        for (i, g) in f.gen1.iter().enumerate() {
            let p = format!("gen1[{i}]");
            t.add_gen1(&g.id, zero(&g.src, &p)?, zero(&g.tgt, &p)?).map_err(|e| at_path(e, &p))?;
        }
        for (i, g) in f.gen2.iter().enumerate() {
            let p = format!("gen2[{i}]");
            let from = zero(&g.from, &p)?;
            let src = t.ids_path(from, &g.src).map_err(|e| at_path(e, &p))?;
            let tgt = t.ids_path(from, &g.tgt).map_err(|e| at_path(e, &p))?;
            let to = zero(&g.to, &p)?;
            if src.tgt != to || tgt.tgt != to {
                return Err(Error::Malformed(format!("{p}: boundaries do not end at {}", g.to)));
            }
            t.add_gen2(&g.id, src, tgt, g.invertible).map_err(|e| at_path(e, &p))?;
        }
        for (i, [a, b]) in f.rel2.iter().enumerate() {
            let p = format!("rel2[{i}]");
            let ta = t.term_of_spec(a).map_err(|e| at_path(e, &format!("{p}[0]")))?;
            let tb = t.term_of_spec(b).map_err(|e| at_path(e, &format!("{p}[1]")))?;
            t.add_rel2(ta, tb).map_err(|e| at_path(e, &p))?;
        }
        Ok(t)
    }

    fn ids_path(&self, at: u32, ids: &[String]) -> Result<Word> {
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        self.path(at, &refs).map_err(|e| match e {
            Error::Lookup(m) => Error::Malformed(format!("unknown {m}")),
            other => other,
        })
    }

    fn term_of_spec(&self, s: &TermSpec) -> Result<PastingTerm> {
        let from = self.zero_cell_id(&s.from).ok_or_else(|| Error::Malformed(format!("unknown 0-cell {}", s.from)))?;
        let src = self.ids_path(from, &s.src)?;
        let mut t = self.identity_term(&src);
        for (i, l) in s.layers.iter().enumerate() {
            let g = self.gen2_id(&l.cell).ok_or_else(|| Error::Malformed(format!("layers[{i}]: unknown 2-cell {}", l.cell)))?;
            let gen = &self.gen2[g as usize];
            let left = if l.left.is_empty() {
                Word::empty(gen.src.src)
            } else {
                let first = self.gen1_id(&l.left[0]).ok_or_else(|| Error::Malformed(format!("layers[{i}].left: unknown 1-cell {}", l.left[0])))?;
                self.ids_path(self.gen1[first as usize].src, &l.left)?
            };
            let right = self.ids_path(gen.src.tgt, &l.right)?;
            let layer = self.layer_term(left, Cell { gen: g, inverse: l.inverse }, right).map_err(|e| at_path(e, &format!("layers[{i}]")))?;
            t = self.compose_v(&t, &layer).map_err(|_| Error::Malformed(format!("layers[{i}]: does not compose")))?;
        }
        Ok(t)
    }
}

fn at_path(e: Error, path: &str) -> Error {
    match e {
        Error::Malformed(m) => Error::Malformed(format!("{path}: {m}")),
        other => other,
    }
}

/// On-disk 2-category: the presentation schema plus `gen2` and `rel2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCatFile {
    #[serde(default)]
    pub name: String,
    pub strict: bool,
    pub zero_cells: Vec<String>,
    pub gen1: Vec<Gen1Spec>,
    #[serde(default)]
    pub gen2: Vec<Gen2Spec>,
    #[serde(default)]
    pub rel2: Vec<[TermSpec; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen1Spec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen2Spec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    #[serde(default)]
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub from: String,
    pub src: Vec<String>,
    pub layers: Vec<LayerSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub left: Vec<String>,
    pub cell: String,
    #[serde(default)]
    pub inverse: bool,
    pub right: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj() -> TwoCatPresentation {
        catalog(&CatalogName::Adj).unwrap()
    }

    #[test]
    fn horizontal_composite_boundary() {
        let b = adj();
        let u = b.cell_term(Cell { gen: b.gen2_id("u").unwrap(), inverse: false }).unwrap();
        let fg = b.path(0, &["f", "g"]).unwrap();
        let t = b.compose_h(&u, &b.identity_term(&fg)).unwrap();
        assert_eq!(t.src, fg);
        assert_eq!(b.display_path(&t.tgt), "f.g.f.g");
    }

    #[test]
    fn unit_laws_for_terms() {
        let b = adj();
        let u = b.cell_term(Cell { gen: b.gen2_id("u").unwrap(), inverse: false }).unwrap();
        assert_eq!(b.compose_v(&u, &b.identity_term(&u.tgt)).unwrap(), u);
        assert_eq!(b.whisker(&Word::empty(0), &u, &Word::empty(0)).unwrap(), u);
    }

    #[test]
    fn boundary_mismatch_is_a_precondition_error() {
        let b = adj();
        let u = b.cell_term(Cell { gen: b.gen2_id("u").unwrap(), inverse: false }).unwrap();
        assert!(matches!(b.compose_v(&u, &u), Err(Error::Precondition(_))));
    }

    #[test]
    fn inverse_of_noninvertible_cell_is_rejected() {
        let b = adj();
        assert!(b.cell_term(Cell { gen: 0, inverse: true }).is_err());
    }

    #[test]
    fn triangle_identities_hold() {
        let b = adj();
        let bud = SearchBudget::default();
        let f = b.path(0, &["f"]).unwrap();
        let t = b.term(&f, &[(&[], "u", false, &["f"]), (&["f"], "c", false, &[])]).unwrap();
        assert!(b.pasting_equal(&t, &b.identity_term(&f), &bud).unwrap().is_equal());
        let g = b.path(1, &["g"]).unwrap();
        let t = b.term(&g, &[(&["g"], "u", false, &[]), (&[], "c", false, &["g"])]).unwrap();
        assert!(b.pasting_equal(&t, &b.identity_term(&g), &bud).unwrap().is_equal());
    }

    #[test]
    fn interchange_of_independent_cells() {
        let b = catalog(&CatalogName::BDeltaPlus).unwrap();
        let x = b.path(0, &["x"]).unwrap();
        let t1 = b.term(&x, &[(&[], "η", false, &["x"]), (&["x", "x"], "η", false, &[])]).unwrap();
        let t2 = b.term(&x, &[(&["x"], "η", false, &[]), (&[], "η", false, &["x", "x"])]).unwrap();
        assert!(b.pasting_equal(&t1, &t2, &SearchBudget::default()).unwrap().is_equal());
    }

    #[test]
    fn inverse_cancels_in_adjoint_equivalence() {
        let b = catalog(&CatalogName::AdjEq).unwrap();
        let e = Word::empty(0);
        let t = b.term(&e, &[(&[], "u", false, &[]), (&[], "u", true, &[])]).unwrap();
        assert!(b.pasting_equal(&t, &b.identity_term(&e), &SearchBudget::default()).unwrap().is_equal());
    }

    #[test]
    fn file_round_trip_and_strictness_flag() {
        let b = adj();
        let f = b.to_file();
        let back = TwoCatPresentation::from_file(&serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap()).unwrap();
        assert_eq!(back, b);
        let mut weak = f.clone();
        weak.strict = false;
        assert!(matches!(TwoCatPresentation::from_file(&weak), Err(Error::Validation(_))));
    }
}
