//! Hom-categories of a presented 2-category as 1-category presentations.
//!
//! Objects of `hom(X, Y)` are the 1-cell words `X -> Y` up to a length bound.
//! Generators are layers `l * γ^{±1} * r`. Relations are whiskered 2-relations,
//! interchange of two layers acting on disjoint segments, and cancellation of
//! formal inverses. Every relation instance whose intermediate 1-cells exceed
//! the bound is dropped, so only the truncation is presented.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::present::{CatPresentation, GenId, ObjId, PresentationBuilder, SearchBudget, Word};

use super::{concat, Cell, Layer, PastingTerm, TwoCatPresentation};

/// Left letters, cell, right letters. Endpoints are implied by the cell.
pub type LayerKey = (Vec<u32>, Cell, Vec<u32>);

/// Hard cap on emitted layer generators per call.
const LAYER_CAP: usize = 200_000;

/// Truncation of 1-cells: a length cap and an optional degree cap, where the
/// degree of a word is the number of its letters landing on `base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub base: u32,
    pub max_len: usize,
    pub max_degree: Option<usize>,
}

impl Bound {
    pub fn length(base: u32, max_len: usize) -> Self {
        Bound { base, max_len, max_degree: None }
    }

    pub fn degree(b: &TwoCatPresentation, w: &Word, base: u32) -> usize {
        w.letters.iter().filter(|&&g| b.gen1()[g as usize].tgt == base).count()
    }

    pub fn fits(&self, b: &TwoCatPresentation, w: &Word) -> bool {
        w.len() <= self.max_len && self.max_degree.is_none_or(|d| Bound::degree(b, w, self.base) <= d)
    }
}

/// All 1-cell words `x -> y` of length at most `max_len`, shortlex.
pub fn one_cells(b: &TwoCatPresentation, x: u32, y: u32, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level = vec![Word::empty(x)];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for w in &level {
            if w.tgt == y {
                out.push(w.clone());
            }
            if len == max_len {
                continue;
            }
            for (g, c) in b.gen1().iter().enumerate() {
                if c.src == w.tgt {
                    let mut letters = w.letters.clone();
                    letters.push(g as u32);
                    next.push(Word { src: x, tgt: c.tgt, letters });
                }
            }
        }
        level = next;
    }
    out
}

fn cells(b: &TwoCatPresentation) -> Vec<Cell> {
    let mut out = Vec::new();
    for (i, g) in b.gen2().iter().enumerate() {
        out.push(Cell { gen: i as u32, inverse: false });
        if g.invertible {
            out.push(Cell { gen: i as u32, inverse: true });
        }
    }
    out
}

/// Writes truncated hom-categories into a shared builder.
#[derive(Default)]
pub(crate) struct HomEmitter {
    pub objects: HashMap<Word, ObjId>,
    pub layers: HashMap<LayerKey, GenId>,
    pub layer_of: HashMap<GenId, Layer>,
}

impl HomEmitter {
    pub fn object(&mut self, b: &TwoCatPresentation, pb: &mut PresentationBuilder, w: &Word) -> ObjId {
        if let Some(&o) = self.objects.get(w) {
            return o;
        }
        let o = pb.object(&b.display_path(w));
        self.objects.insert(w.clone(), o);
        o
    }

    fn layer(&self, l: &Layer) -> Option<GenId> {
        self.layers.get(&(l.left.letters.clone(), l.cell, l.right.letters.clone())).copied()
    }

    /// The word of layer generators spelling `t`.
    pub fn word_of(&self, pb_word: impl Fn(ObjId, &[GenId]) -> Result<Word>, t: &PastingTerm) -> Result<Word> {
        let src = *self
            .objects
            .get(&t.src)
            .ok_or_else(|| Error::Budget("term boundary exceeds the 1-cell length bound".into()))?;
        let mut letters = Vec::with_capacity(t.layers.len());
        for l in &t.layers {
            letters.push(self.layer(l).ok_or_else(|| Error::Budget("term passes through a 1-cell beyond the length bound".into()))?);
        }
        pb_word(src, &letters)
    }

    pub fn emit(&mut self, b: &TwoCatPresentation, x: u32, y: u32, bound: Bound, pb: &mut PresentationBuilder) -> Result<()> {
        let max_len = bound.max_len;
        let fits = |w: &Word| bound.fits(b, w);
        for w in one_cells(b, x, y, max_len) {
            if fits(&w) {
                self.object(b, pb, &w);
            }
        }
        let zc = b.zero_cells().len() as u32;
        // words[(p, q)] = 1-cell words p -> q usable as whiskers.
        let mut words: HashMap<(u32, u32), Vec<Word>> = HashMap::new();
        for p in 0..zc {
            for q in 0..zc {
                words.insert((p, q), one_cells(b, p, q, max_len));
            }
        }
        let ws = |p: u32, q: u32, room: usize| -> Vec<&Word> {
            words[&(p, q)].iter().filter(|w| w.len() <= room).collect()
        };
        let all_cells = cells(b);
        let width = |c: Cell| {
            let (s, t) = b.cell_boundary(c);
            s.len().max(t.len())
        };
        for &c in &all_cells {
            let (a, _) = b.cell_boundary(c);
            let (p, q) = (a.src, a.tgt);
            let Some(room) = max_len.checked_sub(width(c)) else { continue };
            for l in ws(x, p, room) {
                for r in ws(q, y, room - l.len()) {
                    let layer = Layer { left: l.clone(), cell: c, right: r.clone() };
                    let key = (l.letters.clone(), c, r.letters.clone());
                    if self.layers.contains_key(&key) {
                        continue;
                    }
                    let (s, t) = b.layer_boundary(&layer);
                    if !fits(&s) || !fits(&t) {
                        continue;
                    }
                    let (so, to) = (self.object(b, pb, &s), self.object(b, pb, &t));
                    let id = pb.generator(&b.layer_label(&layer), so, to)?;
                    self.layers.insert(key, id);
                    self.layer_of.insert(id, layer);
                    if self.layers.len() > LAYER_CAP {
                        return Err(Error::Budget(format!("more than {LAYER_CAP} layer generators")));
                    }
                }
            }
        }
        let word = |em: &HomEmitter, pb: &PresentationBuilder, t: &PastingTerm| em.word_of(|s, l| pb.word(s, l), t);

        for (t1, t2) in b.rel2() {
            let longest = [t1, t2]
                .iter()
                .flat_map(|t| std::iter::once(t.src.len()).chain(t.layers.iter().map(|l| b.layer_boundary(l).1.len())))
                .max()
                .unwrap_or(0);
            let Some(room) = max_len.checked_sub(longest) else { continue };
            for l in ws(x, t1.src.src, room) {
                for r in ws(t1.src.tgt, y, room - l.len()) {
                    let (w1, w2) = (b.whisker(l, t1, r)?, b.whisker(l, t2, r)?);
                    if !term_fits(b, &bound, &w1) || !term_fits(b, &bound, &w2) {
                        continue;
                    }
                    let a = word(self, pb, &w1)?;
                    let c = word(self, pb, &w2)?;
                    pb.relation(a, c)?;
                }
            }
        }

        for &c1 in &all_cells {
            for &c2 in &all_cells {
                let Some(room) = max_len.checked_sub(width(c1) + width(c2)) else { continue };
                let (a, bb) = b.cell_boundary(c1);
                let (cc, d) = b.cell_boundary(c2);
                let (a, bb, cc, d) = (a.clone(), bb.clone(), cc.clone(), d.clone());
                for l in ws(x, a.src, room) {
                    for m in ws(a.tgt, cc.src, room - l.len()) {
                        for r in ws(cc.tgt, y, room - l.len() - m.len()) {
                            let first = [
                                Layer { left: l.clone(), cell: c1, right: concat(&[m, &cc, r]) },
                                Layer { left: concat(&[l, &bb, m]), cell: c2, right: r.clone() },
                            ];
                            let second = [
                                Layer { left: concat(&[l, &a, m]), cell: c2, right: r.clone() },
                                Layer { left: l.clone(), cell: c1, right: concat(&[m, &d, r]) },
                            ];
                            let mids = [concat(&[l, &a, m, &cc, r]), concat(&[l, &bb, m, &cc, r]), concat(&[l, &a, m, &d, r]), concat(&[l, &bb, m, &d, r])];
                            if !mids.iter().all(&fits) {
                                continue;
                            }
                            let lw = self.stack(pb, &first)?;
                            let rw = self.stack(pb, &second)?;
                            pb.relation(lw, rw)?;
                        }
                    }
                }
            }
        }

        for &c in &all_cells {
            if !c.inverse {
                continue;
            }
            let fwd = Cell { gen: c.gen, inverse: false };
            let Some(room) = max_len.checked_sub(width(c)) else { continue };
            let (a, bb) = b.cell_boundary(fwd);
            for l in ws(x, a.src, room) {
                for r in ws(a.tgt, y, room - l.len()) {
                    if !fits(&concat(&[l, a, r])) || !fits(&concat(&[l, bb, r])) {
                        continue;
                    }
                    let f = Layer { left: l.clone(), cell: fwd, right: r.clone() };
                    let i = Layer { left: l.clone(), cell: c, right: r.clone() };
                    let there = self.stack(pb, &[f.clone(), i.clone()])?;
                    let back = self.stack(pb, &[i, f])?;
                    pb.relation(there, Word::empty(self.objects[&concat(&[l, a, r])]))?;
                    pb.relation(back, Word::empty(self.objects[&concat(&[l, bb, r])]))?;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn stack(&self, pb: &PresentationBuilder, layers: &[Layer]) -> Result<Word> {
        let ids: Vec<GenId> = layers.iter().map(|l| self.layer(l).expect("layer within bound")).collect();
        let src = pb.generator_at(ids[0]).src;
        pb.word(src, &ids)
    }
}

fn term_fits(b: &TwoCatPresentation, bound: &Bound, t: &PastingTerm) -> bool {
    bound.fits(b, &t.src) && t.layers.iter().all(|l| bound.fits(b, &b.layer_boundary(l).1))
}

/// `hom(x, y)` truncated at a [`Bound`].
pub struct HomCategory {
    pub x: u32,
    pub y: u32,
    pub bound: Bound,
    pres: CatPresentation,
    emitter: HomEmitter,
    objects: Vec<Word>,
}

impl HomCategory {
    pub fn presentation(&self) -> &CatPresentation {
        &self.pres
    }

    /// The 1-cell word each object stands for, indexed by object id.
    pub fn objects(&self) -> &[Word] {
        &self.objects
    }

    pub fn object_of(&self, w: &Word) -> Option<ObjId> {
        self.emitter.objects.get(w).copied()
    }

    pub fn layer(&self, g: GenId) -> &Layer {
        &self.emitter.layer_of[&g]
    }

    pub fn word_of(&self, t: &PastingTerm) -> Result<Word> {
        self.emitter.word_of(|s, l| self.pres.word(s, l), t)
    }

    pub fn term_of(&self, w: &Word) -> PastingTerm {
        let src = self.objects[w.src as usize].clone();
        let tgt = self.objects[w.tgt as usize].clone();
        PastingTerm { src, tgt, layers: w.letters.iter().map(|&g| self.layer(g).clone()).collect() }
    }
}

/// `hom(x, y)` with 1-cells up to the budget's word length.
pub fn hom_category(b: &TwoCatPresentation, x: u32, y: u32, budget: &SearchBudget) -> Result<HomCategory> {
    hom_category_bounded(b, x, y, Bound::length(x, budget.max_word_length), budget)
}

pub fn hom_category_bounded(b: &TwoCatPresentation, x: u32, y: u32, bound: Bound, budget: &SearchBudget) -> Result<HomCategory> {
    budget.validate()?;
    let n = b.zero_cells().len() as u32;
    if x >= n || y >= n {
        return Err(Error::Lookup(format!("0-cell {} is not declared", x.max(y))));
    }
    let mut pb = PresentationBuilder::new();
    let mut emitter = HomEmitter::default();
    emitter.emit(b, x, y, bound, &mut pb)?;
    let mut objects = vec![Word::empty(x); emitter.objects.len()];
    for (w, &o) in &emitter.objects {
        objects[o as usize] = w.clone();
    }
    Ok(HomCategory { x, y, bound, pres: pb.build(), emitter, objects })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paracyclic::delta_maps;
    use crate::twocat::{catalog, CatalogName};

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Monotone maps from an a-element to a b-element ordinal: C(a+b-1, a).
    fn monotone(a: usize, b: usize) -> usize {
        if a == 0 {
            1
        } else {
            binom(a + b - 1, a)
        }
    }

    #[test]
    fn one_cells_of_adj() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let w = one_cells(&b, 0, 0, 4);
        let shown: Vec<_> = w.iter().map(|w| b.display_path(w)).collect();
        assert_eq!(shown, ["∅0", "f.g", "f.g.f.g"]);
    }

    fn assert_delta_plus(b: &TwoCatPresentation, x: u32, unit: &[&str], k_max: usize) {
        let bud = SearchBudget::default();
        let h = hom_category_bounded(b, x, x, Bound::length(x, k_max * unit.len()), &bud).unwrap();
        let fp = h.presentation().to_finite(4096).unwrap();
        let c = &fp.category;
        let one = b.path(x, unit).unwrap();
        for a in 0..=k_max {
            for bb in 0..=k_max {
                let (oa, ob) = (h.object_of(&one.pow(a)).unwrap(), h.object_of(&one.pow(bb)).unwrap());
                assert_eq!(c.hom(oa, ob).len(), monotone(a, bb), "hom({a},{bb})");
                if a > 0 && bb > 0 {
                    assert_eq!(monotone(a, bb), delta_maps(a - 1, bb - 1).len());
                }
            }
        }
    }

    #[test]
    fn adj_endo_hom_is_augmented_simplex() {
        assert_delta_plus(&catalog(&CatalogName::Adj).unwrap(), 0, &["f", "g"], 3);
    }

    #[test]
    fn walking_monoid_hom_is_augmented_simplex() {
        assert_delta_plus(&catalog(&CatalogName::BDeltaPlus).unwrap(), 0, &["x"], 3);
        assert_delta_plus(&catalog(&CatalogName::Mon).unwrap(), 0, &["x"], 3);
    }

    #[test]
    fn scalars_commute() {
        let b = catalog(&CatalogName::SigmaAb(vec![2, 3])).unwrap();
        let h = hom_category_bounded(&b, 0, 0, Bound::length(0, 0), &SearchBudget::default()).unwrap();
        let fp = h.presentation().to_finite(100).unwrap();
        assert_eq!(fp.category.morphism_count(), 6);
    }

    #[test]
    fn terminal_hom_is_terminal() {
        let b = catalog(&CatalogName::Terminal).unwrap();
        let h = hom_category(&b, 0, 0, &SearchBudget::default()).unwrap();
        let fp = h.presentation().to_finite(10).unwrap();
        assert_eq!(fp.category.morphism_count(), 1);
    }

    #[test]
    fn adjend_objects_of_degree_two() {
        let b = catalog(&CatalogName::AdjEnd).unwrap();
        let bound = Bound { base: 0, max_len: 4, max_degree: Some(2) };
        let h = hom_category_bounded(&b, 0, 0, bound, &SearchBudget::default()).unwrap();
        let mut shown: Vec<_> = h.objects().iter().map(|w| b.display_path(w)).collect();
        shown.sort();
        assert_eq!(shown, ["f.g", "f.g.f.g", "f.g.q", "q", "q.f.g", "q.q", "∅0"]);
    }

    #[test]
    fn term_round_trip() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let h = hom_category_bounded(&b, 0, 1, Bound::length(0, 3), &SearchBudget::default()).unwrap();
        let f = b.path(0, &["f"]).unwrap();
        let t = b.term(&f, &[(&[], "u", false, &["f"])]).unwrap();
        assert_eq!(h.term_of(&h.word_of(&t).unwrap()), t);
    }
}
