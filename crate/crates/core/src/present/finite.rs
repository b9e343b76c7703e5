//! Finite categories by composition table, and exact enumeration of finite presentations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::certificate::{ExactNormalizer, SeparatingModel};
use super::{CatPresentation, GenId, ObjId, Word};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub src: ObjId,
    pub tgt: ObjId,
    pub label: String,
}

/// A category with finitely many morphisms and a full composition table.
///
/// Composition is diagrammatic: `compose(f, g)` is "f then g".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    table: Vec<u32>,
}

/// Serialized form: composition is a list of `[f, g, f;g]` triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    pub compose: Vec<[usize; 3]>,
}

impl FiniteCategory {
    /// Builds and validates a category from a composition function on composable pairs.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = morphisms.len();
        let mut table = vec![NONE; n * n];
        for f in 0..n {
            for g in 0..n {
                if morphisms[f].tgt == morphisms[g].src {
                    let h = compose(f, g);
                    if h >= n {
                        return Err(Error::Validation(format!("composite of {f} and {g} is out of range")));
                    }
                    table[f * n + g] = h as u32;
                }
            }
        }
        let c = FiniteCategory { objects, morphisms, identities, table };
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn from_table_unchecked(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        table: Vec<u32>,
    ) -> Self {
        FiniteCategory { objects, morphisms, identities, table }
    }

    /// Checks typing, unit laws and associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.morphisms.len();
        let no = self.objects.len() as ObjId;
        if self.identities.len() != self.objects.len() {
            return Err(Error::Validation("one identity per object is required".into()));
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            if m.src >= no || m.tgt >= no {
                return Err(Error::Validation(format!("morphism {i} has an undeclared endpoint")));
            }
        }
        for (o, &id) in self.identities.iter().enumerate() {
            let m = self.morphisms.get(id).ok_or_else(|| Error::Validation(format!("identity of {o} missing")))?;
            if m.src as usize != o || m.tgt as usize != o {
                return Err(Error::Validation(format!("identity of object {o} is not an endomorphism of it")));
            }
        }
        for f in 0..n {
            let (s, t) = (self.morphisms[f].src, self.morphisms[f].tgt);
            if self.compose(self.identities[s as usize], f) != Some(f) || self.compose(f, self.identities[t as usize]) != Some(f)
            {
                return Err(Error::Validation(format!("unit law fails at morphism {f}")));
            }
            for g in 0..n {
                let Some(fg) = self.compose(f, g) else { continue };
                let m = &self.morphisms[fg];
                if m.src != s || m.tgt != self.morphisms[g].tgt {
                    return Err(Error::Validation(format!("composite of {f} and {g} has the wrong boundary")));
                }
                for h in 0..n {
                    if self.morphisms[g].tgt != self.morphisms[h].src {
                        continue;
                    }
                    let gh = self.compose(g, h).unwrap();
                    if self.compose(fg, h) != self.compose(f, gh) {
                        return Err(Error::Validation(format!("associativity fails at ({f}, {g}, {h})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn identity(&self, obj: ObjId) -> usize {
        self.identities[obj as usize]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].src as usize] == f
    }

    pub fn src(&self, f: usize) -> ObjId {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: usize) -> ObjId {
        self.morphisms[f].tgt
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let n = self.morphisms.len();
        match self.table.get(f * n + g) {
            Some(&h) if h != NONE => Some(h as usize),
            _ => None,
        }
    }

    /// Composite of a path, or `None` if it is not composable.
    pub fn compose_path(&self, start: ObjId, path: &[usize]) -> Option<usize> {
        let mut acc = self.identity(start);
        for &f in path {
            acc = self.compose(acc, f)?;
        }
        Some(acc)
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].src == a && self.morphisms[f].tgt == b).collect()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (s, t) = (self.src(f), self.tgt(f));
        self.hom(t, s)
            .into_iter()
            .find(|&g| self.compose(f, g) == Some(self.identity(s)) && self.compose(g, f) == Some(self.identity(t)))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn terminal() -> Self {
        Self::monoid("pt", 1, |_, _| 0).unwrap()
    }

    /// The one-object category of a finite monoid on `0..n` with unit `0`.
    pub fn monoid(obj: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let morphisms = (0..n).map(|i| Morphism { src: 0, tgt: 0, label: format!("{i}") }).collect();
        Self::new(vec![obj.to_string()], morphisms, vec![0], mul)
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic_group(n: usize) -> Self {
        Self::monoid("pt", n, |a, b| (a + b) % n).unwrap()
    }

    pub fn discrete(k: usize) -> Self {
        let objects = (0..k).map(|i| format!("{i}")).collect();
        let morphisms = (0..k).map(|i| Morphism { src: i as ObjId, tgt: i as ObjId, label: format!("id{i}") }).collect();
        Self::new(objects, morphisms, (0..k).collect(), |f, _| f).unwrap()
    }

    /// One morphism between every ordered pair of `k` objects.
    pub fn indiscrete(k: usize) -> Self {
        let objects = (0..k).map(|i| format!("{i}")).collect();
        let morphisms = (0..k * k)
            .map(|m| Morphism { src: (m / k) as ObjId, tgt: (m % k) as ObjId, label: format!("{}->{}", m / k, m % k) })
            .collect();
        Self::new(objects, morphisms, (0..k).map(|i| i * k + i).collect(), |f, g| (f / k) * k + g % k).unwrap()
    }

    pub fn to_file(&self) -> FiniteCategoryFile {
        let n = self.morphisms.len();
        let mut compose = Vec::new();
        for f in 0..n {
            for g in 0..n {
                if let Some(h) = self.compose(f, g) {
                    compose.push([f, g, h]);
                }
            }
        }
        FiniteCategoryFile {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            compose,
        }
    }

    pub fn from_file(f: &FiniteCategoryFile) -> Result<Self> {
        let n = f.morphisms.len();
        let mut table = vec![NONE; n * n];
        for (i, &[a, b, c]) in f.compose.iter().enumerate() {
            if a >= n || b >= n || c >= n {
                return Err(Error::Malformed(format!("compose[{i}]: morphism index out of range")));
            }
            table[a * n + b] = c as u32;
        }
        for a in 0..n {
            for b in 0..n {
                if f.morphisms[a].tgt == f.morphisms[b].src && table[a * n + b] == NONE {
                    return Err(Error::Malformed(format!("compose: missing composite of {a} and {b}")));
                }
            }
        }
        let c = FiniteCategory {
            objects: f.objects.clone(),
            morphisms: f.morphisms.clone(),
            identities: f.identities.clone(),
            table,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Exact enumeration of a finite presented category.
///
/// Element `i` is represented by the shortlex-least word in its class.
#[derive(Clone, Debug)]
pub struct FinitePresentation {
    pub category: FiniteCategory,
    pub words: Vec<Word>,
    /// Right action of each generator: `next[element][generator]`, `NONE` if not composable.
    next: Vec<Vec<u32>>,
    roots: Vec<usize>,
}

impl FinitePresentation {
    /// The element named by `w`.
    pub fn eval(&self, w: &Word) -> usize {
        let mut at = self.roots[w.src as usize];
        for &g in &w.letters {
            at = self.next[at][g as usize] as usize;
        }
        at
    }

    pub fn generator_image(&self, g: GenId, src: ObjId) -> usize {
        self.next[self.roots[src as usize]][g as usize] as usize
    }
}

impl SeparatingModel for FinitePresentation {
    fn name(&self) -> &str {
        "finite enumeration"
    }

    fn evaluate(&self, p: &CatPresentation, w: &Word) -> Option<String> {
        p.check_word(w).ok()?;
        Some(self.eval(w).to_string())
    }
}

impl ExactNormalizer for FinitePresentation {
    fn name(&self) -> &str {
        "finite enumeration"
    }

    fn normal_form(&self, _p: &CatPresentation, w: &Word) -> Word {
        self.words[self.eval(w)].clone()
    }
}

struct Enumerator<'a> {
    p: &'a CatPresentation,
    slot: Vec<usize>,
    slots_at: Vec<usize>,
    obj: Vec<ObjId>,
    trans: Vec<Vec<u32>>,
    parent: Vec<u32>,
    cap: usize,
}

impl Enumerator<'_> {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn new_node(&mut self, obj: ObjId) -> Result<u32> {
        if self.obj.len() >= self.cap {
            return Err(Error::Budget(format!("enumeration exceeded {} elements", self.cap)));
        }
        let id = self.obj.len() as u32;
        self.obj.push(obj);
        self.trans.push(vec![NONE; self.slots_at[obj as usize]]);
        self.parent.push(id);
        Ok(id)
    }

    fn step(&mut self, x: u32, g: GenId) -> Result<u32> {
        let x = self.find(x);
        let s = self.slot[g as usize];
        let t = self.trans[x as usize][s];
        if t != NONE {
            return Ok(self.find(t));
        }
        let y = self.new_node(self.p.generator(g).tgt)?;
        self.trans[x as usize][s] = y;
        Ok(y)
    }

    fn trace(&mut self, x: u32, letters: &[GenId]) -> Result<u32> {
        let mut at = self.find(x);
        for &g in letters {
            at = self.step(at, g)?;
        }
        Ok(at)
    }

    /// Returns true when a merge happened.
    fn coincide(&mut self, a: u32, b: u32) -> bool {
        let mut queue = vec![(a, b)];
        let mut merged = false;
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            merged = true;
            let (keep, kill) = (a.min(b), a.max(b));
            self.parent[kill as usize] = keep;
            let row = std::mem::take(&mut self.trans[kill as usize]);
            for (s, &tk) in row.iter().enumerate() {
                if tk == NONE {
                    continue;
                }
                let tkeep = self.trans[keep as usize][s];
                if tkeep == NONE {
                    self.trans[keep as usize][s] = tk;
                } else {
                    queue.push((tk, tkeep));
                }
            }
        }
        merged
    }
}

/// Coset-style enumeration of every morphism, with all relations imposed at every element.
pub(crate) fn enumerate(p: &CatPresentation, cap: usize) -> Result<FinitePresentation> {
    let nobj = p.objects().len();
    let mut slot = vec![0; p.generators().len()];
    let mut slots_at = vec![0; nobj];
    let mut out_gens: Vec<Vec<GenId>> = vec![Vec::new(); nobj];
    for (i, g) in p.generators().iter().enumerate() {
        slot[i] = slots_at[g.src as usize];
        slots_at[g.src as usize] += 1;
        out_gens[g.src as usize].push(i as GenId);
    }
    let mut rels_at: Vec<Vec<usize>> = vec![Vec::new(); nobj];
    for (i, (l, _)) in p.relations().iter().enumerate() {
        rels_at[l.src as usize].push(i);
    }
    let mut e = Enumerator { p, slot, slots_at, obj: Vec::new(), trans: Vec::new(), parent: Vec::new(), cap };
    let mut roots = Vec::with_capacity(nobj);
    for o in 0..nobj {
        roots.push(e.new_node(o as ObjId)? as usize);
    }
    let mut i = 0usize;
    loop {
        while i < e.obj.len() {
            let x = i as u32;
            i += 1;
            if e.find(x) != x {
                continue;
            }
            let o = e.obj[x as usize];
            for &r in &rels_at[o as usize] {
                let (l, rr) = &p.relations()[r];
                let a = e.trace(x, &l.letters)?;
                let b = e.trace(x, &rr.letters)?;
                e.coincide(a, b);
            }
            if e.find(x) != x {
                continue;
            }
            for &g in &out_gens[o as usize] {
                e.step(x, g)?;
            }
        }
        let before = e.obj.len();
        let mut changed = false;
        for x in 0..before as u32 {
            if e.find(x) != x {
                continue;
            }
            let o = e.obj[x as usize];
            for &r in &rels_at[o as usize] {
                let (l, rr) = &p.relations()[r];
                let a = e.trace(x, &l.letters)?;
                let b = e.trace(x, &rr.letters)?;
                changed |= e.coincide(a, b);
            }
        }
        if !changed && e.obj.len() == before {
            break;
        }
    }
    // Shortlex-ordered breadth-first relabelling from the roots.
    let mut index: HashMap<u32, usize> = HashMap::new();
    let mut words: Vec<Word> = Vec::new();
    let mut order: Vec<u32> = Vec::new();
    for (o, &r) in roots.iter().enumerate() {
        let r = e.find(r as u32);
        index.insert(r, words.len());
        words.push(Word::empty(o as ObjId));
        order.push(r);
    }
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        let w = words[head].clone();
        head += 1;
        for &g in &out_gens[e.obj[x as usize] as usize] {
            let y = e.step(x, g)?;
            if let std::collections::hash_map::Entry::Vacant(v) = index.entry(y) {
                v.insert(words.len());
                let mut letters = w.letters.clone();
                letters.push(g);
                words.push(Word { src: w.src, tgt: p.generator(g).tgt, letters });
                order.push(y);
            }
        }
    }
    let n = words.len();
    let mut next = vec![vec![NONE; p.generators().len()]; n];
    for (k, &x) in order.iter().enumerate() {
        for &g in &out_gens[e.obj[x as usize] as usize] {
            let y = e.step(x, g)?;
            next[k][g as usize] = index[&y] as u32;
        }
    }
    let roots: Vec<usize> = (0..nobj).collect();
    let morphisms: Vec<Morphism> =
        words.iter().map(|w| Morphism { src: w.src, tgt: w.tgt, label: p.display_word(w) }).collect();
    let mut table = vec![NONE; n * n];
    for f in 0..n {
        for g in 0..n {
            if morphisms[f].tgt != morphisms[g].src {
                continue;
            }
            let mut at = f;
            for &l in &words[g].letters {
                at = next[at][l as usize] as usize;
            }
            table[f * n + g] = at as u32;
        }
    }
    let category = FiniteCategory::from_table_unchecked(p.objects().to_vec(), morphisms, roots.clone(), table);
    Ok(FinitePresentation { category, words, next, roots })
}

#[cfg(test)]
mod tests {
    use super::super::{PresentationBuilder, SearchBudget};
    use super::*;

    #[test]
    fn cyclic_group_table_is_valid() {
        let c = FiniteCategory::cyclic_group(5);
        assert!(c.validate().is_ok());
        assert_eq!(c.inverse(2), Some(3));
    }

    #[test]
    fn broken_table_is_rejected() {
        let r = FiniteCategory::monoid("x", 2, |a, b| if a == 0 { b } else if b == 0 { a } else { 1 });
        assert!(r.is_ok());
        let r = FiniteCategory::monoid("x", 3, |a, b| if a == 0 { b } else if b == 0 { a } else { 3 - a });
        assert!(r.is_err());
    }

    #[test]
    fn enumerates_the_symmetric_group_on_three_letters() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let s = b.generator("s", x, x).unwrap();
        let t = b.generator("t", x, x).unwrap();
        for (l, r) in [(vec![s, s], vec![]), (vec![t, t], vec![]), (vec![s, t, s], vec![t, s, t])] {
            let (l, r) = (b.word(x, &l).unwrap(), b.word(x, &r).unwrap());
            b.relation(l, r).unwrap();
        }
        let p = b.build();
        let f = p.to_finite(1000).unwrap();
        assert_eq!(f.category.morphism_count(), 6);
        assert!(f.category.validate().is_ok());
        let q = p.clone().with_normalizer(std::sync::Arc::new(f));
        let w = q.word(0, &[t, s, t, s]).unwrap();
        assert_eq!(q.normalize(&w, &SearchBudget::default()).unwrap().word().unwrap().letters, vec![s, t]);
    }

    #[test]
    fn two_object_enumeration() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let y = b.object("y");
        let f = b.generator("f", x, y).unwrap();
        let g = b.generator("g", y, x).unwrap();
        let l = b.word(x, &[f, g]).unwrap();
        b.relation(l, Word::empty(x)).unwrap();
        let l = b.word(y, &[g, f]).unwrap();
        b.relation(l, Word::empty(y)).unwrap();
        let fin = b.build().to_finite(100).unwrap();
        assert_eq!(fin.category.morphism_count(), 4);
    }

    #[test]
    fn infinite_presentation_hits_the_cap() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        b.generator("a", x, x).unwrap();
        assert!(matches!(b.build().to_finite(50), Err(Error::Budget(_))));
    }
}
