//! Finitely presented categories.
//!
//! A presentation is a finite set of objects, generating morphisms and
//! relations between parallel words. Infinite categories (the trace
//! categories of most 2-categories) are handled by truncating at a degree
//! bound when the presentation is built.
//!
//! Words are diagrammatic: `[a, b]` means "first `a`, then `b`".

mod certificate;
mod finite;
mod rewrite;
mod skeleton;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use certificate::{
    integer_invariants, Certificate, Coverage, EqualityVerdict, ExactNormalizer, NormalizeOutcome,
    SeparatingModel, WeightInvariant,
};
pub use finite::{FiniteCategory, FiniteCategoryFile, FinitePresentation, Morphism};
pub use rewrite::{RewriteStep, Witness};
pub(crate) use rewrite::apply as apply_step;
pub use skeleton::{AutGenerator, ObjectClass, Order, SkeletonReport};

/// Element cap for the cached enumeration attempt behind `equal` and `normalize`.
const FINITE_PROBE_CAP: usize = 4096;

pub type ObjId = u32;
pub type GenId = u32;

/// A composable sequence of generators from `src` to `tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub src: ObjId,
    pub tgt: ObjId,
    pub letters: Vec<GenId>,
}

impl Word {
    pub fn empty(obj: ObjId) -> Self {
        Word { src: obj, tgt: obj, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length-then-lexicographic comparison on generator ids.
    pub fn canonical_cmp(&self, other: &Word) -> std::cmp::Ordering {
        shortlex(&self.letters, &other.letters)
    }

    /// `self` followed by `other`; the caller guarantees `self.tgt == other.src`.
    pub fn then(&self, other: &Word) -> Word {
        debug_assert_eq!(self.tgt, other.src);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { src: self.src, tgt: other.tgt, letters }
    }

    pub fn pow(&self, k: usize) -> Word {
        debug_assert_eq!(self.src, self.tgt);
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word { src: self.src, tgt: self.tgt, letters }
    }
}

pub(crate) fn shortlex(a: &[GenId], b: &[GenId]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub label: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A directed multigraph with labelled vertices and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len() as u32;
        let mut seen = HashMap::new();
        for v in &self.vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(Error::Malformed(format!("duplicate vertex {v}")));
            }
        }
        let mut seen = HashMap::new();
        for e in &self.edges {
            if e.src >= n || e.tgt >= n {
                return Err(Error::Malformed(format!("edge {} has a dangling endpoint", e.label)));
            }
            if seen.insert(e.label.as_str(), ()).is_some() {
                return Err(Error::Malformed(format!("duplicate edge {}", e.label)));
            }
        }
        Ok(())
    }
}

/// Bounds for every search. All fields are strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_word_length: usize,
    pub max_rewrite_steps: usize,
    pub max_enumeration: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_word_length: 10, max_rewrite_steps: 20_000, max_enumeration: 5_000 }
    }
}

impl SearchBudget {
    pub fn new(max_word_length: usize, max_rewrite_steps: usize, max_enumeration: usize) -> Result<Self> {
        let b = SearchBudget { max_word_length, max_rewrite_steps, max_enumeration };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_word_length == 0 || self.max_rewrite_steps == 0 || self.max_enumeration == 0 {
            return Err(Error::Precondition("search budget fields must be positive".into()));
        }
        Ok(())
    }
}

/// A category given by objects, generators and relations.
///
/// The relation set is closed under nothing; rewriting uses each relation in
/// both directions. An attached exact normalizer or separating model must
/// respect every relation; models are checked when attached.
#[derive(Clone)]
pub struct CatPresentation {
    objects: Vec<String>,
    generators: Vec<Generator>,
    relations: Vec<(Word, Word)>,
    normalizer: Option<Arc<dyn ExactNormalizer>>,
    models: Vec<Arc<dyn SeparatingModel>>,
    object_index: HashMap<String, ObjId>,
    generator_index: HashMap<String, GenId>,
    rules: Arc<OnceLock<rewrite::RuleIndex>>,
    invariants: Arc<OnceLock<Vec<WeightInvariant>>>,
    finite: Arc<OnceLock<Option<Arc<FinitePresentation>>>>,
    lookup: Arc<OnceLock<HashMap<(ObjId, Vec<GenId>, Vec<GenId>), RewriteStep>>>,
}

impl fmt::Debug for CatPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatPresentation")
            .field("objects", &self.objects.len())
            .field("generators", &self.generators.len())
            .field("relations", &self.relations.len())
            .field("normalizer", &self.normalizer.as_ref().map(|n| n.name().to_string()))
            .field("models", &self.models.iter().map(|m| m.name().to_string()).collect::<Vec<_>>())
            .finish()
    }
}

/// Incremental construction of a [`CatPresentation`].
#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    objects: Vec<String>,
    generators: Vec<Generator>,
    relations: Vec<(Word, Word)>,
    object_index: HashMap<String, ObjId>,
    generator_index: HashMap<String, GenId>,
}

impl PresentationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of the object, declaring it if new.
    pub fn object(&mut self, label: &str) -> ObjId {
        if let Some(&id) = self.object_index.get(label) {
            return id;
        }
        let id = self.objects.len() as ObjId;
        self.objects.push(label.to_string());
        self.object_index.insert(label.to_string(), id);
        id
    }

    pub fn object_id(&self, label: &str) -> Option<ObjId> {
        self.object_index.get(label).copied()
    }

    pub fn generator_id(&self, label: &str) -> Option<GenId> {
        self.generator_index.get(label).copied()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_at(&self, id: GenId) -> &Generator {
        &self.generators[id as usize]
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Declares a generator; redeclaring a label with the same boundary is a no-op.
    pub fn generator(&mut self, label: &str, src: ObjId, tgt: ObjId) -> Result<GenId> {
        if let Some(&id) = self.generator_index.get(label) {
            let g = &self.generators[id as usize];
            if g.src != src || g.tgt != tgt {
                return Err(Error::Malformed(format!("generator {label} redeclared with a new boundary")));
            }
            return Ok(id);
        }
        let n = self.objects.len() as ObjId;
        if src >= n || tgt >= n {
            return Err(Error::Malformed(format!("generator {label} has an undeclared endpoint")));
        }
        let id = self.generators.len() as GenId;
        self.generators.push(Generator { label: label.to_string(), src, tgt });
        self.generator_index.insert(label.to_string(), id);
        Ok(id)
    }

    /// Builds a word from generator ids starting at `src`.
    pub fn word(&self, src: ObjId, letters: &[GenId]) -> Result<Word> {
        chain(&self.generators, self.objects.len(), src, letters)
    }

    pub fn relation(&mut self, l: Word, r: Word) -> Result<()> {
        if l.src != r.src || l.tgt != r.tgt {
            return Err(Error::Malformed("relation sides are not parallel".into()));
        }
        if l != r {
            self.relations.push((l, r));
        }
        Ok(())
    }

    pub fn build(self) -> CatPresentation {
        CatPresentation {
            objects: self.objects,
            generators: self.generators,
            relations: self.relations,
            normalizer: None,
            models: Vec::new(),
            object_index: self.object_index,
            generator_index: self.generator_index,
            rules: Arc::new(OnceLock::new()),
            invariants: Arc::new(OnceLock::new()),
            finite: Arc::new(OnceLock::new()),
            lookup: Arc::new(OnceLock::new()),
        }
    }
}

fn chain(gens: &[Generator], nobj: usize, src: ObjId, letters: &[GenId]) -> Result<Word> {
    if src as usize >= nobj {
        return Err(Error::Malformed(format!("object {src} is not declared")));
    }
    let mut at = src;
    for (i, &g) in letters.iter().enumerate() {
        let gen = gens
            .get(g as usize)
            .ok_or_else(|| Error::Malformed(format!("letter {i}: generator {g} is not declared")))?;
        if gen.src != at {
            return Err(Error::Malformed(format!("letter {i} ({}) is not composable", gen.label)));
        }
        at = gen.tgt;
    }
    Ok(Word { src, tgt: at, letters: letters.to_vec() })
}

impl CatPresentation {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    pub fn object_id(&self, label: &str) -> Option<ObjId> {
        self.object_index.get(label).copied()
    }

    pub fn generator_id(&self, label: &str) -> Option<GenId> {
        self.generator_index.get(label).copied()
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id as usize]
    }

    pub fn normalizer(&self) -> Option<&Arc<dyn ExactNormalizer>> {
        self.normalizer.as_ref()
    }

    pub fn models(&self) -> &[Arc<dyn SeparatingModel>] {
        &self.models
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty() && self.normalizer.is_none()
    }

    /// Builds a word from generator ids starting at `src`.
    pub fn word(&self, src: ObjId, letters: &[GenId]) -> Result<Word> {
        chain(&self.generators, self.objects.len(), src, letters)
    }

    /// Builds a word from generator labels; `src` is required only for empty words.
    pub fn word_from_labels(&self, src: Option<&str>, labels: &[&str]) -> Result<Word> {
        let mut ids = Vec::with_capacity(labels.len());
        for l in labels {
            ids.push(self.generator_id(l).ok_or_else(|| Error::Malformed(format!("unknown generator {l}")))?);
        }
        let start = match src {
            Some(s) => self.object_id(s).ok_or_else(|| Error::Malformed(format!("unknown object {s}")))?,
            None => match ids.first() {
                Some(&g) => self.generators[g as usize].src,
                None => return Err(Error::Malformed("an empty word needs an explicit source".into())),
            },
        };
        self.word(start, &ids)
    }

    /// Checks that `w` is a well-formed word of this presentation.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        let c = chain(&self.generators, self.objects.len(), w.src, &w.letters)?;
        if c.tgt != w.tgt {
            return Err(Error::Malformed("word target does not match its letters".into()));
        }
        Ok(())
    }

    pub fn identity(&self, obj: ObjId) -> Word {
        Word::empty(obj)
    }

    pub fn single(&self, g: GenId) -> Word {
        let gen = &self.generators[g as usize];
        Word { src: gen.src, tgt: gen.tgt, letters: vec![g] }
    }

    /// Object reached after the first `pos` letters of `w`.
    pub fn object_at(&self, w: &Word, pos: usize) -> ObjId {
        if pos == 0 {
            w.src
        } else {
            self.generators[w.letters[pos - 1] as usize].tgt
        }
    }

    pub fn display_word(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            return format!("id[{}]", self.objects[w.src as usize]);
        }
        w.letters
            .iter()
            .map(|&g| self.generators[g as usize].label.as_str())
            .collect::<Vec<_>>()
            .join(" ; ")
    }

    /// Attaches an exact normal-form plug-in. The caller vouches for exactness.
    pub fn with_normalizer(mut self, n: Arc<dyn ExactNormalizer>) -> Self {
        self.normalizer = Some(n);
        self
    }

    /// Attaches a separating model after checking that it respects every relation.
    pub fn with_model(mut self, m: Arc<dyn SeparatingModel>) -> Result<Self> {
        for (i, (l, r)) in self.relations.iter().enumerate() {
            let (a, b) = (m.evaluate(&self, l), m.evaluate(&self, r));
            if a.is_none() || a != b {
                return Err(Error::Validation(format!(
                    "model {} violates relation {i}: {} = {}",
                    m.name(),
                    self.display_word(l),
                    self.display_word(r)
                )));
            }
        }
        self.models.push(m);
        Ok(self)
    }

    /// The single step at offset 0 rewriting `lhs` into `rhs`, if some relation says so.
    pub fn relation_step(&self, lhs: &Word, rhs: &Word) -> Option<RewriteStep> {
        let map = self.lookup.get_or_init(|| {
            let mut m = HashMap::new();
            for (i, (l, r)) in self.relations.iter().enumerate() {
                let fwd = RewriteStep { pos: 0, relation: i, forward: true };
                m.entry((l.src, l.letters.clone(), r.letters.clone())).or_insert(fwd);
                m.entry((l.src, r.letters.clone(), l.letters.clone())).or_insert(fwd.inverse());
            }
            m
        });
        (lhs.src == rhs.src).then_some(())?;
        map.get(&(lhs.src, lhs.letters.clone(), rhs.letters.clone())).copied()
    }

    /// Inverse generator of each generator, where a two-sided one is found.
    pub fn generator_inverses(&self, b: &SearchBudget) -> Vec<Option<GenId>> {
        skeleton::generator_inverses(self, b)
    }

    /// The same generators with `extra` relations added; models and normalizers are dropped.
    pub fn quotient(&self, extra: &[(Word, Word)]) -> Result<CatPresentation> {
        let mut b = PresentationBuilder::new();
        for o in &self.objects {
            b.object(o);
        }
        for g in &self.generators {
            b.generator(&g.label, g.src, g.tgt)?;
        }
        for (l, r) in self.relations.iter().chain(extra) {
            self.check_word(l)?;
            self.check_word(r)?;
            if l.src != r.src || l.tgt != r.tgt {
                return Err(Error::Malformed("relation sides are not parallel".into()));
            }
            b.relation(l.clone(), r.clone())?;
        }
        Ok(b.build())
    }

    pub(crate) fn rules(&self) -> &rewrite::RuleIndex {
        self.rules.get_or_init(|| rewrite::RuleIndex::new(self))
    }

    /// Integer-valued invariants found by integer nullspace search on relation letter counts.
    pub fn weight_invariants(&self) -> &[WeightInvariant] {
        self.invariants.get_or_init(|| integer_invariants(self))
    }

    /// Exact enumeration, attempted once with a fixed element cap and cached.
    pub fn finite_model(&self) -> Option<&Arc<FinitePresentation>> {
        self.finite
            .get_or_init(|| finite::enumerate(self, FINITE_PROBE_CAP).ok().map(Arc::new))
            .as_ref()
    }

    /// All words of exactly `len` letters from `src` to `tgt`, in canonical order.
    pub fn words_of_length(&self, src: ObjId, tgt: ObjId, len: usize, cap: usize) -> Result<Vec<Word>> {
        let mut out_by_obj: Vec<Vec<GenId>> = vec![Vec::new(); self.objects.len()];
        for (i, g) in self.generators.iter().enumerate() {
            out_by_obj[g.src as usize].push(i as GenId);
        }
        let mut layer: Vec<Word> = vec![Word::empty(src)];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for &g in &out_by_obj[w.tgt as usize] {
                    let mut letters = w.letters.clone();
                    letters.push(g);
                    next.push(Word { src, tgt: self.generators[g as usize].tgt, letters });
                    if next.len() > cap {
                        return Err(Error::Budget(format!("more than {cap} words of length {len}")));
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<Word> = layer.into_iter().filter(|w| w.tgt == tgt).collect();
        out.sort_by(|a, b| a.canonical_cmp(b));
        Ok(out)
    }

    pub fn normalize(&self, w: &Word, b: &SearchBudget) -> Result<NormalizeOutcome> {
        rewrite::normalize(self, w, b)
    }

    pub fn equal(&self, w1: &Word, w2: &Word, b: &SearchBudget) -> Result<EqualityVerdict> {
        rewrite::equal(self, w1, w2, b)
    }

    pub fn skeleton(&self, b: &SearchBudget) -> Result<SkeletonReport> {
        skeleton::skeleton(self, b)
    }

    /// Enumerates the category exactly when it is finite within `max_elements`.
    pub fn to_finite(&self, max_elements: usize) -> Result<FinitePresentation> {
        finite::enumerate(self, max_elements)
    }

    pub fn to_file(&self) -> PresentationFile {
        let word = |w: &Word| -> WordSpec {
            if w.letters.is_empty() {
                WordSpec::Explicit { src: self.objects[w.src as usize].clone(), letters: Vec::new() }
            } else {
                WordSpec::Letters(w.letters.iter().map(|&g| self.generators[g as usize].label.clone()).collect())
            }
        };
        PresentationFile {
            objects: self.objects.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorSpec {
                    id: g.label.clone(),
                    src: self.objects[g.src as usize].clone(),
                    tgt: self.objects[g.tgt as usize].clone(),
                })
                .collect(),
            relations: self.relations.iter().map(|(l, r)| [word(l), word(r)]).collect(),
        }
    }

    pub fn from_file(f: &PresentationFile) -> Result<Self> {
        let mut b = PresentationBuilder::new();
        for (i, o) in f.objects.iter().enumerate() {
            if b.object_id(o).is_some() {
                return Err(Error::Malformed(format!("objects[{i}]: duplicate object {o}")));
            }
            b.object(o);
        }
        for (i, g) in f.generators.iter().enumerate() {
            let src = b
                .object_id(&g.src)
                .ok_or_else(|| Error::Malformed(format!("generators[{i}].src: unknown object {}", g.src)))?;
            let tgt = b
                .object_id(&g.tgt)
                .ok_or_else(|| Error::Malformed(format!("generators[{i}].tgt: unknown object {}", g.tgt)))?;
            if b.generator_id(&g.id).is_some() {
                return Err(Error::Malformed(format!("generators[{i}].id: duplicate generator {}", g.id)));
            }
            b.generator(&g.id, src, tgt)?;
        }
        let p = b.clone().build();
        for (i, [l, r]) in f.relations.iter().enumerate() {
            let lw = l.resolve(&p).map_err(|e| prefix(e, &format!("relations[{i}][0]")))?;
            let rw = r.resolve(&p).map_err(|e| prefix(e, &format!("relations[{i}][1]")))?;
            b.relation(lw, rw).map_err(|e| prefix(e, &format!("relations[{i}]")))?;
        }
        Ok(b.build())
    }
}

fn prefix(e: Error, path: &str) -> Error {
    match e {
        Error::Malformed(m) => Error::Malformed(format!("{path}: {m}")),
        other => other,
    }
}

/// The free category on a graph.
pub fn free_category(g: &Graph) -> Result<CatPresentation> {
    g.validate()?;
    let mut b = PresentationBuilder::new();
    for v in &g.vertices {
        b.object(v);
    }
    for e in &g.edges {
        b.generator(&e.label, e.src, e.tgt)?;
    }
    Ok(b.build())
}

/// On-disk presentation: `{objects, generators: [{id, src, tgt}], relations: [[word, word]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<[WordSpec; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A word is a list of generator ids; an empty word must name its object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Letters(Vec<String>),
    Explicit { src: String, letters: Vec<String> },
}

impl WordSpec {
    pub fn resolve(&self, p: &CatPresentation) -> Result<Word> {
        match self {
            WordSpec::Letters(ls) => {
                let refs: Vec<&str> = ls.iter().map(String::as_str).collect();
                p.word_from_labels(None, &refs)
            }
            WordSpec::Explicit { src, letters } => {
                let refs: Vec<&str> = letters.iter().map(String::as_str).collect();
                p.word_from_labels(Some(src), &refs)
            }
        }
    }

    pub fn of(p: &CatPresentation, w: &Word) -> WordSpec {
        WordSpec::Explicit {
            src: p.objects()[w.src as usize].clone(),
            letters: w.letters.iter().map(|&g| p.generator(g).label.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2_graph() -> Graph {
        let e = |l: &str, s, t| Edge { label: l.into(), src: s, tgt: t };
        Graph {
            vertices: vec!["0".into(), "1".into(), "2".into()],
            edges: vec![
                e("d0_1", 1, 0),
                e("d1_1", 1, 0),
                e("s0_0", 0, 1),
                e("d0_2", 2, 1),
                e("d1_2", 2, 1),
                e("d2_2", 2, 1),
                e("s0_1", 1, 2),
                e("s1_1", 1, 2),
            ],
        }
    }

    #[test]
    fn empty_graph_has_no_objects() {
        let p = free_category(&Graph::default()).unwrap();
        assert!(p.objects().is_empty());
        assert!(p.generators().is_empty());
    }

    #[test]
    fn dangling_edge_is_malformed() {
        let g = Graph { vertices: vec!["a".into()], edges: vec![Edge { label: "e".into(), src: 0, tgt: 1 }] };
        assert!(matches!(free_category(&g), Err(Error::Malformed(_))));
    }

    #[test]
    fn truncated_simplex_graph_has_six_paths_from_two_to_zero() {
        let p = free_category(&d2_graph()).unwrap();
        let ws = p.words_of_length(2, 0, 2, 1000).unwrap();
        assert_eq!(ws.len(), 6);
        assert!(p.relations().is_empty());
    }

    #[test]
    fn word_rejects_noncomposable_letters() {
        let p = free_category(&d2_graph()).unwrap();
        let d0 = p.generator_id("d0_1").unwrap();
        assert!(p.word(1, &[d0, d0]).is_err());
        assert!(matches!(p.word_from_labels(None, &[]), Err(Error::Malformed(_))));
    }

    #[test]
    fn file_round_trip() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let a = b.generator("a", x, x).unwrap();
        let l = b.word(x, &[a, a]).unwrap();
        b.relation(l, Word::empty(x)).unwrap();
        let p = b.build();
        let f = p.to_file();
        let json = serde_json::to_string(&f).unwrap();
        let back: PresentationFile = serde_json::from_str(&json).unwrap();
        let q = CatPresentation::from_file(&back).unwrap();
        assert_eq!(q.relations(), p.relations());
        assert_eq!(q.objects(), p.objects());
    }

    #[test]
    fn file_errors_carry_a_path() {
        let json = r#"{"objects":["x"],"generators":[{"id":"a","src":"x","tgt":"y"}]}"#;
        let f: PresentationFile = serde_json::from_str(json).unwrap();
        let e = CatPresentation::from_file(&f).unwrap_err();
        assert!(e.to_string().contains("generators[0].tgt"), "{e}");
    }

    #[test]
    fn zero_budget_rejected() {
        assert!(SearchBudget::new(0, 1, 1).is_err());
        assert!(SearchBudget::default().validate().is_ok());
    }
}
