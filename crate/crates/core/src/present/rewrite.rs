//! Bounded bidirectional rewriting with replayable witnesses.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Coverage, EqualityVerdict, NormalizeOutcome};
use super::{shortlex, CatPresentation, GenId, ObjId, SearchBudget, Word};
use crate::error::{Error, Result};

/// One application of relation `relation` at letter offset `pos`.
///
/// `forward` replaces the relation's left side by its right side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub pos: usize,
    pub relation: usize,
    pub forward: bool,
}

impl RewriteStep {
    pub fn inverse(self) -> Self {
        RewriteStep { forward: !self.forward, ..self }
    }
}

/// A chain of rewrite steps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub steps: Vec<RewriteStep>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The chain run backwards; it must be replayed from this chain's end.
    pub fn inverse(&self) -> Witness {
        Witness { steps: self.steps.iter().rev().map(|s| s.inverse()).collect() }
    }

    pub fn then(mut self, other: &Witness) -> Witness {
        self.steps.extend_from_slice(&other.steps);
        self
    }

    /// Shifts every step right by `offset` letters, for use inside a longer word.
    pub fn shifted(&self, offset: usize) -> Witness {
        Witness { steps: self.steps.iter().map(|s| RewriteStep { pos: s.pos + offset, ..*s }).collect() }
    }

    /// Applies every step to `start`, failing on the first step that does not match.
    pub fn replay(&self, p: &CatPresentation, start: &Word) -> Result<Word> {
        p.check_word(start)?;
        let mut letters = start.letters.clone();
        for (i, s) in self.steps.iter().enumerate() {
            letters = apply(p, start.src, &letters, *s)
                .ok_or_else(|| Error::Validation(format!("witness step {i} does not apply")))?;
        }
        let w = Word { src: start.src, tgt: start.tgt, letters };
        p.check_word(&w)?;
        Ok(w)
    }

    /// True when the chain rewrites `from` into exactly `to`.
    pub fn proves(&self, p: &CatPresentation, from: &Word, to: &Word) -> bool {
        self.replay(p, from).is_ok_and(|w| &w == to)
    }
}

fn object_at(p: &CatPresentation, src: ObjId, letters: &[GenId], pos: usize) -> ObjId {
    if pos == 0 {
        src
    } else {
        p.generator(letters[pos - 1]).tgt
    }
}

/// Result of applying `s` to `letters`, or `None` if it does not match.
pub(crate) fn apply(p: &CatPresentation, src: ObjId, letters: &[GenId], s: RewriteStep) -> Option<Vec<GenId>> {
    let (l, r) = p.relations().get(s.relation)?;
    let (lhs, rhs) = if s.forward { (l, r) } else { (r, l) };
    if s.pos > letters.len() || !letters[s.pos..].starts_with(&lhs.letters) {
        return None;
    }
    if lhs.letters.is_empty() && object_at(p, src, letters, s.pos) != lhs.src {
        return None;
    }
    let mut out = Vec::with_capacity(letters.len() + rhs.len());
    out.extend_from_slice(&letters[..s.pos]);
    out.extend_from_slice(&rhs.letters);
    out.extend_from_slice(&letters[s.pos + lhs.len()..]);
    Some(out)
}

struct Rule {
    lhs: Vec<GenId>,
    rhs_len: usize,
    relation: usize,
    forward: bool,
}

/// Relations indexed by the first letter (or, for empty sides, the object) they match.
pub(crate) struct RuleIndex {
    rules: Vec<Rule>,
    by_first: Vec<Vec<usize>>,
    by_object: Vec<Vec<usize>>,
}

impl RuleIndex {
    pub(crate) fn new(p: &CatPresentation) -> Self {
        let mut idx = RuleIndex {
            rules: Vec::new(),
            by_first: vec![Vec::new(); p.generators().len()],
            by_object: vec![Vec::new(); p.objects().len()],
        };
        for (i, (l, r)) in p.relations().iter().enumerate() {
            for (lhs, rhs, forward) in [(l, r, true), (r, l, false)] {
                let k = idx.rules.len();
                match lhs.letters.first() {
                    Some(&g) => idx.by_first[g as usize].push(k),
                    None => idx.by_object[lhs.src as usize].push(k),
                }
                idx.rules.push(Rule { lhs: lhs.letters.clone(), rhs_len: rhs.len(), relation: i, forward });
            }
        }
        idx
    }
}

/// One application site found by [`neighbors`].
struct Move {
    pos: usize,
    rule: usize,
}

fn moves(p: &CatPresentation, src: ObjId, w: &[GenId], max_len: usize, truncated: &mut bool) -> Vec<Move> {
    let idx = p.rules();
    let mut out = Vec::new();
    for pos in 0..w.len() {
        for &k in &idx.by_first[w[pos] as usize] {
            let r = &idx.rules[k];
            if w[pos..].starts_with(&r.lhs) {
                if w.len() - r.lhs.len() + r.rhs_len > max_len {
                    *truncated = true;
                } else {
                    out.push(Move { pos, rule: k });
                }
            }
        }
    }
    for pos in 0..=w.len() {
        let obj = object_at(p, src, w, pos);
        for &k in &idx.by_object[obj as usize] {
            if w.len() + idx.rules[k].rhs_len > max_len {
                *truncated = true;
            } else {
                out.push(Move { pos, rule: k });
            }
        }
    }
    out
}

struct Node {
    word: Vec<GenId>,
    parent: usize,
    step: Option<RewriteStep>,
}

/// A breadth-first tree of words reachable from a root.
struct Tree {
    nodes: Vec<Node>,
    seen: HashMap<Vec<GenId>, usize>,
    frontier: Vec<usize>,
    truncated: bool,
    max_len_seen: usize,
}

impl Tree {
    fn new(root: &[GenId]) -> Self {
        let mut seen = HashMap::new();
        seen.insert(root.to_vec(), 0);
        Tree {
            nodes: vec![Node { word: root.to_vec(), parent: usize::MAX, step: None }],
            seen,
            frontier: vec![0],
            truncated: false,
            max_len_seen: root.len(),
        }
    }

    fn exhausted(&self) -> bool {
        self.frontier.is_empty() && !self.truncated
    }

    /// Steps from the root to node `i`.
    fn path(&self, mut i: usize) -> Witness {
        let mut steps = Vec::new();
        while let Some(s) = self.nodes[i].step {
            steps.push(s);
            i = self.nodes[i].parent;
        }
        steps.reverse();
        Witness { steps }
    }

    /// Expands one BFS layer. Returns the node index of the first new word
    /// found in `other`, paired with that word's index there.
    fn expand(
        &mut self,
        p: &CatPresentation,
        src: ObjId,
        b: &SearchBudget,
        other: Option<&Tree>,
        total: &mut usize,
    ) -> Option<(usize, usize)> {
        let layer = std::mem::take(&mut self.frontier);
        let idx = p.rules();
        for (li, &i) in layer.iter().enumerate() {
            let word = self.nodes[i].word.clone();
            for m in moves(p, src, &word, b.max_word_length, &mut self.truncated) {
                if *total >= b.max_rewrite_steps {
                    self.truncated = true;
                    self.frontier.extend_from_slice(&layer[li..]);
                    return None;
                }
                let r = &idx.rules[m.rule];
                let step = RewriteStep { pos: m.pos, relation: r.relation, forward: r.forward };
                let Some(next) = apply(p, src, &word, step) else { continue };
                if self.seen.contains_key(&next) {
                    continue;
                }
                let k = self.nodes.len();
                self.max_len_seen = self.max_len_seen.max(next.len());
                self.seen.insert(next.clone(), k);
                let hit = other.and_then(|o| o.seen.get(&next).copied());
                self.nodes.push(Node { word: next, parent: i, step: Some(step) });
                self.frontier.push(k);
                *total += 1;
                if let Some(j) = hit {
                    return Some((k, j));
                }
            }
        }
        None
    }
}

fn coverage(trees: &[&Tree], steps_hit: bool) -> Coverage {
    Coverage {
        states: trees.iter().map(|t| t.nodes.len()).sum(),
        max_length_seen: trees.iter().map(|t| t.max_len_seen).max().unwrap_or(0),
        length_truncated: trees.iter().any(|t| t.truncated && !steps_hit),
        step_truncated: steps_hit,
    }
}

/// Searches for a rewrite chain between two parallel words.
pub(crate) fn search(p: &CatPresentation, w1: &Word, w2: &Word, b: &SearchBudget) -> std::result::Result<Witness, (Coverage, bool)> {
    if w1.letters == w2.letters {
        return Ok(Witness::default());
    }
    let mut a = Tree::new(&w1.letters);
    let mut z = Tree::new(&w2.letters);
    let mut total = 2usize;
    loop {
        let grow_a = !a.frontier.is_empty() && (z.frontier.is_empty() || a.frontier.len() <= z.frontier.len());
        if grow_a {
            if let Some((i, j)) = a.expand(p, w1.src, b, Some(&z), &mut total) {
                return Ok(a.path(i).then(&z.path(j).inverse()));
            }
        } else if !z.frontier.is_empty() {
            if let Some((j, i)) = z.expand(p, w1.src, b, Some(&a), &mut total) {
                return Ok(a.path(i).then(&z.path(j).inverse()));
            }
        }
        let steps_hit = total >= b.max_rewrite_steps;
        if a.exhausted() || z.exhausted() {
            return Err((coverage(&[&a, &z], false), true));
        }
        if steps_hit || (a.frontier.is_empty() && z.frontier.is_empty()) {
            return Err((coverage(&[&a, &z], steps_hit), false));
        }
    }
}

pub(crate) fn normalize(p: &CatPresentation, w: &Word, b: &SearchBudget) -> Result<NormalizeOutcome> {
    b.validate()?;
    p.check_word(w)?;
    if let Some(n) = p.normalizer() {
        return Ok(NormalizeOutcome::Normal(n.normal_form(p, w)));
    }
    let mut t = Tree::new(&w.letters);
    let mut total = 1usize;
    while !t.frontier.is_empty() && total < b.max_rewrite_steps {
        t.expand(p, w.src, b, None, &mut total);
    }
    let best = t
        .nodes
        .iter()
        .map(|n| &n.word)
        .min_by(|x, y| shortlex(x, y))
        .cloned()
        .unwrap_or_default();
    let best = Word { src: w.src, tgt: w.tgt, letters: best };
    let steps_hit = !t.frontier.is_empty();
    if t.exhausted() {
        Ok(NormalizeOutcome::Normal(best))
    } else if let Some(f) = p.finite_model() {
        Ok(NormalizeOutcome::Normal(f.words[f.eval(w)].clone()))
    } else {
        Ok(NormalizeOutcome::Unknown { best, coverage: coverage(&[&t], steps_hit) })
    }
}

pub(crate) fn equal(p: &CatPresentation, w1: &Word, w2: &Word, b: &SearchBudget) -> Result<EqualityVerdict> {
    b.validate()?;
    p.check_word(w1)?;
    p.check_word(w2)?;
    if w1.src != w2.src || w1.tgt != w2.tgt {
        return Err(Error::Precondition("words are not parallel".into()));
    }
    if w1 == w2 {
        return Ok(EqualityVerdict::Equal(Witness::default()));
    }
    if let Some(c) = separate(p, w1, w2) {
        return Ok(EqualityVerdict::Distinct(c));
    }
    if let Some(n) = p.normalizer() {
        if let (Some(d1), Some(d2)) = (n.derivation(p, w1), n.derivation(p, w2)) {
            let w = d1.then(&d2.inverse());
            if w.proves(p, w1, w2) {
                return Ok(EqualityVerdict::Equal(w));
            }
        }
    }
    match search(p, w1, w2, b) {
        Ok(w) => Ok(EqualityVerdict::Equal(w)),
        Err((cov, true)) => Ok(EqualityVerdict::Distinct(Certificate::ClosedClass { size: cov.states })),
        Err((cov, false)) => match p.finite_model() {
            Some(f) if f.eval(w1) != f.eval(w2) => {
                Ok(EqualityVerdict::Distinct(Certificate::Finite { left: f.eval(w1), right: f.eval(w2) }))
            }
            _ => Ok(EqualityVerdict::Unknown(cov)),
        },
    }
}

/// Cheap separating certificates, tried before any search.
pub(crate) fn separate(p: &CatPresentation, w1: &Word, w2: &Word) -> Option<Certificate> {
    if p.is_free() && w1 != w2 {
        return Some(Certificate::FreeWords);
    }
    if let Some(n) = p.normalizer() {
        let (a, b) = (n.normal_form(p, w1), n.normal_form(p, w2));
        if a != b {
            return Some(Certificate::Normalizer { name: n.name().to_string(), left: a.letters, right: b.letters });
        }
    }
    for m in p.models() {
        if let (Some(a), Some(b)) = (m.evaluate(p, w1), m.evaluate(p, w2)) {
            if a != b {
                return Some(Certificate::Model { model: m.name().to_string(), left: a, right: b });
            }
        }
    }
    for inv in p.weight_invariants() {
        let (a, b) = (inv.value(w1), inv.value(w2));
        if a != b {
            return Some(Certificate::Weight { weights: inv.weights.clone(), left: a, right: b });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::{free_category, Edge, Graph, PresentationBuilder};
    use super::*;

    fn cyclic(n: usize) -> (CatPresentation, GenId) {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let a = b.generator("a", x, x).unwrap();
        let l = b.word(x, &vec![a; n]).unwrap();
        b.relation(l, Word::empty(x)).unwrap();
        (b.build(), a)
    }

    #[test]
    fn free_monoid_powers_are_pairwise_distinct() {
        let g = Graph { vertices: vec!["x".into()], edges: vec![Edge { label: "e".into(), src: 0, tgt: 0 }] };
        let p = free_category(&g).unwrap();
        let b = SearchBudget::default();
        for i in 0..4 {
            for j in 0..4 {
                let v = p.equal(&p.word(0, &vec![0; i]).unwrap(), &p.word(0, &vec![0; j]).unwrap(), &b).unwrap();
                assert_eq!(i == j, v.is_equal());
                assert_eq!(i != j, v.is_distinct());
            }
        }
    }

    #[test]
    fn cyclic_group_equalities_have_witnesses() {
        let (p, a) = cyclic(3);
        let b = SearchBudget::default();
        let w1 = p.word(0, &[a; 5]).unwrap();
        let w2 = p.word(0, &[a; 2]).unwrap();
        match p.equal(&w1, &w2, &b).unwrap() {
            EqualityVerdict::Equal(w) => assert!(w.proves(&p, &w1, &w2)),
            v => panic!("{v:?}"),
        }
        assert_eq!(p.normalize(&w1, &b).unwrap(), NormalizeOutcome::Normal(w2.clone()));
    }

    #[test]
    fn cyclic_group_inequality_needs_a_certificate() {
        let (p, a) = cyclic(3);
        let b = SearchBudget::default();
        let w1 = p.word(0, &[a]).unwrap();
        let w2 = p.word(0, &[a, a]).unwrap();
        assert!(p.equal(&w1, &w2, &b).unwrap().is_distinct());
    }

    #[test]
    fn nonparallel_words_are_rejected() {
        let (p, a) = cyclic(2);
        let mut b = PresentationBuilder::new();
        b.object("x");
        let _ = a;
        let q = {
            let mut b2 = PresentationBuilder::new();
            let x = b2.object("x");
            let y = b2.object("y");
            b2.generator("f", x, y).unwrap();
            b2.build()
        };
        let w1 = q.word(0, &[0]).unwrap();
        let w2 = Word::empty(0);
        assert!(matches!(q.equal(&w1, &w2, &SearchBudget::default()), Err(Error::Precondition(_))));
        assert!(p.check_word(&Word { src: 0, tgt: 0, letters: vec![7] }).is_err());
    }

    #[test]
    fn witness_inverse_replays_backwards() {
        let (p, a) = cyclic(2);
        let w1 = p.word(0, &[a, a, a]).unwrap();
        let w2 = p.word(0, &[a]).unwrap();
        let EqualityVerdict::Equal(w) = p.equal(&w1, &w2, &SearchBudget::default()).unwrap() else { panic!() };
        assert!(w.inverse().proves(&p, &w2, &w1));
    }
}
