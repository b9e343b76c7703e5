//! Isomorphism classes of objects and their automorphism generators.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::certificate::{Coverage, EqualityVerdict};
use super::{CatPresentation, GenId, ObjId, SearchBudget, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    /// Some relation-respecting weight is nonzero on the generator.
    Free,
    /// `c^k = id` was proven, and no smaller power was.
    Finite(usize),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGenerator {
    pub word: Word,
    pub order: Order,
}

/// Objects merged by invertible words, with automorphisms of the representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectClass {
    pub representative: ObjId,
    pub members: Vec<ObjId>,
    /// For each member, an isomorphism from the representative and its inverse.
    pub isomorphisms: Vec<(ObjId, Word, Word)>,
    pub automorphisms: Vec<AutGenerator>,
    /// Size of the automorphism group when computed exactly.
    pub aut_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonReport {
    pub classes: Vec<ObjectClass>,
    /// True when the presentation was enumerated as a finite category.
    pub exact: bool,
    pub coverage: Coverage,
}

impl SkeletonReport {
    pub fn class_of(&self, obj: ObjId) -> Option<&ObjectClass> {
        self.classes.iter().find(|c| c.members.contains(&obj))
    }

    /// Class sizes and automorphism data in a form comparable across presentations.
    pub fn signature(&self) -> Vec<(usize, Option<usize>, Vec<Order>)> {
        let mut s: Vec<_> = self
            .classes
            .iter()
            .map(|c| {
                let mut o: Vec<Order> = c.automorphisms.iter().map(|a| a.order.clone()).collect();
                o.sort_by_key(|x| format!("{x:?}"));
                (c.members.len(), c.aut_size, o)
            })
            .collect();
        s.sort_by_key(|x| format!("{x:?}"));
        s
    }

    /// One node per class, labelled by members and automorphism generators; one edge per
    /// pair of classes joined by a generating morphism.
    pub fn to_dot(&self, p: &CatPresentation) -> String {
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph skeleton {\n");
        for (k, c) in self.classes.iter().enumerate() {
            let members: Vec<&str> = c.members.iter().map(|&m| p.objects()[m as usize].as_str()).collect();
            let mut lines = vec![members.join(" ≅ ")];
            for a in &c.automorphisms {
                let order = match a.order {
                    Order::Free => "free".to_string(),
                    Order::Finite(n) => format!("order {n}"),
                    Order::Unknown => "order ?".to_string(),
                };
                lines.push(format!("aut {} ({order})", p.display_word(&a.word)));
            }
            let label: Vec<String> = lines.iter().map(|l| esc(l)).collect();
            let _ = writeln!(out, "  c{k} [label=\"{}\"];", label.join("\\n"));
        }
        let class = |o: ObjId| self.classes.iter().position(|c| c.members.contains(&o));
        let mut edges: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
        for g in p.generators() {
            if let (Some(a), Some(b)) = (class(g.src), class(g.tgt)) {
                if a != b {
                    edges.entry((a, b)).or_default().push(&g.label);
                }
            }
        }
        for ((a, b), labels) in edges {
            let _ = writeln!(out, "  c{a} -> c{b} [label=\"{}\"];", esc(&labels.join(", ")));
        }
        out.push_str("}\n");
        out
    }
}

fn exact_skeleton(p: &CatPresentation, b: &SearchBudget) -> Option<SkeletonReport> {
    let fin = p.to_finite(b.max_enumeration).ok()?;
    let c = &fin.category;
    let n = p.objects().len();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes = Vec::new();
    for o in 0..n as ObjId {
        if class_of[o as usize].is_some() {
            continue;
        }
        let k = classes.len();
        class_of[o as usize] = Some(k);
        let mut members = vec![o];
        let mut isomorphisms = Vec::new();
        for t in (o + 1)..n as ObjId {
            if class_of[t as usize].is_some() {
                continue;
            }
            if let Some((f, g)) = c.hom(o, t).into_iter().find_map(|f| c.inverse(f).map(|g| (f, g))) {
                class_of[t as usize] = Some(k);
                members.push(t);
                isomorphisms.push((t, fin.words[f].clone(), fin.words[g].clone()));
            }
        }
        let auts: Vec<usize> = c.hom(o, o).into_iter().filter(|&f| c.is_iso(f)).collect();
        // Greedy generating set in shortlex order of representative words.
        let mut span: Vec<usize> = vec![c.identity(o)];
        let mut gens = Vec::new();
        for &a in &auts {
            if span.contains(&a) {
                continue;
            }
            gens.push(a);
            let mut frontier = span.clone();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = c.compose(x, g).unwrap();
                    if !span.contains(&y) {
                        span.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        let automorphisms = gens
            .iter()
            .map(|&g| {
                let mut k = 1;
                let mut x = g;
                while x != c.identity(o) {
                    x = c.compose(x, g).unwrap();
                    k += 1;
                }
                AutGenerator { word: fin.words[g].clone(), order: Order::Finite(k) }
            })
            .collect();
        classes.push(ObjectClass { representative: o, members, isomorphisms, automorphisms, aut_size: Some(auts.len()) });
    }
    Some(SkeletonReport {
        classes,
        exact: true,
        coverage: Coverage { states: c.morphism_count(), ..Coverage::default() },
    })
}

/// Inverse of each generator, when a two-sided inverse generator is known.
pub(crate) fn generator_inverses(p: &CatPresentation, b: &SearchBudget) -> Vec<Option<GenId>> {
    let ng = p.generators().len();
    let mut left = vec![Vec::new(); ng];
    for (l, r) in p.relations() {
        for (x, y) in [(l, r), (r, l)] {
            if y.is_empty() && x.len() == 2 {
                left[x.letters[0] as usize].push(x.letters[1]);
            }
        }
    }
    let mut inv = vec![None; ng];
    for g in 0..ng {
        for &h in &left[g] {
            if left[h as usize].contains(&(g as GenId)) {
                inv[g] = Some(h);
                break;
            }
        }
    }
    let small = SearchBudget { max_rewrite_steps: (b.max_rewrite_steps / 20).max(50), ..*b };
    for g in 0..ng {
        if inv[g].is_some() {
            continue;
        }
        let gen = p.generator(g as GenId);
        for h in 0..ng {
            let hh = p.generator(h as GenId);
            if hh.src != gen.tgt || hh.tgt != gen.src {
                continue;
            }
            let gh = Word { src: gen.src, tgt: gen.src, letters: vec![g as GenId, h as GenId] };
            let hg = Word { src: gen.tgt, tgt: gen.tgt, letters: vec![h as GenId, g as GenId] };
            let ok = |w: &Word| matches!(p.equal(w, &Word::empty(w.src), &small), Ok(EqualityVerdict::Equal(_)));
            if ok(&gh) && ok(&hg) {
                inv[g] = Some(h as GenId);
                inv[h] = Some(g as GenId);
                break;
            }
        }
    }
    inv
}

/// Formal inverse of a word whose letters all have known inverses.
pub(crate) fn invert(p: &CatPresentation, inv: &[Option<GenId>], w: &Word) -> Option<Word> {
    let letters: Option<Vec<GenId>> = w.letters.iter().rev().map(|&g| inv[g as usize]).collect();
    let letters = letters?;
    let _ = p;
    Some(Word { src: w.tgt, tgt: w.src, letters })
}

fn weight_key(p: &CatPresentation, w: &Word) -> (i64, usize) {
    let s: i64 = p.weight_invariants().iter().map(|i| i.value(w).abs()).sum();
    (s, w.len())
}

pub(crate) fn skeleton(p: &CatPresentation, b: &SearchBudget) -> Result<SkeletonReport> {
    b.validate()?;
    let n = p.objects().len();
    if n == 0 {
        return Ok(SkeletonReport { classes: Vec::new(), exact: true, coverage: Coverage::default() });
    }
    if let Some(r) = exact_skeleton(p, b) {
        return Ok(r);
    }
    if n > b.max_enumeration {
        return Err(Error::Budget(format!("{n} objects exceed the enumeration budget")));
    }
    let inv = generator_inverses(p, b);
    // Spanning forest over invertible generators, rooted at the least object of each component.
    let mut path: Vec<Option<Word>> = vec![None; n];
    let mut tree_edge = vec![false; p.generators().len()];
    let mut classes = Vec::new();
    let mut out: Vec<Vec<GenId>> = vec![Vec::new(); n];
    for (g, gen) in p.generators().iter().enumerate() {
        if inv[g].is_some() {
            out[gen.src as usize].push(g as GenId);
        }
    }
    for root in 0..n as ObjId {
        if path[root as usize].is_some() {
            continue;
        }
        path[root as usize] = Some(Word::empty(root));
        let mut members = vec![root];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &g in &out[x as usize] {
                let t = p.generator(g).tgt;
                if path[t as usize].is_none() {
                    let w = path[x as usize].as_ref().unwrap().then(&p.single(g));
                    path[t as usize] = Some(w);
                    tree_edge[g as usize] = true;
                    tree_edge[inv[g as usize].unwrap() as usize] = true;
                    members.push(t);
                }
            }
        }
        members.sort();
        classes.push(members);
    }
    let mut coverage = Coverage::default();
    let mut reports = Vec::new();
    for members in classes {
        let root = members[0];
        let mut isomorphisms = Vec::new();
        for &m in &members[1..] {
            let w = path[m as usize].clone().unwrap();
            let wi = invert(p, &inv, &w).unwrap();
            isomorphisms.push((m, w, wi));
        }
        let mut loops: Vec<Word> = Vec::new();
        for &m in &members {
            for &g in &out[m as usize] {
                let h = inv[g as usize].unwrap();
                if tree_edge[g as usize] || h < g && inv[h as usize] == Some(g) {
                    continue;
                }
                let t = p.generator(g).tgt;
                let back = invert(p, &inv, path[t as usize].as_ref().unwrap()).unwrap();
                loops.push(path[m as usize].as_ref().unwrap().then(&p.single(g)).then(&back));
            }
        }
        loops.sort_by(|a, c| weight_key(p, a).cmp(&weight_key(p, c)).then(a.canonical_cmp(c)));
        let id = Word::empty(root);
        let mut chosen: Vec<(Word, Word)> = Vec::new();
        'next: for l in loops {
            match p.equal(&l, &id, b)? {
                EqualityVerdict::Equal(_) => continue,
                EqualityVerdict::Unknown(c) => {
                    coverage.states += c.states;
                    coverage.step_truncated |= c.step_truncated;
                    coverage.length_truncated |= c.length_truncated;
                }
                EqualityVerdict::Distinct(_) => {}
            }
            for (c, ci) in &chosen {
                if let Some(k) = power_ratio(p, &l, c) {
                    let target = if k >= 0 { c.pow(k as usize) } else { ci.pow((-k) as usize) };
                    if target.len() <= b.max_word_length.max(l.len()) && p.equal(&l, &target, b)?.is_equal() {
                        continue 'next;
                    }
                }
            }
            let li = invert(p, &inv, &l).unwrap();
            chosen.push((l, li));
        }
        let automorphisms = chosen.into_iter().map(|(c, _)| AutGenerator { order: order_of(p, &c, b), word: c }).collect();
        reports.push(ObjectClass { representative: root, members, isomorphisms, automorphisms, aut_size: None });
    }
    Ok(SkeletonReport { classes: reports, exact: false, coverage })
}

/// The exponent `k` with weight(l) = k * weight(c) on every invariant, if one exists.
fn power_ratio(p: &CatPresentation, l: &Word, c: &Word) -> Option<i64> {
    let mut k: Option<i64> = None;
    for inv in p.weight_invariants() {
        let (a, b) = (inv.value(l), inv.value(c));
        match (a, b) {
            (0, 0) => {}
            (_, 0) => return None,
            (a, b) if a % b != 0 => return None,
            (a, b) => match k {
                None => k = Some(a / b),
                Some(k0) if k0 != a / b => return None,
                _ => {}
            },
        }
    }
    Some(k.unwrap_or(0))
}

fn order_of(p: &CatPresentation, c: &Word, b: &SearchBudget) -> Order {
    if p.weight_invariants().iter().any(|i| i.value(c) != 0) {
        return Order::Free;
    }
    let id = Word::empty(c.src);
    for k in 2..=6usize {
        if c.len() * k > b.max_word_length {
            break;
        }
        if let Ok(EqualityVerdict::Equal(_)) = p.equal(&c.pow(k), &id, b) {
            return Order::Finite(k);
        }
    }
    Order::Unknown
}

#[cfg(test)]
mod tests {
    use super::super::{free_category, Graph, PresentationBuilder};
    use super::*;

    #[test]
    fn discrete_category_has_singleton_classes() {
        let g = Graph { vertices: vec!["a".into(), "b".into(), "c".into()], edges: vec![] };
        let r = free_category(&g).unwrap().skeleton(&SearchBudget::default()).unwrap();
        assert_eq!(r.classes.len(), 3);
        assert!(r.classes.iter().all(|c| c.members.len() == 1 && c.automorphisms.is_empty()));
    }

    #[test]
    fn free_group_on_one_generator_by_search() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let y = b.object("y");
        let t = b.generator("t", x, x).unwrap();
        let ti = b.generator("t'", x, x).unwrap();
        let f = b.generator("f", x, y).unwrap();
        let fi = b.generator("f'", y, x).unwrap();
        for (s, l) in [(x, vec![t, ti]), (x, vec![ti, t]), (x, vec![f, fi]), (y, vec![fi, f])] {
            let w = b.word(s, &l).unwrap();
            b.relation(w, Word::empty(s)).unwrap();
        }
        let p = b.build();
        let r = p.skeleton(&SearchBudget::default()).unwrap();
        assert!(!r.exact);
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].members, vec![0, 1]);
        assert_eq!(r.classes[0].automorphisms.len(), 1);
        assert_eq!(r.classes[0].automorphisms[0].order, Order::Free);
    }

    #[test]
    fn exact_mode_reports_group_order() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let a = b.generator("a", x, x).unwrap();
        let w = b.word(x, &[a, a, a]).unwrap();
        b.relation(w, Word::empty(x)).unwrap();
        let r = b.build().skeleton(&SearchBudget::default()).unwrap();
        assert!(r.exact);
        assert_eq!(r.classes[0].aut_size, Some(3));
        assert_eq!(r.classes[0].automorphisms[0].order, Order::Finite(3));
    }
}
