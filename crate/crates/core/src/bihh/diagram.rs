//! The 2-truncated cyclic bar diagram of a strict 2-category.
//!
//! Level `k` is the coproduct over cyclic sequences `X0 -> .. -> Xk -> X0`
//! of products of hom-categories. A k+1-tuple is kept when its total
//! concatenation fits the bound, so faces and degeneracies stay inside it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::present::{CatPresentation, GenId, ObjId, PresentationBuilder, SearchBudget, Word};
use crate::twocat::{concat, Bound, HomEmitter, Layer, TwoCatPresentation};

use super::{endo_objects, slice};

pub struct Level {
    pub pres: CatPresentation,
    /// Object id to its tuple of 1-cells.
    pub tuples: Vec<Vec<Word>>,
    index: HashMap<Vec<Word>, ObjId>,
    /// Generator id to the coordinate it acts on and its layer.
    pub gens: Vec<(usize, Layer)>,
    gen_index: HashMap<(Vec<Word>, usize, Layer), GenId>,
}

impl Level {
    pub fn object(&self, t: &[Word]) -> Option<ObjId> {
        self.index.get(t).copied()
    }

    /// Generator moving coordinate `i` of `src` by `layer`.
    pub fn generator(&self, src: &[Word], i: usize, layer: &Layer) -> Option<GenId> {
        self.gen_index.get(&(src.to_vec(), i, layer.clone())).copied()
    }
}

/// Output coordinate `j` of a face or degeneracy is the concatenation of the
/// input coordinates `groups[j]`; an empty group is an identity 1-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping(pub Vec<Vec<usize>>);

impl Grouping {
    fn apply(&self, b: &TwoCatPresentation, t: &[Word]) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::with_capacity(self.0.len());
        for (j, g) in self.0.iter().enumerate() {
            if g.is_empty() {
                // Identity at the point where the previous output ends.
                let at = if j == 0 { t[0].src } else { out[j - 1].tgt };
                out.push(Word::empty(at));
            } else {
                let parts: Vec<&Word> = g.iter().map(|&i| &t[i]).collect();
                out.push(concat(&parts));
            }
        }
        let _ = b;
        out
    }

    /// Output coordinate and whiskered layer for a layer on input coordinate `i`.
    fn apply_layer(&self, t: &[Word], i: usize, l: &Layer) -> (usize, Layer) {
        for (j, g) in self.0.iter().enumerate() {
            if let Some(p) = g.iter().position(|&k| k == i) {
                let before: Vec<&Word> = g[..p].iter().map(|&k| &t[k]).collect();
                let after: Vec<&Word> = g[p + 1..].iter().map(|&k| &t[k]).collect();
                let mut left = vec![];
                left.extend(before);
                left.push(&l.left);
                let mut right = vec![&l.right];
                right.extend(after);
                return (j, Layer { left: concat(&left), cell: l.cell, right: concat(&right) });
            }
        }
        unreachable!("every input coordinate is grouped")
    }
}

/// A functor between levels, on objects and generators.
pub struct FunctorData {
    pub grouping: Grouping,
    pub objects: Vec<ObjId>,
    pub generators: Vec<Word>,
}

impl FunctorData {
    pub fn apply(&self, target: &CatPresentation, w: &Word) -> Word {
        let mut out = Word::empty(self.objects[w.src as usize]);
        for &g in &w.letters {
            out = out.then(&self.generators[g as usize]);
        }
        debug_assert!(target.check_word(&out).is_ok());
        out
    }

    fn new(b: &TwoCatPresentation, grouping: Grouping, from: &Level, to: &Level) -> Result<Self> {
        let mut objects = Vec::new();
        for t in &from.tuples {
            let img = grouping.apply(b, t);
            objects.push(to.object(&img).ok_or_else(|| Error::Contract("face image lies beyond the truncation".into()))?);
        }
        let mut generators = Vec::new();
        for (g, (i, l)) in from.gens.iter().enumerate() {
            let src = &from.tuples[from.pres.generator(g as GenId).src as usize];
            let img_src = grouping.apply(b, src);
            let (j, layer) = grouping.apply_layer(src, *i, l);
            let h = to.generator(&img_src, j, &layer).ok_or_else(|| Error::Contract("face image of a layer is missing".into()))?;
            generators.push(to.pres.single(h));
        }
        Ok(FunctorData { grouping, objects, generators })
    }
}

pub struct TruncatedDiagram {
    pub two: TwoCatPresentation,
    pub bound: Bound,
    pub levels: [Level; 3],
    /// Level 1 to level 0: `d0(F, G) = F.G`, `d1(F, G) = G.F`.
    pub d1: [FunctorData; 2],
    /// Level 2 to level 1: `(F.G, H)`, `(F, G.H)`, `(H.F, G)`.
    pub d2: [FunctorData; 3],
    /// Level 0 to level 1: `F -> (F, ∅)`.
    pub s0: FunctorData,
    /// Level 1 to level 2: `(F, ∅, G)` and `(F, G, ∅)`.
    pub s1: [FunctorData; 2],
}

fn level(b: &TwoCatPresentation, bound: Bound, arity: usize) -> Result<Level> {
    let mut pb = PresentationBuilder::new();
    let mut tuples = Vec::new();
    let mut index = HashMap::new();
    for w in endo_objects(b, bound) {
        // Cut points 0 <= c1 <= .. <= c_{arity-1} <= |w|.
        let mut cuts = vec![0usize; arity + 1];
        cuts[arity] = w.len();
        fn rec(b: &TwoCatPresentation, w: &Word, cuts: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<Word>>) {
            let a = cuts.len() - 1;
            if k == a {
                out.push((0..a).map(|i| slice(w, b, cuts[i], cuts[i + 1])).collect());
                return;
            }
            for c in cuts[k - 1]..=w.len() {
                cuts[k] = c;
                rec(b, w, cuts, k + 1, out);
            }
        }
        let mut found = Vec::new();
        if arity == 1 {
            found.push(vec![w.clone()]);
        } else {
            rec(b, &w, &mut cuts, 1, &mut found);
        }
        for t in found {
            let label = t.iter().map(|x| b.display_path(x)).collect::<Vec<_>>().join("|");
            let o = pb.object(&format!("({label})"));
            index.insert(t.clone(), o);
            tuples.push(t);
        }
    }
    // Factor hom-categories, truncated on their own; the tuple filter does the rest.
    let mut fb = PresentationBuilder::new();
    let mut fe = HomEmitter::default();
    let zc = b.zero_cells().len() as u32;
    for x in 0..zc {
        for y in 0..zc {
            fe.emit(b, x, y, bound, &mut fb)?;
        }
    }
    let factor = fb.build();
    let mut by_src: HashMap<Word, Vec<(GenId, Layer)>> = HashMap::new();
    let mut fl: Vec<(GenId, Layer)> = fe.layer_of.iter().map(|(&g, l)| (g, l.clone())).collect();
    fl.sort_by_key(|x| x.0);
    for (g, l) in fl {
        by_src.entry(b.layer_boundary(&l).0).or_default().push((g, l));
    }
    let mut gens = Vec::new();
    let mut gen_index = HashMap::new();
    for t in &tuples {
        for i in 0..arity {
            for (_, l) in by_src.get(&t[i]).into_iter().flatten() {
                let mut t2 = t.clone();
                t2[i] = b.layer_boundary(l).1;
                let Some(&to) = index.get(&t2) else { continue };
                let parts: Vec<String> = (0..arity)
                    .map(|k| if k == i { b.layer_label(l) } else { b.display_path(&t[k]) })
                    .collect();
                let g = pb.generator(&format!("({})", parts.join("|")), index[t], to)?;
                gens.push((i, l.clone()));
                gen_index.insert((t.clone(), i, l.clone()), g);
            }
        }
    }
    let factor_word = |fw: &Word| -> Vec<Layer> { fw.letters.iter().map(|g| fe.layer_of[g].clone()).collect() };
    // Walks `layers` on coordinate `i` from tuple `t`, or None if it leaves the truncation.
    let walk = |t: &Vec<Word>, i: usize, layers: &[Layer]| -> Option<Word> {
        let mut cur = t.clone();
        let mut letters = Vec::new();
        for l in layers {
            letters.push(*gen_index.get(&(cur.clone(), i, l.clone()))?);
            cur[i] = b.layer_boundary(l).1;
        }
        Some(Word { src: index[t], tgt: index[&cur], letters })
    };
    for (lw, rw) in factor.relations() {
        let (ll, rl) = (factor_word(lw), factor_word(rw));
        let a = &fe.objects.iter().find(|(_, &o)| o == lw.src).unwrap().0.clone();
        for t in &tuples {
            for i in 0..arity {
                if &t[i] != a {
                    continue;
                }
                if let (Some(x), Some(y)) = (walk(t, i, &ll), walk(t, i, &rl)) {
                    pb.relation(x, y)?;
                }
            }
        }
    }
    for t in &tuples {
        for i in 0..arity {
            for j in (i + 1)..arity {
                for (_, li) in by_src.get(&t[i]).into_iter().flatten() {
                    for (_, lj) in by_src.get(&t[j]).into_iter().flatten() {
                        let mut corner = t.clone();
                        corner[i] = b.layer_boundary(li).1;
                        let first = walk(t, i, std::slice::from_ref(li)).and_then(|x| walk(&corner, j, std::slice::from_ref(lj)).map(|y| x.then(&y)));
                        let mut corner2 = t.clone();
                        corner2[j] = b.layer_boundary(lj).1;
                        let second = walk(t, j, std::slice::from_ref(lj)).and_then(|x| walk(&corner2, i, std::slice::from_ref(li)).map(|y| x.then(&y)));
                        if let (Some(x), Some(y)) = (first, second) {
                            pb.relation(x, y)?;
                        }
                    }
                }
            }
        }
    }
    Ok(Level { pres: pb.build(), tuples, index, gens, gen_index })
}

pub fn simplicial_diagram(b: &TwoCatPresentation, bound: Bound, budget: &SearchBudget) -> Result<TruncatedDiagram> {
    budget.validate()?;
    let levels = [level(b, bound, 1)?, level(b, bound, 2)?, level(b, bound, 3)?];
    let g = |v: &[&[usize]]| Grouping(v.iter().map(|x| x.to_vec()).collect());
    let d1 = [
        FunctorData::new(b, g(&[&[0, 1]]), &levels[1], &levels[0])?,
        FunctorData::new(b, g(&[&[1, 0]]), &levels[1], &levels[0])?,
    ];
    let d2 = [
        FunctorData::new(b, g(&[&[0, 1], &[2]]), &levels[2], &levels[1])?,
        FunctorData::new(b, g(&[&[0], &[1, 2]]), &levels[2], &levels[1])?,
        FunctorData::new(b, g(&[&[2, 0], &[1]]), &levels[2], &levels[1])?,
    ];
    let s0 = FunctorData::new(b, g(&[&[0], &[]]), &levels[0], &levels[1])?;
    let s1 = [
        FunctorData::new(b, g(&[&[0], &[], &[1]]), &levels[1], &levels[2])?,
        FunctorData::new(b, g(&[&[0], &[1], &[]]), &levels[1], &levels[2])?,
    ];
    Ok(TruncatedDiagram { two: b.clone(), bound, levels, d1, d2, s0, s1 })
}

/// A generating face or degeneracy, as a functor from level `from` to level `to`.
pub struct Arrow<'a> {
    pub name: &'static str,
    pub from: usize,
    pub to: usize,
    pub kind: ArrowKind,
    pub functor: &'a FunctorData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowKind {
    /// Dual to the coface skipping `i`.
    Face(usize),
    /// Dual to the codegeneracy repeating `j`.
    Degeneracy(usize),
}

/// Indices into [`TruncatedDiagram::arrows`]: `a` then `b` equals `c` then `d`, or the identity.
pub const SIMPLICIAL_IDENTITIES: [((usize, usize), Option<(usize, usize)>); 12] = [
    ((3, 0), Some((2, 0))),
    ((4, 0), Some((2, 1))),
    ((4, 1), Some((3, 1))),
    ((5, 0), None),
    ((5, 1), None),
    ((6, 2), None),
    ((6, 3), None),
    ((6, 4), Some((1, 5))),
    ((7, 2), Some((0, 5))),
    ((7, 3), None),
    ((7, 4), None),
    ((5, 6), Some((5, 7))),
];

impl TruncatedDiagram {
    /// `d0, d1` on level 1, `d0, d1, d2` on level 2, `s0` on level 0, `s0, s1` on level 1.
    pub fn arrows(&self) -> [Arrow<'_>; 8] {
        let a = |name, from, to, kind, functor| Arrow { name, from, to, kind, functor };
        [
            a("d0", 1, 0, ArrowKind::Face(0), &self.d1[0]),
            a("d1", 1, 0, ArrowKind::Face(1), &self.d1[1]),
            a("d0", 2, 1, ArrowKind::Face(0), &self.d2[0]),
            a("d1", 2, 1, ArrowKind::Face(1), &self.d2[1]),
            a("d2", 2, 1, ArrowKind::Face(2), &self.d2[2]),
            a("s0", 0, 1, ArrowKind::Degeneracy(0), &self.s0),
            a("s0", 1, 2, ArrowKind::Degeneracy(0), &self.s1[0]),
            a("s1", 1, 2, ArrowKind::Degeneracy(1), &self.s1[1]),
        ]
    }

    fn compose(&self, first: &FunctorData, from: usize, second: &FunctorData, to: usize) -> (Vec<ObjId>, Vec<Word>) {
        let mid = &self.levels[to];
        let objects = first.objects.iter().map(|&o| second.objects[o as usize]).collect();
        let gens = first.generators.iter().map(|w| second.apply(&mid.pres, w)).collect();
        let _ = from;
        (objects, gens)
    }

    /// Checks the simplicial identities on objects and generators.
    pub fn verify_identities(&self) -> Result<()> {
        let check = |name: &str, a: (Vec<ObjId>, Vec<Word>), b: (Vec<ObjId>, Vec<Word>)| {
            if a == b {
                Ok(())
            } else {
                Err(Error::Validation(format!("simplicial identity {name} fails")))
            }
        };
        let id = |l: usize| -> (Vec<ObjId>, Vec<Word>) {
            let p = &self.levels[l].pres;
            ((0..p.objects().len() as ObjId).collect(), (0..p.generators().len() as GenId).map(|g| p.single(g)).collect())
        };
        let (d, e, s, t) = (&self.d1, &self.d2, &self.s0, &self.s1);
        check("d0 d1 = d0 d0", self.compose(&e[1], 2, &d[0], 0), self.compose(&e[0], 2, &d[0], 0))?;
        check("d0 d2 = d1 d0", self.compose(&e[2], 2, &d[0], 0), self.compose(&e[0], 2, &d[1], 0))?;
        check("d1 d2 = d1 d1", self.compose(&e[2], 2, &d[1], 0), self.compose(&e[1], 2, &d[1], 0))?;
        check("d0 s0 = id", self.compose(s, 0, &d[0], 0), id(0))?;
        check("d1 s0 = id", self.compose(s, 0, &d[1], 0), id(0))?;
        check("d0 s0 = id (level 1)", self.compose(&t[0], 1, &e[0], 1), id(1))?;
        check("d1 s0 = id (level 1)", self.compose(&t[0], 1, &e[1], 1), id(1))?;
        check("d2 s0 = s0 d1", self.compose(&t[0], 1, &e[2], 1), self.compose(&d[1], 1, s, 1))?;
        check("d0 s1 = s0 d0", self.compose(&t[1], 1, &e[0], 1), self.compose(&d[0], 1, s, 1))?;
        check("d1 s1 = id", self.compose(&t[1], 1, &e[1], 1), id(1))?;
        check("d2 s1 = id", self.compose(&t[1], 1, &e[2], 1), id(1))?;
        check("s0 s0 = s1 s0", self.compose(s, 0, &t[0], 2), self.compose(s, 0, &t[1], 2))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twocat::{catalog, CatalogName};

    fn diag(n: CatalogName, len: usize) -> (TwoCatPresentation, TruncatedDiagram) {
        let b = catalog(&n).unwrap();
        let d = simplicial_diagram(&b, Bound::length(0, len), &SearchBudget::default()).unwrap();
        (b, d)
    }

    #[test]
    fn terminal_levels_are_points() {
        let (_, d) = diag(CatalogName::Terminal, 3);
        for l in &d.levels {
            assert_eq!(l.pres.objects().len(), 1);
            assert!(l.pres.generators().is_empty());
        }
        d.verify_identities().unwrap();
    }

    #[test]
    fn bn_levels_are_discrete() {
        let (b, d) = diag(CatalogName::BN, 3);
        let counts: Vec<usize> = d.levels.iter().map(|l| l.pres.objects().len()).collect();
        // Tuples of naturals with sum at most 3.
        assert_eq!(counts, [4, 10, 20]);
        assert!(d.levels.iter().all(|l| l.pres.generators().is_empty()));
        let x = |k: usize| b.path(0, &vec!["x"; k]).unwrap();
        let nm = d.levels[1].object(&[x(1), x(2)]).unwrap();
        assert_eq!(d.d1[0].objects[nm as usize], d.levels[0].object(&[x(3)]).unwrap());
        assert_eq!(d.d1[1].objects[nm as usize], d.levels[0].object(&[x(3)]).unwrap());
        d.verify_identities().unwrap();
    }

    #[test]
    fn adj_faces() {
        let (b, d) = diag(CatalogName::Adj, 2);
        let shown: Vec<String> = d.levels[0].tuples.iter().map(|t| b.display_path(&t[0])).collect();
        for w in ["∅0", "f.g", "∅1", "g.f"] {
            assert!(shown.contains(&w.to_string()), "{w}");
        }
        let (f, g) = (b.path(0, &["f"]).unwrap(), b.path(1, &["g"]).unwrap());
        let o = d.levels[1].object(&[f.clone(), g.clone()]).unwrap();
        let img0 = &d.levels[0].tuples[d.d1[0].objects[o as usize] as usize][0];
        let img1 = &d.levels[0].tuples[d.d1[1].objects[o as usize] as usize][0];
        assert_eq!(b.display_path(img0), "f.g");
        assert_eq!(b.display_path(img1), "g.f");
        d.verify_identities().unwrap();
    }

    #[test]
    fn monoid_layers_map_functorially() {
        let (_, d) = diag(CatalogName::BDeltaPlus, 3);
        d.verify_identities().unwrap();
        assert!(!d.levels[1].pres.generators().is_empty());
    }
}
