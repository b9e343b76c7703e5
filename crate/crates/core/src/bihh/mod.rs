//! The trace category biHH(B) presented by generators and relations.
//!
//! Objects are endo-1-cells `F: X -> X`. Generators are whiskered endo
//! 2-cells and twist symbols `(F, G): F.G -> G.F` with formal inverses.
//! Relations, all in diagrammatic order:
//!
//! 1. `(F, ∅) = id`
//! 2. the relations of every endo hom-category
//! 3. `(F, G) ; (F, G)^-1 = id` and `(F, G)^-1 ; (F, G) = id`
//! 4. naturality in each variable, per generating layer:
//!    `(α.G) ; (H, G) = (F, G) ; (G.α)` and `(F.β) ; (F, L) = (F, G) ; (β.F)`
//! 5. `(F, G.H) = (F.G, H) ; (H.F, G)`

mod delta;
mod diagram;
mod winding;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::present::{CatPresentation, GenId, ObjId, PresentationBuilder, SearchBudget, Witness, Word};
use crate::twocat::{concat, one_cells, Bound, HomEmitter, Layer, PastingTerm, TwoCatPresentation};

pub use delta::{verify_bdelta_structure, DeltaComparison};
pub use diagram::{
    simplicial_diagram, Arrow, ArrowKind, FunctorData, Grouping, Level, TruncatedDiagram, SIMPLICIAL_IDENTITIES,
};

/// `(f, g): f.g -> g.f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistSymbol {
    pub f: Word,
    pub g: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BihhGenerator {
    Layer(Layer),
    Twist(TwistSymbol),
    TwistInverse(TwistSymbol),
}

/// Relation indices the winding normalizer replays.
#[derive(Default)]
pub(crate) struct RelationIndex {
    pub unit: HashMap<ObjId, usize>,
    /// `[t, t^-1] = id`, keyed by the forward twist.
    pub cancel_fwd: HashMap<GenId, usize>,
    /// `[t^-1, t] = id`, keyed by the forward twist.
    pub cancel_bwd: HashMap<GenId, usize>,
    /// `(F, G.H) = ...` for `F.G.H` the object, `|F| = i`, `|F.G| = j`.
    pub cocycle: HashMap<(ObjId, usize, usize), usize>,
}

pub struct Bihh {
    two: TwoCatPresentation,
    bound: Bound,
    pres: CatPresentation,
    objects: Vec<Word>,
    emitter: HomEmitter,
    twists: HashMap<TwistSymbol, (GenId, GenId)>,
    kinds: Vec<BihhGenerator>,
    winding: Arc<winding::Winding>,
}

fn slice(w: &Word, b: &TwoCatPresentation, from: usize, to: usize) -> Word {
    let at = |k: usize| if k == 0 { w.src } else { b.gen1()[w.letters[k - 1] as usize].tgt };
    Word { src: at(from), tgt: at(to), letters: w.letters[from..to].to_vec() }
}

/// biHH(B) with 1-cells up to the budget's word length.
pub fn bihh_presentation(b: &TwoCatPresentation, budget: &SearchBudget) -> Result<Bihh> {
    Bihh::new(b, Bound::length(0, budget.max_word_length), budget)
}

impl Bihh {
    /// biHH(B) restricted to endo-1-cells of degree at most `degree`.
    pub fn with_degree(b: &TwoCatPresentation, degree: usize, budget: &SearchBudget) -> Result<Self> {
        Bihh::new(b, Bound { base: 0, max_len: budget.max_word_length.max(degree), max_degree: Some(degree) }, budget)
    }

    pub fn new(b: &TwoCatPresentation, bound: Bound, budget: &SearchBudget) -> Result<Self> {
        budget.validate()?;
        if b.zero_cells().is_empty() {
            return Err(Error::Validation("a 2-category needs at least one 0-cell".into()));
        }
        let mut pb = PresentationBuilder::new();
        let mut emitter = HomEmitter::default();
        let zc = b.zero_cells().len() as u32;
        for x in 0..zc {
            emitter.emit(b, x, x, bound, &mut pb)?;
        }
        let mut kinds: Vec<BihhGenerator> = vec![BihhGenerator::Layer(Layer {
            left: Word::empty(0),
            cell: crate::twocat::Cell { gen: 0, inverse: false },
            right: Word::empty(0),
        }); pb.generator_count()];
        for (&g, l) in &emitter.layer_of {
            kinds[g as usize] = BihhGenerator::Layer(l.clone());
        }
        let mut objects = vec![Word::empty(0); emitter.objects.len()];
        for (w, &o) in &emitter.objects {
            objects[o as usize] = w.clone();
        }
        let mut idx = RelationIndex::default();
        let mut twists = HashMap::new();
        let mut split_gen: HashMap<(ObjId, usize), GenId> = HashMap::new();
        for (o, w) in objects.clone().iter().enumerate() {
            for i in 0..=w.len() {
                let (f, g) = (slice(w, b, 0, i), slice(w, b, i, w.len()));
                let rot = concat(&[&g, &f]);
                let to = *emitter.objects.get(&rot).ok_or_else(|| Error::Contract("rotation of an object is missing".into()))?;
                let label = format!("({},{})", b.display_path(&f), b.display_path(&g));
                let t = pb.generator(&label, o as ObjId, to)?;
                let ti = pb.generator(&format!("{label}^-1"), to, o as ObjId)?;
                let sym = TwistSymbol { f, g };
                kinds.push(BihhGenerator::Twist(sym.clone()));
                kinds.push(BihhGenerator::TwistInverse(sym.clone()));
                twists.insert(sym, (t, ti));
                split_gen.insert((o as ObjId, i), t);
            }
        }
        let one = |pb: &PresentationBuilder, src: ObjId, l: &[GenId]| pb.word(src, l);
        for (o, w) in objects.iter().enumerate() {
            let o = o as ObjId;
            let n = w.len();
            // (1)
            idx.unit.insert(o, pb.relation_count());
            pb.relation(one(&pb, o, &[split_gen[&(o, n)]])?, Word::empty(o))?;
            for i in 0..=n {
                // (3)
                let t = split_gen[&(o, i)];
                let (tt, ti) = (t, pb.generator_id(&format!("{}^-1", pb.generator_at(t).label)).unwrap());
                let to = pb.generator_at(t).tgt;
                idx.cancel_fwd.insert(t, pb.relation_count());
                pb.relation(one(&pb, o, &[tt, ti])?, Word::empty(o))?;
                idx.cancel_bwd.insert(t, pb.relation_count());
                pb.relation(one(&pb, to, &[ti, tt])?, Word::empty(to))?;
                // (5)
                for j in i..=n {
                    let (f, g, h) = (slice(w, b, 0, i), slice(w, b, i, j), slice(w, b, j, n));
                    let lhs = twists[&TwistSymbol { f: f.clone(), g: concat(&[&g, &h]) }].0;
                    let a = twists[&TwistSymbol { f: concat(&[&f, &g]), g: h.clone() }].0;
                    let c = twists[&TwistSymbol { f: concat(&[&h, &f]), g }].0;
                    idx.cocycle.insert((o, i, j), pb.relation_count());
                    pb.relation(one(&pb, o, &[lhs])?, one(&pb, o, &[a, c])?)?;
                }
            }
        }
        // (4)
        let mut layers: Vec<(GenId, Layer)> = emitter.layer_of.iter().map(|(&g, l)| (g, l.clone())).collect();
        layers.sort_by_key(|(g, _)| *g);
        for (lam, l) in &layers {
            let (a, bb) = b.cell_boundary(l.cell);
            let src = emitter.objects[&concat(&[&l.left, a, &l.right])];
            for k in 0..=l.right.len() {
                let (r1, g) = (slice(&l.right, b, 0, l.right.len() - k), slice(&l.right, b, l.right.len() - k, l.right.len()));
                let f = concat(&[&l.left, a, &r1]);
                let h = concat(&[&l.left, bb, &r1]);
                let moved = Layer { left: concat(&[&g, &l.left]), cell: l.cell, right: r1.clone() };
                let Some(&mv) = emitter.layers.get(&(moved.left.letters.clone(), moved.cell, moved.right.letters.clone())) else { continue };
                let lhs = one(&pb, src, &[*lam, twists[&TwistSymbol { f: h, g: g.clone() }].0])?;
                let rhs = one(&pb, src, &[twists[&TwistSymbol { f, g }].0, mv])?;
                pb.relation(lhs, rhs)?;
            }
            for k in 0..=l.left.len() {
                let (f, l2) = (slice(&l.left, b, 0, k), slice(&l.left, b, k, l.left.len()));
                let g = concat(&[&l2, a, &l.right]);
                let lw = concat(&[&l2, bb, &l.right]);
                let moved = Layer { left: l2.clone(), cell: l.cell, right: concat(&[&l.right, &f]) };
                let Some(&mv) = emitter.layers.get(&(moved.left.letters.clone(), moved.cell, moved.right.letters.clone())) else { continue };
                let lhs = one(&pb, src, &[*lam, twists[&TwistSymbol { f: f.clone(), g: lw }].0])?;
                let rhs = one(&pb, src, &[twists[&TwistSymbol { f, g }].0, mv])?;
                pb.relation(lhs, rhs)?;
            }
        }
        let mut pres = pb.build();
        let winding = Arc::new(winding::Winding::new(&pres, &objects, idx, &split_gen));
        if b.gen2().is_empty() {
            pres = pres.with_normalizer(winding.clone());
        }
        Ok(Bihh { two: b.clone(), bound, pres, objects, emitter, twists, kinds, winding })
    }

    pub fn presentation(&self) -> &CatPresentation {
        &self.pres
    }

    pub fn two_category(&self) -> &TwoCatPresentation {
        &self.two
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    /// The endo-1-cell each object stands for.
    pub fn objects(&self) -> &[Word] {
        &self.objects
    }

    pub fn object(&self, w: &Word) -> Option<ObjId> {
        self.emitter.objects.get(w).copied()
    }

    pub fn kind(&self, g: GenId) -> &BihhGenerator {
        &self.kinds[g as usize]
    }

    pub fn twist(&self, f: &Word, g: &Word) -> Option<GenId> {
        self.twists.get(&TwistSymbol { f: f.clone(), g: g.clone() }).map(|p| p.0)
    }

    pub fn twist_inverse(&self, f: &Word, g: &Word) -> Option<GenId> {
        self.twists.get(&TwistSymbol { f: f.clone(), g: g.clone() }).map(|p| p.1)
    }

    pub fn layer(&self, l: &Layer) -> Option<GenId> {
        self.emitter.layers.get(&(l.left.letters.clone(), l.cell, l.right.letters.clone())).copied()
    }

    /// Decides equality of two parallel words made of twists alone.
    /// None when a letter is a layer or the words differ.
    pub fn twist_equal(&self, a: &Word, b: &Word) -> Option<Witness> {
        use crate::present::ExactNormalizer;
        let w = &*self.winding;
        if a.src != b.src || a.tgt != b.tgt || !w.twist_only(a) || !w.twist_only(b) {
            return None;
        }
        if w.normal_form(&self.pres, a) != w.normal_form(&self.pres, b) {
            return None;
        }
        Some(w.derivation(&self.pres, a)?.then(&w.derivation(&self.pres, b)?.inverse()))
    }

    /// Twist word `(f, g)` as a one-letter word.
    pub fn twist_word(&self, f: &Word, g: &Word) -> Result<Word> {
        let t = self.twist(f, g).ok_or_else(|| Error::Budget("twist symbol lies beyond the truncation".into()))?;
        Ok(self.pres.single(t))
    }

    /// The α-word of an endo 2-cell.
    pub fn word_of_term(&self, t: &PastingTerm) -> Result<Word> {
        self.emitter.word_of(|s, l| self.pres.word(s, l), t)
    }

    /// Objects and generating morphisms as a DOT digraph.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph bihh {\n");
        for (i, o) in self.pres.objects().iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", o.replace('"', "\\\""));
        }
        for (g, gen) in self.pres.generators().iter().enumerate() {
            if matches!(self.kinds[g], BihhGenerator::TwistInverse(_)) {
                continue;
            }
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", gen.src, gen.tgt, gen.label.replace('"', "\\\""));
        }
        s.push_str("}\n");
        s
    }
}

/// All endo-1-cells of `b` within the bound, grouped by 0-cell.
pub fn endo_objects(b: &TwoCatPresentation, bound: Bound) -> Vec<Word> {
    (0..b.zero_cells().len() as u32)
        .flat_map(|x| one_cells(b, x, x, bound.max_len).into_iter().filter(|w| bound.fits(b, w)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::present::{EqualityVerdict, Order};
    use crate::twocat::{catalog, CatalogName};

    fn bn(deg: usize) -> Bihh {
        Bihh::with_degree(&catalog(&CatalogName::BN).unwrap(), deg, &SearchBudget::default()).unwrap()
    }

    #[test]
    fn terminal_is_terminal() {
        let h = bihh_presentation(&catalog(&CatalogName::Terminal).unwrap(), &SearchBudget::default()).unwrap();
        let fp = h.presentation().to_finite(10).unwrap();
        assert_eq!(fp.category.morphism_count(), 1);
    }

    #[test]
    fn bn_generators() {
        let h = bn(3);
        let p = h.presentation();
        assert_eq!(p.objects().len(), 4);
        // n + 1 twists per object n, each with an inverse.
        assert_eq!(p.generators().len(), 2 * (1 + 2 + 3 + 4));
        assert!(h.kinds.iter().all(|k| !matches!(k, BihhGenerator::Layer(_))));
    }

    #[test]
    fn bn_index_identity() {
        let h = bn(5);
        let b = h.two_category();
        let budget = SearchBudget::default();
        for n in 1..=3usize {
            for m in 1..=(5 - n) {
                let xs = |k: usize| b.path(0, &vec!["x"; k]).unwrap();
                let lhs = h.twist_word(&xs(n), &xs(m)).unwrap();
                let single = h.twist_word(&xs(n + m - 1), &xs(1)).unwrap();
                let v = h.presentation().equal(&lhs, &single.pow(m), &budget).unwrap();
                assert!(v.is_equal(), "({n},{m})");
                if m > 1 {
                    let naive = h.twist_word(&xs(n), &xs(1)).ok();
                    assert!(naive.is_none_or(|w| w.src != lhs.src), "(n,1)^m does not typecheck");
                }
            }
        }
    }

    #[test]
    fn bn_twists_are_distinct_from_identity() {
        let h = bn(4);
        let b = h.two_category();
        let w = h.twist_word(&b.path(0, &["x", "x", "x"]).unwrap(), &b.path(0, &["x"]).unwrap()).unwrap();
        let v = h.presentation().equal(&w, &Word::empty(w.src), &SearchBudget::default()).unwrap();
        assert!(v.is_distinct());
    }

    #[test]
    fn unit_relation_on_every_object() {
        let h = bn(4);
        for (o, w) in h.objects().iter().enumerate() {
            let t = h.twist_word(w, &Word::empty(0)).unwrap();
            let v = h.presentation().equal(&t, &Word::empty(o as ObjId), &SearchBudget::default()).unwrap();
            assert!(matches!(v, EqualityVerdict::Equal(_)));
        }
    }

    #[test]
    fn bn_skeleton_small() {
        let h = bn(3);
        let r = h.presentation().skeleton(&SearchBudget::default()).unwrap();
        assert_eq!(r.classes.len(), 4);
        for c in &r.classes {
            let n = h.objects()[c.representative as usize].len();
            if n == 0 {
                assert!(c.automorphisms.is_empty());
            } else {
                assert_eq!(c.automorphisms.len(), 1);
                assert_eq!(c.automorphisms[0].order, Order::Free);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn winding_derivations_replay(start in 0usize..5, picks in proptest::collection::vec(0usize..64, 0..6)) {
            let h = bn(4);
            let p = h.presentation();
            let mut w = Word::empty(start as ObjId);
            for k in picks {
                let out: Vec<GenId> = (0..p.generators().len() as GenId).filter(|&g| p.generator(g).src == w.tgt).collect();
                w = w.then(&p.single(out[k % out.len()]));
            }
            let n = p.normalizer().unwrap();
            let d = n.derivation(p, &w).unwrap();
            proptest::prop_assert!(d.proves(p, &w, &n.normal_form(p, &w)));
        }
    }

    #[test]
    fn bnn_rotation_classes() {
        let h = Bihh::with_degree(&catalog(&CatalogName::BNN).unwrap(), 2, &SearchBudget::default()).unwrap();
        let r = h.presentation().skeleton(&SearchBudget::default()).unwrap();
        // ∅, x, y, xx, yy, and {xy, yx}.
        assert_eq!(r.classes.len(), 6);
    }

    #[test]
    fn sigma_ab_is_cyclic() {
        let h = bihh_presentation(&catalog(&CatalogName::SigmaAb(vec![2])).unwrap(), &SearchBudget::default()).unwrap();
        let fp = h.presentation().to_finite(100).unwrap();
        assert_eq!(fp.category.objects().len(), 1);
        assert_eq!(fp.category.morphism_count(), 2);
    }

    #[test]
    fn adj_naturality_and_cocycle_present() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let h = Bihh::with_degree(&b, 2, &SearchBudget::default()).unwrap();
        let fg = b.path(0, &["f", "g"]).unwrap();
        assert!(h.object(&fg).is_some());
        let (f, g) = (b.path(0, &["f"]).unwrap(), b.path(1, &["g"]).unwrap());
        let t = h.twist_word(&f, &g).unwrap();
        assert_eq!(h.presentation().display_word(&t), "(f,g)");
        assert!(h.to_dot().contains("(f,g)"));
    }
}
