//! Shadows, truncated pseudococones, and the strictification pair between them.
//!
//! Everything lives over a [`TruncatedDiagram`]. A shadow gives `⟨F⟩` on
//! level 0 and twists `θ_{F,G}: ⟨F.G⟩ -> ⟨G.F⟩`. A cocone gives a functor
//! `C_n` per level and, for every generating arrow `a` from level `n` to
//! level `m`, components `φ_a(o): C_m(a o) -> C_n(o)`.
//!
//! Under `Un`, `C_n = ⟨d0^n −⟩`, `φ_{d1}(F, G) = θ_{F,G}^-1`,
//! `φ_{d2}(F, G, H) = θ_{F.G,H}^-1` and every other component is an identity.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::bihh::{Bihh, TruncatedDiagram, SIMPLICIAL_IDENTITIES};
use crate::error::{Error, Result};
use crate::present::{
    CatPresentation, EqualityVerdict, FiniteCategory, FinitePresentation, GenId, ObjId, SearchBudget, Word,
};
use crate::twocat::Layer;

/// A category a shadow or cocone takes values in.
pub trait Target {
    type Mor: Clone + Debug + PartialEq;

    fn object_count(&self) -> usize;
    fn identity(&self, o: ObjId) -> Self::Mor;
    fn src(&self, m: &Self::Mor) -> ObjId;
    fn tgt(&self, m: &Self::Mor) -> ObjId;
    /// `f` then `g`, or `None` when they do not compose.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;
    /// `None` when undecided.
    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> Option<bool>;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;
    fn describe(&self, f: &Self::Mor) -> String;
}

impl Target for FiniteCategory {
    type Mor = usize;

    fn object_count(&self) -> usize {
        self.objects().len()
    }

    fn identity(&self, o: ObjId) -> usize {
        FiniteCategory::identity(self, o)
    }

    fn src(&self, m: &usize) -> ObjId {
        FiniteCategory::src(self, *m)
    }

    fn tgt(&self, m: &usize) -> ObjId {
        FiniteCategory::tgt(self, *m)
    }

    fn compose(&self, f: &usize, g: &usize) -> Option<usize> {
        FiniteCategory::compose(self, *f, *g)
    }

    fn equal(&self, f: &usize, g: &usize) -> Option<bool> {
        Some(f == g)
    }

    fn inverse(&self, f: &usize) -> Option<usize> {
        FiniteCategory::inverse(self, *f)
    }

    fn describe(&self, f: &usize) -> String {
        format!("#{f} {}", self.morphisms()[*f].label)
    }
}

/// A presented category; equality is decided within a budget.
pub struct PresentedTarget<'a> {
    pres: &'a CatPresentation,
    budget: SearchBudget,
    inverses: Vec<Option<GenId>>,
}

impl<'a> PresentedTarget<'a> {
    pub fn new(pres: &'a CatPresentation, budget: &SearchBudget) -> Self {
        PresentedTarget { pres, budget: *budget, inverses: pres.generator_inverses(budget) }
    }

    pub fn presentation(&self) -> &CatPresentation {
        self.pres
    }
}

impl Target for PresentedTarget<'_> {
    type Mor = Word;

    fn object_count(&self) -> usize {
        self.pres.objects().len()
    }

    fn identity(&self, o: ObjId) -> Word {
        Word::empty(o)
    }

    fn src(&self, m: &Word) -> ObjId {
        m.src
    }

    fn tgt(&self, m: &Word) -> ObjId {
        m.tgt
    }

    fn compose(&self, f: &Word, g: &Word) -> Option<Word> {
        (f.tgt == g.src).then(|| f.then(g))
    }

    fn equal(&self, f: &Word, g: &Word) -> Option<bool> {
        if f.src != g.src || f.tgt != g.tgt {
            return Some(false);
        }
        match self.pres.equal(f, g, &self.budget) {
            Ok(EqualityVerdict::Equal(_)) => Some(true),
            Ok(EqualityVerdict::Distinct(_)) => Some(false),
            _ => None,
        }
    }

    fn inverse(&self, f: &Word) -> Option<Word> {
        let mut letters = Vec::with_capacity(f.len());
        for &g in f.letters.iter().rev() {
            letters.push(self.inverses[g as usize]?);
        }
        Some(Word { src: f.tgt, tgt: f.src, letters })
    }

    fn describe(&self, f: &Word) -> String {
        self.pres.display_word(f)
    }
}

/// A functor out of a presented category, on objects and generators.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelFunctor<M> {
    pub objects: Vec<ObjId>,
    pub generators: Vec<M>,
}

impl<M: Clone + Debug + PartialEq> LevelFunctor<M> {
    pub fn apply<T: Target<Mor = M>>(&self, t: &T, w: &Word) -> Option<M> {
        let mut out = t.identity(*self.objects.get(w.src as usize)?);
        for &g in &w.letters {
            out = t.compose(&out, self.generators.get(g as usize)?)?;
        }
        Some(out)
    }
}

/// Values `⟨F⟩`, images of whiskered 2-cells, and twists `θ_{F,G}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowData<M> {
    pub objects: HashMap<Word, ObjId>,
    pub layers: HashMap<Layer, M>,
    pub theta: HashMap<(Word, Word), M>,
}

/// Functors `C_0, C_1, C_2` and `iso[a][o] = φ_a(o)` in the order of [`TruncatedDiagram::arrows`].
#[derive(Clone, Debug, PartialEq)]
pub struct CoconeData<M> {
    pub functors: [LevelFunctor<M>; 3],
    pub iso: Vec<Vec<M>>,
}

/// Components `C_n(o) -> C'_n(o)` of a cocone morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct CoconeMorphism<M> {
    pub components: [Vec<M>; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// Two paths from one object that were expected to agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub axiom: String,
    pub instance: String,
    pub lhs_path: Vec<String>,
    pub rhs_path: Vec<String>,
    /// The common source of both paths, or the expected source and target of a boundary.
    #[serde(default)]
    pub objects: Vec<ObjId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    /// Instances compared.
    pub instances: usize,
    /// Instances whose equality stayed undecided.
    pub undecided: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Compares path pairs; stops recording after the first failure.
pub(crate) struct Checker<'t, T: Target> {
    t: &'t T,
    instances: usize,
    undecided: usize,
    failure: Option<Counterexample>,
}

impl<'t, T: Target> Checker<'t, T> {
    pub(crate) fn new(t: &'t T) -> Self {
        Checker { t, instances: 0, undecided: 0, failure: None }
    }

    pub(crate) fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub(crate) fn fail(&mut self, axiom: &str, instance: String, lhs: &[&T::Mor], rhs: &[&T::Mor], objects: Vec<ObjId>) {
        if self.failure.is_none() {
            let show = |p: &[&T::Mor]| p.iter().map(|m| self.t.describe(m)).collect();
            self.failure =
                Some(Counterexample { axiom: axiom.into(), instance, lhs_path: show(lhs), rhs_path: show(rhs), objects });
        }
    }

    fn path(&self, src: ObjId, p: &[&T::Mor]) -> Option<T::Mor> {
        let mut out = self.t.identity(src);
        for m in p {
            out = self.t.compose(&out, m)?;
        }
        Some(out)
    }

    /// `lhs` and `rhs` are paths from `src` that must compose to the same morphism.
    pub(crate) fn paths(&mut self, axiom: &str, instance: impl FnOnce() -> String, src: ObjId, lhs: &[&T::Mor], rhs: &[&T::Mor]) {
        if self.failed() {
            return;
        }
        self.instances += 1;
        match (self.path(src, lhs), self.path(src, rhs)) {
            (Some(a), Some(b)) => match self.t.equal(&a, &b) {
                Some(true) => {}
                Some(false) => self.fail(axiom, instance(), lhs, rhs, vec![src]),
                None => self.undecided += 1,
            },
            _ => self.fail(&format!("{axiom} (paths do not compose)"), instance(), lhs, rhs, vec![src]),
        }
    }

    /// `m: from -> to`.
    pub(crate) fn boundary(&mut self, what: &str, instance: impl FnOnce() -> String, m: &T::Mor, from: ObjId, to: ObjId) {
        if self.failed() {
            return;
        }
        self.instances += 1;
        if (from as usize) >= self.t.object_count() || self.t.src(m) != from || self.t.tgt(m) != to {
            self.fail(&format!("boundary of {what}"), instance(), &[m], &[], vec![from, to]);
        }
    }

    pub(crate) fn invertible(&mut self, what: &str, instance: impl FnOnce() -> String, m: &T::Mor) {
        if self.failed() {
            return;
        }
        self.instances += 1;
        if self.t.inverse(m).is_none() {
            self.fail(&format!("invertibility of {what}"), instance(), &[m], &[], vec![]);
        }
    }

    pub(crate) fn report(self) -> CheckReport {
        let status = match (&self.failure, self.undecided) {
            (Some(_), _) => Status::Fail,
            (None, 0) => Status::Pass,
            (None, _) => Status::Inconclusive,
        };
        CheckReport { status, counterexample: self.failure, instances: self.instances, undecided: self.undecided }
    }
}

/// `⟨−⟩` and `θ` laid out along the diagram's levels 0 and 1.
struct Flat<M> {
    c0: LevelFunctor<M>,
    theta: Vec<M>,
}

fn flatten<M: Clone>(d: &TruncatedDiagram, s: &ShadowData<M>) -> Result<Flat<M>> {
    let b = &d.two;
    let (l0, l1) = (&d.levels[0], &d.levels[1]);
    let objects = l0
        .tuples
        .iter()
        .map(|t| s.objects.get(&t[0]).copied().ok_or_else(|| Error::Validation(format!("no value for ⟨{}⟩", b.display_path(&t[0])))))
        .collect::<Result<_>>()?;
    let generators = l0
        .gens
        .iter()
        .map(|(_, l)| s.layers.get(l).cloned().ok_or_else(|| Error::Validation(format!("no value for {}", b.layer_label(l)))))
        .collect::<Result<_>>()?;
    let theta = l1
        .tuples
        .iter()
        .map(|t| {
            s.theta.get(&(t[0].clone(), t[1].clone())).cloned().ok_or_else(|| {
                Error::Validation(format!("no twist θ({},{})", b.display_path(&t[0]), b.display_path(&t[1])))
            })
        })
        .collect::<Result<_>>()?;
    Ok(Flat { c0: LevelFunctor { objects, generators }, theta })
}

pub(crate) fn check_functor<T: Target>(
    ck: &mut Checker<'_, T>,
    what: &str,
    pres: &CatPresentation,
    f: &LevelFunctor<T::Mor>,
) -> Result<()> {
    if f.objects.len() != pres.objects().len() || f.generators.len() != pres.generators().len() {
        return Err(Error::Validation(format!("{what} does not cover its source category")));
    }
    for (g, m) in f.generators.iter().enumerate() {
        let gen = pres.generator(g as GenId);
        ck.boundary(what, || gen.label.clone(), m, f.objects[gen.src as usize], f.objects[gen.tgt as usize]);
    }
    for (l, r) in pres.relations() {
        if ck.failed() {
            break;
        }
        let lhs: Vec<&T::Mor> = l.letters.iter().map(|&g| &f.generators[g as usize]).collect();
        let rhs: Vec<&T::Mor> = r.letters.iter().map(|&g| &f.generators[g as usize]).collect();
        let inst = || format!("{} = {}", pres.display_word(l), pres.display_word(r));
        ck.paths(&format!("functoriality of {what}"), inst, f.objects[l.src as usize], &lhs, &rhs);
    }
    Ok(())
}

pub(crate) fn apply<T: Target>(t: &T, f: &LevelFunctor<T::Mor>, w: &Word) -> Result<T::Mor> {
    f.apply(t, w).ok_or_else(|| Error::Validation("functor data does not compose along a word".into()))
}

/// The shadow axioms: functoriality, naturality of `θ`, `θ_{F,G.H} = θ_{F.G,H} ; θ_{H.F,G}` and `θ_{F,∅} = id`.
pub fn check_shadow<T: Target>(d: &TruncatedDiagram, t: &T, s: &ShadowData<T::Mor>) -> Result<CheckReport> {
    let Flat { c0, theta } = flatten(d, s)?;
    let (l0, l1, l2) = (&d.levels[0], &d.levels[1], &d.levels[2]);
    let b = &d.two;
    let mut ck = Checker::new(t);
    for tp in &l0.tuples {
        let o = s.objects[&tp[0]];
        if o as usize >= t.object_count() {
            ck.fail("boundary of ⟨−⟩", b.display_path(&tp[0]), &[], &[], vec![o]);
        }
    }
    check_functor(&mut ck, "⟨−⟩", &l0.pres, &c0)?;
    let name = |o: usize| l1.pres.objects()[o].clone();
    for (o, th) in theta.iter().enumerate() {
        let (from, to) = (c0.objects[d.d1[0].objects[o] as usize], c0.objects[d.d1[1].objects[o] as usize]);
        ck.boundary("θ", || name(o), th, from, to);
        ck.invertible("θ", || name(o), th);
    }
    for o in 0..l0.tuples.len() {
        let unit = d.s0.objects[o] as usize;
        ck.paths("unit θ(F,∅) = id", || name(unit), c0.objects[o], &[&theta[unit]], &[]);
    }
    for g in 0..l1.pres.generators().len() {
        let gen = l1.pres.generator(g as GenId);
        let top = apply(t, &c0, &d.d1[0].generators[g])?;
        let bottom = apply(t, &c0, &d.d1[1].generators[g])?;
        let (o, o2) = (gen.src as usize, gen.tgt as usize);
        let src = c0.objects[d.d1[0].objects[o] as usize];
        ck.paths("naturality of θ", || gen.label.clone(), src, &[&top, &theta[o2]], &[&theta[o], &bottom]);
    }
    for o in 0..l2.tuples.len() {
        let [a, bb, c] = [0, 1, 2].map(|i| d.d2[i].objects[o] as usize);
        let src = c0.objects[d.d1[0].objects[bb] as usize];
        let inst = || l2.pres.objects()[o].clone();
        ck.paths("cocycle θ(F,G.H) = θ(F.G,H) ; θ(H.F,G)", inst, src, &[&theta[bb]], &[&theta[a], &theta[c]]);
    }
    Ok(ck.report())
}

/// `θ_{∅,F} = id`; reported separately since the twist relations do not imply it.
pub fn check_right_unit<T: Target>(d: &TruncatedDiagram, t: &T, s: &ShadowData<T::Mor>) -> Result<CheckReport> {
    let Flat { c0, theta } = flatten(d, s)?;
    let l1 = &d.levels[1];
    let mut ck = Checker::new(t);
    for (o, tup) in l1.tuples.iter().enumerate() {
        if tup[0].is_empty() {
            let src = c0.objects[d.d1[0].objects[o] as usize];
            ck.paths("unit θ(∅,F) = id", || l1.pres.objects()[o].clone(), src, &[&theta[o]], &[]);
        }
    }
    Ok(ck.report())
}

/// Naturality of `alpha` and `α_{F.G} ; θ2_{F,G} = θ1_{F,G} ; α_{G.F}`.
pub fn check_shadow_morphism<T: Target>(
    d: &TruncatedDiagram,
    t: &T,
    s1: &ShadowData<T::Mor>,
    s2: &ShadowData<T::Mor>,
    alpha: &HashMap<Word, T::Mor>,
) -> Result<CheckReport> {
    let (f1, f2) = (flatten(d, s1)?, flatten(d, s2)?);
    let (l0, l1) = (&d.levels[0], &d.levels[1]);
    let b = &d.two;
    let comps: Vec<T::Mor> = l0
        .tuples
        .iter()
        .map(|tp| alpha.get(&tp[0]).cloned().ok_or_else(|| Error::Validation(format!("no component at {}", b.display_path(&tp[0])))))
        .collect::<Result<_>>()?;
    let mut ck = Checker::new(t);
    for (o, a) in comps.iter().enumerate() {
        ck.boundary("α", || b.display_path(&l0.tuples[o][0]), a, f1.c0.objects[o], f2.c0.objects[o]);
    }
    for g in 0..l0.pres.generators().len() {
        let gen = l0.pres.generator(g as GenId);
        let (x, y) = (&f1.c0.generators[g], &f2.c0.generators[g]);
        let (o, o2) = (gen.src as usize, gen.tgt as usize);
        ck.paths("naturality of α", || gen.label.clone(), f1.c0.objects[o], &[x, &comps[o2]], &[&comps[o], y]);
    }
    for o in 0..l1.tuples.len() {
        let (fg, gf) = (d.d1[0].objects[o] as usize, d.d1[1].objects[o] as usize);
        let inst = || l1.pres.objects()[o].clone();
        ck.paths("α commutes with θ", inst, f1.c0.objects[fg], &[&comps[fg], &f2.theta[o]], &[&f1.theta[o], &comps[gf]]);
    }
    Ok(ck.report())
}

fn check_shape<M>(d: &TruncatedDiagram, c: &CoconeData<M>) -> Result<()> {
    let arrows = d.arrows();
    if c.iso.len() != arrows.len() {
        return Err(Error::Validation(format!("expected {} families of cocone components", arrows.len())));
    }
    for (a, row) in arrows.iter().zip(&c.iso) {
        if row.len() != d.levels[a.from].tuples.len() {
            return Err(Error::Validation(format!("cocone components for {} do not cover level {}", a.name, a.from)));
        }
    }
    Ok(())
}

/// Functoriality of each `C_n`, invertibility and naturality of each `φ_a`, and
/// `φ_b(a o) ; φ_a(o) = φ_{b'}(a' o) ; φ_{a'}(o)` for every simplicial identity `b a = b' a'`.
pub fn check_cocone<T: Target>(d: &TruncatedDiagram, t: &T, c: &CoconeData<T::Mor>) -> Result<CheckReport> {
    check_shape(d, c)?;
    let arrows = d.arrows();
    let mut ck = Checker::new(t);
    for (n, f) in c.functors.iter().enumerate() {
        check_functor(&mut ck, &format!("C{n}"), &d.levels[n].pres, f)?;
    }
    for (ai, a) in arrows.iter().enumerate() {
        let (from, to) = (&c.functors[a.from], &c.functors[a.to]);
        let names = d.levels[a.from].pres.objects();
        for (o, phi) in c.iso[ai].iter().enumerate() {
            let inst = || format!("{} at {}", a.name, names[o]);
            ck.boundary("φ", inst, phi, to.objects[a.functor.objects[o] as usize], from.objects[o]);
            ck.invertible("φ", inst, phi);
        }
        let pres = &d.levels[a.from].pres;
        for g in 0..pres.generators().len() {
            let gen = pres.generator(g as GenId);
            let img = apply(t, to, &a.functor.generators[g])?;
            let (o, o2) = (gen.src as usize, gen.tgt as usize);
            let src = to.objects[a.functor.objects[o] as usize];
            let inst = || format!("{} at {}", a.name, gen.label);
            ck.paths("naturality of φ", inst, src, &[&img, &c.iso[ai][o2]], &[&c.iso[ai][o], &from.generators[g]]);
        }
    }
    for ((a1, a2), rhs) in SIMPLICIAL_IDENTITIES {
        let (x, y) = (&arrows[a1], &arrows[a2]);
        let names = d.levels[x.from].pres.objects();
        for o in 0..names.len() {
            let mid = x.functor.objects[o] as usize;
            let src = c.functors[y.to].objects[y.functor.objects[mid] as usize];
            let lhs = [&c.iso[a2][mid], &c.iso[a1][o]];
            let rhs: Vec<&T::Mor> = match rhs {
                Some((b1, b2)) => vec![&c.iso[b2][arrows[b1].functor.objects[o] as usize], &c.iso[b1][o]],
                None => vec![],
            };
            let inst = || format!("{}{} at {}", y.name, x.name, names[o]);
            ck.paths("cocone coherence", inst, src, &lhs, &rhs);
        }
    }
    Ok(ck.report())
}

/// Naturality of each component and `φ_a(o) ; ψ_n(o) = ψ_m(a o) ; φ'_a(o)`.
pub fn check_cocone_morphism<T: Target>(
    d: &TruncatedDiagram,
    t: &T,
    c1: &CoconeData<T::Mor>,
    c2: &CoconeData<T::Mor>,
    m: &CoconeMorphism<T::Mor>,
) -> Result<CheckReport> {
    check_shape(d, c1)?;
    check_shape(d, c2)?;
    let mut ck = Checker::new(t);
    for n in 0..3 {
        let pres = &d.levels[n].pres;
        if m.components[n].len() != pres.objects().len() {
            return Err(Error::Validation(format!("cocone morphism does not cover level {n}")));
        }
        let (f1, f2, psi) = (&c1.functors[n], &c2.functors[n], &m.components[n]);
        for (o, p) in psi.iter().enumerate() {
            ck.boundary("ψ", || pres.objects()[o].clone(), p, f1.objects[o], f2.objects[o]);
        }
        for g in 0..pres.generators().len() {
            let gen = pres.generator(g as GenId);
            let (o, o2) = (gen.src as usize, gen.tgt as usize);
            let lhs = [&f1.generators[g], &psi[o2]];
            ck.paths("naturality of ψ", || gen.label.clone(), f1.objects[o], &lhs, &[&psi[o], &f2.generators[g]]);
        }
    }
    for (ai, a) in d.arrows().iter().enumerate() {
        let names = d.levels[a.from].pres.objects();
        for o in 0..names.len() {
            let ao = a.functor.objects[o] as usize;
            let lhs = [&c1.iso[ai][o], &m.components[a.from][o]];
            let rhs = [&m.components[a.to][ao], &c2.iso[ai][o]];
            let inst = || format!("{} at {}", a.name, names[o]);
            ck.paths("ψ commutes with φ", inst, c1.functors[a.to].objects[ao], &lhs, &rhs);
        }
    }
    Ok(ck.report())
}

fn contract(what: &str, r: &CheckReport) -> Error {
    match &r.counterexample {
        Some(c) => Error::Contract(format!("{what} fails {} at {}", c.axiom, c.instance)),
        None => Error::Contract(format!("{what} is undecided on {} instances", r.undecided)),
    }
}

/// `Un`: requires a passing shadow.
pub fn unstrictify<T: Target>(d: &TruncatedDiagram, t: &T, s: &ShadowData<T::Mor>) -> Result<CoconeData<T::Mor>> {
    let r = check_shadow(d, t, s)?;
    if !r.passed() {
        return Err(contract("the shadow", &r));
    }
    unstrictify_unchecked(d, t, s)
}

/// `Un` on arbitrary data with invertible twists; the output is a cocone exactly when the input is a shadow.
pub fn unstrictify_unchecked<T: Target>(d: &TruncatedDiagram, t: &T, s: &ShadowData<T::Mor>) -> Result<CoconeData<T::Mor>> {
    let Flat { c0, theta } = flatten(d, s)?;
    let via = |f: &LevelFunctor<T::Mor>, face: &crate::bihh::FunctorData| -> Result<LevelFunctor<T::Mor>> {
        let objects = face.objects.iter().map(|&o| f.objects[o as usize]).collect();
        let generators = face.generators.iter().map(|w| apply(t, f, w)).collect::<Result<_>>()?;
        Ok(LevelFunctor { objects, generators })
    };
    let c1 = via(&c0, &d.d1[0])?;
    let c2 = via(&c1, &d.d2[0])?;
    let functors = [c0, c1, c2];
    let ids = |n: usize| -> Vec<T::Mor> { functors[n].objects.iter().map(|&o| t.identity(o)).collect() };
    let inv = |m: &T::Mor| t.inverse(m).ok_or_else(|| Error::Validation(format!("θ component {} is not invertible", t.describe(m))));
    let d1 = theta.iter().map(inv).collect::<Result<Vec<_>>>()?;
    let d22 = d.d2[0].objects.iter().map(|&o| inv(&theta[o as usize])).collect::<Result<Vec<_>>>()?;
    let iso = vec![ids(1), d1, ids(2), ids(2), d22, ids(0), ids(1), ids(1)];
    Ok(CoconeData { functors, iso })
}

/// `St`: requires a passing cocone.
pub fn strictify<T: Target>(d: &TruncatedDiagram, t: &T, c: &CoconeData<T::Mor>) -> Result<ShadowData<T::Mor>> {
    let r = check_cocone(d, t, c)?;
    if !r.passed() {
        return Err(contract("the cocone", &r));
    }
    strictify_unchecked(d, t, c)
}

/// `⟨−⟩ = C_0` and `θ = φ_{d0} ; φ_{d1}^-1`.
pub fn strictify_unchecked<T: Target>(d: &TruncatedDiagram, t: &T, c: &CoconeData<T::Mor>) -> Result<ShadowData<T::Mor>> {
    check_shape(d, c)?;
    let (l0, l1) = (&d.levels[0], &d.levels[1]);
    let c0 = &c.functors[0];
    if c0.objects.len() != l0.tuples.len() || c0.generators.len() != l0.gens.len() {
        return Err(Error::Validation("C0 does not cover level 0".into()));
    }
    let objects = l0.tuples.iter().zip(&c0.objects).map(|(tp, &o)| (tp[0].clone(), o)).collect();
    let layers = l0.gens.iter().zip(&c0.generators).map(|((_, l), m)| (l.clone(), m.clone())).collect();
    let mut theta = HashMap::new();
    for (o, tp) in l1.tuples.iter().enumerate() {
        let fail = || Error::Validation(format!("φ components at {} do not yield a twist", l1.pres.objects()[o]));
        let back = t.inverse(&c.iso[1][o]).ok_or_else(fail)?;
        let th = t.compose(&c.iso[0][o], &back).ok_or_else(fail)?;
        theta.insert((tp[0].clone(), tp[1].clone()), th);
    }
    Ok(ShadowData { objects, layers, theta })
}

/// The cocone morphism `C -> Un(St(C))`: `ψ_0 = id`, `ψ_1 = φ_{d0}^-1`, `ψ_2 = φ_{d2,0}^-1 ; ψ_1 d_0`.
pub fn strictification_comparison<T: Target>(d: &TruncatedDiagram, t: &T, c: &CoconeData<T::Mor>) -> Result<CoconeMorphism<T::Mor>> {
    check_shape(d, c)?;
    let inv = |m: &T::Mor| t.inverse(m).ok_or_else(|| Error::Validation(format!("{} is not invertible", t.describe(m))));
    let psi0 = c.functors[0].objects.iter().map(|&o| t.identity(o)).collect();
    let psi1: Vec<T::Mor> = c.iso[0].iter().map(inv).collect::<Result<_>>()?;
    let mut psi2 = Vec::new();
    for (o, phi) in c.iso[2].iter().enumerate() {
        let first = inv(phi)?;
        let next = &psi1[d.d2[0].objects[o] as usize];
        psi2.push(t.compose(&first, next).ok_or_else(|| Error::Validation("comparison components do not compose".into()))?);
    }
    Ok(CoconeMorphism { components: [psi0, psi1, psi2] })
}

/// The cocone isomorphic to `c` along invertible components `ψ_n(o): C_n(o) -> C'_n(o)`.
pub fn transport<T: Target>(d: &TruncatedDiagram, t: &T, c: &CoconeData<T::Mor>, psi: &CoconeMorphism<T::Mor>) -> Result<CoconeData<T::Mor>> {
    check_shape(d, c)?;
    let fail = || Error::Validation("transport components are not invertible isomorphisms with matching boundaries".into());
    let conj = |a: &T::Mor, m: &T::Mor, b: &T::Mor| -> Result<T::Mor> {
        let ai = t.inverse(a).ok_or_else(fail)?;
        t.compose(&ai, m).and_then(|x| t.compose(&x, b)).ok_or_else(fail)
    };
    let mut functors = c.functors.clone();
    for n in 0..3 {
        let pres = &d.levels[n].pres;
        let psi = &psi.components[n];
        if psi.len() != pres.objects().len() {
            return Err(fail());
        }
        functors[n].objects = psi.iter().map(|m| t.tgt(m)).collect();
        for g in 0..pres.generators().len() {
            let gen = pres.generator(g as GenId);
            functors[n].generators[g] = conj(&psi[gen.src as usize], &c.functors[n].generators[g], &psi[gen.tgt as usize])?;
        }
    }
    let mut iso = c.iso.clone();
    for (ai, a) in d.arrows().iter().enumerate() {
        for o in 0..iso[ai].len() {
            let ao = a.functor.objects[o] as usize;
            iso[ai][o] = conj(&psi.components[a.to][ao], &c.iso[ai][o], &psi.components[a.from][o])?;
        }
    }
    Ok(CoconeData { functors, iso })
}

/// `St` on a cocone morphism: its level-0 components.
pub fn strictify_morphism<M: Clone>(d: &TruncatedDiagram, m: &CoconeMorphism<M>) -> HashMap<Word, M> {
    d.levels[0].tuples.iter().zip(&m.components[0]).map(|(tp, a)| (tp[0].clone(), a.clone())).collect()
}

/// `Un` on a shadow morphism: `ψ_n(o) = α_{d0^n o}`.
pub fn unstrictify_morphism<M: Clone>(d: &TruncatedDiagram, alpha: &HashMap<Word, M>) -> Result<CoconeMorphism<M>> {
    let at = |tp: &Vec<Word>| -> Result<M> {
        let w = crate::twocat::concat(&tp.iter().collect::<Vec<_>>());
        alpha.get(&w).cloned().ok_or_else(|| Error::Validation(format!("no component at {}", d.two.display_path(&w))))
    };
    let level = |n: usize| d.levels[n].tuples.iter().map(at).collect::<Result<Vec<_>>>();
    Ok(CoconeMorphism { components: [level(0)?, level(1)?, level(2)?] })
}

/// The shadow sending each endo-1-cell, layer and twist to itself in biHH(B).
pub fn tautological_shadow(bihh: &Bihh, d: &TruncatedDiagram) -> Result<ShadowData<Word>> {
    let p = bihh.presentation();
    let b = &d.two;
    let mut s = ShadowData { objects: HashMap::new(), layers: HashMap::new(), theta: HashMap::new() };
    for tp in &d.levels[0].tuples {
        let o = bihh.object(&tp[0]).ok_or_else(|| Error::Contract(format!("{} is not a biHH object", b.display_path(&tp[0]))))?;
        s.objects.insert(tp[0].clone(), o);
    }
    for (_, l) in &d.levels[0].gens {
        let g = bihh.layer(l).ok_or_else(|| Error::Contract(format!("{} is not a biHH generator", b.layer_label(l))))?;
        s.layers.insert(l.clone(), p.single(g));
    }
    for tp in &d.levels[1].tuples {
        s.theta.insert((tp[0].clone(), tp[1].clone()), bihh.twist_word(&tp[0], &tp[1])?);
    }
    Ok(s)
}

/// The cocone of colimit maps into biHH(B): `Un` of the tautological shadow.
pub fn universal_cocone(bihh: &Bihh, d: &TruncatedDiagram, t: &PresentedTarget<'_>) -> Result<CoconeData<Word>> {
    unstrictify_unchecked(d, t, &tautological_shadow(bihh, d)?)
}

/// Checks that `f` is a functor out of `pres`.
pub fn check_trace_functor<T: Target>(pres: &CatPresentation, t: &T, f: &LevelFunctor<T::Mor>) -> Result<CheckReport> {
    let mut ck = Checker::new(t);
    check_functor(&mut ck, "the functor", pres, f)?;
    Ok(ck.report())
}

/// The image of a word-valued cocone under a functor.
pub fn map_cocone<T: Target>(t: &T, f: &LevelFunctor<T::Mor>, c: &CoconeData<Word>) -> Result<CoconeData<T::Mor>> {
    let map = |w: &Word| apply(t, f, w);
    let functor = |l: &LevelFunctor<Word>| -> Result<LevelFunctor<T::Mor>> {
        let objects = l.objects.iter().map(|&o| f.objects.get(o as usize).copied().ok_or_else(|| Error::Validation("object outside the functor".into()))).collect::<Result<_>>()?;
        Ok(LevelFunctor { objects, generators: l.generators.iter().map(map).collect::<Result<_>>()? })
    };
    let [a, b, cc] = &c.functors;
    let functors = [functor(a)?, functor(b)?, functor(cc)?];
    let iso = c.iso.iter().map(|row| row.iter().map(map).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(CoconeData { functors, iso })
}

/// A functor out of biHH(B) composed with the universal cocone.
pub fn trace_to_cocone<T: Target>(
    bihh: &Bihh,
    d: &TruncatedDiagram,
    t: &T,
    f: &LevelFunctor<T::Mor>,
    budget: &SearchBudget,
) -> Result<CoconeData<T::Mor>> {
    let r = check_trace_functor(bihh.presentation(), t, f)?;
    if !r.passed() {
        return Err(contract("the functor", &r));
    }
    let pt = PresentedTarget::new(bihh.presentation(), budget);
    map_cocone(t, f, &universal_cocone(bihh, d, &pt)?)
}

/// A finite quotient of biHH(B) by `extra` relations, with the quotient functor.
pub fn finite_quotient(bihh: &Bihh, extra: &[(Word, Word)], max_elements: usize) -> Result<(FinitePresentation, LevelFunctor<usize>)> {
    let q = bihh.presentation().quotient(extra)?.to_finite(max_elements)?;
    let p = bihh.presentation();
    let objects = (0..p.objects().len() as ObjId).collect();
    let generators = p.generators().iter().enumerate().map(|(g, gen)| q.generator_image(g as GenId, gen.src)).collect();
    Ok((q, LevelFunctor { objects, generators }))
}

/// [`finite_quotient`] by `a^power = id` for every automorphism generator the skeleton finds.
pub fn periodic_quotient(
    bihh: &Bihh,
    power: usize,
    budget: &SearchBudget,
    max_elements: usize,
) -> Result<(FinitePresentation, LevelFunctor<usize>)> {
    let sk = bihh.presentation().skeleton(budget)?;
    let extra: Vec<(Word, Word)> = sk
        .classes
        .iter()
        .flat_map(|c| c.automorphisms.iter().map(|a| (a.word.pow(power), Word::empty(a.word.src))))
        .collect();
    finite_quotient(bihh, &extra, max_elements)
}

/// `⟨−⟩` on level 0 and `θ` indexed by level-1 objects.
pub fn twist_components<M: Clone>(d: &TruncatedDiagram, s: &ShadowData<M>) -> Result<(LevelFunctor<M>, Vec<M>)> {
    let Flat { c0, theta } = flatten(d, s)?;
    Ok((c0, theta))
}

/// On-disk shadow valued in a finite category, keyed by printed 1-cells, layers and level-1 objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowFile {
    pub objects: BTreeMap<String, ObjId>,
    pub layers: BTreeMap<String, usize>,
    pub theta: BTreeMap<String, usize>,
}

/// On-disk cocone: per level, object and generator images keyed by label; components per arrow and object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoconeFile {
    pub levels: Vec<LevelFile>,
    /// Arrow name `level:name`, then object label to component.
    pub iso: Vec<(String, BTreeMap<String, usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFile {
    pub objects: BTreeMap<String, ObjId>,
    pub generators: BTreeMap<String, usize>,
}

fn lookup<V: Copy>(m: &BTreeMap<String, V>, key: &str, what: &str) -> Result<V> {
    m.get(key).copied().ok_or_else(|| Error::Validation(format!("no value for {what} {key}")))
}

impl ShadowFile {
    pub fn of(d: &TruncatedDiagram, s: &ShadowData<usize>) -> ShadowFile {
        let b = &d.two;
        ShadowFile {
            objects: s.objects.iter().map(|(w, &o)| (b.display_path(w), o)).collect(),
            layers: s.layers.iter().map(|(l, &m)| (b.layer_label(l), m)).collect(),
            theta: d.levels[1]
                .tuples
                .iter()
                .enumerate()
                .filter_map(|(o, tp)| s.theta.get(&(tp[0].clone(), tp[1].clone())).map(|&m| (d.levels[1].pres.objects()[o].clone(), m)))
                .collect(),
        }
    }

    pub fn resolve(&self, d: &TruncatedDiagram) -> Result<ShadowData<usize>> {
        let b = &d.two;
        let known: Vec<String> = d.levels[0].tuples.iter().map(|tp| b.display_path(&tp[0])).collect();
        for k in self.objects.keys() {
            if !known.contains(k) {
                return Err(Error::Validation(format!("{k} is not an endo-1-cell within the bound")));
            }
        }
        let mut s = ShadowData { objects: HashMap::new(), layers: HashMap::new(), theta: HashMap::new() };
        for (tp, name) in d.levels[0].tuples.iter().zip(&known) {
            s.objects.insert(tp[0].clone(), lookup(&self.objects, name, "⟨−⟩ at")?);
        }
        for (_, l) in &d.levels[0].gens {
            s.layers.insert(l.clone(), lookup(&self.layers, &b.layer_label(l), "layer")?);
        }
        for (o, tp) in d.levels[1].tuples.iter().enumerate() {
            let th = lookup(&self.theta, &d.levels[1].pres.objects()[o], "θ at")?;
            s.theta.insert((tp[0].clone(), tp[1].clone()), th);
        }
        Ok(s)
    }
}

impl CoconeFile {
    pub fn of(d: &TruncatedDiagram, c: &CoconeData<usize>) -> CoconeFile {
        let levels = (0..3)
            .map(|n| {
                let p = &d.levels[n].pres;
                let f = &c.functors[n];
                LevelFile {
                    objects: p.objects().iter().cloned().zip(f.objects.iter().copied()).collect(),
                    generators: p.generators().iter().map(|g| g.label.clone()).zip(f.generators.iter().copied()).collect(),
                }
            })
            .collect();
        let iso = d
            .arrows()
            .iter()
            .zip(&c.iso)
            .map(|(a, row)| (format!("{}:{}", a.from, a.name), d.levels[a.from].pres.objects().iter().cloned().zip(row.iter().copied()).collect()))
            .collect();
        CoconeFile { levels, iso }
    }

    pub fn resolve(&self, d: &TruncatedDiagram) -> Result<CoconeData<usize>> {
        if self.levels.len() != 3 {
            return Err(Error::Validation("a cocone has three levels".into()));
        }
        let level = |n: usize| -> Result<LevelFunctor<usize>> {
            let p = &d.levels[n].pres;
            let f = &self.levels[n];
            Ok(LevelFunctor {
                objects: p.objects().iter().map(|o| lookup(&f.objects, o, "object")).collect::<Result<_>>()?,
                generators: p.generators().iter().map(|g| lookup(&f.generators, &g.label, "generator")).collect::<Result<_>>()?,
            })
        };
        let arrows = d.arrows();
        if self.iso.len() != arrows.len() {
            return Err(Error::Validation(format!("expected {} component families", arrows.len())));
        }
        let mut iso = Vec::new();
        for (a, (name, row)) in arrows.iter().zip(&self.iso) {
            if name != &format!("{}:{}", a.from, a.name) {
                return Err(Error::Validation(format!("component family {name} is out of order")));
            }
            iso.push(d.levels[a.from].pres.objects().iter().map(|o| lookup(row, o, "component at")).collect::<Result<Vec<_>>>()?);
        }
        Ok(CoconeData { functors: [level(0)?, level(1)?, level(2)?], iso })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bihh::simplicial_diagram;
    use crate::twocat::{catalog, Bound, CatalogName};

    struct Setting {
        d: TruncatedDiagram,
        bihh: Bihh,
        q: FinitePresentation,
        quot: LevelFunctor<usize>,
    }

    /// biHH(B) within `len`, with every skeleton automorphism generator of order dividing `power`.
    fn setting(name: CatalogName, len: usize, power: usize) -> Setting {
        let b = SearchBudget::default();
        let two = catalog(&name).unwrap();
        let bound = Bound::length(0, len);
        let bihh = Bihh::new(&two, bound, &b).unwrap();
        let d = simplicial_diagram(&two, bound, &b).unwrap();
        let (q, quot) = periodic_quotient(&bihh, power, &b, 5000).unwrap();
        Setting { d, bihh, q, quot }
    }

    impl Setting {
        fn cocone(&self) -> CoconeData<usize> {
            trace_to_cocone(&self.bihh, &self.d, &self.q.category, &self.quot, &SearchBudget::default()).unwrap()
        }
    }

    fn corpus() -> Vec<Setting> {
        vec![
            setting(CatalogName::Terminal, 2, 2),
            setting(CatalogName::SigmaAb(vec![2]), 2, 2),
            setting(CatalogName::BN, 3, 3),
            setting(CatalogName::Adj, 2, 2),
        ]
    }

    #[test]
    fn universal_cocone_passes_in_bihh_of_bn() {
        let b = SearchBudget::default();
        let s = setting(CatalogName::BN, 3, 3);
        let t = PresentedTarget::new(s.bihh.presentation(), &b);
        let c = universal_cocone(&s.bihh, &s.d, &t).unwrap();
        assert!(check_cocone(&s.d, &t, &c).unwrap().passed());
        let x = |k: usize| s.d.two.path(0, &vec!["x"; k]).unwrap();
        let th = strictify(&s.d, &t, &c).unwrap().theta[&(x(1), x(1))].clone();
        assert_eq!(th, s.bihh.twist_word(&x(1), &x(1)).unwrap());
    }

    #[test]
    fn quotient_cocones_pass_and_round_trip() {
        for s in corpus() {
            let t = &s.q.category;
            let c = s.cocone();
            assert!(check_cocone(&s.d, t, &c).unwrap().passed());
            let sh = strictify(&s.d, t, &c).unwrap();
            assert!(check_shadow(&s.d, t, &sh).unwrap().passed());
            let un = unstrictify(&s.d, t, &sh).unwrap();
            // The universal cocone is itself strict.
            assert_eq!(un, c);
            assert_eq!(strictify(&s.d, t, &un).unwrap(), sh);
        }
    }

    #[test]
    fn terminal_gives_the_trivial_shadow() {
        let s = setting(CatalogName::Terminal, 2, 2);
        let sh = strictify(&s.d, &s.q.category, &s.cocone()).unwrap();
        assert_eq!(s.q.category.morphism_count(), 1);
        assert!(sh.theta.values().all(|&m| m == 0));
    }

    #[test]
    fn doubled_twist_breaks_the_cocycle_in_bn() {
        let s = setting(CatalogName::BN, 3, 3);
        let t = &s.q.category;
        let mut sh = strictify(&s.d, t, &s.cocone()).unwrap();
        let x = s.d.two.path(0, &["x"]).unwrap();
        let th = sh.theta[&(x.clone(), x.clone())];
        sh.theta.insert((x.clone(), x), t.compose(th, th).unwrap());
        let r = check_shadow(&s.d, t, &sh).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.counterexample.unwrap().axiom.starts_with("cocycle"));
        assert!(matches!(unstrictify(&s.d, t, &sh), Err(Error::Contract(_))));
        assert_eq!(check_cocone(&s.d, t, &unstrictify_unchecked(&s.d, t, &sh).unwrap()).unwrap().status, Status::Fail);
    }

    #[test]
    fn identity_components_fail_when_faces_differ() {
        let s = setting(CatalogName::Adj, 2, 2);
        let t = &s.q.category;
        let mut c = s.cocone();
        for (a, row) in c.iso.iter_mut().enumerate() {
            let from = d_from(&s.d, a);
            for (o, m) in row.iter_mut().enumerate() {
                *m = t.identity(c.functors[from].objects[o]);
            }
        }
        assert_eq!(check_cocone(&s.d, t, &c).unwrap().status, Status::Fail);
    }

    fn d_from(d: &TruncatedDiagram, a: usize) -> usize {
        d.arrows()[a].from
    }

    #[test]
    fn constant_functor_gives_a_cocone() {
        let s = setting(CatalogName::Adj, 2, 2);
        let t = FiniteCategory::terminal();
        let p = s.bihh.presentation();
        let f = LevelFunctor { objects: vec![0; p.objects().len()], generators: vec![0; p.generators().len()] };
        let c = trace_to_cocone(&s.bihh, &s.d, &t, &f, &SearchBudget::default()).unwrap();
        assert!(check_cocone(&s.d, &t, &c).unwrap().passed());
    }

    #[test]
    fn functor_violating_a_relation_is_rejected() {
        let s = setting(CatalogName::BN, 3, 3);
        let t = &s.q.category;
        let mut f = s.quot.clone();
        let x = s.d.two.path(0, &["x"]).unwrap();
        let g = s.bihh.twist(&x, &Word::empty(0)).unwrap();
        // (x, ∅) must go to an identity.
        let tw = s.bihh.twist(&Word::empty(0), &x).unwrap();
        f.generators[g as usize] = f.generators[tw as usize];
        let r = trace_to_cocone(&s.bihh, &s.d, t, &f, &SearchBudget::default());
        assert!(matches!(r, Err(Error::Contract(_))), "{r:?}");
    }

    #[test]
    fn comparison_with_a_transported_cocone() {
        let s = setting(CatalogName::BN, 3, 3);
        let t = &s.q.category;
        let c = s.cocone();
        let aut = |o: ObjId| t.hom(o, o).into_iter().find(|&m| !t.is_identity(m)).unwrap_or(t.identity(o));
        let psi = CoconeMorphism {
            components: [0, 1, 2].map(|n| c.functors[n].objects.iter().map(|&o| if n == 0 { t.identity(o) } else { aut(o) }).collect()),
        };
        let c2 = transport(&s.d, t, &c, &psi).unwrap();
        assert!(check_cocone(&s.d, t, &c2).unwrap().passed());
        assert!(check_cocone_morphism(&s.d, t, &c, &c2, &psi).unwrap().passed());
        assert_ne!(c2, c);
        let sh = strictify(&s.d, t, &c2).unwrap();
        let back = unstrictify(&s.d, t, &sh).unwrap();
        let cmp = strictification_comparison(&s.d, t, &c2).unwrap();
        assert!(check_cocone_morphism(&s.d, t, &c2, &back, &cmp).unwrap().passed());
    }

    #[test]
    fn shadow_morphisms() {
        let s = setting(CatalogName::Adj, 2, 2);
        let t = &s.q.category;
        let sh = strictify(&s.d, t, &s.cocone()).unwrap();
        let id: HashMap<Word, usize> = sh.objects.iter().map(|(w, &o)| (w.clone(), t.identity(o))).collect();
        assert!(check_shadow_morphism(&s.d, t, &sh, &sh, &id).unwrap().passed());
        let un = unstrictify_morphism(&s.d, &id).unwrap();
        assert!(check_cocone_morphism(&s.d, t, &s.cocone(), &s.cocone(), &un).unwrap().passed());
        assert_eq!(strictify_morphism(&s.d, &un), id);
        let fg = s.d.two.path(0, &["f", "g"]).unwrap();
        let o = sh.objects[&fg];
        let mut bad = id.clone();
        bad.insert(fg, t.hom(o, o).into_iter().find(|&m| !t.is_identity(m)).unwrap());
        assert_eq!(check_shadow_morphism(&s.d, t, &sh, &sh, &bad).unwrap().status, Status::Fail);
    }

    #[test]
    fn files_round_trip() {
        let s = setting(CatalogName::Adj, 2, 2);
        let t = &s.q.category;
        let c = s.cocone();
        let sh = strictify(&s.d, t, &c).unwrap();
        let f = ShadowFile::of(&s.d, &sh);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<ShadowFile>(&json).unwrap().resolve(&s.d).unwrap(), sh);
        let cf = CoconeFile::of(&s.d, &c);
        assert_eq!(cf.resolve(&s.d).unwrap(), c);
        let mut missing = f.clone();
        missing.theta.pop_first();
        assert!(matches!(missing.resolve(&s.d), Err(Error::Validation(_))));
    }
}
