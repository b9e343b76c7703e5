//! Computads, the cofibrant replacements of `(Δ≤2)^op` and its cone, and the
//! two equations that extend a strict truncated diagram by a cone point.
//!
//! Vertex `n` of a Q computad stands for `[n]`. An edge `d{k}_{n}: n -> n-1`
//! projects to the coface `[n-1] -> [n]` skipping `k`, an edge
//! `s{k}_{n}: n -> n+1` to the codegeneracy `[n+1] -> [n]` repeating `k`, and
//! `t0` to the unique map into the cone point. Every 2-arrow is invertible.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bihh::TruncatedDiagram;
use crate::error::{Error, Result};
use crate::present::{CatPresentation, Edge, EqualityVerdict, FiniteCategory, Graph, ObjId, SearchBudget, Word};
use crate::shadows::{apply, check_functor, CheckReport, Checker, LevelFunctor, PresentedTarget, Status, Target};
use crate::twocat::{hom_category_bounded, Bound, PastingTerm, TwoCatPresentation};

/// A 2-arrow between parallel paths of the underlying graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoArrow {
    pub label: String,
    pub src: Word,
    pub tgt: Word,
}

/// A graph with 2-arrows between parallel edge paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Computad {
    pub graph: Graph,
    pub two_arrows: Vec<TwoArrow>,
}

impl Computad {
    pub fn new(graph: Graph, two_arrows: Vec<TwoArrow>) -> Result<Self> {
        graph.validate()?;
        let c = Computad { graph, two_arrows };
        for a in &c.two_arrows {
            c.check_path(&a.src)?;
            c.check_path(&a.tgt)?;
            if a.src.src != a.tgt.src || a.src.tgt != a.tgt.tgt {
                return Err(Error::Malformed(format!("2-arrow {} has non-parallel boundaries", a.label)));
            }
        }
        Ok(c)
    }

    fn check_path(&self, w: &Word) -> Result<()> {
        let mut at = w.src;
        for &e in &w.letters {
            let edge = self.graph.edges.get(e as usize).ok_or_else(|| Error::Malformed(format!("undeclared edge {e}")))?;
            if edge.src != at {
                return Err(Error::Malformed(format!("edge {} does not compose", edge.label)));
            }
            at = edge.tgt;
        }
        if at != w.tgt || w.src as usize >= self.graph.vertices.len() {
            return Err(Error::Malformed("path endpoints do not match".into()));
        }
        Ok(())
    }

    pub fn vertex(&self, label: &str) -> Result<ObjId> {
        self.graph.vertices.iter().position(|v| v == label).map(|i| i as ObjId).ok_or_else(|| Error::Lookup(format!("vertex {label}")))
    }

    /// The path from `at` through the named edges.
    pub fn path(&self, at: &str, labels: &[&str]) -> Result<Word> {
        let src = self.vertex(at)?;
        let mut w = Word::empty(src);
        for l in labels {
            let e = self.graph.edges.iter().position(|e| e.label == *l).ok_or_else(|| Error::Lookup(format!("edge {l}")))?;
            let edge = &self.graph.edges[e];
            if edge.src != w.tgt {
                return Err(Error::Malformed(format!("edge {l} does not compose")));
            }
            w.letters.push(e as u32);
            w.tgt = edge.tgt;
        }
        Ok(w)
    }

    pub fn display_path(&self, w: &Word) -> String {
        let labels: Vec<&str> = w.letters.iter().map(|&e| self.graph.edges[e as usize].label.as_str()).collect();
        format!("[{}]", labels.join(","))
    }
}

/// Edge labels of `Q((Δ≤2)^op)` with the index of the matching arrow of [`TruncatedDiagram::arrows`].
pub const Q_EDGES: [(&str, usize, usize, usize); 8] = [
    ("d0_1", 1, 0, 0),
    ("d1_1", 1, 0, 1),
    ("d0_2", 2, 1, 2),
    ("d1_2", 2, 1, 3),
    ("d2_2", 2, 1, 4),
    ("s0_0", 0, 1, 5),
    ("s0_1", 1, 2, 6),
    ("s1_1", 1, 2, 7),
];

const Q_ARROWS: [(&str, &str, &[&str], &[&str]); 10] = [
    ("α0", "2", &["d0_2", "d0_1"], &["d1_2", "d0_1"]),
    ("α1", "2", &["d2_2", "d0_1"], &["d0_2", "d1_1"]),
    ("α2", "2", &["d1_2", "d1_1"], &["d2_2", "d1_1"]),
    ("β0", "0", &["s0_0", "d1_1"], &[]),
    ("β1", "0", &["s0_0", "d0_1"], &[]),
    ("γ0", "1", &["s0_1", "d0_2"], &["s1_1", "d1_2"]),
    ("γ1", "1", &["s1_1", "d1_2"], &[]),
    ("γ2", "1", &["s0_1", "d1_2"], &[]),
    ("γ3", "1", &["s1_1", "d2_2"], &["s0_1", "d1_2"]),
    ("δ0", "0", &["s0_0", "s0_1"], &["s0_0", "s1_1"]),
];

fn build(cone: bool) -> Computad {
    let mut vertices: Vec<String> = ["0", "1", "2"].map(String::from).to_vec();
    let mut edges: Vec<Edge> = Q_EDGES.iter().map(|&(l, s, t, _)| Edge { label: l.into(), src: s as ObjId, tgt: t as ObjId }).collect();
    if cone {
        vertices.push("f".into());
        edges.push(Edge { label: "t0".into(), src: 0, tgt: 3 });
    }
    let mut c = Computad { graph: Graph { vertices, edges }, two_arrows: Vec::new() };
    let mut arrows: Vec<(&str, &str, &[&str], &[&str])> = Q_ARROWS.to_vec();
    if cone {
        arrows.push(("θ", "1", &["d0_1", "t0"], &["d1_1", "t0"]));
    }
    let two_arrows = arrows
        .iter()
        .map(|&(l, at, s, t)| TwoArrow { label: l.into(), src: c.path(at, s).unwrap(), tgt: c.path(at, t).unwrap() })
        .collect();
    c.two_arrows = two_arrows;
    Computad::new(c.graph, c.two_arrows).expect("the Q computads are well formed")
}

/// `Q((Δ≤2)^op)`: 3 vertices, 8 edges, 10 2-arrows.
pub fn q_delta2() -> Computad {
    build(false)
}

/// `Q((Δ≤2)^op)` with a cone point `f`, the edge `t0: 0 -> f` and `θ: [d0_1,t0] => [d1_1,t0]`.
pub fn q_delta2_cone() -> Computad {
    build(true)
}

/// The free strict 2-category: 1-cells are edge paths, 2-cells are pastings of invertible 2-arrows.
pub fn free_two_category(c: &Computad) -> Result<TwoCatPresentation> {
    let mut b = TwoCatPresentation::new("free");
    for v in &c.graph.vertices {
        b.add_zero_cell(v);
    }
    for e in &c.graph.edges {
        b.add_gen1(&e.label, e.src, e.tgt)?;
    }
    for a in &c.two_arrows {
        b.add_gen2(&a.label, a.src.clone(), a.tgt.clone(), true)?;
    }
    Ok(b)
}

/// The two equations a cone extension satisfies, as 2-cell relations of the cone's free 2-category.
pub fn extension_relations(b: &TwoCatPresentation) -> Result<[(PastingTerm, PastingTerm); 2]> {
    let p = |at: u32, l: &[&str]| b.path(at, l);
    let unit = (
        b.term(&p(0, &["s0_0", "d0_1", "t0"])?, &[(&["s0_0"], "θ", false, &[])])?,
        b.term(&p(0, &["s0_0", "d0_1", "t0"])?, &[(&[], "β1", false, &["t0"]), (&[], "β0", true, &["t0"])])?,
    );
    let src = p(2, &["d0_2", "d0_1", "t0"])?;
    let face = (
        b.term(&src, &[(&["d0_2"], "θ", false, &[]), (&[], "α1", true, &["t0"])])?,
        b.term(
            &src,
            &[
                (&[], "α0", false, &["t0"]),
                (&["d1_2"], "θ", false, &[]),
                (&[], "α2", false, &["t0"]),
                (&["d2_2"], "θ", true, &[]),
            ],
        )?,
    );
    Ok([unit, face])
}

/// The free 2-category on [`q_delta2_cone`] modulo [`extension_relations`].
pub fn q_delta2_cone_quotient() -> Result<TwoCatPresentation> {
    let mut b = free_two_category(&q_delta2_cone())?;
    for (l, r) in extension_relations(&b)? {
        b.add_rel2(l, r)?;
    }
    Ok(b)
}

/// The image of a path under the projection to `(Δ≤2)^op`, or to its cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Image {
    /// A monotone map `[tgt] -> [src]`, listed by value.
    Delta(Vec<usize>),
    /// The unique map into the cone point.
    Apex,
}

impl fmt::Display for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Image::Delta(m) => write!(f, "{m:?}"),
            Image::Apex => write!(f, "apex"),
        }
    }
}

fn edge_map(label: &str) -> Result<Option<(usize, Vec<usize>)>> {
    let bad = || Error::Malformed(format!("edge {label} is not a face, degeneracy or cone leg"));
    if label == "t0" {
        return Ok(None);
    }
    let (op, rest) = label.split_at(1);
    let (k, n) = rest.split_once('_').ok_or_else(bad)?;
    let (k, n): (usize, usize) = (k.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?);
    match op {
        // `[n-1] -> [n]` skipping k.
        "d" if n >= 1 && k <= n => Ok(Some((n - 1, (0..n).map(|x| if x < k { x } else { x + 1 }).collect()))),
        // `[n+1] -> [n]` repeating k.
        "s" if k <= n => Ok(Some((n + 1, (0..n + 2).map(|x| if x <= k { x } else { x - 1 }).collect()))),
        _ => Err(bad()),
    }
}

/// The projection of a path of a Q computad.
pub fn projection(c: &Computad, w: &Word) -> Result<Image> {
    c.check_path(w)?;
    let n: usize = c.graph.vertices[w.src as usize].parse().map_err(|_| Error::Malformed("path starts at the cone point".into()))?;
    let mut m: Vec<usize> = (0..=n).collect();
    for &e in &w.letters {
        match edge_map(&c.graph.edges[e as usize].label)? {
            None => return Ok(Image::Apex),
            Some((_, a)) => m = a.iter().map(|&x| m[x]).collect(),
        }
    }
    Ok(Image::Delta(m))
}

/// Monotone maps `[j] -> [i]`, i.e. the projection's candidate images in `hom(i, j)`.
pub fn monotone_maps(i: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..=j {
        out = out
            .into_iter()
            .flat_map(|m: Vec<usize>| {
                let lo = m.last().copied().unwrap_or(0);
                (lo..=i).map(move |v| {
                    let mut m = m.clone();
                    m.push(v);
                    m
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contractibility {
    Contractible,
    NotContractible(String),
    Unknown(String),
}

impl Contractibility {
    pub fn passed(&self) -> bool {
        *self == Contractibility::Contractible
    }
}

/// Exactly one morphism between every ordered pair of objects.
pub fn is_contractible_finite(c: &FiniteCategory) -> Contractibility {
    let n = c.objects().len() as ObjId;
    for a in 0..n {
        for b in 0..n {
            let k = c.hom(a, b).len();
            if k != 1 {
                let (x, y) = (&c.objects()[a as usize], &c.objects()[b as usize]);
                return Contractibility::NotContractible(format!("{k} morphisms from {x} to {y}"));
            }
        }
    }
    Contractibility::Contractible
}

/// Whether the full subcategory on `objects` is a contractible groupoid.
///
/// Every generator between two of the `objects` must agree with the
/// breadth-first tree path between its endpoints; generators leaving the set
/// are reported as a failure.
pub fn is_contractible_groupoid(p: &CatPresentation, objects: &[ObjId], b: &SearchBudget) -> Result<Contractibility> {
    let Some(&root) = objects.first() else {
        return Ok(Contractibility::Contractible);
    };
    let inside: BTreeMap<ObjId, ()> = objects.iter().map(|&o| (o, ())).collect();
    let mut out: BTreeMap<ObjId, Vec<u32>> = BTreeMap::new();
    for (g, gen) in p.generators().iter().enumerate() {
        if inside.contains_key(&gen.src) != inside.contains_key(&gen.tgt) {
            return Ok(Contractibility::NotContractible(format!("generator {} leaves the subcategory", gen.label)));
        }
        if inside.contains_key(&gen.src) {
            out.entry(gen.src).or_default().push(g as u32);
        }
    }
    let mut tree: BTreeMap<ObjId, Word> = BTreeMap::new();
    tree.insert(root, Word::empty(root));
    let mut queue = VecDeque::from([root]);
    while let Some(o) = queue.pop_front() {
        for &g in out.get(&o).map(Vec::as_slice).unwrap_or(&[]) {
            let t = p.generator(g).tgt;
            if !tree.contains_key(&t) {
                let w = tree[&o].then(&p.single(g));
                tree.insert(t, w);
                queue.push_back(t);
            }
        }
    }
    if let Some(&o) = objects.iter().find(|o| !tree.contains_key(o)) {
        let (x, y) = (&p.objects()[root as usize], &p.objects()[o as usize]);
        return Ok(Contractibility::NotContractible(format!("no morphism from {x} to {y}")));
    }
    let mut unknown = 0;
    for gs in out.values() {
        for &g in gs {
            let gen = p.generator(g);
            let lhs = tree[&gen.src].then(&p.single(g));
            let rhs = &tree[&gen.tgt];
            if lhs == *rhs {
                continue;
            }
            match p.equal(&lhs, rhs, b)? {
                EqualityVerdict::Equal(_) => {}
                EqualityVerdict::Distinct(_) => {
                    let msg = format!("{} and {} are distinct", p.display_word(&lhs), p.display_word(rhs));
                    return Ok(Contractibility::NotContractible(msg));
                }
                EqualityVerdict::Unknown(_) => unknown += 1,
            }
        }
    }
    Ok(match unknown {
        0 => Contractibility::Contractible,
        k => Contractibility::Unknown(format!("{k} generators not matched to their tree paths")),
    })
}

/// One fiber of the projection on `hom(x, y)`.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub x: ObjId,
    pub y: ObjId,
    pub image: Image,
    pub paths: Vec<Word>,
    pub verdict: Contractibility,
}

/// The fibers of `hom(x, y)` in `b` over the projection, for paths of length at most `max_len`.
pub fn hom_fibers(c: &Computad, b: &TwoCatPresentation, x: ObjId, y: ObjId, max_len: usize, budget: &SearchBudget) -> Result<Vec<Fiber>> {
    let h = hom_category_bounded(b, x, y, Bound::length(x, max_len), budget)?;
    let mut groups: BTreeMap<Image, Vec<ObjId>> = BTreeMap::new();
    for (o, w) in h.objects().iter().enumerate() {
        groups.entry(projection(c, w)?).or_default().push(o as ObjId);
    }
    let mut out = Vec::new();
    for (image, objs) in groups {
        let verdict = is_contractible_groupoid(h.presentation(), &objs, budget)?;
        let paths = objs.iter().map(|&o| h.objects()[o as usize].clone()).collect();
        out.push(Fiber { x, y, image, paths, verdict });
    }
    Ok(out)
}

/// Components of the 2-arrows of `Q((Δ≤2)^op)` in a truncated diagram, in the order of [`q_delta2`].
///
/// `components[k][o]` is a morphism of the level of the arrow's target vertex,
/// at the object `o` of the level of its source vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionData {
    pub components: Vec<Vec<Word>>,
}

/// The functor of a path, as object and generator maps between levels.
fn along(d: &TruncatedDiagram, path: &Word) -> (Vec<ObjId>, Vec<Word>) {
    let arrows = d.arrows();
    let pres = &d.levels[path.src as usize].pres;
    let mut objects: Vec<ObjId> = (0..pres.objects().len() as ObjId).collect();
    let mut gens: Vec<Word> = (0..pres.generators().len() as u32).map(|g| pres.single(g)).collect();
    let mut at = path.src as usize;
    for &e in &path.letters {
        let a = &arrows[Q_EDGES[e as usize].3];
        let target = &d.levels[a.to].pres;
        objects = objects.iter().map(|&o| a.functor.objects[o as usize]).collect();
        gens = gens.iter().map(|w| a.functor.apply(target, w)).collect();
        at = a.to;
    }
    debug_assert_eq!(at, path.tgt as usize);
    (objects, gens)
}

impl ExtensionData {
    /// Identity components; valid exactly when the diagram satisfies the simplicial identities strictly.
    pub fn strict(d: &TruncatedDiagram) -> Self {
        let q = q_delta2();
        let components = q
            .two_arrows
            .iter()
            .map(|a| along(d, &a.src).0.into_iter().map(Word::empty).collect())
            .collect();
        ExtensionData { components }
    }
}

fn merge(reports: impl IntoIterator<Item = CheckReport>) -> CheckReport {
    let mut out = CheckReport { status: Status::Pass, counterexample: None, instances: 0, undecided: 0 };
    for r in reports {
        out.instances += r.instances;
        out.undecided += r.undecided;
        if out.status != Status::Fail && r.status != Status::Pass {
            out.status = r.status;
            out.counterexample = r.counterexample;
        }
    }
    out
}

/// Boundaries, invertibility and naturality of each 2-arrow component.
pub fn check_extension_data(d: &TruncatedDiagram, data: &ExtensionData, budget: &SearchBudget) -> Result<CheckReport> {
    let q = q_delta2();
    if data.components.len() != q.two_arrows.len() {
        return Err(Error::Validation(format!("expected {} families of 2-arrow components", q.two_arrows.len())));
    }
    let mut reports = Vec::new();
    for (a, comps) in q.two_arrows.iter().zip(&data.components) {
        let (from, to) = (&d.levels[a.src.src as usize], &d.levels[a.src.tgt as usize]);
        if comps.len() != from.pres.objects().len() {
            return Err(Error::Validation(format!("components of {} do not cover level {}", a.label, a.src.src)));
        }
        let (so, sg) = along(d, &a.src);
        let (to_, tg) = along(d, &a.tgt);
        let t = PresentedTarget::new(&to.pres, budget);
        let mut ck = Checker::new(&t);
        for (o, m) in comps.iter().enumerate() {
            let inst = || format!("{} at {}", a.label, from.pres.objects()[o]);
            ck.boundary(&a.label, inst, m, so[o], to_[o]);
            ck.invertible(&a.label, inst, m);
        }
        for (g, gen) in from.pres.generators().iter().enumerate() {
            let (o, o2) = (gen.src as usize, gen.tgt as usize);
            let inst = || format!("{} at {}", a.label, gen.label);
            ck.paths(&format!("naturality of {}", a.label), inst, so[o], &[&sg[g], &comps[o2]], &[&comps[o], &tg[g]]);
        }
        reports.push(ck.report());
    }
    Ok(merge(reports))
}

/// Whether `t0: level 0 -> t` and `θ: t0 d0 => t0 d1` extend the diagram to the cone point.
///
/// Checks the component data, functoriality of `t0`, naturality and
/// invertibility of `θ`, then at level 0 `θ_{s0 o} = t0(β1_o) ; t0(β0_o)^-1`
/// and at level 2 `θ_{d0 o} ; t0(α1_o)^-1 = t0(α0_o) ; θ_{d1 o} ; t0(α2_o) ; θ_{d2 o}^-1`.
pub fn check_extension<T: Target>(
    d: &TruncatedDiagram,
    data: &ExtensionData,
    t: &T,
    t0: &LevelFunctor<T::Mor>,
    theta: &[T::Mor],
    budget: &SearchBudget,
) -> Result<CheckReport> {
    let fdata = check_extension_data(d, data, budget)?;
    let (l0, l1, l2) = (&d.levels[0], &d.levels[1], &d.levels[2]);
    if theta.len() != l1.tuples.len() {
        return Err(Error::Validation("θ does not cover level 1".into()));
    }
    let mut ck = Checker::new(t);
    check_functor(&mut ck, "t0", &l0.pres, t0)?;
    let name = |o: usize| l1.pres.objects()[o].clone();
    for (o, th) in theta.iter().enumerate() {
        let (from, to) = (t0.objects[d.d1[0].objects[o] as usize], t0.objects[d.d1[1].objects[o] as usize]);
        ck.boundary("θ", || name(o), th, from, to);
        ck.invertible("θ", || name(o), th);
    }
    for (g, gen) in l1.pres.generators().iter().enumerate() {
        let top = apply(t, t0, &d.d1[0].generators[g])?;
        let bottom = apply(t, t0, &d.d1[1].generators[g])?;
        let (o, o2) = (gen.src as usize, gen.tgt as usize);
        let src = t0.objects[d.d1[0].objects[o] as usize];
        ck.paths("naturality of θ", || gen.label.clone(), src, &[&top, &theta[o2]], &[&theta[o], &bottom]);
    }
    if ck.failed() {
        return Ok(merge([fdata, ck.report()]));
    }
    let img = |k: usize, o: usize| apply(t, t0, &data.components[k][o]);
    let inv = |m: &T::Mor| t.inverse(m).ok_or_else(|| Error::Validation(format!("{} is not invertible", t.describe(m))));
    let [a0, a1, a2, b0, b1] = [0, 1, 2, 3, 4];
    for o in 0..l0.tuples.len() {
        let x = d.s0.objects[o] as usize;
        let (p, q) = (img(b1, o)?, inv(&img(b0, o)?)?);
        let src = t0.objects[d.d1[0].objects[x] as usize];
        ck.paths("θ∗s0 = t0∗(β0^-1 ∘ β1)", || name(x), src, &[&theta[x]], &[&p, &q]);
    }
    for o in 0..l2.tuples.len() {
        let [x0, x1, x2] = [0, 1, 2].map(|i| d.d2[i].objects[o] as usize);
        let (u0, u1, u2) = (img(a0, o)?, inv(&img(a1, o)?)?, img(a2, o)?);
        let back = inv(&theta[x2])?;
        let src = t0.objects[d.d1[0].objects[x0] as usize];
        let inst = || l2.pres.objects()[o].clone();
        ck.paths("face equation", inst, src, &[&theta[x0], &u1], &[&u0, &theta[x1], &u2, &back]);
    }
    Ok(merge([fdata, ck.report()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bihh::{simplicial_diagram, Bihh};
    use crate::present::{free_category, FinitePresentation};
    use crate::twocat::one_cells;
    use crate::shadows::{
        check_cocone, check_shadow, periodic_quotient, strictify, trace_to_cocone, twist_components, unstrictify_unchecked,
        CoconeData, ShadowData,
    };
    use crate::twocat::{catalog, CatalogName};

    struct Setting {
        d: TruncatedDiagram,
        q: FinitePresentation,
        cocone: CoconeData<usize>,
    }

    fn setting(name: CatalogName, len: usize, power: usize) -> Setting {
        let b = SearchBudget::default();
        let two = catalog(&name).unwrap();
        let bound = Bound::length(0, len);
        let bihh = Bihh::new(&two, bound, &b).unwrap();
        let d = simplicial_diagram(&two, bound, &b).unwrap();
        let (q, quot) = periodic_quotient(&bihh, power, &b, 5000).unwrap();
        let cocone = trace_to_cocone(&bihh, &d, &q.category, &quot, &b).unwrap();
        Setting { d, q, cocone }
    }

    fn shadow(s: &Setting) -> ShadowData<usize> {
        strictify(&s.d, &s.q.category, &s.cocone).unwrap()
    }

    fn extension(s: &Setting, sh: &ShadowData<usize>) -> CheckReport {
        let (t0, theta) = twist_components(&s.d, sh).unwrap();
        let data = ExtensionData::strict(&s.d);
        check_extension(&s.d, &data, &s.q.category, &t0, &theta, &SearchBudget::default()).unwrap()
    }

    #[test]
    fn computad_sizes() {
        let q = q_delta2();
        assert_eq!((q.graph.vertices.len(), q.graph.edges.len(), q.two_arrows.len()), (3, 8, 10));
        let c = q_delta2_cone();
        assert_eq!((c.graph.vertices.len(), c.graph.edges.len(), c.two_arrows.len()), (4, 9, 11));
        assert_eq!(c.graph.vertices[3], "f");
        assert_eq!(c.graph.edges[8].label, "t0");
        assert_eq!(c.two_arrows[10].label, "θ");
    }

    #[test]
    fn parallel_boundaries_are_enforced() {
        let q = q_delta2();
        let bad = TwoArrow { label: "x".into(), src: q.path("1", &["d0_1"]).unwrap(), tgt: q.path("1", &[]).unwrap() };
        assert!(Computad::new(q.graph.clone(), vec![bad]).is_err());
    }

    #[test]
    fn projection_sends_two_arrows_to_identities() {
        for c in [q_delta2(), q_delta2_cone()] {
            for a in &c.two_arrows {
                assert_eq!(projection(&c, &a.src).unwrap(), projection(&c, &a.tgt).unwrap(), "{}", a.label);
            }
        }
    }

    #[test]
    fn projection_is_full_on_short_paths() {
        let q = q_delta2();
        let b = free_two_category(&q).unwrap();
        for i in 0..3u32 {
            for j in 0..3u32 {
                let mut seen: Vec<Image> = one_cells(&b, i, j, 4).iter().map(|w| projection(&q, w).unwrap()).collect();
                seen.sort();
                seen.dedup();
                let all = monotone_maps(i as usize, j as usize);
                assert_eq!(seen.len(), all.len(), "hom({i},{j})");
            }
        }
    }

    #[test]
    fn monotone_map_counts() {
        // Monotone maps [j] -> [i] number C(i + j + 1, j + 1).
        assert_eq!(monotone_maps(1, 1).len(), 3);
        assert_eq!(monotone_maps(2, 1).len(), 6);
        assert_eq!(monotone_maps(0, 2).len(), 1);
        assert_eq!(monotone_maps(2, 2).len(), 10);
    }

    #[test]
    fn indiscrete_and_discrete_groupoids() {
        assert!(is_contractible_finite(&FiniteCategory::indiscrete(4)).passed());
        assert!(!is_contractible_finite(&FiniteCategory::discrete(2)).passed());
        let mut g = Graph { vertices: vec!["a".into(), "b".into()], edges: Vec::new() };
        let p = free_category(&g).unwrap();
        let v = is_contractible_groupoid(&p, &[0, 1], &SearchBudget::default()).unwrap();
        assert!(matches!(v, Contractibility::NotContractible(_)));
        g.edges.push(Edge { label: "e".into(), src: 0, tgt: 1 });
        g.edges.push(Edge { label: "e'".into(), src: 0, tgt: 1 });
        let p = free_category(&g).unwrap();
        let v = is_contractible_groupoid(&p, &[0, 1], &SearchBudget::default()).unwrap();
        assert!(matches!(v, Contractibility::NotContractible(_)));
    }

    #[test]
    fn empty_computad_gives_the_empty_two_category() {
        let c = Computad::new(Graph::default(), Vec::new()).unwrap();
        let b = free_two_category(&c).unwrap();
        assert!(b.zero_cells().is_empty() && b.gen1().is_empty() && b.gen2().is_empty());
    }

    #[test]
    fn extension_relations_are_well_typed() {
        let b = q_delta2_cone_quotient().unwrap();
        assert_eq!(b.rel2().len(), 2);
    }

    #[test]
    fn strict_data_passes_on_the_corpus() {
        for s in [setting(CatalogName::Terminal, 2, 2), setting(CatalogName::BN, 3, 3), setting(CatalogName::Adj, 2, 2)] {
            let r = check_extension_data(&s.d, &ExtensionData::strict(&s.d), &SearchBudget::default()).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(extension(&s, &shadow(&s)).passed());
        }
    }

    #[test]
    fn a_twisted_unit_fails_the_first_equation() {
        let s = setting(CatalogName::BN, 3, 3);
        let mut sh = shadow(&s);
        let x = s.d.two.path(0, &["x"]).unwrap();
        let key = (x.clone(), Word::empty(0));
        let th = sh.theta[&key];
        let c = &s.q.category;
        let obj = c.src(th);
        let aut = c.hom(obj, obj).into_iter().find(|&m| !c.is_identity(m)).unwrap();
        sh.theta.insert(key, c.compose(th, aut).unwrap());
        let r = extension(&s, &sh);
        assert_eq!(r.status, Status::Fail);
        assert!(r.counterexample.unwrap().axiom.starts_with("θ∗s0"));
    }

    #[test]
    fn agrees_with_the_cocone_checker() {
        let s = setting(CatalogName::BN, 3, 3);
        let c = &s.q.category;
        let base = shadow(&s);
        let keys: Vec<(Word, Word)> = {
            let mut k: Vec<_> = base.theta.keys().cloned().collect();
            k.sort_by(|a, b| (a.0.len() + a.1.len(), &a.0.letters, &a.1.letters).cmp(&(b.0.len() + b.1.len(), &b.0.letters, &b.1.letters)));
            k
        };
        for key in keys {
            let th = base.theta[&key];
            let obj = c.src(th);
            for aut in c.hom(obj, obj) {
                let mut sh = base.clone();
                sh.theta.insert(key.clone(), c.compose(th, aut).unwrap());
                let ext = extension(&s, &sh).passed();
                let un = unstrictify_unchecked(&s.d, c, &sh).unwrap();
                assert_eq!(ext, check_cocone(&s.d, c, &un).unwrap().passed(), "{key:?}");
                assert_eq!(ext, check_shadow(&s.d, c, &sh).unwrap().passed());
            }
        }
    }

    #[test]
    fn presented_category_of_the_computad() {
        // Turning each 2-arrow into an equation does not give Δ≤2^op: the
        // mixed identities between faces and degeneracies are absent.
        let q = q_delta2();
        let f = free_category(&q.graph).unwrap();
        let rels: Vec<(Word, Word)> = q.two_arrows.iter().map(|a| (a.src.clone(), a.tgt.clone())).collect();
        let p = f.quotient(&rels).unwrap();
        let w1 = q.path("1", &["s1_1", "d0_2"]).unwrap();
        let w2 = q.path("1", &["d0_1", "s0_0"]).unwrap();
        assert_eq!(projection(&q, &w1).unwrap(), projection(&q, &w2).unwrap());
        let v = p.equal(&w1, &w2, &SearchBudget::default()).unwrap();
        assert!(!v.is_equal());
    }
}
