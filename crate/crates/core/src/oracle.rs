//! Brute-force pseudocolimits of 2-truncated simplicial diagrams.
//!
//! Two independent routes. [`pseudocolimit`] takes the fundamental category
//! of the coend of `N I[n] × N F_n` over `n <= 2`, with `I[n]` the chaotic
//! groupoid on `n + 1` objects. [`grothendieck_localize`] presents the
//! Grothendieck construction with every cocartesian arrow inverted.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use serde::{Deserialize, Serialize};

use crate::bihh::{ArrowKind, Bihh, FunctorData, TruncatedDiagram, SIMPLICIAL_IDENTITIES};
use crate::error::{Error, Result};
use crate::present::{
    CatPresentation, FiniteCategory, FinitePresentation, ObjId, ObjectClass, Order, PresentationBuilder, SearchBudget,
    SkeletonReport, Word,
};

/// A simplicial set stored up to some level.
///
/// `faces[q][i][x]` is `d_i x` for `x` in level `q >= 1`; `degeneracies[q][j][x]`
/// is `s_j x` in level `q + 1`, stored while level `q + 1` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSimplicialSet {
    pub labels: Vec<Vec<String>>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl TruncSimplicialSet {
    pub fn levels(&self) -> usize {
        self.labels.len()
    }

    pub fn size(&self, q: usize) -> usize {
        self.labels[q].len()
    }

    /// Checks every simplicial identity whose levels are stored.
    pub fn validate(&self) -> Result<()> {
        let top = self.levels();
        let bad = |what: String| Err(Error::Validation(format!("simplicial identity {what} fails")));
        let d = |q: usize, i: usize, x: usize| self.faces[q][i][x];
        let s = |q: usize, j: usize, x: usize| self.degeneracies[q][j][x];
        for q in 2..top {
            for x in 0..self.size(q) {
                for j in 1..=q {
                    for i in 0..j {
                        if d(q - 1, i, d(q, j, x)) != d(q - 1, j - 1, d(q, i, x)) {
                            return bad(format!("d{i} d{j} on level {q}"));
                        }
                    }
                }
            }
        }
        for q in 0..top.saturating_sub(1) {
            for x in 0..self.size(q) {
                for j in 0..=q {
                    let sx = s(q, j, x);
                    for i in 0..=q + 1 {
                        let got = d(q + 1, i, sx);
                        let want = if i == j || i == j + 1 {
                            x
                        } else if i < j {
                            s(q - 1, j - 1, d(q, i, x))
                        } else {
                            s(q - 1, j, d(q, i - 1, x))
                        };
                        if got != want {
                            return bad(format!("d{i} s{j} on level {q}"));
                        }
                    }
                    if q + 2 < top {
                        for i in 0..=j {
                            if s(q + 1, i, sx) != s(q + 1, j + 1, s(q, i, x)) {
                                return bad(format!("s{i} s{j} on level {q}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Composable strings of `q` morphisms of `c`, for `q <= 3`.
fn strings(c: &FiniteCategory, q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return (0..c.objects().len()).map(|o| vec![c.identity(o as ObjId)]).collect();
    }
    let mut out: Vec<Vec<usize>> = (0..c.morphism_count()).map(|f| vec![f]).collect();
    for _ in 1..q {
        let mut next = Vec::new();
        for s in &out {
            let end = c.tgt(*s.last().unwrap());
            for g in 0..c.morphism_count() {
                if c.src(g) == end {
                    let mut t = s.clone();
                    t.push(g);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

/// Nerve simplices as vertex lists plus arrows; level 0 stores the identity.
struct Nerve {
    levels: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    fn new(c: &FiniteCategory, top: usize) -> Self {
        let levels: Vec<Vec<Vec<usize>>> = (0..=top).map(|q| strings(c, q)).collect();
        let index = levels.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Nerve { levels, index }
    }

    fn face(&self, c: &FiniteCategory, q: usize, i: usize, x: usize) -> usize {
        let s = &self.levels[q][x];
        let t: Vec<usize> = if q == 1 {
            let o = if i == 0 { c.tgt(s[0]) } else { c.src(s[0]) };
            vec![c.identity(o)]
        } else if i == 0 {
            s[1..].to_vec()
        } else if i == q {
            s[..q - 1].to_vec()
        } else {
            let mut t = s[..i - 1].to_vec();
            t.push(c.compose(s[i - 1], s[i]).expect("composable string"));
            t.extend_from_slice(&s[i + 1..]);
            t
        };
        self.index[q - 1][&t]
    }

    fn degeneracy(&self, c: &FiniteCategory, q: usize, j: usize, x: usize) -> usize {
        let s = &self.levels[q][x];
        if q == 0 {
            return self.index[1][s];
        }
        let vertex = if j == 0 { c.src(s[0]) } else { c.tgt(s[j - 1]) };
        let mut t = s.clone();
        t.insert(j, c.identity(vertex));
        self.index[q + 1][&t]
    }
}

/// The nerve of `c` through composable triples.
pub fn nerve2(c: &FiniteCategory) -> TruncSimplicialSet {
    let n = Nerve::new(c, 3);
    let label = |q: usize, s: &Vec<usize>| -> String {
        if q == 0 {
            c.objects()[c.src(s[0]) as usize].clone()
        } else {
            s.iter().map(|&f| c.morphisms()[f].label.clone()).collect::<Vec<_>>().join(";")
        }
    };
    let labels = (0..=3).map(|q| n.levels[q].iter().map(|s| label(q, s)).collect()).collect();
    let mut faces = vec![Vec::new()];
    let mut degeneracies = Vec::new();
    for q in 1..=3 {
        faces.push((0..=q).map(|i| (0..n.levels[q].len()).map(|x| n.face(c, q, i, x)).collect()).collect());
    }
    for q in 0..3 {
        degeneracies.push((0..=q).map(|j| (0..n.levels[q].len()).map(|x| n.degeneracy(c, q, j, x)).collect()).collect());
    }
    TruncSimplicialSet { labels, faces, degeneracies }
}

/// τ₁: objects `X0`, generators `X1`, relations `d1σ = d2σ ; d0σ` and `s0x = id`.
pub fn fundamental_category(x: &TruncSimplicialSet) -> Result<CatPresentation> {
    if x.levels() < 3 {
        return Err(Error::Precondition("τ₁ needs levels 0 to 2".into()));
    }
    let mut b = PresentationBuilder::new();
    for (i, l) in x.labels[0].iter().enumerate() {
        b.object(&format!("{i}:{l}"));
    }
    let mut gens = Vec::new();
    for (e, l) in x.labels[1].iter().enumerate() {
        let (s, t) = (x.faces[1][1][e], x.faces[1][0][e]);
        gens.push(b.generator(&format!("{e}:{l}"), s as ObjId, t as ObjId)?);
    }
    for v in 0..x.size(0) {
        let w = b.word(v as ObjId, &[gens[x.degeneracies[0][0][v]]])?;
        b.relation(w, Word::empty(v as ObjId))?;
    }
    for s in 0..x.size(2) {
        let (d0, d1, d2) = (x.faces[2][0][s], x.faces[2][1][s], x.faces[2][2][s]);
        let src = x.faces[1][1][d2] as ObjId;
        let l = b.word(src, &[gens[d2], gens[d0]])?;
        let r = b.word(src, &[gens[d1]])?;
        b.relation(l, r)?;
    }
    Ok(b.build())
}

/// A generating arrow as `θ: [m] -> [n]` with its functor `F_n -> F_m`.
struct Coarrow<'a> {
    n: usize,
    m: usize,
    /// Vertex map `[m] -> [n]`.
    on_vertex: Box<dyn Fn(usize) -> usize>,
    functor: &'a FunctorData,
}

fn coarrows(f: &TruncatedDiagram) -> Vec<Coarrow<'_>> {
    f.arrows()
        .into_iter()
        .map(|a| {
            let on_vertex: Box<dyn Fn(usize) -> usize> = match a.kind {
                ArrowKind::Face(i) => Box::new(move |v| if v < i { v } else { v + 1 }),
                ArrowKind::Degeneracy(j) => Box::new(move |v| if v <= j { v } else { v - 1 }),
            };
            Coarrow { n: a.from, m: a.to, on_vertex, functor: a.functor }
        })
        .collect()
}

/// Elements `(n, vertices, simplex)` of the coend at one simplicial degree.
struct Cells {
    items: Vec<(usize, Vec<usize>, usize)>,
    index: HashMap<(usize, Vec<usize>, usize), usize>,
}

fn vertex_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..=n).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

/// The coend of `N I[n] × N F_n` over `n <= 2`, through level 2.
///
/// Every level of `f` must enumerate as a finite category within the budget.
pub fn tensor_i(f: &TruncatedDiagram, b: &SearchBudget) -> Result<TruncSimplicialSet> {
    Ok(tensor_with_objects(f, b)?.0)
}

/// [`tensor_i`] with the vertex of each level-0 object of `f`.
fn tensor_with_objects(f: &TruncatedDiagram, b: &SearchBudget) -> Result<(TruncSimplicialSet, Vec<ObjId>)> {
    b.validate()?;
    let fins: Vec<FinitePresentation> =
        f.levels.iter().map(|l| l.pres.to_finite(b.max_enumeration)).collect::<Result<_>>()?;
    let cats: Vec<&FiniteCategory> = fins.iter().map(|fp| &fp.category).collect();
    let nerves: Vec<Nerve> = cats.iter().map(|c| Nerve::new(c, 2)).collect();
    let arrows = coarrows(f);
    // The functor of each coarrow on morphisms of the finite levels.
    let on_mor: Vec<Vec<usize>> = arrows
        .iter()
        .map(|a| {
            let (src, tgt) = (&fins[a.n], &fins[a.m]);
            src.words.iter().map(|w| tgt.eval(&a.functor.apply(&f.levels[a.m].pres, w))).collect()
        })
        .collect();
    let mut cells = Vec::new();
    let mut classes = Vec::new();
    for q in 0..=2 {
        let mut items = Vec::new();
        for n in 0..=2 {
            for x in vertex_tuples(n, q + 1) {
                for y in 0..nerves[n].levels[q].len() {
                    items.push((n, x.clone(), y));
                }
            }
        }
        let index: HashMap<_, _> = items.iter().enumerate().map(|(i, it)| (it.clone(), i)).collect();
        let mut uf = UnionFind::<usize>::new(items.len());
        for (ai, a) in arrows.iter().enumerate() {
            for x in vertex_tuples(a.m, q + 1) {
                let pushed: Vec<usize> = x.iter().map(|&v| (a.on_vertex)(v)).collect();
                for y in 0..nerves[a.n].levels[q].len() {
                    let ys: Vec<usize> = nerves[a.n].levels[q][y].iter().map(|&g| on_mor[ai][g]).collect();
                    let y2 = nerves[a.m].index[q][&ys];
                    uf.union(index[&(a.n, pushed.clone(), y)], index[&(a.m, x.clone(), y2)]);
                }
            }
        }
        let mut rep: HashMap<usize, usize> = HashMap::new();
        let mut class_of = vec![0; items.len()];
        let mut reps = Vec::new();
        for i in 0..items.len() {
            let r = uf.find(i);
            let c = *rep.entry(r).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            });
            class_of[i] = c;
        }
        cells.push((Cells { items, index }, reps));
        classes.push(class_of);
    }
    let label = |q: usize, i: usize| -> String {
        let (n, x, y) = &cells[q].0.items[i];
        let c = cats[*n];
        let body = if q == 0 {
            f.levels[*n].pres.objects()[c.src(nerves[*n].levels[0][*y][0]) as usize].clone()
        } else {
            nerves[*n].levels[q][*y].iter().map(|&g| f.levels[*n].pres.display_word(&fins[*n].words[g])).collect::<Vec<_>>().join(";")
        };
        format!("{n}{x:?}{body}")
    };
    let labels = (0..=2).map(|q| cells[q].1.iter().map(|&i| label(q, i)).collect()).collect();
    let mut faces = vec![Vec::new()];
    let mut degeneracies = Vec::new();
    for q in 1..=2 {
        let mut fq = Vec::new();
        for k in 0..=q {
            let v = cells[q]
                .1
                .iter()
                .map(|&i| {
                    let (n, x, y) = &cells[q].0.items[i];
                    let mut x2 = x.clone();
                    x2.remove(k);
                    let y2 = nerves[*n].face(cats[*n], q, k, *y);
                    classes[q - 1][cells[q - 1].0.index[&(*n, x2, y2)]]
                })
                .collect();
            fq.push(v);
        }
        faces.push(fq);
    }
    for q in 0..2 {
        let mut sq = Vec::new();
        for j in 0..=q {
            let v = cells[q]
                .1
                .iter()
                .map(|&i| {
                    let (n, x, y) = &cells[q].0.items[i];
                    let mut x2 = x.clone();
                    x2.insert(j, x[j]);
                    let y2 = nerves[*n].degeneracy(cats[*n], q, j, *y);
                    classes[q + 1][cells[q + 1].0.index[&(*n, x2, y2)]]
                })
                .collect();
            sq.push(v);
        }
        degeneracies.push(sq);
    }
    let vertex = (0..f.levels[0].pres.objects().len())
        .map(|o| {
            let y = nerves[0].index[0][&vec![cats[0].identity(o as ObjId)]];
            classes[0][cells[0].0.index[&(0, vec![0], y)]] as ObjId
        })
        .collect();
    Ok((TruncSimplicialSet { labels, faces, degeneracies }, vertex))
}

/// The pseudocolimit as τ₁ of [`tensor_i`].
pub fn pseudocolimit(f: &TruncatedDiagram, b: &SearchBudget) -> Result<CatPresentation> {
    fundamental_category(&tensor_i(f, b)?)
}

/// [`pseudocolimit`] with the object each level-0 object of `f` lands on.
pub fn pseudocolimit_with_objects(f: &TruncatedDiagram, b: &SearchBudget) -> Result<(CatPresentation, Vec<ObjId>)> {
    let (x, vertex) = tensor_with_objects(f, b)?;
    Ok((fundamental_category(&x)?, vertex))
}

/// `∫F` with a formal inverse for every cocartesian generator.
///
/// Objects are `(k, a)`; generators are the fiber generators and one
/// cocartesian arrow `(n, a) -> (m, θ^* a)` per generating coarrow. Relations
/// are the fiber relations, naturality of each cocartesian arrow, the
/// simplicial identities among them and the cancellation pairs.
pub fn grothendieck_localize(f: &TruncatedDiagram, b: &SearchBudget) -> Result<CatPresentation> {
    b.validate()?;
    let mut pb = PresentationBuilder::new();
    let mut base = [0 as ObjId; 3];
    let mut gbase = [0u32; 3];
    for (k, l) in f.levels.iter().enumerate() {
        base[k] = pb.object_count() as ObjId;
        for o in l.pres.objects() {
            pb.object(&format!("L{k}{o}"));
        }
    }
    for (k, l) in f.levels.iter().enumerate() {
        gbase[k] = pb.generator_count() as u32;
        for g in l.pres.generators() {
            pb.generator(&format!("L{k}{}", g.label), base[k] + g.src, base[k] + g.tgt)?;
        }
    }
    let lift = |k: usize, w: &Word| Word {
        src: base[k] + w.src,
        tgt: base[k] + w.tgt,
        letters: w.letters.iter().map(|g| gbase[k] + g).collect(),
    };
    for (k, l) in f.levels.iter().enumerate() {
        for (lw, rw) in l.pres.relations() {
            pb.relation(lift(k, lw), lift(k, rw))?;
        }
    }
    let arrows = coarrows(f);
    let names: Vec<&str> = f.arrows().iter().map(|a| a.name).collect();
    // cocart[a][obj] = (forward, inverse).
    let mut cocart: Vec<Vec<(u32, u32)>> = Vec::new();
    for (ai, a) in arrows.iter().enumerate() {
        let mut v = Vec::new();
        for (o, label) in f.levels[a.n].pres.objects().iter().enumerate() {
            let (s, t) = (base[a.n] + o as ObjId, base[a.m] + a.functor.objects[o]);
            let c = pb.generator(&format!("{}@L{}{label}", names[ai], a.n), s, t)?;
            let ci = pb.generator(&format!("{}@L{}{label}^-1", names[ai], a.n), t, s)?;
            v.push((c, ci));
        }
        cocart.push(v);
    }
    for (ai, a) in arrows.iter().enumerate() {
        for (o, &(c, ci)) in cocart[ai].iter().enumerate() {
            let (s, t) = (base[a.n] + o as ObjId, base[a.m] + a.functor.objects[o]);
            pb.relation(pb.word(s, &[c, ci])?, Word::empty(s))?;
            pb.relation(pb.word(t, &[ci, c])?, Word::empty(t))?;
        }
        let fiber = &f.levels[a.n].pres;
        for (g, gen) in fiber.generators().iter().enumerate() {
            let gl = lift(a.n, &fiber.single(g as u32));
            let img = lift(a.m, &a.functor.apply(&f.levels[a.m].pres, &fiber.single(g as u32)));
            let l = gl.then(&pb.word(gl.tgt, &[cocart[ai][gen.tgt as usize].0])?);
            let r = pb.word(gl.src, &[cocart[ai][gen.src as usize].0])?.then(&img);
            pb.relation(l, r)?;
        }
    }
    for ((a1, a2), rhs) in SIMPLICIAL_IDENTITIES {
        for o in 0..f.levels[arrows[a1].n].pres.objects().len() {
            let path = |x: usize, y: usize| -> Result<Word> {
                let mid = arrows[x].functor.objects[o] as usize;
                let w = pb.word(base[arrows[x].n] + o as ObjId, &[cocart[x][o].0, cocart[y][mid].0])?;
                Ok(w)
            };
            let l = path(a1, a2)?;
            let r = match rhs {
                Some((x, y)) => path(x, y)?,
                None => Word::empty(l.src),
            };
            if l.tgt != r.tgt {
                return Err(Error::Contract("a simplicial identity fails on objects".into()));
            }
            pb.relation(l, r)?;
        }
    }
    Ok(pb.build())
}

/// The automorphism group of a class, as far as the skeleton determines it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AutProfile {
    Trivial,
    Finite(usize),
    /// No automorphism generator was found within budget.
    NoneFound,
    /// Some generator has infinite order.
    Infinite,
    Undetermined,
}

/// A class of the skeleton, by the level-0 objects it contains.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassProfile {
    pub members: Vec<ObjId>,
    pub aut: AutProfile,
}

fn aut_profile(c: &ObjectClass) -> AutProfile {
    if c.automorphisms.iter().any(|a| a.order == Order::Free) {
        return AutProfile::Infinite;
    }
    match c.aut_size {
        Some(1) => AutProfile::Trivial,
        Some(n) => AutProfile::Finite(n),
        None if c.automorphisms.is_empty() => AutProfile::NoneFound,
        None => AutProfile::Undetermined,
    }
}

/// Classes of `report` through `level0`, which sends an object to the level-0 objects it stands for.
pub fn class_profiles(report: &SkeletonReport, level0: impl Fn(ObjId) -> Vec<ObjId>) -> Vec<ClassProfile> {
    let mut out: Vec<ClassProfile> = report
        .classes
        .iter()
        .filter_map(|c| {
            let mut members: Vec<ObjId> = c.members.iter().flat_map(|&m| level0(m)).collect();
            members.sort_unstable();
            members.dedup();
            (!members.is_empty()).then(|| ClassProfile { members, aut: aut_profile(c) })
        })
        .collect();
    out.sort();
    out
}

/// Skeleta of biHH(B) and of both colimit routes, restricted to level-0 objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub presentation: Vec<ClassProfile>,
    pub pseudocolimit: Vec<ClassProfile>,
    pub grothendieck: Vec<ClassProfile>,
}

impl OracleComparison {
    pub fn agree(&self) -> bool {
        self.presentation == self.pseudocolimit && self.pseudocolimit == self.grothendieck
    }
}

/// Compares the three skeleta class for class; `d` must be the diagram of `bihh`'s 2-category at its bound.
pub fn compare_routes(bihh: &Bihh, d: &TruncatedDiagram, b: &SearchBudget) -> Result<OracleComparison> {
    let l0 = &d.levels[0];
    let n0 = l0.pres.objects().len();
    let presentation = class_profiles(&bihh.presentation().skeleton(b)?, |o| {
        l0.object(std::slice::from_ref(&bihh.objects()[o as usize])).into_iter().collect()
    });
    let (pc, vertex) = pseudocolimit_with_objects(d, b)?;
    let pseudocolimit = class_profiles(&pc.skeleton(b)?, |o| {
        (0..n0 as ObjId).filter(|&x| vertex[x as usize] == o).collect()
    });
    let grothendieck =
        class_profiles(&grothendieck_localize(d, b)?.skeleton(b)?, |o| if (o as usize) < n0 { vec![o] } else { vec![] });
    Ok(OracleComparison { presentation, pseudocolimit, grothendieck })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bihh::simplicial_diagram;
    use crate::present::Morphism;
    use crate::twocat::{catalog, Bound, CatalogName};

    fn diagram(n: CatalogName, len: usize) -> TruncatedDiagram {
        let b = catalog(&n).unwrap();
        simplicial_diagram(&b, Bound::length(0, len), &SearchBudget::default()).unwrap()
    }

    #[test]
    fn nerve_of_terminal_is_a_point() {
        let x = nerve2(&FiniteCategory::terminal());
        assert_eq!((0..4).map(|q| x.size(q)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        x.validate().unwrap();
    }

    #[test]
    fn nerve_of_discrete_has_only_identities() {
        let x = nerve2(&FiniteCategory::discrete(2));
        assert_eq!(x.size(1), 2);
        x.validate().unwrap();
    }

    #[test]
    fn nerve_of_cyclic_group_counts_strings() {
        let x = nerve2(&FiniteCategory::cyclic_group(3));
        assert_eq!((0..4).map(|q| x.size(q)).collect::<Vec<_>>(), vec![1, 3, 9, 27]);
        x.validate().unwrap();
    }

    #[test]
    fn fundamental_category_of_a_nerve_recovers_the_category() {
        for c in [FiniteCategory::terminal(), FiniteCategory::cyclic_group(4), FiniteCategory::discrete(3)] {
            let t = fundamental_category(&nerve2(&c)).unwrap();
            let fin = t.to_finite(1000).unwrap();
            assert_eq!(fin.category.morphism_count(), c.morphism_count());
            assert_eq!(fin.category.objects().len(), c.objects().len());
        }
    }

    fn boundary_of_triangle(filled: bool) -> TruncSimplicialSet {
        // Vertices 0,1,2; edges 3 degenerate then a:0->1, b:1->2, c:0->2.
        let labels = vec![
            vec!["0".into(), "1".into(), "2".into()],
            ["s0", "s1", "s2", "a", "b", "c"].map(String::from).to_vec(),
            if filled { vec!["σ".into()] } else { vec![] },
        ];
        let faces = vec![
            vec![],
            vec![vec![0, 1, 2, 1, 2, 2], vec![0, 1, 2, 0, 1, 0]],
            vec![
                if filled { vec![4] } else { vec![] },
                if filled { vec![5] } else { vec![] },
                if filled { vec![3] } else { vec![] },
            ],
        ];
        let degeneracies = vec![vec![vec![0, 1, 2]]];
        TruncSimplicialSet { labels, faces, degeneracies }
    }

    #[test]
    fn open_triangle_is_free() {
        let p = fundamental_category(&boundary_of_triangle(false)).unwrap();
        let fin = p.to_finite(100).unwrap();
        // Identities, a, b, c and a;b.
        assert_eq!(fin.category.morphism_count(), 3 + 4);
    }

    #[test]
    fn filled_triangle_commutes() {
        let p = fundamental_category(&boundary_of_triangle(true)).unwrap();
        let fin = p.to_finite(100).unwrap();
        assert_eq!(fin.category.morphism_count(), 3 + 3);
    }

    #[test]
    fn terminal_diagram_has_terminal_colimit() {
        let d = diagram(CatalogName::Terminal, 2);
        let x = tensor_i(&d, &SearchBudget::default()).unwrap();
        x.validate().unwrap();
        assert_eq!(x.size(0), 1);
        for p in [pseudocolimit(&d, &SearchBudget::default()).unwrap(), grothendieck_localize(&d, &SearchBudget::default()).unwrap()] {
            let r = p.skeleton(&SearchBudget::default()).unwrap();
            assert_eq!(r.classes.len(), 1);
            assert_eq!(r.classes[0].aut_size, Some(1));
        }
    }

    #[test]
    fn sigma_z2_colimit_is_z2() {
        let d = diagram(CatalogName::SigmaAb(vec![2]), 2);
        for p in [pseudocolimit(&d, &SearchBudget::default()).unwrap(), grothendieck_localize(&d, &SearchBudget::default()).unwrap()] {
            let r = p.skeleton(&SearchBudget::default()).unwrap();
            assert_eq!(r.classes.len(), 1);
            assert_eq!(r.classes[0].aut_size, Some(2));
        }
    }

    #[test]
    fn tensor_level_zero_is_the_degree_zero_objects() {
        let d = diagram(CatalogName::BN, 3);
        let x = tensor_i(&d, &SearchBudget::default()).unwrap();
        x.validate().unwrap();
        assert_eq!(x.size(0), d.levels[0].pres.objects().len());
    }

    #[test]
    fn bn_colimit_classes_have_free_automorphisms() {
        let d = diagram(CatalogName::BN, 3);
        let r = pseudocolimit(&d, &SearchBudget::default()).unwrap().skeleton(&SearchBudget::default()).unwrap();
        assert_eq!(r.classes.len(), 4);
        let free: Vec<usize> =
            r.classes.iter().map(|c| c.automorphisms.iter().filter(|a| a.order == Order::Free).count()).collect();
        assert_eq!(free, vec![0, 1, 1, 1]);
    }

    #[test]
    fn morphism_labels_survive_in_the_nerve() {
        let c = FiniteCategory::new(
            vec!["a".into(), "b".into()],
            vec![
                Morphism { src: 0, tgt: 0, label: "1a".into() },
                Morphism { src: 1, tgt: 1, label: "1b".into() },
                Morphism { src: 0, tgt: 1, label: "f".into() },
            ],
            vec![0, 1],
            |f, g| if f == 2 || g == 2 { 2 } else { f },
        )
        .unwrap();
        let x = nerve2(&c);
        assert!(x.labels[1].contains(&"f".to_string()));
        assert_eq!(x.size(2), 4);
        x.validate().unwrap();
    }

    #[test]
    fn the_three_routes_agree_on_the_corpus() {
        let b = SearchBudget::default();
        for (name, two, len) in crate::twocat::corpus() {
            let bound = Bound::length(0, len);
            let bihh = Bihh::new(&two, bound, &b).unwrap();
            let d = simplicial_diagram(&two, bound, &b).unwrap();
            let c = compare_routes(&bihh, &d, &b).unwrap();
            assert!(c.agree(), "{name}: {c:?}");
            if name == CatalogName::BN {
                let auts: Vec<_> = c.presentation.iter().map(|p| p.aut.clone()).collect();
                let z = AutProfile::Infinite;
                assert_eq!(auts, vec![AutProfile::NoneFound, z.clone(), z.clone(), z]);
            }
        }
    }
}
