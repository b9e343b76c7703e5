//! Adjunction data, Euler classes, traces, and the cone comparison for biHH(Adj).
//!
//! The comparison sends `∅0` to `⊥`, `∅1` to `⊤`, and both `(f.g)^{n+1}` and
//! `(g.f)^{n+1}` to `[n]`. The elements of `[n]` are the occurrences of `f` in
//! the cyclic word: a `u`-layer inserts one, a `c`-layer merges the deleted `f`
//! into the previous one, and a twist `(F, G)` rotates, winding the elements of
//! `G` forward by one period.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::paracyclic::{self, cone, Cone, ConeMor, ConeObj, ConeSide, Letter, LetterCalculus, ParacyclicMap};
use crate::present::{CatPresentation, EqualityVerdict, GenId, ObjId, SearchBudget, WeightInvariant, Witness, Word};
use crate::twocat::{catalog, concat, CatalogName, Cell, Layer, PastingTerm, TwoCatPresentation};

use crate::bihh::{Bihh, BihhGenerator, TwistSymbol};
pub use crate::report::{Check, StructureReport};

/// `F: C -> D`, `G: D -> C`, `unit: ∅C => F.G`, `counit: G.F => ∅D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionDatum {
    pub f: Word,
    pub g: Word,
    pub unit: PastingTerm,
    pub counit: PastingTerm,
}

impl AdjunctionDatum {
    pub fn new(b: &TwoCatPresentation, f: Word, g: Word, unit: PastingTerm, counit: PastingTerm) -> Result<Self> {
        b.check_path(&f)?;
        b.check_path(&g)?;
        b.check_term(&unit)?;
        b.check_term(&counit)?;
        if f.tgt != g.src || g.tgt != f.src {
            return Err(Error::Validation("F and G are not opposite 1-cells".into()));
        }
        if unit.src != Word::empty(f.src) || unit.tgt != concat(&[&f, &g]) {
            return Err(Error::Validation("the unit is not ∅C => F.G".into()));
        }
        if counit.src != concat(&[&g, &f]) || counit.tgt != Word::empty(f.tgt) {
            return Err(Error::Validation("the counit is not G.F => ∅D".into()));
        }
        Ok(AdjunctionDatum { f, g, unit, counit })
    }

    /// The generating adjunction `f ⊣ g` with `u` and `c` of the catalog shapes.
    pub fn generic(b: &TwoCatPresentation) -> Result<Self> {
        let cell = |l: &str| -> Result<PastingTerm> {
            let gen = b.gen2_id(l).ok_or_else(|| Error::Lookup(l.into()))?;
            b.cell_term(Cell { gen, inverse: false })
        };
        let (f, g) = (b.path(0, &["f"])?, b.path(1, &["g"])?);
        Self::new(b, f, g, cell("u")?, cell("c")?)
    }

    /// The two triangle identities, `(u.F);(F.c) = F` and `(G.u);(c.G) = G`.
    pub fn triangles(&self, b: &TwoCatPresentation, budget: &SearchBudget) -> Result<[EqualityVerdict; 2]> {
        let (ec, ed) = (Word::empty(self.f.src), Word::empty(self.f.tgt));
        let left = b.compose_v(&b.whisker(&ec, &self.unit, &self.f)?, &b.whisker(&self.f, &self.counit, &ed)?)?;
        let right = b.compose_v(&b.whisker(&self.g, &self.unit, &ec)?, &b.whisker(&ed, &self.counit, &self.g)?)?;
        Ok([
            b.pasting_equal(&left, &b.identity_term(&self.f), budget)?,
            b.pasting_equal(&right, &b.identity_term(&self.g), budget)?,
        ])
    }

    /// `G ⊣ F` with unit `counit^-1` and counit `unit^-1`, when both are invertible.
    pub fn swapped(&self, b: &TwoCatPresentation) -> Option<Self> {
        let unit = b.invert_term(&self.counit)?;
        let counit = b.invert_term(&self.unit)?;
        Self::new(b, self.g.clone(), self.f.clone(), unit, counit).ok()
    }
}

fn layered(bihh: &Bihh, left: &Word, t: &PastingTerm, right: &Word) -> Result<Word> {
    let b = bihh.two_category();
    bihh.word_of_term(&b.whisker(left, t, right)?)
}

/// `∅C => F.G`, then `(F, G)`, then `G.F => ∅D`.
pub fn euler(bihh: &Bihh, a: &AdjunctionDatum) -> Result<Word> {
    let unit = bihh.word_of_term(&a.unit)?;
    let twist = bihh.twist_word(&a.f, &a.g)?;
    let counit = bihh.word_of_term(&a.counit)?;
    Ok(unit.then(&twist).then(&counit))
}

/// `Q => F.G.Q => F.G.Q.F.G`, then `(F.G.Q.F, G)`, then `G.F.G.Q.F => G.Q.F`,
/// preceded by the `k`-th power of the full turn `(∅C, Q)`.
///
/// The target is `G.Q.F`, so for `Q = ∅C` the trace followed by the counit is
/// parallel to the Euler class.
pub fn trace(bihh: &Bihh, a: &AdjunctionDatum, q: &Word, twist_exponent: i64) -> Result<Word> {
    if q.src != a.f.src || q.tgt != a.f.src {
        return Err(Error::Validation("Q must be an endo-1-cell of the source of F".into()));
    }
    let (ec, ed) = (Word::empty(a.f.src), Word::empty(a.f.tgt));
    let fg = concat(&[&a.f, &a.g]);
    let fgq = concat(&[&fg, q]);
    let gqf = concat(&[&a.g, q, &a.f]);
    let first = layered(bihh, &ec, &a.unit, q)?;
    let second = layered(bihh, &fgq, &a.unit, &ec)?;
    let twist = bihh.twist_word(&concat(&[&fgq, &a.f]), &a.g)?;
    let counit = layered(bihh, &ed, &a.counit, &gqf)?;
    let p = bihh.presentation();
    let src = bihh.object(q).ok_or_else(|| Error::Budget("Q lies beyond the truncation".into()))?;
    let mut turn = Word::empty(src);
    let k = twist_exponent.unsigned_abs() as usize;
    if k > 0 {
        let g = if twist_exponent > 0 { bihh.twist(&ec, q) } else { bihh.twist_inverse(&ec, q) };
        let g = g.ok_or_else(|| Error::Budget("the full turn lies beyond the truncation".into()))?;
        turn = p.single(g).pow(k);
    }
    Ok(turn.then(&first).then(&second).then(&twist).then(&counit))
}

#[derive(Clone, Debug)]
pub enum Invertibility {
    Yes { inverse: Word, left: Witness, right: Witness },
    Unknown(String),
}

impl Invertibility {
    pub fn is_yes(&self) -> bool {
        matches!(self, Invertibility::Yes { .. })
    }
}

/// Tries `candidate`, then the letterwise formal inverse, proving both composites are identities.
pub fn is_invertible(p: &CatPresentation, w: &Word, candidate: Option<&Word>, b: &SearchBudget) -> Result<Invertibility> {
    p.check_word(w)?;
    let mut tried = Vec::new();
    let mut candidates = Vec::new();
    if let Some(c) = candidate {
        p.check_word(c)?;
        candidates.push(c.clone());
    }
    let inverses = p.generator_inverses(b);
    let formal: Option<Vec<GenId>> = w.letters.iter().rev().map(|&g| inverses[g as usize]).collect();
    match formal {
        Some(letters) => candidates.push(Word { src: w.tgt, tgt: w.src, letters }),
        None => tried.push("some letter has no inverse generator".to_string()),
    }
    for v in candidates {
        if v.src != w.tgt || v.tgt != w.src {
            tried.push(format!("{} is not parallel to an inverse", p.display_word(&v)));
            continue;
        }
        let l = p.equal(&w.then(&v), &Word::empty(w.src), b)?;
        let r = p.equal(&v.then(w), &Word::empty(w.tgt), b)?;
        match (l, r) {
            (EqualityVerdict::Equal(left), EqualityVerdict::Equal(right)) => {
                return Ok(Invertibility::Yes { inverse: v, left, right });
            }
            _ => tried.push(format!("{} is not proven inverse", p.display_word(&v))),
        }
    }
    Ok(Invertibility::Unknown(tried.join("; ")))
}

/// The comparison functor from the `q`-free part of biHH(Adj) or biHH(AdjEnd)
/// into `(Λ∞)^◁▷`.
pub struct AdjComparison {
    bihh: Bihh,
    max: usize,
    f: u32,
    u: u32,
    c: u32,
    cone: Cone,
    budget: SearchBudget,
    letter_of: HashMap<GenId, Letter>,
    proofs: RefCell<HashMap<(Word, Word), Option<Witness>>>,
}

fn invert(f: &ParacyclicMap) -> Result<ParacyclicMap> {
    if !ConeMor::from_map(f.clone()).is_iso() {
        return Err(Error::Precondition(format!("{f} is not invertible")));
    }
    let p = f.n as i64 + 1;
    let mut values = vec![0; f.n + 1];
    for (x, &y) in f.values.iter().enumerate() {
        values[y.rem_euclid(p) as usize] = x as i64 - y.div_euclid(p) * p;
    }
    ParacyclicMap::new(f.n, f.n, values)
}

fn inverse_mor(m: &ConeMor) -> Result<ConeMor> {
    match &m.map {
        Some(f) => Ok(ConeMor::from_map(invert(f)?)),
        None if m.src == m.tgt => Ok(m.clone()),
        None => Err(Error::Precondition(format!("{m} is not invertible"))),
    }
}

impl AdjComparison {
    /// biHH(Adj) on objects of degree at most `max + 1`.
    pub fn new(max: usize, budget: &SearchBudget) -> Result<Self> {
        let b = catalog(&CatalogName::Adj)?;
        Self::from_bihh(Bihh::with_degree(&b, max + 1, budget)?, max, budget)
    }

    /// Any biHH of an adjunction presentation; objects containing other letters are outside the domain.
    pub fn from_bihh(bihh: Bihh, max: usize, budget: &SearchBudget) -> Result<Self> {
        let b = bihh.two_category();
        let look1 = |l: &str| b.gen1_id(l).ok_or_else(|| Error::Lookup(l.into()));
        let look2 = |l: &str| b.gen2_id(l).ok_or_else(|| Error::Lookup(l.into()));
        let (f, u, c) = (look1("f")?, look2("u")?, look2("c")?);
        look1("g")?;
        let cone = cone(ConeSide::Both, max)?;
        let mut cmp = AdjComparison {
            bihh,
            max,
            f,
            u,
            c,
            cone,
            budget: *budget,
            letter_of: HashMap::new(),
            proofs: RefCell::new(HashMap::new()),
        };
        for l in paracyclic::all_letters(max) {
            let g = cmp.letter(l)?;
            cmp.letter_of.insert(g, l);
        }
        Ok(cmp)
    }

    pub fn bihh(&self) -> &Bihh {
        &self.bihh
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    fn alternating(&self, at: u32, k: usize) -> Word {
        let pair: [&str; 2] = if at == 0 { ["f", "g"] } else { ["g", "f"] };
        let labels: Vec<&str> = pair.iter().copied().cycle().take(2 * k).collect();
        self.bihh.two_category().path(at, &labels).expect("f and g alternate")
    }

    /// `(f.g)^{n+1}`.
    pub fn a_word(&self, n: usize) -> Word {
        self.alternating(0, n + 1)
    }

    /// `(g.f)^{n+1}`.
    pub fn b_word(&self, n: usize) -> Word {
        self.alternating(1, n + 1)
    }

    fn obj(&self, w: &Word) -> Result<ObjId> {
        self.bihh.object(w).ok_or_else(|| Error::Budget(format!("{} lies beyond the truncation", self.bihh.two_category().display_path(w))))
    }

    pub fn a_object(&self, n: usize) -> Result<ObjId> {
        self.obj(&self.a_word(n))
    }

    pub fn b_object(&self, n: usize) -> Result<ObjId> {
        self.obj(&self.b_word(n))
    }

    pub fn bottom(&self) -> Result<ObjId> {
        self.obj(&Word::empty(0))
    }

    pub fn top(&self) -> Result<ObjId> {
        self.obj(&Word::empty(1))
    }

    /// The objects the comparison is defined on.
    pub fn domain(&self) -> Result<Vec<ObjId>> {
        let mut out = vec![self.bottom()?, self.top()?];
        for n in 0..=self.max {
            out.push(self.a_object(n)?);
            out.push(self.b_object(n)?);
        }
        Ok(out)
    }

    fn in_domain_word(&self, w: &Word) -> bool {
        let b = self.bihh.two_category();
        w.letters.iter().all(|&l| b.gen1()[l as usize].label == "f" || b.gen1()[l as usize].label == "g")
    }

    fn cone_object_of_word(&self, w: &Word) -> Option<ConeObj> {
        if !self.in_domain_word(w) {
            return None;
        }
        let k = w.letters.iter().filter(|&&l| l == self.f).count();
        match (k, w.src) {
            (0, 0) => Some(ConeObj::Bottom),
            (0, _) => Some(ConeObj::Top),
            _ if k - 1 <= self.max => Some(ConeObj::P(k - 1)),
            _ => None,
        }
    }

    pub fn cone_object(&self, o: ObjId) -> Option<ConeObj> {
        self.cone_object_of_word(&self.bihh.objects()[o as usize])
    }

    /// Lift of each `f` in `w`, in position order, with the positions.
    fn lifts(&self, w: &Word) -> Vec<(usize, i64)> {
        let offset = i64::from(w.src != 0);
        let mut out = Vec::new();
        for (p, &l) in w.letters.iter().enumerate() {
            if l == self.f {
                out.push((p, out.len() as i64 + offset));
            }
        }
        out
    }

    fn lift_at(&self, w: &Word, pos: usize) -> i64 {
        self.lifts(w).into_iter().find(|&(p, _)| p == pos).map(|(_, l)| l).expect("an f sits at this position")
    }

    /// Images of the elements of `s`, in position order, as a map on lifts.
    fn assemble(&self, s: &Word, t: &Word, img: Vec<i64>) -> Result<ConeMor> {
        let (a, b) = match (self.cone_object_of_word(s), self.cone_object_of_word(t)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Precondition("word outside the comparison's domain".into())),
        };
        let (ConeObj::P(n), ConeObj::P(m)) = (a, b) else {
            return ConeMor::unique(a, b).ok_or_else(|| Error::Contract(format!("no arrow {a:?} -> {b:?} in the cone")));
        };
        let offset = i64::from(s.src != 0) as usize;
        let values = (0..=n)
            .map(|l| if l >= offset { img[l - offset] } else { img[n] - (m as i64 + 1) })
            .collect();
        Ok(ConeMor::from_map(ParacyclicMap::new(n, m, values)?))
    }

    fn layer_image(&self, l: &Layer) -> Result<ConeMor> {
        let b = self.bihh.two_category();
        let (a, bb) = b.cell_boundary(l.cell);
        let (s, t) = (concat(&[&l.left, a, &l.right]), concat(&[&l.left, bb, &l.right]));
        let (lo, hi) = (l.left.len(), l.left.len() + a.len());
        let delta = bb.len() as isize - a.len() as isize;
        let tl = self.lifts(&t);
        let pt = tl.len() as i64;
        let at = |q: usize| tl.iter().find(|&&(p, _)| p == q).map(|&(_, v)| v);
        let src = self.lifts(&s);
        let mut img: Vec<Option<i64>> = Vec::with_capacity(src.len());
        for &(p, _) in &src {
            img.push(if p < lo {
                at(p)
            } else if p >= hi {
                at((p as isize + delta) as usize)
            } else {
                None
            });
        }
        // A deleted f merges into the previous one, across the wrap if necessary.
        for k in 0..img.len() {
            if img[k].is_none() {
                img[k] = if k > 0 { img[k - 1] } else { img.last().copied().flatten().map(|v| v - pt) };
            }
        }
        let img: Option<Vec<i64>> = img.into_iter().collect();
        match img {
            Some(img) if !img.is_empty() && pt > 0 => self.assemble(&s, &t, img),
            _ => self.assemble(&s, &t, Vec::new()),
        }
    }

    fn twist_image(&self, sym: &TwistSymbol) -> Result<ConeMor> {
        let (s, t) = (concat(&[&sym.f, &sym.g]), concat(&[&sym.g, &sym.f]));
        let p = self.lifts(&s).len() as i64;
        let (nf, ng) = (sym.f.len(), sym.g.len());
        let img = self
            .lifts(&s)
            .into_iter()
            .map(|(pos, _)| if pos < nf { self.lift_at(&t, pos + ng) } else { self.lift_at(&t, pos - nf) + p })
            .collect();
        self.assemble(&s, &t, img)
    }

    pub fn generator_image(&self, g: GenId) -> Result<ConeMor> {
        let gen = self.bihh.presentation().generator(g);
        if self.cone_object(gen.src).is_none() || self.cone_object(gen.tgt).is_none() {
            return Err(Error::Precondition(format!("{} is outside the comparison's domain", gen.label)));
        }
        match self.bihh.kind(g) {
            BihhGenerator::Layer(l) => self.layer_image(l),
            BihhGenerator::Twist(s) => self.twist_image(s),
            BihhGenerator::TwistInverse(s) => inverse_mor(&self.twist_image(s)?),
        }
    }

    pub fn image(&self, w: &Word) -> Result<ConeMor> {
        let src = self.cone_object(w.src).ok_or_else(|| Error::Precondition("source outside the domain".into()))?;
        let mut acc = ConeMor::identity(src);
        for &g in &w.letters {
            acc = acc.then(&self.generator_image(g)?)?;
        }
        Ok(acc)
    }

    fn layer_gen(&self, left: Word, gen: u32, right: Word) -> Result<GenId> {
        let l = Layer { left, cell: Cell { gen, inverse: false }, right };
        self.bihh.layer(&l).ok_or_else(|| Error::Budget("layer lies beyond the truncation".into()))
    }

    fn cat(&self, parts: &[Word]) -> Word {
        let refs: Vec<&Word> = parts.iter().collect();
        concat(&refs)
    }

    fn f_word(&self) -> Word {
        self.bihh.two_category().path(0, &["f"]).expect("f")
    }

    fn g_word(&self) -> Word {
        self.bihh.two_category().path(1, &["g"]).expect("g")
    }

    /// The `(f.g)`-side letters: `d^i` is `u` between pairs, `s^i` is `c` inside
    /// `f.(g.f).g`, and `t^n` is `((f.g)^n, f.g)^-1`.
    pub fn letter(&self, l: Letter) -> Result<GenId> {
        match l {
            Letter::D { n, i } => self.layer_gen(self.alternating(0, i), self.u, self.alternating(0, n - i)),
            Letter::S { n, i } => {
                let left = self.cat(&[self.alternating(0, i), self.f_word()]);
                let right = self.cat(&[self.g_word(), self.alternating(0, n - i)]);
                self.layer_gen(left, self.c, right)
            }
            Letter::T { n } => self.twist_gen(&self.alternating(0, n), &self.alternating(0, 1), true),
            Letter::TInv { n } => self.twist_gen(&self.alternating(0, n), &self.alternating(0, 1), false),
        }
    }

    /// The `(g.f)`-side letters `(d^i)^op` for `i >= 1`, `(s^i)^op` and `(t^n)^op`.
    pub fn op_letter(&self, l: Letter) -> Result<GenId> {
        match l {
            Letter::D { n, i } if i >= 1 => {
                let left = self.cat(&[self.alternating(1, i - 1), self.g_word()]);
                let right = self.cat(&[self.f_word(), self.alternating(1, n - i)]);
                self.layer_gen(left, self.u, right)
            }
            Letter::D { .. } => Err(Error::Precondition("(d^0)^op is not a layer".into())),
            Letter::S { n, i } => self.layer_gen(self.alternating(1, i), self.c, self.alternating(1, n + 1 - i)),
            Letter::T { n } => self.twist_gen(&self.alternating(1, n), &self.alternating(1, 1), true),
            Letter::TInv { n } => self.twist_gen(&self.alternating(1, n), &self.alternating(1, 1), false),
        }
    }

    fn twist_gen(&self, f: &Word, g: &Word, inverse: bool) -> Result<GenId> {
        let t = if inverse { self.bihh.twist_inverse(f, g) } else { self.bihh.twist(f, g) };
        t.ok_or_else(|| Error::Budget("twist lies beyond the truncation".into()))
    }

    /// `c^n = (f, (g.f)^n.g): (f.g)^{n+1} -> (g.f)^{n+1}`.
    pub fn c_gen(&self, n: usize, inverse: bool) -> Result<GenId> {
        let rest = self.cat(&[self.alternating(1, n), self.g_word()]);
        self.twist_gen(&self.f_word(), &rest, inverse)
    }

    fn letters_word(&self, n: usize, ls: &[Letter]) -> Result<Word> {
        let gens: Result<Vec<GenId>> = ls.iter().map(|&l| self.letter(l)).collect();
        self.bihh.presentation().word(self.a_object(n)?, &gens?)
    }

    /// From `(f.g)^{n+1}` to the object `o` over `[n]`.
    fn rep(&self, o: ObjId, inverse: bool) -> Result<Word> {
        let p = self.bihh.presentation();
        let Some(ConeObj::P(n)) = self.cone_object(o) else {
            return Err(Error::Precondition("not a paracyclic object".into()));
        };
        if o == self.a_object(n)? {
            return Ok(Word::empty(o));
        }
        let g = self.c_gen(n, inverse)?;
        Ok(p.single(g))
    }

    /// A word `src -> tgt` whose image is `m`.
    pub fn section(&self, src: ObjId, tgt: ObjId, m: &ConeMor) -> Result<Word> {
        let p = self.bihh.presentation();
        let (a, b) = match (self.cone_object(src), self.cone_object(tgt)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Precondition("objects outside the domain".into())),
        };
        if (m.src, m.tgt) != (a, b) {
            return Err(Error::Precondition(format!("{m} does not lie over these objects")));
        }
        let u0 = p.single(self.layer_gen(Word::empty(0), self.u, Word::empty(0))?);
        let c0 = p.single(self.layer_gen(Word::empty(1), self.c, Word::empty(1))?);
        let along = |f: &ParacyclicMap| self.letters_word(f.n, &paracyclic::normal_letters(f));
        let w = match (a, b, &m.map) {
            _ if a == b && m.map.is_none() => Word::empty(src),
            (ConeObj::P(_), ConeObj::P(_), Some(_)) => {
                let (to, from) = (self.rep(src, false)?, self.rep(tgt, false)?);
                let inner = self.image(&to)?.then(m)?.then(&inverse_mor(&self.image(&from)?)?)?;
                let core = along(inner.map.as_ref().expect("paracyclic"))?;
                if core.is_empty() && src == tgt {
                    return Ok(Word::empty(src));
                }
                self.rep(src, true)?.then(&core).then(&from)
            }
            (ConeObj::Bottom, ConeObj::P(n), _) => {
                let f = ParacyclicMap::from_delta(0, n, &[0])?;
                u0.then(&along(&f)?).then(&self.rep(tgt, false)?)
            }
            (ConeObj::P(n), ConeObj::Top, _) => {
                let f = ParacyclicMap::from_delta(n, 0, &vec![0; n + 1])?;
                let c = p.single(self.c_gen(0, false)?);
                self.rep(src, true)?.then(&along(&f)?).then(&c).then(&c0)
            }
            (ConeObj::Bottom, ConeObj::Top, _) => u0.then(&p.single(self.c_gen(0, false)?)).then(&c0),
            _ => return Err(Error::Contract(format!("no arrow over {m}"))),
        };
        p.check_word(&w)?;
        Ok(w)
    }

    /// `(∅, W)` on the object `o`.
    pub fn full_turn(&self, o: ObjId) -> Result<Word> {
        let w = &self.bihh.objects()[o as usize];
        full_turn(&self.bihh, w)
    }
}

/// A proven rewrite of `lhs` into `rhs`, replayable at any offset.
#[derive(Clone, Debug)]
pub struct Lemma {
    pub lhs: Word,
    pub rhs: Word,
    pub proof: Witness,
}

impl Lemma {
    pub fn inverse(&self) -> Lemma {
        Lemma { lhs: self.rhs.clone(), rhs: self.lhs.clone(), proof: self.proof.inverse() }
    }
}

/// A word rewritten in place, with the accumulated chain.
struct Chain {
    cur: Word,
    proof: Witness,
}

impl Chain {
    fn new(w: &Word) -> Self {
        Chain { cur: w.clone(), proof: Witness::default() }
    }

    fn apply(&mut self, pos: usize, l: &Lemma) -> Result<()> {
        let end = pos + l.lhs.len();
        if end > self.cur.len() || self.cur.letters[pos..end] != l.lhs.letters[..] {
            return Err(Error::Contract("a lemma does not match where it is applied".into()));
        }
        self.replace(pos, l.lhs.len(), &l.rhs.letters, &l.proof);
        Ok(())
    }

    fn replace(&mut self, pos: usize, len: usize, by: &[GenId], proof: &Witness) {
        self.cur.letters.splice(pos..pos + len, by.iter().copied());
        self.proof.steps.extend(proof.shifted(pos).steps);
    }
}

impl LetterCalculus for AdjComparison {
    fn presentation(&self) -> &CatPresentation {
        self.bihh.presentation()
    }

    fn generator(&self, l: Letter) -> Option<GenId> {
        self.letter(l).ok()
    }

    fn object(&self, n: usize) -> Option<ObjId> {
        self.a_object(n).ok()
    }

    fn primitive(&self, at: usize, lhs: &[Letter], rhs: &[Letter]) -> Option<Witness> {
        let p = self.bihh.presentation();
        let (l, r) = (LetterCalculus::image(self, at, lhs)?, LetterCalculus::image(self, at, rhs)?);
        if let Some(s) = p.relation_step(&l, &r) {
            return Some(Witness { steps: vec![s] });
        }
        // Wrap-around rules: naturality against the full prefix, then a unit or a cocycle.
        let wrap = match *lhs {
            [Letter::D { n, i }, Letter::TInv { .. }] if i == n => {
                let unit = self.bihh.twist(&self.alternating(0, n), &Word::empty(0))?;
                Some((vec![unit, self.generator(Letter::D { n, i: 0 })?], Word::empty(l.src)))
            }
            [Letter::S { n, i }, Letter::TInv { .. }] if i == n => {
                let c = self.bihh.twist(&self.alternating(0, n), &self.alternating(0, 2))?;
                let a = self.generator(Letter::TInv { n: n + 1 })?;
                Some((vec![c, self.generator(Letter::S { n, i: 0 })?], p.word(l.src, &[a, a]).ok()?))
            }
            _ => None,
        };
        if let Some((mid, head_to)) = wrap {
            let mid = p.word(l.src, &mid).ok()?;
            let first = p.relation_step(&l, &mid)?;
            let second = p.relation_step(&p.word(l.src, &mid.letters[..1]).ok()?, &head_to)?;
            let w = Witness { steps: vec![first, second] };
            if w.proves(p, &l, &r) {
                return Some(w);
            }
        }
        self.prove(&l, &r)
    }
}

impl AdjComparison {
    /// A witness for `l = r`: one relation, the winding normal form, or a bounded search.
    fn prove(&self, l: &Word, r: &Word) -> Option<Witness> {
        let key = (l.clone(), r.clone());
        if let Some(w) = self.proofs.borrow().get(&key) {
            return w.clone();
        }
        let p = self.bihh.presentation();
        let found = if l == r {
            Some(Witness::default())
        } else if let Some(s) = p.relation_step(l, r) {
            Some(Witness { steps: vec![s] })
        } else if let Some(w) = self.bihh.twist_equal(l, r) {
            Some(w)
        } else {
            match p.equal(l, r, &self.budget) {
                Ok(EqualityVerdict::Equal(w)) => Some(w),
                _ => None,
            }
        };
        let found = found.filter(|w| w.proves(p, l, r));
        self.proofs.borrow_mut().insert(key, found.clone());
        found
    }

    fn lemma(&self, l: Word, r: Word) -> Result<Lemma> {
        match self.prove(&l, &r) {
            Some(proof) => Ok(Lemma { lhs: l, rhs: r, proof }),
            None => {
                let p = self.bihh.presentation();
                Err(Error::Contract(format!("no witness for {} = {}", p.display_word(&l), p.display_word(&r))))
            }
        }
    }

    fn chained(&self, start: &Word, ch: Chain) -> Result<Lemma> {
        let p = self.bihh.presentation();
        if !ch.proof.proves(p, start, &ch.cur) {
            return Err(Error::Contract("a lemma chain does not replay".into()));
        }
        Ok(Lemma { lhs: start.clone(), rhs: ch.cur, proof: ch.proof })
    }

    fn word_of(&self, src: ObjId, gens: &[GenId]) -> Result<Word> {
        self.bihh.presentation().word(src, gens)
    }

    fn letter_word(&self, l: Letter) -> Result<Word> {
        Ok(self.bihh.presentation().single(self.letter(l)?))
    }

    fn op_word(&self, l: Letter) -> Result<Word> {
        Ok(self.bihh.presentation().single(self.op_letter(l)?))
    }

    fn c_word(&self, n: usize, inverse: bool) -> Result<Word> {
        Ok(self.bihh.presentation().single(self.c_gen(n, inverse)?))
    }

    fn unit_layer(&self) -> Result<GenId> {
        self.layer_gen(Word::empty(0), self.u, Word::empty(0))
    }

    fn counit_layer(&self) -> Result<GenId> {
        self.layer_gen(Word::empty(1), self.c, Word::empty(1))
    }

    /// The section `⊥ -> (f.g)^{n+1}`.
    pub fn into_word(&self, n: usize) -> Result<Word> {
        self.section(self.bottom()?, self.a_object(n)?, &ConeMor::unique(ConeObj::Bottom, ConeObj::P(n)).expect("⊥ is initial"))
    }

    /// The section `(f.g)^{n+1} -> ⊤`.
    pub fn out_word(&self, n: usize) -> Result<Word> {
        self.section(self.a_object(n)?, self.top()?, &ConeMor::unique(ConeObj::P(n), ConeObj::Top).expect("⊤ is terminal"))
    }

    /// `c`-layers at the front, `(g.f)^{n+1} -> ∅1`.
    fn deletions(&self, n: usize) -> Result<Word> {
        let mut w = self.bihh.presentation().single(self.counit_layer()?);
        for k in 1..=n {
            w = self.op_word(Letter::S { n: k - 1, i: 0 })?.then(&w);
        }
        Ok(w)
    }

    /// `(s^i)^op` on `(g.f)^{n+1}` followed by the front deletions, rewritten to the front deletions.
    fn deletion_moves(&self, n: usize, i: usize) -> Result<Lemma> {
        let start = self.op_word(Letter::S { n: n - 1, i })?.then(&self.deletions(n - 1)?);
        let mut ch = Chain::new(&start);
        if i > 0 {
            if n == 1 {
                ch.apply(0, &self.lemma(start.clone(), self.deletions(1)?)?)?;
            } else {
                let swap = self.lemma(
                    self.op_word(Letter::S { n: n - 1, i })?.then(&self.op_word(Letter::S { n: n - 2, i: 0 })?),
                    self.op_word(Letter::S { n: n - 1, i: 0 })?.then(&self.op_word(Letter::S { n: n - 2, i: i - 1 })?),
                )?;
                ch.apply(0, &swap)?;
                ch.apply(1, &self.deletion_moves(n - 1, i - 1)?)?;
            }
        }
        self.chained(&start, ch)
    }

    /// `out(n) -> c^n` followed by the front deletions.
    fn out_through_b(&self, n: usize) -> Result<Lemma> {
        let start = self.out_word(n)?;
        let mut ch = Chain::new(&start);
        if n > 0 {
            let Some(&Letter::S { n: k, i }) = self.letter_of.get(&start.letters[0]) else {
                return Err(Error::Contract("a section into ⊤ starts with a degeneracy".into()));
            };
            ch.apply(1, &self.out_through_b(n - 1)?)?;
            let s = Letter::S { n: k, i };
            ch.apply(0, &self.lemma(self.letter_word(s)?.then(&self.c_word(n - 1, false)?), self.c_word(n, false)?.then(&self.op_word(s)?))?)?;
            ch.apply(1, &self.deletion_moves(n, i)?)?;
        }
        self.chained(&start, ch)
    }

    /// `t^n` followed by the section into `⊤`, rewritten to the section.
    pub fn top_absorbs(&self, n: usize) -> Result<Lemma> {
        let t = Letter::T { n };
        let start = self.letter_word(t)?.then(&self.out_word(n)?);
        let mut ch = Chain::new(&start);
        let through = self.out_through_b(n)?;
        ch.apply(1, &through)?;
        ch.apply(0, &self.lemma(self.letter_word(t)?.then(&self.c_word(n, false)?), self.c_word(n, false)?.then(&self.op_word(t)?))?)?;
        if n == 0 {
            let c0 = self.bihh.presentation().single(self.counit_layer()?);
            ch.apply(1, &self.lemma(self.op_word(t)?.then(&c0), c0)?)?;
        } else {
            ch.apply(2, &self.deletion_moves(n, n)?.inverse())?;
            let front = self.op_word(Letter::S { n: n - 1, i: 0 })?;
            ch.apply(1, &self.lemma(self.op_word(t)?.then(&self.op_word(Letter::S { n: n - 1, i: n })?), front)?)?;
        }
        ch.apply(0, &through.inverse())?;
        self.chained(&start, ch)
    }

    /// Same for `(t^n)^-1`.
    pub fn top_absorbs_inverse(&self, n: usize) -> Result<Lemma> {
        let (t, ti) = (self.letter_word(Letter::T { n })?, self.letter_word(Letter::TInv { n })?);
        let start = ti.then(&self.out_word(n)?);
        let mut ch = Chain::new(&start);
        ch.apply(1, &self.top_absorbs(n)?.inverse())?;
        ch.apply(0, &self.lemma(ti.then(&t), Word::empty(ti.src))?)?;
        self.chained(&start, ch)
    }

    /// `⊥ -> [0]` followed by `t^0`, or its inverse, rewritten to `⊥ -> [0]`.
    pub fn bottom_absorbs(&self, inverse: bool) -> Result<Lemma> {
        let u0 = self.bihh.presentation().single(self.unit_layer()?);
        let t = self.letter_word(Letter::T { n: 0 })?;
        let forward = self.lemma(u0.then(&t), u0.clone())?;
        if !inverse {
            return Ok(forward);
        }
        let ti = self.letter_word(Letter::TInv { n: 0 })?;
        let start = u0.then(&ti);
        let mut ch = Chain::new(&start);
        ch.apply(0, &forward.inverse())?;
        ch.apply(1, &self.lemma(t.then(&ti), Word::empty(t.src))?)?;
        self.chained(&start, ch)
    }

    /// `⊥ -> [0]` followed by `d^0`, rewritten to `⊥ -> [0]` followed by `d^1`.
    pub fn bottom_faces(&self) -> Result<Lemma> {
        let u0 = self.bihh.presentation().single(self.unit_layer()?);
        self.lemma(u0.then(&self.letter_word(Letter::D { n: 1, i: 0 })?), u0.then(&self.letter_word(Letter::D { n: 1, i: 1 })?))
    }

    /// A generator rewritten to the section of its image.
    pub fn generator_lemma(&self, g: GenId) -> Result<Lemma> {
        let gen = self.bihh.presentation().generator(g);
        let w = self.bihh.presentation().single(g);
        let s = self.section(gen.src, gen.tgt, &self.generator_image(g)?)?;
        self.lemma(w, s)
    }

    /// Cancels an adjacent `c^n, (c^n)^-1` pair.
    fn cancel_reps(&self, ch: &mut Chain) -> Result<()> {
        let reps: Vec<(GenId, GenId)> = (0..=self.max).filter_map(|n| Some((self.c_gen(n, false).ok()?, self.c_gen(n, true).ok()?))).collect();
        while let Some(pos) = (0..ch.cur.len().saturating_sub(1)).find(|&k| reps.contains(&(ch.cur.letters[k], ch.cur.letters[k + 1]))) {
            let pair = self.word_of(ch.cur.src, &ch.cur.letters[..pos])?;
            let at = pair.tgt;
            let l = self.word_of(at, &ch.cur.letters[pos..pos + 2])?;
            let lemma = self.lemma(l, Word::empty(at))?;
            ch.apply(pos, &lemma)?;
        }
        Ok(())
    }

    /// Reduces the paracyclic letters in `lo..hi` to normal form; returns the new end.
    fn reduce_span(&self, ch: &mut Chain, lo: usize, hi: usize) -> Result<usize> {
        let at = self.word_of(ch.cur.src, &ch.cur.letters[..lo])?.tgt;
        let Some(ConeObj::P(n)) = self.cone_object(at) else {
            return Err(Error::Contract("paracyclic letters start off a paracyclic object".into()));
        };
        let letters: Option<Vec<Letter>> = ch.cur.letters[lo..hi].iter().map(|g| self.letter_of.get(g).copied()).collect();
        let letters = letters.ok_or_else(|| Error::Contract("a section is not made of letters".into()))?;
        let (normal, steps) = paracyclic::reduce(n, &letters, paracyclic::REDUCE_CAP).ok_or_else(|| Error::Budget("paracyclic reduction".into()))?;
        let proof = paracyclic::lift(self, &steps).ok_or_else(|| Error::Contract("a rule instance has no witness".into()))?;
        let gens: Vec<GenId> = normal.iter().map(|&l| self.letter(l)).collect::<Result<_>>()?;
        ch.replace(lo, hi - lo, &gens, &proof);
        Ok(lo + gens.len())
    }

    /// A witness rewriting `w` into the section of its image.
    ///
    /// Generators go to sections, seams cancel, the letters reduce to normal
    /// form, and the cone lemmas absorb what `⊥` and `⊤` cannot see.
    pub fn derivation(&self, w: &Word) -> Result<Witness> {
        let target = self.section(w.src, w.tgt, &self.image(w)?)?;
        let mut ch = Chain::new(w);
        for pos in (0..w.len()).rev() {
            ch.apply(pos, &self.generator_lemma(w.letters[pos])?)?;
        }
        self.cancel_reps(&mut ch)?;
        let (u0, c0, tau0) = (self.unit_layer()?, self.counit_layer()?, self.c_gen(0, false)?);
        let reps = |inverse| -> Vec<GenId> { (0..=self.max).filter_map(|n| self.c_gen(n, inverse).ok()).collect() };
        let letters = &ch.cur.letters;
        let lo = usize::from(letters.first().is_some_and(|g| *g == u0 || reps(true).contains(g)));
        let top = letters.len() >= 2 && letters[letters.len() - 2..] == [tau0, c0];
        let tail = if top { 2 } else { usize::from(letters.len() > lo && reps(false).contains(&letters[letters.len() - 1])) };
        if ch.cur.len() > lo + tail {
            let mut hi = ch.cur.len() - tail;
            hi = self.reduce_span(&mut ch, lo, hi)?;
            if lo == 1 && ch.cur.letters[0] == u0 {
                while hi > 1 {
                    let first = self.letter_of.get(&ch.cur.letters[1]).copied();
                    match first {
                        Some(Letter::T { n: 0 }) | Some(Letter::TInv { n: 0 }) => {
                            ch.apply(0, &self.bottom_absorbs(matches!(first, Some(Letter::TInv { .. })))?)?;
                            hi -= 1;
                        }
                        Some(Letter::D { n: 1, i: 0 }) => {
                            ch.apply(0, &self.bottom_faces()?)?;
                            hi = self.reduce_span(&mut ch, 1, hi)?;
                        }
                        _ => break,
                    }
                }
            }
            if top {
                while hi > lo {
                    let last_t = (lo..hi).rev().find(|&k| matches!(self.letter_of.get(&ch.cur.letters[k]), Some(Letter::T { .. } | Letter::TInv { .. })));
                    let Some(k) = last_t else { break };
                    let lemma = match self.letter_of[&ch.cur.letters[k]] {
                        Letter::T { n } => self.top_absorbs(n)?,
                        Letter::TInv { n } => self.top_absorbs_inverse(n)?,
                        _ => unreachable!("a t-letter"),
                    };
                    ch.apply(k, &lemma)?;
                    hi -= 1;
                }
            }
        }
        if ch.cur.len() == 2 && target.is_empty() {
            let l = ch.cur.clone();
            ch.apply(0, &self.lemma(l, target.clone())?)?;
        }
        if ch.cur != target || !ch.proof.proves(self.bihh.presentation(), w, &target) {
            let p = self.bihh.presentation();
            return Err(Error::Contract(format!("{} derives to {}, not to its section", p.display_word(w), p.display_word(&ch.cur))));
        }
        Ok(ch.proof)
    }
}

fn full_turn(bihh: &Bihh, w: &Word) -> Result<Word> {
    bihh.twist_word(&Word::empty(w.src), w)
}

fn verdict_tag(v: &EqualityVerdict) -> &'static str {
    match v {
        EqualityVerdict::Equal(_) => "equal",
        EqualityVerdict::Distinct(_) => "distinct",
        EqualityVerdict::Unknown(_) => "unknown",
    }
}

/// Faithfulness: every word derives to the section of its image.
///
/// The derivation uses finitely many lemmas: one per generator, one per
/// paracyclic rule instance, and the cone lemmas at `⊥` and `⊤`. Proving each
/// of them proves it for all words; sampled words are derived as a replay check.
fn faithfulness(cmp: &AdjComparison, sample_len: usize) -> Result<Check> {
    let p = cmp.bihh.presentation();
    let mut open: Vec<String> = Vec::new();
    let mut note = |what: String, r: Result<()>| {
        if let Err(e) = r {
            open.push(format!("{what}: {e}"));
        }
    };
    let mut gens = 0;
    for g in 0..p.generators().len() as GenId {
        let gen = p.generator(g);
        if cmp.cone_object(gen.src).is_none() || cmp.cone_object(gen.tgt).is_none() {
            continue;
        }
        gens += 1;
        note(gen.label.clone(), cmp.generator_lemma(g).map(|_| ()));
    }
    let letters = paracyclic::all_letters(cmp.max);
    let mut rules = 0;
    for &a in &letters {
        for &b in letters.iter().filter(|b| b.source() == a.target()) {
            let Some(rhs) = paracyclic::rewrite_pair(a, b) else { continue };
            if rhs.iter().any(|&l| cmp.letter(l).is_err()) {
                continue;
            }
            rules += 1;
            let w = paracyclic::rule_witness(cmp, a.source(), &[a, b], &rhs);
            note(format!("{} {}", a.label(), b.label()), w.map(|_| ()).ok_or_else(|| Error::Contract("no witness".into())));
        }
    }
    let mut cone_lemmas = 0;
    for n in 0..=cmp.max {
        cone_lemmas += 2;
        note(format!("t^{n} then ⊤"), cmp.top_absorbs(n).map(|_| ()));
        note(format!("(t^{n})^-1 then ⊤"), cmp.top_absorbs_inverse(n).map(|_| ()));
    }
    for inverse in [false, true] {
        cone_lemmas += 1;
        note("⊥ then t^0".into(), cmp.bottom_absorbs(inverse).map(|_| ()));
    }
    if cmp.max >= 1 {
        cone_lemmas += 1;
        note("⊥ then d^0".into(), cmp.bottom_faces().map(|_| ()));
    }
    let domain = cmp.domain()?;
    let mut sampled = 0;
    for &s in &domain {
        for &t in &domain {
            for len in 1..=sample_len {
                for w in p.words_of_length(s, t, len, usize::MAX)? {
                    sampled += 1;
                    note(p.display_word(&w), cmp.derivation(&w).map(|_| ()));
                }
            }
        }
    }
    let total = open.len();
    open.truncate(5);
    Ok(Check::new(
        "hom injectivity",
        total == 0,
        format!("{gens} generator lemmas, {rules} rule instances, {cone_lemmas} cone lemmas, {sampled} sampled derivations; {total} open {}", open.join("; ")),
    ))
}

/// Generator images, relation replay, letters and the derived relations.
fn functor_checks(cmp: &AdjComparison, budget: &SearchBudget, checks: &mut Vec<Check>) -> Result<()> {
    let p = cmp.bihh.presentation();
    let mut bad = Vec::new();
    let mut count = 0;
    for g in 0..p.generators().len() as GenId {
        let gen = p.generator(g);
        if cmp.cone_object(gen.src).is_none() {
            continue;
        }
        count += 1;
        match cmp.generator_image(g) {
            Ok(m) if Some(m.src) == cmp.cone_object(gen.src) && Some(m.tgt) == cmp.cone_object(gen.tgt) => {}
            Ok(m) => bad.push(format!("{} lands on {m}", gen.label)),
            Err(e) => bad.push(format!("{}: {e}", gen.label)),
        }
    }
    checks.push(Check::new("generator images", bad.is_empty(), format!("{count} generators; {}", bad.join("; "))));
    let (mut replayed, mut failed) = (0, Vec::new());
    for (l, r) in p.relations() {
        if cmp.cone_object(l.src).is_none() {
            continue;
        }
        replayed += 1;
        let same = match (cmp.image(l), cmp.image(r)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        if !same {
            failed.push(format!("{} = {}", p.display_word(l), p.display_word(r)));
        }
    }
    failed.truncate(5);
    checks.push(Check::new("relations replay in the cone", failed.is_empty(), format!("{replayed} relations; {}", failed.join("; "))));
    let mut wrong = Vec::new();
    for l in paracyclic::all_letters(cmp.max) {
        let ok = cmp.letter(l).and_then(|g| cmp.generator_image(g)).is_ok_and(|m| m == ConeMor::from_map(l.map()));
        if !ok {
            wrong.push(l.label());
        }
    }
    checks.push(Check::new("paracyclic letters", wrong.is_empty(), wrong.join(", ")));
    let mut instances = 0;
    let mut unproven = Vec::new();
    for n in 0..=cmp.max {
        let mut cases: Vec<(String, Word, Word)> = Vec::new();
        let single = |g: Result<GenId>| g.map(|g| p.single(g));
        let c = |k| single(cmp.c_gen(k, false));
        cases.push((format!("c^{n} t^{n}"), single(cmp.letter(Letter::T { n }))?.then(&c(n)?), c(n)?.then(&single(cmp.op_letter(Letter::T { n }))?)));
        for i in 1..=n {
            let d = Letter::D { n, i };
            cases.push((format!("c^{n} d^{i}"), single(cmp.letter(d))?.then(&c(n)?), c(n - 1)?.then(&single(cmp.op_letter(d))?)));
        }
        if n < cmp.max {
            for i in 0..=n {
                let s = Letter::S { n, i };
                cases.push((format!("c^{n} s^{i}"), single(cmp.letter(s))?.then(&c(n)?), c(n + 1)?.then(&single(cmp.op_letter(s))?)));
            }
        }
        for (name, l, r) in cases {
            instances += 1;
            let model = cmp.image(&l)? == cmp.image(&r)?;
            let v = p.equal(&l, &r, budget)?;
            if !model || !v.is_equal() {
                unproven.push(format!("{name}: model {model}, presentation {}", verdict_tag(&v)));
            }
        }
    }
    checks.push(Check::new("derived relations", unproven.is_empty(), format!("{instances} instances; {}", unproven.join("; "))));
    Ok(())
}

/// Objects, functor, cone points, hom bijectivity and derived relations for biHH(Adj).
pub fn verify_adj_structure(degree: usize, budget: &SearchBudget) -> Result<StructureReport> {
    if degree == 0 {
        return Err(Error::Precondition("the degree must be positive".into()));
    }
    let cmp = AdjComparison::new(degree - 1, budget)?;
    let p = cmp.bihh.presentation();
    let mut checks = Vec::new();
    let domain = cmp.domain()?;
    checks.push(Check::new(
        "objects",
        domain.len() == p.objects().len(),
        format!("{} objects, {} over the cone", p.objects().len(), domain.len()),
    ));
    functor_checks(&cmp, budget, &mut checks)?;
    let (bot, top) = (cmp.bottom()?, cmp.top()?);
    for (name, at, incoming) in [("initial object ∅0", bot, true), ("terminal object ∅1", top, false)] {
        let mut issues = Vec::new();
        for g in 0..p.generators().len() as GenId {
            let gen = p.generator(g);
            let (near, far) = if incoming { (gen.tgt, gen.src) } else { (gen.src, gen.tgt) };
            if near == at && far != at {
                issues.push(format!("{} leaves the cone point", gen.label));
            } else if near == at && !p.equal(&p.single(g), &Word::empty(at), budget)?.is_equal() {
                issues.push(format!("{} is not the identity", gen.label));
            }
        }
        for &o in &domain {
            let (a, b) = if incoming { (at, o) } else { (o, at) };
            let (ca, cb) = (cmp.cone_object(a).unwrap(), cmp.cone_object(b).unwrap());
            let m = ConeMor::unique(ca, cb).ok_or_else(|| Error::Contract("missing cone arrow".into()))?;
            if cmp.section(a, b, &m).is_err() {
                issues.push(format!("no arrow for {m}"));
            }
        }
        checks.push(Check::new(name, issues.is_empty(), issues.join("; ")));
    }
    let k_max = 1;
    let (mut sizes, mut surj) = (Vec::new(), Vec::new());
    for &a in &domain {
        for &b in &domain {
            let (ca, cb) = (cmp.cone_object(a).unwrap(), cmp.cone_object(b).unwrap());
            let maps: Vec<ConeMor> = match (ca, cb) {
                (ConeObj::P(n), ConeObj::P(m)) => ParacyclicMap::enumerate(n, m, k_max).into_iter().map(ConeMor::from_map).collect(),
                _ => ConeMor::unique(ca, cb).into_iter().collect(),
            };
            let hit = maps.iter().filter(|m| cmp.section(a, b, m).and_then(|w| cmp.image(&w)).is_ok_and(|i| &i == *m)).count();
            if hit != maps.len() || maps.len() != cmp.cone.hom_size(ca, cb, k_max) {
                surj.push(format!("{}->{}", p.objects()[a as usize], p.objects()[b as usize]));
            }
            sizes.push(maps.len());
        }
    }
    checks.push(Check::new(
        "hom surjectivity",
        surj.is_empty(),
        format!("{} hom-sets with |t-power| <= {k_max}, {} maps; {}", sizes.len(), sizes.iter().sum::<usize>(), surj.join(", ")),
    ));
    checks.push(faithfulness(&cmp, 2)?);
    let mut notes = Vec::new();
    notes.push("(d^0)^op has no layer on the (g.f) side; the derived face relations are checked for i >= 1".into());
    Ok(StructureReport { degree, checks, notes })
}

/// The weight `(F, G) -> #q(G)`, zero on layers.
pub fn winding_weight(bihh: &Bihh, q: u32) -> WeightInvariant {
    let p = bihh.presentation();
    let count = |w: &Word| w.letters.iter().filter(|&&l| l == q).count() as i64;
    let weights = (0..p.generators().len() as GenId)
        .map(|g| match bihh.kind(g) {
            BihhGenerator::Layer(_) => 0,
            BihhGenerator::Twist(s) => count(&s.g),
            BihhGenerator::TwistInverse(s) => -count(&s.g),
        })
        .collect();
    WeightInvariant { weights }
}

/// Separation by `q`-count, the `q`-free component, and the full turn on the others.
pub fn verify_adjend_structure(degree: usize, budget: &SearchBudget) -> Result<StructureReport> {
    if degree == 0 {
        return Err(Error::Precondition("the degree must be positive".into()));
    }
    let b = catalog(&CatalogName::AdjEnd)?;
    let q = b.gen1_id("q").ok_or_else(|| Error::Lookup("q".into()))?;
    let bihh = Bihh::with_degree(&b, degree, budget)?;
    let qs = |w: &Word| w.letters.iter().filter(|&&l| l == q).count();
    let p = bihh.presentation();
    let weight_of = |o: ObjId| qs(&bihh.objects()[o as usize]);
    let mut checks = Vec::new();
    let crossing: Vec<String> = p
        .generators()
        .iter()
        .filter(|g| weight_of(g.src) != weight_of(g.tgt))
        .map(|g| g.label.clone())
        .collect();
    checks.push(Check::new("components separate by q-count", crossing.is_empty(), crossing.join(", ")));

    let winding = winding_weight(&bihh, q);
    checks.push(Check::new("winding weight respects every relation", winding.respects(p), String::new()));

    let mut central = Vec::new();
    let mut free = Vec::new();
    let mut generated = Vec::new();
    let mut central_count = 0;
    let cap = budget.max_enumeration;
    for (o, w) in bihh.objects().iter().enumerate() {
        let k = qs(w);
        if k == 0 {
            continue;
        }
        let o = o as ObjId;
        let z = full_turn(&bihh, w)?;
        if winding.value(&z) != k as i64 {
            free.push(format!("{} has winding {}", p.objects()[o as usize], winding.value(&z)));
        }
        for g in 0..p.generators().len() as GenId {
            let gen = p.generator(g);
            if gen.src != o {
                continue;
            }
            central_count += 1;
            let zt = full_turn(&bihh, &bihh.objects()[gen.tgt as usize])?;
            let (l, r) = (p.single(g).then(&zt), z.then(&p.single(g)));
            let v = p.equal(&l, &r, budget)?;
            if !v.is_equal() {
                central.push(format!("{} ({})", gen.label, verdict_tag(&v)));
            }
        }
        if k == 1 {
            let zi = p.single(bihh.twist_inverse(&Word::empty(w.src), w).expect("full turn"));
            for len in 1..=2 {
                for a in p.words_of_length(o, o, len, cap)? {
                    if a.letters.iter().any(|&g| matches!(bihh.kind(g), BihhGenerator::Layer(_))) {
                        continue;
                    }
                    let e = winding.value(&a);
                    let power = if e >= 0 { z.pow(e as usize) } else { zi.pow(e.unsigned_abs() as usize) };
                    if bihh.twist_equal(&a, &power).is_none() {
                        generated.push(p.display_word(&a));
                    }
                }
            }
        }
    }
    let qw = b.path(0, &["q"])?;
    let qo = bihh.object(&qw).ok_or_else(|| Error::Budget("q lies beyond the truncation".into()))?;
    for (g, gen) in p.generators().iter().enumerate() {
        if gen.tgt == qo && matches!(bihh.kind(g as GenId), BihhGenerator::Layer(_)) {
            generated.push(format!("{} lands on q", gen.label));
        }
    }
    central.truncate(5);
    generated.truncate(5);
    checks.push(Check::new("the full turn is central", central.is_empty(), format!("{central_count} generators; {}", central.join("; "))));
    checks.push(Check::new("the full turn has infinite order", free.is_empty(), free.join("; ")));
    checks.push(Check::new(
        "the full turn generates Aut(q)",
        generated.is_empty(),
        format!("no layer lands on q, the only object of length one in its component; twist loops at one q are powers of the full turn; {}", generated.join("; ")),
    ));

    let zq = full_turn(&bihh, &qw)?;
    let survives = winding.value(&zq) == 1 && p.normalize(&zq, budget)?.word().is_none_or(|w| !w.is_empty());
    checks.push(Check::new("Aut(q) has a free generator", survives, format!("(∅,q) has winding {}", winding.value(&zq))));

    let adj_part = AdjComparison::from_bihh(bihh, degree - 1, budget)?;
    let mut inner = Vec::new();
    functor_checks(&adj_part, budget, &mut inner)?;
    inner.push(faithfulness(&adj_part, 1)?);
    let failed: Vec<String> = inner.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    checks.push(Check::new("the q-free component is biHH(Adj)", failed.is_empty(), failed.join("; ")));

    let mut notes = Vec::new();
    let bihh = adj_part.bihh();
    let p = bihh.presentation();
    let qq = b.path(0, &["q", "q"])?;
    if bihh.object(&qq).is_some() {
        let r = p.single(bihh.twist(&qw, &qw).expect("rotation of q.q"));
        let v = p.equal(&r.pow(2), &full_turn(bihh, &qq)?, budget)?;
        notes.push(format!(
            "for two q's the full turn is the square of the rotation (q, q) ({}); it generates Aut only up to that root",
            verdict_tag(&v)
        ));
    }
    Ok(StructureReport { degree, checks, notes })
}

/// The Euler class of `f ⊣ g` is the unique arrow `∅0 -> ∅1`, invariant under Aut(∅0).
pub fn euler_canonical_check(cmp: &AdjComparison, budget: &SearchBudget) -> Result<Vec<Check>> {
    let bihh = cmp.bihh();
    let p = bihh.presentation();
    let e = euler(bihh, &AdjunctionDatum::generic(bihh.two_category())?)?;
    let (bot, top) = (cmp.bottom()?, cmp.top()?);
    let mut checks = Vec::new();
    let img = cmp.image(&e)?;
    checks.push(Check::new("euler lies over ⊥ -> ⊤", ConeMor::unique(ConeObj::Bottom, ConeObj::Top) == Some(img.clone()), img.to_string()));
    let hom = cmp.cone.hom_size(ConeObj::Bottom, ConeObj::Top, 0);
    let s = cmp.section(bot, top, &img)?;
    let v = p.equal(&e, &s, budget)?;
    checks.push(Check::new("hom(∅0, ∅1) is a point", hom == 1 && v.is_equal(), format!("cone hom size {hom}, section {}", verdict_tag(&v))));
    let mut moved = Vec::new();
    for g in 0..p.generators().len() as GenId {
        let gen = p.generator(g);
        if gen.src != bot || gen.tgt != bot {
            continue;
        }
        let a = p.single(g);
        let v = p.equal(&a.then(&e), &e, budget)?;
        if !v.is_equal() {
            moved.push(format!("{} ({})", gen.label, verdict_tag(&v)));
        }
    }
    checks.push(Check::new("Aut(∅0) fixes the Euler class", moved.is_empty(), moved.join("; ")));
    let back = p.generators().iter().any(|g| g.src == top && g.tgt != top);
    checks.push(Check::new(
        "the Euler class is not invertible",
        !back && ConeMor::unique(ConeObj::Top, ConeObj::Bottom).is_none(),
        "no generator leaves ∅1 and the cone has no arrow ⊤ -> ⊥".into(),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn report(r: &StructureReport) -> String {
        r.checks.iter().map(|c| format!("{} {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail)).collect::<Vec<_>>().join("\n")
    }

    #[test]
    fn cone_lemmas_replay() {
        let cmp = AdjComparison::new(3, &budget()).unwrap();
        let p = cmp.bihh().presentation();
        for n in 0..=3 {
            for l in [cmp.top_absorbs(n).unwrap(), cmp.top_absorbs_inverse(n).unwrap()] {
                assert!(l.proof.proves(p, &l.lhs, &l.rhs), "t^{n}");
                assert_eq!(l.rhs, cmp.out_word(n).unwrap());
            }
        }
        let l = cmp.bottom_faces().unwrap();
        assert!(l.proof.proves(p, &l.lhs, &l.rhs));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn words_derive_to_their_sections(start in 0usize..8, picks in proptest::collection::vec(0usize..256, 0..7)) {
            let cmp = AdjComparison::new(2, &budget()).unwrap();
            let p = cmp.bihh().presentation();
            let domain = cmp.domain().unwrap();
            let mut w = Word::empty(domain[start % domain.len()]);
            for k in picks {
                let out: Vec<GenId> = (0..p.generators().len() as GenId).filter(|&g| p.generator(g).src == w.tgt).collect();
                if out.is_empty() {
                    break;
                }
                w = w.then(&p.single(out[k % out.len()]));
            }
            let s = cmp.section(w.src, w.tgt, &cmp.image(&w).unwrap()).unwrap();
            let d = cmp.derivation(&w).unwrap();
            proptest::prop_assert!(d.proves(p, &w, &s));
        }
    }

    #[test]
    fn inverse_of_a_shift() {
        let s = ParacyclicMap::shift(2, 5);
        assert_eq!(invert(&s).unwrap(), ParacyclicMap::shift(2, -5));
        assert!(invert(&ParacyclicMap::face(2, 1)).is_err());
    }

    #[test]
    fn letters_map_to_their_paracyclic_maps() {
        let cmp = AdjComparison::new(2, &budget()).unwrap();
        for l in paracyclic::all_letters(2) {
            let m = cmp.generator_image(cmp.letter(l).unwrap()).unwrap();
            assert_eq!(m, ConeMor::from_map(l.map()), "{}", l.label());
        }
    }

    #[test]
    fn c_is_the_full_period_shift() {
        let cmp = AdjComparison::new(2, &budget()).unwrap();
        for n in 0..=2 {
            let m = cmp.generator_image(cmp.c_gen(n, false).unwrap()).unwrap();
            assert_eq!(m, ConeMor::from_map(ParacyclicMap::shift(n, n as i64 + 1)));
        }
    }

    #[test]
    fn adj_structure_at_degree_two() {
        let r = verify_adj_structure(2, &budget()).unwrap();
        assert!(r.passed(), "{}", report(&r));
    }

    #[test]
    fn adjend_structure_at_degree_two() {
        let r = verify_adjend_structure(2, &budget()).unwrap();
        assert!(r.passed(), "{}", report(&r));
    }

    #[test]
    fn euler_is_canonical() {
        let cmp = AdjComparison::new(1, &budget()).unwrap();
        let checks = euler_canonical_check(&cmp, &budget()).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn triangles_hold_for_the_generic_adjunction() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let a = AdjunctionDatum::generic(&b).unwrap();
        assert!(a.triangles(&b, &budget()).unwrap().iter().all(|v| v.is_equal()));
        assert!(a.swapped(&b).is_none());
    }

    #[test]
    fn euler_of_an_equivalence_is_inverted_by_the_swapped_class() {
        let b = catalog(&CatalogName::AdjEq).unwrap();
        let bihh = Bihh::with_degree(&b, 2, &budget()).unwrap();
        let a = AdjunctionDatum::generic(&b).unwrap();
        let e = euler(&bihh, &a).unwrap();
        let e2 = euler(&bihh, &a.swapped(&b).unwrap()).unwrap();
        let v = is_invertible(bihh.presentation(), &e, Some(&e2), &budget()).unwrap();
        match v {
            Invertibility::Yes { inverse, .. } => assert_eq!(inverse, e2),
            Invertibility::Unknown(why) => panic!("{why}"),
        }
    }

    #[test]
    fn euler_of_adj_has_no_inverse_candidate() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let bihh = Bihh::with_degree(&b, 2, &budget()).unwrap();
        let e = euler(&bihh, &AdjunctionDatum::generic(&b).unwrap()).unwrap();
        assert!(!is_invertible(bihh.presentation(), &e, None, &budget()).unwrap().is_yes());
    }

    #[test]
    fn trace_of_the_identity_then_the_counit_is_the_euler_class() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let bihh = Bihh::with_degree(&b, 3, &budget()).unwrap();
        let a = AdjunctionDatum::generic(&b).unwrap();
        let t = trace(&bihh, &a, &Word::empty(0), 0).unwrap();
        let c = layered(&bihh, &Word::empty(1), &a.counit, &Word::empty(1)).unwrap();
        let e = euler(&bihh, &a).unwrap();
        assert!(bihh.presentation().equal(&t.then(&c), &e, &budget()).unwrap().is_equal());
    }

    #[test]
    fn trace_in_the_equivalence_is_invertible() {
        let b = catalog(&CatalogName::AdjEqEnd).unwrap();
        let bihh = Bihh::with_degree(&b, 3, &budget()).unwrap();
        let a = AdjunctionDatum::generic(&b).unwrap();
        let q = b.path(0, &["q"]).unwrap();
        for k in [0, 1, -1] {
            let t = trace(&bihh, &a, &q, k).unwrap();
            assert!(is_invertible(bihh.presentation(), &t, None, &budget()).unwrap().is_yes(), "k = {k}");
        }
    }

    #[test]
    fn mismatched_adjunction_data_are_rejected() {
        let b = catalog(&CatalogName::Adj).unwrap();
        let a = AdjunctionDatum::generic(&b).unwrap();
        assert!(AdjunctionDatum::new(&b, a.g.clone(), a.f.clone(), a.unit.clone(), a.counit.clone()).is_err());
    }
}
