//! The paracyclic category: an exact function model and a presentation.
//!
//! Object `[n]` is the integers with period `n + 1`. A morphism `[n] -> [m]`
//! is a nondecreasing map `f: Z -> Z` with `f(l + n + 1) = f(l) + m + 1`,
//! stored by its values on `0..=n`.
//!
//! Letters follow the usual conventions, applicatively: `d^i: [n-1] -> [n]`
//! skips `i`, `s^i: [n+1] -> [n]` repeats `i`, and `t^n: [n] -> [n]` is the
//! shift by [`T_SHIFT`]. Words of the presentation are diagrammatic.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::present::{
    CatPresentation, ExactNormalizer, GenId, ObjId, PresentationBuilder, SeparatingModel, Witness, Word,
};

/// Shift realized by `t^n`; the only orientation under which the t-relations hold.
pub const T_SHIFT: i64 = -1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParacyclicMap {
    pub n: usize,
    pub m: usize,
    pub values: Vec<i64>,
}

impl fmt::Display for ParacyclicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}]{:?}", self.n, self.m, self.values)
    }
}

impl ParacyclicMap {
    pub fn new(n: usize, m: usize, values: Vec<i64>) -> Result<Self> {
        if values.len() != n + 1 {
            return Err(Error::Malformed(format!("expected {} values, got {}", n + 1, values.len())));
        }
        let f = ParacyclicMap { n, m, values };
        let wrap = f.values[0] + (m as i64 + 1);
        if f.values.windows(2).any(|w| w[0] > w[1]) || f.values[n] > wrap {
            return Err(Error::Malformed(format!("{f} is not nondecreasing")));
        }
        Ok(f)
    }

    pub fn identity(n: usize) -> Self {
        ParacyclicMap { n, m: n, values: (0..=n as i64).collect() }
    }

    /// `l -> l + c` on `[n]`.
    pub fn shift(n: usize, c: i64) -> Self {
        ParacyclicMap { n, m: n, values: (0..=n as i64).map(|l| l + c).collect() }
    }

    pub fn eval(&self, l: i64) -> i64 {
        let p = self.n as i64 + 1;
        let (q, r) = (l.div_euclid(p), l.rem_euclid(p));
        self.values[r as usize] + q * (self.m as i64 + 1)
    }

    /// `g ∘ f`, applicatively.
    pub fn compose(g: &ParacyclicMap, f: &ParacyclicMap) -> Result<ParacyclicMap> {
        if f.m != g.n {
            return Err(Error::Precondition(format!("cannot compose {g} after {f}")));
        }
        Ok(ParacyclicMap { n: f.n, m: g.m, values: f.values.iter().map(|&v| g.eval(v)).collect() })
    }

    /// `d^i: [n-1] -> [n]` for `n >= 1`, `0 <= i <= n`.
    pub fn face(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n);
        let values = (0..n as i64).map(|j| if j < i as i64 { j } else { j + 1 }).collect();
        ParacyclicMap { n: n - 1, m: n, values }
    }

    /// `s^i: [n+1] -> [n]` for `0 <= i <= n`.
    pub fn degeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n);
        let values = (0..=n as i64 + 1).map(|j| if j <= i as i64 { j } else { j - 1 }).collect();
        ParacyclicMap { n: n + 1, m: n, values }
    }

    pub fn t(n: usize) -> Self {
        Self::shift(n, T_SHIFT)
    }

    pub fn t_inv(n: usize) -> Self {
        Self::shift(n, -T_SHIFT)
    }

    /// Extends a monotone `{0..n} -> {0..m}` table equivariantly.
    pub fn from_delta(n: usize, m: usize, table: &[usize]) -> Result<Self> {
        if table.iter().any(|&v| v > m) {
            return Err(Error::Malformed("simplicial table leaves [m]".into()));
        }
        Self::new(n, m, table.iter().map(|&v| v as i64).collect())
    }

    /// The unique factorization `self = φ ∘ t^k` with `φ` simplicial.
    pub fn factor(&self) -> (Vec<usize>, i64) {
        let m = self.m as i64;
        // The largest l with f(l) <= m, located by stepping whole periods then points.
        let p = self.n as i64 + 1;
        let mut l = 0i64;
        while self.eval(l) > m {
            l -= p;
        }
        while self.eval(l + p) <= m {
            l += p;
        }
        while self.eval(l + 1) <= m {
            l += 1;
        }
        let k = l - self.n as i64;
        let phi = (0..=self.n as i64).map(|i| self.eval(k + i) as usize).collect();
        (phi, -k * T_SHIFT.signum())
    }

    /// Every map `[n] -> [m]` whose t-power has absolute value at most `k_max`.
    pub fn enumerate(n: usize, m: usize, k_max: i64) -> Vec<ParacyclicMap> {
        let mut out = Vec::new();
        for phi in delta_maps(n, m) {
            let phi = Self::from_delta(n, m, &phi).unwrap();
            for k in -k_max..=k_max {
                out.push(Self::compose(&phi, &Self::shift(n, k * T_SHIFT)).unwrap());
            }
        }
        out
    }
}

/// All monotone maps `{0..n} -> {0..m}` in lexicographic order.
pub fn delta_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, m: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=m {
            cur.push(v);
            go(n, m, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, 0, &mut Vec::new(), &mut out);
    out
}

/// A generator of the paracyclic presentation; indices as in the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// `d^i: [n-1] -> [n]`.
    D { n: usize, i: usize },
    /// `s^i: [n+1] -> [n]`.
    S { n: usize, i: usize },
    /// `t^n: [n] -> [n]`.
    T { n: usize },
    /// The inverse of `t^n`.
    TInv { n: usize },
}

impl Letter {
    pub fn source(self) -> usize {
        match self {
            Letter::D { n, .. } => n - 1,
            Letter::S { n, .. } => n + 1,
            Letter::T { n } | Letter::TInv { n } => n,
        }
    }

    pub fn target(self) -> usize {
        match self {
            Letter::D { n, .. } | Letter::S { n, .. } | Letter::T { n } | Letter::TInv { n } => n,
        }
    }

    pub fn map(self) -> ParacyclicMap {
        match self {
            Letter::D { n, i } => ParacyclicMap::face(n, i),
            Letter::S { n, i } => ParacyclicMap::degeneracy(n, i),
            Letter::T { n } => ParacyclicMap::t(n),
            Letter::TInv { n } => ParacyclicMap::t_inv(n),
        }
    }

    pub fn label(self) -> String {
        match self {
            Letter::D { n, i } => format!("d^{i}:{}->{n}", n - 1),
            Letter::S { n, i } => format!("s^{i}:{}->{n}", n + 1),
            Letter::T { n } => format!("t^{n}"),
            Letter::TInv { n } => format!("(t^{n})^-1"),
        }
    }
}

/// Composite of letters given in diagrammatic order.
pub fn eval_letters(src: usize, letters: &[Letter]) -> Result<ParacyclicMap> {
    let mut acc = ParacyclicMap::identity(src);
    for &l in letters {
        acc = ParacyclicMap::compose(&l.map(), &acc)?;
    }
    Ok(acc)
}

/// Diagrammatic normal-form letters of `f`: t-power, then degeneracies, then faces.
pub fn normal_letters(f: &ParacyclicMap) -> Vec<Letter> {
    let (phi, k) = f.factor();
    let mut out = Vec::new();
    for _ in 0..k.unsigned_abs() {
        out.push(if k > 0 { Letter::T { n: f.n } } else { Letter::TInv { n: f.n } });
    }
    // Degeneracies collapse each repeated step, highest index first.
    let mut cur = f.n;
    let repeats: Vec<usize> = (0..f.n).filter(|&j| phi[j] == phi[j + 1]).collect();
    for &j in repeats.iter().rev() {
        out.push(Letter::S { n: cur - 1, i: j });
        cur -= 1;
    }
    // Faces insert each missed value, lowest first.
    let image: Vec<usize> = {
        let mut v = phi.clone();
        v.dedup();
        v
    };
    let missed: Vec<usize> = (0..=f.m).filter(|v| !image.contains(v)).collect();
    for &i in &missed {
        cur += 1;
        out.push(Letter::D { n: cur, i });
    }
    out
}

/// One relation instance of the paracyclic presentation, sides diagrammatic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub name: String,
    pub src: usize,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn inst(name: String, src: usize, lhs: Vec<Letter>, rhs: Vec<Letter>) -> RelationInstance {
    RelationInstance { name, src, lhs, rhs }
}

/// The four t-relations, for every `n <= max` and index where the letters typecheck.
///
/// `t^n s^0 = s^n (t^{n+1})^2` is also emitted for `n = 0`, where it typechecks.
pub fn t_relations(max: usize) -> Vec<RelationInstance> {
    use Letter::*;
    let mut out = Vec::new();
    for n in 0..=max {
        if n >= 1 {
            for i in 1..=n {
                out.push(inst(
                    format!("t^{n} d^{i} = d^{} t^{}", i - 1, n - 1),
                    n - 1,
                    vec![D { n, i }, T { n }],
                    vec![T { n: n - 1 }, D { n, i: i - 1 }],
                ));
            }
            out.push(inst(format!("t^{n} d^0 = d^{n}"), n - 1, vec![D { n, i: 0 }, T { n }], vec![D { n, i: n }]));
        }
        if n < max {
            for i in 1..=n {
                out.push(inst(
                    format!("t^{n} s^{i} = s^{} t^{}", i - 1, n + 1),
                    n + 1,
                    vec![S { n, i }, T { n }],
                    vec![T { n: n + 1 }, S { n, i: i - 1 }],
                ));
            }
            out.push(inst(
                format!("t^{n} s^0 = s^{n} (t^{})^2", n + 1),
                n + 1,
                vec![S { n, i: 0 }, T { n }],
                vec![T { n: n + 1 }, T { n: n + 1 }, S { n, i: n }],
            ));
        }
    }
    out
}

/// The cosimplicial identities among faces and degeneracies with objects `<= max`.
pub fn cosimplicial_relations(max: usize) -> Vec<RelationInstance> {
    use Letter::*;
    let mut out = Vec::new();
    // d^j d^i = d^i d^{j-1} for i < j, with d^{j-1}: [n-1] -> [n], d^j: [n] -> [n+1].
    for n in 1..max {
        for j in 1..=n + 1 {
            for i in 0..j {
                out.push(inst(
                    format!("d^{j} d^{i} = d^{i} d^{} into [{}]", j - 1, n + 1),
                    n - 1,
                    vec![D { n, i }, D { n: n + 1, i: j }],
                    vec![D { n, i: j - 1 }, D { n: n + 1, i }],
                ));
            }
        }
    }
    // s^j s^i = s^i s^{j+1} for i <= j, from [n+2] to [n].
    for n in 0..max.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                out.push(inst(
                    format!("s^{j} s^{i} = s^{i} s^{} from [{}]", j + 1, n + 2),
                    n + 2,
                    vec![S { n: n + 1, i }, S { n, i: j }],
                    vec![S { n: n + 1, i: j + 1 }, S { n, i }],
                ));
            }
        }
    }
    // s^j d^i with d^i: [n] -> [n+1], s^j: [n+1] -> [n].
    for n in 0..max {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = vec![D { n: n + 1, i }, S { n, i: j }];
                let (rhs, tag) = if i < j {
                    (vec![S { n: n - 1, i: j - 1 }, D { n, i }], "i<j")
                } else if i == j || i == j + 1 {
                    (vec![], "i=j,j+1")
                } else {
                    (vec![S { n: n - 1, i: j }, D { n, i: i - 1 }], "i>j+1")
                };
                out.push(inst(format!("s^{j} d^{i} on [{n}] ({tag})"), n, lhs, rhs));
            }
        }
    }
    out
}

/// The paracyclic category on objects `[0..=max]` as a presentation.
///
/// `t^n` carries a formal inverse with both cancellation relations. The
/// function model is attached as separating model and the factorization as
/// exact normalizer.
#[derive(Clone)]
pub struct Paracyclic {
    pub max: usize,
    pres: CatPresentation,
    ids: HashMap<Letter, GenId>,
    letters: Vec<Letter>,
}

impl fmt::Debug for Paracyclic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Paracyclic").field("max", &self.max).field("pres", &self.pres).finish()
    }
}

struct FunctionModel {
    letters: Vec<Letter>,
}

impl SeparatingModel for FunctionModel {
    fn name(&self) -> &str {
        "paracyclic function model"
    }

    fn evaluate(&self, _p: &CatPresentation, w: &Word) -> Option<String> {
        let ls: Vec<Letter> = w.letters.iter().map(|&g| self.letters[g as usize]).collect();
        eval_letters(w.src as usize, &ls).ok().map(|f| f.to_string())
    }
}

struct FactorNormalizer {
    letters: Vec<Letter>,
    ids: HashMap<Letter, GenId>,
}

impl ExactNormalizer for FactorNormalizer {
    fn name(&self) -> &str {
        "paracyclic factorization"
    }

    fn normal_form(&self, _p: &CatPresentation, w: &Word) -> Word {
        let ls: Vec<Letter> = w.letters.iter().map(|&g| self.letters[g as usize]).collect();
        let f = eval_letters(w.src as usize, &ls).expect("word of the presentation");
        let letters = normal_letters(&f).into_iter().map(|l| self.ids[&l]).collect();
        Word { src: w.src, tgt: w.tgt, letters }
    }

    fn derivation(&self, p: &CatPresentation, w: &Word) -> Option<Witness> {
        let ls: Vec<Letter> = w.letters.iter().map(|&g| self.letters[g as usize]).collect();
        let (_, steps) = reduce(w.src as usize, &ls, REDUCE_CAP)?;
        lift(&Calc { p, ids: &self.ids }, &steps)
    }
}

/// Rule applications allowed per reduction.
pub const REDUCE_CAP: usize = 1 << 16;

struct Calc<'a> {
    p: &'a CatPresentation,
    ids: &'a HashMap<Letter, GenId>,
}

impl LetterCalculus for Calc<'_> {
    fn presentation(&self) -> &CatPresentation {
        self.p
    }

    fn generator(&self, l: Letter) -> Option<GenId> {
        self.ids.get(&l).copied()
    }

    fn object(&self, n: usize) -> Option<ObjId> {
        (n < self.p.objects().len()).then_some(n as ObjId)
    }

    fn primitive(&self, at: usize, lhs: &[Letter], rhs: &[Letter]) -> Option<Witness> {
        let step = self.p.relation_step(&self.image(at, lhs)?, &self.image(at, rhs)?)?;
        Some(Witness { steps: vec![step] })
    }
}

pub fn all_letters(max: usize) -> Vec<Letter> {
    let mut out = Vec::new();
    for n in 0..=max {
        if n >= 1 {
            for i in 0..=n {
                out.push(Letter::D { n, i });
            }
        }
        if n < max {
            for i in 0..=n {
                out.push(Letter::S { n, i });
            }
        }
        out.push(Letter::T { n });
        out.push(Letter::TInv { n });
    }
    out
}

impl Paracyclic {
    pub fn new(max: usize) -> Result<Self> {
        let mut b = PresentationBuilder::new();
        for n in 0..=max {
            b.object(&format!("[{n}]"));
        }
        let letters = all_letters(max);
        let mut ids = HashMap::new();
        for &l in &letters {
            let g = b.generator(&l.label(), l.source() as u32, l.target() as u32)?;
            ids.insert(l, g);
        }
        let word = |b: &PresentationBuilder, src: usize, ls: &[Letter]| -> Result<Word> {
            b.word(src as u32, &ls.iter().map(|l| ids[l]).collect::<Vec<_>>())
        };
        let mut rels = cosimplicial_relations(max);
        rels.extend(t_relations(max));
        for r in rels {
            let (l, rr) = (word(&b, r.src, &r.lhs)?, word(&b, r.src, &r.rhs)?);
            b.relation(l, rr)?;
        }
        for n in 0..=max {
            let (t, ti) = (Letter::T { n }, Letter::TInv { n });
            for pair in [[t, ti], [ti, t]] {
                let l = word(&b, n, &pair)?;
                b.relation(l, Word::empty(n as u32))?;
            }
        }
        let pres = b
            .build()
            .with_model(Arc::new(FunctionModel { letters: letters.clone() }))?
            .with_normalizer(Arc::new(FactorNormalizer { letters: letters.clone(), ids: ids.clone() }));
        Ok(Paracyclic { max, pres, ids, letters })
    }

    pub fn presentation(&self) -> &CatPresentation {
        &self.pres
    }

    pub fn id(&self, l: Letter) -> Option<GenId> {
        self.ids.get(&l).copied()
    }

    pub fn letter(&self, g: GenId) -> Letter {
        self.letters[g as usize]
    }

    pub fn letters_of(&self, w: &Word) -> Vec<Letter> {
        w.letters.iter().map(|&g| self.letters[g as usize]).collect()
    }

    pub fn word(&self, src: usize, ls: &[Letter]) -> Result<Word> {
        let ids: Option<Vec<GenId>> = ls.iter().map(|l| self.id(*l)).collect();
        let ids = ids.ok_or_else(|| Error::Malformed("letter outside the truncation".into()))?;
        self.pres.word(src as u32, &ids)
    }

    pub fn from_word(&self, w: &Word) -> Result<ParacyclicMap> {
        self.pres.check_word(w)?;
        eval_letters(w.src as usize, &self.letters_of(w))
    }

    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        let f = self.from_word(w)?;
        self.word(w.src as usize, &normal_letters(&f))
    }

    /// A chain of relation steps from `w` to its normal form.
    pub fn derivation(&self, w: &Word) -> Result<Witness> {
        self.pres.check_word(w)?;
        let (_, steps) = reduce(w.src as usize, &self.letters_of(w), REDUCE_CAP)
            .ok_or_else(|| Error::Budget("paracyclic reduction".into()))?;
        lift(&Calc { p: &self.pres, ids: &self.ids }, &steps)
            .ok_or_else(|| Error::Contract("a rule step has no witness in the presentation".into()))
    }

    pub fn word_of_map(&self, f: &ParacyclicMap) -> Result<Word> {
        self.word(f.n, &normal_letters(f))
    }
}

/// Objects of the cones on the paracyclic category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConeObj {
    Bottom,
    P(usize),
    Top,
}

/// A morphism of `(Λ∞)^◁▷`; the map is present exactly between paracyclic objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeMor {
    pub src: ConeObj,
    pub tgt: ConeObj,
    pub map: Option<ParacyclicMap>,
}

impl fmt::Display for ConeMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.map {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "{:?}->{:?}", self.src, self.tgt),
        }
    }
}

fn rank(o: ConeObj) -> u8 {
    match o {
        ConeObj::Bottom => 0,
        ConeObj::P(_) => 1,
        ConeObj::Top => 2,
    }
}

impl ConeMor {
    pub fn identity(o: ConeObj) -> Self {
        let map = match o {
            ConeObj::P(n) => Some(ParacyclicMap::identity(n)),
            _ => None,
        };
        ConeMor { src: o, tgt: o, map }
    }

    /// The unique arrow between `a` and `b` when one of them is a cone point.
    pub fn unique(a: ConeObj, b: ConeObj) -> Option<Self> {
        let ok = match (a, b) {
            (ConeObj::P(_), ConeObj::P(_)) => false,
            _ => rank(a) < rank(b) || a == b,
        };
        ok.then_some(ConeMor { src: a, tgt: b, map: None }).map(|m| if a == b { Self::identity(a) } else { m })
    }

    pub fn from_map(f: ParacyclicMap) -> Self {
        ConeMor { src: ConeObj::P(f.n), tgt: ConeObj::P(f.m), map: Some(f) }
    }

    /// `self` then `next`.
    pub fn then(&self, next: &ConeMor) -> Result<ConeMor> {
        if self.tgt != next.src {
            return Err(Error::Precondition(format!("cannot compose {self} with {next}")));
        }
        match (&self.map, &next.map) {
            (Some(f), Some(g)) => Ok(ConeMor::from_map(ParacyclicMap::compose(g, f)?)),
            _ => ConeMor::unique(self.src, next.tgt)
                .ok_or_else(|| Error::Contract("no arrow between these cone objects".into())),
        }
    }

    pub fn is_iso(&self) -> bool {
        match (&self.map, self.src == self.tgt) {
            (Some(f), _) => f.factor().0 == (0..=f.n).collect::<Vec<_>>() && f.n == f.m,
            (None, same) => same,
        }
    }
}

/// Which cone points to adjoin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeSide {
    Initial,
    Terminal,
    Both,
}

/// A cone on the truncated paracyclic presentation, with its model attached.
#[derive(Clone)]
pub struct Cone {
    pub side: ConeSide,
    pub base: Paracyclic,
    pres: CatPresentation,
    objs: Vec<ConeObj>,
}

struct ConeModel {
    objs: Vec<ConeObj>,
    base_gens: usize,
    letters: Vec<Letter>,
    gen_ends: Vec<(ConeObj, ConeObj)>,
}

impl ConeModel {
    fn eval(&self, w: &Word) -> Option<ConeMor> {
        let mut acc = ConeMor::identity(self.objs[w.src as usize]);
        for &g in &w.letters {
            let m = if (g as usize) < self.base_gens {
                ConeMor::from_map(self.letters[g as usize].map())
            } else {
                let (a, b) = self.gen_ends[g as usize];
                ConeMor::unique(a, b)?
            };
            acc = acc.then(&m).ok()?;
        }
        Some(acc)
    }
}

impl SeparatingModel for ConeModel {
    fn name(&self) -> &str {
        "paracyclic cone model"
    }

    fn evaluate(&self, _p: &CatPresentation, w: &Word) -> Option<String> {
        self.eval(w).map(|m| m.to_string())
    }
}

impl Cone {
    pub fn presentation(&self) -> &CatPresentation {
        &self.pres
    }

    pub fn object(&self, o: ConeObj) -> Option<u32> {
        self.objs.iter().position(|&x| x == o).map(|i| i as u32)
    }

    pub fn objects(&self) -> &[ConeObj] {
        &self.objs
    }

    pub fn eval(&self, w: &Word) -> Result<ConeMor> {
        self.pres.check_word(w)?;
        let m = self.model();
        m.eval(w).ok_or_else(|| Error::Contract("word leaves the cone model".into()))
    }

    fn model(&self) -> ConeModel {
        let gen_ends = self
            .pres
            .generators()
            .iter()
            .map(|g| (self.objs[g.src as usize], self.objs[g.tgt as usize]))
            .collect();
        ConeModel {
            objs: self.objs.clone(),
            base_gens: self.base.presentation().generators().len(),
            letters: self.base.letters.clone(),
            gen_ends,
        }
    }

    /// Number of morphisms `a -> b` with t-power at most `k_max` between paracyclic objects.
    pub fn hom_size(&self, a: ConeObj, b: ConeObj, k_max: i64) -> usize {
        match (a, b) {
            (ConeObj::P(n), ConeObj::P(m)) => ParacyclicMap::enumerate(n, m, k_max).len(),
            _ => usize::from(ConeMor::unique(a, b).is_some()),
        }
    }
}

/// The truncated paracyclic presentation with an adjoined initial and/or terminal object.
pub fn cone(side: ConeSide, max: usize) -> Result<Cone> {
    let base = Paracyclic::new(max)?;
    let bp = base.presentation();
    let mut b = PresentationBuilder::new();
    let mut objs: Vec<ConeObj> = (0..=max).map(ConeObj::P).collect();
    for o in bp.objects() {
        b.object(o);
    }
    for g in bp.generators() {
        b.generator(&g.label, g.src, g.tgt)?;
    }
    for (l, r) in bp.relations() {
        b.relation(l.clone(), r.clone())?;
    }
    let initial = matches!(side, ConeSide::Initial | ConeSide::Both);
    let terminal = matches!(side, ConeSide::Terminal | ConeSide::Both);
    let bot = initial.then(|| {
        objs.push(ConeObj::Bottom);
        b.object("⊥")
    });
    let top = terminal.then(|| {
        objs.push(ConeObj::Top);
        b.object("⊤")
    });
    let mut into = vec![None; max + 1];
    let mut out = vec![None; max + 1];
    for n in 0..=max as u32 {
        if let Some(bt) = bot {
            into[n as usize] = Some(b.generator(&format!("⊥->[{n}]"), bt, n)?);
        }
        if let Some(tp) = top {
            out[n as usize] = Some(b.generator(&format!("[{n}]->⊤"), n, tp)?);
        }
    }
    let through = match (bot, top) {
        (Some(bt), Some(tp)) => Some(b.generator("⊥->⊤", bt, tp)?),
        _ => None,
    };
    for (gi, g) in bp.generators().iter().enumerate() {
        let gi = gi as GenId;
        if let (Some(bt), Some(i_s), Some(i_t)) = (bot, into[g.src as usize], into[g.tgt as usize]) {
            let l = b.word(bt, &[i_s, gi])?;
            let r = b.word(bt, &[i_t])?;
            b.relation(l, r)?;
        }
        if let (Some(o_s), Some(o_t)) = (out[g.src as usize], out[g.tgt as usize]) {
            let l = b.word(g.src, &[gi, o_t])?;
            let r = b.word(g.src, &[o_s])?;
            b.relation(l, r)?;
        }
    }
    if let (Some(bt), Some(e)) = (bot, through) {
        for n in 0..=max {
            let l = b.word(bt, &[into[n].unwrap(), out[n].unwrap()])?;
            let r = b.word(bt, &[e])?;
            b.relation(l, r)?;
        }
    }
    let mut pres = b.build();
    let mut c = Cone { side, base, pres: pres.clone(), objs };
    pres = pres.with_model(Arc::new(c.model()))?;
    c.pres = pres;
    Ok(c)
}

/// Checks every t-relation and cosimplicial identity for `n <= max` with `t` realized as `shift`.
pub fn relations_hold_with_shift(max: usize, shift: i64) -> bool {
    let ev = |src: usize, ls: &[Letter]| -> Option<ParacyclicMap> {
        let mut acc = ParacyclicMap::identity(src);
        for &l in ls {
            let m = match l {
                Letter::T { n } => ParacyclicMap::shift(n, shift),
                Letter::TInv { n } => ParacyclicMap::shift(n, -shift),
                other => other.map(),
            };
            acc = ParacyclicMap::compose(&m, &acc).ok()?;
        }
        Some(acc)
    };
    t_relations(max)
        .iter()
        .chain(cosimplicial_relations(max).iter())
        .all(|r| ev(r.src, &r.lhs).is_some() && ev(r.src, &r.lhs) == ev(r.src, &r.rhs))
}

/// One oriented rule instance applied at letter offset `pos`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleStep {
    pub pos: usize,
    /// Object at `pos`.
    pub at: usize,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn inverse_t(l: Letter) -> Option<Letter> {
    match l {
        Letter::T { n } => Some(Letter::TInv { n }),
        Letter::TInv { n } => Some(Letter::T { n }),
        _ => None,
    }
}

/// The oriented rewrite of the adjacent pair `[a, b]`, if it is not in normal order.
pub fn rewrite_pair(a: Letter, b: Letter) -> Option<Vec<Letter>> {
    use Letter::*;
    if inverse_t(a) == Some(b) {
        return Some(vec![]);
    }
    Some(match (a, b) {
        (D { n, i }, T { .. }) if i > 0 => vec![T { n: n - 1 }, D { n, i: i - 1 }],
        (D { n, .. }, T { .. }) => vec![D { n, i: n }],
        (D { n, i }, TInv { .. }) if i < n => vec![TInv { n: n - 1 }, D { n, i: i + 1 }],
        (D { n, .. }, TInv { .. }) => vec![D { n, i: 0 }],
        (S { n, i }, T { .. }) if i > 0 => vec![T { n: n + 1 }, S { n, i: i - 1 }],
        (S { n, .. }, T { .. }) => vec![T { n: n + 1 }, T { n: n + 1 }, S { n, i: n }],
        (S { n, i }, TInv { .. }) if i < n => vec![TInv { n: n + 1 }, S { n, i: i + 1 }],
        (S { n, .. }, TInv { .. }) => vec![TInv { n: n + 1 }, TInv { n: n + 1 }, S { n, i: 0 }],
        (D { n, i: a }, D { i: b, .. }) if a >= b => vec![D { n, i: b }, D { n: n + 1, i: a + 1 }],
        (S { n, i: a }, S { i: b, .. }) if a <= b => vec![S { n, i: b + 1 }, S { n: n - 1, i: a }],
        (D { n, i }, S { i: j, .. }) => {
            let n = n - 1;
            if i < j {
                vec![S { n: n - 1, i: j - 1 }, D { n, i }]
            } else if i == j || i == j + 1 {
                vec![]
            } else {
                vec![S { n: n - 1, i: j }, D { n, i: i - 1 }]
            }
        }
        _ => return None,
    })
}

/// Rewrites `letters` to [`normal_letters`] of its composite, leftmost pair first.
///
/// Fails only when `cap` steps do not suffice.
pub fn reduce(src: usize, letters: &[Letter], cap: usize) -> Option<(Vec<Letter>, Vec<RuleStep>)> {
    let mut cur = letters.to_vec();
    let mut steps = Vec::new();
    'outer: loop {
        let mut at = src;
        for pos in 0..cur.len().saturating_sub(1) {
            if let Some(rhs) = rewrite_pair(cur[pos], cur[pos + 1]) {
                if steps.len() == cap {
                    return None;
                }
                steps.push(RuleStep { pos, at, lhs: cur[pos..pos + 2].to_vec(), rhs: rhs.clone() });
                cur.splice(pos..pos + 2, rhs);
                continue 'outer;
            }
            at = cur[pos].target();
        }
        return Some((cur, steps));
    }
}

/// A category generated by the paracyclic letters, one generator per letter.
///
/// Implementors provide witnesses for the rules that are primitive for them;
/// the t-type rules in the other direction follow by conjugation.
pub trait LetterCalculus {
    fn presentation(&self) -> &CatPresentation;
    fn generator(&self, l: Letter) -> Option<GenId>;
    /// A chain at offset 0 rewriting the image of `lhs` into that of `rhs`.
    fn primitive(&self, at: usize, lhs: &[Letter], rhs: &[Letter]) -> Option<Witness>;

    fn image(&self, at: usize, letters: &[Letter]) -> Option<Word> {
        let ids: Option<Vec<GenId>> = letters.iter().map(|&l| self.generator(l)).collect();
        let obj = self.object(at)?;
        self.presentation().word(obj, &ids?).ok()
    }

    /// The presentation's object for `[n]`.
    fn object(&self, n: usize) -> Option<ObjId>;
}

/// Witness for one oriented rule instance at offset 0.
///
/// For `[y, u] -> [u'^c, x]` with `u` a t-letter, falls back to conjugating
/// the primitive `[x, u^-1] -> [(u'^-1)^c, y]`.
pub fn rule_witness<C: LetterCalculus + ?Sized>(c: &C, at: usize, lhs: &[Letter], rhs: &[Letter]) -> Option<Witness> {
    let p = c.presentation();
    let check = |w: Witness| w.proves(p, &c.image(at, lhs)?, &c.image(at, rhs)?).then_some(w);
    if let Some(w) = c.primitive(at, lhs, rhs) {
        return check(w);
    }
    let (&[y, u], Some((&x, us))) = (lhs, rhs.split_last()) else {
        return None;
    };
    let u_inv = inverse_t(u)?;
    if inverse_t(x).is_some() || us.iter().any(|&l| inverse_t(l).is_none() || l != us[0]) {
        return None;
    }
    let tgt = u.target();
    let ups: Vec<Letter> = us.iter().map(|&l| inverse_t(l).unwrap()).collect();
    let base_lhs = [x, u_inv];
    let base_rhs: Vec<Letter> = ups.iter().copied().chain([y]).collect();
    let base = c.primitive(at, &base_lhs, &base_rhs)?;
    let k = us.len();
    let mut steps = Witness::default();
    // Insert k cancelling pairs [u', u'^-1] at the front, nested.
    for j in 0..k {
        let pair = [us[0], ups[0]];
        let ins = rule_cancel(c, at, &pair)?.inverse().shifted(j);
        steps = steps.then(&ins);
    }
    // [us^k, ups^k, y, u] -> [us^k, x, u^-1, u] -> [us^k, x].
    steps = steps.then(&base.inverse().shifted(k));
    steps = steps.then(&rule_cancel(c, tgt, &[u_inv, u])?.shifted(k + 1));
    check(steps)
}

/// Witness for `[u, u^-1] -> []` at offset 0.
fn rule_cancel<C: LetterCalculus + ?Sized>(c: &C, at: usize, pair: &[Letter]) -> Option<Witness> {
    c.primitive(at, pair, &[])
}

/// Lifts a chain of rule steps to a witness in `c`.
pub fn lift<C: LetterCalculus + ?Sized>(c: &C, steps: &[RuleStep]) -> Option<Witness> {
    let mut out = Witness::default();
    for s in steps {
        out = out.then(&rule_witness(c, s.at, &s.lhs, &s.rhs)?.shifted(s.pos));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::present::SearchBudget;
    use proptest::prelude::*;

    #[test]
    fn orientation_is_forced() {
        let ok: Vec<i64> = [-1, 1].into_iter().filter(|&s| relations_hold_with_shift(6, s)).collect();
        assert_eq!(ok, vec![T_SHIFT]);
    }

    #[test]
    fn identity_is_a_unit() {
        let f = ParacyclicMap::degeneracy(2, 1);
        assert_eq!(ParacyclicMap::compose(&ParacyclicMap::identity(2), &f).unwrap(), f);
        assert_eq!(ParacyclicMap::compose(&f, &ParacyclicMap::identity(3)).unwrap(), f);
    }

    #[test]
    fn square_of_t_is_a_double_shift() {
        let t = ParacyclicMap::t(1);
        assert_eq!(ParacyclicMap::compose(&t, &t).unwrap(), ParacyclicMap::shift(1, 2 * T_SHIFT));
    }

    #[test]
    fn t_after_first_face_is_last_face() {
        let lhs = ParacyclicMap::compose(&ParacyclicMap::t(1), &ParacyclicMap::face(1, 0)).unwrap();
        assert_eq!(lhs, ParacyclicMap::face(1, 1));
    }

    #[test]
    fn endomorphisms_of_zero_are_shifts() {
        let maps = ParacyclicMap::enumerate(0, 0, 4);
        assert_eq!(maps.len(), 9);
        for f in maps {
            let c = f.values[0];
            assert!((0..5).all(|l| f.eval(l) == l + c));
        }
    }

    #[test]
    fn malformed_maps_are_rejected() {
        assert!(ParacyclicMap::new(1, 0, vec![1, 0]).is_err());
        assert!(ParacyclicMap::new(1, 0, vec![0, 2]).is_err());
        assert!(ParacyclicMap::new(1, 0, vec![0]).is_err());
        assert!(ParacyclicMap::compose(&ParacyclicMap::identity(1), &ParacyclicMap::identity(2)).is_err());
    }

    #[test]
    fn hom_sets_factor_uniquely() {
        for n in 0..4 {
            for m in 0..4 {
                let maps = ParacyclicMap::enumerate(n, m, 3);
                let mut seen = std::collections::HashSet::new();
                for f in &maps {
                    assert!(seen.insert(f.clone()));
                    let (phi, k) = f.factor();
                    assert!(k.abs() <= 3);
                    let g = ParacyclicMap::compose(
                        &ParacyclicMap::from_delta(n, m, &phi).unwrap(),
                        &ParacyclicMap::shift(n, k * T_SHIFT),
                    )
                    .unwrap();
                    assert_eq!(&g, f);
                }
            }
        }
    }

    #[test]
    fn presentation_relations_hold_in_model() {
        assert!(Paracyclic::new(6).is_ok());
    }

    #[test]
    fn face_words_reach_ordered_normal_form() {
        let p = Paracyclic::new(4).unwrap();
        let w = p.word(0, &[Letter::D { n: 1, i: 0 }, Letter::D { n: 2, i: 0 }]).unwrap();
        let nf = p.normal_form(&w).unwrap();
        assert_eq!(p.letters_of(&nf), vec![Letter::D { n: 1, i: 0 }, Letter::D { n: 2, i: 1 }]);
        assert_eq!(p.from_word(&nf).unwrap(), p.from_word(&w).unwrap());
        let w = p.word(0, &[Letter::D { n: 1, i: 0 }, Letter::T { n: 1 }]).unwrap();
        assert_eq!(p.letters_of(&p.normal_form(&w).unwrap()), vec![Letter::D { n: 1, i: 1 }]);
    }

    #[test]
    fn empty_word_is_identity() {
        let p = Paracyclic::new(3).unwrap();
        assert_eq!(p.from_word(&Word::empty(2)).unwrap(), ParacyclicMap::identity(2));
    }

    #[test]
    fn normal_forms_are_injective_on_bounded_hom_sets() {
        let p = Paracyclic::new(4).unwrap();
        for n in 0..4 {
            for m in 0..4 {
                let mut seen = std::collections::HashSet::new();
                for f in ParacyclicMap::enumerate(n, m, 3) {
                    let w = p.word_of_map(&f).unwrap();
                    assert_eq!(p.from_word(&w).unwrap(), f);
                    assert!(seen.insert(w.letters));
                }
            }
        }
    }

    #[test]
    fn cone_points_have_unique_arrows() {
        let c = cone(ConeSide::Both, 3).unwrap();
        let bot = c.object(ConeObj::Bottom).unwrap();
        let p = c.presentation();
        let into2 = p.word_from_labels(None, &["⊥->[2]"]).unwrap();
        let via = p.word_from_labels(None, &["⊥->[1]", "d^0:1->2"]).unwrap();
        assert!(p.equal(&into2, &via, &SearchBudget::default()).unwrap().is_equal());
        assert_eq!(c.hom_size(ConeObj::Bottom, ConeObj::Top, 3), 1);
        assert_eq!(c.hom_size(ConeObj::Top, ConeObj::Bottom, 3), 0);
        assert_eq!(c.hom_size(ConeObj::Bottom, ConeObj::Bottom, 3), 1);
        assert!(p.generators().iter().all(|g| g.tgt != bot));
    }

    fn arb_word(max: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
        (0..=max, proptest::collection::vec(0usize..64, 0..=8))
    }

    proptest! {
        #[test]
        fn normal_form_round_trips((src, picks) in arb_word(4)) {
            let p = Paracyclic::new(4).unwrap();
            let mut at = src;
            let mut ls = Vec::new();
            let all = all_letters(4);
            for k in picks {
                let opts: Vec<Letter> = all.iter().copied().filter(|l| l.source() == at).collect();
                let l = opts[k % opts.len()];
                at = l.target();
                ls.push(l);
            }
            let w = p.word(src, &ls).unwrap();
            let nf = p.normal_form(&w).unwrap();
            prop_assert_eq!(p.from_word(&nf).unwrap(), p.from_word(&w).unwrap());
            prop_assert_eq!(p.normal_form(&nf).unwrap(), nf.clone());
            let (red, _) = reduce(src, &ls, REDUCE_CAP).unwrap();
            prop_assert_eq!(p.word(src, &red).unwrap(), nf.clone());
            prop_assert!(p.derivation(&w).unwrap().proves(p.presentation(), &w, &nf));
        }

        #[test]
        fn from_word_is_functorial((src, picks) in arb_word(4), cut in 0usize..9) {
            let p = Paracyclic::new(4).unwrap();
            let mut at = src;
            let mut ls = Vec::new();
            let all = all_letters(4);
            for k in picks {
                let opts: Vec<Letter> = all.iter().copied().filter(|l| l.source() == at).collect();
                let l = opts[k % opts.len()];
                at = l.target();
                ls.push(l);
            }
            let cut = cut.min(ls.len());
            let w1 = p.word(src, &ls[..cut]).unwrap();
            let w2 = p.word(w1.tgt as usize, &ls[cut..]).unwrap();
            let whole = p.from_word(&w1.then(&w2)).unwrap();
            let parts = ParacyclicMap::compose(&p.from_word(&w2).unwrap(), &p.from_word(&w1).unwrap()).unwrap();
            prop_assert_eq!(whole, parts);
        }
    }
}
