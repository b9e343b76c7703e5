//! The paracyclic letters inside biHH(BΔ+).
//!
//! `[n]` is the object `x^{n+1}` and `∅` is the adjoined initial object.
//! `d^i: [n-1] -> [n]` is the layer `(x^i, η, x^{n-i})`, `s^i` is
//! `(x^i, μ, x^{n-i})`, and `t^n` is `(x^n, x)^-1`.

use crate::error::{Error, Result};
use crate::paracyclic::{self, eval_letters, Letter, LetterCalculus, ParacyclicMap, RelationInstance, REDUCE_CAP};
use crate::present::{CatPresentation, GenId, ObjId, SearchBudget, Witness, Word};
use crate::report::{Check, StructureReport};
use crate::twocat::{catalog, Cell, CatalogName, Layer};

use super::{Bihh, BihhGenerator};

pub struct DeltaComparison {
    bihh: Bihh,
    max: usize,
    eta: u32,
    mu: u32,
}

impl DeltaComparison {
    /// biHH(BΔ+) on objects up to `x^{max+1}`.
    pub fn new(max: usize, budget: &SearchBudget) -> Result<Self> {
        let b = catalog(&CatalogName::BDeltaPlus)?;
        let eta = b.gen2_id("η").ok_or_else(|| Error::Lookup("η".into()))?;
        let mu = b.gen2_id("μ").ok_or_else(|| Error::Lookup("μ".into()))?;
        let bihh = Bihh::with_degree(&b, max + 1, budget)?;
        Ok(DeltaComparison { bihh, max, eta, mu })
    }

    pub fn bihh(&self) -> &Bihh {
        &self.bihh
    }

    pub fn max(&self) -> usize {
        self.max
    }

    fn power(&self, k: usize) -> Word {
        let b = self.bihh.two_category();
        b.path(0, &vec!["x"; k]).expect("x is a loop")
    }

    fn layer(&self, gen: u32, i: usize, rest: usize) -> Option<GenId> {
        let cell = Cell { gen, inverse: false };
        self.bihh.layer(&Layer { left: self.power(i), cell, right: self.power(rest) })
    }

    /// The initial object `∅`.
    pub fn initial(&self) -> ObjId {
        self.bihh.object(&self.power(0)).expect("the empty word is an object")
    }

    /// `i_0: ∅ -> [0]`.
    pub fn initial_map(&self) -> Word {
        let g = self.layer(self.eta, 0, 0).expect("η is a layer");
        self.bihh.presentation().single(g)
    }

    /// The image of a paracyclic word.
    pub fn image_word(&self, src: usize, letters: &[Letter]) -> Result<Word> {
        self.image(src, letters).ok_or_else(|| Error::Budget("letters outside the truncation".into()))
    }

    /// A witness that the two sides of `r` agree in biHH(BΔ+).
    pub fn relation_witness(&self, r: &RelationInstance) -> Result<Witness> {
        let (lhs, rhs) = (self.image_word(r.src, &r.lhs)?, self.image_word(r.src, &r.rhs)?);
        let fail = || Error::Contract(format!("no witness for {}", r.name));
        let (left, _) = paracyclic::reduce(r.src, &r.lhs, REDUCE_CAP).ok_or_else(fail)?;
        let (right, _) = paracyclic::reduce(r.src, &r.rhs, REDUCE_CAP).ok_or_else(fail)?;
        if left != right {
            return Err(fail());
        }
        let w = self.derivation(r.src, &r.lhs)?.then(&self.derivation(r.src, &r.rhs)?.inverse());
        if !w.proves(self.bihh.presentation(), &lhs, &rhs) {
            return Err(fail());
        }
        Ok(w)
    }

    /// Witness from the image of `letters` to the image of their normal form.
    pub fn derivation(&self, src: usize, letters: &[Letter]) -> Result<Witness> {
        let (_, steps) = paracyclic::reduce(src, letters, REDUCE_CAP)
            .ok_or_else(|| Error::Budget("paracyclic reduction".into()))?;
        paracyclic::lift(self, &steps).ok_or_else(|| Error::Contract("a rule step has no witness in biHH(BΔ+)".into()))
    }

    fn level(&self, o: ObjId) -> Option<usize> {
        self.bihh.objects()[o as usize].len().checked_sub(1)
    }

    /// The letters a generator between nonempty objects stands for.
    ///
    /// `(x^a, x^b)` is `((t^{a+b-1})^-1)^b` by the cocycle relation.
    pub fn generator_letters(&self, g: GenId) -> Result<Vec<Letter>> {
        let gen = self.bihh.presentation().generator(g);
        let (Some(_), Some(_)) = (self.level(gen.src), self.level(gen.tgt)) else {
            return Err(Error::Precondition(format!("{} touches the empty object", gen.label)));
        };
        Ok(match self.bihh.kind(g) {
            BihhGenerator::Layer(l) => {
                let (i, n) = (l.left.len(), l.left.len() + l.right.len());
                vec![if l.cell.gen == self.eta { Letter::D { n, i } } else { Letter::S { n, i } }]
            }
            BihhGenerator::Twist(t) => vec![Letter::TInv { n: t.f.len() + t.g.len() - 1 }; t.g.len()],
            BihhGenerator::TwistInverse(t) => vec![Letter::T { n: t.f.len() + t.g.len() - 1 }; t.g.len()],
        })
    }

    /// The paracyclic map of a word between nonempty objects.
    pub fn map_of(&self, w: &Word) -> Result<ParacyclicMap> {
        let src = self.level(w.src).ok_or_else(|| Error::Precondition("the word starts at the empty object".into()))?;
        let mut letters = Vec::new();
        for &g in &w.letters {
            letters.extend(self.generator_letters(g)?);
        }
        eval_letters(src, &letters)
    }

    /// The normal-form word over a map.
    pub fn section(&self, f: &ParacyclicMap) -> Result<Word> {
        self.image_word(f.n, &paracyclic::normal_letters(f))
    }

    /// A witness from `w` to the section of its map.
    pub fn word_derivation(&self, w: &Word) -> Result<Witness> {
        let p = self.bihh.presentation();
        let src = self.level(w.src).ok_or_else(|| Error::Precondition("the word starts at the empty object".into()))?;
        let mut proof = Witness::default();
        let mut letters: Vec<Letter> = Vec::new();
        for pos in (0..w.len()).rev() {
            let g = w.letters[pos];
            let ls = self.generator_letters(g)?;
            let at = self.level(p.generator(g).src).expect("nonempty");
            let to = self.image_word(at, &ls)?;
            let lemma = self.bihh.twist_equal(&p.single(g), &to).or_else(|| (to.letters == [g]).then(Witness::default));
            let lemma = lemma.ok_or_else(|| Error::Contract(format!("{} has no witness to its letters", p.generator(g).label)))?;
            proof.steps.extend(lemma.shifted(pos).steps);
            letters.splice(0..0, ls);
        }
        let proof = proof.then(&self.derivation(src, &letters)?);
        let target = self.section(&self.map_of(w)?)?;
        if !proof.proves(p, w, &target) {
            return Err(Error::Contract(format!("{} does not derive to its section", p.display_word(w))));
        }
        Ok(proof)
    }

    /// `[a] -> [mid]` by one relation, then the first letter of `mid` by another.
    fn two_steps(&self, lhs: &Word, mid: &Word, head_to: &Word, rhs: &Word) -> Option<Witness> {
        let p = self.bihh.presentation();
        let first = p.relation_step(lhs, mid)?;
        let head = p.word(mid.src, &mid.letters[..1]).ok()?;
        let second = p.relation_step(&head, head_to)?;
        let w = Witness { steps: vec![first, second] };
        w.proves(p, lhs, rhs).then_some(w)
    }
}

impl LetterCalculus for DeltaComparison {
    fn presentation(&self) -> &CatPresentation {
        self.bihh.presentation()
    }

    fn generator(&self, l: Letter) -> Option<GenId> {
        match l {
            Letter::D { n, i } => self.layer(self.eta, i, n - i),
            Letter::S { n, i } => self.layer(self.mu, i, n - i),
            Letter::T { n } => self.bihh.twist_inverse(&self.power(n), &self.power(1)),
            Letter::TInv { n } => self.bihh.twist(&self.power(n), &self.power(1)),
        }
    }

    fn object(&self, n: usize) -> Option<ObjId> {
        self.bihh.object(&self.power(n + 1))
    }

    fn primitive(&self, at: usize, lhs: &[Letter], rhs: &[Letter]) -> Option<Witness> {
        let p = self.bihh.presentation();
        let (l, r) = (self.image(at, lhs)?, self.image(at, rhs)?);
        if let Some(s) = p.relation_step(&l, &r) {
            return Some(Witness { steps: vec![s] });
        }
        // The wrap-around rules: naturality against the full prefix, then a unit or a cocycle.
        match *lhs {
            [Letter::D { n, i }, Letter::TInv { .. }] if i == n => {
                let unit = self.bihh.twist(&self.power(n), &self.power(0))?;
                let mid = p.word(l.src, &[unit, self.generator(Letter::D { n, i: 0 })?]).ok()?;
                self.two_steps(&l, &mid, &Word::empty(l.src), &r)
            }
            [Letter::S { n, i }, Letter::TInv { .. }] if i == n => {
                let c = self.bihh.twist(&self.power(n), &self.power(2))?;
                let mid = p.word(l.src, &[c, self.generator(Letter::S { n, i: 0 })?]).ok()?;
                let a = self.generator(Letter::TInv { n: n + 1 })?;
                self.two_steps(&l, &mid, &p.word(l.src, &[a, a]).ok()?, &r)
            }
            _ => None,
        }
    }
}

/// Relation instances up to `[relations_max]`, and the comparison with the
/// function model on `hom(n, m)` for `n, m <= hom_max` and t-power at most `k`.
pub fn verify_bdelta_structure(relations_max: usize, hom_max: usize, k: i64, budget: &SearchBudget) -> Result<StructureReport> {
    let mut checks = Vec::new();
    let big = DeltaComparison::new(relations_max, budget)?;
    let mut open = Vec::new();
    let rels: Vec<RelationInstance> = paracyclic::t_relations(relations_max).into_iter().chain(paracyclic::cosimplicial_relations(relations_max)).collect();
    for r in &rels {
        let model = eval_letters(r.src, &r.lhs).ok() == eval_letters(r.src, &r.rhs).ok();
        let replayed = big.relation_witness(r).is_ok();
        if !model || !replayed {
            open.push(format!("{}: model {model}, witness {replayed}", r.name));
        }
    }
    checks.push(Check::new("relation instances", open.is_empty(), format!("{} instances; {}", rels.len(), open.join("; "))));

    let c = DeltaComparison::new(hom_max, budget)?;
    let p = c.presentation();
    let (mut maps, mut missed) = (0, Vec::new());
    for n in 0..=hom_max {
        for m in 0..=hom_max {
            for f in ParacyclicMap::enumerate(n, m, k) {
                maps += 1;
                if !c.section(&f).and_then(|w| c.map_of(&w)).is_ok_and(|g| g == f) {
                    missed.push(f.to_string());
                }
            }
        }
    }
    missed.truncate(5);
    checks.push(Check::new("hom surjectivity", missed.is_empty(), format!("{maps} maps; {}", missed.join("; "))));

    let objects: Vec<ObjId> = (0..=hom_max).filter_map(|n| c.object(n)).collect();
    let mut open = Vec::new();
    let mut gens = 0;
    for g in 0..p.generators().len() as GenId {
        let gen = p.generator(g);
        if objects.contains(&gen.src) && objects.contains(&gen.tgt) {
            gens += 1;
            if let Err(e) = c.word_derivation(&p.single(g)) {
                open.push(e.to_string());
            }
        }
    }
    let letters = paracyclic::all_letters(hom_max);
    let mut rules = 0;
    for &a in &letters {
        for &b in letters.iter().filter(|b| b.source() == a.target()) {
            let Some(rhs) = paracyclic::rewrite_pair(a, b) else { continue };
            if rhs.iter().any(|&l| c.generator(l).is_none()) {
                continue;
            }
            rules += 1;
            if paracyclic::rule_witness(&c, a.source(), &[a, b], &rhs).is_none() {
                open.push(format!("{} {}", a.label(), b.label()));
            }
        }
    }
    let mut sampled = 0;
    for &s in &objects {
        for &t in &objects {
            for len in 1..=2 {
                for w in p.words_of_length(s, t, len, budget.max_enumeration)? {
                    sampled += 1;
                    if let Err(e) = c.word_derivation(&w) {
                        open.push(e.to_string());
                    }
                }
            }
        }
    }
    let total = open.len();
    open.truncate(5);
    checks.push(Check::new(
        "hom injectivity",
        total == 0,
        format!("{gens} generator lemmas, {rules} rule instances, {sampled} sampled derivations; {total} open {}", open.join("; ")),
    ));
    Ok(StructureReport { degree: hom_max, checks, notes: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paracyclic::{cosimplicial_relations, t_relations};

    fn cmp(max: usize) -> DeltaComparison {
        DeltaComparison::new(max, &SearchBudget::default()).unwrap()
    }

    #[test]
    fn letters_land_on_the_expected_objects() {
        let c = cmp(3);
        let p = c.presentation();
        for l in paracyclic::all_letters(3) {
            let g = p.generator(c.generator(l).unwrap());
            assert_eq!(g.src, c.object(l.source()).unwrap(), "{}", l.label());
            assert_eq!(g.tgt, c.object(l.target()).unwrap(), "{}", l.label());
        }
    }

    #[test]
    fn t_relations_have_witnesses() {
        let c = cmp(4);
        for r in t_relations(4) {
            c.relation_witness(&r).unwrap();
        }
    }

    #[test]
    fn cosimplicial_relations_have_witnesses() {
        let c = cmp(4);
        for r in cosimplicial_relations(4) {
            c.relation_witness(&r).unwrap();
        }
    }

    #[test]
    fn words_derive_to_their_sections() {
        let c = cmp(2);
        let p = c.presentation();
        let twist = p.generator_id("(x,x)").unwrap();
        let layer = c.generator(Letter::D { n: 1, i: 0 }).unwrap();
        let w = p.single(layer).then(&p.single(twist));
        let d = c.word_derivation(&w).unwrap();
        let f = c.map_of(&w).unwrap();
        assert_eq!(f, eval_letters(0, &[Letter::D { n: 1, i: 0 }, Letter::TInv { n: 1 }]).unwrap());
        assert!(d.proves(p, &w, &c.section(&f).unwrap()));
    }

    #[test]
    fn small_structure_passes() {
        let r = verify_bdelta_structure(3, 2, 2, &SearchBudget::default()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn initial_map_absorbs_the_zeroth_twist() {
        let c = cmp(2);
        let p = c.presentation();
        let i0 = c.initial_map();
        let t0 = p.single(c.generator(Letter::T { n: 0 }).unwrap());
        let v = p.equal(&i0.then(&t0), &i0, &SearchBudget::default()).unwrap();
        assert!(v.is_equal());
    }
}
