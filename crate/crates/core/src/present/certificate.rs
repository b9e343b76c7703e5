//! Verdicts, certificates and the decidable models behind `Distinct`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{CatPresentation, GenId, Witness, Word};

/// Statistics of a bounded search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub states: usize,
    pub max_length_seen: usize,
    pub length_truncated: bool,
    pub step_truncated: bool,
}

impl Coverage {
    /// True when the search visited every word reachable from its start.
    pub fn exhaustive(&self) -> bool {
        !self.length_truncated && !self.step_truncated
    }
}

/// Evidence that two parallel words name different morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// The presentation has no relations and the words differ.
    FreeWords,
    /// A relation-respecting functor into a decidable model separates the words.
    Model { model: String, left: String, right: String },
    /// An integer weight on generators, constant on every relation, separates the words.
    Weight { weights: Vec<i64>, left: i64, right: i64 },
    /// The exact normalizer assigns different normal forms.
    Normalizer { name: String, left: Vec<GenId>, right: Vec<GenId> },
    /// The whole rewrite class of the left word is finite, was enumerated, and misses the right word.
    ClosedClass { size: usize },
    /// Exact enumeration as a finite category sends the words to different elements.
    Finite { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqualityVerdict {
    Equal(Witness),
    Distinct(Certificate),
    Unknown(Coverage),
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal(_))
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, EqualityVerdict::Distinct(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalizeOutcome {
    Normal(Word),
    Unknown { best: Word, coverage: Coverage },
}

impl NormalizeOutcome {
    pub fn word(&self) -> Option<&Word> {
        match self {
            NormalizeOutcome::Normal(w) => Some(w),
            NormalizeOutcome::Unknown { .. } => None,
        }
    }
}

/// An exact normal-form procedure for a specific presentation.
///
/// Two words are equal in the presented category iff their normal forms
/// coincide.
pub trait ExactNormalizer: Send + Sync {
    fn name(&self) -> &str;
    fn normal_form(&self, p: &CatPresentation, w: &Word) -> Word;
    /// A rewrite chain from `w` to its normal form, if the plug-in can produce one.
    fn derivation(&self, _p: &CatPresentation, _w: &Word) -> Option<Witness> {
        None
    }
}

/// A functor into a category with decidable equality.
///
/// `evaluate` returns `None` outside the model's domain. Attaching a model
/// checks it against every relation.
pub trait SeparatingModel: Send + Sync {
    fn name(&self) -> &str;
    fn evaluate(&self, p: &CatPresentation, w: &Word) -> Option<String>;
}

/// An integer weight on generators; the weight of a word is the sum over letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightInvariant {
    pub weights: Vec<i64>,
}

impl WeightInvariant {
    pub fn value(&self, w: &Word) -> i64 {
        w.letters.iter().map(|&g| self.weights[g as usize]).sum()
    }

    pub fn respects(&self, p: &CatPresentation) -> bool {
        p.relations().iter().all(|(l, r)| self.value(l) == self.value(r))
    }
}

const MAX_INVARIANT_GENERATORS: usize = 4000;

/// A basis of integer weights constant on every relation.
///
/// Computed by sparse fraction-free elimination in `i128`; gives up (returns
/// an empty list) on overflow or oversized input. Every returned weight is
/// re-verified against all relations.
pub fn integer_invariants(p: &CatPresentation) -> Vec<WeightInvariant> {
    let n = p.generators().len();
    if n == 0 || n > MAX_INVARIANT_GENERATORS {
        return Vec::new();
    }
    let mut rows: Vec<Vec<(usize, i128)>> = Vec::new();
    for (l, r) in p.relations() {
        let mut m: BTreeMap<usize, i128> = BTreeMap::new();
        for &g in &l.letters {
            *m.entry(g as usize).or_default() += 1;
        }
        for &g in &r.letters {
            *m.entry(g as usize).or_default() -= 1;
        }
        let row: Vec<(usize, i128)> = m.into_iter().filter(|&(_, v)| v != 0).collect();
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows.sort();
    rows.dedup();
    let Some(basis) = nullspace(n, &rows) else { return Vec::new() };
    basis
        .into_iter()
        .filter_map(|v| {
            let weights: Option<Vec<i64>> = v.into_iter().map(|x| i64::try_from(x).ok()).collect();
            let inv = WeightInvariant { weights: weights? };
            inv.respects(p).then_some(inv)
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn normalize_row(row: &mut [(usize, i128)]) {
    let g = row.iter().fold(0, |g, &(_, v)| gcd(g, v));
    if g > 1 {
        for e in row.iter_mut() {
            e.1 /= g;
        }
    }
    if row.first().is_some_and(|e| e.1 < 0) {
        for e in row.iter_mut() {
            e.1 = -e.1;
        }
    }
}

/// `a*row - b*piv` where `a, b` cancel `piv`'s leading column in `row`.
fn eliminate(row: &[(usize, i128)], piv: &[(usize, i128)], col: usize) -> Option<Vec<(usize, i128)>> {
    let rv = row.iter().find(|e| e.0 == col)?.1;
    let pv = piv[0].1;
    let g = gcd(rv, pv);
    let (a, b) = (pv / g, rv / g);
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let (c, v) = match (row.get(i), piv.get(j)) {
            (Some(&(ci, vi)), Some(&(cj, vj))) if ci == cj => {
                i += 1;
                j += 1;
                (ci, a.checked_mul(vi)?.checked_sub(b.checked_mul(vj)?)?)
            }
            (Some(&(ci, vi)), Some(&(cj, _))) if ci < cj => {
                i += 1;
                (ci, a.checked_mul(vi)?)
            }
            (Some(_), Some(&(cj, vj))) | (None, Some(&(cj, vj))) => {
                j += 1;
                (cj, b.checked_mul(vj)?.checked_neg()?)
            }
            (Some(&(ci, vi)), None) => {
                i += 1;
                (ci, a.checked_mul(vi)?)
            }
            (None, None) => unreachable!(),
        };
        if v != 0 {
            out.push((c, v));
        }
    }
    normalize_row(&mut out);
    Some(out)
}

fn nullspace(n: usize, rows: &[Vec<(usize, i128)>]) -> Option<Vec<Vec<i128>>> {
    let mut pivots: Vec<Vec<(usize, i128)>> = Vec::new();
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    for r in rows {
        let mut row = r.clone();
        loop {
            let hit = row.iter().find(|e| pivot_of.contains_key(&e.0)).map(|e| e.0);
            match hit {
                Some(c) => row = eliminate(&row, &pivots[pivot_of[&c]], c)?,
                None => break,
            }
        }
        if row.is_empty() {
            continue;
        }
        normalize_row(&mut row);
        pivot_of.insert(row[0].0, pivots.len());
        pivots.push(row);
    }
    for j in (0..pivots.len()).rev() {
        loop {
            let hit = pivots[j].iter().skip(1).find(|e| pivot_of.contains_key(&e.0)).map(|e| e.0);
            match hit {
                Some(c) => {
                    let k = pivot_of[&c];
                    let reduced = eliminate(&pivots[j], &pivots[k], c)?;
                    pivots[j] = reduced;
                }
                None => break,
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_of.contains_key(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut lcm: i128 = 1;
        for row in &pivots {
            if row.iter().any(|e| e.0 == f) {
                let a = row[0].1;
                lcm = (lcm / gcd(lcm, a)).checked_mul(a)?;
            }
        }
        let mut v = vec![0i128; n];
        v[f] = lcm;
        for row in &pivots {
            if let Some(&(_, c)) = row.iter().find(|e| e.0 == f) {
                v[row[0].0] = (-c).checked_mul(lcm / row[0].1)?;
            }
        }
        let g = v.iter().fold(0, |g, &x| gcd(g, x));
        if g > 1 {
            v.iter_mut().for_each(|x| *x /= g);
        }
        basis.push(v);
    }
    Some(basis)
}

#[cfg(test)]
mod tests {
    use super::super::PresentationBuilder;
    use super::*;

    #[test]
    fn invariants_of_an_involution_kill_the_generator() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let a = b.generator("a", x, x).unwrap();
        let c = b.generator("c", x, x).unwrap();
        let aa = b.word(x, &[a, a]).unwrap();
        b.relation(aa, Word::empty(x)).unwrap();
        let p = b.build();
        let inv = integer_invariants(&p);
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].weights[a as usize], 0);
        assert_ne!(inv[0].weights[c as usize], 0);
    }

    #[test]
    fn invariants_satisfy_mixed_relations() {
        let mut b = PresentationBuilder::new();
        let x = b.object("x");
        let g: Vec<GenId> = (0..4).map(|i| b.generator(&format!("g{i}"), x, x).unwrap()).collect();
        let l = b.word(x, &[g[0], g[1]]).unwrap();
        let r = b.word(x, &[g[2], g[2], g[2]]).unwrap();
        b.relation(l, r).unwrap();
        let l = b.word(x, &[g[1], g[1]]).unwrap();
        let r = b.word(x, &[g[3]]).unwrap();
        b.relation(l, r).unwrap();
        let p = b.build();
        let inv = integer_invariants(&p);
        assert_eq!(inv.len(), 2);
        assert!(inv.iter().all(|w| w.respects(&p)));
    }
}
