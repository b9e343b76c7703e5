//! Exact normal forms for biHH(B) when B has no 2-cells.
//!
//! Every generator is a twist, so a morphism out of `W` is determined by its
//! winding: the total rotation `Σ ±|G|`. The normal form of winding `k` is
//! `|k|` single-letter rotations `(W[..n-1], W[n-1])`, or their inverses.
//! Derivations split twists with the cocycle relation, then cancel.

use std::collections::HashMap;

use crate::present::{CatPresentation, ExactNormalizer, GenId, ObjId, RewriteStep, Witness, Word};

use super::RelationIndex;

#[derive(Clone, Copy)]
struct TwistInfo {
    obj: ObjId,
    split: usize,
    inverse: bool,
    /// The forward twist this letter is or inverts.
    forward: GenId,
}

pub(crate) struct Winding {
    len: Vec<usize>,
    info: Vec<Option<TwistInfo>>,
    inverse_of: HashMap<GenId, GenId>,
    split: HashMap<(ObjId, usize), GenId>,
    rel: RelationIndex,
}

impl Winding {
    pub fn new(p: &CatPresentation, objects: &[Word], rel: RelationIndex, split: &HashMap<(ObjId, usize), GenId>) -> Self {
        let mut info = vec![None; p.generators().len()];
        let mut inverse_of = HashMap::new();
        for (&(obj, i), &t) in split {
            let ti = p.generator_id(&format!("{}^-1", p.generator(t).label)).expect("inverse twist");
            info[t as usize] = Some(TwistInfo { obj, split: i, inverse: false, forward: t });
            info[ti as usize] = Some(TwistInfo { obj, split: i, inverse: true, forward: t });
            inverse_of.insert(t, ti);
            inverse_of.insert(ti, t);
        }
        Winding { len: objects.iter().map(Word::len).collect(), info, inverse_of, split: split.clone(), rel }
    }

    pub fn twist_only(&self, w: &Word) -> bool {
        w.letters.iter().all(|&g| self.info[g as usize].is_some())
    }

    fn winding(&self, w: &Word) -> i64 {
        w.letters
            .iter()
            .map(|&g| {
                let t = self.info[g as usize].expect("twist letter");
                let moved = (self.len[t.obj as usize] - t.split) as i64;
                if t.inverse {
                    -moved
                } else {
                    moved
                }
            })
            .sum()
    }

    fn canonical(&self, p: &CatPresentation, src: ObjId, k: i64) -> Word {
        let n = self.len[src as usize];
        let mut letters = Vec::new();
        let mut at = src;
        if n > 0 {
            for _ in 0..k.unsigned_abs() {
                let g = if k > 0 {
                    self.split[&(at, n - 1)]
                } else {
                    // The rotation landing on `at` is a twist out of `at` rotated by one.
                    let back = self.split[&(at, 1)];
                    let from = p.generator(back).tgt;
                    self.inverse_of[&self.split[&(from, n - 1)]]
                };
                letters.push(g);
                at = p.generator(g).tgt;
            }
        }
        Word { src, tgt: at, letters }
    }
}

struct Deriv<'a> {
    p: &'a CatPresentation,
    d: &'a Winding,
    src: ObjId,
    cur: Vec<GenId>,
    steps: Vec<RewriteStep>,
}

impl Deriv<'_> {
    fn step(&mut self, pos: usize, relation: usize, forward: bool) -> Option<()> {
        let s = RewriteStep { pos, relation, forward };
        self.cur = crate::present::apply_step(self.p, self.src, &self.cur, s)?;
        self.steps.push(s);
        Some(())
    }

    /// Rewrites the twist at `pos` into single rotations of one sign; returns their count.
    fn expand(&mut self, pos: usize) -> Option<usize> {
        let g = self.cur[pos];
        let t = self.d.info[g as usize]?;
        let n = self.d.len[t.obj as usize];
        let moved = n - t.split;
        if moved == 1 {
            return Some(1);
        }
        if !t.inverse {
            if moved == 0 {
                self.step(pos, self.d.rel.unit[&t.obj], true)?;
                return Some(0);
            }
            self.step(pos, self.d.rel.cocycle[&(t.obj, t.split, n - 1)], true)?;
            return Some(1 + self.expand(pos + 1)?);
        }
        let fwd = t.forward;
        if moved == 0 {
            self.step(pos + 1, self.d.rel.unit[&t.obj], false)?;
            self.step(pos, self.d.rel.cancel_bwd[&fwd], true)?;
            return Some(0);
        }
        let mut scratch = Deriv { p: self.p, d: self.d, src: t.obj, cur: vec![fwd], steps: Vec::new() };
        let m = scratch.expand(0)?;
        for k in 0..m {
            self.step(pos + 1 + k, self.d.rel.cancel_fwd[&scratch.cur[k]], false)?;
        }
        for s in scratch.steps.iter().rev() {
            self.step(s.pos + pos + 1, s.relation, !s.forward)?;
        }
        self.step(pos, self.d.rel.cancel_bwd[&fwd], true)?;
        Some(m)
    }

    fn reduce(&mut self) -> Option<()> {
        let mut i = 0;
        while i + 1 < self.cur.len() {
            let (a, b) = (self.d.info[self.cur[i] as usize]?, self.d.info[self.cur[i + 1] as usize]?);
            if a.inverse == b.inverse {
                i += 1;
                continue;
            }
            if self.d.inverse_of[&self.cur[i]] != self.cur[i + 1] {
                return None;
            }
            let rel = if a.inverse { self.d.rel.cancel_bwd[&b.forward] } else { self.d.rel.cancel_fwd[&a.forward] };
            self.step(i, rel, true)?;
            i = i.saturating_sub(1);
        }
        Some(())
    }
}

impl ExactNormalizer for Winding {
    fn name(&self) -> &str {
        "winding"
    }

    fn normal_form(&self, p: &CatPresentation, w: &Word) -> Word {
        self.canonical(p, w.src, self.winding(w))
    }

    fn derivation(&self, p: &CatPresentation, w: &Word) -> Option<Witness> {
        let mut dv = Deriv { p, d: self, src: w.src, cur: w.letters.clone(), steps: Vec::new() };
        let mut pos = 0;
        while pos < dv.cur.len() {
            pos += dv.expand(pos)?;
        }
        dv.reduce()?;
        let out = Word { src: w.src, tgt: w.tgt, letters: dv.cur };
        if out != self.normal_form(p, w) {
            return None;
        }
        Some(Witness { steps: dv.steps })
    }
}
