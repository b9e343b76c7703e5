//! Built-in 2-categories.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::present::Word;

use super::TwoCatPresentation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CatalogName {
    Terminal,
    BN,
    BNN,
    BDeltaPlus,
    Adj,
    AdjEq,
    AdjEnd,
    AdjEqEnd,
    Mon,
    CoMon,
    /// Direct sum of cyclic groups of the given orders.
    SigmaAb(Vec<u32>),
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::SigmaAb(orders) => {
                let o: Vec<String> = orders.iter().map(u32::to_string).collect();
                write!(f, "SigmaAb:{}", o.join(","))
            }
            other => write!(f, "{other:?}"),
        }
    }
}

impl FromStr for CatalogName {
    type Err = Error;

    /// Names are case-insensitive; `SigmaAb:2,3` names Z/2 + Z/3.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("sigmaab:") {
            let orders = rest
                .split(',')
                .map(|o| o.trim().parse::<u32>().ok().filter(|&n| n >= 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Lookup(format!("bad group orders in {s}")))?;
            return Ok(CatalogName::SigmaAb(orders));
        }
        Ok(match lower.as_str() {
            "terminal" => CatalogName::Terminal,
            "bn" => CatalogName::BN,
            "bnn" => CatalogName::BNN,
            "bdeltaplus" | "bdelta" => CatalogName::BDeltaPlus,
            "adj" => CatalogName::Adj,
            "adjeq" => CatalogName::AdjEq,
            "adjend" => CatalogName::AdjEnd,
            "adjeqend" => CatalogName::AdjEqEnd,
            "mon" => CatalogName::Mon,
            "comon" => CatalogName::CoMon,
            _ => return Err(Error::Lookup(format!("unknown builtin 2-category {s}"))),
        })
    }
}

fn one_object(name: &str) -> TwoCatPresentation {
    let mut b = TwoCatPresentation::new(name);
    b.add_zero_cell("*");
    b
}

/// One 1-cell `x` with `η: ∅ => x` and `μ: x.x => x`, associative and unital.
fn monoid(name: &str) -> Result<TwoCatPresentation> {
    let mut b = one_object(name);
    b.add_gen1("x", 0, 0)?;
    let (e, x, xx) = (Word::empty(0), b.path(0, &["x"])?, b.path(0, &["x", "x"])?);
    b.add_gen2("η", e, x.clone(), false)?;
    b.add_gen2("μ", xx, x.clone(), false)?;
    let xxx = b.path(0, &["x", "x", "x"])?;
    let l = b.term(&xxx, &[(&[], "μ", false, &["x"]), (&[], "μ", false, &[])])?;
    let r = b.term(&xxx, &[(&["x"], "μ", false, &[]), (&[], "μ", false, &[])])?;
    b.add_rel2(l, r)?;
    for (lw, rw) in [(&[][..], &["x"][..]), (&["x"][..], &[][..])] {
        let t = b.term(&x, &[(lw, "η", false, rw), (&[], "μ", false, &[])])?;
        b.add_rel2(t, b.identity_term(&x))?;
    }
    Ok(b)
}

fn comonoid() -> Result<TwoCatPresentation> {
    let mut b = one_object("CoMon");
    b.add_gen1("x", 0, 0)?;
    let (e, x, xx) = (Word::empty(0), b.path(0, &["x"])?, b.path(0, &["x", "x"])?);
    b.add_gen2("ε", x.clone(), e, false)?;
    b.add_gen2("δ", x.clone(), xx, false)?;
    let l = b.term(&x, &[(&[], "δ", false, &[]), (&[], "δ", false, &["x"])])?;
    let r = b.term(&x, &[(&[], "δ", false, &[]), (&["x"], "δ", false, &[])])?;
    b.add_rel2(l, r)?;
    for (lw, rw) in [(&[][..], &["x"][..]), (&["x"][..], &[][..])] {
        let t = b.term(&x, &[(&[], "δ", false, &[]), (lw, "ε", false, rw)])?;
        b.add_rel2(t, b.identity_term(&x))?;
    }
    Ok(b)
}

/// `f: 0 -> 1`, `g: 1 -> 0`, `u: ∅0 => f.g`, `c: g.f => ∅1` and both triangles.
fn adjunction(name: &str, invertible: bool, endo: bool) -> Result<TwoCatPresentation> {
    let mut b = TwoCatPresentation::new(name);
    b.add_zero_cell("0");
    b.add_zero_cell("1");
    b.add_gen1("f", 0, 1)?;
    b.add_gen1("g", 1, 0)?;
    b.add_gen2("u", Word::empty(0), b.path(0, &["f", "g"])?, invertible)?;
    b.add_gen2("c", b.path(1, &["g", "f"])?, Word::empty(1), invertible)?;
    let f = b.path(0, &["f"])?;
    let t = b.term(&f, &[(&[], "u", false, &["f"]), (&["f"], "c", false, &[])])?;
    b.add_rel2(t, b.identity_term(&f))?;
    let g = b.path(1, &["g"])?;
    let t = b.term(&g, &[(&["g"], "u", false, &[]), (&[], "c", false, &["g"])])?;
    b.add_rel2(t, b.identity_term(&g))?;
    if endo {
        b.add_gen1("q", 0, 0)?;
    }
    Ok(b)
}

pub fn catalog(name: &CatalogName) -> Result<TwoCatPresentation> {
    match name {
        CatalogName::Terminal => Ok(one_object("Terminal")),
        CatalogName::BN => {
            let mut b = one_object("BN");
            b.add_gen1("x", 0, 0)?;
            Ok(b)
        }
        CatalogName::BNN => {
            let mut b = one_object("BNN");
            b.add_gen1("x", 0, 0)?;
            b.add_gen1("y", 0, 0)?;
            Ok(b)
        }
        CatalogName::BDeltaPlus => monoid("BDeltaPlus"),
        CatalogName::Mon => monoid("Mon"),
        CatalogName::CoMon => comonoid(),
        CatalogName::Adj => adjunction("Adj", false, false),
        CatalogName::AdjEq => adjunction("AdjEq", true, false),
        CatalogName::AdjEnd => adjunction("AdjEnd", false, true),
        CatalogName::AdjEqEnd => adjunction("AdjEqEnd", true, true),
        CatalogName::SigmaAb(orders) => {
            if orders.is_empty() || orders.contains(&0) {
                return Err(Error::Lookup("SigmaAb needs positive cyclic orders".into()));
            }
            let mut b = one_object(&name.to_string());
            let e = Word::empty(0);
            for (i, &n) in orders.iter().enumerate() {
                let z = format!("z{i}");
                let g = b.add_gen2(&z, e.clone(), e.clone(), false)?;
                let layer = b.cell_term(super::Cell { gen: g, inverse: false })?;
                let mut t = b.identity_term(&e);
                for _ in 0..n {
                    t = b.compose_v(&t, &layer)?;
                }
                b.add_rel2(t, b.identity_term(&e))?;
            }
            Ok(b)
        }
    }
}

/// Small strict 2-categories with finite truncations, as `(name, B, length bound)`.
pub fn corpus() -> Vec<(CatalogName, TwoCatPresentation, usize)> {
    [
        (CatalogName::Terminal, 0),
        (CatalogName::SigmaAb(vec![2]), 0),
        (CatalogName::Adj, 2),
        (CatalogName::BN, 3),
    ]
    .into_iter()
    .map(|(n, len)| {
        let b = catalog(&n).expect("builtin");
        (n, b, len)
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_shape() {
        let b = catalog(&CatalogName::Terminal).unwrap();
        assert_eq!((b.zero_cells().len(), b.gen1().len(), b.gen2().len()), (1, 0, 0));
    }

    #[test]
    fn adj_shape() {
        let b = catalog(&CatalogName::Adj).unwrap();
        assert_eq!((b.gen2().len(), b.rel2().len()), (2, 2));
        assert!(b.gen2().iter().all(|g| !g.invertible));
        let e = catalog(&CatalogName::AdjEq).unwrap();
        assert!(e.gen2().iter().all(|g| g.invertible));
        let q = catalog(&CatalogName::AdjEnd).unwrap();
        assert_eq!(q.gen1_id("q").map(|i| (q.gen1()[i as usize].src, q.gen1()[i as usize].tgt)), Some((0, 0)));
    }

    #[test]
    fn names_parse() {
        for n in ["Terminal", "bn", "BNN", "BDeltaPlus", "adj", "AdjEq", "AdjEnd", "AdjEqEnd", "Mon", "CoMon"] {
            let c: CatalogName = n.parse().unwrap();
            assert!(catalog(&c).is_ok());
        }
        assert_eq!("SigmaAb:2,3".parse::<CatalogName>().unwrap(), CatalogName::SigmaAb(vec![2, 3]));
        assert!(matches!("Nope".parse::<CatalogName>(), Err(Error::Lookup(_))));
        assert_eq!(CatalogName::SigmaAb(vec![2]).to_string().parse::<CatalogName>().unwrap(), CatalogName::SigmaAb(vec![2]));
    }
}
