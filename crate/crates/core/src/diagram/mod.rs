//! Oriented pointed Heegaard diagrams as combinatorial data.
//!
//! Upper circle `u` is an edge `c⁻ → c⁺` of the graph whose vertices are the
//! components of the surface cut along the upper circles. Words are read left
//! to right; the letter `(u, +1)` runs `c⁻ → c⁺` and `(u, −1)` runs back.

mod builders;
mod iso;
pub mod moves;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::xmod::Violation;

pub use iso::{find_isomorphism, is_isomorphic, Isomorphism, TautComparison};
pub use moves::{apply_move, MoveDescriptor};

pub type Id = String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("unknown circle {0:?}")]
    UnknownCircle(String),
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("ill-typed word: {0}")]
    IllTypedWord(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("incompatible merge sites: {0}")]
    IncompatibleMergeSites(String),
    #[error("move {mv} not applicable: {reason}")]
    PreconditionViolated { mv: String, reason: String },
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
}

/// A letter `u^{±1}` of the free groupoid on the upper circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub Id, pub i8);

impl Letter {
    pub fn new(u: impl Into<Id>, exp: i8) -> Self {
        Letter(u.into(), exp)
    }

    pub fn circle(&self) -> &str {
        &self.0
    }

    pub fn exp(&self) -> i8 {
        self.1
    }

    pub fn inverse(&self) -> Letter {
        Letter(self.0.clone(), -self.1)
    }
}

/// A word in the free groupoid; typing is checked against a diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters<S: Into<Id>>(letters: impl IntoIterator<Item = (S, i8)>) -> Self {
        Word(
            letters
                .into_iter()
                .map(|(u, e)| Letter(u.into(), e))
                .collect(),
        )
    }

    /// `u^k` as a word.
    pub fn power(u: &str, k: i64) -> Self {
        let e = if k < 0 { -1 } else { 1 };
        Word((0..k.unsigned_abs()).map(|_| Letter::new(u, e)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        Word(v)
    }

    pub fn pow(&self, eps: i8) -> Word {
        if eps >= 0 {
            self.clone()
        } else {
            self.inverse()
        }
    }

    /// Free reduction: cancels adjacent `u^ε u^{−ε}` pairs.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            match out.last() {
                Some(last) if last.0 == l.0 && last.1 == -l.1 => {
                    out.pop();
                }
                _ => out.push(l.clone()),
            }
        }
        Word(out)
    }

    /// Replaces every letter by the image of its circle (inverted for `−1`).
    pub fn substitute(&self, f: impl Fn(&str) -> Option<Word>) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            match f(&l.0) {
                Some(w) => out.extend(w.pow(l.1).0),
                None => out.push(l.clone()),
            }
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.1 == 1 {
                write!(f, "{}", l.0)?;
            } else {
                write!(f, "{}^{}", l.0, l.1)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperPoint {
    pub id: Id,
    pub lower: Id,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperCircle {
    pub id: Id,
    pub cminus: Id,
    pub cplus: Id,
    /// Intersection points from the upper basepoint along the orientation.
    pub points: Vec<UpperPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerCircle {
    pub id: Id,
    pub base_component: Id,
    /// Intersection point ids from the basepoint along the orientation.
    pub points: Vec<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautFactor {
    pub r: Word,
    pub lower: Id,
    pub eps: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautIdentity {
    pub region: Id,
    pub base_component: Id,
    pub factors: Vec<TautFactor>,
}

fn format_one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegaardDiagram {
    #[serde(default = "format_one")]
    pub format: u32,
    pub genus: usize,
    pub components: Vec<Id>,
    pub uppers: Vec<UpperCircle>,
    pub lowers: Vec<LowerCircle>,
    pub tauts: Vec<TautIdentity>,
}

/// The namespaces of diagram ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdKind {
    Component,
    Upper,
    Lower,
    Point,
    Region,
}

/// Where an intersection point sits.
#[derive(Clone, Debug)]
pub struct PointInfo {
    pub upper: usize,
    pub upper_pos: usize,
    pub lower: usize,
    pub lower_pos: usize,
    pub sign: i8,
}

impl HeegaardDiagram {
    pub fn upper(&self, id: &str) -> Option<&UpperCircle> {
        self.uppers.iter().find(|u| u.id == id)
    }

    pub fn lower(&self, id: &str) -> Option<&LowerCircle> {
        self.lowers.iter().find(|l| l.id == id)
    }

    pub fn upper_index(&self, id: &str) -> Option<usize> {
        self.uppers.iter().position(|u| u.id == id)
    }

    pub fn lower_index(&self, id: &str) -> Option<usize> {
        self.lowers.iter().position(|l| l.id == id)
    }

    pub fn point_count(&self) -> usize {
        self.uppers.iter().map(|u| u.points.len()).sum()
    }

    /// Locates every point in both circle lists. Fails on inconsistent data.
    pub fn points(&self) -> Result<HashMap<Id, PointInfo>, DiagramError> {
        let lower_idx: HashMap<&str, usize> = self
            .lowers
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.as_str(), i))
            .collect();
        let mut lower_pos: HashMap<&str, (usize, usize)> = HashMap::new();
        for (li, l) in self.lowers.iter().enumerate() {
            for (k, p) in l.points.iter().enumerate() {
                if lower_pos.insert(p.as_str(), (li, k)).is_some() {
                    return Err(DiagramError::BadParameters(format!(
                        "point {p} repeated on lowers"
                    )));
                }
            }
        }
        let mut out = HashMap::new();
        for (ui, u) in self.uppers.iter().enumerate() {
            for (k, p) in u.points.iter().enumerate() {
                let li = *lower_idx
                    .get(p.lower.as_str())
                    .ok_or_else(|| DiagramError::UnknownCircle(p.lower.clone()))?;
                let &(pl, ppos) = lower_pos
                    .get(p.id.as_str())
                    .ok_or_else(|| DiagramError::UnknownId(p.id.clone()))?;
                if pl != li {
                    return Err(DiagramError::BadParameters(format!(
                        "point {} claims lower {} but lies on {}",
                        p.id, p.lower, self.lowers[pl].id
                    )));
                }
                let info = PointInfo {
                    upper: ui,
                    upper_pos: k,
                    lower: li,
                    lower_pos: ppos,
                    sign: p.sign,
                };
                if out.insert(p.id.clone(), info).is_some() {
                    return Err(DiagramError::BadParameters(format!(
                        "point {} repeated on uppers",
                        p.id
                    )));
                }
            }
        }
        if out.len() != lower_pos.len() {
            let missing = lower_pos.keys().find(|p| !out.contains_key(**p)).unwrap();
            return Err(DiagramError::BadParameters(format!(
                "point {missing} is on no upper circle"
            )));
        }
        Ok(out)
    }

    /// `(source, target)` of a letter.
    pub fn letter_ends(&self, l: &Letter) -> Result<(&str, &str), DiagramError> {
        let u = self
            .upper(&l.0)
            .ok_or_else(|| DiagramError::UnknownCircle(l.0.clone()))?;
        match l.1 {
            1 => Ok((&u.cminus, &u.cplus)),
            -1 => Ok((&u.cplus, &u.cminus)),
            e => Err(DiagramError::IllTypedWord(format!(
                "exponent {e} on {}",
                l.0
            ))),
        }
    }

    /// The component reached by reading `w` from `from`.
    pub fn word_target(&self, from: &str, w: &Word) -> Result<Id, DiagramError> {
        let mut at = from.to_string();
        for l in w.letters() {
            let (s, t) = self.letter_ends(l)?;
            if s != at {
                return Err(DiagramError::IllTypedWord(format!(
                    "letter {}^{} starts at {s}, word is at {at}",
                    l.0, l.1
                )));
            }
            at = t.to_string();
        }
        Ok(at)
    }

    /// The word read along lower circle `l` from its basepoint.
    pub fn omega(&self, l: &str) -> Result<Word, DiagramError> {
        let lower = self
            .lower(l)
            .ok_or_else(|| DiagramError::UnknownCircle(l.to_string()))?;
        let owner: HashMap<&str, (&str, i8)> = self
            .uppers
            .iter()
            .flat_map(|u| {
                u.points
                    .iter()
                    .map(move |p| (p.id.as_str(), (u.id.as_str(), p.sign)))
            })
            .collect();
        lower
            .points
            .iter()
            .map(|p| {
                owner
                    .get(p.as_str())
                    .map(|&(u, s)| Letter::new(u, s))
                    .ok_or_else(|| DiagramError::UnknownId(p.clone()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// The free-groupoid boundary of a taut identity, unreduced.
    pub fn taut_boundary(&self, t: &TautIdentity) -> Result<Word, DiagramError> {
        let mut w = Word::empty();
        for f in &t.factors {
            let om = self.omega(&f.lower)?;
            w = w.concat(&f.r).concat(&om.pow(f.eps)).concat(&f.r.inverse());
        }
        Ok(w)
    }

    /// All violated structural invariants; empty iff the diagram is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.format != 1 {
            out.push(Violation::new(
                "format",
                format!("unsupported format {}", self.format),
            ));
        }
        let dup = |name: &str, ids: Vec<&str>, out: &mut Vec<Violation>| {
            let mut seen = BTreeSet::new();
            for i in ids {
                if !seen.insert(i) {
                    out.push(Violation::new(
                        "duplicate-id",
                        format!("{name} {i} repeated"),
                    ));
                }
            }
        };
        dup(
            "component",
            self.components.iter().map(|s| s.as_str()).collect(),
            &mut out,
        );
        dup(
            "upper",
            self.uppers.iter().map(|s| s.id.as_str()).collect(),
            &mut out,
        );
        dup(
            "lower",
            self.lowers.iter().map(|s| s.id.as_str()).collect(),
            &mut out,
        );
        dup(
            "region",
            self.tauts.iter().map(|s| s.region.as_str()).collect(),
            &mut out,
        );
        for u in &self.uppers {
            if self.lower(&u.id).is_some() {
                out.push(Violation::new(
                    "duplicate-id",
                    format!("{} names both an upper and a lower", u.id),
                ));
            }
        }
        let comps: BTreeSet<&str> = self.components.iter().map(|s| s.as_str()).collect();
        let known = |c: &str, what: String, out: &mut Vec<Violation>| {
            if !comps.contains(c) {
                out.push(Violation::new(
                    "unknown-component",
                    format!("{what} refers to {c}"),
                ));
            }
        };
        for u in &self.uppers {
            known(&u.cminus, format!("upper {} (c-)", u.id), &mut out);
            known(&u.cplus, format!("upper {} (c+)", u.id), &mut out);
            for p in &u.points {
                if p.sign != 1 && p.sign != -1 {
                    out.push(Violation::new(
                        "sign",
                        format!("point {} has sign {}", p.id, p.sign),
                    ));
                }
            }
        }
        for l in &self.lowers {
            known(&l.base_component, format!("lower {}", l.id), &mut out);
        }
        for t in &self.tauts {
            known(&t.base_component, format!("region {}", t.region), &mut out);
            for f in &t.factors {
                if f.eps != 1 && f.eps != -1 {
                    out.push(Violation::new(
                        "sign",
                        format!("region {} has eps {}", t.region, f.eps),
                    ));
                }
                if self.lower(&f.lower).is_none() {
                    out.push(Violation::new(
                        "unknown-circle",
                        format!("region {} names lower {}", t.region, f.lower),
                    ));
                }
            }
        }
        if let Err(e) = self.points() {
            out.push(Violation::new("point-multiset", e.to_string()));
        }
        let g = self.genus as i64;
        let expect_c = 1 + self.uppers.len() as i64 - g;
        if self.components.len() as i64 != expect_c {
            out.push(Violation::new(
                "euler-components",
                format!(
                    "{} components, expected 1 + |upper| - genus = {expect_c}",
                    self.components.len()
                ),
            ));
        }
        let expect_t = 1 + self.lowers.len() as i64 - g;
        if self.tauts.len() as i64 != expect_t {
            out.push(Violation::new(
                "euler-tauts",
                format!(
                    "{} taut identities, expected 1 + |lower| - genus = {expect_t}",
                    self.tauts.len()
                ),
            ));
        }
        if !out.is_empty() {
            return out;
        }

        let idx: HashMap<&str, usize> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let mut uf = UnionFind::<usize>::new(self.components.len());
        for u in &self.uppers {
            uf.union(idx[u.cminus.as_str()], idx[u.cplus.as_str()]);
        }
        if (0..self.components.len()).any(|i| !uf.equiv(0, i)) {
            out.push(Violation::new(
                "graph-connected",
                "the upper-circle graph is disconnected",
            ));
        }

        let mut omegas = BTreeMap::new();
        for l in &self.lowers {
            let w = self.omega(&l.id).expect("points checked");
            match self.word_target(&l.base_component, &w) {
                Ok(t) if t == l.base_component => {}
                Ok(t) => out.push(Violation::new(
                    "omega-typing",
                    format!("omega({}) runs from {} to {t}", l.id, l.base_component),
                )),
                Err(e) => out.push(Violation::new(
                    "omega-typing",
                    format!("omega({}): {e}", l.id),
                )),
            }
            omegas.insert(l.id.as_str(), w);
        }
        if !out.is_empty() {
            return out;
        }
        for t in &self.tauts {
            let mut typed = true;
            for (k, f) in t.factors.iter().enumerate() {
                let cl = &self.lower(&f.lower).unwrap().base_component;
                match self.word_target(&t.base_component, &f.r) {
                    Ok(end) if &end == cl => {}
                    Ok(end) => {
                        typed = false;
                        out.push(Violation::new(
                            "taut-typing",
                            format!(
                                "region {} factor {k}: r ends at {end}, lower based at {cl}",
                                t.region
                            ),
                        ))
                    }
                    Err(e) => {
                        typed = false;
                        out.push(Violation::new(
                            "taut-typing",
                            format!("region {} factor {k}: {e}", t.region),
                        ))
                    }
                }
            }
            if typed {
                let b = self.taut_boundary(t).unwrap().reduce();
                if !b.is_empty() {
                    out.push(Violation::new(
                        "boundary-triviality",
                        format!("region {}: boundary reduces to {b}", t.region),
                    ));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Every id in use, across all namespaces.
    pub fn all_ids(&self) -> BTreeSet<Id> {
        let mut s: BTreeSet<Id> = self.components.iter().cloned().collect();
        for u in &self.uppers {
            s.insert(u.id.clone());
            s.extend(u.points.iter().map(|p| p.id.clone()));
        }
        s.extend(self.lowers.iter().map(|l| l.id.clone()));
        s.extend(self.tauts.iter().map(|t| t.region.clone()));
        s
    }

    /// `prefix` followed by the smallest positive integer giving an unused id.
    pub fn fresh_id(&self, prefix: &str) -> Id {
        let used = self.all_ids();
        (1..)
            .map(|k| format!("{prefix}{k}"))
            .find(|c| !used.contains(c))
            .unwrap()
    }

    /// Applies `f` to every id, told which namespace the id belongs to.
    pub fn rename_all(&self, f: &dyn Fn(IdKind, &str) -> Id) -> HeegaardDiagram {
        use IdKind::*;
        let w = |w: &Word| Word(w.0.iter().map(|l| Letter(f(Upper, &l.0), l.1)).collect());
        HeegaardDiagram {
            format: self.format,
            genus: self.genus,
            components: self.components.iter().map(|c| f(Component, c)).collect(),
            uppers: self
                .uppers
                .iter()
                .map(|u| UpperCircle {
                    id: f(Upper, &u.id),
                    cminus: f(Component, &u.cminus),
                    cplus: f(Component, &u.cplus),
                    points: u
                        .points
                        .iter()
                        .map(|p| UpperPoint {
                            id: f(Point, &p.id),
                            lower: f(Lower, &p.lower),
                            sign: p.sign,
                        })
                        .collect(),
                })
                .collect(),
            lowers: self
                .lowers
                .iter()
                .map(|l| LowerCircle {
                    id: f(Lower, &l.id),
                    base_component: f(Component, &l.base_component),
                    points: l.points.iter().map(|p| f(Point, p)).collect(),
                })
                .collect(),
            tauts: self
                .tauts
                .iter()
                .map(|t| TautIdentity {
                    region: f(Region, &t.region),
                    base_component: f(Component, &t.base_component),
                    factors: t
                        .factors
                        .iter()
                        .map(|x| TautFactor {
                            r: w(&x.r),
                            lower: f(Lower, &x.lower),
                            eps: x.eps,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// The same circles on the oppositely oriented surface.
    pub fn reverse_orientation(&self) -> HeegaardDiagram {
        let mut d = self.clone();
        for u in &mut d.uppers {
            std::mem::swap(&mut u.cminus, &mut u.cplus);
            for p in &mut u.points {
                p.sign = -p.sign;
            }
        }
        for t in &mut d.tauts {
            t.factors.reverse();
            for f in &mut t.factors {
                f.eps = -f.eps;
                f.r = Word(f.r.0.iter().map(Letter::inverse).collect());
            }
        }
        d
    }
}

/// Which component and region of each summand are glued.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeSites {
    pub component1: Id,
    pub component2: Id,
    pub region1: Id,
    pub region2: Id,
}

/// Connected sum along a disk lying in the given components and regions.
/// Ids of `d2` that collide with ids of `d1` get a `#2` suffix.
pub fn connected_sum(
    d1: &HeegaardDiagram,
    d2: &HeegaardDiagram,
    sites: &MergeSites,
) -> Result<HeegaardDiagram, DiagramError> {
    let bad = |s: String| DiagramError::IncompatibleMergeSites(s);
    let t1 = d1
        .tauts
        .iter()
        .position(|t| t.region == sites.region1)
        .ok_or_else(|| bad(format!("no region {} in the first summand", sites.region1)))?;
    let t2 = d2
        .tauts
        .iter()
        .position(|t| t.region == sites.region2)
        .ok_or_else(|| bad(format!("no region {} in the second summand", sites.region2)))?;
    if d1.tauts[t1].base_component != sites.component1 {
        return Err(bad(format!(
            "region {} is based at {}, not {}",
            sites.region1, d1.tauts[t1].base_component, sites.component1
        )));
    }
    if d2.tauts[t2].base_component != sites.component2 {
        return Err(bad(format!(
            "region {} is based at {}, not {}",
            sites.region2, d2.tauts[t2].base_component, sites.component2
        )));
    }
    let used = d1.all_ids();
    let c1 = sites.component1.clone();
    let c2 = sites.component2.clone();
    let rename = |k: IdKind, s: &str| -> Id {
        if k == IdKind::Component && s == c2 {
            return c1.clone();
        }
        let mut n = s.to_string();
        while used.contains(&n) {
            n.push_str("#2");
        }
        n
    };
    let r2 = d2.rename_all(&rename);
    let region2 = rename(IdKind::Region, &sites.region2);
    let mut out = d1.clone();
    out.genus += r2.genus;
    out.components
        .extend(r2.components.into_iter().filter(|c| *c != c1));
    out.uppers.extend(r2.uppers);
    out.lowers.extend(r2.lowers);
    for t in r2.tauts {
        if t.region == region2 {
            out.tauts[t1].factors.extend(t.factors);
        } else {
            out.tauts.push(t);
        }
    }
    Ok(out)
}

/// Connected sum at the base component of each summand's first region.
pub fn connected_sum_default(
    d1: &HeegaardDiagram,
    d2: &HeegaardDiagram,
) -> Result<HeegaardDiagram, DiagramError> {
    let (a, b) = (
        d1.tauts
            .first()
            .ok_or_else(|| DiagramError::IncompatibleMergeSites("no regions".into()))?,
        d2.tauts
            .first()
            .ok_or_else(|| DiagramError::IncompatibleMergeSites("no regions".into()))?,
    );
    connected_sum(
        d1,
        d2,
        &MergeSites {
            component1: a.base_component.clone(),
            component2: b.base_component.clone(),
            region1: a.region.clone(),
            region2: b.region.clone(),
        },
    )
}
