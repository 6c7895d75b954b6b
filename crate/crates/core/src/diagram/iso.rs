//! Structure-preserving bijections between diagrams, found by backtracking.

use std::collections::{BTreeMap, HashMap};

use super::{HeegaardDiagram, Id, Letter, Word};

/// How taut identities enter the comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TautComparison {
    /// Regions must correspond factor by factor, with `r` compared after reduction.
    Exact,
    /// Only the circle data is compared.
    Ignore,
}

/// An isomorphism `a → b`, by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Isomorphism {
    pub components: BTreeMap<Id, Id>,
    pub uppers: BTreeMap<Id, Id>,
    pub lowers: BTreeMap<Id, Id>,
    pub points: BTreeMap<Id, Id>,
    pub regions: BTreeMap<Id, Id>,
}

pub fn is_isomorphic(a: &HeegaardDiagram, b: &HeegaardDiagram, cmp: TautComparison) -> bool {
    find_isomorphism(a, b, cmp).is_some()
}

/// Lower circles keep their basepoints; upper circles may be rotated.
pub fn find_isomorphism(
    a: &HeegaardDiagram,
    b: &HeegaardDiagram,
    cmp: TautComparison,
) -> Option<Isomorphism> {
    if a.genus != b.genus
        || a.components.len() != b.components.len()
        || a.uppers.len() != b.uppers.len()
        || a.lowers.len() != b.lowers.len()
        || a.tauts.len() != b.tauts.len()
    {
        return None;
    }
    let pa = a.points().ok()?;
    let pb = b.points().ok()?;
    let mut st = State {
        a,
        b,
        pa: &pa,
        pb: &pb,
        cmp,
        lower: vec![None; a.lowers.len()],
        lower_used: vec![false; b.lowers.len()],
        upper: vec![None; a.uppers.len()],
        upper_used: vec![false; b.uppers.len()],
        comp: HashMap::new(),
    };
    st.lowers(0)
}

struct State<'a> {
    a: &'a HeegaardDiagram,
    b: &'a HeegaardDiagram,
    pa: &'a HashMap<Id, super::PointInfo>,
    pb: &'a HashMap<Id, super::PointInfo>,
    cmp: TautComparison,
    lower: Vec<Option<usize>>,
    lower_used: Vec<bool>,
    upper: Vec<Option<usize>>,
    upper_used: Vec<bool>,
    comp: HashMap<String, String>,
}

impl State<'_> {
    fn snapshot(&self) -> (Vec<Option<usize>>, Vec<bool>, HashMap<String, String>) {
        (
            self.upper.clone(),
            self.upper_used.clone(),
            self.comp.clone(),
        )
    }

    fn restore(&mut self, s: (Vec<Option<usize>>, Vec<bool>, HashMap<String, String>)) {
        self.upper = s.0;
        self.upper_used = s.1;
        self.comp = s.2;
    }

    fn bind_comp(&mut self, x: &str, y: &str) -> bool {
        if let Some(z) = self.comp.get(x) {
            return z == y;
        }
        if self.comp.values().any(|v| v == y) {
            return false;
        }
        self.comp.insert(x.to_string(), y.to_string());
        true
    }

    fn bind_upper(&mut self, i: usize, j: usize) -> bool {
        match self.upper[i] {
            Some(k) => k == j,
            None if self.upper_used[j] => false,
            None => {
                let (ua, ub) = (&self.a.uppers[i], &self.b.uppers[j]);
                if ua.points.len() != ub.points.len() {
                    return false;
                }
                self.upper[i] = Some(j);
                self.upper_used[j] = true;
                self.bind_comp(&ua.cminus, &ub.cminus) && self.bind_comp(&ua.cplus, &ub.cplus)
            }
        }
    }

    fn lowers(&mut self, i: usize) -> Option<Isomorphism> {
        if i == self.a.lowers.len() {
            return self.free_uppers(0);
        }
        let la = &self.a.lowers[i];
        for j in 0..self.b.lowers.len() {
            let lb = &self.b.lowers[j];
            if self.lower_used[j] || la.points.len() != lb.points.len() {
                continue;
            }
            let snap = self.snapshot();
            let mut ok = self.bind_comp(&la.base_component, &lb.base_component);
            for (p, q) in la.points.iter().zip(&lb.points) {
                if !ok {
                    break;
                }
                let (ia, ib) = (&self.pa[p], &self.pb[q]);
                ok = ia.sign == ib.sign && self.bind_upper(ia.upper, ib.upper);
            }
            if ok {
                self.lower[i] = Some(j);
                self.lower_used[j] = true;
                if let Some(iso) = self.lowers(i + 1) {
                    return Some(iso);
                }
                self.lower[i] = None;
                self.lower_used[j] = false;
            }
            self.restore(snap);
        }
        None
    }

    /// Uppers with no intersection points are matched last.
    fn free_uppers(&mut self, i: usize) -> Option<Isomorphism> {
        if i == self.a.uppers.len() {
            return self.finish();
        }
        if self.upper[i].is_some() {
            return self.free_uppers(i + 1);
        }
        for j in 0..self.b.uppers.len() {
            let snap = self.snapshot();
            if self.bind_upper(i, j) {
                if let Some(iso) = self.free_uppers(i + 1) {
                    return Some(iso);
                }
            }
            self.restore(snap);
        }
        None
    }

    fn finish(&mut self) -> Option<Isomorphism> {
        let (a, b) = (self.a, self.b);
        // Only a circle-free diagram can leave components unbound.
        let free_a: Vec<&Id> = a
            .components
            .iter()
            .filter(|c| !self.comp.contains_key(*c))
            .collect();
        let free_b: Vec<&Id> = b
            .components
            .iter()
            .filter(|c| !self.comp.values().any(|v| v == *c))
            .collect();
        if free_a.len() != free_b.len() || free_a.len() > 1 {
            return None;
        }
        if let (Some(x), Some(y)) = (free_a.first(), free_b.first()) {
            self.comp.insert((*x).clone(), (*y).clone());
        }
        let mut points = BTreeMap::new();
        for (i, la) in a.lowers.iter().enumerate() {
            let lb = &b.lowers[self.lower[i]?];
            for (p, q) in la.points.iter().zip(&lb.points) {
                points.insert(p.clone(), q.clone());
            }
        }
        for (i, ua) in a.uppers.iter().enumerate() {
            let ub = &b.uppers[self.upper[i]?];
            let mapped: Vec<&Id> = ua.points.iter().map(|p| &points[&p.id]).collect();
            let target: Vec<&Id> = ub.points.iter().map(|p| &p.id).collect();
            let n = mapped.len();
            if n > 0 && !(0..n).any(|k| (0..n).all(|t| mapped[(t + k) % n] == target[t])) {
                return None;
            }
        }
        let uppers: BTreeMap<Id, Id> = a
            .uppers
            .iter()
            .enumerate()
            .map(|(i, u)| (u.id.clone(), b.uppers[self.upper[i].unwrap()].id.clone()))
            .collect();
        let lowers: BTreeMap<Id, Id> = a
            .lowers
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.clone(), b.lowers[self.lower[i].unwrap()].id.clone()))
            .collect();
        let mut regions = BTreeMap::new();
        if self.cmp == TautComparison::Exact {
            let map_word = |w: &Word| {
                Word(
                    w.reduce()
                        .0
                        .iter()
                        .map(|l| Letter(uppers[&l.0].clone(), l.1))
                        .collect(),
                )
            };
            let mut used = vec![false; b.tauts.len()];
            for ta in &a.tauts {
                let want: Vec<(Word, &Id, i8)> = ta
                    .factors
                    .iter()
                    .map(|f| (map_word(&f.r), &lowers[&f.lower], f.eps))
                    .collect();
                let hit = b.tauts.iter().enumerate().position(|(k, tb)| {
                    !used[k]
                        && self.comp[&ta.base_component] == tb.base_component
                        && tb.factors.len() == want.len()
                        && tb.factors.iter().zip(&want).all(|(f, (r, l, e))| {
                            f.r.reduce() == *r && &f.lower == *l && f.eps == *e
                        })
                })?;
                used[hit] = true;
                regions.insert(ta.region.clone(), b.tauts[hit].region.clone());
            }
        }
        Some(Isomorphism {
            components: self
                .comp
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            uppers,
            lowers,
            points,
            regions,
        })
    }
}
