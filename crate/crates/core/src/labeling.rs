//! χ-labelings of diagrams, the gauge group action, and gauge orbits.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramError, HeegaardDiagram, Id, Word};
use crate::xmod::{CrossedModule, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelingError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// `α: υ → H` and `β: λ → E`, by element index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChiLabeling {
    pub alpha: BTreeMap<Id, usize>,
    pub beta: BTreeMap<Id, usize>,
}

impl ChiLabeling {
    /// Every upper labeled `1 ∈ H`, every lower `1 ∈ E`.
    pub fn trivial(d: &HeegaardDiagram) -> Self {
        ChiLabeling {
            alpha: d.uppers.iter().map(|u| (u.id.clone(), 0)).collect(),
            beta: d.lowers.iter().map(|l| (l.id.clone(), 0)).collect(),
        }
    }

    pub fn alpha_of(&self, u: &str) -> usize {
        self.alpha[u]
    }

    pub fn beta_of(&self, l: &str) -> usize {
        self.beta[l]
    }

    /// `(α⁻¹, β)`.
    pub fn invert_alpha(&self, cm: &CrossedModule) -> Self {
        ChiLabeling {
            alpha: self
                .alpha
                .iter()
                .map(|(k, &v)| (k.clone(), cm.h().inv(v)))
                .collect(),
            beta: self.beta.clone(),
        }
    }
}

/// An element `(a, d)` of `Map(components, H) ⋉ Map(υ, E)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaugeElement {
    pub a: BTreeMap<Id, usize>,
    pub d: BTreeMap<Id, usize>,
}

impl GaugeElement {
    pub fn identity(d: &HeegaardDiagram) -> Self {
        GaugeElement {
            a: d.components.iter().map(|c| (c.clone(), 0)).collect(),
            d: d.uppers.iter().map(|u| (u.id.clone(), 0)).collect(),
        }
    }

    /// `(a, d)(a', d') = (aa', ^{a'(c⁻)⁻¹}d · d')`.
    pub fn compose(&self, o: &GaugeElement, diag: &HeegaardDiagram, cm: &CrossedModule) -> Self {
        let (h, e) = (cm.h(), cm.e());
        GaugeElement {
            a: diag
                .components
                .iter()
                .map(|c| (c.clone(), h.mul(self.a[c], o.a[c])))
                .collect(),
            d: diag
                .uppers
                .iter()
                .map(|u| {
                    let tw = cm.act(h.inv(o.a[&u.cminus]), self.d[&u.id]);
                    (u.id.clone(), e.mul(tw, o.d[&u.id]))
                })
                .collect(),
        }
    }
}

/// A word as `(upper index, ±1)` letters.
type Letters = Vec<(usize, i8)>;

/// Index-based view of a diagram used by the hot loops.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub n_comp: usize,
    /// `(c⁻, c⁺)` per upper.
    pub ends: Vec<(usize, usize)>,
    /// Per lower: base component and the letters of `ω_l`.
    pub lowers: Vec<(usize, Letters)>,
    /// Per region: factors `(r, lower, ε)`.
    pub tauts: Vec<Vec<(Letters, usize, i8)>>,
}

impl Compiled {
    pub fn new(d: &HeegaardDiagram) -> Result<Self, DiagramError> {
        let comp: HashMap<&str, usize> = d
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let c = |s: &str| {
            comp.get(s)
                .copied()
                .ok_or_else(|| DiagramError::UnknownId(s.to_string()))
        };
        let up: HashMap<&str, usize> = d
            .uppers
            .iter()
            .enumerate()
            .map(|(i, u)| (u.id.as_str(), i))
            .collect();
        let lo: HashMap<&str, usize> = d
            .lowers
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.as_str(), i))
            .collect();
        let letters = |w: &Word| -> Result<Vec<(usize, i8)>, DiagramError> {
            w.letters()
                .iter()
                .map(|l| {
                    up.get(l.circle())
                        .map(|&i| (i, l.exp()))
                        .ok_or_else(|| DiagramError::UnknownCircle(l.circle().to_string()))
                })
                .collect()
        };
        let ends = d
            .uppers
            .iter()
            .map(|u| Ok((c(&u.cminus)?, c(&u.cplus)?)))
            .collect::<Result<_, DiagramError>>()?;
        let lowers = d
            .lowers
            .iter()
            .map(|l| Ok((c(&l.base_component)?, letters(&d.omega(&l.id)?)?)))
            .collect::<Result<_, DiagramError>>()?;
        let tauts = d
            .tauts
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .map(|f| {
                        let li = *lo
                            .get(f.lower.as_str())
                            .ok_or_else(|| DiagramError::UnknownCircle(f.lower.clone()))?;
                        Ok((letters(&f.r)?, li, f.eps))
                    })
                    .collect::<Result<Vec<_>, DiagramError>>()
            })
            .collect::<Result<_, DiagramError>>()?;
        Ok(Compiled {
            n_comp: d.components.len(),
            ends,
            lowers,
            tauts,
        })
    }

    pub fn eval(&self, cm: &CrossedModule, alpha: &[usize], w: &[(usize, i8)]) -> usize {
        let h = cm.h();
        w.iter().fold(0, |acc, &(u, e)| {
            let x = if e > 0 { alpha[u] } else { h.inv(alpha[u]) };
            h.mul(acc, x)
        })
    }

    pub fn derivation(
        &self,
        cm: &CrossedModule,
        alpha: &[usize],
        d: &[usize],
        w: &[(usize, i8)],
    ) -> usize {
        let (h, e) = (cm.h(), cm.e());
        let mut acc = 0;
        let mut prefix = 0;
        for &(u, ex) in w {
            let (val, step) = if ex > 0 {
                (d[u], alpha[u])
            } else {
                let ai = h.inv(alpha[u]);
                (cm.act(ai, e.inv(d[u])), ai)
            };
            acc = e.mul(acc, cm.act(prefix, val));
            prefix = h.mul(prefix, step);
        }
        acc
    }

    pub fn condition_ii(
        &self,
        cm: &CrossedModule,
        alpha: &[usize],
        beta: &[usize],
    ) -> Option<usize> {
        let e = cm.e();
        self.tauts.iter().position(|factors| {
            let prod = factors.iter().fold(0, |acc, (r, l, eps)| {
                let v = cm.act(self.eval(cm, alpha, r), beta[*l]);
                e.mul(acc, if *eps > 0 { v } else { e.inv(v) })
            });
            prod != 0
        })
    }

    pub fn act(
        &self,
        cm: &CrossedModule,
        a: &[usize],
        d: &[usize],
        alpha: &[usize],
        beta: &[usize],
    ) -> (Vec<usize>, Vec<usize>) {
        let h = cm.h();
        let na = self
            .ends
            .iter()
            .enumerate()
            .map(|(u, &(cm_, cp))| {
                let x = h.mul(h.mul(a[cm_], cm.chi(d[u])), alpha[u]);
                h.mul(x, h.inv(a[cp]))
            })
            .collect();
        let nb = self
            .lowers
            .iter()
            .enumerate()
            .map(|(l, (base, w))| {
                let dv = self.derivation(cm, alpha, d, w);
                cm.act(a[*base], cm.e().mul(dv, beta[l]))
            })
            .collect();
        (na, nb)
    }
}

fn to_vecs(
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    lab: &ChiLabeling,
) -> Result<(Vec<usize>, Vec<usize>), LabelingError> {
    let get = |m: &BTreeMap<Id, usize>, k: &str, bound: usize| {
        m.get(k).copied().filter(|&v| v < bound).ok_or_else(|| {
            LabelingError::InvalidLabeling(format!("missing or out-of-range label for {k}"))
        })
    };
    let alpha = d
        .uppers
        .iter()
        .map(|u| get(&lab.alpha, &u.id, cm.h().order()))
        .collect::<Result<_, _>>()?;
    let beta = d
        .lowers
        .iter()
        .map(|l| get(&lab.beta, &l.id, cm.e().order()))
        .collect::<Result<_, _>>()?;
    if lab.alpha.len() != d.uppers.len() || lab.beta.len() != d.lowers.len() {
        return Err(LabelingError::InvalidLabeling(
            "labels for unknown circles".into(),
        ));
    }
    Ok((alpha, beta))
}

fn from_vecs(d: &HeegaardDiagram, alpha: &[usize], beta: &[usize]) -> ChiLabeling {
    ChiLabeling {
        alpha: d
            .uppers
            .iter()
            .zip(alpha)
            .map(|(u, &x)| (u.id.clone(), x))
            .collect(),
        beta: d
            .lowers
            .iter()
            .zip(beta)
            .map(|(l, &e)| (l.id.clone(), e))
            .collect(),
    }
}

/// `α̃(w)` for a word starting at component `from`.
pub fn eval_word(
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    alpha: &BTreeMap<Id, usize>,
    from: &str,
    w: &Word,
) -> Result<usize, LabelingError> {
    d.word_target(from, w)?;
    let h = cm.h();
    let mut acc = 0;
    for l in w.letters() {
        let x = *alpha.get(l.circle()).ok_or_else(|| {
            LabelingError::InvalidLabeling(format!("no label for {}", l.circle()))
        })?;
        acc = h.mul(acc, if l.exp() > 0 { x } else { h.inv(x) });
    }
    Ok(acc)
}

/// The derivation `d_α(w)` extending `d` along `α̃`.
pub fn derivation(
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    alpha: &BTreeMap<Id, usize>,
    dmap: &BTreeMap<Id, usize>,
    from: &str,
    w: &Word,
) -> Result<usize, LabelingError> {
    d.word_target(from, w)?;
    let (h, e) = (cm.h(), cm.e());
    let mut acc = 0;
    let mut prefix = 0;
    for l in w.letters() {
        let miss = || LabelingError::InvalidLabeling(format!("no label for {}", l.circle()));
        let x = *alpha.get(l.circle()).ok_or_else(miss)?;
        let dv = *dmap.get(l.circle()).ok_or_else(miss)?;
        let (val, step) = if l.exp() > 0 {
            (dv, x)
        } else {
            (cm.act(h.inv(x), e.inv(dv)), h.inv(x))
        };
        acc = e.mul(acc, cm.act(prefix, val));
        prefix = h.mul(prefix, step);
    }
    Ok(acc)
}

/// Violations of the two labeling conditions; empty iff `lab` is a χ-labeling.
pub fn check_labeling(
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    lab: &ChiLabeling,
) -> Vec<Violation> {
    let c = match Compiled::new(d) {
        Ok(c) => c,
        Err(e) => return vec![Violation::new("diagram", e.to_string())],
    };
    let (alpha, beta) = match to_vecs(d, cm, lab) {
        Ok(v) => v,
        Err(e) => return vec![Violation::new("labeling-keys", e.to_string())],
    };
    let mut out = Vec::new();
    for (i, (_, w)) in c.lowers.iter().enumerate() {
        if cm.chi(beta[i]) != c.eval(cm, &alpha, w) {
            out.push(Violation::new(
                "condition-i",
                format!("chi(beta({0})) != alpha(omega({0}))", d.lowers[i].id),
            ));
        }
    }
    let e = cm.e();
    for (t, factors) in c.tauts.iter().enumerate() {
        let prod = factors.iter().fold(0, |acc, (r, l, eps)| {
            let v = cm.act(c.eval(cm, &alpha, r), beta[*l]);
            e.mul(acc, if *eps > 0 { v } else { e.inv(v) })
        });
        if prod != 0 {
            out.push(Violation::new(
                "condition-ii",
                format!(
                    "taut identity of region {} evaluates to {prod}",
                    d.tauts[t].region
                ),
            ));
        }
    }
    out
}

/// `g · lab`. Requires `lab` to be a χ-labeling.
pub fn gauge_act(
    g: &GaugeElement,
    lab: &ChiLabeling,
    d: &HeegaardDiagram,
    cm: &CrossedModule,
) -> Result<ChiLabeling, LabelingError> {
    if let Some(v) = check_labeling(d, cm, lab).into_iter().next() {
        return Err(LabelingError::InvalidLabeling(v.to_string()));
    }
    let c = Compiled::new(d)?;
    let (alpha, beta) = to_vecs(d, cm, lab)?;
    let a: Vec<usize> = d
        .components
        .iter()
        .map(|k| g.a.get(k).copied().unwrap_or(0))
        .collect();
    let dd: Vec<usize> = d
        .uppers
        .iter()
        .map(|u| g.d.get(&u.id).copied().unwrap_or(0))
        .collect();
    let (na, nb) = c.act(cm, &a, &dd, &alpha, &beta);
    Ok(from_vecs(d, &na, &nb))
}

fn candidate_count(d: &HeegaardDiagram, cm: &CrossedModule) -> u128 {
    let h = cm.h().order() as u128;
    let e = cm.e().order() as u128;
    let mut n: u128 = 1;
    for _ in &d.uppers {
        n = n.saturating_mul(h);
    }
    for _ in &d.lowers {
        n = n.saturating_mul(e);
    }
    n
}

/// Every χ-labeling, ordered lexicographically by `(α, β)` in circle order.
pub fn enumerate_labelings(
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    budget: u128,
) -> Result<Vec<ChiLabeling>, LabelingError> {
    let needed = candidate_count(d, cm);
    if needed > budget {
        return Err(LabelingError::BudgetExceeded { needed, budget });
    }
    let c = Compiled::new(d)?;
    let (nh, nu, nl) = (cm.h().order(), d.uppers.len(), d.lowers.len());
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); nh];
    for e in cm.e().elements() {
        fibers[cm.chi(e)].push(e);
    }
    let mut out = Vec::new();
    let mut alpha = vec![0usize; nu];
    loop {
        let lists: Vec<&Vec<usize>> = c
            .lowers
            .iter()
            .map(|(_, w)| &fibers[c.eval(cm, &alpha, w)])
            .collect();
        if lists.iter().all(|l| !l.is_empty()) {
            let mut pos = vec![0usize; nl];
            loop {
                let beta: Vec<usize> = pos.iter().zip(&lists).map(|(&p, l)| l[p]).collect();
                if c.condition_ii(cm, &alpha, &beta).is_none() {
                    out.push(from_vecs(d, &alpha, &beta));
                }
                if !odometer(&mut pos, |i| lists[i].len()) {
                    break;
                }
            }
        }
        if !odometer(&mut alpha, |_| nh) {
            break;
        }
    }
    Ok(out)
}

/// Advances a little-endian-from-the-right counter; false when it wraps.
fn odometer(v: &mut [usize], base: impl Fn(usize) -> usize) -> bool {
    for i in (0..v.len()).rev() {
        v[i] += 1;
        if v[i] < base(i) {
            return true;
        }
        v[i] = 0;
    }
    false
}

/// A gauge orbit: its smallest member and the indices of all members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClass {
    pub representative: ChiLabeling,
    pub size: usize,
    pub members: Vec<usize>,
}

/// Partitions `labs` into gauge orbits using the generators `(a_{c,x}, 1)`
/// and `(1, d_{u,e})`. `labs` must be closed under the action (as returned by
/// [`enumerate_labelings`]). Classes are ordered by representative.
pub fn orbit_classes(
    labs: &[ChiLabeling],
    d: &HeegaardDiagram,
    cm: &CrossedModule,
) -> Result<Vec<OrbitClass>, LabelingError> {
    let c = Compiled::new(d)?;
    let vecs: Vec<(Vec<usize>, Vec<usize>)> = labs
        .iter()
        .map(|l| to_vecs(d, cm, l))
        .collect::<Result<_, _>>()?;
    let index: HashMap<&(Vec<usize>, Vec<usize>), usize> =
        vecs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut uf = UnionFind::<usize>::new(labs.len());
    let (nh, ne) = (cm.h().order(), cm.e().order());
    let nu = d.uppers.len();
    let mut gens: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for comp in 0..c.n_comp {
        for x in 1..nh {
            let mut a = vec![0; c.n_comp];
            a[comp] = x;
            gens.push((a, vec![0; nu]));
        }
    }
    for u in 0..nu {
        for e in 1..ne {
            let mut dv = vec![0; nu];
            dv[u] = e;
            gens.push((vec![0; c.n_comp], dv));
        }
    }
    for (i, (alpha, beta)) in vecs.iter().enumerate() {
        for (a, dv) in &gens {
            let img = c.act(cm, a, dv, alpha, beta);
            let j = *index.get(&img).ok_or_else(|| {
                LabelingError::InvalidLabeling(
                    "labeling list is not closed under the gauge action".into(),
                )
            })?;
            uf.union(i, j);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..labs.len() {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    let mut out: Vec<OrbitClass> = classes
        .into_values()
        .map(|members| {
            let rep = members.iter().map(|&i| &labs[i]).min().unwrap().clone();
            OrbitClass {
                representative: rep,
                size: members.len(),
                members,
            }
        })
        .collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

/// Every gauge element, for small diagrams; `None` if there are more than `limit`.
pub fn gauge_group_elements(
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    limit: usize,
) -> Option<Vec<GaugeElement>> {
    let (nh, ne) = (cm.h().order(), cm.e().order());
    let nc = d.components.len();
    let nu = d.uppers.len();
    let total = (nh as u128)
        .checked_pow(nc as u32)?
        .checked_mul((ne as u128).checked_pow(nu as u32)?)?;
    if total > limit as u128 {
        return None;
    }
    let mut out = Vec::new();
    let mut a = vec![0usize; nc];
    loop {
        let mut dv = vec![0usize; nu];
        loop {
            out.push(GaugeElement {
                a: d.components
                    .iter()
                    .zip(&a)
                    .map(|(k, &x)| (k.clone(), x))
                    .collect(),
                d: d.uppers
                    .iter()
                    .zip(&dv)
                    .map(|(u, &e)| (u.id.clone(), e))
                    .collect(),
            });
            if !odometer(&mut dv, |_| ne) {
                break;
            }
        }
        if !odometer(&mut a, |_| nh) {
            break;
        }
    }
    Some(out)
}
