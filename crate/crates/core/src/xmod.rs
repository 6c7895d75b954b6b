//! Crossed modules `χ: E → H`, their strict 2-groups, and homotopy groups.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum XmodError {
    #[error("malformed crossed module: {0}")]
    Malformed(String),
    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One failed axiom instance. `axiom` is a stable machine-readable name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

impl Violation {
    pub fn new(axiom: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            axiom: axiom.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossedModule {
    #[serde(rename = "E")]
    e: FiniteGroup,
    #[serde(rename = "H")]
    h: FiniteGroup,
    chi: Vec<usize>,
    /// `action[x][e]` is `ˣe`.
    action: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct XmodJson {
    #[serde(rename = "E")]
    e: FiniteGroup,
    #[serde(rename = "H")]
    h: FiniteGroup,
    chi: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for CrossedModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = XmodJson::deserialize(d)?;
        CrossedModule::new_unchecked(j.e, j.h, j.chi, j.action).map_err(serde::de::Error::custom)
    }
}

impl CrossedModule {
    /// Shape-checked constructor; axioms are reported by [`CrossedModule::check`].
    pub fn new_unchecked(
        e: FiniteGroup,
        h: FiniteGroup,
        chi: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, XmodError> {
        let (ne, nh) = (e.order(), h.order());
        if chi.len() != ne {
            return Err(XmodError::Malformed(format!(
                "chi has {} entries, |E| = {ne}",
                chi.len()
            )));
        }
        if chi.iter().any(|&x| x >= nh) {
            return Err(XmodError::Malformed("chi entry out of range".into()));
        }
        if action.len() != nh || action.iter().any(|r| r.len() != ne) {
            return Err(XmodError::Malformed(
                "action table must be |H| x |E|".into(),
            ));
        }
        if action.iter().flatten().any(|&v| v >= ne) {
            return Err(XmodError::Malformed("action entry out of range".into()));
        }
        Ok(CrossedModule { e, h, chi, action })
    }

    /// Constructor that rejects invalid crossed modules.
    pub fn new(
        e: FiniteGroup,
        h: FiniteGroup,
        chi: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, XmodError> {
        let cm = Self::new_unchecked(e, h, chi, action)?;
        cm.ensure_valid()?;
        Ok(cm)
    }

    pub fn ensure_valid(&self) -> Result<(), XmodError> {
        match self.check().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(XmodError::InvalidCrossedModule(v.to_string())),
        }
    }

    pub fn e(&self) -> &FiniteGroup {
        &self.e
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    #[inline]
    pub fn chi(&self, e: usize) -> usize {
        self.chi[e]
    }

    pub fn chi_table(&self) -> &[usize] {
        &self.chi
    }

    /// `ˣe`.
    #[inline]
    pub fn act(&self, x: usize, e: usize) -> usize {
        self.action[x][e]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn set_chi_unchecked(&mut self, e: usize, x: usize) {
        assert!(x < self.h.order());
        self.chi[e] = x;
    }

    pub fn set_action_unchecked(&mut self, x: usize, e: usize, v: usize) {
        assert!(v < self.e.order());
        self.action[x][e] = v;
    }

    /// All violated axioms, grouped by name. Empty iff this is a crossed module.
    pub fn check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for v in self.e.violations() {
            out.push(Violation::new("group-E", v));
        }
        for v in self.h.violations() {
            out.push(Violation::new("group-H", v));
        }
        if !out.is_empty() {
            return out;
        }
        let (e, h) = (&self.e, &self.h);
        let mut first = |name: &str, found: Option<String>| {
            if let Some(d) = found {
                out.push(Violation::new(name, d));
            }
        };
        let chi_hom = (self.chi[0] != 0)
            .then(|| "chi(1) != 1".to_string())
            .or_else(|| {
                pairs(e.order()).find_map(|(a, b)| {
                    (self.chi[e.mul(a, b)] != h.mul(self.chi[a], self.chi[b]))
                        .then(|| format!("chi({a}*{b}) != chi({a})*chi({b})"))
                })
            });
        first("chi-homomorphism", chi_hom);

        let auto = h.elements().find_map(|x| {
            let row = &self.action[x];
            let mut seen = vec![false; e.order()];
            for &v in row {
                if seen[v] {
                    return Some(format!("action of {x} is not bijective"));
                }
                seen[v] = true;
            }
            pairs(e.order()).find_map(|(a, b)| {
                (row[e.mul(a, b)] != e.mul(row[a], row[b]))
                    .then(|| format!("action of {x} is not multiplicative on ({a}, {b})"))
            })
        });
        first("action-automorphism", auto);

        let ident = e
            .elements()
            .find_map(|a| (self.action[0][a] != a).then(|| format!("1 acts nontrivially on {a}")));
        first("action-identity", ident);

        let compat = h.elements().find_map(|x| {
            h.elements().find_map(|y| {
                let xy = h.mul(x, y);
                e.elements().find_map(|a| {
                    (self.action[xy][a] != self.action[x][self.action[y][a]])
                        .then(|| format!("action of {x}*{y} on {a}"))
                })
            })
        });
        first("action-compatibility", compat);

        let equiv = h.elements().find_map(|x| {
            e.elements().find_map(|a| {
                (self.chi[self.action[x][a]] != h.conj(x, self.chi[a]))
                    .then(|| format!("chi(^{x} {a}) != {x} chi({a}) {x}^-1"))
            })
        });
        first("equivariance", equiv);

        let peiffer = pairs(e.order()).find_map(|(a, b)| {
            (self.action[self.chi[a]][b] != e.conj(a, b))
                .then(|| format!("^chi({a}) {b} != {a} {b} {a}^-1"))
        });
        first("peiffer", peiffer);
        out
    }

    /// True iff `χ(E)` is a normal subgroup of `H`.
    pub fn image_is_normal(&self) -> bool {
        let mut img = vec![false; self.h.order()];
        for &x in &self.chi {
            img[x] = true;
        }
        self.h.elements().all(|x| {
            self.h
                .elements()
                .filter(|&y| img[y])
                .all(|y| img[self.h.conj(x, y)])
        })
    }

    /// `Z/4 → Z/2` with `χ ≡ 0` and `¹n = −n`.
    pub fn z4_to_z2() -> Self {
        let e = FiniteGroup::cyclic(4);
        let h = FiniteGroup::cyclic(2);
        let action = vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]];
        Self::new(e, h, vec![0; 4], action).unwrap()
    }

    /// `1 → H`.
    pub fn trivial_kernel(h: FiniteGroup) -> Self {
        let nh = h.order();
        Self::new(FiniteGroup::trivial(), h, vec![0], vec![vec![0]; nh]).unwrap()
    }

    /// `E → 1` for an abelian group `E`.
    pub fn to_trivial(e: FiniteGroup) -> Result<Self, XmodError> {
        let ne = e.order();
        Self::new(
            e,
            FiniteGroup::trivial(),
            vec![0; ne],
            vec![(0..ne).collect()],
        )
    }

    /// Inclusion of a normal subgroup `N ◁ G` with the conjugation action.
    /// `elements` lists the members of `N`, starting with the identity.
    pub fn inclusion(g: &FiniteGroup, elements: &[usize]) -> Result<Self, XmodError> {
        if elements.first() != Some(&0) {
            return Err(XmodError::Malformed(
                "subgroup must list the identity first".into(),
            ));
        }
        let pos: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let lookup = |x: usize| {
            pos.get(&x)
                .copied()
                .ok_or_else(|| XmodError::InvalidCrossedModule("not a normal subgroup".into()))
        };
        let mut table = Vec::new();
        for &a in elements {
            let mut row = Vec::new();
            for &b in elements {
                row.push(lookup(g.mul(a, b))?);
            }
            table.push(row);
        }
        let n = FiniteGroup::from_table(table, None)?;
        let mut action = Vec::new();
        for x in g.elements() {
            let mut row = Vec::new();
            for &a in elements {
                row.push(lookup(g.conj(x, a))?);
            }
            action.push(row);
        }
        Self::new(n, g.clone(), elements.to_vec(), action)
    }

    /// `G → G` the identity with the conjugation action.
    pub fn identity(g: &FiniteGroup) -> Self {
        let all: Vec<usize> = g.elements().collect();
        Self::inclusion(g, &all).unwrap()
    }

    /// `G → Inn(G)`, `g ↦ (x ↦ g x g⁻¹)`, with `Inn(G)` acting by evaluation.
    pub fn inner(g: &FiniteGroup) -> Self {
        let n = g.order();
        let perms: Vec<Vec<usize>> = g
            .elements()
            .map(|a| (0..n).map(|b| g.conj(a, b)).collect())
            .collect();
        let inn = FiniteGroup::from_permutations(n, &perms);
        // Recover each element of Inn(G) as a permutation by replaying the closure order.
        let mut elems: Vec<Vec<usize>> = vec![(0..n).collect()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
        let mut i = 0;
        while i < elems.len() {
            for p in &perms {
                let q: Vec<usize> = (0..n).map(|k| elems[i][p[k]]).collect();
                if !index.contains_key(&q) {
                    index.insert(q.clone(), elems.len());
                    elems.push(q);
                }
            }
            i += 1;
        }
        let chi = perms.iter().map(|p| index[p]).collect();
        let action = elems.clone();
        Self::new(g.clone(), inn, chi, action).unwrap()
    }

    /// The strict 2-group `H ⋉ E ⇉ H`.
    pub fn two_group(&self) -> Result<TwoGroup, XmodError> {
        self.ensure_valid()?;
        let (ne, nh) = (self.e.order(), self.h.order());
        let n = ne * nh;
        let idx = |x: usize, a: usize| x * ne + a;
        let mut source = vec![0; n];
        let mut target = vec![0; n];
        let mut product = vec![0; n * n];
        for x in 0..nh {
            for a in 0..ne {
                let m = idx(x, a);
                source[m] = x;
                target[m] = self.h.mul(self.chi[a], x);
                for y in 0..nh {
                    for b in 0..ne {
                        let p = idx(self.h.mul(x, y), self.e.mul(a, self.action[x][b]));
                        product[m * n + idx(y, b)] = p;
                    }
                }
            }
        }
        Ok(TwoGroup {
            h: self.h.clone(),
            e_order: ne,
            source,
            target,
            product,
            units: (0..nh).map(|x| idx(x, 0)).collect(),
        })
    }

    /// `(Coker χ, Ker χ)` with the induced action.
    pub fn pi1_pi2(&self) -> Result<Pi1Pi2, XmodError> {
        self.ensure_valid()?;
        let (e, h) = (&self.e, &self.h);
        let mut image = vec![false; h.order()];
        for &x in &self.chi {
            image[x] = true;
        }
        // Cosets xIm, numbered by smallest representative.
        let mut quotient = vec![usize::MAX; h.order()];
        let mut reps = Vec::new();
        for x in h.elements() {
            if quotient[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for y in h.elements().filter(|&y| image[y]) {
                quotient[h.mul(x, y)] = c;
            }
        }
        let coker_table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| quotient[h.mul(a, b)]).collect())
            .collect();
        let coker = FiniteGroup::from_table(coker_table, None)?;
        let ker: Vec<usize> = e.elements().filter(|&a| self.chi[a] == 0).collect();
        let pos: HashMap<usize, usize> = ker.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let ker_group = FiniteGroup::from_table(
            ker.iter()
                .map(|&a| ker.iter().map(|&b| pos[&e.mul(a, b)]).collect())
                .collect(),
            None,
        )?;
        let ker_central = ker
            .iter()
            .all(|&k| e.elements().all(|a| e.mul(k, a) == e.mul(a, k)));
        let action = reps
            .iter()
            .map(|&x| ker.iter().map(|&k| pos[&self.action[x][k]]).collect())
            .collect();
        Ok(Pi1Pi2 {
            coker,
            quotient,
            ker,
            ker_group,
            ker_central,
            action,
        })
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

/// `π₁ = Coker χ` and `π₂ = Ker χ` of the classifying space.
#[derive(Clone, Debug)]
pub struct Pi1Pi2 {
    pub coker: FiniteGroup,
    /// `H → Coker χ`.
    pub quotient: Vec<usize>,
    /// Members of `Ker χ` as elements of `E`, ascending.
    pub ker: Vec<usize>,
    pub ker_group: FiniteGroup,
    pub ker_central: bool,
    /// `action[c][k]`: coset `c` acting on the `k`-th kernel element.
    pub action: Vec<Vec<usize>>,
}

/// The strict 2-group `H ⋉ E ⇉ H`. Morphism `(x, e)` is numbered `x·|E| + e`.
#[derive(Clone, Debug)]
pub struct TwoGroup {
    h: FiniteGroup,
    e_order: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    product: Vec<usize>,
    units: Vec<usize>,
}

impl TwoGroup {
    pub fn morphism(&self, x: usize, e: usize) -> usize {
        x * self.e_order + e
    }

    pub fn split(&self, m: usize) -> (usize, usize) {
        (m / self.e_order, m % self.e_order)
    }

    pub fn morphism_count(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, m: usize) -> usize {
        self.source[m]
    }

    pub fn target(&self, m: usize) -> usize {
        self.target[m]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    /// Group structure of the morphism group `H ⋉ E`.
    pub fn product(&self, m: usize, n: usize) -> usize {
        self.product[m * self.morphism_count() + n]
    }

    /// Composition `m ∗ n`, defined when `t(m) = s(n)`:
    /// `(x, e) ∗ (χ(e)x, f) = (x, f·e)`.
    pub fn compose(&self, m: usize, n: usize) -> Option<usize> {
        if self.target[m] != self.source[n] {
            return None;
        }
        // n·u(s(n))⁻¹·m = (χ(e)x, f)(χ(e)x, 1)⁻¹(x, e) = (x, f·e).
        let inv_unit = self.inverse_of(self.units[self.source[n]]);
        Some(self.product(self.product(n, inv_unit), m))
    }

    fn inverse_of(&self, m: usize) -> usize {
        (0..self.morphism_count())
            .find(|&k| self.product(m, k) == self.units[0])
            .expect("morphism group is a group")
    }

    /// Recovers the crossed module: `E = Ker s`, `χ = t|`, `ˣe = 1_x e 1_{x⁻¹}`.
    pub fn to_crossed_module(&self) -> Result<CrossedModule, XmodError> {
        let kernel: Vec<usize> = (0..self.morphism_count())
            .filter(|&m| self.source[m] == 0)
            .collect();
        let pos: HashMap<usize, usize> = kernel.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let e_table = kernel
            .iter()
            .map(|&a| kernel.iter().map(|&b| pos[&self.product(a, b)]).collect())
            .collect();
        let e = FiniteGroup::from_table(e_table, None)?;
        let chi = kernel.iter().map(|&m| self.target[m]).collect();
        let action = self
            .h
            .elements()
            .map(|x| {
                let ux = self.units[x];
                let uxi = self.units[self.h.inv(x)];
                kernel
                    .iter()
                    .map(|&m| pos[&self.product(self.product(ux, m), uxi)])
                    .collect()
            })
            .collect();
        CrossedModule::new(e, self.h.clone(), chi, action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4z2_valid() {
        assert!(CrossedModule::z4_to_z2().check().is_empty());
    }

    #[test]
    fn trivial_kernel_valid() {
        for h in [FiniteGroup::symmetric(3), FiniteGroup::quaternion()] {
            assert!(CrossedModule::trivial_kernel(h).check().is_empty());
        }
    }

    #[test]
    fn nontrivial_chi_breaks_equivariance() {
        let cm = CrossedModule::z4_to_z2();
        let bad = CrossedModule::new_unchecked(
            cm.e().clone(),
            cm.h().clone(),
            vec![0, 1, 0, 0],
            cm.action_table().to_vec(),
        )
        .unwrap();
        let names: Vec<String> = bad.check().into_iter().map(|v| v.axiom).collect();
        assert!(names.contains(&"equivariance".to_string()));
        assert!(names.contains(&"chi-homomorphism".to_string()));
    }

    #[test]
    fn two_group_of_z4z2() {
        let tg = CrossedModule::z4_to_z2().two_group().unwrap();
        let m = tg.morphism(0, 1);
        assert_eq!((tg.source(m), tg.target(m)), (0, 0));
        assert_eq!(tg.unit(1), tg.morphism(1, 0));
        let n = tg.morphism(0, 3);
        assert_eq!(tg.compose(m, n), Some(tg.morphism(0, 0)));
    }

    #[test]
    fn two_group_roundtrip() {
        for cm in [
            CrossedModule::z4_to_z2(),
            CrossedModule::inner(&FiniteGroup::symmetric(3)),
            CrossedModule::identity(&FiniteGroup::dihedral(4)),
            CrossedModule::trivial_kernel(FiniteGroup::cyclic(3)),
        ] {
            assert_eq!(cm.two_group().unwrap().to_crossed_module().unwrap(), cm);
        }
    }

    #[test]
    fn homotopy_groups() {
        let p = CrossedModule::z4_to_z2().pi1_pi2().unwrap();
        assert_eq!(p.coker.order(), 2);
        assert_eq!(p.ker.len(), 4);
        let s3 = FiniteGroup::symmetric(3);
        let p = CrossedModule::inner(&s3).pi1_pi2().unwrap();
        assert_eq!(p.ker.len(), 1);
        let a3: Vec<usize> = s3
            .elements()
            .filter(|&x| s3.element_order(x) != 2)
            .collect();
        let p = CrossedModule::inclusion(&s3, &a3)
            .unwrap()
            .pi1_pi2()
            .unwrap();
        assert_eq!((p.coker.order(), p.ker.len()), (2, 1));
    }
}
