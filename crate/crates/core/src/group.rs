//! Finite groups given by multiplication tables. Element 0 is the identity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group table is malformed: {0}")]
    Malformed(String),
    #[error("group axiom fails: {0}")]
    Axiom(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupJson {
            order: self.order,
            table: (0..self.order)
                .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
                .collect(),
            names: self.names.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let g = GroupJson::deserialize(d)?;
        if g.order != g.table.len() {
            return Err(serde::de::Error::custom("order does not match table size"));
        }
        FiniteGroup::from_table_unchecked(g.table, g.names).map_err(serde::de::Error::custom)
    }
}

impl FiniteGroup {
    /// Builds a group from a table, rejecting anything that is not a group.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let g = Self::from_table_unchecked(table, names)?;
        if let Some(v) = g.violations().into_iter().next() {
            return Err(GroupError::Axiom(v));
        }
        Ok(g)
    }

    /// Builds a table that is only shape-checked; `violations` reports axiom failures.
    pub fn from_table_unchecked(
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Malformed("empty group".into()));
        }
        if table.iter().any(|r| r.len() != n) {
            return Err(GroupError::Malformed("table is not square".into()));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(GroupError::Malformed("entry out of range".into()));
        }
        if let Some(nm) = &names {
            if nm.len() != n {
                return Err(GroupError::Malformed(
                    "names length differs from order".into(),
                ));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| flat[a * n + b] == 0).unwrap_or(0))
            .collect();
        Ok(FiniteGroup {
            order: n,
            table: flat,
            inverse,
            names,
        })
    }

    /// Axiom violations: identity, inverses, associativity (exhaustive up to
    /// order 64, a fixed pseudo-random sample of triples above).
    pub fn violations(&self) -> Vec<String> {
        let n = self.order;
        let mut out = Vec::new();
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                out.push(format!("0 is not an identity for element {a}"));
                break;
            }
        }
        for a in 0..n {
            let b = self.inverse[a];
            if self.mul(a, b) != 0 || self.mul(b, a) != 0 {
                out.push(format!("element {a} has no two-sided inverse"));
                break;
            }
        }
        let mut check = |a: usize, b: usize, c: usize| -> bool {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                out.push(format!("associativity fails on ({a}, {b}, {c})"));
                return false;
            }
            true
        };
        if n <= 64 {
            'outer: for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            break 'outer;
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            for _ in 0..200_000 {
                state = splitmix(state);
                let (a, b, c) = (
                    (state % n as u64) as usize,
                    ((state >> 20) % n as u64) as usize,
                    ((state >> 40) % n as u64) as usize,
                );
                if !check(a, b, c) {
                    break;
                }
            }
        }
        out
    }

    pub fn trivial() -> Self {
        Self::from_table(vec![vec![0]], None).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_table(table, None).unwrap()
    }

    /// `Z/m ⋊ Z/n` where the generator of `Z/n` acts by multiplication by `r`;
    /// element `(i, j)` is `i + m*j`. Requires `r^n ≡ 1 (mod m)`.
    pub fn semidirect_cyclic(m: usize, n: usize, r: usize) -> Self {
        let mut rp = vec![1usize; n + 1];
        for k in 1..=n {
            rp[k] = rp[k - 1] * r % m;
        }
        assert_eq!(rp[n] % m, 1 % m, "r^n must be 1 mod m");
        let ord = m * n;
        let table = (0..ord)
            .map(|x| {
                let (i, j) = (x % m, x / m);
                (0..ord)
                    .map(|y| {
                        let (k, l) = (y % m, y / m);
                        (i + rp[j] * k) % m + m * ((j + l) % n)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table, None).unwrap()
    }

    /// The dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Self {
        Self::semidirect_cyclic(n, 2, n - 1)
    }

    /// Closure of a set of permutations of `0..degree` under composition;
    /// elements appear in breadth-first order from the identity.
    /// The product `a·b` is "apply `b` first, then `a`".
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|k| elems[i][g[k]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let c: Vec<usize> = (0..degree).map(|k| a[b[k]]).collect();
                        index[&c]
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table, None).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::trivial();
        }
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
        Self::from_permutations(n, &[t, c])
    }

    pub fn alternating(n: usize) -> Self {
        if n <= 2 {
            return Self::trivial();
        }
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(n, &gens)
    }

    pub fn quaternion() -> Self {
        // i, j as permutations of the 8 elements {±1, ±i, ±j, ±k} via left multiplication.
        // Encoding: 0=1,1=i,2=j,3=k,4=-1,5=-i,6=-j,7=-k.
        let li = vec![1, 4, 3, 6, 5, 0, 7, 2];
        let lj = vec![2, 7, 4, 1, 6, 3, 0, 5];
        Self::from_permutations(8, &[li, lj])
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (n, m) = (a.order, b.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(table, None).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order);
        self.names = Some(names);
        self
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(n) => n[a].clone(),
            None => a.to_string(),
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `a b a⁻¹`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The raw table as rows.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    /// Overwrites one table entry without re-checking axioms.
    pub fn set_entry_unchecked(&mut self, a: usize, b: usize, v: usize) {
        assert!(v < self.order);
        self.table[a * self.order + b] = v;
        let n = self.order;
        self.inverse = (0..n)
            .map(|x| (0..n).find(|&y| self.table[x * n + y] == 0).unwrap_or(0))
            .collect();
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_are_groups() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::dihedral(5),
            FiniteGroup::symmetric(3),
            FiniteGroup::symmetric(4),
            FiniteGroup::alternating(4),
            FiniteGroup::alternating(5),
            FiniteGroup::quaternion(),
            FiniteGroup::semidirect_cyclic(3, 4, 2),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)),
        ] {
            assert!(g.violations().is_empty());
        }
    }

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::alternating(5).order(), 60);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert!(!FiniteGroup::symmetric(3).is_abelian());
        assert_eq!(FiniteGroup::quaternion().center().len(), 2);
        assert_eq!(FiniteGroup::symmetric(3).center(), vec![0]);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]], None).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = FiniteGroup::symmetric(3);
        let s = serde_json::to_string(&g).unwrap();
        let h: FiniteGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
    }
}
