//! Evaluation of `K_A(M, g) = d^{g−|υ|−|λ|} λ_υ P(⊗_l Ψ_l Λ_l)` with `d = dim A_1`.
//!
//! The production path builds a tensor network out of small nodes (`φΛ`,
//! one `Δ` per split, `S` on negative points, one `μ` per product, `λ`) and
//! contracts it greedily. The naive path materializes the full tensor and
//! exists to cross-check the network on small diagrams.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::diagram::{DiagramError, HeegaardDiagram, Id};
use crate::hopf::{HopfChiCoalgebra, HopfError, Integrals};
use crate::labeling::{check_labeling, ChiLabeling};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("inconsistent slot sets: {0}")]
    InconsistentSlotSets(String),
    #[error("the crossed module of the labeling must be trivial for this operation")]
    NotTrivialXmod,
}

/// A tensor whose factors are indexed by intersection points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTensor {
    /// `(point id, grading)` per factor.
    pub slots: Vec<(Id, usize)>,
    pub dims: Vec<usize>,
    /// Row-major, later slots fastest.
    pub data: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantValue {
    pub value: Scalar,
    /// `g − |υ| − |λ|`.
    pub normalization_exponent: i64,
}

impl InvariantValue {
    pub fn to_json(&self, lab: &ChiLabeling) -> Value {
        json!({
            "value": self.value.render(),
            "field": self.value.field(),
            "normalization_exponent": self.normalization_exponent,
            "labeling": lab,
        })
    }
}

/// Applies `m` to factor `k` of a row-major tensor.
fn apply_on_axis(data: &[Scalar], dims: &[usize], k: usize, m: &Matrix) -> Vec<Scalar> {
    let pre: usize = dims[..k].iter().product();
    let post: usize = dims[k + 1..].iter().product();
    let (din, dout) = (dims[k], m.rows);
    debug_assert_eq!(m.cols, din);
    let f = m.field;
    let mut out = vec![Scalar::zero(f); pre * dout * post];
    for p in 0..pre {
        for j in 0..din {
            for q in 0..post {
                let v = &data[(p * din + j) * post + q];
                if v.is_zero() {
                    continue;
                }
                for i in 0..dout {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        out[(p * dout + i) * post + q].add_mul(c, v);
                    }
                }
            }
        }
    }
    out
}

/// `out[perm-applied index] = data[index]`; output slot `t` is input slot `order[t]`.
fn permute(data: &[Scalar], dims: &[usize], order: &[usize]) -> Vec<Scalar> {
    let n = dims.len();
    let out_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let mut out_stride = vec![1usize; n];
    for t in (0..n.saturating_sub(1)).rev() {
        out_stride[t] = out_stride[t + 1] * out_dims[t + 1];
    }
    let mut stride_of_in = vec![0usize; n];
    for (t, &k) in order.iter().enumerate() {
        stride_of_in[k] = out_stride[t];
    }
    let f = data
        .first()
        .map(|s| s.field())
        .unwrap_or(crate::FieldDescriptor::Rationals);
    let mut out = vec![Scalar::zero(f); data.len()];
    let mut idx = vec![0usize; n];
    for v in data {
        if !v.is_zero() {
            let o: usize = idx.iter().zip(&stride_of_in).map(|(i, s)| i * s).sum();
            out[o] = v.clone();
        }
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

struct Setup<'a> {
    d: &'a HeegaardDiagram,
    lab: &'a ChiLabeling,
    a: &'a HopfChiCoalgebra,
    ints: &'a Integrals,
}

impl Setup<'_> {
    /// `α(s)` and `ν_s` of a point.
    fn point(&self, upper: &str, sign: i8) -> (usize, usize) {
        let x = self.lab.alpha[upper];
        let g = if sign > 0 { x } else { self.a.xmod.h().inv(x) };
        (x, g)
    }

    fn phi_lambda(&self, l: &str) -> Vec<Scalar> {
        self.a.phi(0, self.lab.beta[l]).apply(&self.ints.big_lambda)
    }
}

fn check_inputs(
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
) -> Result<(), InvariantError> {
    if let Some(v) = d.validate().into_iter().next() {
        return Err(InvariantError::InvalidDiagram(v.to_string()));
    }
    if let Some(v) = check_labeling(d, &a.xmod, lab).into_iter().next() {
        return Err(InvariantError::InvalidLabeling(v.to_string()));
    }
    if ints.big_lambda.len() != a.d1() || ints.lambda.len() != a.n_h() {
        return Err(InvariantError::GradingMismatch(
            "integrals do not match the coalgebra".into(),
        ));
    }
    Ok(())
}

fn exponent(d: &HeegaardDiagram) -> i64 {
    d.genus as i64 - d.uppers.len() as i64 - d.lowers.len() as i64
}

fn normalize(
    a: &HopfChiCoalgebra,
    d: &HeegaardDiagram,
    raw: Scalar,
) -> Result<InvariantValue, InvariantError> {
    let e = exponent(d);
    let dv = Scalar::from_i64(a.field, a.d1() as i64);
    let scale = dv
        .pow(e)
        .map_err(|err| InvariantError::Hopf(HopfError::InvalidInput(err.to_string())))?;
    Ok(InvariantValue {
        value: &scale * &raw,
        normalization_exponent: e,
    })
}

/// `K_A(D, lab)`, computing the integrals of `a` first.
pub fn compute_invariant(
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
) -> Result<InvariantValue, InvariantError> {
    let ints = a.compute_integrals()?;
    compute_invariant_with(d, lab, a, &ints)
}

/// `K_A(D, lab)` with precomputed integrals; `a` is trusted to be valid.
pub fn compute_invariant_with(
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
) -> Result<InvariantValue, InvariantError> {
    check_inputs(d, lab, a, ints)?;
    let raw = network_contract(&Setup { d, lab, a, ints })?;
    normalize(a, d, raw)
}

/// The Kuperberg invariant of `A_1` for a Hopf algebra over `1 → 1`.
pub fn kuperberg(
    d: &HeegaardDiagram,
    a: &HopfChiCoalgebra,
) -> Result<InvariantValue, InvariantError> {
    if a.xmod.e().order() != 1 || a.xmod.h().order() != 1 {
        return Err(InvariantError::NotTrivialXmod);
    }
    compute_invariant(d, &ChiLabeling::trivial(d), a)
}

// ---------------------------------------------------------------- network

#[derive(Clone, Debug)]
struct Node {
    legs: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<Scalar>,
}

struct Network {
    nodes: Vec<Option<Node>>,
    scalar: Scalar,
    next_leg: usize,
}

impl Network {
    fn leg(&mut self) -> usize {
        self.next_leg += 1;
        self.next_leg - 1
    }

    fn add(&mut self, legs: Vec<usize>, dims: Vec<usize>, data: Vec<Scalar>) {
        debug_assert_eq!(data.len(), dims.iter().product::<usize>());
        if legs.is_empty() {
            self.scalar = &self.scalar * &data[0];
        } else {
            self.nodes.push(Some(Node { legs, dims, data }));
        }
    }

    fn contract_pair(a: Node, b: Node) -> Node {
        let shared: Vec<usize> = a
            .legs
            .iter()
            .copied()
            .filter(|l| b.legs.contains(l))
            .collect();
        let fa: Vec<usize> = (0..a.legs.len())
            .filter(|&k| !shared.contains(&a.legs[k]))
            .collect();
        let fb: Vec<usize> = (0..b.legs.len())
            .filter(|&k| !shared.contains(&b.legs[k]))
            .collect();
        let sa: Vec<usize> = shared
            .iter()
            .map(|l| a.legs.iter().position(|x| x == l).unwrap())
            .collect();
        let sb: Vec<usize> = shared
            .iter()
            .map(|l| b.legs.iter().position(|x| x == l).unwrap())
            .collect();
        let oa: Vec<usize> = fa.iter().chain(&sa).copied().collect();
        let ob: Vec<usize> = sb.iter().chain(&fb).copied().collect();
        let rows: usize = fa.iter().map(|&k| a.dims[k]).product();
        let inner: usize = sa.iter().map(|&k| a.dims[k]).product();
        let cols: usize = fb.iter().map(|&k| b.dims[k]).product();
        let f = a.data[0].field();
        let ma = Matrix {
            rows,
            cols: inner,
            field: f,
            data: permute(&a.data, &a.dims, &oa),
        };
        let mb = Matrix {
            rows: inner,
            cols,
            field: f,
            data: permute(&b.data, &b.dims, &ob),
        };
        let m = ma.mul(&mb);
        Node {
            legs: fa
                .iter()
                .map(|&k| a.legs[k])
                .chain(fb.iter().map(|&k| b.legs[k]))
                .collect(),
            dims: fa
                .iter()
                .map(|&k| a.dims[k])
                .chain(fb.iter().map(|&k| b.dims[k]))
                .collect(),
            data: m.data,
        }
    }

    /// Greedy pairwise contraction by smallest result, ties by position.
    fn run(mut self) -> Scalar {
        loop {
            let live: Vec<usize> = (0..self.nodes.len())
                .filter(|&i| self.nodes[i].is_some())
                .collect();
            if live.is_empty() {
                return self.scalar;
            }
            let mut owner: HashMap<usize, Vec<usize>> = HashMap::new();
            for &i in &live {
                for &l in &self.nodes[i].as_ref().unwrap().legs {
                    owner.entry(l).or_default().push(i);
                }
            }
            let mut best: Option<(usize, usize, usize)> = None;
            for pair in owner.values() {
                if let [i, j] = pair[..] {
                    let (i, j) = (i.min(j), i.max(j));
                    let (a, b) = (
                        self.nodes[i].as_ref().unwrap(),
                        self.nodes[j].as_ref().unwrap(),
                    );
                    let size: usize = a
                        .legs
                        .iter()
                        .zip(&a.dims)
                        .filter(|(l, _)| !b.legs.contains(l))
                        .map(|(_, d)| d)
                        .chain(
                            b.legs
                                .iter()
                                .zip(&b.dims)
                                .filter(|(l, _)| !a.legs.contains(l))
                                .map(|(_, d)| d),
                        )
                        .product();
                    if best.is_none_or(|(s, bi, bj)| (size, i, j) < (s, bi, bj)) {
                        best = Some((size, i, j));
                    }
                }
            }
            let (_, i, j) = best.expect("every leg joins two nodes");
            let a = self.nodes[i].take().unwrap();
            let b = self.nodes[j].take().unwrap();
            let c = Self::contract_pair(a, b);
            if c.legs.is_empty() {
                self.scalar = &self.scalar * &c.data[0];
            } else {
                self.nodes[i] = Some(c);
            }
            if self.scalar.is_zero() {
                return self.scalar;
            }
        }
    }
}

fn network_contract(s: &Setup) -> Result<Scalar, InvariantError> {
    let (d, a) = (s.d, s.a);
    let f = a.field;
    let h = a.xmod.h();
    let pts = d.points()?;
    let mut net = Network {
        nodes: Vec::new(),
        scalar: Scalar::one(f),
        next_leg: 0,
    };
    // The leg joining each point's lower-side factor to its upper-side factor.
    let mut upper_leg: HashMap<&str, usize> = HashMap::new();
    for (id, info) in &pts {
        let u = &d.uppers[info.upper];
        let x = s.lab.alpha[&u.id];
        if a.dim(x) == 0 {
            return Ok(Scalar::zero(f));
        }
        let leg = net.leg();
        upper_leg.insert(id.as_str(), leg);
    }

    for l in &d.lowers {
        let v = s.phi_lambda(&l.id);
        let n = l.points.len();
        if n == 0 {
            net.add(vec![], vec![], vec![crate::hopf::dot(&a.counit, &v)]);
            continue;
        }
        let info: Vec<(usize, usize, i8)> = l
            .points
            .iter()
            .map(|p| {
                let pi = &pts[p];
                let (x, g) = s.point(&d.uppers[pi.upper].id, pi.sign);
                (x, g, pi.sign)
            })
            .collect();
        // Lower-side legs: the Ψ_s input for negative points, else the point leg.
        let mut lower_legs = Vec::with_capacity(n);
        for (k, p) in l.points.iter().enumerate() {
            let (x, g, sign) = info[k];
            if sign > 0 {
                lower_legs.push(upper_leg[p.as_str()]);
            } else {
                let inl = net.leg();
                let m = a.s(x);
                net.add(
                    vec![upper_leg[p.as_str()], inl],
                    vec![a.dim(x), a.dim(g)],
                    m.data.clone(),
                );
                lower_legs.push(inl);
            }
        }
        let mut prefix = vec![0usize; n + 1];
        for k in 0..n {
            prefix[k + 1] = h.mul(prefix[k], info[k].1);
        }
        let mut top = if n == 1 { lower_legs[0] } else { net.leg() };
        net.add(vec![top], vec![a.dim(prefix[n])], v);
        // Δ_{P_{k−1}, g_k} splits the leg of grading P_k, for k = n down to 2.
        for k in (2..=n).rev() {
            let left = if k == 2 { lower_legs[0] } else { net.leg() };
            let right = lower_legs[k - 1];
            let (pl, g, pk) = (prefix[k - 1], info[k - 1].1, prefix[k]);
            if a.dim(pl) == 0 || a.dim(pk) == 0 {
                return Ok(Scalar::zero(f));
            }
            net.add(
                vec![left, right, top],
                vec![a.dim(pl), a.dim(g), a.dim(pk)],
                a.delta(pl, g).data.clone(),
            );
            top = left;
        }
    }

    for u in &d.uppers {
        let x = s.lab.alpha[&u.id];
        let dx = a.dim(x);
        let lam = &s.ints.lambda[x];
        let n = u.points.len();
        if n == 0 {
            net.add(vec![], vec![], vec![crate::hopf::dot(lam, &a.unit[x])]);
            continue;
        }
        let mut acc = upper_leg[u.points[0].id.as_str()];
        for p in &u.points[1..] {
            let out = net.leg();
            net.add(
                vec![out, acc, upper_leg[p.id.as_str()]],
                vec![dx, dx, dx],
                a.mu[x].data.clone(),
            );
            acc = out;
        }
        net.add(vec![acc], vec![dx], lam.clone());
    }
    Ok(net.run())
}

// ---------------------------------------------------------------- naive path

/// `Λ_l`, with slots in basepoint order graded by `α(s)^{ν_s}`.
pub fn lower_tensor(
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
    l: &str,
) -> Result<GradedTensor, InvariantError> {
    let lower = d
        .lower(l)
        .ok_or_else(|| DiagramError::UnknownCircle(l.to_string()))?;
    let pts = d.points()?;
    let h = a.xmod.h();
    let s = Setup { d, lab, a, ints };
    let e = *lab
        .beta
        .get(l)
        .ok_or_else(|| InvariantError::InvalidLabeling(format!("no label for {l}")))?;
    let v = a.phi(0, e).apply(&ints.big_lambda);
    let slots: Vec<(Id, usize)> = lower
        .points
        .iter()
        .map(|p| {
            let pi = &pts[p];
            (p.clone(), s.point(&d.uppers[pi.upper].id, pi.sign).1)
        })
        .collect();
    let n = slots.len();
    let total = slots.iter().fold(0, |acc, (_, g)| h.mul(acc, *g));
    if total != a.xmod.chi(e) {
        return Err(InvariantError::GradingMismatch(format!(
            "omega({l}) does not evaluate to chi(beta({l}))"
        )));
    }
    if n == 0 {
        return Ok(GradedTensor {
            slots,
            dims: vec![],
            data: vec![crate::hopf::dot(&a.counit, &v)],
        });
    }
    let mut prefix = vec![0usize; n + 1];
    for k in 0..n {
        prefix[k + 1] = h.mul(prefix[k], slots[k].1);
    }
    let mut data = v;
    for k in (2..=n).rev() {
        let rest = data.len() / a.dim(prefix[k]).max(1);
        let m = Matrix {
            rows: a.dim(prefix[k]),
            cols: rest,
            field: a.field,
            data,
        };
        data = a.delta(prefix[k - 1], slots[k - 1].1).mul(&m).data;
    }
    Ok(GradedTensor {
        dims: slots.iter().map(|(_, g)| a.dim(*g)).collect(),
        slots,
        data,
    })
}

/// `Ψ_l`: `S_{α(s)}` on each negative slot, after which slot gradings are `α(s)`.
pub fn apply_antipodes(
    t: &GradedTensor,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
) -> Result<GradedTensor, InvariantError> {
    let pts = d.points()?;
    let mut out = t.clone();
    for (k, (p, g)) in t.slots.iter().enumerate() {
        let pi = pts
            .get(p)
            .ok_or_else(|| InvariantError::InconsistentSlotSets(format!("unknown point {p}")))?;
        let x = lab.alpha[&d.uppers[pi.upper].id];
        let expect = if pi.sign > 0 { x } else { a.xmod.h().inv(x) };
        if *g != expect {
            return Err(InvariantError::GradingMismatch(format!(
                "slot {p} has grading {g}, expected {expect}"
            )));
        }
        if pi.sign < 0 {
            out.data = apply_on_axis(&out.data, &out.dims, k, a.s(x));
            out.dims[k] = a.dim(x);
        }
        out.slots[k].1 = x;
    }
    Ok(out)
}

/// The tensor product of `tensors`, reordered so points run through the
/// upper circles in order, each from its basepoint.
pub fn permute_to_upper(
    tensors: &[GradedTensor],
    d: &HeegaardDiagram,
) -> Result<GradedTensor, InvariantError> {
    let mut slots = Vec::new();
    let mut dims = Vec::new();
    let mut data: Vec<Scalar> = Vec::new();
    for t in tensors {
        slots.extend(t.slots.iter().cloned());
        dims.extend(t.dims.iter().copied());
        data = if data.is_empty() {
            t.data.clone()
        } else {
            crate::hopf::kron_vec(&data, &t.data)
        };
    }
    let pos: HashMap<&str, usize> = slots
        .iter()
        .enumerate()
        .map(|(i, (p, _))| (p.as_str(), i))
        .collect();
    let order: Vec<usize> = d
        .uppers
        .iter()
        .flat_map(|u| u.points.iter())
        .map(|p| {
            pos.get(p.id.as_str()).copied().ok_or_else(|| {
                InvariantError::InconsistentSlotSets(format!("point {} has no slot", p.id))
            })
        })
        .collect::<Result<_, _>>()?;
    if order.len() != slots.len() {
        return Err(InvariantError::InconsistentSlotSets(
            "slot count differs from point count".into(),
        ));
    }
    Ok(GradedTensor {
        data: permute(&data, &dims, &order),
        slots: order.iter().map(|&k| slots[k].clone()).collect(),
        dims: order.iter().map(|&k| dims[k]).collect(),
    })
}

/// `λ_υ(t)` for a tensor in upper-induced order.
pub fn upper_contract(
    t: &GradedTensor,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
) -> Result<Scalar, InvariantError> {
    let f = a.field;
    let mut acc = Scalar::one(f);
    let mut data = t.data.clone();
    let mut k = 0;
    for u in &d.uppers {
        let x = lab.alpha[&u.id];
        let n = u.points.len();
        let lam = &ints.lambda[x];
        if n == 0 {
            acc = &acc * &crate::hopf::dot(lam, &a.unit[x]);
            continue;
        }
        for (j, p) in u.points.iter().enumerate() {
            if t.slots.get(k + j).map(|s| (&s.0, s.1)) != Some((&p.id, x)) {
                return Err(InvariantError::GradingMismatch(format!(
                    "slot {} out of place",
                    p.id
                )));
            }
        }
        // λ_x(b_{i1}⋯b_{in}) for every multi-index.
        let dx = a.dim(x);
        let mut prods: Vec<Vec<Scalar>> = (0..dx)
            .map(|i| {
                let mut v = vec![Scalar::zero(f); dx];
                v[i] = Scalar::one(f);
                v
            })
            .collect();
        for _ in 1..n {
            let mut next = Vec::with_capacity(prods.len() * dx);
            for p in &prods {
                for i in 0..dx {
                    next.push(a.mu[x].apply(&crate::hopf::kron_vec(p, &prods_basis(f, dx, i))));
                }
            }
            prods = next;
        }
        let cov: Vec<Scalar> = prods.iter().map(|p| crate::hopf::dot(lam, p)).collect();
        let rest = data.len() / cov.len().max(1);
        let m = Matrix {
            rows: cov.len(),
            cols: rest,
            field: f,
            data,
        };
        data = m.pull_back(&cov);
        k += n;
    }
    Ok(&acc * &data[0])
}

fn prods_basis(f: crate::FieldDescriptor, d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(f); d];
    v[i] = Scalar::one(f);
    v
}

/// The full product path; exponential in the number of points.
pub fn compute_invariant_naive(
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
) -> Result<InvariantValue, InvariantError> {
    check_inputs(d, lab, a, ints)?;
    let mut ts = Vec::new();
    for l in &d.lowers {
        let t = lower_tensor(d, lab, a, ints, &l.id)?;
        ts.push(apply_antipodes(&t, d, lab, a)?);
    }
    let full = permute_to_upper(&ts, d)?;
    let raw = upper_contract(&full, d, lab, a, ints)?;
    normalize(a, d, raw)
}

/// `d⁻¹ λ_x μ_x^p π Δ^p φ_{1,e}(Λ)` on `L(p, q)` with labels `(x, e)`, where
/// `π` puts the slots in the order the upper circle meets them.
pub fn lens_formula(
    p: u32,
    q: u32,
    x: usize,
    e: usize,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
) -> Result<Scalar, InvariantError> {
    let order: Vec<usize> = (0..p as usize)
        .map(|j| j * q as usize % p as usize)
        .collect();
    lens_formula_with_order(p, x, e, a, ints, &order)
}

/// As [`lens_formula`] with an arbitrary slot order.
pub fn lens_formula_with_order(
    p: u32,
    x: usize,
    e: usize,
    a: &HopfChiCoalgebra,
    ints: &Integrals,
    order: &[usize],
) -> Result<Scalar, InvariantError> {
    let d = HeegaardDiagram::lens(p, 1)?;
    let lab = ChiLabeling {
        alpha: [("u".to_string(), x)].into(),
        beta: [("l".to_string(), e)].into(),
    };
    let t = lower_tensor(&d, &lab, a, ints, "l")?;
    let permuted = GradedTensor {
        data: permute(&t.data, &t.dims, order),
        slots: order.iter().map(|&k| t.slots[k].clone()).collect(),
        dims: order.iter().map(|&k| t.dims[k]).collect(),
    };
    // Reuse the upper contraction with the upper list matching the new order.
    let mut d2 = d.clone();
    d2.uppers[0].points = permuted
        .slots
        .iter()
        .map(|(id, _)| {
            d.uppers[0]
                .points
                .iter()
                .find(|pt| &pt.id == id)
                .unwrap()
                .clone()
        })
        .collect();
    let raw = upper_contract(&permuted, &d2, &lab, a, ints)?;
    let dinv = Scalar::from_i64(a.field, a.d1() as i64)
        .inv()
        .map_err(|err| InvariantError::Hopf(HopfError::InvalidInput(err.to_string())))?;
    Ok(&dinv * &raw)
}
