//! Finite-type Hopf χ-coalgebras given by structure constants.
//!
//! Every linear map is a [`Matrix`] whose rows index the target basis. The
//! basis of `A_x ⊗ A_y` is `i·d_y + j`. Gradings are element indices of `H`;
//! index 0 is the unit.

mod builtins;
mod integrals;
mod json;

use crate::linalg::{flip, Matrix};
use crate::scalar::{FieldDescriptor, Scalar};
use crate::xmod::{CrossedModule, Violation};

pub use integrals::Integrals;
pub use json::HopfJsonError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("characteristic {p} divides dim A_1 = {d}")]
    CharacteristicDividesDimension { p: u64, d: usize },
    #[error("the {what} solution space has dimension {dim}, expected 1")]
    NonUniqueIntegral { what: &'static str, dim: usize },
    #[error("integral postcondition violated: {0}")]
    PostconditionViolated(String),
    #[error("not a bicharacter: {0}")]
    NotABicharacter(String),
    #[error("characteristic {0} is not allowed here")]
    BadCharacteristic(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// `A = {A_x}` with `μ, η, Δ, ε, S, φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfChiCoalgebra {
    pub field: FieldDescriptor,
    pub xmod: CrossedModule,
    pub dims: Vec<usize>,
    /// `μ_x : A_x ⊗ A_x → A_x`.
    pub mu: Vec<Matrix>,
    pub unit: Vec<Vec<Scalar>>,
    /// `Δ_{x,y} : A_{xy} → A_x ⊗ A_y` at index `x·|H| + y`.
    pub coproduct: Vec<Matrix>,
    /// `ε : A_1 → 𝕜`.
    pub counit: Vec<Scalar>,
    /// `S_x : A_{x⁻¹} → A_x`.
    pub antipode: Vec<Matrix>,
    /// `φ_{x,e} : A_x → A_{χ(e)x}` at index `x·|E| + e`.
    pub action: Vec<Matrix>,
}

impl HopfChiCoalgebra {
    pub fn n_h(&self) -> usize {
        self.xmod.h().order()
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    /// `dim A_1`.
    pub fn d1(&self) -> usize {
        self.dims[0]
    }

    pub fn delta(&self, x: usize, y: usize) -> &Matrix {
        &self.coproduct[x * self.n_h() + y]
    }

    pub fn phi(&self, x: usize, e: usize) -> &Matrix {
        &self.action[x * self.xmod.e().order() + e]
    }

    pub fn s(&self, x: usize) -> &Matrix {
        &self.antipode[x]
    }

    /// The product of two vectors of `A_x`.
    pub fn mul_vec(&self, x: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        mul_with(&self.mu[x], self.dims[x], a, b)
    }

    /// The product in `A_x ⊗ A_y`.
    pub fn mul_tensor(&self, x: usize, y: usize, p: &[Scalar], q: &[Scalar]) -> Vec<Scalar> {
        let (dx, dy) = (self.dims[x], self.dims[y]);
        let mut out = vec![Scalar::zero(self.field); dx * dy];
        for (i, pi) in p.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, qj) in q.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = pi * qj;
                let (a1, a2) = (i / dy, i % dy);
                let (b1, b2) = (j / dy, j % dy);
                for k1 in 0..dx {
                    let m1 = self.mu[x].get(k1, a1 * dx + b1);
                    if m1.is_zero() {
                        continue;
                    }
                    let c1 = &c * m1;
                    for k2 in 0..dy {
                        let m2 = self.mu[y].get(k2, a2 * dy + b2);
                        if !m2.is_zero() {
                            out[k1 * dy + k2].add_mul(&c1, m2);
                        }
                    }
                }
            }
        }
        out
    }

    fn basis(&self, d: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(self.field); d];
        v[i] = Scalar::one(self.field);
        v
    }

    /// Structural consistency of every matrix shape.
    pub fn check_dimensions(&self) -> Result<(), HopfError> {
        let (nh, ne) = (self.n_h(), self.xmod.e().order());
        let h = self.xmod.h();
        let bad = |s: String| Err(HopfError::DimensionMismatch(s));
        if self.dims.len() != nh
            || self.mu.len() != nh
            || self.unit.len() != nh
            || self.antipode.len() != nh
        {
            return bad(format!("expected {nh} graded components"));
        }
        if self.coproduct.len() != nh * nh {
            return bad(format!("expected {} coproduct matrices", nh * nh));
        }
        if self.action.len() != nh * ne {
            return bad(format!("expected {} action matrices", nh * ne));
        }
        let shape = |m: &Matrix, r: usize, c: usize, what: String| {
            if m.rows != r || m.cols != c || m.field != self.field {
                Err(HopfError::DimensionMismatch(format!(
                    "{what} is {}x{}, expected {r}x{c}",
                    m.rows, m.cols
                )))
            } else {
                Ok(())
            }
        };
        for x in 0..nh {
            let d = self.dims[x];
            shape(&self.mu[x], d, d * d, format!("mu_{x}"))?;
            if self.unit[x].len() != d {
                return bad(format!("unit_{x} has length {}", self.unit[x].len()));
            }
            shape(&self.antipode[x], d, self.dims[h.inv(x)], format!("S_{x}"))?;
            for y in 0..nh {
                shape(
                    self.delta(x, y),
                    d * self.dims[y],
                    self.dims[h.mul(x, y)],
                    format!("Delta_{x},{y}"),
                )?;
            }
            for e in 0..ne {
                let t = h.mul(self.xmod.chi(e), x);
                shape(self.phi(x, e), self.dims[t], d, format!("phi_{x},{e}"))?;
            }
        }
        if self.counit.len() != self.dims[0] {
            return bad("counit length differs from dim A_1".into());
        }
        if !self.xmod.check().is_empty() {
            return Err(HopfError::InvalidInput("crossed module is invalid".into()));
        }
        Ok(())
    }

    /// Every violated axiom instance, checked on basis elements.
    pub fn check_axioms(&self) -> Result<Vec<Violation>, HopfError> {
        self.check_dimensions()?;
        let f = self.field;
        let h = self.xmod.h().clone();
        let (nh, ne) = (h.order(), self.xmod.e().order());
        let id = |d: usize| Matrix::identity(f, d);
        let col = |v: &[Scalar]| Matrix::from_columns(f, v.len(), &[v.to_vec()]);
        let row = |v: &[Scalar]| Matrix::from_rows(f, vec![v.to_vec()], v.len());
        let mut out = Vec::new();
        let mut push = |axiom: &str, detail: String| out.push(Violation::new(axiom, detail));

        for x in 0..nh {
            let (d, mu) = (self.dims[x], &self.mu[x]);
            if mu.mul(&mu.kron(&id(d))) != mu.mul(&id(d).kron(mu)) {
                push("associativity", format!("x={x}"));
            }
            let eta = col(&self.unit[x]);
            if mu.mul(&eta.kron(&id(d))) != id(d) || mu.mul(&id(d).kron(&eta)) != id(d) {
                push("unitality", format!("x={x}"));
            }
        }
        for x in 0..nh {
            for y in 0..nh {
                let xy = h.mul(x, y);
                for z in 0..nh {
                    let l = self
                        .delta(x, y)
                        .kron(&id(self.dims[z]))
                        .mul(self.delta(xy, z));
                    let r = id(self.dims[x])
                        .kron(self.delta(y, z))
                        .mul(self.delta(x, h.mul(y, z)));
                    if l != r {
                        push("coassociativity", format!("x={x},y={y},z={z}"));
                    }
                }
            }
        }
        let eps = row(&self.counit);
        for x in 0..nh {
            let d = self.dims[x];
            if eps.kron(&id(d)).mul(self.delta(0, x)) != id(d)
                || id(d).kron(&eps).mul(self.delta(x, 0)) != id(d)
            {
                push("counitality", format!("x={x}"));
            }
        }
        for x in 0..nh {
            for y in 0..nh {
                let xy = h.mul(x, y);
                let dxy = self.dims[xy];
                let dl = self.delta(x, y);
                let u = dl.apply(&self.unit[xy]);
                let mut ok = u == self.unit_tensor(x, y);
                let imgs: Vec<Vec<Scalar>> = (0..dxy).map(|i| dl.column(i)).collect();
                'outer: for i in 0..dxy {
                    for j in 0..dxy {
                        let lhs =
                            dl.apply(&self.mul_vec(xy, &self.basis(dxy, i), &self.basis(dxy, j)));
                        if lhs != self.mul_tensor(x, y, &imgs[i], &imgs[j]) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                if !ok {
                    push("coproduct-multiplicative", format!("x={x},y={y}"));
                }
            }
        }
        {
            let d = self.dims[0];
            let ev = |v: &[Scalar]| dot(&self.counit, v);
            let mut ok = ev(&self.unit[0]).is_one();
            for i in 0..d {
                for j in 0..d {
                    let p = ev(&self.mul_vec(0, &self.basis(d, i), &self.basis(d, j)));
                    if p != &self.counit[i] * &self.counit[j] {
                        ok = false;
                    }
                }
            }
            if !ok {
                push("counit-multiplicative", String::new());
            }
        }
        for x in 0..nh {
            let xi = h.inv(x);
            let d = self.dims[x];
            let target = col(&self.unit[x]).mul(&eps);
            let l = self.mu[x]
                .mul(&self.s(x).kron(&id(d)))
                .mul(self.delta(xi, x));
            let r = self.mu[x]
                .mul(&id(d).kron(self.s(x)))
                .mul(self.delta(x, xi));
            if l != target || r != target {
                push("antipode", format!("x={x}"));
            }
            if self.s(x).mul(self.s(xi)) != id(d) {
                push("involutivity", format!("x={x}"));
            }
        }
        for x in 0..nh {
            if *self.phi(x, 0) != id(self.dims[x]) {
                push("action-identity", format!("x={x}"));
            }
            for e in 0..ne {
                let cx = h.mul(self.xmod.chi(e), x);
                let p = self.phi(x, e);
                for g in 0..ne {
                    let fe = self.xmod.e().mul(g, e);
                    if self.phi(cx, g).mul(p) != *self.phi(x, fe) {
                        push("action-composition", format!("x={x},e={e},f={g}"));
                    }
                }
                let d = self.dims[x];
                let mut ok = p.apply(&self.unit[x]) == self.unit[cx];
                let imgs: Vec<Vec<Scalar>> = (0..d).map(|i| p.column(i)).collect();
                'outer: for i in 0..d {
                    for j in 0..d {
                        let lhs = p.apply(&self.mul_vec(x, &self.basis(d, i), &self.basis(d, j)));
                        if lhs != self.mul_vec(cx, &imgs[i], &imgs[j]) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                if !ok {
                    push("action-multiplicative", format!("x={x},e={e}"));
                }
            }
        }
        let ee = self.xmod.e();
        for x in 0..nh {
            for y in 0..nh {
                for e in 0..ne {
                    for g in 0..ne {
                        let cx = h.mul(self.xmod.chi(e), x);
                        let cy = h.mul(self.xmod.chi(g), y);
                        let l = self.phi(x, e).kron(self.phi(y, g)).mul(self.delta(x, y));
                        let tw = ee.mul(e, self.xmod.act(x, g));
                        let r = self.delta(cx, cy).mul(self.phi(h.mul(x, y), tw));
                        if l != r {
                            push("action-coproduct", format!("x={x},y={y},e={e},f={g}"));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn unit_tensor(&self, x: usize, y: usize) -> Vec<Scalar> {
        // 1 ⊗ 1, the unit of A_x ⊗ A_y.
        kron_vec(&self.unit[x], &self.unit[y])
    }

    /// `A^op`: each `μ_x` composed with the flip, `S^op_x = (S_{x⁻¹})⁻¹`.
    pub fn opposite(&self) -> Result<HopfChiCoalgebra, HopfError> {
        self.check_dimensions()?;
        let h = self.xmod.h();
        let mut a = self.clone();
        for x in 0..self.n_h() {
            let d = self.dims[x];
            a.mu[x] = self.mu[x].mul(&flip(self.field, d, d));
            a.antipode[x] = self.s(h.inv(x)).inverse().ok_or_else(|| {
                HopfError::InvalidInput(format!("S_{} is not invertible", h.inv(x)))
            })?;
        }
        Ok(a)
    }

    /// `A^cop`: `A^cop_x = A_{x⁻¹}`, `Δ^cop_{x,y} = σΔ_{y⁻¹,x⁻¹}`, `S^cop_x = S_x⁻¹`,
    /// `φ^cop_{x,e} = φ_{x⁻¹, ^{x⁻¹}(e⁻¹)}`.
    pub fn coopposite(&self) -> Result<HopfChiCoalgebra, HopfError> {
        self.check_dimensions()?;
        let h = self.xmod.h();
        let e = self.xmod.e();
        let (nh, ne) = (self.n_h(), e.order());
        let inv = |x: usize| h.inv(x);
        let mut a = self.clone();
        for x in 0..nh {
            a.dims[x] = self.dims[inv(x)];
            a.mu[x] = self.mu[inv(x)].clone();
            a.unit[x] = self.unit[inv(x)].clone();
            a.antipode[x] = self
                .s(x)
                .inverse()
                .ok_or_else(|| HopfError::InvalidInput(format!("S_{x} is not invertible")))?;
            for y in 0..nh {
                let (xi, yi) = (inv(x), inv(y));
                let sw = flip(self.field, self.dims[yi], self.dims[xi]);
                a.coproduct[x * nh + y] = sw.mul(self.delta(yi, xi));
            }
            for g in 0..ne {
                let tw = self.xmod.act(inv(x), e.inv(g));
                a.action[x * ne + g] = self.phi(inv(x), tw).clone();
            }
        }
        Ok(a)
    }
}

pub(crate) fn mul_with(mu: &Matrix, d: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let f = mu.field;
    let mut out = vec![Scalar::zero(f); d];
    for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let c = ai * bj;
            for (k, o) in out.iter_mut().enumerate() {
                let m = mu.get(k, i * d + j);
                if !m.is_zero() {
                    o.add_mul(&c, m);
                }
            }
        }
    }
    out
}

pub(crate) fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

pub(crate) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero(
        a.first()
            .or(b.first())
            .map(|x| x.field())
            .unwrap_or(FieldDescriptor::Rationals),
    );
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s.add_mul(x, y);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp4() -> HopfChiCoalgebra {
        HopfChiCoalgebra::kp4(FieldDescriptor::Rationals).unwrap()
    }

    #[test]
    fn kp4_satisfies_axioms() {
        assert_eq!(kp4().check_axioms().unwrap(), vec![]);
    }

    #[test]
    fn kp4_quoted_constants() {
        let a = kp4();
        let q = FieldDescriptor::Rationals;
        let s = |n| Scalar::from_i64(q, n);
        // Δ_{0,1}(v) = a² ⊗ v: basis index of a² ⊗ v is 2·4 + 2.
        let col = a.delta(0, 1).column(2);
        let mut want = vec![s(0); 16];
        want[10] = s(1);
        assert_eq!(col, want);
        // φ_{1,n}(u) = (−1)^n u.
        assert_eq!(a.phi(1, 1).column(1), vec![s(0), s(-1), s(0), s(0)]);
        assert_eq!(a.phi(1, 2).column(1), vec![s(0), s(1), s(0), s(0)]);
        assert_eq!(a.s(1).mul(a.s(1)), Matrix::identity(q, 4));
    }

    #[test]
    fn perturbed_coproduct_named() {
        let mut a = kp4();
        let i = 1;
        let m = &mut a.coproduct[i];
        let v = m.get(5, 1) + &Scalar::one(m.field);
        m.set(5, 1, v);
        let v = a.check_axioms().unwrap();
        assert!(
            v.iter().any(|v| v.axiom == "coproduct-multiplicative"),
            "{v:?}"
        );
    }

    #[test]
    fn op_and_cop_are_valid() {
        let a = kp4();
        let op = a.opposite().unwrap();
        assert_eq!(op.check_axioms().unwrap(), vec![]);
        assert_eq!(op.opposite().unwrap(), a);
        let cop = a.coopposite().unwrap();
        assert_eq!(cop.check_axioms().unwrap(), vec![]);
        let g = HopfChiCoalgebra::group_algebra_trivial(
            FieldDescriptor::Rationals,
            &crate::FiniteGroup::cyclic(3),
        );
        assert_eq!(g.opposite().unwrap(), g);
    }

    #[test]
    fn shape_errors() {
        let mut a = kp4();
        a.counit.pop();
        assert!(matches!(
            a.check_axioms(),
            Err(HopfError::DimensionMismatch(_))
        ));
    }
}
