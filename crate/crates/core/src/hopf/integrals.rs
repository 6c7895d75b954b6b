//! The two-sided integral `Λ ∈ A_1` and the two-sided χ-integral `λ`.

use super::*;
use crate::scalar::char_divides;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integrals {
    /// `Λ ∈ A_1`.
    pub big_lambda: Vec<Scalar>,
    /// `λ_x`, a covector on `A_x`, for every grading.
    pub lambda: Vec<Vec<Scalar>>,
}

fn scale(v: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    v.iter().map(|x| x * s).collect()
}

impl HopfChiCoalgebra {
    /// Solves for `Λ` and `λ`, normalizes both by `dim A_1`, then checks every
    /// property the invariant relies on.
    pub fn compute_integrals(&self) -> Result<Integrals, HopfError> {
        if let Some(v) = self.check_axioms()?.into_iter().next() {
            return Err(HopfError::InvalidInput(format!("axiom violated: {v}")));
        }
        let f = self.field;
        let d1 = self.d1();
        if char_divides(f, d1 as u64) {
            return Err(HopfError::CharacteristicDividesDimension {
                p: f.characteristic(),
                d: d1,
            });
        }
        let dval = Scalar::from_i64(f, d1 as i64);

        // Λa = ε(a)Λ = aΛ on basis elements a.
        let mut m = Matrix::zeros(f, 2 * d1 * d1, d1);
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d1 {
                    let mut left = self.mu[0].get(k, i * d1 + j).clone();
                    let mut right = self.mu[0].get(k, j * d1 + i).clone();
                    if j == k {
                        left = left - &self.counit[i];
                        right = right - &self.counit[i];
                    }
                    m.set((2 * i) * d1 + k, j, left);
                    m.set((2 * i + 1) * d1 + k, j, right);
                }
            }
        }
        let ns = m.nullspace();
        if ns.len() != 1 {
            return Err(HopfError::NonUniqueIntegral {
                what: "integral element",
                dim: ns.len(),
            });
        }
        let e = dot(&self.counit, &ns[0]);
        if e.is_zero() {
            return Err(HopfError::PostconditionViolated(
                "counit of the integral vanishes".into(),
            ));
        }
        let big = scale(&ns[0], &(&dval / &e));

        let lambda = self.solve_lambda(&dval)?;
        let ints = Integrals {
            big_lambda: big,
            lambda,
        };
        self.verify_integrals(&ints)?;
        Ok(ints)
    }

    fn solve_lambda(&self, dval: &Scalar) -> Result<Vec<Vec<Scalar>>, HopfError> {
        let f = self.field;
        let h = self.xmod.h();
        let (nh, ne) = (self.n_h(), self.xmod.e().order());
        let mut offset = vec![0; nh + 1];
        for x in 0..nh {
            offset[x + 1] = offset[x] + self.dims[x];
        }
        let nvar = offset[nh];
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let zero_row = || vec![Scalar::zero(f); nvar];
        for x in 0..nh {
            for y in 0..nh {
                let xy = h.mul(x, y);
                let (dx, dy) = (self.dims[x], self.dims[y]);
                let dl = self.delta(x, y);
                for b in 0..self.dims[xy] {
                    // (id⊗λ_y)Δ_{x,y}(b) − λ_{xy}(b)·1_x, componentwise in A_x.
                    for k in 0..dx {
                        let mut r = zero_row();
                        for j in 0..dy {
                            r[offset[y] + j] = dl.get(k * dy + j, b).clone();
                        }
                        r[offset[xy] + b] = &r[offset[xy] + b] - &self.unit[x][k];
                        rows.push(r);
                    }
                    // (λ_x⊗id)Δ_{x,y}(b) − λ_{xy}(b)·1_y, componentwise in A_y.
                    for k in 0..dy {
                        let mut r = zero_row();
                        for i in 0..dx {
                            r[offset[x] + i] = dl.get(i * dy + k, b).clone();
                        }
                        r[offset[xy] + b] = &r[offset[xy] + b] - &self.unit[y][k];
                        rows.push(r);
                    }
                }
            }
            for e in 0..ne {
                let t = h.mul(self.xmod.chi(e), x);
                let p = self.phi(x, e);
                for b in 0..self.dims[x] {
                    // λ_{χ(e)x}(φ_{x,e}(b)) − λ_x(b).
                    let mut r = zero_row();
                    for k in 0..self.dims[t] {
                        r[offset[t] + k] = p.get(k, b).clone();
                    }
                    r[offset[x] + b] = &r[offset[x] + b] - &Scalar::one(f);
                    rows.push(r);
                }
            }
        }
        let nrows = rows.len();
        let m = Matrix::from_rows(f, rows, nvar);
        debug_assert_eq!(m.rows, nrows);
        let ns = m.nullspace();
        if ns.len() != 1 {
            return Err(HopfError::NonUniqueIntegral {
                what: "chi-integral",
                dim: ns.len(),
            });
        }
        let v = &ns[0];
        let at1 = dot(&v[offset[0]..offset[1]], &self.unit[0]);
        if at1.is_zero() {
            return Err(HopfError::PostconditionViolated("normalization".into()));
        }
        let v = scale(v, &(dval / &at1));
        Ok((0..nh)
            .map(|x| v[offset[x]..offset[x + 1]].to_vec())
            .collect())
    }

    /// Checks normalization, symmetry, S-invariance and cosymmetry.
    pub fn verify_integrals(&self, ints: &Integrals) -> Result<(), HopfError> {
        let f = self.field;
        let h = self.xmod.h();
        let d1 = self.d1();
        let dval = Scalar::from_i64(f, d1 as i64);
        let fail = |s: &str| Err(HopfError::PostconditionViolated(s.to_string()));
        let big = &ints.big_lambda;
        if big.len() != d1 || ints.lambda.len() != self.n_h() {
            return Err(HopfError::DimensionMismatch("integral shapes".into()));
        }
        for i in 0..d1 {
            let mut a = vec![Scalar::zero(f); d1];
            a[i] = Scalar::one(f);
            let want = scale(big, &self.counit[i]);
            if self.mul_vec(0, &a, big) != want || self.mul_vec(0, big, &a) != want {
                return fail("two-sided-integral");
            }
        }
        if dot(&self.counit, big) != dval {
            return fail("counit-normalization");
        }
        if dot(&ints.lambda[0], big) != dval {
            return fail("lambda-of-Lambda");
        }
        for x in 0..self.n_h() {
            let d = self.dims[x];
            let lx = &ints.lambda[x];
            if lx.len() != d {
                return Err(HopfError::DimensionMismatch(format!("lambda_{x}")));
            }
            if d > 0 && dot(lx, &self.unit[x]) != dval {
                return fail("normalization");
            }
            for i in 0..d {
                for j in 0..d {
                    let ab = self.mu[x].column(i * d + j);
                    let ba = self.mu[x].column(j * d + i);
                    if dot(lx, &ab) != dot(lx, &ba) {
                        return fail("symmetry");
                    }
                }
            }
            if self.s(x).pull_back(lx) != ints.lambda[h.inv(x)] {
                return fail("s-invariance");
            }
            let xi = h.inv(x);
            let a = self.delta(x, xi).apply(big);
            let b = self.delta(xi, x).apply(big);
            let sw = flip(f, self.dims[x], self.dims[xi]).apply(&a);
            if sw != b {
                return fail("cosymmetry");
            }
        }
        if self.s(0).apply(big) != *big {
            return fail("s-invariance");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter()
            .map(|&n| Scalar::from_i64(FieldDescriptor::Rationals, n))
            .collect()
    }

    #[test]
    fn kp4_integrals() {
        let a = HopfChiCoalgebra::kp4(FieldDescriptor::Rationals).unwrap();
        let i = a.compute_integrals().unwrap();
        assert_eq!(i.big_lambda, ints(&[1, 1, 1, 1]));
        assert_eq!(i.lambda, vec![ints(&[4, 0, 0, 0]), ints(&[4, 0, 0, 0])]);
    }

    #[test]
    fn group_algebra_integrals() {
        let s3 = FiniteGroup::symmetric(3);
        let a = HopfChiCoalgebra::group_algebra_trivial(FieldDescriptor::Rationals, &s3);
        let i = a.compute_integrals().unwrap();
        assert_eq!(i.big_lambda, ints(&[1; 6]));
        assert_eq!(i.lambda[0], ints(&[6, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn characteristic_dividing_dimension() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        let a = HopfChiCoalgebra::group_algebra_trivial(f3, &FiniteGroup::cyclic(3));
        assert!(matches!(
            a.compute_integrals(),
            Err(HopfError::CharacteristicDividesDimension { p: 3, d: 3 })
        ));
    }

    #[test]
    fn one_dimensional() {
        let a = HopfChiCoalgebra::group_algebra_trivial(
            FieldDescriptor::Rationals,
            &FiniteGroup::trivial(),
        );
        let i = a.compute_integrals().unwrap();
        assert_eq!(
            (i.big_lambda.clone(), i.lambda[0].clone()),
            (ints(&[1]), a.counit.clone())
        );
    }
}
