use super::*;
use crate::group::FiniteGroup;

fn unit_vec(f: FieldDescriptor, d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(f); d];
    v[i] = Scalar::one(f);
    v
}

fn diag(f: FieldDescriptor, entries: &[i64]) -> Matrix {
    let mut m = Matrix::zeros(f, entries.len(), entries.len());
    for (i, &e) in entries.iter().enumerate() {
        m.set(i, i, Scalar::from_i64(f, e));
    }
    m
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl HopfChiCoalgebra {
    /// The Hopf (ℤ/4 → ℤ/2)-coalgebra with `A_0 = 𝕜[a]/(a⁴−1)` and
    /// `A_1 = ⟨u, v | u² = v² = 1, vu = −uv⟩`. Basis of `A_0` is `a^k`, basis
    /// of `A_1` is `u^i v^j` at index `i + 2j`.
    pub fn kp4(field: FieldDescriptor) -> Result<HopfChiCoalgebra, HopfError> {
        if field.characteristic() == 2 {
            return Err(HopfError::BadCharacteristic(2));
        }
        let f = field;
        let cm = CrossedModule::z4_to_z2();
        let mut mu0 = Matrix::zeros(f, 4, 16);
        for k in 0..4 {
            for l in 0..4 {
                mu0.set((k + l) % 4, k * 4 + l, Scalar::one(f));
            }
        }
        let mut mu1 = Matrix::zeros(f, 4, 16);
        for p in 0..4 {
            for q in 0..4 {
                let (i1, j1, i2, j2) = (p % 2, p / 2, q % 2, q / 2);
                let r = (i1 + i2) % 2 + 2 * ((j1 + j2) % 2);
                mu1.set(r, p * 4 + q, Scalar::from_i64(f, sign(j1 * i2)));
            }
        }
        let zero16 = Matrix::zeros(f, 16, 4);
        let mut a = HopfChiCoalgebra {
            field: f,
            xmod: cm,
            dims: vec![4, 4],
            mu: vec![mu0, mu1],
            unit: vec![unit_vec(f, 4, 0), unit_vec(f, 4, 0)],
            coproduct: vec![zero16.clone(), zero16.clone(), zero16.clone(), zero16],
            counit: vec![Scalar::one(f); 4],
            antipode: vec![Matrix::identity(f, 4), diag(f, &[1, 1, 1, -1])],
            action: Vec::new(),
        };
        for x in 0..2 {
            for n in 0..4 {
                let signs: Vec<i64> = (0..4)
                    .map(|b| {
                        if x == 0 {
                            sign(n * b)
                        } else {
                            sign(n * (b % 2))
                        }
                    })
                    .collect();
                a.action.push(diag(f, &signs));
            }
        }

        let e = |i| unit_vec(f, 4, i);
        let half = Scalar::ratio(f, 1, 2).expect("characteristic is not 2");
        let neg = |v: Vec<Scalar>| v.into_iter().map(|s| -s).collect::<Vec<_>>();
        // Ω(s, t) = ½(1⊗1 + s⊗1 + 1⊗t − s⊗t).
        let omega = |s: &[Scalar], t: &[Scalar]| -> Vec<Scalar> {
            let one = e(0);
            let terms = [
                kron_vec(&one, &one),
                kron_vec(s, &one),
                kron_vec(&one, t),
                neg(kron_vec(s, t)),
            ];
            (0..16)
                .map(|i| {
                    let mut acc = Scalar::zero(f);
                    for t in &terms {
                        acc = acc + &t[i];
                    }
                    &acc * &half
                })
                .collect()
        };
        let (ga, ga2) = (e(1), e(2));
        let (u, v) = (e(1), e(2));

        let d00 = a.mul_tensor(0, 0, &kron_vec(&ga, &ga), &omega(&ga2, &ga2));
        let d11 = a.mul_tensor(1, 1, &kron_vec(&u, &u), &omega(&neg(v.clone()), &v));
        let d01u = a.mul_tensor(0, 1, &kron_vec(&ga, &u), &omega(&ga2, &v));
        let d01v = kron_vec(&ga2, &v);
        let d10u = a.mul_tensor(1, 0, &kron_vec(&u, &ga), &omega(&neg(v.clone()), &ga2));
        let d10v = kron_vec(&v, &ga2);

        // Source A_0: Δ(a^k) = Δ(a)^k.
        for (x, y, g) in [(0, 0, &d00), (1, 1, &d11)] {
            let mut cur = kron_vec(&a.unit[x], &a.unit[y]);
            let mut cols = Vec::new();
            for _ in 0..4 {
                cols.push(cur.clone());
                cur = a.mul_tensor(x, y, &cur, g);
            }
            a.coproduct[x * 2 + y] = Matrix::from_columns(f, 16, &cols);
        }
        // Source A_1: Δ(u^i v^j) = Δ(u)^i Δ(v)^j.
        for (x, y, du, dv) in [(0, 1, &d01u, &d01v), (1, 0, &d10u, &d10v)] {
            let cols: Vec<Vec<Scalar>> = (0..4)
                .map(|b| {
                    let mut cur = kron_vec(&a.unit[x], &a.unit[y]);
                    if b % 2 == 1 {
                        cur = a.mul_tensor(x, y, &cur, du);
                    }
                    if b / 2 == 1 {
                        cur = a.mul_tensor(x, y, &cur, dv);
                    }
                    cur
                })
                .collect();
            a.coproduct[x * 2 + y] = Matrix::from_columns(f, 16, &cols);
        }
        Ok(a)
    }

    /// `𝕜^ω[G]` over `E → 1`: `Δg = g⊗g`, `ε(g) = 1`, `S(g) = g⁻¹`,
    /// `φ_e(g) = ω(g,e)g`. `omega[g][e]` must be a bicharacter with values in `𝕜*`.
    pub fn group_algebra(
        field: FieldDescriptor,
        g: &FiniteGroup,
        e: &FiniteGroup,
        omega: &[Vec<Scalar>],
    ) -> Result<HopfChiCoalgebra, HopfError> {
        let cm = CrossedModule::to_trivial(e.clone())
            .map_err(|err| HopfError::InvalidInput(err.to_string()))?;
        let (n, ne) = (g.order(), e.order());
        if omega.len() != n || omega.iter().any(|r| r.len() != ne) {
            return Err(HopfError::DimensionMismatch(format!(
                "omega must be {n}x{ne}"
            )));
        }
        for a in 0..n {
            for x in 0..ne {
                let w = &omega[a][x];
                if w.field() != field {
                    return Err(HopfError::InvalidInput(
                        "omega lies in another field".into(),
                    ));
                }
                if w.is_zero() {
                    return Err(HopfError::NotABicharacter(format!("omega({a},{x}) = 0")));
                }
                for b in 0..n {
                    if omega[g.mul(a, b)][x] != w * &omega[b][x] {
                        return Err(HopfError::NotABicharacter(format!(
                            "omega(gh,e) at g={a},h={b},e={x}"
                        )));
                    }
                }
                for y in 0..ne {
                    if omega[a][e.mul(x, y)] != w * &omega[a][y] {
                        return Err(HopfError::NotABicharacter(format!(
                            "omega(g,ef) at g={a},e={x},f={y}"
                        )));
                    }
                }
            }
        }
        let f = field;
        let mut mu = Matrix::zeros(f, n, n * n);
        let mut delta = Matrix::zeros(f, n * n, n);
        let mut s = Matrix::zeros(f, n, n);
        for a in 0..n {
            for b in 0..n {
                mu.set(g.mul(a, b), a * n + b, Scalar::one(f));
            }
            delta.set(a * n + a, a, Scalar::one(f));
            s.set(g.inv(a), a, Scalar::one(f));
        }
        let action = (0..ne)
            .map(|x| {
                let mut m = Matrix::zeros(f, n, n);
                for (a, row) in omega.iter().enumerate() {
                    m.set(a, a, row[x].clone());
                }
                m
            })
            .collect();
        Ok(HopfChiCoalgebra {
            field: f,
            xmod: cm,
            dims: vec![n],
            mu: vec![mu],
            unit: vec![unit_vec(f, n, 0)],
            coproduct: vec![delta],
            counit: vec![Scalar::one(f); n],
            antipode: vec![s],
            action,
        })
    }

    /// `𝕜[G]` over the trivial crossed module `1 → 1`.
    pub fn group_algebra_trivial(field: FieldDescriptor, g: &FiniteGroup) -> HopfChiCoalgebra {
        let omega = vec![vec![Scalar::one(field)]; g.order()];
        Self::group_algebra(field, g, &FiniteGroup::trivial(), &omega)
            .expect("trivial omega is a bicharacter")
    }
}
