//! JSON form of Hopf χ-coalgebras and integrals.
//!
//! Coefficients are JSON integers or `"n/d"` strings. Matrices are lists of
//! rows. Keys `"x,y"` and `"x,e"` are element indices.

use serde_json::{json, Map, Value};

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed Hopf data: {0}")]
pub struct HopfJsonError(pub String);

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s.to_i64() {
        Some(n) => json!(n),
        None => json!(s.render()),
    }
}

pub fn scalar_from_json(field: FieldDescriptor, v: &Value) -> Result<Scalar, HopfJsonError> {
    let bad = || HopfJsonError(format!("not a coefficient: {v}"));
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_i64(field, i))
            } else {
                Scalar::parse(field, &n.to_string()).map_err(|_| bad())
            }
        }
        Value::String(s) => Scalar::parse(field, s).map_err(|e| HopfJsonError(e.to_string())),
        _ => Err(bad()),
    }
}

fn vec_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows).map(|i| vec_json(m.row(i))).collect())
}

fn vec_from(
    field: FieldDescriptor,
    v: &Value,
    len: usize,
    what: &str,
) -> Result<Vec<Scalar>, HopfJsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| HopfJsonError(format!("{what} must be a list")))?;
    if arr.len() != len {
        return Err(HopfJsonError(format!(
            "{what} has length {}, expected {len}",
            arr.len()
        )));
    }
    arr.iter().map(|x| scalar_from_json(field, x)).collect()
}

fn matrix_from(
    field: FieldDescriptor,
    v: &Value,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Matrix, HopfJsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| HopfJsonError(format!("{what} must be a list of rows")))?;
    if arr.len() != rows {
        return Err(HopfJsonError(format!(
            "{what} has {} rows, expected {rows}",
            arr.len()
        )));
    }
    let rs = arr
        .iter()
        .enumerate()
        .map(|(i, r)| vec_from(field, r, cols, &format!("{what} row {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(field, rs, cols))
}

impl HopfChiCoalgebra {
    pub fn to_json(&self) -> Value {
        let (nh, ne) = (self.n_h(), self.xmod.e().order());
        let components: Vec<Value> = (0..nh)
            .map(|x| {
                let d = self.dims[x];
                let mu: Vec<Value> = (0..d)
                    .map(|i| {
                        Value::Array(
                            (0..d)
                                .map(|j| vec_json(&self.mu[x].column(i * d + j)))
                                .collect(),
                        )
                    })
                    .collect();
                json!({"grading": x, "dim": d, "mu": mu, "unit": vec_json(&self.unit[x])})
            })
            .collect();
        let mut coproduct = Map::new();
        let mut antipode = Map::new();
        let mut action = Map::new();
        for x in 0..nh {
            for y in 0..nh {
                coproduct.insert(format!("{x},{y}"), matrix_json(self.delta(x, y)));
            }
            antipode.insert(x.to_string(), matrix_json(self.s(x)));
            for e in 0..ne {
                action.insert(format!("{x},{e}"), matrix_json(self.phi(x, e)));
            }
        }
        json!({
            "format": 1,
            "field": self.field,
            "xmod": self.xmod,
            "components": components,
            "coproduct": coproduct,
            "counit": vec_json(&self.counit),
            "antipode": antipode,
            "action": action,
        })
    }

    pub fn from_json(v: &Value) -> Result<HopfChiCoalgebra, HopfJsonError> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| HopfJsonError(format!("missing key {k:?}")))
        };
        if let Some(fmt) = v.get("format") {
            if fmt.as_u64() != Some(1) {
                return Err(HopfJsonError(format!("unsupported format {fmt}")));
            }
        }
        let field: FieldDescriptor = serde_json::from_value(get("field")?.clone())
            .map_err(|e| HopfJsonError(format!("field: {e}")))?;
        let xmod: CrossedModule = serde_json::from_value(get("xmod")?.clone())
            .map_err(|e| HopfJsonError(format!("xmod: {e}")))?;
        let h = xmod.h().clone();
        let (nh, ne) = (h.order(), xmod.e().order());
        let comps = get("components")?
            .as_array()
            .ok_or_else(|| HopfJsonError("components must be a list".into()))?;
        let mut dims = vec![None; nh];
        let mut raw = vec![None; nh];
        for c in comps {
            let x = c
                .get("grading")
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .filter(|&x| x < nh)
                .ok_or_else(|| HopfJsonError("component grading missing or out of range".into()))?;
            let d = c
                .get("dim")
                .and_then(Value::as_u64)
                .ok_or_else(|| HopfJsonError(format!("component {x} has no dim")))?
                as usize;
            if dims[x].replace(d).is_some() {
                return Err(HopfJsonError(format!("grading {x} given twice")));
            }
            raw[x] = Some(c);
        }
        let dims: Vec<usize> = dims
            .into_iter()
            .enumerate()
            .map(|(x, d)| d.ok_or_else(|| HopfJsonError(format!("no component for grading {x}"))))
            .collect::<Result<_, _>>()?;
        let mut mu = Vec::with_capacity(nh);
        let mut unit = Vec::with_capacity(nh);
        for x in 0..nh {
            let c = raw[x].unwrap();
            let d = dims[x];
            let m = c
                .get("mu")
                .and_then(Value::as_array)
                .ok_or_else(|| HopfJsonError(format!("component {x} has no mu")))?;
            if m.len() != d {
                return Err(HopfJsonError(format!(
                    "mu_{x} has {} rows of products",
                    m.len()
                )));
            }
            let mut mat = Matrix::zeros(field, d, d * d);
            for (i, row) in m.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == d)
                    .ok_or_else(|| HopfJsonError(format!("mu_{x}[{i}] must have {d} entries")))?;
                for (j, prod) in row.iter().enumerate() {
                    let p = vec_from(field, prod, d, &format!("mu_{x}[{i}][{j}]"))?;
                    for (k, s) in p.into_iter().enumerate() {
                        mat.set(k, i * d + j, s);
                    }
                }
            }
            mu.push(mat);
            unit.push(vec_from(
                field,
                c.get("unit").unwrap_or(&Value::Null),
                d,
                &format!("unit_{x}"),
            )?);
        }
        let keyed = |k: &str| {
            get(k)?
                .as_object()
                .ok_or_else(|| HopfJsonError(format!("{k} must be an object")))
        };
        let cop = keyed("coproduct")?;
        let ant = keyed("antipode")?;
        let act = keyed("action")?;
        let mut coproduct = Vec::with_capacity(nh * nh);
        let mut antipode = Vec::with_capacity(nh);
        let mut action = Vec::with_capacity(nh * ne);
        let entry = |m: &Map<String, Value>, k: String, what: &str| {
            m.get(&k)
                .cloned()
                .ok_or_else(|| HopfJsonError(format!("{what} missing key {k:?}")))
        };
        for x in 0..nh {
            for y in 0..nh {
                let v = entry(cop, format!("{x},{y}"), "coproduct")?;
                coproduct.push(matrix_from(
                    field,
                    &v,
                    dims[x] * dims[y],
                    dims[h.mul(x, y)],
                    &format!("Delta_{x},{y}"),
                )?);
            }
            let v = entry(ant, x.to_string(), "antipode")?;
            antipode.push(matrix_from(
                field,
                &v,
                dims[x],
                dims[h.inv(x)],
                &format!("S_{x}"),
            )?);
            for e in 0..ne {
                let v = entry(act, format!("{x},{e}"), "action")?;
                let t = h.mul(xmod.chi(e), x);
                action.push(matrix_from(
                    field,
                    &v,
                    dims[t],
                    dims[x],
                    &format!("phi_{x},{e}"),
                )?);
            }
        }
        let counit = vec_from(field, get("counit")?, dims[0], "counit")?;
        Ok(HopfChiCoalgebra {
            field,
            xmod,
            dims,
            mu,
            unit,
            coproduct,
            counit,
            antipode,
            action,
        })
    }
}

impl Integrals {
    pub fn to_json(&self) -> Value {
        json!({
            "Lambda": vec_json(&self.big_lambda),
            "lambda": self.lambda.iter().map(|l| vec_json(l)).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        for a in [
            HopfChiCoalgebra::kp4(FieldDescriptor::Rationals).unwrap(),
            HopfChiCoalgebra::kp4(f7).unwrap(),
            HopfChiCoalgebra::group_algebra_trivial(
                FieldDescriptor::Rationals,
                &crate::FiniteGroup::dihedral(3),
            ),
        ] {
            let s = serde_json::to_string(&a.to_json()).unwrap();
            let b = HopfChiCoalgebra::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn fractions_are_strings() {
        let a = HopfChiCoalgebra::kp4(FieldDescriptor::Rationals).unwrap();
        let j = a.to_json();
        let text = j["coproduct"]["0,0"].to_string();
        assert!(text.contains("\"1/2\""), "{text}");
    }
}
