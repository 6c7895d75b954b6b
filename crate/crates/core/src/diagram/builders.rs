use num_integer::Integer;

use super::*;

fn upper(id: &str, c: &str, pts: &[(&str, &str, i8)]) -> UpperCircle {
    UpperCircle {
        id: id.into(),
        cminus: c.into(),
        cplus: c.into(),
        points: pts
            .iter()
            .map(|&(p, l, s)| UpperPoint {
                id: p.into(),
                lower: l.into(),
                sign: s,
            })
            .collect(),
    }
}

fn lower(id: &str, c: &str, pts: &[&str]) -> LowerCircle {
    LowerCircle {
        id: id.into(),
        base_component: c.into(),
        points: pts.iter().map(|p| p.to_string()).collect(),
    }
}

fn factor(r: &[(&str, i8)], l: &str, eps: i8) -> TautFactor {
    TautFactor {
        r: Word::from_letters(r.iter().copied()),
        lower: l.into(),
        eps,
    }
}

impl HeegaardDiagram {
    /// The genus-1 diagram of `L(p, q)`: one upper `u`, one lower `l`, points
    /// `s1..sp` in lower order, all positive. Consecutive points along `u`
    /// are `q` apart along `l`. `(1, 1)` gives the 3-sphere.
    pub fn lens(p: u32, q: u32) -> Result<HeegaardDiagram, DiagramError> {
        let ok = (p == 1 && q == 1) || (p >= 2 && q >= 1 && q < p && p.gcd(&q) == 1);
        if !ok {
            return Err(DiagramError::BadParameters(format!(
                "lens({p}, {q}) needs gcd(p, q) = 1 and 1 <= q < p"
            )));
        }
        let name = |k: u32| format!("s{}", k + 1);
        let upts: Vec<UpperPoint> = (0..p)
            .map(|j| UpperPoint {
                id: name((j as u64 * q as u64 % p as u64) as u32),
                lower: "l".into(),
                sign: 1,
            })
            .collect();
        Ok(HeegaardDiagram {
            format: 1,
            genus: 1,
            components: vec!["c".into()],
            uppers: vec![UpperCircle {
                id: "u".into(),
                cminus: "c".into(),
                cplus: "c".into(),
                points: upts,
            }],
            lowers: vec![LowerCircle {
                id: "l".into(),
                base_component: "c".into(),
                points: (0..p).map(name).collect(),
            }],
            tauts: vec![TautIdentity {
                region: "sigma".into(),
                base_component: "c".into(),
                factors: vec![
                    factor(&[], "l", -1),
                    TautFactor {
                        r: Word::power("u", q as i64),
                        lower: "l".into(),
                        eps: 1,
                    },
                ],
            }],
        })
    }

    /// Poincaré's genus-2 diagram of the homology sphere. Points `1..7` lie on
    /// `l1`, points `a..e` on `l2`.
    pub fn poincare() -> HeegaardDiagram {
        let u1 = upper(
            "u1",
            "c",
            &[
                ("1", "l1", 1),
                ("2", "l1", 1),
                ("3", "l1", 1),
                ("4", "l1", 1),
                ("a", "l2", -1),
                ("6", "l1", -1),
                ("c", "l2", -1),
            ],
        );
        let u2 = upper(
            "u2",
            "c",
            &[
                ("5", "l1", -1),
                ("b", "l2", -1),
                ("7", "l1", -1),
                ("d", "l2", 1),
                ("e", "l2", 1),
            ],
        );
        HeegaardDiagram {
            format: 1,
            genus: 2,
            components: vec!["c".into()],
            uppers: vec![u1, u2],
            lowers: vec![
                lower("l1", "c", &["1", "2", "3", "4", "5", "6", "7"]),
                lower("l2", "c", &["a", "b", "c", "d", "e"]),
            ],
            tauts: vec![TautIdentity {
                region: "sigma".into(),
                base_component: "c".into(),
                factors: vec![
                    factor(&[], "l1", -1),
                    factor(&[("u1", -1)], "l1", 1),
                    factor(&[("u1", -1), ("u2", 1), ("u2", 1), ("u2", 1)], "l2", -1),
                    factor(&[("u2", 1), ("u1", 1)], "l2", 1),
                ],
            }],
        }
    }

    /// The sphere with no circles: a diagram of the 3-sphere.
    pub fn s3() -> HeegaardDiagram {
        HeegaardDiagram {
            format: 1,
            genus: 0,
            components: vec!["c".into()],
            uppers: vec![],
            lowers: vec![],
            tauts: vec![TautIdentity {
                region: "sigma".into(),
                base_component: "c".into(),
                factors: vec![],
            }],
        }
    }
}
