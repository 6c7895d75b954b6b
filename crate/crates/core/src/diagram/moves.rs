//! The eight colored Heegaard moves as rewrites of `(diagram, labeling)`.
//!
//! Every move takes a valid diagram with a χ-labeling to a valid diagram with
//! a χ-labeling. Fresh circles and points get ids from
//! [`HeegaardDiagram::fresh_id`]; circles that persist keep their ids.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    DiagramError, HeegaardDiagram, Id, IdKind, Letter, LowerCircle, TautFactor, TautIdentity,
    UpperCircle, UpperPoint, Word,
};
use crate::labeling::{check_labeling, ChiLabeling};
use crate::xmod::CrossedModule;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveDescriptor {
    /// (i) Renames ids, rotates upper basepoints, reorders circle lists.
    Diffeomorphism {
        #[serde(default)]
        rename: BTreeMap<Id, Id>,
        #[serde(default)]
        rotate_uppers: BTreeMap<Id, usize>,
        #[serde(default)]
        upper_order: Option<Vec<Id>>,
        #[serde(default)]
        lower_order: Option<Vec<Id>>,
    },
    /// (ii) Moves the basepoint of `lower` past its first point, or past its
    /// last point when `backward`.
    Basepoint {
        lower: Id,
        #[serde(default)]
        backward: bool,
    },
    /// (iii)
    ReverseUpper { upper: Id },
    /// (iii)
    ReverseLower { lower: Id },
    /// (iv) Adds two adjacent points of opposite sign; `sign` is the first one's.
    TwoPoint {
        upper: Id,
        lower: Id,
        lower_pos: usize,
        upper_pos: usize,
        sign: i8,
    },
    /// (iv) Removes `first` and the point following it on its lower circle.
    RemoveTwoPoint { first: Id },
    /// (v) Adds a punctured torus colored `e`. The new lower circle enters the
    /// region's identity as `(r, l)(r, l)⁻¹` before factor `position`.
    Stabilize {
        region: Id,
        position: usize,
        #[serde(default)]
        r: Word,
        e: usize,
    },
    /// (v)
    Destabilize { upper: Id, lower: Id },
    /// (vi) Slides `u1` over `u2`, joining them by a band at position `i` of
    /// `u1` and position `j` of `u2`.
    UpperSlide { u1: Id, u2: Id, i: usize, j: usize },
    /// (vii) Slides `l1` over `l2` by a band just before both basepoints.
    LowerSlide { l1: Id, l2: Id },
    /// (viii) Adds an upper circle bounding a disk in `host`, labeled `x`. With
    /// `side = +1` the disk lies on its positive side.
    AddTrivialUpper { host: Id, side: i8, x: usize },
    /// (viii)
    RemoveTrivialUpper { upper: Id },
    /// (viii) Adds a lower circle bounding a disk, with identity `(1, l)^eps`,
    /// and inserts `(r, l)^{−eps}` before factor `position` of `region`.
    AddTrivialLower {
        region: Id,
        position: usize,
        #[serde(default)]
        r: Word,
        eps: i8,
    },
    /// (viii)
    RemoveTrivialLower { lower: Id },
}

impl MoveDescriptor {
    /// The move's class, `"i"` to `"viii"`.
    pub fn class(&self) -> &'static str {
        use MoveDescriptor::*;
        match self {
            Diffeomorphism { .. } => "i",
            Basepoint { .. } => "ii",
            ReverseUpper { .. } | ReverseLower { .. } => "iii",
            TwoPoint { .. } | RemoveTwoPoint { .. } => "iv",
            Stabilize { .. } | Destabilize { .. } => "v",
            UpperSlide { .. } => "vi",
            LowerSlide { .. } => "vii",
            AddTrivialUpper { .. }
            | RemoveTrivialUpper { .. }
            | AddTrivialLower { .. }
            | RemoveTrivialLower { .. } => "viii",
        }
    }

    pub fn kind(&self) -> &'static str {
        use MoveDescriptor::*;
        match self {
            Diffeomorphism { .. } => "diffeomorphism",
            Basepoint { .. } => "basepoint",
            ReverseUpper { .. } => "reverse_upper",
            ReverseLower { .. } => "reverse_lower",
            TwoPoint { .. } => "two_point",
            RemoveTwoPoint { .. } => "remove_two_point",
            Stabilize { .. } => "stabilize",
            Destabilize { .. } => "destabilize",
            UpperSlide { .. } => "upper_slide",
            LowerSlide { .. } => "lower_slide",
            AddTrivialUpper { .. } => "add_trivial_upper",
            RemoveTrivialUpper { .. } => "remove_trivial_upper",
            AddTrivialLower { .. } => "add_trivial_lower",
            RemoveTrivialLower { .. } => "remove_trivial_lower",
        }
    }
}

struct Ctx<'a> {
    mv: &'static str,
    cm: &'a CrossedModule,
}

impl Ctx<'_> {
    fn fail(&self, reason: impl Into<String>) -> DiagramError {
        DiagramError::PreconditionViolated {
            mv: self.mv.to_string(),
            reason: reason.into(),
        }
    }

    fn upper(&self, d: &HeegaardDiagram, u: &str) -> Result<usize, DiagramError> {
        d.upper_index(u)
            .ok_or_else(|| self.fail(format!("no upper circle {u}")))
    }

    fn lower(&self, d: &HeegaardDiagram, l: &str) -> Result<usize, DiagramError> {
        d.lower_index(l)
            .ok_or_else(|| self.fail(format!("no lower circle {l}")))
    }

    fn region(&self, d: &HeegaardDiagram, r: &str) -> Result<usize, DiagramError> {
        d.tauts
            .iter()
            .position(|t| t.region == r)
            .ok_or_else(|| self.fail(format!("no region {r}")))
    }

    fn in_range(&self, v: usize, n: usize, what: &str) -> Result<(), DiagramError> {
        if v < n {
            Ok(())
        } else {
            Err(self.fail(format!("{what} {v} out of range (< {n})")))
        }
    }
}

/// `n` distinct ids starting with `prefix`, unused in `d`.
fn fresh_ids(d: &HeegaardDiagram, prefix: &str, n: usize) -> Vec<Id> {
    let used = d.all_ids();
    (1..)
        .map(|k| format!("{prefix}{k}"))
        .filter(|c| !used.contains(c))
        .take(n)
        .collect()
}

fn uses_upper(d: &HeegaardDiagram, u: &str) -> bool {
    d.tauts
        .iter()
        .flat_map(|t| &t.factors)
        .any(|f| f.r.letters().iter().any(|l| l.circle() == u))
}

/// Applies `mv`. Both `d` and `lab` must be valid; the result is valid.
pub fn apply_move(
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    cm: &CrossedModule,
    mv: &MoveDescriptor,
) -> Result<(HeegaardDiagram, ChiLabeling), DiagramError> {
    let cx = Ctx { mv: mv.kind(), cm };
    if let Some(v) = d.validate().into_iter().next() {
        return Err(cx.fail(format!("input diagram invalid: {v}")));
    }
    if let Some(v) = check_labeling(d, cm, lab).into_iter().next() {
        return Err(DiagramError::InvalidLabeling(v.to_string()));
    }
    use MoveDescriptor::*;
    match mv {
        Diffeomorphism {
            rename,
            rotate_uppers,
            upper_order,
            lower_order,
        } => diffeomorphism(
            &cx,
            d,
            lab,
            rename,
            rotate_uppers,
            upper_order.as_deref(),
            lower_order.as_deref(),
        ),
        Basepoint { lower, backward } => basepoint(&cx, d, lab, lower, *backward),
        ReverseUpper { upper } => reverse_upper(&cx, d, lab, upper),
        ReverseLower { lower } => reverse_lower(&cx, d, lab, lower),
        TwoPoint {
            upper,
            lower,
            lower_pos,
            upper_pos,
            sign,
        } => two_point(&cx, d, lab, upper, lower, *lower_pos, *upper_pos, *sign),
        RemoveTwoPoint { first } => remove_two_point(&cx, d, lab, first),
        Stabilize {
            region,
            position,
            r,
            e,
        } => stabilize(&cx, d, lab, region, *position, r, *e),
        Destabilize { upper, lower } => destabilize(&cx, d, lab, upper, lower),
        UpperSlide { u1, u2, i, j } => upper_slide(&cx, d, lab, u1, u2, *i, *j),
        LowerSlide { l1, l2 } => lower_slide(&cx, d, lab, l1, l2),
        AddTrivialUpper { host, side, x } => add_trivial_upper(&cx, d, lab, host, *side, *x),
        RemoveTrivialUpper { upper } => remove_trivial_upper(&cx, d, lab, upper),
        AddTrivialLower {
            region,
            position,
            r,
            eps,
        } => add_trivial_lower(&cx, d, lab, region, *position, r, *eps),
        RemoveTrivialLower { lower } => remove_trivial_lower(&cx, d, lab, lower),
    }
}

type Out = Result<(HeegaardDiagram, ChiLabeling), DiagramError>;

fn diffeomorphism(
    cx: &Ctx,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    rename: &BTreeMap<Id, Id>,
    rotate: &BTreeMap<Id, usize>,
    upper_order: Option<&[Id]>,
    lower_order: Option<&[Id]>,
) -> Out {
    let all = d.all_ids();
    for k in rename.keys() {
        if !all.contains(k) {
            return Err(cx.fail(format!("rename of unknown id {k}")));
        }
    }
    let image: BTreeSet<Id> = all
        .iter()
        .map(|s| rename.get(s).unwrap_or(s).clone())
        .collect();
    if image.len() != all.len() {
        return Err(cx.fail("rename is not injective"));
    }
    let mut out = d.clone();
    for (u, &k) in rotate {
        let i = cx.upper(d, u)?;
        let n = out.uppers[i].points.len().max(1);
        out.uppers[i].points.rotate_left(k % n);
    }
    let permute = |ids: Vec<&Id>, order: &[Id], what: &str| -> Result<Vec<usize>, DiagramError> {
        let idx: Vec<usize> = order
            .iter()
            .map(|o| ids.iter().position(|x| *x == o))
            .collect::<Option<_>>()
            .ok_or_else(|| cx.fail(format!("{what} order names an unknown circle")))?;
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        if set.len() != ids.len() || idx.len() != ids.len() {
            return Err(cx.fail(format!("{what} order is not a permutation")));
        }
        Ok(idx)
    };
    if let Some(o) = upper_order {
        let idx = permute(d.uppers.iter().map(|u| &u.id).collect(), o, "upper")?;
        out.uppers = idx.iter().map(|&i| out.uppers[i].clone()).collect();
    }
    if let Some(o) = lower_order {
        let idx = permute(d.lowers.iter().map(|l| &l.id).collect(), o, "lower")?;
        out.lowers = idx.iter().map(|&i| out.lowers[i].clone()).collect();
    }
    let f = |_: IdKind, s: &str| rename.get(s).cloned().unwrap_or_else(|| s.to_string());
    let out = out.rename_all(&f);
    let relabel =
        |m: &BTreeMap<Id, usize>| m.iter().map(|(k, &v)| (f(IdKind::Upper, k), v)).collect();
    Ok((
        out,
        ChiLabeling {
            alpha: relabel(&lab.alpha),
            beta: relabel(&lab.beta),
        },
    ))
}

fn basepoint(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, l: &str, backward: bool) -> Out {
    let li = cx.lower(d, l)?;
    if d.lowers[li].points.is_empty() {
        return Err(cx.fail(format!("lower {l} has no points")));
    }
    let pts = d.points()?;
    let mut out = d.clone();
    let lower = &mut out.lowers[li];
    let p = if backward {
        lower.points.last().unwrap().clone()
    } else {
        lower.points[0].clone()
    };
    let info = &pts[&p];
    let u = &d.uppers[info.upper];
    let nu = info.sign;
    // Forward the basepoint crosses u^ν; backward it crosses u^ν in reverse.
    let step = if backward { -nu } else { nu };
    if backward {
        lower.points.rotate_right(1);
    } else {
        lower.points.rotate_left(1);
    }
    lower.base_component = if step > 0 {
        u.cplus.clone()
    } else {
        u.cminus.clone()
    };
    for t in &mut out.tauts {
        for f in t.factors.iter_mut().filter(|f| f.lower == l) {
            f.r =
                f.r.concat(&Word(vec![Letter::new(u.id.clone(), step)]))
                    .reduce();
        }
    }
    let h = cx.cm.h();
    let x = lab.alpha[&u.id];
    let tw = if step > 0 { h.inv(x) } else { x };
    let mut nl = lab.clone();
    nl.beta.insert(l.to_string(), cx.cm.act(tw, lab.beta[l]));
    Ok((out, nl))
}

fn reverse_upper(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, u: &str) -> Out {
    let ui = cx.upper(d, u)?;
    let mut out = d.clone();
    let up = &mut out.uppers[ui];
    std::mem::swap(&mut up.cminus, &mut up.cplus);
    up.points.reverse();
    for p in &mut up.points {
        p.sign = -p.sign;
    }
    for t in &mut out.tauts {
        for f in &mut t.factors {
            f.r = Word(
                f.r.0
                    .iter()
                    .map(|l| if l.0 == u { l.inverse() } else { l.clone() })
                    .collect(),
            );
        }
    }
    let mut nl = lab.clone();
    nl.alpha.insert(u.to_string(), cx.cm.h().inv(lab.alpha[u]));
    Ok((out, nl))
}

fn reverse_lower(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, l: &str) -> Out {
    let li = cx.lower(d, l)?;
    let mut out = d.clone();
    out.lowers[li].points.reverse();
    for up in &mut out.uppers {
        for p in up.points.iter_mut().filter(|p| p.lower == l) {
            p.sign = -p.sign;
        }
    }
    for t in &mut out.tauts {
        for f in t.factors.iter_mut().filter(|f| f.lower == l) {
            f.eps = -f.eps;
        }
    }
    let mut nl = lab.clone();
    nl.beta.insert(l.to_string(), cx.cm.e().inv(lab.beta[l]));
    Ok((out, nl))
}

#[allow(clippy::too_many_arguments)]
fn two_point(
    cx: &Ctx,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    u: &str,
    l: &str,
    lower_pos: usize,
    upper_pos: usize,
    sign: i8,
) -> Out {
    if sign != 1 && sign != -1 {
        return Err(cx.fail(format!("sign must be +1 or -1, got {sign}")));
    }
    let ui = cx.upper(d, u)?;
    let li = cx.lower(d, l)?;
    cx.in_range(lower_pos, d.lowers[li].points.len() + 1, "lower position")?;
    cx.in_range(upper_pos, d.uppers[ui].points.len() + 1, "upper position")?;
    let prefix = Word(d.omega(l)?.0[..lower_pos].to_vec());
    let at = d.word_target(&d.lowers[li].base_component, &prefix)?;
    let up = &d.uppers[ui];
    let src = if sign > 0 { &up.cminus } else { &up.cplus };
    if &at != src {
        return Err(cx.fail(format!(
            "lower {l} is in component {at} at position {lower_pos}, but u^{sign} starts at {src}"
        )));
    }
    let ids = fresh_ids(d, "t", 2);
    let mut out = d.clone();
    out.lowers[li]
        .points
        .splice(lower_pos..lower_pos, ids.iter().cloned());
    let new_pts = [
        UpperPoint {
            id: ids[0].clone(),
            lower: l.to_string(),
            sign,
        },
        UpperPoint {
            id: ids[1].clone(),
            lower: l.to_string(),
            sign: -sign,
        },
    ];
    out.uppers[ui].points.splice(upper_pos..upper_pos, new_pts);
    Ok((out, lab.clone()))
}

fn remove_two_point(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, first: &str) -> Out {
    let pts = d.points()?;
    let pi = pts
        .get(first)
        .ok_or_else(|| cx.fail(format!("no point {first}")))?;
    let lower = &d.lowers[pi.lower];
    let second = lower
        .points
        .get(pi.lower_pos + 1)
        .ok_or_else(|| cx.fail(format!("{first} is last on lower {}", lower.id)))?;
    let qi = &pts[second];
    let n = d.uppers[pi.upper].points.len();
    if qi.upper != pi.upper || qi.upper_pos != (pi.upper_pos + 1) % n || qi.sign != -pi.sign {
        return Err(cx.fail(format!(
            "{first} and {second} are not adjacent points of opposite sign on one upper circle"
        )));
    }
    let mut out = d.clone();
    out.lowers[pi.lower]
        .points
        .retain(|p| p != first && p != second);
    out.uppers[pi.upper]
        .points
        .retain(|p| p.id != first && &p.id != second);
    Ok((out, lab.clone()))
}

fn stabilize(
    cx: &Ctx,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    region: &str,
    pos: usize,
    r: &Word,
    e: usize,
) -> Out {
    let ti = cx.region(d, region)?;
    cx.in_range(pos, d.tauts[ti].factors.len() + 1, "factor position")?;
    cx.in_range(e, cx.cm.e().order(), "element")?;
    let host = d
        .word_target(&d.tauts[ti].base_component, r)
        .map_err(|err| cx.fail(format!("r: {err}")))?;
    let ids = fresh_ids(d, "s", 3);
    let (us, ls, p) = (ids[0].clone(), ids[1].clone(), ids[2].clone());
    let mut out = d.clone();
    out.genus += 1;
    out.uppers.push(UpperCircle {
        id: us.clone(),
        cminus: host.clone(),
        cplus: host.clone(),
        points: vec![UpperPoint {
            id: p.clone(),
            lower: ls.clone(),
            sign: 1,
        }],
    });
    out.lowers.push(LowerCircle {
        id: ls.clone(),
        base_component: host,
        points: vec![p],
    });
    let f = |eps| TautFactor {
        r: r.clone(),
        lower: ls.clone(),
        eps,
    };
    out.tauts[ti].factors.splice(pos..pos, [f(1), f(-1)]);
    let mut nl = lab.clone();
    nl.alpha.insert(us, cx.cm.chi(e));
    nl.beta.insert(ls, e);
    Ok((out, nl))
}

fn destabilize(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, u: &str, l: &str) -> Out {
    let ui = cx.upper(d, u)?;
    let li = cx.lower(d, l)?;
    let (up, lo) = (&d.uppers[ui], &d.lowers[li]);
    if up.points.len() != 1
        || lo.points.len() != 1
        || up.points[0].lower != l
        || up.points[0].sign != 1
    {
        return Err(cx.fail(format!(
            "{u} and {l} must meet in exactly one positive point"
        )));
    }
    if up.cminus != up.cplus || up.cminus != lo.base_component {
        return Err(cx.fail(format!(
            "{u} and {l} do not bound a punctured torus in one component"
        )));
    }
    if uses_upper(d, u) {
        return Err(cx.fail(format!("{u} appears in a taut identity")));
    }
    let refs: Vec<(usize, usize)> = d
        .tauts
        .iter()
        .enumerate()
        .flat_map(|(t, ti)| {
            ti.factors
                .iter()
                .enumerate()
                .filter(|(_, f)| f.lower == l)
                .map(move |(k, _)| (t, k))
        })
        .collect();
    let ok = match refs.as_slice() {
        [(t1, k1), (t2, k2)] if t1 == t2 && k1 + 1 == *k2 => {
            let (f, g) = (&d.tauts[*t1].factors[*k1], &d.tauts[*t1].factors[*k2]);
            f.eps == -g.eps && f.r.reduce() == g.r.reduce()
        }
        _ => false,
    };
    if !ok {
        return Err(cx.fail(format!("{l} does not enter its region as (r, l)(r, l)^-1")));
    }
    let (t, k) = refs[0];
    let mut out = d.clone();
    out.genus -= 1;
    out.tauts[t].factors.drain(k..k + 2);
    out.uppers.remove(ui);
    out.lowers.remove(li);
    let mut nl = lab.clone();
    nl.alpha.remove(u);
    nl.beta.remove(l);
    Ok((out, nl))
}

fn upper_slide(
    cx: &Ctx,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    u1: &str,
    u2: &str,
    i: usize,
    j: usize,
) -> Out {
    if u1 == u2 {
        return Err(cx.fail("a circle cannot slide over itself"));
    }
    let (a, b) = (cx.upper(d, u1)?, cx.upper(d, u2)?);
    let (c1, c2) = (&d.uppers[a], &d.uppers[b]);
    if c1.cminus != c2.cminus {
        return Err(cx.fail(format!(
            "c- of {u1} is {} but c- of {u2} is {}",
            c1.cminus, c2.cminus
        )));
    }
    cx.in_range(i, c1.points.len().max(1), "band position on u1")?;
    cx.in_range(j, c2.points.len().max(1), "band position on u2")?;
    let copies = fresh_ids(d, "h", c2.points.len());
    let copy_of: BTreeMap<&str, &Id> = c2
        .points
        .iter()
        .map(|p| p.id.as_str())
        .zip(&copies)
        .collect();
    let mut out = d.clone();

    let mut pts1 = c1.points.clone();
    let n1 = pts1.len();
    pts1.rotate_left(i.min(n1));
    let mut block: Vec<UpperPoint> = c2
        .points
        .iter()
        .map(|p| UpperPoint {
            id: copy_of[p.id.as_str()].clone(),
            lower: p.lower.clone(),
            sign: p.sign,
        })
        .collect();
    if !block.is_empty() {
        block.rotate_left(j);
    }
    pts1.extend(block);
    out.uppers[a].points = pts1;
    out.uppers[b].cminus = c1.cplus.clone();

    // θ(u2) = u1 u2: a positive crossing of u2 is preceded by the copy, a
    // negative one followed by it.
    let sign2: BTreeMap<&str, i8> = c2.points.iter().map(|p| (p.id.as_str(), p.sign)).collect();
    for lo in &mut out.lowers {
        let mut pts = Vec::with_capacity(lo.points.len());
        for p in &lo.points {
            match sign2.get(p.as_str()) {
                Some(1) => {
                    pts.push(copy_of[p.as_str()].clone());
                    pts.push(p.clone());
                }
                Some(_) => {
                    pts.push(p.clone());
                    pts.push(copy_of[p.as_str()].clone());
                }
                None => pts.push(p.clone()),
            }
        }
        lo.points = pts;
    }
    let theta = Word::from_letters([(u1, 1), (u2, 1)]);
    for t in &mut out.tauts {
        for f in &mut t.factors {
            f.r =
                f.r.substitute(|c| (c == u2).then(|| theta.clone()))
                    .reduce();
        }
    }
    let h = cx.cm.h();
    let mut nl = lab.clone();
    nl.alpha
        .insert(u2.to_string(), h.mul(h.inv(lab.alpha[u1]), lab.alpha[u2]));
    Ok((out, nl))
}

fn lower_slide(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, l1: &str, l2: &str) -> Out {
    if l1 == l2 {
        return Err(cx.fail("a circle cannot slide over itself"));
    }
    let (a, b) = (cx.lower(d, l1)?, cx.lower(d, l2)?);
    if d.lowers[a].base_component != d.lowers[b].base_component {
        return Err(cx.fail(format!("{l1} and {l2} have different base components")));
    }
    let copies = fresh_ids(d, "k", d.lowers[b].points.len());
    let copy_of: BTreeMap<&str, &Id> = d.lowers[b]
        .points
        .iter()
        .map(|p| p.as_str())
        .zip(&copies)
        .collect();
    let mut out = d.clone();
    out.lowers[a].points.extend(copies.iter().cloned());
    for up in &mut out.uppers {
        let mut pts = Vec::with_capacity(up.points.len());
        for p in &up.points {
            match copy_of.get(p.id.as_str()) {
                Some(&q) => {
                    let c = UpperPoint {
                        id: q.clone(),
                        lower: l1.to_string(),
                        sign: p.sign,
                    };
                    if p.sign > 0 {
                        pts.push(c);
                        pts.push(p.clone());
                    } else {
                        pts.push(p.clone());
                        pts.push(c);
                    }
                }
                None => pts.push(p.clone()),
            }
        }
        up.points = pts;
    }
    for t in &mut out.tauts {
        let mut fs = Vec::with_capacity(t.factors.len());
        for f in &t.factors {
            if f.lower != l1 {
                fs.push(f.clone());
                continue;
            }
            let g = TautFactor {
                r: f.r.clone(),
                lower: l2.to_string(),
                eps: -1,
            };
            if f.eps > 0 {
                fs.push(f.clone());
                fs.push(g);
            } else {
                fs.push(TautFactor { eps: 1, ..g });
                fs.push(f.clone());
            }
        }
        t.factors = fs;
    }
    let mut nl = lab.clone();
    nl.beta
        .insert(l1.to_string(), cx.cm.e().mul(lab.beta[l1], lab.beta[l2]));
    Ok((out, nl))
}

fn add_trivial_upper(
    cx: &Ctx,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    host: &str,
    side: i8,
    x: usize,
) -> Out {
    if !d.components.iter().any(|c| c == host) {
        return Err(cx.fail(format!("no component {host}")));
    }
    if side != 1 && side != -1 {
        return Err(cx.fail(format!("side must be +1 or -1, got {side}")));
    }
    cx.in_range(x, cx.cm.h().order(), "element")?;
    let ids = fresh_ids(d, "z", 2);
    let (u, disk) = (ids[0].clone(), ids[1].clone());
    let mut out = d.clone();
    out.components.push(disk.clone());
    let (cminus, cplus) = if side > 0 {
        (host.to_string(), disk)
    } else {
        (disk, host.to_string())
    };
    out.uppers.push(UpperCircle {
        id: u.clone(),
        cminus,
        cplus,
        points: vec![],
    });
    let mut nl = lab.clone();
    nl.alpha.insert(u, x);
    Ok((out, nl))
}

fn remove_trivial_upper(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, u: &str) -> Out {
    let ui = cx.upper(d, u)?;
    let up = &d.uppers[ui];
    if !up.points.is_empty() || up.cminus == up.cplus {
        return Err(cx.fail(format!("{u} does not bound a disk")));
    }
    let degree = |c: &str| {
        d.uppers
            .iter()
            .map(|v| (v.cminus == c) as usize + (v.cplus == c) as usize)
            .sum::<usize>()
    };
    let based_on = |c: &str| {
        d.lowers.iter().any(|l| l.base_component == c)
            || d.tauts.iter().any(|t| t.base_component == c)
    };
    let disk = [&up.cplus, &up.cminus]
        .into_iter()
        .find(|c| degree(c) == 1 && !based_on(c))
        .ok_or_else(|| cx.fail(format!("neither side of {u} is an empty disk")))?
        .clone();
    if uses_upper(d, u) {
        return Err(cx.fail(format!("{u} appears in a taut identity")));
    }
    let mut out = d.clone();
    out.uppers.remove(ui);
    out.components.retain(|c| *c != disk);
    let mut nl = lab.clone();
    nl.alpha.remove(u);
    Ok((out, nl))
}

fn add_trivial_lower(
    cx: &Ctx,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    region: &str,
    pos: usize,
    r: &Word,
    eps: i8,
) -> Out {
    let ti = cx.region(d, region)?;
    if eps != 1 && eps != -1 {
        return Err(cx.fail(format!("eps must be +1 or -1, got {eps}")));
    }
    cx.in_range(pos, d.tauts[ti].factors.len() + 1, "factor position")?;
    let base = d
        .word_target(&d.tauts[ti].base_component, r)
        .map_err(|err| cx.fail(format!("r: {err}")))?;
    let ids = fresh_ids(d, "y", 2);
    let (l, reg) = (ids[0].clone(), ids[1].clone());
    let mut out = d.clone();
    out.lowers.push(LowerCircle {
        id: l.clone(),
        base_component: base.clone(),
        points: vec![],
    });
    out.tauts[ti].factors.insert(
        pos,
        TautFactor {
            r: r.clone(),
            lower: l.clone(),
            eps: -eps,
        },
    );
    out.tauts.push(TautIdentity {
        region: reg,
        base_component: base,
        factors: vec![TautFactor {
            r: Word::empty(),
            lower: l.clone(),
            eps,
        }],
    });
    let mut nl = lab.clone();
    nl.beta.insert(l, 0);
    Ok((out, nl))
}

fn remove_trivial_lower(cx: &Ctx, d: &HeegaardDiagram, lab: &ChiLabeling, l: &str) -> Out {
    let li = cx.lower(d, l)?;
    if !d.lowers[li].points.is_empty() {
        return Err(cx.fail(format!("{l} meets upper circles")));
    }
    let disk = d
        .tauts
        .iter()
        .position(|t| {
            t.factors.len() == 1
                && t.factors[0].lower == l
                && t.factors[0].r.reduce().is_empty()
                && t.base_component == d.lowers[li].base_component
        })
        .ok_or_else(|| cx.fail(format!("{l} bounds no disk region")))?;
    let eps = d.tauts[disk].factors[0].eps;
    let refs: Vec<(usize, usize)> = d
        .tauts
        .iter()
        .enumerate()
        .filter(|(t, _)| *t != disk)
        .flat_map(|(t, ti)| {
            ti.factors
                .iter()
                .enumerate()
                .filter(|(_, f)| f.lower == l)
                .map(move |(k, _)| (t, k))
        })
        .collect();
    let &[(t, k)] = refs.as_slice() else {
        return Err(cx.fail(format!("{l} must appear in exactly one other region")));
    };
    if d.tauts[t].factors[k].eps != -eps {
        return Err(cx.fail(format!("{l} enters its other region with the wrong sign")));
    }
    let mut out = d.clone();
    out.tauts[t].factors.remove(k);
    out.tauts.remove(disk);
    out.lowers.remove(li);
    let mut nl = lab.clone();
    nl.beta.remove(l);
    Ok((out, nl))
}
