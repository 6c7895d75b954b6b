#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crossed_kuperberg::diagram::{apply_move, connected_sum_default, Letter};
use crossed_kuperberg::labeling::enumerate_labelings;
use crossed_kuperberg::{
    ChiLabeling, CrossedModule, GaugeElement, HeegaardDiagram, MoveDescriptor, Word,
};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small closed diagrams used as starting points.
pub fn base_diagrams() -> Vec<HeegaardDiagram> {
    let l = |p, q| HeegaardDiagram::lens(p, q).unwrap();
    vec![
        l(1, 1),
        l(2, 1),
        l(3, 1),
        l(4, 1),
        l(5, 2),
        HeegaardDiagram::poincare(),
        connected_sum_default(&l(2, 1), &l(3, 1)).unwrap(),
    ]
}

pub fn random_labeling(d: &HeegaardDiagram, cm: &CrossedModule, r: &mut Rng8) -> ChiLabeling {
    let all = enumerate_labelings(d, cm, 1 << 20).unwrap();
    all.choose(r).unwrap().clone()
}

pub fn random_gauge(d: &HeegaardDiagram, cm: &CrossedModule, r: &mut Rng8) -> GaugeElement {
    GaugeElement {
        a: d.components
            .iter()
            .map(|c| (c.clone(), r.random_range(0..cm.h().order())))
            .collect(),
        d: d.uppers
            .iter()
            .map(|u| (u.id.clone(), r.random_range(0..cm.e().order())))
            .collect(),
    }
}

/// A random well-typed word starting at `from`.
fn random_path(d: &HeegaardDiagram, from: &str, len: usize, r: &mut Rng8) -> Word {
    let mut at = from.to_string();
    let mut w = Vec::new();
    for _ in 0..len {
        let steps: Vec<Letter> = d
            .uppers
            .iter()
            .flat_map(|u| {
                let mut v = Vec::new();
                if u.cminus == at {
                    v.push(Letter::new(u.id.clone(), 1));
                }
                if u.cplus == at {
                    v.push(Letter::new(u.id.clone(), -1));
                }
                v
            })
            .collect();
        let Some(l) = steps.choose(r) else { break };
        at = d.letter_ends(l).unwrap().1.to_string();
        w.push(l.clone());
    }
    Word(w)
}

pub const KINDS: [&str; 14] = [
    "diffeomorphism",
    "basepoint",
    "reverse_upper",
    "reverse_lower",
    "two_point",
    "remove_two_point",
    "stabilize",
    "destabilize",
    "upper_slide",
    "lower_slide",
    "add_trivial_upper",
    "remove_trivial_upper",
    "add_trivial_lower",
    "remove_trivial_lower",
];

/// The kinds of move class `"i"` to `"viii"`.
pub fn kinds_of_class(class: &str) -> Vec<&'static str> {
    match class {
        "i" => vec!["diffeomorphism"],
        "ii" => vec!["basepoint"],
        "iii" => vec!["reverse_upper", "reverse_lower"],
        "iv" => vec!["two_point", "remove_two_point"],
        "v" => vec!["stabilize", "destabilize"],
        "vi" => vec!["upper_slide"],
        "vii" => vec!["lower_slide"],
        "viii" => vec![
            "add_trivial_upper",
            "remove_trivial_upper",
            "add_trivial_lower",
            "remove_trivial_lower",
        ],
        _ => panic!("unknown class {class}"),
    }
}

fn proposal(
    kind: &str,
    d: &HeegaardDiagram,
    cm: &CrossedModule,
    r: &mut Rng8,
) -> Option<MoveDescriptor> {
    let upper = |r: &mut Rng8| d.uppers.choose(r).map(|u| u.id.clone());
    let lower = |r: &mut Rng8| d.lowers.choose(r).map(|l| l.id.clone());
    let region = |r: &mut Rng8| d.tauts.choose(r).cloned();
    Some(match kind {
        "diffeomorphism" => {
            let ids: Vec<String> = d.all_ids().into_iter().collect();
            let mut rename = std::collections::BTreeMap::new();
            for id in ids.iter().filter(|_| r.random_bool(0.5)) {
                rename.insert(id.clone(), format!("{id}'"));
            }
            let rotate_uppers = d
                .uppers
                .iter()
                .map(|u| (u.id.clone(), r.random_range(0..u.points.len().max(1))))
                .collect();
            let mut uo: Vec<String> = d.uppers.iter().map(|u| u.id.clone()).collect();
            let mut lo: Vec<String> = d.lowers.iter().map(|l| l.id.clone()).collect();
            uo.shuffle(r);
            lo.shuffle(r);
            MoveDescriptor::Diffeomorphism {
                rename,
                rotate_uppers,
                upper_order: Some(uo),
                lower_order: Some(lo),
            }
        }
        "basepoint" => MoveDescriptor::Basepoint {
            lower: lower(r)?,
            backward: r.random_bool(0.5),
        },
        "reverse_upper" => MoveDescriptor::ReverseUpper { upper: upper(r)? },
        "reverse_lower" => MoveDescriptor::ReverseLower { lower: lower(r)? },
        "two_point" => {
            let u = d.uppers.choose(r)?;
            let l = d.lowers.choose(r)?;
            MoveDescriptor::TwoPoint {
                upper: u.id.clone(),
                lower: l.id.clone(),
                lower_pos: r.random_range(0..=l.points.len()),
                upper_pos: r.random_range(0..=u.points.len()),
                sign: if r.random_bool(0.5) { 1 } else { -1 },
            }
        }
        "remove_two_point" => {
            let pts: Vec<&String> = d.lowers.iter().flat_map(|l| &l.points).collect();
            MoveDescriptor::RemoveTwoPoint {
                first: (*pts.choose(r)?).clone(),
            }
        }
        "stabilize" => {
            let t = region(r)?;
            let len = r.random_range(0..3);
            MoveDescriptor::Stabilize {
                region: t.region.clone(),
                position: r.random_range(0..=t.factors.len()),
                r: random_path(d, &t.base_component, len, r),
                e: r.random_range(0..cm.e().order()),
            }
        }
        "destabilize" => {
            let u = d
                .uppers
                .iter()
                .filter(|u| u.points.len() == 1)
                .collect::<Vec<_>>();
            let u = u.choose(r)?;
            MoveDescriptor::Destabilize {
                upper: u.id.clone(),
                lower: u.points[0].lower.clone(),
            }
        }
        "upper_slide" => {
            let u1 = d.uppers.choose(r)?;
            let u2 = d.uppers.choose(r)?;
            MoveDescriptor::UpperSlide {
                u1: u1.id.clone(),
                u2: u2.id.clone(),
                i: r.random_range(0..=u1.points.len()),
                j: r.random_range(0..=u2.points.len()),
            }
        }
        "lower_slide" => MoveDescriptor::LowerSlide {
            l1: lower(r)?,
            l2: lower(r)?,
        },
        "add_trivial_upper" => MoveDescriptor::AddTrivialUpper {
            host: d.components.choose(r)?.clone(),
            side: if r.random_bool(0.5) { 1 } else { -1 },
            x: r.random_range(0..cm.h().order()),
        },
        "remove_trivial_upper" => {
            let u: Vec<_> = d.uppers.iter().filter(|u| u.points.is_empty()).collect();
            MoveDescriptor::RemoveTrivialUpper {
                upper: u.choose(r)?.id.clone(),
            }
        }
        "add_trivial_lower" => {
            let t = region(r)?;
            let len = r.random_range(0..3);
            MoveDescriptor::AddTrivialLower {
                region: t.region.clone(),
                position: r.random_range(0..=t.factors.len()),
                r: random_path(d, &t.base_component, len, r),
                eps: if r.random_bool(0.5) { 1 } else { -1 },
            }
        }
        "remove_trivial_lower" => {
            let l: Vec<_> = d.lowers.iter().filter(|l| l.points.is_empty()).collect();
            MoveDescriptor::RemoveTrivialLower {
                lower: l.choose(r)?.id.clone(),
            }
        }
        _ => panic!("unknown move kind {kind}"),
    })
}

/// The move that makes a removal kind applicable.
pub fn enabling_kind(kind: &str) -> Option<&'static str> {
    match kind {
        "remove_two_point" => Some("two_point"),
        "destabilize" => Some("stabilize"),
        "remove_trivial_upper" => Some("add_trivial_upper"),
        "remove_trivial_lower" => Some("add_trivial_lower"),
        _ => None,
    }
}

/// Tries random proposals of `kind` until one applies.
pub fn try_move(
    kind: &str,
    d: &HeegaardDiagram,
    lab: &ChiLabeling,
    cm: &CrossedModule,
    r: &mut Rng8,
    attempts: usize,
) -> Option<(MoveDescriptor, HeegaardDiagram, ChiLabeling)> {
    for _ in 0..attempts {
        let mv = proposal(kind, d, cm, r)?;
        if let Ok((d2, l2)) = apply_move(d, lab, cm, &mv) {
            return Some((mv, d2, l2));
        }
    }
    None
}

/// Points of `b` that are not in `a`.
pub fn new_points(a: &HeegaardDiagram, b: &HeegaardDiagram) -> BTreeSet<String> {
    let old: BTreeSet<&String> = a.lowers.iter().flat_map(|l| &l.points).collect();
    b.lowers
        .iter()
        .flat_map(|l| &l.points)
        .filter(|p| !old.contains(p))
        .cloned()
        .collect()
}
