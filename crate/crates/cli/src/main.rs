//! `ck`: command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure (report on stdout), 2 malformed
//! input. Output is JSON with sorted keys.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crossed_kuperberg::diagram::apply_move;
use crossed_kuperberg::hopf::HopfError;
use crossed_kuperberg::invariant::{compute_invariant_with, InvariantError};
use crossed_kuperberg::labeling::{enumerate_labelings, orbit_classes, LabelingError};
use crossed_kuperberg::{
    ChiLabeling, CrossedModule, FieldDescriptor, FiniteGroup, HeegaardDiagram, HopfChiCoalgebra,
    MoveDescriptor, Scalar, Violation,
};

const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "ck",
    about = "Invariants of 3-manifolds with crossed-module colorings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a Heegaard diagram.
    Validate { diagram: String },
    /// Check the crossed-module axioms.
    CheckXmod { xmod: String },
    /// Check the Hopf χ-coalgebra axioms.
    CheckHopf { hopf: String },
    /// Compute Λ and λ.
    Integrals { hopf: String },
    /// Enumerate χ-labelings, optionally grouped into gauge orbits.
    Labelings {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        xmod: String,
        #[arg(long)]
        orbits: bool,
    },
    /// Evaluate the invariant for one labeling, or for every orbit if none is given.
    Invariant {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        hopf: String,
        /// Must equal the crossed module of the Hopf data when given.
        #[arg(long)]
        xmod: Option<String>,
        /// Inline JSON or a file.
        #[arg(long)]
        labeling: Option<String>,
    },
    /// The Kuperberg invariant of a Hopf algebra over the trivial crossed module.
    Kuperberg {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        hopf: String,
    },
    /// Apply a script of moves; with --hopf, report the invariant before and after.
    Moves {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        xmod: String,
        #[arg(long)]
        labeling: Option<String>,
        #[arg(long)]
        script: String,
        #[arg(long)]
        hopf: Option<String>,
    },
    /// Print a builtin object.
    Builtin {
        #[command(subcommand)]
        what: Builtin,
    },
}

#[derive(Subcommand)]
enum Builtin {
    /// Genus-one diagram of L(p, q).
    Lens { p: u32, q: u32 },
    /// Genus-two diagram of the Poincaré homology sphere.
    Poincare,
    /// Genus-zero diagram of S³.
    S3,
    /// The crossed module ℤ/4 → ℤ/2.
    Z4z2,
    /// The Hopf (ℤ/4 → ℤ/2)-coalgebra on 𝕜[a]/(a⁴−1) and ⟨u, v⟩.
    Kp4 {
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// 1 → ℤ/n; labelings are homomorphisms to ℤ/n.
    CyclicXmod { n: usize },
    /// 𝕜[ℤ/n] over 1 → 1, or with --sign-twist 𝕜^ω[ℤ/n] over ℤ/n → 1 with ω(g, e) = (−1)^{ge}.
    GroupAlgebra {
        n: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        sign_twist: bool,
    },
}

enum Failure {
    /// Exit 1 with this report.
    Invalid(Value),
    /// Exit 2.
    Malformed(String),
}

type Out = Result<Value, Failure>;

fn malformed(e: impl std::fmt::Display) -> Failure {
    Failure::Malformed(e.to_string())
}

fn report(vs: &[Violation]) -> Value {
    json!({"valid": vs.is_empty(), "violations": vs})
}

fn read_source(src: &str) -> Result<String, Failure> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(malformed)?;
        Ok(s)
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::Malformed(format!("{src}: {e}")))
    }
}

fn read_json(src: &str) -> Result<Value, Failure> {
    let text = read_source(src)?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{src}: {e}")))
}

fn parse<T: serde::de::DeserializeOwned>(src: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_value(read_json(src)?).map_err(|e| Failure::Malformed(format!("{what}: {e}")))
}

fn read_hopf(src: &str) -> Result<HopfChiCoalgebra, Failure> {
    HopfChiCoalgebra::from_json(&read_json(src)?).map_err(malformed)
}

fn read_labeling(arg: &str) -> Result<ChiLabeling, Failure> {
    let v: Value = if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| Failure::Malformed(format!("labeling: {e}")))?
    } else {
        read_json(arg)?
    };
    serde_json::from_value(v).map_err(|e| Failure::Malformed(format!("labeling: {e}")))
}

fn parse_field(s: &str) -> Result<FieldDescriptor, Failure> {
    if s == "Q" {
        return Ok(FieldDescriptor::Rationals);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| Failure::Malformed(format!("field must be Q or a prime, got {s:?}")))?;
    FieldDescriptor::prime(p).map_err(malformed)
}

fn budget() -> Result<u128, Failure> {
    match std::env::var("CK_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::Malformed(format!(
                "CK_BUDGET must be a nonnegative integer, got {s:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn labeling_failure(e: LabelingError) -> Failure {
    match e {
        LabelingError::BudgetExceeded { needed, budget } => Failure::Invalid(json!({
            "error": "budget-exceeded",
            "needed": needed.to_string(),
            "budget": budget.to_string(),
        })),
        LabelingError::InvalidLabeling(s) => {
            Failure::Invalid(json!({"error": "invalid-labeling", "detail": s}))
        }
        LabelingError::Diagram(d) => Failure::Malformed(d.to_string()),
    }
}

fn hopf_failure(e: HopfError) -> Failure {
    match e {
        HopfError::CharacteristicDividesDimension { .. }
        | HopfError::NonUniqueIntegral { .. }
        | HopfError::PostconditionViolated(_)
        | HopfError::InvalidInput(_) => {
            Failure::Invalid(json!({"error": "hopf", "detail": e.to_string()}))
        }
        _ => Failure::Malformed(e.to_string()),
    }
}

fn invariant_failure(e: InvariantError) -> Failure {
    match e {
        InvariantError::InvalidDiagram(s) => {
            Failure::Invalid(json!({"error": "invalid-diagram", "detail": s}))
        }
        InvariantError::InvalidLabeling(s) => {
            Failure::Invalid(json!({"error": "invalid-labeling", "detail": s}))
        }
        InvariantError::NotTrivialXmod => Failure::Invalid(json!({"error": "not-trivial-xmod"})),
        InvariantError::Hopf(h) => hopf_failure(h),
        other => Failure::Malformed(other.to_string()),
    }
}

fn require_valid_diagram(d: &HeegaardDiagram) -> Result<(), Failure> {
    let vs = d.validate();
    if vs.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(report(&vs)))
    }
}

fn require_valid_xmod(cm: &CrossedModule) -> Result<(), Failure> {
    let vs = cm.check();
    if vs.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(report(&vs)))
    }
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Validate { diagram } => {
            let d: HeegaardDiagram = parse(&diagram, "diagram")?;
            let vs = d.validate();
            if vs.is_empty() {
                Ok(report(&vs))
            } else {
                Err(Failure::Invalid(report(&vs)))
            }
        }
        Cmd::CheckXmod { xmod } => {
            let cm: CrossedModule = parse(&xmod, "crossed module")?;
            require_valid_xmod(&cm)?;
            Ok(report(&[]))
        }
        Cmd::CheckHopf { hopf } => {
            let a = read_hopf(&hopf)?;
            let vs = a.check_axioms().map_err(malformed)?;
            if vs.is_empty() {
                Ok(report(&vs))
            } else {
                Err(Failure::Invalid(report(&vs)))
            }
        }
        Cmd::Integrals { hopf } => {
            let a = read_hopf(&hopf)?;
            let ints = a.compute_integrals().map_err(hopf_failure)?;
            Ok(ints.to_json())
        }
        Cmd::Labelings {
            diagram,
            xmod,
            orbits,
        } => {
            let d: HeegaardDiagram = parse(&diagram, "diagram")?;
            let cm: CrossedModule = parse(&xmod, "crossed module")?;
            require_valid_diagram(&d)?;
            require_valid_xmod(&cm)?;
            let labs = enumerate_labelings(&d, &cm, budget()?).map_err(labeling_failure)?;
            if orbits {
                let classes = orbit_classes(&labs, &d, &cm).map_err(labeling_failure)?;
                let cs: Vec<Value> = classes
                    .iter()
                    .map(|c| json!({"representative": c.representative, "size": c.size}))
                    .collect();
                Ok(json!({"labelings": labs.len(), "count": cs.len(), "classes": cs}))
            } else {
                Ok(json!({"count": labs.len(), "labelings": labs}))
            }
        }
        Cmd::Invariant {
            diagram,
            hopf,
            xmod,
            labeling,
        } => {
            let d: HeegaardDiagram = parse(&diagram, "diagram")?;
            let a = read_hopf(&hopf)?;
            if let Some(x) = xmod {
                let cm: CrossedModule = parse(&x, "crossed module")?;
                if cm != a.xmod {
                    return Err(Failure::Malformed(
                        "the crossed module differs from the one of the Hopf data".into(),
                    ));
                }
            }
            require_valid_diagram(&d)?;
            let ints = a.compute_integrals().map_err(hopf_failure)?;
            match labeling {
                Some(l) => {
                    let lab = read_labeling(&l)?;
                    let v =
                        compute_invariant_with(&d, &lab, &a, &ints).map_err(invariant_failure)?;
                    Ok(v.to_json(&lab))
                }
                None => {
                    let labs =
                        enumerate_labelings(&d, &a.xmod, budget()?).map_err(labeling_failure)?;
                    let classes = orbit_classes(&labs, &d, &a.xmod).map_err(labeling_failure)?;
                    let mut out = Vec::with_capacity(classes.len());
                    for c in &classes {
                        let v = compute_invariant_with(&d, &c.representative, &a, &ints)
                            .map_err(invariant_failure)?;
                        let mut j = v.to_json(&c.representative);
                        j["orbit_size"] = json!(c.size);
                        out.push(j);
                    }
                    Ok(json!({"classes": out}))
                }
            }
        }
        Cmd::Kuperberg { diagram, hopf } => {
            let d: HeegaardDiagram = parse(&diagram, "diagram")?;
            let a = read_hopf(&hopf)?;
            require_valid_diagram(&d)?;
            let v = crossed_kuperberg::invariant::kuperberg(&d, &a).map_err(invariant_failure)?;
            Ok(v.to_json(&ChiLabeling::trivial(&d)))
        }
        Cmd::Moves {
            diagram,
            xmod,
            labeling,
            script,
            hopf,
        } => {
            let mut d: HeegaardDiagram = parse(&diagram, "diagram")?;
            let cm: CrossedModule = parse(&xmod, "crossed module")?;
            require_valid_diagram(&d)?;
            require_valid_xmod(&cm)?;
            let mut lab = match labeling {
                Some(l) => read_labeling(&l)?,
                None => ChiLabeling::trivial(&d),
            };
            let sv = read_json(&script)?;
            let list = sv.get("moves").cloned().unwrap_or(sv);
            let moves: Vec<MoveDescriptor> = serde_json::from_value(list)
                .map_err(|e| Failure::Malformed(format!("script: {e}")))?;
            let hopf_data = match hopf {
                Some(h) => {
                    let a = read_hopf(&h)?;
                    if a.xmod != cm {
                        return Err(Failure::Malformed(
                            "the crossed module differs from the one of the Hopf data".into(),
                        ));
                    }
                    let ints = a.compute_integrals().map_err(hopf_failure)?;
                    Some((a, ints))
                }
                None => None,
            };
            let eval =
                |d: &HeegaardDiagram, lab: &ChiLabeling| -> Result<Option<Scalar>, Failure> {
                    match &hopf_data {
                        Some((a, ints)) => Ok(Some(
                            compute_invariant_with(d, lab, a, ints)
                                .map_err(invariant_failure)?
                                .value,
                        )),
                        None => Ok(None),
                    }
                };
            let before = eval(&d, &lab)?;
            for (i, mv) in moves.iter().enumerate() {
                match apply_move(&d, &lab, &cm, mv) {
                    Ok((d2, l2)) => {
                        d = d2;
                        lab = l2;
                    }
                    Err(e) => {
                        return Err(Failure::Invalid(json!({
                            "error": "move-failed",
                            "move_index": i,
                            "move": mv,
                            "detail": e.to_string(),
                        })))
                    }
                }
            }
            let after = eval(&d, &lab)?;
            let mut out = json!({"diagram": d, "labeling": lab, "moves_applied": moves.len()});
            if let (Some(b), Some(a)) = (before, after) {
                out["invariant_before"] = json!(b.render());
                out["invariant_after"] = json!(a.render());
                out["unchanged"] = json!(a == b);
            }
            Ok(out)
        }
        Cmd::Builtin { what } => builtin(what),
    }
}

fn builtin(what: Builtin) -> Out {
    let to_value = |v: Result<Value, serde_json::Error>| v.map_err(malformed);
    match what {
        Builtin::Lens { p, q } => to_value(serde_json::to_value(
            HeegaardDiagram::lens(p, q).map_err(malformed)?,
        )),
        Builtin::Poincare => to_value(serde_json::to_value(HeegaardDiagram::poincare())),
        Builtin::S3 => to_value(serde_json::to_value(HeegaardDiagram::s3())),
        Builtin::Z4z2 => to_value(serde_json::to_value(CrossedModule::z4_to_z2())),
        Builtin::Kp4 { field } => Ok(HopfChiCoalgebra::kp4(parse_field(&field)?)
            .map_err(malformed)?
            .to_json()),
        Builtin::CyclicXmod { n } => {
            if n == 0 {
                return Err(Failure::Malformed("n must be positive".into()));
            }
            to_value(serde_json::to_value(CrossedModule::trivial_kernel(
                FiniteGroup::cyclic(n),
            )))
        }
        Builtin::GroupAlgebra {
            n,
            field,
            sign_twist,
        } => {
            if n == 0 {
                return Err(Failure::Malformed("n must be positive".into()));
            }
            let f = parse_field(&field)?;
            let g = FiniteGroup::cyclic(n);
            let a = if sign_twist {
                let sign = |k: usize| Scalar::from_i64(f, if k.is_multiple_of(2) { 1 } else { -1 });
                let omega: Vec<Vec<Scalar>> = (0..n)
                    .map(|x| (0..n).map(|e| sign(x * e)).collect())
                    .collect();
                HopfChiCoalgebra::group_algebra(f, &g, &g, &omega).map_err(malformed)?
            } else {
                HopfChiCoalgebra::group_algebra_trivial(f, &g)
            };
            Ok(a.to_json())
        }
    }
}

fn print(v: &Value) {
    use std::io::Write;
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(
        std::io::stdout(),
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            print(&json!({"error": "malformed-input", "detail": msg}));
            eprintln!("ck: {msg}");
            ExitCode::from(2)
        }
    }
}
