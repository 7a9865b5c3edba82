//! An executable model of the reduced category attached to a structure:
//! objects are ring elements, and the automorphisms of r are pairs
//! (r, u) with u in M, composing by (r,u)∘(r,v) = (r, u+v). The two
//! monoidal products act on morphisms by (s,u)⊕(t,v) = (s+t, u+v) and
//! (s,u)⊗(t,v) = (st, s·v + u·t). Each axiom of the definition is
//! replayed as a commuting-diagram check by composing whiskered
//! constraint morphisms along both paths, which makes this module an
//! independent ground truth for the equation-based relation checker.
//!
//! Orientation convention: the additive and multiplicative associating
//! constraints map x∘(y∘z) to (x∘y)∘z, the commutativity constraint
//! maps x⊕y to y⊕x, and the two distributivity constraints break a
//! product apart, x⊗(y⊕z) → xy⊕xz and (x⊕y)⊗z → xz⊕yz.

use crate::algebra::{Bimodule, FiniteRing};
use crate::cochain::{all_args, Cochain, CochainError, CochainKind};
use crate::relations::{check_structure, AnnStructure, RelationReport};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// An automorphism (r, u) of the object r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SkeletalMorphism {
    pub object: usize,
    pub value: usize,
}

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error("cannot compose automorphisms of distinct objects {left} and {right}")]
    MismatchedObjects { left: usize, right: usize },
    #[error("constraint {kind} expects {expected} arguments, got {got}")]
    ArityMismatch { kind: &'static str, expected: usize, got: usize },
}

/// Identity automorphism of an object.
pub fn mor_id(object: usize) -> SkeletalMorphism {
    SkeletalMorphism { object, value: 0 }
}

/// Composition f∘g, defined only on a common object.
pub fn mor_compose(
    module: &Bimodule,
    f: &SkeletalMorphism,
    g: &SkeletalMorphism,
) -> Result<SkeletalMorphism, SkeletonError> {
    if f.object != g.object {
        return Err(SkeletonError::MismatchedObjects { left: f.object, right: g.object });
    }
    Ok(SkeletalMorphism { object: f.object, value: module.add(f.value, g.value) })
}

/// Inverse automorphism (r, -u).
pub fn mor_inverse(module: &Bimodule, f: &SkeletalMorphism) -> SkeletalMorphism {
    SkeletalMorphism { object: f.object, value: module.neg(f.value) }
}

/// The sum (s,u)⊕(t,v) = (s+t, u+v).
pub fn mor_sum(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &SkeletalMorphism,
    g: &SkeletalMorphism,
) -> SkeletalMorphism {
    SkeletalMorphism {
        object: ring.add(f.object, g.object),
        value: module.add(f.value, g.value),
    }
}

/// The product (s,u)⊗(t,v) = (st, s·v + u·t).
pub fn mor_prod(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &SkeletalMorphism,
    g: &SkeletalMorphism,
) -> SkeletalMorphism {
    SkeletalMorphism {
        object: ring.mul(f.object, g.object),
        value: module.add(module.act_left(f.object, g.value), module.act_right(f.value, g.object)),
    }
}

/// The named constraint isomorphisms of the reduced category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// x⊕(y⊕z) → (x⊕y)⊕z with component xi(x,y,z).
    AssocPlus,
    /// x⊕y → y⊕x with component eta(x,y).
    Comm,
    /// x⊗(y⊗z) → (x⊗y)⊗z with component alpha(x,y,z).
    AssocTimes,
    /// x⊗(y⊕z) → xy⊕xz with component lambda(x,y,z).
    DistLeft,
    /// (x⊕y)⊗z → xz⊕yz with component rho(x,y,z).
    DistRight,
    /// 0⊕x → x; an identity in the reduced category.
    UnitPlusLeft,
    /// x⊕0 → x; an identity.
    UnitPlusRight,
    /// 1⊗x → x; an identity.
    UnitTimesLeft,
    /// x⊗1 → x; an identity.
    UnitTimesRight,
}

/// The constraint morphism at an argument tuple. Unit constraints take
/// one argument and are identities.
pub fn constraint_of(
    ring: &FiniteRing,
    f: &AnnStructure,
    kind: ConstraintKind,
    args: &[usize],
) -> Result<SkeletalMorphism, SkeletonError> {
    let need = match kind {
        ConstraintKind::AssocPlus | ConstraintKind::AssocTimes => 3,
        ConstraintKind::DistLeft | ConstraintKind::DistRight => 3,
        ConstraintKind::Comm => 2,
        _ => 1,
    };
    if args.len() != need {
        let name = match kind {
            ConstraintKind::AssocPlus => "a+",
            ConstraintKind::Comm => "c",
            ConstraintKind::AssocTimes => "a",
            ConstraintKind::DistLeft => "L",
            ConstraintKind::DistRight => "R",
            _ => "unit",
        };
        return Err(SkeletonError::ArityMismatch { kind: name, expected: need, got: args.len() });
    }
    let s = |a: usize, b: usize| ring.add(a, b);
    let m = |a: usize, b: usize| ring.mul(a, b);
    Ok(match kind {
        ConstraintKind::AssocPlus => SkeletalMorphism {
            object: s(s(args[0], args[1]), args[2]),
            value: f.xi.at(args),
        },
        ConstraintKind::Comm => {
            SkeletalMorphism { object: s(args[0], args[1]), value: f.eta.at(args) }
        }
        ConstraintKind::AssocTimes => SkeletalMorphism {
            object: m(m(args[0], args[1]), args[2]),
            value: f.alpha.at(args),
        },
        ConstraintKind::DistLeft => SkeletalMorphism {
            object: m(args[0], s(args[1], args[2])),
            value: f.lambda.at(args),
        },
        ConstraintKind::DistRight => SkeletalMorphism {
            object: m(s(args[0], args[1]), args[2]),
            value: f.rho.at(args),
        },
        ConstraintKind::UnitPlusLeft | ConstraintKind::UnitPlusRight => mor_id(args[0]),
        ConstraintKind::UnitTimesLeft | ConstraintKind::UnitTimesRight => mor_id(args[0]),
    })
}

/// Both factorizations of the middle-four interchange morphism
/// v : (x⊕y)⊕(z⊕t) → (x⊕z)⊕(y⊕t).
#[derive(Debug, Clone, Copy)]
pub struct InterchangeEvaluation {
    pub canonical: SkeletalMorphism,
    pub alternative: SkeletalMorphism,
}

impl InterchangeEvaluation {
    pub fn agree(&self) -> bool {
        self.canonical == self.alternative
    }
}

/// The two factorizations disagreed, which certifies the structure
/// violates coherence.
#[derive(Debug, Error)]
#[error("interchange factorizations disagree at {args:?}: canonical {canonical}, alternative {alternative}")]
pub struct CoherenceViolation {
    pub args: [usize; 4],
    pub canonical: usize,
    pub alternative: usize,
}

/// Evaluates both interchange factorizations by composing whiskered
/// constraints. Never fails: disagreement is visible via `agree`.
pub fn interchange_both(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    x: usize,
    y: usize,
    z: usize,
    t: usize,
) -> InterchangeEvaluation {
    let s = |a: usize, b: usize| ring.add(a, b);
    let ap = |a: usize, b: usize, c: usize| {
        constraint_of(ring, f, ConstraintKind::AssocPlus, &[a, b, c]).expect("arity 3")
    };
    let cm =
        |a: usize, b: usize| constraint_of(ring, f, ConstraintKind::Comm, &[a, b]).expect("arity 2");
    let inv = |mm: SkeletalMorphism| mor_inverse(module, &mm);
    let sum = |a: &SkeletalMorphism, b: &SkeletalMorphism| mor_sum(ring, module, a, b);
    let compose = |steps: &[SkeletalMorphism]| -> SkeletalMorphism {
        let mut acc = steps[0];
        for step in &steps[1..] {
            acc = mor_compose(module, step, &acc).expect("diagram objects line up");
        }
        acc
    };

    // Move y and z past each other inside x ⊕ ((y|z) ⊕ t) trees.
    let canonical = compose(&[
        inv(ap(x, y, s(z, t))),
        sum(&mor_id(x), &ap(y, z, t)),
        sum(&mor_id(x), &sum(&cm(y, z), &mor_id(t))),
        sum(&mor_id(x), &inv(ap(z, y, t))),
        ap(x, z, s(y, t)),
    ]);
    // Move y and z past each other inside (x ⊕ (y|z)) ⊕ t trees.
    let alternative = compose(&[
        ap(s(x, y), z, t),
        sum(&inv(ap(x, y, z)), &mor_id(t)),
        sum(&sum(&mor_id(x), &cm(y, z)), &mor_id(t)),
        sum(&ap(x, z, y), &mor_id(t)),
        inv(ap(s(x, z), y, t)),
    ]);
    debug_assert_eq!(canonical.object, s(s(x, y), s(z, t)));
    debug_assert_eq!(alternative.object, canonical.object);
    InterchangeEvaluation { canonical, alternative }
}

/// The interchange morphism by the canonical factorization; errors when
/// the guard factorization disagrees (possible only on structures that
/// violate coherence).
pub fn interchange_v(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    x: usize,
    y: usize,
    z: usize,
    t: usize,
) -> Result<SkeletalMorphism, CoherenceViolation> {
    let both = interchange_both(ring, module, f, x, y, z, t);
    if !both.agree() {
        return Err(CoherenceViolation {
            args: [x, y, z, t],
            canonical: both.canonical.value,
            alternative: both.alternative.value,
        });
    }
    Ok(both.canonical)
}

/// How an interchange table is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMethod {
    /// Compose the canonical factorization in the reduced category.
    Diagram,
    /// Evaluate the direct closed-form expansion.
    Printed,
}

/// The interchange table of a structure by the chosen method.
pub fn sigma_of(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    method: SigmaMethod,
) -> Cochain {
    match method {
        SigmaMethod::Diagram => {
            let n = ring.order();
            let values: Vec<usize> = all_args(n, 4)
                .map(|a| interchange_both(ring, module, f, a[0], a[1], a[2], a[3]).canonical.value)
                .collect();
            Cochain {
                kind: CochainKind::Sigma,
                ring_order: n,
                module_order: module.order(),
                values,
            }
        }
        SigmaMethod::Printed => crate::relations::sigma_closed_form(
            ring,
            module,
            f,
            crate::relations::SigmaFormula::Printed,
        ),
    }
}

/// Tuple-level disagreement between two ways of computing a value.
#[derive(Debug, Clone, Serialize)]
pub struct ValueDisagreement {
    pub args: Vec<usize>,
    pub first: usize,
    pub second: usize,
}

/// Comparison of the interchange computations: diagram versus direct
/// formula, and canonical versus guard factorization.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaComparison {
    /// Tuples where the diagram method and the direct formula differ.
    pub method_disagreements: Vec<ValueDisagreement>,
    /// Tuples where the two factorizations of v differ.
    pub factorization_disagreements: Vec<ValueDisagreement>,
}

impl SigmaComparison {
    pub fn clean(&self) -> bool {
        self.method_disagreements.is_empty() && self.factorization_disagreements.is_empty()
    }
}

/// Compares sigma computations at every tuple.
pub fn compare_sigma(ring: &FiniteRing, module: &Bimodule, f: &AnnStructure) -> SigmaComparison {
    let printed = sigma_of(ring, module, f, SigmaMethod::Printed);
    let mut method_disagreements = Vec::new();
    let mut factorization_disagreements = Vec::new();
    for a in all_args(ring.order(), 4) {
        let both = interchange_both(ring, module, f, a[0], a[1], a[2], a[3]);
        if !both.agree() {
            factorization_disagreements.push(ValueDisagreement {
                args: a.clone(),
                first: both.canonical.value,
                second: both.alternative.value,
            });
        }
        let direct = printed.at(&a);
        if both.canonical.value != direct {
            method_disagreements.push(ValueDisagreement {
                args: a,
                first: both.canonical.value,
                second: direct,
            });
        }
    }
    SigmaComparison { method_disagreements, factorization_disagreements }
}

/// Status of one axiom diagram after exhaustive evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomStatus {
    pub id: String,
    pub pass: bool,
    pub violations: usize,
    pub witnesses: Vec<DiagramWitness>,
}

/// A tuple where the two composite paths differ, with both M-values.
/// `leg` names the sub-diagram for axioms that bundle several.
#[derive(Debug, Clone, Serialize)]
pub struct DiagramWitness {
    pub args: Vec<usize>,
    pub leg: String,
    pub lhs: usize,
    pub rhs: usize,
}

/// Per-axiom outcome of replaying the definition's diagrams.
#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub axioms: Vec<AxiomStatus>,
}

impl DiagramReport {
    pub fn pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.axioms.iter().filter(|a| !a.pass).map(|a| a.id.as_str()).collect()
    }

    pub fn status(&self, id: &str) -> Option<&AxiomStatus> {
        self.axioms.iter().find(|a| a.id == id)
    }
}

/// The axiom identifiers, in report order.
pub const AXIOM_IDS: [&str; 15] = [
    "pentagon-plus",
    "hexagon-c",
    "c-involution",
    "pentagon-times",
    "triangle-times",
    "ann1-L",
    "ann1-R",
    "ann2-d1",
    "ann2-d2",
    "ann2-d3",
    "ann2-d4",
    "ann3-L",
    "ann3-R",
    "unit-zero-L",
    "unit-zero-R",
];

/// Which relation ids each axiom diagram reduces to in the equation
/// system; used when logging cross-validation discrepancies.
pub fn axiom_relation_map() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("pentagon-plus", vec!["1"]),
        ("hexagon-c", vec!["3"]),
        ("c-involution", vec!["4"]),
        ("pentagon-times", vec!["13"]),
        ("triangle-times", vec!["14"]),
        ("ann1-L", vec!["5", "7"]),
        ("ann1-R", vec!["6", "8"]),
        ("ann2-d1", vec!["10"]),
        ("ann2-d2", vec!["12"]),
        ("ann2-d3", vec!["11"]),
        ("ann2-d4", vec!["9"]),
        ("ann3-L", vec!["16"]),
        ("ann3-R", vec!["17"]),
        ("unit-zero-L", vec!["2", "15", "16"]),
        ("unit-zero-R", vec!["17"]),
    ]
}

struct AxiomRun {
    violations: usize,
    witnesses: Vec<DiagramWitness>,
    cap: usize,
}

impl AxiomRun {
    fn new(cap: usize) -> Self {
        AxiomRun { violations: 0, witnesses: Vec::new(), cap }
    }

    fn compare(
        &mut self,
        module: &Bimodule,
        args: &[usize],
        leg: &str,
        path1: &[SkeletalMorphism],
        path2: &[SkeletalMorphism],
    ) {
        let compose = |steps: &[SkeletalMorphism]| -> SkeletalMorphism {
            let mut acc = steps[0];
            for step in &steps[1..] {
                acc = mor_compose(module, step, &acc).expect("diagram objects line up");
            }
            acc
        };
        let lhs = compose(path1);
        let rhs = compose(path2);
        assert_eq!(lhs.object, rhs.object, "diagram paths end at distinct objects");
        if lhs.value != rhs.value {
            self.violations += 1;
            if self.witnesses.len() < self.cap {
                self.witnesses.push(DiagramWitness {
                    args: args.to_vec(),
                    leg: leg.to_string(),
                    lhs: lhs.value,
                    rhs: rhs.value,
                });
            }
        }
    }

    fn finish(self, id: &str) -> AxiomStatus {
        AxiomStatus {
            id: id.to_string(),
            pass: self.violations == 0,
            violations: self.violations,
            witnesses: self.witnesses,
        }
    }
}

/// Replays every axiom diagram of the definition over all object
/// tuples and reports each with both composite values on failures.
pub fn verify_axioms(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
) -> Result<DiagramReport, CochainError> {
    verify_axioms_capped(ring, module, f, 10)
}

/// As `verify_axioms` with an explicit witness cap per axiom.
pub fn verify_axioms_capped(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    cap: usize,
) -> Result<DiagramReport, CochainError> {
    if ring.order() != f.ring_order() || module.order() != f.module_order() {
        return Err(CochainError::Mismatch(format!(
            "structure is over ({}, {}) but the ambient is ({}, {})",
            f.ring_order(),
            f.module_order(),
            ring.order(),
            module.order()
        )));
    }
    let n = ring.order();
    let one = ring.one();
    let s = |a: usize, b: usize| ring.add(a, b);
    let m = |a: usize, b: usize| ring.mul(a, b);
    let ap = |a: usize, b: usize, c: usize| {
        constraint_of(ring, f, ConstraintKind::AssocPlus, &[a, b, c]).expect("arity")
    };
    let at = |a: usize, b: usize, c: usize| {
        constraint_of(ring, f, ConstraintKind::AssocTimes, &[a, b, c]).expect("arity")
    };
    let dl = |a: usize, b: usize, c: usize| {
        constraint_of(ring, f, ConstraintKind::DistLeft, &[a, b, c]).expect("arity")
    };
    let dr = |a: usize, b: usize, c: usize| {
        constraint_of(ring, f, ConstraintKind::DistRight, &[a, b, c]).expect("arity")
    };
    let cm =
        |a: usize, b: usize| constraint_of(ring, f, ConstraintKind::Comm, &[a, b]).expect("arity");
    let inv = |mm: SkeletalMorphism| mor_inverse(module, &mm);
    let sum = |a: &SkeletalMorphism, b: &SkeletalMorphism| mor_sum(ring, module, a, b);
    let prod = |a: &SkeletalMorphism, b: &SkeletalMorphism| mor_prod(ring, module, a, b);

    let mut axioms = Vec::with_capacity(AXIOM_IDS.len());

    // Pentagon for ⊕: both reassociations of x⊕(y⊕(z⊕t)).
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "",
            &[ap(x, y, s(z, t)), ap(s(x, y), z, t)],
            &[sum(&mor_id(x), &ap(y, z, t)), ap(x, s(y, z), t), sum(&ap(x, y, z), &mor_id(t))],
        );
    }
    axioms.push(run.finish("pentagon-plus"));

    // Hexagon for c against a+: move z across x⊕y.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 3) {
        let (x, y, z) = (a[0], a[1], a[2]);
        run.compare(
            module,
            &a,
            "",
            &[cm(s(x, y), z), ap(z, x, y)],
            &[inv(ap(x, y, z)), sum(&mor_id(x), &cm(y, z)), ap(x, z, y), sum(&cm(x, z), &mor_id(y))],
        );
    }
    axioms.push(run.finish("hexagon-c"));

    // c is an involution: c(y,x)∘c(x,y) = id.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 2) {
        let (x, y) = (a[0], a[1]);
        run.compare(module, &a, "", &[cm(x, y), cm(y, x)], &[mor_id(s(x, y))]);
    }
    axioms.push(run.finish("c-involution"));

    // Pentagon for ⊗.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "",
            &[at(x, y, m(z, t)), at(m(x, y), z, t)],
            &[prod(&mor_id(x), &at(y, z, t)), at(x, m(y, z), t), prod(&at(x, y, z), &mor_id(t))],
        );
    }
    axioms.push(run.finish("pentagon-times"));

    // Unit triangles for ⊗ at the strict unit, one per placement.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 2) {
        let (x, y) = (a[0], a[1]);
        run.compare(module, &[x, one, y], "middle", &[at(x, one, y)], &[mor_id(m(x, y))]);
        run.compare(module, &[one, x, y], "left", &[at(one, x, y)], &[mor_id(m(x, y))]);
        run.compare(module, &[x, y, one], "right", &[at(x, y, one)], &[mor_id(m(x, y))]);
    }
    axioms.push(run.finish("triangle-times"));

    // Left distributivity is a ⊕-functor morphism: compatibility with c
    // and with a+.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 3) {
        let (x, y, z) = (a[0], a[1], a[2]);
        run.compare(
            module,
            &a,
            "comm",
            &[dl(x, y, z), cm(m(x, y), m(x, z))],
            &[prod(&mor_id(x), &cm(y, z)), dl(x, z, y)],
        );
    }
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "assoc",
            &[
                prod(&mor_id(x), &ap(y, z, t)),
                dl(x, s(y, z), t),
                sum(&dl(x, y, z), &mor_id(m(x, t))),
            ],
            &[
                dl(x, y, s(z, t)),
                sum(&mor_id(m(x, y)), &dl(x, z, t)),
                ap(m(x, y), m(x, z), m(x, t)),
            ],
        );
    }
    axioms.push(run.finish("ann1-L"));

    // Right distributivity is a ⊕-functor morphism.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 3) {
        let (x, y, z) = (a[0], a[1], a[2]);
        run.compare(
            module,
            &a,
            "comm",
            &[dr(x, y, z), cm(m(x, z), m(y, z))],
            &[prod(&cm(x, y), &mor_id(z)), dr(y, x, z)],
        );
    }
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "assoc",
            &[
                prod(&ap(x, y, z), &mor_id(t)),
                dr(s(x, y), z, t),
                sum(&dr(x, y, t), &mor_id(m(z, t))),
            ],
            &[
                dr(x, s(y, z), t),
                sum(&mor_id(m(x, t)), &dr(y, z, t)),
                ap(m(x, t), m(y, t), m(z, t)),
            ],
        );
    }
    axioms.push(run.finish("ann1-R"));

    // The four diagrams relating a with the distributivity morphisms.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "",
            &[
                prod(&mor_id(x), &dl(y, z, t)),
                dl(x, m(y, z), m(y, t)),
                sum(&at(x, y, z), &at(x, y, t)),
            ],
            &[at(x, y, s(z, t)), dl(m(x, y), z, t)],
        );
    }
    axioms.push(run.finish("ann2-d1"));

    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "",
            &[dr(x, y, m(z, t)), sum(&at(x, z, t), &at(y, z, t))],
            &[at(s(x, y), z, t), prod(&dr(x, y, z), &mor_id(t)), dr(m(x, z), m(y, z), t)],
        );
    }
    axioms.push(run.finish("ann2-d2"));

    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        run.compare(
            module,
            &a,
            "",
            &[
                prod(&mor_id(x), &dr(y, z, t)),
                dl(x, m(y, t), m(z, t)),
                sum(&at(x, y, t), &at(x, z, t)),
            ],
            &[at(x, s(y, z), t), prod(&dl(x, y, z), &mor_id(t)), dr(m(x, y), m(x, z), t)],
        );
    }
    axioms.push(run.finish("ann2-d3"));

    // Both full expansions of (x⊕y)⊗(z⊕t), connected by the
    // interchange morphism v.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 4) {
        let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
        let v = interchange_both(ring, module, f, m(x, z), m(x, t), m(y, z), m(y, t)).canonical;
        run.compare(
            module,
            &a,
            "",
            &[dl(s(x, y), z, t), sum(&dr(x, y, z), &dr(x, y, t))],
            &[dr(x, y, s(z, t)), sum(&dl(x, z, t), &dl(y, z, t)), v],
        );
    }
    axioms.push(run.finish("ann2-d4"));

    // Distributivity at the strict ⊗-unit.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 2) {
        let (y, z) = (a[0], a[1]);
        run.compare(module, &[one, y, z], "", &[dl(one, y, z)], &[mor_id(s(y, z))]);
    }
    axioms.push(run.finish("ann3-L"));

    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 2) {
        let (x, y) = (a[0], a[1]);
        run.compare(module, &[x, y, one], "", &[dr(x, y, one)], &[mor_id(s(x, y))]);
    }
    axioms.push(run.finish("ann3-R"));

    // Constraints whiskered by the strict zero are identities: the unit
    // diagrams of the additive structure and the absorbing object.
    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 3) {
        if a.contains(&0) {
            let (x, y, z) = (a[0], a[1], a[2]);
            run.compare(module, &a, "xi", &[ap(x, y, z)], &[mor_id(s(s(x, y), z))]);
        }
    }
    for a in all_args(n, 2) {
        if a.contains(&0) {
            let (x, y) = (a[0], a[1]);
            run.compare(module, &a, "eta", &[cm(x, y)], &[mor_id(s(x, y))]);
        }
    }
    for a in all_args(n, 3) {
        if a.contains(&0) {
            let (x, y, z) = (a[0], a[1], a[2]);
            run.compare(module, &a, "alpha", &[at(x, y, z)], &[mor_id(m(m(x, y), z))]);
            if a[0] == 0 || a[1] == 0 || a[2] == 0 {
                run.compare(module, &a, "lambda", &[dl(x, y, z)], &[mor_id(m(x, s(y, z)))]);
            }
        }
    }
    axioms.push(run.finish("unit-zero-L"));

    let mut run = AxiomRun::new(cap);
    for a in all_args(n, 3) {
        if a.contains(&0) {
            let (x, y, z) = (a[0], a[1], a[2]);
            run.compare(module, &a, "rho", &[dr(x, y, z)], &[mor_id(m(s(x, y), z))]);
        }
    }
    axioms.push(run.finish("unit-zero-R"));

    Ok(DiagramReport { axioms })
}

/// First 16 hex characters of a canonical digest of a structure's five
/// value tables and ambient orders; used to key discrepancy records.
pub fn structure_digest(f: &AnnStructure) -> String {
    let mut hasher = Sha256::new();
    hasher.update(f.ring_order().to_le_bytes());
    hasher.update(f.module_order().to_le_bytes());
    for slot in f.slots() {
        hasher.update([slot.kind.arity() as u8]);
        for &v in &slot.values {
            hasher.update((v as u64).to_le_bytes());
        }
    }
    hex::encode(hasher.finalize())[..16].to_string()
}

/// One candidate where the diagram checker and the equation checker
/// returned different verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyRecord {
    pub structure: String,
    pub axiom_verdict: bool,
    pub relation_verdict: bool,
    pub failing_axioms: Vec<String>,
    pub failing_relations: Vec<String>,
    /// First witness tuple from a failing axiom, if any.
    pub witness: Option<Vec<usize>>,
}

/// Outcome of running both checkers over a set of candidates.
#[derive(Debug, Clone, Serialize)]
pub struct CrossValidation {
    pub candidates: usize,
    pub valid_by_both: usize,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

/// Runs the diagram checker and the equation checker on every
/// candidate and records each verdict disagreement.
pub fn cross_validate(
    ring: &FiniteRing,
    module: &Bimodule,
    candidates: impl Iterator<Item = AnnStructure>,
) -> Result<CrossValidation, CochainError> {
    let mut total = 0usize;
    let mut valid_by_both = 0usize;
    let mut discrepancies = Vec::new();
    for f in candidates {
        total += 1;
        let diagram = verify_axioms(ring, module, &f)?;
        let relation = check_structure(ring, module, &f, false)?;
        match (diagram.pass(), relation.pass()) {
            (true, true) => valid_by_both += 1,
            (false, false) => {}
            (axiom_verdict, relation_verdict) => {
                let witness = diagram
                    .axioms
                    .iter()
                    .find(|x| !x.pass)
                    .and_then(|x| x.witnesses.first())
                    .map(|w| w.args.clone());
                discrepancies.push(DiscrepancyRecord {
                    structure: structure_digest(&f),
                    axiom_verdict,
                    relation_verdict,
                    failing_axioms: diagram
                        .failing_ids()
                        .iter()
                        .map(|sid| sid.to_string())
                        .collect(),
                    failing_relations: relation
                        .failing_ids()
                        .iter()
                        .map(|sid| sid.to_string())
                        .collect(),
                    witness,
                });
            }
        }
    }
    Ok(CrossValidation { candidates: total, valid_by_both, discrepancies })
}

/// Appends discrepancy records to a log file, one JSON object per line.
pub fn write_discrepancy_log(
    path: &std::path::Path,
    records: &[DiscrepancyRecord],
) -> std::io::Result<()> {
    use std::io::Write;
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    for record in records {
        let line = serde_json::to_string(record).expect("records serialize");
        writeln!(file, "{line}")?;
    }
    Ok(())
}

/// Per-relation verdict agreement between the two checkers for one
/// structure, by the axiom-relation map; entries are (axiom id,
/// relation ids, axiom pass, relations pass).
pub fn verdict_matrix(
    diagram: &DiagramReport,
    relation: &RelationReport,
) -> Vec<(String, Vec<String>, bool, bool)> {
    axiom_relation_map()
        .into_iter()
        .map(|(axiom_id, relation_ids)| {
            let axiom_pass = diagram.status(axiom_id).map(|s| s.pass).unwrap_or(true);
            let relations_pass = relation_ids.iter().all(|rid| {
                relation.status(rid).map(|s| s.pass).unwrap_or(true)
            });
            (
                axiom_id.to_string(),
                relation_ids.iter().map(|r| r.to_string()).collect(),
                axiom_pass,
                relations_pass,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic_ring, make_product_ring};
    use crate::cochain::{free_support, from_free_values};
    use crate::relations::{
        apply_structure_coboundary, check_cocycle, enumerate_structures, quadruple_from,
        sigma_closed_form, CochainPair, SigmaFormula,
    };

    fn setup(n: usize) -> (FiniteRing, Bimodule) {
        let ring = make_cyclic_ring(n).unwrap();
        let module = Bimodule::regular_bimodule(&ring).unwrap();
        (ring, module)
    }

    fn all_pairs(ring: &FiniteRing, module: &Bimodule) -> Vec<CochainPair> {
        let mu_support = free_support(CochainKind::Mu, ring);
        let nu_support = free_support(CochainKind::Nu, ring);
        let k = mu_support.len() + nu_support.len();
        let m = module.order();
        (0..m.pow(k as u32))
            .map(|mut index| {
                let mut digits = vec![0usize; k];
                for i in (0..k).rev() {
                    digits[i] = index % m;
                    index /= m;
                }
                let (mu_free, nu_free) = digits.split_at(mu_support.len());
                CochainPair {
                    mu: from_free_values(CochainKind::Mu, ring, module, mu_free).unwrap(),
                    nu: from_free_values(CochainKind::Nu, ring, module, nu_free).unwrap(),
                }
            })
            .collect()
    }

    #[test]
    fn morphism_arithmetic_matches_the_presentation() {
        let (ring, module) = setup(2);
        let f = SkeletalMorphism { object: 1, value: 1 };
        let p = mor_prod(&ring, &module, &f, &f);
        assert_eq!(p, SkeletalMorphism { object: 1, value: 0 });
        let idm = mor_id(1);
        assert_eq!(mor_compose(&module, &idm, &f).unwrap(), f);
        let g = SkeletalMorphism { object: 0, value: 1 };
        assert!(mor_compose(&module, &f, &g).is_err());
        assert_eq!(
            mor_sum(&ring, &module, &f, &g),
            SkeletalMorphism { object: 1, value: 0 }
        );
    }

    #[test]
    fn mor_prod_is_functorial() {
        let (ring, module) = setup(3);
        for r in 0..3 {
            for s in 0..3 {
                for u1 in 0..3 {
                    for u2 in 0..3 {
                        for v1 in 0..3 {
                            for v2 in 0..3 {
                                let f = SkeletalMorphism { object: r, value: u1 };
                                let fp = SkeletalMorphism { object: r, value: u2 };
                                let g = SkeletalMorphism { object: s, value: v1 };
                                let gp = SkeletalMorphism { object: s, value: v2 };
                                let lhs = mor_prod(
                                    &ring,
                                    &module,
                                    &mor_compose(&module, &f, &fp).unwrap(),
                                    &mor_compose(&module, &g, &gp).unwrap(),
                                );
                                let rhs = mor_compose(
                                    &module,
                                    &mor_prod(&ring, &module, &f, &g),
                                    &mor_prod(&ring, &module, &fp, &gp),
                                )
                                .unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn constraint_objects_fold_in_the_ring() {
        let (ring, module) = setup(3);
        let f = AnnStructure::zero(&ring, &module);
        let l = constraint_of(&ring, &f, ConstraintKind::DistLeft, &[2, 1, 2]).unwrap();
        assert_eq!(l.object, 0, "2*(1+2) = 0 over Z/3");
        let r = constraint_of(&ring, &f, ConstraintKind::DistRight, &[2, 2, 2]).unwrap();
        assert_eq!(r.object, ring.mul(ring.add(2, 2), 2));
        assert!(constraint_of(&ring, &f, ConstraintKind::Comm, &[1, 2, 0]).is_err());
    }

    #[test]
    fn zero_structure_passes_all_axioms() {
        for n in [2usize, 3, 4] {
            let (ring, module) = setup(n);
            let f = AnnStructure::zero(&ring, &module);
            let report = verify_axioms(&ring, &module, &f).unwrap();
            assert!(report.pass(), "failing axioms over Z/{n}: {:?}", report.failing_ids());
            assert_eq!(report.axioms.len(), 15);
            let v = interchange_v(&ring, &module, &f, 1, 1, 1, 1).unwrap();
            assert_eq!(v.value, 0);
        }
        let z2 = make_cyclic_ring(2).unwrap();
        let ring = make_product_ring(&z2, &z2).unwrap();
        let module = Bimodule::regular_bimodule(&ring).unwrap();
        let f = AnnStructure::zero(&ring, &module);
        assert!(verify_axioms(&ring, &module, &f).unwrap().pass());
    }

    #[test]
    fn eta_spike_fails_the_interchange_diagram() {
        let (ring, module) = setup(2);
        let mut f = AnnStructure::zero(&ring, &module);
        f.eta = from_free_values(CochainKind::Eta, &ring, &module, &[1]).unwrap();
        let report = verify_axioms(&ring, &module, &f).unwrap();
        assert!(!report.pass());
        let d4 = report.status("ann2-d4").unwrap();
        assert!(!d4.pass);
        assert_eq!(d4.witnesses[0].args, vec![1, 1, 1, 1]);
        // Verdict agrees with the equation checker.
        assert!(!check_structure(&ring, &module, &f, false).unwrap().pass());
    }

    #[test]
    fn xi_spike_fails_the_hexagon() {
        let (ring, module) = setup(2);
        let mut f = AnnStructure::zero(&ring, &module);
        f.xi = from_free_values(CochainKind::Xi, &ring, &module, &[1]).unwrap();
        let report = verify_axioms(&ring, &module, &f).unwrap();
        let hex = report.status("hexagon-c").unwrap();
        assert!(!hex.pass);
        assert!(hex.witnesses.iter().any(|w| w.args == vec![1, 1, 1]));
    }

    #[test]
    fn exhaustive_cross_validation_over_z2() {
        let (ring, module) = setup(2);
        // All 4 normalized candidates: free entries xi(1,1,1), eta(1,1).
        let candidates = (0..4usize).map(|i| {
            let mut f = AnnStructure::zero(&ring, &module);
            f.xi = from_free_values(CochainKind::Xi, &ring, &module, &[i & 1]).unwrap();
            f.eta = from_free_values(CochainKind::Eta, &ring, &module, &[(i >> 1) & 1]).unwrap();
            f
        });
        let outcome = cross_validate(&ring, &module, candidates).unwrap();
        assert_eq!(outcome.candidates, 4);
        assert_eq!(outcome.valid_by_both, 1);
        assert!(outcome.discrepancies.is_empty());
    }

    #[test]
    fn interchange_factorizations_agree_on_valid_structures() {
        let (ring, module) = setup(3);
        let zero = AnnStructure::zero(&ring, &module);
        for pair in all_pairs(&ring, &module) {
            let f = apply_structure_coboundary(&ring, &module, &zero, &pair).unwrap();
            for a in all_args(3, 4) {
                let both = interchange_both(&ring, &module, &f, a[0], a[1], a[2], a[3]);
                assert!(both.agree(), "factorizations differ at {a:?}");
            }
        }
    }

    #[test]
    fn diagram_sigma_matches_the_canonical_closed_form() {
        let (ring, module) = setup(3);
        let zero = AnnStructure::zero(&ring, &module);
        for pair in all_pairs(&ring, &module).into_iter().take(40) {
            let f = apply_structure_coboundary(&ring, &module, &zero, &pair).unwrap();
            let by_diagram = sigma_of(&ring, &module, &f, SigmaMethod::Diagram);
            let closed = sigma_closed_form(&ring, &module, &f, SigmaFormula::Canonical);
            assert_eq!(by_diagram, closed);
            let comparison = compare_sigma(&ring, &module, &f);
            assert!(comparison.clean());
        }
    }

    #[test]
    fn diagram_sigma_yields_cocycles_for_enumerated_structures() {
        let (ring, module) = setup(2);
        for f in enumerate_structures(&ring, &module, 100).unwrap() {
            let sigma = sigma_of(&ring, &module, &f, SigmaMethod::Diagram);
            let q = quadruple_from(&f, sigma).unwrap();
            assert!(check_cocycle(&ring, &module, &q).unwrap().pass());
        }
    }

    #[test]
    fn digest_is_stable_and_distinguishes() {
        let (ring, module) = setup(2);
        let zero = AnnStructure::zero(&ring, &module);
        let mut spiked = AnnStructure::zero(&ring, &module);
        spiked.eta = from_free_values(CochainKind::Eta, &ring, &module, &[1]).unwrap();
        assert_eq!(structure_digest(&zero), structure_digest(&zero));
        assert_ne!(structure_digest(&zero), structure_digest(&spiked));
        assert_eq!(structure_digest(&zero).len(), 16);
    }

    #[test]
    fn verdict_matrix_pairs_up_for_the_eta_spike() {
        let (ring, module) = setup(2);
        let mut f = AnnStructure::zero(&ring, &module);
        f.eta = from_free_values(CochainKind::Eta, &ring, &module, &[1]).unwrap();
        let diagram = verify_axioms(&ring, &module, &f).unwrap();
        let relation = check_structure(&ring, &module, &f, false).unwrap();
        for (axiom, _relations, axiom_pass, relations_pass) in
            verdict_matrix(&diagram, &relation)
        {
            assert_eq!(axiom_pass, relations_pass, "axiom {axiom} disagrees");
        }
    }
}
