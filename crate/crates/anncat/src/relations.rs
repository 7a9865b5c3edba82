//! The defining relation systems: seventeen structure relations on
//! (xi, eta, alpha, lambda, rho), ten cocycle conditions v1..v10 on
//! (sigma, alpha, lambda, rho), and the degree-2 coboundary maps
//! v11..v14 connecting pairs (mu, nu) to both worlds. Every relation is
//! expressed as a pair of signed term lists over compound ring
//! arguments, so the same definitions drive exhaustive table checking
//! and exact integer matrix assembly.

use crate::algebra::{Bimodule, FiniteRing};
use crate::cochain::{
    all_args, cochain_add, cochain_neg, free_support, zero_cochain, Cochain, CochainError,
    CochainKind,
};
use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

/// Default cap on recorded witnesses per relation.
pub const DEFAULT_WITNESS_CAP: usize = 10;

/// A full structure: the five correction tables of a bimonoidal
/// category structure of type (R, M).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnStructure {
    pub xi: Cochain,
    pub eta: Cochain,
    pub alpha: Cochain,
    pub lambda: Cochain,
    pub rho: Cochain,
}

/// A degree-3 cocycle candidate: interchange, multiplicative
/// associativity, and the two distributivity tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MacLaneQuadruple {
    pub sigma: Cochain,
    pub alpha: Cochain,
    pub lambda: Cochain,
    pub rho: Cochain,
}

/// A degree-2 cochain pair (mu, nu).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CochainPair {
    pub mu: Cochain,
    pub nu: Cochain,
}

fn expect_kind(c: &Cochain, kind: CochainKind) -> Result<(), CochainError> {
    if c.kind != kind {
        return Err(CochainError::Mismatch(format!(
            "slot expects kind {}, got {}",
            kind.name(),
            c.kind.name()
        )));
    }
    Ok(())
}

fn expect_same_ambient(parts: &[&Cochain]) -> Result<(), CochainError> {
    for w in parts.windows(2) {
        if w[0].ring_order != w[1].ring_order || w[0].module_order != w[1].module_order {
            return Err(CochainError::Mismatch(format!(
                "{} is over ({}, {}) but {} is over ({}, {})",
                w[0].kind.name(),
                w[0].ring_order,
                w[0].module_order,
                w[1].kind.name(),
                w[1].ring_order,
                w[1].module_order
            )));
        }
    }
    Ok(())
}

impl AnnStructure {
    pub fn new(
        xi: Cochain,
        eta: Cochain,
        alpha: Cochain,
        lambda: Cochain,
        rho: Cochain,
    ) -> Result<AnnStructure, CochainError> {
        expect_kind(&xi, CochainKind::Xi)?;
        expect_kind(&eta, CochainKind::Eta)?;
        expect_kind(&alpha, CochainKind::Alpha)?;
        expect_kind(&lambda, CochainKind::Lambda)?;
        expect_kind(&rho, CochainKind::Rho)?;
        expect_same_ambient(&[&xi, &eta, &alpha, &lambda, &rho])?;
        Ok(AnnStructure { xi, eta, alpha, lambda, rho })
    }

    pub fn zero(ring: &FiniteRing, module: &Bimodule) -> AnnStructure {
        AnnStructure {
            xi: zero_cochain(CochainKind::Xi, ring, module),
            eta: zero_cochain(CochainKind::Eta, ring, module),
            alpha: zero_cochain(CochainKind::Alpha, ring, module),
            lambda: zero_cochain(CochainKind::Lambda, ring, module),
            rho: zero_cochain(CochainKind::Rho, ring, module),
        }
    }

    pub fn ring_order(&self) -> usize {
        self.xi.ring_order
    }

    pub fn module_order(&self) -> usize {
        self.xi.module_order
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero()
            && self.eta.is_zero()
            && self.alpha.is_zero()
            && self.lambda.is_zero()
            && self.rho.is_zero()
    }

    pub fn slots(&self) -> [&Cochain; 5] {
        [&self.xi, &self.eta, &self.alpha, &self.lambda, &self.rho]
    }
}

impl MacLaneQuadruple {
    pub fn new(
        sigma: Cochain,
        alpha: Cochain,
        lambda: Cochain,
        rho: Cochain,
    ) -> Result<MacLaneQuadruple, CochainError> {
        expect_kind(&sigma, CochainKind::Sigma)?;
        expect_kind(&alpha, CochainKind::Alpha)?;
        expect_kind(&lambda, CochainKind::Lambda)?;
        expect_kind(&rho, CochainKind::Rho)?;
        expect_same_ambient(&[&sigma, &alpha, &lambda, &rho])?;
        Ok(MacLaneQuadruple { sigma, alpha, lambda, rho })
    }

    pub fn zero(ring: &FiniteRing, module: &Bimodule) -> MacLaneQuadruple {
        MacLaneQuadruple {
            sigma: zero_cochain(CochainKind::Sigma, ring, module),
            alpha: zero_cochain(CochainKind::Alpha, ring, module),
            lambda: zero_cochain(CochainKind::Lambda, ring, module),
            rho: zero_cochain(CochainKind::Rho, ring, module),
        }
    }

    pub fn ring_order(&self) -> usize {
        self.sigma.ring_order
    }

    pub fn module_order(&self) -> usize {
        self.sigma.module_order
    }

    pub fn is_zero(&self) -> bool {
        self.sigma.is_zero() && self.alpha.is_zero() && self.lambda.is_zero() && self.rho.is_zero()
    }

    pub fn slots(&self) -> [&Cochain; 4] {
        [&self.sigma, &self.alpha, &self.lambda, &self.rho]
    }
}

impl CochainPair {
    pub fn new(mu: Cochain, nu: Cochain) -> Result<CochainPair, CochainError> {
        expect_kind(&mu, CochainKind::Mu)?;
        expect_kind(&nu, CochainKind::Nu)?;
        expect_same_ambient(&[&mu, &nu])?;
        Ok(CochainPair { mu, nu })
    }

    pub fn zero(ring: &FiniteRing, module: &Bimodule) -> CochainPair {
        CochainPair {
            mu: zero_cochain(CochainKind::Mu, ring, module),
            nu: zero_cochain(CochainKind::Nu, ring, module),
        }
    }

    pub fn ring_order(&self) -> usize {
        self.mu.ring_order
    }

    pub fn module_order(&self) -> usize {
        self.mu.module_order
    }

    pub fn neg(&self, module: &Bimodule) -> CochainPair {
        CochainPair {
            mu: cochain_neg(module, &self.mu).expect("valid pair negates"),
            nu: cochain_neg(module, &self.nu).expect("valid pair negates"),
        }
    }

    pub fn add(&self, module: &Bimodule, other: &CochainPair) -> CochainPair {
        CochainPair {
            mu: cochain_add(module, &self.mu, &other.mu).expect("matching pairs add"),
            nu: cochain_add(module, &self.nu, &other.nu).expect("matching pairs add"),
        }
    }
}

/// Pointwise sum of two structures over the same ambient.
pub fn structure_add(
    module: &Bimodule,
    a: &AnnStructure,
    b: &AnnStructure,
) -> Result<AnnStructure, CochainError> {
    Ok(AnnStructure {
        xi: cochain_add(module, &a.xi, &b.xi)?,
        eta: cochain_add(module, &a.eta, &b.eta)?,
        alpha: cochain_add(module, &a.alpha, &b.alpha)?,
        lambda: cochain_add(module, &a.lambda, &b.lambda)?,
        rho: cochain_add(module, &a.rho, &b.rho)?,
    })
}

/// Ring action applied to a term before summation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    None,
    /// Left action by the ring element with this index.
    Left(usize),
    /// Right action by the ring element with this index.
    Right(usize),
}

/// One signed summand of a relation side: an optional ring action on a
/// table value at a compound argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub sign: i8,
    pub action: Action,
    pub kind: CochainKind,
    pub args: Vec<usize>,
}

fn t(kind: CochainKind, sign: i8, args: Vec<usize>) -> Term {
    Term { sign, action: Action::None, kind, args }
}

fn tl(kind: CochainKind, sign: i8, r: usize, args: Vec<usize>) -> Term {
    Term { sign, action: Action::Left(r), kind, args }
}

fn tr(kind: CochainKind, sign: i8, args: Vec<usize>, r: usize) -> Term {
    Term { sign, action: Action::Right(r), kind, args }
}

/// Resolves kinds to concrete tables during evaluation.
#[derive(Default)]
pub(crate) struct TableSet<'a> {
    slots: [Option<&'a Cochain>; 8],
}

fn slot_index(kind: CochainKind) -> usize {
    match kind {
        CochainKind::Xi => 0,
        CochainKind::Eta => 1,
        CochainKind::Alpha => 2,
        CochainKind::Lambda => 3,
        CochainKind::Rho => 4,
        CochainKind::Sigma => 5,
        CochainKind::Mu => 6,
        CochainKind::Nu => 7,
    }
}

impl<'a> TableSet<'a> {
    pub fn empty() -> Self {
        TableSet { slots: [None; 8] }
    }

    pub fn with(mut self, c: &'a Cochain) -> Self {
        self.slots[slot_index(c.kind)] = Some(c);
        self
    }

    pub fn for_structure(f: &'a AnnStructure) -> Self {
        Self::empty().with(&f.xi).with(&f.eta).with(&f.alpha).with(&f.lambda).with(&f.rho)
    }

    pub fn for_quadruple(q: &'a MacLaneQuadruple) -> Self {
        Self::empty().with(&q.sigma).with(&q.alpha).with(&q.lambda).with(&q.rho)
    }

    pub fn for_pair(p: &'a CochainPair) -> Self {
        Self::empty().with(&p.mu).with(&p.nu)
    }

    fn value(&self, kind: CochainKind, args: &[usize]) -> usize {
        self.slots[slot_index(kind)]
            .expect("relation references a table that is not part of this object")
            .at(args)
    }
}

/// Evaluates a signed term list in the module.
pub(crate) fn eval_terms(module: &Bimodule, tables: &TableSet, terms: &[Term]) -> usize {
    let mut acc = 0usize;
    for term in terms {
        let mut v = tables.value(term.kind, &term.args);
        v = match term.action {
            Action::None => v,
            Action::Left(r) => module.act_left(r, v),
            Action::Right(r) => module.act_right(v, r),
        };
        if term.sign < 0 {
            v = module.neg(v);
        }
        acc = module.add(acc, v);
    }
    acc
}

/// Status of one relation after exhaustive evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct RelationStatus {
    pub id: String,
    pub pass: bool,
    pub violations: usize,
    pub witnesses: Vec<WitnessValues>,
}

/// A violating argument tuple with the values both sides took in M.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessValues {
    pub args: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

/// Per-relation statuses of one exhaustive check.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub statuses: Vec<RelationStatus>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.statuses.iter().all(|s| s.pass)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.statuses.iter().filter(|s| !s.pass).map(|s| s.id.as_str()).collect()
    }

    pub fn status(&self, id: &str) -> Option<&RelationStatus> {
        self.statuses.iter().find(|s| s.id == id)
    }
}

/// Identifiers of the seventeen structure relations.
pub const STRUCTURE_RELATION_IDS: [&str; 17] = [
    "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13", "14", "15", "16", "17",
];

/// Identifier of the optional regularity relation eta(x,x) = 0.
pub const REGULAR_RELATION_ID: &str = "18";

/// Identifiers of the ten cocycle conditions.
pub const COCYCLE_CONDITION_IDS: [&str; 10] =
    ["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8", "v9", "v10"];

/// Argument-tuple filter for relations that only constrain a masked
/// subset of tuples.
enum InstanceFilter {
    All,
    AnyZero,
    AnyOne,
    KindMask(CochainKind),
}

/// Number of ring arguments a relation instance takes.
pub(crate) fn relation_arity(id: &str) -> usize {
    relation_shape(id).0
}

fn relation_shape(id: &str) -> (usize, InstanceFilter) {
    match id {
        "1" => (4, InstanceFilter::All),
        "2" => (3, InstanceFilter::AnyZero),
        "3" => (3, InstanceFilter::All),
        "4" => (2, InstanceFilter::All),
        "5" | "6" => (3, InstanceFilter::All),
        "7" | "8" | "9" | "10" | "11" | "12" | "13" => (4, InstanceFilter::All),
        "14" => (3, InstanceFilter::AnyOne),
        "15" => (3, InstanceFilter::AnyZero),
        "16" => (3, InstanceFilter::KindMask(CochainKind::Lambda)),
        "17" => (3, InstanceFilter::KindMask(CochainKind::Rho)),
        "18" => (1, InstanceFilter::All),
        "v1" => (4, InstanceFilter::All),
        "v2" => (3, InstanceFilter::KindMask(CochainKind::Alpha)),
        "v3" | "v4" | "v5" => (4, InstanceFilter::All),
        "v6" => (5, InstanceFilter::All),
        "v7" => (4, InstanceFilter::All),
        "v8" => (5, InstanceFilter::All),
        "v9" => (8, InstanceFilter::All),
        "v10" => (4, InstanceFilter::KindMask(CochainKind::Sigma)),
        other => panic!("unknown relation id {other}"),
    }
}

/// Both sides of one relation instance as signed term lists.
pub(crate) fn relation_terms(
    ring: &FiniteRing,
    id: &str,
    a: &[usize],
) -> (Vec<Term>, Vec<Term>) {
    use CochainKind::{Alpha, Eta, Lambda, Rho, Sigma, Xi};
    let s = |x: usize, y: usize| ring.add(x, y);
    let m = |x: usize, y: usize| ring.mul(x, y);
    match id {
        "1" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![
                    t(Xi, 1, vec![y, z, w]),
                    t(Xi, -1, vec![s(x, y), z, w]),
                    t(Xi, 1, vec![x, s(y, z), w]),
                    t(Xi, -1, vec![x, y, s(z, w)]),
                    t(Xi, 1, vec![x, y, z]),
                ],
                vec![],
            )
        }
        "2" => (vec![t(Xi, 1, a.to_vec())], vec![]),
        "3" => {
            let (x, y, z) = (a[0], a[1], a[2]);
            (
                vec![
                    t(Xi, 1, vec![x, y, z]),
                    t(Xi, -1, vec![x, z, y]),
                    t(Xi, 1, vec![z, x, y]),
                    t(Eta, 1, vec![s(x, y), z]),
                    t(Eta, -1, vec![x, z]),
                    t(Eta, -1, vec![y, z]),
                ],
                vec![],
            )
        }
        "4" => {
            let (x, y) = (a[0], a[1]);
            (vec![t(Eta, 1, vec![x, y]), t(Eta, 1, vec![y, x])], vec![])
        }
        "5" => {
            let (x, y, z) = (a[0], a[1], a[2]);
            (
                vec![tl(Eta, 1, x, vec![y, z]), t(Eta, -1, vec![m(x, y), m(x, z)])],
                vec![t(Lambda, 1, vec![x, y, z]), t(Lambda, -1, vec![x, z, y])],
            )
        }
        "6" => {
            let (x, y, z) = (a[0], a[1], a[2]);
            (
                vec![tr(Eta, 1, vec![x, y], z), t(Eta, -1, vec![m(x, z), m(y, z)])],
                vec![t(Rho, 1, vec![x, y, z]), t(Rho, -1, vec![y, x, z])],
            )
        }
        "7" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![tl(Xi, 1, x, vec![y, z, w]), t(Xi, -1, vec![m(x, y), m(x, z), m(x, w)])],
                vec![
                    t(Lambda, 1, vec![x, z, w]),
                    t(Lambda, -1, vec![x, s(y, z), w]),
                    t(Lambda, 1, vec![x, y, s(z, w)]),
                    t(Lambda, -1, vec![x, y, z]),
                ],
            )
        }
        "8" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![tr(Xi, 1, vec![x, y, z], w), t(Xi, -1, vec![m(x, w), m(y, w), m(z, w)])],
                vec![
                    t(Rho, 1, vec![y, z, w]),
                    t(Rho, -1, vec![s(x, y), z, w]),
                    t(Rho, 1, vec![x, s(y, z), w]),
                    t(Rho, -1, vec![x, y, w]),
                ],
            )
        }
        "9" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            let (xz, xw, yz, yw) = (m(x, z), m(x, w), m(y, z), m(y, w));
            (
                vec![
                    t(Rho, 1, vec![x, y, s(z, w)]),
                    t(Rho, -1, vec![x, y, z]),
                    t(Rho, -1, vec![x, y, w]),
                    t(Lambda, 1, vec![x, z, w]),
                    t(Lambda, 1, vec![y, z, w]),
                    t(Lambda, -1, vec![s(x, y), z, w]),
                ],
                vec![
                    t(Xi, -1, vec![s(xz, xw), yz, yw]),
                    t(Xi, 1, vec![xz, xw, yz]),
                    t(Eta, -1, vec![xw, yz]),
                    t(Xi, 1, vec![s(xz, yz), xw, yw]),
                    t(Xi, -1, vec![xz, yz, xw]),
                ],
            )
        }
        "10" | "v3" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            let lhs = vec![
                t(Alpha, 1, vec![x, y, s(z, w)]),
                t(Alpha, -1, vec![x, y, z]),
                t(Alpha, -1, vec![x, y, w]),
            ];
            let rhs = vec![
                tl(Lambda, 1, x, vec![y, z, w]),
                t(Lambda, 1, vec![x, m(y, z), m(y, w)]),
                t(Lambda, -1, vec![m(x, y), z, w]),
            ];
            if id == "10" {
                (lhs, rhs)
            } else {
                (rhs, lhs)
            }
        }
        "11" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![
                    t(Alpha, 1, vec![x, s(y, z), w]),
                    t(Alpha, -1, vec![x, y, w]),
                    t(Alpha, -1, vec![x, z, w]),
                ],
                vec![
                    tl(Rho, 1, x, vec![y, z, w]),
                    t(Rho, -1, vec![m(x, y), m(x, z), w]),
                    t(Lambda, 1, vec![x, m(y, w), m(z, w)]),
                    tr(Lambda, -1, vec![x, y, z], w),
                ],
            )
        }
        "12" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![
                    t(Alpha, 1, vec![s(x, y), z, w]),
                    t(Alpha, -1, vec![x, z, w]),
                    t(Alpha, -1, vec![y, z, w]),
                ],
                vec![
                    tr(Rho, -1, vec![x, y, z], w),
                    t(Rho, -1, vec![m(x, z), m(y, z), w]),
                    t(Rho, 1, vec![x, y, m(z, w)]),
                ],
            )
        }
        "13" | "v1" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![
                    tl(Alpha, 1, x, vec![y, z, w]),
                    t(Alpha, -1, vec![m(x, y), z, w]),
                    t(Alpha, 1, vec![x, m(y, z), w]),
                    t(Alpha, -1, vec![x, y, m(z, w)]),
                    tr(Alpha, 1, vec![x, y, z], w),
                ],
                vec![],
            )
        }
        "14" | "15" | "v2" => (vec![t(Alpha, 1, a.to_vec())], vec![]),
        "16" => (vec![t(Lambda, 1, a.to_vec())], vec![]),
        "17" => (vec![t(Rho, 1, a.to_vec())], vec![]),
        "18" => (vec![t(Eta, 1, vec![a[0], a[0]])], vec![]),
        "v4" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![
                    t(Alpha, 1, vec![x, y, w]),
                    t(Alpha, 1, vec![x, z, w]),
                    t(Alpha, -1, vec![x, s(y, z), w]),
                    tl(Rho, 1, x, vec![y, z, w]),
                    t(Rho, -1, vec![m(x, y), m(x, z), w]),
                    t(Lambda, 1, vec![x, m(y, w), m(z, w)]),
                    tr(Lambda, -1, vec![x, y, z], w),
                ],
                vec![],
            )
        }
        "v5" => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            (
                vec![
                    t(Rho, 1, vec![m(x, z), m(y, z), w]),
                    t(Rho, -1, vec![x, y, m(z, w)]),
                    tr(Rho, 1, vec![x, y, z], w),
                ],
                vec![
                    t(Alpha, -1, vec![s(x, y), z, w]),
                    t(Alpha, 1, vec![x, z, w]),
                    t(Alpha, 1, vec![y, z, w]),
                ],
            )
        }
        "v6" => {
            let (c, x, y, z, w) = (a[0], a[1], a[2], a[3], a[4]);
            (
                vec![
                    t(Sigma, 1, vec![m(c, x), m(c, y), m(c, z), m(c, w)]),
                    tl(Sigma, -1, c, vec![x, y, z, w]),
                ],
                vec![
                    t(Lambda, 1, vec![c, x, z]),
                    t(Lambda, 1, vec![c, y, w]),
                    t(Lambda, 1, vec![c, s(x, z), s(y, w)]),
                    t(Lambda, -1, vec![c, x, y]),
                    t(Lambda, -1, vec![c, z, w]),
                    t(Lambda, -1, vec![c, s(x, y), s(z, w)]),
                ],
            )
        }
        "v7" => {
            let (c, d, x, y) = (a[0], a[1], a[2], a[3]);
            (
                vec![t(Sigma, 1, vec![m(c, x), m(d, x), m(c, y), m(d, y)])],
                vec![
                    t(Lambda, 1, vec![c, x, y]),
                    t(Lambda, 1, vec![d, x, y]),
                    t(Lambda, -1, vec![s(c, d), x, y]),
                    t(Rho, -1, vec![c, d, x]),
                    t(Rho, -1, vec![c, d, y]),
                    t(Rho, 1, vec![c, d, s(x, y)]),
                ],
            )
        }
        "v8" => {
            let (x, y, z, w, c) = (a[0], a[1], a[2], a[3], a[4]);
            (
                vec![
                    t(Sigma, 1, vec![m(x, c), m(y, c), m(z, c), m(w, c)]),
                    tr(Sigma, -1, vec![x, y, z, w], c),
                ],
                vec![
                    t(Rho, 1, vec![x, z, c]),
                    t(Rho, 1, vec![y, w, c]),
                    t(Rho, -1, vec![s(x, y), s(z, w), c]),
                    t(Rho, -1, vec![x, y, c]),
                    t(Rho, -1, vec![z, w, c]),
                    t(Rho, 1, vec![s(x, z), s(y, w), c]),
                ],
            )
        }
        "v9" => {
            let (p, q, r, u, x, y, z, w) =
                (a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]);
            (
                vec![
                    t(Sigma, 1, vec![p, q, r, u]),
                    t(Sigma, 1, vec![x, y, z, w]),
                    t(Sigma, -1, vec![s(p, x), s(q, y), s(r, z), s(u, w)]),
                    t(Sigma, -1, vec![p, q, x, y]),
                    t(Sigma, -1, vec![r, u, z, w]),
                    t(Sigma, 1, vec![s(p, r), s(q, u), s(x, z), s(y, w)]),
                    t(Sigma, 1, vec![p, r, x, z]),
                    t(Sigma, 1, vec![q, u, y, w]),
                    t(Sigma, -1, vec![s(p, q), s(r, u), s(x, y), s(z, w)]),
                ],
                vec![],
            )
        }
        "v10" => (vec![t(Sigma, 1, a.to_vec())], vec![]),
        other => panic!("unknown relation id {other}"),
    }
}

/// Calls `f` for every argument tuple the relation constrains.
pub(crate) fn for_each_instance(ring: &FiniteRing, id: &str, mut f: impl FnMut(&[usize])) {
    let (arity, filter) = relation_shape(id);
    let one = ring.one();
    for args in all_args(ring.order(), arity) {
        let keep = match filter {
            InstanceFilter::All => true,
            InstanceFilter::AnyZero => args.contains(&0),
            InstanceFilter::AnyOne => args.contains(&one),
            InstanceFilter::KindMask(kind) => kind.forced_zero(&args, one),
        };
        if keep {
            f(&args);
        }
    }
}

fn check_relation(
    ring: &FiniteRing,
    module: &Bimodule,
    tables: &TableSet,
    id: &str,
    cap: usize,
) -> RelationStatus {
    let mut violations = 0usize;
    let mut witnesses = Vec::new();
    for_each_instance(ring, id, |args| {
        let (lhs_terms, rhs_terms) = relation_terms(ring, id, args);
        let lhs = eval_terms(module, tables, &lhs_terms);
        let rhs = eval_terms(module, tables, &rhs_terms);
        if lhs != rhs {
            violations += 1;
            if witnesses.len() < cap {
                witnesses.push(WitnessValues { args: args.to_vec(), lhs, rhs });
            }
        }
    });
    RelationStatus { id: id.to_string(), pass: violations == 0, violations, witnesses }
}

fn check_ambient(
    ring: &FiniteRing,
    module: &Bimodule,
    ring_order: usize,
    module_order: usize,
) -> Result<(), CochainError> {
    if ring.order() != ring_order || module.order() != module_order {
        return Err(CochainError::Mismatch(format!(
            "tables are over ({ring_order}, {module_order}) but the ambient is ({}, {})",
            ring.order(),
            module.order()
        )));
    }
    Ok(())
}

/// Exhaustively evaluates the seventeen structure relations (plus the
/// regularity relation when requested) and reports each.
pub fn check_structure(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    regular: bool,
) -> Result<RelationReport, CochainError> {
    check_structure_capped(ring, module, f, regular, DEFAULT_WITNESS_CAP)
}

/// As `check_structure` with an explicit witness cap per relation.
pub fn check_structure_capped(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    regular: bool,
    cap: usize,
) -> Result<RelationReport, CochainError> {
    check_ambient(ring, module, f.ring_order(), f.module_order())?;
    let tables = TableSet::for_structure(f);
    let mut statuses: Vec<RelationStatus> = STRUCTURE_RELATION_IDS
        .iter()
        .map(|id| check_relation(ring, module, &tables, id, cap))
        .collect();
    if regular {
        statuses.push(check_relation(ring, module, &tables, REGULAR_RELATION_ID, cap));
    }
    Ok(RelationReport { statuses })
}

/// Fast validity test: all seventeen relations, stopping at the first
/// violation.
pub fn structure_valid(ring: &FiniteRing, module: &Bimodule, f: &AnnStructure) -> bool {
    let tables = TableSet::for_structure(f);
    for id in STRUCTURE_RELATION_IDS {
        let mut ok = true;
        for_each_instance(ring, id, |args| {
            if !ok {
                return;
            }
            let (lhs_terms, rhs_terms) = relation_terms(ring, id, args);
            if eval_terms(module, &tables, &lhs_terms) != eval_terms(module, &tables, &rhs_terms)
            {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Exhaustively evaluates the ten cocycle conditions v1..v10.
pub fn check_cocycle(
    ring: &FiniteRing,
    module: &Bimodule,
    q: &MacLaneQuadruple,
) -> Result<RelationReport, CochainError> {
    check_cocycle_capped(ring, module, q, DEFAULT_WITNESS_CAP)
}

/// As `check_cocycle` with an explicit witness cap per condition.
pub fn check_cocycle_capped(
    ring: &FiniteRing,
    module: &Bimodule,
    q: &MacLaneQuadruple,
    cap: usize,
) -> Result<RelationReport, CochainError> {
    check_ambient(ring, module, q.ring_order(), q.module_order())?;
    let tables = TableSet::for_quadruple(q);
    let statuses: Vec<RelationStatus> = COCYCLE_CONDITION_IDS
        .iter()
        .map(|id| check_relation(ring, module, &tables, id, cap))
        .collect();
    Ok(RelationReport { statuses })
}

/// The degree-2 coboundary terms for one target slot (sigma, alpha,
/// lambda, or rho), in the variables mu and nu.
pub(crate) fn coboundary_terms(
    ring: &FiniteRing,
    target: CochainKind,
    a: &[usize],
) -> Vec<Term> {
    use CochainKind::{Mu, Nu};
    let s = |x: usize, y: usize| ring.add(x, y);
    let m = |x: usize, y: usize| ring.mul(x, y);
    match target {
        CochainKind::Sigma => {
            let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
            vec![
                t(Mu, 1, vec![x, y]),
                t(Mu, 1, vec![z, w]),
                t(Mu, -1, vec![s(x, z), s(y, w)]),
                t(Mu, -1, vec![x, z]),
                t(Mu, -1, vec![y, w]),
                t(Mu, 1, vec![s(x, y), s(z, w)]),
            ]
        }
        CochainKind::Alpha => {
            let (x, y, z) = (a[0], a[1], a[2]);
            vec![
                tl(Nu, 1, x, vec![y, z]),
                t(Nu, -1, vec![m(x, y), z]),
                t(Nu, 1, vec![x, m(y, z)]),
                tr(Nu, -1, vec![x, y], z),
            ]
        }
        CochainKind::Lambda => {
            let (x, y, z) = (a[0], a[1], a[2]);
            vec![
                t(Nu, 1, vec![x, s(y, z)]),
                t(Nu, -1, vec![x, y]),
                t(Nu, -1, vec![x, z]),
                tl(Mu, 1, x, vec![y, z]),
                t(Mu, -1, vec![m(x, y), m(x, z)]),
            ]
        }
        CochainKind::Rho => {
            let (x, y, z) = (a[0], a[1], a[2]);
            vec![
                t(Nu, 1, vec![s(x, y), z]),
                t(Nu, -1, vec![x, z]),
                t(Nu, -1, vec![y, z]),
                tr(Mu, 1, vec![x, y], z),
                t(Mu, -1, vec![m(x, z), m(y, z)]),
            ]
        }
        CochainKind::Xi => {
            let (x, y, z) = (a[0], a[1], a[2]);
            vec![
                t(Mu, 1, vec![y, z]),
                t(Mu, -1, vec![s(x, y), z]),
                t(Mu, 1, vec![x, s(y, z)]),
                t(Mu, -1, vec![x, y]),
            ]
        }
        CochainKind::Eta => {
            let (x, y) = (a[0], a[1]);
            vec![t(Mu, 1, vec![x, y]), t(Mu, -1, vec![y, x])]
        }
        other => panic!("no coboundary into slot {}", other.name()),
    }
}

fn coboundary_table(
    ring: &FiniteRing,
    module: &Bimodule,
    pair: &CochainPair,
    target: CochainKind,
) -> Cochain {
    let tables = TableSet::for_pair(pair);
    let n = ring.order();
    let values: Vec<usize> = all_args(n, target.arity())
        .map(|args| eval_terms(module, &tables, &coboundary_terms(ring, target, &args)))
        .collect();
    let c = Cochain { kind: target, ring_order: n, module_order: module.order(), values };
    debug_assert!(
        all_args(n, target.arity())
            .all(|args| !target.forced_zero(&args, ring.one()) || c.at(&args) == 0),
        "coboundary output violates the {} normalization mask",
        target.name()
    );
    c
}

/// The degree-2 coboundary (sigma, alpha, lambda, rho) of a pair, by
/// the four formulas v11..v14.
pub fn coboundary_d2(
    ring: &FiniteRing,
    module: &Bimodule,
    pair: &CochainPair,
) -> Result<MacLaneQuadruple, CochainError> {
    check_ambient(ring, module, pair.ring_order(), pair.module_order())?;
    Ok(MacLaneQuadruple {
        sigma: coboundary_table(ring, module, pair, CochainKind::Sigma),
        alpha: coboundary_table(ring, module, pair, CochainKind::Alpha),
        lambda: coboundary_table(ring, module, pair, CochainKind::Lambda),
        rho: coboundary_table(ring, module, pair, CochainKind::Rho),
    })
}

/// The cohomologous deformation of a structure by a pair: each slot
/// gains the corresponding coboundary table.
pub fn apply_structure_coboundary(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    pair: &CochainPair,
) -> Result<AnnStructure, CochainError> {
    check_ambient(ring, module, f.ring_order(), f.module_order())?;
    check_ambient(ring, module, pair.ring_order(), pair.module_order())?;
    let delta = |target: CochainKind| coboundary_table(ring, module, pair, target);
    Ok(AnnStructure {
        xi: cochain_add(module, &f.xi, &delta(CochainKind::Xi))?,
        eta: cochain_add(module, &f.eta, &delta(CochainKind::Eta))?,
        alpha: cochain_add(module, &f.alpha, &delta(CochainKind::Alpha))?,
        lambda: cochain_add(module, &f.lambda, &delta(CochainKind::Lambda))?,
        rho: cochain_add(module, &f.rho, &delta(CochainKind::Rho))?,
    })
}

/// Slot-wise sum of two structures over the same ambient pair. The sum
/// of two valid structures need not be valid; this is the raw additive
/// operation used when probing closure properties of sub-families.
pub fn structure_sum(
    module: &Bimodule,
    f: &AnnStructure,
    g: &AnnStructure,
) -> Result<AnnStructure, CochainError> {
    Ok(AnnStructure {
        xi: cochain_add(module, &f.xi, &g.xi)?,
        eta: cochain_add(module, &f.eta, &g.eta)?,
        alpha: cochain_add(module, &f.alpha, &g.alpha)?,
        lambda: cochain_add(module, &f.lambda, &g.lambda)?,
        rho: cochain_add(module, &f.rho, &g.rho)?,
    })
}

/// A deformation pair carrying f to f_prime, when one exists: the
/// linear system "structure coboundary equals the slot-wise difference"
/// is solved over the free supports, and any solution is re-verified by
/// applying it to f before it is returned.
pub fn find_witness(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    f_prime: &AnnStructure,
) -> Result<Option<CochainPair>, CochainError> {
    check_ambient(ring, module, f.ring_order(), f.module_order())?;
    check_ambient(ring, module, f_prime.ring_order(), f_prime.module_order())?;
    let solved = crate::cohomology::solve_structure_witness(ring, module, f, f_prime)
        .map_err(|e| CochainError::Mismatch(format!("witness solver failed: {e}")))?;
    let Some(pair) = solved else {
        return Ok(None);
    };
    let applied = apply_structure_coboundary(ring, module, f, &pair)?;
    if &applied != f_prime {
        return Err(CochainError::Mismatch(
            "internal: solved witness does not reproduce the target structure".into(),
        ));
    }
    Ok(Some(pair))
}

/// How an interchange table is computed from (xi, eta).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaFormula {
    /// Expansion read off the canonical five-step factorization of the
    /// interchange morphism.
    Canonical,
    /// The direct closed-form right-hand side; an alternative
    /// factorization that agrees with the canonical one on valid
    /// structures.
    Printed,
}

/// Closed-form interchange table of a structure.
pub fn sigma_closed_form(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    formula: SigmaFormula,
) -> Cochain {
    let tables = TableSet::for_structure(f);
    let n = ring.order();
    let values: Vec<usize> = all_args(n, 4)
        .map(|args| eval_terms(module, &tables, &sigma_terms(ring, &args, formula)))
        .collect();
    Cochain { kind: CochainKind::Sigma, ring_order: n, module_order: module.order(), values }
}

/// Signed terms of the interchange value at one tuple.
pub(crate) fn sigma_terms(ring: &FiniteRing, a: &[usize], formula: SigmaFormula) -> Vec<Term> {
    use CochainKind::{Eta, Xi};
    let s = |x: usize, y: usize| ring.add(x, y);
    let (x, y, z, w) = (a[0], a[1], a[2], a[3]);
    match formula {
        SigmaFormula::Canonical => vec![
            t(Xi, -1, vec![x, y, s(z, w)]),
            t(Xi, 1, vec![y, z, w]),
            t(Eta, 1, vec![y, z]),
            t(Xi, -1, vec![z, y, w]),
            t(Xi, 1, vec![x, z, s(y, w)]),
        ],
        SigmaFormula::Printed => vec![
            t(Xi, 1, vec![s(x, y), z, w]),
            t(Xi, -1, vec![x, y, z]),
            t(Eta, 1, vec![y, z]),
            t(Xi, 1, vec![x, z, y]),
            t(Xi, -1, vec![s(x, z), y, w]),
        ],
    }
}

/// The quadruple a structure induces, given its interchange table.
pub fn quadruple_from(f: &AnnStructure, sigma: Cochain) -> Result<MacLaneQuadruple, CochainError> {
    MacLaneQuadruple::new(sigma, f.alpha.clone(), f.lambda.clone(), f.rho.clone())
}

/// Refusal: the candidate space is larger than the enumeration budget.
#[derive(Debug, Error)]
#[error("search space holds {search_space} candidates, above the budget of {budget}")]
pub struct SearchSpaceRefusal {
    pub search_space: BigUint,
    pub budget: u64,
}

/// Exact candidate count for brute-force enumeration: |M| to the power
/// of the total free support across the five slots.
pub fn structure_search_space(ring: &FiniteRing, module: &Bimodule) -> BigUint {
    let total: usize = [
        CochainKind::Xi,
        CochainKind::Eta,
        CochainKind::Alpha,
        CochainKind::Lambda,
        CochainKind::Rho,
    ]
    .iter()
    .map(|&k| free_support(k, ring).len())
    .sum();
    BigUint::from(module.order()).pow(total as u32)
}

/// Streams every normalized structure candidate that passes all
/// seventeen relations, in lexicographic order of the concatenated
/// free-value vectors (xi, eta, alpha, lambda, rho).
pub fn enumerate_structures<'a>(
    ring: &'a FiniteRing,
    module: &'a Bimodule,
    budget: u64,
) -> Result<StructureStream<'a>, SearchSpaceRefusal> {
    let search_space = structure_search_space(ring, module);
    if search_space > BigUint::from(budget) {
        return Err(SearchSpaceRefusal { search_space, budget });
    }
    let total = search_space.to_u64_digits().first().copied().unwrap_or(
        // an empty digit list means the count is zero, which cannot
        // happen for a positive module order
        1,
    );
    let supports = [
        free_support(CochainKind::Xi, ring),
        free_support(CochainKind::Eta, ring),
        free_support(CochainKind::Alpha, ring),
        free_support(CochainKind::Lambda, ring),
        free_support(CochainKind::Rho, ring),
    ];
    Ok(StructureStream { ring, module, supports, next_index: 0, total })
}

/// Iterator over valid structures, produced by `enumerate_structures`.
#[derive(Debug)]
pub struct StructureStream<'a> {
    ring: &'a FiniteRing,
    module: &'a Bimodule,
    supports: [Vec<Vec<usize>>; 5],
    next_index: u64,
    total: u64,
}

impl<'a> StructureStream<'a> {
    /// Candidate with the given lexicographic index, valid or not.
    fn candidate(&self, index: u64) -> AnnStructure {
        let m = self.module.order() as u64;
        let k: usize = self.supports.iter().map(|s| s.len()).sum();
        let mut digits = vec![0usize; k];
        let mut rest = index;
        for i in (0..k).rev() {
            digits[i] = (rest % m) as usize;
            rest /= m;
        }
        let kinds = [
            CochainKind::Xi,
            CochainKind::Eta,
            CochainKind::Alpha,
            CochainKind::Lambda,
            CochainKind::Rho,
        ];
        let mut offset = 0usize;
        let mut slots = Vec::with_capacity(5);
        for (kind, support) in kinds.iter().zip(&self.supports) {
            let free = &digits[offset..offset + support.len()];
            offset += support.len();
            let mut values =
                vec![0usize; Cochain::table_len(*kind, self.ring.order())];
            for (args, &v) in support.iter().zip(free) {
                values[crate::cochain::flat_index(self.ring.order(), args)] = v;
            }
            slots.push(Cochain {
                kind: *kind,
                ring_order: self.ring.order(),
                module_order: self.module.order(),
                values,
            });
        }
        let rho = slots.pop().unwrap();
        let lambda = slots.pop().unwrap();
        let alpha = slots.pop().unwrap();
        let eta = slots.pop().unwrap();
        let xi = slots.pop().unwrap();
        AnnStructure { xi, eta, alpha, lambda, rho }
    }
}

impl<'a> Iterator for StructureStream<'a> {
    type Item = AnnStructure;

    fn next(&mut self) -> Option<AnnStructure> {
        while self.next_index < self.total {
            let candidate = self.candidate(self.next_index);
            self.next_index += 1;
            if structure_valid(self.ring, self.module, &candidate) {
                return Some(candidate);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic_ring, make_product_ring, Bimodule};
    use crate::cochain::{from_free_values, make_cochain};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn setup(n: usize) -> (FiniteRing, Bimodule) {
        let ring = make_cyclic_ring(n).unwrap();
        let module = Bimodule::regular_bimodule(&ring).unwrap();
        (ring, module)
    }

    fn klein_setup() -> (FiniteRing, Bimodule) {
        let z2 = make_cyclic_ring(2).unwrap();
        let ring = make_product_ring(&z2, &z2).unwrap();
        let module = Bimodule::regular_bimodule(&ring).unwrap();
        (ring, module)
    }

    fn random_pair(ring: &FiniteRing, module: &Bimodule, rng: &mut StdRng) -> CochainPair {
        let mu_free: Vec<usize> = free_support(CochainKind::Mu, ring)
            .iter()
            .map(|_| rng.gen_range(0..module.order()))
            .collect();
        let nu_free: Vec<usize> = free_support(CochainKind::Nu, ring)
            .iter()
            .map(|_| rng.gen_range(0..module.order()))
            .collect();
        CochainPair {
            mu: from_free_values(CochainKind::Mu, ring, module, &mu_free).unwrap(),
            nu: from_free_values(CochainKind::Nu, ring, module, &nu_free).unwrap(),
        }
    }

    fn random_structure(ring: &FiniteRing, module: &Bimodule, rng: &mut StdRng) -> AnnStructure {
        let slot = |kind: CochainKind, rng: &mut StdRng| {
            let free: Vec<usize> = free_support(kind, ring)
                .iter()
                .map(|_| rng.gen_range(0..module.order()))
                .collect();
            from_free_values(kind, ring, module, &free).unwrap()
        };
        AnnStructure {
            xi: slot(CochainKind::Xi, rng),
            eta: slot(CochainKind::Eta, rng),
            alpha: slot(CochainKind::Alpha, rng),
            lambda: slot(CochainKind::Lambda, rng),
            rho: slot(CochainKind::Rho, rng),
        }
    }

    fn all_pairs(ring: &FiniteRing, module: &Bimodule) -> Vec<CochainPair> {
        let mu_support = free_support(CochainKind::Mu, ring);
        let nu_support = free_support(CochainKind::Nu, ring);
        let k = mu_support.len() + nu_support.len();
        let m = module.order();
        let total = m.pow(k as u32);
        (0..total)
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
    fn zero_structure_passes_everywhere() {
        for n in [2usize, 3, 4] {
            let (ring, module) = setup(n);
            let f = AnnStructure::zero(&ring, &module);
            let report = check_structure(&ring, &module, &f, true).unwrap();
            assert!(report.pass(), "zero structure failed over Z/{n}");
            assert_eq!(report.statuses.len(), 18);
        }
        let (ring, module) = klein_setup();
        let f = AnnStructure::zero(&ring, &module);
        assert!(check_structure(&ring, &module, &f, true).unwrap().pass());
    }

    #[test]
    fn eta_only_fails_exactly_relation_9() {
        let (ring, module) = setup(2);
        let mut f = AnnStructure::zero(&ring, &module);
        f.eta = from_free_values(CochainKind::Eta, &ring, &module, &[1]).unwrap();
        let report = check_structure(&ring, &module, &f, false).unwrap();
        assert_eq!(report.failing_ids(), vec!["9"]);
        let status = report.status("9").unwrap();
        assert_eq!(status.violations, 1);
        let w = &status.witnesses[0];
        assert_eq!(w.args, vec![1, 1, 1, 1]);
        assert_eq!(w.lhs, 0);
        assert_eq!(w.rhs, 1, "right side reduces to the negated eta(1,1)");
    }

    #[test]
    fn xi_only_fails_exactly_relation_3() {
        let (ring, module) = setup(2);
        let mut f = AnnStructure::zero(&ring, &module);
        f.xi = from_free_values(CochainKind::Xi, &ring, &module, &[1]).unwrap();
        let report = check_structure(&ring, &module, &f, false).unwrap();
        assert_eq!(report.failing_ids(), vec!["3"]);
        let w = &report.status("3").unwrap().witnesses[0];
        assert_eq!(w.args, vec![1, 1, 1]);
    }

    #[test]
    fn only_zero_structure_is_valid_over_z2() {
        let (ring, module) = setup(2);
        let stream = enumerate_structures(&ring, &module, 10).unwrap();
        let valid: Vec<AnnStructure> = stream.collect();
        assert_eq!(valid.len(), 1);
        assert!(valid[0].is_zero());
    }

    #[test]
    fn enumeration_refusal_reports_exact_count() {
        let (ring, module) = setup(2);
        let err = enumerate_structures(&ring, &module, 3).unwrap_err();
        assert_eq!(err.search_space, BigUint::from(4u32));
        assert_eq!(err.budget, 3);
        assert_eq!(structure_search_space(&ring, &module), BigUint::from(4u32));
    }

    #[test]
    fn regularity_relation_detects_diagonal() {
        let (ring, module) = setup(3);
        let mut f = AnnStructure::zero(&ring, &module);
        // eta(1,1) = 1, eta(2,2) = 2, antisymmetric on the off-diagonal.
        let mut values = vec![0usize; 9];
        values[4] = 1;
        values[8] = 2;
        f.eta = make_cochain(CochainKind::Eta, &ring, &module, values).unwrap();
        let report = check_structure(&ring, &module, &f, true).unwrap();
        let status = report.status("18").unwrap();
        assert!(!status.pass);
        assert_eq!(status.violations, 2);
    }

    #[test]
    fn alpha_spike_fails_v1_at_2222() {
        let (ring, module) = setup(3);
        let mut q = MacLaneQuadruple::zero(&ring, &module);
        q.alpha = from_free_values(CochainKind::Alpha, &ring, &module, &[1]).unwrap();
        assert_eq!(q.alpha.at(&[2, 2, 2]), 1);
        let report = check_cocycle(&ring, &module, &q).unwrap();
        let v1 = report.status("v1").unwrap();
        assert!(!v1.pass);
        assert!(v1
            .witnesses
            .iter()
            .any(|w| w.args.iter().all(|&c| c == 1 || c == 2)));
        assert!(v1.witnesses.iter().any(|w| w.args == vec![2, 2, 2, 2]));
    }

    #[test]
    fn zero_quadruple_passes() {
        for n in [2usize, 3] {
            let (ring, module) = setup(n);
            let q = MacLaneQuadruple::zero(&ring, &module);
            let report = check_cocycle(&ring, &module, &q).unwrap();
            assert!(report.pass());
            assert_eq!(report.statuses.len(), 10);
        }
    }

    #[test]
    fn coboundaries_are_cocycles_exhaustive_z2_z3() {
        for n in [2usize, 3] {
            let (ring, module) = setup(n);
            let pairs = all_pairs(&ring, &module);
            let expected = match n {
                2 => 2,
                3 => 243,
                _ => unreachable!(),
            };
            assert_eq!(pairs.len(), expected);
            for pair in &pairs {
                let q = coboundary_d2(&ring, &module, pair).unwrap();
                let report = check_cocycle(&ring, &module, &q).unwrap();
                assert!(
                    report.pass(),
                    "coboundary failed {:?} over Z/{n}",
                    report.failing_ids()
                );
            }
        }
    }

    #[test]
    fn coboundaries_are_cocycles_sampled_z4_klein() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let (r4, m4) = setup(4);
        let (rk, mk) = klein_setup();
        for _ in 0..12 {
            let pair = random_pair(&r4, &m4, &mut rng);
            let q = coboundary_d2(&r4, &m4, &pair).unwrap();
            assert!(check_cocycle(&r4, &m4, &q).unwrap().pass());
            let pair = random_pair(&rk, &mk, &mut rng);
            let q = coboundary_d2(&rk, &mk, &pair).unwrap();
            assert!(check_cocycle(&rk, &mk, &q).unwrap().pass());
        }
    }

    #[test]
    fn coboundary_is_additive() {
        let (ring, module) = setup(3);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let p1 = random_pair(&ring, &module, &mut rng);
            let p2 = random_pair(&ring, &module, &mut rng);
            let sum = p1.add(&module, &p2);
            let lhs = coboundary_d2(&ring, &module, &sum).unwrap();
            let d1 = coboundary_d2(&ring, &module, &p1).unwrap();
            let d2 = coboundary_d2(&ring, &module, &p2).unwrap();
            let rhs = MacLaneQuadruple {
                sigma: cochain_add(&module, &d1.sigma, &d2.sigma).unwrap(),
                alpha: cochain_add(&module, &d1.alpha, &d2.alpha).unwrap(),
                lambda: cochain_add(&module, &d1.lambda, &d2.lambda).unwrap(),
                rho: cochain_add(&module, &d1.rho, &d2.rho).unwrap(),
            };
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn deformations_of_zero_stay_valid() {
        let (ring, module) = setup(3);
        let zero = AnnStructure::zero(&ring, &module);
        for pair in all_pairs(&ring, &module) {
            let f = apply_structure_coboundary(&ring, &module, &zero, &pair).unwrap();
            let report = check_structure(&ring, &module, &f, false).unwrap();
            assert!(
                report.pass(),
                "deformation by a pair broke relations {:?}",
                report.failing_ids()
            );
        }
    }

    #[test]
    fn deformations_of_zero_stay_valid_klein() {
        let (ring, module) = klein_setup();
        let zero = AnnStructure::zero(&ring, &module);
        let mut rng = StdRng::seed_from_u64(0xabcd);
        for _ in 0..12 {
            let pair = random_pair(&ring, &module, &mut rng);
            let f = apply_structure_coboundary(&ring, &module, &zero, &pair).unwrap();
            assert!(check_structure(&ring, &module, &f, false).unwrap().pass());
        }
    }

    #[test]
    fn deformation_roundtrip_and_zero_pair() {
        let (ring, module) = setup(3);
        let mut rng = StdRng::seed_from_u64(99);
        let f = random_structure(&ring, &module, &mut rng);
        let zero_pair = CochainPair::zero(&ring, &module);
        assert_eq!(apply_structure_coboundary(&ring, &module, &f, &zero_pair).unwrap(), f);
        let pair = random_pair(&ring, &module, &mut rng);
        let g = apply_structure_coboundary(&ring, &module, &f, &pair).unwrap();
        let back =
            apply_structure_coboundary(&ring, &module, &g, &pair.neg(&module)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn validity_is_deformation_invariant_on_random_invalid_structures() {
        let (ring, module) = setup(3);
        let mut rng = StdRng::seed_from_u64(0x77);
        for _ in 0..6 {
            let f = random_structure(&ring, &module, &mut rng);
            let pair = random_pair(&ring, &module, &mut rng);
            let g = apply_structure_coboundary(&ring, &module, &f, &pair).unwrap();
            assert_eq!(
                structure_valid(&ring, &module, &f),
                structure_valid(&ring, &module, &g)
            );
        }
    }

    #[test]
    fn sigma_closed_forms_vanish_on_zero() {
        let (ring, module) = setup(3);
        let f = AnnStructure::zero(&ring, &module);
        assert!(sigma_closed_form(&ring, &module, &f, SigmaFormula::Canonical).is_zero());
        assert!(sigma_closed_form(&ring, &module, &f, SigmaFormula::Printed).is_zero());
    }

    #[test]
    fn sigma_satisfies_v10_normalization_for_any_tables() {
        let (ring, module) = setup(3);
        let mut rng = StdRng::seed_from_u64(0x515);
        for _ in 0..6 {
            let f = random_structure(&ring, &module, &mut rng);
            let sigma = sigma_closed_form(&ring, &module, &f, SigmaFormula::Canonical);
            for args in all_args(ring.order(), 4) {
                if CochainKind::Sigma.forced_zero(&args, ring.one()) {
                    assert_eq!(sigma.at(&args), 0, "at {args:?}");
                }
            }
        }
    }

    #[test]
    fn sigma_formulas_agree_on_valid_structures() {
        let (ring, module) = setup(3);
        let zero = AnnStructure::zero(&ring, &module);
        for pair in all_pairs(&ring, &module) {
            let f = apply_structure_coboundary(&ring, &module, &zero, &pair).unwrap();
            let canonical = sigma_closed_form(&ring, &module, &f, SigmaFormula::Canonical);
            let printed = sigma_closed_form(&ring, &module, &f, SigmaFormula::Printed);
            assert_eq!(canonical, printed);
        }
    }

    #[test]
    fn sigma_delta_of_deformation_is_the_mu_coboundary() {
        // For arbitrary (even invalid) tables, deforming (xi, eta) by mu
        // shifts the canonical interchange by the v11 value of mu.
        let (ring, module) = setup(3);
        let mut rng = StdRng::seed_from_u64(0xf00d);
        for _ in 0..6 {
            let f = random_structure(&ring, &module, &mut rng);
            let pair = random_pair(&ring, &module, &mut rng);
            let g = apply_structure_coboundary(&ring, &module, &f, &pair).unwrap();
            let before = sigma_closed_form(&ring, &module, &f, SigmaFormula::Canonical);
            let after = sigma_closed_form(&ring, &module, &g, SigmaFormula::Canonical);
            let expected = coboundary_d2(&ring, &module, &pair).unwrap().sigma;
            let delta =
                cochain_add(&module, &after, &cochain_neg(&module, &before).unwrap()).unwrap();
            assert_eq!(delta, expected);
        }
    }

    #[test]
    fn relation_residuals_are_additive() {
        let (ring, module) = setup(3);
        let mut rng = StdRng::seed_from_u64(0x1234);
        for _ in 0..3 {
            let f = random_structure(&ring, &module, &mut rng);
            let g = random_structure(&ring, &module, &mut rng);
            let sum = structure_add(&module, &f, &g).unwrap();
            let tf = TableSet::for_structure(&f);
            let tg = TableSet::for_structure(&g);
            let ts = TableSet::for_structure(&sum);
            for id in STRUCTURE_RELATION_IDS {
                for_each_instance(&ring, id, |args| {
                    let (lhs, rhs) = relation_terms(&ring, id, args);
                    let res = |tables: &TableSet| {
                        module.sub(eval_terms(&module, tables, &lhs), eval_terms(&module, tables, &rhs))
                    };
                    assert_eq!(res(&ts), module.add(res(&tf), res(&tg)));
                });
            }
        }
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let (r2, m2) = setup(2);
        let (r3, _) = setup(3);
        let f = AnnStructure::zero(&r2, &m2);
        assert!(check_structure(&r3, &m2, &f, false).is_err());
    }

    #[test]
    fn v10_catches_denormalized_sigma() {
        let (ring, module) = setup(2);
        let mut q = MacLaneQuadruple::zero(&ring, &module);
        // Bypass make_cochain to plant a forced-zero violation.
        let idx = q.sigma.index_of(&[0, 1, 0, 1]);
        q.sigma.values[idx] = 1;
        let report = check_cocycle(&ring, &module, &q).unwrap();
        let v10 = report.status("v10").unwrap();
        assert!(!v10.pass);
        assert!(v10.witnesses.iter().any(|w| w.args == vec![0, 1, 0, 1]));
    }

    #[test]
    fn trivial_module_admits_exactly_the_zero_structure() {
        let ring = make_cyclic_ring(3).unwrap();
        let module = Bimodule::trivial(3);
        let valid: Vec<AnnStructure> =
            enumerate_structures(&ring, &module, 10).unwrap().collect();
        assert_eq!(valid.len(), 1);
        assert!(valid[0].is_zero());
    }

    #[test]
    fn witnesses_round_trip_through_deformations() {
        for n in [3usize, 4] {
            let (ring, module) = setup(n);
            let mut rng = StdRng::seed_from_u64(0xA11CE);
            let zero = AnnStructure::zero(&ring, &module);
            for _ in 0..12 {
                let p1 = random_pair(&ring, &module, &mut rng);
                let p2 = random_pair(&ring, &module, &mut rng);
                let f = apply_structure_coboundary(&ring, &module, &zero, &p1).unwrap();
                let f_prime = apply_structure_coboundary(&ring, &module, &f, &p2).unwrap();
                let w = find_witness(&ring, &module, &f, &f_prime)
                    .unwrap()
                    .expect("deformed structures stay cohomologous");
                let applied = apply_structure_coboundary(&ring, &module, &f, &w).unwrap();
                assert_eq!(applied, f_prime);
            }
            let f = apply_structure_coboundary(
                &ring,
                &module,
                &zero,
                &random_pair(&ring, &module, &mut rng),
            )
            .unwrap();
            assert!(find_witness(&ring, &module, &f, &f).unwrap().is_some());
        }
    }

    #[test]
    fn witness_search_agrees_with_exhaustive_pairs_over_z3() {
        let (ring, module) = setup(3);
        let zero = AnnStructure::zero(&ring, &module);
        let mut rng = StdRng::seed_from_u64(99);
        let f1 =
            apply_structure_coboundary(&ring, &module, &zero, &random_pair(&ring, &module, &mut rng))
                .unwrap();
        let f2 =
            apply_structure_coboundary(&ring, &module, &zero, &random_pair(&ring, &module, &mut rng))
                .unwrap();
        let witness = find_witness(&ring, &module, &f1, &f2).unwrap();
        let brute = all_pairs(&ring, &module).into_iter().find(|p| {
            apply_structure_coboundary(&ring, &module, &f1, p).unwrap() == f2
        });
        assert_eq!(witness.is_some(), brute.is_some());
        assert!(witness.is_some());
    }

    #[test]
    fn witness_search_rejects_mismatched_ambients() {
        let (r2, m2) = setup(2);
        let (r3, m3) = setup(3);
        let f2 = AnnStructure::zero(&r2, &m2);
        let f3 = AnnStructure::zero(&r3, &m3);
        assert!(find_witness(&r2, &m2, &f2, &f3).is_err());
    }
}
