//! JSON file formats for rings, bimodules, cochains, structures,
//! quadruples, and witness pairs, with field-precise parse errors and
//! deterministic (byte-stable) serialization.
//!
//! Tables are nested row arrays in files (`add[i][j]`); cochain value
//! lists are flat in lexicographic argument order, leftmost argument
//! most significant. Readers also accept flat tables of the right
//! total length.

use crate::algebra::{AbelianGroup, Bimodule, FiniteRing};
use crate::cochain::{make_cochain, Cochain, CochainError, CochainKind};
use crate::relations::{AnnStructure, CochainPair, MacLaneQuadruple};
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// Errors raised while loading an input file, split so callers can
/// distinguish malformed files from mathematically invalid content.
#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Field { path: String, field: String, message: String },
    #[error("{path}: {message}")]
    Content { path: String, message: String },
}

impl ReadError {
    /// Whether the failure is a semantic (mathematical) one rather
    /// than a malformed file.
    pub fn is_math(&self) -> bool {
        matches!(self, ReadError::Content { .. })
    }
}

/// The recognized input document kinds, detected by their fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Ring,
    Bimodule,
    Cochain,
    Structure,
    Quadruple,
    Pair,
}

impl FileKind {
    pub fn name(self) -> &'static str {
        match self {
            FileKind::Ring => "ring",
            FileKind::Bimodule => "bimodule",
            FileKind::Cochain => "cochain",
            FileKind::Structure => "structure",
            FileKind::Quadruple => "quadruple",
            FileKind::Pair => "pair",
        }
    }
}

/// Kind of a parsed document, judged by its distinguishing fields.
pub fn detect_kind(doc: &Value) -> Option<FileKind> {
    let obj = doc.as_object()?;
    if obj.contains_key("mul") && obj.contains_key("add") {
        return Some(FileKind::Ring);
    }
    if obj.contains_key("left_action") {
        return Some(FileKind::Bimodule);
    }
    if obj.contains_key("xi") {
        return Some(FileKind::Structure);
    }
    if obj.contains_key("sigma") {
        return Some(FileKind::Quadruple);
    }
    if obj.contains_key("mu") {
        return Some(FileKind::Pair);
    }
    if obj.contains_key("kind") && obj.contains_key("values") {
        return Some(FileKind::Cochain);
    }
    None
}

/// Reads and parses a JSON document, reporting the line and column of
/// any syntax error.
pub fn read_json(path: &Path) -> Result<Value, ReadError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ReadError::Io { path: display.clone(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| ReadError::Parse {
        path: display,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn field_err(path: &Path, field: &str, message: impl Into<String>) -> ReadError {
    ReadError::Field {
        path: path.display().to_string(),
        field: field.to_string(),
        message: message.into(),
    }
}

fn content_err(path: &Path, message: impl Into<String>) -> ReadError {
    ReadError::Content { path: path.display().to_string(), message: message.into() }
}

fn get<'v>(path: &Path, doc: &'v Value, field: &str) -> Result<&'v Value, ReadError> {
    doc.get(field).ok_or_else(|| field_err(path, field, "missing"))
}

fn as_usize(path: &Path, field: &str, v: &Value) -> Result<usize, ReadError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| field_err(path, field, "expected a nonnegative integer"))
}

fn usize_field(path: &Path, doc: &Value, field: &str) -> Result<usize, ReadError> {
    as_usize(path, field, get(path, doc, field)?)
}

fn usize_list(path: &Path, field: &str, v: &Value) -> Result<Vec<usize>, ReadError> {
    let arr = v
        .as_array()
        .ok_or_else(|| field_err(path, field, "expected an array"))?;
    arr.iter().map(|e| as_usize(path, field, e)).collect()
}

/// A table field: either nested rows or a flat list; returns the
/// flattened entries without shape checking (constructors do that).
fn table_field(path: &Path, doc: &Value, field: &str) -> Result<Vec<usize>, ReadError> {
    let v = get(path, doc, field)?;
    let arr = v
        .as_array()
        .ok_or_else(|| field_err(path, field, "expected an array"))?;
    if arr.iter().all(Value::is_array) && !arr.is_empty() {
        let mut flat = Vec::new();
        for row in arr {
            flat.extend(usize_list(path, field, row)?);
        }
        Ok(flat)
    } else {
        usize_list(path, field, v)
    }
}

/// Parses a ring document: `order`, `add`, `mul`, optional `one`.
pub fn parse_ring(path: &Path, doc: &Value) -> Result<FiniteRing, ReadError> {
    let order = usize_field(path, doc, "order")?;
    let add = table_field(path, doc, "add")?;
    let mul = table_field(path, doc, "mul")?;
    let one = match doc.get("one") {
        Some(v) => Some(as_usize(path, "one", v)?),
        None => None,
    };
    FiniteRing::from_tables(order, add, mul, one)
        .map_err(|e| field_err(path, "tables", e.to_string()))
}

/// Parses a bimodule document: `ring_order`, `left_action`,
/// `right_action`, and either `invariant_factors` or `group_add`.
pub fn parse_bimodule(path: &Path, doc: &Value) -> Result<Bimodule, ReadError> {
    let ring_order = usize_field(path, doc, "ring_order")?;
    let left = table_field(path, doc, "left_action")?;
    let right = table_field(path, doc, "right_action")?;
    if let Some(v) = doc.get("invariant_factors") {
        let factors: Vec<u64> = usize_list(path, "invariant_factors", v)?
            .into_iter()
            .map(|d| d as u64)
            .collect();
        Bimodule::from_invariant_factors(ring_order, &factors, left, right)
            .map_err(|e| field_err(path, "invariant_factors", e.to_string()))
    } else if doc.get("group_add").is_some() {
        let add = table_field(path, doc, "group_add")?;
        Bimodule::from_group_table(ring_order, add, left, right).map_err(|e| {
            match e {
                // A well-shaped table that is not an abelian group is a
                // mathematical failure, not a malformed file.
                crate::algebra::AlgebraError::NotAbelian(msg) => {
                    content_err(path, format!("group_add is not an abelian group: {msg}"))
                }
                other => field_err(path, "group_add", other.to_string()),
            }
        })
    } else {
        Err(field_err(path, "invariant_factors", "need `invariant_factors` or `group_add`"))
    }
}

fn kind_by_name(path: &Path, name: &str) -> Result<CochainKind, ReadError> {
    let all = [
        CochainKind::Xi,
        CochainKind::Eta,
        CochainKind::Alpha,
        CochainKind::Lambda,
        CochainKind::Rho,
        CochainKind::Sigma,
        CochainKind::Mu,
        CochainKind::Nu,
    ];
    all.into_iter().find(|k| k.name() == name).ok_or_else(|| {
        field_err(path, "kind", format!("unknown cochain kind `{name}`"))
    })
}

fn check_ambient(
    path: &Path,
    doc: &Value,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<(), ReadError> {
    let ring_order = usize_field(path, doc, "ring_order")?;
    let module_order = usize_field(path, doc, "module_order")?;
    if ring_order != ring.order() || module_order != module.order() {
        return Err(content_err(
            path,
            format!(
                "declared ambient ({ring_order}, {module_order}) does not match the given ring and module ({}, {})",
                ring.order(),
                module.order()
            ),
        ));
    }
    Ok(())
}

fn cochain_slot(
    path: &Path,
    doc: &Value,
    field: &str,
    kind: CochainKind,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<Cochain, ReadError> {
    let values = usize_list(path, field, get(path, doc, field)?)?;
    make_cochain(kind, ring, module, values).map_err(|e| match e {
        // Wrong shapes and out-of-range entries are malformed files;
        // violated normalization is a mathematical failure.
        CochainError::BadShape { .. } | CochainError::ValueOutOfRange { .. } => {
            field_err(path, field, e.to_string())
        }
        other => content_err(path, other.to_string()),
    })
}

/// Parses a cochain document against a concrete ring and module.
pub fn parse_cochain(
    path: &Path,
    doc: &Value,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<Cochain, ReadError> {
    check_ambient(path, doc, ring, module)?;
    let name = get(path, doc, "kind")?
        .as_str()
        .ok_or_else(|| field_err(path, "kind", "expected a string"))?;
    let kind = kind_by_name(path, name)?;
    cochain_slot(path, doc, "values", kind, ring, module)
}

/// Parses a five-slot structure document.
pub fn parse_structure(
    path: &Path,
    doc: &Value,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<AnnStructure, ReadError> {
    check_ambient(path, doc, ring, module)?;
    AnnStructure::new(
        cochain_slot(path, doc, "xi", CochainKind::Xi, ring, module)?,
        cochain_slot(path, doc, "eta", CochainKind::Eta, ring, module)?,
        cochain_slot(path, doc, "alpha", CochainKind::Alpha, ring, module)?,
        cochain_slot(path, doc, "lambda", CochainKind::Lambda, ring, module)?,
        cochain_slot(path, doc, "rho", CochainKind::Rho, ring, module)?,
    )
    .map_err(|e| content_err(path, e.to_string()))
}

/// Parses a quadruple document.
pub fn parse_quadruple(
    path: &Path,
    doc: &Value,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<MacLaneQuadruple, ReadError> {
    check_ambient(path, doc, ring, module)?;
    MacLaneQuadruple::new(
        cochain_slot(path, doc, "sigma", CochainKind::Sigma, ring, module)?,
        cochain_slot(path, doc, "alpha", CochainKind::Alpha, ring, module)?,
        cochain_slot(path, doc, "lambda", CochainKind::Lambda, ring, module)?,
        cochain_slot(path, doc, "rho", CochainKind::Rho, ring, module)?,
    )
    .map_err(|e| content_err(path, e.to_string()))
}

/// Parses a degree-2 witness pair document.
pub fn parse_pair(
    path: &Path,
    doc: &Value,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<CochainPair, ReadError> {
    check_ambient(path, doc, ring, module)?;
    CochainPair::new(
        cochain_slot(path, doc, "mu", CochainKind::Mu, ring, module)?,
        cochain_slot(path, doc, "nu", CochainKind::Nu, ring, module)?,
    )
    .map_err(|e| content_err(path, e.to_string()))
}

fn rows_of(flat: &[usize], cols: usize) -> Vec<Vec<usize>> {
    if cols == 0 {
        return Vec::new();
    }
    flat.chunks(cols).map(<[usize]>::to_vec).collect()
}

/// Ring document in canonical field order.
#[derive(Debug, Clone, Serialize)]
pub struct RingDoc {
    pub order: usize,
    pub one: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl RingDoc {
    pub fn of(ring: &FiniteRing) -> RingDoc {
        RingDoc {
            order: ring.order(),
            one: ring.one(),
            add: rows_of(ring.add_table(), ring.order()),
            mul: rows_of(ring.mul_table(), ring.order()),
        }
    }
}

/// Bimodule document in canonical (invariant-factor) indexing.
#[derive(Debug, Clone, Serialize)]
pub struct BimoduleDoc {
    pub ring_order: usize,
    pub invariant_factors: Vec<u64>,
    pub left_action: Vec<Vec<usize>>,
    pub right_action: Vec<Vec<usize>>,
}

impl BimoduleDoc {
    pub fn of(ring: &FiniteRing, module: &Bimodule) -> BimoduleDoc {
        let group: &AbelianGroup = module.group();
        let m = module.order();
        let n = ring.order();
        let canon = |u: usize| group.encode(&module.coords(u));
        let elem = |uc: usize| module.element(&group.decode(uc));
        let mut left = vec![vec![0usize; m]; n];
        let mut right = vec![vec![0usize; n]; m];
        for r in 0..n {
            for uc in 0..m {
                left[r][uc] = canon(module.act_left(r, elem(uc)));
                right[uc][r] = canon(module.act_right(elem(uc), r));
            }
        }
        BimoduleDoc {
            ring_order: n,
            invariant_factors: group.factors().to_vec(),
            left_action: left,
            right_action: right,
        }
    }
}

/// Cochain document: flat lexicographic values.
#[derive(Debug, Clone, Serialize)]
pub struct CochainDoc {
    pub kind: &'static str,
    pub ring_order: usize,
    pub module_order: usize,
    pub values: Vec<usize>,
}

impl CochainDoc {
    pub fn of(c: &Cochain) -> CochainDoc {
        CochainDoc {
            kind: c.kind.name(),
            ring_order: c.ring_order,
            module_order: c.module_order,
            values: c.values.clone(),
        }
    }
}

/// Structure document: five flat value tables plus ambient orders.
#[derive(Debug, Clone, Serialize)]
pub struct StructureDoc {
    pub ring_order: usize,
    pub module_order: usize,
    pub xi: Vec<usize>,
    pub eta: Vec<usize>,
    pub alpha: Vec<usize>,
    pub lambda: Vec<usize>,
    pub rho: Vec<usize>,
}

impl StructureDoc {
    pub fn of(f: &AnnStructure) -> StructureDoc {
        StructureDoc {
            ring_order: f.ring_order(),
            module_order: f.module_order(),
            xi: f.xi.values.clone(),
            eta: f.eta.values.clone(),
            alpha: f.alpha.values.clone(),
            lambda: f.lambda.values.clone(),
            rho: f.rho.values.clone(),
        }
    }
}

/// Quadruple document.
#[derive(Debug, Clone, Serialize)]
pub struct QuadrupleDoc {
    pub ring_order: usize,
    pub module_order: usize,
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
    pub lambda: Vec<usize>,
    pub rho: Vec<usize>,
}

impl QuadrupleDoc {
    pub fn of(q: &MacLaneQuadruple) -> QuadrupleDoc {
        QuadrupleDoc {
            ring_order: q.ring_order(),
            module_order: q.module_order(),
            sigma: q.sigma.values.clone(),
            alpha: q.alpha.values.clone(),
            lambda: q.lambda.values.clone(),
            rho: q.rho.values.clone(),
        }
    }
}

/// Witness pair document.
#[derive(Debug, Clone, Serialize)]
pub struct PairDoc {
    pub ring_order: usize,
    pub module_order: usize,
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
}

impl PairDoc {
    pub fn of(p: &CochainPair) -> PairDoc {
        PairDoc {
            ring_order: p.ring_order(),
            module_order: p.module_order(),
            mu: p.mu.values.clone(),
            nu: p.nu.values.clone(),
        }
    }
}

/// Canonical JSON text: two-space pretty printing with fixed field
/// order and a trailing newline, so identical inputs produce identical
/// bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes canonical JSON to a file.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ReadError> {
    std::fs::write(path, to_canonical_json(value))
        .map_err(|e| ReadError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Renders an integer table inline for text reports, e.g. "0 1 / 1 0".
pub fn brief_table(flat: &[usize], cols: usize) -> String {
    let mut out = String::new();
    for (i, chunk) in flat.chunks(cols.max(1)).enumerate() {
        if i > 0 {
            out.push_str(" / ");
        }
        for (j, v) in chunk.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
    }
    out
}
