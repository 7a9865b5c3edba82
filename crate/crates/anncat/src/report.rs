//! Command-level report types. Every command produces the same facts
//! twice: a human-readable text rendering and a machine-readable JSON
//! document. Both are deterministic functions of the inputs; vectors
//! keep fixed orders and big integers serialize as decimal strings.

use crate::algebra::{Bimodule, FiniteRing, LawFailure};
use crate::cochain::CochainError;
use crate::cohomology::{class_of, compute_h3, solve_structures, H3Options, LinearError};
use crate::io::{CochainDoc, PairDoc, QuadrupleDoc, StructureDoc};
use crate::relations::{
    check_structure_capped, find_witness, quadruple_from, structure_search_space, structure_sum,
    structure_valid, AnnStructure, RelationReport,
};
use crate::skeleton::{compare_sigma, sigma_of, structure_digest, SigmaComparison, SigmaMethod};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

fn big(x: &BigUint) -> String {
    x.to_string()
}

fn label_text(label: &[u64]) -> String {
    let digits: Vec<String> = label.iter().map(u64::to_string).collect();
    format!("[{}]", digits.join(", "))
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Verdict on a single input file.
#[derive(Debug, Clone, Serialize)]
pub struct FileCheck {
    pub path: String,
    pub kind: String,
    pub pass: bool,
    /// True when the file could not even be read or parsed; such
    /// failures map to the format-error exit code.
    pub format_error: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub law_failures: Vec<LawFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<RelationReport>,
}

impl FileCheck {
    pub fn passed(path: &str, kind: &str) -> FileCheck {
        FileCheck {
            path: path.to_string(),
            kind: kind.to_string(),
            pass: true,
            format_error: false,
            error: None,
            law_failures: Vec::new(),
            relations: None,
        }
    }

    pub fn failed(path: &str, kind: &str, format_error: bool, error: String) -> FileCheck {
        FileCheck {
            path: path.to_string(),
            kind: kind.to_string(),
            pass: false,
            format_error,
            error: Some(error),
            law_failures: Vec::new(),
            relations: None,
        }
    }

    pub fn with_laws(path: &str, kind: &str, failures: Vec<LawFailure>) -> FileCheck {
        FileCheck {
            path: path.to_string(),
            kind: kind.to_string(),
            pass: failures.is_empty(),
            format_error: false,
            error: None,
            law_failures: failures,
            relations: None,
        }
    }

    pub fn with_relations(path: &str, kind: &str, relations: RelationReport) -> FileCheck {
        FileCheck {
            path: path.to_string(),
            kind: kind.to_string(),
            pass: relations.pass(),
            format_error: false,
            error: None,
            law_failures: Vec::new(),
            relations: Some(relations),
        }
    }
}

/// Report of the `validate` command over a list of files.
#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub pass: bool,
    pub checks: Vec<FileCheck>,
}

impl ValidateReport {
    pub fn new(checks: Vec<FileCheck>) -> ValidateReport {
        ValidateReport { pass: checks.iter().all(|c| c.pass), checks }
    }

    /// Process exit code: format errors dominate mathematical ones.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.format_error) {
            2
        } else if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let mut out = format!(
            "validation: {} file(s), {} passed, {} failed\n",
            self.checks.len(),
            passed,
            self.checks.len() - passed
        );
        for check in &self.checks {
            let _ = writeln!(out, "  {} {} {}", pass_word(check.pass), check.kind, check.path);
            if let Some(err) = &check.error {
                let _ = writeln!(out, "    {err}");
            }
            for law in &check.law_failures {
                let _ = writeln!(
                    out,
                    "    law {} ({}) fails at witness {:?}",
                    law.law, law.statement, law.witness
                );
            }
            if let Some(relations) = &check.relations {
                for status in relations.statuses.iter().filter(|s| !s.pass) {
                    let _ = write!(
                        out,
                        "    relation {}: {} violation(s)",
                        status.id, status.violations
                    );
                    if let Some(w) = status.witnesses.first() {
                        let _ = write!(
                            out,
                            "; first at args {:?}: lhs {}, rhs {}",
                            w.args, w.lhs, w.rhs
                        );
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Report of the `sigma` command: the interchange table computed by
/// the requested method, its cocycle status, and the two built-in
/// comparisons (method-vs-method and factorization-vs-factorization).
#[derive(Debug, Clone, Serialize)]
pub struct SigmaReport {
    pub ring_order: usize,
    pub module_order: usize,
    pub method: String,
    pub structure_valid: bool,
    pub sigma: CochainDoc,
    pub v10_pass: bool,
    pub cocycle_pass: bool,
    pub methods_agree: bool,
    pub factorizations_agree: bool,
    pub pass: bool,
    pub cocycle: RelationReport,
    pub comparison: SigmaComparison,
}

impl SigmaReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "sigma ({} method) over ring order {}, module order {}\n",
            self.method, self.ring_order, self.module_order
        );
        let _ = writeln!(out, "  structure relations: {}", pass_word(self.structure_valid));
        let _ = writeln!(out, "  v10 normalization: {}", pass_word(self.v10_pass));
        let _ = writeln!(
            out,
            "  cocycle conditions v1-v10: {}",
            pass_word(self.cocycle_pass)
        );
        for status in self.cocycle.statuses.iter().filter(|s| !s.pass) {
            let _ = writeln!(out, "    {}: {} violation(s)", status.id, status.violations);
        }
        if self.methods_agree {
            let _ = writeln!(out, "  diagram vs printed: agree at every tuple");
        } else {
            let _ = writeln!(
                out,
                "  diagram vs printed: {} disagreement(s), first at {:?}",
                self.comparison.method_disagreements.len(),
                self.comparison.method_disagreements[0].args
            );
        }
        if self.factorizations_agree {
            let _ = writeln!(out, "  interchange factorizations: agree at every tuple");
        } else {
            let _ = writeln!(
                out,
                "  interchange factorizations: {} disagreement(s), first at {:?}",
                self.comparison.factorization_disagreements.len(),
                self.comparison.factorization_disagreements[0].args
            );
        }
        let _ = writeln!(out, "  overall: {}", pass_word(self.pass));
        out
    }
}

/// Builds the sigma report for a structure.
pub fn sigma_report(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    method: SigmaMethod,
) -> Result<SigmaReport, CochainError> {
    let valid = structure_valid(ring, module, f);
    let sigma = sigma_of(ring, module, f, method);
    let quadruple = quadruple_from(f, sigma.clone())?;
    let cocycle = crate::relations::check_cocycle(ring, module, &quadruple)?;
    let v10_pass = cocycle
        .statuses
        .iter()
        .find(|s| s.id == "v10")
        .map(|s| s.pass)
        .unwrap_or(false);
    let comparison = compare_sigma(ring, module, f);
    let methods_agree = comparison.method_disagreements.is_empty();
    let factorizations_agree = comparison.factorization_disagreements.is_empty();
    let cocycle_pass = cocycle.pass();
    let pass = valid && cocycle_pass && methods_agree && factorizations_agree;
    Ok(SigmaReport {
        ring_order: ring.order(),
        module_order: module.order(),
        method: match method {
            SigmaMethod::Diagram => "diagram".to_string(),
            SigmaMethod::Printed => "printed".to_string(),
        },
        structure_valid: valid,
        sigma: CochainDoc::of(&sigma),
        v10_pass,
        cocycle_pass,
        methods_agree,
        factorizations_agree,
        pass,
        cocycle,
        comparison,
    })
}

/// Report of the `witness` command.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub ring_order: usize,
    pub module_order: usize,
    pub from_valid: bool,
    pub to_valid: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub from_failing: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub to_failing: Vec<String>,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PairDoc>,
}

impl WitnessReport {
    /// Both inputs must be valid structures; a missing witness between
    /// valid structures is a negative answer, not a failure.
    pub fn exit_code(&self) -> i32 {
        if self.from_valid && self.to_valid {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "witness search over ring order {}, module order {}\n",
            self.ring_order, self.module_order
        );
        let _ = writeln!(out, "  from: {}", pass_word(self.from_valid));
        if !self.from_failing.is_empty() {
            let _ = writeln!(out, "    failing relations: {}", self.from_failing.join(", "));
        }
        let _ = writeln!(out, "  to: {}", pass_word(self.to_valid));
        if !self.to_failing.is_empty() {
            let _ = writeln!(out, "    failing relations: {}", self.to_failing.join(", "));
        }
        if self.from_valid && self.to_valid {
            if self.found {
                let _ = writeln!(
                    out,
                    "  witness: found (verified to carry the first structure to the second)"
                );
            } else {
                let _ = writeln!(
                    out,
                    "  witness: none (the structures lie in different classes)"
                );
            }
        } else {
            let _ = writeln!(out, "  witness: not attempted (invalid input)");
        }
        out
    }
}

/// Builds the witness report for an ordered pair of structures.
pub fn witness_report(
    ring: &FiniteRing,
    module: &Bimodule,
    from: &AnnStructure,
    to: &AnnStructure,
) -> Result<WitnessReport, CochainError> {
    let from_report = check_structure_capped(ring, module, from, false, 3)?;
    let to_report = check_structure_capped(ring, module, to, false, 3)?;
    let from_valid = from_report.pass();
    let to_valid = to_report.pass();
    let mut found = false;
    let mut witness = None;
    if from_valid && to_valid {
        if let Some(pair) = find_witness(ring, module, from, to)? {
            found = true;
            witness = Some(PairDoc::of(&pair));
        }
    }
    Ok(WitnessReport {
        ring_order: ring.order(),
        module_order: module.order(),
        from_valid,
        to_valid,
        from_failing: from_report.failing_ids().iter().map(|s| s.to_string()).collect(),
        to_failing: to_report.failing_ids().iter().map(|s| s.to_string()).collect(),
        found,
        witness,
    })
}

/// Report of the `enumerate` command.
#[derive(Debug, Clone, Serialize)]
pub struct EnumerateReport {
    pub ring_order: usize,
    pub module_order: usize,
    pub search_space: String,
    pub budget: u64,
    pub refused: bool,
    pub regular_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid_count: Option<usize>,
    pub digests: Vec<String>,
    pub structures: Vec<StructureDoc>,
}

impl EnumerateReport {
    pub fn exit_code(&self) -> i32 {
        if self.refused {
            3
        } else {
            0
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "enumeration over ring order {}, module order {}\n",
            self.ring_order, self.module_order
        );
        let _ = writeln!(out, "  search space: {} candidate(s)", self.search_space);
        if self.refused {
            let _ = writeln!(
                out,
                "  refused: search space exceeds the budget of {}",
                self.budget
            );
            return out;
        }
        if self.regular_only {
            let _ = writeln!(out, "  filter: regular structures only");
        }
        let _ = writeln!(
            out,
            "  valid structure(s): {}",
            self.valid_count.unwrap_or(0)
        );
        for digest in &self.digests {
            let _ = writeln!(out, "    {digest}");
        }
        out
    }
}

fn is_regular(f: &AnnStructure) -> bool {
    let n = f.ring_order();
    (0..n).all(|x| f.eta.values[x * n + x] == 0)
}

/// Builds the enumerate report by exhaustive scan of the free-support
/// candidate space. Refusal is a report, not an error, so the exact
/// size is always printed.
pub fn enumerate_report(
    ring: &FiniteRing,
    module: &Bimodule,
    budget: u64,
    regular_only: bool,
) -> Result<EnumerateReport, CochainError> {
    let search_space = structure_search_space(ring, module);
    match crate::relations::enumerate_structures(ring, module, budget) {
        Err(refusal) => Ok(EnumerateReport {
            ring_order: ring.order(),
            module_order: module.order(),
            search_space: big(&refusal.search_space),
            budget,
            refused: true,
            regular_only,
            valid_count: None,
            digests: Vec::new(),
            structures: Vec::new(),
        }),
        Ok(stream) => {
            let mut docs = Vec::new();
            let mut digests = Vec::new();
            for f in stream {
                if regular_only && !is_regular(&f) {
                    continue;
                }
                digests.push(structure_digest(&f));
                docs.push(StructureDoc::of(&f));
            }
            Ok(EnumerateReport {
                ring_order: ring.order(),
                module_order: module.order(),
                search_space: big(&search_space),
                budget,
                refused: false,
                regular_only,
                valid_count: Some(docs.len()),
                digests,
                structures: docs,
            })
        }
    }
}

/// One cohomology class realized by structures.
#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub label: Vec<u64>,
    pub members: usize,
    pub regular_members: usize,
}

/// Closure facts about the regular sub-family.
#[derive(Debug, Clone, Serialize)]
pub struct RegularSection {
    pub count: usize,
    /// Ordered pairs of regular structures whose slot-wise sum was
    /// checked; exhaustive unless the family is large.
    pub pairs_checked: usize,
    pub exhaustive: bool,
    /// Every checked sum is again a valid regular structure.
    pub sums_valid_and_regular: bool,
    /// Distinct class labels realized by regular structures.
    pub class_labels: Vec<Vec<u64>>,
    /// The label set is closed under class-group addition.
    pub labels_closed_under_addition: bool,
}

/// Witness spot-checks run inside classification.
#[derive(Debug, Clone, Serialize)]
pub struct SelfAudit {
    pub same_class_pairs_checked: usize,
    pub same_class_witnessed: usize,
    pub cross_class_pairs_checked: usize,
    pub cross_class_without_witness: usize,
    pub pass: bool,
}

/// Report of the `classify` command.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub ring_order: usize,
    pub module_order: usize,
    pub search_space: String,
    pub valid_structures: usize,
    pub distinct_classes: usize,
    pub h3_order: String,
    /// Number of distinct realized labels never exceeds the class
    /// group order.
    pub classes_within_h3: bool,
    pub classes: Vec<ClassSummary>,
    pub regular: RegularSection,
    pub self_audit: SelfAudit,
}

impl ClassifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.self_audit.pass && self.classes_within_h3 {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "classification over ring order {}, module order {}\n",
            self.ring_order, self.module_order
        );
        let _ = writeln!(out, "  search space: {} candidate(s)", self.search_space);
        let _ = writeln!(out, "  valid structures: {}", self.valid_structures);
        let _ = writeln!(
            out,
            "  distinct classes: {} (|H3| = {}, containment {})",
            self.distinct_classes,
            self.h3_order,
            pass_word(self.classes_within_h3)
        );
        for class in &self.classes {
            let _ = writeln!(
                out,
                "    class {}: {} member(s), {} regular",
                label_text(&class.label),
                class.members,
                class.regular_members
            );
        }
        let r = &self.regular;
        let _ = writeln!(out, "  regular structures: {}", r.count);
        let _ = writeln!(
            out,
            "    sums over {} pair(s){}: {}",
            r.pairs_checked,
            if r.exhaustive { "" } else { " (sampled)" },
            pass_word(r.sums_valid_and_regular)
        );
        let labels: Vec<String> = r.class_labels.iter().map(|l| label_text(l)).collect();
        let _ = writeln!(
            out,
            "    class labels {{{}}} closed under addition: {}",
            labels.join(", "),
            pass_word(r.labels_closed_under_addition)
        );
        let a = &self.self_audit;
        let _ = writeln!(
            out,
            "  self-audit: {}/{} same-class pairs witnessed, {}/{} cross-class pairs refuted: {}",
            a.same_class_witnessed,
            a.same_class_pairs_checked,
            a.cross_class_without_witness,
            a.cross_class_pairs_checked,
            pass_word(a.pass)
        );
        out
    }
}

/// Deterministic sample of at most `cap` items: all of them when the
/// list is short, otherwise an evenly spaced stride.
fn stride_sample(total: usize, cap: usize) -> Vec<usize> {
    if total <= cap {
        return (0..total).collect();
    }
    (0..cap).map(|k| k * total / cap).collect()
}

fn add_labels(a: &[u64], b: &[u64], moduli: &[BigUint]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(moduli)
        .map(|((&x, &y), m)| {
            let m = m.to_u64().expect("class moduli fit in u64 at desk scale");
            (x + y) % m
        })
        .collect()
}

const AUDIT_PAIR_CAP: usize = 100;
const CLOSURE_PAIR_CAP: usize = 4096;

/// Builds the classification report: solve for all valid structures,
/// label each by its cohomology class, and audit the grouping with
/// witness searches and closure checks.
pub fn classify_report(
    ring: &FiniteRing,
    module: &Bimodule,
    budget: u64,
) -> Result<ClassifyReport, LinearError> {
    let structures = solve_structures(ring, module, false, budget)?;
    let h3 = compute_h3(ring, module, &H3Options::default())?;

    let mut labels = Vec::with_capacity(structures.len());
    for f in &structures {
        let sigma = sigma_of(ring, module, f, SigmaMethod::Diagram);
        let quadruple = quadruple_from(f, sigma)?;
        labels.push(class_of(ring, module, &h3, &quadruple)?);
    }

    let mut by_label: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        by_label.entry(label.clone()).or_default().push(i);
    }
    let classes: Vec<ClassSummary> = by_label
        .iter()
        .map(|(label, members)| ClassSummary {
            label: label.clone(),
            members: members.len(),
            regular_members: members
                .iter()
                .filter(|&&i| is_regular(&structures[i]))
                .count(),
        })
        .collect();
    let classes_within_h3 = BigUint::from(by_label.len()) <= h3.h3_order;

    // Regular sub-family closure under slot-wise addition.
    let regular_idx: Vec<usize> = (0..structures.len())
        .filter(|&i| is_regular(&structures[i]))
        .collect();
    let total_pairs = regular_idx.len() * regular_idx.len();
    let picked = stride_sample(total_pairs, CLOSURE_PAIR_CAP);
    let mut sums_ok = true;
    for &k in &picked {
        let f = &structures[regular_idx[k / regular_idx.len().max(1)]];
        let g = &structures[regular_idx[k % regular_idx.len().max(1)]];
        let sum = structure_sum(module, f, g)?;
        if !(structure_valid(ring, module, &sum) && is_regular(&sum)) {
            sums_ok = false;
            break;
        }
    }
    let regular_labels: BTreeSet<Vec<u64>> =
        regular_idx.iter().map(|&i| labels[i].clone()).collect();
    let mut labels_closed = true;
    'outer: for a in &regular_labels {
        for b in &regular_labels {
            if !regular_labels.contains(&add_labels(a, b, &h3.invariant_factors)) {
                labels_closed = false;
                break 'outer;
            }
        }
    }
    let regular = RegularSection {
        count: regular_idx.len(),
        pairs_checked: picked.len(),
        exhaustive: picked.len() == total_pairs,
        sums_valid_and_regular: sums_ok,
        class_labels: regular_labels.into_iter().collect(),
        labels_closed_under_addition: labels_closed,
    };

    // Self-audit: same-class pairs must admit witnesses, cross-class
    // pairs must not.
    let mut same_pairs = Vec::new();
    let mut cross_pairs = Vec::new();
    for i in 0..structures.len() {
        for j in (i + 1)..structures.len() {
            if labels[i] == labels[j] {
                same_pairs.push((i, j));
            } else {
                cross_pairs.push((i, j));
            }
        }
    }
    let mut same_checked = 0;
    let mut same_witnessed = 0;
    for k in stride_sample(same_pairs.len(), AUDIT_PAIR_CAP) {
        let (i, j) = same_pairs[k];
        same_checked += 1;
        if find_witness(ring, module, &structures[i], &structures[j])?.is_some() {
            same_witnessed += 1;
        }
    }
    let mut cross_checked = 0;
    let mut cross_refuted = 0;
    for k in stride_sample(cross_pairs.len(), AUDIT_PAIR_CAP) {
        let (i, j) = cross_pairs[k];
        cross_checked += 1;
        if find_witness(ring, module, &structures[i], &structures[j])?.is_none() {
            cross_refuted += 1;
        }
    }
    let self_audit = SelfAudit {
        same_class_pairs_checked: same_checked,
        same_class_witnessed: same_witnessed,
        cross_class_pairs_checked: cross_checked,
        cross_class_without_witness: cross_refuted,
        pass: same_witnessed == same_checked && cross_refuted == cross_checked,
    };

    Ok(ClassifyReport {
        ring_order: ring.order(),
        module_order: module.order(),
        search_space: big(&structure_search_space(ring, module)),
        valid_structures: structures.len(),
        distinct_classes: by_label.len(),
        h3_order: big(&h3.h3_order),
        classes_within_h3,
        classes,
        regular,
        self_audit,
    })
}

/// One class representative: inline until an output directory is
/// chosen, then referenced by file path.
#[derive(Debug, Clone, Serialize)]
pub struct H3RepRef {
    pub class: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadruple: Option<QuadrupleDoc>,
}

/// Independent-method section of the cohomology report.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckSection {
    pub method: String,
    pub z3_order: String,
    pub b3_order: String,
    pub h3_order: String,
    pub agrees: bool,
}

/// Report of the `h3` command.
#[derive(Debug, Clone, Serialize)]
pub struct H3Report {
    pub ring_order: usize,
    pub module_order: usize,
    pub chart_rank: usize,
    pub z3_order: String,
    pub b3_order: String,
    pub h3_order: String,
    pub invariant_factors: Vec<String>,
    pub orders_consistent: bool,
    pub representatives: Vec<H3RepRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheckSection>,
}

impl H3Report {
    pub fn exit_code(&self) -> i32 {
        let cross_ok = self.cross_check.as_ref().map(|c| c.agrees).unwrap_or(true);
        if self.orders_consistent && cross_ok {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "H3 over ring order {}, module order {}\n",
            self.ring_order, self.module_order
        );
        let _ = writeln!(out, "  cochain chart rank: {}", self.chart_rank);
        let _ = writeln!(
            out,
            "  |Z3| = {}, |B3| = {}, |H3| = {}",
            self.z3_order, self.b3_order, self.h3_order
        );
        let _ = writeln!(
            out,
            "  invariant factors: [{}]",
            self.invariant_factors.join(", ")
        );
        let _ = writeln!(
            out,
            "  |Z3| = |B3| * |H3|: {}",
            pass_word(self.orders_consistent)
        );
        let _ = writeln!(out, "  representatives: {} class(es)", self.representatives.len());
        for rep in &self.representatives {
            match &rep.file {
                Some(file) => {
                    let _ = writeln!(out, "    class {}: {}", label_text(&rep.class), file);
                }
                None => {
                    let _ = writeln!(out, "    class {}: inline", label_text(&rep.class));
                }
            }
        }
        if let Some(cross) = &self.cross_check {
            let _ = writeln!(
                out,
                "  cross-check ({}): |Z3| = {}, |B3| = {}, |H3| = {}, agreement {}",
                cross.method,
                cross.z3_order,
                cross.b3_order,
                cross.h3_order,
                pass_word(cross.agrees)
            );
        }
        out
    }
}

/// Builds the cohomology report. Representatives are embedded inline;
/// the caller may move them into files and replace the references.
pub fn h3_report(
    ring: &FiniteRing,
    module: &Bimodule,
    opts: &H3Options,
) -> Result<H3Report, LinearError> {
    let comp = compute_h3(ring, module, opts)?;
    let orders_consistent = &comp.b3_order * &comp.h3_order == comp.z3_order;
    let representatives = comp
        .representatives
        .as_ref()
        .map(|reps| {
            reps.iter()
                .map(|rep| H3RepRef {
                    class: rep.class.clone(),
                    file: None,
                    quadruple: Some(QuadrupleDoc::of(&rep.quadruple)),
                })
                .collect()
        })
        .unwrap_or_default();
    let cross_check = comp.cross_check.as_ref().map(|c| CrossCheckSection {
        method: c.method.to_string(),
        z3_order: big(&c.z3_order),
        b3_order: big(&c.b3_order),
        h3_order: big(&c.h3_order),
        agrees: c.z3_order == comp.z3_order
            && c.b3_order == comp.b3_order
            && c.h3_order == comp.h3_order,
    });
    Ok(H3Report {
        ring_order: comp.ring_order,
        module_order: comp.module_order,
        chart_rank: comp.c3_rank,
        z3_order: big(&comp.z3_order),
        b3_order: big(&comp.b3_order),
        h3_order: big(&comp.h3_order),
        invariant_factors: comp.invariant_factors.iter().map(big).collect(),
        orders_consistent,
        representatives,
        cross_check,
    })
}
