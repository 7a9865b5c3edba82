//! Exact-arithmetic toolkit for ring-like categorical structures over
//! finite rings.
//!
//! A structure of type (R, M) consists of five tables of M-valued
//! corrections attached to the additive and multiplicative constraint
//! isomorphisms of a skeletal bimonoidal category with object set R.
//! This crate validates such structures against their defining relation
//! system, realizes them as explicit categories and replays the axioms
//! as diagram checks, enumerates and classifies them up to equivalence,
//! and computes the governing degree-3 cohomology group by exact
//! integer linear algebra (Smith and Hermite normal forms).
//!
//! Everything is table-driven and exact: rings and modules are given by
//! lookup tables on index sets, cochains are flat value vectors, and no
//! floating point is used anywhere.

// Index loops mirror the matrix and table arithmetic they implement;
// iterator rewrites would obscure the row/column bookkeeping.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cochain;
pub mod cohomology;
pub mod io;
pub mod relations;
pub mod report;
pub mod skeleton;

pub use algebra::{
    make_cyclic_ring, make_product_ring, validate_ring, validate_bimodule, AbelianGroup,
    AlgebraError, Bimodule, FiniteRing, LawFailure,
};
pub use cochain::{
    cochain_add, cochain_neg, free_support, free_values, from_free_values, make_cochain,
    zero_cochain, Cochain, CochainError, CochainKind,
};
pub use cohomology::{
    class_of, compute_h3, h3_brute_force, h3_prime_rank, hnf_columns, kernel_image,
    smith_normal_form, solve_preimage, solve_structures, structure_coboundary_hom,
    GroupPresentation, H3Computation, H3Options, H3Representative, Homomorphism, IndependentH3,
    LinearError, Mat, SnfDecomposition, Subgroup,
};
pub use skeleton::{
    compare_sigma, constraint_of, cross_validate, interchange_v, mor_compose, mor_id,
    mor_inverse, mor_prod, mor_sum, sigma_of, structure_digest, verify_axioms,
    verify_axioms_capped, write_discrepancy_log, AxiomStatus, ConstraintKind, CrossValidation,
    DiagramReport, DiagramWitness, DiscrepancyRecord, SigmaComparison, SigmaMethod,
    SkeletalMorphism, SkeletonError, AXIOM_IDS,
};
pub use relations::{
    apply_structure_coboundary, check_cocycle, check_cocycle_capped, check_structure,
    check_structure_capped, enumerate_structures, coboundary_d2, find_witness, quadruple_from,
    sigma_closed_form, structure_search_space, structure_sum, structure_valid, AnnStructure,
    CochainPair, MacLaneQuadruple, RelationReport, RelationStatus, SearchSpaceRefusal,
    SigmaFormula, WitnessValues,
};
pub use io::{
    detect_kind, parse_bimodule, parse_cochain, parse_pair, parse_quadruple, parse_ring,
    parse_structure, read_json, to_canonical_json, write_json, BimoduleDoc, CochainDoc, FileKind,
    PairDoc, QuadrupleDoc, ReadError, RingDoc, StructureDoc,
};
pub use report::{
    classify_report, enumerate_report, h3_report, sigma_report, witness_report, ClassSummary,
    ClassifyReport, CrossCheckSection, EnumerateReport, FileCheck, H3RepRef, H3Report,
    RegularSection, SelfAudit, SigmaReport, ValidateReport, WitnessReport,
};
