//! End-to-end acceptance suite. Each test covers one shipping
//! criterion at desk scale, using only the public API.

use anncat::algebra::{
    make_cyclic_ring, make_product_ring, validate_bimodule, validate_ring, Bimodule, FiniteRing,
    LawFailure,
};
use anncat::cochain::{free_support, from_free_values, CochainKind};
use anncat::cohomology::{class_of, compute_h3, solve_structures, H3Options};
use anncat::relations::{
    apply_structure_coboundary, check_cocycle, coboundary_d2, find_witness, quadruple_from,
    structure_search_space, structure_valid, AnnStructure, CochainPair,
};
use anncat::report::{classify_report, sigma_report};
use anncat::skeleton::{cross_validate, sigma_of, SigmaMethod};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn setup(n: usize) -> (FiniteRing, Bimodule) {
    let ring = make_cyclic_ring(n).unwrap();
    let module = Bimodule::regular_bimodule(&ring).unwrap();
    (ring, module)
}

/// Every normalized degree-2 pair, by odometer over the free supports.
fn all_pairs(ring: &FiniteRing, module: &Bimodule) -> Vec<CochainPair> {
    let mu_slots = free_support(CochainKind::Mu, ring).len();
    let nu_slots = free_support(CochainKind::Nu, ring).len();
    let m = module.order();
    let slots = mu_slots + nu_slots;
    let total = m.pow(slots as u32);
    let mut out = Vec::with_capacity(total);
    for index in 0..total {
        let mut digits = Vec::with_capacity(slots);
        let mut rest = index;
        for _ in 0..slots {
            digits.push(rest % m);
            rest /= m;
        }
        let mu = from_free_values(CochainKind::Mu, ring, module, &digits[..mu_slots]).unwrap();
        let nu = from_free_values(CochainKind::Nu, ring, module, &digits[mu_slots..]).unwrap();
        out.push(CochainPair::new(mu, nu).unwrap());
    }
    out
}

const STRUCTURE_KINDS: [CochainKind; 5] = [
    CochainKind::Xi,
    CochainKind::Eta,
    CochainKind::Alpha,
    CochainKind::Lambda,
    CochainKind::Rho,
];

/// A structure candidate from one flat free-value vector.
fn candidate_from_digits(
    ring: &FiniteRing,
    module: &Bimodule,
    digits: &[usize],
) -> AnnStructure {
    let mut slots = Vec::with_capacity(5);
    let mut offset = 0;
    for kind in STRUCTURE_KINDS {
        let len = free_support(kind, ring).len();
        slots.push(from_free_values(kind, ring, module, &digits[offset..offset + len]).unwrap());
        offset += len;
    }
    let mut it = slots.into_iter();
    AnnStructure::new(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
    .unwrap()
}

fn free_slot_count(ring: &FiniteRing) -> usize {
    STRUCTURE_KINDS.iter().map(|&k| free_support(k, ring).len()).sum()
}

fn random_pair(ring: &FiniteRing, module: &Bimodule, rng: &mut ChaCha8Rng) -> CochainPair {
    let m = module.order();
    let mu_len = free_support(CochainKind::Mu, ring).len();
    let nu_len = free_support(CochainKind::Nu, ring).len();
    let mu_vals: Vec<usize> = (0..mu_len).map(|_| rng.gen_range(0..m)).collect();
    let nu_vals: Vec<usize> = (0..nu_len).map(|_| rng.gen_range(0..m)).collect();
    CochainPair::new(
        from_free_values(CochainKind::Mu, ring, module, &mu_vals).unwrap(),
        from_free_values(CochainKind::Nu, ring, module, &nu_vals).unwrap(),
    )
    .unwrap()
}

#[test]
fn criterion_1_every_coboundary_is_a_cocycle() {
    let start = Instant::now();
    let expected_pairs = [(2usize, 2usize), (3, 243)];
    for (n, expected) in expected_pairs {
        let (ring, module) = setup(n);
        let pairs = all_pairs(&ring, &module);
        assert_eq!(pairs.len(), expected, "normalized pair count over Z/{n}");
        for pair in &pairs {
            let quadruple = coboundary_d2(&ring, &module, pair).unwrap();
            let report = check_cocycle(&ring, &module, &quadruple).unwrap();
            for status in &report.statuses {
                assert!(
                    status.pass && status.violations == 0,
                    "coboundary over Z/{n} violates {} at {:?}",
                    status.id,
                    status.witnesses.first()
                );
            }
        }
        println!("Z/{n}: all {} coboundaries pass the cocycle conditions", pairs.len());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "runtime bound: took {elapsed:?}");
}

#[test]
fn criterion_2_equation_and_diagram_checkers_agree() {
    let start = Instant::now();

    // Z/2: the full candidate space is tiny; run both checkers on all
    // of it.
    let (ring2, module2) = setup(2);
    assert_eq!(structure_search_space(&ring2, &module2), BigUint::from(4u32));
    let slots2 = free_slot_count(&ring2);
    let all2: Vec<AnnStructure> = (0..4usize)
        .map(|index| {
            let mut digits = Vec::with_capacity(slots2);
            let mut rest = index;
            for _ in 0..slots2 {
                digits.push(rest % 2);
                rest /= 2;
            }
            candidate_from_digits(&ring2, &module2, &digits)
        })
        .collect();
    let verdict2 = cross_validate(&ring2, &module2, all2.into_iter()).unwrap();
    assert_eq!(verdict2.candidates, 4);
    assert!(
        verdict2.discrepancies.is_empty(),
        "checker disagreement over Z/2: {:?}",
        verdict2.discrepancies
    );
    println!(
        "Z/2: {} candidates, {} valid by both checkers",
        verdict2.candidates, verdict2.valid_by_both
    );

    // Z/3: the free-support space holds 3^21 candidates, far beyond
    // enumeration, so the suite is every solved valid structure plus a
    // seeded sample and targeted mutations of valid ones.
    let (ring3, module3) = setup(3);
    let space = structure_search_space(&ring3, &module3);
    assert_eq!(space, BigUint::from(3u32).pow(21));
    println!("Z/3: free-support candidate space holds {space} candidates");

    let valid = solve_structures(&ring3, &module3, false, 1 << 20).unwrap();
    assert_eq!(valid.len(), 27);
    let slots3 = free_slot_count(&ring3);

    let mut suite: Vec<AnnStructure> = valid.clone();
    // Deterministic congruential sample across the digit space.
    let mut state = 0x9E3779B97F4A7C15u64;
    for _ in 0..150 {
        let digits: Vec<usize> = (0..slots3)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) as usize % 3
            })
            .collect();
        suite.push(candidate_from_digits(&ring3, &module3, &digits));
    }
    // Single-slot mutations of the first valid structures.
    for (i, f) in valid.iter().take(10).enumerate() {
        let mut digits: Vec<usize> = Vec::with_capacity(slots3);
        for (kind, slot) in STRUCTURE_KINDS.iter().zip(f.slots()) {
            digits.extend(
                free_support(*kind, &ring3).iter().map(|args| slot.at(args)),
            );
        }
        for step in 1..=2usize {
            let mut mutated = digits.clone();
            let at = (i * 7 + step * 3) % slots3;
            mutated[at] = (mutated[at] + step) % 3;
            suite.push(candidate_from_digits(&ring3, &module3, &mutated));
        }
    }
    let total = suite.len();
    let verdict3 = cross_validate(&ring3, &module3, suite.into_iter()).unwrap();
    assert_eq!(verdict3.candidates, total);
    assert!(
        verdict3.discrepancies.is_empty(),
        "checker disagreement over Z/3: {:?}",
        verdict3.discrepancies
    );
    assert!(verdict3.valid_by_both >= 27, "the solved structures must all validate");
    println!(
        "Z/3: {} candidates ({} valid by both checkers), zero disagreements",
        verdict3.candidates, verdict3.valid_by_both
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "runtime bound: took {elapsed:?}");
}

#[test]
fn criterion_3_sigma_dual_construction_agrees() {
    for n in [2usize, 3] {
        let (ring, module) = setup(n);
        let valid = solve_structures(&ring, &module, false, 1 << 20).unwrap();
        assert!(!valid.is_empty());
        for f in &valid {
            let report = sigma_report(&ring, &module, f, SigmaMethod::Diagram).unwrap();
            assert!(report.structure_valid);
            assert!(report.v10_pass, "diagram sigma violates v10 over Z/{n}");
            assert!(report.cocycle_pass, "(sigma,alpha,lambda,rho) fails v1-v10 over Z/{n}");
            assert!(report.methods_agree, "diagram and printed sigma differ over Z/{n}");
            assert!(
                report.factorizations_agree,
                "interchange factorizations differ over Z/{n}"
            );
            assert!(report.pass);
            let text = report.render_text();
            assert!(text.contains("diagram vs printed"));
            assert!(text.contains("interchange factorizations"));
        }
        println!("Z/{n}: sigma checks pass for all {} valid structures", valid.len());
    }
}

#[test]
fn criterion_4_coboundary_round_trip_over_z3_and_z4() {
    for n in [3usize, 4] {
        let (ring, module) = setup(n);
        let zero = AnnStructure::zero(&ring, &module);
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0B0 + n as u64);
        for iteration in 0..100 {
            let q = random_pair(&ring, &module, &mut rng);
            let f = apply_structure_coboundary(&ring, &module, &zero, &q).unwrap();
            assert!(structure_valid(&ring, &module, &f), "deformed base must stay valid");
            let p = random_pair(&ring, &module, &mut rng);
            let f_prime = apply_structure_coboundary(&ring, &module, &f, &p).unwrap();
            assert!(structure_valid(&ring, &module, &f_prime));
            let witness = find_witness(&ring, &module, &f, &f_prime)
                .unwrap()
                .unwrap_or_else(|| {
                    panic!("no witness over Z/{n} at iteration {iteration}")
                });
            let replayed =
                apply_structure_coboundary(&ring, &module, &f, &witness).unwrap();
            assert_eq!(replayed, f_prime, "witness replay over Z/{n} must match entrywise");
        }
        println!("Z/{n}: 100 coboundary round trips verified");
    }
}

#[test]
fn criterion_5_h3_dual_methods_agree() {
    let start = Instant::now();
    for n in [2usize, 3] {
        let (ring, module) = setup(n);
        let opts = H3Options { cross_check: true, ..H3Options::default() };
        let comp = compute_h3(&ring, &module, &opts).unwrap();
        let independent = comp.cross_check.as_ref().expect("cross-check requested");
        assert_eq!(comp.z3_order, independent.z3_order, "Z3 orders over Z/{n}");
        assert_eq!(comp.b3_order, independent.b3_order, "B3 orders over Z/{n}");
        assert_eq!(comp.h3_order, independent.h3_order, "H3 orders over Z/{n}");
        assert_eq!(
            &comp.b3_order * &comp.h3_order,
            comp.z3_order,
            "|Z3| = |B3|*|H3| over Z/{n}"
        );
        println!(
            "Z/{n}: |Z3| = {}, |B3| = {}, |H3| = {} confirmed by {}",
            comp.z3_order, comp.b3_order, comp.h3_order, independent.method
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "runtime bound: took {elapsed:?}");
}

#[test]
fn criterion_6_same_class_exactly_when_witnessed() {
    for n in [2usize, 3] {
        let (ring, module) = setup(n);
        let structures = solve_structures(&ring, &module, false, 1 << 20).unwrap();
        let comp = compute_h3(&ring, &module, &H3Options::default()).unwrap();
        let labels: Vec<Vec<u64>> = structures
            .iter()
            .map(|f| {
                let sigma = sigma_of(&ring, &module, f, SigmaMethod::Diagram);
                let quadruple = quadruple_from(f, sigma).unwrap();
                class_of(&ring, &module, &comp, &quadruple).unwrap()
            })
            .collect();

        let mut same_class = 0usize;
        let mut cross_class = 0usize;
        for i in 0..structures.len() {
            for j in (i + 1)..structures.len() {
                let witness =
                    find_witness(&ring, &module, &structures[i], &structures[j]).unwrap();
                if labels[i] == labels[j] {
                    same_class += 1;
                    assert!(
                        witness.is_some(),
                        "same-class pair ({i}, {j}) over Z/{n} lacks a witness"
                    );
                } else {
                    cross_class += 1;
                    assert!(
                        witness.is_none(),
                        "cross-class pair ({i}, {j}) over Z/{n} has a witness"
                    );
                }
            }
        }
        // H3 vanishes over Z/2 and Z/3, so every enumerable pair lies
        // in one class; the zero cross-class count is the honest
        // outcome here, and cross-class separation is exercised over
        // Z/4 where H3 has order 2.
        println!(
            "Z/{n}: {same_class} same-class pairs all witnessed, \
             {cross_class} cross-class pairs (complete list) all refuted"
        );

        let report = classify_report(&ring, &module, 1 << 20).unwrap();
        assert!(report.self_audit.pass);
        assert_eq!(report.valid_structures, structures.len());
        let label_count =
            labels.iter().collect::<std::collections::BTreeSet<_>>().len();
        assert_eq!(report.distinct_classes, label_count);
    }
}

#[test]
fn criterion_7_regular_family_is_closed() {
    for n in [2usize, 3] {
        let (ring, module) = setup(n);
        let report = classify_report(&ring, &module, 1 << 20).unwrap();
        assert!(
            report.regular.exhaustive,
            "closure check over Z/{n} must cover every pair"
        );
        assert!(
            report.regular.sums_valid_and_regular,
            "slot-wise sums of regular structures over Z/{n} must stay valid and regular"
        );
        assert!(
            report.regular.labels_closed_under_addition,
            "regular class labels over Z/{n} must be closed under class addition"
        );
        println!(
            "Z/{n}: {} regular structures, {} sum pairs checked, labels closed",
            report.regular.count, report.regular.pairs_checked
        );
    }
}

fn ring_violation_holds(ring: &FiniteRing, failure: &LawFailure) -> bool {
    let w = &failure.witness;
    match failure.law.as_str() {
        "add-assoc" => {
            ring.add(ring.add(w[0], w[1]), w[2]) != ring.add(w[0], ring.add(w[1], w[2]))
        }
        "mul-assoc" => {
            ring.mul(ring.mul(w[0], w[1]), w[2]) != ring.mul(w[0], ring.mul(w[1], w[2]))
        }
        "distrib-left" => {
            ring.mul(w[0], ring.add(w[1], w[2]))
                != ring.add(ring.mul(w[0], w[1]), ring.mul(w[0], w[2]))
        }
        "distrib-right" => {
            ring.mul(ring.add(w[0], w[1]), w[2])
                != ring.add(ring.mul(w[0], w[2]), ring.mul(w[1], w[2]))
        }
        "add-comm" => ring.add(w[0], w[1]) != ring.add(w[1], w[0]),
        "add-zero" => ring.add(0, w[0]) != w[0] || ring.add(w[0], 0) != w[0],
        "add-inverse" => (0..ring.order()).all(|b| ring.add(w[0], b) != 0),
        "mul-unit" => {
            ring.mul(ring.one(), w[0]) != w[0] || ring.mul(w[0], ring.one()) != w[0]
        }
        _ => false,
    }
}

fn module_violation_holds(ring: &FiniteRing, module: &Bimodule, failure: &LawFailure) -> bool {
    let w = &failure.witness;
    match failure.law.as_str() {
        "a" => {
            module.act_left(w[0], module.add(w[1], w[2]))
                != module.add(module.act_left(w[0], w[1]), module.act_left(w[0], w[2]))
        }
        "a'" => {
            module.act_right(module.add(w[0], w[1]), w[2])
                != module.add(module.act_right(w[0], w[2]), module.act_right(w[1], w[2]))
        }
        "b" => {
            module.act_left(ring.add(w[0], w[1]), w[2])
                != module.add(module.act_left(w[0], w[2]), module.act_left(w[1], w[2]))
        }
        "b'" => {
            module.act_right(w[0], ring.add(w[1], w[2]))
                != module.add(module.act_right(w[0], w[1]), module.act_right(w[0], w[2]))
        }
        "c" => {
            module.act_left(w[0], module.act_left(w[1], w[2]))
                != module.act_left(ring.mul(w[0], w[1]), w[2])
        }
        "c'" => {
            module.act_right(module.act_right(w[0], w[1]), w[2])
                != module.act_right(w[0], ring.mul(w[1], w[2]))
        }
        "e" => {
            module.act_right(module.act_left(w[0], w[1]), w[2])
                != module.act_left(w[0], module.act_right(w[1], w[2]))
        }
        "d" => module.act_left(ring.one(), w[0]) != w[0],
        "d'" => module.act_right(w[0], ring.one()) != w[0],
        _ => false,
    }
}

fn mutated_ring(base: &FiniteRing, table: &str, row: usize, col: usize, value: usize) -> FiniteRing {
    let mut add = base.add_table().to_vec();
    let mut mul = base.mul_table().to_vec();
    let n = base.order();
    match table {
        "add" => add[row * n + col] = value,
        "mul" => mul[row * n + col] = value,
        other => panic!("unknown table {other}"),
    }
    FiniteRing::from_tables(n, add, mul, Some(base.one())).unwrap()
}

#[test]
fn criterion_8_algebra_validators_pass_and_catch_mutations() {
    // Positive side: canonical instances validate cleanly.
    let mut rings: Vec<FiniteRing> = (2..=8).map(|n| make_cyclic_ring(n).unwrap()).collect();
    let z2 = make_cyclic_ring(2).unwrap();
    rings.push(make_product_ring(&z2, &z2).unwrap());
    for ring in &rings {
        assert!(validate_ring(ring).is_empty(), "ring of order {}", ring.order());
        let module = Bimodule::regular_bimodule(ring).unwrap();
        assert!(
            validate_bimodule(ring, &module).is_empty(),
            "regular bimodule over order {}",
            ring.order()
        );
    }

    // Ten hand-mutated ring tables; each must fail, every reported
    // witness must re-evaluate to a genuine violation, and the law the
    // mutation targets must be among those reported.
    let z4 = make_cyclic_ring(4).unwrap();
    let klein = make_product_ring(&z2, &z2).unwrap();
    let ring_cases: Vec<(FiniteRing, &str)> = vec![
        (mutated_ring(&z4, "add", 1, 2, 0), "add-comm"),
        (mutated_ring(&z4, "add", 2, 2, 1), "add-inverse"),
        (mutated_ring(&z4, "add", 0, 3, 2), "add-zero"),
        (mutated_ring(&z4, "mul", 3, 3, 0), "distrib-left"),
        (mutated_ring(&z4, "mul", 1, 2, 3), "mul-unit"),
        (mutated_ring(&z4, "mul", 2, 3, 1), "distrib-right"),
        (mutated_ring(&z4, "add", 3, 1, 3), "add-comm"),
        (mutated_ring(&z4, "mul", 2, 2, 3), "distrib-left"),
        (mutated_ring(&z4, "add", 1, 1, 1), "add-assoc"),
        (mutated_ring(&klein, "mul", klein.one(), 2, 0), "mul-unit"),
    ];
    assert_eq!(ring_cases.len(), 10);
    for (i, (ring, expected_law)) in ring_cases.iter().enumerate() {
        let failures = validate_ring(ring);
        assert!(!failures.is_empty(), "ring mutation {i} must be caught");
        assert!(
            failures.iter().any(|f| f.law == *expected_law),
            "ring mutation {i} should violate {expected_law}, got {:?}",
            failures.iter().map(|f| f.law.as_str()).collect::<Vec<_>>()
        );
        for failure in &failures {
            assert!(
                ring_violation_holds(ring, failure),
                "ring mutation {i}: witness {:?} for {} does not re-evaluate",
                failure.witness,
                failure.law
            );
        }
    }

    // Ten hand-mutated bimodule action tables, same contract.
    let (ring4, module4) = setup(4);
    let (ring3, module3) = setup(3);
    let module_cases: Vec<(&FiniteRing, Bimodule, &str)> = vec![
        (&ring4, module4.with_left_entry(1, 2, 0), "d"),
        (&ring4, module4.with_right_entry(2, 1, 0), "d'"),
        (&ring4, module4.with_left_entry(2, 1, 0), "b"),
        (&ring4, module4.with_left_entry(2, 2, 1), "a"),
        (&ring4, module4.with_right_entry(1, 2, 3), "a'"),
        (&ring4, module4.with_left_entry(3, 1, 2), "b"),
        (&ring4, module4.with_right_entry(3, 2, 1), "b'"),
        (&ring3, module3.with_left_entry(1, 1, 0), "d"),
        (&ring3, module3.with_right_entry(1, 1, 2), "d'"),
        (&ring3, module3.with_left_entry(2, 2, 0), "b"),
    ];
    assert_eq!(module_cases.len(), 10);
    for (i, (ring, module, expected_law)) in module_cases.iter().enumerate() {
        let failures = validate_bimodule(ring, module);
        assert!(!failures.is_empty(), "bimodule mutation {i} must be caught");
        assert!(
            failures.iter().any(|f| f.law == *expected_law),
            "bimodule mutation {i} should violate {expected_law}, got {:?}",
            failures.iter().map(|f| f.law.as_str()).collect::<Vec<_>>()
        );
        for failure in &failures {
            assert!(
                module_violation_holds(ring, module, failure),
                "bimodule mutation {i}: witness {:?} for {} does not re-evaluate",
                failure.witness,
                failure.law
            );
        }
    }
}
