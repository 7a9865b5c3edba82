//! Finite rings and bimodules given by operation tables. Elements are
//! indices: 0 is always the additive identity, and each ring carries the
//! index of its multiplicative unit (1 for cyclic rings, the flattened
//! pair (1,1) for product rings). Law checking is separated from table
//! construction: constructors reject malformed shapes, validators report
//! every violated law with a witness tuple.

use crate::cohomology::{smith_normal_form, Mat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Largest permitted element count for any constructed table group.
const MAX_GROUP_ORDER: u128 = 1 << 20;

/// Structural problems that make tables unusable as input (distinct from
/// law violations, which are reported by the validators).
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("{what}: expected {expected} entries, got {got}")]
    BadShape { what: &'static str, expected: usize, got: usize },
    #[error("{what}[{index}] = {value} is out of range for order {order}")]
    OutOfRange { what: &'static str, index: usize, value: usize, order: usize },
    #[error("ring order must be at least 2 (the zero ring is excluded)")]
    OrderTooSmall,
    #[error("declared unit index {0} is out of range")]
    BadUnit(usize),
    #[error("invariant factors must form a divisibility chain of integers >= 1, got {0:?}")]
    InvalidFactors(Vec<u64>),
    #[error("group order {0} exceeds the supported table size")]
    GroupTooLarge(u128),
    #[error("addition table is not an abelian group: {0}")]
    NotAbelian(String),
    #[error("scalar bimodule needs the module order to divide the ring order")]
    IncompatibleScalar,
}

/// One violated law with a re-evaluatable witness tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    /// Short law id, e.g. "add-assoc" for rings or "d" for bimodules.
    pub law: String,
    /// The law as an equation, for human-readable reports.
    pub statement: String,
    /// Element indices instantiating the violated equation.
    pub witness: Vec<usize>,
}

impl LawFailure {
    fn new(law: &str, statement: &str, witness: Vec<usize>) -> Self {
        LawFailure { law: law.to_string(), statement: statement.to_string(), witness }
    }
}

/// A finite unital ring as a pair of order x order lookup tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    order: usize,
    one: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl FiniteRing {
    /// Builds a ring from raw tables, checking shape and entry ranges
    /// only. `declared_one` fixes the unit index; when absent the tables
    /// are scanned for a two-sided unit, falling back to index 1 so the
    /// validator can still report a witness.
    pub fn from_tables(
        order: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        declared_one: Option<usize>,
    ) -> Result<FiniteRing, AlgebraError> {
        if order < 2 {
            return Err(AlgebraError::OrderTooSmall);
        }
        check_table("add", &add, order, order)?;
        check_table("mul", &mul, order, order)?;
        let one = match declared_one {
            Some(e) if e >= order => return Err(AlgebraError::BadUnit(e)),
            Some(e) => e,
            None => (0..order)
                .find(|&e| (0..order).all(|a| mul[e * order + a] == a && mul[a * order + e] == a))
                .unwrap_or(1),
        };
        Ok(FiniteRing { order, one, add, mul })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of the multiplicative unit.
    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }
}

fn check_table(
    what: &'static str,
    table: &[usize],
    rows: usize,
    cols: usize,
) -> Result<(), AlgebraError> {
    if table.len() != rows * cols {
        return Err(AlgebraError::BadShape { what, expected: rows * cols, got: table.len() });
    }
    for (index, &value) in table.iter().enumerate() {
        if value >= cols.max(rows) {
            let order = if what.starts_with("left") || what.starts_with("right") || what == "add"
            {
                cols.max(rows)
            } else {
                cols
            };
            return Err(AlgebraError::OutOfRange { what, index, value, order });
        }
    }
    Ok(())
}

fn check_values(
    what: &'static str,
    table: &[usize],
    expected_len: usize,
    value_bound: usize,
) -> Result<(), AlgebraError> {
    if table.len() != expected_len {
        return Err(AlgebraError::BadShape { what, expected: expected_len, got: table.len() });
    }
    for (index, &value) in table.iter().enumerate() {
        if value >= value_bound {
            return Err(AlgebraError::OutOfRange { what, index, value, order: value_bound });
        }
    }
    Ok(())
}

/// Z/n with the canonical residue tables.
pub fn make_cyclic_ring(n: usize) -> Result<FiniteRing, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::OrderTooSmall);
    }
    let mut add = vec![0usize; n * n];
    let mut mul = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = (a + b) % n;
            mul[a * n + b] = (a * b) % n;
        }
    }
    Ok(FiniteRing { order: n, one: 1 % n, add, mul })
}

/// Componentwise product ring; pair (a, b) flattens to a * |r2| + b, so
/// zero is index 0 and the unit is index |r2| + 1.
pub fn make_product_ring(r1: &FiniteRing, r2: &FiniteRing) -> Result<FiniteRing, AlgebraError> {
    let (n1, n2) = (r1.order(), r2.order());
    let n = n1 * n2;
    if (n as u128) > MAX_GROUP_ORDER {
        return Err(AlgebraError::GroupTooLarge(n as u128));
    }
    let mut add = vec![0usize; n * n];
    let mut mul = vec![0usize; n * n];
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            let a = a1 * n2 + a2;
            for b1 in 0..n1 {
                for b2 in 0..n2 {
                    let b = b1 * n2 + b2;
                    add[a * n + b] = r1.add(a1, b1) * n2 + r2.add(a2, b2);
                    mul[a * n + b] = r1.mul(a1, b1) * n2 + r2.mul(a2, b2);
                }
            }
        }
    }
    let one = r1.one() * n2 + r2.one();
    Ok(FiniteRing { order: n, one, add, mul })
}

/// Exhaustive check of the unital ring laws; every violation carries a
/// witness. An empty report means the tables form a finite unital ring.
pub fn validate_ring(ring: &FiniteRing) -> Vec<LawFailure> {
    let n = ring.order();
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if ring.add(ring.add(a, b), c) != ring.add(a, ring.add(b, c)) {
                    failures.push(LawFailure::new("add-assoc", "(a+b)+c = a+(b+c)", vec![a, b, c]));
                }
                if ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c)) {
                    failures.push(LawFailure::new("mul-assoc", "(ab)c = a(bc)", vec![a, b, c]));
                }
                if ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c)) {
                    failures.push(LawFailure::new(
                        "distrib-left",
                        "a(b+c) = ab+ac",
                        vec![a, b, c],
                    ));
                }
                if ring.mul(ring.add(a, b), c) != ring.add(ring.mul(a, c), ring.mul(b, c)) {
                    failures.push(LawFailure::new(
                        "distrib-right",
                        "(a+b)c = ac+bc",
                        vec![a, b, c],
                    ));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if ring.add(a, b) != ring.add(b, a) {
                failures.push(LawFailure::new("add-comm", "a+b = b+a", vec![a, b]));
            }
        }
    }
    for a in 0..n {
        if ring.add(0, a) != a || ring.add(a, 0) != a {
            failures.push(LawFailure::new("add-zero", "0+a = a+0 = a", vec![a]));
        }
        if !(0..n).any(|b| ring.add(a, b) == 0) {
            failures.push(LawFailure::new("add-inverse", "exists b with a+b = 0", vec![a]));
        }
        let e = ring.one();
        if ring.mul(e, a) != a || ring.mul(a, e) != a {
            failures.push(LawFailure::new("mul-unit", "1a = a1 = a", vec![a]));
        }
    }
    failures
}

/// A finite abelian group in invariant-factor form d_1 | d_2 | ... | d_k;
/// elements are mixed-radix indices with the leftmost factor most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

impl AbelianGroup {
    /// Factors of 1 are dropped; the remaining chain must satisfy
    /// d_i | d_{i+1}. The empty list is the trivial group.
    pub fn from_invariant_factors(factors: &[u64]) -> Result<AbelianGroup, AlgebraError> {
        if factors.contains(&0) {
            return Err(AlgebraError::InvalidFactors(factors.to_vec()));
        }
        let kept: Vec<u64> = factors.iter().copied().filter(|&d| d > 1).collect();
        for w in kept.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(AlgebraError::InvalidFactors(factors.to_vec()));
            }
        }
        let mut order: u128 = 1;
        for &d in &kept {
            order *= d as u128;
            if order > MAX_GROUP_ORDER {
                return Err(AlgebraError::GroupTooLarge(order));
            }
        }
        Ok(AbelianGroup { factors: kept, order: order as usize })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of invariant factors (generators of the canonical form).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn decode(&self, mut index: usize) -> Vec<u64> {
        debug_assert!(index < self.order);
        let mut coords = vec![0u64; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            coords[i] = (index as u64) % self.factors[i];
            index /= self.factors[i] as usize;
        }
        coords
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.factors.len());
        let mut index = 0usize;
        for (i, &c) in coords.iter().enumerate() {
            debug_assert!(c < self.factors[i]);
            index = index * self.factors[i] as usize + c as usize;
        }
        index
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let ca = self.decode(a);
        let cb = self.decode(b);
        let sum: Vec<u64> =
            ca.iter().zip(&cb).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let ca = self.decode(a);
        let n: Vec<u64> = ca.iter().zip(&self.factors).map(|(x, d)| (d - x) % d).collect();
        self.encode(&n)
    }

    /// Canonical decomposition of an addition table. Returns the group
    /// together with the isomorphism table old index -> canonical index.
    /// The table must be a finite abelian group with identity at index 0.
    pub fn from_add_table(table: &[usize]) -> Result<(AbelianGroup, Vec<usize>), AlgebraError> {
        let m = integer_sqrt(table.len());
        if m * m != table.len() || m == 0 {
            return Err(AlgebraError::BadShape {
                what: "group_add",
                expected: m * m,
                got: table.len(),
            });
        }
        check_values("group_add", table, m * m, m)?;
        let at = |a: usize, b: usize| table[a * m + b];
        for a in 0..m {
            if at(0, a) != a || at(a, 0) != a {
                return Err(AlgebraError::NotAbelian(format!("0 is not an identity at {a}")));
            }
        }
        for a in 0..m {
            for b in 0..m {
                if at(a, b) != at(b, a) {
                    return Err(AlgebraError::NotAbelian(format!(
                        "addition not commutative at ({a},{b})"
                    )));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(AlgebraError::NotAbelian(format!(
                            "addition not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        for a in 0..m {
            if !(0..m).any(|b| at(a, b) == 0) {
                return Err(AlgebraError::NotAbelian(format!("no inverse for {a}")));
            }
        }

        // Present the group on one generator per element, with relations
        // e_0 = 0 and e_a + e_b = e_{a+b}; the Smith form of the relation
        // matrix is the invariant-factor decomposition.
        let mut rel_cols: Vec<Vec<i64>> = Vec::new();
        let mut e0 = vec![0i64; m];
        e0[0] = 1;
        rel_cols.push(e0);
        for a in 0..m {
            for b in a..m {
                let mut col = vec![0i64; m];
                col[a] += 1;
                col[b] += 1;
                col[at(a, b)] -= 1;
                rel_cols.push(col);
            }
        }
        let mut rels = Mat::zeros(m, rel_cols.len());
        for (j, col) in rel_cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                rels.set(i, j, BigInt::from(v));
            }
        }
        let snf = smith_normal_form(&rels);
        let mut kept_rows: Vec<(usize, u64)> = Vec::new();
        for i in 0..m {
            let d = snf.s.get(i, i);
            if d.is_zero() {
                return Err(AlgebraError::NotAbelian(
                    "presentation has a free part, table cannot be a finite group".into(),
                ));
            }
            let d = d.to_u64().expect("invariant factor fits in u64");
            if d > 1 {
                kept_rows.push((i, d));
            }
        }
        let group = AbelianGroup::from_invariant_factors(
            &kept_rows.iter().map(|&(_, d)| d).collect::<Vec<_>>(),
        )?;
        if group.order() != m {
            return Err(AlgebraError::NotAbelian(format!(
                "decomposition order {} does not match table order {m}",
                group.order()
            )));
        }
        // Element t has canonical coordinates (U e_t)_i mod d_i over the
        // kept rows.
        let mut iso = vec![0usize; m];
        for t in 0..m {
            let coords: Vec<u64> = kept_rows
                .iter()
                .map(|&(i, d)| {
                    let v = snf.u.get(i, t).mod_floor_u64(d);
                    v
                })
                .collect();
            iso[t] = group.encode(&coords);
        }
        // The presentation map must be a bijective homomorphism.
        let mut seen = vec![false; m];
        for t in 0..m {
            if seen[iso[t]] {
                return Err(AlgebraError::NotAbelian("decomposition map is not injective".into()));
            }
            seen[iso[t]] = true;
        }
        for a in 0..m {
            for b in 0..m {
                if group.add(iso[a], iso[b]) != iso[at(a, b)] {
                    return Err(AlgebraError::NotAbelian(
                        "decomposition map is not a homomorphism".into(),
                    ));
                }
            }
        }
        Ok((group, iso))
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, d: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, d: u64) -> u64 {
        let m = self % BigInt::from(d);
        let m = if m.is_negative() { m + BigInt::from(d) } else { m };
        m.to_u64().expect("reduced residue fits in u64")
    }
}

fn integer_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// A finite bimodule over a ring: an abelian group M with a left and a
/// right ring action, all as lookup tables. Element indexing follows the
/// construction input (ring indices for the regular bimodule, canonical
/// mixed-radix indices for invariant-factor input); the canonical
/// coordinates used by the linear algebra are reached through `coords`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    ring_order: usize,
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
    group: AbelianGroup,
    to_canon: Vec<usize>,
    from_canon: Vec<usize>,
}

impl Bimodule {
    /// Group given in invariant-factor form; element indices are the
    /// canonical mixed-radix indices.
    pub fn from_invariant_factors(
        ring_order: usize,
        factors: &[u64],
        left: Vec<usize>,
        right: Vec<usize>,
    ) -> Result<Bimodule, AlgebraError> {
        let group = AbelianGroup::from_invariant_factors(factors)?;
        let m = group.order();
        let mut add = vec![0usize; m * m];
        for a in 0..m {
            for b in 0..m {
                add[a * m + b] = group.add(a, b);
            }
        }
        let identity: Vec<usize> = (0..m).collect();
        Self::assemble(ring_order, group, add, identity.clone(), identity, left, right)
    }

    /// Group given by an explicit addition table in its own indexing.
    pub fn from_group_table(
        ring_order: usize,
        add: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
    ) -> Result<Bimodule, AlgebraError> {
        let (group, to_canon) = AbelianGroup::from_add_table(&add)?;
        let m = group.order();
        let mut from_canon = vec![0usize; m];
        for (t, &c) in to_canon.iter().enumerate() {
            from_canon[c] = t;
        }
        Self::assemble(ring_order, group, add, to_canon, from_canon, left, right)
    }

    fn assemble(
        ring_order: usize,
        group: AbelianGroup,
        add: Vec<usize>,
        to_canon: Vec<usize>,
        from_canon: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
    ) -> Result<Bimodule, AlgebraError> {
        let m = group.order();
        check_values("left_action", &left, ring_order * m, m)?;
        check_values("right_action", &right, m * ring_order, m)?;
        let mut neg = vec![0usize; m];
        for a in 0..m {
            neg[a] = (0..m)
                .find(|&b| add[a * m + b] == 0)
                .expect("validated group table has inverses");
        }
        Ok(Bimodule { ring_order, order: m, add, neg, left, right, group, to_canon, from_canon })
    }

    /// The ring acting on its own additive group by multiplication;
    /// module indices coincide with ring indices.
    pub fn regular_bimodule(ring: &FiniteRing) -> Result<Bimodule, AlgebraError> {
        let n = ring.order();
        Self::from_group_table(
            n,
            ring.add_table().to_vec(),
            ring.mul_table().to_vec(),
            ring.mul_table().to_vec(),
        )
    }

    /// M = Z/m with both actions r.u = (r u mod m), defined whenever m
    /// divides the (cyclic) ring order.
    pub fn scalar_bimodule(ring_order: usize, m: u64) -> Result<Bimodule, AlgebraError> {
        if m == 0 || !ring_order.is_multiple_of(m as usize) {
            return Err(AlgebraError::IncompatibleScalar);
        }
        let mu = m as usize;
        let mut left = vec![0usize; ring_order * mu];
        let mut right = vec![0usize; mu * ring_order];
        for r in 0..ring_order {
            for u in 0..mu {
                left[r * mu + u] = (r * u) % mu;
                right[u * ring_order + r] = (u * r) % mu;
            }
        }
        Self::from_invariant_factors(ring_order, &[m], left, right)
    }

    /// The trivial module (order 1) with the only possible actions.
    pub fn trivial(ring_order: usize) -> Bimodule {
        Self::from_invariant_factors(ring_order, &[], vec![0; ring_order], vec![0; ring_order])
            .expect("trivial module is always well formed")
    }

    pub fn ring_order(&self) -> usize {
        self.ring_order
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn act_left(&self, r: usize, u: usize) -> usize {
        self.left[r * self.order + u]
    }

    #[inline]
    pub fn act_right(&self, u: usize, r: usize) -> usize {
        self.right[u * self.ring_order + r]
    }

    pub fn left_table(&self) -> &[usize] {
        &self.left
    }

    pub fn right_table(&self) -> &[usize] {
        &self.right
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    /// Canonical coordinates of an element, one per invariant factor.
    pub fn coords(&self, u: usize) -> Vec<u64> {
        self.group.decode(self.to_canon[u])
    }

    /// Element with the given canonical coordinates.
    pub fn element(&self, coords: &[u64]) -> usize {
        self.from_canon[self.group.encode(coords)]
    }

    /// Test-support copies with one action table entry changed; the
    /// group structure is kept intact so only action laws can break.
    pub fn with_left_entry(&self, r: usize, u: usize, value: usize) -> Bimodule {
        let mut out = self.clone();
        out.left[r * self.order + u] = value;
        out
    }

    pub fn with_right_entry(&self, u: usize, r: usize, value: usize) -> Bimodule {
        let mut out = self.clone();
        out.right[u * self.ring_order + r] = value;
        out
    }
}

/// Exhaustive check of the nine bimodule action laws, labeled a..e and
/// a'..d'. An empty report means the tables form an R-bimodule.
pub fn validate_bimodule(ring: &FiniteRing, module: &Bimodule) -> Vec<LawFailure> {
    let n = ring.order();
    let m = module.order();
    let mut failures = Vec::new();
    if module.ring_order() != n {
        failures.push(LawFailure::new(
            "ambient",
            "bimodule ring order matches the ring",
            vec![module.ring_order(), n],
        ));
        return failures;
    }
    // a) s(u1+u2) = su1 + su2 and a') (u1+u2)s = u1s + u2s
    for s in 0..n {
        for u1 in 0..m {
            for u2 in 0..m {
                let lhs = module.act_left(s, module.add(u1, u2));
                let rhs = module.add(module.act_left(s, u1), module.act_left(s, u2));
                if lhs != rhs {
                    failures.push(LawFailure::new("a", "s(u1+u2) = su1+su2", vec![s, u1, u2]));
                }
                let lhs = module.act_right(module.add(u1, u2), s);
                let rhs = module.add(module.act_right(u1, s), module.act_right(u2, s));
                if lhs != rhs {
                    failures.push(LawFailure::new("a'", "(u1+u2)s = u1s+u2s", vec![u1, u2, s]));
                }
            }
        }
    }
    // b) (s1+s2)u = s1u + s2u and b') u(s1+s2) = us1 + us2
    for s1 in 0..n {
        for s2 in 0..n {
            for u in 0..m {
                let lhs = module.act_left(ring.add(s1, s2), u);
                let rhs = module.add(module.act_left(s1, u), module.act_left(s2, u));
                if lhs != rhs {
                    failures.push(LawFailure::new("b", "(s1+s2)u = s1u+s2u", vec![s1, s2, u]));
                }
                let lhs = module.act_right(u, ring.add(s1, s2));
                let rhs = module.add(module.act_right(u, s1), module.act_right(u, s2));
                if lhs != rhs {
                    failures.push(LawFailure::new("b'", "u(s1+s2) = us1+us2", vec![u, s1, s2]));
                }
            }
        }
    }
    // c) s1(s2 u) = (s1 s2)u, c') (u s1)s2 = u(s1 s2), e) (s1 u)s2 = s1(u s2)
    for s1 in 0..n {
        for s2 in 0..n {
            for u in 0..m {
                let lhs = module.act_left(s1, module.act_left(s2, u));
                let rhs = module.act_left(ring.mul(s1, s2), u);
                if lhs != rhs {
                    failures.push(LawFailure::new("c", "s1(s2u) = (s1s2)u", vec![s1, s2, u]));
                }
                let lhs = module.act_right(module.act_right(u, s1), s2);
                let rhs = module.act_right(u, ring.mul(s1, s2));
                if lhs != rhs {
                    failures.push(LawFailure::new("c'", "(us1)s2 = u(s1s2)", vec![u, s1, s2]));
                }
                let lhs = module.act_right(module.act_left(s1, u), s2);
                let rhs = module.act_left(s1, module.act_right(u, s2));
                if lhs != rhs {
                    failures.push(LawFailure::new("e", "(s1 u)s2 = s1(u s2)", vec![s1, u, s2]));
                }
            }
        }
    }
    // d) 1u = u and d') u1 = u
    let e = ring.one();
    for u in 0..m {
        if module.act_left(e, u) != u {
            failures.push(LawFailure::new("d", "1u = u", vec![u]));
        }
        if module.act_right(u, e) != u {
            failures.push(LawFailure::new("d'", "u1 = u", vec![u]));
        }
    }
    failures
}
