//! Exact linear algebra over finitely generated abelian groups: integer
//! matrices with arbitrary-precision entries, Smith and Hermite normal
//! forms, solution lattices of congruence systems, group presentations
//! with kernels/images/preimages, and the degree-three cohomology
//! pipeline built on top of them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().map(BigInt::from).collect();
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j) + add;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[BigInt]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] += q * row[k]
    fn row_addmul(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * self.get(k, j);
            if !add.is_zero() {
                let v = self.get(i, j) + add;
                self.set(i, j, v);
            }
        }
    }

    /// col[j] += q * col[k]
    fn col_addmul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * self.get(i, k);
            if !add.is_zero() {
                let v = self.get(i, j) + add;
                self.set(i, j, v);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Result of a Smith normal form computation: u * a * v = s with u, v
/// unimodular and s diagonal, each diagonal entry dividing the next.
/// The inverses are accumulated alongside so callers can change basis
/// in both directions without a separate inversion step.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: Mat,
    pub s: Mat,
    pub v: Mat,
    pub u_inv: Mat,
    pub v_inv: Mat,
}

impl SnfDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).filter(|&i| !self.s.get(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smith normal form by alternating row/column elimination with a
/// divisibility fix-up pass, exact at every step.
pub fn smith_normal_form(a: &Mat) -> SnfDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut s = a.clone();
    let mut u = Mat::identity(m);
    let mut u_inv = Mat::identity(m);
    let mut v = Mat::identity(n);
    let mut v_inv = Mat::identity(n);

    for d in 0..m.min(n) {
        'pivot: loop {
            // Smallest nonzero entry of the trailing submatrix becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in d..m {
                for j in d..n {
                    if s.get(i, j).is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => s.get(i, j).abs() < s.get(bi, bj).abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            if pi != d {
                s.swap_rows(d, pi);
                u.swap_rows(d, pi);
                u_inv.swap_cols(d, pi);
            }
            if pj != d {
                s.swap_cols(d, pj);
                v.swap_cols(d, pj);
                v_inv.swap_rows(d, pj);
            }

            let mut clean = true;
            for i in d + 1..m {
                if s.get(i, d).is_zero() {
                    continue;
                }
                let q = -(s.get(i, d) / s.get(d, d));
                s.row_addmul(i, d, &q);
                u.row_addmul(i, d, &q);
                u_inv.col_addmul(d, i, &(-&q));
                if !s.get(i, d).is_zero() {
                    clean = false;
                }
            }
            for j in d + 1..n {
                if s.get(d, j).is_zero() {
                    continue;
                }
                let q = -(s.get(d, j) / s.get(d, d));
                s.col_addmul(j, d, &q);
                v.col_addmul(j, d, &q);
                v_inv.row_addmul(d, j, &(-&q));
                if !s.get(d, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Pivot must divide the rest of the submatrix for the
            // invariant-factor chain; pull a violating row up and retry.
            for i in d + 1..m {
                for j in d + 1..n {
                    if !(s.get(i, j) % s.get(d, d)).is_zero() {
                        let one = BigInt::one();
                        s.row_addmul(d, i, &one);
                        u.row_addmul(d, i, &one);
                        u_inv.col_addmul(i, d, &(-&one));
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if s.get(d, d).is_negative() {
            s.negate_row(d);
            u.negate_row(d);
            u_inv.negate_col(d);
        }
    }

    debug_assert_eq!(u.mul(a).mul(&v), s);
    SnfDecomposition { u, s, v, u_inv, v_inv }
}

/// Column-style Hermite normal form: returns h = a * w for unimodular w,
/// lower-triangular in the pivot structure with pivots positive and
/// off-pivot entries of each pivot row reduced into [0, pivot).
pub fn hnf_columns(a: &Mat) -> Mat {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut pivot_col = 0usize;
    for r in 0..m {
        if pivot_col >= n {
            break;
        }
        // Sweep row r over the active columns into a single gcd column.
        loop {
            let mut k: Option<usize> = None;
            for j in pivot_col..n {
                if h.get(r, j).is_zero() {
                    continue;
                }
                let better = match k {
                    None => true,
                    Some(kj) => h.get(r, j).abs() < h.get(r, kj).abs(),
                };
                if better {
                    k = Some(j);
                }
            }
            let Some(k) = k else { break };
            h.swap_cols(pivot_col, k);
            let mut reduced = true;
            for j in pivot_col + 1..n {
                if h.get(r, j).is_zero() {
                    continue;
                }
                let q = -(h.get(r, j) / h.get(r, pivot_col));
                h.col_addmul(j, pivot_col, &q);
                if !h.get(r, j).is_zero() {
                    reduced = false;
                }
            }
            if reduced {
                break;
            }
        }
        if h.get(r, pivot_col).is_zero() {
            continue; // row has no pivot; keep scanning lower rows
        }
        if h.get(r, pivot_col).is_negative() {
            h.negate_col(pivot_col);
        }
        // Reduce the entries left of the pivot into [0, pivot).
        for j in 0..pivot_col {
            let q = -h.get(r, j).div_floor(h.get(r, pivot_col));
            h.col_addmul(j, pivot_col, &q);
        }
        pivot_col += 1;
    }
    // Drop the all-zero columns on the right.
    let mut keep = n;
    while keep > 0 && (0..m).all(|i| h.get(i, keep - 1).is_zero()) {
        keep -= 1;
    }
    let mut out = Mat::zeros(m, keep);
    for i in 0..m {
        for j in 0..keep {
            out.set(i, j, h.get(i, j).clone());
        }
    }
    out
}

/// Solves h * y = t exactly for a square full-rank column-HNF basis h
/// (pivots on the diagonal). Returns None when t is outside the lattice.
pub fn hnf_solve(h: &Mat, t: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = h.rows();
    assert_eq!(h.cols(), n, "basis must be square");
    assert_eq!(t.len(), n);
    let mut rem: Vec<BigInt> = t.to_vec();
    let mut y = vec![BigInt::zero(); n];
    for r in 0..n {
        let p = h.get(r, r);
        let (q, s) = rem[r].div_rem(p);
        if !s.is_zero() {
            return None;
        }
        y[r] = q;
        for i in r..n {
            let v = &rem[i] - h.get(i, r) * &y[r];
            rem[i] = v;
        }
    }
    Some(y)
}

/// Canonical residue of t modulo the lattice spanned by the square
/// full-rank column-HNF basis h: the unique coset representative with
/// each pivot coordinate reduced into [0, pivot).
pub fn hnf_reduce(h: &Mat, t: &[BigInt]) -> Vec<BigInt> {
    let n = h.rows();
    assert_eq!(h.cols(), n, "basis must be square");
    let mut rem: Vec<BigInt> = t.to_vec();
    for r in 0..n {
        let q = rem[r].div_floor(h.get(r, r));
        if q.is_zero() {
            continue;
        }
        for i in r..n {
            let v = &rem[i] - h.get(i, r) * &q;
            rem[i] = v;
        }
    }
    rem
}

/// Product of the diagonal of a square HNF basis: the index of the
/// lattice in the ambient integer lattice.
pub fn hnf_index(h: &Mat) -> BigUint {
    let mut p = BigUint::one();
    for i in 0..h.rows() {
        p *= h.get(i, i).magnitude();
    }
    p
}

/// One row of a congruence system: sparse coefficients w and a modulus
/// m, constraining solutions x to w . x = 0 (mod m).
pub(crate) struct CongruenceRow {
    /// (coordinate, coefficient) entries; coordinates strictly increasing.
    pub coeffs: Vec<(usize, BigInt)>,
    pub modulus: BigInt,
}

/// Solution lattice of a list of congruence rows over Z^dim, returned
/// as a square column-HNF basis. Starts from the full lattice and
/// restricts one row at a time; rows already satisfied by the current
/// basis are skipped, which makes duplicate rows free.
pub(crate) fn congruence_kernel(dim: usize, rows: &[CongruenceRow]) -> Mat {
    let mut b = Mat::identity(dim);
    let mut since_reduce = 0usize;
    for row in rows {
        debug_assert!(row.coeffs.iter().all(|(i, _)| *i < dim));
        debug_assert!(row.modulus.is_positive());
        // wb[j] = w . (column j of b)
        let mut wb: Vec<BigInt> = (0..dim)
            .map(|j| {
                row.coeffs.iter().map(|(i, c)| c * b.get(*i, j)).sum::<BigInt>() % &row.modulus
            })
            .collect();
        if wb.iter().all(|e| e.is_zero()) {
            continue;
        }
        // Unimodular column sweep bringing wb to (g, 0, ..., 0), applied
        // to b's columns in lockstep.
        for j in 1..dim {
            if wb[j].is_zero() {
                continue;
            }
            if wb[0].is_zero() {
                b.swap_cols(0, j);
                wb.swap(0, j);
                continue;
            }
            let eg = wb[0].extended_gcd(&wb[j]);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let p = &wb[0] / &g;
            let q = &wb[j] / &g;
            for i in 0..dim {
                let c0 = b.get(i, 0).clone();
                let cj = b.get(i, j).clone();
                b.set(i, 0, &x * &c0 + &y * &cj);
                b.set(i, j, -&q * &c0 + &p * &cj);
            }
            wb[0] = g;
            wb[j] = BigInt::zero();
        }
        let g = wb[0].abs();
        let scale = &row.modulus / g.gcd(&row.modulus);
        if !scale.is_one() {
            for i in 0..dim {
                let v = b.get(i, 0) * &scale;
                b.set(i, 0, v);
            }
        }
        since_reduce += 1;
        if since_reduce >= 64 {
            b = hnf_columns(&b);
            since_reduce = 0;
        }
    }
    hnf_columns(&b)
}

use crate::algebra::{Bimodule, FiniteRing};
use crate::cochain::{free_support, from_free_values, Cochain, CochainError, CochainKind};
use crate::relations::{
    check_cocycle, coboundary_d2, coboundary_terms, for_each_instance, relation_arity,
    relation_terms, Action, AnnStructure, CochainPair, MacLaneQuadruple, Term,
    COCYCLE_CONDITION_IDS, REGULAR_RELATION_ID, STRUCTURE_RELATION_IDS,
};
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("assembly work {work} exceeds the budget {budget} ({detail})")]
    SizeRefusal { work: BigUint, budget: u64, detail: String },
    #[error("solution count {count} exceeds the budget {budget}")]
    CountRefusal { count: BigUint, budget: u64 },
    #[error("matrix does not map the domain relation lattice into the codomain relation lattice")]
    NotWellDefined,
    #[error("operation requires a finite presentation")]
    NotFinite,
    #[error("quadruple fails the cocycle conditions: {0}")]
    NotCocycle(String),
    #[error("no independent cross-check method applies at this size")]
    CrossCheckUnavailable,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// Finitely generated abelian group presented by a generator count and
/// a relation lattice spanned by matrix columns.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    rank: usize,
    relations: Mat,
    relations_hnf: Mat,
    finite: bool,
}

impl GroupPresentation {
    pub fn new(rank: usize, relations: Mat) -> GroupPresentation {
        assert_eq!(relations.rows(), rank, "relation columns live in Z^rank");
        let relations_hnf = hnf_columns(&relations);
        let finite = relations_hnf.cols() == rank;
        GroupPresentation { rank, relations, relations_hnf, finite }
    }

    /// Product of cyclic groups of the given orders.
    pub fn diagonal(orders: &[BigInt]) -> GroupPresentation {
        assert!(orders.iter().all(|d| d.is_positive()), "cyclic orders are positive");
        GroupPresentation::new(orders.len(), Mat::diag(orders))
    }

    /// Free abelian group of the given rank.
    pub fn free(rank: usize) -> GroupPresentation {
        GroupPresentation::new(rank, Mat::zeros(rank, 0))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Mat {
        &self.relations
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn order(&self) -> Option<BigUint> {
        self.finite.then(|| hnf_index(&self.relations_hnf))
    }

    /// Canonical residue of an element vector modulo the relation
    /// lattice. Finite presentations only.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert!(self.finite, "reduction needs a full-rank relation lattice");
        hnf_reduce(&self.relations_hnf, v)
    }

    /// Whether v lies in the relation lattice itself.
    pub fn lattice_contains(&self, v: &[BigInt]) -> bool {
        if self.finite {
            hnf_solve(&self.relations_hnf, v).is_some()
        } else if self.relations_hnf.cols() == 0 {
            v.iter().all(|e| e.is_zero())
        } else {
            // Partial-rank lattices: reduce against the available pivots
            // and accept only an exact kill.
            let mut rem = v.to_vec();
            for j in 0..self.relations_hnf.cols() {
                let pivot_row = (0..self.rank)
                    .find(|&i| !self.relations_hnf.get(i, j).is_zero())
                    .expect("hnf columns are nonzero");
                let q = &rem[pivot_row] / self.relations_hnf.get(pivot_row, j);
                for i in 0..self.rank {
                    let upd = &rem[i] - self.relations_hnf.get(i, j) * &q;
                    rem[i] = upd;
                }
            }
            rem.iter().all(|e| e.is_zero())
        }
    }

    pub fn eq_elements(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.lattice_contains(&diff)
    }
}

/// A homomorphism between presented groups, stored as an integer matrix
/// on generator coordinates; well-definedness is checked when built.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    domain: GroupPresentation,
    codomain: GroupPresentation,
    matrix: Mat,
}

impl Homomorphism {
    pub fn new(
        domain: GroupPresentation,
        codomain: GroupPresentation,
        matrix: Mat,
    ) -> Result<Homomorphism, LinearError> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(LinearError::NotWellDefined);
        }
        for j in 0..domain.relations.cols() {
            let image = matrix.mul_vec(&domain.relations.column(j));
            if !codomain.lattice_contains(&image) {
                return Err(LinearError::NotWellDefined);
            }
        }
        Ok(Homomorphism { domain, codomain, matrix })
    }

    pub fn domain(&self) -> &GroupPresentation {
        &self.domain
    }

    pub fn codomain(&self) -> &GroupPresentation {
        &self.codomain
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// Image of an element, reduced to the canonical codomain residue.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.codomain.reduce(&self.matrix.mul_vec(x))
    }
}

/// A subgroup of a presented group: its own presentation plus the
/// embedding matrix sending subgroup coordinates to ambient ones.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub embedding: Mat,
    pub group: GroupPresentation,
}

impl Subgroup {
    pub fn order(&self) -> Option<BigUint> {
        self.group.order()
    }
}

/// Kernel and image of a homomorphism between finite presented groups,
/// each with an explicit embedding.
pub fn kernel_image(h: &Homomorphism) -> Result<(Subgroup, Subgroup), LinearError> {
    if !h.domain.finite || !h.codomain.finite {
        return Err(LinearError::NotFinite);
    }
    let n = h.domain.rank();
    let m = h.codomain.rank();

    // Diagonalize the codomain so each coordinate is one congruence.
    let snf_c = smith_normal_form(&h.codomain.relations_hnf);
    let a_prime = snf_c.u.mul(&h.matrix);
    let rows: Vec<CongruenceRow> = (0..m)
        .map(|i| {
            let coeffs = (0..n)
                .filter(|&j| !a_prime.get(i, j).is_zero())
                .map(|j| (j, a_prime.get(i, j).clone()))
                .collect();
            CongruenceRow { coeffs, modulus: snf_c.s.get(i, i).abs() }
        })
        .filter(|r| !r.coeffs.is_empty())
        .collect();
    let k = congruence_kernel(n, &rows);

    let mut kernel_relations = Mat::zeros(n, n);
    for j in 0..n {
        let col = hnf_solve(&k, &h.domain.relations_hnf.column(j)).ok_or_else(|| {
            LinearError::Inconsistent("domain relations escape the kernel lattice".into())
        })?;
        for i in 0..n {
            kernel_relations.set(i, j, col[i].clone());
        }
    }
    let kernel = Subgroup { embedding: k, group: GroupPresentation::new(n, kernel_relations) };

    let image_basis = hnf_columns(&h.matrix.hstack(&h.codomain.relations_hnf));
    let mut image_relations = Mat::zeros(m, m);
    for j in 0..m {
        let col = hnf_solve(&image_basis, &h.codomain.relations_hnf.column(j))
            .expect("codomain relations lie inside the image lattice");
        for i in 0..m {
            image_relations.set(i, j, col[i].clone());
        }
    }
    let image =
        Subgroup { embedding: image_basis, group: GroupPresentation::new(m, image_relations) };
    Ok((kernel, image))
}

/// Solves h(x) = target modulo the codomain relations; the returned
/// preimage is the canonical domain residue.
pub fn solve_preimage(h: &Homomorphism, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(target.len(), h.codomain.rank());
    let n = h.domain.rank();
    let stacked = h.matrix.hstack(&h.codomain.relations_hnf);
    let snf = smith_normal_form(&stacked);
    let t = snf.u.mul_vec(target);
    let cols = stacked.cols();
    let mut y = vec![BigInt::zero(); cols];
    for (i, ti) in t.iter().enumerate() {
        let d = if i < cols.min(stacked.rows()) { snf.s.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ti.is_zero() {
                return None;
            }
            continue;
        }
        let (q, r) = ti.div_rem(&d);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let full = snf.v.mul_vec(&y);
    let x: Vec<BigInt> = full[..n].to_vec();
    let x = if h.domain.finite { h.domain.reduce(&x) } else { x };
    debug_assert!(h
        .codomain
        .eq_elements(&h.matrix.mul_vec(&x), target));
    Some(x)
}

/// Coordinate chart for a product of cochain tables restricted to free
/// supports: one block of `g` integer coordinates per free tuple, in
/// slot order then lexicographic tuple order, where `g` is the module's
/// invariant-factor rank.
#[derive(Debug, Clone)]
pub(crate) struct CoordLayout {
    kinds: Vec<CochainKind>,
    free: Vec<Vec<Vec<usize>>>,
    offsets: Vec<usize>,
    g: usize,
    factor_orders: Vec<u64>,
    tuple_total: usize,
    ring_one: usize,
}

impl CoordLayout {
    pub(crate) fn new(ring: &FiniteRing, module: &Bimodule, kinds: &[CochainKind]) -> CoordLayout {
        let g = module.group().rank();
        let factor_orders = module.group().factors().to_vec();
        let mut free = Vec::with_capacity(kinds.len());
        let mut offsets = Vec::with_capacity(kinds.len());
        let mut total = 0usize;
        for &kind in kinds {
            offsets.push(total);
            let support = free_support(kind, ring);
            total += support.len();
            free.push(support);
        }
        CoordLayout {
            kinds: kinds.to_vec(),
            free,
            offsets,
            g,
            factor_orders,
            tuple_total: total,
            ring_one: ring.one(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.tuple_total * self.g
    }

    pub(crate) fn moduli(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.dim());
        for _ in 0..self.tuple_total {
            v.extend(self.factor_orders.iter().map(|&d| BigInt::from(d)));
        }
        v
    }

    pub(crate) fn total_order(&self) -> BigUint {
        let mut p = BigUint::one();
        for m in self.moduli() {
            p *= m.magnitude();
        }
        p
    }

    /// First coordinate of the block for a tuple, or None when the
    /// tuple is pinned to zero by normalization.
    fn coord_base(&self, kind: CochainKind, args: &[usize]) -> Option<usize> {
        let ki = self
            .kinds
            .iter()
            .position(|&k| k == kind)
            .expect("term references a slot outside this chart");
        match self.free[ki].binary_search_by(|t| t.as_slice().cmp(args)) {
            Ok(idx) => Some((self.offsets[ki] + idx) * self.g),
            Err(_) => {
                debug_assert!(kind.forced_zero(args, self.ring_one));
                None
            }
        }
    }

    /// Canonical integer coordinates of concrete tables, given in the
    /// chart's slot order.
    pub(crate) fn vec_of(&self, module: &Bimodule, slots: &[&Cochain]) -> Vec<BigInt> {
        assert_eq!(slots.len(), self.kinds.len());
        let mut v = Vec::with_capacity(self.dim());
        for (ki, tuples) in self.free.iter().enumerate() {
            debug_assert_eq!(slots[ki].kind, self.kinds[ki]);
            for t in tuples {
                v.extend(module.coords(slots[ki].at(t)).into_iter().map(BigInt::from));
            }
        }
        v
    }

    /// Rebuilds one table per slot from a canonical residue vector.
    pub(crate) fn value_tables(
        &self,
        ring: &FiniteRing,
        module: &Bimodule,
        residue: &[BigInt],
    ) -> Vec<Cochain> {
        assert_eq!(residue.len(), self.dim());
        let mut out = Vec::with_capacity(self.kinds.len());
        for (ki, tuples) in self.free.iter().enumerate() {
            let mut values = Vec::with_capacity(tuples.len());
            for ti in 0..tuples.len() {
                let base = (self.offsets[ki] + ti) * self.g;
                let coords: Vec<u64> = (0..self.g)
                    .map(|fj| {
                        residue[base + fj]
                            .to_u64()
                            .expect("residue coordinates are canonical")
                    })
                    .collect();
                values.push(module.element(&coords));
            }
            out.push(
                from_free_values(self.kinds[ki], ring, module, &values)
                    .expect("free values build a normalized table"),
            );
        }
        out
    }
}

/// Coordinate-wise canonical residue modulo a diagonal lattice.
fn canonical_residue(moduli: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    v.iter().zip(moduli).map(|(x, m)| x.mod_floor(m)).collect()
}

/// Per-ring-element matrices of the two module actions on canonical
/// group coordinates, built on demand.
struct ActionCache<'a> {
    module: &'a Bimodule,
    left: Vec<Option<Mat>>,
    right: Vec<Option<Mat>>,
}

impl<'a> ActionCache<'a> {
    fn new(ring: &FiniteRing, module: &'a Bimodule) -> Self {
        ActionCache {
            module,
            left: vec![None; ring.order()],
            right: vec![None; ring.order()],
        }
    }

    fn matrix(&mut self, action: Action) -> Option<&Mat> {
        let (slot, r, is_left) = match action {
            Action::None => return None,
            Action::Left(r) => (&mut self.left, r, true),
            Action::Right(r) => (&mut self.right, r, false),
        };
        let module = self.module;
        Some(slot[r].get_or_insert_with(|| {
            let g = module.group().rank();
            let mut a = Mat::zeros(g, g);
            for j in 0..g {
                let mut unit = vec![0u64; g];
                unit[j] = 1;
                let generator = module.element(&unit);
                let image = if is_left {
                    module.act_left(r, generator)
                } else {
                    module.act_right(generator, r)
                };
                for (i, c) in module.coords(image).into_iter().enumerate() {
                    a.set(i, j, BigInt::from(c));
                }
            }
            a
        }))
    }
}

/// Adds one signed term's contribution to a sparse block of `g`
/// congruence rows: block maps a chart coordinate to the column of
/// codomain-factor coefficients it receives.
fn accumulate_term(
    layout: &CoordLayout,
    cache: &mut ActionCache,
    term: &Term,
    scale: i64,
    block: &mut BTreeMap<usize, Vec<BigInt>>,
) {
    let Some(base) = layout.coord_base(term.kind, &term.args) else {
        return;
    };
    let g = layout.g;
    let sign = BigInt::from(i64::from(term.sign) * scale);
    match cache.matrix(term.action) {
        None => {
            for j in 0..g {
                let col = block.entry(base + j).or_insert_with(|| vec![BigInt::zero(); g]);
                col[j] += &sign;
            }
        }
        Some(a) => {
            for j in 0..g {
                let mut touched = false;
                for i in 0..g {
                    if !a.get(i, j).is_zero() {
                        touched = true;
                        break;
                    }
                }
                if !touched {
                    continue;
                }
                let col = block.entry(base + j).or_insert_with(|| vec![BigInt::zero(); g]);
                for i in 0..g {
                    if !a.get(i, j).is_zero() {
                        col[i] += &sign * a.get(i, j);
                    }
                }
            }
        }
    }
}

/// Sparse congruence rows of the named homogeneous conditions over the
/// chart's free coordinates: one row per condition instance per module
/// invariant factor.
pub(crate) fn condition_rows(
    ring: &FiniteRing,
    module: &Bimodule,
    layout: &CoordLayout,
    ids: &[&str],
) -> Vec<CongruenceRow> {
    let mut cache = ActionCache::new(ring, module);
    let mut rows = Vec::new();
    for id in ids {
        for_each_instance(ring, id, |args| {
            let (lhs, rhs) = relation_terms(ring, id, args);
            let mut block: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
            for term in &lhs {
                accumulate_term(layout, &mut cache, term, 1, &mut block);
            }
            for term in &rhs {
                accumulate_term(layout, &mut cache, term, -1, &mut block);
            }
            for fi in 0..layout.g {
                let coeffs: Vec<(usize, BigInt)> = block
                    .iter()
                    .filter(|(_, col)| !col[fi].is_zero())
                    .map(|(&coord, col)| (coord, col[fi].clone()))
                    .collect();
                if !coeffs.is_empty() {
                    rows.push(CongruenceRow {
                        coeffs,
                        modulus: BigInt::from(layout.factor_orders[fi]),
                    });
                }
            }
        });
    }
    rows
}

/// Dense matrix of a coboundary-style linear map between charts, built
/// from per-target-tuple term expansions.
pub(crate) fn coboundary_chart_matrix(
    ring: &FiniteRing,
    module: &Bimodule,
    target: &CoordLayout,
    source: &CoordLayout,
) -> Mat {
    let mut m = Mat::zeros(target.dim(), source.dim());
    let mut cache = ActionCache::new(ring, module);
    let g = target.g;
    for (ki, tuples) in target.free.iter().enumerate() {
        for (ti, tuple) in tuples.iter().enumerate() {
            let row_base = (target.offsets[ki] + ti) * g;
            for term in coboundary_terms(ring, target.kinds[ki], tuple) {
                let Some(col_base) = source.coord_base(term.kind, &term.args) else {
                    continue;
                };
                let sign = BigInt::from(i64::from(term.sign));
                match cache.matrix(term.action) {
                    None => {
                        for j in 0..g {
                            let v = m.get(row_base + j, col_base + j) + &sign;
                            m.set(row_base + j, col_base + j, v);
                        }
                    }
                    Some(a) => {
                        for j in 0..g {
                            for i in 0..g {
                                if !a.get(i, j).is_zero() {
                                    let v =
                                        m.get(row_base + i, col_base + j) + &sign * a.get(i, j);
                                    m.set(row_base + i, col_base + j, v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

/// Upper bound on assembly work for a condition system: total instance
/// rows times the chart dimension.
fn assembly_work(ring: &FiniteRing, layout: &CoordLayout, ids: &[&str]) -> BigUint {
    let n = BigUint::from(ring.order());
    let mut rows = BigUint::zero();
    for id in ids {
        rows += n.pow(relation_arity(id) as u32) * BigUint::from(layout.g);
    }
    rows * BigUint::from(layout.dim().max(1))
}

const QUADRUPLE_KINDS: [CochainKind; 4] =
    [CochainKind::Sigma, CochainKind::Alpha, CochainKind::Lambda, CochainKind::Rho];
const STRUCTURE_KINDS: [CochainKind; 5] = [
    CochainKind::Xi,
    CochainKind::Eta,
    CochainKind::Alpha,
    CochainKind::Lambda,
    CochainKind::Rho,
];
const PAIR_KINDS: [CochainKind; 2] = [CochainKind::Mu, CochainKind::Nu];

/// Tuning knobs for the degree-three computation.
#[derive(Debug, Clone)]
pub struct H3Options {
    /// Emit one representative per class when the class count is at
    /// most this.
    pub representative_cap: u64,
    /// Refuse assemblies whose estimated work exceeds this.
    pub work_budget: u64,
    /// Re-derive the orders by an independent method and compare.
    pub cross_check: bool,
}

impl Default for H3Options {
    fn default() -> Self {
        H3Options { representative_cap: 64, work_budget: 200_000_000, cross_check: false }
    }
}

/// Orders computed by an independent method, for comparison against the
/// normal-form pipeline.
#[derive(Debug, Clone)]
pub struct IndependentH3 {
    pub method: &'static str,
    pub z3_order: BigUint,
    pub b3_order: BigUint,
    pub h3_order: BigUint,
}

/// One cohomology class: its canonical label and a representative.
#[derive(Debug, Clone)]
pub struct H3Representative {
    pub class: Vec<u64>,
    pub quadruple: MacLaneQuadruple,
}

/// The degree-three cohomology of a ring with bimodule coefficients,
/// with enough context retained to classify further cocycles.
#[derive(Debug, Clone)]
pub struct H3Computation {
    pub ring_order: usize,
    pub module_order: usize,
    /// Chart dimension of the cocycle-candidate group.
    pub c3_rank: usize,
    pub z3_order: BigUint,
    pub b3_order: BigUint,
    pub h3_order: BigUint,
    /// Invariant factors greater than one, in divisibility order.
    pub invariant_factors: Vec<BigUint>,
    pub representatives: Option<Vec<H3Representative>>,
    pub cross_check: Option<IndependentH3>,
    layout: CoordLayout,
    kernel_basis: Mat,
    u_x: Mat,
    s_diag: Vec<BigInt>,
}

impl H3Computation {
    pub fn class_count(&self) -> &BigUint {
        &self.h3_order
    }
}

/// Computes H3 = Z3/B3: the kernel of the stacked cocycle-condition
/// system over the free quadruple coordinates, modulo the image of the
/// degree-two coboundary, both as lattices between the coordinate
/// lattice and its relation sublattice.
pub fn compute_h3(
    ring: &FiniteRing,
    module: &Bimodule,
    opts: &H3Options,
) -> Result<H3Computation, LinearError> {
    let layout = CoordLayout::new(ring, module, &QUADRUPLE_KINDS);
    let pair_layout = CoordLayout::new(ring, module, &PAIR_KINDS);
    let dim = layout.dim();

    let ids: Vec<&str> = COCYCLE_CONDITION_IDS.to_vec();
    let work = assembly_work(ring, &layout, &ids);
    if work > BigUint::from(opts.work_budget) {
        return Err(LinearError::SizeRefusal {
            work,
            budget: opts.work_budget,
            detail: format!("cocycle system over a chart of dimension {dim}"),
        });
    }

    let rows = condition_rows(ring, module, &layout, &ids);
    let kernel_basis = congruence_kernel(dim, &rows);
    let d2 = coboundary_chart_matrix(ring, module, &layout, &pair_layout);

    // Structural containment: every condition row annihilates every
    // coboundary generator, i.e. the condition system composed with the
    // degree-two coboundary is the zero map.
    for (ri, row) in rows.iter().enumerate() {
        for c in 0..d2.cols() {
            let dot: BigInt = row.coeffs.iter().map(|(i, v)| v * d2.get(*i, c)).sum();
            if !dot.mod_floor(&row.modulus).is_zero() {
                return Err(LinearError::Inconsistent(format!(
                    "coboundary generator {c} violates condition row {ri}"
                )));
            }
        }
    }

    let moduli = layout.moduli();
    let total = layout.total_order();
    let bhat = hnf_columns(&d2.hstack(&Mat::diag(&moduli)));
    debug_assert_eq!(bhat.cols(), dim);

    let mut x = Mat::zeros(dim, dim);
    for j in 0..dim {
        let col = hnf_solve(&kernel_basis, &bhat.column(j)).ok_or_else(|| {
            LinearError::Inconsistent(
                "a coboundary lattice generator escapes the cocycle lattice".into(),
            )
        })?;
        for i in 0..dim {
            x.set(i, j, col[i].clone());
        }
    }
    let snf_x = smith_normal_form(&x);
    let s_diag = snf_x.diagonal();

    let z3_order = &total / hnf_index(&kernel_basis);
    let b3_order = &total / hnf_index(&bhat);
    let mut h3_order = BigUint::one();
    for d in &s_diag {
        h3_order *= d.magnitude();
    }
    if z3_order != &b3_order * &h3_order {
        return Err(LinearError::Inconsistent(format!(
            "order bookkeeping broke: |Z3| = {z3_order}, |B3| = {b3_order}, |H3| = {h3_order}"
        )));
    }
    let invariant_factors: Vec<BigUint> =
        s_diag.iter().filter(|d| **d > BigInt::one()).map(|d| d.magnitude().clone()).collect();

    let representatives = if h3_order <= BigUint::from(opts.representative_cap) {
        let nontrivial: Vec<(usize, u64)> = s_diag
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > BigInt::one())
            .map(|(i, d)| (i, d.to_u64().expect("class count fits in u64")))
            .collect();
        let mut reps = Vec::new();
        let mut digits = vec![0u64; nontrivial.len()];
        loop {
            let mut z = vec![BigInt::zero(); dim];
            for (pos, &(idx, _)) in nontrivial.iter().enumerate() {
                z[idx] = BigInt::from(digits[pos]);
            }
            let y = snf_x.u_inv.mul_vec(&z);
            let vec = kernel_basis.mul_vec(&y);
            let residue = canonical_residue(&moduli, &vec);
            let tables = layout.value_tables(ring, module, &residue);
            let mut it = tables.into_iter();
            let quadruple = MacLaneQuadruple::new(
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            )?;
            reps.push(H3Representative { class: digits.clone(), quadruple });
            // Odometer over the invariant-factor digits.
            let mut carry = true;
            for (pos, &(_, order)) in nontrivial.iter().enumerate() {
                if !carry {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] == order {
                    digits[pos] = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
        Some(reps)
    } else {
        None
    };

    let cross_check = if opts.cross_check {
        let brute_limit = 1u64 << 16;
        let feasible_brute = layout.total_order() <= BigUint::from(brute_limit)
            && pair_layout.total_order() <= BigUint::from(brute_limit);
        let independent = if feasible_brute {
            h3_brute_force(ring, module, brute_limit)?
        } else if let Some(by_rank) = h3_prime_rank(ring, module) {
            by_rank
        } else {
            return Err(LinearError::CrossCheckUnavailable);
        };
        if independent.z3_order != z3_order
            || independent.b3_order != b3_order
            || independent.h3_order != h3_order
        {
            return Err(LinearError::Inconsistent(format!(
                "{} disagrees: |Z3| {} vs {}, |B3| {} vs {}, |H3| {} vs {}",
                independent.method,
                independent.z3_order,
                z3_order,
                independent.b3_order,
                b3_order,
                independent.h3_order,
                h3_order
            )));
        }
        Some(independent)
    } else {
        None
    };

    Ok(H3Computation {
        ring_order: ring.order(),
        module_order: module.order(),
        c3_rank: dim,
        z3_order,
        b3_order,
        h3_order,
        invariant_factors,
        representatives,
        cross_check,
        layout,
        kernel_basis,
        u_x: snf_x.u,
        s_diag,
    })
}

/// Canonical class label of a cocycle: the digits of its coset in the
/// adapted basis, one per nontrivial invariant factor.
pub fn class_of(
    ring: &FiniteRing,
    module: &Bimodule,
    computed: &H3Computation,
    q: &MacLaneQuadruple,
) -> Result<Vec<u64>, LinearError> {
    if q.ring_order() != computed.ring_order || q.module_order() != computed.module_order {
        return Err(LinearError::Cochain(CochainError::Mismatch(format!(
            "quadruple is over ({}, {}) but the computation is over ({}, {})",
            q.ring_order(),
            q.module_order(),
            computed.ring_order,
            computed.module_order
        ))));
    }
    let report = check_cocycle(ring, module, q)?;
    if !report.pass() {
        return Err(LinearError::NotCocycle(report.failing_ids().join(", ")));
    }
    let vec = computed.layout.vec_of(module, &q.slots());
    let y = hnf_solve(&computed.kernel_basis, &vec).ok_or_else(|| {
        LinearError::Inconsistent("cocycle escapes the computed cocycle lattice".into())
    })?;
    let z = computed.u_x.mul_vec(&y);
    Ok(computed
        .s_diag
        .iter()
        .zip(&z)
        .filter(|(d, _)| **d > BigInt::one())
        .map(|(d, zi)| zi.mod_floor(d).to_u64().expect("digit fits"))
        .collect())
}

/// Independent order computation by exhaustive enumeration: counts
/// cocycles directly and distinct coboundaries directly.
pub fn h3_brute_force(
    ring: &FiniteRing,
    module: &Bimodule,
    limit: u64,
) -> Result<IndependentH3, LinearError> {
    let layout = CoordLayout::new(ring, module, &QUADRUPLE_KINDS);
    let pair_layout = CoordLayout::new(ring, module, &PAIR_KINDS);
    for chart in [&layout, &pair_layout] {
        let total = chart.total_order();
        if total > BigUint::from(limit) {
            return Err(LinearError::CountRefusal { count: total, budget: limit });
        }
    }
    let moduli = layout.moduli();
    let mut z3 = BigUint::zero();
    let mut digits = vec![BigInt::zero(); layout.dim()];
    loop {
        let tables = layout.value_tables(ring, module, &digits);
        let mut it = tables.into_iter();
        let q = MacLaneQuadruple::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )?;
        if check_cocycle(ring, module, &q)?.pass() {
            z3 += BigUint::one();
        }
        if !advance(&mut digits, &moduli) {
            break;
        }
    }

    let pair_moduli = pair_layout.moduli();
    let mut images = std::collections::BTreeSet::new();
    let mut digits = vec![BigInt::zero(); pair_layout.dim()];
    loop {
        let tables = pair_layout.value_tables(ring, module, &digits);
        let mut it = tables.into_iter();
        let pair = CochainPair::new(it.next().unwrap(), it.next().unwrap())?;
        let image = coboundary_d2(ring, module, &pair)?;
        let key: Vec<usize> = image
            .slots()
            .iter()
            .flat_map(|c| c.values.iter().copied())
            .collect();
        images.insert(key);
        if !advance(&mut digits, &pair_moduli) {
            break;
        }
    }
    let b3 = BigUint::from(images.len());
    let (h3, rem) = z3.div_rem(&b3);
    if !rem.is_zero() {
        return Err(LinearError::Inconsistent(
            "cocycle count is not a multiple of the coboundary count".into(),
        ));
    }
    Ok(IndependentH3 { method: "brute-force", z3_order: z3, b3_order: b3, h3_order: h3 })
}

/// Mixed-radix odometer; returns false after the last combination.
fn advance(digits: &mut [BigInt], moduli: &[BigInt]) -> bool {
    for (d, m) in digits.iter_mut().zip(moduli) {
        *d += 1;
        if d == m {
            *d = BigInt::zero();
        } else {
            return true;
        }
    }
    false
}

fn small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank of a matrix over the prime field F_p, by Gaussian elimination.
fn gf_rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let inv = |a: u64| -> u64 {
        // Fermat inverse; p is a small prime.
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inv(rows[rank][c]);
        for v in rows[rank].iter_mut() {
            *v = *v * scale % p;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_multiple_of(p) {
                let factor = rows[r][c];
                for cc in 0..cols {
                    let sub = factor * rows[rank][cc] % p;
                    rows[r][cc] = (rows[r][cc] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Independent order computation over an elementary abelian module:
/// F_p ranks of the condition system and of the coboundary matrix.
/// Returns None when the module is not a vector space over a prime.
pub fn h3_prime_rank(ring: &FiniteRing, module: &Bimodule) -> Option<IndependentH3> {
    let factors = module.group().factors();
    let &p = factors.first()?;
    if !small_prime(p) || factors.iter().any(|&d| d != p) {
        return None;
    }
    let layout = CoordLayout::new(ring, module, &QUADRUPLE_KINDS);
    let pair_layout = CoordLayout::new(ring, module, &PAIR_KINDS);
    let dim = layout.dim();

    let rows = condition_rows(ring, module, &layout, &COCYCLE_CONDITION_IDS);
    let dense: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut v = vec![0u64; dim];
            for (i, c) in &row.coeffs {
                v[*i] = c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
            }
            v
        })
        .collect();
    let rank_conditions = gf_rank(p, dense);
    let z3_order = BigUint::from(p).pow((dim - rank_conditions) as u32);

    let d2 = coboundary_chart_matrix(ring, module, &layout, &pair_layout);
    let dense_d2: Vec<Vec<u64>> = (0..d2.rows())
        .map(|i| {
            (0..d2.cols())
                .map(|j| d2.get(i, j).mod_floor(&BigInt::from(p)).to_u64().expect("reduced"))
                .collect()
        })
        .collect();
    let rank_d2 = gf_rank(p, dense_d2);
    let b3_order = BigUint::from(p).pow(rank_d2 as u32);
    let h3_order = BigUint::from(p).pow((dim - rank_conditions - rank_d2) as u32);
    Some(IndependentH3 { method: "prime-rank", z3_order, b3_order, h3_order })
}

/// All structures over (R, M) that satisfy the seventeen structure
/// relations (optionally also the regularity relation), found as the
/// solution lattice of the stacked congruence system, sorted by their
/// flattened value tables.
pub fn solve_structures(
    ring: &FiniteRing,
    module: &Bimodule,
    regular: bool,
    budget: u64,
) -> Result<Vec<AnnStructure>, LinearError> {
    let layout = CoordLayout::new(ring, module, &STRUCTURE_KINDS);
    let mut ids: Vec<&str> = STRUCTURE_RELATION_IDS.to_vec();
    if regular {
        ids.push(REGULAR_RELATION_ID);
    }
    let work = assembly_work(ring, &layout, &ids);
    let default_budget = H3Options::default().work_budget;
    if work > BigUint::from(default_budget) {
        return Err(LinearError::SizeRefusal {
            work,
            budget: default_budget,
            detail: format!("structure system over a chart of dimension {}", layout.dim()),
        });
    }
    let dim = layout.dim();
    let rows = condition_rows(ring, module, &layout, &ids);
    let kernel_basis = congruence_kernel(dim, &rows);
    let moduli = layout.moduli();
    let count = layout.total_order() / hnf_index(&kernel_basis);
    if count > BigUint::from(budget) {
        return Err(LinearError::CountRefusal { count, budget });
    }

    // Cosets of the relation lattice inside the solution lattice.
    let mut t = Mat::zeros(dim, dim);
    for j in 0..dim {
        let mut scaled = vec![BigInt::zero(); dim];
        scaled[j] = moduli[j].clone();
        let col = hnf_solve(&kernel_basis, &scaled).ok_or_else(|| {
            LinearError::Inconsistent("relation lattice escapes the solution lattice".into())
        })?;
        for i in 0..dim {
            t.set(i, j, col[i].clone());
        }
    }
    let snf_t = smith_normal_form(&t);
    let nontrivial: Vec<(usize, u64)> = snf_t
        .diagonal()
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > BigInt::one())
        .map(|(i, d)| (i, d.to_u64().expect("solution count fits")))
        .collect();

    let mut out = Vec::new();
    let mut digits = vec![0u64; nontrivial.len()];
    loop {
        let mut z = vec![BigInt::zero(); dim];
        for (pos, &(idx, _)) in nontrivial.iter().enumerate() {
            z[idx] = BigInt::from(digits[pos]);
        }
        let y = snf_t.u_inv.mul_vec(&z);
        let vec = kernel_basis.mul_vec(&y);
        let residue = canonical_residue(&moduli, &vec);
        let tables = layout.value_tables(ring, module, &residue);
        let mut it = tables.into_iter();
        out.push(AnnStructure::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )?);
        let mut carry = true;
        for (pos, &(_, order)) in nontrivial.iter().enumerate() {
            if !carry {
                break;
            }
            digits[pos] += 1;
            if digits[pos] == order {
                digits[pos] = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }
    debug_assert_eq!(BigUint::from(out.len()), count);
    out.sort_by(|a, b| {
        let key = |f: &AnnStructure| -> Vec<usize> {
            f.slots().iter().flat_map(|c| c.values.iter().copied()).collect()
        };
        key(a).cmp(&key(b))
    });
    Ok(out)
}

/// The degree-two coboundary into structure space, as a homomorphism
/// from the free (mu, nu) chart to the free five-slot structure chart.
pub fn structure_coboundary_hom(ring: &FiniteRing, module: &Bimodule) -> Homomorphism {
    let source = CoordLayout::new(ring, module, &PAIR_KINDS);
    let target = CoordLayout::new(ring, module, &STRUCTURE_KINDS);
    let matrix = coboundary_chart_matrix(ring, module, &target, &source);
    Homomorphism::new(
        GroupPresentation::diagonal(&source.moduli()),
        GroupPresentation::diagonal(&target.moduli()),
        matrix,
    )
    .expect("module actions send relation multiples to relation multiples")
}

/// Backend of the witness search: a pair whose structure coboundary is
/// exactly the difference of the two structures, when one exists.
pub(crate) fn solve_structure_witness(
    ring: &FiniteRing,
    module: &Bimodule,
    f: &AnnStructure,
    f_prime: &AnnStructure,
) -> Result<Option<CochainPair>, LinearError> {
    if f.ring_order() != f_prime.ring_order() || f.module_order() != f_prime.module_order() {
        return Err(LinearError::Cochain(CochainError::Mismatch(format!(
            "structures are over ({}, {}) and ({}, {})",
            f.ring_order(),
            f.module_order(),
            f_prime.ring_order(),
            f_prime.module_order()
        ))));
    }
    let source = CoordLayout::new(ring, module, &PAIR_KINDS);
    let target = CoordLayout::new(ring, module, &STRUCTURE_KINDS);
    let h = structure_coboundary_hom(ring, module);
    let from = target.vec_of(module, &f.slots());
    let to = target.vec_of(module, &f_prime.slots());
    let diff: Vec<BigInt> = to.iter().zip(&from).map(|(a, b)| a - b).collect();
    let goal = canonical_residue(&target.moduli(), &diff);
    let Some(w) = solve_preimage(&h, &goal) else {
        return Ok(None);
    };
    let residue = canonical_residue(&source.moduli(), &w);
    let tables = source.value_tables(ring, module, &residue);
    let mut it = tables.into_iter();
    let pair = CochainPair::new(it.next().unwrap(), it.next().unwrap())?;
    Ok(Some(pair))
}
