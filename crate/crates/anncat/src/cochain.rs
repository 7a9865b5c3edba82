//! Cochains: M-valued functions on tuples of ring elements, stored as
//! flat tables in lexicographic argument order (leftmost argument most
//! significant). Each kind carries a normalization mask of argument
//! patterns whose value is forced to zero; the unconstrained positions
//! form the free support, and a cochain is determined by its values
//! there.

use crate::algebra::{Bimodule, FiniteRing};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The eight table shapes used by the relation system: five structure
/// slots, the interchange slot, and the two degree-2 slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CochainKind {
    /// Additive associativity correction, arity 3.
    Xi,
    /// Commutativity correction, arity 2.
    Eta,
    /// Multiplicative associativity correction, arity 3.
    Alpha,
    /// Left distributivity correction, arity 3.
    Lambda,
    /// Right distributivity correction, arity 3.
    Rho,
    /// Interchange correction, arity 4.
    Sigma,
    /// Degree-2 additive slot, arity 2.
    Mu,
    /// Degree-2 multiplicative slot, arity 2.
    Nu,
}

impl CochainKind {
    pub fn arity(self) -> usize {
        match self {
            CochainKind::Eta | CochainKind::Mu | CochainKind::Nu => 2,
            CochainKind::Sigma => 4,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CochainKind::Xi => "xi",
            CochainKind::Eta => "eta",
            CochainKind::Alpha => "alpha",
            CochainKind::Lambda => "lambda",
            CochainKind::Rho => "rho",
            CochainKind::Sigma => "sigma",
            CochainKind::Mu => "mu",
            CochainKind::Nu => "nu",
        }
    }

    /// Whether the value at `args` is forced to zero by normalization.
    /// `one` is the ring's unit index; 0 is the ring's zero.
    pub fn forced_zero(self, args: &[usize], one: usize) -> bool {
        debug_assert_eq!(args.len(), self.arity());
        match self {
            CochainKind::Xi | CochainKind::Eta | CochainKind::Mu => args.contains(&0),
            CochainKind::Alpha | CochainKind::Nu => {
                args.iter().any(|&a| a == 0 || a == one)
            }
            CochainKind::Lambda => {
                args[0] == 0 || args[0] == one || args[1] == 0 || args[2] == 0
            }
            CochainKind::Rho => {
                args[2] == 0 || args[2] == one || args[0] == 0 || args[1] == 0
            }
            CochainKind::Sigma => {
                (args[0] == 0 && args[1] == 0)
                    || (args[2] == 0 && args[3] == 0)
                    || (args[0] == 0 && args[2] == 0)
                    || (args[1] == 0 && args[3] == 0)
                    || (args[1] == 0 && args[2] == 0)
            }
        }
    }
}

/// Problems with cochain data. Shape and range problems are format
/// errors; a nonzero value on a forced-zero pattern is a normalization
/// error and carries the offending argument tuple.
#[derive(Debug, Error)]
pub enum CochainError {
    #[error("{kind} table over a ring of order {ring_order}: expected {expected} values, got {got}")]
    BadShape { kind: &'static str, ring_order: usize, expected: usize, got: usize },
    #[error("{kind} value at flat index {index} is {value}, outside the module of order {module_order}")]
    ValueOutOfRange { kind: &'static str, index: usize, value: usize, module_order: usize },
    #[error("{kind}{witness:?} must be zero by normalization but is {value}")]
    NormalizationViolated { kind: &'static str, witness: Vec<usize>, value: usize },
    #[error("operands disagree: {0}")]
    Mismatch(String),
}

/// An M-valued table on k-tuples of ring elements, flattened in
/// lexicographic order. Values are module element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain {
    pub kind: CochainKind,
    pub ring_order: usize,
    pub module_order: usize,
    pub values: Vec<usize>,
}

impl Cochain {
    pub fn table_len(kind: CochainKind, ring_order: usize) -> usize {
        ring_order.pow(kind.arity() as u32)
    }

    /// Flat index of an argument tuple, leftmost most significant.
    pub fn index_of(&self, args: &[usize]) -> usize {
        flat_index(self.ring_order, args)
    }

    /// Argument tuple of a flat index.
    pub fn args_of(&self, index: usize) -> Vec<usize> {
        unflatten(self.ring_order, self.kind.arity(), index)
    }

    #[inline]
    pub fn at(&self, args: &[usize]) -> usize {
        self.values[flat_index(self.ring_order, args)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

pub fn flat_index(ring_order: usize, args: &[usize]) -> usize {
    let mut index = 0usize;
    for &a in args {
        debug_assert!(a < ring_order);
        index = index * ring_order + a;
    }
    index
}

pub fn unflatten(ring_order: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut args = vec![0usize; arity];
    for i in (0..arity).rev() {
        args[i] = index % ring_order;
        index /= ring_order;
    }
    args
}

/// All argument tuples of the given arity in lexicographic order.
pub fn all_args(ring_order: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = ring_order.pow(arity as u32);
    (0..total).map(move |i| unflatten(ring_order, arity, i))
}

/// Builds a cochain from a full value table, rejecting wrong lengths,
/// out-of-range values, and nonzero values on forced-zero patterns.
pub fn make_cochain(
    kind: CochainKind,
    ring: &FiniteRing,
    module: &Bimodule,
    values: Vec<usize>,
) -> Result<Cochain, CochainError> {
    let n = ring.order();
    let expected = Cochain::table_len(kind, n);
    if values.len() != expected {
        return Err(CochainError::BadShape {
            kind: kind.name(),
            ring_order: n,
            expected,
            got: values.len(),
        });
    }
    let m = module.order();
    for (index, &value) in values.iter().enumerate() {
        if value >= m {
            return Err(CochainError::ValueOutOfRange {
                kind: kind.name(),
                index,
                value,
                module_order: m,
            });
        }
    }
    for (index, &value) in values.iter().enumerate() {
        if value != 0 {
            let args = unflatten(n, kind.arity(), index);
            if kind.forced_zero(&args, ring.one()) {
                return Err(CochainError::NormalizationViolated {
                    kind: kind.name(),
                    witness: args,
                    value,
                });
            }
        }
    }
    Ok(Cochain { kind, ring_order: n, module_order: m, values })
}

/// The zero table of a given kind.
pub fn zero_cochain(kind: CochainKind, ring: &FiniteRing, module: &Bimodule) -> Cochain {
    Cochain {
        kind,
        ring_order: ring.order(),
        module_order: module.order(),
        values: vec![0; Cochain::table_len(kind, ring.order())],
    }
}

fn check_match(a: &Cochain, b: &Cochain) -> Result<(), CochainError> {
    if a.kind != b.kind {
        return Err(CochainError::Mismatch(format!(
            "kinds {} and {}",
            a.kind.name(),
            b.kind.name()
        )));
    }
    if a.ring_order != b.ring_order {
        return Err(CochainError::Mismatch(format!(
            "ring orders {} and {}",
            a.ring_order, b.ring_order
        )));
    }
    if a.module_order != b.module_order {
        return Err(CochainError::Mismatch(format!(
            "module orders {} and {}",
            a.module_order, b.module_order
        )));
    }
    Ok(())
}

/// Pointwise sum in the module.
pub fn cochain_add(
    module: &Bimodule,
    a: &Cochain,
    b: &Cochain,
) -> Result<Cochain, CochainError> {
    check_match(a, b)?;
    if module.order() != a.module_order {
        return Err(CochainError::Mismatch(format!(
            "module order {} does not match cochain module order {}",
            module.order(),
            a.module_order
        )));
    }
    let values =
        a.values.iter().zip(&b.values).map(|(&x, &y)| module.add(x, y)).collect();
    Ok(Cochain { kind: a.kind, ring_order: a.ring_order, module_order: a.module_order, values })
}

/// Pointwise negation in the module.
pub fn cochain_neg(module: &Bimodule, a: &Cochain) -> Result<Cochain, CochainError> {
    if module.order() != a.module_order {
        return Err(CochainError::Mismatch(format!(
            "module order {} does not match cochain module order {}",
            module.order(),
            a.module_order
        )));
    }
    let values = a.values.iter().map(|&x| module.neg(x)).collect();
    Ok(Cochain { kind: a.kind, ring_order: a.ring_order, module_order: a.module_order, values })
}

/// Argument tuples not forced to zero, in lexicographic order. A
/// cochain is determined by its values on this list.
pub fn free_support(kind: CochainKind, ring: &FiniteRing) -> Vec<Vec<usize>> {
    all_args(ring.order(), kind.arity())
        .filter(|args| !kind.forced_zero(args, ring.one()))
        .collect()
}

/// Builds a cochain from values listed on the free support (in the
/// order produced by `free_support`), zero elsewhere.
pub fn from_free_values(
    kind: CochainKind,
    ring: &FiniteRing,
    module: &Bimodule,
    free: &[usize],
) -> Result<Cochain, CochainError> {
    let support = free_support(kind, ring);
    if free.len() != support.len() {
        return Err(CochainError::BadShape {
            kind: kind.name(),
            ring_order: ring.order(),
            expected: support.len(),
            got: free.len(),
        });
    }
    let mut values = vec![0usize; Cochain::table_len(kind, ring.order())];
    for (args, &v) in support.iter().zip(free) {
        if v >= module.order() {
            return Err(CochainError::ValueOutOfRange {
                kind: kind.name(),
                index: flat_index(ring.order(), args),
                value: v,
                module_order: module.order(),
            });
        }
        values[flat_index(ring.order(), args)] = v;
    }
    Ok(Cochain {
        kind,
        ring_order: ring.order(),
        module_order: module.order(),
        values,
    })
}

/// The values on the free support, inverse to `from_free_values`.
pub fn free_values(cochain: &Cochain, ring: &FiniteRing) -> Vec<usize> {
    free_support(cochain.kind, ring).iter().map(|args| cochain.at(args)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic_ring, Bimodule};

    fn setup(n: usize) -> (FiniteRing, Bimodule) {
        let ring = make_cyclic_ring(n).unwrap();
        let module = Bimodule::regular_bimodule(&ring).unwrap();
        (ring, module)
    }

    #[test]
    fn free_support_counts_z2() {
        let (ring, _) = setup(2);
        assert_eq!(free_support(CochainKind::Xi, &ring), vec![vec![1, 1, 1]]);
        assert_eq!(free_support(CochainKind::Eta, &ring), vec![vec![1, 1]]);
        assert!(free_support(CochainKind::Alpha, &ring).is_empty());
        assert!(free_support(CochainKind::Lambda, &ring).is_empty());
        assert!(free_support(CochainKind::Rho, &ring).is_empty());
        assert_eq!(free_support(CochainKind::Mu, &ring), vec![vec![1, 1]]);
        assert!(free_support(CochainKind::Nu, &ring).is_empty());
    }

    #[test]
    fn free_support_sigma_z2() {
        let (ring, _) = setup(2);
        let support = free_support(CochainKind::Sigma, &ring);
        assert_eq!(
            support,
            vec![
                vec![0, 1, 1, 0],
                vec![0, 1, 1, 1],
                vec![1, 0, 1, 1],
                vec![1, 1, 0, 1],
                vec![1, 1, 1, 0],
                vec![1, 1, 1, 1],
            ]
        );
    }

    #[test]
    fn free_support_counts_z3() {
        let (ring, _) = setup(3);
        let n = 3usize;
        assert_eq!(free_support(CochainKind::Xi, &ring).len(), (n - 1).pow(3));
        assert_eq!(free_support(CochainKind::Eta, &ring).len(), (n - 1).pow(2));
        assert_eq!(free_support(CochainKind::Alpha, &ring).len(), (n - 2).pow(3));
        assert_eq!(
            free_support(CochainKind::Lambda, &ring).len(),
            (n - 2) * (n - 1) * (n - 1)
        );
        assert_eq!(
            free_support(CochainKind::Rho, &ring).len(),
            (n - 1) * (n - 1) * (n - 2)
        );
        assert_eq!(free_support(CochainKind::Mu, &ring).len(), (n - 1).pow(2));
        assert_eq!(free_support(CochainKind::Nu, &ring).len(), (n - 2).pow(2));
    }

    #[test]
    fn normalization_rejected_with_witness() {
        let (ring, module) = setup(2);
        let mut values = vec![0usize; 8];
        values[flat_index(2, &[0, 1, 1])] = 1;
        let err = make_cochain(CochainKind::Xi, &ring, &module, values).unwrap_err();
        match err {
            CochainError::NormalizationViolated { kind, witness, value } => {
                assert_eq!(kind, "xi");
                assert_eq!(witness, vec![0, 1, 1]);
                assert_eq!(value, 1);
            }
            other => panic!("expected normalization error, got {other}"),
        }
    }

    #[test]
    fn nu_over_z2_must_be_zero() {
        let (ring, module) = setup(2);
        let mut values = vec![0usize; 4];
        values[flat_index(2, &[1, 1])] = 1;
        assert!(make_cochain(CochainKind::Nu, &ring, &module, values).is_err());
        let ok = make_cochain(CochainKind::Nu, &ring, &module, vec![0; 4]).unwrap();
        assert!(ok.is_zero());
    }

    #[test]
    fn self_sum_vanishes_over_z2() {
        let (ring, module) = setup(2);
        let f = from_free_values(CochainKind::Xi, &ring, &module, &[1]).unwrap();
        assert_eq!(f.at(&[1, 1, 1]), 1);
        let sum = cochain_add(&module, &f, &f).unwrap();
        assert!(sum.is_zero());
        let neg = cochain_neg(&module, &f).unwrap();
        assert_eq!(neg, f);
    }

    #[test]
    fn free_value_roundtrip_z3() {
        let (ring, module) = setup(3);
        let support_len = free_support(CochainKind::Lambda, &ring).len();
        let free: Vec<usize> = (0..support_len).map(|i| (i * 2 + 1) % 3).collect();
        let c = from_free_values(CochainKind::Lambda, &ring, &module, &free).unwrap();
        assert_eq!(free_values(&c, &ring), free);
        // Forced positions stay zero.
        assert_eq!(c.at(&[1, 1, 1]), 0);
        assert_eq!(c.at(&[2, 0, 2]), 0);
    }

    #[test]
    fn flat_index_roundtrip() {
        let n = 5usize;
        for arity in 2..=4 {
            for i in 0..n.pow(arity as u32) {
                let args = unflatten(n, arity, i);
                assert_eq!(flat_index(n, &args), i);
            }
        }
    }

    #[test]
    fn mismatched_operands_rejected() {
        let (r2, m2) = setup(2);
        let (r3, m3) = setup(3);
        let a = zero_cochain(CochainKind::Eta, &r2, &m2);
        let b = zero_cochain(CochainKind::Eta, &r3, &m3);
        assert!(cochain_add(&m2, &a, &b).is_err());
        let c = zero_cochain(CochainKind::Mu, &r2, &m2);
        assert!(cochain_add(&m2, &a, &c).is_err());
    }

    #[test]
    fn sigma_zero_y_z_zero_is_free() {
        // The pattern (0, y, z, 0) is not forced to zero.
        let (ring, _) = setup(3);
        assert!(!CochainKind::Sigma.forced_zero(&[0, 1, 2, 0], ring.one()));
        assert!(CochainKind::Sigma.forced_zero(&[0, 1, 0, 2], ring.one()));
        assert!(CochainKind::Sigma.forced_zero(&[1, 0, 0, 2], ring.one()));
    }
}
