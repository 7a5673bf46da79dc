//! Typed chamber complexes and their translation operators `T_k`.
//!
//! Two concrete kinds of finite quotient are supported: bipartite graphs
//! (quotients of trees, rank 1) and thin quotients of affine Coxeter complexes
//! by a translation sublattice (any rank, every wall thin).

pub mod graph;
pub mod operator;
pub mod thin;

pub use graph::{non_backtracking_operator, translation_operator, QuotientGraph};
pub use operator::ChamberOperator;
pub use thin::{thin_translation_operator, ThinQuotient};

use thiserror::Error;

use crate::cones::RationalLattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("graph is not bipartite with respect to the vertex types: {0}")]
    NotBipartiteWithTypes(String),
    #[error("graph is not regular: {0}")]
    IrregularGraph(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("position {0:?} is not in the type-zero lattice")]
    InvalidPosition(Vec<u64>),
    #[error("thin quotients need an affine type, got {0}")]
    NotAffine(String),
    #[error("translation sublattice is singular or has the wrong shape")]
    DegenerateSublattice,
    #[error("integer overflow in operator entries")]
    Overflow,
}

/// A finite chamber complex with commuting translation operators indexed by
/// position vectors `k ∈ ℕ₀^d`.
pub trait QuotientComplex: Sync {
    /// The number `d` of position coordinates.
    fn rank(&self) -> usize;

    fn chamber_count(&self) -> usize;

    /// The lattice of position vectors `k ∈ ℤ^d` with `Σ k_j e_j ∈ Λ₀`.
    fn position_lattice(&self) -> RationalLattice;

    fn is_valid_position(&self, k: &[u64]) -> bool;

    /// `T_k`, the operator sending a chamber to the sum of the chambers in
    /// position `k` from it.
    fn translation(&self, k: &[u64]) -> Result<ChamberOperator, ComplexError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductLawReport {
    pub checked: usize,
    /// Pairs `(k, l)` with `T_k T_l ≠ T_{k+l}`.
    pub violations: Vec<(Vec<u64>, Vec<u64>)>,
}

impl ProductLawReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `T_k T_l = T_{k+l}` entrywise for every pair from `positions`
/// (skipping pairs where any of the three positions is invalid).
pub fn verify_product_law<C: QuotientComplex + ?Sized>(
    complex: &C,
    positions: &[Vec<u64>],
) -> Result<ProductLawReport, ComplexError> {
    let mut report = ProductLawReport { checked: 0, violations: Vec::new() };
    for k in positions {
        for l in positions {
            let sum: Vec<u64> = k.iter().zip(l).map(|(a, b)| a + b).collect();
            if !(complex.is_valid_position(k) && complex.is_valid_position(l) && complex.is_valid_position(&sum)) {
                continue;
            }
            let lhs = complex.translation(k)?.mul(&complex.translation(l)?)?;
            report.checked += 1;
            if lhs != complex.translation(&sum)? {
                report.violations.push((k.clone(), l.clone()));
            }
        }
    }
    Ok(report)
}

/// All valid positions with every coordinate at most `max`, in lexicographic order.
pub fn positions_up_to<C: QuotientComplex + ?Sized>(complex: &C, max: u64) -> Vec<Vec<u64>> {
    let d = complex.rank();
    let mut out = Vec::new();
    let mut k = vec![0u64; d];
    loop {
        if complex.is_valid_position(&k) {
            out.push(k.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if k[i] < max {
                k[i] += 1;
                break;
            }
            k[i] = 0;
        }
    }
}
