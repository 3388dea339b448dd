//! Exact-arithmetic spectral toolkit for simplicial rook graphs SR(d,n):
//! graph construction, explicit eigenvector families, integral-spectrum
//! certification and conjecture-verification harnesses.

pub mod eigenbasis3;
pub mod error;
pub mod exact_linalg;
pub mod lattice_graph;
pub mod permutohedra;
pub mod rook_eigen;
pub mod sparse_vec;
pub mod spectral_analysis;

pub use error::{Error, Result};
pub use lattice_graph::{SRGraph, Vertex, DEFAULT_VERTEX_CAP};
pub use sparse_vec::SparseVector;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Concrete carriers used throughout the crate (the exact_linalg engine
/// itself is generic over the scalar).
pub type IntMatrix = exact_linalg::Matrix<BigInt>;
pub type RationalVector = exact_linalg::RatVector<BigInt>;
pub type BigRational = num_rational::Ratio<BigInt>;

/// Binomial coefficient C(n, k), zero when n < k (in particular for
/// negative n, matching the packing counts).
pub fn binomial(n: BigInt, k: u64) -> BigInt {
    if n.is_negative() || n < BigInt::from(k) {
        return BigInt::zero();
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (&n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// C(n, k) for small machine integers.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    use num_traits::ToPrimitive;
    binomial(BigInt::from(n), k).to_u64().expect("fits in u64")
}
