//! Exact-integer-coefficient vectors indexed by lattice vertices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lattice_graph::{SRGraph, Vertex};

/// Sparse vector over the standard basis {e_x : x in V(d,n)}.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVector {
    entries: BTreeMap<Vertex, BigInt>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(x: Vertex) -> Self {
        let mut v = Self::new();
        v.add_term(x, BigInt::from(1));
        v
    }

    /// Add `c * e_x`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, x: Vertex, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry(x);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, x: &Vertex) -> BigInt {
        self.entries.get(x).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, &BigInt)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn add_scaled(&mut self, other: &SparseVector, c: &BigInt) {
        for (x, v) in other.iter() {
            self.add_term(x.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &BigInt) -> SparseVector {
        let mut out = SparseVector::new();
        if c.is_zero() {
            return out;
        }
        for (x, v) in self.iter() {
            out.entries.insert(x.clone(), v * c);
        }
        out
    }

    pub fn dot(&self, other: &SparseVector) -> BigInt {
        let (small, big) = if self.support_len() <= other.support_len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = BigInt::zero();
        for (x, c) in small.iter() {
            if let Some(d) = big.entries.get(x) {
                acc += c * d;
            }
        }
        acc
    }

    /// Lexicographically smallest support point (the "leading term" for
    /// triangularity arguments that order vectors by their minimum).
    pub fn lex_min(&self) -> Option<(&Vertex, &BigInt)> {
        self.entries.iter().next()
    }

    /// Lexicographically largest support point.
    pub fn lex_max(&self) -> Option<(&Vertex, &BigInt)> {
        self.entries.iter().next_back()
    }

    pub fn to_dense(&self, g: &SRGraph) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); g.num_vertices()];
        for (x, c) in self.iter() {
            let i = g
                .vertex_index(x)
                .expect("vector key must be a vertex of the ambient graph");
            out[i] = c.clone();
        }
        out
    }

    /// Coefficient rows for a family of vectors, as a dense integer matrix
    /// (one row per vector, one column per vertex).
    pub fn family_matrix(family: &[SparseVector], g: &SRGraph) -> crate::exact_linalg::Matrix<BigInt> {
        let rows = family.len();
        let cols = g.num_vertices();
        let mut m = crate::exact_linalg::Matrix::zero(rows, cols);
        for (r, v) in family.iter().enumerate() {
            for (x, c) in v.iter() {
                let i = g.vertex_index(x).expect("vertex in ambient graph");
                *m.get_mut(r, i) = c.clone();
            }
        }
        m
    }

    /// JSON-friendly support listing: [[coords, coeff], ...].
    pub fn support_json(&self) -> Vec<(Vec<u32>, String)> {
        self.iter()
            .map(|(x, c)| (x.0.clone(), c.to_string()))
            .collect()
    }
}

impl std::ops::Add for SparseVector {
    type Output = SparseVector;
    fn add(mut self, rhs: SparseVector) -> SparseVector {
        for (x, c) in rhs.entries {
            self.add_term(x, c);
        }
        self
    }
}

impl std::ops::Sub for SparseVector {
    type Output = SparseVector;
    fn sub(mut self, rhs: SparseVector) -> SparseVector {
        for (x, c) in rhs.entries {
            self.add_term(x, -c);
        }
        self
    }
}
