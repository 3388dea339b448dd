//! Vertex enumeration and construction of the simplicial rook graph SR(d,n).
//!
//! Vertices are the weak compositions of `n` into `d` parts, kept in
//! lexicographic order throughout; two vertices are adjacent when they differ
//! in exactly two coordinate positions.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::Matrix;
use crate::sparse_vec::SparseVector;

/// Default cap on the number of vertices a graph build will materialize.
/// Overridable per call and via `SRG_VERTEX_CAP` at the CLI level.
pub const DEFAULT_VERTEX_CAP: usize = 200_000;

/// A lattice point of the dilated simplex: `d` nonnegative coordinates
/// summing to `n`. Ordering is lexicographic on coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Vertex(pub Vec<u32>);

impl Vertex {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Image under a coordinate permutation: coordinate `i` is sent to
    /// position `perm[i]` (0-based).
    pub fn permute(&self, perm: &[usize]) -> Vertex {
        let mut out = vec![0u32; self.0.len()];
        for (i, &c) in self.0.iter().enumerate() {
            out[perm[i]] = c;
        }
        Vertex(out)
    }
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All weak compositions of `n` into `d` parts, lexicographically sorted.
pub fn enumerate_vertices(d: usize, n: u32) -> Result<Vec<Vertex>> {
    if d == 0 {
        return Err(Error::Domain(
            "SR(0,n) has no coordinate space".to_string(),
        ));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    fill(&mut out, &mut prefix, d, n);
    Ok(out)
}

fn fill(out: &mut Vec<Vertex>, prefix: &mut Vec<u32>, d: usize, rem: u32) {
    if prefix.len() + 1 == d {
        prefix.push(rem);
        out.push(Vertex(prefix.clone()));
        prefix.pop();
        return;
    }
    for x in 0..=rem {
        prefix.push(x);
        fill(out, prefix, d, rem - x);
        prefix.pop();
    }
}

/// Number of vertices of SR(d,n), i.e. C(n+d-1, d-1).
pub fn vertex_count(d: usize, n: u32) -> BigInt {
    crate::binomial(BigInt::from(n) + BigInt::from(d as u32) - 1, d as u64 - 1)
}

/// The simplicial rook graph SR(d,n). Immutable after construction.
#[derive(Debug, Clone)]
pub struct SRGraph {
    d: usize,
    n: u32,
    vertices: Vec<Vertex>,
    index: HashMap<Vec<u32>, usize>,
    adj: Vec<Vec<u32>>,
}

impl SRGraph {
    pub fn build(d: usize, n: u32) -> Result<SRGraph> {
        Self::build_with_cap(d, n, DEFAULT_VERTEX_CAP)
    }

    pub fn build_with_cap(d: usize, n: u32, cap: usize) -> Result<SRGraph> {
        if d == 0 {
            return Err(Error::Domain("d must be at least 1".to_string()));
        }
        let count = vertex_count(d, n);
        if count > BigInt::from(cap) {
            return Err(Error::Resource(format!(
                "SR({d},{n}) has {count} vertices, above the cap of {cap}"
            )));
        }
        let vertices = enumerate_vertices(d, n)?;
        let index: HashMap<Vec<u32>, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.0.clone(), i))
            .collect();

        // Neighbors of x in direction (i,j): redistribute the total
        // s = x_i + x_j over the two coordinates. Distinct pairs give
        // distinct neighbors, so the lists need no dedup.
        let mut adj = Vec::with_capacity(vertices.len());
        let mut scratch = Vec::new();
        for v in &vertices {
            scratch.clear();
            let mut nb = v.0.clone();
            for i in 0..d {
                for j in (i + 1)..d {
                    let s = v.0[i] + v.0[j];
                    for a in 0..=s {
                        if a == v.0[i] {
                            continue;
                        }
                        nb[i] = a;
                        nb[j] = s - a;
                        scratch.push(index[&nb] as u32);
                    }
                    nb[i] = v.0[i];
                    nb[j] = v.0[j];
                }
            }
            scratch.sort_unstable();
            adj.push(scratch.clone());
        }
        Ok(SRGraph {
            d,
            n,
            vertices,
            index,
            adj,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Regular degree (d-1)n.
    pub fn degree(&self) -> u64 {
        (self.d as u64 - 1) * self.n as u64
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        self.index.get(&v.0).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn num_edges(&self) -> u64 {
        self.adj.iter().map(|a| a.len() as u64).sum::<u64>() / 2
    }

    pub fn adjacency_matrix(&self) -> Matrix<BigInt> {
        let n = self.num_vertices();
        let mut m = Matrix::zero(n, n);
        for (i, row) in self.adj.iter().enumerate() {
            for &j in row {
                *m.get_mut(i, j as usize) = BigInt::from(1);
            }
        }
        m
    }

    /// L = delta*I - A; all row sums zero.
    pub fn laplacian(&self) -> Matrix<BigInt> {
        let n = self.num_vertices();
        let delta = BigInt::from(self.degree());
        let mut m = Matrix::zero(n, n);
        for (i, row) in self.adj.iter().enumerate() {
            *m.get_mut(i, i) = delta.clone();
            for &j in row {
                *m.get_mut(i, j as usize) = BigInt::from(-1);
            }
        }
        m
    }

    pub fn adjacency_f64(&self) -> nalgebra::DMatrix<f64> {
        let n = self.num_vertices();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for (i, row) in self.adj.iter().enumerate() {
            for &j in row {
                m[(i, j as usize)] = 1.0;
            }
        }
        m
    }

    /// A*v for a sparse vector; the result is supported on the neighbors
    /// of supp(v).
    pub fn apply_adjacency(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (x, c) in v.iter() {
            let i = self.index[&x.0];
            for &j in &self.adj[i] {
                out.add_term(self.vertices[j as usize].clone(), c.clone());
            }
        }
        out
    }

    /// (index, coefficient) pairs when every coefficient and every
    /// accumulated sum fits comfortably in i64.
    fn small_coeffs(&self, v: &SparseVector, lambda: i64) -> Option<Vec<(u32, i64)>> {
        use num_traits::ToPrimitive;
        let bound = (1i64 << 40) / (self.degree() as i64 + lambda.abs() + 1);
        let mut out = Vec::with_capacity(v.support_len());
        for (x, c) in v.iter() {
            let c = c.to_i64()?;
            if c.abs() > bound {
                return None;
            }
            out.push((*self.index.get(&x.0)? as u32, c));
        }
        Some(out)
    }

    /// Exact check that A*v = lambda*v.
    pub fn is_eigenvector(&self, v: &SparseVector, lambda: i64) -> bool {
        if v.is_zero() {
            return false;
        }
        // machine-integer fast path when all coefficients are small: the
        // accumulated sums are bounded by degree * max|coeff|, still exact
        if let Some(small) = self.small_coeffs(v, lambda) {
            let mut acc: HashMap<u32, i64> = HashMap::new();
            for &(i, c) in &small {
                for &j in &self.adj[i as usize] {
                    *acc.entry(j).or_insert(0) += c;
                }
            }
            for &(i, c) in &small {
                match acc.remove(&i) {
                    Some(s) if s == lambda * c => {}
                    None if lambda * c == 0 => {}
                    _ => return false,
                }
            }
            return acc.values().all(|&s| s == 0);
        }
        // dense path for vectors supported on a large fraction of V
        if v.support_len() * 4 >= self.num_vertices() {
            let dense = v.to_dense(self);
            let lam = BigInt::from(lambda);
            for i in 0..self.num_vertices() {
                let mut acc = BigInt::from(0);
                for &j in &self.adj[i] {
                    acc += &dense[j as usize];
                }
                if acc != &lam * &dense[i] {
                    return false;
                }
            }
            true
        } else {
            let av = self.apply_adjacency(v);
            av == v.scaled(&BigInt::from(lambda))
        }
    }

    /// Characteristic vector of the lattice line through `base` in
    /// direction e_i - e_j (0-based i < j).
    pub fn lattice_line_vector(&self, base: &Vertex, i: usize, j: usize) -> Result<SparseVector> {
        if i >= j || j >= self.d {
            return Err(Error::Index(format!(
                "invalid axis pair ({i},{j}) for d={}",
                self.d
            )));
        }
        if self.vertex_index(base).is_none() {
            return Err(Error::Domain(format!("{base} is not a vertex of SR({},{})", self.d, self.n)));
        }
        let s = base.0[i] + base.0[j];
        let mut v = SparseVector::new();
        let mut pt = base.0.clone();
        for a in 0..=s {
            pt[i] = a;
            pt[j] = s - a;
            v.add_term(Vertex(pt.clone()), BigInt::from(1));
        }
        Ok(v)
    }

    /// All distinct lattice lines, one vector per line (lines are shared
    /// among their points, so the raw per-vertex family is deduplicated by
    /// canonical base: the point with coordinate i equal to 0).
    pub fn all_lattice_lines(&self) -> Vec<SparseVector> {
        let mut out = Vec::new();
        for v in &self.vertices {
            for i in 0..self.d {
                if v.0[i] != 0 {
                    continue;
                }
                for j in (i + 1)..self.d {
                    // canonical base of the (i,j)-line has x_i = 0
                    out.push(
                        self.lattice_line_vector(v, i, j)
                            .expect("valid base and axis pair"),
                    );
                }
            }
        }
        out
    }

    /// Edge list as text lines "u v" (0-based lexicographic indices).
    pub fn edge_list_text(&self) -> String {
        let mut s = String::new();
        for (i, row) in self.adj.iter().enumerate() {
            for &j in row {
                if (j as usize) > i {
                    s.push_str(&format!("{i} {j}\n"));
                }
            }
        }
        s
    }

    pub fn descriptor(&self) -> GraphDescriptor {
        GraphDescriptor {
            d: self.d,
            n: self.n,
            num_vertices: self.num_vertices(),
            degree: self.degree(),
            vertices: self.vertices.iter().map(|v| v.0.clone()).collect(),
        }
    }
}

/// JSON descriptor {d, n, N, degree, vertices:[[...]]}.
#[derive(Debug, Serialize)]
pub struct GraphDescriptor {
    pub d: usize,
    pub n: u32,
    #[serde(rename = "N")]
    pub num_vertices: usize,
    pub degree: u64,
    pub vertices: Vec<Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_3_3() {
        let v = enumerate_vertices(3, 3).unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], Vertex(vec![0, 0, 3]));
        assert_eq!(v[9], Vertex(vec![3, 0, 0]));
    }

    #[test]
    fn enumerate_degenerate() {
        assert_eq!(enumerate_vertices(4, 0).unwrap(), vec![Vertex(vec![0; 4])]);
        assert!(enumerate_vertices(0, 3).is_err());
        let v = enumerate_vertices(2, 4).unwrap();
        let coords: Vec<_> = v.iter().map(|x| (x.0[0], x.0[1])).collect();
        assert_eq!(coords, vec![(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]);
    }

    #[test]
    fn octahedron() {
        let g = SRGraph::build(3, 2).unwrap();
        assert_eq!(g.num_vertices(), 6);
        for i in 0..6 {
            assert_eq!(g.neighbors(i).len(), 4);
        }
    }

    #[test]
    fn complete_graphs() {
        // SR(d,1) = K_d
        let g = SRGraph::build(5, 1).unwrap();
        assert_eq!(g.num_vertices(), 5);
        for i in 0..5 {
            assert_eq!(g.neighbors(i).len(), 4);
        }
        // SR(3,3): 10 vertices, 6-regular
        let g = SRGraph::build(3, 3).unwrap();
        assert_eq!(g.num_vertices(), 10);
        for i in 0..10 {
            assert_eq!(g.neighbors(i).len(), 6);
        }
    }

    #[test]
    fn single_vertex_cases() {
        let g = SRGraph::build(4, 0).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert!(g.neighbors(0).is_empty());
        let g = SRGraph::build(1, 7).unwrap();
        assert_eq!(g.num_vertices(), 1);
    }

    #[test]
    fn vertex_cap() {
        assert!(matches!(
            SRGraph::build_with_cap(3, 100, 50),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn laplacian_row_sums() {
        let g = SRGraph::build(3, 2).unwrap();
        let l = g.laplacian();
        for i in 0..6 {
            assert_eq!(*l.get(i, i), BigInt::from(4));
            let s: BigInt = (0..6).map(|j| l.get(i, j).clone()).sum();
            assert_eq!(s, BigInt::from(0));
        }
        let l3 = SRGraph::build(3, 1).unwrap().laplacian();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2 } else { -1 };
                assert_eq!(*l3.get(i, j), BigInt::from(want));
            }
        }
    }

    #[test]
    fn lattice_line_examples() {
        let g = SRGraph::build(3, 3).unwrap();
        // X_1 of the d=3 notation: line through (1,0,2) in direction e2-e3
        let v = g
            .lattice_line_vector(&Vertex(vec![1, 0, 2]), 1, 2)
            .unwrap();
        assert_eq!(v.support_len(), 3);
        for (x, c) in v.iter() {
            assert_eq!(x.0[0], 1);
            assert_eq!(*c, BigInt::from(1));
        }
        // same line from another base
        let w = g
            .lattice_line_vector(&Vertex(vec![1, 2, 0]), 1, 2)
            .unwrap();
        assert_eq!(v, w);
        // SR(2,n) is a single line
        let g2 = SRGraph::build(2, 4).unwrap();
        let all = g2
            .lattice_line_vector(&Vertex(vec![2, 2]), 0, 1)
            .unwrap();
        assert_eq!(all.support_len(), 5);
        assert!(g.lattice_line_vector(&Vertex(vec![1, 0, 2]), 2, 2).is_err());
    }

    #[test]
    fn degree_identity() {
        // degree = sum over pairs of (x_i + x_j), recomputed independently
        for (d, n) in [(3u32, 4u32), (4, 3), (5, 2)] {
            let g = SRGraph::build(d as usize, n).unwrap();
            for (i, v) in g.vertices().iter().enumerate() {
                let mut s = 0u32;
                for a in 0..d as usize {
                    for b in (a + 1)..d as usize {
                        s += v.0[a] + v.0[b];
                    }
                }
                assert_eq!(g.neighbors(i).len(), s as usize);
            }
        }
    }
}
