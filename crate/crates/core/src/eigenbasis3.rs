//! The complete explicit eigenbasis of A(SR(3,n)): the all-ones vector J,
//! the hexagon vectors, and the R / P_k / Q_k families with their S3 orbits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg;
use crate::lattice_graph::{SRGraph, Vertex};
use crate::sparse_vec::SparseVector;

/// The 3-cycle sending coordinate position 0 -> 1 -> 2 -> 0.
pub const SIGMA: [usize; 3] = [1, 2, 0];
/// The transposition of coordinate positions 0 and 1.
pub const RHO: [usize; 3] = [1, 0, 2];

/// Image of a sparse vector under a coordinate permutation of vertices.
pub fn apply_perm(v: &SparseVector, perm: &[usize]) -> SparseVector {
    let mut out = SparseVector::new();
    for (x, c) in v.iter() {
        out.add_term(x.permute(perm), c.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family")]
pub enum Family {
    J,
    Hexagon { a: u32, b: u32, c: u32 },
    R { image: u8 },
    P { k: u32, image: u8 },
    Q { k: u32, image: u8 },
}

impl Family {
    /// Coarse tag; orbit images of R/P/Q under sigma are `OrbitImage`.
    pub fn tag(&self) -> &'static str {
        match self {
            Family::J => "J",
            Family::Hexagon { .. } => "Hexagon",
            Family::R { image: 0 } => "R",
            Family::P { image: 0, .. } => "P",
            Family::Q { image: 0, .. } => "Q",
            _ => "OrbitImage",
        }
    }
}

/// An eigenvector together with its claimed integer eigenvalue.
/// `A * vector = eigenvalue * vector` is checked exactly at construction.
#[derive(Debug, Clone, Serialize)]
pub struct EigenClaim {
    #[serde(flatten)]
    pub family: Family,
    pub eigenvalue: i64,
    #[serde(skip)]
    pub vector: SparseVector,
}

impl EigenClaim {
    pub fn new(g: &SRGraph, vector: SparseVector, eigenvalue: i64, family: Family) -> Result<Self> {
        if vector.is_zero() {
            return Err(Error::Internal(format!(
                "{family:?}: zero vector claimed as eigenvector"
            )));
        }
        if !g.is_eigenvector(&vector, eigenvalue) {
            return Err(Error::Internal(format!(
                "{family:?}: A*v != {eigenvalue}*v on SR({},{})",
                g.d(),
                g.n()
            )));
        }
        Ok(EigenClaim {
            family,
            eigenvalue,
            vector,
        })
    }

    /// Laplacian eigenvalue: 2n - (adjacency eigenvalue) for SR(3,n).
    pub fn laplacian_eigenvalue(&self, g: &SRGraph) -> i64 {
        g.degree() as i64 - self.eigenvalue
    }

    pub fn export(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.tag(),
            "parameters": self.family,
            "eigenvalue": self.eigenvalue,
            "support": self.vector.support_json(),
        })
    }
}

/// X_i, Y_i, Z_i for 0 <= i <= n: characteristic vectors of the lattice
/// lines with fixed first/second/third coordinate.
pub fn xyz_vectors(n: u32) -> (Vec<SparseVector>, Vec<SparseVector>, Vec<SparseVector>) {
    let mut xs = Vec::with_capacity(n as usize + 1);
    let mut ys = Vec::with_capacity(n as usize + 1);
    let mut zs = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let mut x = SparseVector::new();
        let mut y = SparseVector::new();
        let mut z = SparseVector::new();
        for j in 0..=(n - i) {
            let k = n - i - j;
            x.add_term(Vertex(vec![i, j, k]), BigInt::from(1));
            y.add_term(Vertex(vec![j, i, k]), BigInt::from(1));
            z.add_term(Vertex(vec![j, k, i]), BigInt::from(1));
        }
        xs.push(x);
        ys.push(y);
        zs.push(z);
    }
    (xs, ys, zs)
}

/// The all-ones vector J.
pub fn j_vector(n: u32) -> SparseVector {
    let (xs, _, _) = xyz_vectors(n);
    let mut j = SparseVector::new();
    for x in &xs {
        j.add_scaled(x, &BigInt::from(1));
    }
    j
}

/// Alternating-sign hexagon around the interior point (a,b,c).
pub fn hexagon_vector(n: u32, a: u32, b: u32, c: u32) -> Result<SparseVector> {
    if a + b + c != n {
        return Err(Error::Domain(format!("({a},{b},{c}) does not sum to {n}")));
    }
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::Domain(format!(
            "hexagon center ({a},{b},{c}) must be interior (all parts positive)"
        )));
    }
    let mut h = SparseVector::new();
    let terms: [(u32, u32, u32, i64); 6] = [
        (a - 1, b, c + 1, 1),
        (a, b - 1, c + 1, -1),
        (a + 1, b - 1, c, 1),
        (a + 1, b, c - 1, -1),
        (a, b + 1, c - 1, 1),
        (a - 1, b + 1, c, -1),
    ];
    for (i, j, k, s) in terms {
        h.add_term(Vertex(vec![i, j, k]), BigInt::from(s));
    }
    Ok(h)
}

/// R = X_k - Y_k - X_{k+1} + Y_{k+1} with k = floor(n/2);
/// eigenvalue (n-6)/2 for even n, (n-3)/2 for odd n.
pub fn r_vector(g: &SRGraph) -> Result<EigenClaim> {
    let n = g.n();
    if n < 1 {
        return Err(Error::Domain("R requires n >= 1".to_string()));
    }
    let k = (n / 2) as usize;
    let (xs, ys, _) = xyz_vectors(n);
    let one = BigInt::from(1);
    let mut r = SparseVector::new();
    r.add_scaled(&xs[k], &one);
    r.add_scaled(&ys[k], &(-&one));
    r.add_scaled(&xs[k + 1], &(-&one));
    r.add_scaled(&ys[k + 1], &one);
    let lambda = if n % 2 == 0 {
        (n as i64 - 6) / 2
    } else {
        (n as i64 - 3) / 2
    };
    EigenClaim::new(g, r, lambda, Family::R { image: 0 })
}

/// P_k = -(n-2k-1)(n-2k-2) Z_{n-k}
///       + sum_{i=k+1}^{n-k-1} [ 2(i-k-1) Z_i + (2i-n)(X_i+Y_i) ],
/// eigenvalue k-2, for 0 <= k <= floor((n-3)/2).
pub fn p_vector(g: &SRGraph, k: u32) -> Result<EigenClaim> {
    let n = g.n();
    if n < 3 || k > (n - 3) / 2 {
        return Err(Error::Domain(format!(
            "P_{k} undefined for n={n} (need 0 <= k <= floor((n-3)/2))"
        )));
    }
    let (xs, ys, zs) = xyz_vectors(n);
    let ni = n as i64;
    let ki = k as i64;
    let mut p = SparseVector::new();
    let lead = -(ni - 2 * ki - 1) * (ni - 2 * ki - 2);
    p.add_scaled(&zs[(n - k) as usize], &BigInt::from(lead));
    for i in (k + 1)..=(n - k - 1) {
        let ii = i as i64;
        p.add_scaled(&zs[i as usize], &BigInt::from(2 * (ii - ki - 1)));
        let cxy = BigInt::from(2 * ii - ni);
        p.add_scaled(&xs[i as usize], &cxy);
        p.add_scaled(&ys[i as usize], &cxy);
    }
    EigenClaim::new(g, p, ki - 2, Family::P { k, image: 0 })
}

/// Q_k = (n-2k+1)(n-2k+2) Z_k
///       + sum_{j=k}^{n-k} [ (2j-n)(X_j+Y_j) - 2(n-j-k+1) Z_j ],
/// eigenvalue n-k-2, for 0 <= k <= floor((n-2)/2).
pub fn q_vector(g: &SRGraph, k: u32) -> Result<EigenClaim> {
    let n = g.n();
    if n < 2 || k > (n - 2) / 2 {
        return Err(Error::Domain(format!(
            "Q_{k} undefined for n={n} (need 0 <= k <= floor((n-2)/2))"
        )));
    }
    let (xs, ys, zs) = xyz_vectors(n);
    let ni = n as i64;
    let ki = k as i64;
    let mut q = SparseVector::new();
    q.add_scaled(
        &zs[k as usize],
        &BigInt::from((ni - 2 * ki + 1) * (ni - 2 * ki + 2)),
    );
    for j in k..=(n - k) {
        let ji = j as i64;
        let cxy = BigInt::from(2 * ji - ni);
        q.add_scaled(&xs[j as usize], &cxy);
        q.add_scaled(&ys[j as usize], &cxy);
        q.add_scaled(&zs[j as usize], &BigInt::from(-2 * (ni - ji - ki + 1)));
    }
    EigenClaim::new(g, q, ni - ki - 2, Family::Q { k, image: 0 })
}

fn orbit3(g: &SRGraph, base: &EigenClaim, mk: impl Fn(u8) -> Family) -> Result<Vec<EigenClaim>> {
    let mut out = vec![base.clone()];
    let s1 = apply_perm(&base.vector, &SIGMA);
    let s2 = apply_perm(&s1, &SIGMA);
    out.push(EigenClaim::new(g, s1, base.eigenvalue, mk(1))?);
    out.push(EigenClaim::new(g, s2, base.eigenvalue, mk(2))?);
    Ok(out)
}

/// The predicted eigenvalue multiset of A(SR(3,n)): the parity-split table.
pub fn theorem1_spectrum(n: u32) -> BTreeMap<i64, u64> {
    let ni = n as i64;
    let mut t: BTreeMap<i64, u64> = BTreeMap::new();
    let mut add = |lam: i64, m: u64| {
        if m > 0 {
            *t.entry(lam).or_insert(0) += m;
        }
    };
    add(2 * ni, 1); // J
    if n >= 3 {
        let hex = (ni - 1) * (ni - 2) / 2; // interior points C(n-1,2)
        add(-3, hex as u64);
        for k in 0..=((n - 3) / 2) as i64 {
            add(k - 2, 3); // P_k
        }
    }
    if n >= 1 {
        let r = if n % 2 == 0 { (ni - 6) / 2 } else { (ni - 3) / 2 };
        add(r, 2);
    }
    if n >= 2 {
        for k in 0..=((n - 2) / 2) as i64 {
            add(ni - k - 2, 3); // Q_k
        }
    }
    t
}

/// Eigenvalue multiset of a set of claims.
pub fn eigenvalue_multiset(claims: &[EigenClaim]) -> BTreeMap<i64, u64> {
    let mut t = BTreeMap::new();
    for c in claims {
        *t.entry(c.eigenvalue).or_insert(0u64) += 1;
    }
    t
}

/// J, all hexagons, the R orbit (2 vectors), and the P_k / Q_k orbits
/// (3 vectors each). Every claim is verified exactly; the total count is
/// C(n+2,2) = N.
pub fn full_eigenbasis(n: u32) -> Result<Vec<EigenClaim>> {
    let g = SRGraph::build(3, n)?;
    full_eigenbasis_on(&g)
}

pub fn full_eigenbasis_on(g: &SRGraph) -> Result<Vec<EigenClaim>> {
    let n = g.n();
    if g.d() != 3 || n < 1 {
        return Err(Error::Domain(
            "full_eigenbasis requires SR(3,n) with n >= 1".to_string(),
        ));
    }
    let mut claims = Vec::new();
    claims.push(EigenClaim::new(
        g,
        j_vector(n),
        2 * n as i64,
        Family::J,
    )?);
    // hexagons: one per interior lattice point
    for a in 1..n {
        for b in 1..(n - a) {
            let c = n - a - b;
            if c == 0 {
                continue;
            }
            claims.push(EigenClaim::new(
                g,
                hexagon_vector(n, a, b, c)?,
                -3,
                Family::Hexagon { a, b, c },
            )?);
        }
    }
    // R orbit has dimension 2; take {R, sigma(R)}
    let r = r_vector(g)?;
    let sr = apply_perm(&r.vector, &SIGMA);
    let lam = r.eigenvalue;
    claims.push(r);
    claims.push(EigenClaim::new(g, sr, lam, Family::R { image: 1 })?);
    if n >= 3 {
        for k in 0..=((n - 3) / 2) {
            let p = p_vector(g, k)?;
            claims.extend(orbit3(g, &p, |image| Family::P { k, image })?);
        }
    }
    if n >= 2 {
        for k in 0..=((n - 2) / 2) {
            let q = q_vector(g, k)?;
            claims.extend(orbit3(g, &q, |image| Family::Q { k, image })?);
        }
    }
    if claims.len() != g.num_vertices() {
        return Err(Error::Internal(format!(
            "eigenbasis for n={n} has {} claims, expected N={}",
            claims.len(),
            g.num_vertices()
        )));
    }
    Ok(claims)
}

/// Verify that the claims form a linearly independent (hence spanning)
/// set. Eigenvectors of a symmetric matrix with distinct eigenvalues are
/// orthogonal, so it suffices to check each eigenvalue class: hexagons by
/// distinct lexicographic leading terms, the small orbit classes by exact
/// rank.
pub fn verify_independence(g: &SRGraph, claims: &[EigenClaim]) -> Result<()> {
    let mut by_eig: BTreeMap<i64, Vec<&EigenClaim>> = BTreeMap::new();
    for c in claims {
        by_eig.entry(c.eigenvalue).or_default().push(c);
    }
    for (lam, group) in &by_eig {
        let leads: std::collections::BTreeSet<&Vertex> = group
            .iter()
            .filter_map(|c| c.vector.lex_min().map(|(v, _)| v))
            .collect();
        if leads.len() == group.len() {
            // each vector's lex-min support point is unique to it:
            // ordering by leading term gives a triangular system
            continue;
        }
        let vecs: Vec<SparseVector> = group.iter().map(|c| c.vector.clone()).collect();
        let m = SparseVector::family_matrix(&vecs, g);
        if exact_linalg::rank(&m) != group.len() {
            return Err(Error::Internal(format!(
                "eigenvalue {lam}: claimed multiplicity {} but family rank is lower",
                group.len()
            )));
        }
    }
    Ok(())
}

/// Expansion of `v` over the basis B'_n = {X_i, Y_i, Z_i : 0 <= i <= n-1}
/// (columns ordered X_0..X_{n-1}, Y_0..Y_{n-1}, Z_0..Z_{n-1}), or `None`
/// when v is not in the span.
pub fn basis_prime_expand(
    g: &SRGraph,
    v: &SparseVector,
) -> Option<Vec<num_rational::Ratio<BigInt>>> {
    let n = g.n();
    let (xs, ys, zs) = xyz_vectors(n);
    let mut cols: Vec<SparseVector> = Vec::with_capacity(3 * n as usize);
    cols.extend_from_slice(&xs[..n as usize]);
    cols.extend_from_slice(&ys[..n as usize]);
    cols.extend_from_slice(&zs[..n as usize]);
    let nv = g.num_vertices();
    let mut m = crate::IntMatrix::zero(nv, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (x, c) in col.iter() {
            let i = g.vertex_index(x).expect("basis vector on ambient graph");
            *m.get_mut(i, j) = c.clone();
        }
    }
    let b = v.to_dense(g);
    exact_linalg::solve(&m, &b)
}
