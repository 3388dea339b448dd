//! Inversion words, skyline rook placements, partial permutohedra and the
//! signed eigenvectors F_pi of eigenvalue -n, plus the Mahonian and
//! induced-subgraph conjecture harnesses.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg;
use crate::lattice_graph::{SRGraph, Vertex};
use crate::sparse_vec::SparseVector;

/// A permutation of {1..d}, stored as its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((1..=d as u32).collect())
    }

    pub fn reversal(d: usize) -> Self {
        Permutation((1..=d as u32).rev().collect())
    }

    pub fn new(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d + 1];
        for &x in &images {
            if x == 0 || x as usize > d || seen[x as usize] {
                return Err(Error::Domain(format!("{images:?} is not a permutation")));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inversions(&self) -> u32 {
        let mut c = 0;
        for i in 0..self.0.len() {
            for j in (i + 1)..self.0.len() {
                if self.0[i] > self.0[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// a_i = #{j > i : pi_i > pi_j}; a vertex of SR(d,n) when pi has n
    /// inversions.
    pub fn inversion_word(&self) -> Vertex {
        let d = self.0.len();
        let mut a = vec![0u32; d];
        for i in 0..d {
            for j in (i + 1)..d {
                if self.0[i] > self.0[j] {
                    a[i] += 1;
                }
            }
        }
        Vertex(a)
    }

    /// All permutations of {1..d}, lexicographic.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(d);
        let mut used = vec![false; d + 1];
        gen_perms(d, &mut cur, &mut used, &mut out, &|_| true);
        out
    }

    /// Permutations of {1..d} with exactly n inversions.
    pub fn with_inversions(d: usize, n: u32) -> Vec<Permutation> {
        Permutation::all(d)
            .into_iter()
            .filter(|p| p.inversions() == n)
            .collect()
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn gen_perms(
    d: usize,
    cur: &mut Vec<u32>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
    prefix_ok: &dyn Fn(&[u32]) -> bool,
) {
    if cur.len() == d {
        out.push(Permutation(cur.clone()));
        return;
    }
    for x in 1..=d as u32 {
        if used[x as usize] {
            continue;
        }
        cur.push(x);
        if prefix_ok(cur) {
            used[x as usize] = true;
            gen_perms(d, cur, used, out, prefix_ok);
            used[x as usize] = false;
        }
        cur.pop();
    }
}

/// Mahonian number M(d,n): permutations of d letters with n inversions,
/// by the recurrence M(d,n) = sum_{k=0}^{min(n,d-1)} M(d-1, n-k).
pub fn mahonian(d: usize, n: u32) -> u64 {
    let mut row = vec![1u64]; // M(1, .) = [1]
    for dd in 2..=d.max(1) {
        let max_inv = dd * (dd - 1) / 2;
        let mut next = vec![0u64; max_inv + 1];
        for (m, v) in next.iter_mut().enumerate() {
            for k in 0..dd.min(m + 1) {
                if let Some(&prev) = row.get(m - k) {
                    *v += prev;
                }
            }
        }
        row = next;
    }
    row.get(n as usize).copied().unwrap_or(0)
}

/// A permutation's partial permutohedron: its admissible permutations and
/// their lattice points x(sigma) = a(pi) + id - sigma.
#[derive(Debug, Clone)]
pub struct PartialPermutohedron {
    pub pi: Permutation,
    pub inversion_word: Vertex,
    pub admissible: Vec<Permutation>,
    pub points: Vec<Vertex>,
}

/// Enumerate Adm(pi) = {sigma : a_i - sigma_i + i >= 0 for all i},
/// i.e. proper rook placements on the skyline board Sky(a_1+1,...,a_d+d).
/// The prefix condition prunes the d! search.
pub fn admissible_set(pi: &Permutation) -> Result<PartialPermutohedron> {
    let a = pi.inversion_word();
    let d = pi.len();
    let mut admissible = Vec::new();
    let mut cur = Vec::with_capacity(d);
    let mut used = vec![false; d + 1];
    let av = a.0.clone();
    gen_perms(
        d,
        &mut cur,
        &mut used,
        &mut admissible,
        &|prefix: &[u32]| {
            let i = prefix.len() - 1;
            prefix[i] <= av[i] + i as u32 + 1
        },
    );
    let points: Vec<Vertex> = admissible
        .iter()
        .map(|s| {
            Vertex(
                (0..d)
                    .map(|i| a.0[i] + (i as u32 + 1) - s.0[i])
                    .collect(),
            )
        })
        .collect();
    // sigma -> x(sigma) must be injective per pi; a collision would merge
    // signed coefficients silently, so it is reported instead
    let mut sorted = points.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != points.len() {
        return Err(Error::Internal(format!(
            "distinct admissible permutations of pi={pi} collide at the same lattice point"
        )));
    }
    Ok(PartialPermutohedron {
        pi: pi.clone(),
        inversion_word: a,
        admissible,
        points,
    })
}

/// F_pi: coefficient eps(sigma) at x(sigma) for sigma in Adm(pi).
/// An exact eigenvector of A(SR(d,n)) with eigenvalue -n.
pub fn f_vector(g: &SRGraph, pi: &Permutation) -> Result<SparseVector> {
    let n = pi.inversions();
    if pi.len() != g.d() || n != g.n() {
        return Err(Error::Mismatch(format!(
            "pi={pi} has {n} inversions on {} letters; graph is SR({},{})",
            pi.len(),
            g.d(),
            g.n()
        )));
    }
    let pp = admissible_set(pi)?;
    let mut v = SparseVector::new();
    for (s, x) in pp.admissible.iter().zip(&pp.points) {
        v.add_term(x.clone(), BigInt::from(s.sign()));
    }
    Ok(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct InducedReport {
    pub pi: String,
    pub num_points: usize,
    pub regular: bool,
    pub laplacian_integral: bool,
    pub distinct_eigs: usize,
    pub laplacian_spectrum: Vec<(i64, usize)>,
}

/// Induced subgraph of SR(d,n) on ParP(pi): n-regularity and exact
/// Laplacian integrality (float screen, then nullity confirmation summing
/// to the vertex count).
pub fn induced_subgraph_check(g: &SRGraph, pi: &Permutation) -> Result<InducedReport> {
    let n = g.n();
    let pp = admissible_set(pi)?;
    let k = pp.points.len();
    let idx: std::collections::HashMap<&Vertex, usize> =
        pp.points.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj = vec![vec![false; k]; k];
    for (i, x) in pp.points.iter().enumerate() {
        let gi = g
            .vertex_index(x)
            .ok_or_else(|| Error::Internal(format!("{x} not in SR({},{})", g.d(), n)))?;
        for &j in g.neighbors(gi) {
            if let Some(&jj) = idx.get(g.vertex(j as usize)) {
                adj[i][jj] = true;
            }
        }
    }
    let degs: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let regular = degs.iter().all(|&dg| dg == n as usize);

    // Laplacian of the induced subgraph (own degrees, parent labels kept
    // in the report through pi and points)
    let lap = crate::IntMatrix::from_fn(k, k, |i, j| {
        if i == j {
            BigInt::from(degs[i] as i64)
        } else if adj[i][j] {
            BigInt::from(-1)
        } else {
            BigInt::from(0)
        }
    });
    let mut lf = nalgebra::DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            use num_traits::ToPrimitive;
            lf[(i, j)] = lap.get(i, j).to_f64().unwrap();
        }
    }
    let eigs = lf.symmetric_eigen().eigenvalues;
    let mut candidates: Vec<i64> = Vec::new();
    let mut all_near_integer = true;
    for &e in eigs.iter() {
        let r = e.round();
        if (e - r).abs() >= 1e-8 {
            all_near_integer = false;
        } else if !candidates.contains(&(r as i64)) {
            candidates.push(r as i64);
        }
    }
    candidates.sort_unstable();
    let mut spectrum = Vec::new();
    let mut laplacian_integral = false;
    if all_near_integer {
        if let Some(pairs) =
            crate::spectral_analysis::certify_integer_spectrum(&lap, &candidates)?
        {
            spectrum = pairs.into_iter().collect();
            laplacian_integral = true;
        }
    }
    Ok(InducedReport {
        pi: pi.to_string(),
        num_points: k,
        regular,
        laplacian_integral,
        distinct_eigs: spectrum.len(),
        laplacian_spectrum: spectrum,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MahonianReport {
    pub d: usize,
    pub n: u32,
    #[serde(rename = "N")]
    pub num_vertices: usize,
    pub mahonian: u64,
    pub num_vectors: usize,
    /// rank of {F_pi}; exact (distinct lexicographic leading terms).
    pub rank: usize,
    /// every F_pi satisfies A*F = -n*F exactly
    pub all_exact_eigenvectors: bool,
    pub exact_nullity: usize,
    pub nullity_matches_mahonian: bool,
    pub min_eig_float: f64,
    pub min_eig_is_minus_n: bool,
    pub per_pi: Vec<InducedReport>,
}

/// Build every F_pi for pi in S_{d,n}, verify the exact eigen-relations,
/// the rank, and that nullity(A + nI) equals the Mahonian number.
pub fn mahonian_eigenspace_check(
    d: usize,
    n: u32,
    cap: usize,
    with_induced: bool,
) -> Result<MahonianReport> {
    let max_inv = (d * (d - 1) / 2) as u32;
    if n >= max_inv {
        return Err(Error::Domain(format!(
            "need n < C(d,2) = {max_inv} for the Mahonian harness"
        )));
    }
    let g = SRGraph::build_with_cap(d, n, cap)?;
    let nv = g.num_vertices();
    let perms = Permutation::with_inversions(d, n);
    let m = mahonian(d, n);
    assert_eq!(perms.len() as u64, m, "DP recurrence vs enumeration");

    let mut vectors = Vec::with_capacity(perms.len());
    let mut all_exact = true;
    for pi in &perms {
        let f = f_vector(&g, pi)?;
        if !g.is_eigenvector(&f, -(n as i64)) {
            all_exact = false;
        }
        vectors.push(f);
    }

    // rank{F_pi}: pi -> a(pi) is injective and e_{a(pi)} is the
    // lex-largest support point of F_pi with coefficient +1, so the
    // family is triangular
    let mut leads: Vec<Vertex> = Vec::new();
    let mut triangular = true;
    for (pi, f) in perms.iter().zip(&vectors) {
        let a = pi.inversion_word();
        match f.lex_max() {
            Some((v, c)) if *v == a && *c == BigInt::from(1) => leads.push(a),
            _ => triangular = false,
        }
    }
    leads.sort();
    leads.dedup();
    let rank = if triangular && leads.len() == perms.len() {
        perms.len()
    } else {
        let fam = SparseVector::family_matrix(&vectors, &g);
        exact_linalg::rank(&fam)
    };

    let exact_nullity = certified_nullity_shifted(&g, n as i64, &vectors, rank)?;

    let af = g.adjacency_f64();
    let eigs = af.symmetric_eigen().eigenvalues;
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);

    let per_pi = if with_induced {
        perms
            .iter()
            .map(|pi| induced_subgraph_check(&g, pi))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    Ok(MahonianReport {
        d,
        n,
        num_vertices: nv,
        mahonian: m,
        num_vectors: vectors.len(),
        rank,
        all_exact_eigenvectors: all_exact,
        exact_nullity,
        nullity_matches_mahonian: exact_nullity == m as usize,
        min_eig_float: min_eig,
        min_eig_is_minus_n: (min_eig + n as f64).abs() < 1e-8,
        per_pi,
    })
}

/// Exact nullity of A + nI. Dense Bareiss for small graphs; for larger
/// ones, a modular rank lower bound combined with the exhibited exact
/// kernel vectors gives the same certificate:
/// rank >= rank_mod_p and nullity >= #independent kernel vectors, so when
/// rank_mod_p = N - k the nullity is exactly k.
fn certified_nullity_shifted(
    g: &SRGraph,
    n: i64,
    kernel_vectors: &[SparseVector],
    kernel_rank: usize,
) -> Result<usize> {
    let nv = g.num_vertices();
    if nv <= 150 {
        let shifted = g.adjacency_matrix().plus_scalar_diag(&BigInt::from(n))?;
        return exact_linalg::nullity(&shifted);
    }
    for &p in &exact_linalg::RANK_PRIMES {
        let mut rows: Vec<Vec<u64>> = (0..nv)
            .map(|i| {
                let mut r = vec![0u64; nv];
                r[i] = exact_linalg::mod_reduce(n, p);
                for &j in g.neighbors(i) {
                    r[j as usize] = 1;
                }
                r
            })
            .collect();
        let rank_p = exact_linalg::rank_mod_p(&mut rows, p);
        // kernel vectors are exact (-n)-eigenvectors: nullity >= kernel_rank
        let all_kernel = kernel_vectors.iter().all(|v| g.is_eigenvector(v, -n));
        if all_kernel && rank_p == nv - kernel_rank {
            return Ok(kernel_rank);
        }
    }
    Err(Error::Internal(
        "modular rank bound did not meet the kernel dimension; no certificate".to_string(),
    ))
}
