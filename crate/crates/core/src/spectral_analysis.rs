//! Integral-spectrum certification, spanning-tree counts, equitable
//! quotient matrices, the ratio bound, and exact independence numbers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{self, Matrix};
use crate::lattice_graph::{SRGraph, Vertex};
use crate::{binomial, BigRational, IntMatrix};

pub const MATRIX_TREE_CAP: usize = 600;
pub const INDEPENDENCE_CAP: usize = 120;

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// eigenvalue -> multiplicity (exact nullity)
    pub pairs: BTreeMap<i64, usize>,
    /// true iff exact multiplicities sum to N
    pub certified: bool,
    /// float eigenvalues that failed the integer screen, with residuals
    pub non_integer_residuals: Vec<(f64, f64)>,
}

impl Spectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.pairs.values().sum()
    }

    /// Laplacian spectrum {delta - lambda} of a delta-regular graph.
    pub fn laplacian_pairs(&self, degree: i64) -> BTreeMap<i64, usize> {
        self.pairs.iter().map(|(&l, &m)| (degree - l, m)).collect()
    }

    /// sum lambda*mult = 0 and sum lambda^2*mult = 2|E|.
    pub fn trace_identities_hold(&self, num_edges: u64) -> bool {
        let t1: i64 = self.pairs.iter().map(|(&l, &m)| l * m as i64).sum();
        let t2: i64 = self.pairs.iter().map(|(&l, &m)| l * l * m as i64).sum();
        t1 == 0 && t2 == 2 * num_edges as i64
    }
}

/// Deterministic Miller-Rabin for u64; the listed bases are exact for the
/// whole 64-bit range.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let pow = |mut b: u64, mut e: u64| -> u64 {
        let mut acc = 1u128;
        let mut bb = b as u128 % n as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % n as u128;
            }
            bb = bb * bb % n as u128;
            e >>= 1;
        }
        b = acc as u64;
        b
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes descending from 2^62, as many as requested.
fn primes_62bit(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(p) {
            out.push(p);
        }
        p -= 2;
    }
    out
}

fn matrix_mod_p(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pbig = BigInt::from(p);
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let r = ((m.get(i, j) % &pbig) + &pbig) % &pbig;
                    r.to_u64().unwrap()
                })
                .collect()
        })
        .collect()
}

/// a (dense) times b (rows in sparse (col, value) form), mod p.
fn matmul_sparse_mod_p(a: &[Vec<u64>], b: &[Vec<(u32, u64)>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let m = b.len();
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        let row_out = &mut out[i];
        for (k, &aik) in a[i].iter().enumerate() {
            if aik == 0 {
                continue;
            }
            let aik = aik as u128;
            for &(j, bkj) in &b[k] {
                let jj = j as usize;
                let v = row_out[jj] as u128 + aik * bkj as u128 % p as u128;
                row_out[jj] = (v % p as u128) as u64;
            }
        }
    }
    out
}

fn to_sparse_rows(m: &[Vec<u64>]) -> Vec<Vec<(u32, u64)>> {
    m.iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(j, &v)| (j as u32, v))
                .collect()
        })
        .collect()
}

/// prod over candidates of (M - lambda*I) equals zero — checked modulo
/// enough primes that their product exceeds twice the row-norm bound on
/// the exact product's entries, which makes the conclusion exact.
fn annihilating_product_is_zero(m: &IntMatrix, candidates: &[i64]) -> Result<bool> {
    let k = m.rows();
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if candidates.is_empty() {
        return Ok(k == 0);
    }
    // infinity norm of each factor bounds the product entrywise
    let mut bound = BigInt::one();
    for &lam in candidates {
        let mut norm = BigInt::zero();
        for i in 0..k {
            let mut row = BigInt::from(lam).abs();
            for j in 0..k {
                if i != j {
                    row += m.get(i, j).abs();
                } else {
                    row += (m.get(i, j) - BigInt::from(lam)).abs();
                }
            }
            norm = norm.max(row);
        }
        bound *= norm.max(BigInt::one());
    }
    bound = bound * 2 + 1;
    let mut primes = Vec::new();
    let mut acc = BigInt::one();
    for p in primes_62bit(64) {
        primes.push(p);
        acc *= BigInt::from(p);
        if acc > bound {
            break;
        }
    }
    for p in primes {
        // the factors differ only on the diagonal; keep them sparse
        let shifted: Vec<Vec<Vec<(u32, u64)>>> = candidates
            .iter()
            .map(|&lam| {
                let s = m.plus_scalar_diag(&BigInt::from(-lam)).unwrap();
                to_sparse_rows(&matrix_mod_p(&s, p))
            })
            .collect();
        let mut prod = matrix_mod_p(&m.plus_scalar_diag(&BigInt::from(-candidates[0]))?, p);
        for f in &shifted[1..] {
            prod = matmul_sparse_mod_p(&prod, f, p);
        }
        if prod.iter().any(|r| r.iter().any(|&x| x != 0)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact eigenvalue multiplicities of a diagonalizable integer matrix
/// whose spectrum is suspected to be exactly `candidates`.
///
/// Certificate: (a) the annihilating product vanishes, so every eigenvalue
/// is a candidate and the geometric multiplicities sum to the dimension;
/// (b) nullity mod p bounds the rational nullity from above, so when the
/// mod-p nullities also sum to the dimension each one is exact.
pub fn certify_integer_spectrum(
    m: &IntMatrix,
    candidates: &[i64],
) -> Result<Option<BTreeMap<i64, usize>>> {
    let k = m.rows();
    if !annihilating_product_is_zero(m, candidates)? {
        return Ok(None);
    }
    for p in primes_62bit(8) {
        let mut total = 0usize;
        let mut pairs = BTreeMap::new();
        for &lam in candidates {
            let shifted = m.plus_scalar_diag(&BigInt::from(-lam))?;
            let mut rows = matrix_mod_p(&shifted, p);
            let nul = k - exact_linalg::rank_mod_p(&mut rows, p);
            if nul > 0 {
                pairs.insert(lam, nul);
                total += nul;
            }
        }
        if total == k {
            return Ok(Some(pairs));
        }
        // an unlucky prime inflates some nullity; total < k is impossible
        debug_assert!(total > k);
    }
    Ok(None)
}

/// Integer candidates near the float spectrum; residual list for the rest.
fn float_candidates(eigs: &[f64]) -> (Vec<i64>, Vec<(f64, f64)>) {
    let mut candidates = Vec::new();
    let mut residuals = Vec::new();
    for &e in eigs {
        let r = e.round();
        if (e - r).abs() < 1e-8 {
            let c = r as i64;
            if !candidates.contains(&c) {
                candidates.push(c);
            }
        } else {
            residuals.push((e, e - r));
        }
    }
    candidates.sort_unstable();
    (candidates, residuals)
}

/// Certify the spectrum of A(SR(d,n)) by exact nullity of A - lambda*I
/// over the integers, one candidate at a time. Candidates come from a
/// float pre-screen unless `exact_only` scans every integer in
/// [-delta, delta].
pub fn integral_spectrum(g: &SRGraph, exact_only: bool) -> Result<Spectrum> {
    let nv = g.num_vertices();
    let delta = g.degree() as i64;
    let (candidates, residuals) = if exact_only {
        ((-delta..=delta).collect(), Vec::new())
    } else {
        let eigs = g.adjacency_f64().symmetric_eigen().eigenvalues;
        float_candidates(eigs.as_slice())
    };
    let a = g.adjacency_matrix();
    if exact_only || nv <= 60 {
        // dense fraction-free nullity per candidate
        let entries: Vec<(i64, usize)> = candidates
            .par_iter()
            .map(|&lam| {
                let shifted = a.plus_scalar_diag(&BigInt::from(-lam))?;
                Ok((lam, exact_linalg::nullity(&shifted)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let pairs: BTreeMap<i64, usize> = entries.into_iter().filter(|&(_, m)| m > 0).collect();
        let total: usize = pairs.values().sum();
        return Ok(Spectrum {
            certified: total == nv && residuals.is_empty(),
            pairs,
            non_integer_residuals: residuals,
        });
    }
    if !residuals.is_empty() {
        return Ok(Spectrum {
            pairs: BTreeMap::new(),
            certified: false,
            non_integer_residuals: residuals,
        });
    }
    match certify_integer_spectrum(&a, &candidates)? {
        Some(pairs) => Ok(Spectrum {
            pairs,
            certified: true,
            non_integer_residuals: residuals,
        }),
        None => Ok(Spectrum {
            pairs: BTreeMap::new(),
            certified: false,
            non_integer_residuals: residuals,
        }),
    }
}

/// Spanning trees of SR(3,n): the parity-split closed form, evaluated in
/// exact rational arithmetic and asserted integral.
pub fn spanning_trees_formula(n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".to_string()));
    }
    let n = n as i64;
    let exp = binomial(BigInt::from(n - 1), 2)
        .to_u64()
        .ok_or_else(|| Error::Resource("exponent overflow".to_string()))?;
    let mut num = BigInt::from(32) * BigInt::from(2 * n + 3).pow(exp as u32);
    for a in (n + 2)..=(2 * n + 2) {
        num *= BigInt::from(a).pow(3);
    }
    let den = if n % 2 == 1 {
        BigInt::from(3) * BigInt::from(n + 1).pow(2) * (n + 2) * BigInt::from(3 * n + 5).pow(3)
    } else {
        BigInt::from(3) * (n + 1) * BigInt::from(n + 2).pow(2) * BigInt::from(3 * n + 4).pow(3)
    };
    let q = BigRational::new(num, den);
    if !q.is_integer() || !q.is_positive() {
        return Err(Error::Internal(format!(
            "closed form gave non-integer tree count {q} at n={n}"
        )));
    }
    Ok(q.to_integer())
}

/// Kirchhoff count: determinant of the Laplacian with one row/column
/// removed (vertex `delete`, default 0).
pub fn spanning_trees_matrix_tree_at(g: &SRGraph, delete: usize) -> Result<BigInt> {
    let nv = g.num_vertices();
    if nv > MATRIX_TREE_CAP {
        return Err(Error::Resource(format!(
            "matrix-tree determinant capped at {MATRIX_TREE_CAP} vertices, graph has {nv}"
        )));
    }
    if delete >= nv {
        return Err(Error::Index(format!("vertex {delete} out of range")));
    }
    exact_linalg::determinant(&g.laplacian().minor(delete, delete))
}

pub fn spanning_trees_matrix_tree(g: &SRGraph) -> Result<BigInt> {
    spanning_trees_matrix_tree_at(g, 0)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientMatrix {
    /// sorted-coordinate representative of each orbit, descending coords
    pub orbits: Vec<Vertex>,
    pub orbit_sizes: Vec<u64>,
    /// f(i,j) = |N(x) cap O_j| for any x in O_i
    pub entries: Matrix<BigInt>,
}

fn orbit_key(v: &Vertex) -> Vec<u32> {
    let mut k = v.0.clone();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

/// Partitions of n into at most d parts, descending, lex order.
fn orbit_representatives(d: usize, n: u32) -> Vec<Vertex> {
    fn go(rest: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vertex>) {
        if slots == 0 {
            if rest == 0 {
                out.push(Vertex(cur.clone()));
            }
            return;
        }
        if slots == 1 {
            if rest <= max {
                cur.push(rest);
                out.push(Vertex(cur.clone()));
                cur.pop();
            }
            return;
        }
        let lo = rest.div_ceil(slots as u32);
        for v in (lo..=rest.min(max)).rev() {
            cur.push(v);
            go(rest - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    go(n, n, d, &mut cur, &mut out);
    out.sort();
    out
}

/// Neighbors of x in SR(d,n): move t chips between a coordinate pair.
fn neighbors_of(x: &[u32]) -> Vec<Vec<u32>> {
    let d = x.len();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            for t in 1..=x[i] {
                let mut y = x.to_vec();
                y[i] -= t;
                y[j] += t;
                out.push(y);
            }
        }
    }
    out
}

fn quotient_rows(reps: &[Vertex]) -> Matrix<BigInt> {
    let k = reps.len();
    let idx: std::collections::HashMap<Vec<u32>, usize> = reps
        .iter()
        .enumerate()
        .map(|(i, r)| (r.0.clone(), i))
        .collect();
    let mut m = Matrix::zero(k, k);
    for (i, r) in reps.iter().enumerate() {
        for y in neighbors_of(&r.0) {
            let j = idx[&orbit_key(&Vertex(y))];
            *m.get_mut(i, j) += 1;
        }
    }
    m
}

/// Multinomial orbit size: d! / prod (multiplicity of each value)!.
fn orbit_size(d: usize, rep: &Vertex) -> u64 {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &c in &rep.0 {
        *counts.entry(c).or_insert(0) += 1;
    }
    let mut size = BigInt::one();
    for i in 1..=d as u64 {
        size *= i;
    }
    for m in counts.values() {
        for i in 1..=*m {
            size /= i;
        }
    }
    size.to_u64().expect("orbit size fits u64")
}

/// P(G) from orbit representatives alone; the full graph is never built,
/// so this scales to large n.
pub fn quotient_matrix_combinatorial(d: usize, n: u32) -> Result<QuotientMatrix> {
    if d == 0 {
        return Err(Error::Domain("need d >= 1".to_string()));
    }
    let reps = orbit_representatives(d, n);
    let entries = quotient_rows(&reps);
    let orbit_sizes = reps.iter().map(|r| orbit_size(d, r)).collect();
    Ok(QuotientMatrix {
        orbits: reps,
        orbit_sizes,
        entries,
    })
}

/// P(G) with the equitability of the S_d orbit partition verified over
/// every vertex, not just the representatives.
pub fn quotient_matrix(g: &SRGraph) -> Result<QuotientMatrix> {
    let q = quotient_matrix_combinatorial(g.d(), g.n())?;
    let idx: std::collections::HashMap<Vec<u32>, usize> = q
        .orbits
        .iter()
        .enumerate()
        .map(|(i, r)| (r.0.clone(), i))
        .collect();
    let mut seen = vec![0u64; q.orbits.len()];
    for (u, x) in g.vertices().iter().enumerate() {
        let i = idx[&orbit_key(x)];
        seen[i] += 1;
        let mut row = vec![BigInt::zero(); q.orbits.len()];
        for &v in g.neighbors(u) {
            row[idx[&orbit_key(g.vertex(v as usize))]] += 1;
        }
        for (j, c) in row.iter().enumerate() {
            if c != q.entries.get(i, j) {
                return Err(Error::Mismatch(format!(
                    "orbit partition not equitable at vertex {x}: f({i},{j}) differs"
                )));
            }
        }
    }
    if seen != q.orbit_sizes {
        return Err(Error::Internal("orbit size mismatch".to_string()));
    }
    Ok(q)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub d: usize,
    pub n: u32,
    pub num_orbits: usize,
    /// distinct quotient eigenvalues (ascending) when integral
    pub eigenvalues: Vec<i64>,
    pub integral: bool,
    /// true when the annihilating product was verified exactly
    pub certified: bool,
    /// Some(true/false) when the containment in spec(A) was checked
    pub contained_in_adjacency: Option<bool>,
    pub non_integer_residuals: Vec<(f64, f64)>,
}

/// Is the quotient spectrum integral? Float screen on the symmetrized
/// matrix s(i,j) = f(i,j)*sqrt(|O_i|/|O_j|), then the exact certificate
/// prod_lambda (P - lambda*I) = 0: P is diagonalizable (similar to a
/// symmetric matrix), so a vanishing product over the candidate set
/// proves every eigenvalue lies in it.
pub fn quotient_spectrum_integral(d: usize, n: u32, subset_cap: usize) -> Result<QuotientReport> {
    let q = quotient_matrix_combinatorial(d, n)?;
    let k = q.orbits.len();
    let mut sym = nalgebra::DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let f = q.entries.get(i, j).to_f64().unwrap();
            sym[(i, j)] = f * (q.orbit_sizes[i] as f64 / q.orbit_sizes[j] as f64).sqrt();
        }
    }
    let eigs = sym.symmetric_eigen().eigenvalues;
    let (candidates, residuals) = float_candidates(eigs.as_slice());

    // P is diagonalizable (similar to a symmetric matrix through
    // D^{1/2}), so the integer-spectrum certificate applies
    let mut certified = false;
    let mut eigenvalues: Vec<i64> = Vec::new();
    if residuals.is_empty() {
        if let Some(pairs) = certify_integer_spectrum(&q.entries, &candidates)? {
            eigenvalues = pairs.keys().copied().collect();
            certified = true;
        }
    }
    let integral = residuals.is_empty() && certified;

    let big_n = crate::lattice_graph::vertex_count(d, n);
    let contained = if integral && big_n <= BigInt::from(subset_cap as u64) {
        let g = SRGraph::build(d, n)?;
        let spec = integral_spectrum(&g, false)?;
        Some(spec.certified && eigenvalues.iter().all(|l| spec.pairs.contains_key(l)))
    } else {
        None
    };

    Ok(QuotientReport {
        d,
        n,
        num_orbits: k,
        eigenvalues,
        integral,
        certified,
        contained_in_adjacency: contained,
        non_integer_residuals: residuals,
    })
}

/// Hoffman-style bound on the independence number: -tau*N/(delta - tau)
/// with tau = -C(d,2), valid once n >= C(d,2).
pub fn ratio_bound(d: usize, n: u32) -> Result<BigRational> {
    let tau = (d as i64) * (d as i64 - 1) / 2;
    if (n as i64) < tau {
        return Err(Error::Domain(format!(
            "ratio bound needs n >= C(d,2) = {tau}, got n = {n}"
        )));
    }
    let big_n = crate::lattice_graph::vertex_count(d, n);
    let delta = BigInt::from((d as i64 - 1) * n as i64);
    Ok(BigRational::new(BigInt::from(tau) * big_n, delta + tau))
}

/// Exact maximum independent set via branch and bound on bitsets:
/// branching by maximum residual degree, greedy clique-cover bound.
pub fn independence_number(g: &SRGraph) -> Result<usize> {
    let nv = g.num_vertices();
    if nv > INDEPENDENCE_CAP {
        return Err(Error::Resource(format!(
            "independence search capped at {INDEPENDENCE_CAP} vertices, graph has {nv}"
        )));
    }
    let adj: Vec<u128> = (0..nv)
        .map(|i| {
            g.neighbors(i)
                .iter()
                .fold(0u128, |m, &j| m | (1u128 << j))
        })
        .collect();
    let full: u128 = if nv == 128 {
        u128::MAX
    } else {
        (1u128 << nv) - 1
    };
    // greedy min-degree seed gives the branch and bound a strong initial
    // incumbent to prune against
    let mut best = 0usize;
    let mut avail = full;
    while avail != 0 {
        let mut pick = usize::MAX;
        let mut min_deg = usize::MAX;
        let mut m = avail;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let deg = (adj[v] & avail).count_ones() as usize;
            if deg < min_deg {
                min_deg = deg;
                pick = v;
            }
        }
        avail &= !(1u128 << pick) & !adj[pick];
        best += 1;
    }
    let greedy = best;
    mis_branch(&adj, full, 0, &mut best);
    debug_assert!(best >= greedy);
    Ok(best)
}

/// Greedy clique cover of `avail`: each clique contributes at most one
/// vertex to an independent set, so the cover size bounds it above.
fn clique_cover_bound(adj: &[u128], mut avail: u128) -> usize {
    let mut cliques = 0;
    while avail != 0 {
        let mut v = avail.trailing_zeros() as usize;
        let mut clique = 1u128 << v;
        let mut common = adj[v] & avail;
        while common != 0 {
            v = common.trailing_zeros() as usize;
            clique |= 1u128 << v;
            common &= adj[v];
        }
        avail &= !clique;
        cliques += 1;
    }
    cliques
}

fn mis_branch(adj: &[u128], avail: u128, size: usize, best: &mut usize) {
    if avail == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + clique_cover_bound(adj, avail) <= *best {
        return;
    }
    // branch on a vertex of maximum residual degree; taking or dropping it
    let mut pick = usize::MAX;
    let mut max_deg = usize::MAX;
    let mut m = avail;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let deg = (adj[v] & avail).count_ones() as usize;
        if max_deg == usize::MAX || deg > max_deg {
            max_deg = deg;
            pick = v;
        }
    }
    if max_deg == 0 {
        *best = (*best).max(size + avail.count_ones() as usize);
        return;
    }
    let v = pick;
    mis_branch(adj, avail & !(1u128 << v) & !adj[v], size + 1, best);
    mis_branch(adj, avail & !(1u128 << v), size, best);
}
