//! Lattice permutohedron eigenvectors H_{p,w} for general d: the standard
//! offset, center packing counts, orthogonality to lattice lines, and the
//! line-span + permutohedron-span rank harness.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg;
use crate::lattice_graph::{SRGraph, Vertex};
use crate::rook_eigen::Permutation;
use crate::sparse_vec::SparseVector;

pub type OffsetVector = Vec<Rational64>;

/// nu_d = ((1-d)/2, (3-d)/2, ..., (d-1)/2); integral for odd d,
/// half-integral for even d.
pub fn standard_offset(d: usize) -> OffsetVector {
    (0..d)
        .map(|i| Rational64::new(2 * i as i64 + 1 - d as i64, 2))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutohedronSpec {
    /// d rationals summing to n (integral for odd d, half-integral for even)
    pub center: Vec<Rational64>,
    /// any vector with pairwise distinct entries; nu_d by default
    pub offset: OffsetVector,
}

impl PermutohedronSpec {
    pub fn standard(center: Vec<Rational64>) -> Self {
        let d = center.len();
        PermutohedronSpec {
            center,
            offset: standard_offset(d),
        }
    }
}

/// H_{p,w} = sum over sigma in S_d of eps(sigma) * e_{p + sigma(w)}.
/// Every arranged point must be a lattice point of the simplex; the d!
/// points are distinct because the offset entries are.
pub fn permutohedron_vector(g: &SRGraph, spec: &PermutohedronSpec) -> Result<SparseVector> {
    let d = g.d();
    if spec.center.len() != d || spec.offset.len() != d {
        return Err(Error::Domain(format!(
            "center/offset must have length d={d}"
        )));
    }
    let mut sorted = spec.offset.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != d {
        return Err(Error::Domain(
            "offset entries must be pairwise distinct".to_string(),
        ));
    }
    let sum: Rational64 = spec.center.iter().sum();
    if sum != Rational64::from_integer(g.n() as i64) {
        return Err(Error::Domain(format!(
            "center coordinates must sum to n={}",
            g.n()
        )));
    }
    let mut v = SparseVector::new();
    for sigma in Permutation::all(d) {
        let mut coords = Vec::with_capacity(d);
        for t in 0..d {
            let c = spec.center[t] + spec.offset[(sigma.0[t] - 1) as usize];
            if !c.is_integer() || c.is_negative() {
                return Err(Error::Domain(format!(
                    "point p + {sigma}(w) leaves the simplex at coordinate {t} (value {c})"
                )));
            }
            coords.push(c.to_integer() as u32);
        }
        let x = Vertex(coords);
        if g.vertex_index(&x).is_none() {
            return Err(Error::Domain(format!(
                "point {x} from sigma={sigma} is not a vertex of SR({d},{})",
                g.n()
            )));
        }
        v.add_term(x, BigInt::from(sigma.sign()));
    }
    let expected: usize = (1..=d).product();
    if v.support_len() != expected {
        return Err(Error::Internal(
            "permutohedron points collide; offset was not generic".to_string(),
        ));
    }
    Ok(v)
}

/// Number of packable centers: C(n - (d-1)(d-2)/2, d-1).
pub fn num_centers(d: usize, n: u32) -> BigInt {
    let shift = ((d as i64 - 1) * (d as i64 - 2)) / 2;
    crate::binomial(BigInt::from(n as i64 - shift), d as u64 - 1)
}

/// All centers p such that every point p + sigma(nu_d) lies in the simplex:
/// integral p with p_i >= (d-1)/2 for odd d, half-integral p with
/// p_i >= (d-1)/2 for even d, in both cases summing to n.
pub fn enumerate_centers(d: usize, n: u32) -> Result<Vec<PermutohedronSpec>> {
    if d < 2 {
        return Err(Error::Domain("need d >= 2".to_string()));
    }
    // write p_i = low + a_i with a_i >= 0 integral; low = ceil((d-1)/2)
    // shifted by 1/2 when d is even
    let (low, half): (i64, bool) = if d % 2 == 1 {
        ((d as i64 - 1) / 2, false)
    } else {
        (d as i64 / 2, true)
    };
    // sum of a_i: n - d*low (+ d/2 when the half offsets add back)
    let m = if half {
        n as i64 - d as i64 * low + d as i64 / 2
    } else {
        n as i64 - d as i64 * low
    };
    let mut out = Vec::new();
    if m >= 0 {
        let mut cur = vec![0i64; d];
        compositions(m as u32, d, 0, &mut cur, &mut |a| {
            let center: Vec<Rational64> = a
                .iter()
                .map(|&ai| {
                    if half {
                        Rational64::new(2 * (ai + low) - 1, 2)
                    } else {
                        Rational64::from_integer(ai + low)
                    }
                })
                .collect();
            out.push(PermutohedronSpec::standard(center));
        });
    }
    let expected = num_centers(d, n);
    if BigInt::from(out.len()) != expected {
        return Err(Error::Internal(format!(
            "enumerated {} centers for (d,n)=({d},{n}), formula gives {expected}",
            out.len()
        )));
    }
    Ok(out)
}

fn compositions(m: u32, d: usize, pos: usize, cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if pos == d - 1 {
        cur[pos] = m as i64;
        f(cur);
        return;
    }
    for v in 0..=m {
        cur[pos] = v as i64;
        compositions(m - v, d, pos + 1, cur, f);
    }
}

/// All packable permutohedron vectors of SR(d,n), paired with their specs.
pub fn all_permutohedron_vectors(
    g: &SRGraph,
) -> Result<Vec<(PermutohedronSpec, SparseVector)>> {
    enumerate_centers(g.d(), g.n())?
        .into_iter()
        .map(|s| permutohedron_vector(g, &s).map(|v| (s, v)))
        .collect()
}

/// dim H_{d,n} / N = C(n - (d-1)(d-2)/2, d-1) / C(n+d-1, d-1), exact.
pub fn coverage_ratio(d: usize, n: u32) -> crate::BigRational {
    crate::BigRational::new(
        num_centers(d, n),
        crate::lattice_graph::vertex_count(d, n),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReport {
    pub d: usize,
    pub n: u32,
    #[serde(rename = "N")]
    pub num_vertices: usize,
    pub num_centers: usize,
    pub num_lines: usize,
    pub rank_lines: usize,
    pub rank_sum_equals_n: bool,
    /// false only if no exact certificate was obtained for rank_lines
    pub rank_certified: bool,
}

/// r1 = rank of the lattice-line family, r2 = number of centers
/// (the permutohedron vectors are independent: their lexicographically
/// least support points p + ascending(nu) are distinct); reports whether
/// r1 + r2 = N at this (d,n).
///
/// Small N: dense fraction-free rank. Larger N: a modular rank is a lower
/// bound on the rational rank; exact orthogonality of every line to every
/// permutohedron vector bounds it above by N - r2, so equality certifies.
pub fn span_conjecture_check(d: usize, n: u32, cap: usize) -> Result<SpanReport> {
    let g = SRGraph::build_with_cap(d, n, cap)?;
    let nv = g.num_vertices();
    let lines = dedup_vectors(g.all_lattice_lines());
    let perms = all_permutohedron_vectors(&g)?;
    let r2 = perms.len();

    let (rank_lines, certified) = if nv <= 150 {
        let m = SparseVector::family_matrix(&lines, &g);
        (exact_linalg::rank(&m), true)
    } else {
        // upper bound N - r2 from exact orthogonality + independence
        let mut leads: Vec<Vertex> = perms
            .iter()
            .filter_map(|(_, v)| v.lex_min().map(|(x, _)| x.clone()))
            .collect();
        leads.sort();
        leads.dedup();
        let ortho = leads.len() == r2
            && perms
                .iter()
                .all(|(_, h)| lines.iter().all(|l| l.dot(h).is_zero()));
        let upper = if ortho { nv - r2 } else { nv };
        let mut best = 0usize;
        let mut certified = false;
        for &p in &exact_linalg::RANK_PRIMES {
            let mut rows = sparse_rows_mod_p(&lines, &g, p);
            let r = exact_linalg::rank_mod_p(&mut rows, p);
            best = best.max(r);
            if best == upper {
                certified = true;
                break;
            }
        }
        (best, certified)
    };

    Ok(SpanReport {
        d,
        n,
        num_vertices: nv,
        num_centers: r2,
        num_lines: lines.len(),
        rank_lines,
        rank_sum_equals_n: rank_lines + r2 == nv,
        rank_certified: certified,
    })
}

fn dedup_vectors(vs: Vec<SparseVector>) -> Vec<SparseVector> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for v in vs {
        let key: Vec<(Vertex, BigInt)> = v.iter().map(|(x, c)| (x.clone(), c.clone())).collect();
        if seen.insert(key) {
            out.push(v);
        }
    }
    out
}

pub(crate) fn sparse_rows_mod_p(family: &[SparseVector], g: &SRGraph, p: u64) -> Vec<Vec<u64>> {
    let pbig = BigInt::from(p);
    family
        .iter()
        .map(|v| {
            let mut row = vec![0u64; g.num_vertices()];
            for (x, c) in v.iter() {
                let r = ((c % &pbig) + &pbig) % &pbig;
                row[g.vertex_index(x).expect("support point in graph")] =
                    r.to_u64().expect("reduced residue fits u64");
            }
            row
        })
        .collect()
}
