//! Acceptance harness: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them as they complete).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use srg_core::eigenbasis3::{
    apply_perm, eigenvalue_multiset, full_eigenbasis_on, hexagon_vector, j_vector, p_vector,
    q_vector, r_vector, theorem1_spectrum, verify_independence, xyz_vectors, SIGMA,
};
use srg_core::exact_linalg::{self, Matrix};
use srg_core::lattice_graph::vertex_count;
use srg_core::permutohedra::{all_permutohedron_vectors, num_centers};
use srg_core::rook_eigen::{
    admissible_set, f_vector, induced_subgraph_check, mahonian_eigenspace_check, Permutation,
};
use srg_core::spectral_analysis::{
    independence_number, integral_spectrum, quotient_spectrum_integral, ratio_bound,
    spanning_trees_formula, spanning_trees_matrix_tree,
};
use srg_core::{binomial_u64, BigRational, SRGraph, SparseVector, Vertex};

fn run(id: u32, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(msg) => println!("criterion {id}: PASS — {msg}"),
        Err(msg) => {
            println!("criterion {id}: FAIL — {msg}");
            panic!("criterion {id} failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl Fn() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn criterion_01_closed_form_eigenbasis() {
    run(1, || {
        let mut total = 0usize;
        for n in 1..=40u32 {
            let g = SRGraph::build(3, n).map_err(|e| e.to_string())?;
            let claims = full_eigenbasis_on(&g).map_err(|e| e.to_string())?;
            let expect_count = binomial_u64(n as u64 + 2, 2) as usize;
            ensure(claims.len() == expect_count, || {
                format!("n={n}: {} claims, expected {expect_count}", claims.len())
            })?;
            ensure(eigenvalue_multiset(&claims) == theorem1_spectrum(n), || {
                format!("n={n}: eigenvalue multiset does not match the table")
            })?;
            verify_independence(&g, &claims).map_err(|e| format!("n={n}: {e}"))?;
            total += claims.len();
        }
        Ok(format!(
            "n=1..40: exact eigenbases match the closed-form table, {total} independent eigenvectors"
        ))
    });
}

#[test]
fn criterion_02_spectrum_cross_check() {
    run(2, || {
        for n in 1..=15u32 {
            let g = SRGraph::build(3, n).map_err(|e| e.to_string())?;
            let spec = integral_spectrum(&g, false).map_err(|e| e.to_string())?;
            ensure(spec.certified, || format!("n={n}: spectrum not certified"))?;
            let got: BTreeMap<i64, u64> =
                spec.pairs.iter().map(|(&l, &m)| (l, m as u64)).collect();
            ensure(got == theorem1_spectrum(n), || {
                format!("n={n}: certified spectrum differs from the predicted table")
            })?;
        }
        let g = SRGraph::build(3, 3).map_err(|e| e.to_string())?;
        let spec = integral_spectrum(&g, false).map_err(|e| e.to_string())?;
        let want: BTreeMap<i64, usize> =
            [(6, 1), (1, 3), (0, 2), (-2, 3), (-3, 1)].into_iter().collect();
        ensure(spec.pairs == want, || {
            format!("SR(3,3): got {:?}", spec.pairs)
        })?;
        Ok("n=1..15: certified spectra equal the eigenbasis prediction; \
            SR(3,3) = {6:1, 1:3, 0:2, -2:3, -3:1}"
            .to_string())
    });
}

#[test]
fn criterion_03_spanning_trees() {
    run(3, || {
        for n in 1..=12u32 {
            let g = SRGraph::build(3, n).map_err(|e| e.to_string())?;
            let formula = spanning_trees_formula(n).map_err(|e| e.to_string())?;
            let det = spanning_trees_matrix_tree(&g).map_err(|e| e.to_string())?;
            ensure(formula == det, || {
                format!("n={n}: formula {formula} != matrix-tree {det}")
            })?;
            if n == 1 {
                ensure(formula == BigInt::from(3), || format!("n=1: {formula}"))?;
            }
            if n == 2 {
                ensure(formula == BigInt::from(384), || format!("n=2: {formula}"))?;
            }
        }
        Ok("n=1..12: closed form equals the matrix-tree determinant (3 at n=1, 384 at n=2)".into())
    });
}

#[test]
fn criterion_04_permutohedron_eigenvectors() {
    run(4, || {
        let mut checked = 0usize;
        for d in 3..=5usize {
            let lambda = -((d as i64) * (d as i64 - 1) / 2);
            let mut n = 1u32;
            while vertex_count(d, n) <= BigInt::from(20_000) {
                let g = SRGraph::build(d, n).map_err(|e| e.to_string())?;
                let vecs = all_permutohedron_vectors(&g).map_err(|e| e.to_string())?;
                ensure(BigInt::from(vecs.len() as u64) == num_centers(d, n), || {
                    format!("d={d} n={n}: {} vectors vs predicted count", vecs.len())
                })?;
                for (spec, v) in &vecs {
                    ensure(g.is_eigenvector(v, lambda), || {
                        format!("d={d} n={n}: center {:?} is not a {lambda}-eigenvector", spec.center)
                    })?;
                }
                if d <= 4 && n <= 8 && !vecs.is_empty() {
                    let fam: Vec<SparseVector> = vecs.iter().map(|(_, v)| v.clone()).collect();
                    let m = SparseVector::family_matrix(&fam, &g);
                    ensure(exact_linalg::rank(&m) == fam.len(), || {
                        format!("d={d} n={n}: permutohedron family is not independent")
                    })?;
                }
                checked += vecs.len();
                n += 1;
            }
        }
        Ok(format!(
            "d=3..5, N<=20000: all {checked} permutohedron vectors are exact -C(d,2)-eigenvectors, \
             counts match, small families independent"
        ))
    });
}

#[test]
fn criterion_05_span_conjecture() {
    run(5, || {
        let cells: Vec<(usize, u32)> = (1..=11).map(|n| (4usize, n)).chain([(5, 7), (5, 8), (5, 9)]).collect();
        for (d, n) in cells {
            let r = srg_core::permutohedra::span_conjecture_check(d, n, 200_000)
                .map_err(|e| e.to_string())?;
            ensure(r.rank_certified && r.rank_sum_equals_n, || {
                format!(
                    "d={d} n={n}: rank {} + centers {} vs N={} (certified={})",
                    r.rank_lines, r.num_centers, r.num_vertices, r.rank_certified
                )
            })?;
        }
        Ok("d=4 n<=11 and d=5 n=7..9: rank(lines) + #centers = N, ranks certified exactly".into())
    });
}

#[test]
fn criterion_06_mahonian_eigenspace() {
    run(6, || {
        for d in 2..=5usize {
            let max_inv = (d * (d - 1) / 2) as u32;
            for n in 1..max_inv {
                let r = mahonian_eigenspace_check(d, n, 200_000, false)
                    .map_err(|e| e.to_string())?;
                ensure(
                    r.all_exact_eigenvectors
                        && r.rank == r.mahonian as usize
                        && r.nullity_matches_mahonian
                        && r.min_eig_is_minus_n,
                    || format!("d={d} n={n}: {r:?}"),
                )?;
            }
        }

        // worked example: pi = 3142 in SR(4,3)
        let g = SRGraph::build(4, 3).map_err(|e| e.to_string())?;
        let pi = Permutation::new(vec![3, 1, 4, 2]).map_err(|e| e.to_string())?;
        let pp = admissible_set(&pi).map_err(|e| e.to_string())?;
        ensure(pp.points.len() == 8, || {
            format!("pi=3142: {} admissible points, expected 8", pp.points.len())
        })?;
        let f = f_vector(&g, &pi).map_err(|e| e.to_string())?;
        let mut want = SparseVector::new();
        for (coords, s) in [
            ([2, 0, 1, 0], 1i64),
            ([2, 0, 0, 1], -1),
            ([1, 1, 1, 0], -1),
            ([1, 1, 0, 1], 1),
            ([0, 1, 2, 0], 1),
            ([0, 1, 0, 2], -1),
            ([0, 0, 3, 0], -1),
            ([0, 0, 0, 3], 1),
        ] {
            want.add_term(Vertex(coords.to_vec()), BigInt::from(s));
        }
        ensure(f == want, || "pi=3142: F differs from the 8-term expansion".to_string())?;
        ensure(g.is_eigenvector(&f, -3), || "pi=3142: F is not a (-3)-eigenvector".to_string())?;
        Ok("d=2..5, n<C(d,2): every F_pi exact, rank and nullity(A+nI) equal the Mahonian \
            number; 3142 example reproduced verbatim"
            .into())
    });
}

#[test]
fn criterion_07_induced_subgraphs() {
    run(7, || {
        let mut count = 0usize;
        for d in 2..=5usize {
            let mut graphs: BTreeMap<u32, SRGraph> = BTreeMap::new();
            for pi in Permutation::all(d) {
                let n = pi.inversions();
                if !graphs.contains_key(&n) {
                    graphs.insert(n, SRGraph::build(d, n).map_err(|e| e.to_string())?);
                }
                let r = induced_subgraph_check(&graphs[&n], &pi).map_err(|e| e.to_string())?;
                ensure(r.regular && r.laplacian_integral, || {
                    format!(
                        "pi={} (d={d}, n={n}): regular={}, Laplacian integral={}",
                        r.pi, r.regular, r.laplacian_integral
                    )
                })?;
                count += 1;
            }
        }
        Ok(format!(
            "all {count} permutations with d<=5: induced subgraph on ParP(pi) is n-regular \
             with exactly integral Laplacian spectrum"
        ))
    });
}

#[test]
fn criterion_08_quotient_matrices() {
    run(8, || {
        let r = quotient_spectrum_integral(3, 3, 400).map_err(|e| e.to_string())?;
        ensure(
            r.integral && r.certified && r.eigenvalues == vec![-2, 1, 6],
            || format!("SR(3,3) quotient: {:?}", r.eigenvalues),
        )?;
        ensure(r.contained_in_adjacency == Some(true), || {
            "SR(3,3): quotient spectrum not contained in adjacency spectrum".to_string()
        })?;
        for (d, n_max) in [(4usize, 30u32), (5, 25)] {
            for n in 1..=n_max {
                let r = quotient_spectrum_integral(d, n, 120).map_err(|e| e.to_string())?;
                ensure(r.integral && r.certified, || {
                    format!("d={d} n={n}: quotient not certified integral")
                })?;
                ensure(r.contained_in_adjacency != Some(false), || {
                    format!("d={d} n={n}: quotient eigenvalue outside adjacency spectrum")
                })?;
            }
        }
        Ok("SR(3,3) quotient spectrum {6,1,-2} contained in spec(A); quotients integral and \
            certified for d=4 n<=30 and d=5 n<=25"
            .into())
    });
}

#[test]
fn criterion_09_independence() {
    run(9, || {
        let g32 = SRGraph::build(3, 2).map_err(|e| e.to_string())?;
        ensure(independence_number(&g32).map_err(|e| e.to_string())? == 2, || {
            "alpha(SR(3,2)) != 2".to_string()
        })?;
        let g33 = SRGraph::build(3, 3).map_err(|e| e.to_string())?;
        let a33 = independence_number(&g33).map_err(|e| e.to_string())?;
        let b33 = ratio_bound(3, 3).map_err(|e| e.to_string())?;
        ensure(
            a33 == 3
                && b33 == BigRational::new(BigInt::from(10), BigInt::from(3))
                && BigRational::from(BigInt::from(a33 as i64)) <= b33,
            || format!("SR(3,3): alpha={a33}, bound={b33}"),
        )?;
        let g46 = SRGraph::build(4, 6).map_err(|e| e.to_string())?;
        let a46 = independence_number(&g46).map_err(|e| e.to_string())?;
        let b46 = ratio_bound(4, 6).map_err(|e| e.to_string())?;
        ensure(
            a46 == 16 && b46 == BigRational::from(BigInt::from(21)),
            || format!("SR(4,6): alpha={a46}, bound={b46}"),
        )?;
        Ok("alpha(SR(3,2))=2, alpha(SR(3,3))=3 <= 10/3, alpha(SR(4,6))=16 <= 21".into())
    });
}

// -- criterion 10 helpers: a naive rational-elimination oracle ------------

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn random_matrix(state: &mut u64, rows: usize, cols: usize) -> Matrix<BigInt> {
    Matrix::from_fn(rows, cols, |_, _| {
        BigInt::from((splitmix(state) % 11) as i64 - 5)
    })
}

/// Rank and (for square input) determinant by plain Gaussian elimination
/// over the rationals.
fn rational_elimination(m: &Matrix<BigInt>) -> (usize, Option<BigRational>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| (0..cols).map(|j| BigRational::from(m.get(i, j).clone())).collect())
        .collect();
    let mut det = BigRational::one();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            if rows == cols {
                det = BigRational::zero();
            }
            continue;
        };
        if p != row {
            a.swap(p, row);
            det = -det;
        }
        det *= a[row][col].clone();
        let inv = a[row][col].clone();
        for i in (row + 1)..rows {
            let f = &a[i][col] / &inv;
            for j in col..cols {
                let sub = &f * &a[row][j];
                a[i][j] -= sub;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    let det = (rows == cols).then(|| if rank == rows { det } else { BigRational::zero() });
    (rank, det)
}

#[test]
fn criterion_10_property_suites() {
    run(10, || {
        // trace identities on certified spectra
        for n in [3u32, 4, 7] {
            let g = SRGraph::build(3, n).map_err(|e| e.to_string())?;
            let spec = integral_spectrum(&g, false).map_err(|e| e.to_string())?;
            ensure(spec.certified && spec.trace_identities_hold(g.num_edges()), || {
                format!("n={n}: trace identities fail")
            })?;
        }

        // hexagons orthogonal to every line vector
        let n = 6u32;
        let (xs, ys, zs) = xyz_vectors(n);
        let lines: Vec<&SparseVector> = xs.iter().chain(&ys).chain(&zs).collect();
        for a in 1..n {
            for b in 1..(n - a) {
                let c = n - a - b;
                let h = hexagon_vector(n, a, b, c).map_err(|e| e.to_string())?;
                ensure(lines.iter().all(|l| l.dot(&h).is_zero()), || {
                    format!("H_{{{a},{b},{c}}} not orthogonal to the lines")
                })?;
            }
        }

        // XYZ relations: sum X_i = sum Y_i = sum Z_i = J, sum i(X+Y+Z) = nJ
        for n in [4u32, 9] {
            let (xs, ys, zs) = xyz_vectors(n);
            let j = j_vector(n);
            for fam in [&xs, &ys, &zs] {
                let mut s = SparseVector::new();
                for v in fam.iter() {
                    s.add_scaled(v, &BigInt::one());
                }
                ensure(s == j, || format!("n={n}: family does not sum to J"))?;
            }
            let mut w = SparseVector::new();
            for i in 0..=n as usize {
                let c = BigInt::from(i as i64);
                w.add_scaled(&xs[i], &c);
                w.add_scaled(&ys[i], &c);
                w.add_scaled(&zs[i], &c);
            }
            ensure(w == j.scaled(&BigInt::from(n as i64)), || {
                format!("n={n}: weighted sum is not nJ")
            })?;
        }

        // S3-orbit ranks: 2 for R, 3 for each P_k and Q_k
        let g = SRGraph::build(3, 7).map_err(|e| e.to_string())?;
        let orbit = |v: &SparseVector| -> Vec<SparseVector> {
            let s1 = apply_perm(v, &SIGMA);
            let s2 = apply_perm(&s1, &SIGMA);
            vec![v.clone(), s1, s2]
        };
        let r = r_vector(&g).map_err(|e| e.to_string())?;
        let fam = orbit(&r.vector);
        ensure(
            exact_linalg::rank(&SparseVector::family_matrix(&fam, &g)) == 2,
            || "R orbit rank != 2".to_string(),
        )?;
        for k in 0..=2u32 {
            let p = p_vector(&g, k).map_err(|e| e.to_string())?;
            let q = q_vector(&g, k).map_err(|e| e.to_string())?;
            for (tag, base) in [("P", p), ("Q", q)] {
                let fam = orbit(&base.vector);
                ensure(
                    exact_linalg::rank(&SparseVector::family_matrix(&fam, &g)) == 3,
                    || format!("{tag}_{k} orbit rank != 3"),
                )?;
            }
        }

        // exact linear algebra vs the rational-elimination oracle
        let mut state = 0x5eed_2026_08_26u64;
        for trial in 0..40 {
            let size = 1 + (splitmix(&mut state) % 6) as usize;
            let m = random_matrix(&mut state, size, size);
            let (orank, odet) = rational_elimination(&m);
            ensure(exact_linalg::rank(&m) == orank, || {
                format!("trial {trial}: rank disagrees with the oracle")
            })?;
            let det = exact_linalg::determinant(&m).map_err(|e| e.to_string())?;
            ensure(Some(BigRational::from(det.clone())) == odet, || {
                format!("trial {trial}: determinant disagrees with the oracle")
            })?;
            let b = random_matrix(&mut state, size, size);
            let detb = exact_linalg::determinant(&b).map_err(|e| e.to_string())?;
            let detab = exact_linalg::determinant(&m.matmul(&b)).map_err(|e| e.to_string())?;
            ensure(detab == det * detb, || {
                format!("trial {trial}: det(AB) != det(A)det(B)")
            })?;
            let rect = random_matrix(&mut state, size, size + 2);
            let (orank, _) = rational_elimination(&rect);
            ensure(exact_linalg::rank(&rect) == orank, || {
                format!("trial {trial}: rectangular rank disagrees with the oracle")
            })?;
        }
        Ok("trace identities, hexagon-line orthogonality, orbit ranks, XYZ relations and the \
            elimination oracle all agree exactly"
            .into())
    });
}
