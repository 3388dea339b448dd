//! Fraction-free exact integer linear algebra: rank, determinant and
//! null-space bases over any exact integer scalar (i64, BigInt, ...).
//!
//! No rounding ever occurs in this module; Bareiss elimination keeps all
//! intermediate values integral and all divisions exact.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Scalar bound for the exact routines. Satisfied by `i64` and `BigInt`.
pub trait ExactScalar: Clone + Ord + Signed + num_integer::Integer {}
impl<T> ExactScalar for T where T: Clone + Ord + Signed + num_integer::Integer {}

/// Dense row-major matrix with exact entries.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactScalar> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// self + c*I (square only).
    pub fn plus_scalar_diag(&self, c: &T) -> Result<Matrix<T>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i).clone() + c.clone();
            *m.get_mut(i, i) = v;
        }
        Ok(m)
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows);
        let mut out: Matrix<T> = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    *out.get_mut(i, j) = v;
                }
            }
        }
        out
    }

    /// Delete one row and one column (matrix-tree cofactors).
    pub fn minor(&self, del_row: usize, del_col: usize) -> Matrix<T> {
        let mut out = Matrix::zero(self.rows - 1, self.cols - 1);
        let mut r = 0;
        for i in 0..self.rows {
            if i == del_row {
                continue;
            }
            let mut c = 0;
            for j in 0..self.cols {
                if j == del_col {
                    continue;
                }
                *out.get_mut(r, c) = self.get(i, j).clone();
                c += 1;
            }
            r += 1;
        }
        out
    }
}

struct Echelon<T> {
    m: Matrix<T>,
    /// (row, col) of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
    sign: i8,
}

/// Bareiss fraction-free elimination with partial pivoting (largest
/// absolute value in the current column). All divisions are exact.
fn echelon<T: ExactScalar>(input: &Matrix<T>) -> Echelon<T> {
    let mut m = input.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut sign: i8 = 1;
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot_row = (r..rows)
            .filter(|&i| !m.get(i, c).is_zero())
            .max_by(|&a, &b| m.get(a, c).abs().cmp(&m.get(b, c).abs()));
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
            sign = -sign;
        }
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = m.get(r, c).clone() * m.get(i, j).clone()
                    - m.get(i, c).clone() * m.get(r, j).clone();
                *m.get_mut(i, j) = num / prev.clone();
            }
            *m.get_mut(i, c) = T::zero();
        }
        prev = m.get(r, c).clone();
        pivots.push((r, c));
        r += 1;
    }
    Echelon { m, pivots, sign }
}

/// Exact rank over the rationals.
pub fn rank<T: ExactScalar>(m: &Matrix<T>) -> usize {
    echelon(m).pivots.len()
}

/// cols - rank, for square matrices.
pub fn nullity<T: ExactScalar>(m: &Matrix<T>) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(m.cols - rank(m))
}

/// Exact determinant via Bareiss: the final pivot of the fraction-free
/// echelon form, adjusted for row swaps.
pub fn determinant<T: ExactScalar>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows == 0 {
        return Ok(T::one());
    }
    let e = echelon(m);
    if e.pivots.len() < m.rows {
        return Ok(T::zero());
    }
    let (r, c) = e.pivots[m.rows - 1];
    let d = e.m.get(r, c).clone();
    Ok(if e.sign < 0 { -d } else { d })
}

/// Rational vector stored in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatVector<T: Clone + num_integer::Integer>(pub Vec<Ratio<T>>);

impl<T: ExactScalar> RatVector<T> {
    /// Clear denominators and remove content, making the first nonzero
    /// entry positive. Output entries are integral rationals.
    pub fn primitive(&self) -> RatVector<T> {
        let mut lcm = T::one();
        for x in &self.0 {
            lcm = num_integer::lcm(lcm, x.denom().clone());
        }
        let ints: Vec<T> = self
            .0
            .iter()
            .map(|x| x.numer().clone() * (lcm.clone() / x.denom().clone()))
            .collect();
        let mut g = T::zero();
        for x in &ints {
            g = num_integer::gcd(g, x.clone());
        }
        if g.is_zero() {
            return RatVector(vec![Ratio::from_integer(T::zero()); self.0.len()]);
        }
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                g = -g;
            }
        }
        RatVector(
            ints.into_iter()
                .map(|x| Ratio::from_integer(x / g.clone()))
                .collect(),
        )
    }
}

/// A basis of the kernel over the rationals, returned as primitive
/// integer vectors. `m * v = 0` exactly for every vector.
pub fn null_space<T: ExactScalar>(m: &Matrix<T>) -> Vec<RatVector<T>> {
    let e = echelon(m);
    let pivot_cols: Vec<usize> = e.pivots.iter().map(|&(_, c)| c).collect();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in 0..m.cols {
        if is_pivot[f] {
            continue;
        }
        let mut x: Vec<Ratio<T>> = vec![Ratio::from_integer(T::zero()); m.cols];
        x[f] = Ratio::from_integer(T::one());
        for idx in (0..e.pivots.len()).rev() {
            let (r, c) = e.pivots[idx];
            let mut acc: Ratio<T> = Ratio::from_integer(T::zero());
            for j in (c + 1)..m.cols {
                let a = e.m.get(r, j);
                if !a.is_zero() && !x[j].is_zero() {
                    acc = acc + Ratio::from_integer(a.clone()) * x[j].clone();
                }
            }
            x[c] = -acc / Ratio::from_integer(e.m.get(r, c).clone());
        }
        basis.push(RatVector(x).primitive());
    }
    basis
}

/// Solve m*x = b exactly (free variables set to zero). `None` when the
/// system is inconsistent.
pub fn solve<T: ExactScalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<Ratio<T>>> {
    assert_eq!(m.rows, b.len());
    let mut aug = Matrix::zero(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            *aug.get_mut(i, j) = m.get(i, j).clone();
        }
        *aug.get_mut(i, m.cols) = b[i].clone();
    }
    let e = echelon(&aug);
    if e.pivots.iter().any(|&(_, c)| c == m.cols) {
        return None;
    }
    let mut x: Vec<Ratio<T>> = vec![Ratio::from_integer(T::zero()); m.cols];
    for idx in (0..e.pivots.len()).rev() {
        let (r, c) = e.pivots[idx];
        let mut acc = Ratio::from_integer(e.m.get(r, m.cols).clone());
        for j in (c + 1)..m.cols {
            let a = e.m.get(r, j);
            if !a.is_zero() && !x[j].is_zero() {
                acc = acc - Ratio::from_integer(a.clone()) * x[j].clone();
            }
        }
        x[c] = acc / Ratio::from_integer(e.m.get(r, c).clone());
    }
    Some(x)
}

/// Multiply m*v over the scalar ring (exact check helper).
pub fn apply<T: ExactScalar>(m: &Matrix<T>, v: &[Ratio<T>]) -> Vec<Ratio<T>> {
    assert_eq!(m.cols, v.len());
    (0..m.rows)
        .map(|i| {
            let mut acc = Ratio::from_integer(T::zero());
            for j in 0..m.cols {
                let a = m.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    acc = acc + Ratio::from_integer(a.clone()) * v[j].clone();
                }
            }
            acc
        })
        .collect()
}

/// Prime below 2^31 used for modular rank certificates.
pub const RANK_PRIMES: [u64; 4] = [2_147_483_647, 2_147_483_629, 2_147_483_587, 2_147_483_579];

/// Rank over GF(p). Always a lower bound on the rational rank; used
/// together with a structural upper bound this yields an exact certificate.
pub fn rank_mod_p(rows: &mut Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pr) = (rank..nrows).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = mod_inv(rows[rank][c] % p, p);
        for i in (rank + 1)..nrows {
            let f = rows[i][c] % p;
            if f == 0 {
                continue;
            }
            let mul = (f as u128 * inv as u128 % p as u128) as u64;
            for j in c..ncols {
                let sub = rows[rank][j] as u128 * mul as u128 % p as u128;
                rows[i][j] = ((rows[i][j] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2) mod p
    let mut base = a as u128 % p as u128;
    let mut exp = p - 2;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Reduce an i64 entry into [0, p).
pub fn mod_reduce(x: i64, p: u64) -> u64 {
    let r = x % p as i64;
    if r < 0 {
        (r + p as i64) as u64
    } else {
        r as u64
    }
}
