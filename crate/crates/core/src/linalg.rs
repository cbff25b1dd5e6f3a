//! Exact rational scalars, dense matrices, square solves and rank.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p / q` reduced to lowest terms. Panics when `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(RMatrix { rows, cols, data })
    }

    /// Build from nested rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(RMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor for integer matrices.
    pub fn from_i64<const C: usize>(rows: &[[i64; C]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| int(v)))
            .collect();
        RMatrix {
            rows: rows.len(),
            cols: C,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self) -> Self {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `vᵀ M`, a row vector of length `cols`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).fold(Rational::zero(), |acc, i| acc + &v[i] * &self[(i, j)]))
            .collect()
    }

    /// Submatrix made of the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        RMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        matrix_rank(self)
    }

    /// Exact determinant. Panics if the matrix is not square.
    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &f * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        f.write_str("]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Vector whose value at parameter `ξ` is `constant + ξ·slope`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineRVector {
    pub constant: Vec<Rational>,
    pub slope: Vec<Rational>,
}

impl AffineRVector {
    pub fn new(constant: Vec<Rational>, slope: Vec<Rational>) -> Result<Self> {
        if constant.len() != slope.len() {
            return Err(Error::DimensionMismatch {
                expected: constant.len(),
                found: slope.len(),
            });
        }
        Ok(AffineRVector { constant, slope })
    }

    pub fn constant(values: Vec<Rational>) -> Self {
        let slope = vec![Rational::zero(); values.len()];
        AffineRVector {
            constant: values,
            slope,
        }
    }

    pub fn len(&self) -> usize {
        self.constant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constant.is_empty()
    }

    pub fn eval(&self, xi: &Rational) -> Vec<Rational> {
        self.constant
            .iter()
            .zip(&self.slope)
            .map(|(c, s)| c + xi * s)
            .collect()
    }

    /// Component `k` as a `(constant, slope)` pair.
    pub fn component(&self, k: usize) -> (&Rational, &Rational) {
        (&self.constant[k], &self.slope[k])
    }

    /// `row · v(ξ)` as an affine scalar `(constant, slope)`.
    pub fn dot_row(&self, row: &[Rational]) -> (Rational, Rational) {
        (dot(row, &self.constant), dot(row, &self.slope))
    }
}

/// Solve `M·z(ξ) = rhs_const + ξ·rhs_slope` for an affine `z`.
pub fn solve_square(
    m: &RMatrix,
    rhs_const: &[Rational],
    rhs_slope: &[Rational],
) -> Result<AffineRVector> {
    let mut sols = solve_square_many(m, &[rhs_const, rhs_slope])?;
    let slope = sols.pop().expect("two right-hand sides");
    let constant = sols.pop().expect("two right-hand sides");
    Ok(AffineRVector { constant, slope })
}

/// Solve `M·z = rhs` for every right-hand side by one elimination pass.
pub fn solve_square_many(m: &RMatrix, rhs: &[&[Rational]]) -> Result<Vec<Vec<Rational>>> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    for r in rhs {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
    }
    let k = rhs.len();
    let width = n + k;
    let mut aug = RMatrix::zeros(n, width);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        for (t, r) in rhs.iter().enumerate() {
            aug[(i, n + t)] = r[i].clone();
        }
    }
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !aug[(r, col)].is_zero())
            .ok_or(Error::SingularMatrix)?;
        aug.swap_rows(p, col);
        let pivot = aug[(col, col)].clone();
        for c in col..width {
            let v = &aug[(col, c)] / &pivot;
            aug[(col, c)] = v;
        }
        for r in 0..n {
            if r == col || aug[(r, col)].is_zero() {
                continue;
            }
            let f = aug[(r, col)].clone();
            for c in col..width {
                let delta = &f * &aug[(col, c)];
                aug[(r, c)] -= delta;
            }
        }
    }
    Ok((0..k)
        .map(|t| (0..n).map(|i| aug[(i, n + t)].clone()).collect())
        .collect())
}

/// Outcome of solving a possibly non-square system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemSolution {
    Unique(Vec<Rational>),
    Underdetermined,
    Inconsistent,
}

/// Gauss–Jordan on an arbitrary `rows × cols` system `M·z = rhs`.
pub fn solve_system(m: &RMatrix, rhs: &[Rational]) -> SystemSolution {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug = RMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, cols)] = rhs[i].clone();
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows).find(|&i| !aug[(i, col)].is_zero()) else {
            continue;
        };
        aug.swap_rows(p, r);
        let pivot = aug[(r, col)].clone();
        for c in col..=cols {
            let v = &aug[(r, c)] / &pivot;
            aug[(r, c)] = v;
        }
        for i in 0..rows {
            if i == r || aug[(i, col)].is_zero() {
                continue;
            }
            let f = aug[(i, col)].clone();
            for c in col..=cols {
                let delta = &f * &aug[(r, c)];
                aug[(i, c)] -= delta;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !aug[(i, cols)].is_zero()) {
        return SystemSolution::Inconsistent;
    }
    if pivots.len() < cols {
        return SystemSolution::Underdetermined;
    }
    SystemSolution::Unique((0..cols).map(|i| aug[(i, cols)].clone()).collect())
}

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators, which
/// does not change the rank.
pub fn matrix_rank(m: &RMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&pivot * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// The polynomial `c2·ξ² + c1·ξ + c0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticR {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl QuadraticR {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        QuadraticR { c0, c1, c2 }
    }

    pub fn eval(&self, xi: &Rational) -> Rational {
        (&self.c2 * xi + &self.c1) * xi + &self.c0
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }
}

/// Square root of a non-negative rational if it is rational.
pub fn rational_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// All rational zeros of `q` in `[lo, hi]`, ascending and without duplicates.
///
/// With `nonpositive_hint` the caller asserts `q ≤ 0` on the interval; an
/// interior zero is then a double root and so rational, which makes the
/// returned list complete. Without the hint an irrational zero strictly
/// inside the interval is reported as an error.
pub fn quadratic_zeros_in_interval(
    q: &QuadraticR,
    lo: &Rational,
    hi: &Rational,
    nonpositive_hint: bool,
) -> Result<Vec<Rational>> {
    if q.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let mut out = Vec::new();
    let inside = |r: &Rational| lo <= r && r <= hi;
    let two = int(2);
    if q.c2.is_zero() {
        if !q.c1.is_zero() {
            let r = -&q.c0 / &q.c1;
            if inside(&r) {
                out.push(r);
            }
        }
    } else {
        let disc = &q.c1 * &q.c1 - int(4) * &q.c2 * &q.c0;
        if disc.is_zero() {
            let r = -&q.c1 / (&two * &q.c2);
            if inside(&r) {
                out.push(r);
            }
        } else if disc.is_positive() {
            match rational_sqrt(&disc) {
                Some(s) => {
                    for r in [
                        (-&q.c1 - &s) / (&two * &q.c2),
                        (-&q.c1 + &s) / (&two * &q.c2),
                    ] {
                        if inside(&r) {
                            out.push(r);
                        }
                    }
                }
                None if !nonpositive_hint => {
                    // Both roots are irrational, so neither endpoint is a zero.
                    let (a, b) = (q.eval(lo), q.eval(hi));
                    let vertex = -&q.c1 / (&two * &q.c2);
                    let crosses = a.signum() != b.signum();
                    let dips =
                        lo < &vertex && &vertex < hi && q.eval(&vertex).signum() != a.signum();
                    if crosses || dips {
                        return Err(Error::IrrationalInteriorZero);
                    }
                }
                None => {}
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solve_identity() {
        let z = solve_square(&RMatrix::identity(2), &v(&[3, 4]), &v(&[0, 0])).unwrap();
        assert_eq!(z.constant, v(&[3, 4]));
        assert_eq!(z.slope, v(&[0, 0]));
    }

    #[test]
    fn solve_diagonal() {
        let m = RMatrix::from_i64(&[[2, 0], [0, 4]]);
        let z = solve_square(&m, &v(&[1, 1]), &v(&[1, 0])).unwrap();
        assert_eq!(z.constant, vec![frac(1, 2), frac(1, 4)]);
        assert_eq!(z.slope, vec![frac(1, 2), int(0)]);
    }

    #[test]
    fn solve_checks_by_multiplying_back() {
        let m = RMatrix::from_i64(&[[1, 1], [1, -1]]);
        let z = solve_square(&m, &v(&[0, 0]), &v(&[2, 0])).unwrap();
        assert_eq!(z.constant, v(&[0, 0]));
        assert_eq!(z.slope, v(&[1, 1]));
        assert_eq!(m.mul_vec(&z.slope), v(&[2, 0]));
    }

    #[test]
    fn singular_solve_is_an_error() {
        let m = RMatrix::from_i64(&[[1, 2], [2, 4]]);
        assert_eq!(
            solve_square(&m, &v(&[1, 1]), &v(&[0, 0])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(matrix_rank(&RMatrix::zeros(3, 3)), 0);
        assert_eq!(matrix_rank(&RMatrix::identity(3)), 3);
        let m = RMatrix::from_i64(&[[4, 8, 12], [8, 16, 24], [12, 24, 36]]);
        assert_eq!(matrix_rank(&m), 1);
        let frac_rows =
            RMatrix::from_rows(&[vec![frac(1, 2), frac(1, 3)], vec![frac(3, 2), int(1)]]).unwrap();
        assert_eq!(matrix_rank(&frac_rows), 1);
    }

    #[test]
    fn determinant_matches_hand_values() {
        assert_eq!(RMatrix::from_i64(&[[1, 2], [3, 4]]).determinant(), int(-2));
        assert_eq!(RMatrix::from_i64(&[[0, 1], [1, 0]]).determinant(), int(-1));
        assert_eq!(RMatrix::identity(4).determinant(), int(1));
    }

    #[test]
    fn quadratic_double_root() {
        // -(ξ-3)² = -ξ² + 6ξ - 9
        let q = QuadraticR::new(int(-9), int(6), int(-1));
        let z = quadratic_zeros_in_interval(&q, &int(2), &int(4), true).unwrap();
        assert_eq!(z, vec![int(3)]);
    }

    #[test]
    fn quadratic_identically_zero() {
        let q = QuadraticR::new(int(0), int(0), int(0));
        assert_eq!(
            quadratic_zeros_in_interval(&q, &int(2), &int(4), true),
            Err(Error::IdenticallyZero)
        );
    }

    #[test]
    fn quadratic_endpoint_zero() {
        let q = QuadraticR::new(int(-2), int(1), int(0));
        let z = quadratic_zeros_in_interval(&q, &int(2), &frac(5, 2), true).unwrap();
        assert_eq!(z, vec![int(2)]);
    }

    #[test]
    fn quadratic_irrational_root_without_hint() {
        // ξ² - 2 has √2 in [1, 2]
        let q = QuadraticR::new(int(-2), int(0), int(1));
        assert_eq!(
            quadratic_zeros_in_interval(&q, &int(1), &int(2), false),
            Err(Error::IrrationalInteriorZero)
        );
        assert_eq!(
            quadratic_zeros_in_interval(&q, &int(2), &int(3), false).unwrap(),
            vec![]
        );
    }

    #[test]
    fn quadratic_two_rational_roots() {
        // (ξ-1)(ξ-3)
        let q = QuadraticR::new(int(3), int(-4), int(1));
        let z = quadratic_zeros_in_interval(&q, &int(0), &int(5), false).unwrap();
        assert_eq!(z, vec![int(1), int(3)]);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-7"), Some(int(-7)));
        assert_eq!(parse_rational("6/4"), Some(frac(3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
