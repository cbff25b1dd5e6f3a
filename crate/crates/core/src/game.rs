//! Bimatrix games, rank-one factorization, equilibrium-preserving
//! transformations and the Nash condition.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, int, matrix_rank, RMatrix, Rational};

/// An `m × n` game with payoff matrices `A` (row player) and `B` (column player).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BimatrixGame {
    a: RMatrix,
    b: RMatrix,
}

impl BimatrixGame {
    pub fn new(a: RMatrix, b: RMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::DimensionMismatch {
                expected: a.rows() * a.cols(),
                found: b.rows() * b.cols(),
            });
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn from_i64<const C: usize>(a: &[[i64; C]], b: &[[i64; C]]) -> Result<Self> {
        Self::new(RMatrix::from_i64(a), RMatrix::from_i64(b))
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &RMatrix {
        &self.a
    }

    pub fn b(&self) -> &RMatrix {
        &self.b
    }

    /// `A + B`.
    pub fn sum(&self) -> RMatrix {
        self.a
            .add(&self.b)
            .expect("dimensions checked at construction")
    }

    /// `(A y)_i` for every row `i`.
    pub fn row_payoffs(&self, y: &[Rational]) -> Vec<Rational> {
        self.a.mul_vec(y)
    }

    /// `(xᵀ B)_j` for every column `j`.
    pub fn column_payoffs(&self, x: &[Rational]) -> Vec<Rational> {
        self.b.vec_mul(x)
    }

    /// Best-response characterization: returns the payoffs `(π1, π2)` when
    /// `s` is a Nash equilibrium, `None` otherwise.
    pub fn is_nash(&self, s: &MixedStrategyPair) -> Option<(Rational, Rational)> {
        if s.x.len() != self.m() || s.y.len() != self.n() {
            return None;
        }
        let ay = self.row_payoffs(&s.y);
        let xb = self.column_payoffs(&s.x);
        let best1 = max_of(&ay);
        let best2 = max_of(&xb);
        let got1 = dot(&s.x, &ay);
        let got2 = dot(&xb, &s.y);
        (got1 == best1 && got2 == best2).then_some((best1, best2))
    }

    /// Sum of both players' regrets, `maxᵢ A⁽ⁱ⁾y + maxⱼ xᵀB₍ⱼ₎ − xᵀ(A+B)y`.
    pub fn loss(&self, s: &MixedStrategyPair) -> Rational {
        let ay = self.row_payoffs(&s.y);
        let xb = self.column_payoffs(&s.x);
        let joint = self.sum().mul_vec(&s.y);
        max_of(&ay) + max_of(&xb) - dot(&s.x, &joint)
    }

    /// Rank of `A + B`.
    pub fn rank(&self) -> usize {
        matrix_rank(&self.sum())
    }

    /// Canonical factorization `A + B = b·cᵀ`: `c` is the first nonzero row
    /// of `A + B` and `b` is read off the first column where `c` is nonzero.
    pub fn factor_rank1(&self) -> Result<RankOneFactorization> {
        let rank = self.rank();
        if rank != 1 {
            return Err(Error::NotRankOne { rank });
        }
        let sum = self.sum();
        let first = (0..sum.rows())
            .find(|&i| sum.row(i).iter().any(|v| !v.is_zero()))
            .expect("rank one has a nonzero row");
        let c = sum.row(first).to_vec();
        let j0 = c.iter().position(|v| !v.is_zero()).expect("nonzero row");
        let b = (0..sum.rows()).map(|i| &sum[(i, j0)] / &c[j0]).collect();
        RankOneFactorization::new(self, b, c)
    }

    pub fn classify(&self) -> GameClass {
        let sum = self.sum();
        if sum.is_zero() {
            return GameClass::ZeroSum;
        }
        let constant_rows = (0..sum.rows()).all(|i| sum.row(i).iter().all(|v| *v == sum[(i, 0)]));
        if constant_rows {
            GameClass::RowConstant(sum.column(0))
        } else {
            GameClass::General
        }
    }

    /// Replace `B` by `B′` with `b′ᵢⱼ = bᵢⱼ − uᵢ`, turning a row-constant game
    /// into a zero-sum game with the same equilibria.
    pub fn reduce_row_constant(&self, u: &[Rational]) -> Result<BimatrixGame> {
        if u.len() != self.m() {
            return Err(Error::NotRowConstant);
        }
        let sum = self.sum();
        for (i, ui) in u.iter().enumerate() {
            if sum.row(i).iter().any(|v| v != ui) {
                return Err(Error::NotRowConstant);
            }
        }
        let mut b = self.b.clone();
        for i in 0..self.m() {
            for j in 0..self.n() {
                b[(i, j)] -= &u[i];
            }
        }
        BimatrixGame::new(self.a.clone(), b)
    }

    /// Apply one of the equilibrium-preserving transformations.
    pub fn transform(&self, op: &Transform) -> Result<BimatrixGame> {
        let (mut a, mut b) = (self.a.clone(), self.b.clone());
        match op {
            Transform::AddToColumnOfA { column, amount } => {
                let j = check_index(*column, self.n())?;
                for i in 0..self.m() {
                    a[(i, j)] += amount;
                }
            }
            Transform::AddToRowOfB { row, amount } => {
                let i = check_index(*row, self.m())?;
                for j in 0..self.n() {
                    b[(i, j)] += amount;
                }
            }
            Transform::ScaleColumnOfA { column, factor } => {
                let j = check_index(*column, self.n())?;
                if !factor.is_positive() {
                    return Err(Error::NonPositiveScale);
                }
                for i in 0..self.m() {
                    a[(i, j)] *= factor;
                }
            }
            Transform::ScaleRowOfB { row, factor } => {
                let i = check_index(*row, self.m())?;
                if !factor.is_positive() {
                    return Err(Error::NonPositiveScale);
                }
                for j in 0..self.n() {
                    b[(i, j)] *= factor;
                }
            }
        }
        BimatrixGame::new(a, b)
    }

    /// Lower the rank of a full-rank square game by adding `λ·1` to one
    /// column of `A`, keeping the equilibrium set.
    ///
    /// The column is the first non-constant column for which such a `λ`
    /// exists; `det(C + λ·1·eⱼᵀ)` is affine in `λ`, so `λ` is unique.
    pub fn reduce_rank(&self) -> Result<BimatrixGame> {
        let (m, n) = (self.m(), self.n());
        if m != n {
            return Err(Error::NotSquare { rows: m, cols: n });
        }
        let sum = self.sum();
        let rank = matrix_rank(&sum);
        if rank < n {
            return Err(Error::NotFullRank { rank, dim: n });
        }
        let det = sum.determinant();
        let shift_for = |j: usize| -> Option<Rational> {
            let mut with_ones = sum.clone();
            for i in 0..n {
                with_ones[(i, j)] = Rational::one();
            }
            // det(C + λ·1·eⱼᵀ) = det(C) + λ·det(C with column j replaced by 1)
            let slope = with_ones.determinant();
            (!slope.is_zero()).then(|| -&det / slope)
        };
        let is_constant = |j: usize| (0..n).all(|i| sum[(i, j)] == sum[(0, j)]);
        let (column, lambda) = (0..n)
            .filter(|&j| !is_constant(j))
            .chain((0..n).filter(|&j| is_constant(j)))
            .find_map(|j| shift_for(j).map(|l| (j, l)))
            .ok_or(Error::NoSuchColumn)?;
        self.transform(&Transform::AddToColumnOfA {
            column: column + 1,
            amount: lambda,
        })
    }
}

fn check_index(one_based: usize, max: usize) -> Result<usize> {
    if one_based == 0 || one_based > max {
        return Err(Error::IndexOutOfRange {
            index: one_based,
            max,
        });
    }
    Ok(one_based - 1)
}

pub(crate) fn max_of(v: &[Rational]) -> Rational {
    v.iter().max().cloned().unwrap_or_else(Rational::zero)
}

/// The `d × d` game with `aᵢⱼ = 2ij − i² + j²`, `bᵢⱼ = 2ij + i² − j²`
/// (1-based indices). `A + B = (4ij)` has rank one.
pub fn generate_kt(d: usize) -> BimatrixGame {
    let mut a = RMatrix::zeros(d, d);
    let mut b = RMatrix::zeros(d, d);
    for i in 1..=d {
        for j in 1..=d {
            let (ii, jj) = (i as i64, j as i64);
            a[(i - 1, j - 1)] = int(2 * ii * jj - ii * ii + jj * jj);
            b[(i - 1, j - 1)] = int(2 * ii * jj + ii * ii - jj * jj);
        }
    }
    BimatrixGame::new(a, b).expect("square game of positive size")
}

/// `A + B = b·cᵀ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankOneFactorization {
    b: Vec<Rational>,
    c: Vec<Rational>,
}

impl RankOneFactorization {
    /// Checks that `b·cᵀ` reproduces `A + B` of `game` entrywise.
    pub fn new(game: &BimatrixGame, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        if b.len() != game.m() || c.len() != game.n() {
            return Err(Error::FactorizationMismatch);
        }
        let sum = game.sum();
        for i in 0..game.m() {
            for j in 0..game.n() {
                if &b[i] * &c[j] != sum[(i, j)] {
                    return Err(Error::FactorizationMismatch);
                }
            }
        }
        Ok(RankOneFactorization { b, c })
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    /// `(b/t, t·c)`, the same outer product for any `t ≠ 0`.
    pub fn rescaled(&self, t: &Rational) -> Self {
        assert!(!t.is_zero(), "rescaling by zero");
        RankOneFactorization {
            b: self.b.iter().map(|v| v / t).collect(),
            c: self.c.iter().map(|v| v * t).collect(),
        }
    }
}

/// Special classes of games with a one-point parameter range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameClass {
    ZeroSum,
    /// Row `i` of `A + B` is the constant `u[i]`.
    RowConstant(Vec<Rational>),
    General,
}

/// Transformations that leave the set of equilibria unchanged.
/// Row and column indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transform {
    AddToColumnOfA { column: usize, amount: Rational },
    AddToRowOfB { row: usize, amount: Rational },
    ScaleColumnOfA { column: usize, factor: Rational },
    ScaleRowOfB { row: usize, factor: Rational },
}

/// A pair of mixed strategies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedStrategyPair {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl MixedStrategyPair {
    /// Checks non-negativity and that both vectors sum to one.
    pub fn new(x: Vec<Rational>, y: Vec<Rational>) -> Result<Self> {
        let ok = |v: &[Rational]| {
            !v.is_empty()
                && v.iter().all(|p| !p.is_negative())
                && v.iter().fold(Rational::zero(), |a, p| a + p).is_one()
        };
        if !ok(&x) || !ok(&y) {
            return Err(Error::InvalidStrategy);
        }
        Ok(MixedStrategyPair { x, y })
    }

    /// The pure strategy pair `(eᵢ, eⱼ)`, 0-based.
    pub fn pure(m: usize, n: usize, i: usize, j: usize) -> Self {
        let mut x = vec![Rational::zero(); m];
        let mut y = vec![Rational::zero(); n];
        x[i] = Rational::one();
        y[j] = Rational::one();
        MixedStrategyPair { x, y }
    }
}

/// An equilibrium with its payoffs, stored exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquilibriumPoint {
    pub strategies: MixedStrategyPair,
    pub payoff1: Rational,
    pub payoff2: Rational,
    /// Parameter value at which the parametric sweep found the point.
    pub source_xi: Option<Rational>,
}

impl EquilibriumPoint {
    pub fn x(&self) -> &[Rational] {
        &self.strategies.x
    }

    pub fn y(&self) -> &[Rational] {
        &self.strategies.y
    }
}

/// Sort by strategy pair and drop duplicates, keeping the first occurrence.
pub fn dedup_equilibria(mut points: Vec<EquilibriumPoint>) -> Vec<EquilibriumPoint> {
    points.sort_by(|p, q| p.strategies.cmp(&q.strategies));
    points.dedup_by(|p, q| p.strategies == q.strategies);
    points
}
