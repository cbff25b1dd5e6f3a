//! The best-response polyhedra `P` and `Q`, their labelled vertices, the
//! non-degeneracy test and equilibria as completely labelled vertex pairs.
//!
//! Label convention (1-based, shared by both polyhedra):
//!
//! | label        | `P` (over `(x, π2)`)       | `Q` (over `(y, π1)`)      |
//! |--------------|----------------------------|---------------------------|
//! | `1..=m`      | `xᵢ ≥ 0`                   | `A⁽ⁱ⁾y ≤ π1`              |
//! | `m+1..=m+n`  | `xᵀB₍ⱼ₎ ≤ π2`              | `yⱼ ≥ 0`                  |

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Degeneracy, Result};
use crate::game::{dedup_equilibria, BimatrixGame, EquilibriumPoint, MixedStrategyPair};
use crate::linalg::{dot, solve_square, RMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    P,
    Q,
}

/// `{z : rows·z ≤ 0, equality·z = 1}` with the `m + n` inequalities in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPolyhedron {
    pub side: Side,
    pub m: usize,
    pub n: usize,
    /// One row per label; columns are the strategy coordinates then the payoff.
    pub inequalities: RMatrix,
    /// Coefficients of `1ᵀ(strategy) = 1`.
    pub equality: Vec<Rational>,
}

impl LabeledPolyhedron {
    /// Number of strategy coordinates: `m` for `P`, `n` for `Q`.
    pub fn strategy_dim(&self) -> usize {
        match self.side {
            Side::P => self.m,
            Side::Q => self.n,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.strategy_dim() + 1
    }

    pub fn label_count(&self) -> usize {
        self.m + self.n
    }

    /// Labels (1-based) of the inequalities binding at `point`, or `None`
    /// if the point is infeasible.
    pub fn labels_at(&self, point: &[Rational]) -> Option<BTreeSet<usize>> {
        if dot(&self.equality, point) != Rational::one() {
            return None;
        }
        let mut labels = BTreeSet::new();
        for k in 0..self.label_count() {
            let v = dot(self.inequalities.row(k), point);
            if v.is_positive() {
                return None;
            }
            if v.is_zero() {
                labels.insert(k + 1);
            }
        }
        Some(labels)
    }
}

/// A vertex with the exact set of binding labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledVertex {
    /// Strategy coordinates followed by the payoff coordinate.
    pub point: Vec<Rational>,
    pub labels: BTreeSet<usize>,
}

impl LabeledVertex {
    pub fn strategy(&self) -> &[Rational] {
        &self.point[..self.point.len() - 1]
    }

    pub fn payoff(&self) -> &Rational {
        self.point.last().expect("payoff coordinate")
    }
}

pub fn build_polyhedron(g: &BimatrixGame, side: Side) -> LabeledPolyhedron {
    let (m, n) = (g.m(), g.n());
    let k = match side {
        Side::P => m,
        Side::Q => n,
    };
    let mut rows = RMatrix::zeros(m + n, k + 1);
    match side {
        Side::P => {
            for i in 0..m {
                rows[(i, i)] = -Rational::one();
            }
            for j in 0..n {
                for i in 0..m {
                    rows[(m + j, i)] = g.b()[(i, j)].clone();
                }
                rows[(m + j, m)] = -Rational::one();
            }
        }
        Side::Q => {
            for i in 0..m {
                for j in 0..n {
                    rows[(i, j)] = g.a()[(i, j)].clone();
                }
                rows[(i, n)] = -Rational::one();
            }
            for j in 0..n {
                rows[(m + j, j)] = -Rational::one();
            }
        }
    }
    let mut equality = vec![Rational::one(); k + 1];
    equality[k] = Rational::zero();
    LabeledPolyhedron {
        side,
        m,
        n,
        inequalities: rows,
        equality,
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// All vertices by exhaustive choice of `strategy_dim` binding inequalities.
/// Ordered by the lexicographically first basis producing each vertex.
pub fn enumerate_vertices(p: &LabeledPolyhedron) -> Vec<LabeledVertex> {
    let dim = p.strategy_dim();
    let eq = RMatrix::from_vec(1, p.ambient_dim(), p.equality.clone()).expect("width");
    let mut rhs = vec![Rational::zero(); dim + 1];
    rhs[dim] = Rational::one();
    let zeros = vec![Rational::zero(); dim + 1];
    let mut out: Vec<LabeledVertex> = Vec::new();
    for basis in combinations(p.label_count(), dim) {
        let system = p.inequalities.select_rows(&basis).vstack(&eq);
        let Ok(sol) = solve_square(&system, &rhs, &zeros) else {
            continue;
        };
        let point = sol.constant;
        if out.iter().any(|v| v.point == point) {
            continue;
        }
        if let Some(labels) = p.labels_at(&point) {
            out.push(LabeledVertex { point, labels });
        }
    }
    out
}

/// `Ok(())` if every vertex of `P` has exactly `m` labels and every vertex of
/// `Q` exactly `n`; otherwise the first offending vertex.
pub fn check_nondegenerate(g: &BimatrixGame) -> Result<()> {
    for side in [Side::P, Side::Q] {
        let poly = build_polyhedron(g, side);
        for v in enumerate_vertices(&poly) {
            if v.labels.len() != poly.strategy_dim() {
                return Err(Degeneracy::OversizedLabelSet {
                    side,
                    point: v.point,
                    labels: v.labels,
                }
                .into());
            }
        }
    }
    Ok(())
}

/// Turn a completely labelled pair into an equilibrium.
pub(crate) fn pair_to_equilibrium(p: &LabeledVertex, q: &LabeledVertex) -> EquilibriumPoint {
    EquilibriumPoint {
        strategies: MixedStrategyPair {
            x: p.strategy().to_vec(),
            y: q.strategy().to_vec(),
        },
        payoff1: q.payoff().clone(),
        payoff2: p.payoff().clone(),
        source_xi: None,
    }
}

/// Every pair of vertices of `P` and `Q` whose labels cover `1..=m+n`.
pub fn equilibria_by_labels(g: &BimatrixGame) -> Result<Vec<EquilibriumPoint>> {
    check_nondegenerate(g)?;
    let pv = enumerate_vertices(&build_polyhedron(g, Side::P));
    let qv = enumerate_vertices(&build_polyhedron(g, Side::Q));
    let total = g.m() + g.n();
    let mut out = Vec::new();
    for p in &pv {
        for q in &qv {
            if p.labels.union(&q.labels).count() == total {
                out.push(pair_to_equilibrium(p, q));
            }
        }
    }
    Ok(dedup_equilibria(out))
}
