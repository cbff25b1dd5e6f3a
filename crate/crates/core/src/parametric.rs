//! Parametric simplex enumeration of all equilibria of a rank-one game.
//!
//! With `A + B = b·cᵀ` and `ξ = cᵀy`, the quadratic program
//! `max xᵀ(A+B)y − π1 − π2` over `P × Q` becomes, for fixed `ξ`, the linear
//! program `LP(ξ)`:
//!
//! ```text
//! max (xᵀb)·ξ − π1 − π2   s.t.   M1·z ≤ 0,   M2·z = (1, 1, ξ)
//! ```
//!
//! over `z = (x, y, π1, π2)`. Its optimum is never positive and is zero exactly
//! at equilibria. The sweep walks `ξ` from `min c` to `max c`, keeping an
//! optimal basis (a set of binding rows of `M1`), and reports every `ξ` where
//! the optimum reaches zero.
//!
//! Row indices of `M1` are 1-based throughout this module:
//! `1..=m` are `xᵢ ≥ 0`, `m+1..=m+n` are `xᵀB₍ⱼ₎ ≤ π2`,
//! `m+n+1..=2m+n` are `A⁽ⁱ⁾y ≤ π1` and `2m+n+1..=2(m+n)` are `yⱼ ≥ 0`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Degeneracy, Error, Result};
use crate::game::{
    dedup_equilibria, max_of, BimatrixGame, EquilibriumPoint, GameClass, MixedStrategyPair,
    RankOneFactorization,
};
use crate::linalg::{
    dot, quadratic_zeros_in_interval, solve_square, AffineRVector, QuadraticR, RMatrix, Rational,
};
use crate::polytope::{build_polyhedron, check_nondegenerate, enumerate_vertices, Side};

/// The constraint data of `LP(ξ)` together with its affine objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricTableau {
    m: usize,
    n: usize,
    /// `K × N` inequality rows, right-hand side zero.
    pub m1: RMatrix,
    /// Equality rows: `1ᵀx`, `1ᵀy` and (unless zero-sum) `cᵀy`.
    pub m2: RMatrix,
    /// Right-hand side of the equalities as a function of `ξ`.
    pub e2: AffineRVector,
    /// Objective coefficients `(ξ·b, 0, −1, −1)`; also the dual right-hand side.
    pub objective: AffineRVector,
    pub xi_min: Rational,
    pub xi_max: Rational,
}

impl ParametricTableau {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of inequality rows, `2(m + n)`.
    pub fn k(&self) -> usize {
        2 * (self.m + self.n)
    }

    /// Number of variables, `m + n + 2`.
    pub fn vars(&self) -> usize {
        self.m + self.n + 2
    }

    fn equalities(&self) -> usize {
        self.m2.rows()
    }

    /// Size of a basis: `N` minus the number of equalities.
    pub fn basis_size(&self) -> usize {
        self.vars() - self.equalities()
    }

    fn pi1(&self) -> usize {
        self.m + self.n
    }

    fn pi2(&self) -> usize {
        self.m + self.n + 1
    }

    /// 1-based rows binding at `z`.
    pub fn binding_rows(&self, z: &[Rational]) -> BTreeSet<usize> {
        (0..self.k())
            .filter(|&r| dot(self.m1.row(r), z).is_zero())
            .map(|r| r + 1)
            .collect()
    }

    /// Strategies and payoffs `(x, y, π1, π2)` encoded by a point.
    fn split(&self, z: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Rational, Rational) {
        let (m, n) = (self.m, self.n);
        (
            z[..m].to_vec(),
            z[m..m + n].to_vec(),
            z[self.pi1()].clone(),
            z[self.pi2()].clone(),
        )
    }

    fn basis_matrix(&self, basis: &ParametricBasis) -> RMatrix {
        let rows: Vec<usize> = basis.rows.iter().map(|r| r - 1).collect();
        self.m1.select_rows(&rows).vstack(&self.m2)
    }
}

fn inequality_rows(g: &BimatrixGame) -> RMatrix {
    let (m, n) = (g.m(), g.n());
    let k = 2 * (m + n);
    let vars = m + n + 2;
    let (pi1, pi2) = (m + n, m + n + 1);
    let mut m1 = RMatrix::zeros(k, vars);
    let one = Rational::one();
    for i in 0..m {
        m1[(i, i)] = -one.clone();
    }
    for j in 0..n {
        for i in 0..m {
            m1[(m + j, i)] = g.b()[(i, j)].clone();
        }
        m1[(m + j, pi2)] = -one.clone();
    }
    for i in 0..m {
        for j in 0..n {
            m1[(m + n + i, m + j)] = g.a()[(i, j)].clone();
        }
        m1[(m + n + i, pi1)] = -one.clone();
    }
    for j in 0..n {
        m1[(2 * m + n + j, m + j)] = -one.clone();
    }
    m1
}

/// Assemble `M1`, `M2`, `e2(ξ)` and the objective for `A + B = b·cᵀ`.
pub fn build_tableau(g: &BimatrixGame, f: &RankOneFactorization) -> Result<ParametricTableau> {
    // the factorization may have been built for another game
    let f = RankOneFactorization::new(g, f.b().to_vec(), f.c().to_vec())?;
    let (m, n) = (g.m(), g.n());
    let vars = m + n + 2;
    let mut m2 = RMatrix::zeros(3, vars);
    for i in 0..m {
        m2[(0, i)] = Rational::one();
    }
    for j in 0..n {
        m2[(1, m + j)] = Rational::one();
        m2[(2, m + j)] = f.c()[j].clone();
    }
    let e2 = AffineRVector {
        constant: vec![Rational::one(), Rational::one(), Rational::zero()],
        slope: vec![Rational::zero(), Rational::zero(), Rational::one()],
    };
    let (xi_min, xi_max) = xi_range(&f);
    Ok(ParametricTableau {
        m,
        n,
        m1: inequality_rows(g),
        m2,
        e2,
        objective: objective_vector(m, n, Some(f.b())),
        xi_min,
        xi_max,
    })
}

/// The single linear program of a zero-sum game: no `cᵀy = ξ` row, `ξ = 0`.
pub fn zero_sum_tableau(g: &BimatrixGame) -> Result<ParametricTableau> {
    if g.classify() != GameClass::ZeroSum {
        return Err(Error::NotRankOne { rank: g.rank() });
    }
    let (m, n) = (g.m(), g.n());
    let mut m2 = RMatrix::zeros(2, m + n + 2);
    for i in 0..m {
        m2[(0, i)] = Rational::one();
    }
    for j in 0..n {
        m2[(1, m + j)] = Rational::one();
    }
    Ok(ParametricTableau {
        m,
        n,
        m1: inequality_rows(g),
        m2,
        e2: AffineRVector::constant(vec![Rational::one(), Rational::one()]),
        objective: objective_vector(m, n, None),
        xi_min: Rational::zero(),
        xi_max: Rational::zero(),
    })
}

fn objective_vector(m: usize, n: usize, b: Option<&[Rational]>) -> AffineRVector {
    let vars = m + n + 2;
    let mut constant = vec![Rational::zero(); vars];
    constant[m + n] = -Rational::one();
    constant[m + n + 1] = -Rational::one();
    let mut slope = vec![Rational::zero(); vars];
    if let Some(b) = b {
        slope[..m].clone_from_slice(b);
    }
    AffineRVector { constant, slope }
}

/// `[min c, max c]`, the range of `cᵀy` over mixed strategies `y`.
pub fn xi_range(f: &RankOneFactorization) -> (Rational, Rational) {
    let lo = f.c().iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = f.c().iter().max().cloned().unwrap_or_else(Rational::zero);
    (lo, hi)
}

/// Binding rows of `M1` that, with `M2`, determine a unique point.
///
/// For the parametric program this is `m` rows from `1..=m+n` (the `P` side)
/// and `n − 1` rows from `m+n+1..=2(m+n)` (the `Q` side).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParametricBasis {
    /// Sorted, 1-based.
    pub rows: Vec<usize>,
}

impl ParametricBasis {
    pub fn new(mut rows: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        ParametricBasis { rows }
    }

    pub fn contains(&self, row: usize) -> bool {
        self.rows.binary_search(&row).is_ok()
    }

    /// Rows on the `P` side, `I ⊂ 1..=m+n`.
    pub fn p_rows(&self, t: &ParametricTableau) -> Vec<usize> {
        self.rows
            .iter()
            .copied()
            .filter(|&r| r <= t.m + t.n)
            .collect()
    }

    /// Rows on the `Q` side, `J`, as global row indices.
    pub fn q_rows(&self, t: &ParametricTableau) -> Vec<usize> {
        self.rows
            .iter()
            .copied()
            .filter(|&r| r > t.m + t.n)
            .collect()
    }

    fn position(&self, row: usize) -> usize {
        self.rows.binary_search(&row).expect("row in basis")
    }

    fn replace(&self, leaving: usize, entering: usize) -> Self {
        let mut rows: Vec<usize> = self
            .rows
            .iter()
            .copied()
            .filter(|&r| r != leaving)
            .collect();
        rows.push(entering);
        ParametricBasis::new(rows)
    }

    pub fn as_set(&self) -> BTreeSet<usize> {
        self.rows.iter().copied().collect()
    }
}

/// Primal point `z(ξ)` and dual vector `u(ξ)` of a basis, both affine in `ξ`.
///
/// `u` has one entry per row of `M1` (zero off the basis) followed by one per
/// equality.
pub fn solve_basis(
    t: &ParametricTableau,
    basis: &ParametricBasis,
) -> Result<(AffineRVector, AffineRVector)> {
    if basis.rows.len() != t.basis_size() || basis.rows.iter().any(|&r| r == 0 || r > t.k()) {
        return Err(Error::SingularBasis);
    }
    let g = t.basis_matrix(basis);
    let size = basis.rows.len();
    let mut rhs_c = vec![Rational::zero(); size];
    let mut rhs_s = vec![Rational::zero(); size];
    rhs_c.extend(t.e2.constant.iter().cloned());
    rhs_s.extend(t.e2.slope.iter().cloned());
    let z = solve_square(&g, &rhs_c, &rhs_s).map_err(|_| Error::SingularBasis)?;
    let v = solve_square(&g.transpose(), &t.objective.constant, &t.objective.slope)
        .map_err(|_| Error::SingularBasis)?;
    let total = t.k() + t.equalities();
    let mut u = AffineRVector::constant(vec![Rational::zero(); total]);
    for (pos, &row) in basis.rows.iter().enumerate() {
        u.constant[row - 1] = v.constant[pos].clone();
        u.slope[row - 1] = v.slope[pos].clone();
    }
    for e in 0..t.equalities() {
        u.constant[t.k() + e] = v.constant[size + e].clone();
        u.slope[t.k() + e] = v.slope[size + e].clone();
    }
    Ok((z, u))
}

/// Range of `ξ` on which a basis is optimal, with its objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisInterval {
    pub basis: ParametricBasis,
    /// `(x, y, π1, π2)` as a function of `ξ`.
    pub z: AffineRVector,
    pub u: AffineRVector,
    pub xi1: Rational,
    pub xi2: Rational,
    /// Upper end of primal feasibility, clipped to the parameter range.
    pub alpha2: Rational,
    /// Upper end of dual feasibility, clipped to the parameter range.
    pub beta2: Rational,
    /// `(x(ξ)ᵀb)·ξ − π1(ξ) − π2(ξ)`.
    pub objective: QuadraticR,
}

impl BasisInterval {
    /// The point of the basis at `ξ`.
    pub fn point(&self, xi: &Rational) -> Vec<Rational> {
        self.z.eval(xi)
    }
}

/// Intersect `lo ≤ ξ ≤ hi` with `c + ξ·s ≤ 0`. Returns false if empty.
fn restrict(lo: &mut Rational, hi: &mut Rational, c: &Rational, s: &Rational) -> bool {
    if s.is_zero() {
        return !c.is_positive();
    }
    let root = -c / s;
    if s.is_positive() {
        if root < *hi {
            *hi = root;
        }
    } else if root > *lo {
        *lo = root;
    }
    true
}

/// Where `M1·z(ξ) ≤ 0` and `u₁..u_K(ξ) ≥ 0` both hold, within `[ξmin, ξmax]`.
pub fn basis_interval(
    t: &ParametricTableau,
    basis: &ParametricBasis,
    z: &AffineRVector,
    u: &AffineRVector,
) -> Result<BasisInterval> {
    let (mut a1, mut a2) = (t.xi_min.clone(), t.xi_max.clone());
    let (mut b1, mut b2) = (t.xi_min.clone(), t.xi_max.clone());
    for r in 1..=t.k() {
        let ok = if basis.contains(r) {
            let (c, s) = u.component(r - 1);
            restrict(&mut b1, &mut b2, &-c, &-s)
        } else {
            let (c, s) = z.dot_row(t.m1.row(r - 1));
            restrict(&mut a1, &mut a2, &c, &s)
        };
        if !ok {
            return Err(Error::EmptyInterval);
        }
    }
    let xi1 = a1.max(b1);
    let xi2 = a2.clone().min(b2.clone());
    if xi1 > xi2 {
        return Err(Error::EmptyInterval);
    }
    let w = &t.objective;
    let objective = QuadraticR::new(
        dot(&w.constant, &z.constant),
        dot(&w.constant, &z.slope) + dot(&w.slope, &z.constant),
        dot(&w.slope, &z.slope),
    );
    Ok(BasisInterval {
        basis: basis.clone(),
        z: z.clone(),
        u: u.clone(),
        xi1,
        xi2,
        alpha2: a2,
        beta2: b2,
        objective,
    })
}

/// How quantities affine in `ξ` are compared while pivoting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Eval {
    /// At `ξ` exactly.
    At,
    /// At `ξ + ε` for infinitesimal `ε > 0`: value first, then slope.
    RightOf,
}

/// `value + ε·slope`; the tuple order is the lexicographic order we need.
type Lex = (Rational, Rational);

fn lex(mode: Eval, xi: &Rational, c: &Rational, s: &Rational) -> Lex {
    let value = c + xi * s;
    match mode {
        Eval::At => (value, Rational::zero()),
        Eval::RightOf => (value, s.clone()),
    }
}

fn lex_zero() -> Lex {
    (Rational::zero(), Rational::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StepKind {
    /// Drop a row whose dual is negative, move along the released edge.
    Primal,
    /// Bring in a violated row, drop a row by the dual ratio test.
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Step {
    kind: StepKind,
    leaving: usize,
    entering: usize,
}

/// One primal simplex step if some basic dual is negative, `None` if the
/// basis is dual feasible. Leaving and entering rows follow Bland's rule.
fn primal_step(
    t: &ParametricTableau,
    basis: &ParametricBasis,
    z: &AffineRVector,
    u: &AffineRVector,
    xi: &Rational,
    mode: Eval,
) -> Result<Option<Step>> {
    let zero = lex_zero();
    let Some(&leaving) = basis.rows.iter().find(|&&r| {
        let (c, s) = u.component(r - 1);
        lex(mode, xi, c, s) < zero
    }) else {
        return Ok(None);
    };
    // direction d: row `leaving` decreases by one, other basic rows and equalities stay
    let g = t.basis_matrix(basis);
    let mut rhs = vec![Rational::zero(); g.rows()];
    rhs[basis.position(leaving)] = -Rational::one();
    let zeros = vec![Rational::zero(); g.rows()];
    let d = solve_square(&g, &rhs, &zeros)
        .map_err(|_| Error::SingularBasis)?
        .constant;
    let mut best: Option<(Lex, usize)> = None;
    for r in 1..=t.k() {
        if basis.contains(r) {
            continue;
        }
        let rate = dot(t.m1.row(r - 1), &d);
        if !rate.is_positive() {
            continue;
        }
        let (c, s) = z.dot_row(t.m1.row(r - 1));
        let slack = lex(mode, xi, &c, &s);
        if slack > zero {
            return Err(Error::Stalled { xi: xi.clone() });
        }
        let ratio = (-&slack.0 / &rate, -&slack.1 / &rate);
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, r));
        }
    }
    let (_, entering) = best.ok_or(Error::UnboundedObjective)?;
    Ok(Some(Step {
        kind: StepKind::Primal,
        leaving,
        entering,
    }))
}

/// One dual simplex step if some non-basic row is violated, `None` if the
/// point is feasible.
fn dual_step(
    t: &ParametricTableau,
    basis: &ParametricBasis,
    z: &AffineRVector,
    u: &AffineRVector,
    xi: &Rational,
    mode: Eval,
) -> Result<Option<Step>> {
    let zero = lex_zero();
    let Some(entering) = (1..=t.k()).find(|&r| {
        if basis.contains(r) {
            return false;
        }
        let (c, s) = z.dot_row(t.m1.row(r - 1));
        lex(mode, xi, &c, &s) > zero
    }) else {
        return Ok(None);
    };
    // express the entering row in the basic rows: Gᵀλ = rowᵀ
    let g = t.basis_matrix(basis);
    let row = t.m1.row(entering - 1).to_vec();
    let zeros = vec![Rational::zero(); row.len()];
    let lambda = solve_square(&g.transpose(), &row, &zeros)
        .map_err(|_| Error::SingularBasis)?
        .constant;
    let mut best: Option<(Lex, usize)> = None;
    for (pos, &r) in basis.rows.iter().enumerate() {
        let l = &lambda[pos];
        if !l.is_positive() {
            continue;
        }
        let (c, s) = u.component(r - 1);
        let dual = lex(mode, xi, c, s);
        let ratio = (&dual.0 / l, &dual.1 / l);
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, r));
        }
    }
    let (_, leaving) = best.ok_or(Error::Infeasible)?;
    Ok(Some(Step {
        kind: StepKind::Dual,
        leaving,
        entering,
    }))
}

fn step_limit(t: &ParametricTableau) -> usize {
    // generous: every step visits a distinct basis
    64 * (t.k() + 1) * (t.k() + 1)
}

/// Pivot until the basis is optimal under `mode`. Returns every basis visited
/// (starting with `basis`) and the steps taken.
fn reoptimize(
    t: &ParametricTableau,
    basis: ParametricBasis,
    xi: &Rational,
    mode: Eval,
) -> Result<(Vec<ParametricBasis>, Vec<Step>)> {
    let mut visited = vec![basis];
    let mut steps = Vec::new();
    loop {
        if steps.len() > step_limit(t) {
            return Err(Error::Stalled { xi: xi.clone() });
        }
        let current = visited.last().expect("nonempty");
        let (z, u) = solve_basis(t, current)?;
        let step = match primal_step(t, current, &z, &u, xi, mode)? {
            Some(s) => Some(s),
            None => dual_step(t, current, &z, &u, xi, mode)?,
        };
        let Some(step) = step else {
            return Ok((visited, steps));
        };
        let next = current.replace(step.leaving, step.entering);
        visited.push(next);
        steps.push(step);
    }
}

/// A feasible basis of `LP(ξ)` built directly: `x` is the first pure
/// strategy, `y` sits on the edge of the simplex between the columns with
/// smallest and largest `c` (or is the first pure strategy when zero-sum).
fn feasible_basis(t: &ParametricTableau, g: &BimatrixGame, xi: &Rational) -> ParametricBasis {
    let (m, n) = (t.m, t.n);
    let mut rows: Vec<usize> = (2..=m).collect();
    let first_row_payoffs = g.b().row(0);
    let best_col = argmax(first_row_payoffs);
    rows.push(m + best_col + 1);

    let mut y = vec![Rational::zero(); n];
    let edge: Vec<usize> = if t.equalities() == 3 {
        let c = t.m2.row(2)[m..m + n].to_vec();
        let lo = argmin(&c);
        let hi = argmax(&c);
        let span = &c[hi] - &c[lo];
        y[lo] = (&c[hi] - xi) / &span;
        y[hi] = Rational::one() - &y[lo];
        vec![lo, hi]
    } else {
        y[0] = Rational::one();
        vec![0]
    };
    for j in (0..n).filter(|j| !edge.contains(j)) {
        rows.push(2 * m + n + j + 1);
    }
    let best_row = argmax(&g.row_payoffs(&y));
    rows.push(m + n + best_row + 1);
    ParametricBasis::new(rows)
}

fn argmax(v: &[Rational]) -> usize {
    let best = max_of(v);
    v.iter().position(|x| *x == best).expect("nonempty")
}

fn argmin(v: &[Rational]) -> usize {
    let best = v.iter().min().expect("nonempty");
    v.iter().position(|x| x == best).expect("nonempty")
}

/// An optimal basis of `LP(ξ)` at `ξ = xi`: a directly constructed feasible
/// basis, then primal simplex steps with Bland's rule.
pub fn initial_basis(
    t: &ParametricTableau,
    g: &BimatrixGame,
    xi: &Rational,
) -> Result<ParametricBasis> {
    if *xi < t.xi_min || *xi > t.xi_max {
        return Err(Error::Infeasible);
    }
    let start = feasible_basis(t, g, xi);
    let (visited, _) = reoptimize(t, start, xi, Eval::At)?;
    Ok(visited.into_iter().last().expect("nonempty"))
}

/// Which optimality condition fails first to the right of a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotCase {
    /// A non-basic row becomes violated (`ξ2 = α2`): dual simplex step.
    Feasibility,
    /// A basic dual variable becomes negative (`ξ2 = β2`): primal simplex step.
    Optimality,
    /// Both at once.
    Both,
}

/// One basis change at `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub xi: Rational,
    pub case: PivotCase,
    pub leaving: usize,
    pub entering: usize,
}

/// Result of [`advance`]: the basis optimal just right of the breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Advance {
    pub basis: ParametricBasis,
    pub case: PivotCase,
    pub pivots: Vec<Breakpoint>,
    /// Every basis optimal at the breakpoint, in pivot order.
    pub visited: Vec<ParametricBasis>,
}

/// Pivot out of `interval` at its right end `ξ2`.
///
/// Ties among rows hitting their bound at the same `ξ2` are broken by
/// comparing values at `ξ2 + ε` lexicographically, then by lowest index.
pub fn advance(t: &ParametricTableau, interval: &BasisInterval) -> Result<Advance> {
    let xi = &interval.xi2;
    if *xi >= t.xi_max {
        return Err(Error::Stalled { xi: xi.clone() });
    }
    let case = match (interval.alpha2 == *xi, interval.beta2 == *xi) {
        (true, true) => PivotCase::Both,
        (true, false) => PivotCase::Feasibility,
        (false, true) => PivotCase::Optimality,
        (false, false) => return Err(Error::Stalled { xi: xi.clone() }),
    };
    let (visited, steps) = reoptimize(t, interval.basis.clone(), xi, Eval::RightOf)?;
    if steps.is_empty() {
        return Err(Error::Stalled { xi: xi.clone() });
    }
    let pivots = steps
        .iter()
        .map(|s| Breakpoint {
            xi: xi.clone(),
            case: match case {
                PivotCase::Both => PivotCase::Both,
                _ => match s.kind {
                    StepKind::Primal => PivotCase::Optimality,
                    StepKind::Dual => PivotCase::Feasibility,
                },
            },
            leaving: s.leaving,
            entering: s.entering,
        })
        .collect();
    Ok(Advance {
        basis: visited.last().expect("nonempty").clone(),
        case,
        pivots,
        visited,
    })
}

fn point_to_equilibrium(t: &ParametricTableau, z: &[Rational], xi: &Rational) -> EquilibriumPoint {
    let (x, y, pi1, pi2) = t.split(z);
    EquilibriumPoint {
        strategies: MixedStrategyPair { x, y },
        payoff1: pi1,
        payoff2: pi2,
        source_xi: Some(xi.clone()),
    }
}

/// Every `ξ*` in the interval with zero objective, turned into equilibria.
pub fn equilibria_on_interval(
    t: &ParametricTableau,
    interval: &BasisInterval,
) -> Result<Vec<EquilibriumPoint>> {
    let zeros =
        quadratic_zeros_in_interval(&interval.objective, &interval.xi1, &interval.xi2, true)
            .map_err(|e| match e {
                Error::IdenticallyZero => Error::from(Degeneracy::ZeroObjectiveSegment {
                    lo: interval.xi1.clone(),
                    hi: interval.xi2.clone(),
                }),
                other => other,
            })?;
    Ok(zeros
        .iter()
        .map(|xi| point_to_equilibrium(t, &interval.point(xi), xi))
        .collect())
}

/// Where a trace row sits on the parameter axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceXi {
    At(Rational),
    /// Open interval.
    Between(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceObjective {
    Value(Rational),
    /// Strictly negative throughout the open interval.
    Negative,
}

/// One row of the sweep table: objective and binding rows at a breakpoint or
/// on the open interval between two breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub xi: TraceXi,
    pub objective: TraceObjective,
    /// 1-based rows of `M1` binding there; at a breakpoint, the union over
    /// all bases optimal at that point.
    pub binding: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepTrace {
    pub class: GameClass,
    pub xi_min: Rational,
    pub xi_max: Rational,
    pub intervals: Vec<BasisInterval>,
    pub equilibria: Vec<EquilibriumPoint>,
    pub breakpoints: Vec<Breakpoint>,
    pub rows: Vec<TraceRow>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Use this factorization of `A + B` instead of the canonical one.
    pub factorization: Option<RankOneFactorization>,
    /// Skip the up-front vertex-enumeration degeneracy check.
    pub skip_degeneracy_check: bool,
}

/// Enumerate all equilibria of a non-degenerate game of rank at most one.
pub fn enumerate_all(g: &BimatrixGame) -> Result<SweepTrace> {
    enumerate_with(g, &SweepOptions::default())
}

pub fn enumerate_with(g: &BimatrixGame, opts: &SweepOptions) -> Result<SweepTrace> {
    let class = g.classify();
    if !matches!(class, GameClass::ZeroSum | GameClass::RowConstant(_)) {
        let rank = g.rank();
        if rank != 1 {
            return Err(Error::NotRankOne { rank });
        }
    }
    if !opts.skip_degeneracy_check {
        check_nondegenerate(g)?;
    }
    match class {
        GameClass::ZeroSum => single_program(g, g, class),
        GameClass::RowConstant(ref u) => {
            let reduced = g.reduce_row_constant(u)?;
            single_program(g, &reduced, class)
        }
        GameClass::General => {
            let f = match &opts.factorization {
                Some(f) => f.clone(),
                None => g.factor_rank1()?,
            };
            sweep(g, &f)
        }
    }
}

/// Zero-sum (or reduced row-constant) games: one program at `ξ = 0`.
fn single_program(
    original: &BimatrixGame,
    zero_sum: &BimatrixGame,
    class: GameClass,
) -> Result<SweepTrace> {
    let t = zero_sum_tableau(zero_sum)?;
    let xi = Rational::zero();
    let basis = initial_basis(&t, zero_sum, &xi)?;
    let (z, u) = solve_basis(&t, &basis)?;
    let interval = basis_interval(&t, &basis, &z, &u)?;
    let point = interval.point(&xi);
    let mut eq = point_to_equilibrium(&t, &point, &xi);
    // payoffs of the original game; they differ from the reduced one when row-constant
    eq.payoff1 = max_of(&original.row_payoffs(eq.y()));
    eq.payoff2 = max_of(&original.column_payoffs(eq.x()));
    let row = TraceRow {
        xi: TraceXi::At(xi.clone()),
        objective: TraceObjective::Value(interval.objective.eval(&xi)),
        binding: t.binding_rows(&point),
    };
    Ok(SweepTrace {
        class,
        xi_min: xi.clone(),
        xi_max: xi,
        intervals: vec![interval],
        equilibria: vec![eq],
        breakpoints: Vec::new(),
        rows: vec![row],
    })
}

fn binding_union(
    t: &ParametricTableau,
    bases: &[ParametricBasis],
    xi: &Rational,
) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for b in bases {
        let (z, _) = solve_basis(t, b)?;
        out.extend(t.binding_rows(&z.eval(xi)));
    }
    Ok(out)
}

fn sweep(g: &BimatrixGame, f: &RankOneFactorization) -> Result<SweepTrace> {
    let t = build_tableau(g, f)?;
    let xi_min = t.xi_min.clone();
    let xi_max = t.xi_max.clone();

    let at_min = initial_basis(&t, g, &xi_min)?;
    let (mut at_point, _) = reoptimize(&t, at_min, &xi_min, Eval::RightOf)?;
    let mut basis = at_point.last().expect("nonempty").clone();
    let mut entry = xi_min.clone();

    let mut seen = BTreeSet::new();
    let mut intervals = Vec::new();
    let mut equilibria = Vec::new();
    let mut breakpoints = Vec::new();
    let mut rows = Vec::new();
    let mut objective_at_entry: Option<Rational> = None;

    loop {
        if !seen.insert(basis.clone()) {
            return Err(Error::Stalled { xi: entry });
        }
        let (z, u) = solve_basis(&t, &basis)?;
        let mut interval = basis_interval(&t, &basis, &z, &u)?;
        if interval.xi1 > entry || interval.xi2 <= entry {
            return Err(Error::Stalled { xi: entry });
        }
        interval.xi1 = entry.clone();

        let found = equilibria_on_interval(&t, &interval)?;
        let here = interval.objective.eval(&entry);
        debug_assert!(objective_at_entry.as_ref().is_none_or(|v| *v == here));
        let _ = objective_at_entry.take();
        rows.push(TraceRow {
            xi: TraceXi::At(entry.clone()),
            objective: TraceObjective::Value(here),
            binding: binding_union(&t, &at_point, &entry)?,
        });
        let interior: Vec<Rational> = found
            .iter()
            .filter_map(|e| e.source_xi.clone())
            .filter(|x| *x > interval.xi1 && *x < interval.xi2)
            .collect();
        let mut lo = interval.xi1.clone();
        for x in interior {
            rows.push(open_row(&t, &interval, &lo, &x));
            rows.push(TraceRow {
                xi: TraceXi::At(x.clone()),
                objective: TraceObjective::Value(Rational::zero()),
                binding: t.binding_rows(&interval.point(&x)),
            });
            lo = x;
        }
        rows.push(open_row(&t, &interval, &lo, &interval.xi2));
        equilibria.extend(found);

        if interval.xi2 >= xi_max {
            let end = interval.xi2.clone();
            rows.push(TraceRow {
                xi: TraceXi::At(end.clone()),
                objective: TraceObjective::Value(interval.objective.eval(&end)),
                binding: t.binding_rows(&interval.point(&end)),
            });
            intervals.push(interval);
            break;
        }
        let step = advance(&t, &interval)?;
        entry = interval.xi2.clone();
        objective_at_entry = Some(interval.objective.eval(&entry));
        breakpoints.extend(step.pivots);
        at_point = step.visited;
        basis = step.basis;
        intervals.push(interval);
    }

    Ok(SweepTrace {
        class: GameClass::General,
        xi_min,
        xi_max,
        intervals,
        equilibria: dedup_equilibria(equilibria),
        breakpoints,
        rows,
    })
}

fn open_row(t: &ParametricTableau, iv: &BasisInterval, lo: &Rational, hi: &Rational) -> TraceRow {
    let mid = (lo + hi) / Rational::from_integer(2.into());
    TraceRow {
        xi: TraceXi::Between(lo.clone(), hi.clone()),
        objective: TraceObjective::Negative,
        binding: t.binding_rows(&iv.point(&mid)),
    }
}

/// `f₀(P)·f₀(Q)`, the bound on the number of bases the sweep visits.
pub fn vertex_product(g: &BimatrixGame) -> usize {
    let p = enumerate_vertices(&build_polyhedron(g, Side::P)).len();
    let q = enumerate_vertices(&build_polyhedron(g, Side::Q)).len();
    p * q
}

/// Outcome of comparing the dual of the zero-sum program with the primal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCoincidence {
    /// Every dual constraint row is a primal constraint row under the
    /// identification, and every primal row is hit exactly once.
    pub rows_coincide: bool,
    /// The dual objective is minus the primal objective.
    pub objectives_inverse: bool,
}

/// Compare the dual program of a zero-sum game with its primal under
/// `xᵢ = u_{m+n+i}`, `yⱼ = u_{m+j}`, `π1 = u_{K+1}`, `π2 = u_{K+2}`
/// (1-based), treating `u₁..u_m` and `u_{2m+n+1}..u_K` as slacks.
pub fn zero_sum_dual_coincidence(g: &BimatrixGame) -> Result<DualCoincidence> {
    let t = zero_sum_tableau(g)?;
    Ok(dual_coincidence_with(&t, t.k(), t.k() + 1))
}

/// `pi1_dual`/`pi2_dual` are the 0-based dual indices identified with π1, π2.
fn dual_coincidence_with(
    t: &ParametricTableau,
    pi1_dual: usize,
    pi2_dual: usize,
) -> DualCoincidence {
    let (m, n, k) = (t.m, t.n, t.k());
    let vars = t.vars();
    let duals = k + t.equalities();
    // dual index → primal variable, for identified duals
    let mut var_of = vec![None; duals];
    for i in 0..m {
        var_of[m + n + i] = Some(i);
    }
    for j in 0..n {
        var_of[m + j] = Some(m + j);
    }
    var_of[pi1_dual] = Some(t.pi1());
    var_of[pi2_dual] = Some(t.pi2());

    // dual constraints: (M1ᵀ | M2ᵀ)·u = w, one per primal variable
    let full = t.m1.vstack(&t.m2);
    let mut hit_ineq = vec![0usize; k];
    let mut hit_eq = vec![0usize; t.equalities()];
    let mut ok = true;
    for v in 0..vars {
        let mut coef = vec![Rational::zero(); vars];
        let mut slacks = Vec::new();
        for d in 0..duals {
            let a = full[(d, v)].clone();
            if a.is_zero() {
                continue;
            }
            match var_of[d] {
                Some(p) => coef[p] += a,
                None => slacks.push(a),
            }
        }
        let rhs = t.objective.constant[v].clone();
        match slacks.as_slice() {
            [] => {
                // equality row: must be ± a row of M2 with matching right-hand side
                let found = (0..t.equalities()).find(|&e| {
                    let row = t.m2.row(e);
                    let target = &t.e2.constant[e];
                    (row == coef.as_slice() && *target == rhs)
                        || (row.iter().zip(&coef).all(|(p, q)| *p == -q) && *target == -&rhs)
                });
                match found {
                    Some(e) => hit_eq[e] += 1,
                    None => ok = false,
                }
            }
            [s] if s.abs().is_one() => {
                // a·z + s·σ = rhs with σ ≥ 0; normalise to a·z + σ = rhs/s
                let a: Vec<Rational> = coef.iter().map(|c| c / s).collect();
                let r = &rhs / s;
                // identical rows (repeated payoffs) are matched one each
                let equal = |row: &usize| t.m1.row(*row) == a.as_slice();
                let found = (0..k)
                    .filter(equal)
                    .find(|&row| hit_ineq[row] == 0)
                    .or_else(|| (0..k).find(equal));
                match found {
                    Some(row) if r.is_zero() => hit_ineq[row] += 1,
                    _ => ok = false,
                }
            }
            _ => ok = false,
        }
    }
    // sign-restricted identified duals stand for the primal nonnegativity rows
    for p in var_of[..k].iter().flatten().copied() {
        let row = (0..k).find(|&r| {
            let row = t.m1.row(r);
            row[p] == -Rational::one() && row.iter().enumerate().all(|(c, v)| c == p || v.is_zero())
        });
        match row {
            Some(r) => hit_ineq[r] += 1,
            None => ok = false,
        }
    }
    // free duals must be exactly the payoff identifications
    if var_of[k..duals].iter().any(Option::is_none) {
        ok = false;
    }
    let rows_coincide = ok && hit_ineq.iter().all(|&h| h == 1) && hit_eq.iter().all(|&h| h == 1);

    // dual objective e2ᵀu_eq versus primal objective wᵀz
    let mut dual_obj = vec![Rational::zero(); vars];
    for e in 0..t.equalities() {
        if let Some(p) = var_of[k + e] {
            dual_obj[p] += &t.e2.constant[e];
        }
    }
    let objectives_inverse = dual_obj
        .iter()
        .zip(&t.objective.constant)
        .all(|(d, w)| *d == -w);
    DualCoincidence {
        rows_coincide,
        objectives_inverse,
    }
}
