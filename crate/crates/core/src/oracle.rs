//! Brute-force support enumeration, the reference every other route is
//! checked against.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::game::{dedup_equilibria, max_of, BimatrixGame, EquilibriumPoint, MixedStrategyPair};
use crate::linalg::{solve_system, RMatrix, Rational, SystemSolution};
use crate::polytope::combinations;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SupportMode {
    /// Only supports of equal size; complete for non-degenerate games.
    #[default]
    EqualSize,
    /// Every pair of nonempty supports.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportEnumeration {
    /// Equilibria sorted by strategy pair.
    pub equilibria: Vec<EquilibriumPoint>,
    /// Some support pair produced a singular or underdetermined system,
    /// which only happens in degenerate games.
    pub degenerate_suspect: bool,
}

pub fn support_enumeration(g: &BimatrixGame) -> Vec<EquilibriumPoint> {
    support_enumeration_with(g, SupportMode::EqualSize).equilibria
}

pub fn support_enumeration_with(g: &BimatrixGame, mode: SupportMode) -> SupportEnumeration {
    let (m, n) = (g.m(), g.n());
    let mut found = Vec::new();
    let mut suspect = false;
    for k1 in 1..=m {
        for k2 in 1..=n {
            if mode == SupportMode::EqualSize && k1 != k2 {
                continue;
            }
            for s1 in combinations(m, k1) {
                for s2 in combinations(n, k2) {
                    match solve_supports(g, &s1, &s2) {
                        Candidate::Point(p) => found.push(p),
                        Candidate::Degenerate => suspect = true,
                        Candidate::None => {}
                    }
                }
            }
        }
    }
    SupportEnumeration {
        equilibria: dedup_equilibria(found),
        degenerate_suspect: suspect,
    }
}

#[allow(clippy::large_enum_variant)]
enum Candidate {
    Point(EquilibriumPoint),
    Degenerate,
    None,
}

/// Mix `support` so that every column in `opponent` earns the same payoff.
///
/// `payoff(i, j)` is the payoff of the *indifferent* player when the mixing
/// player uses pure strategy `i` and the indifferent player uses `j`.
fn indifference(
    size: usize,
    support: &[usize],
    opponent: &[usize],
    payoff: impl Fn(usize, usize) -> Rational,
) -> Result<Option<(Vec<Rational>, Rational)>, ()> {
    // unknowns: weights on `support`, then the common value
    let k = support.len();
    let mut sys = RMatrix::zeros(opponent.len() + 1, k + 1);
    let mut rhs = vec![Rational::zero(); opponent.len() + 1];
    for (r, &j) in opponent.iter().enumerate() {
        for (c, &i) in support.iter().enumerate() {
            sys[(r, c)] = payoff(i, j);
        }
        sys[(r, k)] = -Rational::one();
    }
    let last = opponent.len();
    for c in 0..k {
        sys[(last, c)] = Rational::one();
    }
    rhs[last] = Rational::one();
    match solve_system(&sys, &rhs) {
        SystemSolution::Unique(sol) => {
            if sol[..k].iter().any(|w| w.is_negative()) {
                return Ok(None);
            }
            let mut full = vec![Rational::zero(); size];
            for (c, &i) in support.iter().enumerate() {
                full[i] = sol[c].clone();
            }
            Ok(Some((full, sol[k].clone())))
        }
        SystemSolution::Underdetermined => Err(()),
        SystemSolution::Inconsistent => Ok(None),
    }
}

fn solve_supports(g: &BimatrixGame, s1: &[usize], s2: &[usize]) -> Candidate {
    let (m, n) = (g.m(), g.n());
    // x makes player 2 indifferent over s2; y makes player 1 indifferent over s1
    let x = indifference(m, s1, s2, |i, j| g.b()[(i, j)].clone());
    let y = indifference(n, s2, s1, |j, i| g.a()[(i, j)].clone());
    let (x, y) = match (x, y) {
        (Err(()), _) | (_, Err(())) => return Candidate::Degenerate,
        (Ok(Some(x)), Ok(Some(y))) => (x, y),
        _ => return Candidate::None,
    };
    let ((x, pi2), (y, pi1)) = (x, y);
    if max_of(&g.row_payoffs(&y)) != pi1 || max_of(&g.column_payoffs(&x)) != pi2 {
        return Candidate::None;
    }
    Candidate::Point(EquilibriumPoint {
        strategies: MixedStrategyPair { x, y },
        payoff1: pi1,
        payoff2: pi2,
        source_xi: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, int};

    #[test]
    fn example_2x3_has_three() {
        let g = BimatrixGame::from_i64(&[[2, 1, 5], [3, 0, 4]], &[[7, 8, 1], [2, 1, 6]]).unwrap();
        let eq = support_enumeration(&g);
        assert_eq!(eq.len(), 3);
        assert!(eq.iter().all(|e| g.is_nash(&e.strategies).is_some()));
        assert!(eq
            .iter()
            .any(|e| e.strategies.x == vec![frac(2, 5), frac(3, 5)]));
    }

    #[test]
    fn rank1_2x2_includes_mixed() {
        let g = BimatrixGame::from_i64(&[[-28, -18], [-8, -23]], &[[10, 30], [20, 15]]).unwrap();
        let eq = support_enumeration(&g);
        assert_eq!(eq.len(), 3);
        let mixed =
            MixedStrategyPair::new(vec![frac(1, 5), frac(4, 5)], vec![frac(1, 5), frac(4, 5)])
                .unwrap();
        let e = eq.iter().find(|e| e.strategies == mixed).unwrap();
        assert_eq!((e.payoff1.clone(), e.payoff2.clone()), (int(-20), int(18)));
    }

    #[test]
    fn one_by_one() {
        let g = BimatrixGame::from_i64(&[[3]], &[[-1]]).unwrap();
        let eq = support_enumeration(&g);
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].strategies, MixedStrategyPair::pure(1, 1, 0, 0));
    }

    #[test]
    fn degenerate_game_is_flagged() {
        // identical payoffs for player 2 in both columns
        let g = BimatrixGame::from_i64(&[[1, 2], [3, 0]], &[[4, 4], [1, 1]]).unwrap();
        let r = support_enumeration_with(&g, SupportMode::Strict);
        assert!(r.degenerate_suspect);
        assert!(r
            .equilibria
            .iter()
            .all(|e| g.is_nash(&e.strategies).is_some()));
    }
}
