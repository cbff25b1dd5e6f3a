mod common;

use std::collections::BTreeSet;

use rank1_core::lemke_howson::{gprime_components, lh_run, reachability};
use rank1_core::oracle::support_enumeration;
use rank1_core::parametric::{
    enumerate_all, enumerate_with, solve_basis, ParametricBasis, PivotCase, SweepOptions,
    TraceObjective, TraceXi,
};
use rank1_core::polytope::equilibria_by_labels;
use rank1_core::{frac, generate_kt, int, BimatrixGame, MixedStrategyPair, RankOneFactorization};

use common::strategies;

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn kt2_sweep() -> rank1_core::parametric::SweepTrace {
    let g = generate_kt(2);
    let f = RankOneFactorization::new(&g, vec![int(2), int(4)], vec![int(2), int(4)]).unwrap();
    let opts = SweepOptions {
        factorization: Some(f),
        ..SweepOptions::default()
    };
    enumerate_with(&g, &opts).unwrap()
}

#[test]
fn kt2_trace_table() {
    let trace = kt2_sweep();
    let at: Vec<_> = trace
        .rows
        .iter()
        .filter_map(|r| match (&r.xi, &r.objective) {
            (TraceXi::At(x), TraceObjective::Value(v)) => {
                Some((x.clone(), v.clone(), r.binding.clone()))
            }
            _ => None,
        })
        .collect();
    let expected = vec![
        (int(2), int(0), set(&[2, 3, 5, 8])),
        (frac(5, 2), frac(-1, 4), set(&[2, 3, 4, 5])),
        (int(3), int(0), set(&[3, 4, 5, 6])),
        (frac(7, 2), frac(-1, 4), set(&[1, 3, 4, 6])),
        (int(4), int(0), set(&[1, 4, 6, 7])),
    ];
    assert_eq!(at, expected);

    let open: Vec<_> = trace
        .rows
        .iter()
        .filter_map(|r| match &r.xi {
            TraceXi::Between(lo, hi) => Some((lo.clone(), hi.clone(), r.binding.clone())),
            _ => None,
        })
        .collect();
    assert_eq!(
        open,
        vec![
            (int(2), frac(5, 2), set(&[2, 3, 5])),
            (frac(5, 2), int(3), set(&[3, 4, 5])),
            (int(3), frac(7, 2), set(&[3, 4, 6])),
            (frac(7, 2), int(4), set(&[1, 4, 6])),
        ]
    );
    assert!(trace
        .rows
        .iter()
        .filter(|r| matches!(r.xi, TraceXi::Between(..)))
        .all(|r| r.objective == TraceObjective::Negative));
}

#[test]
fn kt2_breakpoint_cases() {
    let trace = kt2_sweep();
    let summary: Vec<_> = trace
        .breakpoints
        .iter()
        .map(|b| (b.xi.clone(), b.case, b.leaving, b.entering))
        .collect();
    assert_eq!(
        summary,
        vec![
            (frac(5, 2), PivotCase::Optimality, 2, 4),
            (int(3), PivotCase::Feasibility, 5, 6),
            (frac(7, 2), PivotCase::Optimality, 3, 1),
        ]
    );
}

#[test]
fn kt2_at_five_halves() {
    let trace = kt2_sweep();
    let xi = frac(5, 2);
    let g = generate_kt(2);
    let f = RankOneFactorization::new(&g, vec![int(2), int(4)], vec![int(2), int(4)]).unwrap();
    let t = rank1_core::parametric::build_tableau(&g, &f).unwrap();
    let mut points = Vec::new();
    for rows in [[2, 3, 5], [3, 4, 5]] {
        let b = ParametricBasis::new(rows.to_vec());
        assert!(trace.intervals.iter().any(|i| i.basis == b));
        let (z, _) = solve_basis(&t, &b).unwrap();
        let p = z.eval(&xi);
        assert_eq!(&p[2..4], &[frac(3, 4), frac(1, 4)]);
        assert_eq!(p[4], frac(13, 4));
        points.push((p[0].clone(), p[5].clone()));
    }
    assert_eq!(points, vec![(int(1), int(2)), (frac(1, 2), frac(9, 2))]);
}

#[test]
fn kt2_equilibria() {
    let trace = kt2_sweep();
    let got: Vec<_> = trace
        .equilibria
        .iter()
        .map(|e| (e.strategies.clone(), e.payoff1.clone(), e.payoff2.clone()))
        .collect();
    let half = vec![frac(1, 2), frac(1, 2)];
    assert_eq!(
        got,
        vec![
            (MixedStrategyPair::pure(2, 2, 1, 1), int(8), int(8)),
            (
                MixedStrategyPair::new(half.clone(), half).unwrap(),
                frac(9, 2),
                frac(9, 2)
            ),
            (MixedStrategyPair::pure(2, 2, 0, 0), int(2), int(2)),
        ]
    );
}

fn aggarwal() -> BimatrixGame {
    BimatrixGame::from_i64(&[[-28, -18], [-8, -23]], &[[10, 30], [20, 15]]).unwrap()
}

#[test]
fn aggarwal_three_routes_agree() {
    let g = aggarwal();
    let sweep = enumerate_all(&g).unwrap().equilibria;
    let mut payoffs: Vec<_> = sweep
        .iter()
        .map(|e| (e.payoff1.clone(), e.payoff2.clone()))
        .collect();
    payoffs.sort();
    assert_eq!(
        payoffs,
        vec![(int(-20), int(18)), (int(-18), int(30)), (int(-8), int(20))]
    );
    assert_eq!(strategies(&sweep), strategies(&support_enumeration(&g)));
    assert_eq!(
        strategies(&sweep),
        strategies(&equilibria_by_labels(&g).unwrap())
    );
}

#[test]
fn aggarwal_reachability() {
    let g = aggarwal();
    let r = reachability(&g).unwrap();
    let first = MixedStrategyPair::pure(2, 2, 0, 1);
    let second = MixedStrategyPair::pure(2, 2, 1, 0);
    assert_eq!(r.reached.len(), 4);
    assert!(r
        .reached
        .values()
        .all(|e| e.strategies == first || e.strategies == second));
    let reached: BTreeSet<_> = r.reached.values().map(|e| e.strategies.clone()).collect();
    assert_eq!(reached.len(), 2);
    let mixed =
        MixedStrategyPair::new(vec![frac(1, 5), frac(4, 5)], vec![frac(1, 5), frac(4, 5)]).unwrap();
    assert_eq!(strategies(&r.unreached), vec![mixed]);

    let path = lh_run(&g, 1).unwrap();
    let labels: Vec<_> = path
        .steps
        .iter()
        .map(|s| (s.labels1.clone(), s.labels2.clone()))
        .collect();
    assert_eq!(
        labels,
        vec![
            (set(&[1, 2]), set(&[3, 4])),
            (set(&[2, 4]), set(&[3, 4])),
            (set(&[2, 4]), set(&[1, 3])),
        ]
    );
    assert_eq!(path.equilibrium().unwrap().strategies, first);
}

#[test]
fn example_2x3_oracle_and_labels() {
    let g = BimatrixGame::from_i64(&[[2, 1, 5], [3, 0, 4]], &[[7, 8, 1], [2, 1, 6]]).unwrap();
    assert_ne!(g.rank(), 1);
    let expected = vec![
        MixedStrategyPair::new(
            vec![frac(2, 5), frac(3, 5)],
            vec![frac(1, 2), int(0), frac(1, 2)],
        )
        .unwrap(),
        MixedStrategyPair::new(
            vec![frac(1, 2), frac(1, 2)],
            vec![frac(1, 2), frac(1, 2), int(0)],
        )
        .unwrap(),
        MixedStrategyPair::pure(2, 3, 0, 1),
    ];
    let mut expected = expected;
    expected.sort();
    assert_eq!(strategies(&support_enumeration(&g)), expected);
    assert_eq!(strategies(&equilibria_by_labels(&g).unwrap()), expected);
}

#[test]
fn kt_scaling() {
    for d in 1..=5 {
        let g = generate_kt(d);
        assert_eq!(g.rank(), 1);
        let sweep = enumerate_all(&g).unwrap().equilibria;
        assert!(sweep.len() >= 2 * d - 1, "d = {d}: {}", sweep.len());
        assert_eq!(
            strategies(&sweep),
            strategies(&support_enumeration(&g)),
            "d = {d}"
        );
    }
}

#[test]
fn kt_one_is_the_trivial_game() {
    let g = generate_kt(1);
    assert_eq!(g, BimatrixGame::from_i64(&[[2]], &[[2]]).unwrap());
}

#[test]
fn wilson_mixed_equilibrium_is_cut_off() {
    let g = BimatrixGame::from_i64(
        &[[0, 3, 0], [2, 2, 0], [3, 0, 1]],
        &[[0, 2, 3], [3, 2, 0], [0, 0, 1]],
    )
    .unwrap();
    let c = gprime_components(&g).unwrap();
    assert_eq!(c.components.len(), 2);
    let full = MixedStrategyPair::new(
        vec![frac(1, 6), frac(1, 3), frac(1, 2)],
        vec![frac(1, 6), frac(1, 3), frac(1, 2)],
    )
    .unwrap();
    let (e, _) = c
        .equilibria
        .iter()
        .find(|(e, _)| e.strategies == full)
        .unwrap();
    assert!(!c.reachable_from_artificial(e));
    // the pure equilibrium sits with the artificial pair, both mixed ones do not
    for (e, _) in &c.equilibria {
        let pure = e.x().iter().filter(|v| **v != int(0)).count() == 1;
        assert_eq!(c.reachable_from_artificial(e), pure);
    }
}
