//! Lemke–Howson paths on the labelled vertex graphs `G1` and `G2`.
//!
//! Pivoting is combinatorial: each graph is the vertex set of `P` (resp. `Q`)
//! plus an artificial vertex `0` carrying the labels `1..=m` (resp.
//! `m+1..=m+n`), and two vertices are adjacent when they share all labels but
//! one. Vertex id `0` is always the artificial vertex.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Degeneracy, Error, Result};
use crate::game::{BimatrixGame, EquilibriumPoint};
use crate::linalg::Rational;
use crate::polytope::{
    build_polyhedron, check_nondegenerate, enumerate_vertices, equilibria_by_labels,
    pair_to_equilibrium, LabeledVertex, Side,
};

pub const ARTIFICIAL: usize = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LHGraph {
    pub side: Side,
    /// `vertices[0]` is the artificial vertex.
    pub vertices: Vec<LabeledVertex>,
    pub adjacency: Vec<Vec<usize>>,
}

impl LHGraph {
    fn new(g: &BimatrixGame, side: Side) -> Self {
        let (m, n) = (g.m(), g.n());
        let (dim, labels): (usize, BTreeSet<usize>) = match side {
            Side::P => (m, (1..=m).collect()),
            Side::Q => (n, (m + 1..=m + n).collect()),
        };
        let artificial = LabeledVertex {
            point: vec![Rational::zero(); dim + 1],
            labels,
        };
        let mut vertices = vec![artificial];
        vertices.extend(enumerate_vertices(&build_polyhedron(g, side)));
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for u in 0..vertices.len() {
            for v in u + 1..vertices.len() {
                let shared = vertices[u].labels.intersection(&vertices[v].labels).count();
                if shared + 1 == dim {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        LHGraph {
            side,
            vertices,
            adjacency,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self, v: usize) -> &BTreeSet<usize> {
        &self.vertices[v].labels
    }

    /// The neighbour of `v` that keeps every label of `v` except `label`.
    fn drop_label(&self, v: usize, label: usize) -> Result<usize> {
        let mut it = self.adjacency[v]
            .iter()
            .copied()
            .filter(|&w| !self.labels(w).contains(&label));
        match (it.next(), it.next()) {
            (Some(w), None) => Ok(w),
            _ => Err(Degeneracy::AmbiguousPivot {
                side: self.side,
                label,
            }
            .into()),
        }
    }

    /// The single label of `w` that `v` lacks.
    fn new_label(&self, v: usize, w: usize) -> usize {
        *self
            .labels(w)
            .difference(self.labels(v))
            .next()
            .expect("adjacent vertices differ in one label")
    }
}

/// `G1` over the vertices of `P` and `G2` over the vertices of `Q`.
pub fn build_lh_graphs(g: &BimatrixGame) -> Result<(LHGraph, LHGraph)> {
    check_nondegenerate(g)?;
    Ok((LHGraph::new(g, Side::P), LHGraph::new(g, Side::Q)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LHStep {
    pub v1: usize,
    pub v2: usize,
    pub labels1: BTreeSet<usize>,
    pub labels2: BTreeSet<usize>,
    /// Graph that moved to reach this pair; `None` for the start.
    pub pivoted: Option<Side>,
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LHTerminal {
    Equilibrium(EquilibriumPoint),
    /// The path came back to the artificial pair.
    ArtificialLoop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LHPath {
    pub missing_label: usize,
    pub steps: Vec<LHStep>,
    pub terminal: LHTerminal,
}

impl LHPath {
    pub fn equilibrium(&self) -> Option<&EquilibriumPoint> {
        match &self.terminal {
            LHTerminal::Equilibrium(e) => Some(e),
            LHTerminal::ArtificialLoop => None,
        }
    }
}

/// Follow the path missing label `r` (1-based) from the artificial pair.
pub fn lh_run(g: &BimatrixGame, r: usize) -> Result<LHPath> {
    let (g1, g2) = build_lh_graphs(g)?;
    lh_run_on(&g1, &g2, g.m(), g.n(), r)
}

fn lh_run_on(g1: &LHGraph, g2: &LHGraph, m: usize, n: usize, r: usize) -> Result<LHPath> {
    if r == 0 || r > m + n {
        return Err(Error::IndexOutOfRange {
            index: r,
            max: m + n,
        });
    }
    let limit = g1.vertices.len() * g2.vertices.len() + 1;
    let step = |v1: usize, v2: usize, pivoted| LHStep {
        v1,
        v2,
        labels1: g1.labels(v1).clone(),
        labels2: g2.labels(v2).clone(),
        pivoted,
    };
    let (mut v1, mut v2) = (ARTIFICIAL, ARTIFICIAL);
    let mut steps = vec![step(v1, v2, None)];
    // the artificial vertex of G1 carries 1..=m, so r ≤ m is dropped there
    let mut side = if r <= m { Side::P } else { Side::Q };
    let mut dropping = r;
    loop {
        if steps.len() > limit {
            return Err(Error::PathLimitExceeded { limit });
        }
        let picked = match side {
            Side::P => {
                let w = g1.drop_label(v1, dropping)?;
                let l = g1.new_label(v1, w);
                v1 = w;
                l
            }
            Side::Q => {
                let w = g2.drop_label(v2, dropping)?;
                let l = g2.new_label(v2, w);
                v2 = w;
                l
            }
        };
        steps.push(step(v1, v2, Some(side)));
        if v1 == ARTIFICIAL && v2 == ARTIFICIAL {
            return Ok(LHPath {
                missing_label: r,
                steps,
                terminal: LHTerminal::ArtificialLoop,
            });
        }
        if picked == r {
            let eq = pair_to_equilibrium(&g1.vertices[v1], &g2.vertices[v2]);
            return Ok(LHPath {
                missing_label: r,
                steps,
                terminal: LHTerminal::Equilibrium(eq),
            });
        }
        // the picked label is now duplicated; drop it on the other side
        dropping = picked;
        side = match side {
            Side::P => Side::Q,
            Side::Q => Side::P,
        };
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    /// Terminal equilibrium for every missing label `r`.
    pub reached: BTreeMap<usize, EquilibriumPoint>,
    pub paths: Vec<LHPath>,
    /// Equilibria that no Lemke–Howson path reaches.
    pub unreached: Vec<EquilibriumPoint>,
}

pub fn reachability(g: &BimatrixGame) -> Result<Reachability> {
    let (g1, g2) = build_lh_graphs(g)?;
    let (m, n) = (g.m(), g.n());
    let mut reached = BTreeMap::new();
    let mut paths = Vec::new();
    for r in 1..=m + n {
        let path = lh_run_on(&g1, &g2, m, n, r)?;
        if let Some(e) = path.equilibrium() {
            reached.insert(r, e.clone());
        }
        paths.push(path);
    }
    let unreached = equilibria_by_labels(g)?
        .into_iter()
        .filter(|e| !reached.values().any(|f| f.strategies == e.strategies))
        .collect();
    Ok(Reachability {
        reached,
        paths,
        unreached,
    })
}

/// Connected components of `G′`, the union over all `r` of the
/// `r`-almost completely labelled edges of `G1 × G2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPrimeComponents {
    /// Each component lists its vertex pairs `(v1, v2)`, sorted.
    /// Only pairs that are at least almost completely labelled are kept.
    pub components: Vec<Vec<(usize, usize)>>,
    /// Index into `components` of the component holding `(0, 0)`.
    pub artificial_component: usize,
    /// Every equilibrium with the index of its component.
    pub equilibria: Vec<(EquilibriumPoint, usize)>,
}

impl GPrimeComponents {
    pub fn reachable_from_artificial(&self, e: &EquilibriumPoint) -> bool {
        self.equilibria
            .iter()
            .any(|(f, c)| f.strategies == e.strategies && *c == self.artificial_component)
    }
}

pub fn gprime_components(g: &BimatrixGame) -> Result<GPrimeComponents> {
    let (g1, g2) = build_lh_graphs(g)?;
    let (m, n) = (g.m(), g.n());
    let total = m + n;
    let (n1, n2) = (g1.vertices.len(), g2.vertices.len());
    let id = |a: usize, b: usize| a * n2 + b;
    let covered = |a: usize, b: usize| g1.labels(a).union(g2.labels(b)).count();

    let mut dsu = DisjointSets::new(n1 * n2);
    // edge {a, a'} × {b}: shared labels of a, a' together with labels of b
    // must miss exactly one label
    for a in 0..n1 {
        for &a2 in &g1.adjacency[a] {
            if a2 < a {
                continue;
            }
            let shared: BTreeSet<usize> =
                g1.labels(a).intersection(g1.labels(a2)).copied().collect();
            for b in 0..n2 {
                if shared.union(g2.labels(b)).count() + 1 == total {
                    dsu.union(id(a, b), id(a2, b));
                }
            }
        }
    }
    for b in 0..n2 {
        for &b2 in &g2.adjacency[b] {
            if b2 < b {
                continue;
            }
            let shared: BTreeSet<usize> =
                g2.labels(b).intersection(g2.labels(b2)).copied().collect();
            for a in 0..n1 {
                if shared.union(g1.labels(a)).count() + 1 == total {
                    dsu.union(id(a, b), id(a, b2));
                }
            }
        }
    }

    let mut by_root: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n1 {
        for b in 0..n2 {
            if covered(a, b) + 1 >= total {
                by_root.entry(dsu.find(id(a, b))).or_default().push((a, b));
            }
        }
    }
    let mut components: Vec<Vec<(usize, usize)>> = by_root.into_values().collect();
    components.sort();
    let component_of = |a: usize, b: usize| {
        components
            .iter()
            .position(|c| c.contains(&(a, b)))
            .expect("covered pairs are kept")
    };
    let artificial_component = component_of(ARTIFICIAL, ARTIFICIAL);
    let mut equilibria = Vec::new();
    for a in 1..n1 {
        for b in 1..n2 {
            if covered(a, b) == total {
                let e = pair_to_equilibrium(&g1.vertices[a], &g2.vertices[b]);
                equilibria.push((e, component_of(a, b)));
            }
        }
    }
    equilibria.sort_by(|p, q| p.0.strategies.cmp(&q.0.strategies));
    Ok(GPrimeComponents {
        components,
        artificial_component,
        equilibria,
    })
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::MixedStrategyPair;
    use crate::linalg::{frac, int};

    fn rank1_2x2() -> BimatrixGame {
        BimatrixGame::from_i64(&[[-28, -18], [-8, -23]], &[[10, 30], [20, 15]]).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn graph_sizes() {
        let (g1, g2) = build_lh_graphs(&rank1_2x2()).unwrap();
        assert_eq!(g1.vertices.len(), 4);
        assert_eq!(g2.vertices.len(), 4);
        assert_eq!(g1.labels(ARTIFICIAL), &set(&[1, 2]));
        assert_eq!(g2.labels(ARTIFICIAL), &set(&[3, 4]));

        let one = BimatrixGame::from_i64(&[[1]], &[[1]]).unwrap();
        let (g1, g2) = build_lh_graphs(&one).unwrap();
        assert_eq!((g1.vertices.len(), g1.edge_count()), (2, 1));
        assert_eq!((g2.vertices.len(), g2.edge_count()), (2, 1));
    }

    #[test]
    fn path_for_label_one() {
        let path = lh_run(&rank1_2x2(), 1).unwrap();
        let trace: Vec<_> = path
            .steps
            .iter()
            .map(|s| (s.labels1.clone(), s.labels2.clone()))
            .collect();
        assert_eq!(
            trace,
            vec![
                (set(&[1, 2]), set(&[3, 4])),
                (set(&[2, 4]), set(&[3, 4])),
                (set(&[2, 4]), set(&[1, 3])),
            ]
        );
        let e = path.equilibrium().unwrap();
        assert_eq!(e.strategies, MixedStrategyPair::pure(2, 2, 0, 1));
    }

    #[test]
    fn mixed_equilibrium_is_unreached() {
        let r = reachability(&rank1_2x2()).unwrap();
        assert_eq!(r.reached.len(), 4);
        let mixed =
            MixedStrategyPair::new(vec![frac(1, 5), frac(4, 5)], vec![frac(1, 5), frac(4, 5)])
                .unwrap();
        assert!(r.reached.values().all(|e| e.strategies != mixed));
        assert_eq!(r.unreached.len(), 1);
        assert_eq!(r.unreached[0].strategies, mixed);
        assert_eq!(
            (
                r.unreached[0].payoff1.clone(),
                r.unreached[0].payoff2.clone()
            ),
            (int(-20), int(18))
        );
    }

    #[test]
    fn one_by_one_path() {
        let g = BimatrixGame::from_i64(&[[1]], &[[1]]).unwrap();
        let path = lh_run(&g, 1).unwrap();
        assert_eq!(path.steps.len(), 3);
        assert_eq!(
            path.equilibrium().unwrap().strategies,
            MixedStrategyPair::pure(1, 1, 0, 0)
        );
        let comps = gprime_components(&g).unwrap();
        assert_eq!(comps.components.len(), 1);
    }

    #[test]
    fn label_out_of_range() {
        assert!(matches!(
            lh_run(&rank1_2x2(), 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
