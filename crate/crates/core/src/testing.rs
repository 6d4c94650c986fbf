//! Small worked examples shared by the unit tests.

use std::sync::Arc;

use crate::complex::SimplicialComplex;
use crate::filtration::Filtration;
use crate::lattice::{hasse_metric, BoundedLatticeMap, FiniteMetricLattice, OrderSpec};

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn covers(pairs: &[(&str, &str)]) -> OrderSpec {
    OrderSpec::Covers(pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
}

/// `a < b, c < d` with the Hasse metric.
pub fn diamond() -> Arc<FiniteMetricLattice> {
    Arc::new(
        hasse_metric(strings(&["a", "b", "c", "d"]), covers(&[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]))
            .unwrap(),
    )
}

/// `p < q < r` with the Hasse metric.
pub fn chain_pqr() -> Arc<FiniteMetricLattice> {
    Arc::new(hasse_metric(strings(&["p", "q", "r"]), covers(&[("p", "q"), ("q", "r")])).unwrap())
}

/// A chain with unit steps.
pub fn chain_names(names: &[&str]) -> Arc<FiniteMetricLattice> {
    let coords: Vec<f64> = (0..names.len()).map(|i| i as f64).collect();
    Arc::new(FiniteMetricLattice::chain(strings(names), &coords).unwrap())
}

/// `a, b ↦ p` and `c, d ↦ r`.
pub fn diamond_to_chain() -> BoundedLatticeMap {
    let (p, q) = (diamond(), chain_pqr());
    let (pp, rr) = (q.element("p").unwrap(), q.element("r").unwrap());
    BoundedLatticeMap::new(p, q, vec![pp, pp, rr, rr]).unwrap()
}

/// The full 2-simplex on `{0, 1, 2}`.
pub fn triangle() -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::validate(&[vec![0, 1, 2]]).unwrap())
}

fn filtration(index: Arc<FiniteMetricLattice>, k: Arc<SimplicialComplex>, stages: &[(&str, Vec<Vec<u32>>)]) -> Filtration {
    let assignment = stages.iter().map(|(a, s)| (a.to_string(), s.clone())).collect();
    Filtration::from_generators(index, k, &assignment).unwrap()
}

fn hollow() -> Vec<Vec<u32>> {
    vec![vec![0, 1], vec![1, 2], vec![0, 2]]
}

/// Diamond-indexed filtration of the 2-simplex: one edge at `a`, the hollow
/// triangle at `b` and `c`, everything at `d`.
pub fn triangle_over_diamond() -> Filtration {
    filtration(
        diamond(),
        triangle(),
        &[
            ("a", vec![vec![0, 1], vec![2]]),
            ("b", hollow()),
            ("c", hollow()),
            ("d", vec![vec![0, 1, 2]]),
        ],
    )
}

/// Kan extension of [`triangle_over_diamond`] along [`diamond_to_chain`].
pub fn triangle_over_chain() -> Filtration {
    filtration(chain_pqr(), triangle(), &[("p", hollow()), ("q", hollow()), ("r", vec![vec![0, 1, 2]])])
}

/// Diamond-indexed filtration of a single edge.
pub fn edge_over_diamond() -> Filtration {
    filtration(
        diamond(),
        Arc::new(SimplicialComplex::validate(&[vec![0, 1]]).unwrap()),
        &[
            ("a", vec![vec![0]]),
            ("b", vec![vec![0], vec![1]]),
            ("c", vec![vec![0, 1]]),
            ("d", vec![vec![0, 1]]),
        ],
    )
}
