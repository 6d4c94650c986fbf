//! One-parameter persistence: the signed-sum diagram over `1 < … < n < ∞`
//! and its agreement with the Möbius-inversion diagram.

use std::sync::Arc;

use crate::birthdeath::{bd_with, IntervalFunction};
use crate::complex::{dim_intersection, Basis, ChainContext, Field};
use crate::distances::embedding::RealEmbedding;
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::lattice::{interval_lattice, FiniteMetricLattice};
use crate::mobius::mobius_invert;
use crate::report::Report;

/// Chain `1 < … < n < inf` with `d(a,b) = |r_a − r_b|` and `d(a,inf) = ∞`,
/// embedded by `a ↦ r_a − r_1`.
pub fn classical_lattice(values: &[f64]) -> Result<RealEmbedding> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotIncreasing);
    }
    let n = values.len();
    let mut names: Vec<String> = (1..=n).map(|a| a.to_string()).collect();
    names.push("inf".to_string());
    let mut coords: Vec<f64> = values.iter().map(|r| r - values[0]).collect();
    coords.push(f64::INFINITY);
    let lattice = Arc::new(FiniteMetricLattice::chain(names, &coords)?);
    RealEmbedding::new(lattice, coords)
}

/// Checks that `P` is a chain whose top is infinitely far from everything
/// else while all other distances are finite.
fn classical_order(p: &FiniteMetricLattice) -> Result<Vec<usize>> {
    if !p.is_chain() {
        return Err(Error::NotClassicalIndex("index is not totally ordered".into()));
    }
    if p.len() < 2 {
        return Err(Error::NotClassicalIndex("index needs at least one finite stage".into()));
    }
    let order = p.linear_extension().to_vec();
    let top = p.top();
    for &a in &order {
        for &b in &order {
            if a == b {
                continue;
            }
            let infinite = a == top || b == top;
            if p.dist(a, b).is_infinite() != infinite {
                return Err(Error::NotClassicalIndex(format!(
                    "d({},{}) should be {}",
                    p.name(a),
                    p.name(b),
                    if infinite { "infinite" } else { "finite" }
                )));
            }
        }
    }
    Ok(order)
}

/// The signed-sum diagram `σ_i` of a classical filtration.
///
/// For `a < b ≠ ∞` it is the four-term sum of ranks
/// `rk(a, b−1) − rk(a−1, b−1) − rk(a, b) + rk(a−1, b)` with
/// `rk(a, b) = dim Z_i(a) − dim(Z_i(a) ∩ B_i(b))`; for `b = ∞` the two-term
/// sum `rk(a, ∞) − rk(a−1, ∞)`, where `B_i` at `∞` is taken at stage `n`.
/// Terms indexed below the first stage vanish. Diagonal entries are the
/// Möbius values, which the signed sum leaves unspecified.
pub fn classical_pd_signed(f: &Filtration, i: usize, field: Field) -> Result<IntervalFunction> {
    let p = f.index();
    let order = classical_order(p)?;
    let ctx = ChainContext::new(f.complex().clone(), field);
    let z: Vec<Basis> = order.iter().map(|&a| ctx.cycle_basis(f.stage(a), i)).collect::<Result<_>>()?;
    let b: Vec<Basis> = order.iter().map(|&a| ctx.boundary_basis(f.stage(a), i)).collect::<Result<_>>()?;
    let inf = order.len() - 1;
    let n = inf - 1;
    // rk(x, y) on positions in the chain; x = None stands for "below ⊥"
    let rk = |x: Option<usize>, y: usize| -> Result<i64> {
        let Some(x) = x else { return Ok(0) };
        let y = if y == inf { n } else { y };
        Ok(z[x].rank() as i64 - dim_intersection(&field, &z[x], &b[y])? as i64)
    };
    let diagonal = mobius_invert(&bd_with(&ctx, f, i)?)?;
    let index = interval_lattice(p);
    let mut values = vec![0i64; index.len()];
    for (k, iv) in index.intervals().iter().enumerate() {
        let (x, y) = (pos(&order, iv.lo), pos(&order, iv.hi));
        let below = x.checked_sub(1);
        values[k] = if x == y {
            diagonal.value(k)
        } else if y == inf {
            rk(Some(x), inf)? - rk(below, inf)?
        } else {
            rk(Some(x), y - 1)? - rk(below, y - 1)? - rk(Some(x), y)? + rk(below, y)?
        };
    }
    IntervalFunction::new(index, values)
}

fn pos(order: &[usize], a: usize) -> usize {
    order.iter().position(|&x| x == a).expect("element is in the chain")
}

/// Compares the signed-sum and Möbius diagrams on every strict interval `a < b`.
pub fn check_classical_equivalence(f: &Filtration, i: usize, field: Field) -> Result<Report> {
    let signed = classical_pd_signed(f, i, field)?;
    let mobius = mobius_invert(&crate::birthdeath::bd(f, i, field)?)?;
    let index = signed.index();
    let mut report = Report::default();
    for k in (0..index.len()).filter(|&k| !index.is_diagonal(k)) {
        if signed.value(k) != mobius.value(k) {
            report.push(
                index.name(k),
                format!("signed sum {} but Möbius inversion {}", signed.value(k), mobius.value(k)),
            );
        }
    }
    Ok(report)
}
