//! Möbius inversion on interval lattices and charge-preserving morphisms.

use std::sync::Arc;

use crate::birthdeath::{IntervalFunction, MonMorphism};
use crate::error::{Error, Result};
use crate::lattice::{interval_lattice, BoundedLatticeMap, FiniteMetricLattice, LiftedMap};
use crate::report::Report;

/// The unique `σ` with `f(J) = Σ_{I ⪯ J} σ(I)`.
///
/// Walks a linear extension so every `σ(I)` with `I ≺ J` is known when `J`
/// is reached.
pub fn mobius_invert(f: &IntervalFunction) -> Result<IntervalFunction> {
    let l = f.index().lattice();
    let mut sigma = vec![0i64; l.len()];
    let order = l.linear_extension();
    for (pos, &j) in order.iter().enumerate() {
        let mut acc = f.value(j);
        for &i in &order[..pos] {
            if l.leq(i, j) {
                acc = acc.checked_sub(sigma[i]).ok_or(Error::Overflow("inverting"))?;
            }
        }
        sigma[j] = acc;
    }
    IntervalFunction::new(f.index().clone(), sigma)
}

/// `f(J) = Σ_{I ⪯ J} σ(I)`.
pub fn mobius_sum(sigma: &IntervalFunction) -> Result<IntervalFunction> {
    let l = sigma.index().lattice();
    let values = (0..l.len())
        .map(|j| {
            (0..l.len())
                .filter(|&i| l.leq(i, j))
                .try_fold(0i64, |acc, i| acc.checked_add(sigma.value(i)))
                .ok_or(Error::Overflow("summing down-sets"))
        })
        .collect::<Result<Vec<_>>>()?;
    IntervalFunction::new(sigma.index().clone(), values)
}

fn check_lifted_endpoints(sigma: &IntervalFunction, tau: &IntervalFunction, map: &LiftedMap) -> Result<()> {
    if **map.source() != **sigma.index() {
        return Err(Error::LatticeMismatch("map source is not the index of the source function".into()));
    }
    if **map.target() != **tau.index() {
        return Err(Error::LatticeMismatch("map target is not the index of the target function".into()));
    }
    Ok(())
}

/// `τ(I) = Σ_{J ∈ ᾱ⁻¹(I)} σ(J)` on every interval, diagonals included.
pub fn pushforward(sigma: &IntervalFunction, map: &LiftedMap) -> Result<IntervalFunction> {
    if **map.source() != **sigma.index() {
        return Err(Error::LatticeMismatch("map source is not the index of the function".into()));
    }
    let mut values = vec![0i64; map.target().len()];
    for (j, &v) in sigma.values().iter().enumerate() {
        let slot = &mut values[map.apply(j)];
        *slot = slot.checked_add(v).ok_or(Error::Overflow("pushing forward"))?;
    }
    IntervalFunction::new(map.target().clone(), values)
}

/// Checks the charge-preserving condition at every non-diagonal interval of
/// the target; diagonal intervals `[q,q]` are exempt.
pub fn check_charge_morphism(sigma: &IntervalFunction, tau: &IntervalFunction, map: &LiftedMap) -> Result<Report> {
    check_lifted_endpoints(sigma, tau, map)?;
    let pushed = pushforward(sigma, map)?;
    let mut report = Report::default();
    for i in 0..tau.index().len() {
        if !tau.index().is_diagonal(i) && pushed.value(i) != tau.value(i) {
            report.push(
                tau.index().name(i),
                format!("τ = {} but the preimage carries {}", tau.value(i), pushed.value(i)),
            );
        }
    }
    Ok(report)
}

/// A validated charge-preserving morphism `(σ, τ, ᾱ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeMorphism {
    source: IntervalFunction,
    target: IntervalFunction,
    map: LiftedMap,
}

impl ChargeMorphism {
    pub fn new(source: IntervalFunction, target: IntervalFunction, map: LiftedMap) -> Result<Self> {
        let report = check_charge_morphism(&source, &target, &map)?;
        if !report.is_valid() {
            return Err(Error::InvalidMorphism(report.summary()));
        }
        Ok(Self { source, target, map })
    }

    /// Image of a monotone-preserving morphism under Möbius inversion.
    pub fn from_mon(m: &MonMorphism) -> Result<Self> {
        Self::new(mobius_invert(m.source())?, mobius_invert(m.target())?, m.map().clone())
    }

    pub fn identity(sigma: IntervalFunction) -> Self {
        let alpha = BoundedLatticeMap::identity(sigma.base().clone());
        let map = LiftedMap::between(&alpha, sigma.index(), sigma.index()).expect("identity lifts over its own index");
        Self { target: sigma.clone(), source: sigma, map }
    }

    /// The morphism to the one-point function carrying the total mass of `σ`.
    pub fn terminal(sigma: IntervalFunction) -> Result<Self> {
        let point = Arc::new(FiniteMetricLattice::point("*"));
        let index = interval_lattice(&point);
        let alpha = BoundedLatticeMap::to_point(sigma.base().clone(), point)?;
        let map = LiftedMap::between(&alpha, sigma.index(), &index)?;
        let target = pushforward(&sigma, &map)?;
        Ok(Self { source: sigma, target, map })
    }

    pub fn source(&self) -> &IntervalFunction {
        &self.source
    }

    pub fn target(&self) -> &IntervalFunction {
        &self.target
    }

    pub fn map(&self) -> &LiftedMap {
        &self.map
    }

    pub fn distortion(&self) -> f64 {
        self.map.distortion()
    }

    /// `next ∘ self`. Lifted maps never send a non-diagonal interval to a
    /// diagonal one, so exempting diagonals composes.
    pub fn then(&self, next: &ChargeMorphism) -> Result<ChargeMorphism> {
        if self.target != next.source {
            return Err(Error::NotComposable("target function differs from the next source".into()));
        }
        let map = self.map.then(&next.map)?;
        Self::new(self.source.clone(), next.target.clone(), map)
    }
}
