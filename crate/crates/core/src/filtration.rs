//! Lattice-indexed filtrations and filtration-preserving morphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::lattice::{same_lattice, BoundedLatticeMap, FiniteMetricLattice};
use crate::report::Report;

/// A monotone assignment `P → subcomplexes of K` reaching `K` at the top.
#[derive(Debug, Clone)]
pub struct Filtration {
    index: Arc<FiniteMetricLattice>,
    complex: Arc<SimplicialComplex>,
    stages: Vec<Subcomplex>,
}

impl PartialEq for Filtration {
    fn eq(&self, other: &Self) -> bool {
        self.stages == other.stages && same_lattice(&self.index, &other.index) && self.complex == other.complex
    }
}

impl Filtration {
    /// `stages[a]` is the subcomplex at element `a`.
    pub fn new(
        index: Arc<FiniteMetricLattice>,
        complex: Arc<SimplicialComplex>,
        stages: Vec<Subcomplex>,
    ) -> Result<Self> {
        if stages.len() != index.len() {
            let missing = index.name(stages.len().min(index.len().saturating_sub(1)));
            return Err(Error::MissingAssignment(missing.to_string()));
        }
        for stage in &stages {
            // re-validate face closure against this complex
            complex.subcomplex_from_ids(stage.ids().clone())?;
        }
        for a in 0..index.len() {
            for b in 0..index.len() {
                if index.lt(a, b) && !stages[a].is_subset(&stages[b]) {
                    return Err(Error::NotMonotone(format!(
                        "{} <= {} but F({}) is not contained in F({})",
                        index.name(a),
                        index.name(b),
                        index.name(a),
                        index.name(b)
                    )));
                }
            }
        }
        if stages[index.top()].len() != complex.len() {
            return Err(Error::TopNotFull);
        }
        Ok(Self { index, complex, stages })
    }

    /// Stages given by generating simplices per element name.
    pub fn from_generators(
        index: Arc<FiniteMetricLattice>,
        complex: Arc<SimplicialComplex>,
        assignment: &BTreeMap<String, Vec<Vec<u32>>>,
    ) -> Result<Self> {
        for name in assignment.keys() {
            index.element(name)?;
        }
        let stages = index
            .names()
            .iter()
            .map(|name| {
                let gens = assignment.get(name).ok_or_else(|| Error::MissingAssignment(name.clone()))?;
                complex.subcomplex(gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(index, complex, stages)
    }

    /// `F(a) = K` for every `a`.
    pub fn constant(index: Arc<FiniteMetricLattice>, complex: Arc<SimplicialComplex>) -> Self {
        let stages = vec![complex.full(); index.len()];
        Self { index, complex, stages }
    }

    /// The one-step filtration `⋆ ↦ K`, terminal in the category of filtrations of `K`.
    pub fn terminal(complex: Arc<SimplicialComplex>) -> Self {
        Self::constant(Arc::new(FiniteMetricLattice::point("*")), complex)
    }

    pub fn index(&self) -> &Arc<FiniteMetricLattice> {
        &self.index
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn stages(&self) -> &[Subcomplex] {
        &self.stages
    }

    pub fn stage(&self, a: usize) -> &Subcomplex {
        &self.stages[a]
    }
}

fn check_endpoints(f: &Filtration, g: &Filtration, alpha: &BoundedLatticeMap) -> Result<()> {
    if !same_lattice(alpha.source(), &f.index) {
        return Err(Error::LatticeMismatch("map source is not the index of the source filtration".into()));
    }
    if !same_lattice(alpha.target(), &g.index) {
        return Err(Error::LatticeMismatch("map target is not the index of the target filtration".into()));
    }
    if f.complex != g.complex {
        return Err(Error::LatticeMismatch("filtrations are of different complexes".into()));
    }
    Ok(())
}

/// Checks `G(a) = F(max α⁻¹[⊥,a])` at every element of the target index and
/// reports every element where it fails.
pub fn check_filtration_morphism(f: &Filtration, g: &Filtration, alpha: &BoundedLatticeMap) -> Result<Report> {
    check_endpoints(f, g, alpha)?;
    let mut report = Report::default();
    for a in 0..g.index.len() {
        let star = alpha.preimage_max(a)?;
        if g.stages[a] != f.stages[star] {
            report.push(
                g.index.name(a),
                format!("G({}) differs from F({})", g.index.name(a), f.index.name(star)),
            );
        }
    }
    Ok(report)
}

/// Left Kan extension along `α`: `G(a) = F(max α⁻¹[⊥,a])`.
pub fn kan_extend(f: &Filtration, alpha: &BoundedLatticeMap) -> Result<Filtration> {
    if !same_lattice(alpha.source(), &f.index) {
        return Err(Error::LatticeMismatch("map source is not the filtration index".into()));
    }
    let q = alpha.target();
    let stages = (0..q.len())
        .map(|a| alpha.preimage_max(a).map(|star| f.stages[star].clone()))
        .collect::<Result<Vec<_>>>()?;
    Filtration::new(q.clone(), f.complex.clone(), stages)
}

/// A validated filtration-preserving morphism `α : F → G`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationMorphism {
    source: Filtration,
    target: Filtration,
    map: BoundedLatticeMap,
}

impl FiltrationMorphism {
    pub fn new(source: Filtration, target: Filtration, map: BoundedLatticeMap) -> Result<Self> {
        let report = check_filtration_morphism(&source, &target, &map)?;
        if !report.is_valid() {
            return Err(Error::InvalidMorphism(report.summary()));
        }
        Ok(Self { source, target, map })
    }

    /// `α : F → kan_extend(F, α)`.
    pub fn kan(source: Filtration, map: BoundedLatticeMap) -> Result<Self> {
        let target = kan_extend(&source, &map)?;
        Ok(Self { source, target, map })
    }

    pub fn identity(f: Filtration) -> Self {
        let map = BoundedLatticeMap::identity(f.index.clone());
        Self { target: f.clone(), source: f, map }
    }

    /// The unique morphism to the terminal filtration `⋆ ↦ K`.
    pub fn terminal(f: Filtration) -> Self {
        let target = Filtration::terminal(f.complex.clone());
        let map = BoundedLatticeMap::to_point(f.index.clone(), target.index.clone())
            .expect("target is a one-point lattice");
        Self { source: f, target, map }
    }

    pub fn source(&self) -> &Filtration {
        &self.source
    }

    pub fn target(&self) -> &Filtration {
        &self.target
    }

    pub fn map(&self) -> &BoundedLatticeMap {
        &self.map
    }

    pub fn distortion(&self) -> f64 {
        self.map.distortion()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FiltrationMorphism) -> Result<FiltrationMorphism> {
        if self.target != next.source {
            return Err(Error::NotComposable("target filtration differs from the next source".into()));
        }
        let map = self.map.then(&next.map)?;
        Ok(Self { source: self.source.clone(), target: next.target.clone(), map })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::*;

    #[test]
    fn triangle_over_diamondiltrations_are_valid() {
        let f = triangle_over_diamond();
        assert_eq!(f.stage(f.index().top()).len(), 7);
        let g = triangle_over_chain();
        let report = check_filtration_morphism(&f, &g, &diamond_to_chain()).unwrap();
        assert!(report.is_valid(), "{}", report.summary());
    }

    #[test]
    fn kan_extension_reproduces_triangle_over_chain() {
        assert_eq!(kan_extend(&triangle_over_diamond(), &diamond_to_chain()).unwrap(), triangle_over_chain());
        let f = triangle_over_diamond();
        let id = BoundedLatticeMap::identity(f.index().clone());
        assert_eq!(kan_extend(&f, &id).unwrap(), f);
        let t = FiltrationMorphism::terminal(f.clone());
        assert_eq!(kan_extend(&f, t.map()).unwrap(), Filtration::terminal(f.complex().clone()));
    }

    #[test]
    fn constant_and_invalid_filtrations() {
        let k = triangle();
        let p = diamond();
        let c = Filtration::constant(p.clone(), k.clone());
        assert!(Filtration::new(p.clone(), k.clone(), c.stages().to_vec()).is_ok());

        let chain = chain_names(&["0", "1", "2"]);
        let small = k.subcomplex(&[vec![0]]).unwrap();
        let swapped = vec![k.full(), small, k.full()];
        assert_eq!(Filtration::new(chain.clone(), k.clone(), swapped).unwrap_err().kind(), "NotMonotone");
        let short = vec![Subcomplex::empty(), Subcomplex::empty(), k.subcomplex(&[vec![0, 1]]).unwrap()];
        assert_eq!(Filtration::new(chain.clone(), k.clone(), short).unwrap_err(), Error::TopNotFull);
        let mut gens = BTreeMap::new();
        gens.insert("0".to_string(), vec![vec![0, 7]]);
        gens.insert("1".to_string(), vec![]);
        gens.insert("2".to_string(), vec![vec![0, 1, 2]]);
        assert_eq!(
            Filtration::from_generators(chain.clone(), k.clone(), &gens).unwrap_err().kind(),
            "NotASubcomplex"
        );
        gens.remove("0");
        assert_eq!(
            Filtration::from_generators(chain, k, &gens).unwrap_err(),
            Error::MissingAssignment("0".into())
        );
    }

    #[test]
    fn broken_morphism_reports_the_failing_element() {
        let f = triangle_over_diamond();
        let g = triangle_over_chain();
        let q = g.index().clone();
        let r = q.element("r").unwrap();
        let mut stages = g.stages().to_vec();
        let k = g.complex();
        stages[r] = stages[r].without(k.id_of(&[0, 1, 2]).unwrap());
        // G' is no longer a filtration (top is not K), so compare stages directly
        let broken = Filtration { index: q.clone(), complex: k.clone(), stages };
        let report = check_filtration_morphism(&f, &broken, &diamond_to_chain()).unwrap();
        assert_eq!(report.locations(), vec!["r"]);
        let id = BoundedLatticeMap::identity(q);
        assert_eq!(check_filtration_morphism(&f, &g, &id).unwrap_err().kind(), "LatticeMismatch");
        assert!(check_filtration_morphism(&f, &f, &BoundedLatticeMap::identity(f.index().clone()))
            .unwrap()
            .is_valid());
    }

    #[test]
    fn composition() {
        let m1 = FiltrationMorphism::new(triangle_over_diamond(), triangle_over_chain(), diamond_to_chain()).unwrap();
        let m2 = FiltrationMorphism::terminal(triangle_over_chain());
        let c = m1.then(&m2).unwrap();
        assert!(check_filtration_morphism(c.source(), c.target(), c.map()).unwrap().is_valid());
        let id = FiltrationMorphism::identity(triangle_over_diamond());
        assert_eq!(id.then(&m1).unwrap(), m1);
        assert_eq!(m2.then(&m1).unwrap_err().kind(), "NotComposable");
    }
}
