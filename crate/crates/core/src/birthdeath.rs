//! Integer-valued functions on interval lattices and the birth-death functor.

use std::sync::Arc;

use rayon::prelude::*;

use crate::complex::{dim_intersection, Basis, ChainContext, Field};
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::lattice::{interval_lattice, BoundedLatticeMap, FiniteMetricLattice, IntervalLattice, LiftedMap};
use crate::report::Report;

/// A total function `Int P → ℤ`, stored in the interval lattice's element order.
#[derive(Debug, Clone)]
pub struct IntervalFunction {
    index: Arc<IntervalLattice>,
    values: Vec<i64>,
}

impl PartialEq for IntervalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && *self.index == *other.index
    }
}

impl IntervalFunction {
    pub fn new(index: Arc<IntervalLattice>, values: Vec<i64>) -> Result<Self> {
        if values.len() != index.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} intervals",
                values.len(),
                index.len()
            )));
        }
        Ok(Self { index, values })
    }

    pub fn zeros(index: Arc<IntervalLattice>) -> Self {
        let values = vec![0; index.len()];
        Self { index, values }
    }

    /// Values given per `[lo, hi]` by element name; unlisted intervals are zero.
    pub fn from_named(index: Arc<IntervalLattice>, entries: &[(String, String, i64)]) -> Result<Self> {
        let mut f = Self::zeros(index);
        for (lo, hi, v) in entries {
            let i = f.index.index_of_names(lo, hi)?;
            f.values[i] = *v;
        }
        Ok(f)
    }

    pub fn index(&self) -> &Arc<IntervalLattice> {
        &self.index
    }

    pub fn base(&self) -> &Arc<FiniteMetricLattice> {
        self.index.base()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> i64 {
        self.values[i]
    }

    /// Value at `[lo, hi]` by element name.
    pub fn get(&self, lo: &str, hi: &str) -> Result<i64> {
        Ok(self.values[self.index.index_of_names(lo, hi)?])
    }

    /// `(interval name, value)` for every nonzero value, in interval order.
    pub fn nonzero(&self) -> Vec<(&str, i64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (self.index.name(i), v))
            .collect()
    }

    /// Value at the top interval `[⊤, ⊤]`.
    pub fn top_value(&self) -> i64 {
        self.values[self.index.lattice().top()]
    }
}

/// `BD_i F`: `[a,b] ↦ dim(Z_i F(a) ∩ B_i F(b))`, and `[a,⊤] ↦ dim Z_i F(a)`.
pub fn bd(f: &Filtration, i: usize, field: Field) -> Result<IntervalFunction> {
    let ctx = ChainContext::new(f.complex().clone(), field);
    bd_with(&ctx, f, i)
}

/// [`bd`] with a prebuilt chain context for `f`'s complex.
pub fn bd_with(ctx: &ChainContext, f: &Filtration, i: usize) -> Result<IntervalFunction> {
    if **ctx.complex() != **f.complex() {
        return Err(Error::LatticeMismatch("chain context is for a different complex".into()));
    }
    let p = f.index();
    let cycles: Vec<Basis> =
        (0..p.len()).into_par_iter().map(|a| ctx.cycle_basis(f.stage(a), i)).collect::<Result<_>>()?;
    let boundaries: Vec<Basis> =
        (0..p.len()).into_par_iter().map(|a| ctx.boundary_basis(f.stage(a), i)).collect::<Result<_>>()?;
    let index = interval_lattice(p);
    let field = ctx.field();
    let values = index
        .intervals()
        .par_iter()
        .map(|iv| {
            if iv.hi == p.top() {
                Ok(cycles[iv.lo].rank() as i64)
            } else {
                dim_intersection(&field, &cycles[iv.lo], &boundaries[iv.hi]).map(|d| d as i64)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    IntervalFunction::new(index, values)
}

/// Every covering pair `I ⋖ J` of the interval lattice with `f(I) > f(J)`.
/// Monotonicity along covers is monotonicity everywhere.
pub fn check_monotone(f: &IntervalFunction) -> Report {
    let l = f.index.lattice();
    let mut report = Report::default();
    for (i, j) in l.covers() {
        if f.values[i] > f.values[j] {
            report.push(
                format!("{} < {}", l.name(i), l.name(j)),
                format!("value drops from {} to {}", f.values[i], f.values[j]),
            );
        }
    }
    report
}

fn check_lifted_endpoints(f: &IntervalFunction, g: &IntervalFunction, map: &LiftedMap) -> Result<()> {
    if **map.source() != *f.index {
        return Err(Error::LatticeMismatch("map source is not the index of the source function".into()));
    }
    if **map.target() != *g.index {
        return Err(Error::LatticeMismatch("map target is not the index of the target function".into()));
    }
    Ok(())
}

/// Checks `g(I) = f(max ᾱ⁻¹[⊥, I])` for every interval `I` of `g`'s index.
pub fn check_mon_morphism(f: &IntervalFunction, g: &IntervalFunction, map: &LiftedMap) -> Result<Report> {
    check_lifted_endpoints(f, g, map)?;
    let mut report = Report::default();
    for i in 0..g.index.len() {
        let star = map.preimage_max(i)?;
        if g.values[i] != f.values[star] {
            report.push(
                g.index.name(i),
                format!("g = {} but f{} = {}", g.values[i], f.index.name(star), f.values[star]),
            );
        }
    }
    Ok(report)
}

/// A validated monotone-preserving morphism `(f, g, ᾱ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonMorphism {
    source: IntervalFunction,
    target: IntervalFunction,
    map: LiftedMap,
}

impl MonMorphism {
    pub fn new(source: IntervalFunction, target: IntervalFunction, map: LiftedMap) -> Result<Self> {
        let report = check_mon_morphism(&source, &target, &map)?;
        if !report.is_valid() {
            return Err(Error::InvalidMorphism(report.summary()));
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(f: IntervalFunction) -> Self {
        let alpha = BoundedLatticeMap::identity(f.base().clone());
        let map = LiftedMap::between(&alpha, &f.index, &f.index).expect("identity lifts over its own index");
        Self { target: f.clone(), source: f, map }
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

    /// Distortion of `ᾱ` on the interval lattices.
    pub fn distortion(&self) -> f64 {
        self.map.distortion()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonMorphism) -> Result<MonMorphism> {
        if self.target != next.source {
            return Err(Error::NotComposable("target function differs from the next source".into()));
        }
        let map = self.map.then(&next.map)?;
        Self::new(self.source.clone(), next.target.clone(), map)
    }
}

/// The unique morphism from `f` to the one-point function `e[⋆,⋆] = f[⊤,⊤]`.
pub fn terminal_mon(f: &IntervalFunction) -> MonMorphism {
    let point = Arc::new(FiniteMetricLattice::point("*"));
    let index = interval_lattice(&point);
    let target = IntervalFunction { index: index.clone(), values: vec![f.top_value()] };
    let alpha = BoundedLatticeMap::to_point(f.base().clone(), point).expect("one-point target");
    let map = LiftedMap::between(&alpha, &f.index, &index).expect("indices match the map");
    MonMorphism { source: f.clone(), target, map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::kan_extend;
    use crate::lattice::lift_map;
    use crate::testing::*;

    fn gf2() -> Field {
        Field::default()
    }

    #[test]
    fn bd1_of_triangle_over_diamond() {
        let f = bd(&triangle_over_diamond(), 1, gf2()).unwrap();
        assert_eq!(f.index().len(), 9);
        // Z_1 is 1-dimensional at b, c, d; B_1 is nonzero only at d
        let expected = [
            ("a", "a", 0),
            ("a", "b", 0),
            ("a", "c", 0),
            ("a", "d", 0),
            ("b", "b", 0),
            ("b", "d", 1),
            ("c", "c", 0),
            ("c", "d", 1),
            ("d", "d", 1),
        ];
        for (lo, hi, v) in expected {
            assert_eq!(f.get(lo, hi).unwrap(), v, "[{lo},{hi}]");
        }
        assert!(check_monotone(&f).is_valid());
        assert_eq!(terminal_mon(&f).target().values(), &[1]);
    }

    #[test]
    fn bd0_of_edge_over_diamond_on_top_column() {
        let filt = edge_over_diamond();
        let f = bd(&filt, 0, gf2()).unwrap();
        let ctx = ChainContext::new(filt.complex().clone(), gf2());
        let p = filt.index();
        for x in ["a", "b", "c", "d"] {
            let z = ctx.cycle_basis(filt.stage(p.element(x).unwrap()), 0).unwrap().rank() as i64;
            assert_eq!(f.get(x, "d").unwrap(), z);
        }
        assert_eq!(f.get("b", "d").unwrap(), 2);
    }

    #[test]
    fn bd_of_constant_filtration() {
        let k = triangle();
        let filt = Filtration::constant(diamond(), k.clone());
        let ctx = ChainContext::new(k.clone(), gf2());
        for i in 0..3 {
            let f = bd(&filt, i, gf2()).unwrap();
            let z = ctx.cycle_basis(&k.full(), i).unwrap().rank() as i64;
            let b = ctx.boundary_basis(&k.full(), i).unwrap().rank() as i64;
            for (n, iv) in f.index().intervals().iter().enumerate() {
                let expected = if iv.hi == filt.index().top() { z } else { b };
                assert_eq!(f.value(n), expected);
            }
        }
        // above the dimension of K everything vanishes
        assert!(bd(&filt, 5, gf2()).unwrap().nonzero().is_empty());
    }

    #[test]
    fn planted_inversion_on_a_chain() {
        let index = interval_lattice(&chain_names(&["0", "1"]));
        let mut values: Vec<i64> = vec![0; 3];
        let l = index.lattice().clone();
        for (rank, &e) in l.linear_extension().iter().enumerate() {
            values[e] = rank as i64;
        }
        let f = IntervalFunction::new(index.clone(), values.clone()).unwrap();
        assert!(check_monotone(&f).is_valid());
        let (x, y) = (l.linear_extension()[0], l.linear_extension()[1]);
        values.swap(x, y);
        let g = IntervalFunction::new(index.clone(), values).unwrap();
        assert_eq!(check_monotone(&g).violations.len(), 1);
        assert!(check_monotone(&IntervalFunction::zeros(index)).is_valid());
    }

    #[test]
    fn triangle_morphism_is_monotone_preserving() {
        let alpha = diamond_to_chain();
        let f = bd(&triangle_over_diamond(), 1, gf2()).unwrap();
        let g = bd(&triangle_over_chain(), 1, gf2()).unwrap();
        let lifted = LiftedMap::between(&alpha, f.index(), g.index()).unwrap();
        assert!(check_mon_morphism(&f, &g, &lifted).unwrap().is_valid());
        let id = MonMorphism::identity(f.clone());
        assert!(check_mon_morphism(&f, &f, id.map()).unwrap().is_valid());
        // a fresh lift lives on structurally equal interval lattices
        assert!(check_mon_morphism(&f, &g, &lift_map(&alpha)).unwrap().is_valid());
        assert_eq!(check_mon_morphism(&g, &f, &lifted).unwrap_err().kind(), "LatticeMismatch");
    }

    #[test]
    fn broken_mon_morphism_is_reported() {
        let alpha = diamond_to_chain();
        let f = bd(&triangle_over_diamond(), 1, gf2()).unwrap();
        let mut g = bd(&kan_extend(&triangle_over_diamond(), &alpha).unwrap(), 1, gf2()).unwrap();
        let at = g.index().index_of_names("p", "r").unwrap();
        g.values[at] += 1;
        let lifted = lift_map(&alpha);
        assert_eq!(check_mon_morphism(&f, &g, &lifted).unwrap().locations(), vec!["[p,r]"]);
        assert_eq!(MonMorphism::new(f, g, lifted).unwrap_err().kind(), "InvalidMorphism");
    }

    #[test]
    fn top_values() {
        let f = bd(&triangle_over_diamond(), 1, gf2()).unwrap();
        assert_eq!(f.get("a", "a").unwrap(), 0);
        assert_eq!(f.top_value(), 1);
        let zero = IntervalFunction::zeros(f.index().clone());
        assert_eq!(terminal_mon(&zero).target().values(), &[0]);
    }
}
