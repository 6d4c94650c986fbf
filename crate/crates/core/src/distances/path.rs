//! Zigzag paths of morphisms and their lengths.

use crate::birthdeath::{bd_with, check_mon_morphism, IntervalFunction, MonMorphism};
use crate::complex::{ChainContext, Field};
use crate::error::{Error, Result};
use crate::filtration::{check_filtration_morphism, Filtration, FiltrationMorphism};
use crate::lattice::LiftedMap;
use crate::mobius::{check_charge_morphism, ChargeMorphism};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Fil,
    Mon,
    Fnc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// A morphism in one of the three categories.
pub trait CategoryMorphism {
    type Object: PartialEq;
    const CATEGORY: Category;

    fn source(&self) -> &Self::Object;
    fn target(&self) -> &Self::Object;
    /// Re-runs the category's morphism axiom.
    fn check(&self) -> Result<Report>;
    /// Distortion of the underlying map; for `Mon` and `Fnc` this is measured
    /// on the interval lattices.
    fn distortion(&self) -> f64;
}

impl CategoryMorphism for FiltrationMorphism {
    type Object = Filtration;
    const CATEGORY: Category = Category::Fil;

    fn source(&self) -> &Filtration {
        FiltrationMorphism::source(self)
    }
    fn target(&self) -> &Filtration {
        FiltrationMorphism::target(self)
    }
    fn check(&self) -> Result<Report> {
        check_filtration_morphism(self.source(), self.target(), self.map())
    }
    fn distortion(&self) -> f64 {
        FiltrationMorphism::distortion(self)
    }
}

impl CategoryMorphism for MonMorphism {
    type Object = IntervalFunction;
    const CATEGORY: Category = Category::Mon;

    fn source(&self) -> &IntervalFunction {
        MonMorphism::source(self)
    }
    fn target(&self) -> &IntervalFunction {
        MonMorphism::target(self)
    }
    fn check(&self) -> Result<Report> {
        check_mon_morphism(self.source(), self.target(), self.map())
    }
    fn distortion(&self) -> f64 {
        MonMorphism::distortion(self)
    }
}

impl CategoryMorphism for ChargeMorphism {
    type Object = IntervalFunction;
    const CATEGORY: Category = Category::Fnc;

    fn source(&self) -> &IntervalFunction {
        ChargeMorphism::source(self)
    }
    fn target(&self) -> &IntervalFunction {
        ChargeMorphism::target(self)
    }
    fn check(&self) -> Result<Report> {
        check_charge_morphism(self.source(), self.target(), self.map())
    }
    fn distortion(&self) -> f64 {
        ChargeMorphism::distortion(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step<M> {
    pub direction: Direction,
    pub morphism: M,
}

impl<M: CategoryMorphism> Step<M> {
    pub fn forward(morphism: M) -> Self {
        Self { direction: Direction::Forward, morphism }
    }

    pub fn backward(morphism: M) -> Self {
        Self { direction: Direction::Backward, morphism }
    }

    /// The object the step starts from when walking the path.
    pub fn start(&self) -> &M::Object {
        match self.direction {
            Direction::Forward => self.morphism.source(),
            Direction::Backward => self.morphism.target(),
        }
    }

    pub fn end(&self) -> &M::Object {
        match self.direction {
            Direction::Forward => self.morphism.target(),
            Direction::Backward => self.morphism.source(),
        }
    }
}

/// `F = X_0 ↔ X_1 ↔ … ↔ X_n = G`, each arrow pointing either way.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismPath<M> {
    steps: Vec<Step<M>>,
}

impl<M: CategoryMorphism> Default for MorphismPath<M> {
    fn default() -> Self {
        Self { steps: Vec::new() }
    }
}

impl<M: CategoryMorphism> MorphismPath<M> {
    pub fn new(steps: Vec<Step<M>>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Step<M>] {
        &self.steps
    }

    pub fn push(&mut self, step: Step<M>) {
        self.steps.push(step);
    }

    pub fn category(&self) -> Category {
        M::CATEGORY
    }

    /// First and last objects; `None` for the empty path.
    pub fn endpoints(&self) -> Option<(&M::Object, &M::Object)> {
        Some((self.steps.first()?.start(), self.steps.last()?.end()))
    }

    /// Checks every step and the chaining of consecutive steps.
    pub fn validate(&self) -> Result<()> {
        for (k, step) in self.steps.iter().enumerate() {
            let report = step
                .morphism
                .check()
                .map_err(|e| Error::InvalidStep { index: k, reason: e.to_string() })?;
            if !report.is_valid() {
                return Err(Error::InvalidStep { index: k, reason: report.summary() });
            }
            if k > 0 && self.steps[k - 1].end() != step.start() {
                return Err(Error::BrokenChain(k));
            }
        }
        Ok(())
    }

    /// Per-step distortions, in order.
    pub fn step_lengths(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.morphism.distortion()).collect()
    }
}

/// `Σ ‖α_k‖` over a validated path.
pub fn path_length<M: CategoryMorphism>(path: &MorphismPath<M>) -> Result<f64> {
    path.validate()?;
    Ok(path.step_lengths().iter().sum())
}

/// Applies `BD_i` to every step of a filtration path.
pub fn bd_path(
    path: &MorphismPath<FiltrationMorphism>,
    i: usize,
    field: Field,
) -> Result<MorphismPath<MonMorphism>> {
    let mut out = MorphismPath::default();
    let mut ctx: Option<ChainContext> = None;
    for step in path.steps() {
        let m = &step.morphism;
        let ctx = match &ctx {
            Some(c) if **c.complex() == **m.source().complex() => c,
            _ => ctx.insert(ChainContext::new(m.source().complex().clone(), field)),
        };
        let f = bd_with(ctx, m.source(), i)?;
        let g = bd_with(ctx, m.target(), i)?;
        let lifted = LiftedMap::between(m.map(), f.index(), g.index())?;
        out.push(Step { direction: step.direction, morphism: MonMorphism::new(f, g, lifted)? });
    }
    Ok(out)
}

/// Applies Möbius inversion to every step of a `Mon` path.
pub fn mobius_path(path: &MorphismPath<MonMorphism>) -> Result<MorphismPath<ChargeMorphism>> {
    let steps = path
        .steps()
        .iter()
        .map(|s| Ok(Step { direction: s.direction, morphism: ChargeMorphism::from_mon(&s.morphism)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(MorphismPath::new(steps))
}
