//! Lattice-indexed persistent homology.
//!
//! Filtrations of a finite simplicial complex indexed by a finite metric
//! lattice are sent to birth-death functions on the lattice of intervals and,
//! by Möbius inversion, to generalized persistence diagrams. Alongside the
//! pipeline sit the distances that make it stable: distortion of lattice maps,
//! lengths of zigzag paths of morphisms, bottleneck distance and the
//! interpolation that relates the two.

pub mod birthdeath;
pub mod classical;
pub mod complex;
pub mod distances;
pub mod error;
pub mod filtration;
pub mod io;
pub mod lattice;
pub mod mobius;
pub mod report;
#[cfg(test)]
mod testing;

pub use birthdeath::{bd, check_mon_morphism, check_monotone, terminal_mon, IntervalFunction, MonMorphism};
pub use complex::{dim_intersection, Basis, ChainContext, Field, SimplicialComplex, Subcomplex};
pub use error::{Error, Result};
pub use filtration::{check_filtration_morphism, kan_extend, Filtration, FiltrationMorphism};
pub use lattice::{
    interval_lattice, lift_map, BoundedLatticeMap, FiniteMetricLattice, Interval, IntervalLattice, LiftedMap,
};
pub use mobius::{check_charge_morphism, mobius_invert, mobius_sum, pushforward, ChargeMorphism};
pub use report::{Report, Violation};
