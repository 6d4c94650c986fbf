use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{ext_abs_diff, FiniteMetricLattice};

const ISOMETRY_TOL: f64 = 1e-9;

/// A monotone isometric embedding of a chain into the extended reals with
/// `⊥ ↦ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEmbedding {
    lattice: Arc<FiniteMetricLattice>,
    coords: Vec<f64>,
}

/// Element name for a coordinate: shortest round-trip decimal, `inf` for +∞.
pub fn coord_name(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Inverse of [`coord_name`]; also accepts `∞`.
pub fn parse_coord(name: &str) -> Option<f64> {
    match name.trim() {
        "inf" | "+inf" | "∞" | "Infinity" => Some(f64::INFINITY),
        s => s.parse::<f64>().ok().filter(|x| x.is_finite()),
    }
}

impl RealEmbedding {
    /// `coords[a]` is the image of element `a`.
    pub fn new(lattice: Arc<FiniteMetricLattice>, coords: Vec<f64>) -> Result<Self> {
        if !lattice.is_chain() {
            return Err(Error::NotTotallyOrdered);
        }
        if coords.len() != lattice.len() {
            return Err(Error::NoEmbedding(format!("{} coordinates for {} elements", coords.len(), lattice.len())));
        }
        if coords[lattice.bottom()] != 0.0 {
            return Err(Error::NoEmbedding(format!("bottom `{}` is not sent to 0", lattice.name(lattice.bottom()))));
        }
        if coords.iter().any(|x| x.is_nan() || *x == f64::NEG_INFINITY) {
            return Err(Error::NoEmbedding("coordinates must be reals or +inf".into()));
        }
        let order = lattice.linear_extension();
        for w in order.windows(2) {
            if coords[w[0]] >= coords[w[1]] {
                return Err(Error::NoEmbedding(format!(
                    "`{}` < `{}` but their coordinates do not increase",
                    lattice.name(w[0]),
                    lattice.name(w[1])
                )));
            }
        }
        for a in 0..lattice.len() {
            for b in a + 1..lattice.len() {
                let (d, e) = (lattice.dist(a, b), ext_abs_diff(coords[a], coords[b]));
                let ok = if d.is_finite() && e.is_finite() {
                    (d - e).abs() <= ISOMETRY_TOL * d.max(1.0)
                } else {
                    d == e
                };
                if !ok {
                    return Err(Error::NoEmbedding(format!(
                        "d({},{}) = {} but the coordinates differ by {}",
                        lattice.name(a),
                        lattice.name(b),
                        d,
                        e
                    )));
                }
            }
        }
        Ok(Self { lattice, coords })
    }

    /// Reads coordinates off numeric element names.
    pub fn from_names(lattice: Arc<FiniteMetricLattice>) -> Result<Self> {
        if !lattice.is_chain() {
            return Err(Error::NotTotallyOrdered);
        }
        let coords = lattice
            .names()
            .iter()
            .map(|n| parse_coord(n).ok_or_else(|| Error::NoEmbedding(format!("element `{n}` is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattice, coords)
    }

    /// The chain on the given strictly increasing coordinates (first must be 0),
    /// named by [`coord_name`], with metric `|x − y|`.
    pub fn chain(coords: &[f64]) -> Result<Self> {
        let names = coords.iter().map(|&x| coord_name(x)).collect();
        let lattice = Arc::new(FiniteMetricLattice::chain(names, coords)?);
        Self::new(lattice, coords.to_vec())
    }

    pub fn lattice(&self) -> &Arc<FiniteMetricLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, a: usize) -> f64 {
        self.coords[a]
    }

    /// Element at exactly this coordinate.
    pub fn element_at(&self, x: f64) -> Option<usize> {
        self.coords.iter().position(|&c| c == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_parsing() {
        assert_eq!(coord_name(1.5), "1.5");
        assert_eq!(coord_name(3.0), "3");
        assert_eq!(coord_name(f64::INFINITY), "inf");
        assert_eq!(parse_coord("inf"), Some(f64::INFINITY));
        assert_eq!(parse_coord("0.25"), Some(0.25));
        assert_eq!(parse_coord("b"), None);
    }

    #[test]
    fn embeddings() {
        let e = RealEmbedding::chain(&[0.0, 0.5, 2.0, f64::INFINITY]).unwrap();
        assert_eq!(e.lattice().name(3), "inf");
        assert!(RealEmbedding::from_names(e.lattice().clone()).is_ok());
        assert_eq!(RealEmbedding::chain(&[1.0, 2.0]).unwrap_err().kind(), "NoEmbedding");
        let shifted = RealEmbedding::new(e.lattice().clone(), vec![0.0, 0.5, 2.5, f64::INFINITY]);
        assert_eq!(shifted.unwrap_err().kind(), "NoEmbedding");
        let diamond = crate::testing::diamond();
        assert_eq!(RealEmbedding::from_names(diamond).unwrap_err(), Error::NotTotallyOrdered);
    }
}
