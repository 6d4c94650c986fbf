//! Straight-line interpolation of a matching and the zigzag path it induces.
//!
//! Each matched pair `(I, J)` moves its endpoints along the lines
//! `(1 − t)·x + t·y`. Between consecutive crossings of these lines the
//! endpoint order is fixed, so sending each endpoint to its own later
//! position is a bounded lattice map of chains; those maps are the steps of
//! the witness path.

use std::collections::BTreeMap;

use crate::birthdeath::IntervalFunction;
use crate::distances::embedding::RealEmbedding;
use crate::distances::matching::{bottleneck, Diagram, Matching};
use crate::distances::path::{path_length, MorphismPath, Step};
use crate::error::{Error, Result};
use crate::lattice::{interval_lattice, BoundedLatticeMap, LiftedMap};
use crate::mobius::ChargeMorphism;

/// Crossings closer than this (in `t`) are merged.
pub const CRITICAL_TOL: f64 = 1e-9;
/// Relative tolerance for identifying interpolated endpoints.
const POINT_TOL: f64 = 1e-9;

/// An endpoint trajectory from `x` at `t = 0` to `y` at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    x: f64,
    y: f64,
}

impl Line {
    fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_infinite() != y.is_infinite() {
            return Err(Error::InfiniteMixing(format!("endpoint moves from {x} to {y}")));
        }
        Ok(Self { x, y })
    }

    fn at(&self, t: f64) -> f64 {
        if self.x.is_infinite() {
            f64::INFINITY
        } else {
            (1.0 - t) * self.x + t * self.y
        }
    }

    /// Parameter where two distinct finite lines meet, if they do.
    fn crossing(&self, other: &Line) -> Option<f64> {
        if self.x.is_infinite() || other.x.is_infinite() {
            return None;
        }
        let (dx, dy) = (other.x - self.x, other.y - self.y);
        (dx != dy).then(|| dx / (dx - dy))
    }
}

/// The lines of a matching: `⊥`, `⊤`, then two per matched pair.
struct Lines {
    lines: Vec<Line>,
    /// `(left line, right line, count)` per matching entry.
    entries: Vec<(usize, usize, i64)>,
}

impl Lines {
    fn of(gamma: &Matching) -> Result<Self> {
        let (p, q) = (gamma.source(), gamma.target());
        let (ep, eq) = (p.embedding(), q.embedding());
        let mut lines = vec![
            Line::new(0.0, 0.0)?,
            Line::new(ep.coord(ep.lattice().top()), eq.coord(eq.lattice().top()))?,
        ];
        let mut ids: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for (k, l) in lines.iter().enumerate() {
            ids.insert((l.x.to_bits(), l.y.to_bits()), k);
        }
        let mut id_of = |l: Line, lines: &mut Vec<Line>| {
            *ids.entry((l.x.to_bits(), l.y.to_bits())).or_insert_with(|| {
                lines.push(l);
                lines.len() - 1
            })
        };
        let mut entries = Vec::new();
        for (&(i, j), &c) in gamma.entries() {
            let ((a, b), (cc, d)) = (p.coords(i), q.coords(j));
            let left = id_of(Line::new(a, cc)?, &mut lines);
            let right = id_of(Line::new(b, d)?, &mut lines);
            entries.push((left, right, c));
        }
        Ok(Self { lines, entries })
    }
}

/// Parameters in `[0, 1]` where two endpoint trajectories of matched pairs
/// cross or merge, sorted, with near-duplicates merged.
pub fn critical_points(gamma: &Matching) -> Result<Vec<f64>> {
    let lines = Lines::of(gamma)?;
    let support: Vec<&Line> = lines.lines[2..].iter().collect();
    let mut ts = Vec::new();
    for (k, a) in support.iter().enumerate() {
        for b in &support[k + 1..] {
            if let Some(t) = a.crossing(b) {
                if (-CRITICAL_TOL..=1.0 + CRITICAL_TOL).contains(&t) {
                    ts.push(t.clamp(0.0, 1.0));
                }
            }
        }
    }
    Ok(merge_times(ts))
}

fn merge_times(mut ts: Vec<f64>) -> Vec<f64> {
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut out: Vec<f64> = Vec::new();
    for t in ts {
        match out.last() {
            Some(&last) if t - last <= CRITICAL_TOL => {}
            _ => out.push(t),
        }
    }
    out
}

/// The interpolated diagram `υ_t`, plus which line each chain element came from.
#[derive(Debug, Clone)]
pub struct Interpolant {
    pub t: f64,
    pub diagram: Diagram,
    /// Element of `S_t` hit by each line.
    line_element: Vec<usize>,
    /// Matched pairs landing on each interval of `S̄_t`.
    sources: Vec<Vec<(usize, usize)>>,
}

impl Interpolant {
    /// Matched pairs `(I, J)` whose interpolation at `t` is interval `k`.
    pub fn sources(&self, k: usize) -> &[(usize, usize)] {
        &self.sources[k]
    }
}

fn build(gamma: &Matching, lines: &Lines, t: f64) -> Result<Interpolant> {
    let positions: Vec<f64> = lines.lines.iter().map(|l| l.at(t)).collect();
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].partial_cmp(&positions[b]).expect("positions are never NaN"));
    let mut points: Vec<f64> = Vec::new();
    let mut line_element = vec![0; positions.len()];
    for k in order {
        let x = positions[k];
        match points.last() {
            Some(&last) if x == last || (x - last).abs() <= POINT_TOL * last.abs().max(1.0) => {}
            _ => points.push(x),
        }
        line_element[k] = points.len() - 1;
    }
    let embedding = RealEmbedding::chain(&points)?;
    let index = interval_lattice(embedding.lattice());
    let mut values = vec![0i64; index.len()];
    let mut sources = vec![Vec::new(); index.len()];
    let keys: Vec<(usize, usize)> = gamma.entries().keys().copied().collect();
    for (n, &(left, right, c)) in lines.entries.iter().enumerate() {
        let k = index
            .index_of(line_element[left], line_element[right])
            .expect("interpolated endpoints stay ordered");
        values[k] += c;
        sources[k].push(keys[n]);
    }
    let function = IntervalFunction::new(index, values)?;
    let diagram = Diagram::new(function, embedding)?;
    Ok(Interpolant { t, diagram, line_element, sources })
}

/// `υ_t` over the chain `S_t` of interpolated endpoints (with `⊥` and `⊤`).
pub fn interpolate(gamma: &Matching, t: f64) -> Result<Interpolant> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Format(format!("interpolation parameter {t} is outside [0, 1]")));
    }
    build(gamma, &Lines::of(gamma)?, t)
}

/// Whether distinct lines stay at distinct points at `t`.
fn separates(lines: &Lines, stage: &Interpolant) -> bool {
    let mut seen = BTreeMap::new();
    lines.lines.iter().enumerate().all(|(k, l)| {
        let e = stage.line_element[k];
        match seen.insert(e, *l) {
            Some(prev) => prev == *l || (l.x.is_infinite() && prev.x.is_infinite()),
            None => true,
        }
    })
}

/// `υ_t → υ_s` sending each endpoint along its own line.
fn along_lines(lines: &Lines, from: &Interpolant, to: &Interpolant) -> Result<ChargeMorphism> {
    let (a, b) = (from.diagram.embedding().lattice(), to.diagram.embedding().lattice());
    let mut assignment = vec![usize::MAX; a.len()];
    for k in 0..lines.lines.len() {
        assignment[from.line_element[k]] = to.line_element[k];
    }
    let alpha = BoundedLatticeMap::new(a.clone(), b.clone(), assignment)?;
    let (f, g) = (from.diagram.function(), to.diagram.function());
    ChargeMorphism::new(f.clone(), g.clone(), LiftedMap::between(&alpha, f.index(), g.index())?)
}

/// `υ_t → σ` induced by the inclusion of `S_t` into the base chain of `σ`.
fn inclusion(stage: &Interpolant, into: &Diagram) -> Result<ChargeMorphism> {
    let (e, target) = (stage.diagram.embedding(), into.embedding());
    let assignment = e
        .coords()
        .iter()
        .map(|&x| {
            target
                .element_at(x)
                .ok_or_else(|| Error::NoEmbedding(format!("interpolated endpoint {x} is not in the base chain")))
        })
        .collect::<Result<Vec<_>>>()?;
    let alpha = BoundedLatticeMap::new(e.lattice().clone(), target.lattice().clone(), assignment)?;
    let (f, g) = (stage.diagram.function(), into.function());
    ChargeMorphism::new(f.clone(), g.clone(), LiftedMap::between(&alpha, f.index(), g.index())?)
}

/// The path `σ ← υ_0 ← υ_{t_0} → υ_{s_1} ← υ_{t_1} → … → υ_1 → τ` of
/// charge-preserving morphisms induced by `γ`.
///
/// The end steps through `υ_0` and `υ_1` are inclusions with zero
/// distortion; they are omitted when `υ_0 = σ` (resp. `υ_1 = τ`) already.
pub fn witness_path(gamma: &Matching) -> Result<MorphismPath<ChargeMorphism>> {
    let lines = Lines::of(gamma)?;
    let mut bounds = critical_points(gamma)?;
    bounds.push(0.0);
    bounds.push(1.0);
    let bounds = merge_times(bounds);
    let mut path = MorphismPath::default();
    let first = build(gamma, &lines, 0.0)?;
    if first.diagram != *gamma.source() {
        path.push(Step::backward(inclusion(&first, gamma.source())?));
    }
    let mut here = first;
    for w in bounds.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let mut t = (s0 + s1) / 2.0;
        let mut mid = build(gamma, &lines, t)?;
        let mut tries = 0;
        while !separates(&lines, &mid) {
            tries += 1;
            if tries > 60 {
                return Err(Error::InvalidMatching(format!("no non-critical parameter in ({s0}, {s1})")));
            }
            t = (s0 + t) / 2.0;
            mid = build(gamma, &lines, t)?;
        }
        let next = build(gamma, &lines, s1)?;
        path.push(Step::backward(along_lines(&lines, &mid, &here)?));
        path.push(Step::forward(along_lines(&lines, &mid, &next)?));
        here = next;
    }
    if here.diagram != *gamma.target() {
        path.push(Step::forward(inclusion(&here, gamma.target())?));
    }
    Ok(path)
}

/// Bounds on the edit distance between two non-negative diagrams.
#[derive(Debug, Clone)]
pub struct EditBounds {
    /// `d_B(σ, τ)`.
    pub lower: f64,
    /// Length of the witness path of the optimal matching.
    pub upper: f64,
    pub matching: Matching,
    /// `None` when `d_B = ∞`: then `d_Fnc = ∞` too and no finite witness exists.
    pub path: Option<MorphismPath<ChargeMorphism>>,
}

/// `d_B(σ,τ) ≤ d_Fnc(σ,τ) ≤ length(witness_path(γ*))`.
pub fn edit_bounds(sigma: &Diagram, tau: &Diagram) -> Result<EditBounds> {
    let (lower, matching) = bottleneck(sigma, tau)?;
    if lower.is_infinite() {
        return Ok(EditBounds { lower, upper: f64::INFINITY, matching, path: None });
    }
    let path = witness_path(&matching)?;
    let upper = path_length(&path)?;
    Ok(EditBounds { lower, upper, matching, path: Some(path) })
}
