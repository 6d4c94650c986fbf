//! Finite metric lattices, bounded lattice maps, the interval-lattice functor
//! and distortion.
//!
//! Elements are addressed by dense `usize` indices into the lattice's element
//! list. Order, meet and join tables are materialized once at construction so
//! every query afterwards is a table lookup.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Relative slack used when checking the triangle inequality on float metrics.
const METRIC_TOL: f64 = 1e-9;

/// `|a - b|` on the extended non-negative reals, with `|inf - inf| = 0`.
pub fn ext_abs_diff(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() {
        0.0
    } else {
        (a - b).abs()
    }
}

/// How the order of a raw lattice description is given.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderSpec {
    /// Hasse covers `(lo, hi)`; any pairs are accepted, the closure is taken.
    Covers(Vec<(String, String)>),
    /// Pairs `(a, b)` meaning `a <= b`; the closure is taken.
    Leq(Vec<(String, String)>),
}

impl OrderSpec {
    fn pairs(&self) -> &[(String, String)] {
        match self {
            OrderSpec::Covers(p) | OrderSpec::Leq(p) => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// Shortest-path edge count in the undirected Hasse diagram.
    Hasse,
    /// Explicit `(a, b, d)` entries. Each unordered pair needs one entry; the
    /// diagonal defaults to zero.
    Explicit(Vec<(String, String, f64)>),
}

/// Unvalidated lattice description, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    pub order: OrderSpec,
    pub metric: MetricSpec,
}

/// A validated finite lattice with an extended metric.
#[derive(Debug, Clone)]
pub struct FiniteMetricLattice {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    metric: Vec<f64>,
    bottom: usize,
    top: usize,
    linear: Vec<usize>,
}

impl PartialEq for FiniteMetricLattice {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq && self.metric == other.metric
    }
}

/// Structural lattice equality with a pointer fast path.
pub fn same_lattice(a: &Arc<FiniteMetricLattice>, b: &Arc<FiniteMetricLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FiniteMetricLattice {
    /// Validates a raw description: order closure, antisymmetry, unique
    /// meets and joins, and the metric axioms.
    pub fn validate(spec: &LatticeSpec) -> Result<Self> {
        let n = spec.elements.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let index = build_index(&spec.elements)?;
        let mut leq = vec![false; n * n];
        for (a, b) in spec.order.pairs() {
            let ia = lookup(&index, a)?;
            let ib = lookup(&index, b)?;
            leq[ia * n + ib] = true;
        }
        let leq = close_order(n, leq, &spec.elements)?;
        let metric = match &spec.metric {
            MetricSpec::Hasse => hasse_distances(n, &leq),
            MetricSpec::Explicit(entries) => explicit_metric(n, &index, entries)?,
        };
        Self::from_order(spec.elements.clone(), leq, metric)
    }

    /// Builds a lattice from an already transitively closed order and a
    /// metric, checking antisymmetry, meets/joins and the metric.
    pub fn from_order(names: Vec<String>, leq: Vec<bool>, metric: Vec<f64>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let index = build_index(&names)?;
        check_partial_order(n, &leq, &names)?;
        let meet = bound_table(n, &leq, &names, true)?;
        let join = bound_table(n, &leq, &names, false)?;
        check_metric(n, &metric, &names)?;
        Ok(Self::assemble(names, index, leq, meet, join, metric))
    }

    /// Tables are trusted; used for constructions that are lattices by design.
    fn from_tables_unchecked(
        names: Vec<String>,
        leq: Vec<bool>,
        meet: Vec<usize>,
        join: Vec<usize>,
        metric: Vec<f64>,
    ) -> Self {
        let index = names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self::assemble(names, index, leq, meet, join, metric)
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, usize>,
        leq: Vec<bool>,
        meet: Vec<usize>,
        join: Vec<usize>,
        metric: Vec<f64>,
    ) -> Self {
        let n = names.len();
        let below = |a: usize| (0..n).filter(|&b| leq[b * n + a]).count();
        let mut linear: Vec<usize> = (0..n).collect();
        linear.sort_by_key(|&a| (below(a), a));
        let bottom = linear[0];
        let top = linear[n - 1];
        Self { names, index, leq, meet, join, metric, bottom, top, linear }
    }

    /// The chain `names[0] < names[1] < ...` with the metric `|x_i - x_j|`
    /// computed from the given coordinates.
    pub fn chain(names: Vec<String>, coords: &[f64]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if coords.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} names but {} coordinates",
                n,
                coords.len()
            )));
        }
        build_index(&names)?;
        let mut metric = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                metric[i * n + j] = if i == j { 0.0 } else { ext_abs_diff(coords[i], coords[j]) };
            }
        }
        check_metric(n, &metric, &names)?;
        Ok(Self::chain_unchecked(names, metric))
    }

    pub(crate) fn chain_unchecked(names: Vec<String>, metric: Vec<f64>) -> Self {
        let n = names.len();
        let mut leq = vec![false; n * n];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = i <= j;
                meet[i * n + j] = i.min(j);
                join[i * n + j] = i.max(j);
            }
        }
        Self::from_tables_unchecked(names, leq, meet, join, metric)
    }

    /// The one-point lattice.
    pub fn point(name: &str) -> Self {
        Self::chain_unchecked(vec![name.to_string()], vec![0.0])
    }

    /// Same order, new metric (validated).
    pub fn with_metric(&self, metric: Vec<f64>) -> Result<Self> {
        let n = self.len();
        if metric.len() != n * n {
            return Err(Error::DimensionMismatch("metric table has the wrong size".into()));
        }
        check_metric(n, &metric, &self.names)?;
        let mut out = self.clone();
        out.metric = metric;
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        lookup(&self.index, name)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    /// Meet by element name.
    pub fn meet_of(&self, a: &str, b: &str) -> Result<&str> {
        let m = self.meet(self.element(a)?, self.element(b)?);
        Ok(self.name(m))
    }

    /// Join by element name.
    pub fn join_of(&self, a: &str, b: &str) -> Result<&str> {
        let j = self.join(self.element(a)?, self.element(b)?);
        Ok(self.name(j))
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.metric[a * self.len() + b]
    }

    pub fn metric_table(&self) -> &[f64] {
        &self.metric
    }

    /// Elements listed so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Hasse covers `(lo, hi)`, ordered by index.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        covers_of(self.len(), &self.leq)
    }

    /// Shortest-path edge counts in the undirected Hasse diagram.
    pub fn hasse_distances(&self) -> Vec<f64> {
        hasse_distances(self.len(), &self.leq)
    }
}

/// Lattice with the Hasse path-length metric.
pub fn hasse_metric(elements: Vec<String>, order: OrderSpec) -> Result<FiniteMetricLattice> {
    FiniteMetricLattice::validate(&LatticeSpec { elements, order, metric: MetricSpec::Hasse })
}

fn build_index(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, s) in names.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(Error::Format(format!("duplicate element `{s}`")));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, name: &str) -> Result<usize> {
    index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
}

fn close_order(n: usize, mut leq: Vec<bool>, names: &[String]) -> Result<Vec<bool>> {
    for a in 0..n {
        leq[a * n + a] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    check_partial_order(n, &leq, names)?;
    Ok(leq)
}

fn check_partial_order(n: usize, leq: &[bool], names: &[String]) -> Result<()> {
    if leq.len() != n * n {
        return Err(Error::DimensionMismatch("order table has the wrong size".into()));
    }
    for a in 0..n {
        if !leq[a * n + a] {
            return Err(Error::NotAPoset(format!("`{}` is not <= itself", names[a])));
        }
        for b in 0..n {
            if a != b && leq[a * n + b] && leq[b * n + a] {
                return Err(Error::NotAPoset(format!(
                    "`{}` and `{}` are distinct but mutually <=",
                    names[a], names[b]
                )));
            }
            if leq[a * n + b] {
                for c in 0..n {
                    if leq[b * n + c] && !leq[a * n + c] {
                        return Err(Error::NotAPoset(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            names[a], names[b], names[c], names[a], names[c]
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Meet table when `lower` is set, join table otherwise.
fn bound_table(n: usize, leq: &[bool], names: &[String], lower: bool) -> Result<Vec<usize>> {
    let below = |x: usize, y: usize| if lower { leq[x * n + y] } else { leq[y * n + x] };
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in a..n {
            let bounds: Vec<usize> = (0..n).filter(|&c| below(c, a) && below(c, b)).collect();
            let best: Vec<usize> = bounds
                .iter()
                .copied()
                .filter(|&m| bounds.iter().all(|&c| below(c, m)))
                .collect();
            if best.len() != 1 {
                return Err(Error::NoMeetOrJoin(format!(
                    "`{}` and `{}` have no unique {}",
                    names[a],
                    names[b],
                    if lower { "meet" } else { "join" }
                )));
            }
            table[a * n + b] = best[0];
            table[b * n + a] = best[0];
        }
    }
    Ok(table)
}

fn covers_of(n: usize, leq: &[bool]) -> Vec<(usize, usize)> {
    let lt = |a: usize, b: usize| a != b && leq[a * n + b];
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

fn hasse_distances(n: usize, leq: &[bool]) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in covers_of(n, leq) {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![f64::INFINITY; n * n];
    for s in 0..n {
        dist[s * n + s] = 0.0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[s * n + u];
            for &v in &adj[u] {
                if dist[s * n + v].is_infinite() {
                    dist[s * n + v] = du + 1.0;
                    queue.push_back(v);
                }
            }
        }
    }
    dist
}

fn explicit_metric(
    n: usize,
    index: &HashMap<String, usize>,
    entries: &[(String, String, f64)],
) -> Result<Vec<f64>> {
    let mut metric = vec![f64::NAN; n * n];
    for a in 0..n {
        metric[a * n + a] = 0.0;
    }
    let mut seen = vec![false; n * n];
    for (a, b, d) in entries {
        let ia = lookup(index, a)?;
        let ib = lookup(index, b)?;
        for (x, y) in [(ia, ib), (ib, ia)] {
            if seen[x * n + y] && metric[x * n + y] != *d {
                return Err(Error::BadMetric(format!("d({a},{b}) is not symmetric")));
            }
            seen[x * n + y] = true;
            metric[x * n + y] = *d;
        }
    }
    if let Some(k) = metric.iter().position(|d| d.is_nan()) {
        let names: Vec<&String> = {
            let mut v: Vec<&String> = vec![&entries[0].0; n];
            for (name, &i) in index {
                v[i] = name;
            }
            v
        };
        return Err(Error::BadMetric(format!(
            "missing distance between `{}` and `{}`",
            names[k / n],
            names[k % n]
        )));
    }
    Ok(metric)
}

fn check_metric(n: usize, metric: &[f64], names: &[String]) -> Result<()> {
    if metric.len() != n * n {
        return Err(Error::DimensionMismatch("metric table has the wrong size".into()));
    }
    let d = |a: usize, b: usize| metric[a * n + b];
    for a in 0..n {
        if d(a, a) != 0.0 {
            return Err(Error::BadMetric(format!("d({0},{0}) != 0", names[a])));
        }
        for b in 0..n {
            let v = d(a, b);
            if v.is_nan() || v < 0.0 {
                return Err(Error::BadMetric(format!(
                    "d({},{}) = {} is not a non-negative extended real",
                    names[a], names[b], v
                )));
            }
            if v != d(b, a) {
                return Err(Error::BadMetric(format!("d({},{}) is not symmetric", names[a], names[b])));
            }
            if a != b && v == 0.0 {
                return Err(Error::BadMetric(format!(
                    "distinct elements `{}` and `{}` are at distance 0",
                    names[a], names[b]
                )));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let direct = d(a, c);
                let via = d(a, b) + d(b, c);
                if direct.is_finite() && via.is_finite() {
                    if direct > via + METRIC_TOL * via.max(1.0) {
                        return Err(triangle_error(names, a, b, c));
                    }
                } else if direct.is_infinite() && via.is_finite() {
                    return Err(triangle_error(names, a, b, c));
                }
            }
        }
    }
    Ok(())
}

fn triangle_error(names: &[String], a: usize, b: usize, c: usize) -> Error {
    Error::BadMetric(format!(
        "triangle inequality fails for {} -> {} -> {}",
        names[a], names[b], names[c]
    ))
}

/// An order interval `[lo, hi]` of a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn is_diagonal(&self) -> bool {
        self.lo == self.hi
    }
}

/// The lattice of intervals of a base lattice, ordered componentwise, with
/// the sup metric `max(d(a,c), d(b,d))`.
#[derive(Debug)]
pub struct IntervalLattice {
    base: Arc<FiniteMetricLattice>,
    lattice: Arc<FiniteMetricLattice>,
    intervals: Vec<Interval>,
    lookup: Vec<Option<usize>>,
}

impl PartialEq for IntervalLattice {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.base, &other.base)
    }
}

/// Builds `Int P`. Elements are ordered by `(lo, hi)` base index and named `[a,b]`.
pub fn interval_lattice(base: &Arc<FiniteMetricLattice>) -> Arc<IntervalLattice> {
    let n = base.len();
    let mut intervals = Vec::new();
    let mut lookup = vec![None; n * n];
    for lo in 0..n {
        for hi in 0..n {
            if base.leq(lo, hi) {
                lookup[lo * n + hi] = Some(intervals.len());
                intervals.push(Interval { lo, hi });
            }
        }
    }
    let m = intervals.len();
    let names = intervals
        .iter()
        .map(|iv| format!("[{},{}]", base.name(iv.lo), base.name(iv.hi)))
        .collect();
    let mut leq = vec![false; m * m];
    let mut meet = vec![0; m * m];
    let mut join = vec![0; m * m];
    let mut metric = vec![0.0; m * m];
    for (i, x) in intervals.iter().enumerate() {
        for (j, y) in intervals.iter().enumerate() {
            let k = i * m + j;
            leq[k] = base.leq(x.lo, y.lo) && base.leq(x.hi, y.hi);
            // componentwise meets/joins of intervals are intervals again
            meet[k] = lookup[base.meet(x.lo, y.lo) * n + base.meet(x.hi, y.hi)]
                .expect("componentwise meet is an interval");
            join[k] = lookup[base.join(x.lo, y.lo) * n + base.join(x.hi, y.hi)]
                .expect("componentwise join is an interval");
            metric[k] = base.dist(x.lo, y.lo).max(base.dist(x.hi, y.hi));
        }
    }
    let lattice = FiniteMetricLattice::from_tables_unchecked(names, leq, meet, join, metric);
    Arc::new(IntervalLattice { base: base.clone(), lattice: Arc::new(lattice), intervals, lookup })
}

impl IntervalLattice {
    pub fn base(&self) -> &Arc<FiniteMetricLattice> {
        &self.base
    }

    /// `Int P` viewed as a metric lattice in its own right.
    pub fn lattice(&self) -> &Arc<FiniteMetricLattice> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, i: usize) -> Interval {
        self.intervals[i]
    }

    pub fn index_of(&self, lo: usize, hi: usize) -> Option<usize> {
        let n = self.base.len();
        if lo >= n || hi >= n {
            return None;
        }
        self.lookup[lo * n + hi]
    }

    /// Interval index by endpoint names.
    pub fn index_of_names(&self, lo: &str, hi: &str) -> Result<usize> {
        let (a, b) = (self.base.element(lo)?, self.base.element(hi)?);
        self.index_of(a, b)
            .ok_or_else(|| Error::Format(format!("[{lo},{hi}] is not an interval ({lo} is not <= {hi})")))
    }

    pub fn is_diagonal(&self, i: usize) -> bool {
        self.intervals[i].is_diagonal()
    }

    pub fn name(&self, i: usize) -> &str {
        self.lattice.name(i)
    }

    /// `I ⪯ J`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.lattice.leq(i, j)
    }
}

/// A map between finite lattices preserving top, bottom, meets and joins.
#[derive(Debug, Clone)]
pub struct BoundedLatticeMap {
    source: Arc<FiniteMetricLattice>,
    target: Arc<FiniteMetricLattice>,
    assignment: Vec<usize>,
}

impl PartialEq for BoundedLatticeMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && same_lattice(&self.source, &other.source)
            && same_lattice(&self.target, &other.target)
    }
}

impl BoundedLatticeMap {
    pub fn new(
        source: Arc<FiniteMetricLattice>,
        target: Arc<FiniteMetricLattice>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::NotALatticeMap(format!(
                "assignment covers {} of {} source elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&x| x >= target.len()) {
            return Err(Error::NotALatticeMap(format!("target index {bad} out of range")));
        }
        let map = Self { source, target, assignment };
        map.check()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteMetricLattice>,
        target: Arc<FiniteMetricLattice>,
        assignment: Vec<usize>,
    ) -> Self {
        Self { source, target, assignment }
    }

    /// Map given as `source name -> target name`; every source element must appear.
    pub fn from_names(
        source: Arc<FiniteMetricLattice>,
        target: Arc<FiniteMetricLattice>,
        map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut assignment = vec![usize::MAX; source.len()];
        for (a, b) in map {
            assignment[source.element(a)?] = target.element(b)?;
        }
        if let Some(missing) = assignment.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NotALatticeMap(format!(
                "no image given for `{}`",
                source.name(missing)
            )));
        }
        Self::new(source, target, assignment)
    }

    pub fn identity(lattice: Arc<FiniteMetricLattice>) -> Self {
        let assignment = (0..lattice.len()).collect();
        Self { source: lattice.clone(), target: lattice, assignment }
    }

    /// The unique map onto a one-point lattice.
    pub fn to_point(source: Arc<FiniteMetricLattice>, point: Arc<FiniteMetricLattice>) -> Result<Self> {
        if point.len() != 1 {
            return Err(Error::NotALatticeMap("target is not a one-point lattice".into()));
        }
        let assignment = vec![0; source.len()];
        Ok(Self { source, target: point, assignment })
    }

    fn check(&self) -> Result<()> {
        let (p, q) = (&self.source, &self.target);
        let f = |a: usize| self.assignment[a];
        if f(p.bottom()) != q.bottom() {
            return Err(Error::NotALatticeMap(format!(
                "bottom `{}` maps to `{}`",
                p.name(p.bottom()),
                q.name(f(p.bottom()))
            )));
        }
        if f(p.top()) != q.top() {
            return Err(Error::NotALatticeMap(format!(
                "top `{}` maps to `{}`",
                p.name(p.top()),
                q.name(f(p.top()))
            )));
        }
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if f(p.meet(a, b)) != q.meet(f(a), f(b)) {
                    return Err(Error::NotALatticeMap(format!(
                        "meet of `{}` and `{}` is not preserved",
                        p.name(a),
                        p.name(b)
                    )));
                }
                if f(p.join(a, b)) != q.join(f(a), f(b)) {
                    return Err(Error::NotALatticeMap(format!(
                        "join of `{}` and `{}` is not preserved",
                        p.name(a),
                        p.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FiniteMetricLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteMetricLattice> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, a: usize) -> usize {
        self.assignment[a]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &BoundedLatticeMap) -> Result<BoundedLatticeMap> {
        if !same_lattice(&self.target, &next.source) {
            return Err(Error::NotComposable("target of the first map is not the source of the second".into()));
        }
        let assignment = self.assignment.iter().map(|&a| next.assignment[a]).collect();
        Ok(Self { source: self.source.clone(), target: next.target.clone(), assignment })
    }

    /// The maximum of `α⁻¹[⊥, a]`. It exists for every bounded lattice map;
    /// uniqueness is verified rather than assumed.
    pub fn preimage_max(&self, a: usize) -> Result<usize> {
        let (p, q) = (&self.source, &self.target);
        if a >= q.len() {
            return Err(Error::UnknownElement(format!("#{a}")));
        }
        let members: Vec<usize> = (0..p.len()).filter(|&x| q.leq(self.assignment[x], a)).collect();
        let top = members
            .iter()
            .copied()
            .reduce(|x, y| p.join(x, y))
            .ok_or_else(|| Error::NotALatticeMap(format!("empty preimage below `{}`", q.name(a))))?;
        if !q.leq(self.assignment[top], a) || !members.iter().all(|&x| p.leq(x, top)) {
            return Err(Error::NotALatticeMap(format!(
                "preimage below `{}` has no maximum",
                q.name(a)
            )));
        }
        Ok(top)
    }

    /// `max_{a,b} |d_P(a,b) - d_Q(α a, α b)|` under extended arithmetic.
    pub fn distortion(&self) -> f64 {
        let (p, q) = (&self.source, &self.target);
        let mut worst: f64 = 0.0;
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                let delta = ext_abs_diff(p.dist(a, b), q.dist(self.apply(a), self.apply(b)));
                worst = worst.max(delta);
            }
        }
        worst
    }
}

/// A bounded lattice map `α` together with its induced map `ᾱ` on intervals.
#[derive(Debug, Clone)]
pub struct LiftedMap {
    base: BoundedLatticeMap,
    source: Arc<IntervalLattice>,
    target: Arc<IntervalLattice>,
    map: BoundedLatticeMap,
}

impl PartialEq for LiftedMap {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

/// `ᾱ([a,b]) = [α(a), α(b)]`, with freshly built interval lattices.
pub fn lift_map(alpha: &BoundedLatticeMap) -> LiftedMap {
    let source = interval_lattice(&alpha.source);
    let target = interval_lattice(&alpha.target);
    LiftedMap::build(alpha.clone(), source, target)
}

impl LiftedMap {
    /// Lifts `alpha` between existing interval lattices, which must sit over
    /// its source and target.
    pub fn between(
        alpha: &BoundedLatticeMap,
        source: &Arc<IntervalLattice>,
        target: &Arc<IntervalLattice>,
    ) -> Result<Self> {
        if !same_lattice(&alpha.source, source.base()) {
            return Err(Error::LatticeMismatch("map source differs from the source index".into()));
        }
        if !same_lattice(&alpha.target, target.base()) {
            return Err(Error::LatticeMismatch("map target differs from the target index".into()));
        }
        Ok(Self::build(alpha.clone(), source.clone(), target.clone()))
    }

    fn build(base: BoundedLatticeMap, source: Arc<IntervalLattice>, target: Arc<IntervalLattice>) -> Self {
        let assignment = source
            .intervals()
            .iter()
            .map(|iv| {
                target
                    .index_of(base.apply(iv.lo), base.apply(iv.hi))
                    .expect("monotone maps send intervals to intervals")
            })
            .collect();
        let map = BoundedLatticeMap::new_unchecked(
            source.lattice().clone(),
            target.lattice().clone(),
            assignment,
        );
        Self { base, source, target, map }
    }

    /// Recovers the base map of a map between interval lattices, failing with
    /// `MapNotLifted` when the map is not of the form `[a,b] ↦ [α a, α b]`.
    pub fn from_interval_map(
        map: &BoundedLatticeMap,
        source: &Arc<IntervalLattice>,
        target: &Arc<IntervalLattice>,
    ) -> Result<Self> {
        if !same_lattice(map.source(), source.lattice()) || !same_lattice(map.target(), target.lattice()) {
            return Err(Error::LatticeMismatch("map does not act between the given interval lattices".into()));
        }
        let p = source.base();
        let mut base = vec![0; p.len()];
        for (a, slot) in base.iter_mut().enumerate() {
            let diag = source.index_of(a, a).expect("diagonal interval exists");
            let image = target.interval(map.apply(diag));
            if !image.is_diagonal() {
                return Err(Error::MapNotLifted(format!(
                    "diagonal {} is sent to the non-diagonal {}",
                    source.name(diag),
                    target.name(map.apply(diag))
                )));
            }
            *slot = image.lo;
        }
        for (i, iv) in source.intervals().iter().enumerate() {
            let image = target.interval(map.apply(i));
            if image.lo != base[iv.lo] || image.hi != base[iv.hi] {
                return Err(Error::MapNotLifted(format!(
                    "{} is not sent to the interval of its endpoint images",
                    source.name(i)
                )));
            }
        }
        let alpha = BoundedLatticeMap::new(p.clone(), target.base().clone(), base)
            .map_err(|e| Error::MapNotLifted(e.to_string()))?;
        Ok(Self::build(alpha, source.clone(), target.clone()))
    }

    pub fn base(&self) -> &BoundedLatticeMap {
        &self.base
    }

    /// `ᾱ` as a bounded lattice map between interval lattices.
    pub fn map(&self) -> &BoundedLatticeMap {
        &self.map
    }

    pub fn source(&self) -> &Arc<IntervalLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<IntervalLattice> {
        &self.target
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map.apply(i)
    }

    /// `ᾱ⁻¹[⊥, I]` maximum, i.e. `[a*, b*]` for `I = [a, b]`.
    pub fn preimage_max(&self, i: usize) -> Result<usize> {
        self.map.preimage_max(i)
    }

    pub fn then(&self, next: &LiftedMap) -> Result<LiftedMap> {
        let base = self.base.then(&next.base)?;
        Ok(Self::build(base, self.source.clone(), next.target.clone()))
    }

    /// Distortion of `ᾱ`, computed on the interval lattices.
    pub fn distortion(&self) -> f64 {
        self.map.distortion()
    }
}

impl fmt::Display for FiniteMetricLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice with {} elements (bottom {}, top {})", self.len(), self.name(self.bottom), self.name(self.top))
    }
}
