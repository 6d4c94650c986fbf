//! Matchings between non-negative diagrams over embedded chains, and the
//! bottleneck distance.

use std::collections::{BTreeMap, VecDeque};

use crate::birthdeath::IntervalFunction;
use crate::distances::embedding::RealEmbedding;
use crate::error::{Error, Result};
use crate::lattice::{ext_abs_diff, same_lattice, Interval, LiftedMap};
use crate::mobius::check_charge_morphism;

/// An interval function whose base chain carries a real embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagram {
    function: IntervalFunction,
    embedding: RealEmbedding,
}

impl Diagram {
    pub fn new(function: IntervalFunction, embedding: RealEmbedding) -> Result<Self> {
        if !same_lattice(function.base(), embedding.lattice()) {
            return Err(Error::LatticeMismatch("embedding is for a different lattice".into()));
        }
        Ok(Self { function, embedding })
    }

    /// Uses numeric element names as coordinates.
    pub fn from_names(function: IntervalFunction) -> Result<Self> {
        let embedding = RealEmbedding::from_names(function.base().clone())?;
        Ok(Self { function, embedding })
    }

    pub fn function(&self) -> &IntervalFunction {
        &self.function
    }

    pub fn embedding(&self) -> &RealEmbedding {
        &self.embedding
    }

    /// Endpoint coordinates of interval `i`.
    pub fn coords(&self, i: usize) -> (f64, f64) {
        let Interval { lo, hi } = self.function.index().interval(i);
        (self.embedding.coord(lo), self.embedding.coord(hi))
    }

    pub fn is_diagonal(&self, i: usize) -> bool {
        self.function.index().is_diagonal(i)
    }

    fn check_non_negative(&self) -> Result<()> {
        match self.function.values().iter().position(|&v| v < 0) {
            Some(i) => Err(Error::NegativeMass(self.function.index().name(i).to_string())),
            None => Ok(()),
        }
    }

    /// Non-diagonal intervals with positive value.
    fn support(&self) -> Vec<usize> {
        (0..self.function.index().len()).filter(|&i| !self.is_diagonal(i) && self.function.value(i) > 0).collect()
    }
}

/// `‖[a,b] − [c,d]‖_∞ = max(|a−c|, |b−d|)` under extended arithmetic.
pub fn sup_distance(x: (f64, f64), y: (f64, f64)) -> f64 {
    ext_abs_diff(x.0, y.0).max(ext_abs_diff(x.1, y.1))
}

/// A matching `γ : P̄ × Q̄ → ℕ`, stored sparsely by interval index.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    source: Diagram,
    target: Diagram,
    entries: BTreeMap<(usize, usize), i64>,
}

impl Matching {
    /// Validates marginals off the diagonal; zero entries are dropped.
    pub fn new(source: Diagram, target: Diagram, entries: BTreeMap<(usize, usize), i64>) -> Result<Self> {
        source.check_non_negative()?;
        target.check_non_negative()?;
        let (np, nq) = (source.function.index().len(), target.function.index().len());
        let mut out = BTreeMap::new();
        let mut rows = vec![0i64; np];
        let mut cols = vec![0i64; nq];
        for (&(i, j), &c) in &entries {
            if i >= np || j >= nq {
                return Err(Error::InvalidMatching(format!("entry ({i},{j}) is out of range")));
            }
            if c < 0 {
                return Err(Error::InvalidMatching(format!(
                    "negative count for ({}, {})",
                    source.function.index().name(i),
                    target.function.index().name(j)
                )));
            }
            if c > 0 {
                out.insert((i, j), c);
                rows[i] = rows[i].checked_add(c).ok_or(Error::Overflow("summing a matching"))?;
                cols[j] = cols[j].checked_add(c).ok_or(Error::Overflow("summing a matching"))?;
            }
        }
        for i in (0..np).filter(|&i| !source.is_diagonal(i)) {
            if rows[i] != source.function.value(i) {
                return Err(Error::InvalidMatching(format!(
                    "{} has mass {} but {} is matched",
                    source.function.index().name(i),
                    source.function.value(i),
                    rows[i]
                )));
            }
        }
        for j in (0..nq).filter(|&j| !target.is_diagonal(j)) {
            if cols[j] != target.function.value(j) {
                return Err(Error::InvalidMatching(format!(
                    "{} has mass {} but {} is matched",
                    target.function.index().name(j),
                    target.function.value(j),
                    cols[j]
                )));
            }
        }
        Ok(Self { source, target, entries: out })
    }

    /// Entries given by interval names `(loI, hiI, loJ, hiJ, count)`.
    pub fn from_named(source: Diagram, target: Diagram, entries: &[(String, String, String, String, i64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, b, c, d, n) in entries {
            let i = source.function.index().index_of_names(a, b)?;
            let j = target.function.index().index_of_names(c, d)?;
            *map.entry((i, j)).or_insert(0) += n;
        }
        Self::new(source, target, map)
    }

    /// `γ(I,I) = σ(I)` on the support of `σ`.
    pub fn identity(sigma: Diagram) -> Result<Self> {
        let entries = (0..sigma.function.index().len())
            .filter(|&i| sigma.function.value(i) > 0)
            .map(|i| ((i, i), sigma.function.value(i)))
            .collect();
        Self::new(sigma.clone(), sigma, entries)
    }

    pub fn source(&self) -> &Diagram {
        &self.source
    }

    pub fn target(&self) -> &Diagram {
        &self.target
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.entries
    }

    /// `‖I − J‖_∞` for a pair of interval indices.
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        sup_distance(self.source.coords(i), self.target.coords(j))
    }

    /// `(loI, hiI, loJ, hiJ, count)` rows by element name.
    pub fn named_entries(&self) -> Vec<(String, String, String, String, i64)> {
        let (p, q) = (self.source.function.index(), self.target.function.index());
        self.entries
            .iter()
            .map(|(&(i, j), &c)| {
                let (a, b) = (p.interval(i), q.interval(j));
                let (pb, qb) = (p.base(), q.base());
                (
                    pb.name(a.lo).to_string(),
                    pb.name(a.hi).to_string(),
                    qb.name(b.lo).to_string(),
                    qb.name(b.hi).to_string(),
                    c,
                )
            })
            .collect()
    }
}

/// `max ‖I − J‖_∞` over the support of `γ`; 0 when the support is empty.
pub fn matching_norm(gamma: &Matching) -> f64 {
    gamma.entries.keys().map(|&(i, j)| gamma.cost(i, j)).fold(0.0, f64::max)
}

/// Cheapest diagonal `[q,q]` of `target` for the interval with coordinates `x`,
/// first by index among ties.
fn best_diagonal(x: (f64, f64), target: &Diagram) -> (f64, usize) {
    let index = target.function.index();
    let mut best = (f64::INFINITY, usize::MAX);
    for (q, &c) in target.embedding.coords().iter().enumerate() {
        let cost = sup_distance(x, (c, c));
        if best.1 == usize::MAX || cost < best.0 {
            best = (cost, index.index_of(q, q).expect("diagonal interval"));
        }
    }
    best
}

/// `d_B(σ, τ) = min_γ ‖γ‖`, with an optimal matching.
pub fn bottleneck(sigma: &Diagram, tau: &Diagram) -> Result<(f64, Matching)> {
    sigma.check_non_negative()?;
    tau.check_non_negative()?;
    let problem = Problem::new(sigma, tau);
    let mut candidates: Vec<f64> = vec![0.0];
    for (a, &i) in problem.left.iter().enumerate() {
        for &j in &problem.right {
            candidates.push(sigma_tau_cost(sigma, tau, i, j));
        }
        candidates.push(problem.left_diag[a].0);
    }
    candidates.extend(problem.right_diag.iter().map(|d| d.0));
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("costs are never NaN"));
    candidates.dedup();
    // the largest candidate always admits the all-diagonal matching
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if problem.solve(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let entries = problem.solve(candidates[lo]).expect("largest candidate is feasible");
    let gamma = Matching::new(sigma.clone(), tau.clone(), entries)?;
    Ok((matching_norm(&gamma), gamma))
}

fn sigma_tau_cost(sigma: &Diagram, tau: &Diagram, i: usize, j: usize) -> f64 {
    sup_distance(sigma.coords(i), tau.coords(j))
}

/// The fixed part of the flow network: supports and diagonal costs.
struct Problem<'a> {
    sigma: &'a Diagram,
    tau: &'a Diagram,
    left: Vec<usize>,
    right: Vec<usize>,
    left_diag: Vec<(f64, usize)>,
    right_diag: Vec<(f64, usize)>,
}

impl<'a> Problem<'a> {
    fn new(sigma: &'a Diagram, tau: &'a Diagram) -> Self {
        let left = sigma.support();
        let right = tau.support();
        let left_diag = left.iter().map(|&i| best_diagonal(sigma.coords(i), tau)).collect();
        let right_diag = right.iter().map(|&j| best_diagonal(tau.coords(j), sigma)).collect();
        Self { sigma, tau, left, right, left_diag, right_diag }
    }

    /// An integral matching of norm at most `eps`, if one exists.
    ///
    /// Network: `S → I` (σ(I)), `I → J` and `I → D_Q` when cheap enough,
    /// `S → D_P` (Στ), `D_P → J` when cheap enough, `D_P → D_Q` (∞),
    /// `J → T` (τ(J)), `D_Q → T` (Σσ). Feasible iff the flow saturates every
    /// source edge.
    fn solve(&self, eps: f64) -> Option<BTreeMap<(usize, usize), i64>> {
        let (m, n) = (self.left.len(), self.right.len());
        let mass_l: i64 = self.left.iter().map(|&i| self.sigma.function.value(i)).sum();
        let mass_r: i64 = self.right.iter().map(|&j| self.tau.function.value(j)).sum();
        let inf = mass_l + mass_r + 1;
        let (s, t, dp, dq) = (0, 1, 2, 3);
        let li = |a: usize| 4 + a;
        let rj = |b: usize| 4 + m + b;
        let mut g = Dinic::new(4 + m + n);
        let mut pair_edges = Vec::new();
        let mut absorb_edges = Vec::new();
        let mut emit_edges = Vec::new();
        for (a, &i) in self.left.iter().enumerate() {
            g.add_edge(s, li(a), self.sigma.function.value(i));
            for (b, &j) in self.right.iter().enumerate() {
                if sigma_tau_cost(self.sigma, self.tau, i, j) <= eps {
                    pair_edges.push((g.add_edge(li(a), rj(b), inf), i, j));
                }
            }
            if self.left_diag[a].0 <= eps {
                absorb_edges.push((g.add_edge(li(a), dq, inf), i, self.left_diag[a].1));
            }
        }
        g.add_edge(s, dp, mass_r);
        for (b, &j) in self.right.iter().enumerate() {
            if self.right_diag[b].0 <= eps {
                emit_edges.push((g.add_edge(dp, rj(b), inf), self.right_diag[b].1, j));
            }
            g.add_edge(rj(b), t, self.tau.function.value(j));
        }
        g.add_edge(dp, dq, inf);
        g.add_edge(dq, t, mass_l);
        if g.max_flow(s, t) != mass_l + mass_r {
            return None;
        }
        let mut entries = BTreeMap::new();
        for (e, i, j) in pair_edges.into_iter().chain(absorb_edges).chain(emit_edges) {
            let f = g.flow(e);
            if f > 0 {
                *entries.entry((i, j)).or_insert(0) += f;
            }
        }
        Some(entries)
    }
}

/// Dinic's max-flow on integer capacities.
struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Self { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), level: vec![0; n], iter: vec![0; n] }
    }

    /// Returns the id of the forward edge; its reverse is `id ^ 1`.
    fn add_edge(&mut self, u: usize, v: usize, c: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        id
    }

    /// Flow pushed along a forward edge.
    fn flow(&self, e: usize) -> i64 {
        self.cap[e ^ 1]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.head[u].len() {
            let e = self.head[u][self.iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[e]));
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// The matching `γ(I, ᾱ(I)) = σ(I)` induced by a charge-preserving morphism.
pub fn morphism_to_matching(sigma: &Diagram, tau: &Diagram, map: &LiftedMap) -> Result<Matching> {
    sigma.check_non_negative()?;
    tau.check_non_negative()?;
    let report = check_charge_morphism(&sigma.function, &tau.function, map)?;
    if !report.is_valid() {
        return Err(Error::InvalidMorphism(report.summary()));
    }
    let entries = (0..sigma.function.index().len())
        .filter(|&i| sigma.function.value(i) > 0)
        .map(|i| ((i, map.apply(i)), sigma.function.value(i)))
        .collect();
    Matching::new(sigma.clone(), tau.clone(), entries)
}

/// `max_I ‖I − ᾱ(I)‖_∞` over all intervals of the source.
pub fn displacement(map: &LiftedMap, source: &RealEmbedding, target: &RealEmbedding) -> Result<f64> {
    if !same_lattice(map.base().source(), source.lattice()) || !same_lattice(map.base().target(), target.lattice()) {
        return Err(Error::LatticeMismatch("embeddings do not match the map".into()));
    }
    let (p, q) = (map.source(), map.target());
    Ok((0..p.len())
        .map(|i| {
            let (a, b) = (p.interval(i), q.interval(map.apply(i)));
            sup_distance((source.coord(a.lo), source.coord(a.hi)), (target.coord(b.lo), target.coord(b.hi)))
        })
        .fold(0.0, f64::max))
}
