//! Random lattices, maps, complexes, filtrations and diagrams for the
//! integration suites, plus a naive rank oracle over GF(p).
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use lattice_pd::distances::{Diagram, RealEmbedding};
use lattice_pd::{
    interval_lattice, BoundedLatticeMap, Filtration, FiniteMetricLattice, IntervalFunction, SimplicialComplex,
    Subcomplex,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shortest paths on the undirected Hasse diagram with the given cover weights.
fn path_metric(n: usize, covers: &[(usize, usize)], weight: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n * n];
    for a in 0..n {
        d[a * n + a] = 0.0;
    }
    for (k, &(a, b)) in covers.iter().enumerate() {
        let w = weight(k);
        d[a * n + b] = w;
        d[b * n + a] = w;
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                let via = d[a * n + m] + d[m * n + b];
                if via < d[a * n + b] {
                    d[a * n + b] = via;
                }
            }
        }
    }
    d
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

/// A lattice of an intersection-closed family of subsets of a 3-element set,
/// with at most `max` elements and random positive cover weights.
pub fn random_lattice(rng: &mut TestRng, max: usize) -> Arc<FiniteMetricLattice> {
    loop {
        let mut family: BTreeSet<u8> = BTreeSet::from([0b111]);
        for _ in 0..rng.gen_range(0..6) {
            family.insert(rng.gen_range(0..8));
        }
        loop {
            let sets: Vec<u8> = family.iter().copied().collect();
            let before = family.len();
            for &x in &sets {
                for &y in &sets {
                    family.insert(x & y);
                }
            }
            if family.len() == before {
                break;
            }
        }
        let sets: Vec<u8> = family.into_iter().collect();
        let n = sets.len();
        if n > max {
            continue;
        }
        let leq: Vec<bool> =
            (0..n * n).map(|k| sets[k / n] & sets[k % n] == sets[k / n]).collect();
        let covers = covers_of(n, &leq);
        let weights: Vec<f64> = covers.iter().map(|_| f64::from(rng.gen_range(1..=4)) / 2.0).collect();
        let metric = if rng.gen_bool(0.3) { path_metric(n, &covers, |_| 1.0) } else { path_metric(n, &covers, |k| weights[k]) };
        let names = sets.iter().map(|s| format!("s{s}")).collect();
        return Arc::new(FiniteMetricLattice::from_order(names, leq, metric).expect("closure systems are lattices"));
    }
}

/// A chain with strictly increasing coordinates starting at 0; the top may be `∞`.
pub fn random_chain_coords(rng: &mut TestRng, len: usize, infinite_top: bool) -> Vec<f64> {
    let mut coords = vec![0.0];
    while coords.len() < len {
        let last = *coords.last().expect("non-empty");
        coords.push(last + f64::from(rng.gen_range(1..=4)) / 2.0);
    }
    if infinite_top && len > 1 {
        *coords.last_mut().expect("non-empty") = f64::INFINITY;
    }
    coords
}

pub fn chain_lattice(coords: &[f64]) -> Arc<FiniteMetricLattice> {
    RealEmbedding::chain(coords).expect("increasing coordinates").lattice().clone()
}

/// The same order with fresh random cover weights.
pub fn remetrize(rng: &mut TestRng, p: &FiniteMetricLattice) -> Arc<FiniteMetricLattice> {
    let covers = p.covers();
    let weights: Vec<f64> = covers.iter().map(|_| f64::from(rng.gen_range(1..=4)) / 2.0).collect();
    let metric = path_metric(p.len(), &covers, |k| weights[k]);
    Arc::new(p.with_metric(metric).expect("path metrics are metrics"))
}

/// Every bounded lattice map `P → Q` (up to `limit`), by backtracking along
/// a linear extension of `P`.
pub fn bounded_maps(p: &FiniteMetricLattice, q: &FiniteMetricLattice, limit: usize) -> Vec<Vec<usize>> {
    let order = p.linear_extension().to_vec();
    let mut out = Vec::new();
    let mut assignment = vec![usize::MAX; p.len()];
    fn consistent(p: &FiniteMetricLattice, q: &FiniteMetricLattice, a: &[usize], z: usize) -> bool {
        let set = |x: usize| a[x] != usize::MAX;
        if z == p.bottom() && a[z] != q.bottom() || z == p.top() && a[z] != q.top() {
            return false;
        }
        for x in (0..p.len()).filter(|&x| set(x)) {
            if p.leq(x, z) && !q.leq(a[x], a[z]) || p.leq(z, x) && !q.leq(a[z], a[x]) {
                return false;
            }
            let (m, j) = (p.meet(x, z), p.join(x, z));
            if set(m) && a[m] != q.meet(a[x], a[z]) || set(j) && a[j] != q.join(a[x], a[z]) {
                return false;
            }
        }
        // pairs whose meet or join is z
        for x in (0..p.len()).filter(|&x| set(x)) {
            for y in (0..p.len()).filter(|&y| set(y)) {
                if p.meet(x, y) == z && a[z] != q.meet(a[x], a[y]) || p.join(x, y) == z && a[z] != q.join(a[x], a[y]) {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        p: &FiniteMetricLattice,
        q: &FiniteMetricLattice,
        order: &[usize],
        k: usize,
        a: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if k == order.len() {
            out.push(a.clone());
            return;
        }
        let z = order[k];
        for v in 0..q.len() {
            a[z] = v;
            if consistent(p, q, a, z) {
                go(p, q, order, k + 1, a, out, limit);
            }
        }
        a[z] = usize::MAX;
    }
    go(p, q, &order, 0, &mut assignment, &mut out, limit);
    out
}

/// A random bounded lattice map out of `p`: into a fresh random lattice, a
/// random chain, or `p` itself re-metrized.
pub fn random_map(rng: &mut TestRng, p: &Arc<FiniteMetricLattice>) -> BoundedLatticeMap {
    loop {
        let q = match rng.gen_range(0..3) {
            0 => random_lattice(rng, 6),
            1 => {
                let len = rng.gen_range(2..=4);
                chain_lattice(&random_chain_coords(rng, len, false))
            }
            _ => remetrize(rng, p),
        };
        let maps = bounded_maps(p, &q, 64);
        if let Some(a) = maps.choose(rng) {
            return BoundedLatticeMap::new(p.clone(), q, a.clone()).expect("enumerated maps are bounded lattice maps");
        }
    }
}

/// A random complex on at most `vertices` vertices with at most `max` simplices.
pub fn random_complex(rng: &mut TestRng, vertices: u32, max: usize) -> Arc<SimplicialComplex> {
    loop {
        let count = rng.gen_range(1..=4);
        let mut gens = Vec::new();
        for _ in 0..count {
            let size = rng.gen_range(1..=vertices.min(4));
            let mut vs: Vec<u32> = (0..vertices).collect();
            vs.shuffle(rng);
            let mut s: Vec<u32> = vs[..size as usize].to_vec();
            s.sort_unstable();
            gens.push(s);
        }
        let k = SimplicialComplex::validate(&gens).expect("generators are simplices");
        if k.len() <= max {
            return Arc::new(k);
        }
    }
}

/// Face closure of a random set of simplices of `k`, optionally inside `within`.
pub fn random_subcomplex(rng: &mut TestRng, k: &SimplicialComplex, within: Option<&Subcomplex>) -> Subcomplex {
    let gens: Vec<Vec<u32>> = (0..k.len())
        .filter(|&id| within.is_none_or(|w| w.contains(id)))
        .filter(|_| rng.gen_bool(0.3))
        .map(|id| k.simplex(id).to_vec())
        .collect();
    k.subcomplex(&gens).expect("simplices of k")
}

fn union(a: &Subcomplex, b: &Subcomplex, k: &SimplicialComplex) -> Subcomplex {
    let ids = a.ids().union(b.ids()).copied().collect();
    k.subcomplex_from_ids(ids).expect("unions of subcomplexes are subcomplexes")
}

/// `F(a) = ⋃_{b ≤ a} S(b)` for random seeds `S(b) ⊆ bound(b)`, with `F(⊤) = K`.
fn monotone_hull(
    p: &Arc<FiniteMetricLattice>,
    k: &Arc<SimplicialComplex>,
    seeds: Vec<Subcomplex>,
) -> Filtration {
    let stages = (0..p.len())
        .map(|a| {
            if a == p.top() {
                return k.full();
            }
            (0..p.len()).filter(|&b| p.leq(b, a)).fold(Subcomplex::empty(), |acc, b| union(&acc, &seeds[b], k))
        })
        .collect();
    Filtration::new(p.clone(), k.clone(), stages).expect("hulls are monotone")
}

pub fn random_filtration(rng: &mut TestRng, p: &Arc<FiniteMetricLattice>, k: &Arc<SimplicialComplex>) -> Filtration {
    let seeds = (0..p.len()).map(|_| random_subcomplex(rng, k, None)).collect();
    monotone_hull(p, k, seeds)
}

/// A non-negative diagram over the given chain, with a few bars of mass ≤ 3.
pub fn random_diagram(rng: &mut TestRng, coords: &[f64]) -> Diagram {
    let e = RealEmbedding::chain(coords).expect("increasing coordinates");
    let index = interval_lattice(e.lattice());
    let mut values = vec![0i64; index.len()];
    for _ in 0..rng.gen_range(0..=3) {
        let k = rng.gen_range(0..index.len());
        values[k] = rng.gen_range(1..=3);
    }
    let f = IntervalFunction::new(index, values).expect("sized to the index");
    Diagram::new(f, e).expect("non-negative")
}

/// Rank over GF(p) by plain Gaussian elimination on `i64` rows.
pub fn naive_rank(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let m = |x: i64| x.rem_euclid(p);
    let inv = |x: i64| (1..p).find(|&y| m(x * y) == 1).expect("non-zero residues are invertible");
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| m(rows[r][c]) != 0) else { continue };
        rows.swap(rank, r);
        let s = inv(m(rows[rank][c]));
        for x in rows[rank].iter_mut() {
            *x = m(*x * s);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && m(row[c]) != 0 {
                let f = m(row[c]);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = m(*x - f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `(dim Z_i, dim B_i)` of the simplices `sub` (vertex lists) computed from
/// scratch: boundary matrix rows indexed by faces, alternating signs.
pub fn naive_cycle_boundary_ranks(sub: &[Vec<u32>], i: usize, p: i64) -> (usize, usize) {
    let of_dim = |d: usize| -> Vec<&Vec<u32>> { sub.iter().filter(|s| s.len() == d + 1).collect() };
    let matrix = |d: usize| -> Vec<Vec<i64>> {
        // ∂_d : C_d → C_{d-1}; one row per (d-1)-face, one column per d-simplex
        let (faces, simplices) = (of_dim(d - 1), of_dim(d));
        faces
            .iter()
            .map(|f| {
                simplices
                    .iter()
                    .map(|s| {
                        (0..s.len())
                            .find(|&j| {
                                let mut t = (*s).clone();
                                t.remove(j);
                                t == **f
                            })
                            .map_or(0, |j| if j % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect()
    };
    let n_i = of_dim(i).len();
    let rank_d = if i == 0 || n_i == 0 { 0 } else { naive_rank(matrix(i), p) };
    let z = n_i - rank_d;
    let b = if of_dim(i + 1).is_empty() { 0 } else { naive_rank(matrix(i + 1), p) };
    (z, b)
}

/// A one-parameter filtration `1 < … < n < inf` of a random complex: each
/// simplex enters at a random stage no earlier than its faces.
pub fn random_classical(rng: &mut TestRng, max_simplices: usize) -> Filtration {
    let k = random_complex(rng, 5, max_simplices);
    let n = rng.gen_range(1..=5);
    let values: Vec<f64> = (0..n).map(|a| f64::from(a as u32) + rng.gen_range(0.0..0.9)).collect();
    let p = lattice_pd::classical::classical_lattice(&values).expect("increasing values").lattice().clone();
    // simplices are ordered by dimension, so faces are decided first
    let mut entry = vec![0usize; k.len()];
    for id in 0..k.len() {
        let s = k.simplex(id);
        let faces = (0..s.len()).filter(|_| s.len() > 1).map(|j| {
            let mut f = s.to_vec();
            f.remove(j);
            entry[k.id_of(&f).expect("faces are in the complex")]
        });
        entry[id] = faces.fold(rng.gen_range(0..=n), usize::max);
    }
    let stages = (0..=n)
        .map(|a| {
            let ids = (0..k.len()).filter(|&id| entry[id] <= a || a == n).collect();
            k.subcomplex_from_ids(ids).expect("entry times respect faces")
        })
        .collect();
    Filtration::new(p, k, stages).expect("classical stages are monotone")
}
