//! Finite simplicial complexes and exact linear algebra over GF(p).
//!
//! Every subspace is expressed in the ambient chain space `C_i(K)` of the full
//! complex, so intersections of cycle and boundary spaces of different
//! subcomplexes are plain column-space computations.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A simplex as a strictly increasing vertex list.
pub type Simplex = Vec<u32>;

/// Coefficient field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Default for Field {
    fn default() -> Self {
        Field { p: 2 }
    }
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || (2..).take_while(|d: &u64| d * d <= p as u64).any(|d| (p as u64).is_multiple_of(d)) {
            return Err(Error::InvalidField(p));
        }
        Ok(Field { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let (mut base, mut exp, mut acc) = (a as u64, self.p as u64 - 2, 1u64);
        let m = self.p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }
}

/// A face-closed set of simplices with a canonical ordering: by dimension,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    by_dim: Vec<Vec<usize>>,
    position: Vec<usize>,
}

impl SimplicialComplex {
    /// Closes a list of simplices (maximal ones suffice) under faces.
    pub fn validate(raw: &[Vec<u32>]) -> Result<Self> {
        let mut all = BTreeSet::new();
        for s in raw {
            let simplex = normalize(s)?;
            for face in faces_of(&simplex) {
                all.insert(face);
            }
        }
        let mut simplices: Vec<Simplex> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let top = simplices.last().map_or(0, |s| s.len());
        let mut by_dim = vec![Vec::new(); top];
        let mut position = vec![0; simplices.len()];
        for (id, s) in simplices.iter().enumerate() {
            let d = s.len() - 1;
            position[id] = by_dim[d].len();
            by_dim[d].push(id);
        }
        Ok(Self { simplices, index, by_dim, position })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> &[u32] {
        &self.simplices[id]
    }

    pub fn id_of(&self, simplex: &[u32]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.simplices.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect()
    }

    /// Ids of the `i`-simplices, in canonical order.
    pub fn ids_of_dim(&self, i: usize) -> &[usize] {
        self.by_dim.get(i).map_or(&[], |v| v.as_slice())
    }

    /// Coordinate of a simplex inside `C_dim(K)`.
    pub fn position(&self, id: usize) -> usize {
        self.position[id]
    }

    /// Closure of the given simplices, which must all lie in this complex.
    pub fn subcomplex(&self, generators: &[Vec<u32>]) -> Result<Subcomplex> {
        let mut ids = BTreeSet::new();
        for g in generators {
            let simplex = normalize(g)?;
            for face in faces_of(&simplex) {
                let id = self.id_of(&face).ok_or_else(|| {
                    Error::NotASubcomplex(format!("simplex {face:?} is not in the complex"))
                })?;
                ids.insert(id);
            }
        }
        Ok(Subcomplex { ids })
    }

    /// Accepts an explicit id set, checking that it is closed under faces.
    pub fn subcomplex_from_ids(&self, ids: BTreeSet<usize>) -> Result<Subcomplex> {
        for &id in &ids {
            if id >= self.len() {
                return Err(Error::NotASubcomplex(format!("simplex id {id} out of range")));
            }
            let s = &self.simplices[id];
            if s.len() > 1 {
                for skip in 0..s.len() {
                    let face: Simplex = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
                    if !ids.contains(&self.index[&face]) {
                        return Err(Error::NotASubcomplex(format!(
                            "{s:?} is present but its face {face:?} is not"
                        )));
                    }
                }
            }
        }
        Ok(Subcomplex { ids })
    }

    pub fn full(&self) -> Subcomplex {
        Subcomplex { ids: (0..self.len()).collect() }
    }

    /// Maximal simplices of a subcomplex, canonically ordered.
    pub fn maximal(&self, sub: &Subcomplex) -> Vec<Simplex> {
        sub.ids
            .iter()
            .map(|&id| &self.simplices[id])
            .filter(|s| {
                !sub.ids.iter().any(|&o| {
                    let t = &self.simplices[o];
                    t.len() > s.len() && s.iter().all(|v| t.contains(v))
                })
            })
            .cloned()
            .collect()
    }
}

fn normalize(raw: &[u32]) -> Result<Simplex> {
    if raw.is_empty() {
        return Err(Error::EmptySimplex);
    }
    let mut s = raw.to_vec();
    s.sort_unstable();
    if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertexInSimplex(w[0]));
    }
    Ok(s)
}

/// All nonempty faces, including the simplex itself.
fn faces_of(s: &[u32]) -> Vec<Simplex> {
    let k = s.len();
    (1u64..1 << k)
        .map(|mask| (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| s[j]).collect())
        .collect()
}

/// A subcomplex of a fixed complex, stored as its set of simplex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcomplex {
    ids: BTreeSet<usize>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn ids(&self) -> &BTreeSet<usize> {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.contains(&id)
    }

    pub fn is_subset(&self, other: &Subcomplex) -> bool {
        self.ids.is_subset(&other.ids)
    }

    /// Copy with one simplex id removed (no closure check).
    pub fn without(&self, id: usize) -> Subcomplex {
        let mut ids = self.ids.clone();
        ids.remove(&id);
        Subcomplex { ids }
    }
}

/// Independent vectors spanning a subspace of `GF(p)^ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    ambient: usize,
    vectors: Vec<Vec<u32>>,
}

impl Basis {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn vectors(&self) -> &[Vec<u32>] {
        &self.vectors
    }

    /// Number of basis vectors, i.e. the dimension of the span.
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }
}

/// Boundary matrices of a complex over a fixed field.
#[derive(Debug, Clone)]
pub struct ChainContext {
    complex: Arc<SimplicialComplex>,
    field: Field,
    /// `boundary[i]` has one column per `i`-simplex, holding its boundary in
    /// `C_{i-1}` coordinates; `boundary[0]` is empty.
    boundary: Vec<Vec<Vec<u32>>>,
}

impl ChainContext {
    pub fn new(complex: Arc<SimplicialComplex>, field: Field) -> Self {
        let top = complex.by_dim.len();
        let mut boundary = vec![Vec::new(); top];
        for (i, columns) in boundary.iter_mut().enumerate().skip(1) {
            let rows = complex.ids_of_dim(i - 1).len();
            *columns = complex
                .ids_of_dim(i)
                .iter()
                .map(|&id| {
                    let s = complex.simplex(id);
                    let mut col = vec![0u32; rows];
                    for j in 0..s.len() {
                        let face: Simplex =
                            s.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect();
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        col[complex.position(complex.index[&face])] = field.reduce(sign);
                    }
                    col
                })
                .collect();
        }
        Self { complex, field, boundary }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Columns of `∂_i`, one per `i`-simplex.
    pub fn boundary_columns(&self, i: usize) -> &[Vec<u32>] {
        self.boundary.get(i).map_or(&[], |v| v.as_slice())
    }

    fn ambient(&self, i: usize) -> usize {
        self.complex.ids_of_dim(i).len()
    }

    fn check(&self, sub: &Subcomplex) -> Result<()> {
        match sub.ids.iter().next_back() {
            Some(&id) if id >= self.complex.len() => {
                Err(Error::NotASubcomplex(format!("simplex id {id} is not in the complex")))
            }
            _ => Ok(()),
        }
    }

    /// Basis of `Z_i(A) = ker ∂_i|C_i(A)`, in `C_i(K)` coordinates.
    pub fn cycle_basis(&self, sub: &Subcomplex, i: usize) -> Result<Basis> {
        self.check(sub)?;
        let ambient = self.ambient(i);
        let cols: Vec<usize> = self.complex.ids_of_dim(i).iter().copied().filter(|&id| sub.contains(id)).collect();
        let vectors = if i == 0 {
            cols.iter()
                .map(|&id| {
                    let mut v = vec![0; ambient];
                    v[self.complex.position(id)] = 1;
                    v
                })
                .collect()
        } else {
            let columns: Vec<&[u32]> =
                cols.iter().map(|&id| self.boundary[i][self.complex.position(id)].as_slice()).collect();
            null_space(&self.field, self.ambient(i - 1), &columns)
                .into_iter()
                .map(|coeffs| {
                    let mut v = vec![0; ambient];
                    for (k, &c) in coeffs.iter().enumerate() {
                        v[self.complex.position(cols[k])] = c;
                    }
                    v
                })
                .collect()
        };
        Ok(Basis { ambient, vectors })
    }

    /// Basis of `B_i(A) = im ∂_{i+1}|C_{i+1}(A)`, in `C_i(K)` coordinates.
    pub fn boundary_basis(&self, sub: &Subcomplex, i: usize) -> Result<Basis> {
        self.check(sub)?;
        let ambient = self.ambient(i);
        let columns: Vec<&[u32]> = self
            .complex
            .ids_of_dim(i + 1)
            .iter()
            .filter(|&&id| sub.contains(id))
            .map(|&id| self.boundary[i + 1][self.complex.position(id)].as_slice())
            .collect();
        let vectors = independent_columns(&self.field, ambient, &columns)
            .into_iter()
            .map(|k| columns[k].to_vec())
            .collect();
        Ok(Basis { ambient, vectors })
    }
}

/// `dim(U ∩ V) = rank U + rank V − rank [U|V]`.
pub fn dim_intersection(field: &Field, u: &Basis, v: &Basis) -> Result<usize> {
    if u.ambient != v.ambient {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {} differ",
            u.ambient, v.ambient
        )));
    }
    let joint: Vec<&[u32]> = u.vectors.iter().chain(&v.vectors).map(|c| c.as_slice()).collect();
    let ru = rank(field, u.ambient, &u.vectors.iter().map(|c| c.as_slice()).collect::<Vec<_>>());
    let rv = rank(field, v.ambient, &v.vectors.iter().map(|c| c.as_slice()).collect::<Vec<_>>());
    Ok(ru + rv - rank(field, u.ambient, &joint))
}

/// Rank of a set of column vectors of length `rows`.
pub fn rank(field: &Field, rows: usize, columns: &[&[u32]]) -> usize {
    independent_columns(field, rows, columns).len()
}

/// Row-reduces the `rows × columns.len()` matrix in place and returns the
/// pivot column of each pivot row.
fn row_reduce(field: &Field, m: &mut [Vec<u32>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, p);
        let inv = field.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot).skip(c) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_rows(rows: usize, columns: &[&[u32]]) -> Vec<Vec<u32>> {
    (0..rows).map(|r| columns.iter().map(|c| c[r]).collect()).collect()
}

/// Indices of a maximal independent subset of the columns (greedy, left to right).
fn independent_columns(field: &Field, rows: usize, columns: &[&[u32]]) -> Vec<usize> {
    if columns.is_empty() || rows == 0 {
        return Vec::new();
    }
    let mut m = to_rows(rows, columns);
    row_reduce(field, &mut m)
}

/// Basis of the null space of the matrix with the given columns.
fn null_space(field: &Field, rows: usize, columns: &[&[u32]]) -> Vec<Vec<u32>> {
    let n = columns.len();
    if n == 0 {
        return Vec::new();
    }
    let mut m = to_rows(rows, columns);
    let pivots = if rows == 0 { Vec::new() } else { row_reduce(field, &mut m) };
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.sub(0, m[r][free]);
        }
        basis.push(v);
    }
    basis
}
