//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are sparse maps from column index to nonzero coefficient. The
//! central tool is [`Reducer`], an incremental semi-echelon form whose rows
//! can carry tag vectors recording how they were built from the inputs.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Adds `c * v` into `acc`, dropping cancelled entries.
pub fn axpy(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_entry(acc, *k, x * c);
    }
}

pub fn add_entry(acc: &mut SparseVec, k: usize, x: Scalar) {
    if x.is_zero() {
        return;
    }
    match acc.entry(k) {
        Entry::Vacant(e) => {
            e.insert(x);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scaled(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

pub fn unit(k: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(k, Scalar::one());
    v
}

pub fn dot(a: &SparseVec, b: &SparseVec) -> Scalar {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut s = Scalar::zero();
    for (k, x) in small {
        if let Some(y) = large.get(k) {
            s += x * y;
        }
    }
    s
}

/// A row-major sparse matrix with a fixed column count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Result<Self, LinalgError> {
        for r in &rows {
            if let Some((&k, _)) = r.iter().next_back() {
                if k >= ncols {
                    return Err(LinalgError::DimensionMismatch {
                        expected: ncols,
                        found: k + 1,
                    });
                }
            }
        }
        Ok(SparseMatrix { ncols, rows })
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            ncols: n,
            rows: (0..n).map(unit).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, r) in self.rows.iter().enumerate() {
            add_entry(&mut out, i, dot(r, x));
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![SparseVec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                rows[*j].insert(i, x.clone());
            }
        }
        SparseMatrix {
            ncols: self.rows.len(),
            rows,
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

/// Incremental semi-echelon basis.
///
/// Every stored row has pivot equal to its smallest column, normalized to
/// one. Reduction walks columns in increasing order, so it always terminates.
#[derive(Clone, Debug, Default)]
pub struct Reducer {
    rows: BTreeMap<usize, Row>,
}

/// Result of inserting a vector into a [`Reducer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The vector was independent; it created a row with this pivot.
    Pivot(usize),
    /// The vector was dependent; this tag combination reduces to zero.
    Dependent(SparseVec),
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` in place, applying the same operations to `tag`.
    pub fn reduce_tagged(&self, v: &mut SparseVec, tag: &mut SparseVec) {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, x)| (*k, x.clone()));
            let Some((k, x)) = next else { break };
            let row = &self.rows[&k];
            let c = -x;
            axpy(v, &c, &row.vec);
            axpy(tag, &c, &row.tag);
            cursor = k + 1;
        }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let mut tag = SparseVec::new();
        self.reduce_untagged(&mut out, &mut tag);
        out
    }

    fn reduce_untagged(&self, v: &mut SparseVec, _scratch: &mut SparseVec) {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, x)| (*k, x.clone()));
            let Some((k, x)) = next else { break };
            axpy(v, &(-x), &self.rows[&k].vec);
            cursor = k + 1;
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v` with the given tag.
    pub fn insert_tagged(&mut self, v: &SparseVec, tag: SparseVec) -> Insert {
        let mut v = v.clone();
        let mut tag = tag;
        self.reduce_tagged(&mut v, &mut tag);
        match v.iter().next().map(|(k, x)| (*k, x.clone())) {
            None => Insert::Dependent(tag),
            Some((k, x)) => {
                let inv = Scalar::one() / x;
                let vec = scaled(&v, &inv);
                let tag = scaled(&tag, &inv);
                self.rows.insert(k, Row { vec, tag });
                Insert::Pivot(k)
            }
        }
    }

    /// Inserts `v` without tag bookkeeping; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut v = v.clone();
        let mut scratch = SparseVec::new();
        self.reduce_untagged(&mut v, &mut scratch);
        match v.iter().next().map(|(k, x)| (*k, x.clone())) {
            None => false,
            Some((k, x)) => {
                let inv = Scalar::one() / x;
                let vec = scaled(&v, &inv);
                self.rows.insert(
                    k,
                    Row {
                        vec,
                        tag: SparseVec::new(),
                    },
                );
                true
            }
        }
    }

    /// Expresses `v` in terms of inserted tags, if it lies in the span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut rem = v.clone();
        let mut tag = SparseVec::new();
        self.reduce_tagged(&mut rem, &mut tag);
        if rem.is_empty() {
            Some(scaled(&tag, &-Scalar::one()))
        } else {
            None
        }
    }

    /// Rows in reduced row echelon form, keyed by pivot.
    pub fn rref(&self) -> BTreeMap<usize, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut v = row.vec.clone();
            let later: Vec<(usize, Scalar)> = v
                .range(p + 1..)
                .filter(|(k, _)| out.contains_key(k))
                .map(|(k, x)| (*k, x.clone()))
                .collect();
            for (k, x) in later {
                axpy(&mut v, &(-x), &out[&k]);
            }
            out.insert(p, v);
        }
        out
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut r = Reducer::new();
    for row in &m.rows {
        r.insert(row);
    }
    r.rank()
}

/// Basis of `{x : M x = 0}`, one vector per free column.
pub fn nullspace(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut r = Reducer::new();
    for row in &m.rows {
        r.insert(row);
    }
    let rref = r.rref();
    let mut basis = Vec::new();
    for f in 0..m.ncols {
        if rref.contains_key(&f) {
            continue;
        }
        let mut x = unit(f);
        for (&p, row) in &rref {
            if let Some(c) = row.get(&f) {
                x.insert(p, -c.clone());
            }
        }
        basis.push(x);
    }
    basis
}

/// One solution of `M x = b` with free variables set to zero.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Result<Option<SparseVec>, LinalgError> {
    if let Some((&k, _)) = b.iter().next_back() {
        if k >= m.nrows() {
            return Err(LinalgError::DimensionMismatch {
                expected: m.nrows(),
                found: k + 1,
            });
        }
    }
    let aug = m.ncols;
    let mut r = Reducer::new();
    for (i, row) in m.rows.iter().enumerate() {
        let mut v = row.clone();
        if let Some(c) = b.get(&i) {
            v.insert(aug, c.clone());
        }
        r.insert(&v);
    }
    let rref = r.rref();
    if rref.contains_key(&aug) {
        return Ok(None);
    }
    let mut x = SparseVec::new();
    for (&p, row) in &rref {
        if let Some(c) = row.get(&aug) {
            x.insert(p, c.clone());
        }
    }
    Ok(Some(x))
}

/// Representatives of a basis of `span(span) / span(sub)`, drawn from the rows of `span`.
pub fn quotient_basis(span: &SparseMatrix, sub: &SparseMatrix) -> Result<Vec<SparseVec>, LinalgError> {
    if span.ncols != sub.ncols {
        return Err(LinalgError::DimensionMismatch {
            expected: span.ncols,
            found: sub.ncols,
        });
    }
    let mut r = Reducer::new();
    for row in &sub.rows {
        r.insert(row);
    }
    let mut reps = Vec::new();
    for row in &span.rows {
        if r.insert(row) {
            reps.push(row.clone());
        }
    }
    Ok(reps)
}

/// Kernel of the map sending the `i`-th basis vector to `images[i]`.
pub fn kernel_of_map(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut r = Reducer::new();
    let mut kernel = Vec::new();
    for (i, v) in images.iter().enumerate() {
        if let Insert::Dependent(tag) = r.insert_tagged(v, unit(i)) {
            kernel.push(tag);
        }
    }
    kernel
}

/// Coefficients `c` with `sum c_i images[i] = target`, if any.
pub fn solve_combination(images: &[SparseVec], target: &SparseVec) -> Option<SparseVec> {
    let mut r = Reducer::new();
    for (i, v) in images.iter().enumerate() {
        r.insert_tagged(v, unit(i));
    }
    r.express(target)
}

/// Assigns dense indices to an ordered set of keys.
#[derive(Clone, Debug)]
pub struct Indexer<K: Ord + Clone> {
    keys: Vec<K>,
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Indexer<K> {
    fn default() -> Self {
        Indexer {
            keys: Vec::new(),
            index: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Indexer<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_keys(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ix = Self::new();
        for k in keys {
            ix.intern(&k);
        }
        ix
    }

    pub fn intern(&mut self, k: &K) -> usize {
        if let Some(&i) = self.index.get(k) {
            return i;
        }
        let i = self.keys.len();
        self.keys.push(k.clone());
        self.index.insert(k.clone(), i);
        i
    }

    pub fn get(&self, k: &K) -> Option<usize> {
        self.index.get(k).copied()
    }

    pub fn key(&self, i: usize) -> &K {
        &self.keys[i]
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn vec_of(xs: &[i64]) -> SparseVec {
        let mut v = SparseVec::new();
        for (i, &x) in xs.iter().enumerate() {
            add_entry(&mut v, i, int(x));
        }
        v
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(nullspace(&SparseMatrix::identity(4)).is_empty());
    }

    #[test]
    fn zero_system_solves_to_zero() {
        let m = SparseMatrix::from_rows(2, vec![SparseVec::new()]).unwrap();
        assert_eq!(solve(&m, &SparseVec::new()).unwrap(), Some(SparseVec::new()));
    }

    #[test]
    fn quotient_of_plane_by_diagonal() {
        let span = SparseMatrix::identity(2);
        let sub = SparseMatrix::from_rows(2, vec![vec_of(&[1, 1])]).unwrap();
        assert_eq!(quotient_basis(&span, &sub).unwrap().len(), 1);
        let bad = SparseMatrix::identity(3);
        assert!(quotient_basis(&span, &bad).is_err());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = SparseMatrix::from_rows(2, vec![vec_of(&[1, 1]), vec_of(&[2, 2])]).unwrap();
        assert_eq!(solve(&m, &vec_of(&[1, 3])).unwrap(), None);
        let x = solve(&m, &vec_of(&[1, 2])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec_of(&[1, 2]));
    }

    #[test]
    fn kernel_of_map_finds_relation() {
        let images = vec![vec_of(&[1, 0]), vec_of(&[0, 1]), vec_of(&[1, 1])];
        let k = kernel_of_map(&images);
        assert_eq!(k.len(), 1);
        let mut total = SparseVec::new();
        for (i, c) in &k[0] {
            axpy(&mut total, c, &images[*i]);
        }
        assert!(total.is_empty());
        let c = solve_combination(&images[..2], &vec_of(&[3, -2])).unwrap();
        assert_eq!(c, vec_of(&[3, -2]));
    }
}
