//! Exact sparse linear algebra over a field.
//!
//! Elimination is classical Gauss-Jordan: pivot on the first nonzero entry in
//! column order, normalize the pivot row, clear the column everywhere else.
//! Only nonzero rows are ever densified into the working set, so tall and
//! very sparse matrices (the derivation coordinate matrices have hundreds of
//! thousands of rows but a few hundred nonzero ones) are cheap.

use std::collections::BTreeMap;

use crate::scalar::{Rational, Scalar};

/// Sparse vector; absent entries are zero, stored entries are nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    len: usize,
    entries: BTreeMap<usize, S>,
}

/// Sparse matrix stored row by row; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, S>>,
}

pub type QVector = Vector<Rational>;
pub type QMatrix = Matrix<Rational>;

impl<S: Scalar> Vector<S> {
    pub fn zeros(len: usize) -> Self {
        Self { len, entries: BTreeMap::new() }
    }

    pub fn from_dense(values: Vec<S>) -> Self {
        let len = values.len();
        let entries = values.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        Self { len, entries }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, S::one());
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> S {
        self.entries.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, i: usize, value: S) {
        assert!(i < self.len, "index {i} out of bounds for vector of length {}", self.len);
        if value.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, value);
        }
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn to_dense(&self) -> Vec<S> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn scaled(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zeros(self.len);
        }
        Self {
            len: self.len,
            entries: self.entries.iter().map(|(i, v)| (*i, v.clone() * c.clone())).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        assert_eq!(self.len, other.len);
        for (i, v) in &other.entries {
            axpy_entry(&mut self.entries, *i, v.clone() * c.clone());
        }
    }
}

fn axpy_entry<S: Scalar>(row: &mut BTreeMap<usize, S>, key: usize, delta: S) {
    if delta.is_zero() {
        return;
    }
    match row.get_mut(&key) {
        Some(x) => {
            *x = x.clone() + delta;
            if x.is_zero() {
                row.remove(&key);
            }
        }
        None => {
            row.insert(key, delta);
        }
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vector<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.data[r].get(&c).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, value: S) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        if value.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, value);
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    /// Stack `other` under `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn mul_vector(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, v.len());
        let mut out = Vector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = S::zero();
            for (c, x) in row {
                if let Some(y) = v.entries.get(c) {
                    acc = acc + x.clone() * y.clone();
                }
            }
            out.set(r, acc);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = BTreeMap::new();
            for (k, x) in row {
                for (c, y) in &other.data[*k] {
                    axpy_entry(&mut acc, *c, x.clone() * y.clone());
                }
            }
            out.data[r] = acc;
        }
        out
    }

    /// Reduced row echelon form and the strictly increasing pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut work: Vec<BTreeMap<usize, S>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut pivots = Vec::new();
        let mut done = 0usize;
        for col in 0..self.cols {
            if done == work.len() {
                break;
            }
            let Some(p) = (done..work.len()).find(|&i| work[i].contains_key(&col)) else {
                continue;
            };
            work.swap(done, p);
            let inv = S::one() / work[done][&col].clone();
            for v in work[done].values_mut() {
                *v = v.clone() * inv.clone();
            }
            let pivot_row = work[done].clone();
            for (i, row) in work.iter_mut().enumerate() {
                if i == done {
                    continue;
                }
                let Some(factor) = row.get(&col).cloned() else { continue };
                for (c, v) in &pivot_row {
                    axpy_entry(row, *c, -(factor.clone() * v.clone()));
                }
            }
            pivots.push(col);
            done += 1;
        }
        work.truncate(done);
        work.resize(self.rows, BTreeMap::new());
        (Self { rows: self.rows, cols: self.cols, data: work }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical nullspace basis: one vector per free column, with that column set
    /// to 1 and the other free columns set to 0.
    pub fn kernel_basis(&self) -> Vec<Vector<S>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Vector::unit(self.cols, free);
                for (i, &p) in pivots.iter().enumerate() {
                    let x = r.get(i, free);
                    if !x.is_zero() {
                        v.set(p, -x);
                    }
                }
                v
            })
            .collect()
    }

    /// Row `r` as a sparse vector.
    pub fn row(&self, r: usize) -> Vector<S> {
        Vector { len: self.cols, entries: self.data[r].clone() }
    }
}
