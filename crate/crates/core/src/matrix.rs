//! Sparse integer matrices with arbitrary-precision entries.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Integer = BigInt;

/// A sorted sparse vector: `(index, value)` pairs, no stored zeros.
pub type SparseVec = Vec<(usize, Integer)>;

/// `a + c·b` for sparse vectors.
pub fn axpy(a: &[(usize, Integer)], c: &Integer, b: &[(usize, Integer)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `x·a + y·b` for sparse vectors.
pub fn lincomb(x: &Integer, a: &[(usize, Integer)], y: &Integer, b: &[(usize, Integer)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let v;
        let idx;
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            idx = a[i].0;
            v = x * &a[i].1;
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            idx = b[j].0;
            v = y * &b[j].1;
            j += 1;
        } else {
            idx = a[i].0;
            v = x * &a[i].1 + y * &b[j].1;
            i += 1;
            j += 1;
        }
        if !v.is_zero() {
            out.push((idx, v));
        }
    }
    out
}

pub fn sparse_get(v: &[(usize, Integer)], idx: usize) -> Option<&Integer> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|p| &v[p].1)
}

/// Row-major sparse integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        IntegerMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, Integer::one())]).collect() }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.iter().all(|(c, v)| *c < cols && !v.is_zero())));
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        IntegerMatrix { rows: data.len(), cols, data }
    }

    /// From `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets<T: Into<Integer>>(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut data: Vec<Vec<(usize, Integer)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of bounds {rows}x{cols}");
            data[r].push((c, v.into()));
        }
        for row in data.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Integer)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        IntegerMatrix { rows, cols, data }
    }

    pub fn from_dense<T: Into<Integer> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone().into())));
        IntegerMatrix::from_triplets::<Integer>(rows.len(), cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[(usize, Integer)] {
        &self.data[r]
    }

    pub fn row_data(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Integer {
        sparse_get(&self.data[r], c).cloned().unwrap_or_else(Integer::zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Integer)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        IntegerMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn neg(&self) -> IntegerMatrix {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(|(c, v)| (*c, -v)).collect()).collect(),
        }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseVec = Vec::new();
                for (k, v) in row {
                    acc = axpy(&acc, v, &other.data[*k]);
                }
                acc
            })
            .collect();
        IntegerMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.shape(), other.shape());
        let one = Integer::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &one, b)).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, x: &[Integer]) -> Vec<Integer> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().fold(Integer::zero(), |acc, (j, v)| acc + v * &x[*j]))
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &IntegerMatrix) -> IntegerMatrix {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for row in &self.data {
            for orow in &other.data {
                let mut out = Vec::with_capacity(row.len() * orow.len());
                for (j, v) in row {
                    for (l, w) in orow {
                        out.push((j * other.cols + l, v * w));
                    }
                }
                data.push(out);
            }
        }
        IntegerMatrix { rows: self.rows * other.rows, cols: self.cols * other.cols, data }
    }

    /// Block matrix from a grid of optional blocks; `None` is a zero block.
    /// Block shapes must be consistent along rows and columns.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<&IntegerMatrix>>]) -> IntegerMatrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                if let Some(m) = b {
                    assert_eq!(m.shape(), (row_sizes[bi], col_sizes[bj]), "block ({bi}, {bj}) shape");
                    for (i, row) in m.data.iter().enumerate() {
                        data[r0 + i].extend(row.iter().map(|(j, v)| (c0 + j, v.clone())));
                    }
                }
                c0 += col_sizes[bj];
            }
            r0 += row_sizes[bi];
        }
        IntegerMatrix { rows, cols, data }
    }

    /// Columns `range` as a new matrix.
    pub fn column_slice(&self, start: usize, end: usize) -> IntegerMatrix {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().filter(|(c, _)| *c >= start && *c < end).map(|(c, v)| (c - start, v.clone())).collect())
            .collect();
        IntegerMatrix { rows: self.rows, cols: end - start, data }
    }

    pub fn row_slice(&self, start: usize, end: usize) -> IntegerMatrix {
        IntegerMatrix { rows: end - start, cols: self.cols, data: self.data[start..end].to_vec() }
    }

    pub fn column(&self, c: usize) -> Vec<Integer> {
        self.data.iter().map(|r| sparse_get(r, c).cloned().unwrap_or_else(Integer::zero)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Integer>> {
        let mut out = vec![vec![Integer::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn max_abs_entry(&self) -> Integer {
        self.triplets().map(|(_, _, v)| v.abs()).max().unwrap_or_else(Integer::zero)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} ({} nonzero)", self.rows, self.cols, self.nnz())?;
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                writeln!(f, "  [{}]", cells.join(" "))?;
            }
        }
        Ok(())
    }
}

pub fn dense_vec<T: Into<Integer> + Copy>(v: &[T]) -> Vec<Integer> {
    v.iter().map(|&x| x.into()).collect()
}
