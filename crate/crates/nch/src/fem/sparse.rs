//! Compressed sparse row matrices with deterministic assembly.

use crate::error::{Error, Result};

/// Real sparse matrix in compressed sparse row (CSR) layout with column
/// indices sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from (row, col, value) triplets; duplicates are summed
    /// in their original order, so assembly stays deterministic.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::SizeMismatch {
                    what: "triplet index out of bounds",
                    expected: nrows * ncols,
                    found: r.max(c),
                });
            }
        }
        // Stable sort keeps equal (row, col) entries in input order, so
        // duplicates are summed deterministically.
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].0, triplets[k].1));

        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for &k in &order {
            let (r, c, v) = triplets[k];
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds a matrix from raw CSR arrays; columns must be sorted and unique
    /// within each row.
    pub fn from_parts(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let ok = row_ptr.len() == nrows + 1
            && row_ptr[0] == 0
            && *row_ptr.last().unwrap() == col_idx.len()
            && col_idx.len() == values.len()
            && row_ptr.windows(2).all(|w| w[0] <= w[1]);
        if !ok {
            return Err(Error::SizeMismatch {
                what: "inconsistent CSR arrays",
                expected: nrows + 1,
                found: row_ptr.len(),
            });
        }
        for r in 0..nrows {
            let cols = &col_idx[row_ptr[r]..row_ptr[r + 1]];
            if !cols.windows(2).all(|w| w[0] < w[1]) || cols.iter().any(|&c| c >= ncols) {
                return Err(Error::SizeMismatch {
                    what: "CSR columns must be sorted, unique and in range",
                    expected: ncols,
                    found: r,
                });
            }
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row pointer array (length `nrows + 1`).
    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    /// Column indices, sorted within each row.
    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    /// Stored values in row-major order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable access to the stored values (pattern is fixed).
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Entry `(i, j)`, zero if not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let cols = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(k) => self.values[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    /// Position of entry `(i, j)` in the value array, if stored.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let cols = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        cols.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    /// Matrix-vector product `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(Error::SizeMismatch {
                what: "matvec operand",
                expected: self.ncols,
                found: x.len(),
            });
        }
        let mut y = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
        Ok(y)
    }

    /// Maximum absolute difference to another matrix (entries compared over
    /// the union of both patterns).
    pub fn max_abs_diff(&self, other: &SparseMatrix) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                d = d.max((self.values[k] - other.get(i, self.col_idx[k])).abs());
            }
        }
        for i in 0..other.nrows {
            for k in other.row_ptr[i]..other.row_ptr[i + 1] {
                d = d.max((other.values[k] - self.get(i, other.col_idx[k])).abs());
            }
        }
        d
    }

    /// Converts to compressed sparse column arrays `(col_ptr, row_idx,
    /// values)` for column-oriented backends.
    pub(crate) fn csc_arrays(&self) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
        let mut col_ptr = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            col_ptr[c + 1] += 1;
        }
        for c in 0..self.ncols {
            col_ptr[c + 1] += col_ptr[c];
        }
        let mut next = col_ptr.clone();
        let mut row_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let dst = next[self.col_idx[k]];
                row_idx[dst] = r;
                values[dst] = self.values[k];
                next[self.col_idx[k]] += 1;
            }
        }
        (col_ptr, row_idx, values)
    }
}
