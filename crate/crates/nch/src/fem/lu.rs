//! Sparse direct solver: LU with partial pivoting, backed by `faer`.
//!
//! The factorization is fully sequential and its pivot order depends only on
//! the matrix, so repeated runs produce bit-identical solutions.

use faer::prelude::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::linalg::LuError;
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};

use crate::error::{Error, Result};
use crate::fem::sparse::SparseMatrix;

/// Opaque handle to an LU factorization of a square sparse matrix.
pub struct LuFactorization {
    lu: Lu<usize, f64>,
    dim: usize,
}

impl std::fmt::Debug for LuFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LuFactorization")
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

/// Factorizes a square sparse matrix with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] (carrying the pivot row) on
/// structurally or numerically singular input.
pub fn lu_factorize(matrix: &SparseMatrix) -> Result<LuFactorization> {
    let symbolic = SymbolicCache::new(matrix)?;
    symbolic.factorize(matrix)
}

/// Solves `A x = b` using a previously computed factorization.
pub fn lu_solve(factorization: &LuFactorization, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != factorization.dim {
        return Err(Error::SizeMismatch {
            what: "LU right-hand side",
            expected: factorization.dim,
            found: rhs.len(),
        });
    }
    let mut x = rhs.to_vec();
    let view = faer::MatMut::from_column_major_slice_mut(&mut x, rhs.len(), 1);
    factorization.lu.solve_in_place(view);
    if let Some(row) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSolution { row });
    }
    Ok(x)
}

/// Symbolic analysis of a sparsity pattern, reusable across repeated
/// factorizations with the same pattern (one Newton iteration each).
pub struct SymbolicCache {
    symbolic: SymbolicLu<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    dim: usize,
}

impl SymbolicCache {
    /// Runs the symbolic analysis for a square matrix.
    pub fn new(matrix: &SparseMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::SizeMismatch {
                what: "LU needs a square matrix",
                expected: dim,
                found: matrix.ncols(),
            });
        }
        // A structurally empty row can never receive a pivot; report it
        // directly instead of relying on the backend's column scan.
        for r in 0..dim {
            if matrix.row_ptr()[r + 1] == matrix.row_ptr()[r] {
                return Err(Error::SingularMatrix { row: r });
            }
        }
        let (col_ptr, row_idx, _) = matrix.csc_arrays();
        let pattern = SymbolicSparseColMatRef::new_checked(dim, dim, &col_ptr, None, &row_idx);
        let symbolic = SymbolicLu::try_new(pattern).map_err(|_| Error::SingularMatrix { row: 0 })?;
        Ok(SymbolicCache {
            symbolic,
            col_ptr,
            row_idx,
            dim,
        })
    }

    /// Numeric factorization of a matrix with the analyzed pattern.
    pub fn factorize(&self, matrix: &SparseMatrix) -> Result<LuFactorization> {
        if matrix.nrows() != self.dim || matrix.ncols() != self.dim {
            return Err(Error::SizeMismatch {
                what: "matrix for cached symbolic LU",
                expected: self.dim,
                found: matrix.nrows(),
            });
        }
        let (_, _, values) = matrix.csc_arrays();
        let pattern =
            SymbolicSparseColMatRef::new_checked(self.dim, self.dim, &self.col_ptr, None, &self.row_idx);
        let csc = SparseColMatRef::new(pattern, &values);
        let lu = Lu::try_new_with_symbolic(self.symbolic.clone(), csc).map_err(|e| match e {
            LuError::SymbolicSingular { index } => Error::SingularMatrix { row: index },
            LuError::Generic(_) => Error::SingularMatrix { row: 0 },
        })?;
        Ok(LuFactorization { lu, dim: self.dim })
    }
}
