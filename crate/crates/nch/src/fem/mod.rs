//! Finite-element plumbing: nodal fields, triangle quadrature, assembly of
//! vectors/matrices, and sparse direct linear algebra.

pub mod assembly;
pub mod field;
pub mod lu;
pub mod quadrature;
pub mod sparse;

pub use assembly::{
    assemble_matrix, assemble_vector, evaluate_p1, integrate, norms_of_difference,
    BilinearDensity, LinearDensity, QuadPointData,
};
pub use field::NodalField;
pub use lu::{lu_factorize, lu_solve, LuFactorization};
pub use quadrature::{reference_quadrature, QuadRule, DEFAULT_QUADRATURE_DEGREE};
pub use sparse::SparseMatrix;
