//! Crate-wide error type.

use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while meshing, assembling, solving or
/// running a simulation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Mesh construction needs at least two subdivisions per axis.
    #[error("mesh needs at least 2 subdivisions per axis, got {n}")]
    InvalidSubdivisions { n: usize },

    /// A nodal field or vector has the wrong length for the mesh/matrix.
    #[error("{what}: expected length {expected}, got {found}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// Nodal prolongation requires the fine mesh to halve the coarse spacing.
    #[error("prolongation requires fine n = 2 * coarse n, got coarse {coarse} and fine {fine}")]
    RefinementMismatch { coarse: usize, fine: usize },

    /// Quadrature rules are tabulated for polynomial degrees 1 through 6.
    #[error("no tabulated triangle quadrature rule of degree {degree} (supported: 1..=6)")]
    UnsupportedQuadratureDegree { degree: usize },

    /// A physical parameter that must be positive is not.
    #[error("parameter {name} must be positive, got {value}")]
    NonpositiveParameter { name: &'static str, value: f64 },

    /// The transport matrix [[K, -C], [-C, M]] must be positive definite.
    #[error(
        "transport matrix is not positive definite: K={conductivity}, M={mobility}, \
         C={cross_coupling} gives K*M - C^2 = {determinant}"
    )]
    IndefiniteTransport {
        conductivity: f64,
        mobility: f64,
        cross_coupling: f64,
        determinant: f64,
    },

    /// The temperature iterate left the admissible range at a quadrature point.
    #[error(
        "nonpositive temperature {theta} at quadrature point {quad_point} of element {element}"
    )]
    NonpositiveTemperature {
        element: usize,
        quad_point: usize,
        theta: f64,
    },

    /// A state handed to the solver already has a nonpositive nodal temperature.
    #[error("nonpositive temperature {theta} at mesh node {node}")]
    NonpositiveNodalTemperature { node: usize, theta: f64 },

    /// Sparse LU hit a structurally or numerically singular pivot.
    #[error("sparse LU factorization failed: singular or near-singular pivot at row {row}")]
    SingularMatrix { row: usize },

    /// The linear solve produced NaN or infinity.
    #[error("linear solve produced a non-finite value at row {row}")]
    NonFiniteSolution { row: usize },

    /// Newton did not reach the residual tolerance within the iteration cap.
    #[error(
        "Newton did not converge within {iterations} iterations \
         (last residual inf-norm {residual:.3e})"
    )]
    NewtonDiverged { iterations: usize, residual: f64 },

    /// Step halving could not restore temperature positivity.
    #[error(
        "Newton line search exhausted {halvings} halvings without restoring \
         positive temperature"
    )]
    LineSearchFloor { halvings: usize },

    /// A time step failed; wraps the underlying solver error.
    #[error("time step {step} failed: {source}")]
    TimeStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    /// A convergence-study level failed; wraps the underlying run error.
    #[error("refinement level {level} failed: {source}")]
    RefinementLevel {
        level: u32,
        #[source]
        source: Box<Error>,
    },

    /// Configuration file could not be parsed or contains invalid values.
    #[error("invalid configuration: {message}")]
    Config { message: String },

    /// File I/O failure with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Shorthand for configuration errors.
    pub fn config(message: impl Into<String>) -> Self {
        Error::Config {
            message: message.into(),
        }
    }

    /// Stable machine-readable error category (used by the CLI).
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSubdivisions { .. } => "invalid_subdivisions",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::RefinementMismatch { .. } => "refinement_mismatch",
            Error::UnsupportedQuadratureDegree { .. } => "unsupported_quadrature_degree",
            Error::NonpositiveParameter { .. } => "nonpositive_parameter",
            Error::IndefiniteTransport { .. } => "indefinite_transport",
            Error::NonpositiveTemperature { .. } => "nonpositive_temperature",
            Error::NonpositiveNodalTemperature { .. } => "nonpositive_nodal_temperature",
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::NonFiniteSolution { .. } => "non_finite_solution",
            Error::NewtonDiverged { .. } => "newton_diverged",
            Error::LineSearchFloor { .. } => "line_search_floor",
            Error::TimeStep { .. } => "time_step",
            Error::RefinementLevel { .. } => "refinement_level",
            Error::Config { .. } => "config",
            Error::Io { .. } => "io",
        }
    }
}
