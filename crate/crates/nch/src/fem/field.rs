//! Nodal fields: one real degree of freedom per mesh node.

/// Coefficient vector of a P1 finite-element function, indexed like the mesh
/// nodes (`iy * n + ix`).
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    values: Vec<f64>,
}

impl NodalField {
    /// Wraps a coefficient vector.
    pub fn new(values: Vec<f64>) -> Self {
        NodalField { values }
    }

    /// Constant field of the given length.
    pub fn constant(len: usize, value: f64) -> Self {
        NodalField {
            values: vec![value; len],
        }
    }

    /// Samples `f(x, y)` at every node of `mesh`.
    pub fn from_fn(mesh: &crate::mesh::Mesh, f: impl Fn(f64, f64) -> f64) -> Self {
        NodalField {
            values: mesh.nodes().iter().map(|p| f(p[0], p[1])).collect(),
        }
    }

    /// Number of nodal values.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True if the field has no values.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Nodal values as a slice.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable nodal values.
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Consumes the field, returning the raw coefficient vector.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Smallest nodal value (`+inf` for an empty field).
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest nodal value (`-inf` for an empty field).
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl std::ops::Index<usize> for NodalField {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for NodalField {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.values[i]
    }
}
