//! Uniform periodic triangulation of the unit square.
//!
//! The unit square `[0,1]^2` with opposite sides identified (the 2-torus) is
//! split into `n x n` cells of side `1/n`, and every cell is cut along its
//! lower-left to upper-right diagonal.  Nodes, cells and triangles are indexed
//! row-major with the x index running fastest, so the mesh layout is fully
//! deterministic and uniform refinement `n -> 2n` produces a nested mesh.

use crate::error::{Error, Result};
use crate::fem::NodalField;

/// Geometry bundle for a single triangle: global node ids, unwrapped vertex
/// coordinates (periodic images shifted by +1 across the seam), constant P1
/// basis gradients, and the triangle area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub nodes: [usize; 3],
    pub coords: [[f64; 2]; 3],
    pub grads: [[f64; 2]; 3],
    pub area: f64,
}

/// Triangulation of the periodic unit square with `n^2` nodes and `2 n^2`
/// triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    n: usize,
    nodes: Vec<[f64; 2]>,
    elements: Vec<ElementGeometry>,
}

impl Mesh {
    /// Subdivisions per axis.
    pub fn subdivisions(&self) -> usize {
        self.n
    }

    /// Number of mesh nodes (`n^2`; periodic images are identified).
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of triangles (`2 n^2`).
    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Mesh size: the longest edge, `sqrt(2)/n` (the cell diagonal).
    pub fn h(&self) -> f64 {
        std::f64::consts::SQRT_2 / self.n as f64
    }

    /// Coordinates of node `i` in `[0,1)^2`.
    pub fn node(&self, i: usize) -> [f64; 2] {
        self.nodes[i]
    }

    /// All node coordinates, indexed `iy * n + ix`.
    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    /// Geometry of triangle `e`.
    pub fn element_geometry(&self, e: usize) -> &ElementGeometry {
        &self.elements[e]
    }

    /// All element geometries in index order.
    pub fn elements(&self) -> &[ElementGeometry] {
        &self.elements
    }
}

/// Builds the uniform diagonal-split triangulation of the periodic unit
/// square with `n` subdivisions per axis (`n >= 2`).
///
/// Cell `(cx, cy)` spans `[cx/n, (cx+1)/n] x [cy/n, (cy+1)/n]` and contributes
/// triangle `2*(cy*n + cx)` (lower: corners SW, SE, NE) and `2*(cy*n + cx) + 1`
/// (upper: corners SW, NE, NW), both counterclockwise.
pub fn build_periodic_unit_square_mesh(n: usize) -> Result<Mesh> {
    if n < 2 {
        return Err(Error::InvalidSubdivisions { n });
    }
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            nodes.push([ix as f64 / nf, iy as f64 / nf]);
        }
    }

    // Unwrapped corner coordinate: index wraps modulo n, the coordinate does
    // not, so seam cells keep their true geometry.
    let corner = |ix: usize, iy: usize| -> (usize, [f64; 2]) {
        let node = (iy % n) * n + (ix % n);
        (node, [ix as f64 / nf, iy as f64 / nf])
    };

    let mut elements = Vec::with_capacity(2 * n * n);
    for cy in 0..n {
        for cx in 0..n {
            let sw = corner(cx, cy);
            let se = corner(cx + 1, cy);
            let ne = corner(cx + 1, cy + 1);
            let nw = corner(cx, cy + 1);
            elements.push(triangle_geometry([sw, se, ne]));
            elements.push(triangle_geometry([sw, ne, nw]));
        }
    }

    Ok(Mesh { n, nodes, elements })
}

/// Computes area and constant P1 basis gradients from the (unwrapped) vertex
/// coordinates of a counterclockwise triangle.
fn triangle_geometry(vertices: [(usize, [f64; 2]); 3]) -> ElementGeometry {
    let nodes = [vertices[0].0, vertices[1].0, vertices[2].0];
    let coords = [vertices[0].1, vertices[1].1, vertices[2].1];
    let e1 = [coords[1][0] - coords[0][0], coords[1][1] - coords[0][1]];
    let e2 = [coords[2][0] - coords[0][0], coords[2][1] - coords[0][1]];
    let twice_area = e1[0] * e2[1] - e1[1] * e2[0];
    debug_assert!(twice_area > 0.0, "triangle must be counterclockwise");
    // grad(lambda_i) is the opposite edge vector rotated 90 degrees
    // counterclockwise, divided by twice the area.
    let mut grads = [[0.0; 2]; 3];
    for i in 0..3 {
        let a = coords[(i + 1) % 3];
        let b = coords[(i + 2) % 3];
        grads[i] = [-(b[1] - a[1]) / twice_area, (b[0] - a[0]) / twice_area];
    }
    ElementGeometry {
        nodes,
        coords,
        grads,
        area: 0.5 * twice_area,
    }
}

/// Prolongs a coarse nodal field to the uniformly refined mesh
/// (`fine.n == 2 * coarse.n`) by exact P1 interpolation.
///
/// Fine nodes coincide with coarse nodes, edge midpoints, or cell centers;
/// cell centers lie on the split diagonal, so every new value is the average
/// of two coarse neighbors and the interpolant is reproduced exactly.
pub fn prolong_nodal(coarse: &Mesh, fine: &Mesh, field: &NodalField) -> Result<NodalField> {
    let nc = coarse.n;
    if fine.n != 2 * nc {
        return Err(Error::RefinementMismatch {
            coarse: nc,
            fine: fine.n,
        });
    }
    if field.len() != coarse.num_nodes() {
        return Err(Error::SizeMismatch {
            what: "coarse nodal field",
            expected: coarse.num_nodes(),
            found: field.len(),
        });
    }
    let c = |ix: usize, iy: usize| field.values()[(iy % nc) * nc + (ix % nc)];
    let nf = fine.n;
    let mut values = Vec::with_capacity(nf * nf);
    for iy in 0..nf {
        for ix in 0..nf {
            let (cx, cy) = (ix / 2, iy / 2);
            let v = match (ix % 2, iy % 2) {
                (0, 0) => c(cx, cy),
                (1, 0) => 0.5 * (c(cx, cy) + c(cx + 1, cy)),
                (0, 1) => 0.5 * (c(cx, cy) + c(cx, cy + 1)),
                // Cell center: on the SW-NE diagonal of the coarse cell.
                _ => 0.5 * (c(cx, cy) + c(cx + 1, cy + 1)),
            };
            values.push(v);
        }
    }
    Ok(NodalField::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts_and_mesh_size() {
        let m2 = build_periodic_unit_square_mesh(2).unwrap();
        assert_eq!(m2.num_nodes(), 4);
        assert_eq!(m2.num_elements(), 8);
        let area: f64 = m2.elements().iter().map(|e| e.area).sum();
        assert!((area - 1.0).abs() < 1e-15);

        let m16 = build_periodic_unit_square_mesh(16).unwrap();
        assert_eq!(m16.num_nodes(), 256);
        assert_eq!(m16.num_elements(), 512);
        assert_eq!(m16.h(), std::f64::consts::SQRT_2 / 16.0);
    }

    #[test]
    fn rejects_degenerate_subdivisions() {
        assert!(matches!(
            build_periodic_unit_square_mesh(0),
            Err(Error::InvalidSubdivisions { n: 0 })
        ));
        assert!(matches!(
            build_periodic_unit_square_mesh(1),
            Err(Error::InvalidSubdivisions { n: 1 })
        ));
    }

    #[test]
    fn euler_characteristic_is_zero_on_the_torus() {
        // V - E + F = 0; count distinct undirected node pairs as edges
        // (valid for n >= 3 where no pair is connected twice).
        let m = build_periodic_unit_square_mesh(4).unwrap();
        let mut edges = BTreeSet::new();
        for e in m.elements() {
            for k in 0..3 {
                let a = e.nodes[k];
                let b = e.nodes[(k + 1) % 3];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let (v, e, f) = (m.num_nodes(), edges.len(), m.num_elements());
        assert_eq!(e, 48);
        assert_eq!(v as i64 - e as i64 + f as i64, 0);
    }

    #[test]
    fn every_node_touches_six_triangles() {
        let m = build_periodic_unit_square_mesh(4).unwrap();
        let mut valence = vec![0usize; m.num_nodes()];
        for e in m.elements() {
            for &v in &e.nodes {
                valence[v] += 1;
            }
        }
        assert!(valence.iter().all(|&v| v == 6));
    }

    #[test]
    fn reference_element_geometry() {
        // Lower triangle of cell (0,0) at n = 2.
        let m = build_periodic_unit_square_mesh(2).unwrap();
        let g = m.element_geometry(0);
        assert_eq!(g.nodes, [0, 1, 3]);
        assert_eq!(g.coords, [[0.0, 0.0], [0.5, 0.0], [0.5, 0.5]]);
        assert_eq!(g.grads, [[-2.0, 0.0], [2.0, -2.0], [0.0, 2.0]]);
        assert_eq!(g.area, 0.125);
    }

    #[test]
    fn areas_and_gradient_row_sums() {
        for n in [2, 3, 5, 8] {
            let m = build_periodic_unit_square_mesh(n).unwrap();
            let exact = 0.5 / (n * n) as f64;
            for e in m.elements() {
                assert!((e.area - exact).abs() < 1e-15);
                for d in 0..2 {
                    let s: f64 = e.grads.iter().map(|g| g[d]).sum();
                    assert!(s.abs() < 1e-12 * n as f64, "gradients must sum to zero");
                }
            }
        }
    }

    #[test]
    fn seam_cells_unwrap_coordinates() {
        let m = build_periodic_unit_square_mesh(2).unwrap();
        // Lower triangle of cell (1,1): SE and NE corners wrap in x and/or y.
        let g = m.element_geometry(2 * 3);
        assert_eq!(g.nodes, [3, 2, 0]);
        assert_eq!(g.coords, [[0.5, 0.5], [1.0, 0.5], [1.0, 1.0]]);
        assert_eq!(g.area, 0.125);
    }

    #[test]
    fn mesh_build_is_deterministic() {
        let a = build_periodic_unit_square_mesh(8).unwrap();
        let b = build_periodic_unit_square_mesh(8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prolongation_reproduces_constants_and_linears() {
        let coarse = build_periodic_unit_square_mesh(4).unwrap();
        let fine = build_periodic_unit_square_mesh(8).unwrap();

        let ones = NodalField::constant(coarse.num_nodes(), 1.0);
        let up = prolong_nodal(&coarse, &fine, &ones).unwrap();
        assert!(up.values().iter().all(|&v| v == 1.0));

        // The linear function x is reproduced exactly away from the periodic
        // seam (where the nodal representative wraps back to 0).
        let xs = NodalField::new(coarse.nodes().iter().map(|p| p[0]).collect());
        let up = prolong_nodal(&coarse, &fine, &xs).unwrap();
        for (i, p) in fine.nodes().iter().enumerate() {
            if p[0] < 0.875 - 1e-12 {
                assert!(
                    (up.values()[i] - p[0]).abs() < 1e-15,
                    "node {i} at {p:?}: got {}",
                    up.values()[i]
                );
            }
        }
    }

    #[test]
    fn prolongation_checks_refinement_ratio_and_length() {
        let coarse = build_periodic_unit_square_mesh(4).unwrap();
        let fine = build_periodic_unit_square_mesh(12).unwrap();
        let f = NodalField::constant(coarse.num_nodes(), 0.0);
        assert!(matches!(
            prolong_nodal(&coarse, &fine, &f),
            Err(Error::RefinementMismatch { coarse: 4, fine: 12 })
        ));
        let fine = build_periodic_unit_square_mesh(8).unwrap();
        let bad = NodalField::constant(7, 0.0);
        assert!(matches!(
            prolong_nodal(&coarse, &fine, &bad),
            Err(Error::SizeMismatch { .. })
        ));
    }
}
