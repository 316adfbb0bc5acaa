//! Quadrature-based assembly of vectors, matrices and scalar integrals.
//!
//! All loops run element-major, then quadrature-point, then local node, so
//! floating-point summation order (and therefore every assembled number) is
//! deterministic.

use crate::error::{Error, Result};
use crate::fem::field::NodalField;
use crate::fem::quadrature::QuadRule;
use crate::fem::sparse::SparseMatrix;
use crate::mesh::{ElementGeometry, Mesh};

/// Value and gradient of one P1 field at a quadrature point (the gradient is
/// constant on each element).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadPointData {
    pub value: f64,
    pub gradient: [f64; 2],
}

/// Everything an integrand callback may inspect at one quadrature point.
#[derive(Debug, Clone, Copy)]
pub struct QuadContext<'a> {
    /// Element index.
    pub element: usize,
    /// Geometry of the element (nodes, unwrapped coordinates, gradients, area).
    pub geometry: &'a ElementGeometry,
    /// Index of the quadrature point within the rule.
    pub point: usize,
    /// Barycentric coordinates of the point.
    pub barycentric: [f64; 3],
    /// Physical position (seam elements use unwrapped coordinates, so cells
    /// tile the unit square exactly).
    pub position: [f64; 2],
}

/// Density returned by a vector integrand: `test` multiplies the basis
/// function, `test_grad` its gradient.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearDensity {
    pub test: f64,
    pub test_grad: [f64; 2],
}

/// Density returned by a matrix integrand, split by which factor carries the
/// basis value and which the basis gradient.  The entry added at
/// (test i, trial j) is
/// `test_trial λi λj + (test_gradtrial · ∇λj) λi + (gradtest_trial · ∇λi) λj
///  + ∇λiᵀ gradtest_gradtrial ∇λj`, times weight and area.
#[derive(Debug, Clone, Copy, Default)]
pub struct BilinearDensity {
    pub test_trial: f64,
    pub test_gradtrial: [f64; 2],
    pub gradtest_trial: [f64; 2],
    pub gradtest_gradtrial: [[f64; 2]; 2],
}

impl BilinearDensity {
    /// Pure mass density `c λi λj`.
    pub fn mass(c: f64) -> Self {
        BilinearDensity {
            test_trial: c,
            ..Default::default()
        }
    }

    /// Pure stiffness density `c ∇λi·∇λj`.
    pub fn stiffness(c: f64) -> Self {
        BilinearDensity {
            gradtest_gradtrial: [[c, 0.0], [0.0, c]],
            ..Default::default()
        }
    }
}

/// Evaluates a P1 field on element `e` at a barycentric point.
pub fn evaluate_p1(
    mesh: &Mesh,
    field: &NodalField,
    element: usize,
    barycentric: [f64; 3],
) -> Result<QuadPointData> {
    check_field(mesh, field)?;
    if element >= mesh.num_elements() {
        return Err(Error::SizeMismatch {
            what: "element index",
            expected: mesh.num_elements(),
            found: element,
        });
    }
    let geo = mesh.element_geometry(element);
    let v = [
        field[geo.nodes[0]],
        field[geo.nodes[1]],
        field[geo.nodes[2]],
    ];
    Ok(eval_local(&v, geo, barycentric))
}

fn eval_local(nodal: &[f64; 3], geo: &ElementGeometry, bary: [f64; 3]) -> QuadPointData {
    QuadPointData {
        value: nodal[0] * bary[0] + nodal[1] * bary[1] + nodal[2] * bary[2],
        gradient: [
            nodal[0] * geo.grads[0][0] + nodal[1] * geo.grads[1][0] + nodal[2] * geo.grads[2][0],
            nodal[0] * geo.grads[0][1] + nodal[1] * geo.grads[1][1] + nodal[2] * geo.grads[2][1],
        ],
    }
}

fn check_field(mesh: &Mesh, field: &NodalField) -> Result<()> {
    if field.len() != mesh.num_nodes() {
        return Err(Error::SizeMismatch {
            what: "nodal field",
            expected: mesh.num_nodes(),
            found: field.len(),
        });
    }
    Ok(())
}

/// Assembles the vector `out[i] = Σ_elements Σ_qp w·area·density(λ_i)`.
///
/// The callback sees the quadrature context plus `fields` evaluated at the
/// current point, in order.  Callback errors abort assembly.
pub fn assemble_vector<F>(
    mesh: &Mesh,
    quad: &QuadRule,
    fields: &[&NodalField],
    mut integrand: F,
) -> Result<Vec<f64>>
where
    F: FnMut(&QuadContext, &[QuadPointData]) -> Result<LinearDensity>,
{
    for f in fields {
        check_field(mesh, f)?;
    }
    let mut out = vec![0.0; mesh.num_nodes()];
    let mut data = vec![QuadPointData::default(); fields.len()];
    for e in 0..mesh.num_elements() {
        let geo = mesh.element_geometry(e);
        let local: Vec<[f64; 3]> = fields
            .iter()
            .map(|f| [f[geo.nodes[0]], f[geo.nodes[1]], f[geo.nodes[2]]])
            .collect();
        for (q, (bary, w)) in quad.points.iter().zip(&quad.weights).enumerate() {
            for (d, nodal) in data.iter_mut().zip(&local) {
                *d = eval_local(nodal, geo, *bary);
            }
            let ctx = QuadContext {
                element: e,
                geometry: geo,
                point: q,
                barycentric: *bary,
                position: position_of(geo, *bary),
            };
            let density = integrand(&ctx, &data)?;
            let wa = w * geo.area;
            // barycentric coordinates are the P1 basis values
            for a in 0..3 {
                out[geo.nodes[a]] += wa
                    * (density.test * bary[a]
                        + density.test_grad[0] * geo.grads[a][0]
                        + density.test_grad[1] * geo.grads[a][1]);
            }
        }
    }
    Ok(out)
}

fn position_of(geo: &ElementGeometry, bary: [f64; 3]) -> [f64; 2] {
    [
        bary[0] * geo.coords[0][0] + bary[1] * geo.coords[1][0] + bary[2] * geo.coords[2][0],
        bary[0] * geo.coords[0][1] + bary[1] * geo.coords[1][1] + bary[2] * geo.coords[2][1],
    ]
}

/// Assembles the matrix with entries
/// `A[i][j] = Σ_elements Σ_qp w·area·density(λ_i, λ_j)` on the node-adjacency
/// sparsity pattern (rows are test functions, columns trial functions).
pub fn assemble_matrix<F>(
    mesh: &Mesh,
    quad: &QuadRule,
    fields: &[&NodalField],
    mut integrand: F,
) -> Result<SparseMatrix>
where
    F: FnMut(&QuadContext, &[QuadPointData]) -> Result<BilinearDensity>,
{
    for f in fields {
        check_field(mesh, f)?;
    }
    let mut data = vec![QuadPointData::default(); fields.len()];
    let mut triplets = Vec::with_capacity(9 * mesh.num_elements());
    for e in 0..mesh.num_elements() {
        let geo = mesh.element_geometry(e);
        let local: Vec<[f64; 3]> = fields
            .iter()
            .map(|f| [f[geo.nodes[0]], f[geo.nodes[1]], f[geo.nodes[2]]])
            .collect();
        let mut block = [[0.0f64; 3]; 3];
        for (q, (bary, w)) in quad.points.iter().zip(&quad.weights).enumerate() {
            for (d, nodal) in data.iter_mut().zip(&local) {
                *d = eval_local(nodal, geo, *bary);
            }
            let ctx = QuadContext {
                element: e,
                geometry: geo,
                point: q,
                barycentric: *bary,
                position: position_of(geo, *bary),
            };
            let d = integrand(&ctx, &data)?;
            let wa = w * geo.area;
            for a in 0..3 {
                let (la, ga) = (bary[a], geo.grads[a]);
                for b in 0..3 {
                    let (lb, gb) = (bary[b], geo.grads[b]);
                    block[a][b] += wa
                        * (d.test_trial * la * lb
                            + (d.test_gradtrial[0] * gb[0] + d.test_gradtrial[1] * gb[1]) * la
                            + (d.gradtest_trial[0] * ga[0] + d.gradtest_trial[1] * ga[1]) * lb
                            + ga[0] * (d.gradtest_gradtrial[0][0] * gb[0]
                                + d.gradtest_gradtrial[0][1] * gb[1])
                            + ga[1] * (d.gradtest_gradtrial[1][0] * gb[0]
                                + d.gradtest_gradtrial[1][1] * gb[1]));
                }
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                triplets.push((geo.nodes[a], geo.nodes[b], block[a][b]));
            }
        }
    }
    SparseMatrix::from_triplets(mesh.num_nodes(), mesh.num_nodes(), &triplets)
}

/// Integrates a scalar density over the mesh.
///
/// Realized as the load vector of the density summed in node order, so the
/// partition-of-unity identity `Σ_i ⟨d, λ_i⟩ = ∫ d` holds bit-exactly against
/// [`assemble_vector`].
pub fn integrate<F>(mesh: &Mesh, quad: &QuadRule, fields: &[&NodalField], mut integrand: F) -> Result<f64>
where
    F: FnMut(&QuadContext, &[QuadPointData]) -> Result<f64>,
{
    let load = assemble_vector(mesh, quad, fields, |ctx, data| {
        Ok(LinearDensity {
            test: integrand(ctx, data)?,
            test_grad: [0.0, 0.0],
        })
    })?;
    Ok(load.iter().sum())
}

/// Returns `(‖u−v‖₀², ‖u−v‖₁²)`: the squared L2 norm and the squared full H1
/// norm (L2 part plus gradient part) of the difference of two nodal fields.
pub fn norms_of_difference(
    mesh: &Mesh,
    quad: &QuadRule,
    u: &NodalField,
    v: &NodalField,
) -> Result<(f64, f64)> {
    check_field(mesh, u)?;
    check_field(mesh, v)?;
    let mut l2 = 0.0;
    let mut semi = 0.0;
    for e in 0..mesh.num_elements() {
        let geo = mesh.element_geometry(e);
        let d = [
            u[geo.nodes[0]] - v[geo.nodes[0]],
            u[geo.nodes[1]] - v[geo.nodes[1]],
            u[geo.nodes[2]] - v[geo.nodes[2]],
        ];
        let g = eval_local(&d, geo, [1.0 / 3.0; 3]).gradient;
        semi += geo.area * (g[0] * g[0] + g[1] * g[1]);
        for (bary, w) in quad.points.iter().zip(&quad.weights) {
            let val = d[0] * bary[0] + d[1] * bary[1] + d[2] * bary[2];
            l2 += w * geo.area * val * val;
        }
    }
    Ok((l2, l2 + semi))
}
