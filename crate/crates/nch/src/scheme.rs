//! The fully discrete time step: nonlinear residual, analytic Jacobian and
//! Newton solve for the coupled (phi, mu, theta) system.
//!
//! One time step advances the phase field phi, chemical potential mu and
//! temperature theta from level n to n+1.  The three weak equations are kept
//! in residual form, unknowns ordered field-major as `[phi | mu | theta]`
//! (3N entries for N mesh nodes):
//!
//! * phase equation: `<d_t phi, psi> - <M v2 - C v1, grad psi> = 0` with the
//!   discrete thermodynamic forces `v1 = grad theta' / (theta' theta_n)` and
//!   `v2 = (mu_n / (theta' theta_n)) grad theta' - grad mu' / theta'`;
//! * potential equation: `<mu', xi> - gamma <grad phi', theta' grad xi>
//!   - gamma <grad phi_n . grad theta', xi> - <f_phi, xi> = 0` with the
//!   convex-concave split driving term `f_phi(phi', phi_n, theta')`;
//! * entropy equation: `<d_t s, omega>` minus transport terms whose
//!   quadratic structure makes the total entropy production a nonnegative
//!   bilinear form (see the diagnostics module).
//!
//! Primed fields live on the new level and are implicit; `_n` fields are the
//! previous accepted state (all starred/extrapolated quantities are frozen
//! there).  All rational weights (1/theta and friends) are evaluated
//! pointwise at quadrature points, which keeps every structural identity of
//! the continuous model valid at quadrature level.

use crate::error::{Error, Result};
use crate::fem::lu::SymbolicCache;
use crate::fem::{NodalField, QuadRule, SparseMatrix};
use crate::mesh::Mesh;
use crate::thermo::{self, df_dphi, OnsagerCoeffs, PotentialParams};

/// Discrete solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub phi: NodalField,
    pub mu: NodalField,
    pub theta: NodalField,
    pub time: f64,
}

impl State {
    /// Validates field lengths against the mesh.
    pub fn check_sizes(&self, mesh: &Mesh) -> Result<()> {
        for (field, len) in [
            ("phi", self.phi.len()),
            ("mu", self.mu.len()),
            ("theta", self.theta.len()),
        ] {
            if len != mesh.num_nodes() {
                return Err(Error::SizeMismatch {
                    what: match field {
                        "phi" => "state field phi",
                        "mu" => "state field mu",
                        _ => "state field theta",
                    },
                    expected: mesh.num_nodes(),
                    found: len,
                });
            }
        }
        Ok(())
    }

    /// Errors on the first node with nonpositive temperature.
    pub fn check_theta_positive(&self) -> Result<()> {
        for (node, &theta) in self.theta.values().iter().enumerate() {
            if !(theta > 0.0) {
                return Err(Error::NonpositiveNodalTemperature { node, theta });
            }
        }
        Ok(())
    }
}

/// Parameters of the time discretization and the Newton solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    /// Time step size.
    pub tau: f64,
    /// Convergence tolerance on the residual infinity norm.
    pub newton_tol: f64,
    /// Iteration cap for one time step.
    pub newton_max_iter: usize,
    /// Free-energy parameters.
    pub potential: PotentialParams,
    /// Transport coefficients.
    pub onsager: OnsagerCoeffs,
    /// Quadrature rule shared by the scheme and all diagnostics.
    pub quad: QuadRule,
}

impl SchemeConfig {
    /// Builds a configuration with the default Newton settings
    /// (tolerance 1e-12, at most 25 iterations, degree-4 quadrature) and
    /// validates all physical parameters.
    pub fn new(tau: f64, potential: PotentialParams, onsager: OnsagerCoeffs) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::NonpositiveParameter {
                name: "tau",
                value: tau,
            });
        }
        potential.validate()?;
        thermo::validate_onsager(&onsager)?;
        Ok(SchemeConfig {
            tau,
            newton_tol: 1e-12,
            newton_max_iter: 25,
            potential,
            onsager,
            quad: crate::fem::reference_quadrature(crate::fem::DEFAULT_QUADRATURE_DEGREE)?,
        })
    }
}

/// Convergence report for one accepted time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub newton_iterations: usize,
    pub final_residual_norm: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

/// All six P1 fields evaluated at one quadrature point, plus derived old-level
/// entropy.
struct PointEval {
    /// New-level values: phase field, chemical potential, temperature.
    p: f64,
    m: f64,
    t: f64,
    /// New-level gradients.
    g: [f64; 2],
    gm: [f64; 2],
    gt: [f64; 2],
    /// Old-level values and phase gradient.
    pn: f64,
    mn: f64,
    tn: f64,
    gn: [f64; 2],
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Gathers the three local nodal values of a field on an element.
#[inline]
fn local3(f: &NodalField, nodes: &[usize; 3]) -> [f64; 3] {
    [f[nodes[0]], f[nodes[1]], f[nodes[2]]]
}

#[inline]
fn combine(v: &[f64; 3], bary: &[f64; 3]) -> f64 {
    v[0] * bary[0] + v[1] * bary[1] + v[2] * bary[2]
}

#[inline]
fn grad_of(v: &[f64; 3], grads: &[[f64; 2]; 3]) -> [f64; 2] {
    [
        v[0] * grads[0][0] + v[1] * grads[1][0] + v[2] * grads[2][0],
        v[0] * grads[0][1] + v[1] * grads[1][1] + v[2] * grads[2][1],
    ]
}

fn check_inputs(mesh: &Mesh, x_new: &State, x_old: &State) -> Result<()> {
    x_new.check_sizes(mesh)?;
    x_old.check_sizes(mesh)?;
    x_new.check_theta_positive()?;
    x_old.check_theta_positive()
}

/// Assembles the 3N residual `[R_phi | R_mu | R_s]` of the fully discrete
/// system at the candidate new state.  Zero at the solution.
pub fn residual(mesh: &Mesh, x_new: &State, x_old: &State, cfg: &SchemeConfig) -> Result<Vec<f64>> {
    check_inputs(mesh, x_new, x_old)?;
    let n = mesh.num_nodes();
    let pot = &cfg.potential;
    let (big_m, big_k, big_c) = (
        cfg.onsager.mobility,
        cfg.onsager.conductivity,
        cfg.onsager.cross_coupling,
    );
    let tau = cfg.tau;
    let mut out = vec![0.0; 3 * n];

    for e in 0..mesh.num_elements() {
        let geo = mesh.element_geometry(e);
        let lp = local3(&x_new.phi, &geo.nodes);
        let lm = local3(&x_new.mu, &geo.nodes);
        let lt = local3(&x_new.theta, &geo.nodes);
        let lpn = local3(&x_old.phi, &geo.nodes);
        let lmn = local3(&x_old.mu, &geo.nodes);
        let ltn = local3(&x_old.theta, &geo.nodes);
        // gradients of P1 fields are constant per element
        let g = grad_of(&lp, &geo.grads);
        let gm = grad_of(&lm, &geo.grads);
        let gt = grad_of(&lt, &geo.grads);
        let gn = grad_of(&lpn, &geo.grads);

        for (q, (bary, w)) in cfg.quad.points.iter().zip(&cfg.quad.weights).enumerate() {
            let pe = PointEval {
                p: combine(&lp, bary),
                m: combine(&lm, bary),
                t: combine(&lt, bary),
                g,
                gm,
                gt,
                pn: combine(&lpn, bary),
                mn: combine(&lmn, bary),
                tn: combine(&ltn, bary),
                gn,
            };
            if !(pe.t > 0.0) {
                return Err(Error::NonpositiveTemperature {
                    element: e,
                    quad_point: q,
                    theta: pe.t,
                });
            }
            let sn = thermo::entropy_density(pot, pe.pn, pe.gn, pe.tn);
            let s_new = thermo::entropy_density(pot, pe.p, pe.g, pe.t);
            let wa = w * geo.area;

            // shared transport quantities
            let dtp = (pe.p - pe.pn) / tau;
            let v1 = [
                pe.gt[0] / (pe.t * pe.tn),
                pe.gt[1] / (pe.t * pe.tn),
            ];
            let v2 = [
                pe.mn / (pe.t * pe.tn) * pe.gt[0] - pe.gm[0] / pe.t,
                pe.mn / (pe.t * pe.tn) * pe.gt[1] - pe.gm[1] / pe.t,
            ];
            let flux_phi = [
                big_m * v2[0] - big_c * v1[0],
                big_m * v2[1] - big_c * v1[1],
            ];
            let f_phi = thermo::split_driving(pot, pe.p, pe.pn, pe.t);

            let a1 = (big_k - 2.0 * big_c * pe.mn + big_m * pe.mn * pe.mn) / pe.tn;
            let a2 = big_c - big_m * pe.mn;
            let gvec = [a1 * pe.gt[0] + a2 * pe.gm[0], a1 * pe.gt[1] + a2 * pe.gm[1]];
            let hvec = [
                a2 / pe.tn * pe.gt[0] + big_m * pe.gm[0],
                a2 / pe.tn * pe.gt[1] + big_m * pe.gm[1],
            ];
            let dts = (s_new - sn) / tau;
            let g_dot_gt = dot(gvec, pe.gt);
            let h_dot_gm = dot(hvec, pe.gm);
            let tt = pe.t * pe.t;

            for a in 0..3 {
                let (la, ga) = (bary[a], geo.grads[a]);
                // phase block
                out[geo.nodes[a]] += wa * (dtp * la - dot(flux_phi, ga));
                // potential block
                out[n + geo.nodes[a]] += wa
                    * ((pe.m - f_phi - pot.gamma * dot(pe.gn, pe.gt)) * la
                        - pot.gamma * pe.t * dot(pe.g, ga));
                // entropy block
                out[2 * n + geo.nodes[a]] += wa
                    * (dts * la - g_dot_gt * la / (tt * pe.tn) + dot(gvec, ga) / (pe.tn * pe.t)
                        - h_dot_gm * la / tt
                        - pot.gamma * dtp * dot(pe.gn, ga));
            }
        }
    }
    Ok(out)
}

/// Sparsity pattern of the 3N x 3N Jacobian plus per-element scatter maps.
pub struct SystemPattern {
    n_nodes: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    /// Start of each node's sorted neighbor list (length `n_nodes + 1`).
    adj_ptr: Vec<usize>,
    /// Position of `nodes[b]` within the neighbor list of `nodes[a]`,
    /// per element.
    elem_pos: Vec<[[usize; 3]; 3]>,
}

impl SystemPattern {
    /// Builds the node-adjacency block pattern for a mesh.
    pub fn build(mesh: &Mesh) -> Self {
        let n = mesh.num_nodes();
        let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(8); n];
        for geo in mesh.elements() {
            for &a in &geo.nodes {
                for &b in &geo.nodes {
                    adj[a].push(b);
                }
            }
        }
        let mut adj_ptr = vec![0usize; n + 1];
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            adj_ptr[i + 1] = adj_ptr[i] + list.len();
        }
        let flat_adj: Vec<usize> = adj.iter().flatten().copied().collect();

        let mut row_ptr = vec![0usize; 3 * n + 1];
        let mut col_idx = Vec::with_capacity(9 * flat_adj.len());
        for fi in 0..3 {
            for ni in 0..n {
                let deg = adj_ptr[ni + 1] - adj_ptr[ni];
                for fj in 0..3 {
                    for &nb in &flat_adj[adj_ptr[ni]..adj_ptr[ni + 1]] {
                        col_idx.push(fj * n + nb);
                    }
                }
                row_ptr[fi * n + ni + 1] = row_ptr[fi * n + ni] + 3 * deg;
            }
        }

        let elem_pos = mesh
            .elements()
            .iter()
            .map(|geo| {
                let mut pos = [[0usize; 3]; 3];
                for a in 0..3 {
                    let na = geo.nodes[a];
                    let list = &flat_adj[adj_ptr[na]..adj_ptr[na + 1]];
                    for b in 0..3 {
                        pos[a][b] = list.binary_search(&geo.nodes[b]).expect("adjacent node");
                    }
                }
                pos
            })
            .collect();

        SystemPattern {
            n_nodes: n,
            row_ptr,
            col_idx,
            adj_ptr,
            elem_pos,
        }
    }

    /// Zero matrix with the pattern of the Jacobian.
    pub fn zero_matrix(&self) -> SparseMatrix {
        let dim = 3 * self.n_nodes;
        SparseMatrix::from_parts(
            dim,
            dim,
            self.row_ptr.clone(),
            self.col_idx.clone(),
            vec![0.0; self.col_idx.len()],
        )
        .expect("pattern arrays are consistent by construction")
    }

    /// Value-array slot of the block entry (field `fi`, node `na`) x
    /// (field `fj`, local position `pos` within `na`'s neighbor list).
    #[inline]
    fn slot(&self, fi: usize, na: usize, fj: usize, pos: usize) -> usize {
        let deg = self.adj_ptr[na + 1] - self.adj_ptr[na];
        self.row_ptr[fi * self.n_nodes + na] + fj * deg + pos
    }
}

/// Assembles the analytic Jacobian of [`residual`] with respect to the new
/// state, on the given pattern (values are overwritten).
pub fn jacobian_into(
    mesh: &Mesh,
    x_new: &State,
    x_old: &State,
    cfg: &SchemeConfig,
    pattern: &SystemPattern,
    matrix: &mut SparseMatrix,
) -> Result<()> {
    check_inputs(mesh, x_new, x_old)?;
    let pot = &cfg.potential;
    let (big_m, big_k, big_c) = (
        cfg.onsager.mobility,
        cfg.onsager.conductivity,
        cfg.onsager.cross_coupling,
    );
    let tau = cfg.tau;
    let values = matrix.values_mut();
    values.fill(0.0);

    for (e, geo) in mesh.elements().iter().enumerate() {
        let lp = local3(&x_new.phi, &geo.nodes);
        let lm = local3(&x_new.mu, &geo.nodes);
        let lt = local3(&x_new.theta, &geo.nodes);
        let lpn = local3(&x_old.phi, &geo.nodes);
        let lmn = local3(&x_old.mu, &geo.nodes);
        let ltn = local3(&x_old.theta, &geo.nodes);
        let g = grad_of(&lp, &geo.grads);
        let gm = grad_of(&lm, &geo.grads);
        let gt = grad_of(&lt, &geo.grads);
        let gn = grad_of(&lpn, &geo.grads);

        // local[fi][fj][a][b]
        let mut local = [[[[0.0f64; 3]; 3]; 3]; 3];

        for (q, (bary, w)) in cfg.quad.points.iter().zip(&cfg.quad.weights).enumerate() {
            let p = combine(&lp, bary);
            let t = combine(&lt, bary);
            let pn = combine(&lpn, bary);
            let mn = combine(&lmn, bary);
            let tn = combine(&ltn, bary);
            if !(t > 0.0) {
                return Err(Error::NonpositiveTemperature {
                    element: e,
                    quad_point: q,
                    theta: t,
                });
            }
            let wa = w * geo.area;
            let tt = t * t;
            let ttt = tt * t;

            let a1 = (big_k - 2.0 * big_c * mn + big_m * mn * mn) / tn;
            let a2 = big_c - big_m * mn;
            let gvec = [a1 * gt[0] + a2 * gm[0], a1 * gt[1] + a2 * gm[1]];
            let hvec = [a2 / tn * gt[0] + big_m * gm[0], a2 / tn * gt[1] + big_m * gm[1]];
            let g_dot_gt = dot(gvec, gt);
            let h_dot_gm = dot(hvec, gm);

            let d2fvex = thermo::d2f_convex_dphi2(pot, p, t);
            let dfphi_dt = thermo::dsplit_driving_dtheta(pot, p, pn, t);
            let ds_dp = thermo::dentropy_dphi(pot, p, t);
            let ds_dt = thermo::dentropy_dtheta(pot, p, t);
            let mmn_c = big_m * mn - big_c;

            for a in 0..3 {
                let (la, ga) = (bary[a], geo.grads[a]);
                // w_a: test-function weight of the entropy quadratic terms
                let wvec = [
                    la / (tt * tn) * gt[0] - ga[0] / (tn * t),
                    la / (tt * tn) * gt[1] - ga[1] / (tn * t),
                ];
                let g_dot_ga = dot(gvec, ga);
                for b in 0..3 {
                    let (lb, gb) = (bary[b], geo.grads[b]);
                    let mass = la * lb;
                    let stiff = dot(ga, gb);

                    // d R_phi / d phi
                    local[0][0][a][b] += wa * mass / tau;
                    // d R_phi / d mu
                    local[0][1][a][b] += wa * big_m / t * stiff;
                    // d R_phi / d theta: differentiate the flux M v2 - C v1
                    let dflux = [
                        mmn_c * (gb[0] / (t * tn) - gt[0] * lb / (tt * tn))
                            + big_m * gm[0] * lb / tt,
                        mmn_c * (gb[1] / (t * tn) - gt[1] * lb / (tt * tn))
                            + big_m * gm[1] * lb / tt,
                    ];
                    local[0][2][a][b] += wa * (-dot(dflux, ga));

                    // d R_mu / d phi
                    local[1][0][a][b] += wa * (-pot.gamma * t * stiff - d2fvex * mass);
                    // d R_mu / d mu
                    local[1][1][a][b] += wa * mass;
                    // d R_mu / d theta
                    local[1][2][a][b] += wa
                        * (-pot.gamma * lb * dot(g, ga)
                            - pot.gamma * dot(gn, gb) * la
                            - dfphi_dt * mass);

                    // d R_s / d phi: through s' and the transport term
                    local[2][0][a][b] += wa
                        * ((ds_dp * lb - pot.gamma * dot(g, gb)) * la / tau
                            - pot.gamma * lb / tau * dot(gn, ga));
                    // d R_s / d mu: through G, H and grad mu'
                    local[2][1][a][b] += wa
                        * (-a2 * dot(gb, wvec)
                            - (big_m * dot(gb, gm) + dot(hvec, gb)) * la / tt);
                    // d R_s / d theta
                    let g_dot_dw = -2.0 * mass * g_dot_gt / (ttt * tn)
                        + la * dot(gvec, gb) / (tt * tn)
                        + lb * g_dot_ga / (tn * tt);
                    local[2][2][a][b] += wa
                        * (ds_dt * mass / tau - a1 * dot(gb, wvec) - g_dot_dw
                            - a2 / tn * dot(gb, gm) * la / tt
                            + 2.0 * h_dot_gm * mass / ttt);
                }
            }
        }

        let pos = &pattern.elem_pos[e];
        for fi in 0..3 {
            for fj in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        let slot = pattern.slot(fi, geo.nodes[a], fj, pos[a][b]);
                        values[slot] += local[fi][fj][a][b];
                    }
                }
            }
        }
    }
    Ok(())
}

/// Assembles the analytic Jacobian as a fresh sparse matrix.
pub fn jacobian(mesh: &Mesh, x_new: &State, x_old: &State, cfg: &SchemeConfig) -> Result<SparseMatrix> {
    let pattern = SystemPattern::build(mesh);
    let mut matrix = pattern.zero_matrix();
    jacobian_into(mesh, x_new, x_old, cfg, &pattern, &mut matrix)?;
    Ok(matrix)
}

/// Reusable Newton solver for repeated time steps on one mesh: caches the
/// Jacobian pattern and the symbolic LU analysis.
pub struct Stepper<'m> {
    mesh: &'m Mesh,
    cfg: SchemeConfig,
    pattern: SystemPattern,
    symbolic: SymbolicCache,
    matrix: SparseMatrix,
}

/// Maximum number of halvings of the Newton update when temperature
/// positivity is lost.
const MAX_HALVINGS: usize = 10;

impl<'m> Stepper<'m> {
    /// Prepares pattern and symbolic factorization for a mesh.
    pub fn new(mesh: &'m Mesh, cfg: SchemeConfig) -> Result<Self> {
        let pattern = SystemPattern::build(mesh);
        let matrix = pattern.zero_matrix();
        let symbolic = SymbolicCache::new(&matrix)?;
        Ok(Stepper {
            mesh,
            cfg,
            pattern,
            symbolic,
            matrix,
        })
    }

    /// Scheme configuration in use.
    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Advances one time step with Newton iteration from the old state.
    pub fn step(&mut self, x_old: &State) -> Result<(State, StepStats)> {
        x_old.check_sizes(self.mesh)?;
        x_old.check_theta_positive()?;
        let n = self.mesh.num_nodes();
        let mut x = x_old.clone();
        x.time = x_old.time + self.cfg.tau;

        let mut iterations = 0usize;
        loop {
            let r = residual(self.mesh, &x, x_old, &self.cfg)?;
            let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm <= self.cfg.newton_tol {
                let stats = StepStats {
                    newton_iterations: iterations,
                    final_residual_norm: norm,
                    theta_min: x.theta.min(),
                    theta_max: x.theta.max(),
                };
                return Ok((x, stats));
            }
            if iterations >= self.cfg.newton_max_iter {
                return Err(Error::NewtonDiverged {
                    iterations,
                    residual: norm,
                });
            }
            jacobian_into(self.mesh, &x, x_old, &self.cfg, &self.pattern, &mut self.matrix)?;
            let factorization = self.symbolic.factorize(&self.matrix)?;
            let delta = crate::fem::lu_solve(&factorization, &r)?;

            // Full Newton update, halved until nodal temperatures stay
            // positive.
            let mut scale = 1.0;
            let mut halvings = 0usize;
            let accepted = loop {
                let mut candidate = x.clone();
                for i in 0..n {
                    candidate.phi[i] -= scale * delta[i];
                    candidate.mu[i] -= scale * delta[n + i];
                    candidate.theta[i] -= scale * delta[2 * n + i];
                }
                if candidate.theta.min() > 0.0 {
                    break candidate;
                }
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(Error::LineSearchFloor {
                        halvings: MAX_HALVINGS,
                    });
                }
                scale *= 0.5;
            };
            x = accepted;
            iterations += 1;
        }
    }
}

/// Solves a single time step without pattern reuse (convenience wrapper).
pub fn solve_timestep(mesh: &Mesh, x_old: &State, cfg: &SchemeConfig) -> Result<(State, StepStats)> {
    Stepper::new(mesh, cfg.clone())?.step(x_old)
}

/// Closed-form initial data profiles.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// Constant phase field 0.6 with the radial temperature quench.
    Convergence {
        #[serde(default)]
        theta_center: [f64; 2],
    },
    /// High-frequency sine perturbation around phi = 0.5 with the same
    /// quench.
    Illustration {
        #[serde(default)]
        theta_center: [f64; 2],
    },
    /// Spatially constant state (chemical potential chosen stationary).
    Constant { phi: f64, theta: f64 },
}

impl InitialData {
    /// Convergence profile centered at the origin.
    pub fn convergence() -> Self {
        InitialData::Convergence {
            theta_center: [0.0, 0.0],
        }
    }

    /// Illustration profile centered at the origin.
    pub fn illustration() -> Self {
        InitialData::Illustration {
            theta_center: [0.0, 0.0],
        }
    }
}

/// Clamped sigmoid `trans(z) = (clamp(tanh z, -1, 1) + 1) / 2` mapping onto
/// `[0, 1]`.
pub fn trans(z: f64) -> f64 {
    (z.tanh().clamp(-1.0, 1.0) + 1.0) / 2.0
}

/// Radial quench profile: 6.0 in a disk around `center`, dropping to 0.1
/// outside (always within `[0.1, 6.0]`).
pub fn theta_quench(center: [f64; 2], x: f64, y: f64) -> f64 {
    let (dx, dy) = (x - center[0], y - center[1]);
    let r = (0.3 * dx * dx + 0.3 * dy * dy).sqrt();
    -5.9 * trans((r - 0.2) / 0.001f64.sqrt()) + 6.0
}

/// Interpolates the chosen initial data at the mesh nodes; the chemical
/// potential starts at zero (constant profiles use the stationary value).
pub fn initial_state(mesh: &Mesh, cfg: &SchemeConfig, data: &InitialData) -> State {
    let (phi, mu, theta) = match data {
        InitialData::Convergence { theta_center } => (
            NodalField::constant(mesh.num_nodes(), 0.6),
            NodalField::constant(mesh.num_nodes(), 0.0),
            NodalField::from_fn(mesh, |x, y| theta_quench(*theta_center, x, y)),
        ),
        InitialData::Illustration { theta_center } => (
            NodalField::from_fn(mesh, |x, y| {
                0.5 + 0.01
                    * (211.0 * std::f64::consts::PI * x).sin()
                    * (211.0 * std::f64::consts::PI * y).sin()
            }),
            NodalField::constant(mesh.num_nodes(), 0.0),
            NodalField::from_fn(mesh, |x, y| theta_quench(*theta_center, x, y)),
        ),
        InitialData::Constant { phi, theta } => (
            NodalField::constant(mesh.num_nodes(), *phi),
            NodalField::constant(mesh.num_nodes(), df_dphi(&cfg.potential, *phi, *theta)),
            NodalField::constant(mesh.num_nodes(), *theta),
        ),
    };
    State {
        phi,
        mu,
        theta,
        time: 0.0,
    }
}

/// Samples user-provided closures for phi and theta (chemical potential
/// starts at zero).
pub fn initial_state_custom(
    mesh: &Mesh,
    phi: impl Fn(f64, f64) -> f64,
    theta: impl Fn(f64, f64) -> f64,
) -> State {
    State {
        phi: NodalField::from_fn(mesh, &phi),
        mu: NodalField::constant(mesh.num_nodes(), 0.0),
        theta: NodalField::from_fn(mesh, &theta),
        time: 0.0,
    }
}
