//! Structural functionals of the discrete flow: total mass, internal
//! energy, entropy, and the discrete entropy production rate.
//!
//! Every functional is evaluated with the scheme's own quadrature rule —
//! never a finer one — so the discrete conservation and dissipation
//! identities hold to solver tolerance instead of quadrature error.

use crate::error::{Error, Result};
use crate::fem::{integrate, QuadRule};
use crate::mesh::Mesh;
use crate::scheme::{SchemeConfig, State, StepStats};
use crate::thermo::{self, PotentialParams};

/// All step-level observables, one per accepted time step.  The field order
/// matches the CSV column order of the run driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    /// Integral of the phase field.
    pub mass: f64,
    /// Integral of the internal energy density.
    pub energy: f64,
    /// Integral of the entropy density.
    pub entropy: f64,
    /// Discrete entropy production of the step ending in this state
    /// (zero by convention on the initial record).
    pub production: f64,
    /// Internal energy change over the step (the measured numerical
    /// dissipation is its negative, divided by the step size).
    pub energy_increment: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub newton_iterations: usize,
    pub final_residual: f64,
}

fn guarded_theta(data: &crate::fem::QuadPointData, element: usize, point: usize) -> Result<f64> {
    let theta = data.value;
    if !(theta > 0.0) {
        return Err(Error::NonpositiveTemperature {
            element,
            quad_point: point,
            theta,
        });
    }
    Ok(theta)
}

/// Integral of the phase field over the domain (exact for P1).
pub fn total_mass(mesh: &Mesh, quad: &QuadRule, state: &State) -> Result<f64> {
    integrate(mesh, quad, &[&state.phi], |_, data| Ok(data[0].value))
}

/// Integral of the internal energy density `e = f - theta df/dtheta`.
pub fn total_internal_energy(
    mesh: &Mesh,
    quad: &QuadRule,
    p: &PotentialParams,
    state: &State,
) -> Result<f64> {
    integrate(mesh, quad, &[&state.phi, &state.theta], |ctx, data| {
        let theta = guarded_theta(&data[1], ctx.element, ctx.point)?;
        Ok(thermo::internal_energy_density(p, data[0].value, theta))
    })
}

/// Integral of the entropy density
/// `s = -(gamma/2)|grad phi|^2 - df/dtheta`.
pub fn total_entropy(
    mesh: &Mesh,
    quad: &QuadRule,
    p: &PotentialParams,
    state: &State,
) -> Result<f64> {
    integrate(mesh, quad, &[&state.phi, &state.theta], |ctx, data| {
        let theta = guarded_theta(&data[1], ctx.element, ctx.point)?;
        Ok(thermo::entropy_density(p, data[0].value, data[0].gradient, theta))
    })
}

/// The two discrete thermodynamic force vectors of a step at one quadrature
/// point: `v1 = grad theta' / (theta' theta_n)` and
/// `v2 = (mu_n / (theta' theta_n)) grad theta' - grad mu' / theta'`.
fn force_vectors(
    theta_new: f64,
    grad_theta_new: [f64; 2],
    grad_mu_new: [f64; 2],
    mu_old: f64,
    theta_old: f64,
) -> ([f64; 2], [f64; 2]) {
    let v1 = [
        grad_theta_new[0] / (theta_new * theta_old),
        grad_theta_new[1] / (theta_new * theta_old),
    ];
    let v2 = [
        mu_old / (theta_new * theta_old) * grad_theta_new[0] - grad_mu_new[0] / theta_new,
        mu_old / (theta_new * theta_old) * grad_theta_new[1] - grad_mu_new[1] / theta_new,
    ];
    (v1, v2)
}

/// Discrete entropy production of the step from `x_old` to `x_new`:
/// the integral of the quadratic form `[[K, -C], [-C, M]]` in the force
/// vectors (v1, v2).  Nonnegative whenever the transport matrix is positive
/// definite; for an accepted step it equals the entropy increment divided by
/// the step size, up to solver tolerance.
pub fn entropy_production(
    mesh: &Mesh,
    x_new: &State,
    x_old: &State,
    cfg: &SchemeConfig,
) -> Result<f64> {
    let (big_m, big_k, big_c) = (
        cfg.onsager.mobility,
        cfg.onsager.conductivity,
        cfg.onsager.cross_coupling,
    );
    integrate(
        mesh,
        &cfg.quad,
        &[&x_new.theta, &x_new.mu, &x_old.mu, &x_old.theta],
        |ctx, data| {
            let theta_new = guarded_theta(&data[0], ctx.element, ctx.point)?;
            let theta_old = guarded_theta(&data[3], ctx.element, ctx.point)?;
            let (v1, v2) = force_vectors(
                theta_new,
                data[0].gradient,
                data[1].gradient,
                data[2].value,
                theta_old,
            );
            let v1v1 = v1[0] * v1[0] + v1[1] * v1[1];
            let v1v2 = v1[0] * v2[0] + v1[1] * v2[1];
            let v2v2 = v2[0] * v2[0] + v2[1] * v2[1];
            Ok(big_k * v1v1 - 2.0 * big_c * v1v2 + big_m * v2v2)
        },
    )
}

/// Integral of `|v1|^2 + |v2|^2`; multiplied by the smallest eigenvalue of
/// the transport matrix it bounds the entropy production from below.
pub fn force_magnitude(mesh: &Mesh, x_new: &State, x_old: &State, cfg: &SchemeConfig) -> Result<f64> {
    integrate(
        mesh,
        &cfg.quad,
        &[&x_new.theta, &x_new.mu, &x_old.mu, &x_old.theta],
        |ctx, data| {
            let theta_new = guarded_theta(&data[0], ctx.element, ctx.point)?;
            let theta_old = guarded_theta(&data[3], ctx.element, ctx.point)?;
            let (v1, v2) = force_vectors(
                theta_new,
                data[0].gradient,
                data[1].gradient,
                data[2].value,
                theta_old,
            );
            Ok(v1[0] * v1[0] + v1[1] * v1[1] + v2[0] * v2[0] + v2[1] * v2[1])
        },
    )
}

/// Functionals of the initial state; production and energy increment are
/// zero by convention, solver statistics are empty.
pub fn initial_record(mesh: &Mesh, cfg: &SchemeConfig, state: &State) -> Result<DiagnosticsRecord> {
    Ok(DiagnosticsRecord {
        step: 0,
        time: state.time,
        mass: total_mass(mesh, &cfg.quad, state)?,
        energy: total_internal_energy(mesh, &cfg.quad, &cfg.potential, state)?,
        entropy: total_entropy(mesh, &cfg.quad, &cfg.potential, state)?,
        production: 0.0,
        energy_increment: 0.0,
        theta_min: state.theta.min(),
        theta_max: state.theta.max(),
        newton_iterations: 0,
        final_residual: 0.0,
    })
}

/// Functionals after one accepted step; `prev` supplies the step counter and
/// the old energy (bit-identical to recomputing it from `x_old`).
pub fn record_step(
    mesh: &Mesh,
    cfg: &SchemeConfig,
    prev: &DiagnosticsRecord,
    x_new: &State,
    x_old: &State,
    stats: &StepStats,
) -> Result<DiagnosticsRecord> {
    let energy = total_internal_energy(mesh, &cfg.quad, &cfg.potential, x_new)?;
    Ok(DiagnosticsRecord {
        step: prev.step + 1,
        time: x_new.time,
        mass: total_mass(mesh, &cfg.quad, x_new)?,
        energy,
        entropy: total_entropy(mesh, &cfg.quad, &cfg.potential, x_new)?,
        production: entropy_production(mesh, x_new, x_old, cfg)?,
        energy_increment: energy - prev.energy,
        theta_min: stats.theta_min,
        theta_max: stats.theta_max,
        newton_iterations: stats.newton_iterations,
        final_residual: stats.final_residual_norm,
    })
}
