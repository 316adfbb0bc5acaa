//! Free-energy landscape of the non-isothermal Cahn-Hilliard model.
//!
//! The Helmholtz free energy density is
//!
//! ```text
//!   F(phi, grad phi, theta) = (gamma theta / 2) |grad phi|^2 + f(phi, theta)
//! ```
//!
//! with the temperature-dependent double-well driving potential
//!
//! ```text
//!   f(phi, theta) = a ( 2 phi^4 - 4 phi^3 + (c/a + 3) phi^2 - (c/a + 1) phi
//!                       + (c/a + 1)/4 )
//!                   - b ( theta log(theta / theta_c) + theta - theta_c ),
//!   c = a (theta - theta_c) / d.
//! ```
//!
//! Entropy and internal energy densities follow from s = -dF/dtheta and
//! e = F + theta s.  For the time discretization, f is split into a convex
//! part (treated implicitly) and a concave part (treated explicitly); the
//! split swaps the `c phi^2` term between the parts depending on the sign
//! of `c`, keeping each part convex/concave for all admissible temperatures.

use crate::error::{Error, Result};

/// Parameters of the driving potential and the interface energy.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    /// Double-well height scale.
    pub a: f64,
    /// Thermal (caloric) coefficient of the free energy.
    pub b: f64,
    /// Slope of the well asymmetry in temperature.
    pub d: f64,
    /// Critical temperature of the phase transition.
    pub theta_c: f64,
    /// Interface energy coefficient multiplying `theta |grad phi|^2 / 2`.
    pub gamma: f64,
}

impl PotentialParams {
    /// Parameter block used by all simulations unless overridden.
    pub fn reference() -> Self {
        PotentialParams {
            a: 0.01,
            b: 1.0,
            d: 1.0,
            theta_c: 3.0,
            gamma: 1e-3,
        }
    }

    /// Checks positivity of every parameter.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("a", self.a),
            ("b", self.b),
            ("d", self.d),
            ("theta_c", self.theta_c),
            ("gamma", self.gamma),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonpositiveParameter { name, value });
            }
        }
        Ok(())
    }

    /// The coupling coefficient `c = a (theta - theta_c) / d`.
    fn c(&self, theta: f64) -> f64 {
        self.a * (theta - self.theta_c) / self.d
    }
}

/// Mobility, heat conductivity and cross coupling of the isotropic transport
/// (Onsager) matrix `[[K, -C], [-C, M]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnsagerCoeffs {
    /// Phase-field mobility `M`.
    pub mobility: f64,
    /// Heat conductivity `K`.
    pub conductivity: f64,
    /// Cross coupling `C` between heat and phase fluxes.
    pub cross_coupling: f64,
}

impl OnsagerCoeffs {
    /// Reference transport coefficients.
    pub fn reference(cross_coupling: f64) -> Self {
        OnsagerCoeffs {
            mobility: 1e-2,
            conductivity: 5e-2,
            cross_coupling,
        }
    }
}

/// Validates positive definiteness of the transport matrix and returns its
/// smallest eigenvalue `(K + M)/2 - sqrt(((K - M)/2)^2 + C^2)`.
pub fn validate_onsager(coeffs: &OnsagerCoeffs) -> Result<f64> {
    let (k, m, c) = (
        coeffs.conductivity,
        coeffs.mobility,
        coeffs.cross_coupling,
    );
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::NonpositiveParameter {
            name: "conductivity",
            value: k,
        });
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::NonpositiveParameter {
            name: "mobility",
            value: m,
        });
    }
    let det = k * m - c * c;
    if !(det > 0.0) {
        return Err(Error::IndefiniteTransport {
            conductivity: k,
            mobility: m,
            cross_coupling: c,
            determinant: det,
        });
    }
    Ok(0.5 * (k + m) - (0.25 * (k - m) * (k - m) + c * c).sqrt())
}

/// Polynomial part of the potential in phi: `2 phi^4 - 4 phi^3 + (r + 3)
/// phi^2 - (r + 1) phi + (r + 1)/4` with `r = c/a = (theta - theta_c)/d`.
fn polynomial_part(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let r = (theta - p.theta_c) / p.d;
    p.a * (2.0 * phi.powi(4) - 4.0 * phi.powi(3) + (r + 3.0) * phi * phi
        - (r + 1.0) * phi
        + 0.25 * (r + 1.0))
}

/// Driving potential `f(phi, theta)`.
pub fn f_value(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    polynomial_part(p, phi, theta)
        - p.b * (theta * (theta / p.theta_c).ln() + theta - p.theta_c)
}

/// Temperature derivative `df/dtheta`.
pub fn df_dtheta(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    p.a / p.d * (phi * phi - phi + 0.25) - p.b * ((theta / p.theta_c).ln() + 2.0)
}

/// Second temperature derivative `d2f/dtheta2 = -b/theta` (phi-independent).
pub fn d2f_dtheta2(p: &PotentialParams, _phi: f64, theta: f64) -> f64 {
    -p.b / theta
}

/// Mixed derivative `d2f/(dphi dtheta) = a (2 phi - 1) / d`.
pub fn d2f_dphi_dtheta(p: &PotentialParams, phi: f64, _theta: f64) -> f64 {
    p.a * (2.0 * phi - 1.0) / p.d
}

/// Phi-derivative `df/dphi` of the full potential.
pub fn df_dphi(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let r = (theta - p.theta_c) / p.d;
    p.a * (8.0 * phi.powi(3) - 12.0 * phi * phi + 2.0 * (r + 3.0) * phi - (r + 1.0))
}

/// Coefficients of the convex-concave split of the driving potential at a
/// given temperature, evaluated for the scheme:
///
/// * `convex(phi)`  = a (2 phi^4 - 4 phi^3 + 3 phi^2) + max(c, 0) phi^2
/// * `concave(phi)` = min(c, 0) phi^2 - (c + a) phi + (c + a)/4
///
/// so that `convex + concave = f + b`-part and the curvatures have fixed
/// signs for all phi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCoefficients {
    /// Coefficient of `phi^2` in the convex part: `max(c, 0)`.
    pub convex_quadratic: f64,
    /// Coefficient of `phi^2` in the concave part: `min(c, 0)`.
    pub concave_quadratic: f64,
    /// Coefficient of `-phi` (and `+1/4`) in the concave part: `c + a`.
    pub linear: f64,
}

/// Computes the temperature-dependent split coefficients.
pub fn split_coefficients(p: &PotentialParams, theta: f64) -> SplitCoefficients {
    let c = p.c(theta);
    SplitCoefficients {
        convex_quadratic: c.max(0.0),
        concave_quadratic: c.min(0.0),
        linear: c + p.a,
    }
}

/// Convex part of the split at `(phi, theta)`.
pub fn f_convex(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let s = split_coefficients(p, theta);
    p.a * (2.0 * phi.powi(4) - 4.0 * phi.powi(3) + 3.0 * phi * phi)
        + s.convex_quadratic * phi * phi
}

/// Concave part of the split at `(phi, theta)`.
pub fn f_concave(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let s = split_coefficients(p, theta);
    s.concave_quadratic * phi * phi - s.linear * phi + 0.25 * s.linear
}

/// Phi-derivative of the convex part.
pub fn df_convex_dphi(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let s = split_coefficients(p, theta);
    p.a * (8.0 * phi.powi(3) - 12.0 * phi * phi + 6.0 * phi) + 2.0 * s.convex_quadratic * phi
}

/// Phi-derivative of the concave part.
pub fn df_concave_dphi(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let s = split_coefficients(p, theta);
    2.0 * s.concave_quadratic * phi - s.linear
}

/// Second phi-derivative of the convex part (nonnegative for all phi).
pub fn d2f_convex_dphi2(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    let s = split_coefficients(p, theta);
    6.0 * p.a * (2.0 * phi - 1.0) * (2.0 * phi - 1.0) + 2.0 * s.convex_quadratic
}

/// Second phi-derivative of the concave part (nonpositive).
pub fn d2f_concave_dphi2(p: &PotentialParams, _phi: f64, theta: f64) -> f64 {
    2.0 * split_coefficients(p, theta).concave_quadratic
}

/// Split driving term of the scheme: convex part at the new phase field,
/// concave part at the old one, both at the new temperature.
pub fn split_driving(p: &PotentialParams, phi_new: f64, phi_old: f64, theta_new: f64) -> f64 {
    df_convex_dphi(p, phi_new, theta_new) + df_concave_dphi(p, phi_old, theta_new)
}

/// Temperature derivative of [`split_driving`] (the split moves the `c phi^2`
/// term with the sign of `c`, so the derivative switches arguments there; at
/// `c = 0` the one-sided `c > 0` branch is used, matching `max`/`min` above).
pub fn dsplit_driving_dtheta(
    p: &PotentialParams,
    phi_new: f64,
    phi_old: f64,
    theta_new: f64,
) -> f64 {
    let c = p.c(theta_new);
    let dc = p.a / p.d;
    let quad = if c > 0.0 {
        2.0 * dc * phi_new
    } else {
        2.0 * dc * phi_old
    };
    quad - dc
}

/// Entropy density `s = -(gamma/2)|grad phi|^2 - df/dtheta`.
pub fn entropy_density(p: &PotentialParams, phi: f64, grad_phi: [f64; 2], theta: f64) -> f64 {
    let grad_sq = grad_phi[0] * grad_phi[0] + grad_phi[1] * grad_phi[1];
    -0.5 * p.gamma * grad_sq - df_dtheta(p, phi, theta)
}

/// Derivative of the entropy density in phi: `-d2f/(dphi dtheta)`.
pub fn dentropy_dphi(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    -d2f_dphi_dtheta(p, phi, theta)
}

/// Derivative of the entropy density in theta: `-d2f/dtheta2 = b/theta`.
pub fn dentropy_dtheta(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    -d2f_dtheta2(p, phi, theta)
}

/// Internal energy density `e = f - theta df/dtheta` (the gradient parts of
/// free energy and theta-times-entropy cancel).
pub fn internal_energy_density(p: &PotentialParams, phi: f64, theta: f64) -> f64 {
    f_value(p, phi, theta) - theta * df_dtheta(p, phi, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> PotentialParams {
        PotentialParams::reference()
    }

    #[test]
    fn reference_point_values() {
        // hand-evaluated at phi = 1/2, theta = theta_c = 3: the polynomial
        // part collapses to a/8 and the log term vanishes
        let pp = p();
        assert!((f_value(&pp, 0.5, 3.0) - 0.00125).abs() < 1e-12);
        assert!((f_value(&pp, 0.0, 3.0) - 0.0025).abs() < 1e-12);
        assert!((df_dtheta(&pp, 0.5, 3.0) - (-2.0)).abs() < 1e-12);
        assert!((internal_energy_density(&pp, 0.5, 3.0) - 6.00125).abs() < 1e-12);
        assert!((entropy_density(&pp, 0.5, [0.0, 0.0], 3.0) - 2.0).abs() < 1e-12);
        assert!((d2f_dtheta2(&pp, 0.3, 2.0) - (-0.5)).abs() < 1e-12);
    }

    #[test]
    fn split_reassembles_the_potential() {
        let pp = p();
        for &phi in &[-0.5, 0.0, 0.25, 0.5, 0.9, 1.5] {
            for &theta in &[0.1, 1.0, 3.0, 4.5, 6.0] {
                // convex + concave equals the polynomial part of f
                let sum = f_convex(&pp, phi, theta) + f_concave(&pp, phi, theta);
                let poly = f_value(&pp, phi, theta)
                    + pp.b * (theta * (theta / pp.theta_c).ln() + theta - pp.theta_c);
                assert!(
                    (sum - poly).abs() < 1e-12,
                    "phi={phi}, theta={theta}: {sum} vs {poly}"
                );
                // derivative of the split sums to the full phi-derivative
                let dsum = df_convex_dphi(&pp, phi, theta) + df_concave_dphi(&pp, phi, theta);
                assert!((dsum - df_dphi(&pp, phi, theta)).abs() < 1e-12);
                // curvature signs
                assert!(d2f_convex_dphi2(&pp, phi, theta) >= 0.0);
                assert!(d2f_concave_dphi2(&pp, phi, theta) <= 0.0);
            }
        }
    }

    #[test]
    fn derivatives_match_centered_differences() {
        let pp = p();
        let h = 1e-6;
        for &phi in &[0.1, 0.45, 0.8] {
            for &theta in &[0.5, 2.0, 3.0 + 0.123, 5.5] {
                let fd_theta =
                    (f_value(&pp, phi, theta + h) - f_value(&pp, phi, theta - h)) / (2.0 * h);
                assert!((fd_theta - df_dtheta(&pp, phi, theta)).abs() < 1e-6);
                let fd_phi =
                    (f_value(&pp, phi + h, theta) - f_value(&pp, phi - h, theta)) / (2.0 * h);
                assert!((fd_phi - df_dphi(&pp, phi, theta)).abs() < 1e-6);
                let fd_tt =
                    (df_dtheta(&pp, phi, theta + h) - df_dtheta(&pp, phi, theta - h)) / (2.0 * h);
                assert!((fd_tt - d2f_dtheta2(&pp, phi, theta)).abs() < 1e-6);
                let fd_pt =
                    (df_dtheta(&pp, phi + h, theta) - df_dtheta(&pp, phi - h, theta)) / (2.0 * h);
                assert!((fd_pt - d2f_dphi_dtheta(&pp, phi, theta)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn energy_is_free_energy_plus_theta_entropy() {
        let pp = p();
        for &phi in &[0.2, 0.5, 1.1] {
            for &theta in &[0.7, 3.0, 5.0] {
                for &grad in &[[0.0, 0.0], [1.5, -0.5]] {
                    let grad_sq: f64 = grad[0] * grad[0] + grad[1] * grad[1];
                    let free = 0.5 * pp.gamma * theta * grad_sq + f_value(&pp, phi, theta);
                    let s = entropy_density(&pp, phi, grad, theta);
                    let e_from_defs = free + theta * s;
                    // gradient contributions cancel exactly in e
                    assert!(
                        (e_from_defs - internal_energy_density(&pp, phi, theta)).abs() < 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn energy_increases_linearly_in_theta_with_slope_b() {
        let pp = p();
        let e4 = internal_energy_density(&pp, 0.25, 4.0);
        let e2 = internal_energy_density(&pp, 0.25, 2.0);
        assert!((e4 - e2 - pp.b * 2.0).abs() < 1e-12);
    }

    #[test]
    fn onsager_validation_closed_forms() {
        let ok = validate_onsager(&OnsagerCoeffs::reference(1e-4)).unwrap();
        assert!((ok - 0.009999750001562481).abs() < 1e-15);
        // the returned value must be the smaller root of the characteristic
        // polynomial of [[K, -C], [-C, M]]
        let (k, m, c) = (5e-2, 1e-2, 1e-4);
        let char_poly = ok * ok - (k + m) * ok + (k * m - c * c);
        assert!(char_poly.abs() < 1e-18, "{char_poly}");
        assert!(ok < m.min(k));
        let uncoupled = validate_onsager(&OnsagerCoeffs::reference(0.0)).unwrap();
        assert!((uncoupled - 0.01).abs() < 1e-15);
        assert!(matches!(
            validate_onsager(&OnsagerCoeffs::reference(3e-2)),
            Err(Error::IndefiniteTransport { .. })
        ));
        assert!(matches!(
            validate_onsager(&OnsagerCoeffs {
                mobility: 0.0,
                conductivity: 1.0,
                cross_coupling: 0.0
            }),
            Err(Error::NonpositiveParameter { name: "mobility", .. })
        ));
    }

    #[test]
    fn split_driving_switches_argument_with_sign_of_c() {
        let pp = p();
        // theta above theta_c: quadratic term lives in the convex part and is
        // evaluated at the new phi
        let above = dsplit_driving_dtheta(&pp, 0.8, 0.2, 4.0);
        assert!((above - (pp.a / pp.d) * (2.0 * 0.8 - 1.0)).abs() < 1e-15);
        // below theta_c: evaluated at the old phi
        let below = dsplit_driving_dtheta(&pp, 0.8, 0.2, 2.0);
        assert!((below - (pp.a / pp.d) * (2.0 * 0.2 - 1.0)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn split_consistency_randomized(
            phi in -0.5f64..1.5,
            phi_old in -0.5f64..1.5,
            theta in 0.1f64..6.0,
        ) {
            let pp = p();
            let sum = f_convex(&pp, phi, theta) + f_concave(&pp, phi, theta);
            let poly = f_value(&pp, phi, theta)
                + pp.b * (theta * (theta / pp.theta_c).ln() + theta - pp.theta_c);
            prop_assert!((sum - poly).abs() < 1e-12);
            prop_assert!(d2f_convex_dphi2(&pp, phi, theta) >= 0.0);
            prop_assert!(d2f_concave_dphi2(&pp, phi, theta) <= 0.0);
            // the split driving term reduces to df/dphi when old == new
            let drive = split_driving(&pp, phi, phi, theta);
            prop_assert!((drive - df_dphi(&pp, phi, theta)).abs() < 1e-12);
            // split driving is always between evaluating everything old/new
            let _ = split_driving(&pp, phi, phi_old, theta);
        }

        #[test]
        fn entropy_decreases_when_cooling(theta_hi in 1.0f64..6.0) {
            let pp = p();
            let theta_lo = theta_hi * 0.5;
            let s_hi = entropy_density(&pp, 0.4, [0.0, 0.0], theta_hi);
            let s_lo = entropy_density(&pp, 0.4, [0.0, 0.0], theta_lo);
            prop_assert!(s_lo < s_hi);
        }
    }
}
