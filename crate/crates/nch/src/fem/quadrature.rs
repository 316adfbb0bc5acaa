//! Symmetric Gauss quadrature rules on the reference triangle.
//!
//! Points are stored in barycentric coordinates and weights are normalized to
//! sum to one, so the integral of `f` over a physical triangle `T` is
//! `area(T) * sum_q w_q f(x_q)`.

use crate::error::{Error, Result};

/// Quadrature degree used by default throughout the crate (exact for the
/// products of P1 functions and basis gradients that appear in the scheme).
pub const DEFAULT_QUADRATURE_DEGREE: usize = 4;

/// A quadrature rule on the reference triangle: barycentric points and
/// area-normalized positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    /// Polynomial degree integrated exactly.
    pub degree: usize,
    /// Barycentric coordinates of each point (each triple sums to 1).
    pub points: Vec<[f64; 3]>,
    /// Weights summing to 1; multiply by the element area when integrating.
    pub weights: Vec<f64>,
}

impl QuadRule {
    /// Number of quadrature points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True if the rule has no points (never the case for tabulated rules).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Returns a fixed symmetric rule with positive weights that is exact for
/// polynomials of degree at least `min_degree` (supported: 1 through 6).
///
/// Degree 3 is served by the 6-point degree-4 rule because the classical
/// 4-point degree-3 rule has a negative centroid weight.
pub fn reference_quadrature(min_degree: usize) -> Result<QuadRule> {
    // Orbit helpers: S3-symmetric point groups in barycentric coordinates.
    let orbit1 = |pts: &mut Vec<[f64; 3]>, ws: &mut Vec<f64>, w: f64| {
        let t = 1.0 / 3.0;
        pts.push([t, t, t]);
        ws.push(w);
    };
    let orbit3 = |pts: &mut Vec<[f64; 3]>, ws: &mut Vec<f64>, a: f64, w: f64| {
        let b = 0.5 * (1.0 - a);
        pts.push([a, b, b]);
        pts.push([b, a, b]);
        pts.push([b, b, a]);
        ws.extend_from_slice(&[w, w, w]);
    };
    let orbit6 = |pts: &mut Vec<[f64; 3]>, ws: &mut Vec<f64>, a: f64, b: f64, w: f64| {
        let c = 1.0 - a - b;
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            pts.push(p);
            ws.push(w);
        }
    };

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let degree = match min_degree {
        1 => {
            orbit1(&mut points, &mut weights, 1.0);
            1
        }
        2 => {
            orbit3(&mut points, &mut weights, 2.0 / 3.0, 1.0 / 3.0);
            2
        }
        3 | 4 => {
            orbit3(
                &mut points,
                &mut weights,
                0.816_847_572_980_459,
                0.109_951_743_655_322,
            );
            orbit3(
                &mut points,
                &mut weights,
                0.108_103_018_168_070,
                0.223_381_589_678_011,
            );
            4
        }
        5 => {
            orbit1(&mut points, &mut weights, 0.225);
            orbit3(
                &mut points,
                &mut weights,
                0.059_715_871_789_770,
                0.132_394_152_788_506,
            );
            orbit3(
                &mut points,
                &mut weights,
                0.797_426_985_353_087,
                0.125_939_180_544_827,
            );
            5
        }
        6 => {
            orbit3(
                &mut points,
                &mut weights,
                0.873_821_971_016_996,
                0.050_844_906_370_207,
            );
            orbit3(
                &mut points,
                &mut weights,
                0.501_426_509_658_179,
                0.116_786_275_726_379,
            );
            orbit6(
                &mut points,
                &mut weights,
                0.636_502_499_121_399,
                0.310_352_451_033_785,
                0.082_851_075_618_374,
            );
            6
        }
        d => return Err(Error::UnsupportedQuadratureDegree { degree: d }),
    };

    Ok(QuadRule {
        degree,
        points,
        weights,
    })
}
