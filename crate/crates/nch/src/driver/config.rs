//! JSON run configuration: schema, validation and translation into solver
//! settings.
//!
//! The schema mirrors the public types of the scheme and thermo modules;
//! unknown keys are rejected everywhere so that typos fail loudly instead of
//! silently running with defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{reference_quadrature, DEFAULT_QUADRATURE_DEGREE};
use crate::scheme::{InitialData, SchemeConfig};
use crate::thermo::{self, OnsagerCoeffs, PotentialParams};

/// Where and how often simulation artifacts are written.  All outputs are
/// optional; an empty block runs the simulation in memory only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Path of the per-step diagnostics table.
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Directory for field snapshots (created if missing).
    #[serde(default)]
    pub vtk_dir: Option<PathBuf>,
    /// A snapshot is written every this many steps (plus the final state).
    #[serde(default = "default_snapshot_stride")]
    pub snapshot_stride: usize,
}

fn default_snapshot_stride() -> usize {
    100
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            csv: None,
            vtk_dir: None,
            snapshot_stride: default_snapshot_stride(),
        }
    }
}

/// Inclusive refinement-level range of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRange {
    pub k_min: u32,
    pub k_max: u32,
}

impl LevelRange {
    /// Validates that the range spans at least one refinement pair.
    pub fn validate(&self, what: &str) -> Result<()> {
        if self.k_min + 1 > self.k_max {
            return Err(Error::config(format!(
                "{what}: k_max must exceed k_min (got {} ..= {})",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }
}

/// One simulation run as described by a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Mesh subdivisions per axis.
    pub mesh_n: usize,
    /// Time step size.
    pub tau: f64,
    /// Final time; must be an integer multiple of `tau`.
    pub t_final: f64,
    /// Free-energy parameters.
    pub potential: PotentialParams,
    /// Transport coefficients.
    pub onsager: OnsagerCoeffs,
    /// Newton residual tolerance (infinity norm).
    #[serde(default = "default_newton_tol")]
    pub newton_tol: f64,
    /// Newton iteration cap per step.
    #[serde(default = "default_newton_max_iter")]
    pub newton_max_iter: usize,
    /// Polynomial degree the quadrature rule must integrate exactly.
    #[serde(default = "default_quadrature_degree")]
    pub quadrature_degree: usize,
    /// Initial data profile.
    pub initial_data: InitialData,
    /// Artifact outputs.
    #[serde(default)]
    pub output: OutputConfig,
    /// Refinement range of the spatial convergence study
    /// (mesh subdivisions run over n = 2^k).
    #[serde(default)]
    pub space_levels: Option<LevelRange>,
    /// Refinement range of the temporal convergence study
    /// (step sizes run over tau_k = 0.1 * 2^-k).
    #[serde(default)]
    pub time_levels: Option<LevelRange>,
}

fn default_newton_tol() -> f64 {
    1e-12
}

fn default_newton_max_iter() -> usize {
    25
}

fn default_quadrature_degree() -> usize {
    DEFAULT_QUADRATURE_DEGREE
}

impl RunConfig {
    /// Parses and validates a JSON configuration file.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        RunConfig::from_json(&text)
    }

    /// Parses and validates a JSON configuration string.
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("cannot parse configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks mesh, time grid and physical parameters.
    pub fn validate(&self) -> Result<()> {
        if self.mesh_n < 2 {
            return Err(Error::config(format!(
                "mesh_n must be at least 2, got {}",
                self.mesh_n
            )));
        }
        self.num_steps()?;
        self.potential.validate()?;
        thermo::validate_onsager(&self.onsager)?;
        if !(self.newton_tol > 0.0) {
            return Err(Error::NonpositiveParameter {
                name: "newton_tol",
                value: self.newton_tol,
            });
        }
        reference_quadrature(self.quadrature_degree)?;
        if let Some(range) = &self.space_levels {
            range.validate("space_levels")?;
        }
        if let Some(range) = &self.time_levels {
            range.validate("time_levels")?;
        }
        if self.output.snapshot_stride == 0 {
            return Err(Error::config("snapshot_stride must be positive"));
        }
        Ok(())
    }

    /// Number of uniform time steps; errors unless `t_final / tau` is an
    /// integer up to a few units in the last place (the uniform grid must
    /// hit the final time exactly).
    pub fn num_steps(&self) -> Result<usize> {
        steps_for(self.t_final, self.tau)
    }

    /// Solver settings implied by this configuration.
    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        let mut cfg = SchemeConfig::new(self.tau, self.potential, self.onsager)?;
        cfg.newton_tol = self.newton_tol;
        cfg.newton_max_iter = self.newton_max_iter;
        cfg.quad = reference_quadrature(self.quadrature_degree)?;
        Ok(cfg)
    }
}

/// Step count of a uniform time grid over `[0, t_final]`; errors unless
/// `t_final / tau` is an integer up to a few units in the last place.
pub(crate) fn steps_for(t_final: f64, tau: f64) -> Result<usize> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::NonpositiveParameter {
            name: "tau",
            value: tau,
        });
    }
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::NonpositiveParameter {
            name: "t_final",
            value: t_final,
        });
    }
    let ratio = t_final / tau;
    let steps = ratio.round();
    if (ratio - steps).abs() > 4.0 * f64::EPSILON * ratio.max(1.0) || steps < 1.0 {
        return Err(Error::config(format!(
            "t_final / tau = {ratio} is not an integer number of steps"
        )));
    }
    Ok(steps as usize)
}
