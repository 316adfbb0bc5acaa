//! Python extension module for the non-isothermal Cahn-Hilliard simulator.
//!
//! Exposes the same entry points as the `nch` command-line tool — full runs,
//! the two self-convergence studies and the structural-identity check — plus
//! an incremental [`Simulation`] class for stepping a run from Python.  All
//! entry points take the JSON configuration text used by the CLI.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nch::diagnostics::{initial_record, record_step, DiagnosticsRecord};
use nch::driver::{
    render_csv, render_vtk_snapshot, run_simulation, self_convergence_space,
    self_convergence_time, structural_check, CheckReport, ConvergenceTable, RunConfig,
    CSV_HEADER, DEFAULT_SPACE_LEVELS, DEFAULT_TIME_LEVELS, ERROR_LABELS,
};
use nch::mesh::build_periodic_unit_square_mesh;
use nch::scheme::{initial_state, solve_timestep, SchemeConfig, State};

/// Configuration problems become `ValueError`, solver failures `RuntimeError`.
/// The message starts with the stable error kind used by the CLI's JSON
/// error output, e.g. `"newton_diverged: ..."`.
fn map_err(err: nch::Error) -> PyErr {
    let msg = format!("{}: {}", err.kind(), err);
    match err {
        nch::Error::Config { .. } | nch::Error::Io { .. } => PyValueError::new_err(msg),
        _ => PyRuntimeError::new_err(msg),
    }
}

fn record_dict<'py>(py: Python<'py>, rec: &DiagnosticsRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("step", rec.step)?;
    d.set_item("time", rec.time)?;
    d.set_item("mass", rec.mass)?;
    d.set_item("energy", rec.energy)?;
    d.set_item("entropy", rec.entropy)?;
    d.set_item("production", rec.production)?;
    d.set_item("energy_increment", rec.energy_increment)?;
    d.set_item("theta_min", rec.theta_min)?;
    d.set_item("theta_max", rec.theta_max)?;
    d.set_item("newton_iterations", rec.newton_iterations)?;
    d.set_item("final_residual", rec.final_residual)?;
    Ok(d)
}

fn table_dict<'py>(py: Python<'py>, table: &ConvergenceTable) -> PyResult<Bound<'py, PyDict>> {
    let rows: Vec<Bound<'py, PyDict>> = table
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("level", row.level)?;
            let errors = PyDict::new(py);
            let eocs = PyDict::new(py);
            for (i, label) in ERROR_LABELS.iter().enumerate() {
                errors.set_item(label, row.errors[i])?;
                eocs.set_item(label, row.eocs[i])?;
            }
            d.set_item("errors", errors)?;
            d.set_item("eocs", eocs)?;
            Ok(d)
        })
        .collect::<PyResult<_>>()?;
    let d = PyDict::new(py);
    d.set_item("rows", rows)?;
    d.set_item("text", table.to_string())?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, report: &CheckReport) -> PyResult<Bound<'py, PyDict>> {
    let lines: Vec<Bound<'py, PyDict>> = report
        .lines
        .iter()
        .map(|line| {
            let d = PyDict::new(py);
            d.set_item("name", line.name)?;
            d.set_item("passed", line.passed)?;
            d.set_item("detail", &line.detail)?;
            Ok(d)
        })
        .collect::<PyResult<_>>()?;
    let d = PyDict::new(py);
    d.set_item("passed", report.all_passed())?;
    d.set_item("lines", lines)?;
    d.set_item("text", report.to_string())?;
    Ok(d)
}

/// Uniform periodic triangulation of the unit square with `n^2` nodes.
#[pyclass(module = "nch_py", frozen)]
struct Mesh {
    inner: nch::mesh::Mesh,
}

#[pymethods]
impl Mesh {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(Mesh {
            inner: build_periodic_unit_square_mesh(n).map_err(map_err)?,
        })
    }

    /// Subdivisions per side.
    #[getter]
    fn n(&self) -> usize {
        self.inner.subdivisions()
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }

    #[getter]
    fn num_elements(&self) -> usize {
        self.inner.num_elements()
    }

    /// Mesh size (longest edge, the cell diagonal).
    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    /// Node coordinates as a list of `(x, y)` pairs in row-major node order.
    fn nodes(&self) -> Vec<(f64, f64)> {
        self.inner.nodes().iter().map(|p| (p[0], p[1])).collect()
    }

    fn __repr__(&self) -> String {
        format!("Mesh(n={})", self.inner.subdivisions())
    }
}

/// One simulation held open for incremental stepping.
///
/// Construct from the same JSON text the CLI accepts; the object owns the
/// mesh, the scheme configuration and the current discrete state.  `step()`
/// advances one time level and returns its diagnostics row as a dict with
/// the CSV column names as keys.
#[pyclass(module = "nch_py")]
struct Simulation {
    mesh: nch::mesh::Mesh,
    cfg: SchemeConfig,
    state: State,
    records: Vec<DiagnosticsRecord>,
}

#[pymethods]
impl Simulation {
    #[new]
    fn new(config_json: &str) -> PyResult<Self> {
        let run_cfg = RunConfig::from_json(config_json).map_err(map_err)?;
        run_cfg.validate().map_err(map_err)?;
        let cfg = run_cfg.scheme_config().map_err(map_err)?;
        let mesh = build_periodic_unit_square_mesh(run_cfg.mesh_n).map_err(map_err)?;
        let state = initial_state(&mesh, &cfg, &run_cfg.initial_data);
        let records = vec![initial_record(&mesh, &cfg, &state).map_err(map_err)?];
        Ok(Simulation {
            mesh,
            cfg,
            state,
            records,
        })
    }

    /// Current simulation time.
    #[getter]
    fn time(&self) -> f64 {
        self.state.time
    }

    /// Time-step size.
    #[getter]
    fn tau(&self) -> f64 {
        self.cfg.tau
    }

    /// Number of completed steps.
    #[getter]
    fn step_count(&self) -> usize {
        self.records.len() - 1
    }

    /// The mesh of this simulation.
    fn mesh(&self) -> Mesh {
        Mesh {
            inner: self.mesh.clone(),
        }
    }

    /// Nodal order-parameter values.
    fn phi(&self) -> Vec<f64> {
        self.state.phi.values().to_vec()
    }

    /// Nodal chemical-potential values.
    fn mu(&self) -> Vec<f64> {
        self.state.mu.values().to_vec()
    }

    /// Nodal temperature values.
    fn theta(&self) -> Vec<f64> {
        self.state.theta.values().to_vec()
    }

    /// Advances one time level; returns the diagnostics row of the new level.
    fn step<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let (next, stats) = solve_timestep(&self.mesh, &self.state, &self.cfg).map_err(map_err)?;
        let rec = record_step(
            &self.mesh,
            &self.cfg,
            self.records.last().expect("initial record present"),
            &next,
            &self.state,
            &stats,
        )
        .map_err(map_err)?;
        self.state = next;
        self.records.push(rec);
        record_dict(py, self.records.last().expect("just pushed"))
    }

    /// Advances `steps` time levels; returns their diagnostics rows.
    fn run<'py>(&mut self, py: Python<'py>, steps: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
        (0..steps).map(|_| self.step(py)).collect()
    }

    /// All diagnostics rows so far, including the initial state.
    fn records<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.records.iter().map(|r| record_dict(py, r)).collect()
    }

    /// The diagnostics recorded so far rendered as CSV text.
    fn csv(&self) -> String {
        render_csv(&self.records)
    }

    /// The current state rendered as a legacy-VTK snapshot.
    fn vtk(&self) -> PyResult<String> {
        render_vtk_snapshot(&self.mesh, &self.state).map_err(map_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Simulation(n={}, tau={}, steps={}, time={})",
            self.mesh.subdivisions(),
            self.cfg.tau,
            self.records.len() - 1,
            self.state.time
        )
    }
}

/// Runs the configured time loop (writing any configured CSV/VTK artifacts)
/// and returns `{"records": [...], "phi": [...], "mu": [...], "theta": [...]}`
/// with the per-step diagnostics and the final nodal fields.
#[pyfunction]
fn run<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyDict>> {
    let cfg = RunConfig::from_json(config_json).map_err(map_err)?;
    let outcome = run_simulation(&cfg).map_err(map_err)?;
    let records: Vec<Bound<'py, PyDict>> = outcome
        .records
        .iter()
        .map(|r| record_dict(py, r))
        .collect::<PyResult<_>>()?;
    let d = PyDict::new(py);
    d.set_item("records", records)?;
    d.set_item("phi", outcome.final_state.phi.values().to_vec())?;
    d.set_item("mu", outcome.final_state.mu.values().to_vec())?;
    d.set_item("theta", outcome.final_state.theta.values().to_vec())?;
    d.set_item("time", outcome.final_state.time)?;
    Ok(d)
}

/// Spatial self-convergence study.  Returns `{"rows": [...], "text": ...}`;
/// each row has the squared Cauchy errors and order estimates keyed by the
/// error labels.
#[pyfunction]
fn converge_space<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyDict>> {
    let cfg = RunConfig::from_json(config_json).map_err(map_err)?;
    let levels = cfg.space_levels.unwrap_or(DEFAULT_SPACE_LEVELS);
    let table = self_convergence_space(&cfg, levels).map_err(map_err)?;
    table_dict(py, &table)
}

/// Temporal self-convergence study; same shape as [`converge_space`].
#[pyfunction]
fn converge_time<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyDict>> {
    let cfg = RunConfig::from_json(config_json).map_err(map_err)?;
    let levels = cfg.time_levels.unwrap_or(DEFAULT_TIME_LEVELS);
    let table = self_convergence_time(&cfg, levels).map_err(map_err)?;
    table_dict(py, &table)
}

/// Runs the configured simulation and verifies the structural identities
/// (mass conservation, entropy monotonicity, energy dissipation, the
/// production identity, temperature positivity).  Returns
/// `{"passed": bool, "lines": [...], "text": ...}`.
#[pyfunction]
fn check<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyDict>> {
    let cfg = RunConfig::from_json(config_json).map_err(map_err)?;
    let report = structural_check(&cfg).map_err(map_err)?;
    report_dict(py, &report)
}

#[pymodule]
fn nch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Mesh>()?;
    m.add_class::<Simulation>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(converge_space, m)?)?;
    m.add_function(wrap_pyfunction!(converge_time, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add("CSV_HEADER", CSV_HEADER)?;
    m.add("ERROR_LABELS", ERROR_LABELS.to_vec())?;
    Ok(())
}
