//! Simulation driver: configuration, time loop, artifact output, and the
//! two self-convergence studies.

pub mod config;
pub mod output;

use std::fmt;
use std::path::Path;

use crate::diagnostics::{initial_record, record_step, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::fem::{norms_of_difference, NodalField};
use crate::mesh::{build_periodic_unit_square_mesh, prolong_nodal, Mesh};
use crate::scheme::{initial_state, InitialData, SchemeConfig, State, Stepper};

pub use config::{LevelRange, OutputConfig, RunConfig};
pub use output::{render_csv, render_vtk_snapshot, write_csv, write_vtk_snapshot, CSV_HEADER};

/// Default refinement range of the spatial study (mesh n = 2^k).
pub const DEFAULT_SPACE_LEVELS: LevelRange = LevelRange { k_min: 4, k_max: 6 };
/// Default refinement range of the temporal study (tau_k = 0.1 * 2^-k).
pub const DEFAULT_TIME_LEVELS: LevelRange = LevelRange { k_min: 5, k_max: 8 };

/// Result of a completed simulation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_state: State,
    /// One record per time level, starting with the initial state (so a run
    /// of `k` steps yields `k + 1` records).
    pub records: Vec<DiagnosticsRecord>,
}

fn snapshot_path(dir: &Path, step: usize) -> std::path::PathBuf {
    dir.join(format!("snapshot_{step:06}.vtk"))
}

/// Runs the configured time loop, recording diagnostics each step and
/// writing CSV/VTK artifacts as requested.
///
/// On a solver failure the error carries the 1-based index of the failed
/// step, and the diagnostics of all completed steps are still written to the
/// CSV path (the artifacts then describe the last good state).
pub fn run_simulation(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let steps = cfg.num_steps()?;
    let scheme_cfg = cfg.scheme_config()?;
    let mesh = build_periodic_unit_square_mesh(cfg.mesh_n)?;
    let state0 = initial_state(&mesh, &scheme_cfg, &cfg.initial_data);

    if let Some(dir) = &cfg.output.vtk_dir {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        write_vtk_snapshot(&mesh, &state0, &snapshot_path(dir, 0))?;
    }

    let mut records = vec![initial_record(&mesh, &scheme_cfg, &state0)?];
    let mut stepper = Stepper::new(&mesh, scheme_cfg.clone())?;
    let mut state = state0;
    for step in 1..=steps {
        let advanced = (|| -> Result<State> {
            let (next, stats) = stepper.step(&state)?;
            let rec = record_step(
                &mesh,
                &scheme_cfg,
                records.last().expect("initial record present"),
                &next,
                &state,
                &stats,
            )?;
            records.push(rec);
            if let Some(dir) = &cfg.output.vtk_dir {
                if step % cfg.output.snapshot_stride == 0 || step == steps {
                    write_vtk_snapshot(&mesh, &next, &snapshot_path(dir, step))?;
                }
            }
            Ok(next)
        })();
        match advanced {
            Ok(next) => state = next,
            Err(source) => {
                if let Some(path) = &cfg.output.csv {
                    write_csv(&records, path)?;
                }
                return Err(Error::TimeStep {
                    step,
                    source: Box::new(source),
                });
            }
        }
    }
    if let Some(path) = &cfg.output.csv {
        write_csv(&records, path)?;
    }
    Ok(RunOutcome {
        final_state: state,
        records,
    })
}

/// Experimental order of convergence of one refinement:
/// `log2(err_coarse / err_fine)`.
pub fn eoc(err_coarse: f64, err_fine: f64) -> Result<f64> {
    for (name, value) in [("err_coarse", err_coarse), ("err_fine", err_fine)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonpositiveParameter { name, value });
        }
    }
    Ok((err_coarse / err_fine).log2())
}

/// Human-readable labels of the four Cauchy errors, in table column order.
pub const ERROR_LABELS: [&str; 4] = [
    "err(grad phi)",
    "err(grad mu)",
    "err(theta)",
    "err(grad theta)",
];

/// One refinement pair of a convergence study.  `errors` are squared norms
/// of the difference between this level and the next finer one, in the
/// order of [`ERROR_LABELS`]: max-in-time H1 of phi, time-integrated H1 of
/// mu, max-in-time L2 of theta, time-integrated H1 of theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: u32,
    pub errors: [f64; 4],
    /// Order estimates against the previous row; absent on the first row
    /// and wherever an error vanishes.
    pub eocs: [Option<f64>; 4],
}

/// Rows of a self-convergence study, coarsest refinement pair first.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    fn from_level_errors(levels: Vec<(u32, [f64; 4])>) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
        for (level, errors) in levels {
            let eocs = match rows.last() {
                None => [None; 4],
                Some(prev) => {
                    let mut eocs = [None; 4];
                    for i in 0..4 {
                        if prev.errors[i] > 0.0 && errors[i] > 0.0 {
                            eocs[i] = Some((prev.errors[i] / errors[i]).log2());
                        }
                    }
                    eocs
                }
            };
            rows.push(ConvergenceRow {
                level,
                errors,
                eocs,
            });
        }
        ConvergenceTable { rows }
    }

    /// The order estimates of the last (finest) refinement pair.
    pub fn final_eocs(&self) -> [Option<f64>; 4] {
        self.rows.last().map_or([None; 4], |r| r.eocs)
    }
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>5}", "level")?;
        for label in ERROR_LABELS {
            write!(f, "  {label:>15}  {:>6}", "eoc")?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(f, "{:>5}", row.level)?;
            for i in 0..4 {
                match row.eocs[i] {
                    Some(e) => write!(f, "  {:>15.6e}  {e:>6.2}", row.errors[i])?,
                    None => write!(f, "  {:>15.6e}  {:>6}", row.errors[i], "-")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs the time loop on one mesh and keeps every time-level state.
fn run_trajectory(
    mesh: &Mesh,
    scheme_cfg: &SchemeConfig,
    data: &InitialData,
    steps: usize,
) -> Result<Vec<State>> {
    let mut stepper = Stepper::new(mesh, scheme_cfg.clone())?;
    let mut traj = Vec::with_capacity(steps + 1);
    traj.push(initial_state(mesh, scheme_cfg, data));
    for step in 1..=steps {
        let (next, _) = stepper
            .step(traj.last().expect("nonempty trajectory"))
            .map_err(|source| Error::TimeStep {
                step,
                source: Box::new(source),
            })?;
        traj.push(next);
    }
    Ok(traj)
}

/// Accumulates the four Cauchy errors over paired time levels.
struct ErrorAccumulator {
    tau: f64,
    max_h1_phi: f64,
    sum_h1_mu: f64,
    max_l2_theta: f64,
    sum_h1_theta: f64,
}

impl ErrorAccumulator {
    fn new(tau: f64) -> Self {
        ErrorAccumulator {
            tau,
            max_h1_phi: 0.0,
            sum_h1_mu: 0.0,
            max_l2_theta: 0.0,
            sum_h1_theta: 0.0,
        }
    }

    /// Feeds the differences of one paired time node; `node` 0 is the shared
    /// initial level, which contributes to the maxima but not to the
    /// time-integrated sums.
    fn add(
        &mut self,
        mesh: &Mesh,
        quad: &crate::fem::QuadRule,
        node: usize,
        phi: (&NodalField, &NodalField),
        mu: (&NodalField, &NodalField),
        theta: (&NodalField, &NodalField),
    ) -> Result<()> {
        let (_, h1_phi) = norms_of_difference(mesh, quad, phi.0, phi.1)?;
        let (l2_theta, h1_theta) = norms_of_difference(mesh, quad, theta.0, theta.1)?;
        self.max_h1_phi = self.max_h1_phi.max(h1_phi);
        self.max_l2_theta = self.max_l2_theta.max(l2_theta);
        if node > 0 {
            let (_, h1_mu) = norms_of_difference(mesh, quad, mu.0, mu.1)?;
            self.sum_h1_mu += self.tau * h1_mu;
            self.sum_h1_theta += self.tau * h1_theta;
        }
        Ok(())
    }

    fn errors(&self) -> [f64; 4] {
        [
            self.max_h1_phi,
            self.sum_h1_mu,
            self.max_l2_theta,
            self.sum_h1_theta,
        ]
    }
}

/// Spatial self-convergence study: runs the configured problem on meshes
/// n = 2^k for k in the given range with a fixed time step, and measures
/// Cauchy errors between consecutive refinement levels (the coarse solution
/// is prolonged to the finer mesh at every shared time node).
pub fn self_convergence_space(base: &RunConfig, levels: LevelRange) -> Result<ConvergenceTable> {
    levels.validate("space_levels")?;
    let steps = base.num_steps()?;
    let scheme_cfg = base.scheme_config()?;
    let quad = &scheme_cfg.quad;

    let mut previous: Option<(u32, Mesh, Vec<State>)> = None;
    let mut level_errors = Vec::new();
    for k in levels.k_min..=levels.k_max {
        let n = 2usize
            .checked_pow(k)
            .ok_or_else(|| Error::config(format!("refinement level {k} overflows the mesh size")))?;
        let mesh = build_periodic_unit_square_mesh(n)
            .map_err(|source| level_error(k, source))?;
        let traj = run_trajectory(&mesh, &scheme_cfg, &base.initial_data, steps)
            .map_err(|source| level_error(k, source))?;

        if let Some((k_coarse, coarse_mesh, coarse_traj)) = &previous {
            let mut acc = ErrorAccumulator::new(scheme_cfg.tau);
            for (node, (coarse, fine)) in coarse_traj.iter().zip(&traj).enumerate() {
                let phi = prolong_nodal(coarse_mesh, &mesh, &coarse.phi)?;
                let mu = prolong_nodal(coarse_mesh, &mesh, &coarse.mu)?;
                let theta = prolong_nodal(coarse_mesh, &mesh, &coarse.theta)?;
                acc.add(
                    &mesh,
                    quad,
                    node,
                    (&phi, &fine.phi),
                    (&mu, &fine.mu),
                    (&theta, &fine.theta),
                )?;
            }
            level_errors.push((*k_coarse, acc.errors()));
        }
        previous = Some((k, mesh, traj));
    }
    Ok(ConvergenceTable::from_level_errors(level_errors))
}

/// Temporal self-convergence study: runs the configured problem on one mesh
/// with step sizes tau_k = 0.1 * 2^-k for k in the given range, and measures
/// Cauchy errors between consecutive refinements at the coarse level's time
/// nodes (coarse node n pairs with fine node 2n).
pub fn self_convergence_time(base: &RunConfig, levels: LevelRange) -> Result<ConvergenceTable> {
    levels.validate("time_levels")?;
    let mesh = build_periodic_unit_square_mesh(base.mesh_n)?;
    let base_scheme = base.scheme_config()?;
    let quad = &base_scheme.quad;

    let mut previous: Option<(u32, f64, Vec<State>)> = None;
    let mut level_errors = Vec::new();
    for k in levels.k_min..=levels.k_max {
        let tau_k = 0.1 * (0.5f64).powi(k as i32);
        let steps = config::steps_for(base.t_final, tau_k)
            .map_err(|source| level_error(k, source))?;
        let mut scheme_cfg = base_scheme.clone();
        scheme_cfg.tau = tau_k;
        let traj = run_trajectory(&mesh, &scheme_cfg, &base.initial_data, steps)
            .map_err(|source| level_error(k, source))?;

        if let Some((k_coarse, tau_coarse, coarse_traj)) = &previous {
            let mut acc = ErrorAccumulator::new(*tau_coarse);
            for (node, coarse) in coarse_traj.iter().enumerate() {
                let fine = &traj[2 * node];
                acc.add(
                    &mesh,
                    quad,
                    node,
                    (&coarse.phi, &fine.phi),
                    (&coarse.mu, &fine.mu),
                    (&coarse.theta, &fine.theta),
                )?;
            }
            level_errors.push((*k_coarse, acc.errors()));
        }
        previous = Some((k, tau_k, traj));
    }
    Ok(ConvergenceTable::from_level_errors(level_errors))
}

fn level_error(level: u32, source: Error) -> Error {
    Error::RefinementLevel {
        level,
        source: Box::new(source),
    }
}

/// One line of the structural-identity report.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail verdicts of all structural identities on one run.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(
                f,
                "{} {} ({})",
                if line.passed { "PASS" } else { "FAIL" },
                line.name,
                line.detail
            )?;
        }
        Ok(())
    }
}

/// Runs the configured simulation and verifies the structural identities of
/// the discretization on its diagnostics: mass conservation, entropy
/// monotonicity, energy dissipation, the production/entropy-increment
/// identity, and temperature positivity.
pub fn structural_check(cfg: &RunConfig) -> Result<CheckReport> {
    let outcome = run_simulation(cfg)?;
    Ok(check_records(&outcome.records, cfg.tau))
}

/// Evaluates the structural identities on recorded diagnostics.
pub fn check_records(records: &[DiagnosticsRecord], tau: f64) -> CheckReport {
    let first = &records[0];
    let mut mass_drift: f64 = 0.0;
    let mut min_entropy_increment = f64::INFINITY;
    let mut max_energy_increment = f64::NEG_INFINITY;
    let mut identity_gap: f64 = 0.0;
    let mut theta_min = first.theta_min;
    for pair in records.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        mass_drift = mass_drift.max((cur.mass - first.mass).abs());
        min_entropy_increment = min_entropy_increment.min(cur.entropy - prev.entropy);
        max_energy_increment = max_energy_increment.max(cur.energy - prev.energy);
        identity_gap = identity_gap.max((cur.production - (cur.entropy - prev.entropy) / tau).abs());
        theta_min = theta_min.min(cur.theta_min);
    }
    let steps = records.len() - 1;
    let lines = vec![
        CheckLine {
            name: "mass conservation",
            passed: mass_drift <= 1e-10,
            detail: format!("max |mass(k) - mass(0)| = {mass_drift:.3e} over {steps} steps"),
        },
        CheckLine {
            name: "entropy production nonnegative",
            passed: steps == 0 || min_entropy_increment >= -1e-11,
            detail: format!("min entropy increment = {min_entropy_increment:.3e}"),
        },
        CheckLine {
            name: "energy dissipation",
            passed: steps == 0 || max_energy_increment <= 1e-11,
            detail: format!("max energy increment = {max_energy_increment:.3e}"),
        },
        CheckLine {
            name: "entropy increment matches production",
            passed: identity_gap <= 1e-10,
            detail: format!("max |D_h - delta_s/tau| = {identity_gap:.3e}"),
        },
        CheckLine {
            name: "temperature positivity",
            passed: theta_min > 0.0,
            detail: format!("min nodal temperature = {theta_min:.6e}"),
        },
    ];
    CheckReport { lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{OnsagerCoeffs, PotentialParams};

    fn base_config(mesh_n: usize, tau: f64, t_final: f64, data: InitialData) -> RunConfig {
        RunConfig {
            mesh_n,
            tau,
            t_final,
            potential: PotentialParams::reference(),
            onsager: OnsagerCoeffs::reference(1e-4),
            newton_tol: 1e-12,
            newton_max_iter: 25,
            quadrature_degree: 4,
            initial_data: data,
            output: OutputConfig::default(),
            space_levels: None,
            time_levels: None,
        }
    }

    #[test]
    fn eoc_matches_reference_values() {
        // halving the error of a second-order method across one refinement
        assert_eq!(eoc(4.0, 1.0).unwrap(), 2.0);
        assert_eq!(eoc(0.37, 0.37).unwrap(), 0.0);
        // published convergence-table pair for the phase-field gradient
        let rate = eoc(1.36e-3, 4.35e-4).unwrap();
        assert!((rate - (1.36e-3f64 / 4.35e-4).log2()).abs() < 1e-15);
        assert!((rate - 1.65).abs() < 0.006, "{rate}");
    }

    #[test]
    fn eoc_rejects_nonpositive_errors() {
        assert!(matches!(
            eoc(0.0, 1.0),
            Err(Error::NonpositiveParameter {
                name: "err_coarse",
                ..
            })
        ));
        assert!(matches!(
            eoc(1.0, -2.0),
            Err(Error::NonpositiveParameter {
                name: "err_fine",
                ..
            })
        ));
    }

    #[test]
    fn eoc_composes_over_two_refinements() {
        let (e0, e1, e2) = (7.3e-3, 1.9e-3, 4.8e-4);
        let total = eoc(e0, e2).unwrap();
        let sum = eoc(e0, e1).unwrap() + eoc(e1, e2).unwrap();
        assert!((total - sum).abs() < 1e-12);
    }

    #[test]
    fn constant_initial_data_is_a_fixed_point_of_the_run() {
        let cfg = base_config(
            4,
            0.1,
            1.0,
            InitialData::Constant {
                phi: 0.6,
                theta: 4.0,
            },
        );
        let outcome = run_simulation(&cfg).unwrap();
        assert_eq!(outcome.records.len(), 11);
        for v in outcome.final_state.phi.values() {
            assert!((v - 0.6).abs() <= 1e-12);
        }
        for v in outcome.final_state.theta.values() {
            assert!((v - 4.0).abs() <= 1e-12);
        }
        for rec in &outcome.records {
            assert_eq!(rec.production, 0.0, "step {}", rec.step);
        }
        let report = check_records(&outcome.records, cfg.tau);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.lines.len(), 5);
    }

    #[test]
    fn runs_are_deterministic_end_to_end() {
        let dir = std::env::temp_dir().join("nch-determinism-test");
        std::fs::create_dir_all(&dir).unwrap();
        let mut cfg = base_config(4, 1e-3, 5e-3, InitialData::illustration());
        let mut render = |tag: &str| {
            cfg.output.csv = Some(dir.join(format!("{tag}.csv")));
            let outcome = run_simulation(&cfg).unwrap();
            let body = std::fs::read_to_string(cfg.output.csv.as_ref().unwrap()).unwrap();
            (body, render_csv(&outcome.records))
        };
        let (file_a, mem_a) = render("a");
        let (file_b, mem_b) = render("b");
        assert_eq!(file_a, file_b);
        assert_eq!(mem_a, mem_b);
        assert_eq!(file_a, mem_a);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn failed_steps_carry_their_index_and_flush_partial_csv() {
        let dir = std::env::temp_dir().join("nch-partial-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let csv = dir.join("partial.csv");
        let mut cfg = base_config(4, 1e-3, 5e-3, InitialData::illustration());
        cfg.newton_max_iter = 0;
        cfg.output.csv = Some(csv.clone());
        match run_simulation(&cfg) {
            Err(Error::TimeStep { step: 1, source }) => {
                assert!(matches!(*source, Error::NewtonDiverged { .. }));
            }
            other => panic!("expected step-1 failure, got {other:?}"),
        }
        let body = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(body.lines().count(), 2, "header plus the initial record");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn vtk_snapshots_follow_the_stride() {
        let dir = std::env::temp_dir().join("nch-stride-test");
        let _ = std::fs::remove_dir_all(&dir);
        let mut cfg = base_config(
            4,
            0.1,
            0.5,
            InitialData::Constant {
                phi: 0.5,
                theta: 2.0,
            },
        );
        cfg.output.vtk_dir = Some(dir.clone());
        cfg.output.snapshot_stride = 2;
        run_simulation(&cfg).unwrap();
        let mut names: Vec<String> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(
            names,
            vec![
                "snapshot_000000.vtk",
                "snapshot_000002.vtk",
                "snapshot_000004.vtk",
                "snapshot_000005.vtk",
            ]
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn space_study_reports_zero_errors_for_stationary_constant_data() {
        let cfg = base_config(
            4,
            0.05,
            0.1,
            InitialData::Constant {
                phi: 0.55,
                theta: 3.5,
            },
        );
        let table =
            self_convergence_space(&cfg, LevelRange { k_min: 2, k_max: 3 }).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].level, 2);
        assert_eq!(table.rows[0].errors, [0.0; 4]);
        assert_eq!(table.rows[0].eocs, [None; 4]);
    }

    #[test]
    fn time_study_reports_zero_errors_for_stationary_constant_data() {
        let cfg = base_config(
            4,
            0.05,
            0.1,
            InitialData::Constant {
                phi: 0.55,
                theta: 3.5,
            },
        );
        let table = self_convergence_time(&cfg, LevelRange { k_min: 1, k_max: 2 }).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].level, 1);
        assert_eq!(table.rows[0].errors, [0.0; 4]);
    }

    #[test]
    fn time_study_produces_positive_errors_and_rates_for_dynamics() {
        // tiny mesh: the point is table shape and positivity, not accuracy
        let cfg = base_config(4, 0.05, 0.1, InitialData::convergence());
        let table = self_convergence_time(&cfg, LevelRange { k_min: 1, k_max: 3 }).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].level, 1);
        assert_eq!(table.rows[1].level, 2);
        assert_eq!(table.rows[0].eocs, [None; 4]);
        for row in &table.rows {
            for (i, err) in row.errors.iter().enumerate() {
                assert!(*err > 0.0, "level {} error {i} = {err}", row.level);
            }
        }
        for e in table.rows[1].eocs {
            assert!(e.is_some());
        }
        assert_eq!(table.final_eocs(), table.rows[1].eocs);
        // the Display form lists every level and a dash for missing rates
        let rendered = table.to_string();
        assert!(rendered.contains("err(grad phi)"));
        assert!(rendered.contains('-'), "{rendered}");
    }

    #[test]
    fn structural_check_passes_on_a_short_run() {
        let cfg = base_config(4, 1e-3, 5e-3, InitialData::illustration());
        let report = structural_check(&cfg).unwrap();
        assert!(report.all_passed(), "{report}");
        let rendered = report.to_string();
        assert_eq!(rendered.lines().count(), 5);
        assert!(rendered.lines().all(|l| l.starts_with("PASS")));
    }
}
