//! Artifact writers: per-step diagnostics as CSV and field snapshots as
//! legacy VTK.
//!
//! All numbers are written deterministically (fixed formatting, fixed
//! ordering), so re-running a configuration reproduces every output file
//! byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::scheme::State;

/// Column header of the diagnostics table.
pub const CSV_HEADER: &str = "step,time,mass,energy,entropy,production,energy_increment,\
                              theta_min,theta_max,newton_iterations,final_residual";

/// Scientific notation with 17 significant digits: enough for every f64 to
/// survive a parse round trip bit-exactly.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders the diagnostics table (header plus one row per record).
pub fn render_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 240);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.step,
            real(r.time),
            real(r.mass),
            real(r.energy),
            real(r.entropy),
            real(r.production),
            real(r.energy_increment),
            real(r.theta_min),
            real(r.theta_max),
            r.newton_iterations,
            real(r.final_residual),
        );
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the diagnostics table to `path` (header-only when `records` is
/// empty).
pub fn write_csv(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    write_file(path, &render_csv(records))
}

/// Renders a snapshot as a legacy ASCII VTK 2.0 unstructured grid: node
/// coordinates (third coordinate zero), triangle cells (type 5), and the
/// three nodal scalars "phi", "mu", "theta".
///
/// Cells reference the representative (wrapped) node of each corner, so
/// triangles crossing the periodic seam render folded back across the
/// square; values are nevertheless complete and correct per node.
pub fn render_vtk_snapshot(mesh: &Mesh, state: &State) -> Result<String> {
    state.check_sizes(mesh)?;
    let n = mesh.num_nodes();
    let m = mesh.num_elements();
    let mut out = String::with_capacity(64 * n + 32 * m);
    out.push_str("# vtk DataFile Version 2.0\n");
    let _ = writeln!(out, "nonisothermal phase-field state at time {}", state.time);
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");

    let _ = writeln!(out, "POINTS {n} double");
    for i in 0..n {
        let p = mesh.node(i);
        let _ = writeln!(out, "{} {} 0", p[0], p[1]);
    }

    let _ = writeln!(out, "CELLS {m} {}", 4 * m);
    for geo in mesh.elements() {
        let _ = writeln!(out, "3 {} {} {}", geo.nodes[0], geo.nodes[1], geo.nodes[2]);
    }
    let _ = writeln!(out, "CELL_TYPES {m}");
    for _ in 0..m {
        out.push_str("5\n");
    }

    let _ = writeln!(out, "POINT_DATA {n}");
    for (name, field) in [
        ("phi", &state.phi),
        ("mu", &state.mu),
        ("theta", &state.theta),
    ] {
        let _ = writeln!(out, "SCALARS {name} double 1");
        out.push_str("LOOKUP_TABLE default\n");
        for i in 0..n {
            let _ = writeln!(out, "{}", real(field[i]));
        }
    }
    Ok(out)
}

/// Writes a VTK snapshot of the state to `path`.
pub fn write_vtk_snapshot(mesh: &Mesh, state: &State, path: &Path) -> Result<()> {
    write_file(path, &render_vtk_snapshot(mesh, state)?)
}
