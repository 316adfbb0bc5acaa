#!/usr/bin/env python3
"""Smoke test for the nch_py extension module.

Build the module first, then run this script:

    cargo build -p nch-py
    cp target/debug/libnch_py.so target/debug/nch_py.so   # linux
    PYTHONPATH=target/debug python3 python/smoke_test.py

The script exercises every binding: mesh construction, an incremental
Simulation, the one-shot run/check entry points, and both convergence
studies on deliberately tiny settings, asserting the structural
identities along the way.  Exit code 0 means all assertions held.
"""

import json
import math
import os
import sys

# Allow running without PYTHONPATH when the cdylib sits in target/debug
# or target/release next to this checkout.  The importable name must be
# nch_py.so; refresh it whenever cargo has rebuilt libnch_py.so (a stale
# hard link would keep pointing at the replaced inode).
_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
for profile in ("debug", "release"):
    d = os.path.join(_root, "target", profile)
    so = os.path.join(d, "nch_py.so")
    lib = os.path.join(d, "libnch_py.so")
    if os.path.exists(lib) and (
        not os.path.exists(so) or not os.path.samefile(lib, so)
    ):
        try:
            os.remove(so)
        except OSError:
            pass
        try:
            os.link(lib, so)
        except OSError:
            import shutil

            shutil.copyfile(lib, so)
    if os.path.exists(so):
        sys.path.insert(0, d)
        break

import nch_py

CSV_COLUMNS = nch_py.CSV_HEADER.split(",")


def base_config(**overrides):
    cfg = {
        "mesh_n": 8,
        "tau": 1e-3,
        "t_final": 5e-3,
        "potential": {"a": 0.01, "b": 1.0, "d": 1.0, "theta_c": 3.0, "gamma": 1e-3},
        "onsager": {"mobility": 1e-2, "conductivity": 5e-2, "cross_coupling": 1e-4},
        "initial_data": {"type": "illustration"},
    }
    cfg.update(overrides)
    return json.dumps(cfg)


def main():
    # --- mesh geometry ---------------------------------------------------
    mesh = nch_py.Mesh(8)
    assert mesh.n == 8 and mesh.num_nodes == 64 and mesh.num_elements == 128
    assert math.isclose(mesh.h, math.sqrt(2.0) / 8.0)
    nodes = mesh.nodes()
    assert len(nodes) == 64 and nodes[0] == (0.0, 0.0)
    assert all(0.0 <= x < 1.0 and 0.0 <= y < 1.0 for x, y in nodes)

    # --- incremental stepping --------------------------------------------
    sim = nch_py.Simulation(base_config())
    assert sim.step_count == 0 and sim.time == 0.0
    rows = [sim.step() for _ in range(3)]
    rows += sim.run(2)
    assert sim.step_count == 5 and math.isclose(sim.time, 5e-3)
    assert len(sim.phi()) == len(sim.mu()) == len(sim.theta()) == 64
    assert all(set(r) == set(CSV_COLUMNS) for r in rows)
    assert all(r["newton_iterations"] >= 1 for r in rows)
    assert all(r["final_residual"] <= 1e-12 for r in rows)

    records = sim.records()
    assert len(records) == 6 and records[0]["step"] == 0
    mass0 = records[0]["mass"]
    for prev, cur in zip(records, records[1:]):
        assert abs(cur["mass"] - mass0) <= 1e-12, "mass drifted"
        assert cur["energy"] <= prev["energy"] + 1e-12, "energy increased"
        assert cur["entropy"] >= prev["entropy"] - 1e-12, "entropy decreased"
        gap = cur["production"] - (cur["entropy"] - prev["entropy"]) / sim.tau
        assert abs(gap) <= 1e-10, "production identity violated"
    assert min(sim.theta()) > 0.0

    csv_text = sim.csv()
    lines = csv_text.strip().split("\n")
    assert lines[0] == nch_py.CSV_HEADER and len(lines) == 7

    vtk_text = sim.vtk()
    assert vtk_text.startswith("# vtk DataFile Version 2.0")
    for field in ("phi", "mu", "theta"):
        assert f"SCALARS {field} double 1" in vtk_text

    # --- error mapping ----------------------------------------------------
    try:
        nch_py.Simulation("{\"mesh_n\": 8, \"bogus\": 1}")
    except ValueError as err:
        assert str(err).startswith("config:"), err
    else:
        raise AssertionError("unknown config key was accepted")

    try:
        nch_py.Simulation(base_config(initial_data={"type": "constant", "phi": 0.5, "theta": -1.0}))
        raise AssertionError("negative temperature was accepted")
    except (ValueError, RuntimeError):
        pass

    # --- one-shot run -----------------------------------------------------
    out = nch_py.run(base_config())
    assert len(out["records"]) == 6
    assert len(out["phi"]) == 64 and math.isclose(out["time"], 5e-3)
    # Same configuration, same trajectory: bindings and driver must agree.
    assert out["records"][-1]["energy"] == records[-1]["energy"]

    # --- structural check ---------------------------------------------------
    report = nch_py.check(base_config())
    assert report["passed"], report["text"]
    names = {line["name"] for line in report["lines"]}
    assert "mass conservation" in names and len(report["lines"]) >= 5

    # --- convergence studies (tiny settings) ------------------------------
    # The study's step sizes are fixed at tau_k = 0.1 * 2^-k, so t_final
    # must be a multiple of the coarsest one (3.125e-3 at k = 5).
    time_cfg = base_config(
        mesh_n=8,
        tau=3.125e-3,
        t_final=1.25e-2,
        initial_data={"type": "convergence", "theta_center": [0.5, 0.5]},
        time_levels={"k_min": 5, "k_max": 7},
    )
    table = nch_py.converge_time(time_cfg)
    assert len(table["rows"]) == 2
    assert set(table["rows"][0]["errors"]) == set(nch_py.ERROR_LABELS)
    assert all(e > 0.0 for e in table["rows"][0]["errors"].values())
    eocs = table["rows"][1]["eocs"]
    assert all(e is not None for e in eocs.values())
    # The temperature components contract at near second order (squared
    # norms) even on this coarse mesh; phi is limited by the rough
    # initial data and is asserted loosely.
    assert eocs["err(theta)"] > 1.5 and eocs["err(grad theta)"] > 1.5, table["text"]
    assert eocs["err(grad phi)"] > 0.5, table["text"]

    space_cfg = base_config(
        tau=1e-3,
        t_final=5e-3,
        initial_data={"type": "convergence", "theta_center": [0.5, 0.5]},
        space_levels={"k_min": 3, "k_max": 4},
    )
    table = nch_py.converge_space(space_cfg)
    assert len(table["rows"]) == 1
    assert all(e > 0.0 for e in table["rows"][0]["errors"].values())
    assert "level" in table["text"]

    print("smoke test passed: mesh, stepping, identities, run/check, studies")


if __name__ == "__main__":
    main()
