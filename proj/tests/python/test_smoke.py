"""End-to-end smoke tests for the Python module and the CLI binary."""

import json
import os
import subprocess
import sys

import pytest

import ugfsim


def test_preset_run_fig1a():
    report = ugfsim.run_preset("fig1a")
    assert report["pass"]
    assert abs(report["phases"].midpoint) < 1e-9
    assert abs(report["phases"].action_total) < 1e-9
    assert abs(report["phases"].perturbation_total) < 1e-9


def test_preset_run_fig1b():
    report = ugfsim.run_preset("fig1b")
    expected = -1.6e7 * 9.8 * 0.01
    assert report["pass"]
    assert report["phases"].midpoint == pytest.approx(expected, rel=1e-12)
    assert report["phases"].action_total == pytest.approx(expected, rel=1e-12)


def test_direct_cross_validate():
    seq = ugfsim.build_mach_zehnder(1.6e7, 0.1)
    atom = ugfsim.ParticleState(x=(0.0, 0.0, 0.5))
    mirror = ugfsim.ParticleState()
    field = ugfsim.GravityModel.uniform((0.0, 0.0, -9.8))
    report = ugfsim.cross_validate(seq, 1.44e-25, atom, mirror, field=field)
    assert report.pass_
    assert abs(report.phases.midpoint) < 1e-9
    assert report.closed


def test_shift_budget():
    budget = ugfsim.shift_budget(
        a_G=(0.0, 0.0, -9.8),
        d=(0.0, 0.0, 22.5),
        f0=3.48e18,
        ng=[(0.0, 1.0, (0.0, 0.0, 9.8))],
    )
    assert budget.gravitational_pair_cancels
    assert budget.total_frac == pytest.approx(9.8 * 22.5 / ugfsim.C**2, rel=1e-14)
    assert budget.doppler_g_frac + budget.redshift_frac == 0.0


def test_gravimeter_and_inference():
    reading = ugfsim.gravimeter_reading(ng=[(0.0, 1.0, (0.0, 0.0, 9.81))], t=0.5)
    assert reading == 9.81
    g, discrepancy, sigma = ugfsim.infer_field_difference(9.82, 6.371e6, 3.986e14, 6371.0)
    assert g == pytest.approx(9.820, rel=1e-3)
    assert sigma / g == pytest.approx(2e-3, rel=1e-6)
    assert discrepancy < 1e-3


def test_em_round_trip():
    velocities = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)]
    accels = ugfsim.em_probe_accelerations(
        E=(1.0, 2.0, 3.0), B=(0.1, 0.0, 0.2), charge_to_mass=9.58e7, velocities=velocities
    )
    e, b, residual = ugfsim.reconstruct_em_field(list(zip(velocities, accels)), 9.58e7)
    assert e == pytest.approx((1.0, 2.0, 3.0), rel=1e-10)
    assert b == pytest.approx((0.1, 0.0, 0.2), abs=1e-10)
    assert residual < 1e-6


def test_propagate_free_fall():
    field = ugfsim.GravityModel.uniform((0.0, 0.0, -9.8))
    traj = ugfsim.propagate(ugfsim.ParticleState(x=(0, 0, 10.0)), 1.0, field)
    end = traj.state_at(1.0)
    assert end.x[2] == pytest.approx(10.0 - 0.5 * 9.8, rel=1e-14)
    assert end.v[2] == pytest.approx(-9.8, rel=1e-14)


def test_validation_errors_surface():
    doc = json.loads(ugfsim.preset_document("fig1a"))
    doc["interferometer"]["lazer_k"] = 1.0
    with pytest.raises(ugfsim.UgfValidationError, match="lazer_k"):
        ugfsim.validate_scenario(json.dumps(doc))


def test_sweep_determinism():
    csv_a, pass_a = ugfsim.sweep_preset("fig1b")
    csv_b, pass_b = ugfsim.sweep_preset("fig1b")
    assert pass_a and pass_b
    assert csv_a == csv_b


# --- CLI ---------------------------------------------------------------

CLI = os.environ.get("UGFSIM_CLI")

needs_cli = pytest.mark.skipif(not CLI, reason="UGFSIM_CLI not set")


@needs_cli
def test_cli_preset_run():
    out = subprocess.run([CLI, "preset", "fig1a"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "PASS" in out.stdout


@needs_cli
def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "experiment": "interferometer"}')
    out = subprocess.run([CLI, "validate", str(bad)], capture_output=True, text=True)
    assert out.returncode == 2

    out = subprocess.run([CLI, "preset", "nope"], capture_output=True, text=True)
    assert out.returncode == 2

    good = tmp_path / "good.json"
    good.write_text(ugfsim.preset_document("fig1a"))
    out = subprocess.run([CLI, "validate", str(good)], capture_output=True, text=True)
    assert out.returncode == 0
    assert "OK" in out.stdout


@needs_cli
def test_cli_sweep_byte_identical(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for path in (a, b):
        out = subprocess.run(
            [CLI, "preset", "fig1b", "--sweep", "--quiet", "--out", str(path)],
            capture_output=True,
            text=True,
        )
        assert out.returncode == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().startswith(b"interferometer.mirror_ng.0.a.z,phi_midpoint_rad")


@needs_cli
def test_cli_physics_failure_exit_code(tmp_path):
    # An impossibly tight agreement tolerance turns a passing scenario into a
    # physics-check failure (exit 1), distinct from input errors (exit 2).
    doc = json.loads(ugfsim.preset_document("fig1b"))
    doc["interferometer"]["mirror_ng"][0]["a"][2] = 2.0
    doc["tolerances"] = {"phase": 1e-16}
    bad_tol = tmp_path / "tight.json"
    bad_tol.write_text(json.dumps(doc))
    out = subprocess.run([CLI, "run", str(bad_tol), "--quiet"], capture_output=True, text=True)
    assert out.returncode == 1


@needs_cli
def test_cli_run_with_csv(tmp_path):
    out_csv = tmp_path / "run.csv"
    out = subprocess.run(
        [CLI, "preset", "pound_rebka", "--quiet", "--out", str(out_csv)],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    content = out_csv.read_text().splitlines()
    assert content[0].startswith("doppler_ng_frac")
    assert "2.4533933735982289e-15" in content[1]


@needs_cli
def test_cli_trajectory_export(tmp_path):
    traj_csv = tmp_path / "traj.csv"
    out = subprocess.run(
        [CLI, "preset", "fig1b", "--quiet", "--trajectories", str(traj_csv)],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    lines = traj_csv.read_text().splitlines()
    assert lines[0] == "t_s,z_upper_m,z_lower_m,z_mirror_m,zbar_m"
    assert len(lines) > 100
    # The mirror is pushed against gravity in fig1b, so zbar bends away from
    # its initial offset of 0.5 m by a_NG t^2 / 2 at the end.
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == 0.2
    assert last[4] == pytest.approx(0.5 - 0.5 * 9.8 * 0.2**2, rel=1e-9)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
