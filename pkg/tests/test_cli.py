import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spherium import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_state_d3_n1(capsys):
    code, out, _ = run(capsys, "state", "--d", "3", "--n", "1")
    assert code == 0
    (row,) = rows(out)
    assert (row["R"], row["E"], row["xi"]) == ("0.866025", "1", "0.0677386")
    assert out.splitlines()[0] == "d,n,m,R,E,xi,N,T,s0,s1"


def test_state_excited_json(capsys):
    code, out, _ = run(capsys, "state", "--d", "3", "--n", "3", "--m", "1", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["m"] == 1 and row["E"] > 1.8
    assert set(row) >= {"d", "n", "m", "R", "E", "xi", "s0", "s3"}


def test_state_domain_error(capsys):
    code, _, err = run(capsys, "state", "--d", "2", "--n", "1")
    assert code == 2
    assert "d must be >= 3" in err


def test_state_missing_root(capsys):
    code, _, err = run(capsys, "state", "--d", "3", "--n", "2", "--m", "1")
    assert code == 2


def test_numeric_failure_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise cli.NumericalError("synthetic")

    monkeypatch.setattr(cli.eigen, "solve_state", boom)
    code, _, err = run(capsys, "state", "--d", "3", "--n", "1")
    assert code == 3 and "synthetic" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--fig", "3"])
    assert exc.value.code == 2


def test_reproduce_results(capsys):
    code, out, _ = run(capsys, "reproduce", "--table", "results")
    assert code == 0
    table = rows(out)
    assert len(table) == 12
    assert out.splitlines()[0] == "d,n,m,R,E,xi"
    assert table[0] == {"d": "3", "n": "1", "m": "0", "R": "0.866025", "E": "1", "xi": "0.0677386"}
    assert "\r" not in out


def test_reproduce_is_byte_stable(capsys):
    _, a, _ = run(capsys, "reproduce", "--table", "results")
    _, b, _ = run(capsys, "reproduce", "--table", "results")
    assert a == b


def test_reproduce_coefficients(capsys):
    _, out, _ = run(capsys, "reproduce", "--table", "coefficients")
    table = rows(out)
    assert [r["d"] for r in table] == ["3", "4", "5", "6"]
    assert (table[0]["s1"], table[0]["s2"], table[0]["s3"]) == ("1", "0.178571", "0.0129461")


def test_reproduce_groundstate_json(capsys):
    _, out, _ = run(capsys, "reproduce", "--table", "groundstate", "--format", "json")
    table = json.loads(out)
    assert table[0]["delta_expr"] == "2d-3" and table[0]["gamma_expr"] == "1/(d-2)"
    assert [r["delta"] for r in table] == [3, 5, 7, 9]
    assert table[1]["gamma"] == 0.5


def test_sweep_fig2_increasing(capsys):
    _, out, _ = run(capsys, "sweep", "--fig", "2", "--n-max", "6")
    pts = [(float(r["x"]), float(r["y"])) for r in rows(out)]
    assert len(pts) == 6
    assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(pts, pts[1:]))


def test_sweep_fig6_decreasing_in_energy(capsys):
    _, out, _ = run(capsys, "sweep", "--fig", "6")
    table = rows(out)
    assert len(table) == 12
    for d in range(3, 7):
        series = sorted((float(r["x"]), float(r["y"])) for r in table if r["series"] == f"d={d}")
        assert all(a[1] > b[1] for a, b in zip(series, series[1:]))


def test_sweep_fig5_closed_form(capsys, tmp_path):
    target = tmp_path / "fig5.csv"
    code, out, _ = run(capsys, "sweep", "--fig", "5", "--d-max", "20", "--out", str(target))
    assert code == 0 and out == ""
    ys = [float(r["y"]) for r in rows(target.read_text())]
    assert len(ys) == 18
    assert all(a > b for a, b in zip(ys, ys[1:]))


def test_sweep_fig4_warning_rows(capsys):
    _, out, _ = run(capsys, "sweep", "--fig", "4", "--d-max", "31", "--n-max", "1")
    table = rows(out)
    warn = [r for r in table if r.get("warning")]
    assert len(warn) == 1 and "d=31" in warn[0]["warning"]


def test_wavegrid_pole_is_azimuthal(capsys):
    _, out, _ = run(capsys, "wavegrid", "--n", "2", "--res", "9")
    table = rows(out)
    assert len(table) == 81
    by_theta = {}
    for r in table:
        by_theta.setdefault(r["theta1"], set()).add(r["psi"])
    assert all(len(v) == 1 for v in by_theta.values())


def test_wavegrid_shift_symmetry(capsys):
    res = 9  # phi grid step is pi/4, so a pi/2 shift is two steps
    _, a, _ = run(capsys, "wavegrid", "--theta2", str(math.pi / 2), "--phi2", "0", "--res", str(res))
    _, b, _ = run(capsys, "wavegrid", "--theta2", str(math.pi / 2), "--phi2", str(math.pi / 2), "--res", str(res))
    ga = [float(r["psi"]) for r in rows(a)]
    gb = [float(r["psi"]) for r in rows(b)]
    for i in range(res):
        for j in range(res - 2):
            assert gb[i * res + j + 2] == pytest.approx(ga[i * res + j], rel=1e-5)


def test_wavegrid_coincidence_value(capsys):
    from spherium import chords, eigen

    state = eigen.solve_state(3, 1)
    _, out, _ = run(capsys, "--digits", "12", "wavegrid", "--res", "5")
    first = rows(out)[0]
    assert float(first["theta1"]) == 0.0
    expected = 1.0 / (state.R**2 * math.sqrt(chords.normalization(state)))
    assert float(first["psi"]) == pytest.approx(expected, rel=1e-10)


def test_wavegrid_rejects_other_dimensions(capsys):
    code, _, err = run(capsys, "wavegrid", "--d", "4")
    assert code == 2 and "d=3" in err


def test_verify_deterministic_and_passing(capsys, tmp_path):
    code_a, a, _ = run(capsys, "verify", "--samples", "10000", "--seed", "42", "--d-max", "4", "--json", str(tmp_path / "a.json"))
    code_b, b, _ = run(capsys, "verify", "--samples", "10000", "--seed", "42", "--d-max", "4", "--json", str(tmp_path / "b.json"))
    assert a == b
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    report = json.loads((tmp_path / "a.json").read_text())
    assert report["settings"]["seed"] == 42
    assert code_a == code_b == (0 if report["passed"] else 1)


def test_verify_corruption_hook(capsys):
    code, _, err = run(capsys, "verify", "--samples", "200000", "--d-max", "3", "--q-max", "2", "--corrupt-four-center", "1.05")
    assert code == 1
    assert "failing pattern: d=3 (1, 1, 1, 1)" in err


def test_env_overrides_and_flag_precedence(monkeypatch):
    monkeypatch.setenv("SPHERIUM_SERIES_TOL", "1e-12")
    monkeypatch.setenv("SPHERIUM_QUAD_NODES", "64")
    monkeypatch.setenv("SPHERIUM_MC_SEED", "7")
    parser = cli.build_parser()
    s = cli.resolve_settings(parser.parse_args(["verify"]))
    assert (s.series_tol, s.quad_nodes, s.seed) == (1e-12, 64, 7)
    s = cli.resolve_settings(parser.parse_args(["--quad-nodes", "200", "verify", "--seed", "3"]))
    assert (s.quad_nodes, s.seed) == (200, 3)


def test_bad_env_value(capsys, monkeypatch):
    monkeypatch.setenv("SPHERIUM_QUAD_NODES", "many")
    code, _, err = run(capsys, "reproduce")
    assert code == 2 and "SPHERIUM_QUAD_NODES" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spherium", "state", "--d", "4", "--n", "1"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("4,1,0,1.58114,0.5,0.0436006")
