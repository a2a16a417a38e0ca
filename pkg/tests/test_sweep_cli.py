import json
import math
import os

import pytest

from evacline.adversary import format_strategy, naive_strategy
from evacline.cli import main
from evacline.closedform import DELTA, ec_ratio_f, we_time_factor_g
from evacline.sweep import SweepSpec, render_csv, run_sweep, sweep_values


# ---------------------------------------------------------------------------
# sweep engine
# ---------------------------------------------------------------------------

def test_sweep_values_scales():
    spec = SweepSpec("cb", 3.0, 6.0, 4)
    assert sweep_values(spec) == pytest.approx([3.0, 4.0, 5.0, 6.0])
    geo = SweepSpec("cb", 3.0, 12.0, 3, "geometric")
    assert sweep_values(geo) == pytest.approx([3.0, 6.0, 12.0])


def test_sweep_cb_columns():
    header, rows = run_sweep(SweepSpec("cb", 3.0, 6.0, 40))
    assert header == ["cb", "s", "r", "ratio_f"]
    assert rows[0][3] == pytest.approx(18.0, rel=1e-12)
    plateau = [row[3] for row in rows if row[0] > DELTA]
    for val in plateau:
        assert val == pytest.approx(17.321729455273843, rel=1e-12)
    assert [row[0] for row in rows] == sorted(row[0] for row in rows)


def test_sweep_e_we_saturates():
    header, rows = run_sweep(SweepSpec("e", 0.5, 4.0, 36, problem="we"))
    assert header == ["e", "s", "r", "g"]
    for row in rows:
        if row[0] >= 3.0:
            assert row[3] == 3.0


def test_sweep_d_functional_scaled_column_bounded():
    header, rows = run_sweep(SweepSpec("d", 10.0, 1e6, 11, "geometric", e=1.0))
    assert header == ["d", "time", "energy", "time_over_d32logd"]
    scaled = [row[3] for row in rows]
    assert max(scaled) / min(scaled) <= 10.0
    for row in rows:
        assert row[2] <= 1.0 + 1e-8  # budget respected


def test_sweep_validation():
    with pytest.raises(ValueError):
        SweepSpec("cb", 6.0, 3.0, 10)
    with pytest.raises(ValueError):
        SweepSpec("cb", 3.0, 6.0, 1)
    with pytest.raises(ValueError):
        SweepSpec("e", 0.5, 4.0, 10)          # missing problem
    with pytest.raises(ValueError):
        SweepSpec("d", 10.0, 100.0, 10)       # missing budget
    with pytest.raises(ValueError):
        SweepSpec("x", 0.0, 1.0, 10)


def test_render_csv_shape():
    text = render_csv(["a", "b"], [[1.0, 2.0], [3.0, 0.1234567890123456]])
    lines = text.split("\n")
    assert lines[0] == "a,b"
    assert lines[1] == "1,2"
    assert "0.123456789012" in lines[2]
    assert text.endswith("\n")


def test_csv_round_trips_to_1e9(tmp_path):
    out = tmp_path / "cb.csv"
    assert main(["sweep", "cb", "--range", "3:8", "--points", "60",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "cb,s,r,ratio_f"
    for line in lines[1:]:
        cb, s, r, f = (float(tok) for tok in line.split(","))
        assert f == pytest.approx(ec_ratio_f(cb), abs=1e-9)


# ---------------------------------------------------------------------------
# CLI behaviour
# ---------------------------------------------------------------------------

def test_cli_optimize_ec_threshold(capsys):
    code = main(["optimize", "ec", "--b", "1", "--c", "3"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["closed_form"]["s"] == pytest.approx(1.0, abs=1e-12)
    assert out["closed_form"]["r"] == pytest.approx(1.0, abs=1e-12)
    assert out["closed_form"]["factor"] == pytest.approx(18.0, abs=1e-12)
    assert out["closed_form"]["energy_per_d"] == pytest.approx(4.0, abs=1e-12)
    assert out["kkt"]["verdict"] is True
    assert out["agreement"] <= 1e-6


def test_cli_optimize_infeasible_exit_2(capsys):
    code = main(["optimize", "ec", "--b", "1", "--c", "2.5"])
    err = capsys.readouterr().err
    assert code == 2
    assert "infeasible" in err


def test_cli_optimize_we(capsys):
    code = main(["optimize", "we", "--e", "1.5"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["closed_form"]["s"] == pytest.approx(0.7071067811865476, rel=1e-9)
    assert out["closed_form"]["factor"] == pytest.approx(4.242640687119286,
                                                         rel=1e-9)


def test_cli_simulate_naive(capsys):
    code = main(["simulate", "naive", "--s", "1", "--r", "1", "--d", "5"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["evacuation_time"] == pytest.approx(15.0)
    assert out["total_energy"] == pytest.approx(20.0)
    assert out["feasible"] is True


def test_cli_simulate_speed_violation_still_exits_zero(capsys):
    code = main(["simulate", "naive", "--s", "2", "--r", "1", "--d", "1",
                 "--maxspeed", "1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["feasible"] is False
    assert "speed_bound" in out["violated_constraints"]


def test_cli_simulate_functional_budget(capsys):
    code = main(["simulate", "functional", "--e", "1", "--d", "100"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["total_energy"] <= 1.0 + 1e-8


def test_cli_adversary_exit(tmp_path, capsys):
    path = tmp_path / "sweep.strategy"
    path.write_text(format_strategy(naive_strategy(1.0, 60.0)))
    code = main(["adversary", "exit", "--strategy", str(path), "--d", "4"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["ratio"] == pytest.approx(3.0, abs=1e-9)


def test_cli_adversary_witness(tmp_path, capsys):
    path = tmp_path / "sweep.strategy"
    path.write_text(format_strategy(naive_strategy(1.0, 60.0)))
    code = main(["adversary", "witness", "--strategy", str(path),
                 "--b", "1", "--c", "2.9"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["violated_bound"] == "time_bound"
    assert out["induced_time"] > 2.9 * out["exit_distance"]


def test_cli_adversary_bad_file_exit_3(tmp_path, capsys):
    path = tmp_path / "bad.strategy"
    path.write_text("maxspeed 1 horizon 10\n0 0 1 9.9\n")
    code = main(["adversary", "exit", "--strategy", str(path), "--d", "1"])
    assert code == 3
    assert "speed" in capsys.readouterr().err


def test_cli_sweep_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "d", "--range", "10:100000", "--points", "12",
            "--scale", "geo", "--e", "1", "--out"]
    assert main(args + [str(a)]) == 0
    assert main(args + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_sweep_bad_range_exit_3(tmp_path, capsys):
    code = main(["sweep", "cb", "--range", "3-6", "--points", "5",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 3


def test_cli_verify_single_suite(capsys):
    code = main(["verify", "--suite", "closedform", "--grid", "25"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS closedform" in out
    assert "returns 3 for e >= 3" in out  # documented saturation note


def test_cli_verify_quadrature_suite(capsys):
    code = main(["verify", "--suite", "quadrature"])
    assert code == 0
    assert "PASS quadrature" in capsys.readouterr().out


def test_cli_tol_resolution_order(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "evac.cfg"
    cfg.write_text("tol = 1e-6\n")
    monkeypatch.setenv("EVAC_TOL", "not-even-a-number")
    # config wins over the (broken) environment value, so this must not raise
    code = main(["--config", str(cfg), "simulate", "functional",
                 "--e", "1", "--d", "10"])
    assert code == 0
    capsys.readouterr()
    monkeypatch.delenv("EVAC_TOL")
    monkeypatch.setenv("EVAC_TOL", "1e-9")
    code = main(["simulate", "functional", "--e", "1", "--d", "10"])
    assert code == 0


def test_cli_json_is_deterministic(capsys):
    main(["optimize", "wec", "--e", "2.0"])
    first = capsys.readouterr().out
    main(["optimize", "wec", "--e", "2.0"])
    second = capsys.readouterr().out
    assert first == second
