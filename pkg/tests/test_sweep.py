import csv
import io
import json

import pytest

from leasegame import cli
from leasegame.errors import InvalidSweep, IoFailure
from leasegame.oracles import OracleReport
from leasegame.sweep import (
    SWEEP_HEADER,
    SweepSpec,
    emit,
    parse_range,
    render,
    run_benchmark_sweep,
    run_sweep,
    s_grid,
    transition_indices,
)

FIG_GRID = tuple(s_grid(0.1, 1.0, 0.01))


def test_s_grid_is_clean_and_inclusive():
    grid = s_grid(0.1, 1.0, 0.01)
    assert len(grid) == 91
    assert grid[0] == 0.1 and grid[-1] == 1.0 and grid[70] == 0.8
    assert parse_range("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    with pytest.raises(InvalidSweep):
        parse_range("0.1:0.3")


def test_sweep_spec_validation():
    with pytest.raises(InvalidSweep):
        SweepSpec((), 0.1)
    with pytest.raises(InvalidSweep):
        SweepSpec((0.5, 0.4), 0.1)


def test_header_matches_interface():
    assert ",".join(SWEEP_HEADER) == (
        "s,gamma,c,regime,I_L,I_F,sqrt_2_over_9s,p_L,p_F,n_L,n_F,pi_L,pi_F,t_L,t_F,foc_residual,warnings"
    )


def test_figure_sweep_has_single_transition():
    rows = run_sweep(SweepSpec(FIG_GRID, 0.1, 1.0))
    idx = transition_indices(rows)
    assert len(idx) == 1
    i = idx[0]
    # gamma / s crosses 1/8 between s = 0.80 and 0.81
    assert (rows[i - 1].s, rows[i].s) == (0.8, 0.81)
    assert rows[i - 1].regime == "B" and rows[i].regime == "A"
    assert rows[i].I_F < rows[i - 1].I_F
    assert "RegimeTransition" in rows[i].warnings


def test_high_cost_sweep_never_reaches_outcome_a():
    rows = run_sweep(SweepSpec(FIG_GRID, 0.15, 1.0))
    assert not any(r.regime == "A" for r in rows)
    below = [r for r in rows if r.s < 0.15]
    assert below and all(r.warnings == ["FeeBelowCost"] and r.regime == "" for r in below)
    assert all(r.regime == "B" for r in rows if r.s >= 0.15)


def test_single_point_sweep():
    (row,) = run_sweep(SweepSpec((1.0,), 0.1, 1.0))
    assert row.regime == "A"
    assert row.pi_L == pytest.approx(0.320261193877472, abs=1e-12)
    (row,) = run_sweep(SweepSpec((0.5,), 0.1, 1.0))
    assert (row.regime, row.n_L, row.n_F, row.pi_F) == ("B", pytest.approx(1 / 3), pytest.approx(2 / 3), pytest.approx(2 / 9))


def test_benchmark_sweep_scenarios():
    rows = run_benchmark_sweep(SweepSpec((0.5, 1.0), 0.1, 1.0))
    by_scenario = {}
    for r in rows:
        by_scenario.setdefault(r.scenario, []).append(r)
    assert [r.pi_L_B for r in by_scenario[1]] == pytest.approx([0.25, 0.25], abs=1e-12)
    assert [r.pi_L_B for r in by_scenario[2]] == pytest.approx([4 / 9, 4 / 9], abs=1e-6)
    assert [r.pi_L_B for r in by_scenario[3]] == pytest.approx([1 / 9, 1 / 9], abs=1e-6)
    assert not by_scenario[1][0].limit and by_scenario[2][0].limit
    for r in rows:
        assert r.incentive_gap == pytest.approx(r.pi_L - r.pi_L_B, abs=1e-15)


def test_emit_single_row_csv(tmp_path):
    rows = run_sweep(SweepSpec((1.0,), 0.1))
    path = tmp_path / "one.csv"
    emit(rows, "csv", path)
    assert len(path.read_text().splitlines()) == 2


def test_emit_no_rows_creates_nothing(tmp_path):
    path = tmp_path / "none.csv"
    with pytest.raises(InvalidSweep):
        emit([], "csv", path)
    assert not path.exists()


def test_emit_json_lines(tmp_path):
    rows = run_sweep(SweepSpec((0.3, 0.6, 0.9), 0.1))
    path = tmp_path / "rows.jsonl"
    emit(rows, "json-lines", path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    objs = [json.loads(line) for line in lines]
    assert all(list(o) == SWEEP_HEADER for o in objs)
    assert all(isinstance(o["warnings"], list) for o in objs)


def test_emit_io_failure(tmp_path):
    rows = run_sweep(SweepSpec((1.0,), 0.1))
    with pytest.raises(IoFailure):
        emit(rows, "csv", tmp_path / "missing" / "x.csv")


def test_csv_round_trip_figure_sweep():
    rows = run_sweep(SweepSpec(FIG_GRID, 0.1, 1.0))
    parsed = list(csv.DictReader(io.StringIO(render(rows, "csv"))))
    for row, rec in zip(rows, parsed):
        for name in SWEEP_HEADER:
            value = getattr(row, name)
            if isinstance(value, float):
                assert float(rec[name]) == pytest.approx(value, rel=1e-11, abs=1e-300)


def test_sweep_output_is_deterministic():
    spec = SweepSpec(FIG_GRID, 0.05, 1.0)
    assert render(run_sweep(spec)) == render(run_sweep(spec))


def test_cli_solve(capsys):
    assert cli.main(["solve", "--s", "0.5", "--gamma", "0.1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["regime"] == "B"
    assert out["payoffs"]["pi_F"] == pytest.approx(2 / 9)


def test_cli_sweep_to_file(tmp_path):
    path = tmp_path / "fig.csv"
    assert cli.main(["sweep", "--gamma", "0.1", "--out", str(path)]) == 0
    assert len(path.read_text().splitlines()) == 92


def test_cli_benchmark_single_scenario(capsys):
    assert cli.main(["benchmark", "--s", "1", "--tl", "0.5", "--tf", "0.5", "--format", "json-lines"]) == 0
    (line,) = capsys.readouterr().out.splitlines()
    assert json.loads(line)["pi_L_B"] == pytest.approx(0.25)


def test_cli_exit_codes(tmp_path, monkeypatch, capsys):
    assert cli.main(["solve", "--s", "0.05", "--gamma", "0.1"]) == 1
    assert cli.main(["sweep", "--s-range", "1:0.5:0.1"]) == 1
    assert cli.main(["sweep", "--s", "1", "--out", str(tmp_path / "no" / "x.csv")]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "--bogus"])
    assert exc.value.code == 1

    failing = OracleReport("stage3_prices", (0.0,), (1.0,), 1.0, 0.1, False)
    monkeypatch.setitem(cli.oracles.SUITES, "pricing", lambda rng, cases: [failing])
    assert cli.main(["verify", "--suite", "pricing"]) == 3


def test_cli_verify_passes(capsys):
    assert cli.main(["verify", "--cases", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 12
    assert all(json.loads(line)["passed"] for line in lines)
