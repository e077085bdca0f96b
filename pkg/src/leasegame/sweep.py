"""Parameter sweeps over the per-resource fee and delimited output."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from .benchmark import benchmark_equilibrium, limit_params
from .errors import InvalidSweep, IoFailure, ModelError
from .market import transport_costs, validate_params
from .spne import boundary_investment, solve_spne

DEFAULT_S_RANGE = (0.1, 1.0, 0.01)
# t_L, t_F pairs plotted against the investing equilibrium
FIGURE_SCENARIOS = ((0.5, 0.5), (0.0, 1.0), (1.0, 0.0))
MULTIPLE_TRANSITIONS = "MultipleRegimeTransitions"


def s_grid(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive grid, rounded to kill accumulated floating drift."""
    if not (step > 0 and lo <= hi):
        raise InvalidSweep(f"bad range {lo}:{hi}:{step}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + k * step, 12) for k in range(n + 1)]


def parse_range(text: str) -> list[float]:
    try:
        lo, hi, step = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise InvalidSweep(f"expected lo:hi:step, got {text!r}") from exc
    return s_grid(lo, hi, step)


@dataclass(frozen=True)
class SweepSpec:
    s_values: tuple[float, ...]
    gamma: float
    c: float = 1.0
    benchmark_scenarios: tuple[tuple[float, float], ...] = FIGURE_SCENARIOS
    paper_literal_foc: bool = False

    def __post_init__(self):
        if not self.s_values:
            raise InvalidSweep("s_values must be nonempty")
        if any(b <= a for a, b in zip(self.s_values, self.s_values[1:])):
            raise InvalidSweep("s_values must be strictly increasing")
        if self.gamma < 0 or self.c < 0:
            raise InvalidSweep("gamma and c must be nonnegative")


@dataclass
class SweepRow:
    s: float
    gamma: float
    c: float
    regime: str
    I_L: float
    I_F: float
    sqrt_2_over_9s: float
    p_L: float
    p_F: float
    n_L: float
    n_F: float
    pi_L: float
    pi_F: float
    t_L: float
    t_F: float
    foc_residual: float
    warnings: list[str] = field(default_factory=list)


@dataclass
class BenchmarkRow:
    scenario: int
    s: float
    gamma: float
    c: float
    t_L: float
    t_F: float
    limit: bool
    p_L_B: float
    p_F_B: float
    n_L_B: float
    n_F_B: float
    pi_L_B: float
    pi_F_B: float
    pi_L_B_squared_share: float
    regime: str
    pi_L: float
    pi_F: float
    incentive_gap: float
    warnings: list[str] = field(default_factory=list)


SWEEP_HEADER = [f.name for f in fields(SweepRow)]
BENCHMARK_HEADER = [f.name for f in fields(BenchmarkRow)]


def _solve_row(s: float, spec: SweepSpec) -> SweepRow:
    nan = math.nan
    try:
        params = validate_params(s, spec.gamma, spec.c)
        out = solve_spne(params, spec.paper_literal_foc)
    except ModelError as exc:
        return SweepRow(s, spec.gamma, spec.c, "", nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan,
                        [type(exc).__name__])
    t = transport_costs(out.profile.I_L, out.profile.I_F)
    return SweepRow(
        s=s,
        gamma=spec.gamma,
        c=spec.c,
        regime=out.regime.value,
        I_L=out.profile.I_L,
        I_F=out.profile.I_F,
        sqrt_2_over_9s=boundary_investment(s),
        p_L=out.profile.p_L,
        p_F=out.profile.p_F,
        n_L=out.split.n_L,
        n_F=out.split.n_F,
        pi_L=out.payoffs.pi_L,
        pi_F=out.payoffs.pi_F,
        t_L=t.t_L,
        t_F=t.t_F,
        foc_residual=out.foc_residual,
        warnings=list(out.warnings),
    )


def transition_indices(rows: list[SweepRow]) -> list[int]:
    """Indices ``i`` where the regime differs between rows ``i - 1`` and ``i``."""
    solved = [(i, r.regime) for i, r in enumerate(rows) if r.regime]
    return [i for (_, a), (i, b) in zip(solved, solved[1:]) if a != b]


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One equilibrium row per fee value, in input order.

    Invalid points (e.g. ``s < gamma``) produce a row with an empty regime and
    the error name in ``warnings``. The first regime change is tagged
    ``RegimeTransition``; any further change also tags every transition row
    with ``MultipleRegimeTransitions``.
    """
    rows = [_solve_row(s, spec) for s in spec.s_values]
    idx = transition_indices(rows)
    for i in idx:
        rows[i].warnings.append("RegimeTransition")
        if len(idx) > 1:
            rows[i].warnings.append(MULTIPLE_TRANSITIONS)
    return rows


def run_benchmark_sweep(spec: SweepSpec) -> list[BenchmarkRow]:
    """Benchmark payoffs per scenario joined with the investing equilibrium.

    Scenarios with a zero transport cost are evaluated as one-sided limits.
    """
    spne_rows = run_sweep(spec)
    out = []
    for k, (t_L, t_F) in enumerate(spec.benchmark_scenarios, start=1):
        bench, is_limit = limit_params(t_L, t_F, spec.c)
        b = benchmark_equilibrium(bench)
        for row in spne_rows:
            out.append(
                BenchmarkRow(
                    scenario=k,
                    s=row.s,
                    gamma=row.gamma,
                    c=spec.c,
                    t_L=bench.t_L,
                    t_F=bench.t_F,
                    limit=is_limit,
                    p_L_B=b.p_L,
                    p_F_B=b.p_F,
                    n_L_B=b.n_L,
                    n_F_B=b.n_F,
                    pi_L_B=b.pi_L,
                    pi_F_B=b.pi_F,
                    pi_L_B_squared_share=b.pi_L_squared_share,
                    regime=row.regime,
                    pi_L=row.pi_L,
                    pi_F=row.pi_F,
                    incentive_gap=row.pi_L - b.pi_L,
                    warnings=list(row.warnings),
                )
            )
    return out


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ";".join(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    return value


def render(rows, fmt: str = "csv") -> str:
    if not rows:
        raise InvalidSweep("nothing to emit: no rows")
    header = [f.name for f in fields(rows[0])]
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(getattr(row, name)) for name in header])
    elif fmt in ("json-lines", "jsonl"):
        for row in rows:
            obj = {name: _json_value(getattr(row, name)) for name in header}
            buf.write(json.dumps(obj) + "\n")
    else:
        raise InvalidSweep(f"unknown format {fmt!r}")
    return buf.getvalue()


def emit(rows, fmt: str = "csv", destination=None) -> None:
    """Write rows as CSV or JSON lines to a path, or stdout when ``None``/``-``.

    Nothing is created when ``rows`` is empty.
    """
    text = render(rows, fmt)
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(destination, exc.strerror or str(exc)) from exc
