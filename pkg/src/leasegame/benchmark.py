"""No-investment benchmark: Hotelling price competition with fixed reluctance.

Without investment the transport costs ``t_L`` and ``t_F`` are parameters and
the providers only choose prices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NegativeCost, NonPositiveTransport
from .market import MarketParams
from .spne import solve_spne

LIMIT_EPS = 1e-9


@dataclass(frozen=True)
class BenchmarkParams:
    t_L: float
    t_F: float
    c: float = 1.0

    def __post_init__(self):
        if not (self.t_L > 0 and self.t_F > 0):
            raise NonPositiveTransport(f"transport costs must be positive, got t_L={self.t_L}, t_F={self.t_F}")
        if self.c < 0:
            raise NegativeCost(f"c must be nonnegative, got {self.c}")


@dataclass(frozen=True)
class BenchmarkOutcome:
    p_L: float
    p_F: float
    n_L: float
    n_F: float
    pi_L: float
    pi_F: float
    # Squared-share payoff form; equals pi_L / pi_F only when t_L + t_F = 1.
    pi_L_squared_share: float
    pi_F_squared_share: float


def limit_params(t_L: float, t_F: float, c: float = 1.0, eps: float = LIMIT_EPS) -> tuple[BenchmarkParams, bool]:
    """Nudge a zero transport cost to ``eps`` (taking it from the other side).

    Returns the params and whether the result is a one-sided limit evaluation.
    """
    if t_L > 0 and t_F > 0:
        return BenchmarkParams(t_L, t_F, c), False
    if t_L <= 0 and t_F > eps:
        return BenchmarkParams(eps, t_F - eps, c), True
    if t_F <= 0 and t_L > eps:
        return BenchmarkParams(t_L - eps, eps, c), True
    raise NonPositiveTransport(f"at most one transport cost may be zero, got t_L={t_L}, t_F={t_F}")


def benchmark_equilibrium(params: BenchmarkParams) -> BenchmarkOutcome:
    t_L, t_F, c = params.t_L, params.t_F, params.c
    total = t_L + t_F
    p_L = c + (t_L + 2.0 * t_F) / 3.0
    p_F = c + (2.0 * t_L + t_F) / 3.0
    n_L = (2.0 * t_F + t_L) / (3.0 * total)
    n_F = 1.0 - n_L
    return BenchmarkOutcome(
        p_L=p_L,
        p_F=p_F,
        n_L=n_L,
        n_F=n_F,
        pi_L=n_L * (p_L - c),
        pi_F=n_F * (p_F - c),
        pi_L_squared_share=n_L**2,
        pi_F_squared_share=n_F**2,
    )


def incentive_gap(params: MarketParams, bench: BenchmarkParams, literal: bool = False) -> float:
    """Leader payoff from investing and leasing minus the no-investment payoff."""
    return solve_spne(params, literal).payoffs.pi_L - benchmark_equilibrium(bench).pi_L
