"""Brute-force checks for the closed forms.

Each oracle reaches its answer by exhaustive search or direct simulation over
the primitive payoffs, never through the closed form it is checking, and
returns an ``OracleReport`` comparing the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import CoverageViolated, InvalidGrid, NoConvergence
from .market import (
    MarketParams,
    MarketSplit,
    StrategyProfile,
    follower_profit,
    indifference_point,
    leader_profit,
    leader_share,
    transport_costs,
)
from .spne import search_cap, stage1_investment, stage2_investment, stage3_prices

MAX_GRID_POINTS = 10**7
MAX_BR_ROUNDS = 10**4
# Slack for floating-point noise when certifying that no deviation pays.
DEVIATION_ATOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidGrid(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.step > 0:
            raise InvalidGrid(f"grid step must be positive, got {self.step}")
        if (self.hi - self.lo) / self.step > MAX_GRID_POINTS:
            raise InvalidGrid(f"grid [{self.lo}, {self.hi}] at step {self.step} exceeds {MAX_GRID_POINTS} points")

    def points(self) -> np.ndarray:
        """Points ``lo + k*step`` up to ``hi``, with ``hi`` itself always included."""
        n = int(math.floor((self.hi - self.lo) / self.step + 1e-9))
        pts = self.lo + np.arange(n + 1) * self.step
        pts = pts[pts <= self.hi]
        if self.hi - pts[-1] > 1e-12 * max(1.0, abs(self.hi)):
            pts = np.append(pts, self.hi)
        return pts


@dataclass(frozen=True)
class OracleReport:
    target: str
    analytic_value: tuple[float, ...]
    oracle_value: tuple[float, ...]
    max_abs_gap: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "analytic_value": list(self.analytic_value),
            "oracle_value": list(self.oracle_value),
            "max_abs_gap": self.max_abs_gap,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": self.details,
        }


def _last_argmax(values: np.ndarray) -> int:
    # exact ties go to the larger grid point
    return len(values) - 1 - int(np.argmax(values[::-1]))


def _price_payoffs(I_L, I_F, c, p_L, p_F):
    n_L = leader_share(indifference_point(I_L, I_F, p_L, p_F))
    # investment terms do not depend on prices
    return (
        leader_profit(n_L, p_L, I_L, I_F, 0.0, 0.0, c),
        follower_profit(1.0 - n_L, p_F, I_F, 0.0, c),
    )


def price_best_response_oracle(I_L, I_F, c, grid: GridSpec | None = None, tolerance=None) -> OracleReport:
    """Grid best-response dynamics for the stage-3 pricing game.

    Simultaneous best responses are iterated from the four corners of the
    price grid until they reach a fixed point. A two-cycle on the grid is
    resolved by checking the pure fixed points it straddles. The analytic
    equilibrium is additionally certified by scanning every unilateral grid
    deviation, corner deviations included.

    Raises:
        NoConvergence: if no fixed point is reached within ``MAX_BR_ROUNDS``.
    """
    if grid is None:
        grid = GridSpec(c, c + 2.0, 1e-3)
    if tolerance is None:
        tolerance = 2.0 * grid.step
    prices = grid.points()
    n = len(prices)

    br_L_cache: dict[int, int] = {}
    br_F_cache: dict[int, int] = {}

    def br_L(j):
        if j not in br_L_cache:
            pi_L, _ = _price_payoffs(I_L, I_F, c, prices, prices[j])
            br_L_cache[j] = int(np.argmax(pi_L))
        return br_L_cache[j]

    def br_F(i):
        if i not in br_F_cache:
            _, pi_F = _price_payoffs(I_L, I_F, c, prices[i], prices)
            br_F_cache[i] = int(np.argmax(pi_F))
        return br_F_cache[i]

    fixed_points = set()
    for start in ((0, 0), (n - 1, n - 1), (0, n - 1), (n - 1, 0)):
        state = start
        seen = {state: 0}
        for rnd in range(1, MAX_BR_ROUNDS + 1):
            nxt = (br_L(state[1]), br_F(state[0]))
            if nxt == state:
                fixed_points.add(state)
                break
            if nxt in seen:
                # on a cycle: any i with br_L(br_F(i)) == i gives a pure fixed point
                cycle = [s for s, r in seen.items() if r >= seen[nxt]]
                found = False
                for i, _ in cycle:
                    j = br_F(i)
                    if br_L(j) == i:
                        fixed_points.add((i, j))
                        found = True
                if not found:
                    raise NoConvergence(f"best-response cycle of length {len(cycle)} without a fixed point")
                break
            seen[nxt] = rnd
            state = nxt
        else:
            raise NoConvergence(f"no fixed point after {MAX_BR_ROUNDS} rounds")

    p_L_star, p_F_star = stage3_prices(I_L, I_F, c)
    found_prices = sorted((float(prices[i]), float(prices[j])) for i, j in fixed_points)
    gap = max(max(abs(a - p_L_star), abs(b - p_F_star)) for a, b in found_prices)

    at_ne_L, at_ne_F = _price_payoffs(I_L, I_F, c, p_L_star, p_F_star)
    dev_L, _ = _price_payoffs(I_L, I_F, c, prices, p_F_star)
    _, dev_F = _price_payoffs(I_L, I_F, c, p_L_star, prices)
    gain = max(float(dev_L.max() - at_ne_L), float(dev_F.max() - at_ne_F), 0.0)

    return OracleReport(
        target="stage3_prices",
        analytic_value=(p_L_star, p_F_star),
        oracle_value=found_prices[0],
        max_abs_gap=gap,
        tolerance=tolerance,
        passed=gap <= tolerance and gain <= DEVIATION_ATOL,
        details={
            "I_L": float(I_L),
            "I_F": float(I_F),
            "c": float(c),
            "fixed_points": [list(fp) for fp in found_prices],
            "max_deviation_gain": gain,
        },
    )


def follower_investment_oracle(I_L, s, c=1.0, grid: GridSpec | None = None, tolerance=None) -> OracleReport:
    """Exhaustive search over the follower's reservation ``I_F in [0, I_L]``.

    Each grid point plays the stage-3 prices and stage-4 split and scores the
    follower's primitive payoff.
    """
    if grid is None:
        grid = GridSpec(0.0, I_L, 1e-5)
    if tolerance is None:
        tolerance = 2.0 * grid.step
    I_F = grid.points()
    p_L, p_F = stage3_prices(I_L, I_F, c)
    n_L = leader_share(indifference_point(I_L, I_F, p_L, p_F))
    pi_F = follower_profit(1.0 - n_L, p_F, I_F, s, c)
    k = _last_argmax(pi_F)

    analytic = stage2_investment(I_L, s)
    gap = abs(float(I_F[k]) - analytic)
    return OracleReport(
        target="stage2_investment",
        analytic_value=(analytic,),
        oracle_value=(float(I_F[k]),),
        max_abs_gap=gap,
        tolerance=tolerance,
        passed=gap <= tolerance,
        details={"I_L": float(I_L), "s": float(s), "grid_payoff": float(pi_F[k])},
    )


def continuation_payoff_leader(I_L, params: MarketParams):
    """Leader payoff after the follower, prices and end-users respond to ``I_L``."""
    I_L = np.asarray(I_L, dtype=float)
    I_F = stage2_investment(I_L, params.s)
    p_L, p_F = stage3_prices(I_L, I_F, params.c)
    n_L = leader_share(indifference_point(I_L, I_F, p_L, p_F))
    return leader_profit(n_L, p_L, I_L, I_F, params.s, params.gamma, params.c)


def leader_investment_oracle(params: MarketParams, grid: GridSpec | None = None, tolerance=1e-6) -> OracleReport:
    """Exhaustive grid search over the leader's investment, then a local polish.

    The grid maximum is refined by a bounded scalar search on the two cells
    around it, so the kink at the boundary investment is resolved below the
    grid step. Values are compared rather than argmax locations because the
    objective can be flat.
    """
    if grid is None:
        step = 1e-4
        grid = GridSpec(step, search_cap(params), step)
    pts = grid.points()
    values = continuation_payoff_leader(pts, params)
    k = _last_argmax(values)
    lo, hi = pts[max(k - 1, 0)], pts[min(k + 1, len(pts) - 1)]
    res = optimize.minimize_scalar(
        lambda x: -float(continuation_payoff_leader(x, params)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    refined_value = -float(res.fun)
    if refined_value >= values[k]:
        best_I, best_value = float(res.x), refined_value
    else:
        best_I, best_value = float(pts[k]), float(values[k])

    stage1 = stage1_investment(params)
    analytic_value = stage1.payoff
    gap = abs(best_value - analytic_value)
    return OracleReport(
        target="stage1_investment",
        analytic_value=(analytic_value,),
        oracle_value=(best_value,),
        max_abs_gap=gap,
        tolerance=tolerance,
        passed=gap <= tolerance,
        details={
            "s": params.s,
            "gamma": params.gamma,
            "analytic_I_L": stage1.I_L,
            "analytic_regime": stage1.regime.value,
            "grid_argmax": float(pts[k]),
            "grid_max": float(values[k]),
            "refined_argmax": best_I,
            "grid_excess": float(values[k]) - analytic_value,
        },
    )


def hotelling_agent_oracle(profile: StrategyProfile, params: MarketParams, N: int) -> MarketSplit:
    """Simulate ``N`` end-users at midpoints ``(i + 0.5)/N`` choosing a provider.

    Each agent joins the provider with the higher utility, ties going to the
    leader.

    Raises:
        CoverageViolated: if some agent would rather buy nothing.
    """
    if N < 10:
        raise ValueError(f"need at least 10 agents, got {N}")
    t = transport_costs(profile.I_L, profile.I_F)
    x = (np.arange(N) + 0.5) / N
    u_L = params.v_star - t.t_L * x - profile.p_L
    u_F = params.v_star - t.t_F * (1.0 - x) - profile.p_F
    if np.any(np.maximum(u_L, u_F) < 0):
        raise CoverageViolated("some end-users get negative utility from both providers; raise v_star")
    n_L = np.count_nonzero(u_L >= u_F) / N
    return MarketSplit(x_n=n_L, n_L=n_L, n_F=1.0 - n_L)


# Random case generators shared by the ``verify`` command and the test suite.

def sample_investments(rng: np.random.Generator, n: int, lo: float = 0.0, hi: float = 2.0):
    """``I_L`` uniform on ``(lo, hi]`` and ``I_F`` uniform on ``[0, I_L]``."""
    I_L = hi - rng.uniform(0.0, hi - lo, n)
    I_F = rng.uniform(0.0, 1.0, n) * I_L
    return I_L, I_F


def sample_fee_and_cost(rng: np.random.Generator, n: int, s_lo=0.1, s_hi=2.0, gamma_lo=0.01):
    s = rng.uniform(s_lo, s_hi, n)
    return s, rng.uniform(gamma_lo, s)


def pricing_suite(rng, cases):
    I_L, I_F = sample_investments(rng, cases)
    c = rng.uniform(0.0, 2.0, cases)
    return [price_best_response_oracle(a, b, k) for a, b, k in zip(I_L, I_F, c)]


def follower_suite(rng, cases):
    I_L, _ = sample_investments(rng, cases)
    s = rng.uniform(0.05, 2.0, cases)
    return [follower_investment_oracle(a, b) for a, b in zip(I_L, s)]


def leader_suite(rng, cases):
    s, gamma = sample_fee_and_cost(rng, cases)
    return [leader_investment_oracle(MarketParams(float(a), float(g))) for a, g in zip(s, gamma)]


def agent_report(profile: StrategyProfile, params: MarketParams, N: int) -> OracleReport:
    x_n = indifference_point(profile.I_L, profile.I_F, profile.p_L, profile.p_F)
    analytic = float(leader_share(x_n))
    simulated = hotelling_agent_oracle(profile, params, N).n_L
    gap = abs(simulated - analytic)
    tolerance = 1.0 / N + 1e-12
    return OracleReport(
        target="stage4_split",
        analytic_value=(analytic,),
        oracle_value=(simulated,),
        max_abs_gap=gap,
        tolerance=tolerance,
        passed=gap <= tolerance,
        details={"N": N, "I_L": profile.I_L, "I_F": profile.I_F, "p_L": profile.p_L, "p_F": profile.p_F},
    )


def sample_profiles(rng, cases):
    I_L, I_F = sample_investments(rng, cases, lo=0.1)
    c = rng.uniform(0.0, 2.0, cases)
    p_L = c + rng.uniform(0.0, 1.0, cases)
    p_F = c + rng.uniform(0.0, 1.0, cases)
    return [
        (StrategyProfile(float(a), float(b), float(x), float(y)), MarketParams(1.0, 0.0, float(k)))
        for a, b, x, y, k in zip(I_L, I_F, p_L, p_F, c)
    ]


def agent_suite(rng, cases, N=100_000):
    return [agent_report(profile, params, N) for profile, params in sample_profiles(rng, cases)]


SUITES = {
    "pricing": pricing_suite,
    "follower": follower_suite,
    "leader": leader_suite,
    "agents": agent_suite,
}
