"""Backward induction for the four-stage leader/follower game.

Stage 4 splits end-users at the indifference point, stage 3 is the interior
price equilibrium, stage 2 is the follower's reservation and stage 1 is the
leader's investment. Stage 1 has no closed form: the continuation payoff is
scanned for stationary points above the boundary investment sqrt(2/(9s)) and
the best candidate wins.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize

from .errors import InvestmentOrderViolated, SingularDenominator, ZeroLeaderInvestment
from .market import (
    MarketParams,
    MarketSplit,
    PayoffPair,
    StrategyProfile,
    indifference_point,
    leader_share,
    payoffs,
)

SCAN_POINTS = 2000
ROOT_XTOL = 1e-10
TIE_TOL = 1e-12
SEARCH_CAP_HIT = "SearchCapHit"
LITERAL_JUNCTION_JUMP = "LiteralJunctionJump"


class Regime(str, enum.Enum):
    OUTCOME_A = "A"  # leader invests above the boundary
    OUTCOME_B = "B"  # leader invests exactly the boundary, follower reserves all


class CandidateSource(str, enum.Enum):
    BOUNDARY = "Boundary"
    INTERIOR_ROOT = "InteriorRoot"
    SEARCH_CAP = "SearchCap"


@dataclass(frozen=True)
class Stage1Candidate:
    I_L: float
    payoff: float
    source: CandidateSource


@dataclass(frozen=True)
class Stage1Result:
    I_L: float
    regime: Regime
    foc_residual: float
    payoff: float
    candidates: tuple[Stage1Candidate, ...]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class EquilibriumOutcome:
    regime: Regime
    profile: StrategyProfile
    split: MarketSplit
    payoffs: PayoffPair
    foc_residual: float
    candidates: tuple[Stage1Candidate, ...] = ()
    warnings: tuple[str, ...] = ()
    paper_literal_foc: bool = False
    params: MarketParams | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "regime": self.regime.value,
            "profile": asdict(self.profile),
            "split": asdict(self.split),
            "payoffs": asdict(self.payoffs),
            "foc_residual": self.foc_residual,
            "candidates": [
                {"I_L": c.I_L, "payoff": c.payoff, "source": c.source.value} for c in self.candidates
            ],
            "warnings": list(self.warnings),
            "paper_literal_foc": self.paper_literal_foc,
        }
        if self.params is not None:
            out["params"] = asdict(self.params)
        return out


def boundary_investment(s: float) -> float:
    """Largest I_L at which the follower still reserves everything."""
    return math.sqrt(2.0 / (9.0 * s))


def search_cap(params: MarketParams) -> float:
    return 10.0 * max(boundary_investment(params.s), 1.0 / math.sqrt(max(params.gamma, 1e-6)))


def stage4_split(profile: StrategyProfile) -> MarketSplit:
    x_n = float(indifference_point(profile.I_L, profile.I_F, profile.p_L, profile.p_F))
    n_L = float(leader_share(x_n))
    return MarketSplit(x_n=x_n, n_L=n_L, n_F=1.0 - n_L)


def stage3_prices(I_L, I_F, c):
    """Interior price equilibrium ``(p_L, p_F)``; works elementwise on arrays."""
    I_L = np.asarray(I_L, dtype=float)
    I_F = np.asarray(I_F, dtype=float)
    if np.any(~(I_L > 0)):
        raise ZeroLeaderInvestment("leader investment I_L must be positive")
    if np.any(I_F < 0) or np.any(I_F > I_L):
        raise InvestmentOrderViolated("reserved resources must satisfy 0 <= I_F <= I_L")
    p_L = c + (2.0 * I_L - I_F) / (3.0 * I_L)
    p_F = c + (I_L + I_F) / (3.0 * I_L)
    if p_L.ndim == 0:
        return float(p_L), float(p_F)
    return p_L, p_F


def stage2_investment(I_L, s):
    """Follower's optimal reservation given the leader's investment.

    Above the boundary the follower takes ``I_L / (9 s I_L^2 - 1)``; at or
    below it the follower reserves everything (ties go to ``I_F = I_L``).
    """
    I_L = np.asarray(I_L, dtype=float)
    interior = I_L > boundary_investment(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        I_F = np.where(interior, I_L / (9.0 * s * I_L**2 - 1.0), I_L)
    if I_F.ndim == 0:
        return float(I_F)
    return I_F


def _interior_objective(I_L, s, gamma, literal=False):
    # Leader payoff on the branch where the follower takes I_L / (9 s I_L^2 - 1).
    u = 9.0 * s * I_L**2 - 1.0
    revenue = (2.0 - 1.0 / u) ** 2 / 9.0
    # The printed variant uses s * I_L / u in place of s * I_F^2.
    fee = s * I_L / u if literal else s * I_L**2 / u**2
    return revenue + fee - gamma * I_L**2


def stage1_objective(I_L, params: MarketParams, literal: bool = False):
    """Leader payoff once stages 2-4 have been played optimally.

    At or below the boundary investment this is ``1/9 + (s - gamma) I_L^2``.
    With ``literal=True`` the interior branch uses the fee term as printed in
    the source model instead of ``s * I_F^2``.
    """
    I_L = np.asarray(I_L, dtype=float)
    s, gamma = params.s, params.gamma
    interior = I_L > boundary_investment(s)
    if np.any(interior & (9.0 * s * I_L**2 - 1.0 <= 0)):
        raise SingularDenominator("9 s I_L^2 - 1 must be positive on the interior branch")
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(
            interior,
            _interior_objective(I_L, s, gamma, literal),
            1.0 / 9.0 + (s - gamma) * I_L**2,
        )
    if value.ndim == 0:
        return float(value)
    return value


def _derivative(I_L, s, gamma, literal):
    h = np.maximum(1e-6, 1e-6 * I_L)
    return (
        _interior_objective(I_L + h, s, gamma, literal) - _interior_objective(I_L - h, s, gamma, literal)
    ) / (2.0 * h)


def stage1_investment(params: MarketParams, literal: bool = False) -> Stage1Result:
    """Leader's optimal investment by candidate comparison.

    Candidates are the boundary ``sqrt(2/(9s))`` and every stationary point
    of the interior branch found by a log-spaced derivative scan followed by
    bisection. Ties within ``TIE_TOL`` go to the boundary. If the payoff is
    still rising at the search cap, the cap itself becomes a candidate and
    the result carries a ``SearchCapHit`` warning.
    """
    s, gamma = params.s, params.gamma
    b = boundary_investment(s)
    cap = search_cap(params)

    candidates = [Stage1Candidate(b, stage1_objective(b, params, literal), CandidateSource.BOUNDARY)]
    warnings = []

    if literal:
        # The printed fee term is discontinuous at the boundary; the right-hand
        # limit can exceed every attained value.
        right_limit = float(_interior_objective(b * (1.0 + 1e-12), s, gamma, literal))
        if right_limit > candidates[0].payoff + TIE_TOL:
            warnings.append(LITERAL_JUNCTION_JUMP)

    grid = np.geomspace(b * (1.0 + 1e-9), cap, SCAN_POINTS)
    d = _derivative(grid, s, gamma, literal)

    def foc(x):
        return float(_derivative(x, s, gamma, literal))

    for i in range(SCAN_POINTS - 1):
        if d[i] == 0.0:
            root = float(grid[i])
        elif d[i] * d[i + 1] < 0:
            root = optimize.bisect(foc, grid[i], grid[i + 1], xtol=ROOT_XTOL)
        else:
            continue
        candidates.append(
            Stage1Candidate(root, stage1_objective(root, params, literal), CandidateSource.INTERIOR_ROOT)
        )

    if d[-1] > 0:
        warnings.append(SEARCH_CAP_HIT)
        candidates.append(Stage1Candidate(cap, stage1_objective(cap, params, literal), CandidateSource.SEARCH_CAP))

    best = candidates[0]
    for cand in candidates[1:]:
        if cand.payoff > best.payoff + TIE_TOL:
            best = cand

    if best.source is CandidateSource.BOUNDARY:
        return Stage1Result(b, Regime.OUTCOME_B, 0.0, best.payoff, tuple(candidates), tuple(warnings))
    residual = abs(foc(best.I_L))
    return Stage1Result(best.I_L, Regime.OUTCOME_A, residual, best.payoff, tuple(candidates), tuple(warnings))


def solve_spne(params: MarketParams, literal: bool = False) -> EquilibriumOutcome:
    stage1 = stage1_investment(params, literal)
    I_L = stage1.I_L
    I_F = stage2_investment(I_L, params.s)
    p_L, p_F = stage3_prices(I_L, I_F, params.c)
    profile = StrategyProfile(I_L=I_L, I_F=I_F, p_L=p_L, p_F=p_F)
    split = stage4_split(profile)
    return EquilibriumOutcome(
        regime=stage1.regime,
        profile=profile,
        split=split,
        payoffs=payoffs(profile, split, params),
        foc_residual=stage1.foc_residual,
        candidates=stage1.candidates,
        warnings=stage1.warnings,
        paper_literal_foc=literal,
        params=params,
    )


def classify_regime(params: MarketParams, literal: bool = False) -> Regime:
    return stage1_investment(params, literal).regime
