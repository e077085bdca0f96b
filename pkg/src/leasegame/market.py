"""Domain types and payoff primitives for the MNO/MVNO market.

The leader (MNO) owns the infrastructure and invests ``I_L``; the follower
(MVNO) reserves ``I_F <= I_L`` of it at a fee ``s`` per squared unit. End-users
sit uniformly on [0, 1] with the leader at 0 and the follower at 1.

The ``*_profit`` and ``indifference_point`` helpers work elementwise on numpy
arrays so the grid oracles can evaluate whole grids at once; the typed
wrappers (``payoff_leader`` etc.) are the scalar entry points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CoverageViolated,
    FeeBelowCost,
    InvestmentOrderViolated,
    NegativeCost,
    NonPositiveFee,
    ZeroLeaderInvestment,
)

# Absolute tolerance for closed-form identities.
ATOL = 1e-12

DEFAULT_V_STAR = 10.0


@dataclass(frozen=True)
class MarketParams:
    """Exogenous parameters of the game.

    Attributes:
        s: fee per squared unit of reserved resources.
        gamma: marginal cost of leader investment.
        c: marginal cost per end-user.
        v_star: common end-user valuation. Cancels out of every closed form;
            only the agent simulation uses it.
    """

    s: float
    gamma: float
    c: float = 1.0
    v_star: float = DEFAULT_V_STAR

    def __post_init__(self):
        if not self.s > 0:
            raise NonPositiveFee(f"s must be positive, got {self.s}")
        if self.gamma < 0 or self.c < 0:
            raise NegativeCost(f"gamma and c must be nonnegative, got gamma={self.gamma}, c={self.c}")
        if self.s < self.gamma:
            raise FeeBelowCost(f"s={self.s} is below the investment cost gamma={self.gamma}")
        if not self.v_star > self.c + 2:
            raise CoverageViolated(f"v_star={self.v_star} must exceed c + 2 = {self.c + 2}")


def validate_params(s, gamma, c=1.0, v_star=DEFAULT_V_STAR) -> MarketParams:
    return MarketParams(float(s), float(gamma), float(c), float(v_star))


def _check_investments(I_L, I_F):
    I_L = np.asarray(I_L, dtype=float)
    I_F = np.asarray(I_F, dtype=float)
    if np.any(~(I_L > 0)):
        raise ZeroLeaderInvestment("leader investment I_L must be positive")
    if np.any(I_F < 0) or np.any(I_F > I_L):
        raise InvestmentOrderViolated("reserved resources must satisfy 0 <= I_F <= I_L")


@dataclass(frozen=True)
class StrategyProfile:
    I_L: float
    I_F: float
    p_L: float
    p_F: float

    def __post_init__(self):
        _check_investments(self.I_L, self.I_F)


@dataclass(frozen=True)
class TransportCosts:
    t_L: float
    t_F: float


@dataclass(frozen=True)
class MarketSplit:
    """Indifference location (unclamped) and the resulting market shares."""

    x_n: float
    n_L: float
    n_F: float


@dataclass(frozen=True)
class PayoffPair:
    pi_L: float
    pi_F: float


def transport_costs(I_L: float, I_F: float) -> TransportCosts:
    """Reluctance toward each provider, driven by the investment ratio."""
    _check_investments(I_L, I_F)
    t_L = I_F / I_L
    return TransportCosts(t_L=t_L, t_F=1.0 - t_L)


def indifference_point(I_L, I_F, p_L, p_F):
    # t_F + p_F - p_L with t_L + t_F = 1
    return (I_L - I_F) / I_L + p_F - p_L


def leader_share(x_n):
    return np.clip(x_n, 0.0, 1.0)


def follower_profit(n_F, p_F, I_F, s, c):
    return n_F * (p_F - c) - s * I_F**2


def leader_profit(n_L, p_L, I_L, I_F, s, gamma, c):
    return n_L * (p_L - c) + s * I_F**2 - gamma * I_L**2


def payoff_follower(profile: StrategyProfile, split: MarketSplit, params: MarketParams) -> float:
    return float(follower_profit(split.n_F, profile.p_F, profile.I_F, params.s, params.c))


def payoff_leader(profile: StrategyProfile, split: MarketSplit, params: MarketParams) -> float:
    return float(
        leader_profit(split.n_L, profile.p_L, profile.I_L, profile.I_F, params.s, params.gamma, params.c)
    )


def payoffs(profile: StrategyProfile, split: MarketSplit, params: MarketParams) -> PayoffPair:
    return PayoffPair(
        pi_L=payoff_leader(profile, split, params),
        pi_F=payoff_follower(profile, split, params),
    )
