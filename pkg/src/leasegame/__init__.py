"""Equilibrium solver for an infrastructure-leasing leader/follower market."""

from .benchmark import BenchmarkOutcome, BenchmarkParams, benchmark_equilibrium, incentive_gap, limit_params
from .errors import (
    CoverageViolated,
    FeeBelowCost,
    InvestmentOrderViolated,
    IoFailure,
    ModelError,
    NegativeCost,
    NoConvergence,
    NonPositiveFee,
    NonPositiveTransport,
    SingularDenominator,
    ZeroLeaderInvestment,
)
from .market import (
    MarketParams,
    MarketSplit,
    PayoffPair,
    StrategyProfile,
    TransportCosts,
    payoff_follower,
    payoff_leader,
    transport_costs,
    validate_params,
)
from .spne import (
    EquilibriumOutcome,
    Regime,
    classify_regime,
    solve_spne,
    stage1_investment,
    stage1_objective,
    stage2_investment,
    stage3_prices,
    stage4_split,
)

__version__ = "0.1.0"
