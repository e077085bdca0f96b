import math

import numpy as np
import pytest

from leasegame import CoverageViolated, StrategyProfile, stage4_split, validate_params
from leasegame.errors import InvalidGrid
from leasegame.oracles import (
    GridSpec,
    follower_investment_oracle,
    hotelling_agent_oracle,
    leader_investment_oracle,
    price_best_response_oracle,
)


def test_grid_spec_validation():
    with pytest.raises(InvalidGrid):
        GridSpec(1.0, 1.0, 0.1)
    with pytest.raises(InvalidGrid):
        GridSpec(0.0, 1.0, 0.0)
    with pytest.raises(InvalidGrid):
        GridSpec(0.0, 100.0, 1e-6)


def test_grid_points_include_both_ends():
    pts = GridSpec(0.0, 0.35, 0.1).points()
    assert pts[0] == 0.0 and pts[-1] == 0.35
    assert len(pts) == 5


def test_pricing_oracle_full_reservation():
    report = price_best_response_oracle(1.0, 1.0, 1.0, GridSpec(1.0, 3.0, 1e-3))
    assert report.passed
    assert report.oracle_value == pytest.approx((4 / 3, 5 / 3), abs=1e-3)
    assert report.details["max_deviation_gain"] <= 1e-12


def test_pricing_oracle_half_reservation():
    report = price_best_response_oracle(1.0, 0.5, 0.0, GridSpec(0.0, 2.0, 1e-3))
    assert report.passed
    # adjacent grid equilibria are all reported
    assert [0.5, 0.5] in report.details["fixed_points"]
    assert report.max_abs_gap <= 1e-3 + 1e-12


def test_pricing_oracle_grid_containing_equilibrium_has_zero_gap():
    report = price_best_response_oracle(1.0, 1.0, 1.0, GridSpec(1.0, 3.0, 1 / 3))
    assert report.max_abs_gap == pytest.approx(0.0, abs=1e-12)


def test_pricing_oracle_detects_wrong_prices(monkeypatch):
    import leasegame.oracles as oracles

    monkeypatch.setattr(oracles, "stage3_prices", lambda I_L, I_F, c: (c + 0.5, c + 0.5))
    assert not oracles.price_best_response_oracle(1.0, 1.0, 1.0).passed


def test_follower_oracle_examples():
    assert follower_investment_oracle(1.0, 1.0).oracle_value[0] == pytest.approx(0.125, abs=1e-5)
    report = follower_investment_oracle(0.3, 1.0)
    assert report.oracle_value[0] == 0.3 and report.passed


def test_follower_oracle_at_boundary_ties_to_full_reservation():
    b = math.sqrt(2 / 9)
    report = follower_investment_oracle(b, 1.0)
    assert report.passed
    assert report.oracle_value[0] == pytest.approx(b, abs=1e-12)


def test_leader_oracle_outcome_a():
    report = leader_investment_oracle(validate_params(1, 0.1))
    assert report.passed
    assert report.details["analytic_regime"] == "A"
    assert report.details["refined_argmax"] > math.sqrt(2 / 9)


def test_leader_oracle_boundary_case():
    report = leader_investment_oracle(validate_params(0.12, 0.1))
    assert report.passed
    assert report.details["grid_excess"] <= 1e-6
    assert report.details["refined_argmax"] == pytest.approx(math.sqrt(2 / (9 * 0.12)), abs=1e-6)


def test_leader_oracle_plateau_at_fee_equal_cost():
    report = leader_investment_oracle(validate_params(0.1, 0.1))
    assert report.passed
    assert report.oracle_value[0] == pytest.approx(1 / 9, abs=1e-12)
    # flat payoff below the boundary resolves to the largest investment
    assert report.details["grid_argmax"] == pytest.approx(math.sqrt(2 / 0.9), abs=2e-4)


def test_agent_oracle_closed_form_split():
    I = math.sqrt(2 / 9)
    prof = StrategyProfile(I, I, 1 + 1 / 3, 1 + 2 / 3)
    split = hotelling_agent_oracle(prof, validate_params(1, 0.1, 1), 100_000)
    assert split.n_L == pytest.approx(1 / 3, abs=1e-5)


def test_agent_oracle_symmetric():
    prof = StrategyProfile(1.0, 0.5, 1.4, 1.4)
    split = hotelling_agent_oracle(prof, validate_params(1, 0.1, 1), 100_000)
    assert split.n_L == pytest.approx(0.5, abs=1e-5)


def test_agent_oracle_clamped():
    prof = StrategyProfile(1.0, 0.0, 1.0, 3.0)
    assert hotelling_agent_oracle(prof, validate_params(1, 0.1, 1), 1000).n_L == 1.0


def test_agent_oracle_coverage_violation():
    prof = StrategyProfile(1.0, 0.5, 20.0, 20.0)
    with pytest.raises(CoverageViolated):
        hotelling_agent_oracle(prof, validate_params(1, 0.1, 1), 100)


@pytest.mark.parametrize("N", [10, 137, 1000])
def test_agent_oracle_within_one_over_n(N):
    rng = np.random.default_rng(N)
    for _ in range(50):
        I_L = rng.uniform(0.1, 2)
        prof = StrategyProfile(I_L, rng.uniform(0, 1) * I_L, 1 + rng.uniform(0, 1), 1 + rng.uniform(0, 1))
        sim = hotelling_agent_oracle(prof, validate_params(1, 0.1, 1), N)
        assert abs(sim.n_L - stage4_split(prof).n_L) <= 1 / N + 1e-12
