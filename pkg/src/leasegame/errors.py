"""Exception types raised by the solver, oracles and sweep engine."""


class ModelError(ValueError):
    """Base class for invalid model inputs."""


class NonPositiveFee(ModelError):
    pass


class NegativeCost(ModelError):
    pass


class FeeBelowCost(ModelError):
    pass


class CoverageViolated(ModelError):
    """The common valuation is too small for every end-user to subscribe."""


class ZeroLeaderInvestment(ModelError):
    pass


class InvestmentOrderViolated(ModelError):
    """Reserved resources must satisfy 0 <= I_F <= I_L."""


class SingularDenominator(ModelError):
    pass


class NonPositiveTransport(ModelError):
    pass


class InvalidGrid(ModelError):
    pass


class InvalidSweep(ModelError):
    pass


class NoConvergence(RuntimeError):
    pass


class IoFailure(OSError):
    def __init__(self, path, reason):
        super().__init__(f"cannot write {path}: {reason}")
        self.path = path
