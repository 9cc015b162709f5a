"""Product-form (Erlang loss) approximation of the two-class pool."""
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .geo import level_partition
from .steady import SteadyState, availability_prob


@dataclass(frozen=True)
class ErlangLoad:
    rho1: float
    rho2: float

    def __post_init__(self):
        if self.rho1 < 0 or self.rho2 < 0:
            raise ValueError("offered loads must be nonnegative")

    @classmethod
    def from_config(cls, config, arrivals):
        """rho_i = a_i / mu_i = a_i * D_i."""
        return cls(
            rho1=arrivals[0] * config.task1.service_slots,
            rho2=arrivals[1] * config.task2.service_slots,
        )


def erlang_steady_state(load, capacity, units, units1=1):
    """S(n1, n2) proportional to rho1^n1/n1! * rho2^n2/n2!, normalized in log space."""
    space, _ = level_partition(capacity, (units1, units))
    n1 = np.array([s.n1 for s in space.states], dtype=float)
    n2 = np.array([s.n2 for s in space.states], dtype=float)
    log_weights = (
        xlogy(n1, load.rho1)
        - gammaln(n1 + 1)
        + xlogy(n2, load.rho2)
        - gammaln(n2 + 1)
    )
    probs = np.exp(log_weights - logsumexp(log_weights))
    return SteadyState(probs=probs, space=space, engine="erlang")


availability_prob_erlang = availability_prob
