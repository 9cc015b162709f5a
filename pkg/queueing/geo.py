"""Multi-rate Geo/Geo/C/C pool chain over occupancy counts (n1, n2).

Each busy task finishes independently with probability mu_i = 1/D_i per
slot. Admission is decided on the occupancy before departures, the same
convention as the pipeline chain. Two solvers are provided: a dense balance
solve and the level-wise matrix-geometric recursion, levels being n1.
"""
import logging
from typing import NamedTuple

import numpy as np
from django.conf import settings
from scipy.stats import binom

from common import error_codes
from common.exceptions import NumericalError
from system.channel import effective_arrivals

from .steady import (
    StateSpace,
    SteadyState,
    availability_prob,
    balance_residual,
    solve_dense,
)

logger = logging.getLogger(__name__)


class GeoState(NamedTuple):
    n1: int
    n2: int

    def occupancy(self, units):
        return units[0] * self.n1 + units[1] * self.n2

    def label(self):
        return f"{self.n1},{self.n2}"


def count_states_geo(capacity, units):
    """Closed-form size of {(n1, n2): n1 + N n2 <= C}."""
    top = capacity // units
    return (capacity + 1 + (capacity + 1 - units * top)) * (top + 1) // 2


def level_partition(capacity, units):
    """States ordered by level n1, then n2 ascending, with one slice per level."""
    levels = []
    states = []
    for n1 in range(capacity // units[0] + 1):
        free = capacity - units[0] * n1
        level = [GeoState(n1, n2) for n2 in range(free // units[1] + 1)]
        levels.append(slice(len(states), len(states) + len(level)))
        states.extend(level)
    return StateSpace(states=states, capacity=capacity, units=tuple(units)), levels


def binomial_departure(n, mu, kappa):
    """Probability that ``kappa`` of ``n`` busy tasks remain after one slot."""
    if kappa < 0 or kappa > n:
        return 0.0
    return float(binom.pmf(kappa, n, 1.0 - mu))


class GeoChain:
    """State space and arrival-independent skeleton of the Geo/Geo chain.

    The transition matrix is affine in the effective arrivals,
    P = M0 + a1 M1 + a2 M2, so the skeleton is built once and reused across
    sweeps that only move a1 and a2.
    """

    def __init__(self, capacity, units, mu):
        self.capacity = capacity
        self.units = tuple(units)
        self.mu = tuple(mu)

        self.space, self.levels = level_partition(capacity, self.units)
        self._build_skeleton()

    @classmethod
    def from_config(cls, config):
        return cls(
            capacity=config.capacity,
            units=(config.task1.units_required, config.task2.units_required),
            mu=(config.task1.service_rate, config.task2.service_rate),
        )

    def __len__(self):
        return len(self.space)

    def _departures(self, mu, top):
        table = np.zeros((top + 1, top + 1))
        for n in range(top + 1):
            table[n, : n + 1] = binom.pmf(np.arange(n + 1), n, 1.0 - mu)
        return table

    def _build_skeleton(self):
        n = len(self.space)
        index = self.space.index
        top1 = self.capacity // self.units[0]
        top2 = self.capacity // self.units[1]
        dep1 = self._departures(self.mu[0], top1)
        dep2 = self._departures(self.mu[1], top2)

        self.base = np.zeros((n, n))
        self.gain = (np.zeros((n, n)), np.zeros((n, n)))
        for i, state in enumerate(self.space.states):
            occupied = state.occupancy(self.units)
            fits = (
                occupied + self.units[0] <= self.capacity,
                occupied + self.units[1] <= self.capacity,
            )
            for k1 in range(state.n1 + 1):
                for k2 in range(state.n2 + 1):
                    prob = dep1[state.n1, k1] * dep2[state.n2, k2]
                    stay = index[GeoState(k1, k2)]
                    self.base[i, stay] += prob
                    if fits[0]:
                        self.gain[0][i, index[GeoState(k1 + 1, k2)]] += prob
                        self.gain[0][i, stay] -= prob
                    if fits[1]:
                        self.gain[1][i, index[GeoState(k1, k2 + 1)]] += prob
                        self.gain[1][i, stay] -= prob

    def transition_matrix(self, arrivals):
        a1, a2 = arrivals
        return self.base + a1 * self.gain[0] + a2 * self.gain[1]

    def block(self, generator, j, k):
        return generator[self.levels[j], self.levels[k]]

    def solve_direct(self, arrivals, tol=1e-12):
        return solve_dense(self.transition_matrix(arrivals), tol=tol)

    def _folded(self, generator, rates, j):
        """sum_{n>j} (R_{j+1} ... R_n) Q_{n,j}, evaluated Horner-style."""
        top = len(self.levels) - 1
        if j == top:
            return 0.0
        acc = self.block(generator, top, j)
        for n in range(top - 1, j, -1):
            acc = self.block(generator, n, j) + rates[n + 1] @ acc
        return rates[j + 1] @ acc

    def solve_matrix_geometric(self, arrivals, tol=None):
        tol = settings.STEADY_STATE_TOL if tol is None else tol
        matrix = self.transition_matrix(arrivals)
        generator = matrix - np.eye(len(self))
        top = len(self.levels) - 1
        rates = [None] * (top + 1)

        for k in range(top, 0, -1):
            censored = self.block(generator, k, k) + self._folded(generator, rates, k)
            # R_k = -Q_{k-1,k} Q~_k^{-1}, as a solve against Q~_k^T
            upward = self.block(generator, k - 1, k)
            try:
                rates[k] = np.linalg.solve(censored.T, -upward.T).T
            except np.linalg.LinAlgError:
                rates[k] = None
            if rates[k] is None or not np.all(np.isfinite(rates[k])):
                cond = float(np.linalg.cond(censored))
                raise NumericalError(
                    error_codes.SINGULAR_LEVEL.format(level=k, cond=cond),
                    level=k,
                    cond=cond,
                )

        boundary = self.block(generator, 0, 0) + self._folded(generator, rates, 0)
        weights = np.ones(self.levels[top].stop - self.levels[top].start)
        for k in range(top, 0, -1):
            size = self.levels[k - 1].stop - self.levels[k - 1].start
            weights = np.ones(size) + rates[k] @ weights

        system = boundary.copy()
        system[:, 0] = weights
        rhs = np.zeros(system.shape[0])
        rhs[0] = 1.0
        try:
            base = np.linalg.solve(system.T, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                error_codes.SINGULAR_BALANCE.format(detail=exc), level=0
            ) from exc

        parts = [base]
        for k in range(1, top + 1):
            parts.append(parts[-1] @ rates[k])
        probs = np.clip(np.concatenate(parts), 0.0, None)
        probs = probs / probs.sum()

        residual = balance_residual(probs, matrix)
        logger.debug("matrix-geometric: %d levels, residual %.3e", top + 1, residual)
        if residual > tol:
            raise NumericalError(
                error_codes.RESIDUAL_TOO_LARGE.format(residual=residual, tol=tol),
                residual=residual,
            )
        return probs


def transition_prob_geo(source, target, config):
    """One-step probability from ``source`` to ``target``, summed over admissions."""
    units = (config.task1.units_required, config.task2.units_required)
    a1, a2 = effective_arrivals(config)
    occupied = source.occupancy(units)
    p10 = a1 if occupied + units[0] <= config.capacity else 0.0
    p01 = a2 if occupied + units[1] <= config.capacity else 0.0
    mu1, mu2 = config.task1.service_rate, config.task2.service_rate
    total = 0.0
    for (d1, d2), prob in (((0, 0), 1.0 - p10 - p01), ((1, 0), p10), ((0, 1), p01)):
        if prob == 0.0:
            continue
        total += (
            prob
            * binomial_departure(source.n1, mu1, target.n1 - d1)
            * binomial_departure(source.n2, mu2, target.n2 - d2)
        )
    return total


def solve_direct(config, chain=None):
    chain = chain or GeoChain.from_config(config)
    probs = chain.solve_direct(effective_arrivals(config))
    return SteadyState(probs=probs, space=chain.space, engine="geo-direct")


def solve_matrix_geometric(config, chain=None):
    chain = chain or GeoChain.from_config(config)
    probs = chain.solve_matrix_geometric(effective_arrivals(config))
    return SteadyState(probs=probs, space=chain.space, engine="geo-mg")


availability_prob_geo = availability_prob
