"""Exact Geo/D/C/C pool chain over execution pipelines.

A state packs each class's pipeline into an int: bit k-1 set means an
instance of that class has exactly k slots of service left. Each slot the
pipelines shift down by one (bit 0 departs) and an admitted task enters at
bit D_i - 1. Admission is decided on the occupancy before the shift.
"""
import logging
from collections import deque
from dataclasses import dataclass
from math import comb
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from django.conf import settings

from common import error_codes
from common.exceptions import ContractViolation, StateSpaceTooLarge
from system.channel import effective_arrivals

from .steady import StateSpace, SteadyState, availability_prob, solve_sparse

logger = logging.getLogger(__name__)

ADMISSIONS = ((0, 0), (1, 0), (0, 1))


class DetState(NamedTuple):
    v1: int
    v2: int

    @property
    def n1(self):
        return self.v1.bit_count()

    @property
    def n2(self):
        return self.v2.bit_count()

    def occupancy(self, units):
        return units[0] * self.n1 + units[1] * self.n2

    def label(self):
        return f"{self.v1:b}/{self.v2:b}"

    @classmethod
    def from_bits(cls, bits1, bits2=()):
        """Build from pipelines listed as [v_1, ..., v_D] (k slots remaining at k)."""
        return cls(_pack(bits1), _pack(bits2))

    def to_bits(self, d1, d2):
        return _unpack(self.v1, d1), _unpack(self.v2, d2)


def _pack(bits):
    word = 0
    for k, bit in enumerate(bits):
        if bit:
            word |= 1 << k
    return word


def _unpack(word, length):
    return [(word >> k) & 1 for k in range(length)]


EMPTY = DetState(0, 0)


@dataclass(frozen=True)
class PipelineLayout:
    d1: int
    d2: int
    capacity: int
    units: tuple = (1, 4)

    @classmethod
    def from_config(cls, config):
        return cls(
            d1=config.task1.service_slots,
            d2=config.task2.service_slots,
            capacity=config.capacity,
            units=(config.task1.units_required, config.task2.units_required),
        )

    def fits(self, state, a1, a2):
        extra = a1 * self.units[0] + a2 * self.units[1]
        return state.occupancy(self.units) + extra <= self.capacity


def count_states(d1, d2, capacity, units):
    """Size of the capacity-feasible pipeline set (closed form)."""
    total = 0
    for n2 in range(min(d2, capacity // units) + 1):
        for n1 in range(min(d1, capacity - units * n2) + 1):
            total += comb(d1, n1) * comb(d2, n2)
    return total


def admission_kernel(state, arrivals, layout):
    """Distribution over the admission outcomes (0,0), (1,0), (0,1).

    Indicators are evaluated on ``state`` itself, so a task finishing this
    slot still holds its units when the arrival is checked.
    """
    a1, a2 = arrivals
    p10 = a1 if layout.fits(state, 1, 0) else 0.0
    p01 = a2 if layout.fits(state, 0, 1) else 0.0
    return {(0, 0): 1.0 - p10 - p01, (1, 0): p10, (0, 1): p01}


def next_state(state, a1, a2, layout):
    """Shift both pipelines one slot and insert the admitted tasks at the top."""
    if (a1 and a2) or not layout.fits(state, a1, a2):
        raise ContractViolation(
            error_codes.INFEASIBLE_ADMISSION.format(
                a1=a1,
                a2=a2,
                occupancy=state.occupancy(layout.units),
                capacity=layout.capacity,
            )
        )
    v1 = (state.v1 >> 1) | (a1 << (layout.d1 - 1))
    v2 = (state.v2 >> 1) | (a2 << (layout.d2 - 1))
    return DetState(v1, v2)


def _explore(layout, arrivals, cap):
    states = [EMPTY]
    index = {EMPTY: 0}
    rows, cols, vals = [], [], []
    queue = deque([EMPTY])
    while queue:
        state = queue.popleft()
        source = index[state]
        for (a1, a2), prob in admission_kernel(state, arrivals, layout).items():
            if prob <= 0.0:
                continue
            target = next_state(state, a1, a2, layout)
            position = index.get(target)
            if position is None:
                position = len(states)
                if position >= cap:
                    raise StateSpaceTooLarge(
                        error_codes.STATE_SPACE_TOO_LARGE.format(cap=cap)
                    )
                index[target] = position
                states.append(target)
                queue.append(target)
            rows.append(source)
            cols.append(position)
            vals.append(prob)
    return states, index, (rows, cols, vals)


def _build(config, cap):
    cap = settings.DET_STATE_SPACE_CAP if cap is None else cap
    layout = PipelineLayout.from_config(config)
    arrivals = effective_arrivals(config)
    states, index, (rows, cols, vals) = _explore(layout, arrivals, cap)
    space = StateSpace(
        states=states, capacity=layout.capacity, units=layout.units, index=index
    )
    n = len(states)
    matrix = sp.csr_matrix(
        (np.asarray(vals), (np.asarray(rows), np.asarray(cols))), shape=(n, n)
    )
    logger.info(
        "Geo/D/C/C: %d reachable states (closed-form count %d)",
        n,
        count_states(layout.d1, layout.d2, layout.capacity, layout.units[1]),
    )
    return space, matrix


def enumerate_states(config, cap=None):
    """States reachable from the empty pool, in breadth-first order."""
    return _build(config, cap)[0]


def transition_matrix(config, cap=None):
    return _build(config, cap)


def solve_steady_state(config, cap=None):
    space, matrix = _build(config, cap)
    return SteadyState(probs=solve_sparse(matrix), space=space, engine="det")


__all__ = [
    "DetState",
    "PipelineLayout",
    "availability_prob",
    "admission_kernel",
    "count_states",
    "enumerate_states",
    "next_state",
    "solve_steady_state",
    "transition_matrix",
]
