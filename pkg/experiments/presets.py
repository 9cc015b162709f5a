"""Experiment layouts: queue comparison, eta1 sweep and Pareto grid defaults."""
from dataclasses import replace

import numpy as np

# queue comparison: C=12, N=4, D_C=(5, 10), eta=1, error-free uplink, g1/g2 = 4
COMPARE_RATIO = 4.0
COMPARE_G2_RANGE = (0.005, 0.095)
COMPARE_POINTS = 10

# eta1 sweep: P_T=(0.05, 0.2) W, eta2=0.8
SWEEP_RANGE = (0.1, 1.0)
SWEEP_POINTS = 10


def compare_config(base):
    config = base.with_capacity(12)
    config = config.with_task(1, service_slots=5, admit_prob=1.0, units_required=1)
    config = config.with_task(2, service_slots=10, admit_prob=1.0, units_required=4)
    return config.with_channel(ideal=True)


def sweep_config(base):
    config = base.with_task(1, tx_power=0.05)
    return config.with_task(2, tx_power=0.2, admit_prob=0.8)


def load_points(g2_min, g2_max, points, ratio=COMPARE_RATIO):
    """(g1, g2) pairs with g1 = ratio * g2, g2 evenly spaced."""
    pairs = []
    for g2 in np.linspace(g2_min, g2_max, points):
        g2 = float(g2)
        pairs.append((ratio * g2, g2))
    return pairs


def with_load(config, g1, g2):
    config = config.with_task(1, gen_prob=g1)
    return config.with_task(2, gen_prob=g2)


def eta_points(start, stop, points):
    if not (0.0 < start <= 1.0 and 0.0 < stop <= 1.0):
        raise ValueError("eta1 range must lie within (0, 1]")
    return [float(e) for e in np.linspace(start, stop, points)]


def with_slots(config, slots=None, seed=None):
    changes = {}
    if slots is not None:
        changes["sim_slots"] = slots
    if seed is not None:
        changes["rng_seed"] = seed
    return replace(config, **changes) if changes else config
