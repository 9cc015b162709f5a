"""Closed-form time averages: task-aware AoA, CoMA and the AoI baseline.

Availability P(Gamma >= N_i) is an input, so the same formulas serve every
queue engine and the simulator.
"""
from dataclasses import dataclass

from queueing.engines import AvailabilityEvaluator
from system.channel import uplink_success_prob

from .models import UNBOUNDED, MetricsReport


@dataclass(frozen=True)
class TaskTerms:
    """Per-class inputs of the CoMA sum."""

    penalty: float
    gen_prob: float
    admit_prob: float
    uplink: float
    availability: float


def task_aoa(g, eta, p_u, avail, service_slots, downlink_delay):
    rate = g * eta * p_u * avail
    if rate <= 0.0:
        return UNBOUNDED
    return 1.0 / rate + service_slots + downlink_delay


def coma(task1, task2):
    return sum(
        t.penalty * t.gen_prob * (1.0 - t.admit_prob * t.uplink * t.availability)
        for t in (task1, task2)
    )


def aoi_baseline(g1, eta1, pu1, g2, eta2, pu2):
    rate = g1 * eta1 * pu1 + g2 * eta2 * pu2
    if rate <= 0.0:
        return UNBOUNDED
    return 1.0 / rate


def report_from_availability(config, availability, engine):
    uplink = tuple(uplink_success_prob(config.channel, t.tx_power) for t in config.tasks)
    aoa = tuple(
        task_aoa(
            t.gen_prob,
            t.admit_prob,
            p_u,
            avail,
            t.service_slots,
            t.downlink_delay,
        )
        for t, p_u, avail in zip(config.tasks, uplink, availability)
    )
    terms = [
        TaskTerms(t.penalty, t.gen_prob, t.admit_prob, p_u, avail)
        for t, p_u, avail in zip(config.tasks, uplink, availability)
    ]
    t1, t2 = config.tasks
    return MetricsReport(
        aoa=aoa,
        coma=coma(*terms),
        aoi=aoi_baseline(
            t1.gen_prob, t1.admit_prob, uplink[0], t2.gen_prob, t2.admit_prob, uplink[1]
        ),
        availability=tuple(availability),
        uplink=uplink,
        engine=engine,
    )


def compose_report(config, engine, evaluator=None):
    """Channel, then the engine's availability, then the closed-form metrics."""
    evaluator = evaluator or AvailabilityEvaluator(config, engine)
    return report_from_availability(config, evaluator(config), engine)
