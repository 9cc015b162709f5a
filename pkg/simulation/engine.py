"""Slot-level Monte Carlo of generation, admission, uplink, pool and actuation.

One run is a strict slot loop. Every stochastic stage draws from its own
substream of one seed, so switching the uplink to explicit fading draws
leaves generation, admission and service untouched.
"""
import heapq
import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from django.conf import settings

from system.channel import fading_threshold, uplink_success_prob

from .models import (
    DEPARTURE_SEMANTICS,
    DETERMINISTIC,
    GEOMETRIC,
    POST,
    SERVICE_MODES,
    AgeTracker,
    PoolEntry,
    SimResult,
)

logger = logging.getLogger(__name__)

GENERATION, ADMISSION, FADING, SERVICE = range(4)


def _streams(seed):
    children = np.random.SeedSequence(seed).spawn(4)
    return [np.random.default_rng(child) for child in children]


def _uplink_draws(config, rng, slots, fading_draws):
    """Per-slot uplink outcome for each class as two boolean lists."""
    channel = config.channel
    if channel.ideal:
        ok = [True] * slots
        return ok, ok
    if fading_draws:
        # |h|^2 ~ Gamma(m, 1/m), unit mean
        gains = rng.gamma(shape=channel.shape, scale=1.0 / channel.shape, size=slots)
        return tuple(
            (gains >= fading_threshold(channel, t.tx_power)).tolist()
            for t in config.tasks
        )
    uniforms = rng.random(slots)
    return tuple(
        (uniforms < uplink_success_prob(channel, t.tx_power)).tolist()
        for t in config.tasks
    )


def _service_draws(config, rng, slots, service_mode):
    """Holding time of the j-th admitted task of each class, in slots."""
    if service_mode == DETERMINISTIC:
        return None
    return tuple(
        rng.geometric(t.service_rate, size=slots).tolist() for t in config.tasks
    )


def _batch_stats(values):
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    if finite.size < 2:
        return float("nan")
    return float(np.std(finite, ddof=1) / np.sqrt(finite.size))


def measurement_window(slots, batches=None, warmup=None):
    """(batches, warmup, batch_len) for a horizon; ValueError if a batch would be empty."""
    batches = settings.SIM_BATCHES if batches is None else batches
    warmup = min(settings.SIM_WARMUP_SLOTS, slots // 10) if warmup is None else warmup
    batch_len = (slots - warmup) // batches
    if batch_len < 1:
        raise ValueError(
            f"{slots} slots leave no room for {batches} batches after warm-up {warmup}"
        )
    return batches, warmup, batch_len


def run(
    config,
    service_mode=DETERMINISTIC,
    departure_semantics="pre",
    fading_draws=False,
    batches=None,
    warmup=None,
):
    if service_mode not in SERVICE_MODES:
        raise ValueError(f"service_mode must be one of {SERVICE_MODES}")
    if departure_semantics not in DEPARTURE_SEMANTICS:
        raise ValueError(f"departure_semantics must be one of {DEPARTURE_SEMANTICS}")

    slots = config.sim_slots
    batches, warmup, batch_len = measurement_window(slots, batches, warmup)
    measure_end = warmup + batches * batch_len

    rngs = _streams(config.rng_seed)
    gen_u = rngs[GENERATION].random(slots).tolist()
    adm_u = rngs[ADMISSION].random(slots).tolist()
    uplink_ok = _uplink_draws(config, rngs[FADING], slots, fading_draws)
    holding = _service_draws(config, rngs[SERVICE], slots, service_mode)

    tasks = config.tasks
    g1 = tasks[0].gen_prob
    g12 = g1 + tasks[1].gen_prob
    admit = [t.admit_prob for t in tasks]
    units = [t.units_required for t in tasks]
    penalty = [t.penalty for t in tasks]
    fixed_hold = [t.service_slots for t in tasks]
    capacity = config.capacity
    release_first = departure_semantics == POST

    generated = [0, 0]
    rejected = [0, 0]
    lost = [0, 0]
    blocked = [0, 0]
    executed = [0, 0]
    admitted = [0, 0]
    attempts = [0, 0]
    received = [0, 0]
    pool_arrivals = [[0] * batches for _ in range(2)]
    pool_blocked = [[0] * batches for _ in range(2)]
    missed_cost = [0.0] * batches
    aoi_sum = [0.0] * batches
    last_received = None
    aoi_undefined = 0

    ages = AgeTracker(classes=2, batches=batches)
    pool = []
    occupied = 0

    def release(slot, measuring):
        nonlocal occupied
        while pool and pool[0].end_slot == slot:
            entry = heapq.heappop(pool)
            occupied -= entry.units_held
            executed[entry.task_class] += 1
            ages.execute(entry.task_class, entry.gen_slot, slot, measuring)

    for slot in range(slots):
        measuring = warmup <= slot < measure_end
        batch = (slot - warmup) // batch_len if measuring else -1
        if measuring:
            ages.sample(slot, batch)
            if last_received is None:
                aoi_undefined += 1
            else:
                aoi_sum[batch] += slot - last_received

        if release_first:
            release(slot, measuring)

        u = gen_u[slot]
        if u < g12:
            c = 0 if u < g1 else 1
            generated[c] += 1
            missed = True
            if adm_u[slot] >= admit[c]:
                rejected[c] += 1
            else:
                attempts[c] += 1
                if not uplink_ok[c][slot]:
                    lost[c] += 1
                else:
                    received[c] += 1
                    last_received = slot
                    if measuring:
                        pool_arrivals[c][batch] += 1
                    if occupied + units[c] > capacity:
                        blocked[c] += 1
                        if measuring:
                            pool_blocked[c][batch] += 1
                    else:
                        hold = fixed_hold[c] if holding is None else holding[c][admitted[c]]
                        admitted[c] += 1
                        occupied += units[c]
                        heapq.heappush(pool, PoolEntry(slot + hold, c, slot, units[c]))
                        missed = False
            if missed and measuring:
                missed_cost[batch] += penalty[c]

        if not release_first:
            release(slot, measuring)
        assert occupied <= capacity, f"pool over capacity at slot {slot}"

    in_flight = [0, 0]
    for entry in pool:
        in_flight[entry.task_class] += 1

    aoa_batches = []
    for c, task in enumerate(tasks):
        if ages.undefined_slots[c]:
            aoa_batches.append([float("inf")] * batches)
        else:
            aoa_batches.append(
                [s / batch_len + task.downlink_delay for s in ages.age_sum[c]]
            )
    coma_batches = [cost / batch_len for cost in missed_cost]
    aoi_batches = (
        [float("inf")] * batches
        if aoi_undefined
        else [s / batch_len for s in aoi_sum]
    )
    blocking_batches = [
        [
            blocked_b / arrivals_b if arrivals_b else float("nan")
            for blocked_b, arrivals_b in zip(pool_blocked[c], pool_arrivals[c])
        ]
        for c in range(2)
    ]

    blocking = []
    for c in range(2):
        total = sum(pool_arrivals[c])
        blocking.append(sum(pool_blocked[c]) / total if total else 0.0)

    uplink_rate = []
    uplink_se = []
    for c in range(2):
        rate = received[c] / attempts[c] if attempts[c] else float("nan")
        uplink_rate.append(rate)
        uplink_se.append(
            float(np.sqrt(rate * (1.0 - rate) / attempts[c])) if attempts[c] else float("nan")
        )

    interval_mean = []
    interval_sq_mean = []
    for count, total, squares in ages.intervals:
        interval_mean.append(total / count if count else float("nan"))
        interval_sq_mean.append(squares / count if count else float("nan"))

    result = SimResult(
        aoa=tuple(float(np.mean(b)) for b in aoa_batches),
        coma=float(np.mean(coma_batches)),
        blocking=tuple(blocking),
        aoi=float(np.mean(aoi_batches)),
        aoa_se=tuple(_batch_stats(b) for b in aoa_batches),
        coma_se=_batch_stats(coma_batches),
        blocking_se=tuple(_batch_stats(b) for b in blocking_batches),
        aoi_se=_batch_stats(aoi_batches),
        uplink_rate=tuple(uplink_rate),
        uplink_se=tuple(uplink_se),
        generated=tuple(generated),
        rejected=tuple(rejected),
        uplink_lost=tuple(lost),
        blocked=tuple(blocked),
        executed=tuple(executed),
        in_flight=tuple(in_flight),
        interval_mean=tuple(interval_mean),
        interval_sq_mean=tuple(interval_sq_mean),
        seed=config.rng_seed,
        slots=slots,
        measured_slots=measure_end - warmup,
        batches=batches,
        service_mode=service_mode,
        departure_semantics=departure_semantics,
        fading_draws=fading_draws,
    )
    logger.info(
        "simulated %d slots (%s, %s): blocking=%s coma=%.4f",
        slots,
        service_mode,
        departure_semantics,
        result.blocking,
        result.coma,
    )
    return result


def _run_job(job):
    config, options = job
    return run(config, **options)


def run_many(jobs, workers=None):
    """Run ``(config, options)`` jobs on a process pool, results in job order."""
    jobs = list(jobs)
    batches = settings.SIM_BATCHES
    warmup_cap = settings.SIM_WARMUP_SLOTS
    prepared = []
    for config, options in jobs:
        options = dict(options)
        options.setdefault("batches", batches)
        options.setdefault("warmup", min(warmup_cap, config.sim_slots // 10))
        prepared.append((config, options))

    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(prepared) <= 1:
        return [_run_job(job) for job in prepared]
    logger.debug("dispatching %d simulations to %d workers", len(prepared), workers)
    with ProcessPoolExecutor(max_workers=min(workers, len(prepared))) as pool:
        return list(pool.map(_run_job, prepared))


__all__ = ["GEOMETRIC", "DETERMINISTIC", "measurement_window", "run", "run_many"]
