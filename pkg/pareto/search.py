"""Grid search for the (CoMA, AoA_1) trade-off under the energy budget."""
import logging
import os
from concurrent.futures import ProcessPoolExecutor

from metrics.utils import compose_report
from queueing.engines import GEO_MG, AvailabilityEvaluator

from .models import DecisionPoint, GridSpec, ParetoFront
from .utils import non_dominated

logger = logging.getLogger(__name__)

# slack on the budget comparison so points exactly on it stay feasible
BUDGET_SLACK = 1e-12


def is_feasible(config, budget=None):
    budget = config.energy_rate if budget is None else budget
    if budget is None:
        return True
    return config.power_usage <= budget + BUDGET_SLACK


def apply_decision(config, decision):
    p_t1, p_t2, eta1, eta2 = decision
    for value in (eta1, eta2):
        if not 0.0 < value <= 1.0:
            raise ValueError(f"admission probability must lie in (0, 1], got {value!r}")
    for value in (p_t1, p_t2):
        if not value > 0.0:
            raise ValueError(f"transmit power must be positive, got {value!r}")
    config = config.with_task(1, tx_power=p_t1, admit_prob=eta1)
    return config.with_task(2, tx_power=p_t2, admit_prob=eta2)


def evaluate_point(decision, config, engine=GEO_MG, evaluator=None):
    """Objectives of one decision; infeasible points are evaluated and flagged."""
    candidate = apply_decision(config, decision)
    report = compose_report(candidate, engine, evaluator=evaluator)
    return DecisionPoint(
        p_t1=decision[0],
        p_t2=decision[1],
        eta1=decision[2],
        eta2=decision[3],
        feasible=is_feasible(candidate),
        coma=report.coma,
        aoa1=report.aoa[0],
        engine=engine,
        power_usage=candidate.power_usage,
    )


def _evaluate_chunk(job):
    config, engine, decisions = job
    evaluator = AvailabilityEvaluator(config, engine)
    return [evaluate_point(d, config, engine, evaluator) for d in decisions]


def evaluate_all(config, decisions, engine=GEO_MG, workers=1, chunks_per_worker=4):
    """Evaluate ``decisions`` in order, optionally spread over a process pool."""
    decisions = list(decisions)
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(decisions) < 2:
        return _evaluate_chunk((config, engine, decisions))
    size = max(1, -(-len(decisions) // (workers * chunks_per_worker)))
    jobs = [
        (config, engine, decisions[i : i + size])
        for i in range(0, len(decisions), size)
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = []
        for chunk in pool.map(_evaluate_chunk, jobs):
            results.extend(chunk)
    return results


def _eligible(points):
    return [p for p in points if p.feasible and p.bounded]


def search(config, grid=None, engine=GEO_MG, workers=1):
    grid = grid or GridSpec.default()
    if not grid.power_levels or not grid.eta_levels:
        raise ValueError("grid must contain at least one power and one eta level")

    points = evaluate_all(config, grid.differentiated(), engine, workers)
    front = non_dominated(_eligible(points))

    baseline_points = evaluate_all(config, grid.uniform(), engine, workers)
    eligible = _eligible(baseline_points)
    baseline_front = non_dominated(eligible)
    baseline_best = min(
        eligible, key=lambda p: (p.coma, p.aoa1, p.decision), default=None
    )

    result = ParetoFront(
        front=tuple(front),
        points=tuple(points),
        baseline_points=tuple(baseline_points),
        baseline_front=tuple(baseline_front),
        baseline_best=baseline_best,
        engine=engine,
        budget=config.energy_rate,
    )
    if result.empty:
        logger.warning("no feasible grid point under E/T=%s", config.energy_rate)
    else:
        logger.info(
            "pareto: %d points, front size %d, %d beat the baseline CoMA",
            len(points),
            len(front),
            result.dominance_gap,
        )
    return result
