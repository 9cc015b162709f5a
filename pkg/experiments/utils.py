import logging

from metrics.utils import compose_report
from queueing.engines import DET, ENGINES, ERLANG, GEO_MG, AvailabilityEvaluator
from simulation.engine import run_many
from simulation.models import DETERMINISTIC, GEOMETRIC

from .models import SIMULATED_DETERMINISTIC, SIMULATED_GEOMETRIC, BlockingRow, SweepRow
from .presets import with_load

logger = logging.getLogger(__name__)

SIMULATED = ((SIMULATED_DETERMINISTIC, DETERMINISTIC), (SIMULATED_GEOMETRIC, GEOMETRIC))

SWEEP_ENGINES = (DET, GEO_MG, ERLANG)


def _sim_jobs(configs, departure_semantics="pre"):
    jobs = []
    for config in configs:
        for _, mode in SIMULATED:
            jobs.append(
                (config, {"service_mode": mode, "departure_semantics": departure_semantics})
            )
    return jobs


def compare_rows(base, loads, engines=ENGINES, simulate=True, workers=None):
    """Blocking per class at each (g1, g2) under every engine and both simulators."""
    evaluators = {engine: AvailabilityEvaluator(base, engine) for engine in engines}
    configs = [with_load(base, g1, g2) for g1, g2 in loads]
    sims = run_many(_sim_jobs(configs), workers=workers) if simulate else []

    rows = []
    for point, config in enumerate(configs):
        g1, g2 = config.task1.gen_prob, config.task2.gen_prob
        blocking = {}
        for engine, evaluator in evaluators.items():
            blocking[engine] = tuple(1.0 - a for a in evaluator(config))
        ordered = None
        if DET in blocking and GEO_MG in blocking:
            ordered = tuple(
                blocking[DET][i] <= blocking[GEO_MG][i] + 1e-12 for i in range(2)
            )
            if not all(ordered):
                logger.warning("det blocking above geo at g2=%s: %s", g2, blocking)
        for task in (1, 2):
            flag = None if ordered is None else ordered[task - 1]
            for engine in engines:
                rows.append(
                    BlockingRow(g1, g2, engine, task, blocking[engine][task - 1], None, flag)
                )
            for offset, (label, _) in enumerate(SIMULATED if simulate else ()):
                result = sims[2 * point + offset]
                rows.append(
                    BlockingRow(
                        g1,
                        g2,
                        label,
                        task,
                        result.blocking[task - 1],
                        result.blocking_se[task - 1],
                        flag,
                    )
                )
    return rows


def sweep_rows(base, etas, engines=SWEEP_ENGINES, simulate=True, workers=None):
    """Metrics at each eta1 under each engine plus the two simulators."""
    evaluators = {engine: AvailabilityEvaluator(base, engine) for engine in engines}
    configs = [base.with_task(1, admit_prob=eta) for eta in etas]
    sims = run_many(_sim_jobs(configs), workers=workers) if simulate else []

    rows = []
    for point, config in enumerate(configs):
        eta = config.task1.admit_prob
        for engine, evaluator in evaluators.items():
            report = compose_report(config, engine, evaluator=evaluator)
            rows.append(SweepRow(eta, engine, *report.aoa, report.coma, report.aoi))
        for offset, (label, _) in enumerate(SIMULATED if simulate else ()):
            result = sims[2 * point + offset]
            rows.append(
                SweepRow(
                    eta,
                    label,
                    *result.aoa,
                    result.coma,
                    result.aoi,
                    *result.aoa_se,
                    result.coma_se,
                    result.aoi_se,
                )
            )
    _check_coupling(rows, engines)
    return rows


def _check_coupling(rows, engines):
    # admitting more task-1 work can only delay task 2
    for engine in engines:
        aoa2 = [r.aoa2 for r in rows if r.source == engine]
        for before, after in zip(aoa2, aoa2[1:]):
            if after < before * (1 - 1e-9):
                logger.warning("%s: task-2 AoA fell as eta1 grew (%s -> %s)", engine, before, after)
                break
