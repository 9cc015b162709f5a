import math
from dataclasses import replace

from django.test import SimpleTestCase

from metrics.utils import compose_report, report_from_availability
from queueing.engines import DET, GEO_MG, availabilities
from simulation.engine import run, run_many
from simulation.models import (
    DETERMINISTIC,
    GEOMETRIC,
    POST,
    SLOT_CONVENTION,
    AgeTracker,
    PoolEntry,
)
from simulation.serializers import SimResultSerializer
from system.channel import effective_arrivals, uplink_success_prob
from system.models import SystemConfig

SLOTS = 200_000


def short(config, slots=SLOTS, seed=0):
    return replace(config, sim_slots=slots, rng_seed=seed)


def compare_pool(g2=0.095):
    config = SystemConfig().with_capacity(12).with_channel(ideal=True)
    config = config.with_task(1, service_slots=5, gen_prob=4 * g2, admit_prob=1.0)
    return short(config.with_task(2, service_slots=10, gen_prob=g2, admit_prob=1.0))


def row(result):
    return dict(SimResultSerializer(result).data)


class SimulationBasicsTest(SimpleTestCase):
    def test_same_seed_same_result(self):
        config = short(SystemConfig(), slots=20_000, seed=5)
        self.assertEqual(row(run(config)), row(run(config)))
        self.assertNotEqual(row(run(config)), row(run(replace(config, rng_seed=6))))

    def test_no_generation(self):
        config = short(SystemConfig().with_task(1, gen_prob=0.0).with_task(2, gen_prob=0.0), 5_000)
        result = run(config)
        self.assertEqual(result.generated, (0, 0))
        self.assertEqual(result.executed, (0, 0))
        self.assertEqual(result.blocking, (0.0, 0.0))
        self.assertTrue(math.isinf(result.aoa[0]))
        self.assertTrue(math.isinf(result.aoi))
        self.assertEqual(result.coma, 0.0)

    def test_ledger_balances(self):
        for mode in (DETERMINISTIC, GEOMETRIC):
            result = run(short(SystemConfig(), slots=30_000), service_mode=mode)
            self.assertTrue(result.ledger_balanced(), mode)
            self.assertGreater(sum(result.executed), 0)
        post = run(short(SystemConfig(), slots=30_000), departure_semantics=POST)
        self.assertTrue(post.ledger_balanced())

    def test_metadata(self):
        result = run(short(SystemConfig(), slots=20_000), service_mode=GEOMETRIC)
        self.assertEqual(result.slot_convention, SLOT_CONVENTION)
        self.assertEqual(result.batches, 20)
        self.assertEqual(result.measured_slots % 20, 0)
        self.assertAlmostEqual(result.ci_halfwidth(1.0), 2.093, places=3)

    def test_bad_options(self):
        with self.assertRaises(ValueError):
            run(short(SystemConfig(), slots=10))
        with self.assertRaises(ValueError):
            run(short(SystemConfig(), slots=10_000), service_mode="erlang")

    def test_run_many_keeps_job_order(self):
        jobs = [
            (short(SystemConfig(), 10_000, seed), {"service_mode": GEOMETRIC})
            for seed in (1, 2, 3)
        ]
        serial = [row(result) for result in run_many(jobs, workers=1)]
        pooled = [row(result) for result in run_many(jobs, workers=2)]
        self.assertEqual(serial, pooled)
        self.assertEqual([r["seed"] for r in serial], [1, 2, 3])


class SimulationAgreementTest(SimpleTestCase):
    """Simulated estimates against the analytic chains of the same service law."""

    def assertWithin(self, simulated, expected, se, slack=1e-3):
        self.assertLessEqual(abs(simulated - expected), 4 * se + slack)

    def test_deterministic_blocking_matches_pipeline_chain(self):
        config = compare_pool()
        result = run(config, service_mode=DETERMINISTIC)
        for c, avail in enumerate(availabilities(config, DET)):
            self.assertWithin(result.blocking[c], 1 - avail, result.blocking_se[c])

    def test_geometric_blocking_matches_count_chain(self):
        config = compare_pool()
        result = run(config, service_mode=GEOMETRIC)
        for c, avail in enumerate(availabilities(config, GEO_MG)):
            self.assertWithin(result.blocking[c], 1 - avail, result.blocking_se[c])

    def test_miss_cost_matches_closed_form(self):
        config = short(SystemConfig())
        for mode, engine in ((DETERMINISTIC, DET), (GEOMETRIC, GEO_MG)):
            result = run(config, service_mode=mode)
            report = compose_report(config, engine)
            self.assertWithin(result.coma, report.coma, result.coma_se, slack=5e-3)

    def test_light_load_ages(self):
        # no blocking, so executions are a delayed Bernoulli stream
        config = SystemConfig().with_task(1, gen_prob=0.1).with_task(2, gen_prob=0.02)
        config = short(config.with_capacity(40))
        result = run(config, service_mode=DETERMINISTIC)
        report = report_from_availability(config, (1.0, 1.0), DET)
        self.assertEqual(result.blocked, (0, 0))
        for c in range(2):
            self.assertWithin(result.aoa[c], report.aoa[c], result.aoa_se[c], slack=1.0)
        self.assertWithin(result.aoi, report.aoi, result.aoi_se, slack=0.1)

    def test_execution_intervals_are_geometric(self):
        # unblocked fixed service: executions are the received stream shifted by D
        config = short(SystemConfig().with_task(2, gen_prob=0.02).with_capacity(40))
        result = run(config, service_mode=DETERMINISTIC)
        self.assertEqual(result.blocked, (0, 0))
        for c, q in enumerate(effective_arrivals(config)):
            mean, square = result.interval_mean[c], result.interval_sq_mean[c]
            tolerance = 10 / math.sqrt(result.executed[c])
            self.assertLess(abs(mean * q - 1), tolerance)
            self.assertLess(abs((square + mean) / (2 * mean) * q - 1), tolerance)

    def test_fixed_service_blocks_less_than_geometric(self):
        config = compare_pool()
        fixed = run(config, service_mode=DETERMINISTIC)
        geometric = run(config, service_mode=GEOMETRIC)
        for c in range(2):
            se = math.hypot(fixed.blocking_se[c], geometric.blocking_se[c])
            self.assertLessEqual(fixed.blocking[c], geometric.blocking[c] + 4 * se)

    def test_fading_draws_match_success_probability(self):
        config = short(SystemConfig().with_task(1, tx_power=0.01).with_task(2, tx_power=0.02))
        result = run(config, fading_draws=True)
        self.assertTrue(result.fading_draws)
        for c, task in enumerate(config.tasks):
            expected = uplink_success_prob(config.channel, task.tx_power)
            self.assertWithin(result.uplink_rate[c], expected, result.uplink_se[c], slack=0)


class AgeTrackerTest(SimpleTestCase):
    def test_newest_generation_wins(self):
        ages = AgeTracker(classes=1, batches=1)
        ages.sample(0, 0)
        ages.execute(0, gen_slot=5, slot=8, measuring=True)
        ages.execute(0, gen_slot=3, slot=9, measuring=True)
        ages.sample(10, 0)
        self.assertEqual(ages.undefined_slots, [1])
        self.assertEqual(ages.age_sum[0][0], 5.0)
        self.assertEqual(ages.intervals[0], [1, 1, 1])

    def test_pool_entry(self):
        entry = PoolEntry(end_slot=12, task_class=1, gen_slot=2, units_held=4)
        self.assertEqual(entry.remaining_slots(10), 3)
