import math
from dataclasses import replace

from django.test import SimpleTestCase

from metrics.models import UNBOUNDED
from metrics.serializers import MetricsReportSerializer
from metrics.utils import (
    TaskTerms,
    aoi_baseline,
    coma,
    compose_report,
    report_from_availability,
    task_aoa,
)
from queueing.engines import ERLANG, GEO_MG, availabilities
from system.channel import uplink_success_prob
from system.models import SystemConfig


class ClosedFormTest(SimpleTestCase):
    def test_task_aoa(self):
        self.assertEqual(task_aoa(1, 1, 1, 1, 0, 0), 1.0)
        self.assertEqual(task_aoa(0.5, 1, 1, 1, 2, 1), 5.0)
        self.assertEqual(task_aoa(0.0, 1, 1, 1, 10, 0.1), UNBOUNDED)
        self.assertEqual(task_aoa(0.4, 1, 1, 0.0, 10, 0.1), UNBOUNDED)

    def test_coma(self):
        sure = TaskTerms(1.0, 0.4, 1.0, 1.0, 1.0)
        self.assertEqual(coma(sure, TaskTerms(10.0, 0.1, 1.0, 1.0, 1.0)), 0.0)
        dropped = (TaskTerms(1.0, 0.4, 0.0, 0.9, 1.0), TaskTerms(10.0, 0.1, 0.0, 0.9, 0.5))
        self.assertAlmostEqual(coma(*dropped), 1.0 * 0.4 + 10.0 * 0.1)

    def test_coma_splits_by_class(self):
        first = TaskTerms(1.0, 0.4, 0.7, 0.92, 0.81)
        second = TaskTerms(10.0, 0.1, 0.8, 0.98, 0.35)
        first_only = coma(first, replace(second, penalty=0.0))
        second_only = coma(replace(first, penalty=0.0), second)
        self.assertAlmostEqual(coma(first, second), first_only + second_only, places=14)
        self.assertAlmostEqual(first_only, 0.4 * (1 - 0.7 * 0.92 * 0.81), places=14)

    def test_aoi(self):
        self.assertEqual(aoi_baseline(0.5, 1, 1, 0.5, 1, 1), 1.0)
        self.assertAlmostEqual(aoi_baseline(0.2, 1, 1, 0.05, 1, 1), 4.0)
        self.assertEqual(aoi_baseline(0, 1, 1, 0, 1, 1), UNBOUNDED)


class ComposeReportTest(SimpleTestCase):
    def test_matches_hand_composition(self):
        config = SystemConfig()
        report = compose_report(config, GEO_MG)
        avail = availabilities(config, GEO_MG)
        uplink = [uplink_success_prob(config.channel, t.tx_power) for t in config.tasks]

        for i, task in enumerate(config.tasks):
            expected = (
                1 / (task.gen_prob * task.admit_prob * uplink[i] * avail[i])
                + task.service_slots
                + task.downlink_delay
            )
            self.assertAlmostEqual(report.aoa[i], expected, places=9)
        self.assertAlmostEqual(
            report.coma,
            sum(
                t.penalty * t.gen_prob * (1 - t.admit_prob * p * a)
                for t, p, a in zip(config.tasks, uplink, avail)
            ),
            places=12,
        )
        self.assertEqual(report.engine, GEO_MG)
        self.assertAlmostEqual(report.blocking[1], 1 - avail[1])

    def test_idle_system_under_erlang(self):
        config = SystemConfig().with_task(1, gen_prob=0.0).with_task(2, gen_prob=0.0)
        report = compose_report(config, ERLANG)
        self.assertEqual(report.availability, (1.0, 1.0))
        self.assertEqual(report.coma, 0.0)
        self.assertTrue(math.isinf(report.aoa[0]))
        self.assertTrue(math.isinf(report.aoi))

    def test_miss_cost_at_full_availability(self):
        config = SystemConfig()
        report = report_from_availability(config, (1.0, 1.0), ERLANG)
        t1, t2 = config.tasks
        expected = t1.penalty * t1.gen_prob * (1 - t1.admit_prob * report.uplink[0])
        expected += t2.penalty * t2.gen_prob * (1 - t2.admit_prob * report.uplink[1])
        self.assertAlmostEqual(report.coma, expected, places=12)

    def test_more_admission_delays_the_other_class(self):
        previous = 0.0
        for eta in (0.1, 0.4, 0.7, 1.0):
            config = SystemConfig().with_task(1, admit_prob=eta)
            aoa2 = compose_report(config, GEO_MG).aoa[1]
            self.assertGreaterEqual(aoa2, previous)
            previous = aoa2

    def test_csv_row(self):
        starved = SystemConfig().with_capacity(3)
        data = MetricsReportSerializer(compose_report(starved, GEO_MG)).data
        self.assertEqual(data["availability2"], "0.0")
        self.assertEqual(data["aoa2"], "inf")
        self.assertEqual(data["engine"], GEO_MG)
