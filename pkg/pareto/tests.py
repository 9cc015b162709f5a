import math
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from metrics.utils import compose_report
from pareto.models import DecisionPoint, GridSpec, front_rows
from pareto.search import apply_decision, evaluate_all, evaluate_point, is_feasible, search
from pareto.serializers import DecisionPointSerializer, FrontRowSerializer
from pareto.utils import brute_force_front, dominates, non_dominated
from queueing.engines import GEO_MG
from system.models import SystemConfig


def point(aoa1, coma, decision=(0.1, 0.1, 1.0, 1.0)):
    return DecisionPoint(*decision, feasible=True, coma=coma, aoa1=aoa1, engine=GEO_MG)


class DominanceTest(SimpleTestCase):
    def test_dominates(self):
        self.assertTrue(dominates((1.0, 2.0), (1.0, 3.0)))
        self.assertFalse(dominates((1.0, 2.0), (1.0, 2.0)))
        self.assertFalse(dominates((0.5, 4.0), (1.0, 2.0)))

    def test_dominated_point_is_dropped(self):
        best, worse = point(10.0, 0.5), point(12.0, 0.6, (0.2, 0.2, 1.0, 1.0))
        self.assertEqual(non_dominated([worse, best]), [best])

    def test_tie_keeps_smallest_decision(self):
        a = point(10.0, 0.5, (0.2, 0.1, 1.0, 1.0))
        b = point(10.0, 0.5, (0.1, 0.3, 1.0, 1.0))
        self.assertEqual(non_dominated([a, b]), [b])

    def test_scan_matches_brute_force(self):
        rng = np.random.default_rng(7)
        points = [
            point(float(x), float(y), (float(p), 0.1, 1.0, 1.0))
            for x, y, p in zip(
                rng.integers(1, 30, 300), rng.integers(1, 30, 300), rng.random(300)
            )
        ]
        front = non_dominated(points)
        self.assertEqual(
            [p.objectives for p in front],
            [p.objectives for p in brute_force_front(points)],
        )
        for a, b in zip(front, front[1:]):
            self.assertLess(a.aoa1, b.aoa1)
            self.assertGreater(a.coma, b.coma)


class DecisionTest(SimpleTestCase):
    config = SystemConfig()

    def test_budget_boundary(self):
        # usage = (0.4 + 0.1) * p at eta = 1
        on_boundary = apply_decision(self.config, (0.36, 0.36, 1.0, 1.0))
        self.assertTrue(is_feasible(on_boundary))
        above = apply_decision(self.config, (0.3601, 0.36, 1.0, 1.0))
        self.assertFalse(is_feasible(above))
        self.assertTrue(is_feasible(above, budget=1.0))

    def test_decision_bounds(self):
        for decision in ((0.1, 0.1, 0.0, 1.0), (0.1, 0.1, 1.0, 1.2), (0.0, 0.1, 1.0, 1.0)):
            with self.assertRaises(ValueError):
                apply_decision(self.config, decision)

    def test_interior_point_matches_composition(self):
        decision = (0.05, 0.2, 0.5, 0.8)
        evaluated = evaluate_point(decision, self.config)
        report = compose_report(
            self.config.with_task(1, tx_power=0.05, admit_prob=0.5).with_task(
                2, tx_power=0.2, admit_prob=0.8
            ),
            GEO_MG,
        )
        self.assertEqual(evaluated.decision, decision)
        self.assertAlmostEqual(evaluated.coma, report.coma, places=12)
        self.assertAlmostEqual(evaluated.aoa1, report.aoa[0], places=9)
        self.assertTrue(evaluated.feasible)

    def test_vanishing_admission(self):
        evaluated = evaluate_point((0.05, 0.2, 1e-9, 0.8), self.config)
        task2 = compose_report(self.config.with_task(1, admit_prob=1e-9), GEO_MG)
        self.assertGreater(evaluated.aoa1, 1e9)
        self.assertAlmostEqual(evaluated.coma, task2.coma, places=12)
        self.assertAlmostEqual(evaluated.coma, 1.0 * 0.4 + self._task2_cost(), places=6)

    def _task2_cost(self):
        # class 1 is idle, so class 2 sees an empty pool whenever N <= C
        report = compose_report(self.config.with_task(1, gen_prob=0.0), GEO_MG)
        return report.coma


class SearchTest(SimpleTestCase):
    config = SystemConfig()

    def test_single_feasible_point(self):
        result = search(self.config, GridSpec((0.05,), (1.0,)))
        self.assertEqual(len(result.front), 1)
        self.assertEqual(result.front[0].decision, (0.05, 0.05, 1.0, 1.0))
        self.assertEqual(result.baseline_best, result.front[0])

    def test_small_grid_front_beats_the_baseline(self):
        grid = GridSpec.default(powers=5, etas=5)
        result = search(self.config, grid)
        self.assertEqual(len(result.points), len(grid))
        self.assertEqual(len(result.baseline_points), 25)
        self.assertFalse(result.empty)
        self.assertGreaterEqual(result.dominance_gap, 1)
        eligible = [p for p in result.points if p.feasible and p.bounded]
        self.assertEqual(
            [p.objectives for p in result.front],
            [p.objectives for p in brute_force_front(eligible)],
        )
        for p in result.front:
            self.assertTrue(p.feasible)
            self.assertLessEqual(p.power_usage, 0.18 + 1e-12)
        self.assertEqual(result.baseline_threshold, result.baseline_best.power_usage)

    def test_empty_budget(self):
        result = search(replace(self.config, energy_rate=0.0), GridSpec.default(3, 3))
        self.assertTrue(result.empty)
        self.assertIsNone(result.baseline_best)
        self.assertEqual(len(result.points), 81)
        self.assertFalse(any(p.feasible for p in result.points))

    def test_pool_matches_serial(self):
        decisions = list(GridSpec.default(3, 2).differentiated())
        serial = evaluate_all(self.config, decisions, workers=1)
        pooled = evaluate_all(self.config, decisions, workers=2)
        self.assertEqual(serial, pooled)

    def test_feasible_set_grows_with_the_budget(self):
        decisions = list(GridSpec.default(3, 3).differentiated())
        previous = set()
        for budget in (0.0, 0.005, 0.05, 0.18, 0.5):
            points = evaluate_all(replace(self.config, energy_rate=budget), decisions)
            feasible = {p.decision for p in points if p.feasible}
            self.assertLessEqual(previous, feasible, budget)
            previous = feasible
        self.assertEqual(len(previous), len(decisions))

    def test_front_ignores_coma_scale(self):
        points = evaluate_all(self.config, GridSpec.default(3, 3).differentiated())
        eligible = [p for p in points if p.feasible and p.bounded]
        front = [p.decision for p in non_dominated(eligible)]
        for factor in (4.0, 10.0):
            scaled = [replace(p, coma=factor * p.coma) for p in eligible]
            self.assertEqual([p.decision for p in non_dominated(scaled)], front, factor)

    def test_empty_grid(self):
        with self.assertRaises(ValueError):
            search(self.config, GridSpec((), (1.0,)))


class RowsTest(SimpleTestCase):
    def test_front_rows(self):
        result = search(SystemConfig(), GridSpec.default(3, 3))
        rows = front_rows(result)
        roles = [r.role for r in rows]
        self.assertEqual(roles.count("front"), len(result.front))
        self.assertEqual(roles[-1], "baseline_best")
        data = FrontRowSerializer(rows[0]).data
        self.assertEqual(data["role"], "front")
        self.assertEqual(data["engine"], GEO_MG)
        self.assertIn("p_t1", DecisionPointSerializer.header())

    def test_unbounded_objective_is_written_as_inf(self):
        data = DecisionPointSerializer(point(math.inf, 0.5)).data
        self.assertEqual(data["aoa1"], "inf")
        self.assertEqual(data["feasible"], True)
