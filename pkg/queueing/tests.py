import itertools
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from common.exceptions import ContractViolation, StateSpaceTooLarge
from experiments.presets import (
    COMPARE_G2_RANGE,
    COMPARE_POINTS,
    compare_config,
    load_points,
    with_load,
)
from queueing import det, geo
from queueing.engines import (
    DET,
    ENGINES,
    ERLANG,
    GEO_DIRECT,
    GEO_MG,
    AvailabilityEvaluator,
    UnknownEngine,
    availabilities,
    check_engine,
)
from queueing.erlang import ErlangLoad, erlang_steady_state
from queueing.steady import availability_prob, balance_residual, write_dump
from system.channel import effective_arrivals
from system.models import SystemConfig


def pool_config(capacity, d1, d2, units2, g1, g2, eta=1.0):
    """Error-free uplink config with the given pool and loads."""
    config = SystemConfig().with_capacity(capacity).with_channel(ideal=True)
    config = config.with_task(1, service_slots=d1, gen_prob=g1, admit_prob=eta)
    return config.with_task(
        2, service_slots=d2, units_required=units2, gen_prob=g2, admit_prob=eta
    )


def fig2_config(g2=0.05):
    return pool_config(12, 5, 10, 4, 4 * g2, g2)


def single_class(capacity=1, service_slots=1, g1=0.3):
    """Class 2 never generates; it only fixes the lattice shape."""
    return pool_config(capacity, service_slots, service_slots, 1, g1, 0.0)


class DetStateSpaceTest(SimpleTestCase):
    def test_closed_form_count(self):
        self.assertEqual(det.count_states(2, 2, 2, 2), 6)
        # capacity never binds: every pair of pipelines is allowed
        self.assertEqual(det.count_states(3, 2, 3 + 4 * 2, 4), 2**5)

    def test_closed_form_matches_brute_force(self):
        for d1, d2, capacity, units in itertools.product(
            range(1, 5), range(1, 5), range(1, 9), range(1, 4)
        ):
            brute = sum(
                1
                for v1 in itertools.product((0, 1), repeat=d1)
                for v2 in itertools.product((0, 1), repeat=d2)
                if sum(v1) + units * sum(v2) <= capacity
            )
            self.assertEqual(det.count_states(d1, d2, capacity, units), brute)

    def test_smallest_reachable_set(self):
        states = det.enumerate_states(pool_config(1, 1, 1, 1, 0.3, 0.2))
        self.assertEqual(
            set(states.states),
            {det.EMPTY, det.DetState(1, 0), det.DetState(0, 1)},
        )

    def test_no_arrivals_reach_only_empty(self):
        states = det.enumerate_states(pool_config(8, 10, 10, 4, 0.0, 0.0))
        self.assertEqual(states.states, [det.EMPTY])

    def test_reachable_within_closed_form(self):
        space = det.enumerate_states(fig2_config())
        self.assertGreater(len(space), 1)
        self.assertLessEqual(len(space), det.count_states(5, 10, 12, 4))
        for state in space.states:
            self.assertLessEqual(state.occupancy((1, 4)), 12)

    def test_cap_raises_resource_error(self):
        with self.assertRaises(StateSpaceTooLarge):
            det.enumerate_states(SystemConfig(), cap=100)


class DetTransitionTest(SimpleTestCase):
    layout = det.PipelineLayout(d1=3, d2=2, capacity=8, units=(1, 4))

    def test_kernel_without_blocking(self):
        kernel = det.admission_kernel(det.EMPTY, (0.3, 0.1), self.layout)
        self.assertAlmostEqual(kernel[(1, 0)], 0.3)
        self.assertAlmostEqual(kernel[(0, 1)], 0.1)
        self.assertAlmostEqual(kernel[(0, 0)], 0.6)

    def test_kernel_on_full_pool(self):
        full = det.DetState.from_bits([1, 1, 1, 1], [1])
        layout = det.PipelineLayout(d1=4, d2=2, capacity=8, units=(1, 4))
        self.assertEqual(
            det.admission_kernel(full, (0.3, 0.1), layout),
            {(0, 0): 1.0, (1, 0): 0.0, (0, 1): 0.0},
        )

    def test_kernel_with_too_few_free_units_for_class_two(self):
        # 5 busy units leave N - 1 = 3 free
        state = det.DetState.from_bits([1, 0, 0], [0, 1])
        kernel = det.admission_kernel(state, (0.3, 0.1), self.layout)
        self.assertEqual(kernel[(0, 1)], 0.0)
        self.assertAlmostEqual(kernel[(1, 0)], 0.3)

    def test_shift(self):
        state = det.DetState.from_bits([1, 0, 1])
        moved = det.next_state(state, 1, 0, self.layout)
        self.assertEqual(moved.to_bits(3, 2)[0], [0, 1, 1])
        self.assertEqual(det.next_state(det.EMPTY, 0, 0, self.layout), det.EMPTY)

    def test_depart_and_admit_in_the_same_slot(self):
        layout = det.PipelineLayout(d1=1, d2=1, capacity=2, units=(1, 1))
        state = det.DetState.from_bits([], [1])
        self.assertEqual(det.next_state(state, 0, 1, layout).to_bits(1, 1)[1], [1])

    def test_infeasible_admission(self):
        with self.assertRaises(ContractViolation):
            det.next_state(det.EMPTY, 1, 1, self.layout)
        full = det.DetState.from_bits([1, 1, 1], [1])
        layout = det.PipelineLayout(d1=3, d2=2, capacity=7, units=(1, 4))
        with self.assertRaises(ContractViolation):
            det.next_state(full, 1, 0, layout)

    def test_rows_are_stochastic(self):
        _, matrix = det.transition_matrix(fig2_config())
        sums = np.asarray(matrix.sum(axis=1)).ravel()
        self.assertLess(np.max(np.abs(sums - 1.0)), 1e-12)


class DetSteadyStateTest(SimpleTestCase):
    def test_no_arrivals(self):
        steady = det.solve_steady_state(pool_config(8, 10, 10, 4, 0.0, 0.0))
        self.assertEqual(steady.prob_of(det.EMPTY), 1.0)
        self.assertEqual(availability_prob(steady, 4), 1.0)
        self.assertEqual(availability_prob(steady, 9), 0.0)

    def test_two_state_chain(self):
        steady = det.solve_steady_state(single_class(g1=0.3))
        self.assertAlmostEqual(availability_prob(steady, 1), 1 / 1.3, places=12)

    def test_default_config_is_stationary(self):
        config = SystemConfig()
        space, matrix = det.transition_matrix(config)
        steady = det.solve_steady_state(config)
        self.assertEqual(len(steady.probs), len(space))
        self.assertTrue(np.all(steady.probs >= 0))
        self.assertAlmostEqual(steady.probs.sum(), 1.0, places=10)
        self.assertLessEqual(balance_residual(steady.probs, matrix), 1e-10)


class GeoChainTest(SimpleTestCase):
    def test_state_counts(self):
        self.assertEqual(geo.count_states_geo(8, 4), 15)
        self.assertEqual(geo.count_states_geo(12, 4), 28)
        self.assertEqual(geo.count_states_geo(5, 1), 21)
        for capacity, units in ((8, 4), (12, 4), (5, 1), (7, 3)):
            space, _ = geo.level_partition(capacity, (1, units))
            self.assertEqual(len(space), geo.count_states_geo(capacity, units))

    def test_level_ordering(self):
        space, levels = geo.level_partition(8, (1, 4))
        self.assertEqual(space.states[:3], [(0, 0), (0, 1), (0, 2)])
        self.assertEqual(len(levels), 9)
        self.assertEqual([s.n1 for s in space.states[levels[5]]], [5])

    def test_binomial_departure(self):
        self.assertEqual(geo.binomial_departure(0, 0.3, 0), 1.0)
        self.assertAlmostEqual(geo.binomial_departure(2, 0.5, 1), 0.5)
        self.assertEqual(geo.binomial_departure(2, 0.5, 3), 0.0)

    def test_single_transitions(self):
        config = SystemConfig()
        a1, _ = effective_arrivals(config)
        self.assertAlmostEqual(
            geo.transition_prob_geo(geo.GeoState(0, 0), geo.GeoState(1, 0), config), a1
        )
        config = single_class(capacity=1, service_slots=4, g1=0.5)
        self.assertAlmostEqual(
            geo.transition_prob_geo(geo.GeoState(1, 0), geo.GeoState(0, 0), config), 0.25
        )

    def test_skeleton_matches_literal_transition(self):
        config = pool_config(6, 3, 5, 2, 0.3, 0.2, eta=0.9)
        chain = geo.GeoChain.from_config(config)
        matrix = chain.transition_matrix(effective_arrivals(config))
        for i, source in enumerate(chain.space.states):
            for j, target in enumerate(chain.space.states):
                self.assertAlmostEqual(
                    matrix[i, j], geo.transition_prob_geo(source, target, config), places=14
                )

    def test_rows_are_stochastic(self):
        chain = geo.GeoChain.from_config(fig2_config())
        matrix = chain.transition_matrix((0.4, 0.1))
        self.assertLess(np.max(np.abs(matrix.sum(axis=1) - 1.0)), 1e-12)


class GeoSolverTest(SimpleTestCase):
    def assertSolversAgree(self, config):
        direct = geo.solve_direct(config).probs
        recursive = geo.solve_matrix_geometric(config).probs
        self.assertLessEqual(np.max(np.abs(direct - recursive)), 1e-10)

    def test_zero_arrivals(self):
        config = pool_config(8, 10, 10, 4, 0.0, 0.0)
        for solve in (geo.solve_direct, geo.solve_matrix_geometric):
            steady = solve(config)
            self.assertAlmostEqual(steady.prob_of(geo.GeoState(0, 0)), 1.0, places=12)

    def test_single_class_two_states(self):
        config = single_class(capacity=1, service_slots=1, g1=0.3)
        self.assertSolversAgree(config)
        steady = geo.solve_matrix_geometric(config)
        self.assertAlmostEqual(availability_prob(steady, 1), 1 / 1.3, places=12)

    def test_default_and_compare_configs(self):
        self.assertSolversAgree(SystemConfig())
        self.assertSolversAgree(fig2_config(0.095))

    def test_randomized_configs(self):
        rng = np.random.default_rng(2024)
        for _ in range(20):
            capacity = int(rng.integers(2, 15))
            units2 = int(rng.integers(1, min(capacity, 5) + 1))
            g1, g2 = rng.dirichlet([1.0, 1.0, 1.0])[:2]
            config = pool_config(
                capacity,
                int(rng.integers(1, 13)),
                int(rng.integers(1, 13)),
                units2,
                float(g1),
                float(g2),
                eta=float(rng.uniform(0.1, 1.0)),
            )
            self.assertSolversAgree(config)


class ErlangTest(SimpleTestCase):
    def test_zero_load(self):
        steady = erlang_steady_state(ErlangLoad(0.0, 0.0), 8, 4)
        self.assertEqual(steady.prob_of(geo.GeoState(0, 0)), 1.0)
        self.assertEqual(availability_prob(steady, 4), 1.0)
        self.assertEqual(availability_prob(steady, 9), 0.0)

    def test_single_class(self):
        steady = erlang_steady_state(ErlangLoad(0.7, 0.0), 1, 1)
        self.assertAlmostEqual(availability_prob(steady, 1), 1 / 1.7, places=12)

    def test_product_form(self):
        steady = erlang_steady_state(ErlangLoad(1.0, 0.5), 8, 4)
        ratio = steady.prob_of(geo.GeoState(2, 1)) / steady.prob_of(geo.GeoState(0, 0))
        self.assertAlmostEqual(ratio, 1.0 / 2 * 0.5, places=12)
        self.assertGreater(availability_prob(steady, 1), availability_prob(steady, 4))

    def test_negative_load(self):
        with self.assertRaises(ValueError):
            ErlangLoad(-0.1, 0.0)

    def test_light_traffic_matches_geo(self):
        for rho in (0.01, 0.03, 0.05):
            config = pool_config(8, 10, 10, 4, rho / 10 * 0.8, rho / 10 * 0.2)
            light = availabilities(config, ERLANG)
            exact = availabilities(config, GEO_MG)
            for approx, value in zip(light, exact):
                self.assertLessEqual(abs(approx - value), 1e-3)


class EngineTest(SimpleTestCase):
    def test_unknown_engine(self):
        with self.assertRaises(UnknownEngine):
            check_engine("mm1")

    def test_every_engine_gives_probabilities(self):
        config = fig2_config()
        for engine in ENGINES:
            a1, a2 = availabilities(config, engine)
            self.assertTrue(0.0 <= a2 <= a1 <= 1.0, engine)

    def test_geo_solvers_agree_through_the_evaluator(self):
        config = fig2_config(0.08)
        mg = AvailabilityEvaluator(config, GEO_MG)
        direct = AvailabilityEvaluator(config, GEO_DIRECT)
        for ours, theirs in zip(mg(config), direct(config)):
            self.assertAlmostEqual(ours, theirs, places=10)


class LoadOrderingTest(SimpleTestCase):
    def test_pipelines_block_less_than_geometric_service(self):
        base = compare_config(SystemConfig())
        for g1, g2 in load_points(*COMPARE_G2_RANGE, COMPARE_POINTS):
            config = with_load(base, g1, g2)
            pipelines = availabilities(config, DET)
            geometric = availabilities(config, GEO_MG)
            for c in range(2):
                self.assertGreaterEqual(pipelines[c], geometric[c] - 1e-12, (g2, c))

    def test_blocking_grows_with_each_load(self):
        base = SystemConfig()
        for g2 in (0.02, 0.1, 0.3):
            previous = (1.0, 1.0)
            for g1 in (0.05, 0.2, 0.4, 0.6):
                avail = availabilities(with_load(base, g1, g2), GEO_MG)
                for c in range(2):
                    self.assertLessEqual(avail[c], previous[c] + 1e-12, (g1, g2, c))
                previous = avail
        for g1 in (0.05, 0.4, 0.6):
            previous = (1.0, 1.0)
            for g2 in (0.02, 0.1, 0.2, 0.35):
                avail = availabilities(with_load(base, g1, g2), GEO_MG)
                for c in range(2):
                    self.assertLessEqual(avail[c], previous[c] + 1e-12, (g1, g2, c))
                previous = avail


class DumpTest(SimpleTestCase):
    def test_dump_files(self):
        config = pool_config(1, 1, 1, 1, 0.3, 0.2)
        space, matrix = det.transition_matrix(config)
        steady = det.solve_steady_state(config)
        with tempfile.TemporaryDirectory() as tmp:
            write_dump(tmp, space, matrix, steady, prefix="det")
            states = Path(tmp, "det_states.txt").read_text().splitlines()
            entries = Path(tmp, "det_matrix.txt").read_text().splitlines()
        self.assertEqual(states[0], "# index occupancy state prob")
        self.assertEqual(len(states), 1 + len(space))
        self.assertEqual(entries[0], f"# 3 3 {matrix.nnz}")
        self.assertEqual(len(entries), 1 + matrix.nnz)
