import math
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from common.exceptions import ConfigParseError, InvalidConfig
from system.channel import (
    effective_arrivals,
    fading_threshold,
    success_prob_from_psi,
    uplink,
    uplink_success_prob,
)
from system.loader import dumps, load, loads
from system.models import ChannelParams, SystemConfig
from system.validators import raise_for_report, validate


class ValidateTest(SimpleTestCase):
    def test_defaults_are_valid(self):
        report = validate(SystemConfig())
        self.assertTrue(report.is_valid)
        self.assertEqual(report.starved, ())
        # 0.4*1*0.05 + 0.1*0.8*0.2 = 0.036 W
        self.assertTrue(report.energy_feasible)

    def test_generation_probabilities_must_form_a_distribution(self):
        config = SystemConfig().with_task(1, gen_prob=0.7).with_task(2, gen_prob=0.5)
        report = validate(config)
        self.assertFalse(report.is_valid)
        self.assertIn("g1+g2 <= 1", report.violations)

    def test_starvation_is_flagged_not_violated(self):
        report = validate(SystemConfig().with_capacity(3))
        self.assertTrue(report.is_valid)
        self.assertEqual(report.starved, (2,))

    def test_energy_flag(self):
        report = validate(replace(SystemConfig(), energy_rate=0.0))
        self.assertTrue(report.is_valid)
        self.assertFalse(report.energy_feasible)

    def test_field_ranges(self):
        config = SystemConfig().with_task(2, admit_prob=0.0, units_required=0)
        violations = validate(config).violations
        self.assertTrue(any(v.startswith("task2.admit_prob") for v in violations))
        self.assertTrue(any(v.startswith("task2.units_required") for v in violations))

    def test_seed_and_horizon_ranges(self):
        violations = validate(replace(SystemConfig(), rng_seed=-1, sim_slots=0)).violations
        self.assertTrue(any(v.startswith("rng_seed") for v in violations))
        self.assertTrue(any(v.startswith("sim_slots") for v in violations))

    def test_raise_for_report(self):
        raise_for_report(validate(SystemConfig()))
        bad = SystemConfig().with_task(1, gen_prob=0.7).with_task(2, gen_prob=0.5)
        with self.assertRaises(InvalidConfig) as cm:
            raise_for_report(validate(bad))
        self.assertIn("g1+g2 <= 1", str(cm.exception))
        self.assertFalse(cm.exception.report.is_valid)


class LoaderTest(SimpleTestCase):
    def test_empty_text_gives_defaults(self):
        self.assertEqual(loads(""), SystemConfig())

    def test_single_override(self):
        self.assertEqual(loads("capacity = 12\n"), SystemConfig().with_capacity(12))

    def test_aliases_and_comments(self):
        config = loads(
            "# pool\n"
            "compute.capacity = 10\n"
            "gen_prob_2 = 0.2  # wide tasks\n"
            "task1.admit_prob = 0.5\n"
            "channel.ideal = true\n"
            "energy_rate = none\n"
        )
        self.assertEqual(config.capacity, 10)
        self.assertEqual(config.task2.gen_prob, 0.2)
        self.assertEqual(config.task1.admit_prob, 0.5)
        self.assertTrue(config.channel.ideal)
        self.assertIsNone(config.energy_rate)

    def test_decibel_keys(self):
        config = loads("snr_threshold_db = 5\nchannel.noise_power_db = -80\n")
        self.assertAlmostEqual(config.channel.snr_threshold, 10**0.5)
        self.assertAlmostEqual(config.channel.noise_power, 1e-8, places=20)

    def test_out_of_range_value_is_invalid(self):
        with self.assertRaises(InvalidConfig) as cm:
            loads("gen_prob_1 = 1.2\n")
        self.assertTrue(cm.exception.report.violations)
        self.assertIsInstance(loads("gen_prob_1 = 1.2\n", strict=False), SystemConfig)

    def test_parse_errors_carry_the_line(self):
        with self.assertRaises(ConfigParseError) as cm:
            loads("capacity = 8\nnot a statement\n")
        self.assertEqual(cm.exception.line, 2)

        with self.assertRaises(ConfigParseError) as cm:
            loads("capacity = eight\n")
        self.assertEqual(cm.exception.key, "compute.capacity")

        with self.assertRaises(ConfigParseError) as cm:
            loads("task3.gen_prob = 0.1\n")
        self.assertEqual(cm.exception.line, 1)

    def test_dumps_reloads_to_the_same_config(self):
        config = (
            SystemConfig()
            .with_capacity(12)
            .with_task(1, service_slots=5)
            .with_channel(ideal=True)
        )
        self.assertEqual(loads(dumps(config)), config)

    def test_load_missing_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ConfigParseError):
                load(Path(tmp, "missing.cfg"))
            path = Path(tmp, "run.cfg")
            path.write_text("rng_seed = 7\n")
            self.assertEqual(load(path).rng_seed, 7)


class ChannelTest(SimpleTestCase):
    channel = ChannelParams()

    def test_fading_threshold(self):
        self.assertAlmostEqual(fading_threshold(self.channel, 0.05), 0.0790569, places=6)

    def test_rayleigh_success(self):
        self.assertAlmostEqual(uplink_success_prob(self.channel, 0.05), 0.92399, places=5)
        psi = fading_threshold(self.channel, 0.05)
        self.assertAlmostEqual(
            uplink_success_prob(self.channel, 0.05), math.exp(-psi), places=10
        )

    def test_integer_shape_closed_form(self):
        self.assertAlmostEqual(success_prob_from_psi(2, 0.5), 2 * math.exp(-1), places=10)
        self.assertEqual(success_prob_from_psi(3, 0.0), 1.0)

    def test_monotone_over_a_grid(self):
        for shape in (1.0, 1.5, 3.0):
            channel = replace(self.channel, shape=shape)
            rising = [uplink_success_prob(channel, p) for p in np.geomspace(1e-4, 1.0, 15)]
            self.assertTrue(all(a < b for a, b in zip(rising, rising[1:])), shape)
            for name, values in (
                ("distance", np.linspace(10.0, 200.0, 12)),
                ("noise_power", np.geomspace(1e-10, 1e-6, 12)),
                ("snr_threshold", np.geomspace(1.0, 100.0, 12)),
            ):
                falling = [
                    uplink_success_prob(replace(channel, **{name: float(v)}), 0.05)
                    for v in values
                ]
                self.assertTrue(all(a > b for a, b in zip(falling, falling[1:])), name)

    def test_half_integer_shape(self):
        # m = 1/2: |h|^2 is a squared standard normal, so p = erfc(sqrt(psi / 2))
        channel = replace(self.channel, shape=0.5)
        for power in (0.005, 0.05, 0.5):
            psi = fading_threshold(channel, power)
            self.assertAlmostEqual(
                uplink_success_prob(channel, power), math.erfc(math.sqrt(psi / 2)), places=12
            )

    def test_non_integer_shape_matches_monte_carlo(self):
        channel = replace(self.channel, shape=1.5)
        psi = fading_threshold(channel, 0.01)
        expected = uplink_success_prob(channel, 0.01)
        rng = np.random.default_rng(3)
        hits = rng.gamma(shape=1.5, scale=1 / 1.5, size=1_000_000) >= psi
        se = math.sqrt(expected * (1 - expected) / hits.size)
        self.assertLess(abs(hits.mean() - expected), 4 * se)

    def test_large_power_limit(self):
        self.assertLess(fading_threshold(self.channel, 1e12), 1e-10)
        self.assertGreater(uplink_success_prob(self.channel, 1e12), 1 - 1e-9)

    def test_nonpositive_power(self):
        for power in (0.0, -1.0):
            with self.assertRaises(ValueError):
                uplink_success_prob(self.channel, power)

    def test_ideal_channel(self):
        channel = replace(self.channel, ideal=True)
        self.assertEqual(uplink(channel, 1e-6).success_prob, 1.0)

    def test_matches_monte_carlo_fading(self):
        channel = replace(self.channel, shape=2.0)
        psi = fading_threshold(channel, 0.02)
        expected = uplink_success_prob(channel, 0.02)
        rng = np.random.default_rng(11)
        gains = rng.gamma(shape=2.0, scale=0.5, size=1_000_000)
        hits = gains >= psi
        se = math.sqrt(expected * (1 - expected) / hits.size)
        self.assertLess(abs(hits.mean() - expected), 4 * se)

    def test_effective_arrivals(self):
        config = SystemConfig()
        a1, a2 = effective_arrivals(config)
        self.assertAlmostEqual(a1, 0.4 * uplink_success_prob(config.channel, 0.05))
        self.assertAlmostEqual(a2, 0.1 * 0.8 * uplink_success_prob(config.channel, 0.2))
