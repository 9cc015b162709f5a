import csv
import io
import shutil
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from common.exceptions import ExitCode
from experiments.management.commands.pareto import Command as ParetoCommand
from experiments.presets import compare_config, eta_points, load_points, sweep_config
from metrics.utils import compose_report
from queueing.engines import ENGINES, GEO_MG
from system.models import SystemConfig


def rows_of(text):
    lines = text.splitlines()
    return lines[0], list(csv.DictReader(lines[1:]))


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)

    def call(self, *args):
        out = io.StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()

    def config_file(self, text):
        path = self.tmp / "run.cfg"
        path.write_text(text)
        return str(path)

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as cm:
            self.call(*args)
        self.assertEqual(cm.exception.returncode, code)
        return cm.exception

    def assertRepeatable(self, *args):
        """Two runs of the same command write byte-identical files."""
        first, second = self.tmp / "first.csv", self.tmp / "second.csv"
        self.call(*args, "--out", str(first))
        self.call(*args, "--out", str(second))
        self.assertEqual(first.read_bytes(), second.read_bytes())


class PresetTest(SimpleTestCase):
    def test_compare_preset(self):
        config = compare_config(SystemConfig())
        self.assertEqual(config.capacity, 12)
        self.assertEqual(
            (config.task1.service_slots, config.task2.service_slots), (5, 10)
        )
        self.assertEqual((config.task1.admit_prob, config.task2.admit_prob), (1.0, 1.0))
        self.assertTrue(config.channel.ideal)

    def test_sweep_preset(self):
        config = sweep_config(SystemConfig())
        self.assertEqual((config.task1.tx_power, config.task2.tx_power), (0.05, 0.2))
        self.assertEqual(config.task2.admit_prob, 0.8)

    def test_points(self):
        loads = load_points(0.005, 0.095, 10)
        self.assertEqual(len(loads), 10)
        self.assertAlmostEqual(loads[-1][0], 0.38)
        self.assertEqual(eta_points(0.1, 1.0, 10)[-1], 1.0)
        with self.assertRaises(ValueError):
            eta_points(0.0, 1.0, 3)


class SolveCommandTest(CommandTestCase):
    def test_defaults_match_library(self):
        preamble, rows = rows_of(self.call("solve"))
        report = compose_report(SystemConfig(), GEO_MG)
        self.assertTrue(preamble.startswith("# schema="))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]["engine"], GEO_MG)
        self.assertEqual(float(rows[0]["aoa1"]), report.aoa[0])
        self.assertEqual(float(rows[0]["coma"]), report.coma)

    def test_idle_erlang(self):
        path = self.config_file("gen_prob_1 = 0\ngen_prob_2 = 0\n")
        _, rows = rows_of(self.call("solve", "--engine", "erlang", "--config", path))
        self.assertEqual(rows[0]["coma"], "0.0")
        self.assertEqual(rows[0]["aoa1"], "inf")
        self.assertEqual(rows[0]["availability2"], "1.0")

    def test_output_file_is_deterministic(self):
        first, second = self.tmp / "a.csv", self.tmp / "b.csv"
        self.call("solve", "--engine", "det", "--out", str(first))
        self.call("solve", "--engine", "det", "--out", str(second))
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_dump(self):
        dump = self.tmp / "dump"
        self.call("solve", "--engine", "geo-mg", "--dump", str(dump))
        states = (dump / "geo-mg_states.txt").read_text().splitlines()
        self.assertEqual(len(states), 1 + 15)
        self.assertTrue((dump / "geo-mg_matrix.txt").exists())

    def test_exit_codes(self):
        self.assertExitCode(ExitCode.PARSE, "solve", "--config", self.config_file("capacity\n"))
        self.assertExitCode(
            ExitCode.VALIDATION, "solve", "--config", self.config_file("gen_prob_1 = 1.2\n")
        )
        self.assertExitCode(ExitCode.PARSE, "solve", "--config", str(self.tmp / "missing"))

    @override_settings(DET_STATE_SPACE_CAP=1000)
    def test_oversized_pipeline_chain(self):
        error = self.assertExitCode(ExitCode.RESOURCE, "solve", "--engine", "det")
        self.assertIn("geo-mg", str(error))


class SimulateCommandTest(CommandTestCase):
    def test_row_and_reproducibility(self):
        args = ("simulate", "--slots", "20000", "--seed", "3", "--service", "geometric")
        first = self.call(*args)
        self.assertEqual(first, self.call(*args))
        _, rows = rows_of(first)
        self.assertEqual(rows[0]["seed"], "3")
        self.assertEqual(rows[0]["service_mode"], "geometric")
        self.assertEqual(rows[0]["slot_convention"], "sample-before-reset")

    def test_too_few_slots(self):
        self.assertExitCode(ExitCode.VALIDATION, "simulate", "--slots", "10")

    def test_negative_seed(self):
        self.assertExitCode(ExitCode.VALIDATION, "simulate", "--slots", "20000", "--seed", "-1")

    def test_no_workers_flag(self):
        with self.assertRaises(CommandError):
            self.call("simulate", "--slots", "20000", "--workers", "2")


class CompareCommandTest(CommandTestCase):
    def test_analytic_rows(self):
        _, rows = rows_of(self.call("compare", "--no-sim", "--points", "3"))
        self.assertEqual(len(rows), 3 * 2 * len(ENGINES))
        self.assertEqual({r["model"] for r in rows}, set(ENGINES))
        for r in rows:
            self.assertAlmostEqual(float(r["g1"]), 4 * float(r["g2"]))
            self.assertIn(r["det_le_geo"], ("True", "False"))

    def test_zero_load(self):
        _, rows = rows_of(
            self.call("compare", "--no-sim", "--points", "1", "--g2-min", "0", "--g2-max", "0")
        )
        for r in rows:
            self.assertLessEqual(abs(float(r["blocking"])), 1e-12)

    def test_simulated_rows(self):
        _, rows = rows_of(
            self.call("compare", "--points", "1", "--slots", "20000", "--workers", "1")
        )
        models = [r["model"] for r in rows if r["task"] == "1"]
        self.assertEqual(models, list(ENGINES) + ["sim-deterministic", "sim-geometric"])
        simulated = [r for r in rows if r["model"].startswith("sim-")]
        self.assertTrue(all(r["blocking_se"] for r in simulated))

    def test_load_out_of_range(self):
        self.assertExitCode(
            ExitCode.VALIDATION, "compare", "--no-sim", "--g2-max", "0.3", "--points", "2"
        )

    def test_too_few_slots(self):
        self.assertExitCode(
            ExitCode.VALIDATION, "compare", "--points", "1", "--slots", "10", "--workers", "1"
        )
        # the horizon only matters when something is simulated
        self.call("compare", "--no-sim", "--points", "1", "--slots", "10")

    def test_bad_worker_count(self):
        self.assertExitCode(ExitCode.VALIDATION, "compare", "--no-sim", "--workers", "0")

    def test_repeatable_output(self):
        self.assertRepeatable("compare", "--points", "2", "--slots", "20000", "--workers", "1")


class SweepCommandTest(CommandTestCase):
    def test_second_class_age_grows_with_first_class_admission(self):
        _, rows = rows_of(self.call("sweep", "--no-sim", "--points", "4"))
        self.assertEqual(len(rows), 4 * 3)
        for source in ("det", "geo-mg", "erlang"):
            aoa2 = [float(r["aoa2"]) for r in rows if r["source"] == source]
            self.assertEqual(aoa2, sorted(aoa2))

    def test_single_point_and_endpoint(self):
        _, rows = rows_of(
            self.call(
                "sweep", "--no-sim", "--eta-min", "1.0", "--eta-max", "1.0", "--points", "1"
            )
        )
        self.assertEqual(len(rows), 3)
        self.assertEqual({r["eta1"] for r in rows}, {"1.0"})

    def test_simulated_rows(self):
        _, rows = rows_of(
            self.call(
                "sweep", "--eta-min", "0.5", "--eta-max", "0.5", "--points", "1",
                "--slots", "20000", "--workers", "1",
            )
        )
        self.assertEqual(
            [r["source"] for r in rows],
            ["det", "geo-mg", "erlang", "sim-deterministic", "sim-geometric"],
        )

    def test_range_check(self):
        self.assertExitCode(ExitCode.VALIDATION, "sweep", "--no-sim", "--eta-max", "1.2")

    def test_too_few_slots(self):
        self.assertExitCode(
            ExitCode.VALIDATION, "sweep", "--points", "1", "--slots", "10", "--workers", "1"
        )

    def test_repeatable_output(self):
        self.assertRepeatable("sweep", "--points", "2", "--slots", "20000", "--workers", "1")


class ParetoCommandTest(CommandTestCase):
    def pareto(self, *extra):
        points, front = self.tmp / "points.csv", self.tmp / "front.csv"
        args = (
            "pareto", "--grid-powers", "3", "--grid-etas", "3",
            "--out", str(points), "--front-out", str(front), "--workers", "1",
        )
        return points, front, args + extra

    def test_small_grid(self):
        points, front, args = self.pareto()
        summary = self.call(*args)
        self.assertTrue(summary.startswith("front: "))
        _, point_rows = rows_of(points.read_text())
        _, front_rows = rows_of(front.read_text())
        self.assertEqual(len(point_rows), 81)
        self.assertTrue(any(r["role"] == "front" for r in front_rows))
        self.assertEqual(front_rows[-1]["role"], "baseline_best")

    def test_infeasible_budget(self):
        points, _, args = self.pareto("--energy-rate", "0")
        self.assertExitCode(ExitCode.EMPTY_RESULT, *args)
        _, point_rows = rows_of(points.read_text())
        self.assertTrue(all(r["feasible"] == "False" for r in point_rows))

    def test_bad_grid(self):
        _, _, args = self.pareto("--grid-power-min", "0")
        self.assertExitCode(ExitCode.VALIDATION, *args)

    def test_repeatable_output(self):
        points, front, args = self.pareto()
        self.call(*args)
        first = (points.read_bytes(), front.read_bytes())
        self.call(*args)
        self.assertEqual((points.read_bytes(), front.read_bytes()), first)

    def test_workers_default_to_every_cpu(self):
        parser = ParetoCommand().create_parser("manage.py", "pareto")
        self.assertIsNone(parser.parse_args([]).workers)
