import logging
from dataclasses import replace

import sentry_sdk
from django.core.management.base import BaseCommand, CommandError

from common.exceptions import ExitCode, SolverError
from common.utils import write_csv
from simulation.engine import measurement_window
from system.loader import dumps, load
from system.models import SystemConfig
from system.validators import raise_for_report, validate

from .presets import with_slots

logger = logging.getLogger(__name__)


class ExperimentCommand(BaseCommand):
    """Shared flags, config loading and exit-code mapping for the CLI."""

    # adds --seed/--slots and checks the horizon when set
    simulates = False

    def add_arguments(self, parser):
        parser.add_argument("--config", help="key = value config file; defaults otherwise")
        parser.add_argument("--out", help="CSV destination; stdout when omitted")
        if self.simulates:
            parser.add_argument("--seed", type=int, help="override rng_seed")
            parser.add_argument("--slots", type=int, help="override sim_slots")

    def add_workers_argument(self, parser):
        parser.add_argument(
            "--workers",
            type=int,
            default=None,
            help="worker processes (default: one per CPU)",
        )

    def load_config(self, options):
        """Config file or defaults, with --slots/--seed applied, then validated."""
        path = options.get("config")
        config = load(path, strict=False) if path else SystemConfig()
        config = with_slots(config, options.get("slots"), options.get("seed"))

        report = validate(config)
        if self.simulates and not options.get("no_sim") and report.is_valid:
            try:
                measurement_window(config.sim_slots)
            except ValueError as exc:
                report = replace(report, violations=(f"sim_slots: {exc}",))
        raise_for_report(report)
        return config

    def write_rows(self, options, serializer_class, rows, config, key="out"):
        destination = options.get(key) or self.stdout
        count = write_csv(destination, serializer_class, rows, dumps(config))
        if options.get(key):
            logger.info("wrote %d rows to %s", count, options[key])
        return count

    def handle(self, *args, **options):
        workers = options.get("workers")
        if workers is not None and workers < 1:
            self.fail_usage(ValueError(f"--workers must be at least 1, got {workers}"))
        try:
            self.run(**options)
        except SolverError as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            raise CommandError(str(exc), returncode=int(exc.exit_code)) from exc
        except CommandError:
            raise
        except Exception as exc:
            sentry_sdk.capture_exception(exc)
            raise

    def fail_usage(self, exc):
        raise CommandError(str(exc), returncode=int(ExitCode.VALIDATION)) from exc

    def run(self, **options):
        raise NotImplementedError
