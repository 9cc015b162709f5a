from experiments.base import ExperimentCommand
from experiments.presets import SWEEP_POINTS, SWEEP_RANGE, eta_points, sweep_config
from experiments.serializers import SweepRowSerializer
from experiments.utils import sweep_rows


class Command(ExperimentCommand):
    help = "AoA, CoMA and AoI against the task-1 admission probability."

    simulates = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--eta-min", type=float, default=SWEEP_RANGE[0])
        parser.add_argument("--eta-max", type=float, default=SWEEP_RANGE[1])
        parser.add_argument("--points", type=int, default=SWEEP_POINTS)
        parser.add_argument("--no-sim", action="store_true", help="analytic engines only")
        self.add_workers_argument(parser)

    def load_config(self, options):
        config = super().load_config(options)
        return config if options.get("config") else sweep_config(config)

    def run(self, **options):
        config = self.load_config(options)
        try:
            etas = eta_points(options["eta_min"], options["eta_max"], options["points"])
        except ValueError as exc:
            self.fail_usage(exc)
        rows = sweep_rows(
            config, etas, simulate=not options["no_sim"], workers=options["workers"]
        )
        self.write_rows(options, SweepRowSerializer, rows, config)
