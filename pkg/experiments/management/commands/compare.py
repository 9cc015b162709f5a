from experiments.base import ExperimentCommand
from experiments.presets import (
    COMPARE_G2_RANGE,
    COMPARE_POINTS,
    COMPARE_RATIO,
    compare_config,
    load_points,
)
from experiments.serializers import BlockingRowSerializer
from experiments.utils import compare_rows


class Command(ExperimentCommand):
    help = (
        "Blocking probability of both classes against load under every queue "
        "engine and both simulated service modes."
    )

    simulates = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--g2-min", type=float, default=COMPARE_G2_RANGE[0])
        parser.add_argument("--g2-max", type=float, default=COMPARE_G2_RANGE[1])
        parser.add_argument("--points", type=int, default=COMPARE_POINTS)
        parser.add_argument("--ratio", type=float, default=COMPARE_RATIO, help="g1 / g2")
        parser.add_argument("--no-sim", action="store_true", help="analytic engines only")
        self.add_workers_argument(parser)

    def load_config(self, options):
        config = super().load_config(options)
        # the preset only shapes the built-in defaults; a config file is taken as is
        return config if options.get("config") else compare_config(config)

    def run(self, **options):
        config = self.load_config(options)
        loads = load_points(
            options["g2_min"], options["g2_max"], options["points"], options["ratio"]
        )
        for g1, g2 in loads:
            if g1 < 0 or g2 < 0 or g1 + g2 > 1:
                self.fail_usage(ValueError(f"load point g1={g1}, g2={g2} is not a distribution"))
        rows = compare_rows(
            config, loads, simulate=not options["no_sim"], workers=options["workers"]
        )
        self.write_rows(options, BlockingRowSerializer, rows, config)
