from dataclasses import replace

from common import error_codes
from common.exceptions import EmptyResult
from pareto.models import GridSpec, front_rows
from pareto.search import search
from pareto.serializers import DecisionPointSerializer, FrontRowSerializer
from queueing.engines import ENGINES, GEO_MG

from experiments.base import ExperimentCommand


class Command(ExperimentCommand):
    help = (
        "Grid search over (P_T1, P_T2, eta1, eta2) for the CoMA / AoA_1 front "
        "under the energy budget, with the uniform baseline alongside."
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.set_defaults(out="pareto_points.csv")
        parser.add_argument("--front-out", default="pareto_front.csv")
        parser.add_argument("--engine", choices=ENGINES, default=GEO_MG)
        parser.add_argument("--grid-powers", type=int, default=20)
        parser.add_argument("--grid-etas", type=int, default=20)
        parser.add_argument("--grid-power-min", type=float, default=1e-3)
        parser.add_argument("--grid-power-max", type=float, default=1.0)
        parser.add_argument("--energy-rate", type=float, help="override E/T in W")
        self.add_workers_argument(parser)

    def run(self, **options):
        config = self.load_config(options)
        if options.get("energy_rate") is not None:
            config = replace(config, energy_rate=options["energy_rate"])
        if options["grid_powers"] < 1 or options["grid_etas"] < 1:
            self.fail_usage(ValueError("grid needs at least one power and one eta level"))
        if not 0 < options["grid_power_min"] <= options["grid_power_max"]:
            self.fail_usage(ValueError("power range must satisfy 0 < min <= max"))

        grid = GridSpec.default(
            powers=options["grid_powers"],
            etas=options["grid_etas"],
            power_min=options["grid_power_min"],
            power_max=options["grid_power_max"],
        )
        result = search(config, grid, engine=options["engine"], workers=options["workers"])

        self.write_rows(options, DecisionPointSerializer, result.points, config)
        self.write_rows(options, FrontRowSerializer, front_rows(result), config, key="front_out")

        if result.empty:
            raise EmptyResult(error_codes.EMPTY_FEASIBLE_SET.format(budget=config.energy_rate))
        summary = f"front: {len(result.front)} points"
        if result.baseline_best is None:
            summary += "; baseline: no feasible point"
        else:
            summary += (
                f"; baseline best CoMA {result.baseline_best.coma!r} "
                f"at {result.baseline_threshold!r} W; "
                f"{result.dominance_gap} front points beat it"
            )
        self.stdout.write(summary)
