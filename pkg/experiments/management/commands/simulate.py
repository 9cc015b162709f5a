from simulation.engine import run
from simulation.models import DEPARTURE_SEMANTICS, DETERMINISTIC, PRE, SERVICE_MODES
from simulation.serializers import SimResultSerializer

from experiments.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Slot-level simulation of the two-class system."

    simulates = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--service", choices=SERVICE_MODES, default=DETERMINISTIC)
        parser.add_argument("--departure", choices=DEPARTURE_SEMANTICS, default=PRE)
        parser.add_argument(
            "--fading-draws",
            action="store_true",
            help="draw the fading gain per slot instead of a Bernoulli(p_u) outcome",
        )

    def run(self, **options):
        config = self.load_config(options)
        try:
            result = run(
                config,
                service_mode=options["service"],
                departure_semantics=options["departure"],
                fading_draws=options["fading_draws"],
            )
        except ValueError as exc:
            self.fail_usage(exc)
        self.write_rows(options, SimResultSerializer, [result], config)
