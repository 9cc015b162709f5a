import logging

from metrics.serializers import MetricsReportSerializer
from metrics.utils import compose_report
from queueing import det
from queueing.engines import DET, ENGINES, ERLANG, GEO_MG, AvailabilityEvaluator
from queueing.steady import write_dump
from system.channel import effective_arrivals

from experiments.base import ExperimentCommand

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = "Closed-form AoA, CoMA and AoI of one configuration under one queue engine."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--engine", choices=ENGINES, default=GEO_MG)
        parser.add_argument("--dump", help="directory for the state list and sparse matrix")

    def run(self, **options):
        config = self.load_config(options)
        engine = options["engine"]
        evaluator = AvailabilityEvaluator(config, engine)
        report = compose_report(config, engine, evaluator=evaluator)
        self.write_rows(options, MetricsReportSerializer, [report], config)

        if options.get("dump"):
            self.dump(config, engine, evaluator, options["dump"])

    def dump(self, config, engine, evaluator, directory):
        if engine == ERLANG:
            logger.warning("the product-form engine has no transition matrix to dump")
            return
        steady = evaluator.steady(config)
        if engine == DET:
            space, matrix = det.transition_matrix(config)
        else:
            space = evaluator.chain.space
            matrix = evaluator.chain.transition_matrix(effective_arrivals(config))
        write_dump(directory, space, matrix, steady, prefix=engine)
        logger.info("dumped %d states to %s", len(space), directory)
