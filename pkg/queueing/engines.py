"""Registry of the queue engines that supply P(Gamma >= N_i)."""
import logging

from common import error_codes
from common.exceptions import SolverError
from system.channel import effective_arrivals

from . import det, geo
from .erlang import ErlangLoad, erlang_steady_state
from .steady import availability_prob

logger = logging.getLogger(__name__)

DET = "det"
GEO_MG = "geo-mg"
GEO_DIRECT = "geo-direct"
ERLANG = "erlang"

ENGINES = (DET, GEO_MG, GEO_DIRECT, ERLANG)


class UnknownEngine(SolverError, ValueError):
    pass


def check_engine(engine):
    if engine not in ENGINES:
        raise UnknownEngine(
            error_codes.UNKNOWN_ENGINE.format(engine=engine, choices=", ".join(ENGINES))
        )
    return engine


class AvailabilityEvaluator:
    """Solves one engine repeatedly for configs sharing C, N_i and D_i.

    The Geo/Geo skeleton is built once; only the arrivals change between
    calls.
    """

    def __init__(self, config, engine):
        self.engine = check_engine(engine)
        self.chain = None
        if engine in (GEO_MG, GEO_DIRECT):
            self.chain = geo.GeoChain.from_config(config)

    def steady(self, config):
        if self.engine == DET:
            return det.solve_steady_state(config)
        if self.engine == GEO_MG:
            return geo.solve_matrix_geometric(config, chain=self.chain)
        if self.engine == GEO_DIRECT:
            return geo.solve_direct(config, chain=self.chain)
        load = ErlangLoad.from_config(config, effective_arrivals(config))
        return erlang_steady_state(
            load,
            config.capacity,
            config.task2.units_required,
            units1=config.task1.units_required,
        )

    def __call__(self, config):
        steady = self.steady(config)
        return tuple(
            availability_prob(steady, task.units_required) for task in config.tasks
        )


def solve(config, engine):
    return AvailabilityEvaluator(config, engine).steady(config)


def availabilities(config, engine):
    return AvailabilityEvaluator(config, engine)(config)
