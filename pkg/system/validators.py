import logging

from common import error_codes
from common.exceptions import InvalidConfig

from .models import ValidationReport
from .serializers import SystemConfigSerializer, flatten_errors

logger = logging.getLogger(__name__)


def validate(config):
    """Check ``config`` against its invariants.

    Violations are collected, never raised. Energy infeasibility and
    starvation (a class demanding more units than the pool has) are flags
    on the report, not violations.
    """
    serializer = SystemConfigSerializer(data=config.as_dict())
    violations = ()
    if not serializer.is_valid():
        violations = tuple(flatten_errors(serializer.errors))

    energy_feasible = None
    if config.energy_rate is not None:
        energy_feasible = config.power_usage <= config.energy_rate + 1e-12

    starved = tuple(
        index
        for index, task in enumerate(config.tasks, start=1)
        if task.units_required > config.capacity
    )
    if starved:
        logger.warning("task class(es) %s can never execute", starved)

    return ValidationReport(
        violations=violations, energy_feasible=energy_feasible, starved=starved
    )


def raise_for_report(report):
    """Raise :class:`InvalidConfig` listing every violation on ``report``."""
    if report.is_valid:
        return
    raise InvalidConfig(
        error_codes.CONFIG_INVALID.format(
            count=len(report.violations),
            violations="; ".join(report.violations),
        ),
        report,
    )
