from dataclasses import dataclass
from typing import NamedTuple

from scipy.stats import t as student_t

DETERMINISTIC = "deterministic"
GEOMETRIC = "geometric"
SERVICE_MODES = (DETERMINISTIC, GEOMETRIC)

PRE = "pre"
POST = "post"
DEPARTURE_SEMANTICS = (PRE, POST)

# Ages are summed at the start of each slot, before that slot's executions
# reset them; D_T is added afterwards as a constant.
SLOT_CONVENTION = "sample-before-reset"


class PoolEntry(NamedTuple):
    """A busy task; it holds its units through slot ``end_slot`` inclusive."""

    end_slot: int
    task_class: int
    gen_slot: int
    units_held: int

    def remaining_slots(self, slot):
        return self.end_slot - slot + 1


class AgeTracker:
    """Per-class generation time of the newest executed packet, plus age sums."""

    def __init__(self, classes, batches):
        self.last_generation = [None] * classes
        self.age_sum = [[0.0] * batches for _ in range(classes)]
        self.undefined_slots = [0] * classes
        self.last_execution = [None] * classes
        self.intervals = [[0, 0, 0] for _ in range(classes)]

    def sample(self, slot, batch):
        for c, generated in enumerate(self.last_generation):
            if generated is None:
                self.undefined_slots[c] += 1
            else:
                self.age_sum[c][batch] += slot - generated

    def execute(self, task_class, gen_slot, slot, measuring):
        last = self.last_generation[task_class]
        if last is None or gen_slot > last:
            self.last_generation[task_class] = gen_slot
        previous = self.last_execution[task_class]
        if measuring and previous is not None:
            gap = slot - previous
            stats = self.intervals[task_class]
            stats[0] += 1
            stats[1] += gap
            stats[2] += gap * gap
        self.last_execution[task_class] = slot


@dataclass(frozen=True)
class SimResult:
    aoa: tuple
    coma: float
    blocking: tuple
    aoi: float
    aoa_se: tuple
    coma_se: float
    blocking_se: tuple
    aoi_se: float
    uplink_rate: tuple
    uplink_se: tuple
    generated: tuple
    rejected: tuple
    uplink_lost: tuple
    blocked: tuple
    executed: tuple
    in_flight: tuple
    interval_mean: tuple
    interval_sq_mean: tuple
    seed: int
    slots: int
    measured_slots: int
    batches: int
    service_mode: str
    departure_semantics: str
    fading_draws: bool
    slot_convention: str = SLOT_CONVENTION

    def ledger_balanced(self):
        return all(
            self.generated[c]
            == self.rejected[c]
            + self.uplink_lost[c]
            + self.blocked[c]
            + self.executed[c]
            + self.in_flight[c]
            for c in range(2)
        )

    def ci_halfwidth(self, standard_error, confidence=0.95):
        """Student-t half-width over the batch means."""
        tcrit = student_t.ppf(0.5 + confidence / 2.0, df=self.batches - 1)
        return float(tcrit * standard_error)
