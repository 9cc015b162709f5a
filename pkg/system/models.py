from dataclasses import asdict, dataclass, field, replace
from typing import Optional


@dataclass(frozen=True)
class TaskClassParams:
    gen_prob: float
    admit_prob: float
    tx_power: float
    units_required: int
    service_slots: int
    downlink_delay: float
    penalty: float

    @property
    def service_rate(self):
        # per-slot completion probability of the geometric surrogate
        return 1.0 / self.service_slots


@dataclass(frozen=True)
class ChannelParams:
    shape: float = 1.0
    pathloss_exp: float = 3.0
    distance: float = 50.0
    noise_power: float = 1e-8
    snr_threshold: float = 10 ** 0.5
    # error-free uplink, p_u = 1 regardless of power
    ideal: bool = False


@dataclass(frozen=True)
class ComputeParams:
    capacity: int = 8


def default_task1():
    return TaskClassParams(
        gen_prob=0.4,
        admit_prob=1.0,
        tx_power=0.05,
        units_required=1,
        service_slots=10,
        downlink_delay=0.1,
        penalty=1.0,
    )


def default_task2():
    return TaskClassParams(
        gen_prob=0.1,
        admit_prob=0.8,
        tx_power=0.2,
        units_required=4,
        service_slots=10,
        downlink_delay=0.1,
        penalty=10.0,
    )


@dataclass(frozen=True)
class SystemConfig:
    task1: TaskClassParams = field(default_factory=default_task1)
    task2: TaskClassParams = field(default_factory=default_task2)
    channel: ChannelParams = field(default_factory=ChannelParams)
    compute: ComputeParams = field(default_factory=ComputeParams)
    energy_rate: Optional[float] = 0.18
    sim_slots: int = 1_000_000
    rng_seed: int = 0

    @property
    def tasks(self):
        return (self.task1, self.task2)

    @property
    def capacity(self):
        return self.compute.capacity

    @property
    def wide_units(self):
        """N, the unit demand that indexes the task-2 occupancy term."""
        return self.task2.units_required

    @property
    def power_usage(self):
        return sum(t.gen_prob * t.admit_prob * t.tx_power for t in self.tasks)

    def with_task(self, index, **changes):
        """Copy with fields of task ``index`` (1 or 2) replaced."""
        name = f"task{index}"
        return replace(self, **{name: replace(getattr(self, name), **changes)})

    def with_channel(self, **changes):
        return replace(self, channel=replace(self.channel, **changes))

    def with_capacity(self, capacity):
        return replace(self, compute=ComputeParams(capacity=capacity))

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    energy_feasible: Optional[bool] = None
    starved: tuple = ()

    @property
    def is_valid(self):
        return not self.violations

    def __bool__(self):
        return self.is_valid
