from dataclasses import dataclass

UNBOUNDED = float("inf")


@dataclass(frozen=True)
class MetricsReport:
    aoa: tuple
    coma: float
    aoi: float
    availability: tuple
    uplink: tuple
    engine: str

    @property
    def blocking(self):
        return tuple(1.0 - avail for avail in self.availability)
