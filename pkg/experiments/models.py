from dataclasses import dataclass
from typing import Optional

SIMULATED_DETERMINISTIC = "sim-deterministic"
SIMULATED_GEOMETRIC = "sim-geometric"


@dataclass(frozen=True)
class BlockingRow:
    """Blocking probability of one class under one model at one load point."""

    g1: float
    g2: float
    model: str
    task: int
    blocking: float
    blocking_se: Optional[float] = None
    det_le_geo: Optional[bool] = None


@dataclass(frozen=True)
class SweepRow:
    """Closed-form metrics (or their simulated estimates) at one eta1 value."""

    eta1: float
    source: str
    aoa1: float
    aoa2: float
    coma: float
    aoi: float
    aoa1_se: Optional[float] = None
    aoa2_se: Optional[float] = None
    coma_se: Optional[float] = None
    aoi_se: Optional[float] = None
