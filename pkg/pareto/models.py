import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DecisionPoint:
    p_t1: float
    p_t2: float
    eta1: float
    eta2: float
    feasible: bool
    coma: float
    aoa1: float
    engine: str
    power_usage: float = 0.0

    @property
    def decision(self):
        return (self.p_t1, self.p_t2, self.eta1, self.eta2)

    @property
    def objectives(self):
        return (self.coma, self.aoa1)

    @property
    def bounded(self):
        return math.isfinite(self.aoa1)


@dataclass(frozen=True)
class GridSpec:
    power_levels: tuple
    eta_levels: tuple

    @classmethod
    def default(cls, powers=20, etas=20, power_min=1e-3, power_max=1.0):
        """Log-spaced powers in [power_min, power_max] W, linear etas in (0, 1]."""
        return cls(
            power_levels=tuple(float(p) for p in np.geomspace(power_min, power_max, powers)),
            eta_levels=tuple(float(e) for e in np.linspace(1.0 / etas, 1.0, etas)),
        )

    def __len__(self):
        return len(self.power_levels) ** 2 * len(self.eta_levels) ** 2

    def differentiated(self):
        for p1 in self.power_levels:
            for p2 in self.power_levels:
                for e1 in self.eta_levels:
                    for e2 in self.eta_levels:
                        yield (p1, p2, e1, e2)

    def uniform(self):
        """Baseline family: one power and one admission probability for both classes."""
        for p in self.power_levels:
            for e in self.eta_levels:
                yield (p, p, e, e)


@dataclass(frozen=True)
class ParetoFront:
    front: tuple
    points: tuple
    baseline_points: tuple = ()
    baseline_front: tuple = ()
    baseline_best: DecisionPoint = None
    engine: str = ""
    budget: float = None

    @property
    def empty(self):
        return not self.front

    @property
    def baseline_threshold(self):
        """Smallest budget at which the baseline's best point is feasible."""
        return None if self.baseline_best is None else self.baseline_best.power_usage

    @property
    def dominance_gap(self):
        """Front points whose CoMA beats the baseline's best CoMA."""
        if self.baseline_best is None:
            return len(self.front)
        return sum(1 for p in self.front if p.coma < self.baseline_best.coma)


@dataclass(frozen=True)
class FrontRow:
    role: str
    point: DecisionPoint


def front_rows(result):
    """Rows of the front CSV: the front, the baseline front, the baseline optimum."""
    rows = [FrontRow("front", p) for p in result.front]
    rows.extend(FrontRow("baseline", p) for p in result.baseline_front)
    if result.baseline_best is not None:
        rows.append(FrontRow("baseline_best", result.baseline_best))
    return rows
