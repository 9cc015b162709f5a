import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from django.conf import settings
from scipy.sparse.linalg import splu

from common import error_codes
from common.exceptions import NumericalError

logger = logging.getLogger(__name__)


@dataclass
class StateSpace:
    """Ordered states of a pool chain plus the inverse index.

    ``states`` hold objects exposing ``occupancy(units)``; ``units`` is the
    pair (N_1, N_2) of per-class unit demands.
    """

    states: list
    capacity: int
    units: int
    index: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.index is None:
            self.index = {state: i for i, state in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    @property
    def occupancy(self):
        return np.array(
            [state.occupancy(self.units) for state in self.states], dtype=np.int64
        )


@dataclass(frozen=True)
class SteadyState:
    probs: np.ndarray
    space: StateSpace
    engine: str = ""

    def prob_of(self, state):
        return float(self.probs[self.space.index[state]])


def availability_prob(steady, units_needed):
    """P(Gamma >= N_i): mass of states leaving at least ``units_needed`` free units."""
    free = steady.space.capacity - steady.space.occupancy
    return float(np.sum(steady.probs[free >= units_needed]))


def balance_residual(probs, matrix):
    """||S (P - I)||_inf for a row-stochastic ``matrix`` (dense or sparse)."""
    flow = matrix.T @ probs if sp.issparse(matrix) else probs @ matrix
    return float(np.max(np.abs(np.asarray(flow).ravel() - probs)))


def _solve_lu(matrix):
    n = matrix.shape[0]
    system = (matrix.T - sp.identity(n, format="csr")).tolil()
    system[n - 1, :] = np.ones(n)
    rhs = np.zeros(n)
    rhs[n - 1] = 1.0
    return splu(system.tocsc()).solve(rhs)


def _power_iteration(matrix, tol, max_iter):
    n = matrix.shape[0]
    transposed = matrix.T.tocsr()
    probs = np.full(n, 1.0 / n)
    for iteration in range(max_iter):
        updated = transposed @ probs
        if iteration % 10 == 0 and np.max(np.abs(updated - probs)) < tol:
            return updated / updated.sum()
        probs = updated
    raise NumericalError(
        error_codes.POWER_ITERATION_DIVERGED.format(max_iter=max_iter),
        max_iter=max_iter,
    )


def solve_sparse(matrix, tol=None, max_iter=None):
    """Stationary vector of the row-stochastic sparse ``matrix``.

    Sparse LU on (P^T - I) with the last equation replaced by normalization;
    power iteration when the factorization fails.
    """
    tol = settings.STEADY_STATE_TOL if tol is None else tol
    power_tol = settings.POWER_ITERATION_TOL
    max_iter = settings.POWER_ITERATION_MAX_ITER if max_iter is None else max_iter
    matrix = sp.csr_matrix(matrix)
    n = matrix.shape[0]
    if n == 1:
        return np.ones(1)

    try:
        probs = _solve_lu(matrix)
    except RuntimeError as exc:
        logger.warning("sparse LU failed (%s); falling back to power iteration", exc)
        probs = _power_iteration(matrix, power_tol, max_iter)

    if not np.all(np.isfinite(probs)):
        raise NumericalError(
            error_codes.SINGULAR_BALANCE.format(detail="non-finite solution"),
            states=n,
        )
    # LU leaves round-off of order 1e-17 below zero
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()

    residual = balance_residual(probs, matrix)
    logger.debug("sparse steady state: %d states, residual %.3e", n, residual)
    if residual > tol:
        raise NumericalError(
            error_codes.RESIDUAL_TOO_LARGE.format(residual=residual, tol=tol),
            residual=residual,
            states=n,
        )
    return probs


def solve_dense(matrix, tol=None):
    """Dense counterpart of :func:`solve_sparse` for small chains."""
    tol = settings.STEADY_STATE_TOL if tol is None else tol
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    system = matrix.T - np.eye(n)
    system[n - 1, :] = 1.0
    rhs = np.zeros(n)
    rhs[n - 1] = 1.0
    try:
        probs = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            error_codes.SINGULAR_BALANCE.format(detail=exc),
            cond=float(np.linalg.cond(system)),
        ) from exc
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    residual = balance_residual(probs, matrix)
    if residual > tol:
        raise NumericalError(
            error_codes.RESIDUAL_TOO_LARGE.format(residual=residual, tol=tol),
            residual=residual,
            cond=float(np.linalg.cond(system)),
        )
    return probs


def write_dump(directory, space, matrix, steady=None, prefix="chain"):
    """Write ``<prefix>_states.txt`` and ``<prefix>_matrix.txt`` (row col value)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / f"{prefix}_states.txt", "w", encoding="utf-8") as fh:
        fh.write("# index occupancy state" + (" prob" if steady is not None else "") + "\n")
        for i, state in enumerate(space.states):
            row = f"{i} {state.occupancy(space.units)} {state.label()}"
            if steady is not None:
                row += f" {steady.probs[i]!r}"
            fh.write(row + "\n")
    coo = sp.coo_matrix(matrix)
    order = np.lexsort((coo.col, coo.row))
    with open(directory / f"{prefix}_matrix.txt", "w", encoding="utf-8") as fh:
        fh.write(f"# {matrix.shape[0]} {matrix.shape[1]} {coo.nnz}\n")
        for k in order:
            fh.write(f"{coo.row[k]} {coo.col[k]} {coo.data[k]!r}\n")
