"""Exponential decay of Dirichlet solutions toward the canonical decoupled metric.

For constant cyclic data b and boundary values xi_can + delta, the distance
M(t) = sup over an inner subdomain of |xi_t - xi_can|_B decays like
C1 exp(-C2 t). The per-t solves are independent and run in worker threads.
"""

import asyncio
import dataclasses
import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from logorator import Logger

from ..chevalley import LieAlgebra
from ..config import SolverDefaults
from ..errors import InputError
from ..split import CyclicElement
from .events import aemit
from .grids import RectangleGrid
from .model import canonical_xi
from .problem import HiggsCoefficient, TodaProblem, TodaSolution, constant_boundary
from .solver import solve_dirichlet


@dataclasses.dataclass(frozen=True)
class DecayFit:
    """log M(t) ~ log C1 - C2 t, with the coefficient of determination.

    All fields are NaN when some M(t) is zero, since the logarithm is undefined.
    """

    c1: float
    c2: float
    slope: float
    intercept: float
    r_squared: float


@dataclasses.dataclass(frozen=True, eq=False)
class DecayStudy:
    t_values: List[float]
    distances: List[float]
    fit: DecayFit
    monotone: bool
    solutions: List[TodaSolution]
    xi_can: np.ndarray

    def summary(self) -> dict:
        return {
            "t_values": list(self.t_values),
            "distances": list(self.distances),
            "fit": dataclasses.asdict(self.fit),
            "monotone": self.monotone,
            "xi_can": self.xi_can.tolist(),
            "iterations": [s.iterations for s in self.solutions],
            "residuals": [s.residual for s in self.solutions],
        }


def killing_distance(problem: TodaProblem, xi: np.ndarray, reference: np.ndarray, mask: np.ndarray) -> float:
    """sup over ``mask`` of sqrt(B(d, d)) with d = xi - reference in simple-root values."""
    difference = (xi - reference.reshape((-1,) + (1,) * mask.ndim))[:, mask]
    squared = np.einsum("in,ij,jn->n", difference, problem.gram, difference)
    return float(np.sqrt(np.max(np.clip(squared, 0.0, None)))) if squared.size else 0.0


def fit_decay(t_values: Sequence[float], distances: Sequence[float]) -> DecayFit:
    """Least-squares line through (t, log M(t))."""
    t = np.asarray(t_values, dtype=float)
    m = np.asarray(distances, dtype=float)
    if len(t) < 2 or np.any(m <= 0):
        return DecayFit(*(math.nan,) * 5)
    log_m = np.log(m)
    slope, intercept = np.polyfit(t, log_m, 1)
    predicted = slope * t + intercept
    total = float(np.sum((log_m - log_m.mean()) ** 2))
    r_squared = 1.0 - float(np.sum((log_m - predicted) ** 2)) / total if total > 0 else 1.0
    return DecayFit(c1=math.exp(intercept), c2=-float(slope), slope=float(slope), intercept=float(intercept),
                    r_squared=r_squared)


def _check_t_values(t_values: Sequence[float]) -> List[float]:
    t_values = [float(t) for t in t_values]
    if not t_values:
        raise InputError("decay_study needs at least one t")
    if any(t < 1 for t in t_values) or any(b <= a for a, b in zip(t_values, t_values[1:])):
        raise InputError(f"t values must be >= 1 and strictly increasing, got {t_values}")
    return t_values


async def decay_study_async(
    lie: LieAlgebra,
    b: CyclicElement,
    t_values: Sequence[float],
    delta: Sequence[float],
    grid: Optional[RectangleGrid] = None,
    inner_fraction: float = 0.5,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    max_workers: Optional[int] = None,
    on_progress: Optional[Callable] = None,
    logging: bool = SolverDefaults.LOGGING,
) -> DecayStudy:
    """Solve the perturbed canonical problem for every t and fit the decay of M(t).

    Args:
        lie: the Lie algebra.
        b: constant cyclic Higgs coefficients.
        t_values: scales, each >= 1, strictly increasing.
        delta: boundary perturbation in simple-root values.
        grid: rectangle domain; [-1, 1]^2 with 33 x 33 nodes if None.
        inner_fraction: size of the concentric inner sub-rectangle.
        max_workers: concurrent solves (SolverDefaults.MAX_WORKERS if None).
        on_progress: optional sync/async callback receiving event dicts.
        logging (bool): Enable logging. Defaults to True.

    Returns:
        DecayStudy with M(t) in t-order and the fitted constants.

    Raises:
        InputError: for invalid t values, delta or inner fraction.
        ConvergenceError: if any solve fails.
    """
    rs = lie.rs
    t_values = _check_t_values(t_values)
    if len(delta) != rs.rank:
        raise InputError(f"delta needs {rs.rank} simple-root values, got {len(delta)}")
    if not 0 < inner_fraction < 1:
        raise InputError(f"inner_fraction must lie in (0, 1), got {inner_fraction}")
    grid = grid or RectangleGrid((-1.0, 1.0), (-1.0, 1.0), 33, 33)
    max_workers = SolverDefaults.MAX_WORKERS if max_workers is None else max_workers

    xi_can = canonical_xi(lie, b)
    higgs = HiggsCoefficient.from_cyclic(b)
    boundary = constant_boundary(grid, xi_can + np.asarray(delta, dtype=float))
    mask = grid.inner_mask(inner_fraction)
    semaphore = asyncio.Semaphore(max_workers)

    await aemit(on_progress, {"event": "study_started", "t_values": t_values}, logging)
    if logging:
        Logger.note(f"🧮 Decay study on {rs.simple_type}: {len(t_values)} scales, {max_workers} workers")

    async def solve_one(t: float):
        problem = TodaProblem(lie=lie, grid=grid, higgs=higgs, boundary=boundary, t=t, tol=tol, max_iter=max_iter)
        async with semaphore:
            solution = await asyncio.to_thread(solve_dirichlet, problem, "harmonic", None, False)
        distance = killing_distance(problem, solution.xi, xi_can, mask)
        await aemit(on_progress, {"event": "t_completed", "t": t, "distance": distance,
                                  "iterations": solution.iterations}, logging)
        if logging:
            Logger.note(f"  t = {t:g}: M = {distance:.3e} after {solution.iterations} iterations")
        return solution, distance

    results = await asyncio.gather(*[solve_one(t) for t in t_values])
    solutions = [solution for solution, _ in results]
    distances = [distance for _, distance in results]
    fit = fit_decay(t_values, distances)
    monotone = all(later <= earlier + 1e-9 for earlier, later in zip(distances, distances[1:]))

    await aemit(on_progress, {"event": "study_done", "distances": distances, "slope": fit.slope}, logging)
    if logging:
        Logger.note(f"{'✅' if monotone else '⚠️'} Decay fit: C1 = {fit.c1:.3g}, C2 = {fit.c2:.3g}, R^2 = {fit.r_squared:.4f}")
    return DecayStudy(t_values=t_values, distances=distances, fit=fit, monotone=monotone,
                      solutions=list(solutions), xi_can=xi_can)


def decay_study(lie: LieAlgebra, b: CyclicElement, t_values: Sequence[float], delta: Sequence[float],
                grid: Optional[RectangleGrid] = None, inner_fraction: float = 0.5, **kwargs) -> DecayStudy:
    """Synchronous wrapper around decay_study_async."""
    return asyncio.run(decay_study_async(lie, b, t_values, delta, grid=grid, inner_fraction=inner_fraction, **kwargs))
