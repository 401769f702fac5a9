"""Canonical decoupled metrics, model metrics and asymptotic slopes.

All t_R elements are simple-root values (alpha_1(x), ..., alpha_l(x)).
"""

import dataclasses
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from logorator import Logger

from ..chevalley import LieAlgebra
from ..config import SolverDefaults
from ..errors import InputError, NumericError
from ..rootsys import RootSystem
from ..sl2 import SL2Triple, compute_v_S
from ..split import CyclicElement, is_cyclic
from .grids import AnnulusGrid, RadialGrid
from .problem import Grid, HiggsCoefficient, LaurentTerm, TodaProblem, TodaSolution
from .solver import toda_residual


def _decoupling_matrix(rs: RootSystem) -> np.ndarray:
    """Row i is alpha_i + psi in simple-root values."""
    return np.eye(rs.rank) + np.outer(np.ones(rs.rank), np.array(rs.psi_coefficients, dtype=float))


def _decoupling_rhs(rs: RootSystem, moduli: np.ndarray) -> np.ndarray:
    psi = np.array(rs.psi_coefficients, dtype=float).reshape((-1,) + (1,) * (moduli.ndim - 1))
    return 0.5 * (np.log(psi) + 2.0 * np.log(moduli[-1]) - 2.0 * np.log(moduli[:-1]))


def decoupling_error(rs: RootSystem, b: Sequence[complex], xi: Sequence[float]) -> float:
    """max_i | |b_i|^2 e^{2 alpha_i(xi)} - psi_i |b_-psi|^2 e^{-2 psi(xi)} |, relative."""
    moduli = np.abs(np.asarray(b, dtype=complex))
    xi = np.asarray(xi, dtype=float)
    psi = np.array(rs.psi_coefficients, dtype=float)
    lhs = moduli[:-1] ** 2 * np.exp(2 * xi)
    rhs = psi * moduli[-1] ** 2 * math.exp(-2 * float(psi @ xi))
    return float(np.max(np.abs(lhs - rhs)) / np.max(rhs))


def canonical_xi(lie: Union[LieAlgebra, RootSystem], b: Union[CyclicElement, Sequence[complex]]) -> np.ndarray:
    """The decoupled metric of a constant cyclic element.

    Solves (alpha_i + psi)(xi) = 1/2 (log psi_i + 2 log|b_-psi| - 2 log|b_i|),
    after which |b_i|^2 e^{2 alpha_i(xi)} = psi_i |b_-psi|^2 e^{-2 psi(xi)} for all i
    and [u, rho_h(u)] = 0.

    Raises:
        InputError: if b is not cyclic.
        NumericError: if the decoupling identity fails the post-check.
    """
    rs = lie.rs if isinstance(lie, LieAlgebra) else lie
    u = b if isinstance(b, CyclicElement) else CyclicElement(rs, tuple(b))
    if not is_cyclic(u):
        raise InputError(f"canonical_xi needs a cyclic element, got b = {list(u.b)}")
    coefficients = [complex(v) for v in u.b]
    xi = np.linalg.solve(_decoupling_matrix(rs), _decoupling_rhs(rs, np.abs(coefficients)))
    error = decoupling_error(rs, coefficients, xi)
    if error > SolverDefaults.IDENTITY_TOL:
        raise NumericError(f"Decoupling post-check failed with relative error {error:.2e}")
    return xi


def canonical_xi_field(problem: TodaProblem) -> np.ndarray:
    """Pointwise canonical decoupled metric for Higgs data cyclic on the grid.

    Harmonic where the coefficients are holomorphic, so it solves the Toda
    equation only up to the Laplacian of log|f|; exact for monomial data
    whose log-moduli are harmonic.
    """
    rs = problem.rs
    values = problem.higgs.evaluate(problem.grid.z)
    if not np.all(np.abs(values) > 0):
        raise InputError("Higgs data is not cyclic on the grid")
    rhs = _decoupling_rhs(rs, np.abs(values))
    xi = np.linalg.solve(_decoupling_matrix(rs), rhs.reshape(rs.rank, -1))
    return xi.reshape((rs.rank,) + problem.grid.shape)


def root_norm_squared(rs: RootSystem, xi: np.ndarray, root: Sequence[int]) -> np.ndarray:
    """|e_phi|_h^2 = exp(2 phi(xi)) for xi in simple-root values."""
    return np.exp(2.0 * np.tensordot(np.asarray(root, dtype=float), np.asarray(xi, dtype=float), axes=1))


@dataclasses.dataclass(frozen=True, eq=False)
class ModelMetric:
    """xi = -beta log|z| - u_S log(-log|z|^{2t}) with Higgs field t sum_{phi in S} z^{m(phi)} v_phi dz/z.

    Attributes:
        triple: the sl2-triple of S; v_S supplies the Higgs coefficients.
        beta: simple-root values of beta, with phi(beta) = m(phi) on S.
        m: integer per root of S, in the order of ``triple.subset``.
        t: scale, t > 0.
    """

    triple: SL2Triple
    beta: Tuple[float, ...]
    m: Tuple[int, ...]
    t: float

    def __post_init__(self):
        rs = self.rs
        if len(self.beta) != rs.rank:
            raise InputError(f"beta needs {rs.rank} simple-root values, got {len(self.beta)}")
        if len(self.m) != len(self.triple.subset):
            raise InputError(f"m needs one integer per root of S ({len(self.triple.subset)}), got {len(self.m)}")
        if not math.isfinite(self.t) or self.t <= 0:
            raise InputError(f"Model metrics need t > 0, got {self.t}")
        for label, root, m in zip(self.triple.labels, self.triple.roots, self.m):
            value = float(np.dot(root, self.beta))
            if abs(value - m) > 1e-9:
                raise InputError(f"{label}(beta) = {value:g} but m({label}) = {m}")

    @property
    def lie(self) -> LieAlgebra:
        return self.triple.lie

    @property
    def rs(self) -> RootSystem:
        return self.triple.lie.rs

    @property
    def u_values(self) -> np.ndarray:
        return np.array([float(x) for x in self.triple.u_values])

    def evaluate_at(self, radius: np.ndarray) -> np.ndarray:
        """xi at the given radii, shape (l, *radius.shape)."""
        radius = np.asarray(radius, dtype=float)
        if np.any(radius <= 0) or np.any(radius >= 1):
            raise InputError("Model metrics live on 0 < |z| < 1")
        log_r = np.log(radius)
        expand = (-1,) + (1,) * radius.ndim
        beta = np.asarray(self.beta, dtype=float).reshape(expand)
        return -beta * log_r - self.u_values.reshape(expand) * np.log(-2.0 * self.t * log_r)

    def evaluate(self, grid: Grid) -> np.ndarray:
        if isinstance(grid, (AnnulusGrid, RadialGrid)):
            # exact radii, so the angular differences vanish
            return self.evaluate_at(np.exp(grid.coordinates[0]))
        return self.evaluate_at(np.abs(grid.z))

    def higgs(self) -> HiggsCoefficient:
        terms: List[Tuple[LaurentTerm, ...]] = [() for _ in self.rs.labels]
        for k, m, b in zip(self.triple.subset, self.m, self.triple.beta):
            terms[k] = (LaurentTerm(int(m) - 1, complex(b)),)
        return HiggsCoefficient(self.rs, tuple(terms))

    def problem(self, grid: Grid, tol: Optional[float] = None, max_iter: Optional[int] = None) -> TodaProblem:
        """Dirichlet problem whose boundary data is the model metric itself."""
        return TodaProblem(
            lie=self.lie, grid=grid, higgs=self.higgs(), boundary=self.evaluate(grid), t=self.t,
            tol=tol, max_iter=max_iter, description={"boundary": self.to_dict()},
        )

    def norm_errors(self, radius: float) -> List[float]:
        """Relative error of |e_phi|_h^2 against |z|^{-2 beta(phi)} (-log|z|^{2t})^{-2} for phi in S."""
        xi = self.evaluate_at(np.array([radius]))[:, 0]
        errors = []
        for root in self.triple.roots:
            observed = float(root_norm_squared(self.rs, xi, root))
            expected = radius ** (-2.0 * float(np.dot(root, self.beta))) * (-2.0 * self.t * math.log(radius)) ** -2.0
            errors.append(abs(observed - expected) / expected)
        return errors

    def log_norm_gaps(self, radius: np.ndarray) -> np.ndarray:
        """log|e_phi|_h + beta(phi) log|z| for phi in S; equals -log(-log|z|^{2t}) here."""
        radius = np.asarray(radius, dtype=float)
        xi = self.evaluate_at(radius)
        return np.array([0.5 * np.log(root_norm_squared(self.rs, xi, root)) + np.dot(root, self.beta) * np.log(radius)
                         for root in self.triple.roots])

    def to_dict(self) -> dict:
        return {"kind": "model", "subset": list(self.triple.labels), "beta": list(self.beta), "m": list(self.m)}


def model_metric_data(lie: LieAlgebra, beta: Sequence[float], subset, m: Sequence[int], t: float,
                      logging: bool = SolverDefaults.LOGGING) -> ModelMetric:
    try:
        beta, m, t = tuple(float(x) for x in beta), tuple(int(k) for k in m), float(t)
    except (TypeError, ValueError) as e:
        raise InputError(f"Model metrics need numeric beta, integer m and numeric t: {e}") from e
    triple = compute_v_S(lie, subset, logging=logging)
    return ModelMetric(triple=triple, beta=beta, m=m, t=t)


def model_metric(lie: LieAlgebra, beta: Sequence[float], subset, m: Sequence[int], t: float, grid: Grid,
                 logging: bool = SolverDefaults.LOGGING) -> np.ndarray:
    """Closed-form model metric xi on ``grid``.

    Raises:
        InputError: if the grid reaches |z| >= 1, t <= 0, or phi(beta) != m(phi) on S.
    """
    return model_metric_data(lie, beta, subset, m, t, logging=logging).evaluate(grid)


def model_problem(lie: LieAlgebra, beta: Sequence[float], subset, m: Sequence[int], t: float, grid: Grid,
                  tol: Optional[float] = None, max_iter: Optional[int] = None,
                  logging: bool = SolverDefaults.LOGGING) -> TodaProblem:
    return model_metric_data(lie, beta, subset, m, t, logging=logging).problem(grid, tol=tol, max_iter=max_iter)


def convergence_orders(residuals: Sequence[float]) -> List[float]:
    """log2 of successive residual ratios under mesh halving."""
    return [math.log2(a / b) if a > 0 and b > 0 else math.nan for a, b in zip(residuals, residuals[1:])]


def model_convergence(model: ModelMetric, grid: Grid, levels: int = 3,
                      logging: bool = SolverDefaults.LOGGING) -> dict:
    """Discrete residual of the closed form on ``levels`` dyadic refinements of ``grid``.

    ``residuals`` are sup-norms over the nodes of the coarsest grid, which
    every refinement contains; ``sup_residuals`` run over all nodes.
    """
    grids, residuals, sup_residuals = [], [], []
    for level in range(levels):
        if level:
            grid = grid.refined()
        residual = np.abs(toda_residual(model.problem(grid), model.evaluate(grid)))
        common = residual[(slice(None),) + (slice(None, None, 2 ** level),) * len(grid.shape)]
        residuals.append(float(common.max()))
        sup_residuals.append(float(residual.max()))
        grids.append(grid.to_dict())
        if logging:
            Logger.note(f"  {grid.kind} {grid.shape}: residual {residuals[-1]:.3e}")
    return {"grids": grids, "residuals": residuals, "sup_residuals": sup_residuals,
            "orders": convergence_orders(residuals)}


@dataclasses.dataclass(frozen=True)
class SlopeFit:
    """Least-squares fit of -xi(s) = beta s + c + gamma log(-s), per component.

    ``gamma`` is all zeros when the log-log term is not fitted.
    """

    beta: Tuple[float, ...]
    intercept: Tuple[float, ...]
    gamma: Tuple[float, ...]
    window: Tuple[float, float]
    nodes: int
    rms: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def fit_slope(s: np.ndarray, xi: np.ndarray, window: Optional[Tuple[float, float]] = None,
              loglog: bool = True) -> SlopeFit:
    """Fit -xi(s) over the s-nodes inside ``window``.

    Args:
        s: node positions, shape (n,).
        xi: radial profile, shape (l, n).
        window: closed interval of s; the whole axis if None.
        loglog: also fit the log(-s) term, which needs s < 0 on the window.

    Raises:
        InputError: if fewer than 5 nodes fall inside the window.
    """
    s = np.asarray(s, dtype=float)
    lo, hi = (float(s[0]), float(s[-1])) if window is None else (float(window[0]), float(window[1]))
    if hi < lo:
        raise InputError(f"Window {window} is empty")
    eps = 1e-12 * max(1.0, abs(lo), abs(hi))
    inside = (s >= lo - eps) & (s <= hi + eps)
    nodes = int(inside.sum())
    if nodes < 5:
        raise InputError(f"Slope window [{lo}, {hi}] holds {nodes} nodes; at least 5 are needed")
    if loglog and np.any(s[inside] >= 0):
        raise InputError("The log-log term needs s < 0 on the window")
    columns = [s[inside], np.ones(nodes)] + ([np.log(-s[inside])] if loglog else [])
    design = np.column_stack(columns)
    target = -np.asarray(xi, dtype=float)[:, inside].T
    coefficients, *_ = np.linalg.lstsq(design, target, rcond=None)
    rms = float(np.sqrt(np.mean((design @ coefficients - target) ** 2)))
    gamma = coefficients[2] if loglog else np.zeros(coefficients.shape[1])
    return SlopeFit(beta=tuple(coefficients[0].tolist()), intercept=tuple(coefficients[1].tolist()),
                    gamma=tuple(gamma.tolist()), window=(lo, hi), nodes=nodes, rms=rms)


def asymptotic_slope(solution: TodaSolution, window: Optional[Tuple[float, float]] = None,
                     loglog: bool = True) -> SlopeFit:
    """Estimate beta at the puncture from a solution on an annulus or radial grid.

    Annulus solutions are averaged over the angle first.
    """
    if not solution.converged:
        raise InputError("asymptotic_slope needs a converged solution")
    grid = solution.problem.grid
    if isinstance(grid, AnnulusGrid):
        profile = solution.xi.mean(axis=2)
    elif isinstance(grid, RadialGrid):
        profile = solution.xi
    else:
        raise InputError(f"asymptotic_slope needs an annulus or radial grid, got {grid.kind}")
    return fit_slope(grid.axes[0], profile, window=window, loglog=loglog)
