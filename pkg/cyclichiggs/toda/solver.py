"""Damped Newton solver for the torus-reduced Hitchin (Toda) equation.

Discrete residual on interior nodes, in simple-root values x = (alpha_i(xi)):

    E(x) = r * (L0 x - w * 2 t^2 sum_p |f_p|^2 e^{2 c_p.x} M c_p)

with r = grid.residual_factor, w = grid.weight, c_p the roots of Pi^Q and M
the Killing Gram of the alpha_i^#. Newton works on the symmetric system

    F(x) = G L0 x - w * 2 t^2 sum_p |f_p|^2 e^{2 c_p.x} c_p,      G = M^{-1},

whose Jacobian kron(G, L0) - sum_p kron(c_p c_p^T, diag(4 t^2 w |f_p|^2 e^{2 c_p.x}))
is symmetric negative definite. Each step solves -J d = F by preconditioned CG.
"""

from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spl
from logorator import Logger

from ..config import SolverDefaults
from ..errors import ConvergenceError, InputError, NumericError
from .events import emit
from .grids import AnnulusGrid, RadialGrid
from .problem import TodaProblem, TodaSolution, constant_boundary


def _check_xi(problem: TodaProblem, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    expected = (problem.rs.rank,) + problem.grid.shape
    if xi.shape != expected:
        raise InputError(f"xi has shape {xi.shape}, expected {expected}")
    return xi


def _source(problem: TodaProblem, xi: np.ndarray) -> np.ndarray:
    """A_p = 2 t^2 |f_p|^2 e^{2 c_p.x}, shape (l+1, *grid.shape)."""
    exponent = 2.0 * np.einsum("pl,l...->p...", problem.pi_q, xi)
    with np.errstate(over="ignore", invalid="ignore"):
        return 2.0 * problem.t ** 2 * problem.abs_squared * np.exp(exponent)


def toda_residual(problem: TodaProblem, xi: np.ndarray) -> np.ndarray:
    """E(xi) on every node (zero on boundary nodes), shape (l, *grid.shape)."""
    xi = _check_xi(problem, xi)
    grid = problem.grid
    source = np.einsum("p...,lp->l...", _source(problem, xi), problem.sharp_values)
    residual = grid.residual_factor * (grid.apply_laplacian(xi) - grid.weight * source)
    residual[:, grid.boundary_mask] = 0.0
    return residual


def sup_residual(problem: TodaProblem, xi: np.ndarray) -> float:
    return float(np.max(np.abs(toda_residual(problem, xi))))


def roundoff_floor(problem: TodaProblem, xi: np.ndarray) -> float:
    """Rounding bound on sup_residual at ``xi``.

    eps times the sup over interior nodes of r * (|L0| |xi| + w |source|);
    on fine annuli near the puncture r = e^{-2s} lifts it above the tolerance.
    """
    xi = _check_xi(problem, xi)
    grid = problem.grid
    stencil = sum(4.0 / h ** 2 for h in grid.spacing)
    with np.errstate(over="ignore", invalid="ignore"):
        source = np.einsum("p...,lp->l...", np.abs(_source(problem, xi)), np.abs(problem.sharp_values))
    bound = grid.residual_factor * (stencil * np.max(np.abs(xi)) + grid.weight * source)
    return float(np.finfo(float).eps * np.max(bound[:, ~grid.boundary_mask]))


def newton_system(problem: TodaProblem, xi: np.ndarray) -> np.ndarray:
    """F(x) on interior nodes, stacked component-major."""
    grid = problem.grid
    interior = ~grid.boundary_mask
    lap = np.einsum("lk,k...->l...", problem.gram, grid.apply_laplacian(xi))
    source = np.einsum("p...,pl->l...", _source(problem, xi), problem.pi_q)
    return (lap - grid.weight * source)[:, interior].ravel()


def newton_jacobian(problem: TodaProblem, xi: np.ndarray) -> sps.csr_matrix:
    """dF/dx on interior unknowns; symmetric negative definite."""
    xi = _check_xi(problem, xi)
    grid = problem.grid
    interior = ~grid.boundary_mask
    jacobian = sps.kron(sps.csr_matrix(problem.gram), grid.laplacian_interior())
    weighted = 2.0 * grid.weight * _source(problem, xi)
    for c, a in zip(problem.pi_q, weighted):
        if not np.any(a):
            continue
        jacobian = jacobian - sps.kron(sps.csr_matrix(np.outer(c, c)), sps.diags(a[interior]))
    return jacobian.tocsr()


def _pcg(matrix: sps.csr_matrix, rhs: np.ndarray, logging: bool) -> np.ndarray:
    """Solve an SPD system by Jacobi-preconditioned CG, falling back to a direct solve."""
    diagonal = matrix.diagonal()
    preconditioner = spl.LinearOperator(matrix.shape, matvec=lambda v: v / diagonal, dtype=float)
    solution, info = spl.cg(matrix, rhs, rtol=SolverDefaults.CG_RTOL, atol=0.0,
                            maxiter=SolverDefaults.CG_MAXITER, M=preconditioner)
    if info != 0 or not np.all(np.isfinite(solution)):
        if logging:
            Logger.note(f"⚠️ CG stopped with info={info}; switching to a direct solve")
        solution = spl.spsolve(matrix.tocsc(), rhs)
    return solution


def harmonic_extension(problem: TodaProblem, logging: bool = SolverDefaults.LOGGING) -> np.ndarray:
    """Discrete harmonic function with the problem's boundary values."""
    grid = problem.grid
    interior = ~grid.boundary_mask
    edge = problem.boundary[:, grid.boundary_mask]
    if np.all(edge == edge[:, :1]):
        # constant data extends to the constant
        return constant_boundary(grid, edge[:, 0])
    base = np.where(grid.boundary_mask, problem.boundary, 0.0)
    lap = -grid.laplacian_interior()
    rhs = grid.apply_laplacian(base)[:, interior]
    out = base.copy()
    for i in range(problem.rs.rank):
        out[i, interior] = _pcg(lap, rhs[i], logging)
    return out


def _initial(problem: TodaProblem, initial: Union[str, np.ndarray], logging: bool) -> Tuple[np.ndarray, str]:
    grid = problem.grid
    if isinstance(initial, str):
        if initial == "harmonic":
            return harmonic_extension(problem, logging), initial
        if initial == "zero":
            return np.where(grid.boundary_mask, problem.boundary, 0.0), initial
        raise InputError(f"Unknown initial guess {initial!r}; expected 'harmonic', 'zero' or an array")
    xi = _check_xi(problem, initial).copy()
    xi[:, grid.boundary_mask] = problem.boundary[:, grid.boundary_mask]
    return xi, "given"


def solve_dirichlet(problem: TodaProblem, initial: Union[str, np.ndarray] = "harmonic",
                    on_progress: Optional[Callable] = None,
                    logging: bool = SolverDefaults.LOGGING) -> TodaSolution:
    """Solve E(xi) = 0 with xi pinned to the boundary data.

    Each pass evaluates the residual and stops once its sup-norm is at most
    the tolerance, or at most ROUNDOFF_FACTOR times the rounding bound of
    roundoff_floor when that bound exceeds the tolerance; otherwise it takes a damped Newton step with Armijo
    halving on ||F||_2. Non-finite trial values count as failed trials.

    Args:
        problem: the Dirichlet problem.
        initial: ``"harmonic"`` (harmonic extension of the boundary data),
            ``"zero"`` or an array of shape (l, *grid.shape).
        on_progress: optional sync/async callback receiving event dicts.
        logging (bool): Enable logging. Defaults to True.

    Returns:
        TodaSolution with ``converged=True``.

    Raises:
        ConvergenceError: if max_iter passes or the damping floor are reached;
            ``.solution`` holds the best iterate.
    """
    tol = SolverDefaults.TOL if problem.tol is None else problem.tol
    max_iter = SolverDefaults.MAX_ITER if problem.max_iter is None else problem.max_iter
    grid = problem.grid
    interior = ~grid.boundary_mask
    xi, guess = _initial(problem, initial, logging)

    emit(on_progress, {"event": "solve_started", "grid": grid.kind, "unknowns": int(interior.sum()) * problem.rs.rank,
                       "t": problem.t}, logging)
    if logging:
        Logger.note(f"🚀 Newton solve on {grid.kind} {grid.shape}, t = {problem.t}, initial guess: {guess}")

    residuals, steps = [], []
    best_xi, best_residual, floor = xi.copy(), np.inf, 0.0

    def solution(converged: bool) -> TodaSolution:
        return TodaSolution(problem=problem, xi=best_xi, residual_history=tuple(residuals), step_history=tuple(steps),
                            residual=float(best_residual), iterations=len(residuals), converged=converged,
                            initial_guess=guess, roundoff_floor=floor)

    for iteration in range(1, max_iter + 1):
        residual = sup_residual(problem, xi)
        residuals.append(residual)
        if not np.isfinite(residual):
            raise NumericError("Residual became non-finite")
        current_floor = roundoff_floor(problem, xi)
        if residual < best_residual:
            best_xi, best_residual, floor = xi.copy(), residual, current_floor
        if residual <= tol:
            break
        if residual <= SolverDefaults.ROUNDOFF_FACTOR * current_floor:
            if logging:
                Logger.note(f"  residual {residual:.3e} is at the rounding floor {current_floor:.3e}; stopping")
            break

        f = newton_system(problem, xi)
        f_norm = float(np.linalg.norm(f))
        jacobian = newton_jacobian(problem, xi)
        delta = _pcg(-jacobian, f, logging).reshape(problem.rs.rank, -1)

        step = 1.0
        while True:
            trial = xi.copy()
            trial[:, interior] += step * delta
            with np.errstate(over="ignore", invalid="ignore"):
                trial_norm = float(np.linalg.norm(newton_system(problem, trial)))
            if np.isfinite(trial_norm) and trial_norm <= (1.0 - SolverDefaults.ARMIJO_C * step) * f_norm:
                break
            step /= 2.0
            if step < SolverDefaults.DAMPING_FLOOR:
                emit(on_progress, {"event": "solve_done", "converged": False, "iterations": len(residuals),
                                   "residual": float(best_residual)}, logging)
                raise ConvergenceError(f"Damping floor reached after {len(residuals)} iterations "
                                       f"(residual {best_residual:.3e})", solution(False))
        xi = trial
        steps.append(step)
        emit(on_progress, {"event": "newton_step", "iteration": iteration, "residual": residual, "step": step}, logging)
        if logging:
            Logger.note(f"  iteration {iteration}: residual {residual:.3e}, step {step:g}")
    else:
        emit(on_progress, {"event": "solve_done", "converged": False, "iterations": len(residuals),
                           "residual": float(best_residual)}, logging)
        raise ConvergenceError(f"No convergence in {max_iter} iterations (residual {best_residual:.3e})", solution(False))

    emit(on_progress, {"event": "solve_done", "converged": True, "iterations": len(residuals),
                       "residual": float(best_residual)}, logging)
    if logging:
        Logger.note(f"✓ Converged in {len(residuals)} iterations, residual {best_residual:.3e}")
    return solution(True)


def radial_problem(problem: TodaProblem) -> TodaProblem:
    """Reduce an S^1-symmetric annulus problem to the ODE in s = log|z|.

    Raises:
        InputError: if the Higgs coefficients are not monomials or the boundary
            data depends on the angle.
    """
    if not problem.higgs.is_monomial:
        raise InputError("Radial reduction needs monomial Higgs coefficients")
    grid = problem.grid
    if isinstance(grid, RadialGrid):
        return problem
    if not isinstance(grid, AnnulusGrid):
        raise InputError(f"Radial reduction needs an annulus, got {grid.kind}")
    ends = problem.boundary[:, [0, -1], :]
    if np.max(np.abs(ends - ends[..., :1])) > 1e-12:
        raise InputError("Boundary data on the annulus is not S^1-invariant")
    radial = grid.radial()
    boundary = np.zeros((problem.rs.rank, radial.ns))
    boundary[:, 0] = ends[:, 0, 0]
    boundary[:, -1] = ends[:, 1, 0]
    return problem.with_grid(radial, boundary)


def solve_radial(problem: TodaProblem, initial: Union[str, np.ndarray] = "harmonic",
                 on_progress: Optional[Callable] = None,
                 logging: bool = SolverDefaults.LOGGING) -> TodaSolution:
    """Solve the S^1-symmetric problem as a two-point boundary value problem in s.

    The ODE is xi'' = 2 t^2 sum |c_phi|^2 e^{2(k_phi+1)s} e^{2 phi(xi)} phi^#.
    """
    return solve_dirichlet(radial_problem(problem), initial=initial, on_progress=on_progress, logging=logging)


def extend_radial(solution: TodaSolution, grid: AnnulusGrid) -> np.ndarray:
    """Broadcast a radial xi over the angular nodes of ``grid``."""
    if solution.xi.shape[1] != grid.ns:
        raise InputError(f"Radial solution has {solution.xi.shape[1]} nodes, annulus has {grid.ns}")
    return np.repeat(solution.xi[:, :, None], grid.ntheta, axis=2)
