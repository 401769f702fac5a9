"""Tests for the damped Newton Dirichlet solver."""

import asyncio

import numpy as np

from cyclichiggs import (
    ConvergenceError,
    CyclicElement,
    HiggsCoefficient,
    InputError,
    RectangleGrid,
    TodaProblem,
    build_lie_algebra,
    build_root_system,
    canonical_xi,
    parse_type,
    solve_dirichlet,
)
from cyclichiggs.toda import constant_boundary, function_boundary, harmonic_extension, sup_residual


def _lie(name):
    return build_lie_algebra(build_root_system(parse_type(name)), logging=False)


def _a1_problem(delta=0.3, t=1.0, nodes=17, max_iter=None):
    lie = _lie("A1")
    b = CyclicElement(lie.rs, (1.0, 1.0))
    grid = RectangleGrid((-1.0, 1.0), (-1.0, 1.0), nodes, nodes)
    return TodaProblem(lie=lie, grid=grid, higgs=HiggsCoefficient.from_cyclic(b),
                       boundary=constant_boundary(grid, canonical_xi(lie, b) + delta), t=t, max_iter=max_iter)


def test_perturbed_canonical_a1():
    """Boundary xi_can + 0.3 converges with the solution between 0 and 0.3."""
    problem = _a1_problem()
    solution = solve_dirichlet(problem, logging=False)
    assert solution.converged
    assert solution.residual <= 1e-10
    assert sup_residual(problem, solution.xi) <= 1e-10
    assert 1 < solution.iterations <= 20
    assert np.all(solution.xi >= -1e-12) and np.all(solution.xi <= 0.3 + 1e-12)
    assert np.all(solution.xi[:, problem.grid.boundary_mask] == 0.3)
    assert solution.residual_history[-1] == solution.residual
    assert all(0 < step <= 1 for step in solution.step_history)
    print(f"✅ perturbed canonical A1 in {solution.iterations} iterations")


def test_fixed_point_converges_immediately():
    """Boundary xi_can: the harmonic guess already solves the problem."""
    solution = solve_dirichlet(_a1_problem(delta=0.0), logging=False)
    assert solution.converged
    assert solution.iterations == 1
    assert solution.step_history == ()
    assert np.all(solution.xi == 0.0)
    print("✅ fixed point converges immediately")


def test_zero_scale_is_harmonic():
    """With t = 0 the equation is Laplace's and the solution is the harmonic extension."""
    lie = _lie("A2")
    grid = RectangleGrid((0.0, 1.0), (0.0, 1.0), 13, 13)
    boundary = function_boundary(grid, lambda x, y: np.stack([x * y, np.cos(x) - y]))
    problem = TodaProblem(lie=lie, grid=grid, higgs=HiggsCoefficient.constant(lie.rs, [1.0, 1.0, 1.0]),
                          boundary=boundary, t=0.0)
    solution = solve_dirichlet(problem, logging=False)
    assert solution.converged
    harmonic = harmonic_extension(problem, logging=False)
    assert np.allclose(solution.xi, harmonic, atol=1e-9)
    # x * y is discretely harmonic
    x, y = grid.coordinates
    assert np.allclose(solution.xi[0], x * y, atol=1e-9)
    print("✅ zero scale gives the harmonic extension")


def test_a2_nonconstant_boundary():
    """A2 with non-constant boundary data converges from both initial guesses."""
    lie = _lie("A2")
    b = CyclicElement(lie.rs, (1.0, 0.8, 1.2))
    grid = RectangleGrid((-1.0, 1.0), (-1.0, 1.0), 13, 13)
    xi_can = canonical_xi(lie, b)
    boundary = function_boundary(grid, lambda x, y: np.stack([xi_can[0] + 0.3 * x, xi_can[1] - 0.2 * y * y]))
    problem = TodaProblem(lie=lie, grid=grid, higgs=HiggsCoefficient.from_cyclic(b), boundary=boundary, t=1.0)
    harmonic = solve_dirichlet(problem, initial="harmonic", logging=False)
    zero = solve_dirichlet(problem, initial="zero", logging=False)
    assert harmonic.converged and zero.converged
    assert zero.initial_guess == "zero"
    assert np.allclose(harmonic.xi, zero.xi, atol=1e-9)

    given = solve_dirichlet(problem, initial=harmonic.xi, logging=False)
    assert given.initial_guess == "given"
    assert given.iterations == 1
    print("✅ A2 with non-constant boundary data")


def test_iteration_cap_raises_with_best_iterate():
    """Running out of iterations raises ConvergenceError carrying the best iterate."""
    problem = _a1_problem(delta=1.0, t=2.0, max_iter=2)
    try:
        solve_dirichlet(problem, logging=False)
        raise AssertionError("Expected ConvergenceError")
    except ConvergenceError as e:
        best = e.solution
        assert best.converged is False
        assert best.iterations == 2
        assert best.residual == min(best.residual_history)
        assert best.xi.shape == (1, 17, 17)
    print("✅ iteration cap raises with best iterate")


def test_invalid_initial_guess():
    """Unknown guess names and wrong shapes are input errors."""
    problem = _a1_problem()
    for initial in ("random", np.zeros((2, 17, 17))):
        try:
            solve_dirichlet(problem, initial=initial, logging=False)
            raise AssertionError("Invalid initial guess should raise")
        except InputError:
            pass
    print("✅ invalid initial guess")


def test_progress_events_sync():
    """on_progress receives solve_started, newton_step and solve_done, each with ts."""
    events = []
    solve_dirichlet(_a1_problem(), on_progress=lambda e: events.append(e), logging=False)
    names = [e["event"] for e in events]
    assert names[0] == "solve_started"
    assert names[-1] == "solve_done"
    assert "newton_step" in names
    assert events[-1]["converged"] is True
    assert all("ts" in e for e in events)
    print(f"✅ progress events: {names}")


def test_progress_events_async_callback():
    """Coroutine callbacks run to completion from the synchronous solver."""
    events = []

    async def cb(e):
        await asyncio.sleep(0)
        events.append(e["event"])

    solve_dirichlet(_a1_problem(), on_progress=cb, logging=False)
    assert events[0] == "solve_started" and events[-1] == "solve_done"
    print("✅ async progress callback")


def test_progress_error_swallowed():
    """A failing callback does not stop the solve."""
    def bad_callback(e):
        raise ValueError("callback error!")

    solution = solve_dirichlet(_a1_problem(), on_progress=bad_callback, logging=True)
    assert solution.converged
    print("✅ on_progress error swallowed")


def test_solution_rows():
    """CSV rows hold the coordinates followed by the components of xi."""
    solution = solve_dirichlet(_a1_problem(nodes=5), logging=False)
    assert solution.header() == ["x", "y", "xi_1"]
    rows = solution.rows()
    assert len(rows) == 25
    assert rows[0][:2] == [-1.0, -1.0]
    assert solution.summary()["converged"] is True
    print("✅ solution rows")


def main():
    test_perturbed_canonical_a1()
    test_fixed_point_converges_immediately()
    test_zero_scale_is_harmonic()
    test_a2_nonconstant_boundary()
    test_iteration_cap_raises_with_best_iterate()
    test_invalid_initial_guess()
    test_progress_events_sync()
    test_progress_events_async_callback()
    test_progress_error_swallowed()
    test_solution_rows()
    print("\n🎉 All Dirichlet solver tests passed!")


if __name__ == "__main__":
    main()
