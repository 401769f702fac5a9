"""Tests for SolverDefaults: runtime modification and propagation."""

import os
import shutil

TEST_CACHE_DIR = "data/test_defaults"

from cyclichiggs import (
    ConvergenceError,
    CyclicElement,
    HiggsCoefficient,
    RectangleGrid,
    SolverDefaults,
    TodaProblem,
    build_lie_algebra,
    build_root_system,
    canonical_xi,
    parse_type,
    solve_dirichlet,
)
from cyclichiggs.cache import SolveCache
from cyclichiggs.toda import constant_boundary


def cleanup():
    if os.path.exists(TEST_CACHE_DIR):
        shutil.rmtree(TEST_CACHE_DIR)


def _perturbed_problem(max_iter=None):
    lie = build_lie_algebra(build_root_system(parse_type("A1")), logging=False)
    b = CyclicElement(lie.rs, (1.0, 1.0))
    grid = RectangleGrid((-1.0, 1.0), (-1.0, 1.0), 9, 9)
    boundary = constant_boundary(grid, canonical_xi(lie, b) + 0.4)
    return TodaProblem(lie=lie, grid=grid, higgs=HiggsCoefficient.from_cyclic(b), boundary=boundary,
                       t=1.0, max_iter=max_iter)


def test_default_values():
    """Verify all documented defaults exist and have correct values."""
    assert SolverDefaults.TOL == 1e-10
    assert SolverDefaults.MAX_ITER == 50
    assert SolverDefaults.ARMIJO_C == 1e-4
    assert SolverDefaults.DAMPING_FLOOR == 2.0 ** -20
    assert SolverDefaults.ROUNDOFF_FACTOR == 4.0
    assert SolverDefaults.CG_RTOL == 1e-12
    assert SolverDefaults.CG_MAXITER == 20000
    assert SolverDefaults.RANK_TOL == 1e-8
    assert SolverDefaults.RANK_MARGIN == 1e3
    assert SolverDefaults.EIGVEC_COND_MAX == 1e10
    assert SolverDefaults.IDENTITY_TOL == 1e-12
    assert SolverDefaults.MAX_WORKERS == 4
    assert SolverDefaults.CACHE_TTL == 30
    assert SolverDefaults.CACHE_DIRECTORY == "data/cyclichiggs"
    assert SolverDefaults.FLOAT_DIGITS == 17
    assert SolverDefaults.SEED == 0
    assert SolverDefaults.LOGGING is True
    print("✅ all default values correct")


def test_runtime_modification():
    """CACHE_DIRECTORY is read when the cache is created, so runtime changes propagate."""
    original_dir = SolverDefaults.CACHE_DIRECTORY

    try:
        SolverDefaults.CACHE_DIRECTORY = TEST_CACHE_DIR

        cache = SolveCache("toda-runtime", logging=False)
        assert cache._directory == TEST_CACHE_DIR
        print("✅ runtime modification propagates (CACHE_DIRECTORY)")
    finally:
        SolverDefaults.CACHE_DIRECTORY = original_dir


def test_max_iter_read_at_solve_time():
    """MAX_ITER is resolved when solve_dirichlet starts."""
    original = SolverDefaults.MAX_ITER
    try:
        SolverDefaults.MAX_ITER = 1
        try:
            solve_dirichlet(_perturbed_problem(), logging=False)
            raise AssertionError("Expected ConvergenceError with MAX_ITER = 1")
        except ConvergenceError as e:
            assert e.solution is not None
            assert e.solution.converged is False
            assert e.solution.iterations == 1
        print("✅ MAX_ITER read at solve time")
    finally:
        SolverDefaults.MAX_ITER = original


def test_explicit_params_override_defaults():
    """A problem's own max_iter wins over SolverDefaults.MAX_ITER."""
    original = SolverDefaults.MAX_ITER
    try:
        SolverDefaults.MAX_ITER = 1
        solution = solve_dirichlet(_perturbed_problem(max_iter=50), logging=False)
        assert solution.converged
        assert solution.iterations > 1
        print("✅ explicit max_iter overrides default")
    finally:
        SolverDefaults.MAX_ITER = original


def test_explicit_cache_directory():
    """An explicit directory wins over SolverDefaults.CACHE_DIRECTORY."""
    cleanup()
    cache = SolveCache("toda-explicit", directory=TEST_CACHE_DIR, ttl=3, logging=False)
    assert cache._directory == TEST_CACHE_DIR
    assert cache._ttl == 3
    print("✅ explicit cache directory and ttl")


def main():
    cleanup()
    try:
        test_default_values()
        test_runtime_modification()
        test_max_iter_read_at_solve_time()
        test_explicit_params_override_defaults()
        test_explicit_cache_directory()
    finally:
        cleanup()
    print("\n🎉 All defaults tests passed!")


if __name__ == "__main__":
    main()
