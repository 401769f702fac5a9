"""Tests for canonical decoupled metrics, model metrics and slope fits."""

import math

import numpy as np

from cyclichiggs import (
    AnnulusGrid,
    CyclicElement,
    InputError,
    RadialGrid,
    RectangleGrid,
    SolverDefaults,
    asymptotic_slope,
    build_lie_algebra,
    build_root_system,
    canonical_xi,
    classification_region,
    model_metric,
    parse_type,
    solve_dirichlet,
    solve_radial,
)
from cyclichiggs.toda import (
    HiggsCoefficient,
    TodaProblem,
    canonical_xi_field,
    constant_boundary,
    convergence_orders,
    fit_slope,
    model_convergence,
    model_metric_data,
    model_problem,
    root_norm_squared,
)
from cyclichiggs.toda.model import decoupling_error


def _lie(name):
    return build_lie_algebra(build_root_system(parse_type(name)), logging=False)


def test_canonical_xi_values():
    """A1 with b = (2, 1) gives alpha(xi) = -log(2)/2; unit data gives 0."""
    lie = _lie("A1")
    assert np.allclose(canonical_xi(lie, CyclicElement(lie.rs, (2.0, 1.0))), [-0.5 * math.log(2.0)])
    assert np.allclose(canonical_xi(lie, [1.0, 1.0]), [0.0])
    assert np.allclose(canonical_xi(_lie("A2"), [1.0, 1.0, 1.0]), [0.0, 0.0])
    print("✅ canonical xi values")


def test_canonical_xi_decouples():
    """|b_i|^2 e^{2 alpha_i(xi)} = psi_i |b_-psi|^2 e^{-2 psi(xi)} for random cyclic data."""
    rng = np.random.default_rng(21)
    for name in ("A3", "B3", "G2", "F4"):
        lie = _lie(name)
        u = CyclicElement.random(lie.rs, rng)
        xi = canonical_xi(lie, u)
        assert decoupling_error(lie.rs, [complex(v) for v in u.b], xi) <= 1e-12
        # phases do not matter
        rotated = CyclicElement(lie.rs, tuple(abs(complex(v)) for v in u.b))
        assert np.allclose(canonical_xi(lie.rs, rotated), xi)
    print("✅ canonical xi decouples")


def test_canonical_xi_rejects_non_cyclic():
    """A zero coefficient is an input error."""
    lie = _lie("A2")
    try:
        canonical_xi(lie, [1.0, 0.0, 1.0])
        raise AssertionError("Non-cyclic data should raise")
    except InputError:
        pass
    print("✅ canonical xi rejects non-cyclic data")


def test_canonical_xi_field():
    """For constant data the pointwise field is the constant canonical metric."""
    lie = _lie("A2")
    b = [1.0, 2.0, 0.5]
    grid = RectangleGrid((-1.0, 1.0), (-1.0, 1.0), 5, 5)
    problem = TodaProblem(lie=lie, grid=grid, higgs=HiggsCoefficient.constant(lie.rs, b),
                          boundary=constant_boundary(grid, [0.0, 0.0]))
    field = canonical_xi_field(problem)
    assert np.allclose(field, constant_boundary(grid, canonical_xi(lie, b)))
    print("✅ canonical xi field")


def test_model_metric_norms():
    """|e_phi|_h^2 = |z|^{-2 beta(phi)} (-log|z|^{2t})^{-2} on S."""
    lie = _lie("A2")
    model = model_metric_data(lie, [1.0, 0.0], "alpha_1", [1], 0.7, logging=False)
    for radius in (0.05, 0.25, 0.6):
        assert max(model.norm_errors(radius)) <= 1e-12
    radii = np.array([0.1, 0.3])
    assert np.allclose(model.log_norm_gaps(radii)[0], -np.log(-2.0 * 0.7 * np.log(radii)))
    higgs = model.higgs()
    assert higgs.exponents() == [0, None, None]
    assert model.to_dict() == {"kind": "model", "subset": ["alpha_1"], "beta": [1.0, 0.0], "m": [1]}
    print("✅ model metric norms")


def test_model_metric_validation():
    """beta must match m on S, t must be positive and the radius must lie in (0, 1)."""
    lie = _lie("A1")
    grid = AnnulusGrid.from_radii(0.1, 0.5, 9, 4)
    for bad in (lambda: model_metric_data(lie, [0.5], "alpha_1", [0], 1.0, logging=False),
                lambda: model_metric_data(lie, [0.0], "alpha_1", [0], 0.0, logging=False),
                lambda: model_metric_data(lie, [0.0, 1.0], "alpha_1", [0], 1.0, logging=False),
                lambda: model_metric_data(lie, [0.0], "alpha_1", [0, 1], 1.0, logging=False),
                lambda: model_metric(lie, [0.0], "alpha_1", [0], 1.0, AnnulusGrid.from_radii(0.5, 1.5, 9, 4),
                                     logging=False)):
        try:
            bad()
            raise AssertionError("Invalid model metric should raise")
        except InputError:
            pass
    xi = model_metric(lie, [0.0], "alpha_1", [0], 1.0, grid, logging=False)
    assert xi.shape == (1, 9, 4)
    assert np.all(xi == xi[:, :, :1])
    print("✅ model metric validation")


def test_model_convergence_second_order():
    """The closed form solves the discrete equation up to O(h^2)."""
    lie = _lie("A1")
    model = model_metric_data(lie, [0.0], "alpha_1", [0], 1.0, logging=False)
    study = model_convergence(model, AnnulusGrid.from_radii(0.1, 0.5, 33, 8), levels=3, logging=False)
    assert len(study["residuals"]) == 3
    assert study["residuals"][0] > study["residuals"][1] > study["residuals"][2]
    assert all(1.8 <= q <= 2.2 for q in study["orders"]), study["orders"]
    assert study["grids"][-1]["ns"] == 129
    print(f"✅ model convergence orders {study['orders']}")


def test_model_convergence_radial_a2():
    """Orders stay near 2 for an A2 model with m = 1 on a radial grid."""
    lie = _lie("A2")
    model = model_metric_data(lie, [1.0, 0.0], "alpha_1", [1], 1.0, logging=False)
    study = model_convergence(model, RadialGrid((math.log(0.1), math.log(0.5)), 33), levels=3, logging=False)
    assert all(1.8 <= q <= 2.2 for q in study["orders"]), study["orders"]
    print(f"✅ radial A2 model convergence orders {study['orders']}")


def test_model_convergence_a2_annulus():
    """A2 models with beta = 0 and beta = (-1, -1) converge at second order from 64 to 256 angular nodes."""
    lie = _lie("A2")
    for beta, subset, m in (([0.0, 0.0], "alpha_1", [0]), ([-1.0, -1.0], "alpha_1,alpha_2", [-1, -1])):
        model = model_metric_data(lie, beta, subset, m, 1.0, logging=False)
        study = model_convergence(model, AnnulusGrid.from_radii(0.1, 0.5, 65, 64), levels=3, logging=False)
        assert all(1.8 <= q <= 2.2 for q in study["orders"]), (beta, study["orders"])
        assert study["grids"][-1]["ntheta"] == 256
        print(f"✅ A2 model beta = {beta} orders {study['orders']}")


def test_convergence_orders():
    """Halving the error quarters it: order 2."""
    assert convergence_orders([1.0, 0.25, 0.0625]) == [2.0, 2.0]
    assert math.isnan(convergence_orders([1.0, 0.0])[0])
    print("✅ convergence orders")


def test_fit_slope_synthetic():
    """Exact data in the basis s, 1, log(-s) is recovered."""
    s = np.linspace(-6.0, -1.0, 41)
    beta, c, gamma = np.array([0.5, -0.25]), np.array([1.0, 2.0]), np.array([1.0, 0.5])
    xi = -(np.outer(beta, s) + c[:, None] + np.outer(gamma, np.log(-s)))
    fit = fit_slope(s, xi)
    assert np.allclose(fit.beta, beta) and np.allclose(fit.gamma, gamma) and np.allclose(fit.intercept, c)
    assert fit.nodes == 41 and fit.rms < 1e-10

    linear = fit_slope(s, -(np.outer(beta, s) + c[:, None]), window=(-4.0, -2.0), loglog=False)
    assert np.allclose(linear.beta, beta)
    assert linear.gamma == (0.0, 0.0)
    assert linear.nodes == 17
    print("✅ fit_slope on synthetic data")


def test_fit_slope_validation():
    """Small windows and non-negative s with the log-log term are rejected."""
    s = np.linspace(-1.0, 1.0, 21)
    xi = np.zeros((1, 21))
    for bad in (lambda: fit_slope(s, xi, window=(-1.0, -0.75)),
                lambda: fit_slope(s, xi),
                lambda: fit_slope(s, xi, window=(0.5, -0.5))):
        try:
            bad()
            raise AssertionError("Invalid slope fit should raise")
        except InputError:
            pass
    assert fit_slope(s, xi, loglog=False).nodes == 21
    print("✅ fit_slope validation")


def test_asymptotic_slope_recovers_beta():
    """Solving the model problem and fitting recovers beta = 0 and gamma = u_S = 1."""
    lie = _lie("A1")
    problem = model_problem(lie, [0.0], "alpha_1", [0], 1.0, AnnulusGrid.from_radii(0.05, 0.5, 129, 4),
                            logging=False)
    solution = solve_radial(problem, logging=False)
    fit = asymptotic_slope(solution)
    assert abs(fit.beta[0]) < 0.05, fit
    assert abs(fit.gamma[0] - 1.0) < 0.05, fit

    # near r = 0.05 rounding alone keeps the annulus residual above 1e-10
    on_annulus = solve_dirichlet(problem, logging=False)
    assert on_annulus.converged
    assert on_annulus.roundoff_floor > SolverDefaults.TOL
    assert on_annulus.residual <= 1e-8, on_annulus.summary()
    assert np.allclose(asymptotic_slope(on_annulus).beta, fit.beta, atol=1e-6)
    print(f"✅ asymptotic slope beta = {fit.beta[0]:.4f}")


def test_slope_round_trip_a2():
    """beta = (-1, -1) is recovered on s in [-6, -4] and lies in the classification region."""
    lie = _lie("A2")
    model = model_metric_data(lie, [-1.0, -1.0], "alpha_1,alpha_2", [-1, -1], 1.0, logging=False)
    problem = model.problem(AnnulusGrid((-7.0, math.log(0.5)), 129, 4))
    solution = solve_radial(problem, logging=False)
    fit = asymptotic_slope(solution, window=(-6.0, -4.0))
    assert np.allclose(fit.beta, [-1.0, -1.0], atol=0.05), fit
    region = classification_region(lie.rs, problem.higgs.o_order() or 0)
    assert region.contains(fit.beta)

    on_annulus = solve_dirichlet(problem, logging=False)
    assert on_annulus.converged
    assert np.allclose(asymptotic_slope(on_annulus, window=(-6.0, -4.0)).beta, fit.beta, atol=1e-6)
    print(f"✅ A2 slope round trip beta = {fit.beta}")


def test_asymptotic_slope_needs_annulus():
    """Rectangle solutions have no puncture to fit."""
    lie = _lie("A1")
    grid = RectangleGrid((-1.0, 1.0), (-1.0, 1.0), 5, 5)
    problem = TodaProblem(lie=lie, grid=grid, higgs=HiggsCoefficient.constant(lie.rs, [1.0, 1.0]),
                          boundary=constant_boundary(grid, [0.0]))
    solution = solve_dirichlet(problem, logging=False)
    try:
        asymptotic_slope(solution)
        raise AssertionError("Rectangle solution should raise")
    except InputError:
        pass
    print("✅ asymptotic slope needs an annulus")


def test_root_norm_squared():
    """|e_phi|^2 = exp(2 phi(xi)) with phi given by its coefficients."""
    xi = np.array([0.1, -0.3])
    assert np.isclose(root_norm_squared(build_root_system(parse_type("A2")), xi, (1, 1)), math.exp(2 * (0.1 - 0.3)))
    print("✅ root norm squared")


def main():
    test_canonical_xi_values()
    test_canonical_xi_decouples()
    test_canonical_xi_rejects_non_cyclic()
    test_canonical_xi_field()
    test_model_metric_norms()
    test_model_metric_validation()
    test_model_convergence_second_order()
    test_model_convergence_radial_a2()
    test_model_convergence_a2_annulus()
    test_convergence_orders()
    test_fit_slope_synthetic()
    test_fit_slope_validation()
    test_asymptotic_slope_recovers_beta()
    test_slope_round_trip_a2()
    test_asymptotic_slope_needs_annulus()
    test_root_norm_squared()
    print("\n🎉 All model metric tests passed!")


if __name__ == "__main__":
    main()
