"""Torus-reduced Hitchin equation (Toda system) solvers and certifiers."""

from .decay import DecayFit, DecayStudy, decay_study, decay_study_async, fit_decay, killing_distance
from .grids import AnnulusGrid, RadialGrid, RectangleGrid, grid_from_dict
from .model import (
    ModelMetric,
    SlopeFit,
    asymptotic_slope,
    canonical_xi,
    canonical_xi_field,
    convergence_orders,
    fit_slope,
    model_convergence,
    model_metric,
    model_metric_data,
    model_problem,
    root_norm_squared,
)
from .problem import (
    HiggsCoefficient,
    LaurentTerm,
    TodaProblem,
    TodaSolution,
    constant_boundary,
    function_boundary,
    homogeneous_higgs,
)
from .solver import (
    extend_radial,
    harmonic_extension,
    newton_jacobian,
    newton_system,
    radial_problem,
    roundoff_floor,
    solve_dirichlet,
    solve_radial,
    sup_residual,
    toda_residual,
)
