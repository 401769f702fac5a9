"""cyclichiggs - Cyclic Higgs bundles, Kostant's split automorphism and Toda solvers.

Exact root data and a normalized Chevalley basis for every simple type,
the split automorphism Ad(w) with its cyclic elements, sl2-triples of
subsets of Pi^Q, and damped Newton solvers for the torus-reduced Hitchin
equation on rectangles and annuli.

Example:
    >>> from cyclichiggs import build_lie_algebra, build_root_system, parse_type
    >>> from cyclichiggs import CyclicElement, canonical_xi
    >>>
    >>> rs = build_root_system(parse_type("A2"))
    >>> lie = build_lie_algebra(rs, logging=False)
    >>> xi = canonical_xi(lie, CyclicElement(rs, (1.0, 1.0, 2.0)))
"""

from .chevalley import (
    CartanInvolution,
    GElement,
    LieAlgebra,
    ad_matrix,
    bracket,
    build_lie_algebra,
    cartan_involution,
    eigen_norm_gap,
    hermitian_metric,
    killing,
    verify,
)
from .config import SolverDefaults
from .errors import ConvergenceError, CyclicHiggsError, InputError, NumericError, VerificationError
from .rootsys import RootSystem, SimpleType, build_root_system, grading_piece, parse_type, weight_one_eigenroots
from .sl2 import SL2Triple, compute_u_S, compute_v_S
from .split import (
    ClassificationRegion,
    CyclicElement,
    SplitAutomorphism,
    bracket_rho_closed_form,
    classification_region,
    eigenspace_decomposition,
    is_cyclic,
    is_regular_semisimple,
    o_invariant,
    split_automorphism,
    verify_split,
)
from .toda import (
    AnnulusGrid,
    HiggsCoefficient,
    RadialGrid,
    RectangleGrid,
    TodaProblem,
    TodaSolution,
    asymptotic_slope,
    canonical_xi,
    decay_study,
    model_metric,
    solve_dirichlet,
    solve_radial,
    toda_residual,
)

__version__ = "0.1.1"
__all__ = [
    "AnnulusGrid",
    "CartanInvolution",
    "ClassificationRegion",
    "ConvergenceError",
    "CyclicElement",
    "CyclicHiggsError",
    "GElement",
    "HiggsCoefficient",
    "InputError",
    "LieAlgebra",
    "NumericError",
    "RadialGrid",
    "RectangleGrid",
    "RootSystem",
    "SL2Triple",
    "SimpleType",
    "SolverDefaults",
    "SplitAutomorphism",
    "TodaProblem",
    "TodaSolution",
    "VerificationError",
    "ad_matrix",
    "asymptotic_slope",
    "bracket",
    "bracket_rho_closed_form",
    "build_lie_algebra",
    "build_root_system",
    "canonical_xi",
    "cartan_involution",
    "classification_region",
    "compute_u_S",
    "compute_v_S",
    "decay_study",
    "eigen_norm_gap",
    "eigenspace_decomposition",
    "grading_piece",
    "hermitian_metric",
    "is_cyclic",
    "is_regular_semisimple",
    "killing",
    "model_metric",
    "o_invariant",
    "parse_type",
    "solve_dirichlet",
    "solve_radial",
    "split_automorphism",
    "toda_residual",
    "verify",
    "verify_split",
    "weight_one_eigenroots",
]
