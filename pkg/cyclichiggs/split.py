"""Kostant's split automorphism sigma = Ad(w), cyclic elements and classification regions."""

import cmath
import dataclasses
import functools
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from logorator import Logger

from .chevalley import CartanInvolution, GElement, LieAlgebra, ad_matrix, bracket
from .config import SolverDefaults
from .errors import InputError, NumericError
from .rootsys import RootSystem, weight_one_eigenroots


@dataclasses.dataclass(frozen=True, eq=False)
class SplitAutomorphism:
    """sigma = Ad(exp(2 pi i x0 / (h+1))), acting by omega^j on g^(j) and trivially on t."""

    lie: LieAlgebra

    @property
    def modulus(self) -> int:
        return self.lie.rs.h + 1

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * math.pi / self.modulus)

    @functools.cached_property
    def labels(self) -> np.ndarray:
        """Eigenspace label j mod (h+1) of every basis element."""
        return np.mod(self.lie.heights, self.modulus)

    @functools.cached_property
    def action(self) -> np.ndarray:
        return np.diag(self.omega ** self.labels)

    def order(self) -> int:
        """Smallest n >= 1 with sigma^n = id."""
        power = np.eye(self.lie.dim, dtype=complex)
        for n in range(1, 2 * self.modulus + 1):
            power = power @ self.action
            if np.allclose(power, np.eye(self.lie.dim), atol=1e-12):
                return n
        raise NumericError(f"sigma has no order up to {2 * self.modulus}")


def split_automorphism(lie: LieAlgebra) -> SplitAutomorphism:
    return SplitAutomorphism(lie)


@dataclasses.dataclass(frozen=True)
class EigenspaceDecomposition:
    """Basis indices of each g_l, l in Z/(h+1)."""

    pieces: Dict[int, Tuple[int, ...]]
    bracket_compatible: bool

    @property
    def dims(self) -> Dict[int, int]:
        return {label: len(indices) for label, indices in self.pieces.items()}


def eigenspace_decomposition(sigma: SplitAutomorphism) -> EigenspaceDecomposition:
    """Split g into the eigenspaces of sigma and check [g_k, g_l] in g_{k+l} on basis pairs."""
    labels = sigma.labels
    pieces = {label: tuple(int(k) for k in np.flatnonzero(labels == label)) for label in range(sigma.modulus)}
    compatible = all(
        labels[k] == (labels[i] + labels[j]) % sigma.modulus
        for (i, j), row in sigma.lie.structure_constants.items()
        for k, c in row.items()
        if c != 0
    )
    return EigenspaceDecomposition(pieces=pieces, bracket_compatible=compatible)


@dataclasses.dataclass(frozen=True, eq=False)
class CyclicElement:
    """u = sum b_i e_{alpha_i} + b_-psi e_-psi in g_1.

    Coefficients are stored in Pi^Q order (alpha_1, ..., alpha_l, -psi) and
    may be complex floats or exact sympy numbers.
    """

    rs: RootSystem
    b: Tuple

    def __post_init__(self):
        if len(self.b) != self.rs.rank + 1:
            raise InputError(f"{self.rs} needs {self.rs.rank + 1} coefficients, got {len(self.b)}")

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, sympy.Basic)) for v in self.b)

    @property
    def b_minus_psi(self):
        return self.b[-1]

    @classmethod
    def from_normalized(cls, rs: RootSystem, c: Sequence) -> "CyclicElement":
        """Build u = sum c_i psi_i^(1/2) e_{alpha_i} + c_-psi e_-psi."""
        if len(c) != rs.rank + 1:
            raise InputError(f"{rs} needs {rs.rank + 1} coefficients, got {len(c)}")
        if all(isinstance(v, (int, sympy.Basic)) for v in c):
            b = [sympy.sympify(c[i]) * sympy.sqrt(p) for i, p in enumerate(rs.psi_coefficients)]
        else:
            b = [complex(c[i]) * math.sqrt(p) for i, p in enumerate(rs.psi_coefficients)]
        return cls(rs, tuple(b) + (c[-1],))

    @classmethod
    def from_labels(cls, rs: RootSystem, mapping: Dict[str, complex]) -> "CyclicElement":
        unknown = set(mapping) - set(rs.labels)
        if unknown:
            raise InputError(f"Unknown labels {sorted(unknown)} for {rs}")
        return cls(rs, tuple(mapping.get(label, 0) for label in rs.labels))

    @classmethod
    def random(cls, rs: RootSystem, rng: np.random.Generator, zeros: Sequence[int] = ()) -> "CyclicElement":
        """Random element with moduli in [0.5, 2] and uniform phases; indices in ``zeros`` are set to 0."""
        moduli = rng.uniform(0.5, 2.0, rs.rank + 1)
        phases = rng.uniform(0.0, 2 * math.pi, rs.rank + 1)
        b = moduli * np.exp(1j * phases)
        b[list(zeros)] = 0
        return cls(rs, tuple(complex(v) for v in b))

    def normalized(self) -> Tuple:
        """c_i = b_i / psi_i^(1/2), c_-psi = b_-psi."""
        if self.exact:
            return tuple(v / sympy.sqrt(p) for v, p in zip(self.b, self.rs.psi_coefficients)) + (self.b[-1],)
        return tuple(complex(v) / math.sqrt(p) for v, p in zip(self.b, self.rs.psi_coefficients)) + (complex(self.b[-1]),)

    def to_gelement(self, lie: LieAlgebra) -> GElement:
        exact = self.exact
        u = lie.zero(exact)
        for root, value in zip(weight_one_eigenroots(self.rs), self.b):
            u.coefficients[lie.index(root)] = sympy.sympify(value) if exact else complex(value)
        return u

    def scale(self, factor) -> "CyclicElement":
        return CyclicElement(self.rs, tuple(factor * v for v in self.b))


def is_cyclic(u: CyclicElement) -> bool:
    """Every coefficient over Pi^Q is nonzero."""
    return all(v != 0 for v in u.b)


def _numerical_kernel_dim(singular_values: np.ndarray, tol: float) -> Tuple[int, float]:
    scale = singular_values[0] if len(singular_values) else 0.0
    threshold = tol * scale
    return int(np.sum(singular_values <= threshold)), threshold


def regular_semisimple_report(lie: LieAlgebra, u: GElement, tol: Optional[float] = None) -> dict:
    """Numerical evidence for regular semisimplicity of u.

    u is regular semisimple iff ker ad(u) has dimension l, ker ad(u)^2 = ker ad(u)
    and ad(u) is diagonalizable with a well-conditioned eigenvector matrix.

    Raises:
        NumericError: if the SVD or the eigen-decomposition fails.
    """
    tol = SolverDefaults.RANK_TOL if tol is None else tol
    a = ad_matrix(lie, u)
    try:
        s = np.linalg.svd(a, compute_uv=False)
        s2 = np.linalg.svd(a @ a, compute_uv=False)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"SVD of ad(u) failed: {e}") from e
    report = {"kernel_dim": lie.dim, "kernel_dim_squared": lie.dim, "eigvec_cond": math.inf, "regular_semisimple": False}
    if s[0] == 0.0:
        return report
    kernel_dim, _ = _numerical_kernel_dim(s, tol)
    kernel_dim_sq, _ = _numerical_kernel_dim(s2, tol)
    report["kernel_dim"] = kernel_dim
    report["kernel_dim_squared"] = kernel_dim_sq
    if kernel_dim != lie.rank or kernel_dim_sq != kernel_dim:
        return report
    try:
        _, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Eigen-decomposition of ad(u) failed: {e}") from e
    cond = float(np.linalg.cond(vectors))
    report["eigvec_cond"] = cond
    report["regular_semisimple"] = bool(np.isfinite(cond) and cond < SolverDefaults.EIGVEC_COND_MAX)
    return report


def is_regular_semisimple(lie: LieAlgebra, u: GElement, tol: Optional[float] = None) -> bool:
    return regular_semisimple_report(lie, u, tol)["regular_semisimple"]


def verify_split(lie: LieAlgebra, sigma: SplitAutomorphism, u: CyclicElement, tol: Optional[float] = None,
                 logging: bool = SolverDefaults.LOGGING) -> dict:
    """Check C_g(u) has dimension l and meets g_0 = t only in 0.

    The rank decision is flagged ``indeterminate`` when a singular value falls
    within a factor RANK_MARGIN of the threshold.

    Raises:
        InputError: if u is not cyclic.
    """
    if not is_cyclic(u):
        raise InputError(f"verify_split needs a cyclic element, got b = {u.b}")
    tol = SolverDefaults.RANK_TOL if tol is None else tol
    margin = SolverDefaults.RANK_MARGIN
    a = ad_matrix(lie, u.to_gelement(lie).as_float())
    try:
        _, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"SVD of ad(u) failed: {e}") from e
    kernel_dim, threshold = _numerical_kernel_dim(s, tol)
    kernel = vh[lie.dim - kernel_dim:].conj().T
    g0 = sigma.labels == 0
    if kernel_dim:
        proj = np.linalg.svd(kernel[~g0, :], compute_uv=False)
        projection_rank = int(np.sum(proj > tol))
    else:
        proj = np.zeros(0)
        projection_rank = 0
    intersection_dim = kernel_dim - projection_rank
    ambiguous = np.any((s > threshold / margin) & (s < threshold * margin)) or np.any(
        (proj > tol / margin) & (proj < tol * margin)
    )
    report = {
        "b": [complex(v) for v in u.b],
        "dim_centralizer": kernel_dim,
        "dim_intersection_g0": intersection_dim,
        "split": kernel_dim == lie.rank and intersection_dim == 0,
        "indeterminate": bool(ambiguous),
        "threshold": float(threshold),
    }
    if logging and report["indeterminate"]:
        Logger.note(f"⚠️ Rank decision near threshold {threshold:.3e} for b = {u.b}")
    return report


@dataclasses.dataclass(frozen=True)
class BracketRho:
    """[u, rho(u)] from the closed form and from the ad-matrix bracket."""

    closed_form: Tuple        # sharp coordinates over alpha_i^#
    direct: GElement
    residual: float


def bracket_rho_coefficients(u: CyclicElement) -> Tuple:
    """Sharp coordinates of [u, rho(u)]: -(|b_i|^2 - psi_i |b_-psi|^2)."""
    if u.exact:
        minus = sympy.Abs(u.b[-1]) ** 2
        return tuple(sympy.expand(-(sympy.Abs(b) ** 2 - p * minus)) for b, p in zip(u.b, u.rs.psi_coefficients))
    minus = abs(u.b[-1]) ** 2
    return tuple(-(abs(b) ** 2 - p * minus) for b, p in zip(u.b, u.rs.psi_coefficients))


def bracket_rho_normalized(rs: RootSystem, c: Sequence) -> Tuple:
    """Same element written in the coefficients c_i = b_i / psi_i^(1/2): -(|c_i|^2 - |c_-psi|^2) psi_i."""
    minus = abs(c[-1]) ** 2
    return tuple(-(abs(ci) ** 2 - minus) * p for ci, p in zip(c, rs.psi_coefficients))


def bracket_rho_closed_form(lie: LieAlgebra, rho: CartanInvolution, u: CyclicElement) -> BracketRho:
    """Closed form of [u, rho(u)] and its residual against the direct bracket."""
    closed = bracket_rho_coefficients(u)
    g = u.to_gelement(lie)
    direct = bracket(lie, g, rho(g))
    expected = lie.cartan(list(closed))
    difference = (direct - expected).to_complex()
    scale = max(1.0, float(np.max(np.abs(expected.to_complex()))))
    return BracketRho(closed_form=closed, direct=direct, residual=float(np.max(np.abs(difference))) / scale)


def o_invariant(rs: RootSystem, u: CyclicElement):
    """prod b_i^psi_i * b_-psi, homogeneous of degree h+1."""
    value = u.b[-1]
    for b, p in zip(u.b, rs.psi_coefficients):
        value = value * b ** p
    return sympy.expand(value) if u.exact else complex(value)


def torus_act(u: CyclicElement, v: Sequence[complex]) -> CyclicElement:
    """Ad(exp v) on g_1 for v in t (simple-root values): b_i -> e^{v_i} b_i, b_-psi -> e^{-psi(v)} b_-psi."""
    rs = u.rs
    if len(v) != rs.rank:
        raise InputError(f"Expected {rs.rank} torus coordinates, got {len(v)}")
    psi_v = sum(p * x for p, x in zip(rs.psi_coefficients, v))
    b = [complex(bi) * cmath.exp(vi) for bi, vi in zip(u.b, v)]
    return CyclicElement(rs, tuple(b) + (complex(u.b[-1]) * cmath.exp(-psi_v),))


def torus_orbit_element(rs: RootSystem, beta: Sequence[complex]) -> CyclicElement:
    """Ad(exp sum beta_i eps_i)(sum psi_i^(1/2) e_{alpha_i} + e_-psi).

    [u, rho(u)] vanishes exactly when every beta_i is purely imaginary.
    """
    base = CyclicElement.from_normalized(rs, [1.0] * (rs.rank + 1))
    return torus_act(base, beta)


@dataclasses.dataclass(frozen=True)
class ClassificationRegion:
    """Admissible beta at a puncture: alpha_i(beta) <= 0 and psi(beta) + h + 1 + m >= 0.

    beta is given by its simple-root values (alpha_1(beta), ..., alpha_l(beta)).
    """

    rs: RootSystem
    m: int

    @property
    def h(self) -> int:
        return self.rs.h

    @property
    def offset(self) -> int:
        return self.h + 1 + self.m

    @property
    def c_theta(self) -> sympy.Rational:
        """c(theta) = -m / (h+1)."""
        return sympy.Rational(-self.m, self.h + 1)

    @property
    def in_d_positive(self) -> bool:
        return self.offset > 0

    @property
    def is_trivial(self) -> bool:
        """Outside D^{>0} the compatible harmonic metric is unique and no beta is free."""
        return not self.in_d_positive

    @property
    def is_empty(self) -> bool:
        return self.offset < 0

    @property
    def vertices(self) -> List[Tuple[sympy.Rational, ...]]:
        """Vertices of the simplex: 0 and -(h+1+m)/psi_i eps_i."""
        l = self.rs.rank
        if self.is_empty:
            return []
        origin = tuple(sympy.Integer(0) for _ in range(l))
        if self.offset == 0:
            return [origin]
        return [origin] + [
            tuple(sympy.Rational(-self.offset, p) if k == i else sympy.Integer(0) for k in range(l))
            for i, p in enumerate(self.rs.psi_coefficients)
        ]

    def contains(self, beta: Sequence[float], tol: float = 0.0) -> bool:
        if len(beta) != self.rs.rank:
            raise InputError(f"Expected {self.rs.rank} simple-root values for beta, got {len(beta)}")
        psi_beta = sum(p * x for p, x in zip(self.rs.psi_coefficients, beta))
        return all(x <= tol for x in beta) and psi_beta + self.offset >= -tol

    __contains__ = contains

    def describe(self, beta: Optional[Sequence[float]] = None) -> dict:
        out = {
            "type": str(self.rs.simple_type),
            "m": self.m,
            "h": self.h,
            "c_theta": str(self.c_theta),
            "in_d_positive": self.in_d_positive,
            "trivial": self.is_trivial,
            "vertices": [[str(x) for x in v] for v in self.vertices],
        }
        if beta is not None:
            out["beta"] = [float(x) for x in beta]
            out["admissible"] = self.contains(beta)
        return out


def classification_region(rs: RootSystem, m: int) -> ClassificationRegion:
    if not isinstance(m, (int, np.integer)):
        raise InputError(f"Zero order m must be an integer, got {m!r}")
    return ClassificationRegion(rs, int(m))


def split_suite(lie: LieAlgebra, samples: int = 20, seed: int = SolverDefaults.SEED, tol: Optional[float] = None,
                logging: bool = SolverDefaults.LOGGING) -> dict:
    """Randomized Kostant suite: cyclic elements are split and regular semisimple, non-cyclic ones are not."""
    rs = lie.rs
    sigma = SplitAutomorphism(lie)
    rho = CartanInvolution(lie)
    rng = np.random.default_rng(seed)
    decomposition = eigenspace_decomposition(sigma)
    disagreements = 0
    split_failures = 0
    indeterminate = 0
    worst_bracket = 0.0
    for _ in range(samples):
        u = CyclicElement.random(rs, rng)
        report = verify_split(lie, sigma, u, tol, logging=logging)
        split_failures += not report["split"]
        indeterminate += report["indeterminate"]
        disagreements += not is_regular_semisimple(lie, u.to_gelement(lie), tol)
        worst_bracket = max(worst_bracket, bracket_rho_closed_form(lie, rho, u).residual)
    for _ in range(samples):
        count = int(rng.integers(1, rs.rank + 1))
        zeros = rng.choice(rs.rank + 1, size=count, replace=False)
        u = CyclicElement.random(rs, rng, zeros=zeros)
        disagreements += is_regular_semisimple(lie, u.to_gelement(lie), tol)
    g1_dim = decomposition.dims[1]
    passed = (
        split_failures == 0
        and disagreements == 0
        and decomposition.bracket_compatible
        and g1_dim == rs.rank + 1
        and decomposition.pieces[0] == tuple(range(rs.rank))
        and worst_bracket <= SolverDefaults.IDENTITY_TOL
    )
    if logging:
        Logger.note(f"{'✅' if passed else '❌'} Split suite for {rs.simple_type}: {samples} cyclic + {samples} non-cyclic samples")
    return {
        "type": str(rs.simple_type),
        "samples": samples,
        "seed": seed,
        "eigenspace_dims": {str(k): v for k, v in decomposition.dims.items()},
        "bracket_compatible": decomposition.bracket_compatible,
        "split_failures": split_failures,
        "oracle_disagreements": disagreements,
        "indeterminate": indeterminate,
        "max_bracket_rho_residual": worst_bracket,
        "order": sigma.order(),
        "passed": passed,
    }
