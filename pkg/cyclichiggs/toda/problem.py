"""Toda problems: Higgs coefficients, boundary data and solutions.

A torus-compatible metric is stored as xi: grid -> t_R through its simple-root
values, i.e. an array of shape (l, *grid.shape) whose component i is
alpha_i(xi). Then |e_phi|_h^2 = exp(2 phi(xi)).
"""

import dataclasses
import functools
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..chevalley import LieAlgebra
from ..errors import InputError
from ..rootsys import RootSystem, weight_one_eigenroots
from ..split import CyclicElement
from .grids import AnnulusGrid, RadialGrid, RectangleGrid

Grid = Union[RectangleGrid, AnnulusGrid, RadialGrid]


@dataclasses.dataclass(frozen=True)
class LaurentTerm:
    """c z^k against dz."""

    k: int
    coefficient: complex

    def to_dict(self) -> dict:
        c = complex(self.coefficient)
        return {"k": self.k, "re": c.real, "im": c.imag}


@dataclasses.dataclass(frozen=True, eq=False)
class HiggsCoefficient:
    """theta = sum over Pi^Q of f_phi(z) e_phi dz, each f_phi a finite Laurent sum.

    ``terms[p]`` holds the terms of the p-th root of Pi^Q (alpha_1, ..., alpha_l, -psi).
    """

    rs: RootSystem
    terms: Tuple[Tuple[LaurentTerm, ...], ...]

    def __post_init__(self):
        if len(self.terms) != self.rs.rank + 1:
            raise InputError(f"{self.rs} needs {self.rs.rank + 1} Higgs coefficients, got {len(self.terms)}")
        cleaned = tuple(tuple(t for t in f if t.coefficient != 0) for f in self.terms)
        object.__setattr__(self, "terms", cleaned)
        if not any(cleaned):
            raise InputError("At least one Higgs coefficient must be nonzero")

    @classmethod
    def constant(cls, rs: RootSystem, b: Sequence[complex]) -> "HiggsCoefficient":
        return cls(rs, tuple((LaurentTerm(0, complex(v)),) for v in b))

    @classmethod
    def from_cyclic(cls, u: CyclicElement) -> "HiggsCoefficient":
        return cls.constant(u.rs, [complex(v) for v in u.b])

    @classmethod
    def monomials(cls, rs: RootSystem, coefficients: Sequence[complex], exponents: Sequence[int]) -> "HiggsCoefficient":
        return cls(rs, tuple((LaurentTerm(int(k), complex(c)),) for c, k in zip(coefficients, exponents)))

    @property
    def is_monomial(self) -> bool:
        return all(len(f) <= 1 for f in self.terms)

    @property
    def is_constant(self) -> bool:
        return all(all(t.k == 0 for t in f) for f in self.terms)

    @property
    def is_generically_cyclic(self) -> bool:
        return all(self.terms)

    def exponents(self) -> List[Optional[int]]:
        """Laurent exponent of each monomial coefficient (None for f = 0)."""
        if not self.is_monomial:
            raise InputError("Higgs coefficients are not monomials")
        return [f[0].k if f else None for f in self.terms]

    def o_order(self) -> Optional[int]:
        """Vanishing order at z = 0 of o = prod f_i^psi_i * f_-psi (dz^{h+1}); None if o = 0."""
        if not self.is_generically_cyclic:
            return None
        orders = [min(t.k for t in f) for f in self.terms]
        return sum(p * k for p, k in zip(self.rs.psi_coefficients, orders)) + orders[-1]

    def has_pole_on(self, z: np.ndarray) -> bool:
        negative = any(t.k < 0 for f in self.terms for t in f)
        return negative and bool(np.any(np.abs(z) == 0.0))

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Values f_phi(z), shape (l+1, *z.shape)."""
        if self.has_pole_on(z):
            raise InputError("A Higgs coefficient has a pole on the grid")
        z = np.asarray(z, dtype=complex)
        out = np.zeros((len(self.terms),) + z.shape, dtype=complex)
        for p, f in enumerate(self.terms):
            for term in f:
                out[p] += term.coefficient * z ** term.k
        return out

    def abs_squared(self, z: np.ndarray) -> np.ndarray:
        return np.abs(self.evaluate(z)) ** 2

    def is_cyclic_on(self, z: np.ndarray) -> bool:
        return bool(np.all(np.abs(self.evaluate(z)) > 0))

    def to_list(self) -> List[dict]:
        return [{"root": label, "terms": [t.to_dict() for t in f]} for label, f in zip(self.rs.labels, self.terms)]

    @classmethod
    def from_list(cls, rs: RootSystem, items: Sequence[dict]) -> "HiggsCoefficient":
        terms: Dict[str, Tuple[LaurentTerm, ...]] = {}
        for item in items:
            try:
                label = item["root"]
                parsed = tuple(LaurentTerm(int(t["k"]), complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))))
                               for t in item["terms"])
            except (AttributeError, KeyError, TypeError, ValueError) as e:
                raise InputError(f"Malformed Higgs entry {item!r}: {e}") from e
            if label not in rs.labels:
                raise InputError(f"Unknown root label {label!r}; expected one of {rs.labels}")
            terms[label] = terms.get(label, ()) + parsed
        return cls(rs, tuple(terms.get(label, ()) for label in rs.labels))


def homogeneous_higgs(rs: RootSystem) -> HiggsCoefficient:
    """sum e_{alpha_i} dz/z + z^{h+1} e_-psi dz/z, i.e. exponents -1 and h against dz."""
    return HiggsCoefficient.monomials(rs, [1.0] * (rs.rank + 1), [-1] * rs.rank + [rs.h])


def constant_boundary(grid: Grid, values: Sequence[float]) -> np.ndarray:
    """Boundary data equal to one t_R element (simple-root values) everywhere."""
    values = np.asarray(values, dtype=float)
    return np.broadcast_to(values.reshape((-1,) + (1,) * len(grid.shape)), (len(values),) + grid.shape).copy()


def function_boundary(grid: Grid, fn: Callable[..., np.ndarray]) -> np.ndarray:
    """Boundary data from a function of the grid coordinates returning shape (l, *grid.shape)."""
    return np.asarray(fn(*grid.coordinates), dtype=float)


@dataclasses.dataclass(frozen=True, eq=False)
class TodaProblem:
    """Dirichlet problem for L0 xi = w 2 t^2 sum |f_phi|^2 e^{2 phi(xi)} phi^#.

    Attributes:
        lie: the Lie algebra (root data and Killing form).
        grid: the domain.
        higgs: Higgs coefficients; theta is t times sum f_phi e_phi dz.
        boundary: simple-root values of xi, shape (l, *grid.shape); only
            boundary nodes are read.
        t: scale of the Higgs field, t >= 0.
        tol: sup-node residual at convergence (SolverDefaults.TOL if None).
        max_iter: Newton iteration cap (SolverDefaults.MAX_ITER if None).
        description: JSON-ready description echoed in outputs.
    """

    lie: LieAlgebra
    grid: Grid
    higgs: HiggsCoefficient
    boundary: np.ndarray
    t: float = 1.0
    tol: Optional[float] = None
    max_iter: Optional[int] = None
    description: Dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        rs = self.lie.rs
        if self.higgs.rs is not rs:
            raise InputError("Higgs coefficients belong to a different root system")
        if not math.isfinite(self.t) or self.t < 0:
            raise InputError(f"Scale t must be finite and >= 0, got {self.t}")
        boundary = np.asarray(self.boundary, dtype=float)
        if boundary.shape != (rs.rank,) + self.grid.shape:
            raise InputError(f"Boundary data has shape {boundary.shape}, expected {(rs.rank,) + self.grid.shape}")
        if not np.all(np.isfinite(boundary[:, self.grid.boundary_mask])):
            raise InputError("Boundary data must be finite")
        if self.higgs.has_pole_on(self.grid.z):
            raise InputError("Domain contains a pole of the Higgs field")
        object.__setattr__(self, "boundary", boundary)

    @property
    def rs(self) -> RootSystem:
        return self.lie.rs

    @functools.cached_property
    def abs_squared(self) -> np.ndarray:
        return self.higgs.abs_squared(self.grid.z)

    @functools.cached_property
    def pi_q(self) -> np.ndarray:
        """Pi^Q as a float matrix, one root per row."""
        return np.array(weight_one_eigenroots(self.rs), dtype=float)

    @functools.cached_property
    def gram(self) -> np.ndarray:
        """B(eps_i, eps_j)."""
        return np.array(self.rs.killing_gram_eps, dtype=float)

    @functools.cached_property
    def sharp_values(self) -> np.ndarray:
        """Column p holds the simple-root values of phi_p^#."""
        return np.array(self.rs.killing_gram, dtype=float) @ self.pi_q.T

    def with_boundary(self, boundary: np.ndarray) -> "TodaProblem":
        return dataclasses.replace(self, boundary=boundary)

    def with_grid(self, grid: Grid, boundary: np.ndarray) -> "TodaProblem":
        return dataclasses.replace(self, grid=grid, boundary=boundary)

    def to_dict(self) -> dict:
        return {
            "algebra": {"family": self.rs.simple_type.family, "rank": self.rs.rank},
            "domain": self.grid.to_dict(),
            "higgs": self.higgs.to_list(),
            "scale_t": self.t,
            **({"boundary": self.description["boundary"]} if "boundary" in self.description else {}),
        }


@dataclasses.dataclass(frozen=True, eq=False)
class TodaSolution:
    """Solved xi with its Newton log.

    ``residual`` is the sup-node norm of toda_residual at ``xi``; ``iterations``
    counts residual evaluations, so an exact initial guess reports 1.
    ``roundoff_floor`` is the rounding bound on the residual at ``xi``.
    """

    problem: TodaProblem
    xi: np.ndarray
    residual_history: Tuple[float, ...]
    step_history: Tuple[float, ...]
    residual: float
    iterations: int
    converged: bool
    initial_guess: str = "harmonic"
    roundoff_floor: float = 0.0

    def summary(self) -> dict:
        return {
            "residual": self.residual,
            "roundoff_floor": self.roundoff_floor,
            "iterations": self.iterations,
            "converged": self.converged,
            "initial_guess": self.initial_guess,
            "residual_history": list(self.residual_history),
            "step_history": list(self.step_history),
        }

    def rows(self) -> List[List[float]]:
        """CSV rows: grid coordinates then the l components of xi."""
        coords = [c.ravel() for c in np.broadcast_arrays(*self.problem.grid.coordinates)]
        components = [x.ravel() for x in self.xi]
        return [list(values) for values in zip(*coords, *components)]

    def header(self) -> List[str]:
        return list(self.problem.grid.columns) + [f"xi_{i + 1}" for i in range(len(self.xi))]
