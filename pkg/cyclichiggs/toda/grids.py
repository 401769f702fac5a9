"""Uniform grids with Dirichlet boundaries for the Toda solver.

Every grid exposes the same surface to the solver: node positions ``z``, a
boundary mask, the weight ``w`` such that the equation reads
L0 xi = w * (nonlinear term), the 5-point (or 3-point) matrix L0 on interior
nodes, and ``residual_factor`` converting L0 back to the Laplacian in which
the reported residual is measured.

Node counts include the boundary nodes.
"""

import dataclasses
import math
from typing import Tuple

import numpy as np
import scipy.sparse as sps

from ..errors import InputError


def _second_difference(n: int, h: float, periodic: bool = False) -> sps.csr_matrix:
    d = sps.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], format="lil")
    if periodic:
        d[0, n - 1] = 1.0
        d[n - 1, 0] = 1.0
    return (d / h ** 2).tocsr()


def _check_range(name: str, bounds, count: int, minimum: int = 3) -> Tuple[float, float]:
    try:
        lo, hi = (float(v) for v in bounds)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name} must be a pair of numbers, got {bounds!r}") from e
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise InputError(f"{name} must be a finite increasing pair, got {bounds}")
    if int(count) != count or count < minimum:
        raise InputError(f"{name} needs at least {minimum} nodes, got {count}")
    return lo, hi


@dataclasses.dataclass(frozen=True)
class RectangleGrid:
    """[x0, x1] x [y0, y1] with nx x ny nodes; arrays are indexed [ix, iy]."""

    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    nx: int
    ny: int

    kind = "rectangle"
    columns = ("x", "y")

    def __post_init__(self):
        object.__setattr__(self, "x_range", _check_range("x_range", self.x_range, self.nx))
        object.__setattr__(self, "y_range", _check_range("y_range", self.y_range, self.ny))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def spacing(self) -> Tuple[float, float]:
        return ((self.x_range[1] - self.x_range[0]) / (self.nx - 1), (self.y_range[1] - self.y_range[0]) / (self.ny - 1))

    @property
    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.x_range, self.nx), np.linspace(*self.y_range, self.ny)

    @property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(*self.axes, indexing="ij")

    @property
    def z(self) -> np.ndarray:
        x, y = self.coordinates
        return x + 1j * y

    @property
    def weight(self) -> np.ndarray:
        return np.ones(self.shape)

    @property
    def residual_factor(self) -> np.ndarray:
        return np.ones(self.shape)

    @property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
        return mask

    def inner_mask(self, fraction: float) -> np.ndarray:
        """Nodes of the concentric sub-rectangle scaled by ``fraction``."""
        x, y = self.coordinates
        cx, cy = sum(self.x_range) / 2, sum(self.y_range) / 2
        hx, hy = (self.x_range[1] - self.x_range[0]) / 2, (self.y_range[1] - self.y_range[0]) / 2
        eps = 1e-12
        return (np.abs(x - cx) <= fraction * hx + eps) & (np.abs(y - cy) <= fraction * hy + eps)

    def laplacian_interior(self) -> sps.csr_matrix:
        hx, hy = self.spacing
        mx, my = self.nx - 2, self.ny - 2
        return (sps.kron(_second_difference(mx, hx), sps.identity(my)) + sps.kron(sps.identity(mx), _second_difference(my, hy))).tocsr()

    def apply_laplacian(self, u: np.ndarray) -> np.ndarray:
        """5-point L0 u on interior nodes (trailing two axes), zero on the boundary."""
        hx, hy = self.spacing
        out = np.zeros_like(u)
        c = u[..., 1:-1, 1:-1]
        out[..., 1:-1, 1:-1] = (u[..., 2:, 1:-1] - 2 * c + u[..., :-2, 1:-1]) / hx ** 2 + (u[..., 1:-1, 2:] - 2 * c + u[..., 1:-1, :-2]) / hy ** 2
        return out

    def refined(self) -> "RectangleGrid":
        return RectangleGrid(self.x_range, self.y_range, 2 * self.nx - 1, 2 * self.ny - 1)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "x_range": list(self.x_range), "y_range": list(self.y_range), "nx": self.nx, "ny": self.ny}


@dataclasses.dataclass(frozen=True)
class AnnulusGrid:
    """Log-polar annulus e^{s0} <= |z| <= e^{s1}; ntheta angular nodes, periodic; arrays are indexed [is, itheta].

    In (s, theta) the Laplacian is e^{-2s}(d_s^2 + d_theta^2), so w = e^{2s}.
    """

    s_range: Tuple[float, float]
    ns: int
    ntheta: int

    kind = "annulus"
    columns = ("s", "theta")

    def __post_init__(self):
        object.__setattr__(self, "s_range", _check_range("s_range", self.s_range, self.ns))
        if int(self.ntheta) != self.ntheta or self.ntheta < 3:
            raise InputError(f"ntheta needs at least 3 nodes, got {self.ntheta}")

    @classmethod
    def from_radii(cls, r_min: float, r_max: float, ns: int, ntheta: int) -> "AnnulusGrid":
        if not 0 < r_min < r_max:
            raise InputError(f"Annulus needs 0 < r_min < r_max, got {r_min}, {r_max}")
        return cls((math.log(r_min), math.log(r_max)), ns, ntheta)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.ns, self.ntheta)

    @property
    def spacing(self) -> Tuple[float, float]:
        return ((self.s_range[1] - self.s_range[0]) / (self.ns - 1), 2 * math.pi / self.ntheta)

    @property
    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.s_range, self.ns), 2 * math.pi * np.arange(self.ntheta) / self.ntheta

    @property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(*self.axes, indexing="ij")

    @property
    def z(self) -> np.ndarray:
        s, theta = self.coordinates
        return np.exp(s + 1j * theta)

    @property
    def weight(self) -> np.ndarray:
        s, _ = self.coordinates
        return np.exp(2 * s)

    @property
    def residual_factor(self) -> np.ndarray:
        return 1.0 / self.weight

    @property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[0, :] = mask[-1, :] = True
        return mask

    def laplacian_interior(self) -> sps.csr_matrix:
        hs, ht = self.spacing
        ms = self.ns - 2
        return (sps.kron(_second_difference(ms, hs), sps.identity(self.ntheta))
                + sps.kron(sps.identity(ms), _second_difference(self.ntheta, ht, periodic=True))).tocsr()

    def apply_laplacian(self, u: np.ndarray) -> np.ndarray:
        hs, ht = self.spacing
        out = np.zeros_like(u)
        c = u[..., 1:-1, :]
        out[..., 1:-1, :] = (u[..., 2:, :] - 2 * c + u[..., :-2, :]) / hs ** 2 + (
            np.roll(c, -1, axis=-1) - 2 * c + np.roll(c, 1, axis=-1)) / ht ** 2
        return out

    def refined(self) -> "AnnulusGrid":
        return AnnulusGrid(self.s_range, 2 * self.ns - 1, 2 * self.ntheta)

    def radial(self) -> "RadialGrid":
        return RadialGrid(self.s_range, self.ns)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "s_range": list(self.s_range), "ns": self.ns, "ntheta": self.ntheta}


@dataclasses.dataclass(frozen=True)
class RadialGrid:
    """1-D grid in s = log|z| for S^1-invariant problems; the residual is the ODE residual."""

    s_range: Tuple[float, float]
    ns: int

    kind = "radial"
    columns = ("s",)

    def __post_init__(self):
        object.__setattr__(self, "s_range", _check_range("s_range", self.s_range, self.ns))

    @property
    def shape(self) -> Tuple[int]:
        return (self.ns,)

    @property
    def spacing(self) -> Tuple[float]:
        return ((self.s_range[1] - self.s_range[0]) / (self.ns - 1),)

    @property
    def axes(self) -> Tuple[np.ndarray]:
        return (np.linspace(*self.s_range, self.ns),)

    @property
    def coordinates(self) -> Tuple[np.ndarray]:
        return self.axes

    @property
    def z(self) -> np.ndarray:
        return np.exp(self.axes[0]).astype(complex)

    @property
    def weight(self) -> np.ndarray:
        return np.exp(2 * self.axes[0])

    @property
    def residual_factor(self) -> np.ndarray:
        return np.ones(self.shape)

    @property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[0] = mask[-1] = True
        return mask

    def laplacian_interior(self) -> sps.csr_matrix:
        return _second_difference(self.ns - 2, self.spacing[0])

    def apply_laplacian(self, u: np.ndarray) -> np.ndarray:
        (hs,) = self.spacing
        out = np.zeros_like(u)
        out[..., 1:-1] = (u[..., 2:] - 2 * u[..., 1:-1] + u[..., :-2]) / hs ** 2
        return out

    def refined(self) -> "RadialGrid":
        return RadialGrid(self.s_range, 2 * self.ns - 1)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "s_range": list(self.s_range), "ns": self.ns}


def grid_from_dict(data: dict):
    """Build a grid from its JSON description."""
    if not isinstance(data, dict):
        raise InputError(f"domain must be an object, got {type(data).__name__}")
    kind = data.get("kind")
    try:
        if kind == "rectangle":
            return RectangleGrid(tuple(data["x_range"]), tuple(data["y_range"]), int(data["nx"]), int(data["ny"]))
        if kind == "annulus":
            if "s_range" in data:
                return AnnulusGrid(tuple(data["s_range"]), int(data["ns"]), int(data["ntheta"]))
            return AnnulusGrid.from_radii(float(data["r_min"]), float(data["r_max"]), int(data["ns"]), int(data["ntheta"]))
        if kind == "radial":
            return RadialGrid(tuple(data["s_range"]), int(data["ns"]))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed {kind} domain: {e}") from e
    raise InputError(f"Unknown domain kind {kind!r}; expected rectangle, annulus or radial")
