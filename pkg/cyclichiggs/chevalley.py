"""Normalized Chevalley basis, adjoint matrices, Killing form and Cartan involution.

Basis order: the Cartan elements alpha_1^#, ..., alpha_l^# first, then e_phi
for phi in Delta^+ (in RootSystem order), then e_-phi in the same order.

Structure constants are built in two stages:

1. Integer Chevalley constants N_{phi,phi'} = +-(p+1). For every non-simple
   positive root the *extraspecial pair* (the special pair whose first root
   comes first in the RootSystem order) gets the sign +1; all other signs
   follow from the standard quadratic relations among N's, and
   N_{-phi,-phi'} = -N_{phi,phi'}.
2. The symmetric rescaling e_{+-phi} -> e_{+-phi} / sqrt(B(e_phi, e_-phi)),
   after which [e_phi, e_-phi] = phi^# and B(e_phi, e_-phi) = 1. Constants
   become N * sqrt(b_{phi+phi'} / (b_phi b_phi')) with b_phi = 2 / (phi, phi),
   kept exact as sympy surds.
"""

import dataclasses
import functools
from typing import Dict, Optional, Tuple

import numpy as np
import sympy
from logorator import Logger

from .config import SolverDefaults
from .errors import InputError, NumericError, VerificationError
from .rootsys import Root, RootSystem, negate

Table = Dict[Tuple[int, int], Dict[int, sympy.Expr]]


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def chevalley_integers(rs: RootSystem) -> Dict[Tuple[Root, Root], int]:
    """Integer structure constants N_{x,y} of a Chevalley basis for all root pairs with x + y a root."""
    order = {r: k for k, r in enumerate(rs.positive_roots)}
    roots = set(rs.roots)
    lengths = {r: rs.pair(r, r) for r in rs.positive_roots}

    def length(r):
        return lengths[r] if r in order else lengths[negate(r)]

    positive_n: Dict[Tuple[Root, Root], sympy.Expr] = {}

    def n(x, y):
        z = _add(x, y)
        if z not in roots:
            return sympy.Integer(0)
        if x in order and y in order:
            return positive_n[(x, y)]
        if x not in order and y not in order:
            return -n(negate(x), negate(y))
        if x not in order:
            return -n(y, x)
        # x > 0 > y
        if z in order:
            return length(z) / length(x) * n(z, negate(y))
        return length(z) / length(y) * n(negate(z), x)

    for xi in rs.positive_roots:
        pairs = [(a, _sub(xi, a)) for a in rs.positive_roots if _sub(xi, a) in order and order[a] < order[_sub(xi, a)]]
        if not pairs:
            continue
        a0, b0 = pairs[0]
        p = 0
        while _sub(b0, tuple((p + 1) * c for c in a0)) in roots:
            p += 1
        n0 = sympy.Integer(p + 1)
        positive_n[(a0, b0)] = n0
        positive_n[(b0, a0)] = -n0
        for a, b in pairs[1:]:
            total = sympy.Integer(0)
            t1 = n(b, negate(a0)) * n(a, negate(b0))
            if t1 != 0:
                total += t1 / length(_sub(b, a0))
            t2 = n(negate(a0), a) * n(b, negate(b0))
            if t2 != 0:
                total += t2 / length(_sub(a, a0))
            value = length(xi) / n0 * total
            if not value.is_integer or value == 0:
                raise VerificationError(f"Non-integral Chevalley constant {value} for pair {a}, {b} in {rs}")
            positive_n[(a, b)] = value
            positive_n[(b, a)] = -value

    result = {}
    for x in rs.roots:
        for y in rs.roots:
            if _add(x, y) in roots:
                value = n(x, y)
                if not value.is_integer:
                    raise VerificationError(f"Non-integral Chevalley constant {value} for pair {x}, {y} in {rs}")
                result[(x, y)] = int(value)
    return result


@dataclasses.dataclass(frozen=True, eq=False)
class GElement:
    """An element of g as coefficients over the LieAlgebra basis.

    ``exact`` elements hold sympy numbers in an object array; float elements
    hold a complex array. Mixing the two gives a float element.
    """

    coefficients: np.ndarray
    exact: bool = False

    @classmethod
    def of(cls, values, exact: Optional[bool] = None) -> "GElement":
        values = list(values)
        if exact is None:
            exact = all(isinstance(v, (int, sympy.Basic)) for v in values)
        if exact:
            return cls(np.array([sympy.sympify(v) for v in values], dtype=object), True)
        return cls(np.asarray(values, dtype=complex), False)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def to_complex(self) -> np.ndarray:
        if not self.exact:
            return self.coefficients
        return np.array([complex(sympy.N(v, 30)) for v in self.coefficients], dtype=complex)

    def as_float(self) -> "GElement":
        return self if not self.exact else GElement(self.to_complex(), False)

    def conjugate(self) -> "GElement":
        if self.exact:
            return GElement(np.array([sympy.conjugate(v) for v in self.coefficients], dtype=object), True)
        return GElement(np.conj(self.coefficients), False)

    def nonzero(self):
        return [k for k, v in enumerate(self.coefficients) if v != 0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_complex()))

    def _combine(self, other: "GElement", sign: int) -> "GElement":
        if self.dim != other.dim:
            raise InputError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        if self.exact and other.exact:
            return GElement(np.array([sympy.expand(a + sign * b) for a, b in zip(self.coefficients, other.coefficients)], dtype=object), True)
        return GElement(self.to_complex() + sign * other.to_complex(), False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor) -> "GElement":
        if self.exact and isinstance(factor, (int, sympy.Basic)):
            return GElement(np.array([sympy.expand(factor * v) for v in self.coefficients], dtype=object), True)
        return GElement(complex(factor) * self.to_complex(), False)

    __mul__ = scale
    __rmul__ = scale


@dataclasses.dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Kostant-normalized basis of g.

    Attributes:
        rs: the root data.
        weights: root of each basis element (the zero vector for Cartan elements).
        structure_constants: sparse exact table, ``(i, j) -> {k: c}`` with
            [b_i, b_j] = sum c b_k.
        chevalley: the integer constants before rescaling, keyed by root pairs.
    """

    rs: RootSystem
    weights: Tuple[Root, ...]
    structure_constants: Table
    chevalley: Dict[Tuple[Root, Root], int]

    def __repr__(self):
        return f"LieAlgebra({self.rs.simple_type}, dim={self.dim})"

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def dim(self) -> int:
        return len(self.weights)

    @functools.cached_property
    def _index(self) -> Dict[Root, int]:
        return {w: k for k, w in enumerate(self.weights) if k >= self.rank}

    @functools.cached_property
    def heights(self) -> np.ndarray:
        return np.array([sum(w) for w in self.weights], dtype=int)

    def index(self, root) -> int:
        try:
            return self._index[tuple(root)]
        except KeyError:
            raise InputError(f"{tuple(root)} is not a root of {self.rs}") from None

    def structure_constant(self, root_a, root_b) -> sympy.Expr:
        """Normalized N'_{a,b} with [e_a, e_b] = N'_{a,b} e_{a+b}; zero if a + b is not a root."""
        ia, ib = self.index(root_a), self.index(root_b)
        target = _add(tuple(root_a), tuple(root_b))
        if target not in self._index:
            return sympy.Integer(0)
        return self.structure_constants.get((ia, ib), {}).get(self._index[target], sympy.Integer(0))

    @functools.cached_property
    def sparse(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Float structure constants as parallel arrays (I, J, K, V)."""
        entries = [(i, j, k, float(c)) for (i, j), row in self.structure_constants.items() for k, c in row.items()]
        i, j, k, v = zip(*entries)
        return np.array(i), np.array(j), np.array(k), np.array(v)

    # Elements

    def zero(self, exact: bool = True) -> GElement:
        if exact:
            return GElement(np.array([sympy.Integer(0)] * self.dim, dtype=object), True)
        return GElement(np.zeros(self.dim, dtype=complex), False)

    def basis_element(self, k: int) -> GElement:
        u = self.zero()
        u.coefficients[k] = sympy.Integer(1)
        return u

    def root_vector(self, root, coefficient=1) -> GElement:
        exact = isinstance(coefficient, (int, sympy.Basic))
        u = self.zero(exact)
        u.coefficients[self.index(root)] = sympy.sympify(coefficient) if exact else coefficient
        return u

    def cartan(self, sharp_coords) -> GElement:
        """Cartan element sum y_i alpha_i^#."""
        if len(sharp_coords) != self.rank:
            raise InputError(f"Expected {self.rank} Cartan coordinates, got {len(sharp_coords)}")
        exact = all(isinstance(v, (int, sympy.Basic)) for v in sharp_coords)
        u = self.zero(exact)
        for i, y in enumerate(sharp_coords):
            u.coefficients[i] = sympy.sympify(y) if exact else y
        return u

    def cartan_from_values(self, values) -> GElement:
        """Cartan element x with alpha_i(x) = values[i]."""
        if all(isinstance(v, (int, sympy.Basic)) for v in values):
            return self.cartan(self.rs.to_sharp_coords([sympy.sympify(v) for v in values]))
        g = np.array(self.rs.killing_gram_eps, dtype=float)
        return self.cartan(list(g @ np.asarray(values, dtype=float)))

    def root_sharp(self, root) -> GElement:
        """phi^# as a Cartan element."""
        return self.cartan([sympy.Integer(c) for c in root])

    @functools.cached_property
    def x0(self) -> GElement:
        return self.cartan(self.rs.x0)

    # Killing form

    @functools.cached_property
    def killing_matrix(self) -> sympy.ImmutableMatrix:
        """B(b_i, b_j) = Tr(ad b_i ad b_j), exact; nonzero only for opposite weights."""
        n = self.dim
        table = self.structure_constants
        origin = tuple(0 for _ in range(self.rank))
        k_mat = sympy.zeros(n, n)
        for a in range(n):
            for b in range(a, n):
                if _add(self.weights[a], self.weights[b]) != origin:
                    continue
                trace = sympy.Integer(0)
                for c in range(n):
                    for d, coeff in table.get((b, c), {}).items():
                        trace += coeff * table.get((a, d), {}).get(c, 0)
                trace = sympy.expand(trace)
                k_mat[a, b] = k_mat[b, a] = trace
        return sympy.ImmutableMatrix(k_mat)

    @functools.cached_property
    def killing_float(self) -> np.ndarray:
        return np.array(self.killing_matrix.evalf(30), dtype=float)


def build_lie_algebra(rs: RootSystem, logging: bool = SolverDefaults.LOGGING) -> LieAlgebra:
    """Build the normalized basis of g for ``rs``.

    Args:
        rs: root data from ``build_root_system``.
        logging (bool): Enable logging. Defaults to True.

    Returns:
        LieAlgebra with exact structure constants.
    """
    return _build_lie_algebra(rs, logging)


@functools.lru_cache(maxsize=None)
def _build_lie_algebra(rs: RootSystem, logging: bool) -> LieAlgebra:
    n = rs.rank
    integers = chevalley_integers(rs)
    weights = tuple(tuple(0 for _ in range(n)) for _ in range(n)) + rs.roots
    index = {w: k for k, w in enumerate(weights) if k >= n}
    m = rs.killing_gram

    def b(root):
        return 2 / rs.pair(root, root)

    table: Table = {}
    for root in rs.roots:
        k = index[root]
        values = rs.sharp(root)
        for i in range(n):
            if values[i] != 0:
                table[(i, k)] = {k: values[i]}
                table[(k, i)] = {k: -values[i]}
    for x in rs.roots:
        ix = index[x]
        minus = index[negate(x)]
        table[(ix, minus)] = {i: sympy.Integer(c) for i, c in enumerate(x) if c != 0}
    for (x, y), value in integers.items():
        z = _add(x, y)
        constant = value * sympy.sqrt(b(z) / (b(x) * b(y)))
        table[(index[x], index[y])] = {index[z]: constant}

    lie = LieAlgebra(rs=rs, weights=weights, structure_constants=table, chevalley=integers)
    if logging:
        Logger.note(f"🧮 Built {rs.simple_type}: dim g = {lie.dim}, {len(integers) // 2} root brackets, det M = {m.det()}")
    return lie


# Brackets


def ad_matrix(lie: LieAlgebra, u: GElement) -> np.ndarray:
    """Complex matrix of ad(u) in the LieAlgebra basis; column j is [u, b_j]."""
    if u.dim != lie.dim:
        raise InputError(f"Element of dimension {u.dim} does not belong to {lie}")
    i, j, k, v = lie.sparse
    coefficients = u.to_complex()
    ad = np.zeros((lie.dim, lie.dim), dtype=complex)
    np.add.at(ad, (k, j), coefficients[i] * v)
    return ad


def bracket(lie: LieAlgebra, u: GElement, v: GElement) -> GElement:
    """[u, v]; exact when both arguments are exact."""
    if not (u.exact and v.exact):
        return GElement(ad_matrix(lie, u) @ v.to_complex(), False)
    result = lie.zero()
    out = result.coefficients
    table = lie.structure_constants
    for i in u.nonzero():
        for j in v.nonzero():
            for k, c in table.get((i, j), {}).items():
                out[k] += u.coefficients[i] * v.coefficients[j] * c
    for k in range(lie.dim):
        out[k] = sympy.expand(out[k])
    return result


def killing(lie: LieAlgebra, u: GElement, v: GElement):
    """B(u, v), bilinear; exact when both arguments are exact."""
    if u.exact and v.exact:
        km = lie.killing_matrix
        total = sympy.Integer(0)
        for i in u.nonzero():
            for j in v.nonzero():
                if km[i, j] != 0:
                    total += u.coefficients[i] * km[i, j] * v.coefficients[j]
        return sympy.expand(total)
    return complex(u.to_complex() @ lie.killing_float @ v.to_complex())


@dataclasses.dataclass(frozen=True, eq=False)
class CartanInvolution:
    """rho = R o (coefficient conjugation) with R e_phi = -e_-phi and R = -1 on t."""

    lie: LieAlgebra

    @functools.cached_property
    def permutation(self) -> Tuple[int, ...]:
        lie = self.lie
        return tuple(k if k < lie.rank else lie.index(negate(lie.weights[k])) for k in range(lie.dim))

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        r = np.zeros((self.lie.dim, self.lie.dim))
        for k, image in enumerate(self.permutation):
            r[image, k] = -1.0
        return r

    def __call__(self, u: GElement) -> GElement:
        conj = u.conjugate()
        if u.exact:
            out = self.lie.zero()
            for k, image in enumerate(self.permutation):
                out.coefficients[image] = -conj.coefficients[k]
            return out
        return GElement(self.matrix @ conj.coefficients, False)

    @functools.cached_property
    def metric_matrix(self) -> np.ndarray:
        """H with h(u, v) = u^T H conj(v)."""
        return -self.lie.killing_float @ self.matrix


def cartan_involution(lie: LieAlgebra) -> CartanInvolution:
    return CartanInvolution(lie)


def hermitian_metric(lie: LieAlgebra, rho: CartanInvolution, u: GElement, v: GElement):
    """h(u, v) = -B(u, rho(v)); exact for exact arguments."""
    value = killing(lie, u, rho(v))
    return -value if u.exact and v.exact else complex(-value)


def hermitian_adjoint(rho: CartanInvolution, a: np.ndarray) -> np.ndarray:
    """Adjoint of a linear map of g with respect to h."""
    h = rho.metric_matrix
    return np.conj(np.linalg.solve(h, a.T @ h))


@dataclasses.dataclass(frozen=True)
class NormGap:
    norm_squared: float
    eigen_squared: float
    gap: float
    commutator_norm: float

    @property
    def is_normal(self) -> bool:
        return self.gap <= 1e-9 * max(1.0, self.norm_squared)


def eigen_norm_gap(lie: LieAlgebra, rho: CartanInvolution, u: GElement) -> NormGap:
    """Compare h(u, u) with the sum of |eigenvalue|^2 of ad(u).

    The gap is nonnegative and vanishes exactly when [u, rho(u)] = 0.

    Raises:
        NumericError: if the eigenvalue computation fails or is not finite.
    """
    uf = u.as_float()
    norm_sq = hermitian_metric(lie, rho, uf, uf).real
    try:
        eigenvalues = np.linalg.eigvals(ad_matrix(lie, uf))
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Eigenvalue computation failed: {e}") from e
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericError("Non-finite eigenvalues of ad(u)")
    eigen_sq = float(np.sum(np.abs(eigenvalues) ** 2))
    commutator = bracket(lie, uf, rho(uf)).norm()
    return NormGap(norm_squared=float(norm_sq), eigen_squared=eigen_sq, gap=float(norm_sq) - eigen_sq, commutator_norm=commutator)


def random_element(lie: LieAlgebra, rng: np.random.Generator) -> GElement:
    return GElement(rng.standard_normal(lie.dim) + 1j * rng.standard_normal(lie.dim), False)


def verify(lie: LieAlgebra, samples: int = 100, seed: int = SolverDefaults.SEED,
           logging: bool = SolverDefaults.LOGGING) -> dict:
    """Run the full invariant suite and return a report.

    Exact checks: Jacobi identity and Killing invariance on basis triples,
    Tr(ad ad) against the root data, the normalization B(e_phi, e_-phi) = 1
    and [e_phi, e_-phi] = phi^#, reality and antisymmetry of N, rho as an
    involutive automorphism, and the grading by ad(x0). Float check: the
    h-adjoint of ad(w) equals ad(-rho(w)) for ``samples`` random w.

    Returns:
        dict with ``passed`` and one entry per check.
    """
    rs = lie.rs
    n = lie.dim
    table = lie.structure_constants
    weights = lie.weights
    zero_weight = weights[0]
    checks = {}

    def basis_bracket(i, j):
        return table.get((i, j), {})

    def combine(row, j, sign=1):
        out = {}
        for k, c in row.items():
            for m, d in basis_bracket(k, j).items():
                out[m] = out.get(m, 0) + sign * c * d
        return out

    jacobi_failures = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = {}
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, val in combine(basis_bracket(a, b), c).items():
                        total[m] = total.get(m, 0) + val
                if any(sympy.expand(v) != 0 for v in total.values()):
                    jacobi_failures += 1
    checks["jacobi"] = {"passed": jacobi_failures == 0, "failures": jacobi_failures}

    km = lie.killing_matrix
    gram_failures = 0
    for a in range(n):
        for b in range(n):
            if a < lie.rank and b < lie.rank:
                expected = rs.killing_gram[a, b]
            elif a >= lie.rank and b >= lie.rank and _add(weights[a], weights[b]) == zero_weight:
                expected = 1
            else:
                expected = 0
            if sympy.simplify(km[a, b] - expected) != 0:
                gram_failures += 1
    checks["killing_trace_form"] = {"passed": gram_failures == 0, "failures": gram_failures}

    invariance_failures = 0
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if _add(_add(weights[x], weights[y]), weights[z]) != zero_weight:
                    continue
                left = sum((c * km[m, z] for m, c in basis_bracket(x, y).items()), sympy.Integer(0))
                right = sum((c * km[y, m] for m, c in basis_bracket(x, z).items()), sympy.Integer(0))
                if sympy.expand(left + right) != 0:
                    invariance_failures += 1
    checks["killing_invariance"] = {"passed": invariance_failures == 0, "failures": invariance_failures}

    norm_failures = 0
    for root in rs.roots:
        ix, iy = lie.index(root), lie.index(negate(root))
        expected = {i: sympy.Integer(c) for i, c in enumerate(root) if c}
        if basis_bracket(ix, iy) != expected or km[ix, iy] != 1:
            norm_failures += 1
    checks["normalization"] = {"passed": norm_failures == 0, "failures": norm_failures}

    n_failures = 0
    for x in rs.roots:
        for y in rs.roots:
            value = lie.structure_constant(x, y)
            if value == 0:
                continue
            if not value.is_real or sympy.expand(value + lie.structure_constant(negate(x), negate(y))) != 0:
                n_failures += 1
    checks["structure_constants_real_antisymmetric"] = {"passed": n_failures == 0, "failures": n_failures}

    rho = CartanInvolution(lie)
    perm = rho.permutation
    rho_failures = sum(1 for k in range(n) if perm[perm[k]] != k)
    for i in range(n):
        for j in range(n):
            direct = {perm[k]: -c for k, c in basis_bracket(i, j).items()}
            image = basis_bracket(perm[i], perm[j])
            if {k: sympy.expand(c) for k, c in direct.items()} != {k: sympy.expand(c) for k, c in image.items()}:
                rho_failures += 1
    checks["rho_involutive_automorphism"] = {"passed": rho_failures == 0, "failures": rho_failures}

    ad_x0 = ad_matrix(lie, lie.x0)
    grading_error = float(np.max(np.abs(ad_x0 - np.diag(lie.heights))))
    checks["grading"] = {"passed": grading_error <= SolverDefaults.IDENTITY_TOL, "max_error": grading_error}

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        w = random_element(lie, rng)
        ad_w = ad_matrix(lie, w)
        adjoint = hermitian_adjoint(rho, ad_w)
        expected = ad_matrix(lie, -rho(w))
        worst = max(worst, float(np.max(np.abs(adjoint - expected)) / max(1.0, np.max(np.abs(ad_w)))))
    checks["adjoint_identity"] = {"passed": worst <= SolverDefaults.IDENTITY_TOL, "max_error": worst, "samples": samples}

    passed = all(check["passed"] for check in checks.values())
    if logging:
        Logger.note(f"{'✅' if passed else '❌'} Chevalley suite for {rs.simple_type}: "
                    + ", ".join(f"{name}={'ok' if c['passed'] else 'FAIL'}" for name, c in checks.items()))
    return {"type": str(rs.simple_type), "dim": n, "passed": passed, "checks": checks}
