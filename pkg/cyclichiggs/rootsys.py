"""Exact root-system combinatorics of simple complex Lie algebras.

Roots are integer coefficient vectors over the simple roots. Elements of the
real Cartan subalgebra t_R are handled in two coordinate systems:

- *simple-root values* (the coefficients over the dual basis eps_i, i.e. the
  tuple (alpha_1(x), ..., alpha_l(x))); a root phi evaluates as phi . x.
- *sharp coordinates* (the coefficients over alpha_i^#, the Killing duals of
  the simple roots); phi^# has sharp coordinates equal to phi itself.

The Killing form restricted to t_R is computed literally as
B(x, y) = sum over all roots of phi(x) phi(y), with exact rationals.
"""

import dataclasses
import functools
import itertools
import re
from typing import Dict, List, Sequence, Tuple

import sympy

from .errors import InputError, VerificationError

Root = Tuple[int, ...]

_FAMILY_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 3,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

_CLASSICAL_DIMENSIONS = {
    "A": lambda n: n * (n + 2),
    "B": lambda n: n * (2 * n + 1),
    "C": lambda n: n * (2 * n + 1),
    "D": lambda n: n * (2 * n - 1),
    "E": lambda n: {6: 78, 7: 133, 8: 248}[n],
    "F": lambda n: 52,
    "G": lambda n: 14,
}


@dataclasses.dataclass(frozen=True)
class SimpleType:
    """Cartan type of a simple Lie algebra, e.g. ``SimpleType("G", 2)``."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _FAMILY_RANKS:
            raise InputError(f"Unknown family {self.family!r}; expected one of {sorted(_FAMILY_RANKS)}")
        if not isinstance(self.rank, int) or not _FAMILY_RANKS[self.family](self.rank):
            raise InputError(f"Invalid rank {self.rank} for family {self.family}")

    @classmethod
    def parse(cls, text: str) -> "SimpleType":
        """Parse ``"A2"``, ``"g2"`` or ``"E 8"``."""
        match = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", text or "")
        if match is None:
            raise InputError(f"Cannot parse simple type {text!r}")
        return cls(match.group(1).upper(), int(match.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def parse_type(text: str) -> SimpleType:
    return SimpleType.parse(text)


def cartan_matrix(simple_type: SimpleType) -> Tuple[Tuple[int, ...], ...]:
    """Cartan matrix a_ij = <alpha_i^vee, alpha_j> in Bourbaki numbering."""
    n = simple_type.rank
    family = simple_type.family
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j):
        a[i][j] = a[j][i] = -1

    if family in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if family == "B":
            a[n - 1][n - 2] = -2
        elif family == "C":
            a[n - 2][n - 1] = -2
    elif family == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif family == "E":
        for i, j in ((0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)):
            if j < n:
                link(i, j)
    elif family == "F":
        for i in range(3):
            link(i, i + 1)
        a[2][1] = -2
    elif family == "G":
        a[0][1] = -3
        a[1][0] = -1
    return tuple(tuple(row) for row in a)


def reflect(cartan: Sequence[Sequence[int]], i: int, root: Root) -> Root:
    """Simple reflection s_i(phi) = phi - <phi, alpha_i^vee> alpha_i."""
    pairing = sum(c * a_ij for c, a_ij in zip(root, cartan[i]))
    return tuple(c - pairing if k == i else c for k, c in enumerate(root))


def reflection_closure(cartan: Sequence[Sequence[int]], roots) -> frozenset:
    """Smallest set containing ``roots`` and stable under all simple reflections."""
    found = set(roots)
    frontier = list(found)
    while frontier:
        next_frontier = []
        for root in frontier:
            for i in range(len(cartan)):
                image = reflect(cartan, i, root)
                if image not in found:
                    found.add(image)
                    next_frontier.append(image)
        frontier = next_frontier
    return frozenset(found)


def _order_key(root: Root):
    return (sum(root), tuple(-c for c in root))


@dataclasses.dataclass(frozen=True)
class GradedPiece:
    """Roots of g^(j) = span of g_phi with phi(x0) = j; j = 0 also carries t."""

    j: int
    roots: Tuple[Root, ...]
    includes_cartan: bool
    rank: int

    @property
    def dim(self) -> int:
        return len(self.roots) + (self.rank if self.includes_cartan else 0)


@dataclasses.dataclass(frozen=True, eq=False)
class RootSystem:
    """Exact root data of a simple Lie algebra with its Kostant grading.

    Attributes:
        simple_type: the Cartan type.
        cartan_matrix: a_ij = <alpha_i^vee, alpha_j>.
        simple_roots: coordinates of alpha_i in the ambient space t_R^* with
            basis {alpha_i} (unit vectors, exact).
        positive_roots: Delta^+ in a fixed total order (height, then
            reverse-lexicographic coefficients); simple roots come first.
        highest_root: psi; its coefficients psi_i are positive integers.
        h: psi(x0), the height of the highest root.
        killing_gram: B(alpha_i^#, alpha_j^#), exact and positive definite.
        killing_gram_eps: B(eps_i, eps_j) = sum over Delta of phi_i phi_j.
    """

    simple_type: SimpleType
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    simple_roots: Tuple[Tuple[sympy.Rational, ...], ...]
    positive_roots: Tuple[Root, ...]
    highest_root: Root
    h: int
    killing_gram: sympy.ImmutableMatrix
    killing_gram_eps: sympy.ImmutableMatrix

    def __str__(self):
        return str(self.simple_type)

    def __repr__(self):
        return f"RootSystem({self.simple_type})"

    @property
    def rank(self) -> int:
        return self.simple_type.rank

    @property
    def dim(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    @property
    def psi_coefficients(self) -> Root:
        return self.highest_root

    @functools.cached_property
    def roots(self) -> Tuple[Root, ...]:
        """All roots: Delta^+ followed by -Delta^+ in the same order."""
        return self.positive_roots + tuple(negate(r) for r in self.positive_roots)

    @functools.cached_property
    def _root_set(self) -> frozenset:
        return frozenset(self.roots)

    @functools.cached_property
    def dual_basis(self) -> Tuple[Tuple[sympy.Rational, ...], ...]:
        """eps_i in sharp coordinates: alpha_j(eps_i) = delta_ij."""
        g = self.killing_gram_eps
        return tuple(tuple(g[k, i] for k in range(self.rank)) for i in range(self.rank))

    @functools.cached_property
    def x0(self) -> Tuple[sympy.Rational, ...]:
        """Grading element x0 = sum eps_i, in sharp coordinates."""
        return tuple(sum(eps[k] for eps in self.dual_basis) for k in range(self.rank))

    @functools.cached_property
    def labels(self) -> Tuple[str, ...]:
        """Names of Pi^Q = (alpha_1, ..., alpha_l, -psi)."""
        return tuple(f"alpha_{i + 1}" for i in range(self.rank)) + ("-psi",)

    def is_root(self, root) -> bool:
        return tuple(root) in self._root_set

    def height(self, root) -> int:
        return sum(root)

    def root_of_label(self, label: str) -> Root:
        """Root for a Pi^Q label such as ``"alpha_2"`` or ``"-psi"``."""
        try:
            index = self.labels.index(label.strip())
        except ValueError:
            raise InputError(f"Unknown root label {label!r} for {self}; expected one of {self.labels}") from None
        return weight_one_eigenroots(self)[index]

    def pair(self, root_a, root_b) -> sympy.Rational:
        """Killing pairing (phi, phi') = B(phi^#, phi'^#), exact."""
        m = self.killing_gram
        return sum(
            (sympy.Integer(a) * m[i, j] * b for i, a in enumerate(root_a) for j, b in enumerate(root_b) if a and b),
            sympy.Integer(0),
        )

    def sharp(self, root) -> Tuple[sympy.Rational, ...]:
        """Simple-root values of phi^#, i.e. alpha_j(phi^#) = (alpha_j, phi)."""
        m = self.killing_gram
        return tuple(sum((m[j, k] * c for k, c in enumerate(root)), sympy.Integer(0)) for j in range(self.rank))

    def to_sharp_coords(self, values):
        """Convert simple-root values to sharp coordinates (exact if input is)."""
        g = self.killing_gram_eps
        return tuple(sum((g[i, k] * values[k] for k in range(self.rank)), sympy.Integer(0)) for i in range(self.rank))

    def to_values(self, sharp_coords):
        """Convert sharp coordinates to simple-root values."""
        m = self.killing_gram
        return tuple(sum((m[i, k] * sharp_coords[k] for k in range(self.rank)), sympy.Integer(0)) for i in range(self.rank))


def negate(root: Root) -> Root:
    return tuple(-c for c in root)


@functools.lru_cache(maxsize=None)
def build_root_system(simple_type: SimpleType) -> RootSystem:
    """Enumerate Delta^+ by reflection closure and assemble the exact root data.

    Raises:
        InputError: if ``simple_type`` is not a valid type (raised by SimpleType).
        VerificationError: if the enumerated data contradicts the classical
            dimension of the type.
    """
    if not isinstance(simple_type, SimpleType):
        simple_type = SimpleType.parse(str(simple_type))
    n = simple_type.rank
    cartan = cartan_matrix(simple_type)
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]

    all_roots = reflection_closure(cartan, simple)
    positive = sorted((r for r in all_roots if all(c >= 0 for c in r)), key=_order_key)
    if 2 * len(positive) != len(all_roots) or any(
        not (all(c >= 0 for c in r) or all(c <= 0 for c in r)) for r in all_roots
    ):
        raise VerificationError(f"Reflection closure of {simple_type} produced mixed-sign roots")

    highest = positive[-1]
    if any(all(a >= b for a, b in zip(r, highest)) and r != highest for r in positive):
        raise VerificationError(f"Highest root of {simple_type} is not unique")
    h = sum(highest)

    gram_eps = sympy.zeros(n, n)
    for r in positive:
        for i in range(n):
            for j in range(n):
                gram_eps[i, j] += 2 * r[i] * r[j]
    gram = gram_eps.inv()

    dim = n + 2 * len(positive)
    if dim != _CLASSICAL_DIMENSIONS[simple_type.family](n):
        raise VerificationError(f"dim g = {dim} for {simple_type} does not match the classical dimension")

    return RootSystem(
        simple_type=simple_type,
        cartan_matrix=cartan,
        simple_roots=tuple(tuple(sympy.Integer(c) for c in r) for r in simple),
        positive_roots=tuple(positive),
        highest_root=highest,
        h=h,
        killing_gram=sympy.ImmutableMatrix(gram),
        killing_gram_eps=sympy.ImmutableMatrix(gram_eps),
    )


def grading_piece(rs: RootSystem, j: int) -> GradedPiece:
    """Roots of height j; the j = 0 piece is the Cartan subalgebra t."""
    if abs(j) > rs.h:
        return GradedPiece(j=j, roots=(), includes_cartan=False, rank=rs.rank)
    roots = tuple(r for r in rs.roots if sum(r) == j)
    return GradedPiece(j=j, roots=roots, includes_cartan=(j == 0), rank=rs.rank)


def weight_one_eigenroots(rs: RootSystem) -> Tuple[Root, ...]:
    """Pi^Q = (alpha_1, ..., alpha_l, -psi): the roots of g_1 for Ad(w)."""
    return tuple(tuple(1 if k == i else 0 for k in range(rs.rank)) for i in range(rs.rank)) + (
        negate(rs.highest_root),
    )


def height_census(rs: RootSystem) -> Dict[int, int]:
    """Number of roots at each nonzero height."""
    census: Dict[int, int] = {}
    for r in rs.roots:
        census[sum(r)] = census.get(sum(r), 0) + 1
    return dict(sorted(census.items()))


def info(rs: RootSystem) -> dict:
    """JSON-ready summary used by ``rootsys-info``."""
    return {
        "type": str(rs.simple_type),
        "rank": rs.rank,
        "cartan_matrix": [list(row) for row in rs.cartan_matrix],
        "positive_roots": [list(r) for r in rs.positive_roots],
        "highest_root": list(rs.highest_root),
        "psi_coefficients": list(rs.psi_coefficients),
        "h": rs.h,
        "dim": rs.dim,
        "killing_gram": [[str(rs.killing_gram[i, j]) for j in range(rs.rank)] for i in range(rs.rank)],
        "pi_q": {label: list(root) for label, root in zip(rs.labels, weight_one_eigenroots(rs))},
    }


def proper_subsets(rs: RootSystem) -> List[Tuple[int, ...]]:
    """All nonempty proper subsets of Pi^Q as sorted index tuples."""
    size = rs.rank + 1
    return [combo for k in range(1, size) for combo in itertools.combinations(range(size), k)]
