"""sl2-triples (u_S, v_S, -rho(v_S)) attached to nonempty proper subsets S of Pi^Q."""

import dataclasses
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import sympy
from logorator import Logger

from .chevalley import CartanInvolution, GElement, LieAlgebra, ad_matrix, bracket
from .config import SolverDefaults
from .errors import InputError, VerificationError
from .rootsys import RootSystem, proper_subsets, weight_one_eigenroots

__all__ = ["SL2Triple", "compute_u_S", "compute_v_S", "certify", "parse_subset", "proper_subsets"]


def parse_subset(rs: RootSystem, subset) -> Tuple[int, ...]:
    """Normalize S to sorted Pi^Q indices; accepts indices, labels or a comma-separated string.

    Raises:
        InputError: if S is empty, all of Pi^Q, repeats a root or names an unknown label.
    """
    if isinstance(subset, str):
        subset = [part for part in subset.split(",") if part.strip()]
    elif not isinstance(subset, (list, tuple)):
        raise InputError(f"S must be a label string or a list, got {subset!r}")
    indices = []
    for item in subset:
        if isinstance(item, str):
            item = item.strip()
            if item not in rs.labels:
                raise InputError(f"Unknown root label {item!r}; expected one of {rs.labels}")
            indices.append(rs.labels.index(item))
        else:
            if not 0 <= int(item) <= rs.rank:
                raise InputError(f"Index {item} outside Pi^Q of {rs}")
            indices.append(int(item))
    if len(set(indices)) != len(indices):
        raise InputError(f"Subset {subset} repeats a root")
    if not indices:
        raise InputError("S must be nonempty")
    if len(indices) == rs.rank + 1:
        raise InputError("S must be a proper subset of Pi^Q (Pi^Q is linearly dependent)")
    return tuple(sorted(indices))


def _gram_coefficients(rs: RootSystem, subset: Tuple[int, ...]) -> Tuple[sympy.Rational, ...]:
    roots = [weight_one_eigenroots(rs)[k] for k in subset]
    gram = sympy.Matrix(len(roots), len(roots), lambda i, j: rs.pair(roots[i], roots[j]))
    ones = sympy.Matrix([1] * len(roots))
    return tuple(gram.LUsolve(ones))


def compute_u_S(rs: RootSystem, subset) -> Tuple[sympy.Rational, ...]:
    """Sharp coordinates of the unique u_S in span{phi^# : phi in S} with phi(u_S) = 1 on S."""
    subset = parse_subset(rs, subset)
    a = _gram_coefficients(rs, subset)
    roots = [weight_one_eigenroots(rs)[k] for k in subset]
    return tuple(sum((a_phi * root[i] for a_phi, root in zip(a, roots)), sympy.Integer(0)) for i in range(rs.rank))


@dataclasses.dataclass(frozen=True, eq=False)
class SL2Triple:
    """Standard basis (u_S, v_S, -rho(v_S)) of a copy of sl2 in g.

    Attributes:
        subset: indices of S in Pi^Q.
        u_sharp: exact sharp coordinates of u_S.
        beta_squared: exact |beta_phi|^2 for phi in S, all positive.
        beta: the coefficients beta_phi of v_S (positive reals unless phases were applied).
        certification: residuals of the bracket relations and the ad(u_S) spectrum.
    """

    lie: LieAlgebra
    subset: Tuple[int, ...]
    u_sharp: Tuple[sympy.Rational, ...]
    beta_squared: Tuple[sympy.Rational, ...]
    beta: Tuple[complex, ...]
    certification: Dict = dataclasses.field(default_factory=dict)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.lie.rs.labels[k] for k in self.subset)

    @property
    def roots(self):
        pi_q = weight_one_eigenroots(self.lie.rs)
        return tuple(pi_q[k] for k in self.subset)

    @property
    def u_values(self) -> Tuple[sympy.Rational, ...]:
        """Simple-root values alpha_i(u_S)."""
        return self.lie.rs.to_values(self.u_sharp)

    @property
    def u(self) -> GElement:
        return self.lie.cartan([float(y) for y in self.u_sharp])

    @property
    def v(self) -> GElement:
        v = self.lie.zero(exact=False)
        for root, b in zip(self.roots, self.beta):
            v.coefficients[self.lie.index(root)] = b
        return v

    @property
    def f(self) -> GElement:
        """-rho(v_S) = sum conj(beta_phi) e_-phi."""
        return -CartanInvolution(self.lie)(self.v)

    def with_phases(self, gammas: Sequence[float]) -> "SL2Triple":
        """Rotate beta_phi by e^{i gamma_phi} and re-certify."""
        if len(gammas) != len(self.subset):
            raise InputError(f"Expected {len(self.subset)} phases, got {len(gammas)}")
        beta = tuple(b * complex(math.cos(g), math.sin(g)) for b, g in zip(self.beta, gammas))
        rotated = dataclasses.replace(self, beta=beta, certification={})
        return dataclasses.replace(rotated, certification=certify(rotated))

    def to_dict(self) -> dict:
        return {
            "subset": list(self.labels),
            "u_sharp": [str(y) for y in self.u_sharp],
            "u_values": [str(x) for x in self.u_values],
            "beta_squared": [str(x) for x in self.beta_squared],
            "beta": [complex(b) for b in self.beta],
            "certification": self.certification,
        }


def certify(triple: SL2Triple, tol: Optional[float] = None) -> dict:
    """Check [v, f] = 2u, [u, v] = v, [u, f] = -f and that ad u has eigenvalues 1, 0, -1 on the span."""
    tol = SolverDefaults.IDENTITY_TOL if tol is None else tol
    lie = triple.lie
    u, v, f = triple.u, triple.v, triple.f

    def error(left: GElement, right: GElement) -> float:
        expected = right.to_complex()
        scale = max(1.0, float(np.max(np.abs(expected))))
        return float(np.max(np.abs(left.to_complex() - expected))) / scale

    errors = {
        "v_f": error(bracket(lie, v, f), u.scale(2.0)),
        "u_v": error(bracket(lie, u, v), v),
        "u_f": error(bracket(lie, u, f), -f),
    }
    span = np.column_stack([v.to_complex(), u.to_complex(), f.to_complex()])
    image = ad_matrix(lie, u) @ span
    restricted, *_ = np.linalg.lstsq(span, image, rcond=None)
    spectrum = sorted(np.linalg.eigvals(restricted).real.tolist())
    spectrum_error = float(np.max(np.abs(np.array(spectrum) - np.array([-1.0, 0.0, 1.0]))))
    exact_values = all(
        sum((sympy.Integer(c) * x for c, x in zip(root, triple.u_values)), sympy.Integer(0)) == 1
        for root in triple.roots
    )
    return {
        "errors": errors,
        "spectrum": spectrum,
        "spectrum_error": spectrum_error,
        "values_on_S_exact": exact_values,
        "passed": exact_values and max(errors.values()) <= tol and spectrum_error <= tol * 1e3,
    }


def compute_v_S(lie: LieAlgebra, subset, logging: bool = SolverDefaults.LOGGING) -> SL2Triple:
    """Solve sum |beta_phi|^2 phi^# = 2 u_S, take beta_phi > 0 and certify the triple.

    Raises:
        InputError: if S is empty or all of Pi^Q.
        VerificationError: if some |beta_phi|^2 <= 0 or the certification fails.
    """
    rs = lie.rs
    subset = parse_subset(rs, subset)
    a = _gram_coefficients(rs, subset)
    beta_squared = tuple(2 * a_phi for a_phi in a)
    labels = [rs.labels[k] for k in subset]
    if any(x <= 0 for x in beta_squared):
        report = {"subset": labels, "beta_squared": [str(x) for x in beta_squared]}
        raise VerificationError(f"Non-positive |beta|^2 for S = {labels}: {report['beta_squared']}", report)
    triple = SL2Triple(
        lie=lie,
        subset=subset,
        u_sharp=compute_u_S(rs, subset),
        beta_squared=beta_squared,
        beta=tuple(complex(math.sqrt(float(x))) for x in beta_squared),
    )
    triple = dataclasses.replace(triple, certification=certify(triple))
    if not triple.certification["passed"]:
        raise VerificationError(f"sl2 relations fail for S = {labels}", triple.certification)
    if logging:
        Logger.note(f"✓ sl2-triple for S = {{{', '.join(labels)}}} in {rs.simple_type}")
    return triple


def exhaustive_suite(lie: LieAlgebra, logging: bool = SolverDefaults.LOGGING) -> dict:
    """Build and certify the triple of every nonempty proper subset of Pi^Q."""
    failures = []
    worst = 0.0
    subsets = proper_subsets(lie.rs)
    for subset in subsets:
        try:
            triple = compute_v_S(lie, subset, logging=False)
            worst = max(worst, max(triple.certification["errors"].values()))
        except VerificationError as e:
            failures.append({"subset": [lie.rs.labels[k] for k in subset], "error": str(e)})
    if logging:
        Logger.note(f"{'✅' if not failures else '❌'} {len(subsets)} sl2-triples in {lie.rs.simple_type}, worst residual {worst:.2e}")
    return {"type": str(lie.rs.simple_type), "subsets": len(subsets), "failures": failures,
            "max_error": worst, "passed": not failures}
