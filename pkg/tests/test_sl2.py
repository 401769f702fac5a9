"""Tests for sl2-triples of subsets of Pi^Q."""

import numpy as np
import sympy

from cyclichiggs import (
    InputError,
    build_lie_algebra,
    build_root_system,
    compute_u_S,
    compute_v_S,
    parse_type,
)
from cyclichiggs.sl2 import exhaustive_suite, parse_subset


def _lie(name):
    return build_lie_algebra(build_root_system(parse_type(name)), logging=False)


def test_u_S_single_root():
    """For S = {alpha_1} in A2, u_S = 3 alpha_1^# since (alpha_1, alpha_1) = 1/3."""
    rs = build_root_system(parse_type("A2"))
    assert compute_u_S(rs, "alpha_1") == (3, 0)
    assert compute_u_S(rs, [0]) == (3, 0)
    print("✅ u_S for a single root")


def test_u_S_values_on_S():
    """phi(u_S) = 1 exactly for every phi in S."""
    lie = _lie("B3")
    for subset in ([0, 3], [1, 2], [0, 1, 2]):
        triple = compute_v_S(lie, subset, logging=False)
        for root in triple.roots:
            value = sum((sympy.Integer(c) * x for c, x in zip(root, triple.u_values)), sympy.Integer(0))
            assert value == 1, f"S = {triple.labels}: {root}(u_S) = {value}"
        assert triple.certification["values_on_S_exact"]
    print("✅ u_S takes the value 1 on S")


def test_principal_triple():
    """S = {alpha_1, ..., alpha_l} gives u_S = x0."""
    lie = _lie("A2")
    triple = compute_v_S(lie, "alpha_1,alpha_2", logging=False)
    assert triple.u_sharp == lie.rs.x0
    assert all(x > 0 for x in triple.beta_squared)
    assert triple.certification["passed"]
    print("✅ principal triple")


def test_certification():
    """Bracket relations hold and ad(u_S) has spectrum {-1, 0, 1} on the triple."""
    triple = compute_v_S(_lie("G2"), ["alpha_2", "-psi"], logging=False)
    cert = triple.certification
    assert cert["passed"]
    assert max(cert["errors"].values()) <= 1e-12
    assert np.allclose(cert["spectrum"], [-1.0, 0.0, 1.0], atol=1e-9)
    assert triple.labels == ("alpha_2", "-psi")
    print("✅ certification")


def test_phases():
    """Rotating the coefficients of v_S keeps the relations."""
    triple = compute_v_S(_lie("A3"), [0, 2], logging=False)
    rotated = triple.with_phases([0.4, -1.1])
    assert rotated.certification["passed"]
    assert np.allclose(np.abs(rotated.beta), np.abs(triple.beta))
    try:
        triple.with_phases([0.1])
        raise AssertionError("Wrong number of phases should raise")
    except InputError:
        pass
    print("✅ phases")


def test_exhaustive():
    """Every nonempty proper subset certifies, for every type of rank at most 4 checked here."""
    for name in ("A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"):
        lie = _lie(name)
        report = exhaustive_suite(lie, logging=False)
        assert report["passed"], (name, report["failures"])
        assert report["subsets"] == 2 ** (lie.rank + 1) - 2
    print("✅ exhaustive suite up to rank 4")


def test_invalid_subsets():
    """Empty, full, repeated and unknown subsets are input errors."""
    rs = build_root_system(parse_type("A2"))
    for bad in ("", [], "alpha_1,alpha_2,-psi", [0, 0], "alpha_9", [5], 5, None):
        try:
            parse_subset(rs, bad)
            raise AssertionError(f"{bad!r} should be rejected")
        except InputError:
            pass
    assert parse_subset(rs, " -psi , alpha_1") == (0, 2)
    print("✅ invalid subsets")


def test_to_dict():
    """to_dict is JSON-ready with exact entries as strings."""
    report = compute_v_S(_lie("A1"), "alpha_1", logging=False).to_dict()
    assert report["subset"] == ["alpha_1"]
    assert report["u_sharp"] == ["2"]
    assert report["u_values"] == ["1"]
    assert report["beta_squared"] == ["4"]
    print("✅ to_dict")


def main():
    test_u_S_single_root()
    test_u_S_values_on_S()
    test_principal_triple()
    test_certification()
    test_phases()
    test_exhaustive()
    test_invalid_subsets()
    test_to_dict()
    print("\n🎉 All sl2-triple tests passed!")


if __name__ == "__main__":
    main()
