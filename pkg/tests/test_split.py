"""Tests for the split automorphism, cyclic elements and classification regions."""

import numpy as np
import sympy

from cyclichiggs import (
    CyclicElement,
    InputError,
    bracket_rho_closed_form,
    build_lie_algebra,
    build_root_system,
    cartan_involution,
    classification_region,
    eigenspace_decomposition,
    is_cyclic,
    is_regular_semisimple,
    o_invariant,
    parse_type,
    split_automorphism,
    verify_split,
)
from cyclichiggs.split import (
    bracket_rho_coefficients,
    bracket_rho_normalized,
    regular_semisimple_report,
    split_suite,
    torus_act,
    torus_orbit_element,
)

SUITE_TYPES = ("A1", "A2", "A3", "A4", "B2", "C3", "D4", "G2")


def _lie(name):
    return build_lie_algebra(build_root_system(parse_type(name)), logging=False)


def test_order_and_eigenspaces():
    """sigma has order h+1, g_0 = t and g_1 is spanned by Pi^Q."""
    for name in ("A2", "B2", "G2"):
        lie = _lie(name)
        sigma = split_automorphism(lie)
        assert sigma.order() == lie.rs.h + 1
        decomposition = eigenspace_decomposition(sigma)
        assert decomposition.bracket_compatible
        assert decomposition.pieces[0] == tuple(range(lie.rank))
        assert decomposition.dims[1] == lie.rank + 1
        assert sum(decomposition.dims.values()) == lie.dim
    print("✅ order and eigenspaces")


def test_cyclic_elements_are_split():
    """Random cyclic elements have an l-dimensional centralizer meeting t only in 0."""
    lie = _lie("A2")
    sigma = split_automorphism(lie)
    rng = np.random.default_rng(11)
    for _ in range(5):
        u = CyclicElement.random(lie.rs, rng)
        report = verify_split(lie, sigma, u, logging=False)
        assert report["split"], report
        assert report["dim_centralizer"] == lie.rank
        assert report["dim_intersection_g0"] == 0
        assert is_regular_semisimple(lie, u.to_gelement(lie))
    print("✅ cyclic elements are split and regular semisimple")


def test_non_cyclic_elements():
    """Dropping a coefficient loses regular semisimplicity; verify_split refuses it."""
    lie = _lie("A2")
    sigma = split_automorphism(lie)
    u = CyclicElement(lie.rs, (1.0, 1.0, 0.0))
    assert not is_cyclic(u)
    assert not is_regular_semisimple(lie, u.to_gelement(lie))
    try:
        verify_split(lie, sigma, u, logging=False)
        raise AssertionError("verify_split should reject a non-cyclic element")
    except InputError:
        pass
    report = regular_semisimple_report(lie, lie.zero(exact=False))
    assert report["regular_semisimple"] is False
    print("✅ non-cyclic elements")


def test_bracket_rho_closed_form():
    """[u, rho(u)] matches -(|b_i|^2 - psi_i |b_-psi|^2) alpha_i^#."""
    rho_cases = 0
    for name in ("A2", "B2", "G2"):
        lie = _lie(name)
        rho = cartan_involution(lie)
        rng = np.random.default_rng(5)
        for _ in range(3):
            u = CyclicElement.random(lie.rs, rng)
            result = bracket_rho_closed_form(lie, rho, u)
            assert result.residual <= 1e-12, f"{name}: residual {result.residual}"
            normalized = bracket_rho_normalized(lie.rs, u.normalized())
            assert np.allclose(normalized, bracket_rho_coefficients(u))
            rho_cases += 1
    print(f"✅ closed form of [u, rho(u)] in {rho_cases} cases")


def test_exact_bracket_rho():
    """Exact coefficients give exact sharp coordinates."""
    rs = build_root_system(parse_type("G2"))
    u = CyclicElement(rs, (sympy.Integer(1), sympy.Integer(2), sympy.Integer(1)))
    assert u.exact
    # psi = 3 alpha_1 + 2 alpha_2
    assert bracket_rho_coefficients(u) == (sympy.Integer(2), sympy.Integer(-2))
    print("✅ exact [u, rho(u)] coefficients")


def test_torus_orbit():
    """Imaginary beta keeps [u, rho(u)] = 0; the invariant o is torus-invariant."""
    rs = build_root_system(parse_type("B2"))
    decoupled = torus_orbit_element(rs, [0.7j, -1.3j])
    assert np.allclose(bracket_rho_coefficients(decoupled), 0.0, atol=1e-12)
    coupled = torus_orbit_element(rs, [0.4, 0.0])
    assert not np.allclose(bracket_rho_coefficients(coupled), 0.0)

    u = CyclicElement.random(rs, np.random.default_rng(2))
    moved = torus_act(u, [0.3 + 0.1j, -0.8])
    assert abs(o_invariant(rs, moved) - o_invariant(rs, u)) <= 1e-12 * abs(o_invariant(rs, u))
    print("✅ torus orbit and invariant o")


def test_normalized_coefficients():
    """from_normalized divides out psi_i^(1/2)."""
    rs = build_root_system(parse_type("G2"))
    u = CyclicElement.from_normalized(rs, [1.0, 1.0, 1.0])
    assert np.allclose([complex(b) for b in u.b], [3 ** 0.5, 2 ** 0.5, 1.0])
    assert np.allclose(u.normalized(), [1.0, 1.0, 1.0])
    try:
        CyclicElement(rs, (1.0, 1.0))
        raise AssertionError("Wrong length should raise")
    except InputError:
        pass
    print("✅ normalized coefficients")


def test_classification_region():
    """The region is the simplex alpha_i(beta) <= 0, psi(beta) >= -(h+1+m)."""
    rs = build_root_system(parse_type("A2"))
    region = classification_region(rs, 0)
    assert region.in_d_positive and not region.is_trivial
    assert region.c_theta == 0
    assert region.vertices == [(0, 0), (-3, 0), (0, -3)]
    assert region.contains([-0.5, -0.5])
    assert not region.contains([0.1, -0.5])
    assert not region.contains([-2.0, -2.0])
    assert region.contains([0.01, -1.0], tol=0.05)

    edge = classification_region(rs, -3)
    assert edge.is_trivial and edge.vertices == [(0, 0)]
    assert classification_region(rs, -4).is_empty
    assert classification_region(rs, -4).vertices == []
    assert classification_region(rs, 3).c_theta == sympy.Rational(-1)

    report = region.describe([-1.0, -1.0])
    assert report["admissible"] is True
    assert report["vertices"] == [["0", "0"], ["-3", "0"], ["0", "-3"]]
    for bad in (lambda: classification_region(rs, 0.5), lambda: region.contains([0.0])):
        try:
            bad()
            raise AssertionError("Invalid region input should raise")
        except InputError:
            pass
    print("✅ classification region")


def test_split_suite():
    """The randomized suite passes with no oracle disagreements and reports the order of sigma."""
    for name in SUITE_TYPES:
        lie = _lie(name)
        report = split_suite(lie, samples=20, logging=False)
        assert report["passed"], (name, report)
        assert report["order"] == lie.rs.h + 1
        assert report["split_failures"] == 0
        assert report["oracle_disagreements"] == 0
    print(f"✅ split suite for {', '.join(SUITE_TYPES)}")


def main():
    test_order_and_eigenspaces()
    test_cyclic_elements_are_split()
    test_non_cyclic_elements()
    test_bracket_rho_closed_form()
    test_exact_bracket_rho()
    test_torus_orbit()
    test_normalized_coefficients()
    test_classification_region()
    test_split_suite()
    print("\n🎉 All split automorphism tests passed!")


if __name__ == "__main__":
    main()
