"""Tests for package exports: verify all public API symbols are importable."""


def test_exports():
    """All documented exports should be importable from cyclichiggs."""
    from cyclichiggs import (
        AnnulusGrid,
        ConvergenceError,
        CyclicElement,
        CyclicHiggsError,
        InputError,
        LieAlgebra,
        NumericError,
        RadialGrid,
        RectangleGrid,
        RootSystem,
        SolverDefaults,
        TodaProblem,
        TodaSolution,
        VerificationError,
        build_lie_algebra,
        build_root_system,
        canonical_xi,
        compute_v_S,
        decay_study,
        solve_dirichlet,
        solve_radial,
        split_automorphism,
    )

    for name in (AnnulusGrid, CyclicElement, LieAlgebra, RadialGrid, RectangleGrid, RootSystem,
                 SolverDefaults, TodaProblem, TodaSolution):
        assert name is not None
    for fn in (build_lie_algebra, build_root_system, canonical_xi, compute_v_S, decay_study,
               solve_dirichlet, solve_radial, split_automorphism):
        assert callable(fn)
    for error in (ConvergenceError, InputError, NumericError, VerificationError):
        assert issubclass(error, CyclicHiggsError)
    print("✅ all exports importable")


def test_all_names_resolve():
    """Every name in __all__ should be an attribute of the package."""
    import cyclichiggs

    missing = [name for name in cyclichiggs.__all__ if not hasattr(cyclichiggs, name)]
    assert not missing, f"Missing exports: {missing}"
    print(f"✅ {len(cyclichiggs.__all__)} names in __all__ resolve")


def test_version():
    """__version__ should be a string."""
    import cyclichiggs
    assert isinstance(cyclichiggs.__version__, str)
    assert len(cyclichiggs.__version__) > 0
    print(f"✅ version = {cyclichiggs.__version__}")


def test_error_hierarchy():
    """Errors keep their builtin bases so callers can catch either."""
    from cyclichiggs import ConvergenceError, InputError, NumericError, VerificationError

    assert issubclass(InputError, ValueError)
    assert issubclass(NumericError, ArithmeticError)
    assert issubclass(ConvergenceError, NumericError)
    assert issubclass(VerificationError, AssertionError)

    error = ConvergenceError("stalled", solution="best")
    assert error.solution == "best"
    assert VerificationError("bad").report == {}
    print("✅ error hierarchy")


def test_cli_entry_point():
    """The console script target and the toda subpackage should be importable."""
    from cyclichiggs.cli import build_parser, main
    from cyclichiggs import toda

    assert callable(main)
    assert build_parser().prog == "cyclichiggs"
    for name in ("solve_dirichlet", "solve_radial", "decay_study_async", "model_convergence", "asymptotic_slope"):
        assert hasattr(toda, name), f"Missing toda export: {name}"
    print("✅ cli entry point and toda exports")


def main():
    test_exports()
    test_all_names_resolve()
    test_version()
    test_error_hierarchy()
    test_cli_entry_point()
    print("\n🎉 All export tests passed!")


if __name__ == "__main__":
    main()
