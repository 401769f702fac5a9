"""Command-line front end.

Every run prints one JSON report (or CSV for grid output) and exits with
0 (ok), 1 (verification failed), 2 (input error) or 3 (numeric error).
"""

import argparse
import dataclasses
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from logorator import Logger

from . import io
from .cache import SolveCache, problem_key
from .chevalley import build_lie_algebra, verify
from .config import SolverDefaults
from .errors import ConvergenceError, CyclicHiggsError, InputError, NumericError, VerificationError
from .rootsys import build_root_system, info, parse_type
from .sl2 import compute_v_S, exhaustive_suite
from .split import CyclicElement, classification_region, split_suite
from .toda.decay import decay_study
from .toda.grids import AnnulusGrid, RadialGrid, RectangleGrid
from .toda.model import asymptotic_slope, model_convergence, model_metric_data
from .toda.problem import TodaSolution
from .toda.solver import radial_problem, solve_dirichlet, solve_radial, sup_residual

STATUS_CODES = {"ok": 0, "verification-failed": 1, "input-error": 2, "numeric-error": 3}
GRID_COMMANDS = ("toda-solve", "toda-radial", "decay-study")


@dataclasses.dataclass
class RunReport:
    status: str
    command: Optional[str]
    config: dict
    payload: dict
    timing: Optional[float] = None
    csv: Optional[str] = None
    output: Optional[str] = None
    include_timing: bool = False

    @property
    def exit_code(self) -> int:
        return STATUS_CODES[self.status]

    def to_dict(self, timing: bool = False) -> dict:
        out = {"status": self.status, "command": self.command, "config": self.config, "result": self.payload}
        if timing and self.timing is not None:
            out["timing_seconds"] = self.timing
        return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _numbers(text: str, kind: Callable = float) -> List:
    try:
        return [kind(part.strip().replace(" ", "")) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InputError(f"Cannot parse {text!r} as a comma-separated list: {e}") from e


def _lie(type_text: str, logging: bool):
    return build_lie_algebra(build_root_system(parse_type(type_text)), logging=logging)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=SolverDefaults.SEED)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--max-iter", type=int, default=None)
    common.add_argument("--output", default=None, help="write the CSV/JSON output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--verbose", action="store_true", help="enable logging")
    common.add_argument("--cache", action="store_true", help="reuse cached Toda solutions")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    parser = _Parser(prog="cyclichiggs", description="Cyclic Higgs bundles: Lie theory and Toda solvers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rootsys-info", parents=[common], help="root data of a simple type")
    p.add_argument("type")

    p = sub.add_parser("chevalley-verify", parents=[common], help="exact invariant suite of the normalized basis")
    p.add_argument("type")
    p.add_argument("--samples", type=int, default=100)

    p = sub.add_parser("split-verify", parents=[common], help="randomized Kostant split suite")
    p.add_argument("type")
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("split-region", parents=[common], help="classification region at a puncture")
    p.add_argument("type")
    p.add_argument("--ord", type=int, required=True)
    p.add_argument("--beta", default=None, help="simple-root values of beta, comma-separated")

    p = sub.add_parser("sl2", parents=[common], help="sl2-triple of a subset of Pi^Q")
    p.add_argument("type")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--subset", help="comma-separated labels; write --subset=-psi,... when the first one is -psi")
    group.add_argument("--all", action="store_true", help="every nonempty proper subset")

    for name in ("toda-solve", "toda-radial"):
        p = sub.add_parser(name, parents=[common], help="solve a Toda problem document")
        p.add_argument("problem")
        p.add_argument("--initial", choices=("harmonic", "zero"), default="harmonic")

    p = sub.add_parser("model-verify", parents=[common], help="certify a model metric under refinement")
    p.add_argument("type")
    p.add_argument("--subset", required=True, help="comma-separated labels of S; use --subset=-psi,... for a leading -psi")
    p.add_argument("--beta", required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--r-min", type=float, default=0.1)
    p.add_argument("--r-max", type=float, default=0.5)
    p.add_argument("--ns", type=int, default=65)
    p.add_argument("--ntheta", type=int, default=8)
    p.add_argument("--levels", type=int, default=3)

    p = sub.add_parser("decay-study", parents=[common], help="exponential decay toward the canonical metric")
    p.add_argument("type")
    p.add_argument("--b", required=True, help="cyclic coefficients over Pi^Q, comma-separated")
    p.add_argument("--delta", required=True)
    p.add_argument("--t-values", default="1,2,3,4")
    p.add_argument("--nodes", type=int, default=33)
    p.add_argument("--inner", type=float, default=0.5)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("slope-fit", parents=[common], help="estimate beta at the inner boundary of an annulus")
    p.add_argument("problem")
    p.add_argument("--window", default=None, help="s-interval lo,hi")
    p.add_argument("--no-loglog", action="store_true")
    p.add_argument("--ord", type=int, default=None, help="zero order of o at the puncture")
    p.add_argument("--slack", type=float, default=0.05)
    return parser


def _rootsys_info(args, logging) -> Tuple[dict, bool]:
    return info(build_root_system(parse_type(args.type))), True


def _chevalley_verify(args, logging) -> Tuple[dict, bool]:
    report = verify(_lie(args.type, logging), samples=args.samples, seed=args.seed, logging=logging)
    return report, report["passed"]


def _split_verify(args, logging) -> Tuple[dict, bool]:
    report = split_suite(_lie(args.type, logging), samples=args.samples, seed=args.seed, tol=args.tol, logging=logging)
    return report, report["passed"]


def _split_region(args, logging) -> Tuple[dict, bool]:
    rs = build_root_system(parse_type(args.type))
    region = classification_region(rs, args.ord)
    beta = None if args.beta is None else _numbers(args.beta)
    return region.describe(beta), True


def _sl2(args, logging) -> Tuple[dict, bool]:
    lie = _lie(args.type, logging)
    if args.all:
        report = exhaustive_suite(lie, logging=logging)
        return report, report["passed"]
    triple = compute_v_S(lie, args.subset, logging=logging)
    return triple.to_dict(), triple.certification["passed"]


def _solution_payload(solution: TodaSolution) -> dict:
    recomputed = sup_residual(solution.problem, solution.xi)
    return {**solution.summary(), "recomputed_residual": recomputed, "grid": solution.problem.grid.to_dict()}


def _solve(args, logging, radial: bool) -> TodaSolution:
    problem = io.load_problem(args.problem, tol=args.tol, max_iter=args.max_iter)
    if radial:
        problem = radial_problem(problem)
    key = problem_key({"problem": io.jsonable(io.resolved_config(problem)), "initial": args.initial})
    cache = SolveCache(key, cache=args.cache, logging=logging)
    cached = cache.load()
    if cached is not None:
        return TodaSolution(problem=problem, xi=np.asarray(cached["xi"], dtype=float),
                            residual_history=tuple(cached["residual_history"]), step_history=tuple(cached["step_history"]),
                            residual=cached["residual"], iterations=cached["iterations"], converged=True,
                            initial_guess=cached["initial_guess"],
                            roundoff_floor=cached.get("roundoff_floor", 0.0))
    solution = solve_dirichlet(problem, initial=args.initial, logging=logging)
    cache.save({**io.jsonable(solution.summary()), "xi": solution.xi.tolist()})
    return solution


def _toda(args, logging, radial: bool) -> Tuple[dict, bool, Optional[str], dict]:
    solution = _solve(args, logging, radial)
    payload = _solution_payload(solution)
    text = io.csv_text(solution.header(), solution.rows()) if args.format == "csv" else None
    return payload, True, text, io.resolved_config(solution.problem)


def _model_verify(args, logging) -> Tuple[dict, bool]:
    lie = _lie(args.type, logging)
    model = model_metric_data(lie, _numbers(args.beta), args.subset, _numbers(args.m, int), args.t, logging=logging)
    grid = AnnulusGrid.from_radii(args.r_min, args.r_max, args.ns, args.ntheta)
    study = model_convergence(model, grid, levels=args.levels, logging=logging)
    radius = 0.25
    norm_errors = model.norm_errors(radius) if args.r_min <= radius <= args.r_max else []
    radial_gap = float(np.max(np.abs(model.evaluate(grid) - model.evaluate_at(np.abs(grid.z)))))
    orders_ok = bool(study["orders"]) and all(1.8 <= q <= 2.2 for q in study["orders"])
    passed = orders_ok and all(e <= 1e-12 for e in norm_errors) and radial_gap <= 1e-12
    payload = {**study, "model": model.to_dict(), "norm_errors": norm_errors, "norm_radius": radius,
               "radial_gap": radial_gap, "passed": passed}
    return payload, passed


def _decay_study(args, logging) -> Tuple[dict, bool, Optional[str], dict]:
    lie = _lie(args.type, logging)
    b = CyclicElement(lie.rs, tuple(_numbers(args.b, complex)))
    delta = _numbers(args.delta)
    grid = RectangleGrid((-1.0, 1.0), (-1.0, 1.0), args.nodes, args.nodes)
    study = decay_study(lie, b, _numbers(args.t_values), delta, grid=grid, inner_fraction=args.inner,
                        tol=args.tol, max_iter=args.max_iter, max_workers=args.workers, logging=logging)
    summary = study.summary()
    if any(delta):
        passed = study.monotone and study.fit.slope < 0 and study.fit.r_squared > 0.99
    else:
        passed = all(m == 0 for m in study.distances)
    summary["passed"] = passed
    text = None
    if args.format == "csv":
        text = io.csv_text(["t", "distance"], zip(study.t_values, study.distances))
    config = {"b": [complex(v) for v in b.b], "delta": delta, "grid": grid.to_dict(), "inner_fraction": args.inner}
    return summary, passed, text, config


def _slope_fit(args, logging) -> Tuple[dict, bool]:
    problem = io.load_problem(args.problem, tol=args.tol, max_iter=args.max_iter)
    if not isinstance(problem.grid, (AnnulusGrid, RadialGrid)):
        raise InputError(f"slope-fit needs an annulus or radial domain, got {problem.grid.kind}")
    if problem.higgs.is_monomial:
        solution = solve_radial(problem, logging=logging)
    else:
        solution = solve_dirichlet(problem, logging=logging)
    window = None if args.window is None else tuple(_numbers(args.window))
    if window is not None and len(window) != 2:
        raise InputError(f"--window needs two numbers, got {args.window!r}")
    fit = asymptotic_slope(solution, window=window, loglog=not args.no_loglog)
    m = args.ord
    if m is None:
        m = problem.higgs.o_order() or 0
    region = classification_region(problem.rs, m)
    admissible = region.contains(fit.beta, tol=args.slack)
    payload = {"fit": fit.to_dict(), "region": region.describe(), "admissible": admissible,
               "solve": solution.summary()}
    return payload, admissible


COMMANDS: Dict[str, Callable] = {
    "rootsys-info": _rootsys_info,
    "chevalley-verify": _chevalley_verify,
    "split-verify": _split_verify,
    "split-region": _split_region,
    "sl2": _sl2,
    "model-verify": _model_verify,
    "slope-fit": _slope_fit,
}


def _config(args) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("verbose", "timing", "output", "cache")}
    config["tol"] = SolverDefaults.TOL if args.tol is None else args.tol
    config["max_iter"] = SolverDefaults.MAX_ITER if args.max_iter is None else args.max_iter
    return config


def execute(argv: Optional[Sequence[str]] = None) -> RunReport:
    """Parse ``argv`` and run the command, mapping errors to a status."""
    start = time.perf_counter()
    command, output, include_timing = None, None, False
    config: dict = {"argv": list(sys.argv[1:] if argv is None else argv)}
    try:
        args = build_parser().parse_args(argv)
        command, output, include_timing = args.command, args.output, args.timing
        config = _config(args)
        logging = args.verbose
        if args.format == "csv" and command not in GRID_COMMANDS:
            raise InputError(f"--format csv is available for {', '.join(GRID_COMMANDS)}")
        text = None
        if command in ("toda-solve", "toda-radial"):
            payload, passed, text, problem_config = _toda(args, logging, radial=command == "toda-radial")
            config["problem"] = problem_config
        elif command == "decay-study":
            payload, passed, text, study_config = _decay_study(args, logging)
            config.update(study_config)
        else:
            payload, passed = COMMANDS[command](args, logging)
        status = "ok" if passed else "verification-failed"
    except VerificationError as e:
        status, payload, text = "verification-failed", {"error": str(e), "report": e.report}, None
    except InputError as e:
        status, payload, text = "input-error", {"error": str(e)}, None
    except ConvergenceError as e:
        payload = {"error": str(e)}
        if e.solution is not None:
            payload["solution"] = e.solution.summary()
        status, text = "numeric-error", None
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as e:
        status, payload, text = "numeric-error", {"error": str(e)}, None
    return RunReport(status=status, command=command, config=config, payload=payload,
                     timing=time.perf_counter() - start, csv=text, output=output,
                     include_timing=include_timing)


def run(argv: Optional[Sequence[str]] = None) -> RunReport:
    """Execute and write the outputs.

    JSON goes to ``--output`` or stdout. With ``--format csv`` the CSV takes
    ``--output`` (or stdout) and the JSON report goes to stdout only when
    the CSV went to a file.
    """
    report = execute(argv)
    document = io.dumps(report.to_dict(timing=report.include_timing))
    if report.csv is not None:
        io.write_text(report.csv, report.output)
        if report.output is not None:
            io.write_text(document)
    else:
        io.write_text(document, report.output)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        report = run(argv)
    except CyclicHiggsError as e:
        Logger.note(f"❌ {e}")
        return 2
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
