"""cyclichiggs Configuration

Centralized configuration for default solver behavior.

You can override defaults in two ways:
1. Pass parameters directly to the solvers and verification functions
2. Modify SolverDefaults class attributes at runtime:

    >>> from cyclichiggs import SolverDefaults
    >>> SolverDefaults.MAX_WORKERS = 8
    >>> SolverDefaults.LOGGING = False
"""


class SolverDefaults:
    """Default configuration values for cyclichiggs.

    These class attributes can be modified at runtime to change defaults
    for all future solves. Values are read when a call starts, so runtime
    changes apply to every later call that does not pass the option.

    Example:
        >>> SolverDefaults.TOL = 1e-9
        >>> SolverDefaults.MAX_ITER = 100
    """

    # Newton settings
    TOL: float = 1e-10           # sup-node residual at convergence
    MAX_ITER: int = 50
    ARMIJO_C: float = 1e-4
    DAMPING_FLOOR: float = 2.0 ** -20
    ROUNDOFF_FACTOR: float = 4.0  # multiple of the rounding bound on the residual accepted as converged

    # Inner SPD solve
    CG_RTOL: float = 1e-12
    CG_MAXITER: int = 20000

    # Numerical rank and certification
    RANK_TOL: float = 1e-8       # relative to the largest singular value
    RANK_MARGIN: float = 1e3     # singular values within tol/margin..tol*margin are ambiguous
    EIGVEC_COND_MAX: float = 1e10
    IDENTITY_TOL: float = 1e-12

    # Concurrency settings
    MAX_WORKERS: int = 4         # parallel solves in decay studies

    # Cache settings
    CACHE_TTL: int = 30  # Days
    CACHE_DIRECTORY: str = "data/cyclichiggs"

    # Output
    FLOAT_DIGITS: int = 17
    SEED: int = 0

    # Logging
    LOGGING: bool = True  # Enable/disable logging
