"""Exception types shared across the toolkit.

Each maps to a CLI exit code (see ``iongate.cli``): configuration problems
exit 2, solver non-convergence exits 3, truncation or oracle failures exit 4.
"""


class ConfigError(ValueError):
    """Invalid configuration or arguments. CLI exit code 2."""


class SolverError(RuntimeError):
    """Root finding did not converge, or a converged point is unusable. CLI exit code 3."""


class TruncationError(RuntimeError):
    """Fock-space truncation too small for the requested accuracy. CLI exit code 4."""


class BusEntangledError(RuntimeError):
    """The motional bus failed to factor out of a supposedly spin-only state."""


EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_TRUNCATION = 4
