"""Exception taxonomy mirrored by the CLI exit codes."""


class UsageError(ValueError):
    """The caller broke an operation's contract (dimensions, unknown symbol, ...)."""


class NumericFailure(RuntimeError):
    """A numerical routine missed its target (root counts, convergence).

    ``details`` carries machine-readable diagnostics, e.g. per-branch
    found/expected counts.
    """

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.details = details or {}


class IdentityViolation(RuntimeError):
    """A guaranteed structural identity failed; indicates a real defect."""
