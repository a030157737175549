"""Exception types shared by the solvers and the CLI."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration input."""


class CflViolationError(RuntimeError):
    """A stability (CFL) precondition failed while strict checking is active."""


class InstabilityError(RuntimeError):
    """The marched solution left the divergence guard."""

    def __init__(self, sigma: float, max_abs: float):
        super().__init__(
            f"solution diverged at sigma={sigma:.6g} (max|V| = {max_abs:.3e})"
        )
        self.sigma = sigma
        self.max_abs = max_abs


class BudgetExceededError(RuntimeError):
    """The wall-clock budget of a run was exhausted before completion."""
