"""Run report containers shared by the two solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Field2D


@dataclass
class RunReport:
    """Outcome of a marched run.

    ``step_nonlinear``/``step_linear`` carry the per-step bucket times of
    the exponential solver (WENO evaluations vs. transforms and multiplier
    algebra); the splitting solver leaves them ``None``.  ``transforms``
    counts 2-D spectral transforms performed inside the stepping loop.
    """

    solver: str
    n_steps: int
    d_sigma: float
    wall_seconds: float
    max_abs_v: float
    final: Field2D
    snapshots: dict[float, Field2D] = field(default_factory=dict)
    step_seconds: np.ndarray | None = None
    step_nonlinear: np.ndarray | None = None
    step_linear: np.ndarray | None = None
    transforms: int = 0
    threads: int = 1
    precision: str = "double"

    @property
    def nonlinear_seconds(self) -> float:
        return float(np.sum(self.step_nonlinear)) if self.step_nonlinear is not None else 0.0

    @property
    def linear_seconds(self) -> float:
        return float(np.sum(self.step_linear)) if self.step_linear is not None else 0.0
