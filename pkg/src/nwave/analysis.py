"""Initial data, error and convergence machinery, and the timing studies.

The convergence study marches one solver at several sigma resolutions on a
fixed (rho, theta) grid and compares the final fields against a fine-sigma
reference in the relative discrete l2 norm; the rate beta between
consecutive resolutions comes from the error quotient.  The cost study
measures per-step wall time across the Table-1-style grid sets and fits
the growth factor between consecutive sets (every count doubles set to
set, so the splitting solver is expected near 8x per step and the
exponential solver near 4x times slowly-varying log factors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import isotonic_regression

from .errors import InstabilityError
from .grid import (DomainConfig, Field2D, build_axes, extract_region, l2_norm,
                   relative_error, rho_nodes_closed)
from .reports import RunReport
from .turbulence import VelocityFields, downsample_fields


def initial_nwave(rho_nodes: np.ndarray, theta_nodes: np.ndarray, A: float,
                  B: float = 0.05) -> Field2D:
    """N-wave initial pulse, independent of rho.

    V0(theta) = ((theta-3pi)/2pi) * (tanh((B/4A)(theta-4pi)) -
    tanh((B/4A)(theta-2pi))).  The absorption coefficient sets the shock
    steepness, so A = 0 is rejected.
    """
    if A == 0:
        raise ValueError("initial_nwave: A must be nonzero (pulse width is B/4A)")
    theta = np.asarray(theta_nodes, dtype=np.float64)
    steep = B / (4.0 * A)
    row = ((theta - 3.0 * np.pi) / (2.0 * np.pi)
           * (np.tanh(steep * (theta - 4.0 * np.pi))
              - np.tanh(steep * (theta - 2.0 * np.pi))))
    return Field2D(np.tile(row, (len(rho_nodes), 1)))


def convergence_rate(err1: float, err2: float, n1: int, n2: int) -> float:
    """beta = ln(err1/err2) / ln(n2/n1) for n1 < n2."""
    if err1 <= 0 or err2 <= 0:
        raise ValueError("convergence_rate: errors must be positive")
    if not n1 < n2:
        raise ValueError("convergence_rate: need n1 < n2")
    return math.log(err1 / err2) / math.log(n2 / n1)


@dataclass
class ConvergenceRow:
    n_sigma: int
    err: float
    beta: float | None = None
    unstable: bool = False


def _run_solver(solver: str, config: DomainConfig, fields: VelocityFields,
                threads: int = 1, **kwargs) -> RunReport:
    if solver == "splitting":
        from .splitting import run_splitting

        rho = rho_nodes_closed(config)
        _, _, theta = build_axes(config)
        v0 = initial_nwave(rho, theta, config.A, config.B)
        return run_splitting(config, v0, fields, threads=threads, **kwargs)
    from .exprk import run_exprk22

    _, rho, theta = build_axes(config)
    v0 = initial_nwave(rho, theta, config.A, config.B)
    scheme = "expeuler" if solver == "expeuler" else "exprk22"
    return run_exprk22(config, v0, fields, scheme=scheme, threads=threads,
                       **kwargs)


def convergence_study(config_base: DomainConfig, n_list, n_ref: int,
                      solver: str = "exprk22",
                      fields_master: VelocityFields | None = None,
                      reference: Field2D | None = None,
                      use_roi: bool = False, threads: int = 1,
                      **run_kwargs):
    """Relative-error table against an n_ref reference run.

    ``fields_master`` must be sampled on the closed rho grid at the n_ref
    sigma resolution; coarser runs reuse it by strided downsampling, so
    every run sees the same velocity realization.  A precomputed
    ``reference`` final field (e.g. from the second-order solver) may be
    shared across studies.  Unstable runs are flagged and skipped in the
    rate column.
    """
    n_list = sorted(int(n) for n in n_list)
    if any(n_ref % n for n in n_list):
        raise ValueError("every N in n_list must divide n_ref")
    if fields_master is None:
        raise ValueError("convergence_study needs the master velocity fields")
    if fields_master.shape[0] != n_ref + 1:
        raise ValueError(
            f"master fields carry {fields_master.shape[0]} sigma rows, "
            f"expected n_ref+1 = {n_ref + 1}"
        )

    def final_field(n_sigma: int) -> Field2D:
        config = replace(config_base, N_sigma=n_sigma)
        fields = downsample_fields(fields_master, n_ref // n_sigma, 1)
        return _run_solver(solver, config, fields, threads=threads,
                           **run_kwargs).final

    if solver == "splitting":
        rho_nodes = rho_nodes_closed(config_base)
    else:
        rho_nodes = build_axes(config_base)[1]
    theta_nodes = build_axes(config_base)[2]

    def restrict(f: Field2D) -> Field2D:
        if not use_roi:
            return f
        sub, _, _ = extract_region(f, rho_nodes, theta_nodes,
                                   config_base.roi_rho, config_base.roi_theta)
        return sub

    if reference is None:
        reference = final_field(n_ref)
    ref = restrict(reference)
    d_rho, d_theta = config_base.d_rho, config_base.d_theta

    rows: list[ConvergenceRow] = []
    prev: ConvergenceRow | None = None
    for n in n_list:
        try:
            num = final_field(n)
        except InstabilityError:
            rows.append(ConvergenceRow(n, float("nan"), None, unstable=True))
            prev = None
            continue
        err = relative_error(ref, restrict(num), d_rho, d_theta)
        beta = None
        if prev is not None and not prev.unstable:
            beta = convergence_rate(prev.err, err, prev.n_sigma, n)
        rows.append(ConvergenceRow(n, err, beta))
        prev = rows[-1]
    return rows


def max_overshoot(trace: np.ndarray) -> float:
    """Oscillation proxy for one theta-trace.

    Fits the better (lower residual) of the increasing/decreasing isotonic
    regressions and returns max(trace) - max(fit): zero for monotone data,
    positive when ripples sharpen the peak beyond any monotone envelope.
    """
    y = np.asarray(trace, dtype=np.float64)
    up = isotonic_regression(y, increasing=True).x
    down = isotonic_regression(y, increasing=False).x
    fit = up if np.sum((y - up) ** 2) <= np.sum((y - down) ** 2) else down
    return float(np.max(y) - np.max(fit))


@dataclass
class CheckpointComparison:
    sigma: float
    rel_l2_roi: float
    amplitude_ratio: float  # max|splitting| / max|exprk22| on the roi


@dataclass
class ComparisonReport:
    checkpoints: list[CheckpointComparison]
    trace_sigma: float | None = None
    trace_rho: float | None = None
    overshoot_splitting: float | None = None
    overshoot_exprk22: float | None = None


def compare_solvers(config: DomainConfig, fields: VelocityFields,
                    sigma_checkpoints, trace_sigma: float | None = None,
                    trace_rho: float | None = None, threads: int = 1,
                    guard: float = 10.0,
                    solver_pair=("splitting", "exprk22")) -> ComparisonReport:
    """Run two solvers from the same pulse and compare on the roi.

    Both runs consume the same velocity realization (sampled on the closed
    rho grid); fields are compared on the shared open-grid rho nodes
    restricted to the region of interest.  When (trace_sigma, trace_rho)
    is given, the snapshot traces there feed the max-overshoot oscillation
    metric.  ``solver_pair`` defaults to (splitting, exprk22); passing the
    same name twice is the self-consistency (zero difference) case.
    """
    _, rho_open, theta = build_axes(config)
    snaps = sorted(set(list(sigma_checkpoints)
                       + ([trace_sigma] if trace_sigma is not None else [])))

    def open_grid_snapshots(solver: str):
        rep = _run_solver(solver, config, fields, threads=threads,
                          guard=guard, snapshot_sigmas=snaps)
        trim = (lambda f: Field2D(f.values[:-1])) if solver == "splitting" \
            else (lambda f: f)
        return {s: trim(f) for s, f in rep.snapshots.items()}

    snaps_a = open_grid_snapshots(solver_pair[0])
    snaps_b = open_grid_snapshots(solver_pair[1])

    checkpoints = []
    for s in sigma_checkpoints:
        sub_a, _, _ = extract_region(snaps_a[s], rho_open, theta,
                                     config.roi_rho, config.roi_theta)
        sub_b, _, _ = extract_region(snaps_b[s], rho_open, theta,
                                     config.roi_rho, config.roi_theta)
        diff = l2_norm(Field2D(sub_a.values - sub_b.values),
                       config.d_rho, config.d_theta)
        denom = l2_norm(sub_b, config.d_rho, config.d_theta)
        amp = np.max(np.abs(sub_a.values)) / np.max(np.abs(sub_b.values))
        checkpoints.append(CheckpointComparison(s, diff / denom, float(amp)))

    report = ComparisonReport(checkpoints, trace_sigma, trace_rho)
    if trace_sigma is not None and trace_rho is not None:
        j = int(round((trace_rho - config.rho_min) / config.d_rho))
        k_lo = int(np.searchsorted(theta, config.roi_theta[0] - 1e-9))
        k_hi = int(np.searchsorted(theta, config.roi_theta[1] + 1e-9))
        tr_a = snaps_a[trace_sigma].values[j, k_lo:k_hi]
        tr_b = snaps_b[trace_sigma].values[j, k_lo:k_hi]
        report.overshoot_splitting = max_overshoot(tr_a)
        report.overshoot_exprk22 = max_overshoot(tr_b)
    return report


GRID_SETS = {
    1: dict(N_sigma=300, N_rho=1250, N_theta=7 * 64),
    2: dict(N_sigma=600, N_rho=2500, N_theta=7 * 128),
    3: dict(N_sigma=1200, N_rho=5000, N_theta=7 * 256),
    4: dict(N_sigma=2400, N_rho=10000, N_theta=7 * 512),
}


def preset_config(set_id: int, **overrides) -> DomainConfig:
    """Table-1 grid presets on the production domain."""
    if set_id not in GRID_SETS:
        raise ValueError(f"unknown grid set {set_id}; choose from 1..4")
    params = dict(GRID_SETS[set_id])
    params.update(overrides)
    return DomainConfig(**params)


@dataclass
class TimingReport:
    """Per-run totals and per-step bucket averages of one measured run."""

    solver: str
    set_id: int
    n_steps_measured: int
    per_step_seconds: float
    per_step_nonlinear: float
    per_step_linear: float
    total_seconds: float
    variance_flagged: bool
    threads: int
    precision: str = "double"


@dataclass
class ScalingRow:
    set_id: int
    solver: str
    per_step_seconds: float
    growth_vs_previous: float | None
    growth_exponent: float | None  # log2 of the growth between sets
    timing: TimingReport | None = None


def _measure_solver(solver: str, set_id: int, steps: int, reps: int,
                    threads: int, seed: int = 0) -> TimingReport:
    from .turbulence import TurbulenceParams, evaluate_fields, sample_modes

    config = preset_config(set_id)
    steps = max(steps, 2)
    spec = sample_modes(TurbulenceParams(seed=seed))
    sigma = np.arange(steps + 1) * config.d_sigma
    fields = evaluate_fields(spec, spec.lam, sigma, rho_nodes_closed(config))

    per_rep = []
    nonlin = lin = 0.0
    for _ in range(reps):
        report = _run_solver(solver, config, fields, threads=threads,
                             max_steps=steps)
        # first step treated as warmup (JIT, allocator)
        per_rep.append(float(np.median(report.step_seconds[1:])))
        if report.step_nonlinear is not None:
            nonlin = float(np.mean(report.step_nonlinear[1:]))
            lin = float(np.mean(report.step_linear[1:]))
    med = float(np.median(per_rep))
    spread = (max(per_rep) - min(per_rep)) / med if med > 0 else 0.0
    return TimingReport(
        solver=solver,
        set_id=set_id,
        n_steps_measured=(steps - 1) * reps,
        per_step_seconds=med,
        per_step_nonlinear=nonlin,
        per_step_linear=lin,
        total_seconds=med * GRID_SETS[set_id]["N_sigma"],
        variance_flagged=spread > 0.2,
        threads=threads,
    )


def cost_scaling_study(sets, solver: str = "both", steps: int = 4,
                       reps: int = 3, threads: int = 1, seed: int = 0):
    """Per-step wall time across grid sets plus growth factors.

    ``total_seconds`` in each timing report extrapolates the measured
    per-step median to the set's full N_sigma.  Growth factors compare
    consecutive sets of the same solver.
    """
    sets = sorted(int(s) for s in sets)
    solvers = ["splitting", "exprk22"] if solver == "both" else [solver]
    rows: list[ScalingRow] = []
    for name in solvers:
        prev: ScalingRow | None = None
        for set_id in sets:
            timing = _measure_solver(name, set_id, steps, reps, threads, seed)
            growth = exponent = None
            if prev is not None:
                growth = timing.per_step_seconds / prev.per_step_seconds
                exponent = math.log2(growth)
            row = ScalingRow(set_id, name, timing.per_step_seconds,
                             growth, exponent, timing)
            rows.append(row)
            prev = row
    return rows
