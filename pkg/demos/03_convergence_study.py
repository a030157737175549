"""Sigma-convergence of the exponential integrator vs the first-order schemes.

Builds one velocity realization at the reference resolution, reruns the
ExpRK22 and exponential-Euler schemes at coarser sigma resolutions on the
same spatial grid, and prints the relative-error tables with the observed
rates: the two-stage scheme sits near beta = 2, the Euler variant near
beta = 1.
"""

import dataclasses

import numpy as np

from nwave import (DomainConfig, TurbulenceParams, convergence_study,
                   evaluate_fields, rho_nodes_closed, sample_modes)
from nwave.analysis import _run_solver

config = DomainConfig(Sigma=30.0, N_sigma=480, N_rho=625, N_theta=448,
                      A=3.4e-4, B=0.05)
n_ref = 480
n_list = [40, 60, 80, 120]

spec = sample_modes(TurbulenceParams(seed=0))
sigma = np.arange(n_ref + 1) * (config.Sigma / n_ref)
master = evaluate_fields(spec, spec.lam, sigma, rho_nodes_closed(config))
reference = _run_solver(
    "exprk22", dataclasses.replace(config, N_sigma=n_ref), master).final

for solver in ("exprk22", "expeuler"):
    rows = convergence_study(config, n_list, n_ref, solver=solver,
                             fields_master=master, reference=reference)
    print(f"\n{solver} against the N_sigma = {n_ref} reference:")
    print("  N_sigma        err    beta")
    for row in rows:
        beta = "   --" if row.beta is None else f"{row.beta:5.2f}"
        print(f"  {row.n_sigma:7d}  {row.err:9.3e}  {beta}")
