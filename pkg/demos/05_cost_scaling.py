"""Per-step cost growth of the two solvers across grid sets.

All of N_sigma, N_rho, N_theta double from one set to the next, so the
splitting solver's O(N_rho N_theta^2) diffraction stage grows about 8x
per step while the FFT/WENO5 integrator grows about 4x (times slowly
varying log factors).  The integrator therefore overtakes the baseline
from Set 3 on even though it starts slower in the paper's setting.

Measures a few steps per set (median of repetitions) and prints the
growth table plus the nonlinear/linear bucket split of the integrator.
"""

from nwave import cost_scaling_study

rows = cost_scaling_study([1, 2], solver="both", steps=4, reps=3)

print(f"{'solver':10s} {'set':>3s} {'s/step':>9s} {'growth':>7s} "
      f"{'nonlinear':>10s} {'linear':>8s}")
for row in rows:
    growth = "--" if row.growth_vs_previous is None else f"x{row.growth_vs_previous:.2f}"
    t = row.timing
    print(f"{row.solver:10s} {row.set_id:3d} {row.per_step_seconds:9.4f} "
          f"{growth:>7s} {t.per_step_nonlinear:10.4f} {t.per_step_linear:8.4f}")

print("\nextrapolated full-run totals (per-step median x N_sigma):")
for row in rows:
    print(f"  {row.solver:10s} set {row.set_id}: {row.timing.total_seconds:8.1f} s")
