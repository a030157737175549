"""Sample a random velocity field and inspect its statistics.

Draws the mode set for the default parameters (sigma_u = 3 m/s,
c0 = 343 m/s, T0 = 20 ms, 500 modes), evaluates the dimensionless
components on a coarse (sigma, rho) grid, and reports the magnitude
bound that the solvers rely on.  With matplotlib available it also
saves a density plot of both components.
"""

import numpy as np

from nwave import TurbulenceParams, evaluate_fields, sample_modes

params = TurbulenceParams(seed=0)
spec = sample_modes(params)
print(f"length scale lam = {params.lam:.2f} m, correlation length L = {params.L:.2f} m")
print(f"wavenumbers span [{params.wavenumber_min:.4f}, {params.wavenumber_max:.4f}] 1/m "
      f"over {params.n_modes} modes")

sigma = np.linspace(0.0, 120.0, 241)
rho = np.linspace(0.0, 400.0, 801)
fields = evaluate_fields(spec, spec.lam, sigma, rho)

print(f"max|U_par|  = {np.max(np.abs(fields.u_par)):.4f}")
print(f"max|U_perp| = {np.max(np.abs(fields.u_perp)):.4f}")
print("(the production setting keeps both below about 0.05)")

# incompressibility: every mode's amplitude vector is orthogonal to its
# wave vector
kx = spec.wavenumbers * np.cos(spec.angles)
ky = spec.wavenumbers * np.sin(spec.angles)
residual = np.max(np.abs(spec.amp1 * kx + spec.amp2 * ky))
print(f"max |U~ . K| over modes = {residual:.2e}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for ax, arr, label in ((axes[0], fields.u_par, "U_par"),
                           (axes[1], fields.u_perp, "U_perp")):
        im = ax.imshow(arr.T, origin="lower", aspect="auto",
                       extent=[sigma[0], sigma[-1], rho[0], rho[-1]])
        ax.set_ylabel("rho")
        fig.colorbar(im, ax=ax, label=label)
    axes[1].set_xlabel("sigma")
    fig.savefig("turbulence_field.png", dpi=120)
    print("wrote turbulence_field.png")
except ImportError:
    print("matplotlib not available; skipping the density plot")
