"""Von Neumann stability of the linear schemes.

For each order and candidate solution, scan the spectral radius of the
amplification matrix over the Courant number and report the maximal stable
value.  The full-degree candidate's bound shrinks with order (0.5, 0.384,
0.304 at three-decimal resolution); the first-order fallbacks stay at 0.5.
The 4th-order full-degree candidate has a soft onset: its radius creeps
above 1 by ~1e-4 near nu = 0.3, which is also printed.

Run:  python3 demos/04_stability_map.py          (writes stability_map.png)
"""

import numpy as np

from wccs.stability import (
    build_coefficient_matrices,
    amplification_spectrum,
    default_theta_grid,
    max_stable_nu,
    stability_table,
)

print("order  candidate  max stable nu (slack 1e-4)   strict (slack 1e-10)")
for q, m, nu in stability_table():
    strict = max_stable_nu(q, m, slack=1e-10)
    print(f"{q:5d}  {m:9d}  {nu:27.3f}   {strict:.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit("matplotlib not installed; table printed above")

nus = np.linspace(0.0, 0.6, 241)
thetas = default_theta_grid()
fig, ax = plt.subplots(figsize=(7, 4.5))
for order, style in ((2, "-"), (3, "--"), (4, "-.")):
    radii = []
    for nu in nus:
        m1, m2 = build_coefficient_matrices(order, 0, nu)
        radii.append(amplification_spectrum(m1, m2, thetas).max())
    ax.semilogy(nus, np.maximum(np.array(radii) - 1.0, 1e-16) + 1e-16,
                style, label=f"order {order}, full-degree")
ax.axhline(1e-4, color="gray", lw=0.6)
ax.set_xlabel("Courant number (half-step)")
ax.set_ylabel("max spectral radius - 1")
ax.set_title("Growth beyond the unit circle")
ax.legend()
fig.tight_layout()
fig.savefig("stability_map.png", dpi=130)
print("wrote stability_map.png")
