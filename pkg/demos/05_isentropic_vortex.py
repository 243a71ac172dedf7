"""2D accuracy check: isentropic vortex transported diagonally.

The vortex rides a uniform diagonal stream across a periodic box and
returns unchanged, giving an exact reference for 2D convergence.  The
table printed here reproduces the superconvergent coarse-mesh orders of
the 4th-order scheme.

Run:  python3 demos/05_isentropic_vortex.py       (writes vortex.vtk)
"""

from wccs.config import SchemeConfig
from wccs.driver import run_case, run_convergence
from wccs.output import write_vtk_2d
from wccs.problems import get_problem

prob = get_problem("vortex")

print(f"{'scheme':>8s} {'1/dx':>5s} {'L1(rho)':>10s} {'order':>6s}")
for order in (2, 3):
    for weighted in (False, True):
        name = f"{'W' if weighted else 'L'}CCS-{order}"
        cfg = SchemeConfig(order=order, weighted=weighted)
        for row in run_convergence(prob, cfg, [5, 10, 20]):
            print(f"{name:>8s} {row.inv_dx:5d} {row.l1:10.3e} {row.l1_order:6.2f}")
    print()

res = run_case(prob, SchemeConfig(order=3), cells=(100, 100))
write_vtk_2d(res.state, prob.physics, "vortex.vtk")
print(f"final L1 density error {res.error.l1:.3e}; wrote vortex.vtk")
