"""Entropy-penalized charge on solid bodies.

Adding the quadratic penalty integral(u^2 dx) to the Coulomb energy
spreads the charge into the volume: the minimizer solves a linear
Euler-Lagrange system instead of collapsing to the boundary.  On a ball
the value has the closed form J(B_R) = cosh(R) / (4 pi (R cosh R - sinh R)),
and on every body it dominates the pure Coulomb value I/(4 pi).
"""

import numpy as np

import dropcap as dc

# --- unit ball against the closed form --------------------------------------

print("J on balls vs the closed form")
print(f"{'R':>4} {'J (solver)':>12} {'J (exact)':>12} {'rel err':>10}")
for R in (1.0, 1.5, 2.0):
    cloud = dc.discretize(dc.Ball((0.0, 0.0, 0.0), R), 2000, "volume")
    res = dc.solve_entropic(cloud)
    exact = np.cosh(R) / (4.0 * np.pi * (R * np.cosh(R) - np.sinh(R)))
    print(
        f"{R:>4} {res.J_value:>12.6f} {exact:>12.6f}"
        f" {abs(res.J_value - exact) / exact:>10.2e}"
    )

# --- structure of the minimizer ---------------------------------------------

cloud = dc.discretize(dc.Ball((0.0, 0.0, 0.0), 1.0), 2000, "volume")
res = dc.solve_entropic(cloud)
r = np.linalg.norm(cloud.points, axis=1)
print("\ndensity climbs toward the boundary (radial averages)")
for k in range(5):
    shell = (r >= k / 5.0) & (r < (k + 1) / 5.0)
    mean = np.average(res.density[shell], weights=cloud.weights[shell])
    print(f"  r in [{k / 5:.1f}, {(k + 1) / 5:.1f}):  u = {mean:.4f}")
print(f"Euler-Lagrange residual = {res.el_residual:.2e}")
print(f"multiplier / 2 = {res.multiplier / 2:.6f} equals J = {res.J_value:.6f}")

# --- the lower bound J >= I / (4 pi) on assorted bodies ---------------------

roster = [
    ("ball", dc.Ball((0.0, 0.0, 0.0), 1.0)),
    ("box", dc.Box((0.0, 0.0, 0.0), (0.6, 0.5, 0.4))),
    (
        "two balls",
        dc.UnionOfBalls((dc.Ball((-1.2, 0.0, 0.0), 0.7), dc.Ball((1.2, 0.0, 0.0), 0.7))),
    ),
    (
        "wobbly ball",
        dc.renormalize_to_unit_volume(dc.NearlySpherical(modes=((2, 0, 1.0),), eps=0.15)),
    ),
]
print("\nJ vs I/(4 pi)")
print(f"{'shape':>12} {'J':>10} {'I/(4 pi)':>10}")
for name, shape in roster:
    J = dc.solve_entropic(dc.discretize(shape, 1200, "volume")).J_value
    I = dc.solve_shape(shape, 2.0, n_nodes=1200, role="boundary").energy
    print(f"{name:>12} {J:>10.5f} {I / (4 * np.pi):>10.5f}")
