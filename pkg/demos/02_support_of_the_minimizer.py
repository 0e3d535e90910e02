"""Where the equilibrium measure lives.

Three classic support phenomena: on an annulus the charge abandons the
inner sphere entirely; on a solid ball with the Coulomb kernel it
collapses onto the boundary even when the solver is free to use interior
nodes; for a weaker kernel (alpha < 2) the interior keeps positive
charge everywhere.
"""

import numpy as np

import dropcap as dc

# --- annulus: inner sphere is screened --------------------------------------

ann = dc.solve_shape(dc.Annulus((0.0, 0.0, 0.0), 0.5, 1.0), 2.0, n_nodes=2000)
split = ann.measure.cloud.component_masses(ann.masses)
print("annulus r in [0.5, 1]: mass by component")
for name, mass in split.items():
    print(f"  {name:>6}: {mass:.3e}")

# --- solid ball, Coulomb: boundary collapse ---------------------------------

res = dc.solve_shape(dc.Ball((0.0, 0.0, 0.0), 1.0), 2.0, n_nodes=2000, role="volume")
r = np.linalg.norm(res.cloud.points, axis=1)
print("\nsolid ball, alpha = 2: radial mass profile (all charge at the rim)")
for k in range(10):
    shell = (r >= k / 10.0) & (r < (k + 1) / 10.0)
    print(f"  r in [{k / 10:.1f}, {(k + 1) / 10:.1f}):  mass = {res.masses[shell].sum():.3e}")

# --- solid ball, alpha = 1.5: charge everywhere -----------------------------

res = dc.solve_shape(dc.Ball((0.0, 0.0, 0.0), 1.0), 1.5, n_nodes=2000, role="volume")
r = np.linalg.norm(res.cloud.points, axis=1)
print("\nsolid ball, alpha = 1.5: every shell keeps positive charge")
for k in range(10):
    shell = (r >= k / 10.0) & (r < (k + 1) / 10.0)
    print(f"  r in [{k / 10:.1f}, {(k + 1) / 10:.1f}):  mass = {res.masses[shell].sum():.3e}")
print(f"\nuniform-density energy for comparison: {dc.uniform_ball_self_energy(3, 1.5):.6f}")
print(f"equilibrium energy (must be lower):     {res.energy:.6f}")
