"""Capacity of round sets under both kernel regimes.

The equilibrium measure of a ball pushes all charge to the bounding
sphere; its energy is 1/R for the Coulomb kernel in 3d and -log R for
the logarithmic kernel in 2d.  This script solves both on refining node
clouds and checks the monopole far-field decay of the solution.
"""

import numpy as np

import dropcap as dc

# --- 3d Coulomb: capacity of the unit ball is its radius ------------------

print("Coulomb kernel, unit ball in 3d (exact capacity = 1)")
print(f"{'M':>6} {'energy':>12} {'capacity':>12} {'error':>10}")
for M in (250, 500, 1000, 2000, 4000):
    res = dc.solve_shape(dc.Ball((0.0, 0.0, 0.0), 1.0), 2.0, n_nodes=M)
    print(
        f"{res.cloud.n_nodes:>6} {res.energy:>12.6f} {res.capacity:>12.6f}"
        f" {abs(res.capacity - 1.0):>10.2e}"
    )

# --- radius scaling --------------------------------------------------------

print("\ncapacity scales linearly with the radius (3d)")
for R in (0.5, 1.0, 2.0, 4.0):
    res = dc.solve_shape(dc.Ball((0.0, 0.0, 0.0), R), 2.0, n_nodes=1000)
    print(f"  R = {R:<4}  capacity = {res.capacity:.6f}")

# --- 2d logarithmic kernel -------------------------------------------------

print("\nlogarithmic kernel, disks in 2d (capacity = exp(-energy) = R)")
for R in (0.5, 1.0, 2.0):
    res = dc.solve_shape(dc.Ball((0.0, 0.0), R), 2.0, n_nodes=400)
    print(
        f"  R = {R:<4}  energy = {res.energy:>9.6f}  capacity = {res.capacity:.6f}"
    )

# --- far field -------------------------------------------------------------

print("\nmonopole decay: r^(N - alpha) * v(r) -> 1 for a unit charge")
res = dc.solve_shape(dc.Ball((0.0, 0.0, 0.0), 1.0), 2.0, n_nodes=2000)
out = dc.farfield_check(res.measure, dc.KernelParams(3, 2.0), [100.0, 200.0, 400.0])
for row in out["rows"]:
    print(f"  r = {row['radius']:>5.0f}  scaled potential = {row['scaled_potential']:.9f}")

disk = dc.solve_shape(dc.Ball((0.0, 0.0), 1.0), 2.0, n_nodes=400)
out2 = dc.farfield_check(disk.measure, dc.KernelParams(2, 2.0), [100.0, 400.0])
print(f"  log kernel: max |v + log r| = {out2['deviation']:.2e}")
