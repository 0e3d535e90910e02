"""No minimizer in an external field: energy diverging to -infinity.

Two competitor families show the drop energy is unbounded below once a
uniform field acts on a neutral body.  Two oppositely charged balls
riding the field gain -2 E n q per unit separation; a stretching slab
with charged end caps trades perimeter ~ n^(1/2) against field energy
~ -n, turning negative at a computable crossover length.
"""

import numpy as np

import dropcap as dc

# --- two balls ---------------------------------------------------------------

print("two oppositely charged balls at +-n e1, field E = 1")
print(f"{'n':>5} {'perimeter':>10} {'interaction':>12} {'field':>10} {'energy':>10} {'numeric':>10}")
for p in dc.two_balls_field_family([1, 2, 4, 8, 16, 32], field_strength=1.0, n_nodes=700):
    c = p.components
    print(
        f"{p.n:>5} {c['perimeter']:>10.4f} {c['interaction']:>12.4f}"
        f" {c['field']:>10.2f} {p.analytic_energy:>10.2f} {p.numeric_energy:>10.2f}"
    )

# --- slab ---------------------------------------------------------------------

out = dc.slab_family([16, 32, 64, 128, 256, 512], field_strength=1.0, n_nodes=800)
print("\nslab of unit-ball volume, length n, charged end caps, E = 1")
print(f"{'n':>5} {'perimeter':>10} {'interaction':>12} {'field':>10} {'energy':>10}")
for p in out["points"]:
    c = p.components
    print(
        f"{p.n:>5} {c['perimeter']:>10.3f} {c['interaction']:>12.4f}"
        f" {c['field']:>10.2f} {p.analytic_energy:>10.2f}"
    )

fits = out["fitted_exponents"]
print(
    f"\nfitted growth exponents: perimeter {fits['perimeter']:.3f} (1/2), "
    f"interaction {fits['interaction']:.3f} (1/2), field {fits['field']:.3f} (1)"
)
print(f"energy turns negative at n = {out['crossover']:.2f}")
