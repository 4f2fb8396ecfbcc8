"""The summation identity: windings of the phase vs sums over zeros.

For a smooth compactly supported test function the sum over integer
windings of the phase function equals 2 pi times the weighted sum of the
function over the Airy zeros.  Numerically the winding sum converges
extremely fast once the truncation covers the bump's frequency content.
"""

import numpy as np

from convexwave import BumpFunction, phase_table, poisson_lhs, poisson_rhs

table = phase_table(200)

bumps = [
    ("single zero", BumpFunction(center=2.3381, half_width=0.5)),
    ("two zeros", BumpFunction(center=3.2, half_width=1.3, plateau_fraction=0.4)),
    ("three zeros", BumpFunction(center=4.1, half_width=2.4, plateau_fraction=0.45)),
    ("between zeros", BumpFunction(center=3.2, half_width=0.35)),
]

for name, phi in bumps:
    zeros_in = [k + 1 for k, om in enumerate(table.zeros[:8])
                if phi.support[0] < om < phi.support[1]]
    rhs = poisson_rhs(phi, table)
    print(f"\n{name}: support ({phi.support[0]:.2f}, {phi.support[1]:.2f}), "
          f"zeros covered: {zeros_in or 'none'}")
    print(f"  zero-side sum: {rhs:.12e}")
    for n_max in (25, 50, 100, 200):
        lhs = poisson_lhs(phi, n_max=n_max)
        print(f"  windings |N| <= {n_max:4d}: {lhs.real:+.12e}  "
              f"error {abs(lhs - rhs):.2e}")
