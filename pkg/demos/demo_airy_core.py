"""Tour of the Airy core: values, zeros, and the phase function.

The phase function L is the engine behind everything else here: it is
strictly increasing, L(0) = pi/3, and its values 2 pi k pinpoint the Airy
zeros that carry the boundary spectrum.
"""

import numpy as np

from convexwave import ai, ai_prime, airy_zero, big_l, big_l_asymptotic, big_l_prime, phase_table

print("Airy function samples")
for z in (0.0, 1.0, -1.0, -2.338107):
    print(f"  Ai({z:+.6f}) = {ai(z):+.12e}   Ai'({z:+.6f}) = {ai_prime(z):+.12e}")

print("\nPhase function anchors")
print(f"  L(0)    = {big_l(0.0):.15f}  (pi/3 = {np.pi/3:.15f})")
print(f"  L(-10)  = {big_l(-10.0):.3e}  (decays to 0 on the left)")
print(f"  L'(1.5) = {big_l_prime(1.5):.12f} (always positive)")

print("\nZeros through the phase condition L(omega_k) = 2 pi k")
tab = phase_table(200)
for k in (1, 2, 5, 10, 50, 200):
    om = airy_zero(k)
    print(f"  k={k:3d}: omega_k = {om:16.12f}   L/2pi = {big_l(om)/(2*np.pi):9.4f}"
          f"   |Ai(-omega_k)| = {abs(ai(-om)) if om <= 50 else float('nan'):.1e}")

print("\nLarge-argument form L ~ 4/3 w^{3/2} + pi/2 - (5/24) w^{-3/2}")
for om in (9.0, 16.0, 25.0):
    exact = big_l(om)
    approx = big_l_asymptotic(om, 1)
    print(f"  omega={om:5.1f}: exact={exact:14.9f} approx={approx:14.9f} "
          f"diff={exact-approx:+.3e}")

print("\nTwo independent routes to L'(omega_k) (phase derivative vs Ai'^2):")
for k in (1, 5, 20):
    lp = tab.lprime[k - 1]
    alt = 2 * np.pi * tab.aiprime_sq[k - 1]
    print(f"  k={k:2d}: {lp:.12f} vs {alt:.12f}  (rel diff {abs(lp-alt)/lp:.1e})")

tab_path = "airy_table_demo.csv"
phase_table(25).to_csv(tab_path)
print(f"\nwrote the first 25 rows to {tab_path}")
