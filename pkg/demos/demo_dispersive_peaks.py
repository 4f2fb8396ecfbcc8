"""Dispersive peak structure: every reflection carries the same h|U| scale.

Following the packet through its boundary bounces, the field peaks at
X = 1, Y = 4J/3 near times 4 J sqrt(1+a); on each peak window the scaled
amplitude h |U| stays above a lambda-independent multiple of lambda^{-1/3}.
"""

import math

import numpy as np

from convexwave.norms import lower_bound_window, profile_params
from convexwave.parametrix import ReflectionSum, airy_lower_bound_constant

lam = 50.0
c = airy_lower_bound_constant()
print(f"|Ai| lower-bound constant: min |Ai| > 1/10 on |z| <= c = {c}")

p = profile_params(lam)
print(f"\nprofile regime at lambda = {lam}: M = {p.M:.3f} "
      f"(= 4 lambda^(1/3)/c), M_a = {p.M_a:.2f}")
eng = ReflectionSum(p)

print("\nper-reflection peak windows and measured minima of h|U|:")
print("  J    T-window width     min h|U|     x lambda^{1/3}")
for J in range(int(p.M_a) + 1):
    res = lower_bound_window(p, J, engine=eng, n_probe=3)
    lo, hi = res["t_interval"]
    scaled = res["measured_min"] * lam ** (1 / 3)
    print(f"  {J}    {hi-lo:12.4f}    {res['measured_min']:.6f}     {scaled:.4f}")

print("\nthe scaled minima form the peak constant kappa; across lambda it "
      "may drift but not degrade by more than a factor two (see the "
      "acceptance suite for the full lambda sweep).")
