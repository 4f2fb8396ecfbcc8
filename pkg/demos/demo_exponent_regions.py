"""Exponent arithmetic: admissibility regions and the packet budget.

All slacks are exact fractions; boundary pairs land exactly on zero.
The budget exponent is the net power of lambda in peak-mass-vs-data
comparisons: negative means the packet family defeats the bound.
"""

import math
from fractions import Fraction

from convexwave.exponents import (StrichartzPair, beta, budget_exponent, region,
                                  slack_table, thm1_condition)

INF = math.inf

print("boundary pairs (d = 2):")
for (q, label) in [(Fraction(5), "tenth-loss line"),
                   (Fraction(36, 7), "ninth-loss line"),
                   (Fraction(24, 5), "twelfth-loss line"),
                   (Fraction(4), "free-space line")]:
    p = StrichartzPair(q, INF, 2)
    print(f"  q = {q} at r = inf: beta = {beta(p)},  "
          f"slacks: free={region('free', p).slack}, "
          f"thm1={region('thm1', p).slack}, "
          f"ilp3={region('ilp3', p).slack}, "
          f"doi2d={region('doi2d', p).slack}   ({label})")

print("\npacket budget, rule a ~ h^(1/3), M ~ lambda^(1/3):")
for q in (4, Fraction(9, 2), 5, Fraction(11, 2), 6):
    net = budget_exponent(q, INF)
    verdict = "estimate survives" if net >= 0 else "counterexample"
    print(f"  (q, r) = ({q}, inf): net lambda power = {net}  -> {verdict}")

print("\nequivalence of the assembled condition with the region predicate:")
for (q, r) in [(5, INF), (5, 10), (6, 8), (Fraction(14, 3), INF)]:
    p = StrichartzPair(q, r, 2)
    print(f"  (q, r) = ({q}, {r}): 5/q + 2/r <= 1 is {thm1_condition(p)}, "
          f"region says {region('thm1', p).satisfied}")

print("\nfull slack table:")
print(slack_table([(5, INF, 2), (Fraction(36, 7), INF, 2), (Fraction(24, 5), INF, 2),
                   (4, INF, 2), (5, 6, 2), (6, 4, 3)]))
