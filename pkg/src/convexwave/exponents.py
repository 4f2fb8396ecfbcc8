"""Exact arithmetic of space-time integrability exponents.

All region predicates are computed in rational arithmetic (fractions), so
boundary pairs land exactly on zero slack; floats appear only when callers
pass them in, and they are converted through ``Fraction`` losslessly.
``q = r = infinity`` is supported with the convention 1/inf = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

INF = math.inf

REGIONS = ("free", "quarter_loss", "doi_line", "thm1", "ilp3", "doi2d", "thm2")


def _inv(q) -> Fraction:
    """Reciprocal as an exact fraction, with 1/inf = 0."""
    if q in (INF, "inf"):
        return Fraction(0)
    f = Fraction(q) if not isinstance(q, float) else Fraction(q).limit_denominator(10 ** 12)
    if f <= 0:
        raise ValueError("exponents must be positive or infinity")
    return 1 / f


@dataclass(frozen=True)
class StrichartzPair:
    """Exponent triple (q, r, d) with the scaling exponent beta attached."""

    q: object
    r: object
    d: int = 2

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("dimension must be >= 2")
        iq, ir = _inv(self.q), _inv(self.r)
        if iq > Fraction(1, 2) or ir > Fraction(1, 2):
            raise ValueError("need q, r >= 2")

    @property
    def inv_q(self) -> Fraction:
        return _inv(self.q)

    @property
    def inv_r(self) -> Fraction:
        return _inv(self.r)

    @property
    def alpha(self) -> Fraction:
        """Slope 1/q / (1/2 - 1/r) of the ray through the pair (r > 2)."""
        den = Fraction(1, 2) - self.inv_r
        if den == 0:
            raise ValueError("alpha undefined at r = 2")
        return self.inv_q / den


def beta(p: StrichartzPair) -> Fraction:
    """Scaling loss beta = d(1/2 - 1/r) - 1/q, exact."""
    return p.d * (Fraction(1, 2) - p.inv_r) - p.inv_q


class RegionResult(NamedTuple):
    satisfied: bool
    slack: Fraction


def _rhs_coefficient(name: str, p: StrichartzPair) -> Fraction:
    d, ir = p.d, p.inv_r
    if name == "free":
        return Fraction(d - 1, 2)
    if name == "quarter_loss":
        return Fraction(d - 1, 2) - Fraction(1, 4)
    if name == "thm1":
        if d != 2:
            raise ValueError("thm1 region is stated for d = 2")
        return Fraction(1, 2) - Fraction(1, 10)
    if name == "ilp3":
        if d != 2:
            raise ValueError("ilp3 region is stated for d = 2")
        return Fraction(1, 2) - Fraction(1, 9)
    if name in ("doi2d", "thm2"):
        if ir > Fraction(1, 4):
            raise ValueError(f"{name} region requires r >= 4")
        lead = Fraction(1, 2) if name == "doi2d" else Fraction(d - 1, 2)
        if name == "doi2d" and d != 2:
            raise ValueError("doi2d region is stated for d = 2")
        return lead - (1 - 4 * ir) / (12 - 24 * ir)
    raise ValueError(f"unknown region {name!r}; choose from {REGIONS}")


def region(name: str, p: StrichartzPair) -> RegionResult:
    """Membership and signed slack of the named admissibility region.

    ``slack = rhs - 1/q``; the pair satisfies the region iff slack >= 0.
    ``doi_line`` is the two-point segment between the free pair at r = 4
    and the twelfth-loss intercept at r = infinity, applied for r >= 4.
    """
    iq, ir = p.inv_q, p.inv_r
    if name == "doi_line":
        if ir > Fraction(1, 4):
            raise ValueError("doi_line applies for r >= 4")
        q4_inv = Fraction(p.d - 1, 2) * Fraction(1, 4)
        qinf_inv = (Fraction(p.d - 1, 2) - Fraction(1, 12)) * Fraction(1, 2)
        rhs = qinf_inv + 4 * (q4_inv - qinf_inv) * ir
    else:
        rhs = _rhs_coefficient(name, p) * (Fraction(1, 2) - ir)
    slack = rhs - iq
    return RegionResult(satisfied=slack >= 0, slack=slack)


def thm1_condition(p: StrichartzPair) -> bool:
    """The assembled 2-d counterexample budget: 5/q + 2/r <= 1."""
    if p.d != 2:
        raise ValueError("stated for d = 2")
    return 5 * p.inv_q + 2 * p.inv_r <= 1


def thm2_condition(p: StrichartzPair) -> bool:
    """Tensor-budget condition in d >= 3: the net power of the frequency
    scale, 2(d-2)(1/2 - 1/r) - 4/q - 4/(3r) + 5/6, is nonnegative exactly
    when the pair lies in the ``thm2`` region (r >= 4)."""
    if p.d < 3:
        raise ValueError("stated for d >= 3")
    net = (2 * (p.d - 2) * (Fraction(1, 2) - p.inv_r) - 4 * p.inv_q
           - Fraction(4, 3) * p.inv_r + Fraction(5, 6))
    return net >= 0


def knapp_exponent(d: int, r) -> Fraction:
    """Transverse bump norm exponent: ||phi_h||_{L^r} ~ h^{(d-2)/2 (1/r - 1/2)}."""
    if d < 3:
        raise ValueError("the transverse bump needs d >= 3")
    return Fraction(d - 2, 2) * (_inv(r) - Fraction(1, 2))


def budget_exponent(q, r, a_rule: str = "h^(1/3)", M_rule: str = "lambda^(1/3)",
                    eps=Fraction(0)) -> Fraction:
    """Net power of lambda in the peak-vs-data budget after substituting rules.

    Positive net means the scaling bound survives the packet family;
    negative net means the family beats it (a counterexample pair).
    Supported rule pairs: a ~ h^{1/3} with M ~ lambda^{1/3} or M ~ M_a
    (identical), and a ~ h^{1/2-eps} with M ~ M_a.
    """
    iq, ir = _inv(q), _inv(r)
    eps = Fraction(eps)
    if a_rule == "h^(1/3)":
        if M_rule not in ("lambda^(1/3)", "M_a"):
            raise ValueError("a ~ h^{1/3} pairs with M ~ lambda^{1/3} (= M_a)")
        # lambda-powers with M_a = M = lambda^{1/3}:
        # lhs: (M_a sqrt(M/lambda))^{1/q} lambda^{-1/3} lambda^{-5/(3r)}
        lhs = (Fraction(1, 3) + Fraction(1, 2) * (Fraction(1, 3) - 1)) * iq \
            - Fraction(1, 3) - Fraction(5, 3) * ir
        # rhs: lambda^{1-1/q-2/r} M_a^{1/2-1/r-2/q} lambda^{-5/4} M^{1/4}
        rhs = (1 - iq - 2 * ir) + Fraction(1, 3) * (Fraction(1, 2) - ir - 2 * iq) \
            - Fraction(5, 4) + Fraction(1, 12)
        return rhs - lhs
    if a_rule == "h^(1/2-eps)":
        if M_rule != "M_a":
            raise ValueError("a ~ h^{1/2-eps} pairs with M ~ M_a")
        # lambda = h^{-(1/4 + 3 eps/2)}: express h-powers as lambda-powers
        hpow = -1 / (Fraction(1, 4) + Fraction(3, 2) * eps)
        # M = M_a = h^{-1/4+eps/2} = lambda^{mexp}
        mexp = (Fraction(-1, 4) + eps / 2) * hpow
        # |T|-window sqrt(M/lambda) and the peak height lambda^{-1/3}:
        lhs = (mexp + Fraction(1, 2) * (mexp - 1)) * iq - Fraction(1, 3) \
            - Fraction(5, 3) * ir
        rhs = (1 - iq - 2 * ir) + mexp * (Fraction(1, 2) - ir - 2 * iq) \
            - Fraction(5, 4) + mexp * Fraction(1, 4)
        return rhs - lhs
    raise ValueError(f"unsupported a_rule {a_rule!r}")


def slack_table(pairs, names=REGIONS) -> str:
    """Exact-fraction slack table for a list of (q, r, d) triples."""
    lines = ["pair" + "".join(f",{n}" for n in names)]
    for (q, r, d) in pairs:
        p = StrichartzPair(q=q, r=r, d=d)
        cells = []
        for n in names:
            try:
                cells.append(str(region(n, p).slack))
            except ValueError:
                cells.append("n/a")
        qs = _fmt_exponent(q)
        rs = _fmt_exponent(r)
        lines.append(f"({qs};{rs};d={d})" + "".join(f",{c}" for c in cells))
    return "\n".join(lines) + "\n"


def _fmt_exponent(q) -> str:
    if q in (INF, "inf"):
        return "inf"
    f = Fraction(q) if not isinstance(q, float) else Fraction(q).limit_denominator(10 ** 12)
    return str(f)
