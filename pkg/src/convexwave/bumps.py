"""Smooth compactly supported cutoff functions.

The transition profile is the standard mollifier ratio

    step(v) = f(v) / (f(v) + f(1 - v)),      f(v) = exp(-1/v) for v > 0,

which is C-infinity, identically 0 for v <= 0 and identically 1 for v >= 1.
Gluing this profile to a plateau keeps every derivative zero at both ends of
the transition, which in turn gives super-polynomial decay of the oscillatory
sums these cutoffs are fed into.  A transition that is merely C^1 at the
plateau edge would degrade those sums to cubic decay and is avoided on
purpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _mollifier(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    pos = v > 0.0
    with np.errstate(over="ignore", divide="ignore"):
        out[pos] = np.exp(-1.0 / v[pos])
    return out


def smooth_step(v):
    """C-infinity step: 0 for v <= 0, 1 for v >= 1, strictly monotone between."""
    v = np.asarray(v, dtype=float)
    f = _mollifier(v)
    g = _mollifier(1.0 - v)
    with np.errstate(invalid="ignore"):
        out = np.where(v <= 0.0, 0.0, np.where(v >= 1.0, 1.0, f / (f + g)))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BumpFunction:
    """Smooth bump: 1 on a plateau, 0 outside a compact support interval.

    The symmetric form is parameterized by ``center``, ``half_width`` and
    ``plateau_fraction`` (plateau = center +/- plateau_fraction*half_width).
    Asymmetric transition widths (needed e.g. for a cutoff with plateau
    [3/4, 3/2] inside support [1/2, 2]) are available via ``from_edges``.
    """

    center: float
    half_width: float
    plateau_fraction: float = 0.5
    _edges: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._edges is None:
            if not (0.0 < self.plateau_fraction < 1.0):
                raise ValueError("plateau_fraction must lie in (0, 1)")
            if self.half_width <= 0.0:
                raise ValueError("half_width must be positive")
            c, hw, p = self.center, self.half_width, self.plateau_fraction
            object.__setattr__(self, "_edges", (c - hw, c - p * hw, c + p * hw, c + hw))

    @classmethod
    def from_edges(cls, support_lo, plateau_lo, plateau_hi, support_hi):
        if not (support_lo < plateau_lo <= plateau_hi < support_hi):
            raise ValueError("edges must satisfy support_lo < plateau_lo <= "
                             "plateau_hi < support_hi")
        center = 0.5 * (support_lo + support_hi)
        half_width = 0.5 * (support_hi - support_lo)
        frac = min((plateau_hi - center) / half_width, 0.999999)
        obj = cls.__new__(cls)
        object.__setattr__(obj, "center", center)
        object.__setattr__(obj, "half_width", half_width)
        object.__setattr__(obj, "plateau_fraction", max(frac, 1e-12))
        object.__setattr__(obj, "_edges", (float(support_lo), float(plateau_lo),
                                           float(plateau_hi), float(support_hi)))
        return obj

    @property
    def support(self):
        return self._edges[0], self._edges[3]

    @property
    def plateau(self):
        return self._edges[1], self._edges[2]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        slo, plo, phi, shi = self._edges
        rise = smooth_step((t - slo) / (plo - slo)) if plo > slo else (t >= plo).astype(float)
        fall = smooth_step((shi - t) / (shi - phi)) if shi > phi else (t <= phi).astype(float)
        out = np.where(t < plo, rise, np.where(t > phi, fall, 1.0))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SmoothStep:
    """Monotone C-infinity step: 0 below ``lo``, 1 above ``hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = smooth_step((t - self.lo) / (self.hi - self.lo))
        return out if np.ndim(out) else float(out)
