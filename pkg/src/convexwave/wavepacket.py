"""The cusp wave-packet datum, its closed forms, cutoffs and frame scalings.

Parameter conventions: ``h`` is the semiclassical scale, ``a`` the distance
of the packet to the boundary, ``M`` the Gaussian regularization width;
``lambda = a^{3/2}/h`` and ``M_a = a^{-1/2}`` are derived.  The packet frame
(T, X, Y) is related to the lab frame by

    t = sqrt(a) T,   x = a X,   y = -t sqrt(1+a) + a^{3/2} Y,

so the frame co-moves leftward along the boundary at the speed of the
gliding ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .airy import ENVELOPE, _ai_real, _log_ai_pos
from .bumps import BumpFunction, SmoothStep
from .quadrature import QuadratureError, composite_nodes, edges_for_phase, fixed_quad

# Desk-scale gates standing in for the asymptotic separations
# h^{2/3} << a << 1 and 1 << M << lambda.
A_GATE = 2.0          # require a >= A_GATE * h^{2/3}
M_UPPER_FRACTION = 0.5  # require M <= M_UPPER_FRACTION * lambda


class ParameterError(ValueError):
    """Packet parameters violate a validity gate."""


@dataclass(frozen=True)
class PacketParams:
    """Counterexample parameter bundle (h, a, M) with derived scales."""

    h: float
    a: float
    M: float

    def __post_init__(self):
        if not 0.0 < self.h < 1.0:
            raise ParameterError("need 0 < h < 1")
        if self.a >= 1.0:
            raise ParameterError("need a < 1")
        if self.a < A_GATE * self.h ** (2.0 / 3.0):
            raise ParameterError(
                f"a={self.a:g} too close to the boundary scale: need "
                f"a >= {A_GATE:g} h^(2/3) = {A_GATE * self.h**(2/3):g}")
        lam = self.a ** 1.5 / self.h
        if lam <= 1.0:
            raise ParameterError("need lambda = a^(3/2)/h > 1")
        if not 1.0 < self.M <= M_UPPER_FRACTION * lam:
            raise ParameterError(
                f"need 1 < M <= {M_UPPER_FRACTION:g}*lambda (M={self.M:g}, "
                f"lambda={lam:g})")

    @property
    def lam(self) -> float:
        """lambda = a^{3/2} / h."""
        return self.a ** 1.5 / self.h

    @property
    def M_a(self) -> float:
        """M_a = a^{-1/2}, the reflection-count budget."""
        return self.a ** -0.5

    @classmethod
    def from_rules(cls, h: float, a_rule: str = "h^(1/3)",
                   M_rule: str = "lambda^(1/3)", eps: float = 0.0) -> "PacketParams":
        """Derive (a, M) from h via the named scaling rules."""
        if a_rule == "h^(1/3)":
            a = h ** (1.0 / 3.0)
        elif a_rule == "h^(1/2-eps)":
            a = h ** (0.5 - eps)
        else:
            raise ParameterError(f"unknown a_rule {a_rule!r}")
        lam = a ** 1.5 / h
        if M_rule == "lambda^(1/3)":
            M = lam ** (1.0 / 3.0)
        elif M_rule == "M_a":
            M = a ** -0.5
        else:
            raise ParameterError(f"unknown M_rule {M_rule!r}")
        return cls(h=h, a=a, M=M)

    @classmethod
    def from_lambda(cls, lam: float, a_rule: str = "h^(1/3)",
                    M_rule: str = "lambda^(1/3)", eps: float = 0.0) -> "PacketParams":
        """Back out h from a target lambda under ``a_rule`` and build params."""
        if a_rule == "h^(1/3)":
            h = lam ** -2.0
        elif a_rule == "h^(1/2-eps)":
            h = lam ** (-1.0 / (0.25 + 1.5 * eps))
        else:
            raise ParameterError(f"unknown a_rule {a_rule!r}")
        return cls.from_rules(h, a_rule=a_rule, M_rule=M_rule, eps=eps)

    @classmethod
    def from_config(cls, cfg: dict) -> "PacketParams":
        """Build from flat config keys: h, and either (a, M) or rules."""
        h = float(cfg["h"])
        if "a_rule" in cfg or "M_rule" in cfg:
            return cls.from_rules(h, a_rule=cfg.get("a_rule", "h^(1/3)"),
                                  M_rule=cfg.get("M_rule", "lambda^(1/3)"),
                                  eps=float(cfg.get("eps", 0.0)))
        return cls(h=h, a=float(cfg["a"]), M=float(cfg["M"]))


@dataclass(frozen=True)
class CutoffSpec:
    """The three smooth cutoffs: frequency window psi, spectral floors chi0/chi1."""

    psi: BumpFunction = field(
        default_factory=lambda: BumpFunction.from_edges(0.5, 0.75, 1.5, 2.0))
    chi0: SmoothStep = field(default_factory=lambda: SmoothStep(1.0, 2.0))
    chi1: BumpFunction = field(
        default_factory=lambda: BumpFunction.from_edges(-1.0, 0.0, 1.0, 2.0))

    @classmethod
    def default(cls) -> "CutoffSpec":
        return cls()


@dataclass(frozen=True)
class FrameMap:
    """Affine lab <-> packet coordinate change tied to one parameter bundle."""

    params: PacketParams
    direction: int = +1

    def lab_to_packet(self, t, x, y):
        a = self.params.a
        T = t / math.sqrt(a)
        X = x / a
        Y = (y + t * math.sqrt(1.0 + a)) / a ** 1.5
        return T, X, Y

    def packet_to_lab(self, T, X, Y):
        a = self.params.a
        t = math.sqrt(a) * T if np.ndim(T) == 0 else np.sqrt(a) * np.asarray(T)
        x = a * X
        y = -t * math.sqrt(1.0 + a) + a ** 1.5 * Y
        return t, x, y


def lab_to_packet(params: PacketParams, t, x, y):
    return FrameMap(params).lab_to_packet(t, x, y)


def packet_to_lab(params: PacketParams, T, X, Y):
    return FrameMap(params).packet_to_lab(T, X, Y)


def _inv(q) -> float:
    """Reciprocal with the convention 1/inf = 0."""
    if q in (np.inf, math.inf):
        return 0.0
    q = float(q)
    if q <= 0:
        raise ValueError("exponents must be positive or inf")
    return 1.0 / q


def norm_scaling(r, q, params: PacketParams):
    """Frame-change factors for spatial and space-time Lebesgue norms.

    Returns ``(a^{-5/(2r)}, a^{-1/(2q)-5/(2r)})``; packet-frame norms are
    these factors times the lab-frame norms.
    """
    a = params.a
    spatial = a ** (-5.0 * _inv(r) / 2.0)
    spacetime = a ** (-_inv(q) / 2.0 - 5.0 * _inv(r) / 2.0)
    return spatial, spacetime


def reduced_strichartz_rhs(q, r, params: PacketParams) -> float:
    """Scaling factor lambda^{1-1/q-2/r} M_a^{1/2-1/r-2/q} of the reduced bound."""
    iq, ir = _inv(q), _inv(r)
    return params.lam ** (1.0 - iq - 2.0 * ir) * params.M_a ** (0.5 - ir - 2.0 * iq)


# ----------------------------------------------------------------------
# the datum V0 and its closed forms
# ----------------------------------------------------------------------

def v0_closed(Z, lam_eta: float, M: float):
    """Closed form of the datum: exponential-weighted Airy profile.

    V0(Z) = (2 pi / lt^{1/3}) e^{(lt/2M)(Z-1+1/(6M^2))} Ai(lt^{2/3}(Z-1+1/(4M^2)))
    with lt = lam_eta.  Real-valued.  Factors are combined in log scale when
    either would overflow alone; if even the combined exponent exceeds 700
    an ``OverflowError`` carrying the log-magnitude is raised.
    """
    if lam_eta <= 1.0:
        raise ValueError("need lam_eta > 1")
    scalar = np.ndim(Z) == 0
    Zv = np.atleast_1d(np.asarray(Z, dtype=float))
    lt = float(lam_eta)
    w = lt ** (2.0 / 3.0) * (Zv - 1.0 + 0.25 / M ** 2)
    lin = (lt / (2.0 * M)) * (Zv - 1.0 + 1.0 / (6.0 * M ** 2))
    pref = 2.0 * np.pi / lt ** (1.0 / 3.0)
    out = np.empty_like(Zv)
    direct = (w <= 4.0) | (lin <= 650.0)
    if np.any(direct):
        out[direct] = pref * np.exp(lin[direct]) * _ai_real(w[direct])[0]
    big = ~direct
    if np.any(big):
        logmag = lin[big] + _log_ai_pos(w[big]) + np.log(pref)
        if np.any(logmag > 700.0):
            raise OverflowError(
                f"v0_closed overflow: log-magnitude {np.max(logmag):.6g}")
        out[big] = np.exp(logmag)
    return float(out[0]) if scalar else out


def v0_oscillatory(Z, lam_eta: float, M: float, tol: float = 1e-8):
    """The datum as a Gaussian-damped cubic oscillatory integral in s.

    Integrates e^{i lt((Z-1)s + s^3/3)} e^{-lt s^2/(2M)} ds over the real
    line; the Gaussian factor makes it absolutely convergent.  A doubled
    pass certifies the quadrature error against ``tol``.
    """
    if lam_eta <= 1.0:
        raise ValueError("need lam_eta > 1")
    lt, Zf = float(lam_eta), float(Z)
    s_max = math.sqrt(92.0 * M / lt)          # Gaussian tail below e^-46
    budget = lt * (abs(Zf - 1.0) * 2.0 * s_max + (2.0 / 3.0) * s_max ** 3)

    def total(rad):
        edges = edges_for_phase(-s_max, s_max, budget, rad, min_panels=8)
        nodes, weights = composite_nodes(edges)
        phase = lt * ((Zf - 1.0) * nodes + nodes ** 3 / 3.0)
        damp = np.exp(-lt * nodes ** 2 / (2.0 * M))
        return complex(np.sum(weights * damp * np.exp(1j * phase)))

    coarse = total(6.0)
    fine = total(3.0)
    err = abs(fine - coarse)
    if err > tol:
        raise QuadratureError(
            f"v0_oscillatory did not converge (estimate {err:.3g})",
            value=fine, error=err)
    return fine


def v0_hat(xi, lam_eta: float, M: float):
    """Fourier profile of the datum: (1/lt) e^{i lt(xi^3/3 - xi)} e^{-lt xi^2/(2M)}.

    Normalization note: the transform integral of ``v0_closed`` evaluates to
    exactly ``2 pi`` times this profile (the delta identity
    int e^{i lt (s-xi) Z} dZ = (2 pi / lt) delta(s - xi) carries the 2 pi).
    """
    if lam_eta <= 1.0:
        raise ValueError("need lam_eta > 1")
    lt = float(lam_eta)
    xv = np.asarray(xi, dtype=float)
    out = np.exp(1j * lt * (xv ** 3 / 3.0 - xv) - lt * xv ** 2 / (2.0 * M)) / lt
    return complex(out) if np.ndim(xi) == 0 else out


class DataNorm(NamedTuple):
    value: float          # ||U_0||_{L^2}
    ratio: float          # value / (h^{-1} lambda^{-5/4} M^{1/4})


def data_l2_norm(params: PacketParams, cutoffs: CutoffSpec,
                 rel_tol: float = 1e-10) -> DataNorm:
    """L2 norm of the frequency-superposed datum, with its scaling ratio.

    The squared norm is (1/h^2 lambda^2) * int eta^{-1} psi^2(eta)
    e^{-lambda eta xi^2 / M} dxi deta; the xi integral is the Gaussian
    sqrt(pi M / (lambda eta)) and the eta integral is done by quadrature to
    ``rel_tol``.
    """
    lam, M, h = params.lam, params.M, params.h
    psi = cutoffs.psi
    lo, hi = psi.support

    def integrand(eta):
        return psi(eta) ** 2 * eta ** -1.5

    coarse = fixed_quad(integrand, lo, hi, 64)
    fine = fixed_quad(integrand, lo, hi, 128)
    if abs(fine - coarse) > rel_tol * abs(fine):
        mid = 0.5 * (lo + hi)
        fine = (fixed_quad(integrand, lo, mid, 192)
                + fixed_quad(integrand, mid, hi, 192))
    c_psi = float(fine)
    norm_sq = c_psi * math.sqrt(math.pi * M / lam) / (h ** 2 * lam ** 2)
    value = math.sqrt(norm_sq)
    bound = M ** 0.25 / (h * lam ** 1.25)
    return DataNorm(value=value, ratio=value / bound)
