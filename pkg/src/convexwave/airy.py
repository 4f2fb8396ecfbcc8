"""Airy-function analytics: Ai, Ai', the rotated branches A+/A-, the phase
function L, Airy zeros, and the summation identity that converts sums over
zeros into sums over integer phase windings.

Evaluation strategy
-------------------
* ``|z| <= 8``: Maclaurin series, accumulated in extended precision
  (80-bit long double) so the cancellation near the negative real axis does
  not eat the 1e-10 accuracy budget.
* ``|z| > 8``: divergent asymptotic expansion truncated at its smallest
  term, with the connection formula ``Ai(-z) = A+(z) + A-(z)`` used within
  60 degrees of the negative real axis so every direct expansion stays in
  its valid sector.

The public entry points guard a documented accuracy envelope ``|z| <= 50``;
internal helpers (prefixed ``_``) are used beyond it for real arguments,
where the asymptotic expansion only gains accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bumps import BumpFunction
from .quadrature import composite_nodes, edges_for_phase

ENVELOPE = 50.0

# Ai(0) = 3^{-2/3}/Gamma(2/3) and Ai'(0) = -3^{-1/3}/Gamma(1/3), stored to
# long-double precision: in the recessive direction the series result is the
# near-cancellation of the AI0 and AIP0 halves, so constant error is
# amplified by e^{2 Re zeta}.
_AI0_LD = np.longdouble("0.355028053887817239260063186004")
_AIP0_LD = np.longdouble("-0.258819403792806798405183560189")
AI0 = float(_AI0_LD)
AIP0 = float(_AIP0_LD)

_SEAM = 8.0          # |z| seam between series and asymptotics (oscillatory side)
_REZETA_ASYM = 10.0  # switch to asymptotics once Re (2/3) z^{3/2} exceeds this
_REZETA_F64 = 4.0    # float64 series is safe below this Re zeta
_REAL_F64_CUT = 5.0  # and below this |x|

_ROT_P = np.exp(-1j * np.pi / 3.0)   # rotation defining A+
_ROT_M = np.exp(+1j * np.pi / 3.0)   # rotation defining A-


class EnvelopeError(ValueError):
    """Argument outside the documented accuracy envelope."""


# ----------------------------------------------------------------------
# series coefficients: Ai(z) = AI0 * f(z) + AIP0 * g(z), with
#   f = sum a_k z^{3k},  g = sum b_k z^{3k+1}
# ----------------------------------------------------------------------

_KMAX = 120


def _series_coeffs():
    a = np.empty(_KMAX + 1, dtype=np.longdouble)
    b = np.empty(_KMAX + 1, dtype=np.longdouble)
    a[0] = 1.0
    b[0] = 1.0
    for k in range(_KMAX):
        a[k + 1] = a[k] / ((3 * k + 2) * (3 * k + 3))
        b[k + 1] = b[k] / ((3 * k + 3) * (3 * k + 4))
    return a, b


_A_COEF, _B_COEF = _series_coeffs()


def _series_order(wmax: float) -> int:
    """Smallest truncation order whose tail is below 1e-24 of the max term."""
    term = 1.0
    top = 1.0
    k = 0
    while k < _KMAX:
        k += 1
        term *= wmax / ((3 * k - 1) * (3 * k))
        top = max(top, term)
        if term < 1e-24 * top and k > 3:
            break
    return min(k + 2, _KMAX)


def _ai_series(z, out_dtype):
    """Maclaurin evaluation of (Ai, Ai') on an array; dtype picks precision."""
    work = np.clongdouble if np.iscomplexobj(z) or out_dtype == np.clongdouble \
        else np.longdouble
    z = z.astype(work)
    w = z * z * z
    K = _series_order(float(np.max(np.abs(w))) if w.size else 0.0)
    a = _A_COEF[:K + 1].astype(work)
    b = _B_COEF[:K + 1].astype(work)
    f = np.full_like(w, a[K])
    fp = np.full_like(w, a[K] * (3 * K))          # f'(z)/z^2 coefficients
    g = np.full_like(w, b[K])
    gp = np.full_like(w, b[K] * (3 * K + 1))      # g'(z) coefficients
    for k in range(K - 1, -1, -1):
        f = f * w + a[k]
        fp = fp * w + a[k] * (3 * k)
        g = g * w + b[k]
        gp = gp * w + b[k] * (3 * k + 1)
    c1 = work(_AI0_LD)
    c2 = work(_AIP0_LD)
    ai = c1 * f + c2 * (z * g)
    aip = c1 * _safe_fp(fp, z) + c2 * gp
    return ai, aip


def _safe_fp(fp, z):
    # fp carries sum a_k (3k) z^{3k}; f'(z) = that / z, safe at z = 0 because
    # the k = 0 term vanishes.  Divide where z != 0.
    out = np.zeros_like(fp)
    nz = z != 0
    out[nz] = fp[nz] / z[nz]
    return out


# ----------------------------------------------------------------------
# asymptotic expansion, valid for |arg z| <= 2*pi/3
# ----------------------------------------------------------------------

_NASY = 40


def _asym_coeffs():
    u = np.empty(_NASY + 1)
    v = np.empty(_NASY + 1)
    u[0] = v[0] = 1.0
    for k in range(1, _NASY + 1):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        v[k] = u[k] * (6 * k + 1) / (1.0 - 6 * k)
    return u, v


_U_COEF, _V_COEF = _asym_coeffs()


def _ai_asym_sector(z):
    """(Ai, Ai') by the exponential asymptotic expansion; |arg z| <= 2pi/3.

    Terms are accumulated per lane until they stop decreasing (divergent
    tail) or drop below 1e-18; exhausted lanes carry a zero term from then
    on, so the loop body stays allocation-light.
    """
    zeta = (2.0 / 3.0) * z ** 1.5
    neg_inv = -1.0 / zeta
    su = np.ones_like(z)
    sv = np.ones_like(z)
    tu = np.ones_like(z)
    tv = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    prev = np.full(z.shape, np.inf)
    for k in range(1, _NASY + 1):
        np.multiply(tu, neg_inv, out=tu)
        tu *= _U_COEF[k] / _U_COEF[k - 1]
        np.multiply(tv, neg_inv, out=tv)
        tv *= _V_COEF[k] / _V_COEF[k - 1]
        mag = np.abs(tu)
        dead = active & ~((mag < prev) & (mag > 1e-18))
        if np.any(dead):
            tu[dead] = 0.0
            tv[dead] = 0.0
            active &= ~dead
        su += tu
        sv += tv
        prev = mag
        if not np.any(active):
            break
    q = z ** 0.25
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref / q * su, -pref * q * sv


def _ai_large(z):
    """(Ai, Ai') for |z| > seam, any argument, via sector splitting."""
    z = np.asarray(z, dtype=np.complex128)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    arg = np.angle(z)
    direct = np.abs(arg) <= 2.0 * np.pi / 3.0
    if np.any(direct):
        ai[direct], aip[direct] = _ai_asym_sector(z[direct])
    rest = ~direct
    if np.any(rest):
        zz = -z[rest]                       # |arg zz| < pi/3
        ap, app = _ai_asym_sector(_ROT_P * zz)
        am, amp = _ai_asym_sector(_ROT_M * zz)
        ai[rest] = _ROT_P * ap + _ROT_M * am
        aip[rest] = -(_ROT_P ** 2 * app + _ROT_M ** 2 * amp)
    return ai, aip


_X_F64_HI = (1.5 * _REZETA_F64) ** (2.0 / 3.0)    # ~3.30
_X_ASYM = (1.5 * _REZETA_ASYM) ** (2.0 / 3.0)     # ~6.08


def _ai_real(x):
    """(Ai, Ai') on a real array, full real line, float64 output."""
    x = np.asarray(x, dtype=float)
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    small = (x >= -_REAL_F64_CUT) & (x <= _X_F64_HI)
    mid = ~small & (x > -_SEAM) & (x <= _X_ASYM)
    pos = x > _X_ASYM
    neg = x <= -_SEAM
    if np.any(small):
        a, ap = _ai_series(x[small], np.float64)
        ai[small] = a.astype(float)
        aip[small] = ap.astype(float)
    if np.any(mid):
        a, ap = _ai_series(x[mid], np.longdouble)
        ai[mid] = a.astype(float)
        aip[mid] = ap.astype(float)
    if np.any(pos):
        a, ap = _ai_asym_sector(x[pos].astype(np.complex128))
        ai[pos] = a.real
        aip[pos] = ap.real
    if np.any(neg):
        # Ai(x) = 2 Re A+(-x) for real x; the rotated argument stays in
        # the valid sector of the direct expansion.
        zz = -x[neg]
        ap_, app_ = _ai_asym_sector(_ROT_P * zz.astype(np.complex128))
        ai[neg] = 2.0 * np.real(_ROT_P * ap_)
        aip[neg] = -2.0 * np.real(_ROT_P ** 2 * app_)
    return ai, aip


def _log_ai_pos(w):
    """log Ai(w) for real w >= 4, for products whose factors overflow alone."""
    w = np.asarray(w, dtype=float)
    if np.any(w < 4.0):
        raise ValueError("log-scale evaluation needs w >= 4")
    zeta = (2.0 / 3.0) * w ** 1.5
    inv = 1.0 / zeta
    s = np.ones_like(w)
    t = np.ones_like(w)
    active = np.ones(w.shape, dtype=bool)
    prev = np.full(w.shape, np.inf)
    for k in range(1, _NASY + 1):
        t = t * (-inv) * (_U_COEF[k] / _U_COEF[k - 1])
        mag = np.abs(t)
        active &= (mag < prev) & (mag > 1e-18)
        prev = mag
        s = s + np.where(active, t, 0.0)
        if not np.any(active):
            break
    return -zeta - 0.25 * np.log(w) - math.log(2.0 * math.sqrt(math.pi)) + np.log(s)


def _ai_complex(z):
    """(Ai, Ai') on a complex array, no envelope check."""
    z = np.asarray(z, dtype=np.complex128)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    rezeta = np.real((2.0 / 3.0) * z ** 1.5)
    small = (np.abs(z) <= _SEAM) & (rezeta <= _REZETA_ASYM)
    if np.any(small):
        a, ap = _ai_series(z[small], np.clongdouble)
        ai[small] = a.astype(np.complex128)
        aip[small] = ap.astype(np.complex128)
    if np.any(~small):
        ai[~small], aip[~small] = _ai_large(z[~small])
    return ai, aip


def _check_envelope(z):
    if np.any(np.abs(z) > ENVELOPE):
        raise EnvelopeError(f"|z| exceeds the accuracy envelope {ENVELOPE:g}")


def _eval_public(z, index):
    scalar = np.isscalar(z) or np.ndim(z) == 0
    arr = np.atleast_1d(np.asarray(z))
    _check_envelope(arr)
    if np.isrealobj(arr):
        out = _ai_real(arr.astype(float))[index]
    else:
        out = _ai_complex(arr)[index]
    if not np.all(np.isfinite(out)):
        raise ArithmeticError("Airy evaluation produced a non-finite value")
    return (out[0] if scalar else out)


def ai(z):
    """Airy function Ai(z) for ``|z| <= 50``.

    Real input gives a real result; complex input a complex one.  Relative
    accuracy is 1e-10 or better away from the zeros (absolute accuracy
    1e-10 times the local oscillation amplitude near them).
    """
    return _eval_public(z, 0)


def ai_prime(z):
    """Derivative Ai'(z), same envelope and accuracy policy as ``ai``."""
    return _eval_public(z, 1)


def a_pm(sign, omega):
    """Rotated Airy branches A+(omega) / A-(omega) for real omega.

    ``A_pm(z) = exp(mp i pi/3) Ai(exp(mp i pi/3) z)``; for real arguments the
    two are complex conjugates and their sum is ``Ai(-omega)``.
    """
    if sign not in (+1, -1, "+", "-"):
        raise ValueError("sign must be +1 or -1")
    s = +1 if sign in (+1, "+") else -1
    scalar = np.ndim(omega) == 0
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    _check_envelope(om)
    rot = _ROT_P if s == +1 else _ROT_M
    val = rot * _ai_complex(rot * om.astype(np.complex128))[0]
    return (val[0] if scalar else val)


def _a_plus(omega):
    """A+(omega) on a real array, no envelope guard (internal)."""
    om = np.asarray(omega, dtype=float)
    return _ROT_P * _ai_complex(_ROT_P * om.astype(np.complex128))[0]


# ----------------------------------------------------------------------
# the phase function L(omega) = pi + i log(A-/A+) and its derivative
# ----------------------------------------------------------------------

_REF_LO, _REF_HI, _REF_STEP = -16.0, 121.0, 0.05
_ref_cache = {}


def _ref_table():
    tab = _ref_cache.get("tab")
    if tab is None:
        grid = np.arange(_REF_LO, _REF_HI + 0.5 * _REF_STEP, _REF_STEP)
        theta = np.unwrap(np.angle(_a_plus(grid)))
        i0 = int(round((0.0 - _REF_LO) / _REF_STEP))
        theta += 2.0 * np.pi * round((-np.pi / 3.0 - theta[i0]) / (2.0 * np.pi))
        tab = (grid, theta)
        _ref_cache["tab"] = tab
    return tab


def _theta_at(omega: float) -> float:
    """Continuously unwrapped phase of A+, anchored at theta(0) = -pi/3."""
    grid, theta = _ref_table()
    if omega < grid[0]:
        raw = float(np.angle(_a_plus(np.array([omega]))[0]))
        # below the table L lies in (0, L(grid[0])): theta in (-pi/2, -pi/3)
        k = round((-0.45 * np.pi - raw) / (2.0 * np.pi))
        return raw + 2.0 * np.pi * k
    if omega <= grid[-1]:
        ref = float(np.interp(omega, grid, theta))
    else:
        n = int(np.ceil((omega - grid[-1]) * np.sqrt(omega) / 1.5)) + 2
        seg = np.linspace(grid[-1], omega, n)
        th = np.unwrap(np.angle(_a_plus(seg)))
        th += theta[-1] - th[0]
        ref = float(th[-1])
    raw = float(np.angle(_a_plus(np.array([omega]))[0]))
    return raw + 2.0 * np.pi * round((ref - raw) / (2.0 * np.pi))


def big_l(omega):
    """Phase function L(omega): continuous, increasing, L(0) = pi/3."""
    if np.ndim(omega) == 0:
        return np.pi + 2.0 * _theta_at(float(omega))
    return big_l_grid(np.asarray(omega, dtype=float))


def big_l_grid(omega):
    """Vectorized L on an increasing array (internally refined as needed)."""
    om = np.asarray(omega, dtype=float)
    if om.ndim != 1 or om.size == 0:
        raise ValueError("need a 1-d, non-empty array")
    if np.any(np.diff(om) < 0):
        order = np.argsort(om)
        back = np.empty_like(order)
        back[order] = np.arange(om.size)
        return big_l_grid(om[order])[back]
    pts = om
    for _ in range(24):
        theta = np.unwrap(np.angle(_a_plus(pts)))
        if pts.size == 1 or np.max(np.abs(np.diff(theta))) < 2.6:
            break
        mids = 0.5 * (pts[:-1] + pts[1:])
        pts = np.sort(np.concatenate([pts, mids]))
    anchor = _theta_at(float(pts[0]))
    theta += 2.0 * np.pi * round((anchor - theta[0]) / (2.0 * np.pi))
    L = np.pi + 2.0 * theta
    if pts.size != om.size:
        idx = np.searchsorted(pts, om)
        L = L[idx]
    return L


def big_l_prime(omega):
    """L'(omega) = 1 / (2 pi |A+(omega)|^2); strictly positive."""
    scalar = np.ndim(omega) == 0
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    val = 1.0 / (2.0 * np.pi * np.abs(_a_plus(om)) ** 2)
    return (float(val[0]) if scalar else val)


B1 = 5.0 / 24.0


def big_l_asymptotic(omega, n_terms: int = 1):
    """Large-argument form 4/3 omega^{3/2} + pi/2 - b1 omega^{-3/2}.

    Only the first correction coefficient (b1 = 5/24) is pinned; even-index
    coefficients vanish, so ``n_terms`` is restricted to {0, 1}.
    """
    if n_terms not in (0, 1):
        raise ValueError("n_terms must be 0 or 1")
    om = np.asarray(omega, dtype=float)
    if np.any(om < 1.0):
        raise ValueError("asymptotic form requires omega >= 1")
    out = (4.0 / 3.0) * om ** 1.5 + np.pi / 2.0
    if n_terms >= 1:
        out = out - B1 * om ** -1.5
    return out if np.ndim(omega) else float(out)


# ----------------------------------------------------------------------
# Airy zeros and the phase table
# ----------------------------------------------------------------------

K_MAX_DEFAULT = 200


def _zero_guesses(ks):
    t = 3.0 * np.pi * (4.0 * ks - 1.0) / 8.0
    return t ** (2.0 / 3.0) * (1.0 + 5.0 / (48.0 * t * t))


def airy_zeros(k_max: int = K_MAX_DEFAULT):
    """First ``k_max`` zeros of Ai, as positive numbers omega_k (Ai(-omega_k)=0).

    Brackets come from the monotone phase condition L(omega_k) = 2 pi k;
    Newton on Ai itself polishes the result to ~1e-13.
    """
    if not 1 <= k_max <= 1000:
        raise ValueError("k_max out of range")
    ks = np.arange(1, k_max + 1, dtype=float)
    om = _zero_guesses(ks)
    target = 2.0 * np.pi * ks
    for _ in range(3):
        om = om - (big_l_grid(om) - target) / big_l_prime(om)
    for _ in range(2):
        a, apv = _ai_real(-om)
        om = om + a / apv
    return om


def airy_zero(k: int) -> float:
    """k-th Airy zero omega_k (1-based), k <= 200 by default table size."""
    if not 1 <= int(k) <= K_MAX_DEFAULT:
        raise ValueError(f"k must lie in [1, {K_MAX_DEFAULT}]")
    return float(phase_table(K_MAX_DEFAULT).zeros[int(k) - 1])


@dataclass(frozen=True)
class PhaseTable:
    """Airy zeros omega_k with L'(omega_k) and Ai'(-omega_k)^2.

    The table is immutable and safe to share; it is the spectral backbone
    used by the eigenbasis and both propagator representations.
    """

    zeros: np.ndarray
    lprime: np.ndarray
    aiprime_sq: np.ndarray

    def __post_init__(self):
        z, lp, ap2 = self.zeros, self.lprime, self.aiprime_sq
        if not (len(z) == len(lp) == len(ap2)):
            raise ValueError("column length mismatch")
        if z[0] <= 2.0 or np.any(np.diff(z) <= 0):
            raise ValueError("zeros must be increasing with omega_1 > 2")
        if np.any(lp <= 0) or np.any(ap2 <= 0):
            raise ValueError("L' and Ai'^2 must be positive")
        resid = np.abs(_ai_real(-z)[0])
        if np.max(resid) > 1e-10:
            raise ValueError("stored zeros do not annihilate Ai to 1e-10")
        if np.max(np.abs(lp - 2.0 * np.pi * ap2) / lp) > 1e-8:
            raise ValueError("L'(omega_k) and 2 pi Ai'(-omega_k)^2 disagree")

    def __len__(self):
        return len(self.zeros)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("k,omega_k,L_prime,ai_prime_sq\n")
            for i, (z, lp, ap2) in enumerate(zip(self.zeros, self.lprime,
                                                 self.aiprime_sq), start=1):
                fh.write(f"{i},{z:.17g},{lp:.17g},{ap2:.17g}\n")

    @classmethod
    def from_csv(cls, path):
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        data = np.atleast_2d(data)
        return cls(zeros=data[:, 1].copy(), lprime=data[:, 2].copy(),
                   aiprime_sq=data[:, 3].copy())

    @classmethod
    def build(cls, k_max: int = K_MAX_DEFAULT):
        z = airy_zeros(k_max)
        lp = big_l_prime(z)
        ap2 = _ai_real(-z)[1] ** 2
        return cls(zeros=z, lprime=lp, aiprime_sq=ap2)


_table_cache = {}


def phase_table(k_max: int = K_MAX_DEFAULT) -> PhaseTable:
    """Cached phase table with at least ``k_max`` zeros."""
    tab = _table_cache.get("tab")
    if tab is None or len(tab) < k_max:
        tab = PhaseTable.build(max(k_max, K_MAX_DEFAULT))
        _table_cache["tab"] = tab
    if len(tab) == k_max:
        return tab
    return PhaseTable(zeros=tab.zeros[:k_max], lprime=tab.lprime[:k_max],
                      aiprime_sq=tab.aiprime_sq[:k_max])


# ----------------------------------------------------------------------
# the summation identity: sum over phase windings == sum over zeros
# ----------------------------------------------------------------------

def poisson_rhs(phi: BumpFunction, table: PhaseTable) -> float:
    """Zero-side of the identity: 2 pi * sum_k phi(omega_k) / L'(omega_k)."""
    lo, hi = phi.support
    if hi > table.zeros[-1]:
        raise ValueError("bump support extends beyond the phase table range")
    vals = phi(table.zeros)
    return float(2.0 * np.pi * np.sum(vals / table.lprime))


def poisson_lhs(phi: BumpFunction, n_max: int, quad_points: int | None = None,
                tol: float = 1e-9):
    """Winding-side of the identity: sum_{|N|<=n_max} int e^{-i N L} phi domega.

    The integrals share one composite Gauss-Legendre grid sized for the
    fastest integrand (|N| = n_max); a doubled-resolution pass certifies the
    quadrature error.  Returns a complex number whose imaginary part tends
    to zero as ``n_max`` grows.
    """
    from .quadrature import QuadratureError

    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lo, hi = phi.support
    Llo, Lhi = big_l(lo), big_l(hi)
    budget = n_max * (Lhi - Llo)

    def total(rad_per_panel):
        edges = edges_for_phase(lo, hi, budget, rad_per_panel, min_panels=8)
        nodes, weights = composite_nodes(edges)
        if quad_points is not None and nodes.size < quad_points:
            edges = np.linspace(lo, hi, int(np.ceil(quad_points / 16)) + 1)
            nodes, weights = composite_nodes(edges)
        Lv = big_l_grid(nodes)
        pv = phi(nodes) * weights
        acc = complex(np.sum(pv))                      # N = 0 term
        for N in range(1, n_max + 1):
            ph = np.exp(-1j * N * Lv)
            acc += complex(np.sum(pv * ph)) + complex(np.sum(pv * np.conj(ph)))
        return acc

    coarse = total(6.0)
    fine = total(3.0)
    err = abs(fine - coarse)
    if err > tol:
        raise QuadratureError(
            f"poisson_lhs quadrature did not converge (estimate {err:.3g})",
            value=fine, error=err)
    return fine
