"""Mixed Lebesgue norms on sampled fields, dispersive lower-bound windows,
and scaling-trend fits across the frequency parameter.

Norms integrate by the trapezoid rule on the field's own axes (fields are
smooth at the sampled scale); r or q = infinity take exact maxima.  The
scan harness concentrates its time samples on the reflection windows where
the field peaks live, since uniform time sampling would waste nearly all
its budget between peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import ComplexField
from .parametrix import ReflectionSum, airy_lower_bound_constant
from .wavepacket import CutoffSpec, PacketParams, data_l2_norm, reduced_strichartz_rhs

INF = math.inf


def spatial_norm(values, x_axis, y_axis, r) -> float:
    """L^r norm of a 2-d slice over (X, Y) by trapezoid; r = inf is the max."""
    vals = np.abs(np.asarray(values))
    if vals.shape != (len(x_axis), len(y_axis)):
        raise ValueError("slice shape does not match the axes")
    if r == INF:
        return float(np.max(vals))
    r = float(r)
    if r < 1:
        raise ValueError("need r >= 1 or inf")
    if len(x_axis) < 2 or len(y_axis) < 2:
        raise ValueError("degenerate spatial axes")
    inner = np.trapezoid(vals ** r, np.asarray(y_axis), axis=1)
    return float(np.trapezoid(inner, np.asarray(x_axis)) ** (1.0 / r))


def mixed_norm(field: ComplexField, q, r, time_window=None) -> float:
    """L^q in time of the spatial L^r norms, over ``time_window``."""
    t = field.t_axis
    if time_window is None:
        sel = np.ones(t.size, dtype=bool)
    else:
        lo, hi = time_window
        sel = (t >= lo - 1e-12) & (t <= hi + 1e-12)
        if not np.any(sel):
            raise ValueError("empty time window")
    slices = np.array([spatial_norm(field.values[i], field.x_axis, field.y_axis, r)
                       for i in np.nonzero(sel)[0]])
    if q == INF:
        return float(np.max(slices))
    q = float(q)
    if q < 1:
        raise ValueError("need q >= 1 or inf")
    ts = t[sel]
    if ts.size < 2:
        raise ValueError("time window holds fewer than two samples")
    return float(np.trapezoid(slices ** q, ts) ** (1.0 / q))


def strichartz_quotient(params: PacketParams, q, r, field: ComplexField,
                        data_norm: float, time_window=None) -> float:
    """Measured mixed norm over its scaling bound lambda^{...} M_a^{...} ||U0||."""
    if data_norm <= 0:
        raise ValueError("data norm must be positive")
    lhs = mixed_norm(field, q, r, time_window)
    return lhs / (reduced_strichartz_rhs(q, r, params) * data_norm)


def fit_scaling(lams, quotients):
    """Least-squares slope of log(quotient) against log(lambda).

    Returns ``(slope, stderr)``; needs at least four points spanning a
    decade of lambda.
    """
    lams = np.asarray(lams, dtype=float)
    qs = np.asarray(quotients, dtype=float)
    if lams.size < 4:
        raise ValueError("need at least 4 scan rows")
    if np.max(lams) / np.min(lams) < 10.0 * (1 - 1e-9):
        raise ValueError("scan must span at least one decade of lambda")
    x = np.log(lams)
    y = np.log(qs)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
    dof = max(x.size - 2, 1)
    resid = y - A @ coef
    var = float(resid @ resid) / dof
    cov = var * np.linalg.inv(A.T @ A)
    return float(coef[0]), float(np.sqrt(cov[0, 0]))


# ----------------------------------------------------------------------
# lower-bound windows around each reflection
# ----------------------------------------------------------------------

def window_extents(params: PacketParams) -> tuple:
    """Half-widths (T_tilde, X, Y) of the peak window at these parameters."""
    lam, M = params.lam, params.M
    c = airy_lower_bound_constant()
    t_half = min(math.sqrt(M / lam), c * M / (4.0 * lam ** (2.0 / 3.0)))
    return t_half, lam ** (-2.0 / 3.0), 1.0 / lam


def lower_bound_window(params: PacketParams, J: int,
                       cutoffs: CutoffSpec | None = None,
                       engine: ReflectionSum | None = None,
                       n_probe: int = 5) -> dict:
    """Peak window of the J-th reflection and the measured min of h|U| on it.

    The window is centered at (4 J sqrt(1+a), 1, 4J/3) with half-widths
    (2 sqrt(1+a) T_tilde_max, lambda^{-2/3}, 1/lambda); the min is taken
    over an n_probe^3 lattice.
    """
    p = params
    if J < 0 or J > p.M_a:
        raise ValueError("need 0 <= J <= M_a")
    t_half, x_half, y_half = window_extents(p)
    sqa = math.sqrt(1.0 + p.a)
    Tc, Xc, Yc = 4.0 * J * sqa, 1.0, 4.0 * J / 3.0
    T_lo, T_hi = Tc - 2.0 * sqa * t_half, Tc + 2.0 * sqa * t_half
    eng = engine or ReflectionSum(p, cutoffs)
    Ts = np.linspace(T_lo, T_hi, n_probe)
    Xs = np.linspace(Xc - x_half, Xc + x_half, n_probe)
    Ys = np.linspace(Yc - y_half, Yc + y_half, n_probe)
    m = np.inf
    for T in Ts:
        vals = eng.field(float(T), Xs, Ys)
        m = min(m, float(np.min(np.abs(vals))))
    return {
        "t_interval": (T_lo, T_hi),
        "x_interval": (Xc - x_half, Xc + x_half),
        "y_interval": (Yc - y_half, Yc + y_half),
        "measured_min": p.h * m,
    }


def measure_kappa(lam: float, J_max: int | None = None,
                  cutoffs: CutoffSpec | None = None, n_probe: int = 3) -> float:
    """Window-min peak constant: min over J <= M_a of h|U| lambda^{1/3}.

    Uses the profile-regime parameter rule a = h^{1/3},
    M = max(M_a, 4 lambda^{1/3}/c).
    """
    params = profile_params(lam)
    eng = ReflectionSum(params, cutoffs)
    if J_max is None:
        J_max = int(params.M_a)
    best = np.inf
    for J in range(0, J_max + 1):
        res = lower_bound_window(params, J, cutoffs=cutoffs, engine=eng,
                                 n_probe=n_probe)
        best = min(best, res["measured_min"])
    return float(best * lam ** (1.0 / 3.0))


def profile_params(lam: float) -> PacketParams:
    """Parameters in the peak-profile regime: a = h^{1/3}, M = max(M_a, 4 lam^{1/3}/c)."""
    c = airy_lower_bound_constant()
    h = lam ** -2.0
    a = h ** (1.0 / 3.0)
    M = max(a ** -0.5, 4.0 * lam ** (1.0 / 3.0) / c)
    return PacketParams(h=h, a=a, M=M)


# ----------------------------------------------------------------------
# the scan harness
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    h: float
    a: float
    M: float
    lam: float
    q: float
    r: float
    lhs: float
    rhs: float
    quotient: float


@dataclass(frozen=True)
class ScanResult:
    """Quotient rows over a lambda scan at fixed exponent pairs and rules."""

    rows: tuple

    def for_pair(self, q, r):
        return [row for row in self.rows if row.q == q and row.r == r]

    def fit(self, q, r):
        rows = self.for_pair(q, r)
        return fit_scaling([row.lam for row in rows],
                           [row.quotient for row in rows])

    def to_csv(self, path, header_lines=()):
        with open(path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write("h,a,M,lambda,q,r,lhs,rhs,quotient\n")
            for row in self.rows:
                fh.write(f"{row.h:.17g},{row.a:.17g},{row.M:.17g},"
                         f"{row.lam:.17g},{row.q:g},{row.r:g},"
                         f"{row.lhs:.17g},{row.rhs:.17g},{row.quotient:.17g}\n")


def reflection_time_axis(params: PacketParams, pts_per_window: int = 21,
                         pts_between: int = 5) -> np.ndarray:
    """Time samples concentrated on the reflection windows.

    Each window gets ``pts_per_window`` samples spaced quadratically inside
    +/- 3 peak widths (denser at the center); gaps get ``pts_between``
    uniform samples.  The axis spans the reflections J = 0 .. floor(M_a).
    """
    p = params
    sqa = math.sqrt(1.0 + p.a)
    t_half, _, _ = window_extents(p)
    width = 3.0 * 2.0 * sqa * t_half
    u = np.linspace(-1.0, 1.0, pts_per_window)
    offsets = width * u * np.abs(u)
    pieces = []
    J_max = int(p.M_a)
    for J in range(0, J_max + 1):
        Tc = 4.0 * J * sqa
        pieces.append(Tc + offsets)
        if J < J_max:
            lo, hi = Tc + width, 4.0 * (J + 1) * sqa - width
            pieces.append(np.linspace(lo, hi, pts_between + 2)[1:-1])
    axis = np.unique(np.concatenate(pieces))
    return axis[axis >= 0.0]


def packet_spatial_axes(params: PacketParams, J: int, n_x: int = 21,
                        n_y: int = 15) -> tuple:
    """(X, Y) axes resolving the peak of the J-th reflection."""
    p = params
    x_half, y_half = p.lam ** (-2.0 / 3.0), 1.0 / p.lam
    X = 1.0 + np.linspace(-4.0, 4.0, n_x) * x_half
    X = X[X > 0]
    Y = 4.0 * J / 3.0 + np.linspace(-3.0, 3.0, n_y) * y_half
    return X, Y


def scan_field(params: PacketParams, cutoffs: CutoffSpec | None = None,
               pts_per_window: int = 21, pts_between: int = 5,
               n_pad: int = 1) -> ComplexField:
    """Reflection-sum field sampled on a peak-following space-time grid.

    The Y axis is window-relative (Y_rel = Y - 4 J(T)/3 with J(T) the
    nearest reflection), so one fixed axis rides every peak; spatial norms
    are translation invariant, so mixed norms read off this field directly.
    Each slice is assembled with the reflections J(T) +/- n_pad.
    """
    p = params
    eng = ReflectionSum(p, cutoffs)
    sqa = math.sqrt(1.0 + p.a)
    t_axis = reflection_time_axis(p, pts_per_window, pts_between)
    J_max = int(p.M_a)
    X, Y_rel = packet_spatial_axes(p, 0)
    values = np.empty((t_axis.size, X.size, Y_rel.size), dtype=np.complex128)
    for i, T in enumerate(t_axis):
        J = int(np.clip(round(T / (4.0 * sqa)), 0, J_max))
        n_list = list(range(max(J - n_pad, -2), J + n_pad + 1))
        values[i] = eng.field(float(T), X, Y_rel + 4.0 * J / 3.0, n_list=n_list)
    return ComplexField(t_axis=t_axis, x_axis=X, y_axis=Y_rel, values=values)


def run_strichartz_scan(lams, qr_pairs, cutoffs: CutoffSpec | None = None,
                        a_rule: str = "h^(1/3)", M_rule: str = "lambda^(1/3)",
                        pts_per_window: int = 21, pts_between: int = 5) -> ScanResult:
    """Measure Strichartz quotients across a lambda scan.

    One field per lambda is shared by all exponent pairs.  The time window
    is [0, 4 sqrt(1+a) M_a], the span of the M_a reflections the dispersive
    lower bound counts.
    """
    cutoffs = cutoffs or CutoffSpec.default()
    rows = []
    for lam in lams:
        params = PacketParams.from_lambda(float(lam), a_rule=a_rule, M_rule=M_rule)
        fld = scan_field(params, cutoffs, pts_per_window, pts_between)
        dn = data_l2_norm(params, cutoffs).value
        window = (0.0, 4.0 * math.sqrt(1.0 + params.a) * params.M_a)
        for (q, r) in qr_pairs:
            lhs = mixed_norm(fld, q, r, window)
            rhs = reduced_strichartz_rhs(q, r, params) * dn
            rows.append(ScanRow(h=params.h, a=params.a, M=params.M,
                                lam=params.lam, q=q, r=r, lhs=lhs, rhs=rhs,
                                quotient=lhs / rhs))
    return ScanResult(rows=tuple(rows))
