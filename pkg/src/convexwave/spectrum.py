"""Dirichlet eigenbasis of -d^2/dx^2 + (1+x) theta^2 on the half-line.

The normalized eigenfunctions are shifted, rescaled Airy functions

    e_k(x, theta) = sqrt(2 pi) theta^{1/3} / sqrt(L'(omega_k))
                    * Ai(theta^{2/3} x - omega_k),

with eigenvalues lambda_k = theta^2 + omega_k theta^{4/3}.  Mode inner
products are computed by composite Gauss-Legendre panels sized against the
local Airy oscillation wavelength, truncated past the classical turning
point where the eigenfunction decays super-exponentially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .airy import ENVELOPE, _ai_real, big_l_prime, phase_table
from .quadrature import QuadratureError, composite_nodes

TURNING_MARGIN = 15.0   # integration extends this far past the turning point


@dataclass(frozen=True)
class EigenMode:
    """One eigenfunction of the model operator at tangential frequency theta."""

    k: int
    theta: float
    omega_k: float
    lprime_k: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("mode index k must be >= 1")
        if self.theta <= 0:
            raise ValueError("theta must be positive")

    @classmethod
    def create(cls, k: int, theta: float) -> "EigenMode":
        tab = phase_table(max(k, 1))
        return cls(k=k, theta=theta, omega_k=float(tab.zeros[k - 1]),
                   lprime_k=float(tab.lprime[k - 1]))

    @property
    def turning_point(self) -> float:
        return self.omega_k / self.theta ** (2.0 / 3.0)

    @property
    def x_max(self) -> float:
        """Quadrature cutoff: turning point plus a decay margin."""
        return (self.omega_k + TURNING_MARGIN) / self.theta ** (2.0 / 3.0)


def eigenfunction(mode: EigenMode, x):
    """Evaluate e_k(x, theta) for x >= 0.

    Arguments past the accuracy envelope on the decaying side return exactly
    0: the true value is below 1e-100 there.
    """
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xv < 0):
        raise ValueError("eigenfunctions live on x >= 0")
    arg = mode.theta ** (2.0 / 3.0) * xv - mode.omega_k
    norm = np.sqrt(2.0 * np.pi) * mode.theta ** (1.0 / 3.0) / np.sqrt(mode.lprime_k)
    out = np.zeros_like(xv)
    ok = arg <= ENVELOPE
    if np.any(ok):
        out[ok] = norm * _ai_real(arg[ok])[0]
    return float(out[0]) if scalar else out


def eigenvalue(mode: EigenMode) -> float:
    """lambda_k(theta) = theta^2 + omega_k theta^{4/3}."""
    return mode.theta ** 2 + mode.omega_k * mode.theta ** (4.0 / 3.0)


def _airy_phase_edges(mode: EigenMode, x_hi: float, oscillations_per_panel: float = 0.45):
    """Panel edges resolving the Airy oscillation of e_k on [0, x_hi].

    In the oscillatory region the phase of Ai(theta^{2/3} x - omega_k) is
    (2/3)|s|^{3/2} with s the Airy argument, so edges uniform in |s|^{3/2}
    put the same number of oscillations in every panel.
    """
    t23 = mode.theta ** (2.0 / 3.0)
    s_hi = t23 * x_hi - mode.omega_k
    edges_s = []
    if mode.omega_k > 0:
        s_turn = min(s_hi, 0.0)
        u_max = mode.omega_k ** 1.5
        u_min = (-s_turn) ** 1.5 if s_turn < 0 else 0.0
        n_osc = (u_max - u_min) / (3.0 * np.pi)   # oscillation count on [-omega_k, s_turn]
        n_pan = max(int(np.ceil(n_osc / oscillations_per_panel)), 2)
        u = np.linspace(u_max, u_min, n_pan + 1)
        edges_s.append(-(u ** (2.0 / 3.0)))
    if s_hi > 0:
        tail = np.linspace(0.0, s_hi, 5)[1:]
        edges_s.append(tail)
    s_edges = np.unique(np.concatenate(edges_s))
    x_edges = (s_edges + mode.omega_k) / t23
    x_edges[0] = 0.0
    return np.clip(x_edges, 0.0, x_hi)


def mode_coefficient(mode: EigenMode, f, f_cutoff: float, tol: float = 1e-8,
                     density: float = 1.0):
    """Inner product <e_k, f> over the half-line by oscillation-aware panels.

    ``f`` is a callable accepting an array of x >= 0; ``f_cutoff`` declares
    where it has decayed.  The result is certified by a doubled-resolution
    pass; failure to converge raises ``QuadratureError`` naming the likely
    under-resolved oscillation.
    """
    x_hi = min(f_cutoff, mode.x_max)
    if x_hi <= 0:
        return 0.0 + 0.0j
    edges = _airy_phase_edges(mode, x_hi, oscillations_per_panel=0.45 / density)

    def total(e):
        nodes, weights = composite_nodes(e)
        vals = eigenfunction(mode, nodes) * np.asarray(f(nodes))
        return complex(np.sum(weights * vals))

    coarse = total(edges)
    fine_edges = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    fine = total(fine_edges)
    err = abs(fine - coarse)
    fscale = 1.0 + float(np.max(np.abs(f(np.linspace(0, x_hi, 64)))))
    if err > tol * fscale:
        raise QuadratureError(
            f"mode_coefficient k={mode.k}: not converged (estimate {err:.3g}); "
            f"Airy oscillation of wavelength ~{2*np.pi/np.sqrt(mode.omega_k)/mode.theta**(2/3):.3g} "
            "or the supplied function is under-resolved",
            value=fine, error=err)
    return fine


def mode_l2_norm(mode: EigenMode) -> float:
    """Quadrature check of the L2 normalization (should be 1)."""
    val = mode_coefficient(mode, lambda x: eigenfunction(mode, x),
                           f_cutoff=mode.x_max)
    return float(np.sqrt(val.real))


def gram_matrix(theta: float, k_max: int) -> np.ndarray:
    """Pairwise L2 inner products of the first ``k_max`` eigenfunctions.

    Each unordered pair is integrated once, so the result is symmetric by
    construction; off-diagonal entries measure quadrature error only.
    """
    if k_max > 20:
        raise ValueError("gram_matrix is limited to k_max <= 20")
    modes = [EigenMode.create(k, theta) for k in range(1, k_max + 1)]
    G = np.zeros((k_max, k_max))
    for i, mi in enumerate(modes):
        for j in range(i, k_max):
            mj = modes[j]
            val = mode_coefficient(mj, lambda x, m=mi: eigenfunction(m, x),
                                   f_cutoff=mj.x_max, density=2.0)
            G[i, j] = G[j, i] = val.real
    return G


def eigen_residual(mode: EigenMode, x_lo: float = 0.0, x_hi: float | None = None,
                   n: int = 400) -> float:
    """Relative residual of -e'' + (1+x) theta^2 e = lambda e by 5-point stencils."""
    if x_hi is None:
        x_hi = 2.0 * mode.turning_point
    lam = eigenvalue(mode)
    # stencil step keyed to the fastest oscillation on the sample window
    kappa = mode.theta ** (2.0 / 3.0) * np.sqrt(max(mode.omega_k, 1.0))
    h = min(0.12 / kappa, (x_hi - x_lo) / (8 * n))
    x = np.linspace(x_lo + 2 * h, x_hi - 2 * h, n)
    offs = np.array([-2, -1, 0, 1, 2])[:, None] * h
    vals = eigenfunction(mode, (x[None, :] + offs).ravel()).reshape(5, n)
    d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
    resid = -d2 + (1.0 + x) * mode.theta ** 2 * vals[2] - lam * vals[2]
    scale = np.max(np.abs(lam * vals[2]))
    return float(np.max(np.abs(resid)) / scale)
