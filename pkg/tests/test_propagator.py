import math

import numpy as np
import pytest

from convexwave.propagator import (ModeCoefficients, SpectralPropagator,
                                   chi1_mode_range, decompose, evolve_full,
                                   evolve_modes, green_function)
from convexwave.spectrum import EigenMode, eigenfunction
from convexwave.wavepacket import CutoffSpec, PacketParams

HBAR = 0.02
SIG2 = 0.01
GAUSS = lambda x: np.exp(-((x - 0.5) ** 2) / (2 * SIG2))


@pytest.fixture(scope="module")
def gauss_coeffs(cutoffs):
    return decompose(GAUSS, f_cutoff=3.0, hbar=HBAR, cutoffs=cutoffs,
                     datum_norm_sq=float(np.sqrt(np.pi * SIG2)))


def test_chi1_mode_range():
    ks = chi1_mode_range(HBAR)
    from convexwave.airy import phase_table
    tab = phase_table(int(ks.max()) + 2)
    assert np.all(tab.zeros[ks - 1] * HBAR ** (2 / 3) <= 2.0)
    assert tab.zeros[ks[-1]] * HBAR ** (2 / 3) > 2.0   # next mode is outside


def test_decompose_mode_recovery(cutoffs):
    # datum equal to one eigenfunction: coefficients are a Kronecker delta
    m3 = EigenMode.create(3, 1.0 / HBAR)
    co = decompose(lambda x: eigenfunction(m3, x), f_cutoff=m3.x_max,
                   hbar=HBAR, cutoffs=cutoffs)
    i3 = np.nonzero(co.ks == 3)[0][0]
    resid = np.abs(co.coeffs - np.eye(1, co.ks.size, i3)[0])
    assert np.max(resid) < 1e-6
    assert co.weights[i3] == 1.0


def test_decompose_zero_function(cutoffs):
    co = decompose(lambda x: np.zeros_like(x), f_cutoff=1.0, hbar=HBAR,
                   cutoffs=cutoffs)
    assert np.max(np.abs(co.coeffs)) == 0.0


def test_bessel_guard(cutoffs, gauss_coeffs):
    # sum |c_k|^2 <= ||f||^2 holds; a corrupted norm trips the guard
    total = float(np.sum(np.abs(gauss_coeffs.coeffs) ** 2))
    assert total <= gauss_coeffs.datum_norm_sq + 1e-8
    with pytest.raises(ValueError):
        ModeCoefficients(hbar=gauss_coeffs.hbar, ks=gauss_coeffs.ks,
                         omegas=gauss_coeffs.omegas, lprimes=gauss_coeffs.lprimes,
                         coeffs=gauss_coeffs.coeffs, weights=gauss_coeffs.weights,
                         datum_norm_sq=0.5 * total)


def test_evolve_modes_unitary(gauss_coeffs):
    # coefficient-space energy is exactly conserved (phases have modulus 1)
    x = np.linspace(0.0, 4.0, 1200)
    n0 = gauss_coeffs.projected_norm_sq
    for t in (0.0, 0.3, 1.0):
        v = evolve_modes(gauss_coeffs, t, x)
        grid_norm = np.trapezoid(np.abs(v) ** 2, x)
        assert grid_norm == pytest.approx(n0, rel=1e-6)


def test_evolve_modes_dirichlet(gauss_coeffs):
    for t in (0.0, 0.7):
        assert abs(evolve_modes(gauss_coeffs, t, 0.0)) < 1e-9


def test_evolve_modes_t0_projection(gauss_coeffs, cutoffs):
    # at t = 0 the sum reproduces the projected datum
    x = np.linspace(0.0, 3.0, 800)
    v0 = evolve_modes(gauss_coeffs, 0.0, x)
    proj = np.zeros_like(x, dtype=complex)
    for i, k in enumerate(gauss_coeffs.ks):
        m = EigenMode(k=int(k), theta=1.0 / HBAR,
                      omega_k=float(gauss_coeffs.omegas[i]),
                      lprime_k=float(gauss_coeffs.lprimes[i]))
        proj += gauss_coeffs.coeffs[i] * gauss_coeffs.weights[i] * eigenfunction(m, x)
    assert np.max(np.abs(v0 - proj)) < 1e-12
    # and the projection is close to the datum itself: this datum vanishes
    # at the boundary and its energy content sits inside the chi1 plateau
    assert np.max(np.abs(proj - GAUSS(x))) < 2e-5


def test_pde_residual(gauss_coeffs):
    # (hbar^2 d_tt + (-hbar^2 d_xx + 1 + x)) v = 0, 5-point stencils
    hbar = HBAR
    xs = np.linspace(0.4, 1.6, 25)
    t0, dt, dx = 0.2, 0.004, 0.004
    offs = np.array([-2, -1, 0, 1, 2])
    vt = np.stack([evolve_modes(gauss_coeffs, t0 + o * dt, xs) for o in offs])
    d2t = (-vt[0] + 16 * vt[1] - 30 * vt[2] + 16 * vt[3] - vt[4]) / (12 * dt * dt)
    vx = np.stack([evolve_modes(gauss_coeffs, t0, xs + o * dx) for o in offs])
    d2x = (-vx[0] + 16 * vx[1] - 30 * vx[2] + 16 * vx[3] - vx[4]) / (12 * dx * dx)
    resid = hbar ** 2 * d2t - hbar ** 2 * d2x + (1.0 + xs) * vt[2]
    scale = np.max(np.abs(vt[2])) * np.max(1.0 + xs)
    assert np.max(np.abs(resid)) / scale < 1e-3


def test_mode_count_scaling(cutoffs):
    # retained mode count grows like 1/hbar
    n1 = chi1_mode_range(0.05).size
    n2 = chi1_mode_range(0.025).size
    assert n2 == pytest.approx(2 * n1, rel=0.12)


# ---------------------------------------------------------------- 2D field

def test_evolve_full_dirichlet_and_y_check(packet50, cutoffs, spectral50):
    p = packet50
    t = math.sqrt(p.a) * 0.5
    y0 = -t * math.sqrt(1 + p.a)
    y = y0 + np.linspace(-6e-4, 6e-4, 9)
    with pytest.raises(ValueError):
        evolve_full(p, cutoffs, t, np.array([0.0, p.a]), y0 + np.array([0.0, 0.5]))
    fld = evolve_full(p, cutoffs, t, np.array([0.0, p.a]), y,
                      propagator=spectral50)
    assert np.max(np.abs(fld.values[0, 0, :])) < 1e-9 * np.max(np.abs(fld.values))


def test_evolve_full_band_limited(packet50, cutoffs, spectral50):
    # the y spectrum lives in |theta| in [1/(2h), 2/h]
    p = packet50
    T = 1.0
    t = math.sqrt(p.a) * T
    W = 9.0 * p.a ** 1.5
    n = 4096
    y0 = -t * math.sqrt(1 + p.a)
    y = y0 + np.linspace(-W, W, n, endpoint=False)
    fld = evolve_full(p, cutoffs, t, np.array([p.a]), y, propagator=spectral50)
    sig = fld.values[0, 0, :]
    spec = np.fft.fft(sig)
    freqs = 2 * np.pi * np.fft.fftfreq(n, d=(y[1] - y[0]))
    inside = (freqs >= 0.4 / p.h) & (freqs <= 2.1 / p.h)
    energy = np.abs(spec) ** 2
    leak = energy[~inside].sum() / energy.sum()
    assert leak < 1e-6


def test_crosscheck_lambda50(packet50, cutoffs, spectral50, reflection50):
    # dual-representation agreement at seeded probes (the module's central
    # oracle; the full three-lambda version runs in the acceptance suite)
    from convexwave.cli import probe_points
    from convexwave.parametrix import n_truncation
    pts = np.concatenate([probe_points(packet50, J, 4, seed=J) for J in (0, 1)])
    sv = spectral50.values_at(pts)
    scale = np.max(np.abs(sv))
    worst = 0.0
    for (T, X, Y), s in zip(pts, sv):
        pv = reflection50.value(float(T), float(X), float(Y),
                                n_list=n_truncation(packet50, float(T)))
        worst = max(worst, abs(pv - s) / scale)
    assert worst < 1e-2


# ---------------------------------------------------------------- Green fn

@pytest.fixture(scope="module")
def green_setup():
    params = PacketParams(h=0.05, a=0.4, M=2.0)
    return params, CutoffSpec.default()


def test_green_symmetry_in_x(green_setup):
    params, cut = green_setup
    g1 = green_function(params, cut, (0.5, 0.1, 0.3), (0.7, 0.0, 0.0))
    g2 = green_function(params, cut, (0.7, 0.1, 0.3), (0.5, 0.0, 0.0))
    assert g1 == pytest.approx(g2, rel=1e-10)


def test_green_conjugation(green_setup):
    params, cut = green_setup
    gp = green_function(params, cut, (0.5, 0.1, 0.3), (0.7, 0.0, 0.0), sign=+1)
    gm = green_function(params, cut, (0.5, 0.1, 0.3), (0.7, 0.0, 0.0), sign=-1)
    assert gm == pytest.approx(np.conj(gp), rel=1e-12)


def test_green_peak_at_source(green_setup):
    # equal times: the sign-averaged real part peaks at the source point
    params, cut = green_setup
    src = (0.7, 0.0, 0.0)
    xs = [0.45, 0.55, 0.7, 0.85, 1.0]
    vals = []
    for x in xs:
        gp = green_function(params, cut, (x, 0.0, 0.0), src, sign=+1)
        gm = green_function(params, cut, (x, 0.0, 0.0), src, sign=-1)
        vals.append(0.5 * (gp + gm).real)
    assert int(np.argmax(vals)) == xs.index(0.7)
    # and in y at fixed x
    ys = [-0.3, -0.1, 0.0, 0.1, 0.3]
    vals_y = []
    for y in ys:
        gp = green_function(params, cut, (0.7, y, 0.0), src, sign=+1)
        gm = green_function(params, cut, (0.7, y, 0.0), src, sign=-1)
        vals_y.append(0.5 * (gp + gm).real)
    assert int(np.argmax(vals_y)) == ys.index(0.0)


def test_green_budget_guard(green_setup):
    params, cut = green_setup
    with pytest.raises(RuntimeError):
        green_function(params, cut, (0.5, 40.0, 9.0), (0.7, 0.0, 0.0),
                       budget=2e3)
