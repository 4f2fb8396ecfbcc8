"""Airy core: values against independent extended-precision oracles, the
phase function, zeros, and the phase-table invariants."""

import math

import mpmath
import numpy as np
import pytest
from scipy import special

from convexwave.airy import (AI0, AIP0, ENVELOPE, EnvelopeError, PhaseTable, a_pm,
                             ai, ai_prime, airy_zero, airy_zeros, big_l,
                             big_l_asymptotic, big_l_prime, phase_table)
from convexwave.quadrature import adaptive_quad

mpmath.mp.dps = 50


def oracle_ai(z, derivative=0):
    """Independent power-series/asymptotic oracle in 50-digit arithmetic."""
    return complex(mpmath.airyai(complex(z), derivative))


def oracle_ai_series(x, n_terms=120):
    """Plain Maclaurin summation in extended precision (series oracle)."""
    x = mpmath.mpf(x)
    c1 = mpmath.mpf(3) ** mpmath.mpf("-2/3") / mpmath.gamma(mpmath.mpf("2/3"))
    c2 = mpmath.mpf(3) ** mpmath.mpf("-1/3") / mpmath.gamma(mpmath.mpf("1/3"))
    f = mpmath.mpf(1)
    g = x
    tf, tg = mpmath.mpf(1), x
    for k in range(n_terms):
        tf *= x ** 3 / ((3 * k + 2) * (3 * k + 3))
        tg *= x ** 3 / ((3 * k + 3) * (3 * k + 4))
        f += tf
        g += tg
    return float(c1 * f - c2 * g)


def bisect_first_zero(lo=2.0, hi=3.0, iters=80):
    """First Airy zero by bisection of the oracle on [2, 3]."""
    flo = oracle_ai_series(-lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = oracle_ai_series(-mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


OMEGA1 = bisect_first_zero()


# ---------------------------------------------------------------- ai / ai'

def test_ai_at_zero_against_series_oracle():
    assert ai(0.0) == pytest.approx(oracle_ai_series(0.0), rel=1e-14)
    assert ai(0.0) == pytest.approx(1.0 / (3 ** (2 / 3) * math.gamma(2 / 3)), rel=1e-13)
    assert abs(AI0 - 0.3550280538878172) < 1e-15


def test_ai_vanishes_at_first_zero():
    assert abs(ai(-OMEGA1)) < 1e-10


def test_ai_decays_on_positive_axis():
    val = ai(5.0)
    assert val > 0
    assert val < 1e-3
    # asymptotic-series oracle: leading term e^{-zeta}/(2 sqrt(pi) x^{1/4})
    zeta = 2.0 / 3.0 * 5.0 ** 1.5
    lead = math.exp(-zeta) / (2 * math.sqrt(math.pi) * 5.0 ** 0.25)
    assert val == pytest.approx(lead, rel=0.02)


def test_ai_real_axis_imag_part():
    vals = ai(np.linspace(-10, 10, 41) + 0j)
    assert np.max(np.abs(vals.imag)) < 1e-14


def test_ai_matches_oracle_on_grid():
    xs = np.linspace(-48.0, 48.0, 97)
    for x in xs:
        t = oracle_ai(x)
        amp = max(abs(t), 0.27 / max(abs(x), 1.0) ** 0.25)
        assert abs(ai(float(x)) - t.real) <= 1e-10 * amp


def test_ai_complex_against_oracle(rng):
    z = rng.uniform(-30, 30, 60) + 1j * rng.uniform(-30, 30, 60)
    z = z[np.abs(z) <= ENVELOPE][:40]
    vals = ai(z)
    for zz, v in zip(z, vals):
        t = oracle_ai(zz)
        assert abs(v - t) <= 1e-10 * max(abs(t), 1e-30)


def test_ai_envelope_error():
    with pytest.raises(EnvelopeError):
        ai(51.0)
    with pytest.raises(EnvelopeError):
        ai_prime(40 + 40j)


def test_ai_prime_at_zero():
    # term-by-term differentiated series oracle
    h = mpmath.mpf("1e-20")
    d = float((mpmath.airyai(h) - mpmath.airyai(-h)) / (2 * h))
    assert ai_prime(0.0) == pytest.approx(d, rel=1e-12)
    assert abs(AIP0 + 0.2588194037928068) < 1e-15


def test_ai_prime_sq_at_zero_equals_lprime_over_2pi(table):
    om1 = table.zeros[0]
    assert ai_prime(-om1) ** 2 == pytest.approx(table.lprime[0] / (2 * np.pi), rel=1e-9)


def test_ai_prime_finite_difference():
    d = (ai(1.0 + 1e-5) - ai(1.0 - 1e-5)) / 2e-5
    assert ai_prime(1.0) == pytest.approx(d, abs=1e-6)


def test_ai_prime_against_scipy_grid():
    xs = np.linspace(-20, 12, 65)
    mine = np.array([ai_prime(float(x)) for x in xs])
    ref = special.airy(xs)[1]
    amp = np.maximum(np.abs(ref), 0.3 * np.maximum(np.abs(xs), 1.0) ** 0.25)
    assert np.max(np.abs(mine - ref) / amp) < 1e-10


def test_seam_cross_validation():
    # series vs asymptotics agree to 1e-10 (relative to |Ai|, which is
    # exponentially large towards the anti-Stokes rays) on the seam annulus,
    # in the sector where the series keeps full accuracy
    from convexwave.airy import _ai_large, _ai_series
    th = np.linspace(np.pi / 2, np.pi, 41)
    for r in (7.5, 8.0, 8.5):
        z = r * np.exp(1j * th)
        s = _ai_series(z, np.clongdouble)[0].astype(np.complex128)
        a = _ai_large(z)[0]
        scale = np.maximum(np.abs(s), 0.27 / r ** 0.25)
        assert np.max(np.abs(s - a) / scale) < 1e-10


# ---------------------------------------------------------------- A+/A-

def test_apm_sum_is_ai_at_origin():
    assert a_pm(+1, 0.0) + a_pm(-1, 0.0) == pytest.approx(ai(0.0), abs=1e-14)


def test_apm_connection_identity():
    val = a_pm(+1, 1.5) + a_pm(-1, 1.5)
    assert abs(val - ai(-1.5)) < 1e-10
    assert abs(val.imag) < 1e-12


def test_apm_conjugate_modulus():
    assert abs(a_pm(+1, 3.0)) == pytest.approx(abs(a_pm(-1, 3.0)), rel=1e-12)


def test_apm_connection_random(rng):
    # For z < 0 the two branches are exponentially large conjugates whose
    # sum is recessive, so the 1e-10 tolerance is relative to the summand
    # scale (an absolute check would demand ~30-digit cancellation).
    z = rng.uniform(-10, 10, 100)
    vals = a_pm(+1, z) + a_pm(-1, z)
    ref = np.array([ai(float(-zz)) for zz in z])
    scale = np.maximum(1.0, np.abs(a_pm(+1, z)))
    assert np.max(np.abs(vals - ref) / scale) < 1e-10


# ---------------------------------------------------------------- L

def test_big_l_anchor_values():
    assert big_l(0.0) == pytest.approx(np.pi / 3.0, abs=1e-12)
    assert big_l(-10.0) < 0.01
    assert big_l(-10.0) > 0.0


def test_big_l_at_zeros(table):
    for k in (1, 5, 20, 50):
        assert big_l(float(table.zeros[k - 1])) == pytest.approx(2 * np.pi * k, abs=1e-8)


def test_big_l_realness_and_branch(rng):
    # L real <=> |A-/A+| = 1, and exp(-i(L-pi)) must reproduce A-/A+
    om = np.linspace(-10, 30, 81)
    ratio = a_pm(-1, om) / a_pm(+1, om)
    assert np.max(np.abs(np.abs(ratio) - 1.0)) < 1e-12
    L = big_l(om)
    assert np.max(np.abs(np.exp(-1j * (L - np.pi)) - ratio)) < 1e-10


def test_big_l_strictly_increasing():
    # Below omega ~ -5 the function is ~1e-7 with derivative ~1e-10 or less,
    # so forward differences of the double-precision values fall under the
    # representable resolution; strict positivity is asserted where the
    # difference is resolvable and non-negativity (up to one ulp) elsewhere.
    om = np.arange(-10.0, 30.0, 1e-2)
    L = big_l(om)
    dL = np.diff(L)
    assert np.all(dL > -1e-12)
    assert np.all(dL[om[:-1] >= -5.0] > 0)
    assert np.all(big_l_prime(om) > 0)


def test_big_l_prime_positive_and_matches_fd():
    om = np.linspace(-5, 20, 26)
    lp = big_l_prime(om)
    assert np.all(lp > 0)
    h = 1e-6
    for w in (-3.0, 0.0, 2.5, 11.0):
        fd = (big_l(w + h) - big_l(w - h)) / (2 * h)
        assert big_l_prime(w) == pytest.approx(fd, rel=1e-6)


def test_big_l_prime_quadrature_identity(table):
    # L'(omega_1) = 2 pi * int_0^inf Ai^2(x - omega_1) dx  (scipy integrand)
    om1 = float(table.zeros[0])
    val, _ = adaptive_quad(lambda x: special.airy(x - om1)[0] ** 2,
                           0.0, om1 + 16.0, tol=1e-12)
    assert table.lprime[0] == pytest.approx(2 * np.pi * val, rel=1e-8)


def test_big_l_prime_equals_two_pi_aiprime_sq(table):
    lhs = table.lprime[:20]
    rhs = 2 * np.pi * table.aiprime_sq[:20]
    assert np.max(np.abs(lhs - rhs) / lhs) < 1e-8


def test_l2_airy_integral_identity(rng):
    # int_0^inf Ai^2(x - w) dx = w Ai(-w)^2 + Ai'(-w)^2
    for w in rng.uniform(0, 10, 20):
        val, _ = adaptive_quad(lambda x: special.airy(x - w)[0] ** 2,
                               0.0, w + 16.0, tol=1e-12)
        rhs = w * ai(-w) ** 2 + ai_prime(-w) ** 2
        assert val == pytest.approx(rhs, abs=1e-8)


def test_airy_cross_orthogonality(table):
    # int_0^inf Ai(x-om_k) Ai(x-om_j) dx = 0 for k != j
    for (k, j) in [(1, 2), (2, 5), (3, 9), (1, 10), (7, 8)]:
        ok, oj = float(table.zeros[k - 1]), float(table.zeros[j - 1])
        val, _ = adaptive_quad(
            lambda x: special.airy(x - ok)[0] * special.airy(x - oj)[0],
            0.0, max(ok, oj) + 16.0, tol=1e-12)
        assert abs(val) < 1e-8


# ---------------------------------------------------------------- asymptotic form

def test_big_l_asymptotic_leading():
    assert big_l_asymptotic(9.0, 0) == pytest.approx(4.0 / 3.0 * 27.0 + np.pi / 2.0, rel=1e-15)


def test_big_l_asymptotic_b1():
    from convexwave.airy import B1
    assert B1 == pytest.approx(5.0 / 24.0, abs=0)


def test_big_l_asymptotic_decay_rate():
    e9 = abs(big_l(9.0) - big_l_asymptotic(9.0, 1))
    e16 = abs(big_l(16.0) - big_l_asymptotic(16.0, 1))
    assert e16 < e9 * (9.0 / 16.0) ** 4.5 * 1.5


def test_big_l_asymptotic_domain():
    with pytest.raises(ValueError):
        big_l_asymptotic(0.5, 1)


# ---------------------------------------------------------------- zeros & table

def test_first_zero_value(table):
    assert table.zeros[0] == pytest.approx(OMEGA1, abs=1e-10)
    assert airy_zero(1) == pytest.approx(2.3381074, abs=1e-6)
    assert table.zeros[0] > 2.0


def test_zero_out_of_range():
    with pytest.raises(ValueError):
        airy_zero(0)
    with pytest.raises(ValueError):
        airy_zero(1001)


def test_zeros_match_scipy(table):
    ref = special.ai_zeros(50)[0]
    assert np.max(np.abs(table.zeros[:50] + ref)) < 1e-10


def test_zero_growth_exponent(table):
    k = 200
    ratio = table.zeros[k - 1] / k ** (2.0 / 3.0)
    assert ratio == pytest.approx((1.5 * np.pi) ** (2.0 / 3.0), rel=0.05)


def test_phase_table_invariants(table):
    z = table.zeros
    assert z[0] > 2.0
    assert np.all(np.diff(z) > 0)
    resid = np.abs(np.array([ai(float(-w)) for w in z[:50]]))
    assert np.max(resid) < 1e-10
    L = np.array([big_l(float(w)) for w in z[:50]])
    assert np.max(np.abs(L - 2 * np.pi * np.arange(1, 51))) < 1e-8


def test_phase_table_csv_roundtrip(tmp_path, table):
    small = phase_table(10)
    p = tmp_path / "table.csv"
    small.to_csv(p)
    back = PhaseTable.from_csv(p)
    assert np.array_equal(back.zeros, small.zeros)
    assert np.array_equal(back.lprime, small.lprime)
    assert np.array_equal(back.aiprime_sq, small.aiprime_sq)
    with open(p) as fh:
        assert fh.readline().strip() == "k,omega_k,L_prime,ai_prime_sq"


def test_phase_table_rejects_corrupt(table):
    with pytest.raises(ValueError):
        PhaseTable(zeros=table.zeros[:5] + 0.1, lprime=table.lprime[:5],
                   aiprime_sq=table.aiprime_sq[:5])
