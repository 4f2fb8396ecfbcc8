"""The summation identity: integrals over phase windings vs sums over zeros."""

import numpy as np
import pytest

from convexwave.airy import big_l_prime, poisson_lhs, poisson_rhs
from convexwave.bumps import BumpFunction


def test_rhs_single_zero(table):
    om1 = float(table.zeros[0])
    # plateau covering exactly the first zero
    phi = BumpFunction.from_edges(om1 - 0.5, om1 - 0.1, om1 + 0.1, om1 + 0.5)
    assert poisson_rhs(phi, table) == pytest.approx(2 * np.pi / table.lprime[0], rel=1e-12)


def test_rhs_vanishing_at_zeros(table):
    # support strictly between the first two zeros
    om1, om2 = table.zeros[:2]
    phi = BumpFunction(center=0.5 * (om1 + om2), half_width=0.4 * (om2 - om1))
    assert poisson_rhs(phi, table) == 0.0


def test_rhs_support_check(table):
    phi = BumpFunction(center=float(table.zeros[-1]) + 5.0, half_width=1.0)
    with pytest.raises(ValueError):
        poisson_rhs(phi, table)


def test_lhs_no_zeros_in_support(table):
    om1 = float(table.zeros[0])
    phi = BumpFunction(center=0.5 * om1, half_width=0.45 * om1 - 0.05)
    val = poisson_lhs(phi, n_max=220)
    assert abs(val) < 1e-5


def test_lhs_matches_rhs_single_zero(table):
    phi = BumpFunction(center=2.3381, half_width=0.5)
    lhs = poisson_lhs(phi, n_max=220)
    rhs = poisson_rhs(phi, table)
    assert abs(lhs - rhs) < 1e-6
    assert abs(lhs.imag) < 1e-6


def test_lhs_error_monotone_in_nmax(table):
    # convergence is monotone while the truncation tail dominates; once the
    # error sits at the quadrature floor (~1e-13 here) extra windings only
    # add roundoff, so the comparison carries a floor allowance
    phi = BumpFunction(center=5.0, half_width=2.2, plateau_fraction=0.35)
    rhs = poisson_rhs(phi, table)
    e50 = abs(poisson_lhs(phi, n_max=50) - rhs)
    e100 = abs(poisson_lhs(phi, n_max=100) - rhs)
    e400 = abs(poisson_lhs(phi, n_max=400) - rhs)
    assert e100 <= e50
    assert e400 <= max(e100, 1e-12)


def test_lhs_generic_three_zero_bump(table):
    # covers omega_1..omega_3
    phi = BumpFunction(center=4.1, half_width=2.4, plateau_fraction=0.45)
    lo, hi = phi.support
    assert lo < table.zeros[0] and table.zeros[2] < hi < table.zeros[3]
    lhs = poisson_lhs(phi, n_max=400)
    rhs = poisson_rhs(phi, table)
    assert abs(lhs - rhs) < 1e-6
