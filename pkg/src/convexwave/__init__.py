"""convexwave: whispering-gallery wave packets on a model convex domain.

A numpy library for the half-plane model domain with Laplacian
``d^2/dx^2 + (1+x) d^2/dy^2`` and Dirichlet boundary: Airy analytics and the
phase function driving the boundary spectrum, the exact spectral half-wave
propagator, an equivalent reflection-sum representation, a cusp wave-packet
datum, and harnesses measuring mixed space-time norms, dispersive peak lower
bounds and Strichartz exponent regions.
"""

__version__ = "0.1.0"

from .airy import (AI0, AIP0, ENVELOPE, EnvelopeError, PhaseTable, a_pm, ai,
                   ai_prime, airy_zero, airy_zeros, big_l, big_l_asymptotic,
                   big_l_prime, phase_table, poisson_lhs, poisson_rhs)
from .bumps import BumpFunction, SmoothStep, smooth_step
from .quadrature import QuadratureError, adaptive_quad, composite_quad, fixed_quad

__all__ = [
    "AI0", "AIP0", "ENVELOPE", "EnvelopeError", "PhaseTable", "a_pm", "ai",
    "ai_prime", "airy_zero", "airy_zeros", "big_l", "big_l_asymptotic",
    "big_l_prime", "phase_table", "poisson_lhs", "poisson_rhs",
    "BumpFunction", "SmoothStep", "smooth_step",
    "QuadratureError", "adaptive_quad", "composite_quad", "fixed_quad",
]
