"""Shared test utilities: seeded random algebra values and independent
quadrature oracles for the phase-space numerics."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from bjq.exactalg import HCoeff, NormalOp, PhasePoly, TauOp


def rand_fraction(rng, span: int = 4, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def rand_hcoeff(rng, max_hpow: int = 1, allow_zero: bool = False) -> HCoeff:
    terms = {}
    for k in range(max_hpow + 1):
        if rng.random() < 0.6:
            terms[k] = (rand_fraction(rng), rand_fraction(rng))
    out = HCoeff(terms)
    if not out and not allow_zero:
        return HCoeff.rational(rng.randint(1, 3))
    return out


def rand_index(rng, n: int, max_deg: int) -> tuple[int, ...]:
    return tuple(rng.randint(0, max_deg) for _ in range(n))


def rand_poly(rng, n: int, max_terms: int = 4, max_deg: int = 5) -> PhasePoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        key = (rand_index(rng, n, max_deg), rand_index(rng, n, max_deg))
        terms[key] = rand_hcoeff(rng)
    return PhasePoly(n, terms)


def rand_normalop(rng, n: int, max_terms: int = 4, max_deg: int = 3) -> NormalOp:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        key = (rand_index(rng, n, max_deg), rand_index(rng, n, max_deg))
        terms[key] = rand_hcoeff(rng)
    return NormalOp(n, terms)


def rand_tauop(rng, n: int, max_tau_deg: int = 4) -> TauOp:
    coeffs = {}
    for k in range(max_tau_deg + 1):
        if rng.random() < 0.6:
            coeffs[k] = rand_normalop(rng, n, max_terms=3, max_deg=3)
    if not coeffs:
        coeffs[0] = rand_normalop(rng, n, max_terms=2, max_deg=2)
    return TauOp(n, coeffs)


def rand_x_poly(rng, n: int, max_terms: int = 3, max_deg: int = 4) -> PhasePoly:
    """Polynomial in the position variables only."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        key = (rand_index(rng, n, max_deg), (0,) * n)
        terms[key] = HCoeff.rational(rand_fraction(rng))
    return PhasePoly(n, terms)


def kinetic_plus_potential(rng, n: int) -> PhasePoly:
    """H = sum_j (p_j - A_j(x))^2 / (2 m_j) + V(x) with polynomial A_j, V."""
    total = rand_x_poly(rng, n)  # V
    for j in range(n):
        mass = Fraction(rng.randint(1, 4), rng.randint(1, 2))
        a_j = rand_x_poly(rng, n)
        term = PhasePoly.p(j, n) - a_j
        total = total + (term * term).scale(Fraction(1, 2) / mass)
    return total


# ---------------------------------------------------------------------------
# Quadrature oracles (independent of the FFT pipeline)
# ---------------------------------------------------------------------------


def hermite_state_fn(k: int, hbar: float = 1.0):
    """Vectorized k-th oscillator eigenfunction as a plain callable."""

    def fn(x):
        u = np.asarray(x, dtype=float) / math.sqrt(hbar)
        phi_prev = np.zeros_like(u)
        phi = (math.pi * hbar) ** -0.25 * np.exp(-(u**2) / 2.0)
        for level in range(k):
            phi, phi_prev = (
                math.sqrt(2.0 / (level + 1)) * u * phi
                - math.sqrt(level / (level + 1)) * phi_prev,
                phi,
            )
        return phi.astype(np.complex128)

    return fn


def wigner_quadrature(psi_fn, x: float, p: float, hbar: float = 1.0,
                      half_width: float = 16.0, samples: int = 8001) -> float:
    """Direct Riemann quadrature of the Wigner integral at one point."""
    y = np.linspace(-half_width, half_width, samples)
    vals = (
        psi_fn(x + y / 2.0)
        * np.conj(psi_fn(x - y / 2.0))
        * np.exp(-1j * p * y / hbar)
    )
    return float(np.trapezoid(vals, y).real / (2.0 * math.pi * hbar))
