"""Unit and property tests for the exact algebra substrate."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bjq.exactalg import (
    DimensionMismatch,
    HCoeff,
    NormalOp,
    PhasePoly,
    TauOp,
    commutator,
    normal_reorder,
)
from bjq.oracles import interpolate_tau

from helpers import rand_hcoeff, rand_normalop, rand_poly, rand_tauop

I_HBAR = HCoeff.hbar(1, 0, 1)  # i*hbar


# -- HCoeff ------------------------------------------------------------------


def test_ihbar_squared():
    assert I_HBAR * I_HBAR == HCoeff.hbar(2, -1, 0)


def test_conjugation_flips_i_and_fixes_hbar():
    assert I_HBAR.conjugate() == HCoeff.hbar(1, 0, -1)
    assert HCoeff.hbar(3).conjugate() == HCoeff.hbar(3)


def test_cancellation_yields_empty_map():
    half = HCoeff.hbar(2, Fraction(1, 2), 0)
    assert not (half + (-half))
    assert half + (-half) == HCoeff.zero()


def test_hcoeff_rejects_negative_hbar_power():
    with pytest.raises(ValueError):
        HCoeff({-1: (1, 0)})


def test_to_complex():
    c = HCoeff({0: (Fraction(1, 2), 0), 2: (0, 1)})
    assert c.to_complex(2.0) == pytest.approx(0.5 + 4j)


@st.composite
def hcoeffs(draw):
    terms = {}
    for k in range(draw(st.integers(0, 2)) + 1):
        re = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
        im = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
        terms[k] = (re, im)
    return HCoeff(terms)


@given(hcoeffs(), hcoeffs(), hcoeffs())
@settings(max_examples=60, deadline=None, derandomize=True)
def test_hcoeff_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


# -- normal_reorder ----------------------------------------------------------


def test_reorder_px():
    assert normal_reorder(1, 1) == NormalOp(1, {((1,), (1,)): 1, ((0,), (0,)): -I_HBAR})


def test_reorder_p2x():
    expected = NormalOp(1, {((1,), (2,)): 1, ((0,), (1,)): I_HBAR * (-2)})
    assert normal_reorder(2, 1) == expected


def test_reorder_trivial_when_no_p():
    assert normal_reorder(0, 5) == NormalOp.monomial((5,), (0,))


@pytest.mark.parametrize("a", range(0, 7))
@pytest.mark.parametrize("b", range(0, 7))
def test_reorder_reproduces_abstract_product(a, b):
    lhs = NormalOp.monomial((0,), (a,)) * NormalOp.monomial((b,), (0,))
    assert lhs == normal_reorder(a, b)


# -- PhasePoly ---------------------------------------------------------------


def test_poly_binomial_square():
    n = 2
    l3 = PhasePoly.x(0, n) * PhasePoly.p(1, n) - PhasePoly.x(1, n) * PhasePoly.p(0, n)
    sq = l3 * l3
    assert sq.coefficient((2, 0), (0, 2)) == HCoeff.one()
    assert sq.coefficient((0, 2), (2, 0)) == HCoeff.one()
    assert sq.coefficient((1, 1), (1, 1)) == HCoeff.rational(-2)
    assert len(sq) == 3


def test_poly_identity_and_difference_of_squares():
    a = rand_poly(random.Random(7), 2)
    assert a * PhasePoly.one(2) == a
    x, p = PhasePoly.x(0, 1), PhasePoly.p(0, 1)
    assert (x + p) * (x - p) == x * x - p * p


def test_poly_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        PhasePoly.one(1) * PhasePoly.one(2)


def test_poly_derivatives():
    a = PhasePoly.monomial((2,), (3,))
    assert a.diff_x(0) == PhasePoly.monomial((1,), (3,), 2)
    assert a.diff_p(0) == PhasePoly.monomial((2,), (2,), 3)


# -- NormalOp ----------------------------------------------------------------


def test_op_mul_xp_squared():
    xp = NormalOp.monomial((1,), (1,))
    assert xp * xp == NormalOp(1, {((2,), (2,)): 1, ((1,), (1,)): -I_HBAR})


def test_op_mul_identity():
    rng = random.Random(3)
    a = rand_normalop(rng, 2)
    assert a * NormalOp.identity(2) == a
    assert NormalOp.identity(2) * a == a


def test_p2_times_x2():
    p2 = NormalOp.monomial((0,), (2,))
    x2 = NormalOp.monomial((2,), (0,))
    expected = NormalOp(
        1,
        {
            ((2,), (2,)): 1,
            ((1,), (1,)): I_HBAR * (-4),
            ((0,), (0,)): HCoeff.hbar(2, -2, 0),
        },
    )
    assert p2 * x2 == expected


def test_ccr_table():
    n = 3
    for j in range(n):
        for k in range(n):
            expected = (
                NormalOp.scalar(I_HBAR, n) if j == k else NormalOp.zero(n)
            )
            assert commutator(NormalOp.x(j, n), NormalOp.p(k, n)) == expected
    assert commutator(NormalOp.x(0, n), NormalOp.x(1, n)) == NormalOp.zero(n)
    x = NormalOp.x(0, 1)
    assert commutator(x, x * x) == NormalOp.zero(1)


def test_ring_laws_randomized():
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randint(1, 3)
        a = rand_normalop(rng, n, max_terms=2, max_deg=3)
        b = rand_normalop(rng, n, max_terms=2, max_deg=3)
        c = rand_normalop(rng, n, max_terms=2, max_deg=3)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c


def test_adjoint_involution_and_antihomomorphism():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(1, 3)
        a = rand_normalop(rng, n, max_terms=3, max_deg=3)
        b = rand_normalop(rng, n, max_terms=2, max_deg=3)
        assert a.adjoint().adjoint() == a
        assert (a * b).adjoint() == b.adjoint() * a.adjoint()


def test_adjoint_examples():
    xp = NormalOp.monomial((1,), (1,))
    # (XP)^† = PX = XP - i*hbar
    assert xp.adjoint() == NormalOp(1, {((1,), (1,)): 1, ((0,), (0,)): -I_HBAR})
    sym = (xp + xp.adjoint()).scale(Fraction(1, 2))
    assert sym.adjoint() == sym
    assert NormalOp.identity(2).adjoint() == NormalOp.identity(2)


def test_op_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        NormalOp.identity(1) * NormalOp.identity(2)


# -- TauOp -------------------------------------------------------------------


def test_tau_integrate_monomials():
    m = NormalOp.monomial((1,), (2,))
    assert TauOp(1, {1: m}).integrate() == m.scale(Fraction(1, 2))
    assert TauOp(1, {2: m}).integrate() == m.scale(Fraction(1, 3))


def test_tau_eval_interpolates_orderings():
    # tau*PX + (1-tau)*XP at tau = 1/2 is the symmetric combination.
    px = normal_reorder(1, 1)
    xp = NormalOp.monomial((1,), (1,))
    t = TauOp(1, {0: xp, 1: px - xp})
    got = t.eval(Fraction(1, 2))
    assert got == (px + xp).scale(Fraction(1, 2))
    assert got == NormalOp(1, {((1,), (1,)): 1, ((0,), (0,)): I_HBAR * Fraction(-1, 2)})


def test_tau_integrate_matches_interpolation_oracle():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 2)
        t = rand_tauop(rng, n)
        rebuilt = interpolate_tau(t.eval, t.degree, n)
        assert rebuilt == t
        assert rebuilt.integrate() == t.integrate()
