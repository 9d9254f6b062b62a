"""Tests for the tau / Weyl / Born-Jordan quantization maps."""

import math
import random
from fractions import Fraction

import pytest

from bjq.exactalg import HCoeff, NormalOp, PhasePoly, TauOp
from bjq.quantizers import (
    QuantRule,
    SymbolRoundTripError,
    bj_weyl_symbol,
    builtin,
    dequantize_weyl,
    op_bj,
    op_tau,
    op_weyl,
    rule_diff,
)

from helpers import kinetic_plus_potential, rand_hcoeff, rand_normalop, rand_poly

I_HBAR = HCoeff.hbar(1, 0, 1)
HBAR2 = HCoeff.hbar(2)

XP = PhasePoly.monomial((1,), (1,))
X2P2 = PhasePoly.monomial((2,), (2,))


def scalar_op(value, n=1):
    return NormalOp.scalar(value, n)


# -- tau family ---------------------------------------------------------------


def test_op_tau_xp_symbolic():
    t = op_tau(XP)
    assert isinstance(t, TauOp)
    # x*p -> XP - i*hbar*tau
    assert t.eval(Fraction(1, 3)) == NormalOp(
        1, {((1,), (1,)): 1, ((0,), (0,)): I_HBAR * Fraction(-1, 3)}
    )


def test_op_tau_half_is_the_symmetric_combination():
    # 1/4 (X^2 P^2 + 2 X P^2 X + P^2 X^2), built by explicit products
    x2 = NormalOp.monomial((2,), (0,))
    p2 = NormalOp.monomial((0,), (2,))
    x1 = NormalOp.x(0, 1)
    comb = (x2 * p2 + (x1 * p2 * x1).scale(2) + p2 * x2).scale(Fraction(1, 4))
    assert op_tau(X2P2, Fraction(1, 2)) == comb


def test_op_tau_pure_x_is_t_independent():
    x3 = PhasePoly.monomial((3,), (0,))
    expected = NormalOp.monomial((3,), (0,))
    for t in (0, 1, Fraction(2, 7)):
        assert op_tau(x3, t) == expected


def test_op_tau_endpoints_order_extremes():
    p2x = PhasePoly.monomial((1,), (2,))
    assert op_tau(p2x, 0) == NormalOp.monomial((1,), (2,))  # all X left
    assert op_tau(p2x, 1) == normalized_px()


def normalized_px():
    # P^2 X in normal order: X P^2 - 2 i hbar P
    return NormalOp(1, {((1,), (2,)): 1, ((0,), (1,)): I_HBAR * (-2)})


def test_tau_half_equals_weyl_randomized():
    rng = random.Random(21)
    for _ in range(60):
        a = rand_poly(rng, rng.randint(1, 3), max_terms=3, max_deg=4)
        assert op_tau(a, Fraction(1, 2)) == op_weyl(a)


def test_quantrule_tau_half_behaves_like_weyl():
    rng = random.Random(22)
    half = QuantRule.tau(Fraction(1, 2))
    for _ in range(20):
        a = rand_poly(rng, rng.randint(1, 2), max_terms=3, max_deg=4)
        assert half.apply(a) == QuantRule.weyl().apply(a)


def test_quantrule_parse():
    assert QuantRule.parse("weyl") == QuantRule.weyl()
    assert QuantRule.parse("bj") == QuantRule.bj()
    assert QuantRule.parse("tau:1/3") == QuantRule.tau(Fraction(1, 3))
    with pytest.raises(ValueError):
        QuantRule.parse("tau:1/0")
    with pytest.raises(ValueError):
        QuantRule.parse("born")


# -- Weyl ---------------------------------------------------------------------


def test_weyl_xp():
    assert op_weyl(XP) == NormalOp(
        1, {((1,), (1,)): 1, ((0,), (0,)): I_HBAR * Fraction(-1, 2)}
    )


def test_weyl_x2p2_normal_form():
    assert op_weyl(X2P2) == NormalOp(
        1,
        {
            ((2,), (2,)): 1,
            ((1,), (1,)): I_HBAR * (-2),
            ((0,), (0,)): HCoeff.hbar(2, Fraction(-1, 2), 0),
        },
    )


def test_weyl_mccoy_form():
    # 2^-s sum_l C(s,l) P^(s-l) X^r P^l reproduces op_weyl on monomials.
    for r in range(5):
        for s in range(5):
            acc = NormalOp.zero(1)
            x_r = NormalOp.monomial((r,), (0,))
            for l in range(s + 1):
                word = (
                    NormalOp.monomial((0,), (s - l,))
                    * x_r
                    * NormalOp.monomial((0,), (l,))
                )
                acc = acc + word.scale(math.comb(s, l))
            acc = acc.scale(Fraction(1, 2**s))
            assert acc == op_weyl(PhasePoly.monomial((r,), (s,)))


def test_weyl_tensor_factorization():
    b = PhasePoly.monomial((1, 0), (1, 0))  # x1 p1
    c = PhasePoly.monomial((0, 2), (0, 1))  # x2^2 p2
    assert op_weyl(b * c) == op_weyl(b) * op_weyl(c)


def test_weyl_tensor_factorization_randomized():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(2, 3)
        split = rng.randint(1, n - 1)
        bterms = {}
        cterms = {}
        for _ in range(rng.randint(1, 2)):
            alpha = tuple(rng.randint(0, 3) if j < split else 0 for j in range(n))
            beta = tuple(rng.randint(0, 3) if j < split else 0 for j in range(n))
            bterms[(alpha, beta)] = rand_hcoeff(rng)
        for _ in range(rng.randint(1, 2)):
            alpha = tuple(rng.randint(0, 3) if j >= split else 0 for j in range(n))
            beta = tuple(rng.randint(0, 3) if j >= split else 0 for j in range(n))
            cterms[(alpha, beta)] = rand_hcoeff(rng)
        b, c = PhasePoly(n, bterms), PhasePoly(n, cterms)
        assert op_weyl(b * c) == op_weyl(b) * op_weyl(c)


# -- Born-Jordan --------------------------------------------------------------


def test_bj_x2p2():
    x2 = NormalOp.monomial((2,), (0,))
    p2 = NormalOp.monomial((0,), (2,))
    x1 = NormalOp.x(0, 1)
    comb = (x2 * p2 + x1 * p2 * x1 + p2 * x2).scale(Fraction(1, 3))
    got = op_bj(X2P2)
    assert got == comb
    assert got == NormalOp(
        1,
        {
            ((2,), (2,)): 1,
            ((1,), (1,)): I_HBAR * (-2),
            ((0,), (0,)): HCoeff.hbar(2, Fraction(-2, 3), 0),
        },
    )


def test_bj_p2x():
    p2x = PhasePoly.monomial((1,), (2,))
    assert op_bj(p2x) == NormalOp(
        1, {((1,), (2,)): 1, ((0,), (1,)): I_HBAR * (-1)}
    )


def test_bj_of_potential_is_substitution():
    rng = random.Random(5)
    for _ in range(10):
        terms = {
            ((rng.randint(0, 6),), (0,)): rand_hcoeff(rng) for _ in range(3)
        }
        v = PhasePoly(1, terms)
        expected = NormalOp(1, {key: c for key, c in v.items()})
        assert op_bj(v) == expected
        assert op_weyl(v) == expected


def test_bj_p_outer_and_x_outer_averages_agree():
    # (1/(s+1)) sum_l P^(s-l) X^r P^l  ==  (1/(r+1)) sum_j X^(r-j) P^s X^j
    for r in range(7):
        for s in range(7):
            x_r = NormalOp.monomial((r,), (0,))
            p_s = NormalOp.monomial((0,), (s,))
            p_outer = NormalOp.zero(1)
            for l in range(s + 1):
                p_outer = p_outer + (
                    NormalOp.monomial((0,), (s - l,)) * x_r * NormalOp.monomial((0,), (l,))
                )
            p_outer = p_outer.scale(Fraction(1, s + 1))
            x_outer = NormalOp.zero(1)
            for j in range(r + 1):
                x_outer = x_outer + (
                    NormalOp.monomial((r - j,), (0,)) * p_s * NormalOp.monomial((j,), (0,))
                )
            x_outer = x_outer.scale(Fraction(1, r + 1))
            assert p_outer == x_outer
            assert op_bj(PhasePoly.monomial((r,), (s,))) == p_outer


def test_bj_does_not_factorize():
    b = PhasePoly.monomial((1, 0), (1, 0))
    c = PhasePoly.monomial((0, 1), (0, 1))
    witness = op_bj(b * c) - op_bj(b) * op_bj(c)
    assert witness == NormalOp.scalar(HBAR2 * Fraction(-1, 12), 2)


def test_kinetic_plus_potential_coincidence():
    rng = random.Random(41)
    for _ in range(15):
        n = rng.randint(1, 3)
        h = kinetic_plus_potential(rng, n)
        assert op_bj(h) == op_weyl(h)


# -- hermiticity and linearity -------------------------------------------------


def real_poly(rng, n):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        key = (
            tuple(rng.randint(0, 3) for _ in range(n)),
            tuple(rng.randint(0, 3) for _ in range(n)),
        )
        terms[key] = HCoeff.rational(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    return PhasePoly(n, terms)


def test_real_observables_quantize_to_self_adjoint():
    rng = random.Random(51)
    for _ in range(25):
        n = rng.randint(1, 2)
        a = real_poly(rng, n)
        assert op_weyl(a).adjoint() == op_weyl(a)
        assert op_bj(a).adjoint() == op_bj(a)


def test_tau_adjoint_reflects_parameter():
    rng = random.Random(52)
    for _ in range(25):
        n = rng.randint(1, 2)
        a = real_poly(rng, n)
        t = Fraction(rng.randint(0, 6), 6)
        assert op_tau(a, t).adjoint() == op_tau(a, 1 - t)


def test_linearity_over_scalars():
    rng = random.Random(53)
    for apply_rule in (op_weyl, op_bj, lambda a: op_tau(a, Fraction(1, 3))):
        a = rand_poly(rng, 2, max_terms=3, max_deg=3)
        b = rand_poly(rng, 2, max_terms=3, max_deg=3)
        c = rand_hcoeff(rng)
        assert apply_rule(a + b) == apply_rule(a) + apply_rule(b)
        assert apply_rule(a.scale(c)) == apply_rule(a).scale(c)


# -- dequantization -------------------------------------------------------------


def test_dequantize_xp():
    xp_op = NormalOp.monomial((1,), (1,))
    assert dequantize_weyl(xp_op) == PhasePoly(
        1, {((1,), (1,)): 1, ((0,), (0,)): HCoeff.imag(Fraction(1, 2)) * HCoeff.hbar()}
    )


def test_dequantize_x2_trivial():
    assert dequantize_weyl(NormalOp.monomial((2,), (0,))) == PhasePoly.monomial((2,), (0,))


def test_dequantize_round_trips_randomized():
    rng = random.Random(61)
    for _ in range(60):
        n = rng.randint(1, 3)
        a = rand_poly(rng, n, max_terms=3, max_deg=3)
        assert dequantize_weyl(op_weyl(a)) == a
        op = rand_normalop(rng, n, max_terms=3, max_deg=3)
        assert op_weyl(dequantize_weyl(op)) == op


def test_dequantize_lsq_op_reports_minus_three_halves():
    symbol = dequantize_weyl(builtin("Lsq_op"))
    lsq = builtin("lsq")
    shift = symbol - lsq
    assert shift == PhasePoly.scalar(HCoeff.hbar(2, Fraction(-3, 2), 0), 3)


def test_classical_limit_corrections_carry_hbar():
    rng = random.Random(62)
    rules = (op_weyl, op_bj, lambda a: op_tau(a, Fraction(1, 4)))
    for _ in range(20):
        a = rand_poly(rng, rng.randint(1, 2), max_terms=3, max_deg=4)
        for rule in rules:
            diff = dequantize_weyl(rule(a)) - a
            if rule is op_weyl:
                assert not diff
            for _, coeff in diff.items():
                assert coeff.min_hbar_power >= 1


# -- symbols and differences -----------------------------------------------------


def test_bj_weyl_symbol_examples():
    assert bj_weyl_symbol(XP) == XP
    assert bj_weyl_symbol(PhasePoly.monomial((3,), (0,))) == PhasePoly.monomial((3,), (0,))
    assert bj_weyl_symbol(X2P2) == X2P2 + PhasePoly.scalar(
        HCoeff.hbar(2, Fraction(-1, 6), 0), 1
    )


def test_rule_diff_examples():
    bj, weyl = QuantRule.bj(), QuantRule.weyl()
    assert rule_diff(builtin("lsq"), bj, weyl) == scalar_op(HBAR2 * Fraction(1, 2), 3)
    assert rule_diff(builtin("cross12"), bj, weyl) == scalar_op(
        HBAR2 * Fraction(-1, 6), 2
    )
    assert rule_diff(XP, bj, weyl) == NormalOp.zero(1)


def test_rules_coincide_up_to_total_degree_two():
    for r in range(3):
        for s in range(3):
            if r + s > 2:
                continue
            mono = PhasePoly.monomial((r,), (s,))
            assert op_bj(mono) == op_weyl(mono)


# -- builtins ---------------------------------------------------------------------


def test_builtin_l3():
    l3 = builtin("l3")
    assert l3 == PhasePoly(3, {((1, 0, 0), (0, 1, 0)): 1, ((0, 1, 0), (1, 0, 0)): -1})


def test_builtin_lsq_shape():
    lsq = builtin("lsq")
    squares = [key for key, _ in lsq.items() if max(key[0]) == 2]
    crosses = [key for key, _ in lsq.items() if max(key[0]) == 1]
    assert len(squares) == 6 and len(crosses) == 3
    for key in crosses:
        assert lsq.coefficient(*key) == HCoeff.rational(-2)


def test_builtin_cross12():
    assert builtin("cross12") == PhasePoly.monomial((1, 1), (1, 1), 2)


def test_builtin_lsq_op_matches_component_squares():
    total = NormalOp.zero(3)
    for name in ("Lop1", "Lop2", "Lop3"):
        c = builtin(name)
        total = total + c * c
    assert builtin("Lsq_op") == total


def test_angular_components_quantize_identically():
    for i in (1, 2, 3):
        li = builtin(f"l{i}")
        expected = builtin(f"Lop{i}")
        assert op_bj(li) == expected
        assert op_weyl(li) == expected


def test_builtin_errors():
    with pytest.raises(ValueError):
        builtin("nope")
    with pytest.raises(ValueError):
        builtin("lsq", n=2)
    embedded = builtin("ho", n=2)
    assert embedded.n == 2
