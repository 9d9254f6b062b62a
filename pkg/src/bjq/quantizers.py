"""Quantization maps for polynomial observables.

Three rules are implemented combinatorially and exactly:

* the tau-ordered rule: on a single-dof monomial x^r p^s it produces
  sum_l C(s,l) (1-tau)^l tau^(s-l) P^(s-l) X^r P^l, extended to several
  degrees of freedom with ONE shared tau (the kernel argument couples all
  dofs through the full dot product p.x, so per-dof taus would be wrong);
* Weyl: the tau = 1/2 member;
* Born-Jordan: the tau-average, integrating tau over [0, 1].

`dequantize_weyl` inverts the Weyl map on polynomials by peeling
generators; the recursion's sign choices are pinned by an internal
round-trip check, not trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .exactalg import (
    HCoeff,
    NormalOp,
    PhasePoly,
    TauOp,
    minus_i_hbar_power,
)

__all__ = [
    "QuantRule",
    "op_tau",
    "op_weyl",
    "op_bj",
    "dequantize_weyl",
    "bj_weyl_symbol",
    "rule_diff",
    "builtin",
    "builtin_names",
    "SymbolRoundTripError",
]

RationalLike = Union[int, Fraction]
TermKey = tuple[tuple[int, ...], tuple[int, ...]]


class SymbolRoundTripError(ArithmeticError):
    """The dequantization recursion failed its own round-trip check."""


@lru_cache(maxsize=None)
def _tau_factor(r: int, s: int) -> tuple[tuple[int, int, int, HCoeff], ...]:
    """Shared-tau expansion of a single-dof monomial x^r p^s.

    Yields (tau_power, x_power, p_power, coeff) for
    sum_l C(s,l)(1-tau)^l tau^(s-l) P^(s-l) X^r P^l after normal ordering;
    coeff carries the binomial weights and the (-i*hbar)^k factors.
    """
    acc: dict[tuple[int, int, int], HCoeff] = {}
    for l in range(s + 1):
        lead = s - l  # the word is P^lead X^r P^l
        for k in range(min(lead, r) + 1):
            opc = minus_i_hbar_power(k) * (
                math.factorial(k) * math.comb(lead, k) * math.comb(r, k)
            )
            xp, pp = r - k, s - k
            for m in range(l + 1):
                w = math.comb(s, l) * math.comb(l, m) * (-1 if m % 2 else 1)
                key = (lead + m, xp, pp)
                c = opc * w
                acc[key] = acc[key] + c if key in acc else c
    return tuple((tp, xp, pp, c) for (tp, xp, pp), c in acc.items() if c)


@lru_cache(maxsize=None)
def _tau_factor_at(r: int, s: int, t: Fraction) -> tuple[tuple[int, int, HCoeff], ...]:
    """`_tau_factor` with tau evaluated at the exact rational t."""
    acc: dict[tuple[int, int], HCoeff] = {}
    for tp, xp, pp, c in _tau_factor(r, s):
        key = (xp, pp)
        v = c * t**tp
        acc[key] = acc[key] + v if key in acc else v
    return tuple((xp, pp, c) for (xp, pp), c in acc.items() if c)


def _embed(key: TermKey, j: int, xp: int, pp: int) -> TermKey:
    a, b = key
    return (
        a[:j] + (xp,) + a[j + 1 :],
        b[:j] + (pp,) + b[j + 1 :],
    )


def op_tau(a: PhasePoly, t: RationalLike | None = None) -> NormalOp | TauOp:
    """tau-ordered quantization of a classical observable.

    With an exact rational ``t`` the result is a `NormalOp`; with
    ``t=None`` tau stays symbolic and the result is a `TauOp`.
    """
    n = a.n
    if t is not None:
        t = Fraction(t)
        total: dict[TermKey, HCoeff] = {}
        for (alpha, beta), coeff in a.items():
            # Factors touch disjoint dofs, so the cross-dof product is a
            # plain exponent merge with no further reordering.
            partial: dict[TermKey, HCoeff] = {((0,) * n, (0,) * n): HCoeff.one()}
            for j in range(n):
                r, s = alpha[j], beta[j]
                if r == 0 and s == 0:
                    continue
                nxt: dict[TermKey, HCoeff] = {}
                for xp, pp, c in _tau_factor_at(r, s, t):
                    for key, pc in partial.items():
                        k2 = _embed(key, j, xp, pp)
                        v = pc * c
                        nxt[k2] = nxt[k2] + v if k2 in nxt else v
                partial = nxt
            for key, pc in partial.items():
                v = pc * coeff
                total[key] = total[key] + v if key in total else v
        return NormalOp(n, total)

    buckets: dict[int, dict[TermKey, HCoeff]] = {}
    for (alpha, beta), coeff in a.items():
        partial: dict[int, dict[TermKey, HCoeff]] = {
            0: {((0,) * n, (0,) * n): HCoeff.one()}
        }
        for j in range(n):
            r, s = alpha[j], beta[j]
            if r == 0 and s == 0:
                continue
            nxt: dict[int, dict[TermKey, HCoeff]] = {}
            for tp, xp, pp, c in _tau_factor(r, s):
                for tp0, terms in partial.items():
                    dst = nxt.setdefault(tp0 + tp, {})
                    for key, pc in terms.items():
                        k2 = _embed(key, j, xp, pp)
                        v = pc * c
                        dst[k2] = dst[k2] + v if k2 in dst else v
            partial = nxt
        for tp, terms in partial.items():
            dst = buckets.setdefault(tp, {})
            for key, pc in terms.items():
                v = pc * coeff
                dst[key] = dst[key] + v if key in dst else v
    return TauOp(n, {tp: NormalOp(n, terms) for tp, terms in buckets.items()})


def op_weyl(a: PhasePoly) -> NormalOp:
    """Weyl (symmetric) quantization: the tau = 1/2 ordering."""
    return op_tau(a, Fraction(1, 2))


def op_bj(a: PhasePoly) -> NormalOp:
    """Born-Jordan quantization: the flat tau-average over [0, 1]."""
    return op_tau(a).integrate()


@dataclass(frozen=True)
class QuantRule:
    """Selector for one member of the quantization family."""

    kind: str  # "weyl" | "bj" | "tau"
    tau_value: Fraction | None = None

    @classmethod
    def weyl(cls) -> "QuantRule":
        return cls("weyl")

    @classmethod
    def bj(cls) -> "QuantRule":
        return cls("bj")

    @classmethod
    def tau(cls, t: RationalLike) -> "QuantRule":
        return cls("tau", Fraction(t))

    @classmethod
    def parse(cls, text: str) -> "QuantRule":
        text = text.strip()
        if text == "weyl":
            return cls.weyl()
        if text == "bj":
            return cls.bj()
        if text.startswith("tau:"):
            body = text[4:]
            try:
                t = Fraction(body)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"invalid tau value {body!r}") from exc
            return cls.tau(t)
        raise ValueError(f"unknown quantization rule {text!r}")

    def apply(self, a: PhasePoly) -> NormalOp:
        if self.kind == "weyl":
            return op_weyl(a)
        if self.kind == "bj":
            return op_bj(a)
        return op_tau(a, self.tau_value)

    def __str__(self) -> str:
        if self.kind == "tau":
            return f"tau:{self.tau_value}"
        return self.kind


def rule_diff(a: PhasePoly, r1: QuantRule, r2: QuantRule) -> NormalOp:
    """op_r1(a) - op_r2(a), exact."""
    return r1.apply(a) - r2.apply(a)


_I_HALF_HBAR = HCoeff({1: (0, Fraction(1, 2))})


@lru_cache(maxsize=None)
def _weyl_symbol_of_term(n: int, a: tuple[int, ...], b: tuple[int, ...]) -> PhasePoly:
    # Peel generators from the left: every x-hat before any p-hat, so the
    # p-peel only ever runs on pure P words.
    for j in range(n):
        if a[j]:
            rest = _weyl_symbol_of_term(n, a[:j] + (a[j] - 1,) + a[j + 1 :], b)
            return PhasePoly.x(j, n) * rest + rest.diff_p(j).scale(_I_HALF_HBAR)
    for j in range(n):
        if b[j]:
            rest = _weyl_symbol_of_term(n, a, b[:j] + (b[j] - 1,) + b[j + 1 :])
            return PhasePoly.p(j, n) * rest - rest.diff_x(j).scale(_I_HALF_HBAR)
    return PhasePoly.one(n)


def dequantize_weyl(op: NormalOp) -> PhasePoly:
    """Weyl symbol of a normal-ordered operator.

    Exact two-sided inverse of `op_weyl` on polynomials.  Fails closed:
    the round trip op_weyl(symbol) == op is verified before returning.
    """
    n = op.n
    symbol = PhasePoly.zero(n)
    for (a, b), c in op.items():
        symbol = symbol + _weyl_symbol_of_term(n, a, b).scale(c)
    if op_weyl(symbol) != op:
        raise SymbolRoundTripError("weyl symbol recursion failed its round trip")
    return symbol


def bj_weyl_symbol(a: PhasePoly) -> PhasePoly:
    """Weyl symbol of the Born-Jordan quantization of ``a``."""
    return dequantize_weyl(op_bj(a))


# ---------------------------------------------------------------------------
# Built-in observables
# ---------------------------------------------------------------------------

# Angular momentum components as (j, k) pairs: l = x_j p_k - x_k p_j.
_ANGULAR_PAIRS = {"l1": (1, 2), "l2": (2, 0), "l3": (0, 1)}


def _angular_component(name: str, n: int) -> PhasePoly:
    j, k = _ANGULAR_PAIRS[name]
    return PhasePoly.x(j, n) * PhasePoly.p(k, n) - PhasePoly.x(k, n) * PhasePoly.p(j, n)


def _angular_component_op(name: str, n: int) -> NormalOp:
    j, k = _ANGULAR_PAIRS["l" + name[-1]]
    return NormalOp.x(j, n) * NormalOp.p(k, n) - NormalOp.x(k, n) * NormalOp.p(j, n)


def _lsq(n: int) -> PhasePoly:
    total = PhasePoly.zero(n)
    for name in ("l1", "l2", "l3"):
        c = _angular_component(name, n)
        total = total + c * c
    return total


def _lsq_op(n: int) -> NormalOp:
    total = NormalOp.zero(n)
    for name in ("Lop1", "Lop2", "Lop3"):
        c = _angular_component_op(name, n)
        total = total + c * c
    return total


def _ho(n: int) -> PhasePoly:
    x, p = PhasePoly.x(0, n), PhasePoly.p(0, n)
    return (x * x + p * p).scale(Fraction(1, 2))


def _cross12(n: int) -> PhasePoly:
    out = PhasePoly.x(0, n) * PhasePoly.p(0, n) * PhasePoly.x(1, n) * PhasePoly.p(1, n)
    return out.scale(2)


_BUILTINS: dict[str, tuple[str, int, object]] = {
    # name: (kind, minimal n, builder)
    "l1": ("classical", 3, lambda n: _angular_component("l1", n)),
    "l2": ("classical", 3, lambda n: _angular_component("l2", n)),
    "l3": ("classical", 3, lambda n: _angular_component("l3", n)),
    "lsq": ("classical", 3, _lsq),
    "ho": ("classical", 1, _ho),
    "cross12": ("classical", 2, _cross12),
    "Lop1": ("operator", 3, lambda n: _angular_component_op("Lop1", n)),
    "Lop2": ("operator", 3, lambda n: _angular_component_op("Lop2", n)),
    "Lop3": ("operator", 3, lambda n: _angular_component_op("Lop3", n)),
    "Lsq_op": ("operator", 3, _lsq_op),
}


def builtin_names() -> dict[str, str]:
    """Catalog names mapped to their kind ('classical' or 'operator')."""
    return {name: kind for name, (kind, _, _) in _BUILTINS.items()}


def builtin_min_n(name: str) -> int:
    try:
        return _BUILTINS[name][1]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}") from None


def builtin(name: str, n: int | None = None) -> PhasePoly | NormalOp:
    """Cataloged observable/operator over ``n`` degrees of freedom.

    ``n`` defaults to the observable's natural dof count and may be larger
    (the value embeds in the first dofs); smaller n is an error.
    """
    try:
        _, min_n, build = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}") from None
    if n is None:
        n = min_n
    if n < min_n:
        raise ValueError(f"builtin {name!r} needs at least n={min_n}, got n={n}")
    return build(n)
