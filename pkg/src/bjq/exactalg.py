"""Exact algebra for phase-space observables and normal-ordered operators.

Scalars (`HCoeff`) are polynomials in hbar whose coefficients are Gaussian
rationals, so every identity built from them is decidable by structural
equality.  `PhasePoly` holds commutative observables a(x, p) over n degrees
of freedom.  `NormalOp` holds noncommutative operators in canonical normal
order: within each degree of freedom all x-hat powers stand to the left of
all p-hat powers, and factors belonging to distinct degrees of freedom
commute.  All reordering is driven by the commutation rule [x, p] = i*hbar.

Values are immutable after construction.  Every operation returns a new
value in canonical sparse form (no stored zeros), so ``==`` is exact
structural equality.  hbar is a formal generator here, never a float;
numeric substitution lives with the consumers (`oracles`, `phasespace`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Union

__all__ = [
    "DimensionMismatch",
    "HCoeff",
    "PhasePoly",
    "NormalOp",
    "TauOp",
    "normal_reorder",
    "commutator",
    "minus_i_hbar_power",
]

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "HCoeff"]


class DimensionMismatch(ValueError):
    """Operands carry different degree-of-freedom counts."""


# (-i)^k as (re, im), indexed by k mod 4.
_MINUS_I_CYCLE = ((1, 0), (0, -1), (-1, 0), (0, 1))


def minus_i_hbar_power(k: int) -> "HCoeff":
    """(-i*hbar)**k, the scalar produced by k applications of [x,p]=i*hbar."""
    re, im = _MINUS_I_CYCLE[k % 4]
    return HCoeff({k: (re, im)})


class HCoeff:
    """Exact scalar: a polynomial in hbar with Gaussian-rational coefficients.

    Stored sparsely as ``{hbar_power: (re, im)}`` with no zero entries.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, tuple[RationalLike, RationalLike]] | None = None):
        canon: dict[int, tuple[Fraction, Fraction]] = {}
        if terms:
            for k, (re, im) in terms.items():
                k = int(k)
                if k < 0:
                    raise ValueError("hbar powers must be non-negative")
                re = Fraction(re)
                im = Fraction(im)
                if re or im:
                    canon[k] = (re, im)
        self._terms = canon

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "HCoeff":
        return cls()

    @classmethod
    def one(cls) -> "HCoeff":
        return cls({0: (1, 0)})

    @classmethod
    def rational(cls, num: RationalLike, den: int = 1) -> "HCoeff":
        return cls({0: (Fraction(num, den), 0)})

    @classmethod
    def imag(cls, value: RationalLike = 1) -> "HCoeff":
        return cls({0: (0, Fraction(value))})

    @classmethod
    def hbar(cls, power: int = 1, re: RationalLike = 1, im: RationalLike = 0) -> "HCoeff":
        return cls({power: (re, im)})

    # -- queries -------------------------------------------------------

    def items(self) -> Iterator[tuple[int, tuple[Fraction, Fraction]]]:
        return iter(sorted(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def min_hbar_power(self) -> int | None:
        """Lowest hbar power present, or None for zero."""
        return min(self._terms) if self._terms else None

    def to_complex(self, hbar: float) -> complex:
        """Numeric read-out at a concrete hbar value."""
        total = 0j
        for k, (re, im) in self._terms.items():
            total += complex(re, im) * hbar**k
        return total

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "HCoeff") -> "HCoeff":
        if not isinstance(other, HCoeff):
            return NotImplemented
        out = dict(self._terms)
        for k, (re, im) in other._terms.items():
            are, aim = out.get(k, (Fraction(0), Fraction(0)))
            out[k] = (are + re, aim + im)
        return HCoeff(out)

    def __sub__(self, other: "HCoeff") -> "HCoeff":
        return self + (-other)

    def __neg__(self) -> "HCoeff":
        return HCoeff({k: (-re, -im) for k, (re, im) in self._terms.items()})

    def __mul__(self, other: ScalarLike) -> "HCoeff":
        if isinstance(other, (int, Fraction)):
            if not other:
                return HCoeff()
            return HCoeff({k: (re * other, im * other) for k, (re, im) in self._terms.items()})
        if not isinstance(other, HCoeff):
            return NotImplemented
        out: dict[int, tuple[Fraction, Fraction]] = {}
        for k1, (a, b) in self._terms.items():
            for k2, (c, d) in other._terms.items():
                k = k1 + k2
                re, im = a * c - b * d, a * d + b * c
                are, aim = out.get(k, (Fraction(0), Fraction(0)))
                out[k] = (are + re, aim + im)
        return HCoeff(out)

    __rmul__ = __mul__

    def conjugate(self) -> "HCoeff":
        """Complex conjugation: i -> -i, hbar fixed."""
        return HCoeff({k: (re, -im) for k, (re, im) in self._terms.items()})

    # -- identity ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HCoeff):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "HCoeff(0)"
        bits = []
        for k, (re, im) in sorted(self._terms.items()):
            bits.append(f"hbar^{k}*({re}{'+' if im >= 0 else ''}{im}i)")
        return "HCoeff(" + " + ".join(bits) + ")"


def _as_hcoeff(value: ScalarLike) -> HCoeff:
    if isinstance(value, HCoeff):
        return value
    return HCoeff.rational(value)


Index = tuple[int, ...]
TermKey = tuple[Index, Index]


def _check_key(n: int, first: Index, second: Index) -> TermKey:
    first = tuple(int(v) for v in first)
    second = tuple(int(v) for v in second)
    if len(first) != n or len(second) != n:
        raise DimensionMismatch(f"multi-index length differs from n={n}")
    if any(v < 0 for v in first) or any(v < 0 for v in second):
        raise ValueError("exponents must be non-negative")
    return first, second


def _unit_index(n: int, j: int) -> Index:
    if not 0 <= j < n:
        raise ValueError(f"degree of freedom {j} out of range for n={n}")
    return tuple(1 if d == j else 0 for d in range(n))


class PhasePoly:
    """Commutative polynomial observable a(x, p) over n degrees of freedom.

    Terms map ``(x_powers, p_powers)`` multi-index pairs to `HCoeff`
    coefficients.  n is fixed per value; mixing values of different n is a
    hard error, never a broadcast.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Mapping[TermKey, ScalarLike] | None = None):
        if n < 1:
            raise ValueError("n must be a positive integer")
        self._n = int(n)
        canon: dict[TermKey, HCoeff] = {}
        if terms:
            for (alpha, beta), coeff in terms.items():
                key = _check_key(self._n, alpha, beta)
                c = _as_hcoeff(coeff)
                if key in canon:
                    c = canon[key] + c
                if c:
                    canon[key] = c
                elif key in canon:
                    del canon[key]
        self._terms = canon

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "PhasePoly":
        return cls(n)

    @classmethod
    def scalar(cls, coeff: ScalarLike, n: int) -> "PhasePoly":
        zero = (0,) * n
        return cls(n, {(zero, zero): coeff})

    @classmethod
    def one(cls, n: int) -> "PhasePoly":
        return cls.scalar(1, n)

    @classmethod
    def x(cls, j: int, n: int) -> "PhasePoly":
        return cls(n, {(_unit_index(n, j), (0,) * n): 1})

    @classmethod
    def p(cls, j: int, n: int) -> "PhasePoly":
        return cls(n, {((0,) * n, _unit_index(n, j)): 1})

    @classmethod
    def monomial(cls, alpha: Index, beta: Index, coeff: ScalarLike = 1) -> "PhasePoly":
        return cls(len(alpha), {(tuple(alpha), tuple(beta)): coeff})

    # -- queries -------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    def items(self) -> Iterator[tuple[TermKey, HCoeff]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, alpha: Index, beta: Index) -> HCoeff:
        return self._terms.get(_check_key(self._n, alpha, beta), HCoeff.zero())

    def p_degree(self) -> int:
        """Largest total p-degree over all terms (the tau-degree bound)."""
        return max((sum(beta) for (_, beta) in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(a) + sum(b) for (a, b) in self._terms), default=0)

    # -- arithmetic ----------------------------------------------------

    def _require_same_n(self, other: "PhasePoly") -> None:
        if self._n != other._n:
            raise DimensionMismatch(f"cannot combine n={self._n} with n={other._n}")

    def __add__(self, other: "PhasePoly") -> "PhasePoly":
        if not isinstance(other, PhasePoly):
            return NotImplemented
        self._require_same_n(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
        return PhasePoly(self._n, out)

    def __sub__(self, other: "PhasePoly") -> "PhasePoly":
        return self + (-other)

    def __neg__(self) -> "PhasePoly":
        return PhasePoly(self._n, {k: -c for k, c in self._terms.items()})

    def __mul__(self, other: Union["PhasePoly", ScalarLike]) -> "PhasePoly":
        if isinstance(other, (int, Fraction, HCoeff)):
            return self.scale(other)
        if not isinstance(other, PhasePoly):
            return NotImplemented
        self._require_same_n(other)
        out: dict[TermKey, HCoeff] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (
                    tuple(x + y for x, y in zip(a1, a2)),
                    tuple(x + y for x, y in zip(b1, b2)),
                )
                c = c1 * c2
                acc = out.get(key)
                out[key] = c if acc is None else acc + c
        return PhasePoly(self._n, out)

    __rmul__ = __mul__

    def scale(self, coeff: ScalarLike) -> "PhasePoly":
        c = _as_hcoeff(coeff)
        return PhasePoly(self._n, {k: v * c for k, v in self._terms.items()})

    def __pow__(self, exponent: int) -> "PhasePoly":
        if exponent < 0:
            raise ValueError("negative exponent")
        out = PhasePoly.one(self._n)
        for _ in range(exponent):
            out = out * self
        return out

    def diff_x(self, j: int) -> "PhasePoly":
        out: dict[TermKey, HCoeff] = {}
        for (alpha, beta), c in self._terms.items():
            e = alpha[j]
            if e:
                key = (tuple(v - 1 if d == j else v for d, v in enumerate(alpha)), beta)
                out[key] = c * e
        return PhasePoly(self._n, out)

    def diff_p(self, j: int) -> "PhasePoly":
        out: dict[TermKey, HCoeff] = {}
        for (alpha, beta), c in self._terms.items():
            e = beta[j]
            if e:
                key = (alpha, tuple(v - 1 if d == j else v for d, v in enumerate(beta)))
                out[key] = c * e
        return PhasePoly(self._n, out)

    # -- identity ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhasePoly):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._n, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        return f"PhasePoly(n={self._n}, terms={len(self._terms)})"


def _dof_reorder(p_pow: int, x_pow: int) -> list[tuple[int, int]]:
    """Reordering table for a single degree of freedom.

    p^a x^b = sum_k m_k * (-i*hbar)^k * x^(b-k) p^(a-k) with
    m_k = k! C(a,k) C(b,k); returns the [(k, m_k)] list.
    """
    return [
        (k, math.factorial(k) * math.comb(p_pow, k) * math.comb(x_pow, k))
        for k in range(min(p_pow, x_pow) + 1)
    ]


class NormalOp:
    """Normal-ordered operator over n degrees of freedom.

    Terms map ``(x_powers, p_powers)`` to `HCoeff`, representing
    sum c_{a,b} * prod_j X_j^{a_j} P_j^{b_j} with every X_j left of P_j
    inside each degree of freedom.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Mapping[TermKey, ScalarLike] | None = None):
        if n < 1:
            raise ValueError("n must be a positive integer")
        self._n = int(n)
        canon: dict[TermKey, HCoeff] = {}
        if terms:
            for (a, b), coeff in terms.items():
                key = _check_key(self._n, a, b)
                c = _as_hcoeff(coeff)
                if key in canon:
                    c = canon[key] + c
                if c:
                    canon[key] = c
                elif key in canon:
                    del canon[key]
        self._terms = canon

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "NormalOp":
        return cls(n)

    @classmethod
    def scalar(cls, coeff: ScalarLike, n: int) -> "NormalOp":
        zero = (0,) * n
        return cls(n, {(zero, zero): coeff})

    @classmethod
    def identity(cls, n: int) -> "NormalOp":
        return cls.scalar(1, n)

    @classmethod
    def x(cls, j: int, n: int) -> "NormalOp":
        return cls(n, {(_unit_index(n, j), (0,) * n): 1})

    @classmethod
    def p(cls, j: int, n: int) -> "NormalOp":
        return cls(n, {((0,) * n, _unit_index(n, j)): 1})

    @classmethod
    def monomial(cls, a: Index, b: Index, coeff: ScalarLike = 1) -> "NormalOp":
        return cls(len(a), {(tuple(a), tuple(b)): coeff})

    # -- queries -------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    def items(self) -> Iterator[tuple[TermKey, HCoeff]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, a: Index, b: Index) -> HCoeff:
        return self._terms.get(_check_key(self._n, a, b), HCoeff.zero())

    def is_scalar(self) -> bool:
        """True when the operator is a multiple of the identity (or zero)."""
        zero = ((0,) * self._n, (0,) * self._n)
        return all(key == zero for key in self._terms)

    def scalar_part(self) -> HCoeff:
        zero = ((0,) * self._n, (0,) * self._n)
        return self._terms.get(zero, HCoeff.zero())

    def max_dof_degree(self) -> int:
        """Largest x-power + p-power on any single degree of freedom."""
        best = 0
        for a, b in self._terms:
            for j in range(self._n):
                best = max(best, a[j] + b[j])
        return best

    # -- arithmetic ----------------------------------------------------

    def _require_same_n(self, other: "NormalOp") -> None:
        if self._n != other._n:
            raise DimensionMismatch(f"cannot combine n={self._n} with n={other._n}")

    def __add__(self, other: "NormalOp") -> "NormalOp":
        if not isinstance(other, NormalOp):
            return NotImplemented
        self._require_same_n(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
        return NormalOp(self._n, out)

    def __sub__(self, other: "NormalOp") -> "NormalOp":
        return self + (-other)

    def __neg__(self) -> "NormalOp":
        return NormalOp(self._n, {k: -c for k, c in self._terms.items()})

    def scale(self, coeff: ScalarLike) -> "NormalOp":
        c = _as_hcoeff(coeff)
        return NormalOp(self._n, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other: Union["NormalOp", ScalarLike]) -> "NormalOp":
        if isinstance(other, (int, Fraction, HCoeff)):
            return self.scale(other)
        if not isinstance(other, NormalOp):
            return NotImplemented
        self._require_same_n(other)
        n = self._n
        out: dict[TermKey, HCoeff] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                c12 = c1 * c2
                if not any(b and a for b, a in zip(b1, a2)):
                    # No p passes an x anywhere: plain exponent merge.
                    key = (
                        tuple(x + y for x, y in zip(a1, a2)),
                        tuple(x + y for x, y in zip(b1, b2)),
                    )
                    acc = out.get(key)
                    out[key] = c12 if acc is None else acc + c12
                    continue
                # Within each dof, commute p^{b1_j} past x^{a2_j}; choices
                # across dofs combine multiplicatively.
                combos: list[tuple[Index, Index, int, int]] = [((), (), 0, 1)]
                for j in range(n):
                    nxt: list[tuple[Index, Index, int, int]] = []
                    for k, m in _dof_reorder(b1[j], a2[j]):
                        ax = a1[j] + a2[j] - k
                        bx = b1[j] + b2[j] - k
                        for at, bt, ktot, mtot in combos:
                            nxt.append((at + (ax,), bt + (bx,), ktot + k, mtot * m))
                    combos = nxt
                for at, bt, ktot, mtot in combos:
                    c = c12 * minus_i_hbar_power(ktot) * mtot
                    acc = out.get((at, bt))
                    out[(at, bt)] = c if acc is None else acc + c
        return NormalOp(n, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "NormalOp":
        if exponent < 0:
            raise ValueError("negative exponent")
        out = NormalOp.identity(self._n)
        for _ in range(exponent):
            out = out * self
        return out

    def adjoint(self) -> "NormalOp":
        """Hermitian adjoint: reverses products, fixes X_j and P_j,
        conjugates coefficients."""
        n = self._n
        out: dict[TermKey, HCoeff] = {}
        for (a, b), c in self._terms.items():
            cc = c.conjugate()
            # (X^a P^b)^† = P^b X^a, re-normal-ordered dof by dof.
            combos: list[tuple[Index, Index, int, int]] = [((), (), 0, 1)]
            for j in range(n):
                nxt: list[tuple[Index, Index, int, int]] = []
                for k, m in _dof_reorder(b[j], a[j]):
                    ax = a[j] - k
                    bx = b[j] - k
                    for at, bt, ktot, mtot in combos:
                        nxt.append((at + (ax,), bt + (bx,), ktot + k, mtot * m))
                combos = nxt
            for at, bt, ktot, mtot in combos:
                v = cc * minus_i_hbar_power(ktot) * mtot
                acc = out.get((at, bt))
                out[(at, bt)] = v if acc is None else acc + v
        return NormalOp(n, out)

    # -- identity ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalOp):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._n, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        return f"NormalOp(n={self._n}, terms={len(self._terms)})"


def normal_reorder(a: int, b: int) -> NormalOp:
    """Normal-ordered expansion of p^a x^b for a single degree of freedom.

    p^a x^b = sum_k k! C(a,k) C(b,k) (-i*hbar)^k X^(b-k) P^(a-k).
    """
    terms: dict[TermKey, HCoeff] = {}
    for k, m in _dof_reorder(a, b):
        terms[((b - k,), (a - k,))] = minus_i_hbar_power(k) * m
    return NormalOp(1, terms)


def commutator(a: NormalOp, b: NormalOp) -> NormalOp:
    """AB - BA."""
    return a * b - b * a


class TauOp:
    """Polynomial in the ordering parameter tau with `NormalOp` coefficients."""

    __slots__ = ("_n", "_coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, NormalOp] | None = None):
        if n < 1:
            raise ValueError("n must be a positive integer")
        self._n = int(n)
        canon: dict[int, NormalOp] = {}
        if coeffs:
            for k, op in coeffs.items():
                k = int(k)
                if k < 0:
                    raise ValueError("tau powers must be non-negative")
                if op.n != self._n:
                    raise DimensionMismatch("coefficient operator has wrong n")
                if op:
                    canon[k] = canon[k] + op if k in canon else op
                    if not canon[k]:
                        del canon[k]
        self._coeffs = canon

    @classmethod
    def zero(cls, n: int) -> "TauOp":
        return cls(n)

    @classmethod
    def constant(cls, op: NormalOp) -> "TauOp":
        return cls(op.n, {0: op})

    @property
    def n(self) -> int:
        return self._n

    def items(self) -> Iterator[tuple[int, NormalOp]]:
        return iter(sorted(self._coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    @property
    def degree(self) -> int:
        return max(self._coeffs, default=0)

    def __add__(self, other: "TauOp") -> "TauOp":
        if not isinstance(other, TauOp):
            return NotImplemented
        if self._n != other._n:
            raise DimensionMismatch("cannot combine TauOp values of different n")
        out = dict(self._coeffs)
        for k, op in other._coeffs.items():
            out[k] = out[k] + op if k in out else op
        return TauOp(self._n, out)

    def __sub__(self, other: "TauOp") -> "TauOp":
        return self + (-other)

    def __neg__(self) -> "TauOp":
        return TauOp(self._n, {k: -op for k, op in self._coeffs.items()})

    def __mul__(self, other: Union["TauOp", ScalarLike]) -> "TauOp":
        if isinstance(other, (int, Fraction, HCoeff)):
            return self.scale(other)
        if not isinstance(other, TauOp):
            return NotImplemented
        if self._n != other._n:
            raise DimensionMismatch("cannot combine TauOp values of different n")
        out: dict[int, NormalOp] = {}
        for k1, op1 in self._coeffs.items():
            for k2, op2 in other._coeffs.items():
                k = k1 + k2
                prod = op1 * op2
                out[k] = out[k] + prod if k in out else prod
        return TauOp(self._n, out)

    __rmul__ = __mul__

    def scale(self, coeff: ScalarLike) -> "TauOp":
        return TauOp(self._n, {k: op.scale(coeff) for k, op in self._coeffs.items()})

    def eval(self, t: RationalLike) -> NormalOp:
        """Substitute tau = t exactly."""
        t = Fraction(t)
        out = NormalOp.zero(self._n)
        for k, op in self._coeffs.items():
            out = out + op.scale(t**k)
        return out

    def integrate(self) -> NormalOp:
        """Term-wise integral over tau in [0, 1]: tau^k -> 1/(k+1)."""
        out = NormalOp.zero(self._n)
        for k, op in self._coeffs.items():
            out = out + op.scale(Fraction(1, k + 1))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TauOp):
            return NotImplemented
        return self._n == other._n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._n, tuple(sorted((k, hash(op)) for k, op in self._coeffs.items()))))

    def __repr__(self) -> str:
        return f"TauOp(n={self._n}, degree={self.degree})"
