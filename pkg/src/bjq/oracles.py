"""Independent brute-force validators for the quantization engine.

Nothing here reuses the closed-form bookkeeping of `quantizers`: the Weyl
oracle enumerates every distinct operator word, the Born-Jordan oracle
rebuilds the tau-polynomial from pointwise evaluations and integrates it,
and the matrix oracle checks identities numerically in a truncated
oscillator (ladder) basis.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable

import numpy as np

from .exactalg import HCoeff, NormalOp, PhasePoly, TauOp
from .quantizers import op_tau

__all__ = [
    "weyl_symmetrization_oracle",
    "tau_interpolation_oracle",
    "interpolate_tau",
    "integrate_by_interpolation",
    "tau_nodes",
    "MatrixRep",
    "matrix_eval",
    "interior_indices",
    "interior_block",
]

# Words per dof grow like C(r+s, r); this cap keeps the enumeration cheap
# while covering the full r,s <= 5 verification sweep (degree 10).
MAX_WORD_DEGREE = 10


@lru_cache(maxsize=None)
def _symmetrized_dof(r: int, s: int) -> NormalOp:
    """Average of all distinct interleavings of r X's and s P's (n=1)."""
    total = NormalOp.zero(1)
    count = 0
    slots = r + s
    x1, p1 = NormalOp.x(0, 1), NormalOp.p(0, 1)
    for xpos in combinations(range(slots), r):
        word = NormalOp.identity(1)
        chosen = set(xpos)
        for slot in range(slots):
            word = word * (x1 if slot in chosen else p1)
        total = total + word
        count += 1
    return total.scale(Fraction(1, count))


def _embed_1dof(op: NormalOp, j: int, n: int) -> NormalOp:
    terms = {}
    for (a, b), c in op.items():
        key = (
            tuple(a[0] if d == j else 0 for d in range(n)),
            tuple(b[0] if d == j else 0 for d in range(n)),
        )
        terms[key] = c
    return NormalOp(n, terms)


def weyl_symmetrization_oracle(monomial: PhasePoly) -> NormalOp:
    """Weyl quantization by full word enumeration.

    Per degree of freedom, averages all (r+s)!/(r!s!) distinct orderings of
    r X's and s P's; dofs are then tensored.  Accepts a single-term
    `PhasePoly` with per-dof total degree <= MAX_WORD_DEGREE.
    """
    terms = list(monomial.items())
    if len(terms) != 1:
        raise ValueError("symmetrization oracle takes a single monomial")
    (alpha, beta), coeff = terms[0]
    n = monomial.n
    for r, s in zip(alpha, beta):
        if r + s > MAX_WORD_DEGREE:
            raise ValueError(
                f"per-dof degree {r + s} exceeds the word-enumeration guard "
                f"({MAX_WORD_DEGREE})"
            )
    out = NormalOp.identity(n)
    for j, (r, s) in enumerate(zip(alpha, beta)):
        if r == 0 and s == 0:
            continue
        out = out * _embed_1dof(_symmetrized_dof(r, s), j, n)
    return out.scale(coeff)


def tau_nodes(count: int) -> list[Fraction]:
    """The fixed interpolation nodes 0, 1, 1/2, 1/3, 1/4, ..."""
    nodes = [Fraction(0), Fraction(1)]
    k = 2
    while len(nodes) < count:
        nodes.append(Fraction(1, k))
        k += 1
    return nodes[:count]


@lru_cache(maxsize=None)
def _vandermonde_inverse(degree: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of V[i][j] = node_i**j for the fixed node sequence."""
    size = degree + 1
    nodes = tau_nodes(size)
    aug = [
        [nodes[i] ** j for j in range(size)]
        + [Fraction(1) if c == i else Fraction(0) for c in range(size)]
        for i in range(size)
    ]
    for col in range(size):
        pivot = next(r for r in range(col, size) if aug[r][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


def interpolate_tau(f: Callable[[Fraction], NormalOp], degree: int, n: int) -> TauOp:
    """Reconstruct a tau-polynomial of known degree from point evaluations."""
    size = degree + 1
    nodes = tau_nodes(size)
    values = [f(t) for t in nodes]
    vinv = _vandermonde_inverse(degree)
    coeffs: dict[int, NormalOp] = {}
    for j in range(size):
        acc = NormalOp.zero(n)
        for i in range(size):
            w = vinv[j][i]
            if w:
                acc = acc + values[i].scale(w)
        if acc:
            coeffs[j] = acc
    return TauOp(n, coeffs)


@lru_cache(maxsize=None)
def _integration_weights(degree: int) -> tuple[Fraction, ...]:
    """Node weights w with sum_i w_i f(node_i) = integral of f over [0,1].

    The exact Vandermonde inverse folded against the monomial integrals
    1/(j+1); identical to solving for all tau-coefficients and integrating
    term-wise, at a fraction of the big-rational arithmetic.
    """
    vinv = _vandermonde_inverse(degree)
    return tuple(
        sum((vinv[j][i] * Fraction(1, j + 1) for j in range(degree + 1)), Fraction(0))
        for i in range(degree + 1)
    )


def integrate_by_interpolation(
    f: Callable[[Fraction], NormalOp], degree: int, n: int
) -> NormalOp:
    """Exact integral over tau in [0,1] of an operator-valued tau-polynomial,
    rebuilt from degree+1 pointwise evaluations."""
    weights = _integration_weights(degree)
    acc = NormalOp.zero(n)
    for w, t in zip(weights, tau_nodes(degree + 1)):
        if w:
            acc = acc + f(t).scale(w)
    return acc


def tau_interpolation_oracle(a: PhasePoly) -> NormalOp:
    """Born-Jordan quantization via node evaluation + exact interpolation.

    Evaluates the tau-rule at D+1 rational nodes (D = total p-degree, the
    tau-degree bound), solves the Vandermonde system exactly, and
    integrates term-wise.  Independent of the symbolic tau bookkeeping.
    """
    return integrate_by_interpolation(lambda t: op_tau(a, t), a.p_degree(), a.n)


# ---------------------------------------------------------------------------
# Truncated oscillator-basis matrices
# ---------------------------------------------------------------------------

MAX_MATRIX_SIZE = 4096


class MatrixRep:
    """Dense x-hat/p-hat matrices in a truncated ladder basis.

    x = sqrt(hbar/2)(A + A†), p = i sqrt(hbar/2)(A† - A) with A the
    truncated annihilation operator.  Truncation corrupts only the last
    basis states, so operator identities are compared on interior blocks.
    """

    def __init__(self, n: int, dim: int, hbar: float = 1.0):
        if n < 1 or dim < 2:
            raise ValueError("need n >= 1 and dim >= 2")
        if hbar <= 0:
            raise ValueError("hbar must be positive")
        if dim**n > MAX_MATRIX_SIZE:
            raise ValueError(f"dim**n = {dim**n} exceeds the {MAX_MATRIX_SIZE} guard")
        self.n = n
        self.dim = dim
        self.hbar = float(hbar)
        ladder = np.zeros((dim, dim), dtype=np.complex128)
        ks = np.arange(1, dim)
        ladder[ks - 1, ks] = np.sqrt(ks)
        scale = np.sqrt(self.hbar / 2.0)
        self.x_1dof = scale * (ladder + ladder.conj().T)
        self.p_1dof = 1j * scale * (ladder.conj().T - ladder)
        self._dof_cache: dict[tuple[int, int], np.ndarray] = {}

    def dof_matrix(self, xpow: int, ppow: int) -> np.ndarray:
        key = (xpow, ppow)
        cached = self._dof_cache.get(key)
        if cached is None:
            cached = np.linalg.matrix_power(self.x_1dof, xpow) @ np.linalg.matrix_power(
                self.p_1dof, ppow
            )
            self._dof_cache[key] = cached
        return cached

    @property
    def size(self) -> int:
        return self.dim**self.n

    def identity(self) -> np.ndarray:
        return np.eye(self.size, dtype=np.complex128)


def matrix_eval(op: NormalOp, rep: MatrixRep) -> np.ndarray:
    """Dense matrix of a normal-ordered operator, hbar substituted."""
    if op.n != rep.n:
        raise ValueError(f"operator has n={op.n}, representation has n={rep.n}")
    total = np.zeros((rep.size, rep.size), dtype=np.complex128)
    for (a, b), coeff in op.items():
        term = rep.dof_matrix(a[0], b[0])
        for j in range(1, rep.n):
            term = np.kron(term, rep.dof_matrix(a[j], b[j]))
        total += coeff.to_complex(rep.hbar) * term
    return total


def interior_indices(rep: MatrixRep, margin: int) -> np.ndarray:
    """Composite basis indices whose every per-dof index is < dim - margin."""
    keep = rep.dim - margin
    if keep <= 0:
        raise ValueError("margin leaves no interior block")
    idx = np.arange(keep)
    out = idx
    for _ in range(1, rep.n):
        out = (out[:, None] * rep.dim + idx[None, :]).ravel()
    return out


def interior_block(matrix: np.ndarray, rep: MatrixRep, margin: int) -> np.ndarray:
    """Submatrix of rows/columns untouched by truncation artifacts."""
    idx = interior_indices(rep, margin)
    return matrix[np.ix_(idx, idx)]
