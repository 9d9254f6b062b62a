"""Numerical Wigner and Born-Jordan-Wigner distributions on grids.

Discretization (pinned, 1 or 2 degrees of freedom):

* position grid: N samples (N a power of two) at x_j = xmin + j*dx;
* momentum grid: dp = pi*hbar/(N*dx), p_m = -N*dp/2 + m*dp;
* Wigner values W[j, m] = (dx/(pi*hbar)) * sum_k psi[j+k] conj(psi[j-k])
  exp(-2i p_m k dx / hbar), with out-of-grid samples treated as zero and
  the k-sum evaluated by FFT.

With this pairing the x-marginal identity sum_m W dp == |psi|^2 is exact
in exact arithmetic, and the symplectic Fourier transform maps the grid
onto an exactly dual "ambiguity" grid (spacings doubled) on which it is an
involution up to roundoff.  The Born-Jordan deformation multiplies the
ambiguity samples pointwise by the sinc kernel and transforms back; the
kernel equals 1 on the ambiguity axes, so both marginals survive exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._kernels import corr_table
from .exactalg import PhasePoly

__all__ = [
    "GridError",
    "Axis",
    "WaveGrid",
    "PhaseGrid",
    "oscillator_state",
    "product_state",
    "theta",
    "wigner",
    "ambiguity",
    "symplectic_ft",
    "bj_wigner",
    "marginals",
    "expect",
]

REALITY_TOL = 1e-8


class GridError(ValueError):
    """Invalid grid data (sizes, kinds, axis mismatches)."""


@dataclass(frozen=True)
class Axis:
    """Uniform sample axis: points start + step*arange(size)."""

    size: int
    start: float
    step: float

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.size)

    @property
    def stop(self) -> float:
        return self.start + self.step * self.size


def _as_axes(axes) -> tuple[Axis, ...]:
    if isinstance(axes, Axis):
        return (axes,)
    return tuple(axes)


class WaveGrid:
    """Sampled wavefunction on a uniform position grid (1 or 2 dofs)."""

    def __init__(self, values, axes, hbar: float = 1.0):
        axes = _as_axes(axes)
        if not 1 <= len(axes) <= 2:
            raise GridError("WaveGrid supports 1 or 2 degrees of freedom")
        if hbar <= 0:
            raise GridError("hbar must be positive")
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != tuple(a.size for a in axes):
            raise GridError(f"values shape {values.shape} does not match axes")
        self.axes = axes
        self.values = values
        self.hbar = float(hbar)

    @classmethod
    def from_uniform(cls, values, xmin: float, dx: float, hbar: float = 1.0) -> "WaveGrid":
        values = np.asarray(values, dtype=np.complex128)
        return cls(values, Axis(values.shape[0], float(xmin), float(dx)), hbar)

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def volume_element(self) -> float:
        return math.prod(a.step for a in self.axes)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2).real * self.volume_element)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared() - 1.0) <= 1e-8


class PhaseGrid:
    """Sampled phase-space function.

    ``kind`` is one of ``wigner``, ``bj_wigner`` (real storage) or
    ``ambiguity`` (complex).  For the real kinds the imaginary residue of
    the raw data is measured before truncation and kept as
    ``imag_residue``.
    """

    KINDS = ("wigner", "bj_wigner", "ambiguity")

    def __init__(self, kind, x_axes, p_axes, values, hbar: float):
        if kind not in self.KINDS:
            raise GridError(f"unknown phase-grid kind {kind!r}")
        x_axes = _as_axes(x_axes)
        p_axes = _as_axes(p_axes)
        if len(x_axes) != len(p_axes) or not 1 <= len(x_axes) <= 2:
            raise GridError("PhaseGrid needs matching x/p axes for 1 or 2 dofs")
        values = np.asarray(values)
        shape = tuple(a.size for a in x_axes) + tuple(a.size for a in p_axes)
        if values.shape != shape:
            raise GridError(f"values shape {values.shape} does not match axes {shape}")
        self.kind = kind
        self.x_axes = x_axes
        self.p_axes = p_axes
        self.hbar = float(hbar)
        if kind == "ambiguity":
            self.values = np.asarray(values, dtype=np.complex128)
            self.imag_residue = 0.0
        else:
            values = np.asarray(values, dtype=np.complex128)
            residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
            if residue > REALITY_TOL:
                raise GridError(
                    f"{kind} grid has imaginary residue {residue:.3e} > {REALITY_TOL:.0e}"
                )
            self.values = values.real.copy()
            self.imag_residue = residue

    @property
    def n(self) -> int:
        return len(self.x_axes)

    @property
    def volume_element(self) -> float:
        return math.prod(a.step for a in self.x_axes) * math.prod(
            a.step for a in self.p_axes
        )

    def total_mass(self) -> float:
        return float(np.sum(self.values).real * self.volume_element)


# ---------------------------------------------------------------------------
# Reference states
# ---------------------------------------------------------------------------


def oscillator_state(
    k: int, size: int = 256, xmin: float = -8.0, xmax: float = 8.0, hbar: float = 1.0
) -> WaveGrid:
    """k-th harmonic oscillator eigenstate sampled on [xmin, xmax)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    dx = (xmax - xmin) / size
    x = xmin + dx * np.arange(size)
    u = x / math.sqrt(hbar)
    phi_prev = np.zeros_like(u)
    phi = (math.pi * hbar) ** -0.25 * np.exp(-(u**2) / 2.0)
    for level in range(k):
        phi, phi_prev = (
            math.sqrt(2.0 / (level + 1)) * u * phi
            - math.sqrt(level / (level + 1)) * phi_prev,
            phi,
        )
    return WaveGrid.from_uniform(phi.astype(np.complex128), xmin, dx, hbar)


def product_state(a: WaveGrid, b: WaveGrid) -> WaveGrid:
    """Two-dof product state psi(x1, x2) = a(x1) * b(x2)."""
    if a.n != 1 or b.n != 1:
        raise GridError("product_state combines two 1-dof grids")
    if a.hbar != b.hbar:
        raise GridError("hbar mismatch")
    values = np.outer(a.values, b.values)
    return WaveGrid(values, (a.axes[0], b.axes[0]), a.hbar)


# ---------------------------------------------------------------------------
# The sinc kernel
# ---------------------------------------------------------------------------


def _sinc(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-6
    safe = np.where(small, 1.0, u)
    return np.where(small, 1.0 - u * u / 6.0 + u**4 / 120.0, np.sin(safe) / safe)


def theta(xi_x, xi_p, hbar: float) -> float:
    """sinc(xi_p . xi_x / (2 hbar)), the Weyl-to-Born-Jordan filter."""
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    u = float(np.sum(np.asarray(xi_x, dtype=float) * np.asarray(xi_p, dtype=float)))
    return float(_sinc(np.asarray(u / (2.0 * hbar))))


def _theta_on_grid(x_axes: Iterable[Axis], p_axes: Iterable[Axis], hbar: float) -> np.ndarray:
    x_axes = tuple(x_axes)
    p_axes = tuple(p_axes)
    n = len(x_axes)
    shape = [1] * (2 * n)
    u = np.zeros(tuple(a.size for a in x_axes) + tuple(a.size for a in p_axes))
    for d in range(n):
        xs = shape.copy()
        xs[d] = x_axes[d].size
        ps = shape.copy()
        ps[n + d] = p_axes[d].size
        u = u + x_axes[d].points().reshape(xs) * p_axes[d].points().reshape(ps)
    return _sinc(u / (2.0 * hbar))


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


def _check_power_of_two(psi: WaveGrid) -> None:
    for axis in psi.axes:
        if axis.size < 2 or axis.size & (axis.size - 1):
            raise GridError(f"grid size {axis.size} is not a power of two")


def _warn_if_unnormalized(psi: WaveGrid) -> None:
    if not psi.is_normalized:
        warnings.warn(
            f"wavefunction norm^2 = {psi.norm_squared():.6g}, not 1", stacklevel=3
        )


def _momentum_axes(psi: WaveGrid) -> tuple[Axis, ...]:
    out = []
    for axis in psi.axes:
        dp = math.pi * psi.hbar / (axis.size * axis.step)
        out.append(Axis(axis.size, -axis.size * dp / 2.0, dp))
    return tuple(out)


def wigner(psi: WaveGrid) -> PhaseGrid:
    """Discrete Wigner transform of a sampled wavefunction."""
    _check_power_of_two(psi)
    _warn_if_unnormalized(psi)
    n = psi.n
    carr = corr_table(psi.values)
    offset_axes = tuple(range(n, 2 * n))
    spectrum = np.fft.fftshift(np.fft.fftn(carr, axes=offset_axes), axes=offset_axes)
    pref = math.prod(a.step / (math.pi * psi.hbar) for a in psi.axes)
    return PhaseGrid("wigner", psi.axes, _momentum_axes(psi), pref * spectrum, psi.hbar)


def _ambiguity_axes(psi: WaveGrid) -> tuple[tuple[Axis, ...], tuple[Axis, ...]]:
    xi_x, xi_p = [], []
    for axis, paxis in zip(psi.axes, _momentum_axes(psi)):
        xi_x.append(Axis(axis.size, -axis.size * axis.step, 2.0 * axis.step))
        xi_p.append(Axis(axis.size, -axis.size * paxis.step, 2.0 * paxis.step))
    return tuple(xi_x), tuple(xi_p)


def ambiguity(psi: WaveGrid) -> PhaseGrid:
    """Symplectic Fourier transform of the Wigner distribution.

    Computed directly from the wavefunction (an FFT of the same
    correlation table over the position index), not by transforming the
    Wigner grid; the two routes agreeing is a test target.
    """
    _check_power_of_two(psi)
    _warn_if_unnormalized(psi)
    n = psi.n
    carr = corr_table(psi.values)
    offset_axes = tuple(range(n, 2 * n))
    pos_axes = tuple(range(n))
    # Unwrap the offset axes so index J corresponds to k = J - N/2 ...
    table = np.fft.fftshift(carr, axes=offset_axes)
    # ... then FFT over the position axes and center the frequency index.
    spectrum = np.fft.fftshift(np.fft.fftn(table, axes=pos_axes), axes=pos_axes)
    # spectrum axes are ordered (M..., J...); reorder to (J..., M...).
    spectrum = np.transpose(spectrum, offset_axes + pos_axes)
    xi_x_axes, xi_p_axes = _ambiguity_axes(psi)
    pref = math.prod(a.step for a in psi.axes) / (2.0 * math.pi * psi.hbar) ** n
    values = pref * spectrum
    # Phase factor from the grid origin: exp(-i xi_p xmin / hbar) per dof.
    shape = [1] * (2 * n)
    for d in range(n):
        ps = shape.copy()
        ps[n + d] = xi_p_axes[d].size
        phase = np.exp(-1j * xi_p_axes[d].points() * psi.axes[d].start / psi.hbar)
        values = values * phase.reshape(ps)
    return PhaseGrid("ambiguity", xi_x_axes, xi_p_axes, values, psi.hbar)


def _symplectic_ft_to(
    grid: PhaseGrid,
    out_x_axes: tuple[Axis, ...],
    out_p_axes: tuple[Axis, ...],
    out_kind: str,
) -> PhaseGrid:
    """Symplectic Fourier quadrature onto explicit target axes."""
    n = grid.n
    hbar = grid.hbar
    pref = math.prod(a.step for a in grid.x_axes) * math.prod(
        a.step for a in grid.p_axes
    ) / (2.0 * math.pi * hbar) ** n
    k_out_p = [
        np.exp(-1j * np.outer(out_p_axes[d].points(), grid.x_axes[d].points()) / hbar)
        for d in range(n)
    ]
    k_out_x = [
        np.exp(1j * np.outer(out_x_axes[d].points(), grid.p_axes[d].points()) / hbar)
        for d in range(n)
    ]
    v = np.asarray(grid.values, dtype=np.complex128)
    if n == 1:
        out = np.einsum("mJ,jM,JM->jm", k_out_p[0], k_out_x[0], v, optimize=True)
    else:
        out = np.einsum(
            "aJ,bK,jM,kN,JKMN->jkab",
            k_out_p[0],
            k_out_p[1],
            k_out_x[0],
            k_out_x[1],
            v,
            optimize=True,
        )
    return PhaseGrid(out_kind, out_x_axes, out_p_axes, pref * out, hbar)


def _dual_axes(grid: PhaseGrid) -> tuple[tuple[Axis, ...], tuple[Axis, ...]]:
    xs, ps = [], []
    for x_axis, p_axis in zip(grid.x_axes, grid.p_axes):
        size = x_axis.size
        x_step = 2.0 * math.pi * grid.hbar / (size * p_axis.step)
        p_step = 2.0 * math.pi * grid.hbar / (size * x_axis.step)
        xs.append(Axis(size, -size * x_step / 2.0, x_step))
        ps.append(Axis(size, -size * p_step / 2.0, p_step))
    return tuple(xs), tuple(ps)


def symplectic_ft(grid: PhaseGrid, out_kind: str | None = None) -> PhaseGrid:
    """Symplectic Fourier transform onto the dual centered grid.

    Real kinds map to ``ambiguity``; an ambiguity grid maps back to a real
    grid (``wigner`` unless overridden), making a double application the
    identity up to roundoff.
    """
    if out_kind is None:
        out_kind = "ambiguity" if grid.kind != "ambiguity" else "wigner"
    xs, ps = _dual_axes(grid)
    return _symplectic_ft_to(grid, xs, ps, out_kind)


def bj_wigner(psi: WaveGrid) -> PhaseGrid:
    """Born-Jordan-Wigner distribution.

    Multiplies the ambiguity samples pointwise by the sinc kernel and
    transforms back onto the Wigner grid.  The kernel equals 1 wherever
    xi_x = 0 or xi_p = 0, so both marginals match the Wigner ones exactly.
    """
    amb = ambiguity(psi)
    kernel = _theta_on_grid(amb.x_axes, amb.p_axes, psi.hbar)
    filtered = PhaseGrid(
        "ambiguity", amb.x_axes, amb.p_axes, amb.values * kernel, psi.hbar
    )
    return _symplectic_ft_to(filtered, psi.axes, _momentum_axes(psi), "bj_wigner")


# ---------------------------------------------------------------------------
# Functionals
# ---------------------------------------------------------------------------


def marginals(grid: PhaseGrid) -> tuple[np.ndarray, np.ndarray]:
    """(x-marginal, p-marginal): sums against dp^n and dx^n respectively."""
    if grid.kind == "ambiguity":
        raise GridError("marginals are defined for wigner/bj_wigner grids only")
    n = grid.n
    dp = math.prod(a.step for a in grid.p_axes)
    dx = math.prod(a.step for a in grid.x_axes)
    x_marg = grid.values.sum(axis=tuple(range(n, 2 * n))) * dp
    p_marg = grid.values.sum(axis=tuple(range(n))) * dx
    return x_marg, p_marg


def eval_poly_on_mesh(
    a: PhasePoly,
    x_axes: tuple[Axis, ...],
    p_axes: tuple[Axis, ...],
    hbar: float,
) -> np.ndarray:
    """Evaluate an exact observable on the grid mesh with hbar substituted."""
    n = len(x_axes)
    if a.n != n:
        raise GridError(f"observable has n={a.n}, grid has n={n}")
    shape = tuple(ax.size for ax in x_axes) + tuple(ax.size for ax in p_axes)
    points = [ax.points() for ax in x_axes] + [ax.points() for ax in p_axes]
    total = np.zeros(shape, dtype=np.complex128)
    ones = [1] * (2 * n)
    for (alpha, beta), coeff in a.items():
        term = np.full(shape, coeff.to_complex(hbar), dtype=np.complex128)
        for axis_idx, e in enumerate(alpha + beta):
            if e:
                view = ones.copy()
                view[axis_idx] = shape[axis_idx]
                term = term * (points[axis_idx] ** e).reshape(view)
        total += term
    return total


def expect(grid: PhaseGrid, a: PhasePoly, hbar: float | None = None) -> float:
    """Riemann-sum expectation: integral of a(x, p) against the grid.

    Pairing a Wigner grid gives the Weyl expectation, a Born-Jordan-Wigner
    grid the Born-Jordan expectation.
    """
    if grid.kind == "ambiguity":
        raise GridError("expectations pair with wigner/bj_wigner grids")
    if hbar is None:
        hbar = grid.hbar
    mesh = eval_poly_on_mesh(a, grid.x_axes, grid.p_axes, hbar)
    return float(np.sum(mesh * grid.values).real * grid.volume_element)
