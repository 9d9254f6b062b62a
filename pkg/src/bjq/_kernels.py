"""Correlation-table kernels behind the discrete Wigner transform.

For a sampled wavefunction the transform needs the half-offset product
table psi[j+k] * conj(psi[j-k]) (indices outside the grid count as zero),
stored with the offset axis wrapped modulo N so an FFT can be applied
directly.  This is the one dense inner loop of the numeric module, so it
carries a numba njit implementation with a pure-numpy fallback; set
``BJQ_PURE_NUMPY=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "corr_table",
    "corr_table_1d_numpy",
    "corr_table_2d_numpy",
    "numba_available",
    "numba_enabled",
]

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def numba_available() -> bool:
    return _HAVE_NUMBA


def numba_enabled() -> bool:
    """True when the jitted path will be used for the next call."""
    if os.environ.get("BJQ_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes"):
        return False
    return _HAVE_NUMBA


def corr_table_1d_numpy(psi: np.ndarray) -> np.ndarray:
    n = psi.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(-(n // 2), n // 2):
        a = abs(k)
        if a > n - 1 - a:
            continue
        out[a : n - a, k % n] = psi[a + k : n - a + k] * np.conj(psi[a - k : n - a - k])
    return out


def corr_table_2d_numpy(psi: np.ndarray) -> np.ndarray:
    n1, n2 = psi.shape
    out = np.zeros((n1, n2, n1, n2), dtype=np.complex128)
    cpsi = np.conj(psi)
    for k1 in range(-(n1 // 2), n1 // 2):
        a1 = abs(k1)
        if a1 > n1 - 1 - a1:
            continue
        for k2 in range(-(n2 // 2), n2 // 2):
            a2 = abs(k2)
            if a2 > n2 - 1 - a2:
                continue
            out[a1 : n1 - a1, a2 : n2 - a2, k1 % n1, k2 % n2] = (
                psi[a1 + k1 : n1 - a1 + k1, a2 + k2 : n2 - a2 + k2]
                * cpsi[a1 - k1 : n1 - a1 - k1, a2 - k2 : n2 - a2 - k2]
            )
    return out


if _HAVE_NUMBA:

    @njit(cache=True)
    def _corr_table_1d_jit(psi):  # pragma: no cover - exercised via dispatch
        n = psi.shape[0]
        out = np.zeros((n, n), dtype=np.complex128)
        for j in range(n):
            kmax = min(j, n - 1 - j)
            for k in range(-kmax, kmax + 1):
                out[j, k % n] = psi[j + k] * np.conj(psi[j - k])
        return out

    @njit(cache=True)
    def _corr_table_2d_jit(psi):  # pragma: no cover - exercised via dispatch
        n1, n2 = psi.shape
        out = np.zeros((n1, n2, n1, n2), dtype=np.complex128)
        for j1 in range(n1):
            k1max = min(j1, n1 - 1 - j1)
            for j2 in range(n2):
                k2max = min(j2, n2 - 1 - j2)
                for k1 in range(-k1max, k1max + 1):
                    for k2 in range(-k2max, k2max + 1):
                        out[j1, j2, k1 % n1, k2 % n2] = psi[j1 + k1, j2 + k2] * np.conj(
                            psi[j1 - k1, j2 - k2]
                        )
        return out


def corr_table(psi: np.ndarray) -> np.ndarray:
    """psi[j+k] conj(psi[j-k]) with the k axes wrapped modulo N.

    Output shape is the input shape doubled: position axes first, then one
    wrapped offset axis per position axis.
    """
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    if psi.ndim == 1:
        if numba_enabled():
            return _corr_table_1d_jit(psi)
        return corr_table_1d_numpy(psi)
    if psi.ndim == 2:
        if numba_enabled():
            return _corr_table_2d_jit(psi)
        return corr_table_2d_numpy(psi)
    raise ValueError("only 1 or 2 degrees of freedom are supported")
