"""Hot loops, in two interchangeable flavours.

Every kernel has a pure-numpy version and a numba ``@njit`` twin with the
same signature.  The active backend is picked at import time from the
``QWCYCLE_BACKEND`` environment variable (``numba`` or ``numpy``; default
``numba`` when it imports cleanly) and can be switched at runtime with
:func:`set_backend`.

Coin-space operations on a density matrix are expressed as a rank-4
"coin superoperator" ``S[a, d, b, c]``::

    rho'[(a, j), (d, k)] = sum_{b, c} S[a, d, b, c] * rho[(b, j), (c, k)]

so unitaries, the phase gate and whole Kraus sets all go through one
kernel.  The shift is an index permutation; on a line the caller has
already checked that nothing wraps.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

ENV_FLAG = "QWCYCLE_BACKEND"
BACKENDS = ("numba", "numpy")

# ---------------------------------------------------------------- numpy


def coin_pure_np(psi: np.ndarray, coin: np.ndarray, n: int) -> np.ndarray:
    return (coin @ psi.reshape(2, n)).reshape(-1)


def shift_pure_np(psi: np.ndarray, n: int) -> np.ndarray:
    grid = psi.reshape(2, n)
    out = np.empty_like(grid)
    out[0] = np.roll(grid[0], -1)
    out[1] = np.roll(grid[1], 1)
    return out.reshape(-1)


def coin_super_np(rho: np.ndarray, sup: np.ndarray, n: int) -> np.ndarray:
    blocks = rho.reshape(2, n, 2, n)
    out = np.einsum("adbc,bjck->ajdk", sup, blocks, optimize=False)
    return out.reshape(2 * n, 2 * n)


def shift_density_np(rho: np.ndarray, n: int) -> np.ndarray:
    blocks = rho.reshape(2, n, 2, n)
    out = np.empty_like(blocks)
    moves = (-1, 1)
    for a in range(2):
        for d in range(2):
            out[a, :, d, :] = np.roll(blocks[a, :, d, :], (moves[a], moves[d]), axis=(0, 1))
    return out.reshape(2 * n, 2 * n)


def coherence_bins_np(
    rho: np.ndarray, labels: np.ndarray, n_bins: int, half: int
) -> np.ndarray:
    n = labels.shape[0]
    mags = np.abs(rho.reshape(2, n, 2, n))
    sep = np.abs(labels[:, None] - labels[None, :])
    bin_of = np.minimum((sep * n_bins) // half, n_bins - 1)
    # drop the true diagonal (same coin, same site)
    per_pair = mags.sum(axis=(0, 2)) - np.diag(mags[0, :, 0, :] + mags[1, :, 1, :]) * np.eye(n)
    return np.bincount(bin_of.ravel(), weights=per_pair.ravel(), minlength=n_bins)


# ---------------------------------------------------------------- numba

if numba is not None:
    _jit = numba.njit(cache=True, nogil=True, fastmath=False)

    @_jit
    def coin_pure_nb(psi, coin, n):
        out = np.empty_like(psi)
        c00, c01, c10, c11 = coin[0, 0], coin[0, 1], coin[1, 0], coin[1, 1]
        for j in range(n):
            u = psi[j]
            v = psi[n + j]
            out[j] = c00 * u + c01 * v
            out[n + j] = c10 * u + c11 * v
        return out

    @_jit
    def shift_pure_nb(psi, n):
        out = np.empty_like(psi)
        for j in range(n):
            out[(j - 1) % n] = psi[j]
            out[n + (j + 1) % n] = psi[n + j]
        return out

    @_jit
    def coin_super_nb(rho, sup, n):
        out = np.zeros_like(rho)
        for j in range(n):
            for k in range(n):
                r00 = rho[j, k]
                r01 = rho[j, n + k]
                r10 = rho[n + j, k]
                r11 = rho[n + j, n + k]
                for a in range(2):
                    for d in range(2):
                        out[a * n + j, d * n + k] = (
                            sup[a, d, 0, 0] * r00
                            + sup[a, d, 0, 1] * r01
                            + sup[a, d, 1, 0] * r10
                            + sup[a, d, 1, 1] * r11
                        )
        return out

    @_jit
    def shift_density_nb(rho, n):
        out = np.empty_like(rho)
        for a in range(2):
            da = 2 * a - 1
            for d in range(2):
                dd = 2 * d - 1
                for j in range(n):
                    row = a * n + (j + da) % n
                    for k in range(n):
                        out[row, d * n + (k + dd) % n] = rho[a * n + j, d * n + k]
        return out

    @_jit
    def _mag(z):
        return np.sqrt(z.real * z.real + z.imag * z.imag)

    @_jit
    def coherence_bins_nb(rho, labels, n_bins, half):
        n = labels.shape[0]
        out = np.zeros(n_bins)
        for j in range(n):
            for k in range(n):
                sep = abs(labels[j] - labels[k])
                m = min((sep * n_bins) // half, n_bins - 1)
                acc = _mag(rho[j, n + k]) + _mag(rho[n + j, k])
                if j != k:
                    acc += _mag(rho[j, k]) + _mag(rho[n + j, n + k])
                out[m] += acc
        return out


_IMPLS = {
    "numpy": {
        "coin_pure": coin_pure_np,
        "shift_pure": shift_pure_np,
        "coin_super": coin_super_np,
        "shift_density": shift_density_np,
        "coherence_bins": coherence_bins_np,
    },
}
if numba is not None:
    _IMPLS["numba"] = {
        "coin_pure": coin_pure_nb,
        "shift_pure": shift_pure_nb,
        "coin_super": coin_super_nb,
        "shift_density": shift_density_nb,
        "coherence_bins": coherence_bins_nb,
    }

_active: dict = {}
_backend = ""


def set_backend(name: str) -> None:
    """Select ``"numba"`` or ``"numpy"`` kernels for all subsequent calls."""
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    if name not in _IMPLS:
        raise RuntimeError("numba backend requested but numba is not importable")
    _active.clear()
    _active.update(_IMPLS[name])
    _backend = name


def get_backend() -> str:
    return _backend


def _default_backend() -> str:
    wanted = os.environ.get(ENV_FLAG, "").strip().lower()
    if wanted in BACKENDS:
        return wanted if wanted in _IMPLS else "numpy"
    return "numba" if "numba" in _IMPLS else "numpy"


set_backend(_default_backend())


def coin_pure(psi, coin, n):
    return _active["coin_pure"](psi, coin, n)


def shift_pure(psi, n):
    return _active["shift_pure"](psi, n)


def coin_super(rho, sup, n):
    return _active["coin_super"](rho, sup, n)


def shift_density(rho, n):
    return _active["shift_density"](rho, n)


def coherence_bins(rho, labels, n_bins, half):
    return _active["coherence_bins"](rho, np.ascontiguousarray(labels, dtype=np.int64), n_bins, half)


def superoperator(kraus) -> np.ndarray:
    """Coin superoperator ``S[a,d,b,c] = sum_j E_j[a,b] conj(E_j[d,c])``."""
    ks = np.asarray(kraus, dtype=np.complex128).reshape(-1, 2, 2)
    return np.einsum("iab,idc->adbc", ks, ks.conj())


def compose_super(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Superoperator of ``outer`` applied after ``inner``."""
    return np.einsum("adbc,bcef->adef", outer, inner)
