"""Position distributions, Kolmogorov distance and coherence measures."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ShapeError, ValidationError
from .state import DensityMatrix, PureState, position_labels

UNDEFINED_BELOW = 1e-12


def position_distribution(state) -> np.ndarray:
    """``p[site] = sum_coin`` of the walker weight on that site."""
    n = state.sites
    if isinstance(state, PureState):
        return np.sum(np.abs(state.amplitudes.reshape(2, n)) ** 2, axis=0)
    if isinstance(state, DensityMatrix):
        diag = np.real(np.diagonal(state.matrix)).reshape(2, n)
        return diag.sum(axis=0)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def kolmogorov_distance(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ShapeError(f"distributions have different supports: {p.shape} vs {q.shape}")
    return 0.5 * float(np.sum(np.abs(p - q)))


def coherence_total(rho) -> float:
    """Sum of ``|rho_uv|`` over every off-diagonal entry.

    A :class:`PureState` is accepted as well and handled without forming
    the outer product: ``(sum |psi|)^2 - sum |psi|^2``.
    """
    if isinstance(rho, PureState):
        mags = np.abs(rho.amplitudes)
        return float(mags.sum() ** 2 - np.dot(mags, mags))
    mags = np.abs(rho.matrix)
    return float(mags.sum() - np.trace(mags))


@dataclass(frozen=True)
class CoherenceProfile:
    total: float
    bins: np.ndarray
    M: int
    s: int

    @property
    def bin_width(self) -> float:
        return self.s / self.M


def coherence_function(rho, M: int, s: int) -> CoherenceProfile:
    """Off-diagonal magnitude binned by label separation ``|j - k|``.

    Bin ``m`` (1-based) holds ``(m-1) s/M <= |j-k| < m s/M``.  Raw label
    distance is used, not cyclic distance; separations of ``s`` or more
    land in the top bin.  Coin-only coherences (``|j-k| = 0``) go to bin 1.
    """
    if M < 1:
        raise ValidationError("M must be a positive integer", "coherence.M")
    if s < 1:
        raise ValidationError("s must be a positive integer", "s")
    if M > s:
        raise ValidationError(f"M={M} exceeds s={s}", "coherence.M")
    labels = position_labels(rho.topology)
    if isinstance(rho, PureState):
        mat = np.outer(rho.amplitudes, rho.amplitudes.conj())
    else:
        mat = rho.matrix
    bins = _kernels.coherence_bins(mat, labels, M, s)
    return CoherenceProfile(total=float(bins.sum()), bins=np.asarray(bins, dtype=float), M=M, s=s)


def _ratio(num: float, den: float) -> float:
    if abs(den) < UNDEFINED_BELOW:
        return math.nan
    return num / den


@dataclass(frozen=True)
class SymmetryMetrics:
    """Ratios against a reference run.  ``nan`` marks an undefined ratio."""

    d: float
    d0: float
    D: float
    c: np.ndarray

    @property
    def D_defined(self) -> bool:
        return not math.isnan(self.D)

    @property
    def c_defined(self) -> np.ndarray:
        return ~np.isnan(self.c)


def normalized_metrics(
    profile: CoherenceProfile, d: float, reference: CoherenceProfile, d0: float
) -> SymmetryMetrics:
    if profile.M != reference.M:
        raise ShapeError(f"bin counts differ: {profile.M} vs {reference.M}")
    c = np.array([_ratio(a, b) for a, b in zip(profile.bins, reference.bins)])
    return SymmetryMetrics(d=d, d0=d0, D=_ratio(d, d0), c=c)
