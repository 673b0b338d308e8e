"""Qubit noise channels acting on the coin.

Generalized amplitude damping (GAD) couples the coin to a thermal bath::

    N_th   = 1 / (exp(omega / T) - 1)          (hbar = k_B = 1)
    kappa  = (N_th + 1) / (2 N_th + 1)
    lambda = 1 - exp(-gamma0 (2 N_th + 1) Delta)

    E0 = sqrt(kappa)     [[sqrt(1-lambda), 0], [0, 1]]
    E1 = sqrt(kappa)     [[0, 0], [sqrt(lambda), 0]]
    E2 = sqrt(1-kappa)   [[1, 0], [0, sqrt(1-lambda)]]
    E3 = sqrt((1-kappa)/kappa) E1^dagger

Phase damping uses ``{diag(1, sqrt(1-lambda)), diag(0, sqrt(lambda))}``.
It is the same channel as a phase flip ``rho -> (1-p) rho + p Z rho Z``
with ``p = (1 - sqrt(1-lambda)) / 2``, which is ``lambda / 4`` to first
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ChannelIntegrityError, ValidationError
from .state import DensityMatrix

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class GADParams:
    gamma0: float
    T: float
    Delta: float
    omega: float = 1.0

    def __post_init__(self):
        for key, val in (("gamma0", self.gamma0), ("T", self.T), ("Delta", self.Delta)):
            if not math.isfinite(val) or val < 0:
                raise ValidationError("must be a finite value >= 0", f"noise.{key}")
        if not math.isfinite(self.omega) or self.omega <= 0:
            raise ValidationError("must be > 0", "noise.omega")

    @property
    def n_th(self) -> float:
        return thermal_occupation(self.T, self.omega)

    @property
    def kappa(self) -> float:
        n = self.n_th
        return (n + 1.0) / (2.0 * n + 1.0)

    @property
    def lam(self) -> float:
        return damping_lambda(self.gamma0, self.n_th, self.Delta)


@dataclass(frozen=True)
class PhaseDampingParams:
    """Either give ``lam`` directly or the same ``gamma0, T, Delta`` law as GAD."""

    lam: float | None = None
    gamma0: float = 0.0
    T: float = 0.0
    Delta: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.lam is not None and not 0.0 <= self.lam <= 1.0:
            raise ValidationError("lambda must lie in [0, 1]", "noise.lambda")

    def strength(self) -> float:
        if self.lam is not None:
            return self.lam
        return GADParams(self.gamma0, self.T, self.Delta, self.omega).lam


def thermal_occupation(T: float, omega: float = 1.0) -> float:
    """Bose occupation ``1/(e^{omega/T} - 1)``, with the ``T -> 0`` limit 0."""
    if omega <= 0:
        raise ValidationError("omega must be > 0", "noise.omega")
    if T <= 0:
        return 0.0
    return 1.0 / math.expm1(omega / T)


def damping_lambda(gamma0: float, n_th: float, delta: float) -> float:
    return -math.expm1(-gamma0 * (2.0 * n_th + 1.0) * delta)


def gad_kraus(p: GADParams) -> list[np.ndarray]:
    kappa, lam = p.kappa, p.lam
    if kappa <= 0.0:
        raise ValidationError("kappa must be positive", "noise.T")
    sk, sl, sq = math.sqrt(kappa), math.sqrt(lam), math.sqrt(1.0 - lam)
    e0 = sk * np.array([[sq, 0.0], [0.0, 1.0]], dtype=np.complex128)
    e1 = sk * np.array([[0.0, 0.0], [sl, 0.0]], dtype=np.complex128)
    e2 = math.sqrt(1.0 - kappa) * np.array([[1.0, 0.0], [0.0, sq]], dtype=np.complex128)
    e3 = math.sqrt((1.0 - kappa) / kappa) * e1.conj().T
    return [e0, e1, e2, e3]


def phase_damping_kraus(lam: float) -> list[np.ndarray]:
    if not 0.0 <= lam <= 1.0:
        raise ValidationError("lambda must lie in [0, 1]", "noise.lambda")
    return [
        np.diag([1.0, math.sqrt(1.0 - lam)]).astype(np.complex128),
        np.diag([0.0, math.sqrt(lam)]).astype(np.complex128),
    ]


def completeness_error(kraus) -> float:
    total = sum(k.conj().T @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(2))))


def check_kraus(kraus) -> None:
    err = completeness_error(kraus)
    if err > COMPLETENESS_TOL:
        raise ChannelIntegrityError(f"Kraus set violates completeness by {err:.3g}")


def apply_channel(rho: DensityMatrix, kraus) -> DensityMatrix:
    """``rho -> sum_j (E_j (x) I) rho (E_j (x) I)^dagger``."""
    check_kraus(kraus)
    sup = _kernels.superoperator(kraus)
    return DensityMatrix(rho.topology, _kernels.coin_super(rho.matrix, sup, rho.sites))
