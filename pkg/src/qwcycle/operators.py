"""Coin toss, phase gate and conditional shift.

One walk step is ``G U B``: coin toss ``B`` first, then the shift ``U``
(coin 0 steps left, coin 1 steps right), then the optional phase gate
``G``.  All public angles are degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BoundaryError, ShapeError
from .state import DensityMatrix, PureState, Topology

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class CoinParams:
    xi: float = 0.0
    theta: float = 45.0
    zeta: float = 0.0


@dataclass(frozen=True)
class PhaseGateParams:
    alpha: float = 0.0
    beta: float = 0.0


HADAMARD = CoinParams(0.0, 45.0, 0.0)


def build_coin(p: CoinParams) -> np.ndarray:
    """SU(2)-type coin ``[[e^{i xi} cos th, e^{i zeta} sin th], [e^{-i zeta} sin th, -e^{-i xi} cos th]]``.

    ``theta`` enters undivided, unlike the initial-state angle.
    """
    xi, th, ze = np.deg2rad([p.xi, p.theta, p.zeta])
    c, s = np.cos(th), np.sin(th)
    return np.array(
        [
            [np.exp(1j * xi) * c, np.exp(1j * ze) * s],
            [np.exp(-1j * ze) * s, -np.exp(-1j * xi) * c],
        ],
        dtype=np.complex128,
    )


def build_phase_gate(p: PhaseGateParams) -> np.ndarray:
    a, b = np.deg2rad([p.alpha, p.beta])
    return np.diag([np.exp(1j * a), np.exp(1j * b)]).astype(np.complex128)


def _check_coin(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=np.complex128)
    if c.shape != (2, 2):
        raise ShapeError(f"coin operator must be 2x2, got {c.shape}")
    return c


def apply_coin(state, c):
    """Apply ``c (x) I_position`` to a pure state or density matrix."""
    c = _check_coin(c)
    n = state.sites
    if isinstance(state, PureState):
        return PureState(state.topology, _kernels.coin_pure(state.amplitudes, c, n))
    if isinstance(state, DensityMatrix):
        sup = _kernels.superoperator(c[None])
        return DensityMatrix(state.topology, _kernels.coin_super(state.matrix, sup, n))
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def check_line_boundary(state, topology: Topology) -> None:
    """Raise if a line shift would push weight off the lattice.

    Only coin-0 weight on the first site and coin-1 weight on the last
    site can leave.  Accepts states or their raw arrays.
    """
    if topology.cyclic:
        return
    n = topology.sites
    arr = getattr(state, "amplitudes", None)
    if arr is None:
        arr = getattr(state, "matrix", state)
    if arr.ndim == 1:
        edge = max(abs(arr[0]), abs(arr[2 * n - 1]))
    else:
        edge = max(np.max(np.abs(arr[0])), np.max(np.abs(arr[2 * n - 1])))
    if edge > BOUNDARY_TOL:
        raise BoundaryError(
            f"walker reached the end of a {n}-site line lattice (edge weight {edge:.3g})"
        )


def _check_topology(state, topology):
    if topology is None:
        return state.topology
    if topology.sites != state.sites:
        raise ShapeError(f"state has {state.sites} sites, topology has {topology.sites}")
    return topology


def apply_shift(state, topology: Topology | None = None):
    """Conditional shift: coin 0 moves to ``x - 1``, coin 1 to ``x + 1``."""
    topology = _check_topology(state, topology)
    check_line_boundary(state, topology)
    n = state.sites
    if isinstance(state, PureState):
        return PureState(state.topology, _kernels.shift_pure(state.amplitudes, n))
    if isinstance(state, DensityMatrix):
        return DensityMatrix(state.topology, _kernels.shift_density(state.matrix, n))
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def walk_step(state, coin: np.ndarray, gate: np.ndarray | None = None, topology: Topology | None = None):
    """One application of ``G U B`` (``U B`` when ``gate`` is None)."""
    out = apply_shift(apply_coin(state, coin), topology)
    if gate is not None:
        out = apply_coin(out, gate)
    return out
