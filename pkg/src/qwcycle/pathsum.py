"""Brute-force sum over coin histories.

Each history ``(j_1, ..., j_t)`` of post-toss coin values contributes

    e^{i((t - J) alpha + J beta)} B[j_t, j_{t-1}] ... B[j_2, j_1] (B[j_1, 0] a + B[j_1, 1] b)

to ``|j_t>|start + 2J - t>`` (reduced mod n on a cycle), where
``J = j_1 + ... + j_t`` counts right moves.  Nothing here touches the
kernels or the evolution engine, so it serves as an independent check
on both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .operators import CoinParams, PhaseGateParams, build_coin
from .state import InitialStateParams, PureState, Topology, position_index

MAX_STEPS = 20
PHASE_DECIMALS = 9


@dataclass(frozen=True)
class PathTerm:
    history: tuple[int, ...]
    J: int
    amplitude: complex
    final_coin: int
    final_position: int

    @property
    def J_bar(self) -> int:
        return len(self.history) - self.J


def _histories(t: int) -> np.ndarray:
    """All ``2**t`` bit histories, row ``h`` holding ``j_1 .. j_t``."""
    codes = np.arange(2**t, dtype=np.int64)
    return ((codes[:, None] >> np.arange(t)) & 1).astype(np.int8)


def _gate_angles(gate: PhaseGateParams | None) -> tuple[float, float]:
    if gate is None:
        return 0.0, 0.0
    return float(np.deg2rad(gate.alpha)), float(np.deg2rad(gate.beta))


def _fold(topology: Topology, x: np.ndarray) -> np.ndarray:
    if topology.cyclic:
        return np.mod(x, topology.n)
    return x


def path_terms(
    t: int,
    coin: CoinParams,
    gate: PhaseGateParams | None,
    initial: InitialStateParams,
    topology: Topology,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised enumeration.

    Returns ``(histories, J, amplitudes, final_positions)`` with one row
    per history; positions are labels (folded mod n on a cycle).
    """
    if t > MAX_STEPS:
        raise CapacityError(f"path enumeration capped at t={MAX_STEPS}, got t={t}")
    if t < 0:
        raise ValueError("t must be >= 0")
    B = build_coin(coin)
    a, b = initial.coin_amplitudes()
    alpha, beta = _gate_angles(gate)
    hist = _histories(t)
    if t == 0:
        return hist, np.zeros(1, dtype=np.int64), np.array([np.nan]), np.array([initial.start_position])
    J = hist.sum(axis=1, dtype=np.int64)
    amp = B[hist[:, 0], 0] * a + B[hist[:, 0], 1] * b
    for i in range(1, t):
        amp = amp * B[hist[:, i], hist[:, i - 1]]
    amp = amp * np.exp(1j * ((t - J) * alpha + J * beta))
    pos = _fold(topology, initial.start_position + 2 * J - t)
    return hist, J, amp, pos


def enumerate_paths(t, coin, gate, initial, topology) -> list[PathTerm]:
    hist, J, amp, pos = path_terms(t, coin, gate, initial, topology)
    if t == 0:
        return []
    return [
        PathTerm(tuple(int(v) for v in h), int(j), complex(z), int(h[-1]), int(x))
        for h, j, z, x in zip(hist, J, amp, pos)
    ]


def path_sum_state(
    t: int,
    coin: CoinParams,
    gate: PhaseGateParams | None,
    initial: InitialStateParams,
    topology: Topology,
) -> PureState:
    """Pure state after ``t`` steps, summed path by path in history order."""
    n = topology.sites
    amps = np.zeros(2 * n, dtype=np.complex128)
    if t == 0:
        site = position_index(topology, initial.start_position)
        a, b = initial.coin_amplitudes()
        amps[site], amps[n + site] = a, b
        return PureState(topology, amps)
    hist, _, amp, pos = path_terms(t, coin, gate, initial, topology)
    lo, hi = int(pos.min()), int(pos.max())
    position_index(topology, lo), position_index(topology, hi)  # range check on a line
    sites = pos if topology.cyclic else pos + topology.origin_index
    flat = hist[:, -1].astype(np.int64) * n + sites
    # unbuffered, sequential accumulation: bit-stable
    np.add.at(amps, flat, amp)
    return PureState(topology, amps)


@dataclass(frozen=True)
class AuditEntry:
    x: int
    J_values: tuple[int, ...]
    phases: tuple[complex, ...]


def phase_factor_audit(
    t: int,
    topology: Topology,
    x: int | None = None,
    gate: PhaseGateParams | None = PhaseGateParams(30.0, 50.0),
    start_position: int = 0,
) -> dict[int, AuditEntry]:
    """Group histories by final position and list their ``J`` and gate phases.

    On a line every reachable ``x`` carries the single ``J = (x + t)/2``,
    so the gate contributes one common phase there.  On a cycle, once
    ``t`` exceeds ``(n - 1)/2``, some ``x`` collects several ``J`` values
    that differ by multiples of ``n``.
    """
    if t > MAX_STEPS:
        raise CapacityError(f"path enumeration capped at t={MAX_STEPS}, got t={t}")
    alpha, beta = _gate_angles(gate)
    J = _histories(t).sum(axis=1, dtype=np.int64) if t else np.zeros(1, dtype=np.int64)
    pos = _fold(topology, start_position + 2 * J - t)
    report = {}
    for site in np.unique(pos).tolist():
        if x is not None and site != _fold(topology, np.int64(x)):
            continue
        js = np.unique(J[pos == site])
        ph = np.exp(1j * ((t - js) * alpha + js * beta))
        distinct = sorted({complex(round(z.real, PHASE_DECIMALS), round(z.imag, PHASE_DECIMALS)) for z in ph},
                          key=lambda z: (z.real, z.imag))
        report[int(site)] = AuditEntry(int(site), tuple(int(j) for j in js), tuple(distinct))
    return report
