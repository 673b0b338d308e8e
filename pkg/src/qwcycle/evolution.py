"""Drive multi-step evolutions and record per-step observables.

The engine works on raw arrays and calls the kernels directly; the
object-level :func:`qwcycle.operators.walk_step` is the reference it is
tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import _kernels
from .errors import NumericalIntegrityError, ValidationError
from .noise import GADParams, PhaseDampingParams, gad_kraus, phase_damping_kraus, check_kraus
from .observables import CoherenceProfile, coherence_function, position_distribution
from .operators import (
    CoinParams,
    PhaseGateParams,
    build_coin,
    build_phase_gate,
    check_line_boundary,
)
from .state import (
    Cycle,
    DensityMatrix,
    InitialStateParams,
    Line,
    PureState,
    Topology,
    make_initial_pure,
    position_labels,
    pure_to_density,
)

Noise = Union[None, GADParams, PhaseDampingParams]

TRACE_ABORT = 1e-6


@dataclass(frozen=True)
class RunSpec:
    """Everything that determines one deterministic run.

    Give exactly one of ``steps`` or ``turns``; turns need an odd cycle
    and convert as ``t = round(turns * s)`` (ties to even).
    """

    topology: Topology
    coin: CoinParams = field(default_factory=CoinParams)
    steps: int | None = None
    turns: float | None = None
    gate: PhaseGateParams | None = None
    initial: InitialStateParams = field(default_factory=InitialStateParams)
    noise: Noise = None

    def __post_init__(self):
        if (self.steps is None) == (self.turns is None):
            raise ValidationError("give exactly one of steps or turns", "steps")
        if self.steps is not None and self.steps < 0:
            raise ValidationError("must be >= 0", "steps")
        if self.turns is not None:
            if not isinstance(self.topology, Cycle):
                raise ValidationError("turns require a cycle topology", "turns")
            if self.topology.n % 2 == 0:
                raise ValidationError("turns require odd n", "turns")
            if self.turns < 0:
                raise ValidationError("must be >= 0", "turns")

    @property
    def t(self) -> int:
        if self.steps is not None:
            return int(self.steps)
        return int(round(self.turns * self.topology.half))

    @property
    def half(self) -> int | None:
        """``s`` for an odd cycle, else None."""
        if isinstance(self.topology, Cycle) and self.topology.n % 2 == 1:
            return self.topology.half
        return None

    def without_gate(self) -> "RunSpec":
        return replace(self, gate=None)

    def noiseless(self) -> "RunSpec":
        return replace(self, noise=None)


def line_spec(steps: int, **kw) -> RunSpec:
    """RunSpec on a line lattice just large enough for ``steps``."""
    start = kw.get("initial", InitialStateParams()).start_position
    return RunSpec(topology=Line.centered(steps, start), steps=steps, **kw)


@dataclass
class EvolutionRecord:
    topology: Topology
    steps: np.ndarray
    distributions: np.ndarray
    final: PureState | DensityMatrix | None = None
    coherence: list[CoherenceProfile] | None = None
    states: list | None = None

    @property
    def labels(self) -> np.ndarray:
        return position_labels(self.topology)

    def at_step(self, t: int) -> np.ndarray:
        hits = np.nonzero(self.steps == t)[0]
        if hits.size == 0:
            raise KeyError(f"step {t} was not recorded")
        return self.distributions[hits[0]]


def kraus_for(noise: Noise) -> list[np.ndarray] | None:
    if noise is None:
        return None
    if isinstance(noise, GADParams):
        return gad_kraus(noise)
    if isinstance(noise, PhaseDampingParams):
        return phase_damping_kraus(noise.strength())
    raise ValidationError(f"unsupported noise model {type(noise).__name__}", "noise.type")


class _Recorder:
    def __init__(self, spec: RunSpec, every: int, coherence_M: int | None, retain: bool):
        if every < 1:
            raise ValidationError("must be >= 1", "record_every")
        self.spec = spec
        self.every = every
        self.total = spec.t
        self.coherence_M = coherence_M
        self.retain = retain
        self.steps: list[int] = []
        self.dists: list[np.ndarray] = []
        self.profiles: list[CoherenceProfile] = []
        self.states: list = []
        if coherence_M is not None and spec.half is None:
            raise ValidationError("coherence bins need an odd cycle", "coherence.M")

    def wants(self, t: int) -> bool:
        return t % self.every == 0 or t == self.total

    def take(self, t: int, state) -> None:
        self.steps.append(t)
        self.dists.append(position_distribution(state))
        if self.coherence_M is not None:
            self.profiles.append(coherence_function(state, self.coherence_M, self.spec.half))
        if self.retain:
            self.states.append(state)

    def finish(self, final) -> EvolutionRecord:
        return EvolutionRecord(
            topology=self.spec.topology,
            steps=np.array(self.steps, dtype=np.int64),
            distributions=np.array(self.dists),
            final=final,
            coherence=self.profiles if self.coherence_M is not None else None,
            states=self.states if self.retain else None,
        )


def evolve_pure(
    spec: RunSpec,
    record_every: int = 1,
    coherence_M: int | None = None,
    retain_states: bool = False,
) -> tuple[PureState, EvolutionRecord]:
    """``|psi_t> = W^t |psi_0>`` with ``W = G U B``."""
    if spec.noise is not None:
        raise ValidationError("evolve_pure takes noiseless specs only", "noise.type")
    topo = spec.topology
    n = topo.sites
    coin = build_coin(spec.coin)
    phases = None
    if spec.gate is not None:
        phases = np.repeat(np.diag(build_phase_gate(spec.gate)), n)
    rec = _Recorder(spec, record_every, coherence_M, retain_states)

    state = make_initial_pure(spec.initial, topo)
    psi = np.array(state.amplitudes)
    rec.take(0, state)
    for t in range(1, spec.t + 1):
        psi = _kernels.coin_pure(psi, coin, n)
        if not topo.cyclic:
            check_line_boundary(psi, topo)
        psi = _kernels.shift_pure(psi, n)
        if phases is not None:
            psi = psi * phases
        if rec.wants(t):
            state = PureState(topo, psi)
            rec.take(t, state)
    final = PureState(topo, psi)
    return final, rec.finish(final)


def evolve_noisy(
    spec: RunSpec,
    record_every: int = 1,
    coherence_M: int | None = None,
    retain_states: bool = False,
) -> tuple[DensityMatrix, EvolutionRecord]:
    """Iterate ``rho <- sum_j E_j (W rho W^dagger) E_j^dagger``.

    With ``noise=None`` this is plain unitary conjugation.
    """
    topo = spec.topology
    n = topo.sites
    kraus = kraus_for(spec.noise)
    pre = _kernels.superoperator(build_coin(spec.coin)[None])
    post = None
    if spec.gate is not None:
        post = _kernels.superoperator(build_phase_gate(spec.gate)[None])
    if kraus is not None:
        check_kraus(kraus)
        ksup = _kernels.superoperator(kraus)
        post = ksup if post is None else _kernels.compose_super(ksup, post)
    rec = _Recorder(spec, record_every, coherence_M, retain_states)

    rho0 = pure_to_density(make_initial_pure(spec.initial, topo))
    rho = np.array(rho0.matrix)
    rec.take(0, rho0)
    for t in range(1, spec.t + 1):
        rho = _kernels.coin_super(rho, pre, n)
        if not topo.cyclic:
            check_line_boundary(rho, topo)
        rho = _kernels.shift_density(rho, n)
        if post is not None:
            rho = _kernels.coin_super(rho, post, n)
        drift = abs(np.trace(rho) - 1.0)
        if not drift <= TRACE_ABORT:
            raise NumericalIntegrityError(f"trace drifted by {drift:.3g} at step {t}")
        if rec.wants(t):
            rec.take(t, DensityMatrix(topo, rho))
    final = DensityMatrix(topo, rho)
    return final, rec.finish(final)


def evolve(spec: RunSpec, **kw):
    """Pure evolution when noiseless, density-matrix evolution otherwise."""
    if spec.noise is None:
        return evolve_pure(spec, **kw)
    return evolve_noisy(spec, **kw)


def paired_run(spec: RunSpec, **kw) -> tuple[EvolutionRecord, EvolutionRecord]:
    """Run ``spec`` without and with its phase gate; returns ``(p_run, q_run)``."""
    if spec.gate is None:
        raise ValidationError("paired_run needs a phase gate", "gate")
    _, plain = evolve(spec.without_gate(), **kw)
    _, gated = evolve(spec, **kw)
    return plain, gated
