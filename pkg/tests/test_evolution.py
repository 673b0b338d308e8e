import numpy as np
import pytest

from qwcycle import (
    HADAMARD,
    CoinParams,
    Cycle,
    GADParams,
    InitialStateParams,
    Line,
    PhaseGateParams,
    RunSpec,
    build_coin,
    build_phase_gate,
    evolve_noisy,
    evolve_pure,
    kolmogorov_distance,
    line_spec,
    make_initial_pure,
    paired_run,
    position_index,
    walk_step,
)
from qwcycle.errors import BoundaryError, ValidationError
from qwcycle.noise import PhaseDampingParams


def classical_walk(t):
    """Fair +-1 Markov chain from the origin after one forced random step."""
    p = {0: 1.0}
    for _ in range(t):
        nxt = {}
        for x, w in p.items():
            nxt[x - 1] = nxt.get(x - 1, 0) + w / 2
            nxt[x + 1] = nxt.get(x + 1, 0) + w / 2
        p = nxt
    return p


def random_spec(rng, topology, steps, noise=None):
    return RunSpec(
        topology=topology,
        steps=steps,
        coin=CoinParams(*rng.uniform(0, 360, 3)),
        gate=PhaseGateParams(*rng.uniform(0, 360, 2)),
        initial=InitialStateParams(rng.uniform(0, 180), rng.uniform(0, 360)),
        noise=noise,
    )


def test_turns_to_steps():
    assert RunSpec(topology=Cycle(51), turns=11).t == 275
    assert RunSpec(topology=Cycle(5), turns=0.25).t == 0  # 0.5 rounds to even
    assert RunSpec(topology=Cycle(5), turns=0.75).t == 2  # 1.5 rounds to even
    with pytest.raises(ValidationError):
        RunSpec(topology=Cycle(50), turns=1)
    with pytest.raises(ValidationError):
        RunSpec(topology=Line(5, 2), turns=1)
    with pytest.raises(ValidationError):
        RunSpec(topology=Cycle(5))
    with pytest.raises(ValidationError):
        RunSpec(topology=Cycle(5), steps=1, turns=1)


def test_zero_steps_returns_initial(backend):
    spec = RunSpec(topology=Cycle(7), steps=0, initial=InitialStateParams(30, 40, 3))
    psi, rec = evolve_pure(spec)
    np.testing.assert_array_equal(psi.amplitudes, make_initial_pure(spec.initial, spec.topology).amplitudes)
    assert list(rec.steps) == [0]


def test_one_hadamard_step_on_line(backend):
    psi, rec = evolve_pure(line_spec(1, coin=HADAMARD))
    assert rec.at_step(1)[position_index(psi.topology, -1)] == pytest.approx(1.0, abs=1e-15)


def test_engine_matches_walk_step(rng, backend):
    spec = random_spec(rng, Cycle(9), 13)
    psi, _ = evolve_pure(spec)
    ref = make_initial_pure(spec.initial, spec.topology)
    B, G = build_coin(spec.coin), build_phase_gate(spec.gate)
    for _ in range(13):
        ref = walk_step(ref, B, G)
    np.testing.assert_allclose(psi.amplitudes, ref.amplitudes, atol=1e-14)


def test_noisy_engine_matches_dense_kraus(rng, backend):
    """Explicit 2N x 2N operators: rho <- sum_j K_j W rho W^+ K_j^+."""
    n, steps = 5, 9
    topo = Cycle(n)
    noise = GADParams(0.3, 2.0, 0.5)
    spec = random_spec(rng, topo, steps, noise)
    U = np.zeros((2 * n, 2 * n))
    for x in range(n):
        U[(x - 1) % n, x] = 1
        U[n + (x + 1) % n, n + x] = 1
    I = np.eye(n)
    W = np.kron(build_phase_gate(spec.gate), I) @ U @ np.kron(build_coin(spec.coin), I)
    from qwcycle.noise import gad_kraus

    K = [np.kron(k, I) for k in gad_kraus(noise)]
    psi0 = make_initial_pure(spec.initial, topo).amplitudes
    rho = np.outer(psi0, psi0.conj())
    for _ in range(steps):
        rho = W @ rho @ W.conj().T
        rho = sum(k @ rho @ k.conj().T for k in K)
    out, _ = evolve_noisy(spec)
    np.testing.assert_allclose(out.matrix, rho, atol=1e-14)


def test_noise_required_free_for_pure():
    spec = RunSpec(topology=Cycle(5), steps=1, noise=GADParams(0.1, 1, 0.1))
    with pytest.raises(ValidationError):
        evolve_pure(spec)


def test_norm_kept_for_long_runs(backend):
    spec = RunSpec(topology=Cycle(51), steps=1000, coin=CoinParams(20, 10, 30), gate=PhaseGateParams(40, 50),
                   initial=InitialStateParams(30, 40), )
    _, rec = evolve_pure(spec, retain_states=True, record_every=1)
    norms = np.array([s.norm() for s in rec.states])
    assert np.max(np.abs(norms - 1)) <= 1e-10


def test_noisy_trace_and_hermiticity_over_300_steps(backend):
    spec = RunSpec(topology=Cycle(51), steps=300, coin=CoinParams(20, 10, 30), gate=PhaseGateParams(40, 50),
                   initial=InitialStateParams(30, 40), noise=GADParams(0.1, 3.5, 0.1))
    _, rec = evolve_noisy(spec, retain_states=True, record_every=10)
    for rho in rec.states:
        assert abs(rho.trace() - 1) <= 1e-9
        assert rho.hermiticity_error() <= 1e-9
    assert np.max(np.abs(rec.distributions.sum(axis=1) - 1)) <= 1e-9


def test_zero_noise_equals_pure_evolution(backend):
    spec = RunSpec(topology=Cycle(51), steps=50, coin=CoinParams(20, 10, 30), gate=PhaseGateParams(40, 50),
                   initial=InitialStateParams(30, 40), noise=GADParams(0.0, 3.5, 0.1))
    rho, _ = evolve_noisy(spec)
    psi, _ = evolve_pure(spec.noiseless())
    np.testing.assert_allclose(rho.matrix, np.outer(psi.amplitudes, psi.amplitudes.conj()), atol=1e-10)


def test_full_dephasing_is_classical(backend):
    rho, rec = evolve_noisy(line_spec(4, coin=HADAMARD, initial=InitialStateParams(0, 0),
                                      noise=PhaseDampingParams(lam=1.0)))
    oracle = classical_walk(4)
    p = rec.at_step(4)
    for x in range(-4, 5):
        assert p[position_index(rho.topology, x)] == pytest.approx(oracle.get(x, 0.0), abs=1e-12)


@pytest.mark.parametrize("t", [0, 5, 17, 25])
def test_cycle_matches_line_before_wrapping(rng, backend, t):
    params = random_spec(rng, Cycle(51), t)
    _, cyc = evolve_pure(params)
    _, lin = evolve_pure(line_spec(t, coin=params.coin, gate=params.gate, initial=params.initial))
    mapped = np.zeros(51)
    for idx, w in enumerate(lin.at_step(t)):
        x = idx - lin.topology.origin_index
        mapped[position_index(Cycle(51), x)] += w
    np.testing.assert_allclose(cyc.at_step(t), mapped, atol=1e-10)


def test_line_runs_that_outgrow_the_lattice_fail(backend):
    spec = RunSpec(topology=Line(9, 4), steps=6, coin=HADAMARD)
    with pytest.raises(BoundaryError):
        evolve_pure(spec)
    with pytest.raises(BoundaryError):
        evolve_noisy(spec)


def test_deterministic(backend):
    spec = RunSpec(topology=Cycle(51), turns=4, coin=HADAMARD, gate=PhaseGateParams(30, 50),
                   noise=GADParams(0.05, 3.5, 0.1))
    a = evolve_noisy(spec, coherence_M=5)[1]
    b = evolve_noisy(spec, coherence_M=5)[1]
    assert a.distributions.tobytes() == b.distributions.tobytes()
    assert all(x.bins.tobytes() == y.bins.tobytes() for x, y in zip(a.coherence, b.coherence))


def test_record_stride():
    spec = RunSpec(topology=Cycle(11), steps=12, coin=HADAMARD)
    _, rec = evolve_pure(spec, record_every=5)
    assert list(rec.steps) == [0, 5, 10, 12]
    with pytest.raises(KeyError):
        rec.at_step(3)
    with pytest.raises(ValidationError):
        evolve_pure(spec, record_every=0)


def test_paired_run_equal_phases_everywhere(rng, backend):
    for topo in (Cycle(7), Cycle(51), Line.centered(40)):
        spec = RunSpec(topology=topo, steps=40, coin=CoinParams(*rng.uniform(0, 360, 3)),
                       gate=PhaseGateParams(77, 77))
        p, q = paired_run(spec)
        assert max(kolmogorov_distance(a, b) for a, b in zip(p.distributions, q.distributions)) <= 1e-12


def test_paired_run_line_symmetry(rng, backend):
    for _ in range(5):
        spec = random_spec(rng, Line.centered(60), 60)
        p, q = paired_run(spec)
        assert max(kolmogorov_distance(a, b) for a, b in zip(p.distributions, q.distributions)) <= 1e-12


def test_paired_run_breaks_on_cycle(backend):
    spec = RunSpec(topology=Cycle(51), turns=3, coin=HADAMARD, gate=PhaseGateParams(30, 50))
    p, q = paired_run(spec)
    assert kolmogorov_distance(p.distributions[-1], q.distributions[-1]) > 0


def test_paired_run_needs_gate():
    with pytest.raises(ValidationError):
        paired_run(RunSpec(topology=Cycle(5), steps=2))


def test_coherence_recording_requires_odd_cycle():
    with pytest.raises(ValidationError):
        evolve_pure(line_spec(3), coherence_M=2)
