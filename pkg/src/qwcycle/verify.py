"""Self-checks behind ``qwcycle verify``.

Each check returns ``(name, passed, detail)``.  These are quick
smoke-level versions of the test suite, meant for an installed package.
"""

from __future__ import annotations

import numpy as np

from .evolution import RunSpec, evolve_noisy, evolve_pure, line_spec, paired_run
from .noise import GADParams, PhaseDampingParams, completeness_error, gad_kraus
from .observables import kolmogorov_distance
from .operators import HADAMARD, CoinParams, PhaseGateParams
from .pathsum import path_sum_state, phase_factor_audit
from .state import Cycle, InitialStateParams, Line


def _random_draw(rng):
    return (
        CoinParams(*rng.uniform(0, 360, 3)),
        PhaseGateParams(*rng.uniform(0, 360, 2)),
        InitialStateParams(rng.uniform(0, 180), rng.uniform(0, 360)),
    )


def check_oracle(draws: int = 5, seed: int = 7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        coin, gate, init = _random_draw(rng)
        for topo in (Line.centered(12), Cycle(5), Cycle(7)):
            for t in (1, 5, 12):
                spec = RunSpec(topology=topo, steps=t, coin=coin, gate=gate, initial=init)
                psi, _ = evolve_pure(spec)
                ref = path_sum_state(t, coin, gate, init, topo)
                worst = max(worst, float(np.max(np.abs(psi.amplitudes - ref.amplitudes))))
    return "path-sum oracle vs matrix evolution", worst <= 1e-10, f"max deviation {worst:.2e}"


def check_line_symmetry(steps: int = 100):
    p, q = paired_run(line_spec(steps, coin=HADAMARD, gate=PhaseGateParams(30, 50)))
    worst = max(kolmogorov_distance(a, b) for a, b in zip(p.distributions, q.distributions))
    return "gate symmetry on the line", worst <= 1e-12, f"max d = {worst:.2e}"


def check_cycle_breakdown():
    spec = RunSpec(topology=Cycle(51), turns=3, coin=HADAMARD, gate=PhaseGateParams(30, 50))
    p, q = paired_run(spec)
    d = [kolmogorov_distance(a, b) for a, b in zip(p.distributions, q.distributions)]
    ok = max(d[:51]) <= 1e-12 and d[-1] > 0.01
    return "gate symmetry breaks on the 51-cycle", ok, f"max d(t<=50) = {max(d[:51]):.2e}, d(tau=3) = {d[-1]:.3f}"


def check_phase_audit():
    line = phase_factor_audit(12, Line.centered(12))
    cyc = phase_factor_audit(6, Cycle(5))
    ok = all(len(e.J_values) == 1 for e in line.values()) and any(len(e.J_values) > 1 for e in cyc.values())
    return "phase-factor grouping", ok, "one J per x on the line, several on Cycle(5)"


def check_completeness():
    worst = 0.0
    for g in (0, 0.01, 0.025, 0.1, 1):
        for T in (0, 3.5, 6, 100):
            for delta in (0.1, 1):
                worst = max(worst, completeness_error(gad_kraus(GADParams(g, T, delta))))
    return "GAD Kraus completeness", worst <= 1e-12, f"max error {worst:.2e}"


def check_trace(steps: int = 275):
    spec = RunSpec(topology=Cycle(51), steps=steps, coin=HADAMARD, gate=PhaseGateParams(30, 50),
                   noise=GADParams(0.1, 6.0, 0.1))
    _, rec = evolve_noisy(spec, retain_states=False, record_every=steps)
    drift = abs(rec.final.trace() - 1)
    return "trace preservation over 275 noisy steps", drift <= 1e-9, f"drift {drift:.2e}"


def check_classical_limit():
    rho, _ = evolve_noisy(line_spec(4, coin=HADAMARD, initial=InitialStateParams(0.0, 0.0),
                                    noise=PhaseDampingParams(lam=1.0)))
    p = np.real(np.diagonal(rho.matrix)).reshape(2, -1).sum(axis=0)
    o = rho.topology.origin_index
    got = p[o - 4:o + 5:2]
    want = np.array([1, 4, 6, 4, 1]) / 16
    err = float(np.max(np.abs(got - want)))
    return "full dephasing gives the binomial walk", err <= 1e-12, f"max error {err:.2e}"


CHECKS = (
    check_oracle,
    check_line_symmetry,
    check_cycle_breakdown,
    check_phase_audit,
    check_completeness,
    check_trace,
    check_classical_limit,
)


def run_all():
    return [check() for check in CHECKS]
