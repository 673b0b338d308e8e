#!/usr/bin/env python3
"""
Compare the numba and numpy kernel backends.

Times the workloads that dominate the figure presets:

    - one noisy density-matrix run (Cycle(51), 275 steps, GAD noise)
    - one unitary run (Cycle(51), 1000 steps)
    - coherence binning of a 102 x 102 density matrix

Usage:
    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call per kernel includes JIT compilation (cached on disk
afterwards); it is reported separately as "warmup".
"""

import argparse
import time

import numpy as np

from qwcycle import _kernels
from qwcycle.evolution import RunSpec, evolve_noisy, evolve_pure
from qwcycle.noise import GADParams
from qwcycle.observables import coherence_function
from qwcycle.operators import HADAMARD, PhaseGateParams
from qwcycle.state import Cycle, DensityMatrix

NOISY = RunSpec(topology=Cycle(51), turns=11, coin=HADAMARD, gate=PhaseGateParams(30, 50),
                noise=GADParams(0.025, 6.0, 0.1))
UNITARY = RunSpec(topology=Cycle(51), steps=1000, coin=HADAMARD, gate=PhaseGateParams(30, 50))


def _rho():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(102, 4)) + 1j * rng.normal(size=(102, 4))
    rho = g @ g.conj().T
    return DensityMatrix(Cycle(51), rho / np.trace(rho))


WORKLOADS = {
    "noisy run, 275 steps": lambda: evolve_noisy(NOISY, record_every=275),
    "unitary run, 1000 steps": lambda: evolve_pure(UNITARY, record_every=1000),
    "coherence bins, M=5": (lambda rho: lambda: coherence_function(rho, 5, 25))(_rho()),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = [b for b in _kernels.BACKENDS if b in _kernels._IMPLS]
    results = {}
    for backend in backends:
        _kernels.set_backend(backend)
        for name, fn in WORKLOADS.items():
            t0 = time.perf_counter()
            fn()
            warm = time.perf_counter() - t0
            results[backend, name] = (warm, best_of(fn, args.repeat))

    print(f"{'workload':28s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup")
    for name in WORKLOADS:
        cells = [results[b, name][1] for b in backends]
        line = f"{name:28s} " + " ".join(f"{c * 1e3:10.2f}ms" for c in cells)
        if len(cells) == 2:
            line += f"   {cells[1] / cells[0]:6.2f}x"
        print(line)
    if "numba" in backends:
        print("\nnumba warmup (includes JIT or cache load):")
        for name in WORKLOADS:
            print(f"  {name:28s} {results['numba', name][0] * 1e3:10.2f}ms")


if __name__ == "__main__":
    main()
