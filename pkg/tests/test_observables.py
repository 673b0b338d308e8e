import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qwcycle import (
    Cycle,
    DensityMatrix,
    InitialStateParams,
    Line,
    PureState,
    coherence_function,
    coherence_total,
    kolmogorov_distance,
    make_initial_pure,
    normalized_metrics,
    position_distribution,
    pure_to_density,
)
from qwcycle.errors import ShapeError, ValidationError
from qwcycle.observables import CoherenceProfile

from conftest import random_density, random_pure


def brute_bins(rho, labels, M, s):
    """Loop straight over every off-diagonal entry."""
    n = len(labels)
    out = np.zeros(M)
    for u in range(2 * n):
        for v in range(2 * n):
            if u == v:
                continue
            sep = abs(labels[u % n] - labels[v % n])
            m = M
            for k in range(1, M + 1):
                if (k - 1) * s / M <= sep < k * s / M:
                    m = k
                    break
            out[m - 1] += abs(rho[u, v])
    return out


def test_delta_distribution():
    s = make_initial_pure(InitialStateParams(0, 0, 5), Cycle(9))
    p = position_distribution(s)
    assert p[5] == 1 and p.sum() == 1


def test_born_rule_split():
    line = Line(5, 2)
    amps = np.zeros(10, complex)
    amps[1] = amps[5 + 3] = 1 / math.sqrt(2)
    p = position_distribution(PureState(line, amps))
    np.testing.assert_allclose(p, [0, 0.5, 0, 0.5, 0], atol=1e-15)
    np.testing.assert_allclose(position_distribution(pure_to_density(PureState(line, amps))), p, atol=1e-15)


def test_kolmogorov_examples():
    assert kolmogorov_distance([0.2, 0.8], [0.2, 0.8]) == 0
    assert kolmogorov_distance([1, 0], [0, 1]) == 1
    assert kolmogorov_distance([0.5, 0.5, 0], [0.25, 0.25, 0.5]) == pytest.approx(0.5)
    with pytest.raises(ShapeError):
        kolmogorov_distance([1, 0], [1, 0, 0])


def _simplex(n):
    return arrays(np.float64, n, elements=st.floats(0, 1)).filter(lambda a: a.sum() > 1e-3).map(lambda a: a / a.sum())


@settings(max_examples=200, deadline=None)
@given(_simplex(8), _simplex(8), _simplex(8))
def test_kolmogorov_is_a_metric(p, q, r):
    dpq = kolmogorov_distance(p, q)
    assert 0 <= dpq <= 1 + 1e-12
    assert dpq == kolmogorov_distance(q, p)
    assert kolmogorov_distance(p, p) == 0
    assert dpq <= kolmogorov_distance(p, r) + kolmogorov_distance(r, q) + 1e-12
    if dpq == 0:
        np.testing.assert_allclose(p, q, atol=1e-12)


def test_coherence_of_plus_state():
    s = make_initial_pure(InitialStateParams(90, 0), Cycle(11))
    assert coherence_total(pure_to_density(s)) == pytest.approx(1.0, abs=1e-15)
    assert coherence_total(s) == pytest.approx(1.0, abs=1e-15)


def test_coherence_of_diagonal_states(rng):
    diag = np.diag(rng.dirichlet(np.ones(10)))
    assert coherence_total(DensityMatrix(Cycle(5), diag)) == 0
    mixed_coin = DensityMatrix(Cycle(5), np.kron(np.eye(2) / 2, np.diag([0, 0, 1.0, 0, 0])))
    assert coherence_total(mixed_coin) == 0


def test_coherence_positive_unless_diagonal(rng):
    for _ in range(20):
        rho = random_density(rng, 10)
        assert coherence_total(DensityMatrix(Cycle(5), rho)) > 0


def test_pure_state_shortcut_matches_outer_product(rng):
    psi = PureState(Cycle(7), random_pure(rng, 14))
    assert coherence_total(psi) == pytest.approx(coherence_total(pure_to_density(psi)), rel=1e-13)


def test_coherence_function_examples(backend):
    plus = pure_to_density(make_initial_pure(InitialStateParams(90, 0), Cycle(11)))
    for M in (1, 2, 5):
        prof = coherence_function(plus, M, 5)
        assert prof.bins[0] == pytest.approx(1.0)
        assert not prof.bins[1:].any()
    diag = DensityMatrix(Cycle(11), np.eye(22) / 22)
    assert not coherence_function(diag, 5, 5).bins.any()


@pytest.mark.parametrize("n", [5, 11, 51])
def test_coherence_function_against_brute_force(rng, backend, n):
    s = (n - 1) // 2
    rho = DensityMatrix(Cycle(n), random_density(rng, 2 * n, rank=3))
    labels = np.arange(n)
    for M in sorted({1, 2, 3, s} & set(range(1, s + 1))):
        prof = coherence_function(rho, M, s)
        np.testing.assert_allclose(prof.bins, brute_bins(rho.matrix, labels, M, s), rtol=1e-12)
        assert prof.total == pytest.approx(coherence_total(rho), rel=1e-12)


def test_bins_partition_for_every_M(rng, backend):
    rho = DensityMatrix(Cycle(51), random_density(rng, 102, rank=2))
    total = coherence_total(rho)
    for M in range(1, 26):
        assert abs(coherence_function(rho, M, 25).bins.sum() - total) <= 1e-9


def test_pure_input_to_coherence_function(rng, backend):
    psi = PureState(Cycle(9), random_pure(rng, 18))
    a = coherence_function(psi, 4, 4).bins
    b = coherence_function(pure_to_density(psi), 4, 4).bins
    np.testing.assert_allclose(a, b, rtol=1e-13)


def test_coherence_function_rejects_too_many_bins():
    rho = DensityMatrix(Cycle(11), np.eye(22) / 22)
    with pytest.raises(ValidationError):
        coherence_function(rho, 6, 5)
    with pytest.raises(ValidationError):
        coherence_function(rho, 0, 5)


def _profile(bins):
    bins = np.asarray(bins, float)
    return CoherenceProfile(total=bins.sum(), bins=bins, M=len(bins), s=5)


def test_normalized_metrics():
    prof = _profile([1.0, 2.0, 0.5])
    same = normalized_metrics(prof, 0.1, prof, 0.1)
    assert same.D == 1 and np.all(same.c == 1)
    m = normalized_metrics(_profile([1.0, 1.0, 1.0]), 0.05, _profile([2.0, 0.0, 4.0]), 0.15)
    assert m.D == pytest.approx(1 / 3)
    assert m.c[0] == 0.5 and m.c[2] == 0.25
    assert np.isnan(m.c[1]) and list(m.c_defined) == [True, False, True]
    undefined = normalized_metrics(prof, 0.0, prof, 0.0)
    assert not undefined.D_defined
    with pytest.raises(ShapeError):
        normalized_metrics(_profile([1.0]), 0, _profile([1.0, 2.0]), 0)
