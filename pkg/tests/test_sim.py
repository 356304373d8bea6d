import math
from fractions import Fraction as F
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locc_convert.core import Permutation
from locc_convert.instances import random_instance
from locc_convert.povm import PovmElement, build_povm
from locc_convert.protocol import Protocol, plan
from locc_convert.sim import (
    PureBipartiteState,
    Side,
    SimulationTooLarge,
    ZeroProbabilityOutcome,
    apply_local_permutation,
    apply_measurement_outcome,
    fidelity,
    run_protocol_simulation,
    schmidt_weights,
    state_from_weights,
)

from conftest import EQ4, SWAP12, wv
from strategies import weight_vectors


def random_state(n, rng):
    c = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return PureBipartiteState(c / np.linalg.norm(c))


def test_state_from_weights():
    assert np.allclose(state_from_weights(wv(1, 0)).amplitudes, [[1, 0], [0, 0]])
    s = state_from_weights(wv("1/2", "1/2"))
    assert np.allclose(np.diag(s.amplitudes), [math.sqrt(0.5)] * 2)
    s = state_from_weights(wv("2/5", "1/4", "7/20"))
    assert np.allclose(np.diag(s.amplitudes), np.sqrt([0.4, 0.25, 0.35]), atol=1e-15)
    assert abs(s.norm_squared() - 1) < 1e-12


def test_measure_identity():
    s = state_from_weights(wv("1/2", "1/3", "1/6"))
    prob, post = apply_measurement_outcome(s, PovmElement(Permutation.identity(3), (1, 1, 1), 1))
    assert abs(prob - 1) < 1e-12
    assert np.allclose(post.amplitudes, s.amplitudes)


def test_measure_paper_outcome(alpha, beta, paper_decomposition):
    e = build_povm(alpha, beta, paper_decomposition)[0]
    assert e.sigma == SWAP12
    prob, post = apply_measurement_outcome(state_from_weights(alpha), e)
    assert abs(prob - 1 / 6) < 1e-12
    assert np.allclose(np.diag(post.amplitudes).real ** 2, [0.3, 0.6, 0.1], atol=1e-12)
    assert np.allclose(schmidt_weights(post), [0.6, 0.3, 0.1], atol=1e-10)


def test_measure_two_level_product():
    s = state_from_weights(wv(1, 0))
    prob, post = apply_measurement_outcome(s, PovmElement(Permutation.identity(2), (1, 0), 1))
    assert prob == 1
    assert np.allclose(post.amplitudes, s.amplitudes)


def test_zero_probability():
    s = state_from_weights(wv(1, 0))
    with pytest.raises(ZeroProbabilityOutcome):
        apply_measurement_outcome(s, PovmElement(Permutation.identity(2), (0, 1), 1))


def test_local_permutation_identity():
    s = random_state(3, np.random.default_rng(0))
    for side in Side:
        assert np.array_equal(apply_local_permutation(s, Permutation.identity(3), side).amplitudes,
                              s.amplitudes)


@pytest.mark.parametrize("images", list(permutations((1, 2, 3))))
def test_local_permutation_both(images):
    sigma = Permutation(images)
    w = (0.5, 0.3, 0.2)
    out = apply_local_permutation(state_from_weights(w), sigma, Side.BOTH)
    expected = [w[sigma(i) - 1] for i in (1, 2, 3)]
    assert np.allclose(out.amplitudes, np.diag(np.sqrt(expected)))


def test_local_permutation_alice_swap():
    s = state_from_weights(wv("3/4", "1/4"))
    out = apply_local_permutation(s, Permutation((2, 1)), Side.ALICE)
    assert out.amplitudes[0, 0] == 0 and out.amplitudes[1, 1] == 0
    assert np.allclose([out.amplitudes[0, 1], out.amplitudes[1, 0]],
                       [math.sqrt(0.25), math.sqrt(0.75)])


def test_fidelity():
    s = random_state(4, np.random.default_rng(1))
    assert abs(fidelity(s, s) - 1) < 1e-12
    e0 = PureBipartiteState(np.diag([1, 0]))
    e1 = PureBipartiteState(np.diag([0, 1]))
    assert fidelity(e0, e1) == 0


def test_schmidt_weights():
    assert np.allclose(schmidt_weights(state_from_weights((0.2, 0.5, 0.3))), [0.5, 0.3, 0.2])
    prod = np.zeros((4, 4))
    prod[0, 0] = 1
    assert np.allclose(schmidt_weights(PureBipartiteState(prod)), [1, 0, 0, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_schmidt_invariant_under_local_permutation(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    sigma = Permutation(tuple(rng.permutation(n) + 1))
    base = schmidt_weights(s)
    assert abs(base.sum() - 1) < 1e-10
    for side in Side:
        assert np.allclose(schmidt_weights(apply_local_permutation(s, sigma, side)), base,
                           atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(weight_vectors(min_n=2, max_n=8), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_probability_conservation(w, k, seed):
    # any complete diagonal POVM on any state
    rng = np.random.default_rng(seed)
    n = len(w)
    raw = rng.integers(1, 10, size=(k, n))
    diags = [[F(int(raw[m, i]), int(raw[:, i].sum())) for i in range(n)] for m in range(k)]
    s = random_state(n, rng)
    total = 0.0
    for d in diags:
        prob, _ = apply_measurement_outcome(s, PovmElement(Permutation.identity(n), tuple(d), 1))
        total += prob
    assert abs(total - 1) < 1e-12


def test_paper_protocol(alpha, beta, paper_decomposition):
    p = Protocol(alpha, beta, EQ4, paper_decomposition,
                 tuple(build_povm(alpha, beta, paper_decomposition)))
    report = run_protocol_simulation(p)
    sims = [o.p_simulated for o in report.outcomes]
    assert np.allclose(sims, [1 / 6, 1 / 3, 1 / 2], atol=1e-12, rtol=0)
    assert report.min_fidelity >= 1 - 1e-10
    assert report.ok


def test_identity_protocol():
    v = wv("1/2", "1/3", "1/6")
    report = run_protocol_simulation(plan(v, v))
    assert len(report.outcomes) == 1
    assert abs(report.outcomes[0].p_simulated - 1) < 1e-12
    assert abs(report.outcomes[0].fidelity - 1) < 1e-12


def test_post_measurement_stays_diagonal(alpha, beta):
    p = plan(alpha, beta)
    for e in p.elements:
        _, post = apply_measurement_outcome(state_from_weights(alpha), e)
        off = post.amplitudes - np.diag(np.diag(post.amplitudes))
        assert np.max(np.abs(off)) < 1e-15


@pytest.mark.parametrize("seed", range(30))
def test_random_protocols(seed):
    p = plan(*random_instance(2 + seed % 15, seed))
    report = run_protocol_simulation(p)
    assert report.ok, report.to_json()
    for o in report.outcomes:
        assert abs(o.p_simulated - float(o.p_exact)) <= 1e-12


def test_size_guard():
    p = plan(*random_instance(5, 0))
    with pytest.raises(SimulationTooLarge):
        run_protocol_simulation(p, max_n=4)


def test_report_json(alpha, beta):
    data = run_protocol_simulation(plan(alpha, beta)).to_json()
    assert set(data["outcomes"][0]) == {"sigma", "p_exact", "p_simulated", "fidelity"}
    assert data["ok"] is True
