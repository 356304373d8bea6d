import json
import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from locc_convert.core import (
    BistochasticMatrix,
    ParseError,
    Permutation,
    is_doubly_stochastic,
    mat_vec,
    permute_vector,
)
from locc_convert.instances import random_instance
from locc_convert.majorization import NotMajorized
from locc_convert.povm import PovmElement, build_povm, post_measurement_weights
from locc_convert.protocol import (
    Protocol,
    deserialize,
    gamma_from_povm,
    plan,
    serialize,
    verify_converse,
    verify_protocol,
)

from conftest import CYC132, IDENT3, SWAP12, wv


def gamma_oracle(terms, n):
    """Each entry summed independently over all outcomes."""
    return tuple(
        tuple(sum((p for p, s in terms if s(j) == i), F(0)) for j in range(1, n + 1))
        for i in range(1, n + 1)
    )


@pytest.fixture
def paper_plan(alpha, beta):
    return plan(alpha, beta)


@pytest.fixture
def paper_povm(alpha, beta, paper_decomposition):
    return build_povm(alpha, beta, paper_decomposition)


def test_plan_paper(paper_plan, alpha, beta):
    assert sum(e.p for e in paper_plan.elements) == 1
    assert all(e.p > 0 for e in paper_plan.elements)
    for e in paper_plan.elements:
        assert permute_vector(post_measurement_weights(e, alpha), e.sigma) == beta
    assert paper_plan.corrections == tuple(e.sigma for e in paper_plan.elements)
    assert verify_protocol(paper_plan)


def test_plan_equal():
    v = wv("1/2", "1/3", "1/6")
    p = plan(v, v)
    assert [(e.sigma, e.p) for e in p.elements] == [(Permutation.identity(3), 1)]
    assert verify_protocol(p)


def test_plan_refuses():
    with pytest.raises(NotMajorized):
        plan(wv("1/2", "1/4", "1/4"), wv("1/3", "1/3", "1/3"))


def test_plan_trace(alpha, beta):
    p, trace = plan(alpha, beta, return_trace=True)
    assert len(trace.peels) == len(p.elements)
    assert len(trace.chain) <= 2


def test_verify_tampered_diag(paper_plan):
    e = paper_plan.elements[0]
    bumped = replace(e, diag=(e.diag[0] + F(1, 100),) + e.diag[1:])
    tampered = replace(paper_plan, elements=(bumped,) + paper_plan.elements[1:])
    report = verify_protocol(tampered)
    assert not report
    assert "completeness" in report.failures


def test_verify_beta_replaced(paper_plan, alpha):
    report = verify_protocol(replace(paper_plan, beta=alpha))
    assert not report
    assert "corrected_outcomes" in report.failures
    assert "transfer" in report.failures


def test_verify_dimension_garbage(paper_plan):
    report = verify_protocol(replace(paper_plan, beta=wv("1/2", "1/2")))
    assert not report.ok
    assert "dimensions" in report.failures


def test_gamma_paper(paper_povm, alpha, beta, eq4):
    gamma = gamma_from_povm(paper_povm)
    expected = gamma_oracle([(F(1, 6), SWAP12), (F(1, 3), IDENT3), (F(1, 2), CYC132)], 3)
    assert gamma.rows == expected
    # the three-term mix reassembles the transfer matrix it came from
    assert expected == eq4
    assert is_doubly_stochastic(expected)
    assert mat_vec(gamma, beta) == tuple(alpha)


def test_gamma_single():
    assert gamma_from_povm([PovmElement(IDENT3, (1, 1, 1), 1)]) == BistochasticMatrix.identity(3)
    g = gamma_from_povm([PovmElement(CYC132, (1, 1, 1), 1)])
    assert all(g.rows[CYC132(j) - 1][j - 1] == 1 for j in range(1, 4))


def test_converse_paper(paper_povm, alpha, beta):
    assert verify_converse(alpha, beta, paper_povm)


def test_converse_identity():
    v = wv("1/2", "1/3", "1/6")
    assert verify_converse(v, v, [PovmElement(IDENT3, (1, 1, 1), 1)])


def test_converse_beta_replaced(paper_povm, alpha):
    assert not verify_converse(alpha, alpha, paper_povm)


def test_converse_rejects_subnormalized(alpha, beta, paper_povm):
    # drop an outcome: each remaining one still satisfies the per-outcome relation
    assert not verify_converse(alpha, beta, paper_povm[:2])


@pytest.mark.parametrize("seed", range(100))
def test_plan_properties(seed):
    alpha, beta = random_instance(2 + seed % 9, seed)
    p = plan(alpha, beta)
    assert verify_protocol(p)
    assert verify_converse(alpha, beta, p.elements)
    assert mat_vec(gamma_from_povm(p.elements), beta) == tuple(alpha)


@pytest.mark.parametrize("seed", range(100))
def test_gamma_random_bistochastic(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    k = rng.randint(1, 6)
    weights = [rng.randint(1, 20) for _ in range(k)]
    total = sum(weights)
    elements = []
    for w in weights:
        images = list(range(1, n + 1))
        rng.shuffle(images)
        elements.append(PovmElement(Permutation(tuple(images)), (1,) * n, F(w, total)))
    gamma = gamma_from_povm(elements)
    assert gamma.rows == gamma_oracle([(e.p, e.sigma) for e in elements], n)


def test_round_trip(paper_plan):
    text = serialize(paper_plan)
    assert json.loads(text)["schema_version"] == 1
    assert deserialize(text) == paper_plan


def test_round_trip_random():
    for seed in range(20):
        p = plan(*random_instance(5, seed))
        assert deserialize(serialize(p)) == p


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.pop("alpha"), "alpha"),
    (lambda d: d["elements"][0].__setitem__("p", "1/0"), "elements[0].p"),
    (lambda d: d["decomposition"][1].__setitem__("sigma", [1, 1, 3]), "decomposition[1].sigma"),
    (lambda d: d.__setitem__("schema_version", 2), "schema_version"),
    (lambda d: d["beta"].__setitem__(0, 0.6), "beta[0]"),
    (lambda d: d["transfer"].pop(), "transfer"),
])
def test_parse_errors(paper_plan, mutate, where):
    doc = json.loads(serialize(paper_plan))
    mutate(doc)
    with pytest.raises(ParseError) as info:
        deserialize(json.dumps(doc))
    assert info.value.location == where


def test_empty_document():
    with pytest.raises(ParseError):
        deserialize("")
    with pytest.raises(ParseError, match="line 1"):
        deserialize("{")
    with pytest.raises(ParseError):
        deserialize("[]")


def test_lenient_transfer_is_caught_by_verify(paper_plan):
    doc = json.loads(serialize(paper_plan))
    doc["transfer"][0][0] = "1/1"
    p = deserialize(json.dumps(doc))
    assert "transfer" in verify_protocol(p).failures
