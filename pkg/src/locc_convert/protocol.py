"""End-to-end conversion plan, its exact verifier, and the converse certificate."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .birkhoff import (
    BirkhoffDecomposition,
    PeelStep,
    birkhoff_decompose,
    validate_decomposition,
)
from .core import (
    BistochasticMatrix,
    LoccError,
    ParseError,
    Permutation,
    WeightVector,
    is_doubly_stochastic,
    mat_vec,
    parse_rational,
    permute_vector,
    render_rational,
)
from .povm import (
    PovmElement,
    build_povm,
    check_completeness,
    measurement_weights,
    outcome_probability,
    post_measurement_weights,
)
from .transfer import TTransform, build_transfer_matrix, validate_transfer

__all__ = [
    "SCHEMA_VERSION",
    "Protocol",
    "PlanTrace",
    "VerificationReport",
    "plan",
    "verify_protocol",
    "gamma_from_povm",
    "verify_converse",
    "serialize",
    "deserialize",
]

SCHEMA_VERSION = 1

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Protocol:
    """A single-measurement conversion plan from ``alpha`` to ``beta``.

    After outcome ``sigma`` both parties relabel basis state ``sigma(i)`` as
    ``i``; the corrections are therefore just the element labels.
    """

    alpha: WeightVector
    beta: WeightVector
    transfer: Matrix
    decomposition: BirkhoffDecomposition
    elements: tuple[PovmElement, ...]

    def __post_init__(self):
        rows = self.transfer.rows if isinstance(self.transfer, BistochasticMatrix) \
            else tuple(tuple(Fraction(x) for x in r) for r in self.transfer)
        object.__setattr__(self, "transfer", rows)
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def corrections(self) -> tuple[Permutation, ...]:
        return tuple(e.sigma for e in self.elements)


@dataclass(frozen=True)
class PlanTrace:
    chain: tuple[TTransform, ...]
    peels: tuple[PeelStep, ...]


def plan(alpha: WeightVector, beta: WeightVector, return_trace: bool = False):
    """Build the protocol converting ``alpha`` into ``beta``.

    Raises ``NotMajorized`` when beta does not majorize alpha.
    """
    d, chain = build_transfer_matrix(beta, alpha, return_chain=True)
    dec, peels = birkhoff_decompose(d, return_trace=True)
    elements = build_povm(alpha, beta, dec)
    protocol = Protocol(alpha, beta, d, dec, tuple(elements))
    if return_trace:
        return protocol, PlanTrace(tuple(chain), tuple(peels))
    return protocol


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    messages: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def __bool__(self):
        return self.ok

    @property
    def failures(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def record(self, name: str, fn) -> None:
        try:
            self.checks[name] = bool(fn())
        except (LoccError, ValueError) as exc:
            self.checks[name] = False
            self.messages[name] = str(exc)


def verify_protocol(p: Protocol) -> VerificationReport:
    """Re-derive every invariant of ``p`` in exact arithmetic."""
    report = VerificationReport()
    alpha, beta = p.alpha, p.beta

    def corrected_outcomes():
        return all(permute_vector(post_measurement_weights(e, alpha), e.sigma) == beta
                   for e in p.elements)

    report.record("dimensions", lambda: len(beta) == len(alpha) == len(p.transfer)
                  and all(e.n == len(alpha) for e in p.elements))
    report.record("transfer", lambda: validate_transfer(p.transfer, beta, alpha))
    report.record("decomposition",
                  lambda: validate_decomposition(p.transfer, p.decomposition))
    report.record("elements_match_decomposition", lambda: [
        (e.p, e.sigma) for e in p.elements] == [tuple(t) for t in p.decomposition])
    report.record("completeness", lambda: check_completeness(p.elements))
    report.record("outcome_probabilities", lambda: all(
        outcome_probability(e, alpha) == e.p for e in p.elements))
    report.record("corrected_outcomes", corrected_outcomes)
    return report


def _gamma_rows(elements) -> list[list[Fraction]]:
    n = elements[0].n
    gamma = [[Fraction(0)] * n for _ in range(n)]
    for e in elements:
        for j in range(1, n + 1):
            gamma[e.sigma(j) - 1][j - 1] += e.p
    return gamma


def gamma_from_povm(elements) -> BistochasticMatrix:
    """``Gamma[i][j]`` is the total weight of outcomes with ``sigma(j) == i``.

    Doubly stochastic whenever the outcome weights sum to one.
    """
    return BistochasticMatrix(tuple(map(tuple, _gamma_rows(list(elements)))))


def verify_converse(alpha: WeightVector, beta: WeightVector, elements) -> bool:
    """Certify ``beta`` majorizes ``alpha`` from a diagonal POVM.

    Requires ``(A_sigma @ alpha) . sigma == p_sigma * beta`` for every outcome,
    then checks that ``Gamma`` is doubly stochastic and ``Gamma @ beta == alpha``.
    """
    elements = list(elements)
    if not elements or len(alpha) != len(beta):
        return False
    if any(not isinstance(e, PovmElement) or e.n != len(alpha) for e in elements):
        return False
    for e in elements:
        lhs = permute_vector(measurement_weights(e, alpha), e.sigma)
        if lhs != tuple(e.p * b for b in beta):
            return False
    gamma = _gamma_rows(elements)
    if not is_doubly_stochastic(gamma):
        return False
    return mat_vec(gamma, beta) == tuple(alpha)


def to_json(p: Protocol) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "alpha": p.alpha.to_json(),
        "beta": p.beta.to_json(),
        "transfer": [[render_rational(x) for x in r] for r in p.transfer],
        "decomposition": p.decomposition.to_json(),
        "elements": [e.to_json() for e in p.elements],
    }


def serialize(p: Protocol) -> str:
    return json.dumps(to_json(p), indent=2) + "\n"


def _weights(doc, key):
    if not isinstance(doc[key], list):
        raise ParseError("expected a list of rationals", key)
    try:
        return WeightVector.parse(doc[key], key)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), key) from None


def from_json(doc) -> Protocol:
    if not isinstance(doc, dict):
        raise ParseError("protocol document must be a JSON object", "$")
    required = ("schema_version", "alpha", "beta", "transfer", "decomposition", "elements")
    for key in required:
        if key not in doc:
            raise ParseError("missing field", key)
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {doc['schema_version']!r}",
                         "schema_version")
    alpha = _weights(doc, "alpha")
    beta = _weights(doc, "beta")
    t = doc["transfer"]
    if not isinstance(t, list) or not all(isinstance(r, list) and len(r) == len(t) for r in t):
        raise ParseError("transfer must be a square list of rows", "transfer")
    transfer = tuple(tuple(parse_rational(x, f"transfer[{i}][{j}]") for j, x in enumerate(r))
                     for i, r in enumerate(t))
    dec = BirkhoffDecomposition.parse(doc["decomposition"])
    if not isinstance(doc["elements"], list):
        raise ParseError("expected a list", "elements")
    elements = tuple(PovmElement.parse(e, f"elements[{k}]")
                     for k, e in enumerate(doc["elements"]))
    return Protocol(alpha, beta, transfer, dec, elements)


def deserialize(text: str) -> Protocol:
    if not text.strip():
        raise ParseError("empty document")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_json(doc)
