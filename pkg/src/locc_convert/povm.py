"""Diagonal POVM built from a Birkhoff decomposition.

Every operator here is diagonal in the Schmidt basis, so states are carried
as their Schmidt weight vectors and POVM elements as their diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .birkhoff import BirkhoffDecomposition, parse_permutation
from .core import (
    DimensionMismatch,
    LoccError,
    ParseError,
    Permutation,
    WeightVector,
    parse_rational,
    render_rational,
)

__all__ = [
    "InconsistentDecomposition",
    "NotNormalized",
    "NonDiagonalElement",
    "PovmElement",
    "build_povm",
    "check_completeness",
    "outcome_probability",
    "measurement_weights",
    "post_measurement_weights",
]


class InconsistentDecomposition(LoccError, ValueError):
    """The decomposition does not satisfy ``sum_sigma p * beta[sigma^-1(i)] == alpha[i]``."""


class NotNormalized(LoccError, ValueError):
    pass


class NonDiagonalElement(LoccError, ValueError):
    pass


@dataclass(frozen=True)
class PovmElement:
    """Outcome ``sigma`` with operator ``diag(diag)`` and outcome weight ``p``."""

    sigma: Permutation
    diag: tuple[Fraction, ...]
    p: Fraction

    def __post_init__(self):
        diag = tuple(Fraction(x) for x in self.diag)
        if len(diag) != self.sigma.n:
            raise DimensionMismatch("diagonal length differs from permutation size")
        if any(x < 0 for x in diag):
            raise ValueError("POVM element must be positive semidefinite")
        if Fraction(self.p) <= 0:
            raise ValueError("outcome weight must be positive")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "p", Fraction(self.p))

    @property
    def n(self) -> int:
        return len(self.diag)

    @classmethod
    def from_matrix(cls, sigma: Permutation, matrix, p) -> PovmElement:
        """Accept a dense matrix, but only if it is diagonal."""
        rows = [[Fraction(x) for x in r] for r in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("POVM element must be square")
        if any(rows[i][j] != 0 for i in range(n) for j in range(n) if i != j):
            raise NonDiagonalElement(
                "only POVM elements diagonal in the Schmidt basis are supported"
            )
        return cls(sigma, tuple(rows[i][i] for i in range(n)), Fraction(p))

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma.images),
            "p": render_rational(self.p),
            "diag": [render_rational(x) for x in self.diag],
        }

    @classmethod
    def parse(cls, data, location: str = "element") -> PovmElement:
        if not isinstance(data, dict) or set(data) != {"sigma", "p", "diag"}:
            raise ParseError('element must be {"sigma", "p", "diag"}', location)
        sigma = parse_permutation(data["sigma"], f"{location}.sigma")
        p = parse_rational(data["p"], f"{location}.p")
        if not isinstance(data["diag"], list):
            raise ParseError("diag must be a list", f"{location}.diag")
        diag = tuple(parse_rational(x, f"{location}.diag[{i}]")
                     for i, x in enumerate(data["diag"]))
        try:
            return cls(sigma, diag, p)
        except ValueError as exc:
            raise ParseError(str(exc), location) from None


def build_povm(alpha: WeightVector, beta: WeightVector,
               dec: BirkhoffDecomposition) -> list[PovmElement]:
    """One element per term: ``A_sigma = p * diag(beta[sigma^-1(i)] / alpha[i])``.

    Where ``alpha[i] == 0`` the entry is set to ``p`` instead; the state has
    no amplitude there and the diagonals still sum to one.
    """
    n = len(alpha)
    if len(beta) != n or any(s.n != n for _, s in dec.terms):
        raise DimensionMismatch("alpha, beta and decomposition sizes disagree")
    inverses = [(p, sigma, sigma.inverse()) for p, sigma in dec.terms]

    for i in range(1, n + 1):
        mixed = sum((p * beta[inv(i) - 1] for p, _, inv in inverses), Fraction(0))
        if mixed != alpha[i - 1]:
            raise InconsistentDecomposition(
                f"coordinate {i}: decomposition gives {mixed}, alpha has {alpha[i - 1]}"
            )

    elements = []
    for p, sigma, inv in inverses:
        diag = []
        for i in range(1, n + 1):
            a, b = alpha[i - 1], beta[inv(i) - 1]
            if a > 0:
                diag.append(p * b / a)
            elif b != 0:
                raise InconsistentDecomposition(
                    f"alpha[{i}] is zero but outcome {sigma} needs beta weight {b} there"
                )
            else:
                diag.append(p)
        elements.append(PovmElement(sigma, tuple(diag), p))
    assert check_completeness(elements)
    return elements


def check_completeness(elements) -> bool:
    """Exact: all diagonals nonnegative and summing to the identity."""
    if not elements:
        return False
    n = elements[0].n
    if any(e.n != n for e in elements):
        raise DimensionMismatch("POVM elements have different dimensions")
    if any(x < 0 for e in elements for x in e.diag):
        return False
    return all(sum(e.diag[i] for e in elements) == 1 for i in range(n))


def outcome_probability(e: PovmElement, alpha: WeightVector) -> Fraction:
    """``tr(A_sigma diag(alpha))``; equals ``e.p`` for planner output."""
    if e.n != len(alpha):
        raise DimensionMismatch("element and state dimensions disagree")
    return sum((x * a for x, a in zip(e.diag, alpha)), Fraction(0))


def measurement_weights(e: PovmElement, alpha: WeightVector) -> tuple[Fraction, ...]:
    """Unnormalized weights ``A_sigma @ alpha`` after outcome ``sigma``."""
    if e.n != len(alpha):
        raise DimensionMismatch("element and state dimensions disagree")
    return tuple(x * a for x, a in zip(e.diag, alpha))


def post_measurement_weights(e: PovmElement, alpha: WeightVector) -> WeightVector:
    """Schmidt weights ``A_sigma @ alpha / p`` of the state left by outcome ``sigma``."""
    w = tuple(x / e.p for x in measurement_weights(e, alpha))
    if sum(w) != 1:
        raise NotNormalized(
            f"outcome {e.sigma}: weights sum to {render_rational(sum(w))}, not 1"
        )
    return WeightVector(w)
