"""Majorization test between two weight vectors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .core import DimensionMismatch, LoccError, WeightVector, sort_descending

__all__ = ["NotMajorized", "Certificate", "majorizes", "majorization_certificate"]


class NotMajorized(LoccError):
    """The target does not majorize the source, so no LOCC conversion exists."""


@dataclass(frozen=True)
class Certificate:
    """Prefix sums of both descending-sorted vectors, k = 1..N."""

    prefixes: tuple[tuple[int, Fraction, Fraction], ...]

    @property
    def violation(self) -> int | None:
        """Smallest k whose beta prefix falls below the alpha prefix."""
        for k, b, a in self.prefixes:
            if b < a:
                return k
        return None

    @property
    def holds(self) -> bool:
        return self.violation is None


def _check_lengths(beta, alpha):
    if len(beta) != len(alpha):
        raise DimensionMismatch(
            f"vectors have different lengths ({len(beta)} and {len(alpha)})"
        )


def majorization_certificate(beta: WeightVector, alpha: WeightVector) -> Certificate:
    _check_lengths(beta, alpha)
    sb, _ = sort_descending(beta)
    sa, _ = sort_descending(alpha)
    return Certificate(tuple(
        (k, pb, pa)
        for k, (pb, pa) in enumerate(zip(accumulate(sb), accumulate(sa)), start=1)
    ))


def majorizes(beta: WeightVector, alpha: WeightVector) -> bool:
    """True iff ``beta`` majorizes ``alpha`` (inputs need not be sorted)."""
    return majorization_certificate(beta, alpha).holds
