"""Doubly stochastic transfer matrix ``D`` with ``D @ beta == alpha``.

Built from a chain of T-transforms ``t*I + (1-t)*Q_jk`` acting on the
descending-sorted vectors, then conjugated back to the caller's ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    BistochasticMatrix,
    DimensionMismatch,
    WeightVector,
    is_doubly_stochastic,
    mat_mul,
    mat_vec,
    permutation_matrix,
    sort_descending,
)
from .majorization import NotMajorized, majorization_certificate

__all__ = ["TTransform", "build_transfer_matrix", "validate_transfer"]


@dataclass(frozen=True)
class TTransform:
    """``t*I + (1-t)*Q_jk`` in sorted coordinates (1-based, ``j < k``)."""

    j: int
    k: int
    t: Fraction

    def matrix(self, n: int) -> tuple[tuple[Fraction, ...], ...]:
        rows = [[Fraction(int(i == c)) for c in range(n)] for i in range(n)]
        j, k = self.j - 1, self.k - 1
        rows[j][j] = rows[k][k] = self.t
        rows[j][k] = rows[k][j] = 1 - self.t
        return tuple(map(tuple, rows))

    def apply(self, y: list[Fraction]) -> list[Fraction]:
        j, k = self.j - 1, self.k - 1
        out = list(y)
        out[j] = self.t * y[j] + (1 - self.t) * y[k]
        out[k] = (1 - self.t) * y[j] + self.t * y[k]
        return out


def _t_transform_chain(y: list[Fraction], x: list[Fraction]) -> list[TTransform]:
    n = len(y)
    chain = []
    while y != x:
        j = next(i for i in range(n) if y[i] > x[i])
        k = next(i for i in range(j + 1, n) if y[i] < x[i])
        delta = min(y[j] - x[j], x[k] - y[k])
        step = TTransform(j + 1, k + 1, 1 - delta / (y[j] - y[k]))
        y = step.apply(y)
        chain.append(step)
        # every step pins at least one more coordinate to its target
        assert len(chain) <= n - 1, "T-transform loop failed to terminate"
    return chain


def build_transfer_matrix(beta: WeightVector, alpha: WeightVector,
                          return_chain: bool = False):
    """Doubly stochastic ``D`` with ``D @ beta == alpha``.

    Raises ``NotMajorized`` if ``beta`` does not majorize ``alpha``. With
    ``return_chain`` the T-transforms are returned too, as ``(D, chain)``.
    """
    cert = majorization_certificate(beta, alpha)
    if not cert.holds:
        raise NotMajorized(f"beta does not majorize alpha (prefix k={cert.violation})")
    n = len(beta)
    x, s_a = sort_descending(alpha)
    y, s_b = sort_descending(beta)
    chain = _t_transform_chain(list(y), list(x))

    d_sorted = BistochasticMatrix.identity(n).rows
    for step in chain:
        d_sorted = mat_mul(step.matrix(n), d_sorted)
    # y = P_{s_b}^T beta and alpha = P_{s_a} x
    d = mat_mul(mat_mul(permutation_matrix(s_a), d_sorted),
                permutation_matrix(s_b).transpose())
    result = BistochasticMatrix(d)
    assert mat_vec(result, beta) == tuple(alpha)
    return (result, chain) if return_chain else result


def validate_transfer(d, beta: WeightVector, alpha: WeightVector) -> bool:
    """Exact check that ``d`` is doubly stochastic and maps beta onto alpha."""
    rows = d.rows if isinstance(d, BistochasticMatrix) else tuple(map(tuple, d))
    if len(beta) != len(alpha) or len(rows) != len(beta):
        raise DimensionMismatch("matrix and vector dimensions disagree")
    if not is_doubly_stochastic(rows):
        return False
    return mat_vec(rows, beta) == tuple(alpha)
