"""Birkhoff-von Neumann decomposition by greedy peeling of non-zero arrangements.

An arrangement is found as a perfect matching in the bipartite support graph
(rows on one side, columns on the other) using simple augmenting paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .core import (
    BistochasticMatrix,
    LoccError,
    ParseError,
    Permutation,
    is_doubly_stochastic,
    parse_rational,
    render_rational,
)

__all__ = [
    "NoPerfectMatching",
    "SupportGraph",
    "Term",
    "BirkhoffDecomposition",
    "PeelStep",
    "find_nonzero_arrangement",
    "birkhoff_decompose",
    "validate_decomposition",
    "decomposition_from_pairs",
    "parse_permutation",
]


class NoPerfectMatching(LoccError, ValueError):
    """The support graph has no perfect matching (input was not doubly stochastic)."""


@dataclass(frozen=True)
class SupportGraph:
    """Balanced bipartite graph: row ``i`` adjacent to column ``j`` iff ``m[i][j] != 0``.

    Vertices are 1-based.
    """

    n: int
    adjacency: tuple[frozenset[int], ...]

    @classmethod
    def from_matrix(cls, m) -> SupportGraph:
        rows = m.rows if isinstance(m, BistochasticMatrix) else m
        return cls(len(rows), tuple(
            frozenset(j for j, x in enumerate(r, start=1) if x != 0) for r in rows
        ))

    def rows_of(self, col: int) -> list[int]:
        return [i for i in range(1, self.n + 1) if col in self.adjacency[i - 1]]

    def isolated(self) -> list[str]:
        out = [f"r{i}" for i in range(1, self.n + 1) if not self.adjacency[i - 1]]
        out += [f"c{j}" for j in range(1, self.n + 1) if not self.rows_of(j)]
        return out


def _perfect_matching(graph: SupportGraph) -> Permutation:
    col_rows = [graph.rows_of(c) for c in range(1, graph.n + 1)]
    owner: dict[int, int] = {}   # row -> column

    def augment(col: int, visited: set[int]) -> bool:
        for row in col_rows[col - 1]:
            if row in visited:
                continue
            visited.add(row)
            if row not in owner or augment(owner[row], visited):
                owner[row] = col
                return True
        return False

    for col in range(1, graph.n + 1):
        if not augment(col, set()):
            raise NoPerfectMatching(f"column {col} cannot be matched")
    sigma = [0] * graph.n
    for row, col in owner.items():
        sigma[col - 1] = row
    return Permutation(tuple(sigma))


def find_nonzero_arrangement(m) -> Permutation:
    """``sigma`` with ``m[sigma(j)][j] != 0`` for every column ``j``.

    Works on any nonnegative square matrix whose support admits a perfect
    matching; doubly stochastic matrices (and positive multiples) always do.
    """
    sigma = _perfect_matching(SupportGraph.from_matrix(m))
    rows = m.rows if isinstance(m, BistochasticMatrix) else m
    assert all(rows[sigma(j) - 1][j - 1] != 0 for j in range(1, sigma.n + 1))
    return sigma


class Term(NamedTuple):
    p: Fraction
    sigma: Permutation


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(Term(Fraction(p), s) for p, s in self.terms))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def n(self) -> int:
        return self.terms[0].sigma.n if self.terms else 0

    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.n
        acc = [[Fraction(0)] * n for _ in range(n)]
        for p, sigma in self.terms:
            for j in range(1, n + 1):
                acc[sigma(j) - 1][j - 1] += p
        return tuple(map(tuple, acc))

    def to_json(self) -> list[dict]:
        return [{"p": render_rational(p), "sigma": list(s.images)} for p, s in self.terms]

    @classmethod
    def parse(cls, data, location: str = "decomposition") -> BirkhoffDecomposition:
        if not isinstance(data, list):
            raise ParseError("expected a list of terms", location)
        terms = []
        for k, item in enumerate(data):
            loc = f"{location}[{k}]"
            if not isinstance(item, dict) or set(item) != {"p", "sigma"}:
                raise ParseError('term must be {"p": ..., "sigma": [...]}', loc)
            terms.append(Term(parse_rational(item["p"], f"{loc}.p"),
                              parse_permutation(item["sigma"], f"{loc}.sigma")))
        return cls(tuple(terms))


def parse_permutation(data, location: str) -> Permutation:
    if not isinstance(data, list) or not all(type(i) is int for i in data):
        raise ParseError("permutation must be a list of integer images", location)
    try:
        return Permutation(tuple(data))
    except ValueError as exc:
        raise ParseError(str(exc), location) from None


@dataclass(frozen=True)
class PeelStep:
    sigma: Permutation
    p: Fraction
    residue: tuple[tuple[Fraction, ...], ...]


def _nnz(rows) -> int:
    return sum(1 for r in rows for x in r if x != 0)


def birkhoff_decompose(d, return_trace: bool = False):
    """Greedy decomposition ``d == sum(p * P_sigma)``.

    Each round matches the support of the residue, peels off the smallest
    matched entry times that permutation matrix, and repeats until the
    residue vanishes. With ``return_trace`` returns ``(decomposition, steps)``.
    """
    rows = d.rows if isinstance(d, BistochasticMatrix) else tuple(
        tuple(Fraction(x) for x in r) for r in d)
    if not is_doubly_stochastic(rows):
        raise NoPerfectMatching("input matrix is not doubly stochastic")
    n = len(rows)
    residue = [list(r) for r in rows]
    terms: list[Term] = []
    trace: list[PeelStep] = []
    nnz = _nnz(residue)
    while nnz:
        sigma = find_nonzero_arrangement(residue)
        p = min(residue[sigma(j) - 1][j - 1] for j in range(1, n + 1))
        for j in range(1, n + 1):
            residue[sigma(j) - 1][j - 1] -= p
        terms.append(Term(p, sigma))
        snapshot = tuple(map(tuple, residue))
        trace.append(PeelStep(sigma, p, snapshot))
        remaining = _nnz(residue)
        assert remaining < nnz, "peel did not zero any entry"
        nnz = remaining
    assert len(terms) <= n * n - 2 * n + 2
    dec = BirkhoffDecomposition(tuple(terms))
    return (dec, trace) if return_trace else dec


def validate_decomposition(d, dec: BirkhoffDecomposition) -> bool:
    """Exact: positive weights summing to one that reconstruct ``d``."""
    rows = d.rows if isinstance(d, BistochasticMatrix) else tuple(
        tuple(Fraction(x) for x in r) for r in d)
    if not dec.terms:
        return False
    if any(p <= 0 for p, _ in dec.terms) or sum(p for p, _ in dec.terms) != 1:
        return False
    if any(s.n != len(rows) for _, s in dec.terms):
        return False
    return dec.matrix() == rows


def decomposition_from_pairs(pairs) -> BirkhoffDecomposition:
    """Convenience: ``[(p, sigma), ...]`` with sigma as a Permutation or image list."""
    return BirkhoffDecomposition(tuple(
        Term(Fraction(p), s if isinstance(s, Permutation) else Permutation(tuple(s)))
        for p, s in pairs
    ))
