"""Exact rational vectors, matrices and permutations.

Conventions used by every other module:

* Indices are 1-based at every interface (serialization, permutation images).
* ``Permutation.images[i - 1] == sigma(i)``.
* The permutation matrix has ``P[i][j] == 1`` iff ``i == sigma(j)``, so it
  sends the basis vector ``e_j`` to ``e_sigma(j)``.
* Vectors are acted on from the right: ``(v . sigma)[i] == v[sigma(i)]``.
  With these two conventions ``P_sigma @ v == v . sigma^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "LoccError",
    "ParseError",
    "DimensionMismatch",
    "InvalidWeightVector",
    "NotBistochastic",
    "parse_rational",
    "render_rational",
    "Permutation",
    "WeightVector",
    "BistochasticMatrix",
    "is_doubly_stochastic",
    "mat_vec",
    "mat_mul",
    "sort_descending",
    "permute_vector",
    "permutation_matrix",
]


class LoccError(Exception):
    """Base class for errors raised by this package."""


class ParseError(LoccError, ValueError):
    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class DimensionMismatch(LoccError, ValueError):
    pass


class InvalidWeightVector(LoccError, ValueError):
    pass


class NotBistochastic(LoccError, ValueError):
    pass


_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*/\s*(\d+)\s*\Z")
_DECIMAL_RE = re.compile(r"\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*\Z")


def parse_rational(value, location: str | None = None) -> Fraction:
    """Parse ``"num/den"``, an integer, or a decimal string exactly.

    ``"0.35"`` becomes ``7/20``. Binary floats are rejected, since a float
    has already been rounded by the time it reaches us.
    """
    if isinstance(value, bool):
        raise ParseError(f"expected a rational, got {value!r}", location)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ParseError(
            f"binary float {value!r} is not exact; quote it as a string", location
        )
    if not isinstance(value, str):
        raise ParseError(f"expected a rational string, got {value!r}", location)
    m = _RATIONAL_RE.match(value)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {value!r}", location)
        return Fraction(int(m.group(1)), den)
    if _DECIMAL_RE.match(value):
        return Fraction(value.strip())
    raise ParseError(f"not a rational: {value!r}", location)


def render_rational(q: Fraction) -> str:
    """Lowest-terms ``"num/den"``; integers keep the ``/1``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{1..n}`` stored by its images (1-based)."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{list(images)} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        """Build from cycle notation, e.g. ``from_cycles(3, (1, 3, 2))``."""
        images = list(range(1, n + 1))
        for cycle in cycles:
            for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: Permutation) -> Permutation:
        """``(self o other)(i) == self(other(i))``."""
        if other.n != self.n:
            raise DimensionMismatch("cannot compose permutations of different sizes")
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    __matmul__ = compose

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, s in enumerate(self.images, start=1):
            inv[s - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(s == i for i, s in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest element."""
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cycle.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cycle))
        return out

    def cycle_notation(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        sep = " " if self.n > 9 else ""
        return "".join("(" + sep.join(map(str, c)) + ")" for c in cycles)

    def __str__(self):
        return self.cycle_notation()


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative exact rationals summing to exactly one."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        if not entries:
            raise InvalidWeightVector("weight vector must have at least one entry")
        if any(e < 0 for e in entries):
            raise InvalidWeightVector(f"negative weight in {_fmt(entries)}")
        total = sum(entries, Fraction(0))
        if total != 1:
            raise InvalidWeightVector(
                f"weights sum to {render_rational(total)}, not 1: {_fmt(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, values: Iterable, location: str | None = None) -> WeightVector:
        return cls(tuple(parse_rational(v, f"{location or ''}[{k}]")
                         for k, v in enumerate(values)))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def __iter__(self):
        return iter(self.entries)

    def to_json(self) -> list[str]:
        return [render_rational(e) for e in self.entries]

    def __str__(self):
        return _fmt(self.entries)


def _fmt(entries) -> str:
    return "(" + ", ".join(str(Fraction(e)) for e in entries) + ")"


def _as_rows(m) -> tuple[tuple[Fraction, ...], ...]:
    if isinstance(m, BistochasticMatrix):
        return m.rows
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def is_doubly_stochastic(m) -> bool:
    """Exact check: square, nonnegative, every row and column sums to 1."""
    rows = _as_rows(m)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        return False
    if any(x < 0 for r in rows for x in r):
        return False
    if any(sum(r) != 1 for r in rows):
        return False
    return all(sum(rows[i][j] for i in range(n)) == 1 for j in range(n))


@dataclass(frozen=True)
class BistochasticMatrix:
    """Square exact-rational matrix with unit row and column sums."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        if not is_doubly_stochastic(rows):
            raise NotBistochastic("matrix is not doubly stochastic")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> BistochasticMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n))
                         for i in range(n)))

    @classmethod
    def parse(cls, data, location: str | None = None) -> BistochasticMatrix:
        loc = location or ""
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ParseError("matrix must be a list of rows", location)
        rows = tuple(tuple(parse_rational(x, f"{loc}[{i}][{j}]")
                           for j, x in enumerate(r)) for i, r in enumerate(data))
        try:
            return cls(rows)
        except NotBistochastic as exc:
            raise ParseError(str(exc), location) from None

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        if isinstance(other, BistochasticMatrix):
            return BistochasticMatrix(mat_mul(self.rows, other.rows))
        return mat_vec(self.rows, other)

    def transpose(self) -> BistochasticMatrix:
        return BistochasticMatrix(tuple(zip(*self.rows)))

    def to_json(self) -> list[list[str]]:
        return [[render_rational(x) for x in r] for r in self.rows]


def mat_vec(m, v) -> tuple[Fraction, ...]:
    rows = _as_rows(m)
    v = tuple(v)
    if any(len(r) != len(v) for r in rows):
        raise DimensionMismatch(f"{len(rows)}x? matrix against vector of length {len(v)}")
    return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in rows)


def mat_mul(a, b) -> tuple[tuple[Fraction, ...], ...]:
    a, b = _as_rows(a), _as_rows(b)
    cols = tuple(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in cols)
                 for r in a)


def sort_descending(v: WeightVector) -> tuple[WeightVector, Permutation]:
    """Stable descending sort.

    Returns ``(sorted, s)`` with ``sorted[i] == v[s(i)]``; equal weights keep
    their original order.
    """
    order = sorted(range(len(v)), key=lambda k: -v[k])
    s = Permutation(tuple(k + 1 for k in order))
    return WeightVector(tuple(v[k] for k in order)), s


def permute_vector(v, sigma: Permutation):
    """Right action ``(v . sigma)[i] = v[sigma(i)]``.

    Returns a ``WeightVector`` when given one, otherwise a tuple.
    """
    entries = tuple(v)
    if len(entries) != sigma.n:
        raise DimensionMismatch(
            f"vector of length {len(entries)} against permutation of size {sigma.n}"
        )
    out = tuple(entries[sigma(i) - 1] for i in range(1, sigma.n + 1))
    return WeightVector(out) if isinstance(v, WeightVector) else out


def permutation_matrix(sigma: Permutation) -> BistochasticMatrix:
    n = sigma.n
    return BistochasticMatrix(tuple(
        tuple(Fraction(int(i == sigma(j))) for j in range(1, n + 1))
        for i in range(1, n + 1)
    ))
