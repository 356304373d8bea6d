"""Seeded random majorizing pairs.

Algorithm (stable across platforms, relies only on ``random.Random``, which
is MT19937 seeded from the integer seed):

1. ``beta``: draw ``n`` integers uniformly from ``0..9``; redraw all if they
   are all zero; divide by their sum.
2. ``D``: draw ``m = randint(1, n)``; for each of ``m`` terms shuffle
   ``1..n`` into a permutation and draw an integer weight from ``1..9``;
   normalize the weights; ``D = sum(w * P_sigma)``.
3. ``alpha = D @ beta``.

Since ``D`` is doubly stochastic by construction, ``beta`` majorizes ``alpha``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .birkhoff import BirkhoffDecomposition, Term
from .core import Permutation, WeightVector, mat_vec

__all__ = ["random_weights", "random_bistochastic", "random_instance"]


def random_weights(n: int, rng: random.Random) -> WeightVector:
    while True:
        raw = [rng.randint(0, 9) for _ in range(n)]
        if any(raw):
            break
    total = sum(raw)
    return WeightVector(tuple(Fraction(x, total) for x in raw))


def random_bistochastic(n: int, rng: random.Random) -> BirkhoffDecomposition:
    """Random convex mix of at most ``n`` permutations (repeats merged)."""
    m = rng.randint(1, n)
    mix: dict[Permutation, int] = {}
    for _ in range(m):
        images = list(range(1, n + 1))
        rng.shuffle(images)
        sigma = Permutation(tuple(images))
        mix[sigma] = mix.get(sigma, 0) + rng.randint(1, 9)
    total = sum(mix.values())
    return BirkhoffDecomposition(tuple(Term(Fraction(w, total), s) for s, w in mix.items()))


def random_instance(n: int, seed: int | None = None) -> tuple[WeightVector, WeightVector]:
    """Returns ``(alpha, beta)`` with ``beta`` majorizing ``alpha``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    beta = random_weights(n, rng)
    d = random_bistochastic(n, rng).matrix()
    alpha = WeightVector(mat_vec(d, beta))
    return alpha, beta
