"""Floating-point execution of a protocol on an explicit bipartite pure state.

A state ``sum_ij C[i, j] |i>|j>`` is held as its ``N x N`` amplitude matrix
``C`` (rows are Alice's index, columns Bob's). Alice's Kraus operator for
outcome ``sigma`` is ``sqrt(A_sigma)``, which scales row ``i`` by
``sqrt(diag[i])``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import LoccError, Permutation, render_rational
from .povm import PovmElement

__all__ = [
    "PROB_TOL",
    "FIDELITY_TOL",
    "DEFAULT_MAX_N",
    "ZeroProbabilityOutcome",
    "SimulationTooLarge",
    "Side",
    "PureBipartiteState",
    "OutcomeReport",
    "SimulationReport",
    "state_from_weights",
    "apply_measurement_outcome",
    "apply_local_permutation",
    "fidelity",
    "schmidt_weights",
    "run_protocol_simulation",
]

PROB_TOL = 1e-12
FIDELITY_TOL = 1e-10
ZERO_PROB = 1e-15
DEFAULT_MAX_N = 128


class ZeroProbabilityOutcome(LoccError):
    pass


class SimulationTooLarge(LoccError, ValueError):
    pass


class Side(enum.Enum):
    ALICE = "alice"
    BOB = "bob"
    BOTH = "both"


@dataclass(frozen=True, eq=False)
class PureBipartiteState:
    amplitudes: np.ndarray

    def __post_init__(self):
        c = np.array(self.amplitudes, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("amplitude matrix must be square")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def state_from_weights(w) -> PureBipartiteState:
    """Schmidt-form state with amplitudes ``sqrt(w[i])`` on the diagonal."""
    return PureBipartiteState(np.diag(np.sqrt([float(x) for x in w])))


def apply_measurement_outcome(s: PureBipartiteState, e: PovmElement):
    """Returns ``(probability, normalized post-measurement state)``."""
    if e.n != s.n:
        raise ValueError("element and state dimensions disagree")
    kraus = np.sqrt([float(x) for x in e.diag])
    unnorm = kraus[:, None] * s.amplitudes
    prob = float(np.sum(np.abs(unnorm) ** 2))
    if prob < ZERO_PROB:
        raise ZeroProbabilityOutcome(f"outcome {e.sigma} has probability {prob:.3g}")
    return prob, PureBipartiteState(unnorm / math.sqrt(prob))


def apply_local_permutation(s: PureBipartiteState, sigma: Permutation,
                            side: Side = Side.BOTH) -> PureBipartiteState:
    """Relabel basis state ``sigma(i)`` as ``i`` on the chosen side(s)."""
    side = Side(side)
    idx = np.array(sigma.images) - 1
    c = s.amplitudes
    if side in (Side.ALICE, Side.BOTH):
        c = c[idx, :]
    if side in (Side.BOB, Side.BOTH):
        c = c[:, idx]
    return PureBipartiteState(c)


def fidelity(a: PureBipartiteState, b: PureBipartiteState) -> float:
    """``|<a|b>|^2``."""
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def schmidt_weights(s: PureBipartiteState) -> np.ndarray:
    """Squared singular values of the amplitude matrix, descending."""
    sv = np.linalg.svd(s.amplitudes, compute_uv=False)
    return np.sort(sv ** 2)[::-1]


@dataclass(frozen=True)
class OutcomeReport:
    sigma: Permutation
    p_exact: Fraction
    p_simulated: float
    fidelity: float

    @property
    def probability_ok(self) -> bool:
        return abs(self.p_simulated - float(self.p_exact)) <= PROB_TOL

    @property
    def fidelity_ok(self) -> bool:
        return self.fidelity >= 1 - FIDELITY_TOL

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma.images),
            "p_exact": render_rational(self.p_exact),
            "p_simulated": self.p_simulated,
            "fidelity": self.fidelity,
        }


@dataclass(frozen=True)
class SimulationReport:
    outcomes: tuple[OutcomeReport, ...]

    @property
    def total_probability(self) -> float:
        return math.fsum(o.p_simulated for o in self.outcomes)

    @property
    def min_fidelity(self) -> float:
        return min(o.fidelity for o in self.outcomes)

    @property
    def max_probability_error(self) -> float:
        return max(abs(o.p_simulated - float(o.p_exact)) for o in self.outcomes)

    @property
    def ok(self) -> bool:
        return (abs(self.total_probability - 1) <= PROB_TOL
                and all(o.probability_ok and o.fidelity_ok for o in self.outcomes))

    def to_json(self) -> dict:
        return {
            "outcomes": [o.to_json() for o in self.outcomes],
            "total_probability": self.total_probability,
            "max_probability_error": self.max_probability_error,
            "min_fidelity": self.min_fidelity,
            "ok": self.ok,
        }


def run_protocol_simulation(p, max_n: int = DEFAULT_MAX_N) -> SimulationReport:
    """Measure, correct and compare against the target, outcome by outcome."""
    if p.n > max_n:
        raise SimulationTooLarge(f"N={p.n} exceeds the simulation limit {max_n}")
    start = state_from_weights(p.alpha)
    target = state_from_weights(p.beta)
    outcomes = []
    for e in p.elements:
        prob, post = apply_measurement_outcome(start, e)
        corrected = apply_local_permutation(post, e.sigma, Side.BOTH)
        outcomes.append(OutcomeReport(e.sigma, e.p, prob, fidelity(corrected, target)))
    return SimulationReport(tuple(outcomes))
