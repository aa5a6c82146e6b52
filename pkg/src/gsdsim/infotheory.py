"""Entropies and information gains of the game, by enumeration and in closed form.

All logarithms are base 2 and ``0 log 0 = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from . import kernels
from .circuit import int_to_bits
from .protocol import Agent, DetectorAssignment, decode_silent, parity_route

#: Largest n accepted by the exhaustive 4**n enumerations.
MAX_ENUM_LEVELS = 12

TABLE1_PATTERNS = (
    "AABB",
    "BBAA",
    "ABAB",
    "BABA",
    "BAAB",
    "ABBA",
    "ABBB",
    "BAAA",
)


def _xlog2x(p: float) -> float:
    return p * math.log2(p) if p > 0 else 0.0


def shannon_entropy(dist: Union[Sequence[float], Mapping[object, float]], tol: float = 1e-12) -> float:
    """Entropy in bits of a finite distribution (sequence or label -> prob mapping)."""
    probs = list(dist.values()) if isinstance(dist, Mapping) else list(dist)
    if not probs:
        raise ValueError("empty distribution")
    if any(p < 0 or not math.isfinite(p) for p in probs):
        raise ValueError("probabilities must be finite and non-negative")
    if abs(math.fsum(probs) - 1.0) > tol:
        raise ValueError(f"probabilities sum to {math.fsum(probs)!r}, not 1")
    return -math.fsum(_xlog2x(p) for p in probs)


@dataclass(frozen=True)
class GainReport:
    """Information gains in bits.

    ``alice`` is I(Y;A|X), what Alice learns about Bob's string; ``bob`` is
    I(X;B|Y).
    """

    n: int
    alice: float
    bob: float

    @property
    def total(self) -> float:
        return self.alice + self.bob


def enumerate_gains(n: int, assignment: DetectorAssignment) -> GainReport:
    """Both conditional mutual informations by enumerating all 4**n input pairs.

    Inputs are uniform and the channel is deterministic, so
    ``I(X;B|Y) = H(B|Y)``.
    """
    if assignment.n != n:
        raise ValueError(f"assignment covers {assignment.n} levels, not {n}")
    if not 1 <= n <= MAX_ENUM_LEVELS:
        raise ValueError(f"enumeration supports 1 <= n <= {MAX_ENUM_LEVELS}, got {n}")
    owner = assignment.as_array()
    return GainReport(
        n=n,
        alice=kernels.conditional_observation_entropy(n, owner, int(Agent.ALICE)),
        bob=kernels.conditional_observation_entropy(n, owner, int(Agent.BOB)),
    )


def observation_entropy(n: int, assignment: DetectorAssignment, agent: Agent) -> float:
    """Unconditioned H(B) (or H(A)) of an agent's observation under uniform inputs."""
    size = 1 << n
    own = assignment.leaves_of(agent)
    probs = [1.0 / size] * len(own) + [1.0 - len(own) / size]
    return shannon_entropy(probs)


def _check_m(n: int, m: int) -> None:
    if not 0 <= m <= (1 << n):
        raise ValueError(f"m={m} out of range 0..{1 << n}")


def analytic_H_B(n: int, m: int) -> float:
    """Entropy of Bob's observation when he holds ``m`` of the ``2**n`` detectors."""
    _check_m(n, m)
    size = 1 << n
    rest = size - m
    return n - (rest / size) * math.log2(rest) if rest else float(n)


def analytic_total(n: int, m: int) -> float:
    """Closed-form total gain ``H(A) + H(B)`` for Bob holding ``m`` detectors."""
    _check_m(n, m)
    size = 1 << n
    rest = size - m
    t_bob = (m / size) * math.log2(m) if m else 0.0
    t_alice = (rest / size) * math.log2(rest) if rest else 0.0
    return 2 * n - t_bob - t_alice


def optimal_m(n: int, tol: float = 1e-12) -> int:
    """Bob's detector count maximising the total gain, by exhaustive scan."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    values = np.array([analytic_total(n, m) for m in range((1 << n) + 1)])
    best = float(values.max())
    winners = np.flatnonzero(values >= best - tol)
    if winners.size != 1:
        raise ArithmeticError(f"argmax not unique for n={n}: {winners.tolist()}")
    return int(winners[0])


def silent_gain_given_click(assignment: DetectorAssignment, clicker: Agent) -> float:
    """Silent agent's average gain over the inputs where ``clicker``'s detector fires.

    Uses the explicit compatible sets from ``decode_silent``.
    """
    n = assignment.n
    silent = clicker.other
    gain_for_own = {}
    gains = []
    for xv in range(1 << n):
        x = int_to_bits(xv, n)
        for yv in range(1 << n):
            y = int_to_bits(yv, n)
            leaf = parity_route(x, y)[1]
            if assignment.owner(leaf) is not clicker:
                continue
            own = y if silent is Agent.BOB else x
            # the compatible set depends on the silent agent's input only
            if own not in gain_for_own:
                gain_for_own[own] = decode_silent(assignment, own, silent).bits_gained
            gains.append(gain_for_own[own])
    if not gains:
        raise ValueError(f"{clicker.label} never clicks under this assignment")
    return math.fsum(gains) / len(gains)


def click_probability(assignment: DetectorAssignment, agent: Agent) -> float:
    """Fraction of uniform input pairs whose photon reaches ``agent``."""
    n = assignment.n
    alice, bob = kernels.agent_click_counts(n, assignment.as_array())
    hits = alice if agent is Agent.ALICE else bob
    return hits / float(1 << (2 * n))


@dataclass(frozen=True)
class Table1Row:
    case: int
    pattern: str
    bob_gain: float


def table1_report() -> list[Table1Row]:
    """Bob's gain, given that an Alice detector clicked, for the eight n=2 patterns."""
    rows = []
    for case, pattern in enumerate(TABLE1_PATTERNS, start=1):
        assignment = DetectorAssignment.from_pattern(pattern)
        rows.append(Table1Row(case, pattern, silent_gain_given_click(assignment, Agent.ALICE)))
    return rows
