"""End-to-end game: detector ownership, outcomes and both agents' decoding."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .circuit import (
    BitsLike,
    MzTree,
    as_bits,
    bits_to_str,
    build_tree,
    int_to_bits,
    leaf_delay,
    leaf_from_delay,
    parity_of_leaf,
    parity_route,
    propagate,
)
from .optics import IDEAL, StageNoise


class Agent(enum.IntEnum):
    ALICE = 0
    BOB = 1

    @property
    def other(self) -> "Agent":
        return Agent(1 - self)

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def parse(cls, value: Union[str, int, "Agent"]) -> "Agent":
        if isinstance(value, Agent):
            return value
        if isinstance(value, str):
            key = value.strip().upper()
            if key in ("A", "ALICE"):
                return cls.ALICE
            if key in ("B", "BOB"):
                return cls.BOB
            raise ValueError(f"unknown agent {value!r}")
        return cls(value)


@dataclass(frozen=True)
class DetectorAssignment:
    """Owner of every leaf detector; ``owners[0]`` belongs to leaf 1."""

    owners: tuple[Agent, ...]

    def __post_init__(self):
        size = len(self.owners)
        if size < 2 or size & (size - 1):
            raise ValueError(f"need 2**n owners, got {size}")
        object.__setattr__(self, "owners", tuple(Agent.parse(o) for o in self.owners))

    @property
    def n(self) -> int:
        return len(self.owners).bit_length() - 1

    @property
    def m(self) -> int:
        """Number of detectors held by Bob."""
        return sum(1 for o in self.owners if o is Agent.BOB)

    def owner(self, leaf: int) -> Agent:
        if not 1 <= leaf <= len(self.owners):
            raise ValueError(f"leaf {leaf} out of range 1..{len(self.owners)}")
        return self.owners[leaf - 1]

    def leaves_of(self, agent: Agent) -> tuple[int, ...]:
        return tuple(i + 1 for i, o in enumerate(self.owners) if o is agent)

    def as_array(self) -> np.ndarray:
        """uint8 owner codes per leaf (0 Alice, 1 Bob), used by the kernels."""
        return np.fromiter((int(o) for o in self.owners), dtype=np.uint8, count=len(self.owners))

    @property
    def pattern(self) -> str:
        return "".join("A" if o is Agent.ALICE else "B" for o in self.owners)

    @classmethod
    def from_pattern(cls, pattern: str) -> "DetectorAssignment":
        """Parse ``"AABB"`` or ``"A,A,B,B"``."""
        cleaned = [c for c in pattern.upper() if c not in ", "]
        if any(c not in "AB" for c in cleaned):
            raise ValueError(f"bad assignment pattern {pattern!r}")
        return cls(tuple(Agent.ALICE if c == "A" else Agent.BOB for c in cleaned))

    @classmethod
    def from_bob_leaves(cls, n: int, bob_leaves: Iterable[int]) -> "DetectorAssignment":
        bob = set(bob_leaves)
        size = 1 << n
        if any(not 1 <= leaf <= size for leaf in bob):
            raise ValueError(f"Bob leaves must lie in 1..{size}")
        return cls(tuple(Agent.BOB if leaf in bob else Agent.ALICE for leaf in range(1, size + 1)))


def level_parity_assignment(n: int, k: int) -> DetectorAssignment:
    """Alice holds every leaf reached through an even level-k path, Bob the odd ones."""
    if not 1 <= k <= n:
        raise ValueError(f"level k={k} out of range 1..{n}")
    return DetectorAssignment(
        tuple(Agent.BOB if parity_of_leaf(leaf, n)[k - 1] else Agent.ALICE
              for leaf in range(1, (1 << n) + 1))
    )


def two_detector_assignment(n: int) -> DetectorAssignment:
    """Left output of each final interferometer to Alice, right to Bob.

    This is the ownership realised by the two-detector, time-multiplexed
    circuit.
    """
    return DetectorAssignment(tuple(Agent(i % 2) for i in range(1 << n)))


def single_alice_assignment(n: int, leaf: int = 1) -> DetectorAssignment:
    """Alice holds one detector, Bob the other ``2**n - 1``."""
    size = 1 << n
    if not 1 <= leaf <= size:
        raise ValueError(f"leaf {leaf} out of range 1..{size}")
    return DetectorAssignment(
        tuple(Agent.ALICE if i == leaf else Agent.BOB for i in range(1, size + 1))
    )


@dataclass(frozen=True)
class Click:
    leaf: int
    owner: Agent
    delay: int


@dataclass(frozen=True)
class Lost:
    pass


@dataclass(frozen=True)
class Observation:
    """What one agent sees: a click on its own detector at some delay, or silence."""

    clicked: bool
    delay: Optional[int] = None


SILENCE = Observation(clicked=False)


@dataclass(frozen=True)
class GameOutcome:
    result: Union[Click, Lost]
    alice_view: Observation
    bob_view: Observation

    @property
    def lost(self) -> bool:
        return isinstance(self.result, Lost)

    def view(self, agent: Agent) -> Observation:
        return self.alice_view if agent is Agent.ALICE else self.bob_view


@dataclass(frozen=True)
class Knowledge:
    """Other-party strings consistent with an agent's input and observation."""

    compatible: frozenset[tuple[int, ...]]
    n: int

    @property
    def bits_gained(self) -> float:
        return self.n - math.log2(len(self.compatible))

    @property
    def exact(self) -> bool:
        return len(self.compatible) == 1


def _outcome_for_leaf(leaf: int, assignment: DetectorAssignment) -> GameOutcome:
    owner = assignment.owner(leaf)
    delay = leaf_delay(assignment.n, leaf)
    seen = Observation(clicked=True, delay=delay)
    if owner is Agent.ALICE:
        return GameOutcome(Click(leaf, owner, delay), seen, SILENCE)
    return GameOutcome(Click(leaf, owner, delay), SILENCE, seen)


def run_game(
    x: BitsLike,
    y: BitsLike,
    assignment: DetectorAssignment,
    noise: StageNoise = IDEAL,
    rng: Optional[np.random.Generator] = None,
    tree: Optional[MzTree] = None,
) -> GameOutcome:
    """Send one photon through the encoded tree and report who saw it.

    Noise-free runs are deterministic.  Otherwise the click (or loss) is
    sampled from the exact leaf distribution, which requires ``rng``.
    """
    n = assignment.n
    xb = as_bits(x, n)
    yb = as_bits(y, n)
    tree = tree if tree is not None else build_tree(n)
    if tree.n != n:
        raise ValueError(f"tree has {tree.n} levels but the assignment covers {n}")
    dist = propagate(tree, xb, yb, noise, rng)
    if noise.is_ideal:
        return _outcome_for_leaf(dist.most_likely_leaf(), assignment)
    if rng is None:
        raise ValueError("a noisy run needs an rng to sample the click")
    u = rng.random()
    cumulative = np.cumsum(dist.probs)
    idx = int(np.searchsorted(cumulative, u, side="right"))
    if idx >= dist.probs.size:
        return GameOutcome(Lost(), SILENCE, SILENCE)
    return _outcome_for_leaf(idx + 1, assignment)


def decode_clicker(leaf: int, own: BitsLike) -> tuple[int, ...]:
    """Other party's string, read off the clicking leaf and one's own input."""
    ob = as_bits(own)
    p = parity_of_leaf(leaf, len(ob))
    return tuple(a ^ b for a, b in zip(ob, p))


def decode_timed(owner: Agent, delay: int, own: BitsLike) -> tuple[int, ...]:
    """Decode in the two-detector circuit from whose detector fired and when."""
    ob = as_bits(own)
    leaf = leaf_from_delay(len(ob), delay, right_port=Agent.parse(owner) is Agent.BOB)
    return decode_clicker(leaf, ob)


def decode_silent(assignment: DetectorAssignment, own: BitsLike,
                  owner: Union[Agent, str]) -> Knowledge:
    """What an agent infers from its detectors staying dark.

    The photon is assumed to have clicked somewhere; a lost photon never
    reaches this function.
    """
    agent = Agent.parse(owner)
    n = assignment.n
    ob = as_bits(own, n)
    if not assignment.leaves_of(agent.other):
        raise ValueError(f"{agent.label} holds every detector; silence is impossible")
    compatible = frozenset(
        s for s in (int_to_bits(v, n) for v in range(1 << n))
        if assignment.owner(parity_route(ob, s)[1]) is not agent
    )
    return Knowledge(compatible=compatible, n=n)


def check_win(outcome: GameOutcome, clicker_decode: Optional[Sequence[int]],
              truth: Optional[Sequence[int]], silent: Optional[Knowledge]) -> bool:
    """Both win conditions: the clicker recovers the other string exactly and
    the silent agent gains at least one bit.  Lost photons never win."""
    if outcome.lost or clicker_decode is None or silent is None:
        return False
    return tuple(clicker_decode) == tuple(truth) and silent.bits_gained >= 1.0 - 1e-12


@dataclass(frozen=True)
class RoundReport:
    """Full record of one round: outcome, both decodes and the verdict."""

    x: tuple[int, ...]
    y: tuple[int, ...]
    outcome: GameOutcome
    clicker_decode: Optional[tuple[int, ...]]
    silent_knowledge: Optional[Knowledge]
    win: bool

    def to_dict(self) -> dict:
        res = self.outcome.result
        record = {
            "n": len(self.x),
            "x": bits_to_str(self.x),
            "y": bits_to_str(self.y),
            "lost": self.outcome.lost,
            "win": self.win,
        }
        if isinstance(res, Click):
            silent = self.silent_knowledge
            record.update(
                leaf=res.leaf,
                owner=res.owner.label,
                delay=res.delay,
                clicker_decode=bits_to_str(self.clicker_decode),
                silent_agent=res.owner.other.label,
                silent_bits_gained=silent.bits_gained,
                silent_compatible=sorted(bits_to_str(s) for s in silent.compatible),
            )
        return record


def play_round(
    x: BitsLike,
    y: BitsLike,
    assignment: DetectorAssignment,
    noise: StageNoise = IDEAL,
    rng: Optional[np.random.Generator] = None,
) -> RoundReport:
    n = assignment.n
    xb = as_bits(x, n)
    yb = as_bits(y, n)
    outcome = run_game(xb, yb, assignment, noise, rng)
    if outcome.lost:
        return RoundReport(xb, yb, outcome, None, None, False)
    click = outcome.result
    clicker_own, truth = (xb, yb) if click.owner is Agent.ALICE else (yb, xb)
    silent_own = truth
    decoded = decode_clicker(click.leaf, clicker_own)
    knowledge = decode_silent(assignment, silent_own, click.owner.other)
    win = check_win(outcome, decoded, truth, knowledge)
    return RoundReport(xb, yb, outcome, decoded, knowledge, win)
