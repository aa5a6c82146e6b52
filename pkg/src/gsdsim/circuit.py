"""The n-level interferometer tree: routing, exact propagation and delays.

Conventions used throughout the package:

* bit strings are entered level-1 first (``"10"`` means x1=1, x2=0);
* at every level the odd parity (bits differ) goes to the LEFT child and
  the even parity to the RIGHT child;
* leaves are numbered 1..2**n from left to right.

With these rules the 0-based leaf index is the bitwise complement of the
parity string read as a binary number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernels
from .optics import IDEAL, StageNoise

BitsLike = Union[str, Sequence[int], int]

#: Practical cap on tree depth; 2**n leaves are materialised.
MAX_LEVELS = 24


def as_bits(value: BitsLike, n: Optional[int] = None) -> tuple[int, ...]:
    """Normalise a bit string (``"0101"``, ``[0, 1]``) to a tuple of ints.

    Integers are accepted only together with ``n``.
    """
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        if n is None:
            raise ValueError("an integer bit string needs an explicit length n")
        if not 0 <= value < (1 << n):
            raise ValueError(f"{value} does not fit in {n} bits")
        return int_to_bits(int(value), n)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"not a bit string: {value!r}")
        bits = tuple(int(ch) for ch in text)
    else:
        bits = tuple(int(b) for b in value)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"not a bit string: {value!r}")
    if not bits:
        raise ValueError("empty bit string")
    if n is not None and len(bits) != n:
        raise ValueError(f"expected {n} bits, got {len(bits)}")
    return bits


def bits_to_int(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def int_to_bits(value: int, n: int) -> tuple[int, ...]:
    return tuple((value >> (n - 1 - k)) & 1 for k in range(n))


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class MzTree:
    """Perfect binary tree of interferometers with a detector at every leaf.

    ``nodes[i]`` lists the node identifiers ``(level, index)`` of level
    ``i + 1``; children of ``(k, j)`` are ``(k + 1, 2j)`` (odd, left) and
    ``(k + 1, 2j + 1)`` (even, right).
    """

    n: int
    nodes: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)
    leaves: tuple[int, ...] = field(repr=False)

    @property
    def num_nodes(self) -> int:
        return (1 << self.n) - 1

    @property
    def num_leaves(self) -> int:
        return 1 << self.n

    def children(self, node: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
        """(odd/left, even/right) children.  Children of level-n nodes are leaves
        given as ``(n + 1, index)``."""
        level, j = node
        if not 1 <= level <= self.n or not 0 <= j < (1 << (level - 1)):
            raise ValueError(f"no node {node} in a {self.n}-level tree")
        return (level + 1, 2 * j), (level + 1, 2 * j + 1)

    def node_offset(self, level: int) -> int:
        """Position of the first node of ``level`` in level-order numbering."""
        return (1 << (level - 1)) - 1


def build_tree(n: int) -> MzTree:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"tree needs at least one level, got {n!r}")
    if n > MAX_LEVELS:
        raise ValueError(f"n={n} exceeds the supported maximum of {MAX_LEVELS}")
    nodes = tuple(
        tuple((level, j) for j in range(1 << (level - 1))) for level in range(1, n + 1)
    )
    return MzTree(n=int(n), nodes=nodes, leaves=tuple(range(1, (1 << n) + 1)))


def parity_string(x: BitsLike, y: BitsLike) -> tuple[int, ...]:
    xb = as_bits(x)
    yb = as_bits(y)
    if len(xb) != len(yb):
        raise ValueError(f"length mismatch: {len(xb)} vs {len(yb)} bits")
    return tuple(a ^ b for a, b in zip(xb, yb))


def leaf_of_parity(parity: Sequence[int]) -> int:
    """1-based leaf reached by a parity string (odd turns left)."""
    n = len(parity)
    return 1 + sum((1 - p) << (n - 1 - k) for k, p in enumerate(parity))


def parity_of_leaf(leaf: int, n: int) -> tuple[int, ...]:
    if not 1 <= leaf <= (1 << n):
        raise ValueError(f"leaf {leaf} out of range 1..{1 << n}")
    return tuple(1 - b for b in int_to_bits(leaf - 1, n))


def parity_route(x: BitsLike, y: BitsLike) -> tuple[tuple[int, ...], int]:
    """Parity string of the two inputs and the leaf the photon must reach.

    >>> parity_route("10", "01")
    ((1, 1), 1)
    >>> parity_route("00", "00")
    ((0, 0), 4)
    """
    p = parity_string(x, y)
    return p, leaf_of_parity(p)


@dataclass(frozen=True)
class LeafDistribution:
    """Click probability per leaf (index 0 is leaf 1) and loss probability."""

    probs: np.ndarray
    lost: float

    @property
    def n(self) -> int:
        return int(self.probs.size).bit_length() - 1

    @property
    def total(self) -> float:
        return float(self.probs.sum()) + self.lost

    def leaf_probability(self, leaf: int) -> float:
        return float(self.probs[leaf - 1])

    def most_likely_leaf(self) -> int:
        return int(np.argmax(self.probs)) + 1


def _jitter_draws(tree: MzTree, noise: StageNoise, rng, jitter):
    if jitter is not None:
        arr = np.asarray(jitter, dtype=np.float64)
        if arr.shape != (tree.num_nodes,):
            raise ValueError(f"jitter needs {tree.num_nodes} entries, got {arr.shape}")
        return arr
    h = noise.phase_jitter_halfwidth
    if h == 0.0:
        return None
    if rng is None:
        raise ValueError("phase jitter requires an rng")
    return rng.uniform(-h, h, size=tree.num_nodes)


def propagate_amplitudes(
    tree: MzTree,
    x: BitsLike,
    y: BitsLike,
    noise: StageNoise = IDEAL,
    rng: Optional[np.random.Generator] = None,
    jitter: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Complex amplitude reaching each leaf.

    ``jitter`` gives one phase error per node in level order and overrides
    drawing from ``rng``.
    """
    n = tree.n
    xb = as_bits(x, n)
    yb = as_bits(y, n)
    if noise.loss_per_stage >= 1.0:
        return np.zeros(tree.num_leaves, dtype=np.complex128)
    keep = math.sqrt(1.0 - noise.loss_per_stage)
    draws = _jitter_draws(tree, noise, rng, jitter)
    return np.asarray(
        kernels.propagate_amplitudes(n, bits_to_int(xb), bits_to_int(yb), keep, draws)
    )


def propagate(
    tree: MzTree,
    x: BitsLike,
    y: BitsLike,
    noise: StageNoise = IDEAL,
    rng: Optional[np.random.Generator] = None,
    jitter: Optional[Sequence[float]] = None,
) -> LeafDistribution:
    """Exact leaf click distribution for one pair of inputs."""
    amps = propagate_amplitudes(tree, x, y, noise, rng, jitter)
    probs = np.abs(amps) ** 2
    lost = max(0.0, 1.0 - float(probs.sum()))
    return LeafDistribution(probs=probs, lost=lost)


@dataclass(frozen=True)
class DelaySchedule:
    """Fibre delays of the two-detector refinement, in units of delta.

    ``left[i]`` / ``right[i]`` is the delay of the left / right output edge
    of every interferometer at level ``i + 1``.
    """

    n: int
    left: tuple[int, ...]
    right: tuple[int, ...]

    def path_delay(self, parity: Sequence[int]) -> int:
        """Sum of edge delays along the path of a parity string."""
        return sum(self.left[k] if p else self.right[k] for k, p in enumerate(parity))

    def leaf_delay(self, leaf: int) -> int:
        return self.path_delay(parity_of_leaf(leaf, self.n))

    @property
    def leaf_delays(self) -> tuple[int, ...]:
        return tuple(self.leaf_delay(leaf) for leaf in range(1, (1 << self.n) + 1))

    def final_mz_delays(self) -> tuple[int, ...]:
        """Accumulated delay at each final-level interferometer, left to right."""
        return self.leaf_delays[::2]


def delay_schedule(n: int) -> DelaySchedule:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    left = tuple(1 for _ in range(n))
    right = tuple(1 + (1 << (n - i - 1)) if i < n else 1 for i in range(1, n + 1))
    return DelaySchedule(n=n, left=left, right=right)


def leaf_delay(n: int, leaf: int) -> int:
    """Closed-form accumulated delay of a leaf in units of delta.

    Equal to ``n`` plus the index of its final interferometer.
    """
    if not 1 <= leaf <= (1 << n):
        raise ValueError(f"leaf {leaf} out of range 1..{1 << n}")
    return n + ((leaf - 1) >> 1)


def leaf_from_delay(n: int, delay: int, right_port: bool) -> int:
    """Invert the time-multiplexed readout: delay and output side give the leaf."""
    b = delay - n
    if not 0 <= b < (1 << (n - 1)):
        raise ValueError(f"delay {delay} is not produced by a {n}-level schedule")
    return 2 * b + (2 if right_port else 1)


def all_inputs(n: int) -> Iterable[tuple[int, ...]]:
    for v in range(1 << n):
        yield int_to_bits(v, n)
