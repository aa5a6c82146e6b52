"""Time-window arithmetic for the quantum protocol and the classical baseline."""
from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class Geometry:
    """Distances in metres, speed in m/s, slack in seconds.

    ``delta`` is the fibre length between consecutive levels.
    """

    d: float
    delta: float
    c: float = SPEED_OF_LIGHT
    slack: float = 0.0

    def __post_init__(self):
        if self.d <= 0 or self.delta <= 0 or self.c <= 0:
            raise ValueError("d, delta and c must be positive")
        if self.slack < 0:
            raise ValueError("slack must be non-negative")

    @property
    def hop_time(self) -> float:
        """Time for one classical one-way hop between the agents."""
        return self.d / self.c


def quantum_window(n: int, geom: Geometry) -> tuple[float, float]:
    """Earliest and latest admissible click times of the n-level protocol."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    t_lo = (n * geom.d + (n - 1) * geom.delta) / geom.c
    return t_lo, t_lo + geom.slack


def classical_deadline(n: int, geom: Geometry) -> float:
    """Time for n + 1 classical hops, which the window must stay below."""
    return (n + 1) * geom.d / geom.c


def validate_window(n: int, geom: Geometry) -> bool:
    """True iff the window closes strictly before one more classical hop fits."""
    return quantum_window(n, geom)[1] < classical_deadline(n, geom)


def classical_bits_within(tau: float, geom: Geometry) -> int:
    """One-bit one-way hops that complete within ``tau``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    ratio = tau * geom.c / geom.d
    hops = math.floor(ratio)
    # tau computed as k*d/c may land a hair below k
    if math.isclose(ratio, hops + 1, rel_tol=1e-12):
        hops += 1
    return hops


def feasibility_max_n(geom: Geometry, ratio_threshold: float = 100.0) -> int:
    """Largest n with ``2**n * delta <= d / ratio_threshold``; 0 if none."""
    if ratio_threshold <= 1:
        raise ValueError("ratio_threshold must exceed 1")
    budget = geom.d / ratio_threshold
    n = 0
    while (2 ** (n + 1)) * geom.delta <= budget:
        n += 1
    return n
