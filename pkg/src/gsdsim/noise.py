"""Success rate under a realistic source, lossy stages and imperfect detectors."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

#: Trials per independently seeded block.  Fixed so that the result does not
#: depend on the number of workers.
BLOCK_TRIALS = 1 << 15


@dataclass(frozen=True)
class PhysicalParams:
    """Single-photon probability per pulse, loss per stage, detector efficiency."""

    p1: float = 1.0
    eps_stage: float = 0.0
    eta_d: float = 1.0

    def __post_init__(self):
        for name in ("p1", "eps_stage", "eta_d"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @classmethod
    def quantum_dot_snspd(cls) -> "PhysicalParams":
        """Quantum-dot source (P(1)=0.72), 1.5 % loss per stage, 85 % SNSPD efficiency."""
        return cls(p1=0.72, eps_stage=0.015, eta_d=0.85)


def success_rate(n: int, params: PhysicalParams) -> float:
    """Probability that a run ends in a click: ``p1 * (1 - eps)**n * eta_d``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return params.p1 * (1.0 - params.eps_stage) ** n * params.eta_d


def _count_block(n: int, params: PhysicalParams, trials: int, seed_seq) -> int:
    rng = np.random.default_rng(seed_seq)
    emitted = rng.random(trials) < params.p1
    survived = (rng.random((trials, n)) < 1.0 - params.eps_stage).all(axis=1)
    detected = rng.random(trials) < params.eta_d
    return int(np.count_nonzero(emitted & survived & detected))


def monte_carlo_rate(n: int, params: PhysicalParams, trials: int, seed: int,
                     workers: int = 1) -> tuple[float, float]:
    """Simulated success rate and its binomial standard error.

    Each trial draws the source emission, ``n`` stage survivals and the
    detection as independent Bernoulli variables.  Trials are split into
    fixed-size blocks with child seeds spawned from ``seed``, so the rate is
    reproducible for any ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    sizes = [BLOCK_TRIALS] * (trials // BLOCK_TRIALS)
    if trials % BLOCK_TRIALS:
        sizes.append(trials % BLOCK_TRIALS)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, children))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda job: _count_block(n, params, *job), jobs))
    else:
        counts = [_count_block(n, params, size, child) for size, child in jobs]
    rate = sum(counts) / trials
    return rate, math.sqrt(rate * (1.0 - rate) / trials)


def loss_curve(n_min: int, n_max: int, params: PhysicalParams) -> list[tuple[int, float]]:
    if not 1 <= n_min <= n_max:
        raise ValueError(f"invalid level range {n_min}..{n_max}")
    return [(n, success_rate(n, params)) for n in range(n_min, n_max + 1)]
