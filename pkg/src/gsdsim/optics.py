"""Two-port amplitude algebra for the elements of one Mach-Zehnder stage.

Port 0 is the arm Alice can reach, port 1 the arm Bob can reach.  After the
second beam splitter, port 0 feeds the left (odd) child of the tree and
port 1 the right (even) child.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

INV_SQRT2 = 1.0 / math.sqrt(2.0)

#: Output port that receives the photon when the two bits agree.
EVEN_PORT = 1
#: Output port that receives the photon when the two bits differ.
ODD_PORT = 0


@dataclass(frozen=True)
class TwoPortState:
    """Complex amplitudes on the two ports of an optical element."""

    a0: complex = 0j
    a1: complex = 0j

    def __getitem__(self, port: int) -> complex:
        if port == 0:
            return self.a0
        if port == 1:
            return self.a1
        raise IndexError(f"port must be 0 or 1, got {port}")

    @property
    def probabilities(self) -> tuple[float, float]:
        return abs(self.a0) ** 2, abs(self.a1) ** 2

    @property
    def norm(self) -> float:
        """Total detection probability ``|a0|^2 + |a1|^2``."""
        p0, p1 = self.probabilities
        return p0 + p1


@dataclass(frozen=True)
class StageNoise:
    """Per-stage imperfections of one interferometer.

    Parameters
    ----------
    loss_per_stage : float
        Fraction of probability lost inside each stage, in ``[0, 1)``.
    phase_jitter_halfwidth : float
        Half-width in radians of the uniform phase error drawn per node.
        Zero disables jitter.
    """

    loss_per_stage: float = 0.0
    phase_jitter_halfwidth: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.loss_per_stage <= 1.0:
            raise ValueError(f"loss_per_stage must lie in [0, 1], got {self.loss_per_stage}")
        if self.phase_jitter_halfwidth < 0.0:
            raise ValueError("phase_jitter_halfwidth must be non-negative")

    @property
    def is_ideal(self) -> bool:
        return self.loss_per_stage == 0.0 and self.phase_jitter_halfwidth == 0.0


IDEAL = StageNoise()


def apply_beam_splitter(state: TwoPortState) -> TwoPortState:
    """Apply the symmetric 50/50 splitter ``(1/sqrt2) [[1, i], [i, 1]]``."""
    a0, a1 = state.a0, state.a1
    return TwoPortState(INV_SQRT2 * (a0 + 1j * a1), INV_SQRT2 * (1j * a0 + a1))


def apply_phase(state: TwoPortState, port: int, phi: float) -> TwoPortState:
    """Multiply the amplitude on ``port`` by ``exp(i*phi)``."""
    if port not in (0, 1):
        raise ValueError(f"port must be 0 or 1, got {port}")
    factor = cmath.exp(1j * phi)
    if port == 0:
        return TwoPortState(state.a0 * factor, state.a1)
    return TwoPortState(state.a0, state.a1 * factor)


def apply_loss(state: TwoPortState, loss: float) -> TwoPortState:
    """Attenuate both ports so that total probability scales by ``1 - loss``."""
    if not 0.0 <= loss < 1.0:
        raise ValueError(f"loss must lie in [0, 1), got {loss}")
    keep = math.sqrt(1.0 - loss)
    return TwoPortState(state.a0 * keep, state.a1 * keep)


def modulator_sign(bit: int, pi_on: int = 0) -> float:
    """Real factor of the pi-modulator: -1 when inserted, else +1.

    ``pi_on`` selects which bit value inserts the modulator.  Using the
    exact sign instead of ``exp(i*pi)`` keeps dark ports at exactly zero.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    return -1.0 if bit == pi_on else 1.0


def mz_transfer(
    bit_a: int,
    bit_b: int,
    noise: StageNoise = IDEAL,
    rng_draw: Optional[float] = None,
    pi_on: int = 0,
) -> TwoPortState:
    """Output amplitudes of one encoded interferometer for a unit input on port 0.

    Sequence: splitter, Alice's modulator on port 0, Bob's modulator on
    port 1, optional jitter phase on port 0, loss, splitter.

    Parameters
    ----------
    bit_a, bit_b : int
        Alice's and Bob's bits for this level.
    noise : StageNoise
        Loss applied once per stage.  Jitter is only applied through
        ``rng_draw``; the caller draws it from ``noise.phase_jitter_halfwidth``.
    rng_draw : float, optional
        Phase error in radians added to Alice's arm.
    pi_on : int
        Bit value that inserts the pi-modulator (0 by default).

    Returns
    -------
    TwoPortState
        Amplitudes on (ODD_PORT, EVEN_PORT).
    """
    state = apply_beam_splitter(TwoPortState(1.0 + 0j, 0j))
    sa = modulator_sign(bit_a, pi_on)
    sb = modulator_sign(bit_b, pi_on)
    state = TwoPortState(state.a0 * sa, state.a1 * sb)
    if rng_draw:
        state = apply_phase(state, 0, rng_draw)
    if noise.loss_per_stage >= 1.0:
        return TwoPortState(0j, 0j)
    if noise.loss_per_stage > 0.0:
        state = apply_loss(state, noise.loss_per_stage)
    return apply_beam_splitter(state)


def even_probability(bit_a: int, bit_b: int, noise: StageNoise = IDEAL,
                     rng_draw: Optional[float] = None) -> float:
    return abs(mz_transfer(bit_a, bit_b, noise, rng_draw)[EVEN_PORT]) ** 2
