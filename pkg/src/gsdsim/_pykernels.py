"""Pure-Python reference kernels.

Same contracts as the compiled ``_ckernels`` module.  Bit strings are
integers with the level-1 bit as the most significant of ``n`` bits; leaves
and nodes are 0-based, left to right, nodes numbered level by level.
"""
import math

import numpy as np

_S = 1.0 / math.sqrt(2.0)


def propagate_amplitudes(n, x, y, keep, jitter=None, pi_on=0):
    """Leaf amplitudes of a photon injected at the root.

    ``keep`` is the per-stage amplitude transmission ``sqrt(1 - loss)``;
    ``jitter`` holds one phase per node (length ``2**n - 1``) or is None.
    Nodes carrying exactly zero amplitude are skipped.
    """
    front = {0: 1.0 + 0.0j}
    for k in range(1, n + 1):
        shift = n - k
        sa = -1.0 if ((x >> shift) & 1) == pi_on else 1.0
        sb = -1.0 if ((y >> shift) & 1) == pi_on else 1.0
        base = (1 << (k - 1)) - 1
        nxt = {}
        for j, amp in front.items():
            if amp == 0:
                continue
            u0 = _S * amp * sa
            u1 = 1j * _S * amp * sb
            if jitter is not None:
                phi = jitter[base + j]
                if phi != 0.0:
                    u0 = u0 * complex(math.cos(phi), math.sin(phi))
            u0 *= keep
            u1 *= keep
            out0 = _S * (u0 + 1j * u1)
            out1 = _S * (1j * u0 + u1)
            if out0 != 0:
                nxt[2 * j] = nxt.get(2 * j, 0j) + out0
            if out1 != 0:
                nxt[2 * j + 1] = nxt.get(2 * j + 1, 0j) + out1
        front = nxt
    leaves = np.zeros(1 << n, dtype=np.complex128)
    for j, amp in front.items():
        leaves[j] = amp
    return leaves


def conditional_observation_entropy(n, owner, agent):
    """H(O | own input) in bits, by enumerating all input pairs.

    The agent observes the index of its own clicking leaf or silence.
    ``owner[leaf]`` is 0 for Alice and 1 for Bob.
    """
    size = 1 << n
    mask = size - 1
    total = 0.0
    for own in range(size):
        counts = [0] * (size + 1)
        for other in range(size):
            leaf = mask ^ own ^ other
            if owner[leaf] == agent:
                counts[leaf] += 1
            else:
                counts[size] += 1
        h = 0.0
        for c in counts:
            if c:
                p = c / size
                h -= p * math.log2(p)
        total += h
    return total / size


def agent_click_counts(n, owner):
    """Number of input pairs whose photon reaches each agent: (alice, bob)."""
    size = 1 << n
    mask = size - 1
    counts = [0, 0]
    for x in range(size):
        for y in range(size):
            counts[owner[mask ^ x ^ y]] += 1
    return counts[0], counts[1]
