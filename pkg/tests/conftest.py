import itertools
import math

import numpy as np
import pytest

from gsdsim import _pykernels

try:
    from gsdsim import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
BACKENDS.append(
    pytest.param(_ckernels, id="cython",
                 marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))
)

SQ = 1.0 / math.sqrt(2.0)
BS = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2.0)


def brute_force_leaf_amplitudes(x, y, loss=0.0, jitter=None):
    """Chain explicit 2x2 matrices along every root-to-leaf path.

    Independent of the package: amplitude(leaf) is the product over levels
    of <port| BS2 . L . P_k(node) . BS1 |0>.
    """
    n = len(x)
    out = np.zeros(1 << n, dtype=complex)
    for turns in itertools.product((0, 1), repeat=n):  # 0 = left/odd port, 1 = right/even
        amp = 1.0 + 0j
        node = 0
        for k, port in enumerate(turns):
            pa = -1.0 if x[k] == 0 else 1.0
            pb = -1.0 if y[k] == 0 else 1.0
            phase = np.diag([pa, pb]).astype(complex)
            if jitter is not None:
                phase[0, 0] *= np.exp(1j * jitter[(1 << k) - 1 + node])
            mz = BS @ (math.sqrt(1 - loss) * phase) @ BS
            amp *= mz[port, 0]
            node = 2 * node + port
        out[node] = amp
    return out


def all_bits(n):
    return list(itertools.product((0, 1), repeat=n))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
