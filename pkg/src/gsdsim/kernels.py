"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module.  Set ``GSDSIM_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pykernels

if os.environ.get("GSDSIM_PURE_PYTHON") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

propagate_amplitudes = _impl.propagate_amplitudes
conditional_observation_entropy = _impl.conditional_observation_entropy
agent_click_counts = _impl.agent_click_counts

__all__ = [
    "BACKEND",
    "propagate_amplitudes",
    "conditional_observation_entropy",
    "agent_click_counts",
]
