"""Compare the compiled and pure-Python kernels on the hot loops.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import math
import timeit

import numpy as np

from gsdsim import _pykernels

try:
    from gsdsim import _ckernels
except ImportError:
    _ckernels = None


def cases(impl):
    rng = np.random.default_rng(0)
    keep = math.sqrt(0.985)
    jitter14 = rng.uniform(-0.05, 0.05, (1 << 14) - 1)
    owner10 = rng.integers(0, 2, 1 << 10).astype(np.uint8)
    owner11 = rng.integers(0, 2, 1 << 11).astype(np.uint8)

    def all_pairs_ideal(n=7):
        for x in range(1 << n):
            for y in range(1 << n):
                impl.propagate_amplitudes(n, x, y, 1.0, None)

    return {
        "ideal propagation, all 4^7 pairs": all_pairs_ideal,
        "jittered propagation, n=14 full front": lambda: impl.propagate_amplitudes(14, 0x1A2B, 0x0F0F, keep, jitter14),
        "observation entropy, n=10 (4^10 pairs)": lambda: impl.conditional_observation_entropy(10, owner10, 1),
        "click counts, n=11 (4^11 pairs)": lambda: impl.agent_click_counts(11, owner11),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the fallback only")

    results = {}
    for name, impl in backends.items():
        for label, fn in cases(impl).items():
            results[(label, name)] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    labels = list(cases(_pykernels))
    print(f"{'kernel':<42}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for label in labels:
        py = results[(label, "python")]
        cy = results.get((label, "cython"))
        if cy is None:
            print(f"{label:<42}{py:>12.4f}{'-':>12}{'-':>10}")
        else:
            print(f"{label:<42}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
