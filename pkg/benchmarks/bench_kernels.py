"""Time the numba and numpy implementations of each kernel.

    python benchmarks/bench_kernels.py [--repeat 5]

Compilation happens before timing.  The numpy Euler path is a closed-form
power and is only included as a reference point.
"""

import argparse
import timeit

import numpy as np

from forgetfulness import _kernels


def cases():
    rng = np.random.default_rng(0)
    times = rng.uniform(0, 150 * 86400.0, 1_000_000)
    tag_index = rng.integers(0, 50, times.size)
    yield "euler (1e6 steps)", (1.0, 0.5, 10.0 / 1_000_000, 1_000_000), _kernels.euler_jit, _kernels.euler_numpy
    yield "bin_counts (1e6 events)", (times, 0.0, 7 * 86400.0, 22), _kernels.bin_counts_jit, _kernels.bin_counts_numpy
    yield (
        "decayed_weights (1e6 events)",
        (times, tag_index, 50, 1e-6, 150 * 86400.0),
        _kernels.decayed_weights_jit,
        _kernels.decayed_weights_numpy,
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    _kernels.warm_up()
    print(f"numba available: {_kernels.HAVE_NUMBA}; active path: {'numba' if _kernels.USE_JIT else 'numpy'}")
    print(f"{'kernel':<30}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call_args, jit, ref in cases():
        t_jit = min(timeit.repeat(lambda: jit(*call_args), number=1, repeat=args.repeat)) * 1e3
        t_ref = min(timeit.repeat(lambda: ref(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<30}{t_jit:>12.2f}{t_ref:>12.2f}{t_ref / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
