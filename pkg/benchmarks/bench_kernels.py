"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 2882] [--m 17] [--k 10] [--repeat 3]

Also checks that both backends agree on every output.
"""

import argparse
import timeit

import numpy as np

from exprclust import _fallback

try:
    from exprclust import _kernels
except ImportError:
    _kernels = None


def cases(x, k):
    centers = x[:k].copy()
    labels = _fallback.assign_nearest(x, centers)[0]
    target = -(-3 * len(x) // (4 * k))
    return {
        "assign_nearest": lambda impl: impl.assign_nearest(x, centers),
        "pairwise_sqdist": lambda impl: impl.pairwise_sqdist(x),
        "ccia_groups": lambda impl: impl.ccia_groups(x, k, target),
        "cluster_distance_sums": lambda impl: impl.cluster_distance_sums(x, labels, k),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2882)
    ap.add_argument("--m", type=int, default=17)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    x = np.random.default_rng(0).standard_normal((args.n, args.m))
    print(f"n={args.n} m={args.m} k={args.k}, best of {args.repeat}")
    print(f"{'kernel':<24}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}  agree")
    for name, call in cases(x, args.k).items():
        py = min(timeit.repeat(lambda: call(_fallback), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: call(_kernels), number=1, repeat=args.repeat))
        a, b = call(_fallback), call(_kernels)
        if isinstance(a, (tuple, list)):
            same = all(np.array_equal(p, q) for p, q in zip(a, b))
        else:
            same = np.allclose(a, b, rtol=1e-12, atol=0)
        print(f"{name:<24}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
