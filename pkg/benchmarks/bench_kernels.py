"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from hyperlat import _pykernels

try:
    from hyperlat import _kernels
except ImportError:
    _kernels = None


def workloads():
    rng = random.Random(1)
    pairs = [(rng.randint(-10**6, 10**6), rng.randint(1, 10**6)) for _ in range(2000)]
    discs = [-199999, -99995, -40003, -20003]
    mats = [[[rng.randint(-60, 60) for _ in range(5)] for _ in range(5)] for _ in range(200)]
    return {
        "kronecker x2000": lambda k: [k.kronecker(a, n) for a, n in pairs],
        "class number |D|~1e5": lambda k: [k.dirichlet_class_number(D) for D in discs],
        "reduced forms |D|~2e4": lambda k: k.reduced_form_count(-20003),
        "smith 5x5 x200": lambda k: [k.smith_invariants(m) for m in mats],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'workload':26s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for name, fn in workloads().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:26s} {py:10.2f} {'-':>12s} {'-':>8s}")
            continue
        assert fn(_kernels) == fn(_pykernels), name
        c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:26s} {py:10.2f} {c:12.2f} {py / c:7.1f}x")


if __name__ == "__main__":
    main()
