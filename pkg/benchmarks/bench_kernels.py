"""Compare the compiled kernels with the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per (kernel, size) with the best-of-``repeat`` time of each
backend and the speedup.  Both backends must return the same answer; a
mismatch aborts the run.
"""
import argparse
import sys
import time

import numpy as np

from maxsumdiv import _pykernels, kernels
from maxsumdiv.datagen import gen_synthetic


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        clock = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - clock)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases():
    for n, p in ((500, 10), (2000, 50)):
        inst = gen_synthetic(n, 0.2, n)
        d, w, lam = inst.dist, inst.weights, inst.lam
        yield f"greedy_vertex n={n} p={p}", lambda b, d=d, w=w, lam=lam, p=p: b.greedy_vertex(d, w, lam, p, [])
        yield f"best_pair n={n}", lambda b, d=d, w=w, lam=lam: b.best_pair(d, w, lam)
        yield f"greedy_edge n={n} p={p}", lambda b, d=d, w=w, lam=lam, p=p: b.greedy_edge(d, w, lam, p)
        sel = np.arange(p, dtype=np.int64)
        gain = np.ascontiguousarray(d[:, sel].sum(axis=1))
        yield (f"best_swap n={n} p={p}",
               lambda b, d=d, w=w, lam=lam, sel=sel, gain=gain: b.best_swap(d, w, lam, sel, gain))
    for n, p in ((30, 5), (40, 5)):
        inst = gen_synthetic(n, 0.2, n)
        yield (f"brute_force n={n} p={p}",
               lambda b, inst=inst, p=p: b.brute_force(inst.dist, inst.weights, inst.lam, p))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    compiled = kernels.compiled_backend
    if compiled is None:
        print("compiled extension not available; build with `pip install --no-build-isolation -e .`")
        return 1
    print(f"{'kernel':<28} {'compiled ms':>12} {'python ms':>12} {'speedup':>9}")
    for name, call in cases():
        t_c, out_c = best_of(lambda: call(compiled), args.repeat)
        t_p, out_p = best_of(lambda: call(_pykernels), max(1, args.repeat // 2))
        if not same(out_c, out_p):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<28} {1e3 * t_c:12.3f} {1e3 * t_p:12.3f} {t_p / t_c:9.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
