"""Independent reference computations used as test oracles.

Nothing here calls the package's solvers or kernels; values are recomputed
by direct enumeration and summation.
"""
import itertools

import numpy as np

from maxsumdiv.model import CoverageQuality, Instance, ModularQuality


def phi(inst, S):
    """Objective by the textbook double loop."""
    S = list(S)
    total = 0.0
    for a in range(len(S)):
        for b in range(a + 1, len(S)):
            total += inst.dist[S[a], S[b]]
    return inst.quality.value(S) + inst.lam * total


def naive_opt_value(inst, p):
    """Max objective over all p-subsets via vectorized enumeration."""
    combos = np.array(list(itertools.combinations(range(inst.n), p)), dtype=np.int64)
    if p == 0:
        return 0.0
    pair_sum = np.zeros(len(combos))
    for a, b in itertools.combinations(range(p), 2):
        pair_sum += inst.dist[combos[:, a], combos[:, b]]
    if inst.is_modular:
        f = inst.weights[combos].sum(axis=1)
    else:
        f = np.array([inst.quality.value(c) for c in combos])
    return float((f + inst.lam * pair_sum).max())


def naive_opt_over_bases(inst, matroid):
    r = matroid.rank()
    best = -np.inf
    for S in itertools.combinations(range(inst.n), r):
        if matroid.is_independent(S):
            best = max(best, phi(inst, S))
    return best


def random_metric(rng, n, kind=None):
    """A random metric: Euclidean points, shortest-path closure, or U[1,2]."""
    kind = kind or rng.choice(["euclid", "closure", "onetwo"])
    if kind == "euclid":
        pts = rng.normal(size=(n, int(rng.integers(1, 4))))
        d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    elif kind == "closure":
        d = rng.uniform(0.1, 3.0, (n, n))
        d = np.triu(d, 1)
        d = d + d.T
        for k in range(n):
            d = np.minimum(d, d[:, [k]] + d[[k], :])
    else:
        d = np.triu(rng.uniform(1, 2, (n, n)), 1)
        d = d + d.T
    d = np.triu(d, 1)
    return d + d.T


def random_modular(rng, n, lam=None):
    lam = float(rng.choice([0.2, 1.0])) if lam is None else lam
    return Instance(random_metric(rng, n), ModularQuality(rng.uniform(0, 1, n)), lam)


def random_coverage_quality(rng, n):
    m = int(rng.integers(4, 16))
    items = [np.nonzero(rng.random(m) < 0.3)[0].tolist() for _ in range(n)]
    return CoverageQuality(rng.uniform(0, 1, m), items)


def random_coverage(rng, n, lam=None):
    lam = float(rng.choice([0.2, 1.0])) if lam is None else lam
    return Instance(random_metric(rng, n), random_coverage_quality(rng, n), lam)


def metric_slack(d, x, y):
    """Largest (increase, decrease) of d(x, y) that keeps ``d`` a metric."""
    others = [z for z in range(len(d)) if z not in (x, y)]
    if not others:
        return np.inf, d[x, y]
    up = min(d[x, z] + d[z, y] for z in others) - d[x, y]
    down = d[x, y] - max(abs(d[x, z] - d[z, y]) for z in others)
    return max(up, 0.0), max(down, 0.0)
