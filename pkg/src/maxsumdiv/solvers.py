"""Vertex greedy, edge greedy, matroid local search and exhaustive search."""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError, TooLargeError, UnsupportedQualityError
from .matroids import Matroid, PartitionMatroid, UniformMatroid, extend_to_basis
from .model import Instance, ModularQuality, Solution, check_items, objective

BRUTE_FORCE_GUARD = 200_000_000


@dataclass(frozen=True)
class SolverConfig:
    """Algorithm variants and local-search controls.

    ``greedy_b_init``: ``"best_pair"`` seeds the vertex greedy with the best
    pair, ``"arbitrary_first"`` runs the plain potential greedy from the empty
    set.  ``greedy_a_tail``: for odd ``p`` the edge greedy adds either the best
    remaining item (``"best_last"``) or a seeded random one
    (``"arbitrary_last"``).  Local search accepts a swap only when it raises
    the objective by more than ``ls_epsilon`` times its current value.
    """

    greedy_b_init: str = "best_pair"
    greedy_a_tail: str = "best_last"
    ls_epsilon: float = 0.0
    ls_max_iters: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.greedy_b_init not in ("best_pair", "arbitrary_first"):
            raise InvalidInputError(f"unknown greedy_b_init {self.greedy_b_init!r}")
        if self.greedy_a_tail not in ("best_last", "arbitrary_last"):
            raise InvalidInputError(f"unknown greedy_a_tail {self.greedy_a_tail!r}")
        if not self.ls_epsilon >= 0:
            raise InvalidInputError("ls_epsilon must be >= 0")
        if self.ls_max_iters <= 0:
            raise InvalidInputError("ls_max_iters must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidInputError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        return asdict(self)


PLAIN = SolverConfig(greedy_b_init="arbitrary_first", greedy_a_tail="arbitrary_last")


def _finish(inst: Instance, order, algorithm: str, cfg: SolverConfig, **info) -> Solution:
    sol = Solution.from_items(inst, [int(u) for u in order])
    sol.info.update(algorithm=algorithm, config=cfg.to_dict(), **info)
    return sol


def _pair_scores(inst: Instance) -> np.ndarray:
    """``f({x, y}) + lam * d(x, y)`` for all pairs (diagonal is meaningless)."""
    n = inst.n
    if inst.is_modular:
        w = inst.weights
        return (w[:, None] + w[None, :]) + inst.lam * inst.dist
    f = inst.quality
    scores = np.empty((n, n))
    for x in range(n):
        for y in range(x + 1, n):
            scores[x, y] = scores[y, x] = f.value([x, y])
    return scores + inst.lam * inst.dist


def best_independent_pair(inst: Instance, matroid: Matroid | None = None):
    """Maximizer of ``f({x, y}) + lam * d(x, y)`` among independent pairs, or None."""
    n = inst.n
    if n < 2:
        return None
    if matroid is None and inst.is_modular:
        return tuple(int(u) for u in kernels.best_pair(inst.dist, inst.weights, inst.lam))
    scores = _pair_scores(inst)
    iu, ju = np.triu_indices(n, 1)
    flat = scores[iu, ju]
    for k in np.argsort(-flat, kind="stable"):
        pair = (int(iu[k]), int(ju[k]))
        if matroid is None or matroid.is_independent(pair):
            return pair
    return None


def _generic_greedy(inst: Instance, p: int, init, matroid: Matroid | None) -> list[int]:
    f = inst.quality
    order = list(init)
    gain = inst.dist[:, order].sum(axis=1) if order else np.zeros(inst.n)
    taken = set(order)
    while len(order) < p:
        best, best_score = -1, -math.inf
        for u in range(inst.n):
            if u in taken:
                continue
            if matroid is not None and not matroid.is_independent(order + [u]):
                continue
            score = 0.5 * f.gain(order, u) + inst.lam * gain[u]
            if score > best_score:
                best, best_score = u, score
        if best < 0:
            break
        order.append(best)
        taken.add(best)
        gain = gain + inst.dist[best]
    return order


def greedy_vertex(inst: Instance, p: int | None = None, cfg: SolverConfig | None = None,
                  matroid: Matroid | None = None) -> Solution:
    """Non-oblivious vertex greedy: repeatedly add the item maximizing the potential.

    The potential of ``u`` is half its quality gain plus ``lam`` times its
    distance to the current set.  Ties go to the lowest item id.  With a
    ``matroid`` only items keeping the set independent are eligible, and ``p``
    defaults to the matroid rank.
    """
    cfg = cfg or SolverConfig()
    if p is None:
        if matroid is None:
            raise InvalidInputError("p is required without a matroid")
        p = matroid.rank()
    if p < 1:
        raise InvalidInputError(f"p must be >= 1, got {p}")
    if p > inst.n:
        raise InvalidInputError(f"p={p} exceeds the {inst.n} available items")
    init = []
    if cfg.greedy_b_init == "best_pair" and p >= 2:
        pair = best_independent_pair(inst, matroid)
        init = list(pair) if pair is not None else []
    start = time.perf_counter()
    if inst.is_modular and matroid is None:
        order, _ = kernels.greedy_vertex(inst.dist, inst.weights, inst.lam, p, init)
    else:
        order = _generic_greedy(inst, p, init, matroid)
    elapsed = time.perf_counter() - start
    return _finish(inst, order, "greedy_b", cfg, solver_seconds=elapsed)


def reduced_edge_weights(inst: Instance, p: int) -> np.ndarray:
    """Dispersion weights whose pair sum over any p-set equals its objective."""
    w = inst.weights
    return inst.lam * inst.dist + (w[:, None] + w[None, :]) / (p - 1)


def greedy_edge_modular(inst: Instance, p: int, cfg: SolverConfig | None = None) -> Solution:
    """Edge greedy on the dispersion reduction of a modular instance.

    Picks the heaviest reduced edge between unselected items ``p // 2`` times;
    an odd ``p`` is completed according to ``cfg.greedy_a_tail``.
    """
    cfg = cfg or SolverConfig()
    if not inst.is_modular:
        raise UnsupportedQualityError("edge greedy needs a modular quality function")
    if p < 2:
        raise InvalidInputError(f"edge greedy needs p >= 2, got {p}")
    if p > inst.n:
        raise InvalidInputError(f"p={p} exceeds the {inst.n} available items")
    start = time.perf_counter()
    picked = [int(u) for u in kernels.greedy_edge(inst.dist, inst.weights, inst.lam, p)]
    if p % 2:
        rest = np.ones(inst.n, dtype=bool)
        rest[picked] = False
        if cfg.greedy_a_tail == "best_last":
            score = inst.weights + inst.lam * inst.dist[:, picked].sum(axis=1)
            score[~rest] = -np.inf
            picked.append(int(np.argmax(score)))
        else:
            rng = np.random.default_rng(cfg.seed)
            picked.append(int(rng.choice(np.nonzero(rest)[0])))
    elapsed = time.perf_counter() - start
    return _finish(inst, picked, "greedy_a", cfg, solver_seconds=elapsed)


def _swap_candidates(inst: Instance, S: list[int]):
    """All ``(delta, out, into)`` single swaps, best first; ties by (into, out) ascending."""
    n = inst.n
    srt = np.array(sorted(S), dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[srt] = False
    outside = np.nonzero(mask)[0]
    if len(outside) == 0 or len(srt) == 0:
        return []
    gain = inst.dist[:, srt].sum(axis=1)
    if inst.is_modular:
        w = inst.weights
        delta = (w[outside][:, None] - w[srt][None, :]) + inst.lam * (
            (gain[outside][:, None] - inst.dist[np.ix_(outside, srt)]) - gain[srt][None, :]
        )
    else:
        base = inst.quality.value(S)
        delta = np.empty((len(outside), len(srt)))
        for a, u in enumerate(outside):
            for b, v in enumerate(srt):
                rest = [x for x in S if x != v]
                delta[a, b] = (inst.quality.value(rest + [int(u)]) - base) + inst.lam * (
                    (gain[u] - inst.dist[u, v]) - gain[v]
                )
    flat = delta.ravel()
    order = np.argsort(-flat, kind="stable")
    m = len(srt)
    return [(float(flat[k]), int(srt[k % m]), int(outside[k // m])) for k in order]


def best_feasible_swap(inst: Instance, S: list[int], matroid: Matroid | None = None):
    """Best single swap ``(delta, out, into)`` keeping ``S`` independent, or None."""
    if inst.is_modular and (matroid is None or isinstance(matroid, UniformMatroid)):
        srt = np.array(sorted(S), dtype=np.int64)
        gain = np.ascontiguousarray(inst.dist[:, srt].sum(axis=1))
        delta, out, into = kernels.best_swap(inst.dist, inst.weights, inst.lam, srt, gain)
        return None if out < 0 else (float(delta), int(out), int(into))
    for delta, out, into in _swap_candidates(inst, S):
        if matroid is None or matroid.is_independent([x for x in S if x != out] + [into]):
            return delta, out, into
    return None


def local_search_matroid(inst: Instance, matroid: Matroid, cfg: SolverConfig | None = None,
                         start: list[int] | None = None, time_budget: float | None = None) -> Solution:
    """Oblivious best-improvement single-swap local search over bases of ``matroid``.

    Starts from a basis containing the best independent pair (or from
    ``start``, which must be independent).  Stops at a local optimum, after
    ``cfg.ls_max_iters`` swaps, or once ``time_budget`` seconds have elapsed;
    ``info["locally_optimal"]`` records which.
    """
    cfg = cfg or SolverConfig()
    if matroid.n != inst.n:
        raise InvalidInputError("matroid and instance have different ground sets")
    r = matroid.rank()
    clock = time.perf_counter()
    if r == 0:
        return _finish(inst, [], "local_search", cfg, iterations=0, locally_optimal=True,
                       stop_reason="rank_zero", solver_seconds=0.0)
    if start is not None:
        S = check_items(inst, start)
        if not matroid.is_independent(S):
            raise InvalidInputError("start set is not independent")
    elif r == 1:
        singles = [u for u in range(inst.n) if matroid.is_independent([u])]
        S = [max(singles, key=lambda u: (inst.quality.value([u]), -u))]
    else:
        x, y = best_independent_pair(inst, matroid)
        gain = inst.dist[:, [x, y]].sum(axis=1)
        potential = [0.5 * inst.quality.gain([x, y], u) + inst.lam * gain[u] for u in range(inst.n)]
        preference = sorted(range(inst.n), key=lambda u: (-potential[u], u))
        S = extend_to_basis(matroid, [x, y], preference)
    if len(S) < r:
        S = extend_to_basis(matroid, S)

    value = objective(inst, S)
    trace = [value]
    iterations = 0
    stop = "local_optimum"
    while True:
        if iterations >= cfg.ls_max_iters:
            stop = "iteration_cap"
            break
        if time_budget is not None and time.perf_counter() - clock >= time_budget:
            stop = "time_budget"
            break
        move = best_feasible_swap(inst, S, matroid)
        if move is None:
            break
        delta, out, into = move
        if not (delta > 0 and delta > cfg.ls_epsilon * value):
            break
        candidate = [into if x == out else x for x in S]
        new_value = objective(inst, candidate)
        if not new_value > value:
            # rounding noise; the closed-form gain was not a real improvement
            break
        S, value = candidate, new_value
        trace.append(value)
        iterations += 1
    elapsed = time.perf_counter() - clock
    return _finish(inst, S, "local_search", cfg, iterations=iterations,
                   locally_optimal=stop == "local_optimum", stop_reason=stop,
                   trace=trace, solver_seconds=elapsed)


def local_search_cardinality(inst: Instance, p: int, cfg: SolverConfig | None = None,
                             start: list[int] | None = None, time_budget: float | None = None) -> Solution:
    return local_search_matroid(inst, UniformMatroid(inst.n, p), cfg, start=start, time_budget=time_budget)


def _lex_argmax_subsets(inst: Instance, subsets):
    best, best_val = None, -math.inf
    for S in subsets:
        v = objective(inst, S)
        if v > best_val:
            best, best_val = list(S), v
    return best


def _enumerate_bases(matroid: Matroid, r: int):
    n = matroid.n

    def rec(cur, startv):
        if len(cur) == r:
            yield list(cur)
            return
        for u in range(startv, n - (r - len(cur)) + 1):
            cur.append(u)
            if matroid.is_independent(cur):
                yield from rec(cur, u + 1)
            cur.pop()

    yield from rec([], 0)


def brute_force_opt(inst: Instance, p: int | None = None, matroid: Matroid | None = None,
                    guard: int = BRUTE_FORCE_GUARD) -> Solution:
    """Exact maximizer over all p-subsets, or over all bases of ``matroid``.

    Ties resolve to the lexicographically smallest item set.
    """
    if (p is None) == (matroid is None):
        raise InvalidInputError("give exactly one of p or matroid")
    cfg = SolverConfig()
    clock = time.perf_counter()
    if matroid is not None:
        r = matroid.rank()
        if math.comb(inst.n, r) > guard:
            raise TooLargeError(f"C({inst.n}, {r}) bases exceed the guard {guard}")
        best = _lex_argmax_subsets(inst, _enumerate_bases(matroid, r))
        return _finish(inst, best or [], "brute_force", cfg, solver_seconds=time.perf_counter() - clock)
    if not 0 <= p <= inst.n:
        raise InvalidInputError(f"p must lie in [0, {inst.n}], got {p}")
    if math.comb(inst.n, p) > guard:
        raise TooLargeError(f"C({inst.n}, {p}) subsets exceed the guard {guard}")
    if inst.is_modular:
        _, best = kernels.brute_force(inst.dist, inst.weights, inst.lam, p)
        best = [int(u) for u in best]
    else:
        best = _lex_argmax_subsets(inst, itertools.combinations(range(inst.n), p))
    return _finish(inst, best, "brute_force", cfg, solver_seconds=time.perf_counter() - clock)


def appendix_fixture(r: int, ell: float):
    """Partition-matroid instance on which the vertex greedy is arbitrarily bad.

    Items: ``a = 0``, ``b = 1`` and ``c_1..c_r = 2..r+1``.  ``{a, b}`` is a
    block of capacity one, the ``c`` items are unconstrained.  Only ``a`` has
    weight (``ell + eps``); ``b`` sits at distance ``ell`` from everything and
    all other pairs at ``eps = 1 / C(r, 2)``.  ``lam = 1``.
    """
    if r < 3:
        raise InvalidInputError("the fixture needs r >= 3")
    if not ell > 0:
        raise InvalidInputError("ell must be positive")
    eps = 1.0 / math.comb(r, 2)
    n = r + 2
    dist = np.full((n, n), eps)
    dist[1, :] = ell
    dist[:, 1] = ell
    np.fill_diagonal(dist, 0.0)
    weights = np.zeros(n)
    weights[0] = ell + eps
    inst = Instance(dist, ModularQuality(weights), 1.0)
    matroid = PartitionMatroid([0, 0] + [1] * r, [1, None])
    return inst, matroid


def appendix_values(r: int, ell: float) -> tuple[float, float]:
    """Closed-form (greedy value, optimal value) for :func:`appendix_fixture`."""
    eps = 1.0 / math.comb(r, 2)
    pairs = math.comb(r, 2)
    return ell + eps + eps * pairs + r * eps, r * ell + eps * pairs
