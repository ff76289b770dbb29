"""Objective, marginal gains and metric checks for max-sum diversification.

The objective of a set ``S`` is ``f(S) + lam * d(S)`` where ``d(S)`` sums the
distance over every unordered pair inside ``S``.  Quality functions are either
modular (per-item weights) or weighted coverage (monotone submodular).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError

TOL = 1e-9


class QualityFunction:
    """Normalized monotone set function over items ``0..n-1``.

    Subclasses implement :meth:`value`; :meth:`gain` falls back to a value
    difference.  Only :class:`ModularQuality` and :class:`CoverageQuality`
    can be serialized, but any subclass works with the generic solver paths.
    """

    kind = "oracle"
    n: int

    def value(self, S: Iterable[int]) -> float:
        raise NotImplementedError

    def gain(self, S: Sequence[int], u: int) -> float:
        """``f(S + u) - f(S)``."""
        S = list(S)
        return self.value(S + [u]) - self.value(S)

    @property
    def is_modular(self) -> bool:
        return False


class ModularQuality(QualityFunction):
    kind = "modular"

    def __init__(self, weights):
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 1:
            raise InvalidInputError("weights must be a 1-d sequence")
        if np.any(~np.isfinite(w)) or np.any(w < 0):
            raise InvalidInputError("weights must be finite and non-negative")
        w.setflags(write=False)
        self.weights = w
        self.n = len(w)

    @property
    def is_modular(self) -> bool:
        return True

    def value(self, S):
        total = 0.0
        for u in S:
            total += self.weights[u]
        return float(total)

    def gain(self, S, u):
        return float(self.weights[u])

    def __eq__(self, other):
        return isinstance(other, ModularQuality) and np.array_equal(self.weights, other.weights)

    def __repr__(self):
        return f"ModularQuality(n={self.n})"


class CoverageQuality(QualityFunction):
    """Weighted coverage: ``f(S)`` is the total weight of elements covered by ``S``.

    Each item covers a subset of ground elements.  Covered sets are kept as
    Python integer bitsets, so unions are exact and order-independent.
    """

    kind = "coverage"

    def __init__(self, element_weights, item_elements):
        ew = np.array(element_weights, dtype=np.float64)
        if ew.ndim != 1 or np.any(~np.isfinite(ew)) or np.any(ew < 0):
            raise InvalidInputError("element weights must be finite and non-negative")
        ew.setflags(write=False)
        self.element_weights = ew
        self.item_elements = [tuple(sorted(set(int(e) for e in els))) for els in item_elements]
        for els in self.item_elements:
            if els and (els[0] < 0 or els[-1] >= len(ew)):
                raise InvalidInputError("item covers an unknown ground element")
        self.masks = [sum(1 << e for e in els) for els in self.item_elements]
        self.n = len(self.masks)
        self._ew = ew.tolist()

    def mask_weight(self, mask: int) -> float:
        total = 0.0
        e = 0
        while mask:
            if mask & 1:
                total += self._ew[e]
            mask >>= 1
            e += 1
        return total

    def covered(self, S) -> int:
        mask = 0
        for u in S:
            mask |= self.masks[u]
        return mask

    def value(self, S):
        return self.mask_weight(self.covered(S))

    def gain(self, S, u):
        return self.mask_weight(self.masks[u] & ~self.covered(S))

    def __eq__(self, other):
        return (
            isinstance(other, CoverageQuality)
            and np.array_equal(self.element_weights, other.element_weights)
            and self.item_elements == other.item_elements
        )

    def __repr__(self):
        return f"CoverageQuality(n={self.n}, elements={len(self.element_weights)})"


@dataclass(frozen=True, eq=False)
class Instance:
    """Items ``0..n-1`` with a distance matrix, a quality function and ``lam``.

    ``dist`` is stored dense, symmetric, with a zero diagonal.  The triangle
    inequality is *not* enforced here; see :func:`validate_metric`.
    """

    dist: np.ndarray
    quality: QualityFunction
    lam: float = 0.2

    def __post_init__(self):
        d = np.array(self.dist, dtype=np.float64, order="C")
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InvalidInputError(f"distance matrix must be square, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise InvalidInputError("distances must be finite")
        if np.any(d < 0):
            raise InvalidInputError("distances must be non-negative")
        if np.any(np.diag(d) != 0):
            raise InvalidInputError("distance matrix must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise InvalidInputError("distance matrix must be symmetric")
        if self.quality.n != d.shape[0]:
            raise InvalidInputError(
                f"quality function covers {self.quality.n} items, distances cover {d.shape[0]}"
            )
        lam = float(self.lam)
        if not np.isfinite(lam) or lam < 0:
            raise InvalidInputError("lambda must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def is_modular(self) -> bool:
        return self.quality.is_modular

    @property
    def weights(self) -> np.ndarray:
        from .errors import UnsupportedQualityError

        if not self.quality.is_modular:
            raise UnsupportedQualityError(f"{self.quality.kind} quality has no per-item weights")
        return self.quality.weights

    def with_lambda(self, lam: float) -> "Instance":
        return Instance(self.dist, self.quality, lam)


def check_items(inst: Instance, S: Iterable[int]) -> list[int]:
    """Return ``S`` as a list of ints, rejecting unknown or repeated ids."""
    items = []
    for u in S:
        if isinstance(u, (bool, np.bool_)) or not isinstance(u, (int, np.integer)):
            raise InvalidInputError(f"item id {u!r} is not an integer")
        u = int(u)
        if not 0 <= u < inst.n:
            raise InvalidInputError(f"item id {u} out of range [0, {inst.n})")
        items.append(u)
    if len(set(items)) != len(items):
        raise InvalidInputError("item set contains duplicates")
    return items


def set_distance(inst: Instance, S: Iterable[int]) -> float:
    """Sum of ``d(u, v)`` over unordered pairs inside ``S``."""
    S = check_items(inst, S)
    if len(S) < 2:
        return 0.0
    idx = np.array(S)
    return float(inst.dist[np.ix_(idx, idx)].sum() / 2.0)


def cross_distance(inst: Instance, S: Iterable[int], T: Iterable[int]) -> float:
    """Sum of ``d(u, v)`` over ``u`` in ``S`` and ``v`` in ``T`` (disjoint)."""
    S = check_items(inst, S)
    T = check_items(inst, T)
    if set(S) & set(T):
        raise InvalidInputError("cross_distance requires disjoint sets")
    if not S or not T:
        return 0.0
    return float(inst.dist[np.ix_(np.array(S), np.array(T))].sum())


def objective(inst: Instance, S: Iterable[int]) -> float:
    S = check_items(inst, S)
    return inst.quality.value(S) + inst.lam * set_distance(inst, S)


def _marginal_parts(inst, S, u):
    S = check_items(inst, S)
    (u,) = check_items(inst, [u])
    if u in S:
        raise InvalidInputError(f"item {u} is already in the set")
    f_gain = inst.quality.gain(S, u)
    d_gain = float(inst.dist[u, S].sum()) if S else 0.0
    return f_gain, d_gain


def marginal_phi(inst: Instance, S: Iterable[int], u: int) -> float:
    """Objective gain of adding ``u``: ``f_u(S) + lam * d_u(S)``."""
    f_gain, d_gain = _marginal_parts(inst, S, u)
    return f_gain + inst.lam * d_gain


def marginal_phi_prime(inst: Instance, S: Iterable[int], u: int) -> float:
    """Greedy potential: half the quality gain plus the full distance gain."""
    f_gain, d_gain = _marginal_parts(inst, S, u)
    return 0.5 * f_gain + inst.lam * d_gain


@dataclass
class Solution:
    """A selected item sequence with its objective and per-item distance cache.

    ``dist_gain[u]`` always equals the total distance from ``u`` to the
    selected items.  Mutate only through :meth:`add`, :meth:`swap` or
    :func:`update_gain_cache`.
    """

    selected: list[int]
    objective: float
    dist_gain: np.ndarray
    info: dict = field(default_factory=dict)

    @classmethod
    def empty(cls, inst: Instance) -> "Solution":
        return cls([], 0.0, np.zeros(inst.n))

    @classmethod
    def from_items(cls, inst: Instance, S: Iterable[int], **info) -> "Solution":
        S = check_items(inst, S)
        if S:
            gain = inst.dist[:, S].sum(axis=1)
        else:
            gain = np.zeros(inst.n)
        return cls(S, objective(inst, S), np.ascontiguousarray(gain, dtype=np.float64), dict(info))

    def add(self, inst: Instance, u: int) -> "Solution":
        self.objective += marginal_phi(inst, self.selected, u)
        self.selected.append(int(u))
        return update_gain_cache(self, inst, u)

    def swap(self, inst: Instance, out: int, into: int) -> "Solution":
        """Replace ``out`` by ``into``; objective is recomputed from scratch."""
        pos = self.selected.index(out)
        if into in self.selected:
            raise InvalidInputError(f"item {into} is already selected")
        self.selected[pos] = int(into)
        self.dist_gain += inst.dist[into] - inst.dist[out]
        self.objective = objective(inst, self.selected)
        return self

    @property
    def items(self) -> frozenset:
        return frozenset(self.selected)

    def __len__(self):
        return len(self.selected)


def update_gain_cache(sol: Solution, inst: Instance, added: int) -> Solution:
    """Fold the just-appended item ``added`` into ``sol.dist_gain`` in O(n)."""
    assert sol.selected.count(added) == 1, f"item {added} appended more than once"
    sol.dist_gain += inst.dist[added]
    return sol


class TriangleViolation(NamedTuple):
    x: int
    y: int
    z: int
    slack: float


@dataclass
class MetricReport:
    symmetric: bool
    nonneg: bool
    zero_diagonal: bool
    triangle_violations: list[TriangleViolation]

    @property
    def ok(self) -> bool:
        return self.symmetric and self.nonneg and self.zero_diagonal and not self.triangle_violations


def validate_metric(dist, tol: float = TOL, limit: int | None = None) -> MetricReport:
    """Exhaustive O(n^3) metric check.

    A triple ``(x, y, z)`` violates the triangle inequality when
    ``d(x, z) - d(x, y) - d(y, z) > tol``; the excess is reported as slack.
    ``limit`` caps the number of violations collected.
    """
    d = np.asarray(dist, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InvalidInputError(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    symmetric = bool(np.allclose(d, d.T, rtol=tol, atol=tol))
    nonneg = bool(np.all(d >= 0))
    zero_diag = bool(np.all(np.abs(np.diag(d)) <= tol))
    violations: list[TriangleViolation] = []
    for y in range(n):
        # slack[x, z] = d(x, z) - d(x, y) - d(y, z)
        slack = d - d[:, y][:, None] - d[y, :][None, :]
        xs, zs = np.nonzero(slack > tol)
        for x, z in zip(xs.tolist(), zs.tolist()):
            if x == y or z == y:
                continue
            violations.append(TriangleViolation(x, y, z, float(slack[x, z])))
            if limit is not None and len(violations) >= limit:
                return MetricReport(symmetric, nonneg, zero_diag, violations)
    return MetricReport(symmetric, nonneg, zero_diag, violations)


def lemma_rrt_gap(inst: Instance, X: Iterable[int], Y: Iterable[int]) -> float:
    """``(|X| - 1) * d(X, Y) - |Y| * d(X)``; non-negative for any metric."""
    X = check_items(inst, X)
    Y = check_items(inst, Y)
    if not X or not Y:
        raise InvalidInputError("X and Y must be nonempty")
    if set(X) & set(Y):
        raise InvalidInputError("X and Y must be disjoint")
    return (len(X) - 1) * cross_distance(inst, X, Y) - len(Y) * set_distance(inst, X)
