"""Independence oracles for uniform, partition and transversal matroids."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InternalInvariantError, InvalidInputError


def augmenting_matching(left: Sequence, adj, match_right: dict | None = None) -> dict | None:
    """Match every vertex of ``left`` via simple augmenting paths (Kuhn).

    ``adj[x]`` lists the right-hand neighbours of ``x``.  Returns the mapping
    right -> left, or ``None`` when some left vertex cannot be matched.
    ``match_right`` may carry a partial matching that is extended in place.
    """
    match_right = {} if match_right is None else match_right

    def augment(x, seen):
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_right or augment(match_right[y], seen):
                match_right[y] = x
                return True
        return False

    for x in left:
        if not augment(x, set()):
            return None
    return match_right


def maximum_matching_size(left: Sequence, adj) -> int:
    # a failed augmentation leaves the matching untouched
    match_right: dict = {}
    return sum(augmenting_matching([x], adj, match_right) is not None for x in left)


class Matroid:
    """Base class; subclasses define :meth:`is_independent` and :meth:`rank`."""

    kind = "abstract"
    n: int

    def _check(self, S) -> list[int]:
        items = [int(u) for u in S]
        for u in items:
            if not 0 <= u < self.n:
                raise InvalidInputError(f"item {u} is not in the ground set of size {self.n}")
        if len(set(items)) != len(items):
            raise InvalidInputError("item set contains duplicates")
        return items

    def is_independent(self, S: Iterable[int]) -> bool:
        raise NotImplementedError

    def rank(self) -> int:
        raise NotImplementedError

    def is_basis(self, S: Iterable[int]) -> bool:
        S = self._check(S)
        return len(S) == self.rank() and self.is_independent(S)


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, n: int, p: int):
        if n < 0 or p < 0:
            raise InvalidInputError("n and p must be non-negative")
        self.n, self.p = int(n), int(p)

    def is_independent(self, S):
        return len(self._check(S)) <= self.p

    def rank(self):
        return min(self.p, self.n)

    def payload(self):
        return {"p": self.p}

    def __repr__(self):
        return f"UniformMatroid(n={self.n}, p={self.p})"


class PartitionMatroid(Matroid):
    """``blocks[u]`` is the block of item ``u``; ``caps[b]`` its capacity (None = unbounded)."""

    kind = "partition"

    def __init__(self, blocks: Sequence[int], caps: Sequence[int | None]):
        self.blocks = [int(b) for b in blocks]
        self.caps = [None if c is None or c == math.inf else int(c) for c in caps]
        self.n = len(self.blocks)
        for b in self.blocks:
            if not 0 <= b < len(self.caps):
                raise InvalidInputError(f"block id {b} has no capacity")
        if any(c is not None and c < 0 for c in self.caps):
            raise InvalidInputError("capacities must be non-negative")

    def is_independent(self, S):
        counts = [0] * len(self.caps)
        for u in self._check(S):
            b = self.blocks[u]
            counts[b] += 1
            if self.caps[b] is not None and counts[b] > self.caps[b]:
                return False
        return True

    def rank(self):
        sizes = [0] * len(self.caps)
        for b in self.blocks:
            sizes[b] += 1
        return sum(s if c is None else min(s, c) for s, c in zip(sizes, self.caps))

    def payload(self):
        return {"blocks": self.blocks, "caps": self.caps}

    def __repr__(self):
        return f"PartitionMatroid(n={self.n}, blocks={len(self.caps)})"


class TransversalMatroid(Matroid):
    """Independent sets are partial transversals of ``collection``."""

    kind = "transversal"

    def __init__(self, n: int, collection: Sequence[Iterable[int]]):
        self.n = int(n)
        self.collection = [sorted(set(int(u) for u in c)) for c in collection]
        self._adj: dict[int, list[int]] = {u: [] for u in range(self.n)}
        for j, c in enumerate(self.collection):
            for u in c:
                if not 0 <= u < self.n:
                    raise InvalidInputError(f"collection set {j} names unknown item {u}")
                self._adj[u].append(j)

    def is_independent(self, S):
        S = self._check(S)
        if len(S) > len(self.collection):
            return False
        return augmenting_matching(S, self._adj) is not None

    def rank(self):
        return maximum_matching_size(range(self.n), self._adj)

    def payload(self):
        return {"collection": self.collection}

    def __repr__(self):
        return f"TransversalMatroid(n={self.n}, sets={len(self.collection)})"


def is_independent(m: Matroid, S: Iterable[int]) -> bool:
    return m.is_independent(S)


def rank(m: Matroid) -> int:
    return m.rank()


def extend_to_basis(m: Matroid, S: Iterable[int], preference: Sequence[int] | None = None) -> list[int]:
    """Grow the independent set ``S`` to a basis, trying items in ``preference`` order.

    Items missing from ``preference`` are tried afterwards by ascending id.
    """
    S = m._check(S)
    if not m.is_independent(S):
        raise InvalidInputError("cannot extend a dependent set")
    order = list(preference) if preference is not None else []
    seen = set(order)
    order += [u for u in range(m.n) if u not in seen]
    target = m.rank()
    basis = list(S)
    chosen = set(basis)
    for u in order:
        if len(basis) >= target:
            break
        if u in chosen:
            continue
        if m.is_independent(basis + [u]):
            basis.append(u)
            chosen.add(u)
    return basis


@dataclass
class ExchangeMap:
    """Bijection ``b -> c`` from ``S - O`` onto ``O - S`` with every ``S - b + c`` independent."""

    pairs: dict[int, int]

    def __len__(self):
        return len(self.pairs)

    def items(self):
        return self.pairs.items()


def exchange_bijection(m: Matroid, S: Iterable[int], O: Iterable[int]) -> ExchangeMap:
    S = m._check(S)
    O = m._check(O)
    if not (m.is_basis(S) and m.is_basis(O)):
        raise InvalidInputError("exchange_bijection needs two bases")
    B = sorted(set(S) - set(O))
    C = sorted(set(O) - set(S))
    adj = {}
    for b in B:
        rest = [u for u in S if u != b]
        adj[b] = [c for c in C if m.is_independent(rest + [c])]
    match = augmenting_matching(B, adj)
    if match is None:
        raise InternalInvariantError(f"no exchange bijection between bases {S} and {O} of {m!r}")
    return ExchangeMap({b: c for c, b in sorted(match.items(), key=lambda kv: kv[1])})


def matroid_from_dict(n: int, doc: dict) -> Matroid:
    kind = doc.get("kind")
    if kind == "uniform":
        return UniformMatroid(n, doc["p"])
    if kind == "partition":
        return PartitionMatroid(doc["blocks"], doc["caps"])
    if kind == "transversal":
        return TransversalMatroid(n, doc["collection"])
    raise InvalidInputError(f"unknown matroid kind {kind!r}")


def matroid_to_dict(m: Matroid) -> dict:
    return {"kind": m.kind, **m.payload()}
