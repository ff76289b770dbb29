"""Perturbation events, the oblivious single-swap update and the drift simulation."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, MetricViolationError, UnsupportedQualityError
from .model import TOL, Instance, ModularQuality, check_items, objective
from .solvers import SolverConfig, best_feasible_swap, brute_force_opt, greedy_vertex

EVENT_KINDS = ("weight_increase", "weight_decrease", "dist_increase", "dist_decrease")
EVENT_TYPE = dict(zip(EVENT_KINDS, ("i", "ii", "iii", "iv")))
ENVIRONMENTS = ("vperturbation", "eperturbation", "mperturbation")
ENV_ALIASES = {"vertex": "vperturbation", "edge": "eperturbation", "mixed": "mperturbation"}


@dataclass(frozen=True)
class PerturbationEvent:
    kind: str
    target: tuple
    delta: float

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise InvalidInputError(f"unknown event kind {self.kind!r}")
        if not self.delta >= 0:
            raise InvalidInputError("delta must be non-negative")
        target = tuple(int(t) for t in self.target)
        if len(target) != (1 if self.kind.startswith("weight") else 2):
            raise InvalidInputError(f"{self.kind} needs {'an item' if self.kind.startswith('weight') else 'a pair'}")
        if len(target) == 2 and target[0] == target[1]:
            raise InvalidInputError("a distance event needs two distinct items")
        object.__setattr__(self, "target", target)

    @property
    def type(self) -> str:
        return EVENT_TYPE[self.kind]

    def to_dict(self):
        return {"kind": self.kind, "target": list(self.target), "delta": self.delta}


def _triangle_breaks(d: np.ndarray, x: int, y: int, tol: float = TOL):
    """Triangles through the pair (x, y) that violate the metric."""
    others = np.ones(d.shape[0], dtype=bool)
    others[[x, y]] = False
    dxy, dxz, dyz = d[x, y], d[x, others], d[y, others]
    return (
        np.any(dxy - dxz - dyz > tol)
        or np.any(dxz - dxy - dyz > tol)
        or np.any(dyz - dxy - dxz > tol)
    )


def apply_perturbation(inst: Instance, ev: PerturbationEvent) -> Instance:
    """Return a new instance with one weight or one symmetric distance changed."""
    if not inst.is_modular:
        raise UnsupportedQualityError("perturbations are defined for modular quality only")
    check_items(inst, ev.target)
    if ev.kind.startswith("weight"):
        (u,) = ev.target
        w = inst.weights.copy()
        w[u] += ev.delta if ev.kind == "weight_increase" else -ev.delta
        if w[u] < 0:
            raise InvalidInputError(f"weight of item {u} would become negative")
        return Instance(inst.dist, ModularQuality(w), inst.lam)
    x, y = ev.target
    d = inst.dist.copy()
    new = d[x, y] + (ev.delta if ev.kind == "dist_increase" else -ev.delta)
    if new < 0:
        raise InvalidInputError(f"distance between {x} and {y} would become negative")
    d[x, y] = d[y, x] = new
    if _triangle_breaks(d, x, y):
        raise MetricViolationError(f"{ev.kind} on ({x}, {y}) breaks the triangle inequality")
    return Instance(d, inst.quality, inst.lam)


def oblivious_update(inst: Instance, S) -> tuple[list[int], float]:
    """Apply the single best swap if it strictly improves the objective.

    Returns the new item list (the swapped-in item takes the removed item's
    position) and the gain, which is zero when nothing changed.
    """
    S = check_items(inst, S)
    if not S:
        raise InvalidInputError("oblivious_update needs a nonempty solution")
    move = best_feasible_swap(inst, S)
    if move is None or not move[0] > 0:
        return S, 0.0
    _, out, into = move
    new = [into if x == out else x for x in S]
    gain = objective(inst, new) - objective(inst, S)
    if not gain > 0:
        return S, 0.0
    return new, gain


def required_updates_bound(w: float, delta: float, p: int) -> int:
    """Number of oblivious updates that restore ratio 3 after a weight decrease.

    ``w`` is the solution value before the decrease.  One update suffices when
    ``p <= 3`` or ``delta <= w / (p - 2)``; otherwise
    ``ceil(log_{(p-2)/(p-3)} (w / (w - delta)))``.
    """
    if not 0 < delta < w:
        raise InvalidInputError(f"need 0 < delta < w, got delta={delta}, w={w}")
    if p <= 3 or delta <= w / (p - 2):
        return 1
    exact = math.log(w / (w - delta)) / math.log((p - 2) / (p - 3))
    nearest = round(exact)
    if abs(exact - nearest) < 1e-12:
        return max(1, int(nearest))
    return max(1, math.ceil(exact))


def updates_for_event(inst_before: Instance, S, ev: PerturbationEvent) -> int:
    """Updates mandated after ``ev``: the decrease bound for large type (ii) hits on ``S``, else one."""
    p = len(S)
    if ev.kind != "weight_decrease" or ev.target[0] not in S or p <= 3:
        return 1
    w = objective(inst_before, S)
    if not 0 < ev.delta < w:
        return 1
    return required_updates_bound(w, ev.delta, p)


def random_event(inst: Instance, env: str, rng: np.random.Generator) -> PerturbationEvent:
    """Reset a random weight to U[0,1] or a random distance to U[1,2]."""
    env = ENV_ALIASES.get(env, env)
    if env not in ENVIRONMENTS:
        raise InvalidInputError(f"unknown environment {env!r}")
    if env == "mperturbation":
        env = "vperturbation" if rng.random() < 0.5 else "eperturbation"
    if env == "vperturbation":
        u = int(rng.integers(inst.n))
        new = float(rng.uniform(0.0, 1.0))
        old = float(inst.weights[u])
        kind = "weight_increase" if new >= old else "weight_decrease"
        return PerturbationEvent(kind, (u,), abs(new - old))
    x, y = (int(v) for v in rng.choice(inst.n, size=2, replace=False))
    new = float(rng.uniform(1.0, 2.0))
    old = float(inst.dist[x, y])
    kind = "dist_increase" if new >= old else "dist_decrease"
    return PerturbationEvent(kind, (min(x, y), max(x, y)), abs(new - old))


@dataclass
class StepRecord:
    lam: float
    env: str
    repeat: int
    step: int
    event: PerturbationEvent | None
    updates: int
    gain: float
    value_before: float
    value_after: float
    opt_value: float
    ratio: float

    def row(self):
        return [self.lam, self.env, self.repeat, self.step, self.ratio]


@dataclass
class DynamicsReport:
    records: list[StepRecord] = field(default_factory=list)

    @property
    def worst_ratio(self) -> float:
        return max((r.ratio for r in self.records), default=1.0)

    def worst_by(self, key: str = "lam") -> dict:
        out: dict = {}
        for r in self.records:
            k = getattr(r, key)
            out[k] = max(out.get(k, 1.0), r.ratio)
        return out

    def extend(self, other: "DynamicsReport") -> None:
        self.records.extend(other.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda", "env", "repeat", "step", "ratio"])
        for r in self.records:
            writer.writerow([repr(r.lam), r.env, r.repeat, r.step, repr(r.ratio)])
        return buf.getvalue()


def _ratio(opt: float, value: float) -> float:
    if opt <= 0:
        return 1.0
    return opt / value if value > 0 else math.inf


def simulate(inst0: Instance, p: int, env: str, steps: int, repeats: int, seed: int,
             cfg: SolverConfig | None = None) -> DynamicsReport:
    """Drift the instance with random events and track the maintained ratio.

    Each repeat starts from the vertex-greedy solution of ``inst0``; every
    step draws one event, applies the mandated number of oblivious updates
    and measures the ratio against a freshly computed exact optimum.  Step 0
    records the initial greedy ratio.
    """
    env = ENV_ALIASES.get(env, env)
    if env not in ENVIRONMENTS:
        raise InvalidInputError(f"unknown environment {env!r}")
    if steps < 0 or repeats < 0:
        raise InvalidInputError("steps and repeats must be non-negative")
    report = DynamicsReport()
    S0 = greedy_vertex(inst0, p, cfg).selected
    opt0 = brute_force_opt(inst0, p).objective
    v0 = objective(inst0, S0)
    for rep in range(repeats):
        rng = np.random.default_rng([seed, rep])
        inst, S = inst0, list(S0)
        report.records.append(StepRecord(inst.lam, env, rep, 0, None, 0, 0.0, v0, v0, opt0, _ratio(opt0, v0)))
        for step in range(1, steps + 1):
            ev = random_event(inst, env, rng)
            k = updates_for_event(inst, S, ev)
            inst = apply_perturbation(inst, ev)
            before = objective(inst, S)
            total = 0.0
            for _ in range(k):
                S, g = oblivious_update(inst, S)
                total += g
                if g == 0:
                    break
            after = objective(inst, S)
            opt = brute_force_opt(inst, p).objective
            report.records.append(
                StepRecord(inst.lam, env, rep, step, ev, k, total, before, after, opt, _ratio(opt, after))
            )
    return report
