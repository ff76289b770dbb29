"""Experiment runner comparing the greedy algorithms, local search and the optimum."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .datagen import gen_synthetic
from .errors import InvalidInputError
from .model import TOL, objective, set_distance
from .solvers import (
    SolverConfig,
    brute_force_opt,
    greedy_edge_modular,
    greedy_vertex,
    local_search_cardinality,
)

ALGORITHMS = ("greedy-a", "greedy-b", "ls")
LABELS = {"greedy-a": "GreedyA", "greedy-b": "GreedyB", "ls": "LS", "opt": "OPT"}

# frozen column orders
TRIAL_COLUMNS = [
    "n", "p", "lambda", "trial", "algorithm", "variant", "seed", "objective", "f_part",
    "d_part", "wall_time_ms", "af_vs_opt", "af_vs_other", "selected", "error",
]
TABLE_COLUMNS = [
    "p", "OPT", "GreedyA", "GreedyB", "LS", "AF_GreedyA", "AF_GreedyB", "AF_LS",
    "AF_GreedyB/GreedyA", "AF_LS/GreedyB", "Time_GreedyA_ms", "Time_GreedyB_ms", "Time_LS_ms",
    "Time_GreedyA/GreedyB",
]


def approximation_factor(opt_value: float, alg_value: float) -> float:
    """Observed ratio ``opt_value / alg_value``."""
    if not alg_value > 0:
        raise InvalidInputError(f"algorithm value must be positive, got {alg_value}")
    return opt_value / alg_value


@dataclass
class TrialReport:
    n: int
    p: int
    lam: float
    trial: int
    algorithm: str
    variant: str
    seed: int
    objective: float = math.nan
    f_part: float = math.nan
    d_part: float = math.nan
    wall_time_ms: float = math.nan
    af_vs_opt: float | None = None
    af_vs_other: float | None = None
    selected: list = field(default_factory=list)
    error: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: d[k] for k in TRIAL_COLUMNS}

    @classmethod
    def from_dict(cls, d: dict) -> "TrialReport":
        d = dict(d)
        d["lam"] = d.pop("lambda")
        return cls(**d)


@dataclass(frozen=True)
class ComparisonConfig:
    n: int
    ps: tuple
    lam: float = 0.2
    trials: int = 5
    algorithms: tuple = ("greedy-a", "greedy-b")
    compute_opt: bool = False
    seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    # local search stops after this multiple of the Greedy B time; None runs to a local optimum
    ls_time_factor: float | None = 10.0


@dataclass
class ComparisonResult:
    trials: list[TrialReport]
    table: list[dict]

    def table_csv(self) -> str:
        return rows_to_csv(self.table, TABLE_COLUMNS)

    def trials_csv(self) -> str:
        return rows_to_csv([t.to_dict() for t in self.trials], TRIAL_COLUMNS)

    def trials_jsonl(self) -> str:
        return "".join(json.dumps(t.to_dict()) + "\n" for t in self.trials)

    def table_text(self) -> str:
        return format_table(self.table, TABLE_COLUMNS)


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return str(v)


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def format_table(rows, columns) -> str:
    cols = [c for c in columns if any(row.get(c) is not None for row in rows)]

    def cell(v):
        if v is None:
            return ""
        return f"{v:.3f}" if isinstance(v, float) else str(v)

    body = [[cell(row.get(c)) for c in cols] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in body)) if body else len(c) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in body]
    return "\n".join(lines) + "\n"


def _variant(cfg: SolverConfig, alg: str) -> str:
    if alg == "greedy-b":
        return cfg.greedy_b_init
    if alg == "greedy-a":
        return cfg.greedy_a_tail
    if alg == "ls":
        return f"eps={cfg.ls_epsilon!r}"
    return ""


def _report(inst, sol, base: dict, alg: str, cfg) -> TrialReport:
    f_part = inst.quality.value(sol.selected)
    d_part = set_distance(inst, sol.selected)
    value = objective(inst, sol.selected)
    if abs(value - (f_part + inst.lam * d_part)) > TOL * max(1.0, abs(value)):
        raise AssertionError("objective does not decompose into f_part + lambda * d_part")
    return TrialReport(
        **base, algorithm=alg, variant=_variant(cfg, alg), objective=value, f_part=f_part,
        d_part=d_part, wall_time_ms=1000.0 * sol.info["solver_seconds"], selected=list(sol.selected),
    )


def run_trial(cfg: ComparisonConfig, p: int, trial: int) -> list[TrialReport]:
    """All requested algorithms (and optionally the optimum) on one fresh instance."""
    inst_seed = [int(cfg.seed), int(p), int(trial)]
    inst = gen_synthetic(cfg.n, cfg.lam, inst_seed)
    seed_int = int(np.random.SeedSequence(inst_seed).generate_state(1, np.uint64)[0])
    base = dict(n=cfg.n, p=p, lam=cfg.lam, trial=trial, seed=seed_int)
    scfg = cfg.solver
    reports: dict[str, TrialReport] = {}
    greedy_b = None
    order = [a for a in ("greedy-b", "greedy-a", "ls") if a in cfg.algorithms]
    for alg in order:
        try:
            if alg == "greedy-b":
                sol = greedy_b = greedy_vertex(inst, p, scfg)
            elif alg == "greedy-a":
                sol = greedy_edge_modular(inst, p, scfg)
            else:
                if greedy_b is None:
                    greedy_b = greedy_vertex(inst, p, scfg)
                budget = None
                if cfg.ls_time_factor is not None:
                    budget = cfg.ls_time_factor * greedy_b.info["solver_seconds"]
                sol = local_search_cardinality(inst, p, scfg, start=greedy_b.selected, time_budget=budget)
            reports[alg] = _report(inst, sol, base, alg, scfg)
        except Exception as exc:  # row-level failure is reported, the run continues
            reports[alg] = TrialReport(**base, algorithm=alg, variant=_variant(scfg, alg), error=repr(exc))
    if cfg.compute_opt:
        try:
            sol = brute_force_opt(inst, p)
            reports["opt"] = _report(inst, sol, base, "opt", scfg)
        except Exception as exc:
            reports["opt"] = TrialReport(**base, algorithm="opt", variant="", error=repr(exc))
    opt = reports.get("opt")
    for alg, rep in reports.items():
        if rep.error is not None or alg == "opt":
            continue
        if opt is not None and opt.error is None and rep.objective > 0:
            rep.af_vs_opt = approximation_factor(opt.objective, rep.objective)
    if "ls" in reports and greedy_b is not None and reports["ls"].error is None:
        reports["ls"].af_vs_other = approximation_factor(reports["ls"].objective, greedy_b.objective)
    ordered = [reports[a] for a in order if a in reports]
    if "opt" in reports:
        ordered.append(reports["opt"])
    return ordered


def _mean(values):
    values = [v for v in values if v is not None and not math.isnan(v)]
    return float(np.mean(values)) if values else None


def _ratio(a, b):
    return a / b if a is not None and b else None


def aggregate(trials: list[TrialReport], ps) -> list[dict]:
    table = []
    for p in ps:
        rows = [t for t in trials if t.p == p and t.error is None]
        row = {"p": p}
        for alg, label in LABELS.items():
            sel = [t for t in rows if t.algorithm == alg]
            row[label] = _mean([t.objective for t in sel])
            if alg != "opt":
                row[f"Time_{label}_ms"] = _mean([t.wall_time_ms for t in sel])
        for label in ("GreedyA", "GreedyB", "LS"):
            row[f"AF_{label}"] = _ratio(row["OPT"], row[label])
        row["AF_GreedyB/GreedyA"] = _ratio(row["GreedyB"], row["GreedyA"])
        row["AF_LS/GreedyB"] = _ratio(row["LS"], row["GreedyB"])
        row["Time_GreedyA/GreedyB"] = _ratio(row["Time_GreedyA_ms"], row["Time_GreedyB_ms"])
        table.append({c: row.get(c) for c in TABLE_COLUMNS})
    return table


def run_comparison(cfg: ComparisonConfig) -> ComparisonResult:
    """Per (p, trial): a fresh synthetic instance, every algorithm, then per-p means."""
    unknown = set(cfg.algorithms) - set(ALGORITHMS)
    if unknown:
        raise InvalidInputError(f"unknown algorithms {sorted(unknown)}")
    trials = []
    for p in cfg.ps:
        for t in range(cfg.trials):
            trials.extend(run_trial(cfg, p, t))
    return ComparisonResult(trials, aggregate(trials, cfg.ps))
