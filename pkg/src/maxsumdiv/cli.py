"""Command-line front end: ``maxsumdiv <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .datagen import build_cosine_instance, gen_synthetic, parse_letor
from .dynamics import ENV_ALIASES, ENVIRONMENTS, DynamicsReport, simulate
from .errors import DiversificationError
from .harness import ComparisonConfig, run_comparison
from .io import dumps_instance, load_instance, solution_to_dict
from .matroids import UniformMatroid
from .model import validate_metric
from .solvers import (
    PLAIN,
    SolverConfig,
    brute_force_opt,
    greedy_edge_modular,
    greedy_vertex,
    local_search_matroid,
)

log = logging.getLogger("maxsumdiv")


def int_list(text: str) -> list[int]:
    """``3..7``, ``5:75:5`` (inclusive) or ``3,5,9``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        if ":" in text:
            lo, hi, step = (int(x) for x in text.split(":"))
            return list(range(lo, hi + 1, step))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def float_grid(text: str) -> list[float]:
    """``0.1:1.0:0.1`` (inclusive) or ``0.2,1.0``."""
    try:
        if ":" in text:
            lo, hi, step = (float(x) for x in text.split(":"))
            count = int(round((hi - lo) / step)) + 1
            return [round(lo + i * step, 12) for i in range(count)]
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float grid {text!r}") from None


def _solver_config(args) -> SolverConfig:
    base = PLAIN if args.variant == "plain" else SolverConfig()
    return SolverConfig(
        greedy_b_init=base.greedy_b_init,
        greedy_a_tail=base.greedy_a_tail,
        ls_epsilon=args.ls_epsilon,
        ls_max_iters=args.ls_max_iters,
        seed=args.seed,
    )


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    inst = gen_synthetic(args.n, 0.2 if args.lam is None else args.lam, args.seed)
    _emit(args, dumps_instance(inst))


def _load(args):
    inst, matroid = load_instance(args.instance)
    if args.lam is not None:
        inst = inst.with_lambda(args.lam)
    return inst, matroid


def _print_solution(args, inst, sol):
    doc = solution_to_dict(inst, sol)
    if args.format == "json-lines":
        _emit(args, json.dumps(doc) + "\n")
    elif args.format == "csv":
        header = "algorithm,objective,f_part,d_part,wall_time_ms,selected\n"
        row = (f"{doc['algorithm']},{doc['objective']!r},{doc['f_part']!r},{doc['d_part']!r},"
               f"{doc['wall_time_ms']!r},{' '.join(map(str, doc['selected']))}\n")
        _emit(args, header + row)
    else:
        lines = [f"{k}: {v}" for k, v in doc.items() if k != "config"]
        _emit(args, "\n".join(lines) + "\n")


def cmd_solve(args):
    inst, matroid = _load(args)
    cfg = _solver_config(args)
    if args.alg == "greedy-b":
        sol = greedy_vertex(inst, args.p, cfg, matroid=matroid if args.p is None else None)
    elif args.alg == "greedy-a":
        sol = greedy_edge_modular(inst, args.p, cfg)
    elif args.alg == "ls":
        m = matroid if args.p is None else UniformMatroid(inst.n, args.p)
        if m is None:
            raise DiversificationError("local search needs --p or a matroid in the instance file")
        sol = local_search_matroid(inst, m, cfg)
    else:
        sol = brute_force_opt(inst, args.p, matroid if args.p is None else None)
    _print_solution(args, inst, sol)


def cmd_brute(args):
    inst, matroid = _load(args)
    sol = brute_force_opt(inst, args.p, matroid if args.p is None else None)
    _print_solution(args, inst, sol)


def cmd_compare(args):
    cfg = ComparisonConfig(
        n=args.n,
        ps=tuple(args.p),
        lam=0.2 if args.lam is None else args.lam,
        trials=args.trials,
        algorithms=tuple(args.algs),
        compute_opt=args.opt,
        seed=args.seed,
        solver=_solver_config(args),
        ls_time_factor=None if args.ls_time_factor <= 0 else args.ls_time_factor,
    )
    result = run_comparison(cfg)
    if args.format == "csv":
        _emit(args, result.table_csv())
    elif args.format == "json-lines":
        _emit(args, result.trials_jsonl())
    else:
        _emit(args, result.table_text())
    if any(t.error for t in result.trials):
        return 3
    return 0


def cmd_dynamics(args):
    lams = args.lambda_grid or [0.2 if args.lam is None else args.lam]
    base = gen_synthetic(args.n, lams[0], args.seed)
    envs = list(ENVIRONMENTS) if args.env == "all" else [args.env]
    report = DynamicsReport()
    for env in envs:
        for lam in lams:
            report.extend(simulate(base.with_lambda(lam), args.p, env, args.steps, args.repeats, args.seed))
    if args.format == "json-lines":
        lines = []
        for r in report.records:
            lines.append(json.dumps({
                "lambda": r.lam, "env": r.env, "repeat": r.repeat, "step": r.step,
                "event": r.event.to_dict() if r.event else None, "updates": r.updates,
                "gain": r.gain, "value_before": r.value_before, "value_after": r.value_after,
                "opt": r.opt_value, "ratio": r.ratio,
            }))
        _emit(args, "\n".join(lines) + "\n")
    elif args.format == "csv":
        _emit(args, report.to_csv())
    else:
        worst = {}
        for r in report.records:
            key = (r.env, r.lam)
            worst[key] = max(worst.get(key, 1.0), r.ratio)
        text = "env            lambda  worst_ratio\n"
        text += "".join(f"{e:<14} {l:6.2f}  {w:.4f}\n" for (e, l), w in worst.items())
        _emit(args, text)


def cmd_ingest(args):
    groups = parse_letor(args.letor)
    if not groups:
        raise DiversificationError(f"{args.letor} contains no documents")
    qid = args.query if args.query is not None else next(iter(groups))
    if qid not in groups:
        raise DiversificationError(f"query {qid!r} not found; available: {', '.join(groups)}")
    inst = build_cosine_instance(
        groups[qid], args.top_n, 0.2 if args.lam is None else args.lam, args.distance_mode, args.normalize
    )
    report = validate_metric(inst.dist, limit=10_000)
    print(
        f"query {qid}: {inst.n} documents, {len(report.triangle_violations)} triangle violations"
        + (" (capped)" if len(report.triangle_violations) >= 10_000 else ""),
        file=sys.stderr,
    )
    _emit(args, dumps_instance(inst))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument("--lambda", dest="lam", type=float, default=None, help="trade-off weight")
    common.add_argument("--format", choices=("table", "csv", "json-lines"), default="table")
    common.add_argument("--out", help="write output here instead of stdout")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--variant", choices=("improved", "plain"), default="improved",
                        help="improved: best-pair start / best last item; plain: pseudocode variants")
    solver.add_argument("--ls-epsilon", type=float, default=0.0)
    solver.add_argument("--ls-max-iters", type=int, default=100_000)

    parser = argparse.ArgumentParser(prog="maxsumdiv", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a synthetic instance")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", parents=[common, solver], help="run an algorithm on an instance file")
    p.add_argument("instance")
    p.add_argument("--alg", choices=("greedy-b", "greedy-a", "ls", "brute"), default="greedy-b")
    p.add_argument("--p", type=int, help="cardinality; omit to use the file's matroid")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("brute", parents=[common], help="exact optimum by enumeration")
    p.add_argument("instance")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("compare", parents=[common, solver], help="greedy / local search comparison tables")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int_list, required=True, help="e.g. 3..7, 5:75:5 or 3,5")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--opt", action="store_true", help="also compute the exact optimum")
    p.add_argument("--algs", nargs="+", choices=("greedy-a", "greedy-b", "ls"),
                   default=["greedy-a", "greedy-b"])
    p.add_argument("--ls-time-factor", type=float, default=10.0,
                   help="stop local search after this multiple of the Greedy B time; <= 0 disables")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dynamics", parents=[common], help="perturbation simulation with oblivious updates")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--env", choices=sorted(set(ENVIRONMENTS) | set(ENV_ALIASES) | {"all"}), default="mixed")
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--repeats", type=int, default=100)
    p.add_argument("--lambda-grid", type=float_grid, help="e.g. 0.1:1.0:0.1")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("ingest", parents=[common], help="ranked-document file to instance")
    p.add_argument("letor")
    p.add_argument("--query", help="query id (default: first in file)")
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--distance-mode", choices=("one_minus_cosine", "angular"), default="one_minus_cosine")
    p.add_argument("--normalize", choices=("none", "minmax"), default="none")
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return int(args.func(args) or 0)
    except (DiversificationError, OSError) as exc:
        print(f"maxsumdiv: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
