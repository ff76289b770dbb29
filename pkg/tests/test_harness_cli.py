import csv
import io
import json

import numpy as np
import pytest

from maxsumdiv import InvalidInputError, PartitionMatroid, TransversalMatroid, UniformMatroid
from maxsumdiv.cli import float_grid, int_list, main
from maxsumdiv.datagen import format_letor, gen_synthetic, parse_letor
from maxsumdiv.harness import (
    TABLE_COLUMNS,
    TRIAL_COLUMNS,
    ComparisonConfig,
    TrialReport,
    approximation_factor,
    run_comparison,
)
from maxsumdiv.io import dumps_instance, load_instance, loads_instance, save_instance, solution_to_dict
from maxsumdiv.solvers import greedy_vertex, local_search_cardinality
from oracles import random_coverage


@pytest.mark.parametrize("opt, alg, expected", [(4.870, 4.311, 1.130), (4.870, 4.785, 1.018)])
def test_af_examples(opt, alg, expected):
    assert approximation_factor(opt, alg) == pytest.approx(expected, abs=5e-4)


def test_af_equal_and_invalid():
    assert approximation_factor(3.2, 3.2) == 1.0
    with pytest.raises(InvalidInputError):
        approximation_factor(1.0, 0.0)


def small_config(**kw):
    base = dict(n=14, ps=(3, 4), trials=2, algorithms=("greedy-a", "greedy-b", "ls"),
                compute_opt=True, seed=5, ls_time_factor=None)
    base.update(kw)
    return ComparisonConfig(**base)


def test_comparison_structure():
    result = run_comparison(small_config())
    assert len(result.trials) == 2 * 2 * 4
    assert [row["p"] for row in result.table] == [3, 4]
    for t in result.trials:
        assert t.error is None
        assert t.objective == pytest.approx(t.f_part + 0.2 * t.d_part)
        if t.algorithm == "opt":
            assert t.af_vs_opt is None
        else:
            assert t.af_vs_opt >= 1 - 1e-12
        assert (t.af_vs_other is not None) == (t.algorithm == "ls")
    for row in result.table:
        assert set(row) == set(TABLE_COLUMNS)
        assert 1 <= row["AF_GreedyB"] <= 2
        assert row["AF_GreedyB/GreedyA"] == pytest.approx(row["GreedyB"] / row["GreedyA"])


def test_ls_never_below_its_greedy_start():
    for t in run_comparison(small_config()).trials:
        if t.algorithm == "ls":
            assert t.af_vs_other >= 1 - 1e-12


def test_single_trial_single_algorithm():
    result = run_comparison(ComparisonConfig(n=20, ps=(5,), trials=1, algorithms=("greedy-b",)))
    assert [t.algorithm for t in result.trials] == ["greedy-b"]
    row = result.table[0]
    assert row["GreedyA"] is None and row["AF_GreedyB"] is None and row["GreedyB"] > 0


def test_unknown_algorithm_rejected():
    with pytest.raises(InvalidInputError):
        run_comparison(ComparisonConfig(n=10, ps=(3,), algorithms=("greedy-z",)))


def test_row_errors_are_captured():
    # p > n cannot be solved; the run still finishes with the error recorded
    result = run_comparison(ComparisonConfig(n=4, ps=(6,), trials=1, algorithms=("greedy-b",)))
    assert result.trials[0].error


def test_trials_csv_and_jsonl_roundtrip():
    result = run_comparison(small_config(ps=(3,), trials=1))
    rows = list(csv.DictReader(io.StringIO(result.trials_csv())))
    assert list(rows[0]) == TRIAL_COLUMNS
    for row, t in zip(rows, result.trials):
        assert float(row["objective"]) == t.objective
        assert [int(x) for x in row["selected"].split()] == t.selected
    back = [TrialReport.from_dict(json.loads(line)) for line in result.trials_jsonl().splitlines()]
    assert back == result.trials


def test_table_csv_header_frozen():
    result = run_comparison(small_config(ps=(3,), trials=1))
    assert result.table_csv().splitlines()[0] == ",".join(TABLE_COLUMNS)
    assert "AF_GreedyB" in result.table_text()


def test_instance_roundtrip_is_byte_stable(tmp_path):
    inst = gen_synthetic(9, 0.35, 4)
    for m in (None, UniformMatroid(9, 3), PartitionMatroid([0, 1, 1, 2, 0, 1, 2, 2, 0], [1, None, 2]),
              TransversalMatroid(9, [[0, 1], [2, 5, 8], [3]])):
        text = dumps_instance(inst, m)
        inst2, m2 = loads_instance(text)
        assert dumps_instance(inst2, m2) == text
        assert inst2.dist.tobytes() == inst.dist.tobytes()
        path = tmp_path / "inst.json"
        save_instance(path, inst2, m2)
        assert path.read_text() == text
        if m is not None:
            assert m2.kind == m.kind and m2.rank() == m.rank()


def test_coverage_instance_roundtrip(rng):
    inst = random_coverage(rng, 7)
    text = dumps_instance(inst)
    inst2, _ = loads_instance(text)
    assert dumps_instance(inst2) == text
    assert inst2.quality.value([0, 3, 5]) == inst.quality.value([0, 3, 5])


def test_bad_instance_documents():
    with pytest.raises(InvalidInputError):
        loads_instance("{not json")
    with pytest.raises(InvalidInputError):
        loads_instance(json.dumps({"format": "other"}))
    doc = json.loads(dumps_instance(gen_synthetic(4)))
    doc["dist"] = doc["dist"][:-1]
    with pytest.raises(InvalidInputError):
        loads_instance(json.dumps(doc))


def test_solution_schema():
    inst = gen_synthetic(12, 0.2, 0)
    doc = solution_to_dict(inst, greedy_vertex(inst, 4))
    assert set(doc) == {"algorithm", "config", "selected", "objective", "f_part", "d_part", "wall_time_ms"}
    assert doc["objective"] == pytest.approx(doc["f_part"] + 0.2 * doc["d_part"])
    ls = solution_to_dict(inst, local_search_cardinality(inst, 4))
    assert ls["locally_optimal"] is True
    json.dumps(doc)


def test_list_parsers():
    assert int_list("3..7") == [3, 4, 5, 6, 7]
    assert int_list("5:75:5")[-1] == 75 and len(int_list("5:75:5")) == 15
    assert int_list("3,5") == [3, 5]
    assert float_grid("0.1:1.0:0.1") == pytest.approx(np.linspace(0.1, 1.0, 10).tolist())
    assert float_grid("0.2,1") == [0.2, 1.0]


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_gen_solve_brute(tmp_path, capsys):
    path = tmp_path / "i.json"
    assert main(["gen", "--n", "12", "--seed", "3", "--lambda", "0.5", "--out", str(path)]) == 0
    inst, _ = load_instance(path)
    assert inst.n == 12 and inst.lam == 0.5
    results = {}
    for alg in ("greedy-b", "greedy-a", "ls", "brute"):
        code, out, _ = run_cli(["solve", str(path), "--alg", alg, "--p", "4", "--format", "json-lines"], capsys)
        assert code == 0
        results[alg] = json.loads(out)
    best = results["brute"]["objective"]
    assert all(r["objective"] <= best + 1e-12 for r in results.values())
    assert results["greedy-b"]["objective"] >= 0.5 * best
    code, out, _ = run_cli(["brute", str(path), "--p", "4", "--format", "csv"], capsys)
    assert code == 0 and out.startswith("algorithm,objective")


def test_cli_solve_uses_file_matroid(tmp_path, capsys):
    path = tmp_path / "m.json"
    save_instance(path, gen_synthetic(10, 0.2, 1), PartitionMatroid([0] * 5 + [1] * 5, [2, 1]))
    for alg in ("greedy-b", "ls", "brute"):
        code, out, _ = run_cli(["solve", str(path), "--alg", alg, "--format", "json-lines"], capsys)
        assert code == 0
        sel = json.loads(out)["selected"]
        assert len(sel) == 3 and sum(u < 5 for u in sel) == 2


def test_cli_ls_without_constraint_fails(tmp_path, capsys):
    path = tmp_path / "i.json"
    save_instance(path, gen_synthetic(6))
    code, _, err = run_cli(["solve", str(path), "--alg", "ls"], capsys)
    assert code == 1 and "error" in err


def test_cli_compare_formats(capsys):
    code, out, _ = run_cli(["compare", "--n", "14", "--p", "3..4", "--trials", "2", "--opt", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["p"] for r in rows] == ["3", "4"]
    code, out, _ = run_cli(["compare", "--n", "14", "--p", "3", "--trials", "1", "--format", "json-lines",
                            "--algs", "greedy-b", "ls", "--ls-time-factor", "0"], capsys)
    assert code == 0 and {json.loads(line)["algorithm"] for line in out.splitlines()} == {"greedy-b", "ls"}
    code, out, _ = run_cli(["compare", "--n", "14", "--p", "3", "--trials", "1", "--variant", "plain"], capsys)
    assert code == 0 and "GreedyB" in out


def test_cli_compare_row_error_exit_code(capsys):
    code, _, _ = run_cli(["compare", "--n", "4", "--p", "6", "--trials", "1"], capsys)
    assert code == 3


def test_cli_dynamics(capsys):
    code, out, _ = run_cli(["dynamics", "--n", "12", "--p", "4", "--steps", "3", "--repeats", "2",
                            "--env", "all", "--lambda-grid", "0.2,1.0", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3 * 2 * 2 * 4
    assert {r["env"] for r in rows} == {"vperturbation", "eperturbation", "mperturbation"}
    code, out, _ = run_cli(["dynamics", "--n", "12", "--p", "4", "--steps", "2", "--repeats", "1"], capsys)
    assert code == 0 and "worst_ratio" in out


def test_cli_ingest(letor_sample, tmp_path, capsys):
    out_path = tmp_path / "q.json"
    code, _, err = run_cli(["ingest", str(letor_sample), "--query", "11", "--top-n", "20",
                            "--distance-mode", "angular", "--out", str(out_path)], capsys)
    assert code == 0 and "0 triangle violations" in err
    inst, _ = load_instance(out_path)
    assert inst.n == 20
    code, _, err = run_cli(["ingest", str(letor_sample), "--query", "99"], capsys)
    assert code == 1 and "not found" in err


def test_cli_ingest_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 qid:1 1:0.5\nnonsense\n")
    code, _, err = run_cli(["ingest", str(bad)], capsys)
    assert code == 1 and "2" in err


def test_cli_bad_flags(capsys):
    assert main(["compare", "--n", "10", "--p", "x..y"]) == 2
    assert main(["solve"]) == 2
    assert main(["dynamics", "--env", "storm"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_cli_missing_file(capsys):
    code, _, err = run_cli(["solve", "/nonexistent/inst.json", "--p", "2"], capsys)
    assert code == 1 and "error" in err


def test_letor_sample_format_is_stable(letor_sample):
    groups = parse_letor(letor_sample)
    docs = groups["10"][:3]
    text = format_letor(docs)
    assert text.count("\n") == 3 and text.startswith(f"{docs[0].relevance} qid:10 1:")
