import logging

import numpy as np
import pytest

from maxsumdiv import validate_metric
from maxsumdiv.datagen import (
    DocumentRecord,
    build_cosine_instance,
    cosine_distances,
    format_letor,
    gen_synthetic,
    minmax_normalize,
    parse_letor,
    parse_letor_text,
)
from maxsumdiv.errors import DegenerateVectorError, InvalidInputError, LetorParseError


def test_synthetic_ranges_and_metric():
    inst = gen_synthetic(40, 0.2, 1)
    off = inst.dist[~np.eye(40, dtype=bool)]
    assert off.min() >= 1 and off.max() <= 2
    assert inst.weights.min() >= 0 and inst.weights.max() <= 1
    assert validate_metric(inst.dist).ok
    assert inst.lam == 0.2


def test_synthetic_is_deterministic():
    a, b = gen_synthetic(30, 0.2, [7, 3]), gen_synthetic(30, 0.2, [7, 3])
    assert a.dist.tobytes() == b.dist.tobytes()
    assert a.weights.tobytes() == b.weights.tobytes()
    assert gen_synthetic(30, 0.2, 8).dist.tobytes() != a.dist.tobytes()


def test_synthetic_rejects_tiny_n():
    with pytest.raises(InvalidInputError):
        gen_synthetic(1)


def test_parse_empty_text():
    assert parse_letor_text("") == {}
    assert parse_letor_text("\n# just a comment\n\n") == {}


def test_parse_single_line():
    groups = parse_letor_text("2 qid:10 1:0.5 2:0.1\n")
    (doc,) = groups["10"]
    assert doc == DocumentRecord("10", 2, (0.5, 0.1), "")


def test_parse_sparse_features_and_comment():
    groups = parse_letor_text("0 qid:1 3:1.5 # docid = X1\n1 qid:1 1:2\n")
    assert [d.features for d in groups["1"]] == [(0.0, 0.0, 1.5), (2.0, 0.0, 0.0)]
    assert groups["1"][0].comment == "docid = X1"


def test_parse_groups_by_query_in_file_order():
    text = "1 qid:b 1:1\n0 qid:a 1:2\n2 qid:b 1:3\n"
    groups = parse_letor_text(text)
    assert list(groups) == ["b", "a"]
    assert [d.relevance for d in groups["b"]] == [1, 2]


def test_parse_reports_all_bad_lines():
    text = "1 qid:1 1:0.5\nfoo qid:1\n1 qid:1 2\n7 qid:1 1:1\n1 q:1\n1 qid:1 1:1 1:2\n"
    with pytest.raises(LetorParseError) as err:
        parse_letor_text(text)
    assert [line for line, _ in err.value.problems] == [2, 3, 4, 5, 6]
    assert "line 2" in str(err.value)


def test_sample_file_shape(letor_sample):
    groups = parse_letor(letor_sample)
    assert {q: len(v) for q, v in groups.items()} == {"10": 50, "11": 30}
    assert all(len(d.features) == 46 for v in groups.values() for d in v)


def test_format_parse_roundtrip(letor_sample):
    groups = parse_letor(letor_sample)
    docs = [d for v in groups.values() for d in v]
    again = parse_letor_text(format_letor(docs))
    assert [d for v in again.values() for d in v] == docs


def test_format_empty():
    assert format_letor([]) == ""


def test_cosine_identical_and_orthogonal():
    X = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 3.0]])
    d = cosine_distances(X)
    assert d[0, 1] == 0.0
    assert d[0, 2] == pytest.approx(1.0)
    a = cosine_distances(X, "angular")
    assert a[0, 1] == 0.0 and a[0, 2] == pytest.approx(0.5)


def test_cosine_opposite_vectors():
    X = np.array([[1.0, 1.0], [-1.0, -1.0]])
    assert cosine_distances(X)[0, 1] == pytest.approx(2.0)
    assert cosine_distances(X, "angular")[0, 1] == pytest.approx(1.0)


def test_cosine_matches_direct_formula(rng):
    X = rng.normal(size=(12, 5))
    U = X / np.linalg.norm(X, axis=1, keepdims=True)
    cos = np.clip(U @ U.T, -1, 1)
    off = ~np.eye(12, dtype=bool)
    np.testing.assert_allclose(cosine_distances(X)[off], (1 - cos)[off], atol=1e-12)
    np.testing.assert_allclose(cosine_distances(X, "angular")[off], (np.arccos(cos) / np.pi)[off], atol=1e-7)


def test_angular_is_metric(rng):
    for _ in range(20):
        X = rng.normal(size=(int(rng.integers(3, 25)), int(rng.integers(2, 8))))
        assert validate_metric(cosine_distances(X, "angular")).ok


def test_one_minus_cosine_can_break_triangle():
    X = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    assert validate_metric(cosine_distances(X)).triangle_violations


def test_zero_norm_is_named():
    with pytest.raises(DegenerateVectorError, match="doc-b"):
        cosine_distances(np.array([[1.0, 2.0], [0.0, 0.0]]), names=["doc-a", "doc-b"])


def test_unknown_mode():
    with pytest.raises(InvalidInputError):
        cosine_distances(np.eye(2), "euclid")


def test_minmax_constant_column():
    X = np.array([[1.0, 5.0], [3.0, 5.0]])
    np.testing.assert_array_equal(minmax_normalize(X), [[0.0, 0.0], [1.0, 0.0]])


def test_build_instance_top_n_ties_keep_file_order():
    docs = [DocumentRecord("q", r, (1.0, float(i + 1)), f"d{i}") for i, r in enumerate([1, 2, 2, 0, 1])]
    inst = build_cosine_instance(docs, top_n=3)
    # relevance 2 docs (1, 2) first, then the first relevance-1 doc (0)
    assert inst.weights.tolist() == [2, 2, 1]
    assert inst.n == 3


def test_build_instance_from_sample(letor_sample, caplog):
    docs = parse_letor(letor_sample)["10"]
    with caplog.at_level(logging.WARNING):
        inst = build_cosine_instance(docs, top_n=50, lam=0.5, distance_mode="one_minus_cosine")
    assert inst.n == 50 and inst.lam == 0.5
    assert "triangle" in caplog.text
    ang = build_cosine_instance(docs, distance_mode="angular", normalize="minmax")
    assert validate_metric(ang.dist).ok


def test_build_instance_rejects_bad_options():
    docs = [DocumentRecord("q", 1, (1.0, 0.0)), DocumentRecord("q", 0, (0.0, 1.0))]
    with pytest.raises(InvalidInputError):
        build_cosine_instance(docs, top_n=1)
    with pytest.raises(InvalidInputError):
        build_cosine_instance(docs, normalize="zscore")
    with pytest.raises(InvalidInputError):
        build_cosine_instance(docs[:1])
