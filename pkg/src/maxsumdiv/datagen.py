"""Synthetic instances and ranked-document (LETOR-style) ingestion.

Random numbers come from NumPy's PCG64 generator (``numpy.random.default_rng``),
whose stream is fixed across platforms for a given seed.

Ranked-document grammar, one document per line::

    line     := relevance WS "qid:" qid (WS index ":" value)* [WS? "#" comment]
    relevance:= integer in 0..5
    index    := positive integer, unique within the line
    value    := float

Blank and comment-only lines are skipped.  Feature vectors are densified to the largest index
seen in the file; missing indices read as 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateVectorError, InvalidInputError, LetorParseError
from .model import Instance, ModularQuality, validate_metric

log = logging.getLogger(__name__)


def gen_synthetic(n: int, lam: float = 0.2, seed: int = 0) -> Instance:
    """Weights iid U[0,1], distances iid U[1,2]; always a metric since 2 <= 1 + 1."""
    if n < 2:
        raise InvalidInputError("n must be at least 2")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.0, 1.0, n)
    rows, cols = np.triu_indices(n, 1)
    dist = np.zeros((n, n))
    dist[rows, cols] = rng.uniform(1.0, 2.0, len(rows))
    dist[cols, rows] = dist[rows, cols]
    return Instance(dist, ModularQuality(weights), lam)


@dataclass(frozen=True)
class DocumentRecord:
    query_id: str
    relevance: int
    features: tuple
    comment: str = ""


def _parse_line(line: str):
    body, _, comment = line.partition("#")
    tokens = body.split()
    if len(tokens) < 2:
        raise ValueError("expected a relevance label and a qid token")
    rel = int(tokens[0])
    if not 0 <= rel <= 5:
        raise ValueError(f"relevance {rel} outside 0..5")
    if not tokens[1].startswith("qid:") or len(tokens[1]) == 4:
        raise ValueError(f"expected qid:<id>, got {tokens[1]!r}")
    feats = {}
    for tok in tokens[2:]:
        idx, sep, val = tok.partition(":")
        if not sep:
            raise ValueError(f"feature token {tok!r} lacks ':'")
        i = int(idx)
        if i < 1 or i in feats:
            raise ValueError(f"bad or repeated feature index {i}")
        feats[i] = float(val)
    return rel, tokens[1][4:], feats, comment.strip()


def parse_letor_text(text: str) -> dict[str, list[DocumentRecord]]:
    parsed, problems = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.partition("#")[0].strip():
            continue
        try:
            parsed.append(_parse_line(line))
        except ValueError as exc:
            problems.append((lineno, str(exc)))
    if problems:
        raise LetorParseError(problems)
    width = max((max(f) for _, _, f, _ in parsed if f), default=0)
    out: dict[str, list[DocumentRecord]] = {}
    for rel, qid, feats, comment in parsed:
        vec = tuple(feats.get(i, 0.0) for i in range(1, width + 1))
        out.setdefault(qid, []).append(DocumentRecord(qid, rel, vec, comment))
    return out


def parse_letor(path) -> dict[str, list[DocumentRecord]]:
    """Read a ranked-document file; records are grouped by query id in file order."""
    return parse_letor_text(Path(path).read_text())


def format_letor(records) -> str:
    lines = []
    for r in records:
        feats = " ".join(f"{i}:{v!r}" for i, v in enumerate(r.features, start=1))
        line = f"{r.relevance} qid:{r.query_id}" + (f" {feats}" if feats else "")
        if r.comment:
            line += f" # {r.comment}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def minmax_normalize(X: np.ndarray) -> np.ndarray:
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return (X - lo) / span


def cosine_distances(X: np.ndarray, mode: str = "one_minus_cosine", names=None) -> np.ndarray:
    """Pairwise ``1 - cos`` or normalized angle ``arccos(cos) / pi``.

    Both are computed from unit vectors via ``|u - v|`` and ``|u + v|``,
    which is exact for identical vectors and stable for nearly parallel ones.
    """
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1)
    for i in np.nonzero(norms == 0)[0]:
        name = names[i] if names is not None else f"row {i}"
        raise DegenerateVectorError(f"zero-norm feature vector for document {name}")
    U = X / norms[:, None]
    diff = np.sqrt(((U[:, None, :] - U[None, :, :]) ** 2).sum(axis=2))
    if mode == "one_minus_cosine":
        d = np.clip(0.5 * diff**2, 0.0, 2.0)
    elif mode == "angular":
        summ = np.sqrt(((U[:, None, :] + U[None, :, :]) ** 2).sum(axis=2))
        d = np.clip(2.0 * np.arctan2(diff, summ) / np.pi, 0.0, 1.0)
    else:
        raise InvalidInputError(f"unknown distance mode {mode!r}")
    d = np.triu(d, 1)
    return d + d.T


def build_cosine_instance(docs, top_n: int | None = None, lam: float = 0.2,
                          distance_mode: str = "one_minus_cosine", normalize: str = "none") -> Instance:
    """Instance over the ``top_n`` most relevant documents of one query.

    Quality is the sum of relevance labels.  Ties in relevance keep file
    order.  Triangle violations are logged, not raised.
    """
    docs = list(docs)
    if len(docs) < 2:
        raise InvalidInputError("need at least two documents")
    ranked = sorted(range(len(docs)), key=lambda i: -docs[i].relevance)
    if top_n is not None:
        if top_n < 2:
            raise InvalidInputError("top_n must be at least 2")
        ranked = ranked[:top_n]
    chosen = [docs[i] for i in ranked]
    X = np.array([d.features for d in chosen], dtype=np.float64)
    if normalize == "minmax":
        X = minmax_normalize(X)
    elif normalize != "none":
        raise InvalidInputError(f"unknown normalization {normalize!r}")
    names = [d.comment or f"{d.query_id}#{i}" for d, i in zip(chosen, ranked)]
    dist = cosine_distances(X, distance_mode, names)
    inst = Instance(dist, ModularQuality([d.relevance for d in chosen]), lam)
    report = validate_metric(dist, limit=1000)
    if report.triangle_violations:
        log.warning("%s distances violate the triangle inequality (%d+ triples)",
                    distance_mode, len(report.triangle_violations))
    return inst
