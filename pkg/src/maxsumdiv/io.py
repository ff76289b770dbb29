"""Instance and solution documents (JSON text).

Instance document::

    {
      "format": "maxsumdiv-instance", "version": 1,
      "n": 4, "lambda": 0.2,
      "quality": {"kind": "modular", "weights": [w0, w1, ...]}
               | {"kind": "coverage", "element_weights": [...], "items": [[e, ...], ...]},
      "dist": [d(1,0), d(2,0), d(2,1), d(3,0), ...],   # strict lower triangle, row by row
      "matroid": null | {"kind": "uniform", "p": 3}
                      | {"kind": "partition", "blocks": [...], "caps": [1, null, ...]}
                      | {"kind": "transversal", "collection": [[...], ...]}
    }

Floats are written with ``repr`` precision, so reading a written file and
writing it again reproduces the same bytes.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .matroids import Matroid, matroid_from_dict, matroid_to_dict
from .model import CoverageQuality, Instance, ModularQuality, Solution, objective, set_distance

FORMAT = "maxsumdiv-instance"


def quality_to_dict(q) -> dict:
    if isinstance(q, ModularQuality):
        return {"kind": "modular", "weights": q.weights.tolist()}
    if isinstance(q, CoverageQuality):
        return {
            "kind": "coverage",
            "element_weights": q.element_weights.tolist(),
            "items": [list(els) for els in q.item_elements],
        }
    raise InvalidInputError(f"cannot serialize quality of kind {q.kind!r}")


def quality_from_dict(doc: dict):
    kind = doc.get("kind")
    if kind == "modular":
        return ModularQuality(doc["weights"])
    if kind == "coverage":
        return CoverageQuality(doc["element_weights"], doc["items"])
    raise InvalidInputError(f"unknown quality kind {kind!r}")


def instance_to_dict(inst: Instance, matroid: Matroid | None = None) -> dict:
    rows, cols = np.tril_indices(inst.n, -1)
    return {
        "format": FORMAT,
        "version": 1,
        "n": inst.n,
        "lambda": inst.lam,
        "quality": quality_to_dict(inst.quality),
        "dist": inst.dist[rows, cols].tolist(),
        "matroid": matroid_to_dict(matroid) if matroid is not None else None,
    }


def instance_from_dict(doc: dict) -> tuple[Instance, Matroid | None]:
    if doc.get("format") != FORMAT:
        raise InvalidInputError(f"not a {FORMAT} document")
    n = int(doc["n"])
    tri = np.asarray(doc["dist"], dtype=np.float64)
    if tri.shape != (n * (n - 1) // 2,):
        raise InvalidInputError(f"expected {n * (n - 1) // 2} lower-triangular distances, got {tri.size}")
    dist = np.zeros((n, n))
    rows, cols = np.tril_indices(n, -1)
    dist[rows, cols] = tri
    dist[cols, rows] = tri
    inst = Instance(dist, quality_from_dict(doc["quality"]), doc["lambda"])
    m = doc.get("matroid")
    return inst, (matroid_from_dict(n, m) if m else None)


def dumps_instance(inst: Instance, matroid: Matroid | None = None) -> str:
    return json.dumps(instance_to_dict(inst, matroid)) + "\n"


def loads_instance(text: str) -> tuple[Instance, Matroid | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"instance document is not valid JSON: {exc}") from exc
    return instance_from_dict(doc)


def save_instance(path, inst: Instance, matroid: Matroid | None = None) -> None:
    Path(path).write_text(dumps_instance(inst, matroid))


def load_instance(path) -> tuple[Instance, Matroid | None]:
    return loads_instance(Path(path).read_text())


def solution_to_dict(inst: Instance, sol: Solution) -> dict:
    """``{algorithm, config, selected, objective, f_part, d_part, wall_time_ms}``."""
    f_part = inst.quality.value(sol.selected)
    d_part = set_distance(inst, sol.selected)
    doc = {
        "algorithm": sol.info.get("algorithm"),
        "config": sol.info.get("config"),
        "selected": [int(u) for u in sol.selected],
        "objective": objective(inst, sol.selected),
        "f_part": f_part,
        "d_part": d_part,
        "wall_time_ms": 1000.0 * sol.info.get("solver_seconds", 0.0),
    }
    if "locally_optimal" in sol.info:
        doc["locally_optimal"] = sol.info["locally_optimal"]
    return doc
