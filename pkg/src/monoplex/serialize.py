"""JSON encodings for hypergraphs, graphs, multiplexes, and discrete laws.

Every object carries a "kind" tag so files are self-describing. Rational
masses are encoded as "num/den" strings to keep them exact across a
round-trip; floats stay floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from monoplex.core import (
    Multiplex,
    UniformHypergraph,
    ValidationError,
    WeightedUniformHypergraph,
    new_hypergraph,
    new_multiplex,
    new_weighted_hypergraph,
)
from monoplex.families import SimpleGraph, new_simple_graph
from monoplex.laws import DiscreteLaw, law_from_pmf


def _require(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def hypergraph_to_obj(H: UniformHypergraph) -> dict:
    return {
        "kind": "uniform_hypergraph",
        "uniformity": H.uniformity,
        "num_vertices": H.num_vertices,
        "edges": [list(e) for e in H.edges],
    }


def hypergraph_from_obj(obj: dict, where: str = "hypergraph") -> UniformHypergraph:
    return new_hypergraph(
        _require(obj, "uniformity", where),
        _require(obj, "num_vertices", where),
        _require(obj, "edges", where),
    )


def multiplex_to_obj(M: Multiplex) -> dict:
    return {
        "kind": "multiplex",
        "num_vertices": M.num_vertices,
        "layers": [hypergraph_to_obj(layer) for layer in M.layers],
    }


def multiplex_from_obj(obj: dict, where: str = "multiplex") -> Multiplex:
    layers = _require(obj, "layers", where)
    if not isinstance(layers, list):
        raise ValidationError(f"{where}.layers: expected a list")
    return new_multiplex(
        hypergraph_from_obj(layer, f"{where}.layers[{i}]") for i, layer in enumerate(layers)
    )


def weighted_to_obj(WH: WeightedUniformHypergraph) -> dict:
    return {
        "kind": "weighted_hypergraph",
        "uniformity": WH.base.uniformity,
        "num_vertices": WH.base.num_vertices,
        "edges": [list(e) for e in WH.base.edges],
        "weights": list(WH.weights),
        "weight_bound": WH.weight_bound,
    }


def weighted_from_obj(obj: dict, where: str = "weighted_hypergraph") -> WeightedUniformHypergraph:
    return new_weighted_hypergraph(
        _require(obj, "uniformity", where),
        _require(obj, "num_vertices", where),
        _require(obj, "edges", where),
        _require(obj, "weights", where),
        obj.get("weight_bound"),
    )


def graph_to_obj(G: SimpleGraph) -> dict:
    return {
        "kind": "simple_graph",
        "num_vertices": G.num_vertices,
        "edges": [list(e) for e in G.edges],
    }


def graph_from_obj(obj: dict, where: str = "graph") -> SimpleGraph:
    return new_simple_graph(
        _require(obj, "num_vertices", where), _require(obj, "edges", where)
    )


_READERS = {
    "uniform_hypergraph": hypergraph_from_obj,
    "multiplex": multiplex_from_obj,
    "weighted_hypergraph": weighted_from_obj,
    "simple_graph": graph_from_obj,
}


def structure_from_obj(obj: Any, where: str = "input"):
    kind = _require(obj, "kind", where)
    reader = _READERS.get(kind)
    if reader is None:
        known = ", ".join(sorted(_READERS))
        raise ValidationError(f"{where}.kind: unknown kind {kind!r} (expected one of {known})")
    return reader(obj, where)


def _mass_to_obj(p) -> Any:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    if isinstance(p, int):
        return f"{p}/1"
    return float(p)


def _mass_from_obj(p: Any, where: str):
    if isinstance(p, str):
        try:
            return Fraction(p)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{where}: bad rational mass {p!r}") from exc
    if isinstance(p, bool) or not isinstance(p, (int, float)):
        raise ValidationError(f"{where}: bad mass {p!r}")
    return float(p)


def law_to_obj(law: DiscreteLaw) -> dict:
    return {
        "kind": "discrete_law",
        "dimension": law.dimension,
        "points": [
            {"value": list(x), "mass": _mass_to_obj(law.pmf[x])} for x in law.support
        ],
        "tail_mass": _mass_to_obj(law.tail_mass),
    }


def law_from_obj(obj: dict, where: str = "law") -> DiscreteLaw:
    d = _require(obj, "dimension", where)
    points = _require(obj, "points", where)
    pmf = {}
    for i, pt in enumerate(points):
        value = _require(pt, "value", f"{where}.points[{i}]")
        mass = _mass_from_obj(_require(pt, "mass", f"{where}.points[{i}]"), f"{where}.points[{i}].mass")
        key = tuple(int(x) for x in value)
        if len(key) != d:
            raise ValidationError(f"{where}.points[{i}]: value length {len(key)} != dimension {d}")
        if key in pmf:
            raise ValidationError(f"{where}.points[{i}]: duplicate value {key}")
        pmf[key] = mass
    tail = _mass_from_obj(obj.get("tail_mass", 0.0), f"{where}.tail_mass")
    return law_from_pmf(d, pmf, tail)


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> Any:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"{path}: no such file")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def load_structure(path: str | Path):
    """Read any of the structure formats, dispatching on the "kind" tag."""
    return structure_from_obj(read_json(path), str(path))
