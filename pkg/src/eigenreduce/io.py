"""JSON file formats for graphs, vertex functions, pairs and contexts.

Output is byte-deterministic: keys sorted, floats written with 17
significant digits.  Graph references inside function, pair and context
files may be inline graph objects or paths relative to the referring file.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .errors import UsageError
from .graph import LabeledGraph, VertexMap, format_label, induced_subgraph, parse_label
from .reduction import ReductionContext, SpecialPair
from .spectral import VertexFunction


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialize with sorted keys and ``%.17g`` floats."""
    return _encode(obj, indent, 0) + "\n"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(int(obj))
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite float {obj}")
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}"
                 for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in obj) + "]"
        items = [pad + _encode(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise UsageError(f"{where}: missing field {key!r}")
    return doc[key]


def _int_list(value, key: str, where: str) -> list[int]:
    if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise UsageError(f"{where}: {key!r} must be a list of integers")
    return value


# --- graphs ---------------------------------------------------------------

def graph_to_dict(G: LabeledGraph) -> dict:
    return {"q": G.q, "n": G.n,
            "vertices": [format_label(v) for v in G.vertices],
            "edges": [[i, j] for i, j in G.edges]}


def graph_from_dict(doc: Any, where: str = "graph") -> LabeledGraph:
    q, n = _field(doc, "q", where), _field(doc, "n", where)
    if not isinstance(q, int) or not isinstance(n, int):
        raise UsageError(f"{where}: q and n must be integers")
    verts = _field(doc, "vertices", where)
    edges = _field(doc, "edges", where)
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise UsageError(f"{where}: vertices must be a list of digit strings")
    if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(i, int) for i in e)
            for e in edges):
        raise UsageError(f"{where}: edges must be a list of [i, j] pairs")
    labels = tuple(parse_label(v, q) for v in verts)
    return LabeledGraph(q, n, labels, tuple(tuple(e) for e in edges))


def write_graph(path: str | Path, G: LabeledGraph) -> None:
    write_json(path, graph_to_dict(G))


def read_graph(path: str | Path) -> LabeledGraph:
    return graph_from_dict(read_json(path), str(path))


def resolve_graph(ref: Any, base: Path, where: str) -> LabeledGraph:
    if isinstance(ref, dict):
        return graph_from_dict(ref, where)
    if isinstance(ref, str):
        path = Path(ref)
        return read_graph(path if path.is_absolute() else base / path)
    raise UsageError(f"{where}: graph must be an object or a path")


# --- vertex functions -----------------------------------------------------

def function_to_dict(f: VertexFunction, graph_ref: Any = None) -> dict:
    ref = graph_to_dict(f.graph) if graph_ref is None else graph_ref
    return {"graph": ref, "values": [float(v) for v in f.values]}


def read_function(path: str | Path) -> VertexFunction:
    path = Path(path)
    doc = read_json(path)
    G = resolve_graph(_field(doc, "graph", str(path)), path.parent, str(path))
    values = _field(doc, "values", str(path))
    if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        raise UsageError(f"{path}: values must be a list of numbers")
    return VertexFunction(G, [float(v) for v in values])


def function_to_csv(f: VertexFunction) -> str:
    lines = ["id,label,value"]
    for i, (label, v) in enumerate(zip(f.graph.vertices, f.values)):
        lines.append(f"{i},{format_label(label)},{format(float(v), '.17g')}")
    return "\n".join(lines) + "\n"


# --- pairs and contexts ---------------------------------------------------

def write_context(path: str | Path, ctx: ReductionContext) -> tuple[Path, Path]:
    """Write a context file plus its two graph files next to it.

    The graphs go to ``<stem>.graph.json`` and ``<stem>.g0.json``; the
    context refers to them by relative path.  ``phi1[a]`` is the G0 id of
    the ``a``-th vertex of V1 in id order, likewise ``phi2``.
    """
    path = Path(path)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    g_path = path.with_name(f"{stem}.graph.json")
    g0_path = path.with_name(f"{stem}.g0.json")
    write_graph(g_path, ctx.graph)
    write_graph(g0_path, ctx.G0)
    pair = ctx.pair
    write_json(path, {
        "graph": g_path.name, "phi": list(pair.phi.image),
        "V1": list(pair.V1), "V2": list(pair.V2), "V3": list(pair.V3),
        "G0": g0_path.name, "phi1": list(ctx.phi1.image), "phi2": list(ctx.phi2.image),
    })
    return g_path, g0_path


def read_pair_or_context(path: str | Path) -> SpecialPair | ReductionContext:
    """Load a pair file, or a full context when ``G0`` is present."""
    path = Path(path)
    where = str(path)
    doc = read_json(path)
    G = resolve_graph(_field(doc, "graph", where), path.parent, where)
    phi = _int_list(_field(doc, "phi", where), "phi", where)
    parts = tuple(_int_list(_field(doc, k, where), k, where) for k in ("V1", "V2", "V3"))
    pair = SpecialPair(G, VertexMap(G, G, tuple(phi)), parts)
    if "G0" not in doc:
        return pair
    G0 = resolve_graph(doc["G0"], path.parent, where)
    phi1 = _int_list(_field(doc, "phi1", where), "phi1", where)
    phi2 = _int_list(_field(doc, "phi2", where), "phi2", where)
    sub1, _ = induced_subgraph(G, pair.V1)
    sub2, _ = induced_subgraph(G, pair.V2)
    return ReductionContext(pair, G0, VertexMap(sub1, G0, tuple(phi1)),
                            VertexMap(sub2, G0, tuple(phi2)))


def read_context(path: str | Path) -> ReductionContext:
    obj = read_pair_or_context(path)
    if not isinstance(obj, ReductionContext):
        raise UsageError(f"{path}: context file needs G0, phi1 and phi2")
    return obj
